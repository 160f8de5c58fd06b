//! Parameter bindings for the potential `a3 x³ + a2 x² + a1 x + a0`.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::poly::{format_rat, parse_rat, Bindings, Poly, Rat, Var};

/// Each of `a0..a3` is either a rational value or left symbolic.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Params {
    values: [Option<Rat>; 4],
}

impl Params {
    pub fn symbolic() -> Self {
        Self::default()
    }

    pub fn numeric(a0: Rat, a1: Rat, a2: Rat, a3: Rat) -> Result<Self> {
        Self::symbolic()
            .with(Var::A0, a0)?
            .with(Var::A1, a1)?
            .with(Var::A2, a2)?
            .with(Var::A3, a3)
    }

    /// `a1 = a2 = 0`, `a3 = 1`, `a0` symbolic.
    pub fn dixmier_slice() -> Self {
        Self::symbolic()
            .with(Var::A1, Rat::zero())
            .and_then(|p| p.with(Var::A2, Rat::zero()))
            .and_then(|p| p.with(Var::A3, Rat::from_integer(1.into())))
            .expect("valid slice")
    }

    pub fn with(mut self, v: Var, value: Rat) -> Result<Self> {
        let i = Self::slot(v)?;
        if v == Var::A3 && value.is_zero() {
            return Err(Error::Param("a3 must be nonzero".into()));
        }
        self.values[i] = Some(value);
        Ok(self)
    }

    pub fn with_symbolic(mut self, v: Var) -> Result<Self> {
        let i = Self::slot(v)?;
        self.values[i] = None;
        Ok(self)
    }

    fn slot(v: Var) -> Result<usize> {
        Var::PARAMS
            .iter()
            .position(|p| *p == v)
            .ok_or_else(|| Error::Param(format!("`{v}` is not a parameter")))
    }

    pub fn get(&self, v: Var) -> Option<&Rat> {
        Self::slot(v).ok().and_then(|i| self.values[i].as_ref())
    }

    pub fn is_fully_numeric(&self) -> bool {
        self.values.iter().all(Option::is_some)
    }

    pub fn bindings(&self) -> Bindings {
        Var::PARAMS
            .iter()
            .zip(&self.values)
            .filter_map(|(v, val)| val.clone().map(|r| (*v, r)))
            .collect()
    }

    /// The parameter as a polynomial: its value, or the variable itself.
    pub fn poly(&self, v: Var) -> Poly {
        match self.get(v) {
            Some(r) => Poly::constant(r.clone()),
            None => Poly::var(v),
        }
    }

    /// `V(x) = a3 x³ + a2 x² + a1 x + a0`.
    pub fn potential_v(&self) -> Poly {
        let x = Poly::x();
        &self.poly(Var::A3) * &x.pow(3)
            + &self.poly(Var::A2) * &x.pow(2)
            + &self.poly(Var::A1) * &x
            + self.poly(Var::A0)
    }

    /// `W(x) = g(g+1) a3 x`.
    pub fn potential_w(&self, genus: u32) -> Poly {
        let k = i64::from(genus) * (i64::from(genus) + 1);
        Poly::int(k) * &self.poly(Var::A3) * Poly::x()
    }
}

impl FromStr for Params {
    type Err = Error;

    /// `"a0=sym,a1=0,a2=1/2,a3=1"`; unlisted parameters stay symbolic.
    fn from_str(s: &str) -> Result<Self> {
        let mut p = Params::symbolic();
        for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (name, value) = item
                .split_once('=')
                .ok_or_else(|| Error::Param(format!("expected name=value, got `{item}`")))?;
            let var: Var = name.trim().parse().map_err(|_| Error::Param(format!("unknown parameter `{name}`")))?;
            let value = value.trim();
            p = if matches!(value, "sym" | "symbolic") {
                p.with_symbolic(var)?
            } else {
                let r = parse_rat(value).map_err(|e| Error::Param(e.to_string()))?;
                p.with(var, r)?
            };
        }
        Ok(p)
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = Var::PARAMS
            .iter()
            .zip(&self.values)
            .map(|(v, val)| match val {
                Some(r) => format!("{v}={}", format_rat(r)),
                None => format!("{v}=sym"),
            })
            .collect();
        f.write_str(&parts.join(","))
    }
}

impl Serialize for Params {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, rat_int};

    #[test]
    fn parse_and_display() {
        let p: Params = "a0=sym, a1=0, a2=1/2, a3=1".parse().unwrap();
        assert_eq!(p.get(Var::A0), None);
        assert_eq!(p.get(Var::A2), Some(&rat(1, 2)));
        assert_eq!(p.to_string(), "a0=sym,a1=0/1,a2=1/2,a3=1/1");
        assert_eq!(p.to_string().parse::<Params>().unwrap(), p);
    }

    #[test]
    fn zero_a3_rejected() {
        assert!(matches!("a3=0".parse::<Params>(), Err(Error::Param(_))));
        assert!(Params::numeric(rat_int(1), rat_int(0), rat_int(0), rat_int(0)).is_err());
    }

    #[test]
    fn bad_input_rejected() {
        assert!("a4=1".parse::<Params>().is_err());
        assert!("x=1".parse::<Params>().is_err());
        assert!("a0".parse::<Params>().is_err());
        assert!("a0=1/0".parse::<Params>().is_err());
    }

    #[test]
    fn potentials_on_the_dixmier_slice() {
        let p = Params::dixmier_slice();
        assert_eq!(p.potential_v(), Poly::x().pow(3) + Poly::var(Var::A0));
        assert_eq!(p.potential_w(2), Poly::int(6) * Poly::x());
    }
}
