//! The first Weyl algebra: ordinary differential operators with polynomial
//! coefficients, kept in the normal form `Σ c_i(x) ∂^i` (coefficients on the left).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{rat_int, Bindings, Poly, Rat, Var};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "DiffOpJson")]
pub struct DiffOp {
    coeffs: Vec<Poly>,
}

#[derive(Deserialize)]
struct DiffOpJson {
    coeffs: Vec<Poly>,
}

impl TryFrom<DiffOpJson> for DiffOp {
    type Error = Error;
    fn try_from(raw: DiffOpJson) -> Result<Self> {
        DiffOp::from_coeffs(raw.coeffs)
    }
}

fn binomial_row(n: usize) -> Vec<Rat> {
    let mut row = vec![Rat::one()];
    for k in 1..=n {
        let prev = row[k - 1].clone();
        row.push(prev * rat_int((n + 1 - k) as i64) / rat_int(k as i64));
    }
    row
}

impl DiffOp {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::mul_by(Poly::one())
    }

    /// The derivation `∂ = d/dx`.
    pub fn d() -> Self {
        Self::from_coeffs_unchecked(vec![Poly::zero(), Poly::one()])
    }

    /// `∂^n`.
    pub fn d_pow(n: usize) -> Self {
        let mut coeffs = vec![Poly::zero(); n + 1];
        coeffs[n] = Poly::one();
        Self::from_coeffs_unchecked(coeffs)
    }

    /// Multiplication by a z-free polynomial. Panics if `c` depends on z.
    pub fn mul_by(c: Poly) -> Self {
        Self::from_coeffs(vec![c]).expect("multiplication operator must be z-free")
    }

    /// `c_i` multiplies `∂^i`. Every coefficient must be free of z.
    pub fn from_coeffs(coeffs: Vec<Poly>) -> Result<Self> {
        if let Some(bad) = coeffs.iter().find(|c| !c.is_free_of(Var::Z)) {
            return Err(Error::ZDependentCoefficient(bad.to_string()));
        }
        Ok(Self::from_coeffs_unchecked(coeffs))
    }

    fn from_coeffs_unchecked(mut coeffs: Vec<Poly>) -> Self {
        while coeffs.last().is_some_and(Poly::is_zero) {
            coeffs.pop();
        }
        DiffOp { coeffs }
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    /// Coefficient of `∂^i` (zero past the order).
    pub fn coeff(&self, i: usize) -> Poly {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn order(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> Option<&Poly> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff().is_some_and(|c| *c == Poly::one())
    }

    /// Largest term count among the coefficients.
    pub fn max_terms(&self) -> usize {
        self.coeffs.iter().map(Poly::len).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Rat) -> DiffOp {
        Self::from_coeffs_unchecked(self.coeffs.iter().map(|p| p.scale(c)).collect())
    }

    /// Left multiplication by a polynomial: `c ∘ self`.
    pub fn left_mul_poly(&self, c: &Poly) -> DiffOp {
        Self::from_coeffs_unchecked(self.coeffs.iter().map(|p| c * p).collect())
    }

    pub fn eval(&self, bindings: &Bindings) -> DiffOp {
        Self::from_coeffs_unchecked(self.coeffs.iter().map(|p| p.eval(bindings)).collect())
    }

    /// Composition `self ∘ rhs` via `∂^i ∘ f = Σ_k C(i,k) f^(k) ∂^(i-k)`.
    pub fn compose(&self, rhs: &DiffOp) -> DiffOp {
        if self.is_zero() || rhs.is_zero() {
            return DiffOp::zero();
        }
        let n = self.coeffs.len() - 1;
        let m = rhs.coeffs.len() - 1;
        // derivs[j][k] = (rhs_j)^(k)
        let derivs: Vec<Vec<Poly>> = rhs
            .coeffs
            .iter()
            .map(|c| {
                let mut ds = Vec::with_capacity(n + 1);
                let mut cur = c.clone();
                for _ in 0..=n {
                    let next = cur.dx();
                    ds.push(cur);
                    if next.is_zero() {
                        break;
                    }
                    cur = next;
                }
                ds
            })
            .collect();
        let mut out = vec![Poly::zero(); n + m + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let binom = binomial_row(i);
            for (k, b) in binom.iter().enumerate() {
                let scaled = a.scale(b);
                for (j, ds) in derivs.iter().enumerate() {
                    if let Some(dk) = ds.get(k) {
                        if !dk.is_zero() {
                            out[i - k + j] += &scaled * dk;
                        }
                    }
                }
            }
        }
        Self::from_coeffs_unchecked(out)
    }

    pub fn pow(&self, e: u32) -> DiffOp {
        let mut result = DiffOp::one();
        for _ in 0..e {
            result = result.compose(self);
        }
        result
    }

    /// `[self, rhs] = self∘rhs − rhs∘self`.
    pub fn commutator(&self, rhs: &DiffOp) -> DiffOp {
        &self.compose(rhs) - &rhs.compose(self)
    }

    /// `⟨self, rhs⟩ = self∘rhs + rhs∘self`.
    pub fn anticommutator(&self, rhs: &DiffOp) -> DiffOp {
        &self.compose(rhs) + &rhs.compose(self)
    }

    /// Formal adjoint `Σ (−1)^i ∂^i ∘ c_i`, returned in normal form.
    pub fn adjoint(&self) -> DiffOp {
        let mut out = vec![Poly::zero(); self.coeffs.len()];
        for (i, c) in self.coeffs.iter().enumerate() {
            let sign = if i % 2 == 0 { Rat::one() } else { -Rat::one() };
            let mut dk = c.clone();
            for (k, b) in binomial_row(i).iter().enumerate() {
                if dk.is_zero() {
                    break;
                }
                out[i - k] += dk.scale(&(b * &sign));
                dk = dk.dx();
            }
        }
        Self::from_coeffs_unchecked(out)
    }

    pub fn is_self_adjoint(&self) -> bool {
        self.adjoint() == *self
    }

    /// `Σ_j c_j ∘ L^j` with each `c_j` acting by left multiplication.
    pub fn poly_of_op(coeffs: &[Poly], l: &DiffOp) -> Result<DiffOp> {
        if let Some(bad) = coeffs.iter().find(|c| !c.is_free_of(Var::Z)) {
            return Err(Error::ZDependentCoefficient(bad.to_string()));
        }
        let mut acc = DiffOp::zero();
        for c in coeffs.iter().rev() {
            acc = &acc.compose(l) + &DiffOp::mul_by(c.clone());
        }
        Ok(acc)
    }

    /// Writes `self` as `Σ t_j L^j` with constant `t_j` (constants in x; they may
    /// involve parameters) by peeling leading terms. `None` if impossible.
    pub fn as_poly_in(&self, l: &DiffOp) -> Option<Vec<Poly>> {
        let lo = l.order()?;
        if lo == 0 || !l.is_monic() {
            return None;
        }
        let mut rem = self.clone();
        let mut out: Vec<Poly> = Vec::new();
        let mut powers = vec![DiffOp::one()];
        while let Some(ord) = rem.order() {
            if ord % lo != 0 {
                return None;
            }
            let lead = rem.leading_coeff().expect("nonzero").clone();
            if !lead.is_free_of(Var::X) {
                return None;
            }
            let j = ord / lo;
            while powers.len() <= j {
                let next = powers.last().expect("nonempty").compose(l);
                powers.push(next);
            }
            if out.len() <= j {
                out.resize(j + 1, Poly::zero());
            }
            out[j] += &lead;
            rem = &rem - &powers[j].left_mul_poly(&lead);
        }
        Some(out)
    }
}

impl Add<&DiffOp> for &DiffOp {
    type Output = DiffOp;
    fn add(self, rhs: &DiffOp) -> DiffOp {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect();
        DiffOp::from_coeffs_unchecked(coeffs)
    }
}

impl Sub<&DiffOp> for &DiffOp {
    type Output = DiffOp;
    fn sub(self, rhs: &DiffOp) -> DiffOp {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect();
        DiffOp::from_coeffs_unchecked(coeffs)
    }
}

impl Mul<&DiffOp> for &DiffOp {
    type Output = DiffOp;
    fn mul(self, rhs: &DiffOp) -> DiffOp {
        self.compose(rhs)
    }
}

impl Neg for &DiffOp {
    type Output = DiffOp;
    fn neg(self) -> DiffOp {
        DiffOp::from_coeffs_unchecked(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Add for DiffOp {
    type Output = DiffOp;
    fn add(self, rhs: DiffOp) -> DiffOp {
        &self + &rhs
    }
}

impl Sub for DiffOp {
    type Output = DiffOp;
    fn sub(self, rhs: DiffOp) -> DiffOp {
        &self - &rhs
    }
}

impl Mul for DiffOp {
    type Output = DiffOp;
    fn mul(self, rhs: DiffOp) -> DiffOp {
        self.compose(&rhs)
    }
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let dpart = match i {
                0 => String::new(),
                1 => "D".to_string(),
                _ => format!("D^{i}"),
            };
            match (c.as_constant(), i) {
                (Some(k), i) if k.is_one() && i > 0 => write!(f, "{dpart}")?,
                (_, 0) => write!(f, "({c})")?,
                _ => write!(f, "({c})*{dpart}")?,
            }
        }
        Ok(())
    }
}
