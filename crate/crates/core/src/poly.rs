//! Sparse multivariate polynomials over arbitrary-precision rationals.
//!
//! Every coefficient object in the crate is a [`Poly`] in the six variables
//! `x, z, a0, a1, a2, a3`. Terms live in a `BTreeMap` keyed by [`Monomial`],
//! whose `Ord` is graded lexicographic with `x > z > a0 > a1 > a2 > a3`, so two
//! polynomials are equal exactly when their term maps are equal.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub const NVARS: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X,
    Z,
    A0,
    A1,
    A2,
    A3,
}

impl Var {
    pub const ALL: [Var; NVARS] = [Var::X, Var::Z, Var::A0, Var::A1, Var::A2, Var::A3];
    pub const PARAMS: [Var; 4] = [Var::A0, Var::A1, Var::A2, Var::A3];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::Z => "z",
            Var::A0 => "a0",
            Var::A1 => "a1",
            Var::A2 => "a2",
            Var::A3 => "a3",
        }
    }

    pub fn is_parameter(self) -> bool {
        !matches!(self, Var::X | Var::Z)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Var {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Var::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown variable `{s}`")))
    }
}

/// Exponent vector `(e_x, e_z, e_a0, e_a1, e_a2, e_a3)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial(pub [u16; NVARS]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; NVARS]);

    pub fn var(v: Var, e: u16) -> Self {
        let mut m = Self::ONE;
        m.0[v.index()] = e;
        m
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| u32::from(e)).sum()
    }

    pub fn exp(&self, v: Var) -> u16 {
        self.0[v.index()]
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = [0u16; NVARS];
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.0[i]
                .checked_add(other.0[i])
                .expect("monomial exponent overflow");
        }
        Monomial(out)
    }

    /// `self / other`, if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = [0u16; NVARS];
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.0[i].checked_sub(other.0[i])?;
        }
        Some(Monomial(out))
    }

    fn with_exp(mut self, v: Var, e: u16) -> Self {
        self.0[v.index()] = e;
        self
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rat>,
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `"num/den"` with both parts as decimal strings.
pub fn format_rat(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Accepts `"num/den"` or a bare integer.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(n, d))
        }
        None => Ok(Rat::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::term(Monomial::ONE, c)
    }

    pub fn int(n: i64) -> Self {
        Self::constant(rat_int(n))
    }

    pub fn var(v: Var) -> Self {
        Self::term(Monomial::var(v, 1), Rat::one())
    }

    pub fn x() -> Self {
        Self::var(Var::X)
    }

    pub fn z() -> Self {
        Self::var(Var::Z)
    }

    pub fn term(m: Monomial, c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    /// Builds a polynomial from arbitrary (possibly repeated, possibly zero) terms.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rat)>>(iter: I) -> Self {
        let mut acc: HashMap<Monomial, Rat> = HashMap::new();
        for (m, c) in iter {
            *acc.entry(m).or_insert_with(Rat::zero) += c;
        }
        Self::from_accumulator(acc)
    }

    fn from_accumulator(acc: HashMap<Monomial, Rat>) -> Self {
        Poly {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| *m == Monomial::ONE)
    }

    /// The value of a constant polynomial (zero included).
    pub fn as_constant(&self) -> Option<Rat> {
        if self.is_zero() {
            Some(Rat::zero())
        } else if self.is_constant() {
            self.terms.get(&Monomial::ONE).cloned()
        } else {
            None
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rat)> + '_ {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn leading(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.last_key_value()
    }

    pub fn degree(&self, v: Var) -> Option<u32> {
        self.terms.keys().map(|m| u32::from(m.exp(v))).max()
    }

    /// Degree in `v`, with the zero polynomial treated as degree 0.
    pub fn deg(&self, v: Var) -> u32 {
        self.degree(v).unwrap_or(0)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn is_free_of(&self, v: Var) -> bool {
        self.terms.keys().all(|m| m.exp(v) == 0)
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(t, a)| (t.mul(m), a * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut result = Poly::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Formal partial derivative in `x` or `z`.
    pub fn diff(&self, v: Var) -> Result<Poly> {
        if v.is_parameter() {
            return Err(Error::ParameterDerivative(v));
        }
        Ok(self.diff_unchecked(v))
    }

    fn diff_unchecked(&self, v: Var) -> Poly {
        let i = v.index();
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.0[i] > 0)
                .map(|(m, c)| {
                    let e = m.0[i];
                    (m.with_exp(v, e - 1), c * rat_int(i64::from(e)))
                })
                .collect(),
        }
    }

    pub fn dx(&self) -> Poly {
        self.diff_unchecked(Var::X)
    }

    pub fn dz(&self) -> Poly {
        self.diff_unchecked(Var::Z)
    }

    /// k-th derivative in x.
    pub fn dx_n(&self, k: u32) -> Poly {
        (0..k).fold(self.clone(), |p, _| p.dx())
    }

    /// Exact quotient `self / d`, or [`Error::NotDivisible`].
    ///
    /// Division by a single divisor under a monomial order: when `d | self` the
    /// leading term of every intermediate remainder is divisible by `LT(d)`, so
    /// the first non-divisible leading term certifies a nonzero remainder.
    pub fn exact_div(&self, d: &Poly) -> Result<Poly> {
        let (lm, lc) = d.leading().ok_or(Error::DivisionByZero)?;
        let (lm, lc) = (*lm, lc.clone());
        if d.len() == 1 {
            let inv = lc.recip();
            let mut terms = BTreeMap::new();
            for (m, c) in &self.terms {
                let q = m.div(&lm).ok_or(Error::NotDivisible)?;
                terms.insert(q, c * &inv);
            }
            return Ok(Poly { terms });
        }
        let mut rem = self.terms.clone();
        let mut quot = BTreeMap::new();
        while let Some((m, c)) = rem.last_key_value() {
            let qm = m.div(&lm).ok_or(Error::NotDivisible)?;
            let qc = c / &lc;
            for (t, ct) in &d.terms {
                let key = t.mul(&qm);
                let delta = ct * &qc;
                match rem.get_mut(&key) {
                    Some(v) => {
                        *v -= delta;
                        if v.is_zero() {
                            rem.remove(&key);
                        }
                    }
                    None => {
                        rem.insert(key, -delta);
                    }
                }
            }
            quot.insert(qm, qc);
        }
        Ok(Poly { terms: quot })
    }

    /// Substitutes rational values for the bound variables.
    pub fn eval(&self, bindings: &Bindings) -> Poly {
        if bindings.is_empty() {
            return self.clone();
        }
        let mut pow_cache: HashMap<(Var, u16), Rat> = HashMap::new();
        let mut acc: HashMap<Monomial, Rat> = HashMap::new();
        for (m, c) in &self.terms {
            let mut c = c.clone();
            let mut m = *m;
            for (&v, val) in bindings.iter() {
                let e = m.exp(v);
                if e > 0 {
                    let p = pow_cache
                        .entry((v, e))
                        .or_insert_with(|| num_traits::pow(val.clone(), usize::from(e)));
                    c *= &*p;
                    m = m.with_exp(v, 0);
                }
            }
            if c.is_zero() {
                continue;
            }
            *acc.entry(m).or_insert_with(Rat::zero) += c;
        }
        Self::from_accumulator(acc)
    }

    /// Coefficients of `self` viewed as a univariate polynomial in `v`;
    /// entry `i` multiplies `v^i` and is free of `v`.
    pub fn coeffs_in(&self, v: Var) -> Vec<Poly> {
        let n = self.degree(v).map_or(0, |d| d as usize + 1);
        let mut out = vec![BTreeMap::new(); n];
        for (m, c) in &self.terms {
            let e = usize::from(m.exp(v));
            out[e].insert(m.with_exp(v, 0), c.clone());
        }
        out.into_iter().map(|terms| Poly { terms }).collect()
    }

    /// Inverse of [`Poly::coeffs_in`].
    pub fn from_coeffs_in(v: Var, coeffs: &[Poly]) -> Poly {
        let mut terms = BTreeMap::new();
        for (i, c) in coeffs.iter().enumerate() {
            let e = u16::try_from(i).expect("degree overflow");
            for (m, a) in &c.terms {
                let shifted = m.mul(&Monomial::var(v, e));
                terms.insert(shifted, a.clone());
            }
        }
        Poly { terms }
    }

    /// `self(v := value)` for a polynomial value.
    pub fn substitute(&self, v: Var, value: &Poly) -> Poly {
        let coeffs = self.coeffs_in(v);
        let mut acc = Poly::zero();
        for c in coeffs.iter().rev() {
            acc = &(&acc * value) + c;
        }
        acc
    }

    /// Least common multiple of all coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        use num_integer::Integer;
        self.terms
            .values()
            .fold(BigInt::one(), |l, c| l.lcm(c.denom()))
    }

    fn add_assign_ref(&mut self, rhs: &Poly, sign: bool) {
        for (m, c) in &rhs.terms {
            match self.terms.get_mut(m) {
                Some(v) => {
                    if sign {
                        *v += c;
                    } else {
                        *v -= c;
                    }
                    if v.is_zero() {
                        self.terms.remove(m);
                    }
                }
                None => {
                    self.terms.insert(*m, if sign { c.clone() } else { -c.clone() });
                }
            }
        }
    }

    fn mul_ref(&self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        if let Some(c) = self.as_constant() {
            return rhs.scale(&c);
        }
        if let Some(c) = rhs.as_constant() {
            return self.scale(&c);
        }
        let mut acc: HashMap<Monomial, Rat> =
            HashMap::with_capacity(self.len().saturating_mul(rhs.len()).min(1 << 16));
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let prod = ca * cb;
                match acc.entry(ma.mul(mb)) {
                    std::collections::hash_map::Entry::Occupied(mut e) => *e.get_mut() += prod,
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(prod);
                    }
                }
            }
        }
        Self::from_accumulator(acc)
    }
}

/// Partial assignment of rational values to variables.
pub type Bindings = BTreeMap<Var, Rat>;

impl From<i64> for Poly {
    fn from(n: i64) -> Self {
        Poly::int(n)
    }
}

impl From<Rat> for Poly {
    fn from(c: Rat) -> Self {
        Poly::constant(c)
    }
}

impl From<Var> for Poly {
    fn from(v: Var) -> Self {
        Poly::var(v)
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        self.add_assign_ref(rhs, true);
    }
}

impl SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, rhs: &Poly) {
        self.add_assign_ref(rhs, false);
    }
}

impl AddAssign for Poly {
    fn add_assign(&mut self, rhs: Poly) {
        self.add_assign_ref(&rhs, true);
    }
}

impl SubAssign for Poly {
    fn sub_assign(&mut self, rhs: Poly) {
        self.add_assign_ref(&rhs, false);
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let (big, small) = if self.len() >= rhs.len() { (self, rhs) } else { (rhs, self) };
        let mut out = big.clone();
        out += small;
        out
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.mul_ref(rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(mut self) -> Poly {
        for c in self.terms.values_mut() {
            *c = -&*c;
        }
        self
    }
}

macro_rules! forward_owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                (&self).$method(rhs)
            }
        }
        impl $tr<Poly> for &Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || *m == Monomial::ONE {
                factors.push(abs.to_string());
            }
            for v in Var::ALL {
                match m.exp(v) {
                    0 => {}
                    1 => factors.push(v.name().to_string()),
                    e => factors.push(format!("{}^{}", v.name(), e)),
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    c: String,
    e: [u16; NVARS],
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    terms: Vec<TermJson>,
}

/// Serialized leading term first.
impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyJson {
            terms: self
                .terms
                .iter()
                .rev()
                .map(|(m, c)| TermJson {
                    c: format_rat(c),
                    e: m.0,
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = PolyJson::deserialize(d)?;
        let mut terms = Vec::with_capacity(raw.terms.len());
        for t in raw.terms {
            let c = parse_rat(&t.c).map_err(serde::de::Error::custom)?;
            terms.push((Monomial(t.e), c));
        }
        Ok(Poly::from_terms(terms))
    }
}
