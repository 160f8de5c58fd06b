//! Truncated Laurent series in the local parameter `k = 1/√z` at the point at
//! infinity of the curve, with polynomial (x- and parameter-dependent)
//! coefficients.

use num_traits::Zero;
use serde::{Serialize, Serializer};

use super::CurveFun;
use crate::error::{Error, Result};
use crate::poly::{rat, Poly, Rat, Var};
use crate::qsolver::QPolynomial;
use crate::curve::SpectralCurve;
use crate::weyl::DiffOp;

/// Largest expansion order accepted by [`expand_at_infinity`].
pub const SERIES_BUDGET: i64 = 512;

/// Precision marker for series that are exact (finite Laurent polynomials).
const EXACT: i64 = i64::MAX / 4;

/// `Σ_{e ≥ start} c_e k^e + O(k^prec)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentSeries {
    start: i64,
    coeffs: Vec<Poly>,
    prec: i64,
}

impl LaurentSeries {
    pub fn zero(prec: i64) -> Self {
        LaurentSeries {
            start: 0,
            coeffs: Vec::new(),
            prec,
        }
    }

    /// Series with coefficient `coeffs[i]` at `k^(start+i)`, known below `prec`.
    pub fn new(start: i64, coeffs: Vec<Poly>, prec: i64) -> Self {
        LaurentSeries { start, coeffs, prec }.normalized()
    }

    /// A Laurent polynomial, exact to all orders.
    pub fn exact(start: i64, coeffs: Vec<Poly>) -> Self {
        Self::new(start, coeffs, EXACT)
    }

    fn normalized(mut self) -> Self {
        let keep = self.coeffs.len().min((self.prec - self.start).max(0) as usize);
        self.coeffs.truncate(keep);
        while self.coeffs.last().is_some_and(Poly::is_zero) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.start += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.start = 0;
        }
        self
    }

    /// Exponent of the `O(k^prec)` term.
    pub fn precision(&self) -> i64 {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec >= EXACT
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.start)
    }

    /// Coefficient of `k^e`; `None` when `e` is beyond the precision.
    pub fn coeff(&self, e: i64) -> Option<Poly> {
        if e >= self.prec {
            return None;
        }
        let i = e - self.start;
        Some(if i < 0 {
            Poly::zero()
        } else {
            self.coeffs.get(i as usize).cloned().unwrap_or_default()
        })
    }

    /// Replaces one coefficient (used for negative controls).
    pub fn with_coeff(&self, e: i64, c: Poly) -> Self {
        assert!(e < self.prec, "coefficient beyond precision");
        let lo = self.start.min(e);
        let hi = (self.start + self.coeffs.len() as i64).max(e + 1);
        let coeffs = (lo..hi)
            .map(|k| if k == e { c.clone() } else { self.coeff(k).expect("known") })
            .collect();
        Self::new(lo, coeffs, self.prec)
    }

    /// Known nonzero terms `(exponent, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Poly)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.start + i as i64, c))
    }

    fn val_or_prec(&self) -> i64 {
        self.valuation().unwrap_or(self.prec)
    }

    pub fn truncate(&self, prec: i64) -> Self {
        Self::new(self.start, self.coeffs.clone(), self.prec.min(prec))
    }

    pub fn add(&self, other: &Self) -> Self {
        let prec = self.prec.min(other.prec);
        let lo = self.start.min(other.start);
        let hi = (self.start + self.coeffs.len() as i64)
            .max(other.start + other.coeffs.len() as i64)
            .min(prec);
        let coeffs = (lo..hi.max(lo))
            .map(|e| self.coeff(e).unwrap_or_default() + other.coeff(e).unwrap_or_default())
            .collect();
        Self::new(lo, coeffs, prec)
    }

    pub fn neg(&self) -> Self {
        Self::new(self.start, self.coeffs.iter().map(|c| -c).collect(), self.prec)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self::new(self.start, self.coeffs.iter().map(|p| p.scale(c)).collect(), self.prec)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let prec = self
            .prec
            .saturating_add(other.val_or_prec())
            .min(other.prec.saturating_add(self.val_or_prec()))
            .min(EXACT);
        if self.is_zero() || other.is_zero() {
            return Self::zero(prec);
        }
        let start = self.start + other.start;
        let len = ((self.coeffs.len() + other.coeffs.len() - 1) as i64).min(prec - start);
        if len <= 0 {
            return Self::zero(prec);
        }
        let mut out = vec![Poly::zero(); len as usize];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let k = i + j;
                if k >= out.len() {
                    break;
                }
                if !b.is_zero() {
                    out[k] += a * b;
                }
            }
        }
        Self::new(start, out, prec)
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::exact(0, vec![Poly::one()]), |acc, _| acc.mul(self))
    }

    /// Reciprocal, to `rel` terms past the valuation. Requires a leading
    /// coefficient that is a nonzero rational constant.
    pub fn inverse(&self, rel: usize) -> Result<Self> {
        let v = self.valuation().ok_or(Error::DivisionByZero)?;
        let lead = self.coeffs[0]
            .as_constant()
            .filter(|c| !c.is_zero())
            .ok_or(Error::NotDivisible)?;
        let rel = rel.min((self.prec - v).max(0) as usize);
        let inv_lead = lead.recip();
        let mut h: Vec<Poly> = vec![Poly::constant(inv_lead.clone())];
        for n in 1..rel {
            let mut acc = Poly::zero();
            for i in 1..=n {
                if let Some(s) = self.coeffs.get(i) {
                    if !s.is_zero() {
                        acc += s * &h[n - i];
                    }
                }
            }
            h.push(acc.scale(&-inv_lead.clone()));
        }
        Ok(Self::new(-v, h, -v + rel as i64))
    }

    /// Square root of a series `1 + O(k)`, to `rel` terms.
    pub fn sqrt_one_plus(&self, rel: usize) -> Result<Self> {
        if self.valuation() != Some(0) || self.coeffs[0] != Poly::one() {
            return Err(Error::NotDivisible);
        }
        let rel = rel.min(self.prec.max(0) as usize);
        let half = rat(1, 2);
        let mut r: Vec<Poly> = vec![Poly::one()];
        for n in 1..rel {
            let mut acc = self.coeffs.get(n).cloned().unwrap_or_default();
            for i in 1..n {
                acc -= &r[i] * &r[n - i];
            }
            r.push(acc.scale(&half));
        }
        Ok(Self::new(0, r, rel as i64))
    }

    /// Multiplies by `k^e`.
    pub fn shift(&self, e: i64) -> Self {
        let prec = if self.is_exact() { EXACT } else { self.prec + e };
        Self::new(self.start + e, self.coeffs.clone(), prec)
    }
}

impl Serialize for LaurentSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Json<'a> {
            val: i64,
            #[serde(rename = "N")]
            n: i64,
            coeffs: &'a [Poly],
        }
        Json {
            val: self.start,
            n: self.prec,
            coeffs: &self.coeffs,
        }
        .serialize(s)
    }
}

/// `p(z)` with `z = k^{-2}`, exact.
fn z_poly_to_series(p: &Poly) -> LaurentSeries {
    let cs = p.coeffs_in(Var::Z);
    if cs.is_empty() {
        return LaurentSeries::exact(0, Vec::new());
    }
    let d = cs.len() - 1;
    let mut coeffs = vec![Poly::zero(); 2 * d + 1];
    for (j, c) in cs.into_iter().enumerate() {
        coeffs[2 * (d - j)] = c;
    }
    LaurentSeries::exact(-2 * d as i64, coeffs)
}

/// Expands `u` at infinity in `k = 1/√z`, returning all terms below `k^n`.
///
/// `w = k^{−(2g+1)} √(1 + c_{2g}k² + … + c₀k^{2(2g+1)})` and
/// `1/Q = k^{2g} (1 + q_{g−1}k² + … + q₀k^{2g})^{−1}`.
pub fn expand_at_infinity(u: &CurveFun, n: i64) -> Result<LaurentSeries> {
    if n > SERIES_BUDGET {
        return Err(Error::Truncation {
            requested: n,
            budget: SERIES_BUDGET,
        });
    }
    let (a, b, m) = u.parts();
    let ctx = u.context();
    let g = i64::from(ctx.genus);
    let a_series = z_poly_to_series(a);
    let b_series = z_poly_to_series(b);
    let f_series = z_poly_to_series(&ctx.f).shift(2 * g + 1);
    let q_series = z_poly_to_series(&ctx.q).shift(2 * g);

    let mut extra: i64 = 4;
    loop {
        let rel = (n + extra + 2 * g + 1 + 2 * g * i64::from(m)).max(1) as usize;
        let sqrt_f = f_series.shift(2 * g + 1).sqrt_one_plus(rel)?;
        let w = sqrt_f.shift(-(2 * g + 1));
        let inv_q = q_series.inverse(rel)?.shift(2 * g);
        let numer = a_series.add(&b_series.mul(&w));
        let out = numer.mul(&inv_q.pow(m));
        if out.precision() >= n {
            return Ok(out.truncate(n));
        }
        extra += n - out.precision() + 2;
        if extra > 4 * SERIES_BUDGET {
            return Err(Error::Truncation {
                requested: n,
                budget: SERIES_BUDGET,
            });
        }
    }
}

/// Outcome of the coefficient checks at infinity.
#[derive(Clone, Debug, Serialize)]
pub struct SeriesReport {
    pub checks: Vec<(String, bool)>,
}

impl SeriesReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }

    pub fn get(&self, name: &str) -> Option<bool> {
        self.checks.iter().find(|(n, _)| n == name).map(|(_, ok)| *ok)
    }
}

/// Compares the expansions `χ₀ = 1/k + a₀ + a₁k + …`, `χ₁ = b₁k + b₂k² + …`
/// with the operator data:
/// `a₀ = −V`, `a₁ = −W/2`, `b₁ = 0`, odd coefficients of `χ₁` vanish,
/// `f₂ = −2a₀`, `f₁ = −2(b₁ + a₀′)`, `f₀ = a₀² − 2a₁ − 2b₁′ − a₀″`, and
/// `W = 2[z^{g−1}]Q − c_{2g}`.
pub fn leading_terms_check(
    chi0: &LaurentSeries,
    chi1: &LaurentSeries,
    q: &QPolynomial,
    curve: &SpectralCurve,
    l4: &DiffOp,
) -> Result<SeriesReport> {
    let need = 2 * i64::from(q.genus) + 6;
    if chi0.precision() < need || chi1.precision() < need {
        return Err(Error::Truncation {
            requested: need,
            budget: chi0.precision().min(chi1.precision()),
        });
    }
    let c = |s: &LaurentSeries, e: i64| s.coeff(e).expect("within precision");
    let a0 = c(chi0, 0);
    let a1 = c(chi0, 1);
    let b1 = c(chi1, 1);
    let half = rat(1, 2);
    let two = Rat::from_integer(2.into());

    let mut checks = Vec::new();
    let mut push = |name: &str, ok: bool| checks.push((name.to_string(), ok));

    push(
        "chi0 has a simple pole 1/k",
        chi0.valuation() == Some(-1) && c(chi0, -1) == Poly::one(),
    );
    push("a0 = -V", a0 == -&q.v);
    push("a1 = -W/2", a1 == q.w.scale(&-half));
    push(
        "chi1 = O(k)",
        chi1.valuation().is_none_or(|v| v >= 1),
    );
    push("b1 = 0", b1.is_zero());
    push(
        "odd coefficients of chi1 vanish",
        (1..chi1.precision()).step_by(2).all(|e| c(chi1, e).is_zero()),
    );
    push("f2 = -2 a0", l4.coeff(2) == a0.scale(&-two.clone()));
    push(
        "f1 = -2 (b1 + a0')",
        l4.coeff(1) == (&b1 + &a0.dx()).scale(&-two.clone()),
    );
    push(
        "f0 = a0^2 - 2 a1 - 2 b1' - a0''",
        l4.coeff(0)
            == &a0 * &a0 - a1.scale(&two) - b1.dx().scale(&two) - a0.dx().dx(),
    );
    push("W = 2 [z^(g-1)] Q - c_2g", q.root_sum_residual(curve).is_zero());
    Ok(SeriesReport { checks })
}
