//! The polynomial `Q(x, z) = Π (z − γ_i(x))` and the spectral polynomial `F(z)`.
//!
//! `Q = Σ_s δ_s(z) x^s` solves the fifth-order linear ODE
//!
//! ```text
//! Q⁽⁵⁾ + 4V Q‴ + 4(a2 − (g² + g − 3) a3 x + z) Q′ + 6V′ Q″ − 2g(g+1) a3 Q = 0
//! ```
//!
//! with `V = a3 x³ + a2 x² + a1 x + a0`. Comparing coefficients of `x^s` gives a
//! downward recursion for `δ_s` seeded with `δ_g = a3^g`; every step divides by
//! `a3` and the seed makes those divisions exact in the polynomial ring.
//! `F` is then read off from the first integral
//!
//! ```text
//! 4F = 4(z − W)Q² − 4V(Q′)² + (Q″)² − 2Q′Q‴ + 2Q(2V′Q′ + 4VQ″ + Q⁗)
//! ```
//!
//! with `W = g(g+1) a3 x`.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::curve::SpectralCurve;
use crate::error::{Error, Result};
use crate::params::Params;
use crate::poly::{rat, rat_int, Poly, Rat, Var};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QPolynomial {
    pub genus: u32,
    pub params: Params,
    /// Raw recursion output `δ_0..δ_g` with the parameter bindings applied.
    pub deltas: Vec<Poly>,
    /// Rational factor making `Q = normalization · Σ δ_s x^s` monic in z.
    #[serde(serialize_with = "ser_rat")]
    pub normalization: Rat,
    pub q: Poly,
    pub v: Poly,
    pub w: Poly,
}

fn ser_rat<S: serde::Serializer>(r: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&crate::poly::format_rat(r))
}

/// Symbolic `δ_0..δ_g` in `z, a0..a3`.
pub fn build_deltas(genus: u32) -> Result<Vec<Poly>> {
    if genus == 0 {
        return Err(Error::Param("genus must be at least 1".into()));
    }
    let g = i64::from(genus);
    let n = genus as usize;
    let a = |v: Var| Poly::var(v);
    let z = Poly::z();
    let mut deltas = vec![Poly::zero(); n + 1];
    deltas[n] = a(Var::A3).pow(genus);
    let at = |d: &[Poly], i: usize| d.get(i).cloned().unwrap_or_default();

    for s_idx in (0..n).rev() {
        let s = s_idx as i64;
        let mut acc = Poly::int(2) * (a(Var::A2) * Poly::int((s + 1) * (s + 1)) + z.clone())
            * at(&deltas, s_idx + 1);
        acc += a(Var::A1) * Poly::int((s + 2) * (2 * s + 3)) * at(&deltas, s_idx + 2);
        acc += a(Var::A0) * Poly::int(2 * (s + 2) * (s + 3)) * at(&deltas, s_idx + 3);
        acc += Poly::constant(rat((s + 2) * (s + 3) * (s + 4) * (s + 5), 2)) * at(&deltas, s_idx + 5);
        let factor = rat(s + 1, (g - s) * (s + g + 1) * (2 * s + 1));
        deltas[s_idx] = acc
            .scale(&factor)
            .exact_div(&a(Var::A3))
            .map_err(|_| Error::RecursionDivision {
                genus,
                step: s_idx as u32,
            })?;
    }
    Ok(deltas)
}

/// Assembles `Q` under the given bindings and rescales it to be monic in z.
pub fn assemble_q(genus: u32, deltas: &[Poly], params: &Params) -> Result<QPolynomial> {
    let bindings = params.bindings();
    let deltas: Vec<Poly> = deltas.iter().map(|d| d.eval(&bindings)).collect();
    let raw = Poly::from_coeffs_in(Var::X, &deltas);
    let lead = raw
        .coeffs_in(Var::Z)
        .get(genus as usize)
        .cloned()
        .unwrap_or_default();
    let normalization = match lead.as_constant() {
        Some(c) if !c.is_zero() => c.recip(),
        _ => return Err(Error::Normalization(lead.to_string())),
    };
    Ok(QPolynomial {
        genus,
        params: params.clone(),
        q: raw.scale(&normalization),
        deltas,
        normalization,
        v: params.potential_v(),
        w: params.potential_w(genus),
    })
}

impl QPolynomial {
    pub fn build(genus: u32, params: &Params) -> Result<Self> {
        assemble_q(genus, &build_deltas(genus)?, params)
    }

    /// `[z^j] Q` for `j = 0..=g`; each is a polynomial in x.
    pub fn z_coeffs(&self) -> Vec<Poly> {
        self.q.coeffs_in(Var::Z)
    }

    /// Left-hand side of the linear fifth-order ODE for `Q`.
    pub fn ode_residual(&self) -> Poly {
        ode_residual_of(&self.q, self.genus, &self.params)
    }

    /// `F(z)` from the first integral; fails unless it is free of x and monic
    /// of degree `2g+1`.
    pub fn extract_f(&self) -> Result<SpectralCurve> {
        let p = &self.params;
        let x = Poly::x();
        let (a0, a1, a2, a3) = (p.poly(Var::A0), p.poly(Var::A1), p.poly(Var::A2), p.poly(Var::A3));
        let g = i64::from(self.genus);
        let cubic = &a3 * &x.pow(3) + &a2 * &x.pow(2) + &a1 * &x + a0;
        let cubic_dx = Poly::int(3) * &a3 * x.pow(2) + Poly::int(2) * &a2 * &x + a1;
        let q = &self.q;
        let [q1, q2, q3, q4] = derivs4(q);
        let mut rhs = Poly::int(4) * (Poly::z() - Poly::int(g * (g + 1)) * a3 * x) * q * q;
        rhs -= Poly::int(4) * &cubic * &q1 * &q1;
        rhs += &q2 * &q2;
        rhs -= Poly::int(2) * &q1 * &q3;
        let inner = Poly::int(2) * cubic_dx * &q1 + Poly::int(4) * cubic * &q2 + q4;
        rhs += Poly::int(2) * q * inner;
        let f = rhs.scale(&rat(1, 4));
        SpectralCurve::from_poly(self.genus, &f)
    }

    /// `4F − (first integral)` written with the generic potentials `V`, `W`.
    pub fn first_integral_residual(&self, curve: &SpectralCurve) -> Poly {
        Poly::int(4) * curve.poly() - first_integral(&self.q, &self.v, &self.w)
    }

    /// Residual of the x-derivative of the first integral divided by `Q`.
    pub fn derivative_identity_residual(&self, reading: DerivativeIdentityReading) -> Poly {
        derivative_identity(&self.q, &self.v, &self.w, reading)
    }

    /// `2[z^{g−1}]Q − c_{2g} − W`; vanishes when the potential `W` equals
    /// minus twice the sum of the roots of `Q`, shifted by `c_{2g}`.
    pub fn root_sum_residual(&self, curve: &SpectralCurve) -> Poly {
        let cs = self.z_coeffs();
        let sub = cs[self.genus as usize - 1].clone();
        Poly::int(2) * sub - curve.subleading().clone() - self.w.clone()
    }

    /// `Q + delta`, for negative controls.
    pub fn perturbed(&self, delta: &Poly) -> QPolynomial {
        let mut out = self.clone();
        out.q = &out.q + delta;
        out
    }
}

fn derivs4(q: &Poly) -> [Poly; 4] {
    let q1 = q.dx();
    let q2 = q1.dx();
    let q3 = q2.dx();
    let q4 = q3.dx();
    [q1, q2, q3, q4]
}

/// ODE residual for an arbitrary `Q` with the parameters' explicit coefficients.
pub fn ode_residual_of(q: &Poly, genus: u32, params: &Params) -> Poly {
    let x = Poly::x();
    let (a0, a1, a2, a3) = (
        params.poly(Var::A0),
        params.poly(Var::A1),
        params.poly(Var::A2),
        params.poly(Var::A3),
    );
    let g = i64::from(genus);
    let [q1, q2, q3, _] = derivs4(q);
    let q5 = q.dx_n(5);
    let cubic = &a3 * &x.pow(3) + &a2 * &x.pow(2) + &a1 * &x + a0;
    let quad = Poly::int(3) * &a3 * x.pow(2) + Poly::int(2) * &a2 * &x + a1;
    let lin = &a2 - Poly::int(g * g + g - 3) * &a3 * &x + Poly::z();
    q5 + Poly::int(4) * cubic * q3 + Poly::int(4) * lin * q1 + Poly::int(6) * quad * q2
        - Poly::int(2 * g * (g + 1)) * a3 * q
}

/// `4(z − W)Q² − 4V(Q′)² + (Q″)² − 2Q′Q‴ + 2Q(2V′Q′ + 4VQ″ + Q⁗)`.
pub fn first_integral(q: &Poly, v: &Poly, w: &Poly) -> Poly {
    let [q1, q2, q3, q4] = derivs4(q);
    let v1 = v.dx();
    Poly::int(4) * (Poly::z() - w) * q * q - Poly::int(4) * v * &q1 * &q1 + &q2 * &q2
        - Poly::int(2) * &q1 * &q3
        + Poly::int(2) * q * (Poly::int(2) * v1 * &q1 + Poly::int(4) * v * &q2 + q4)
}

/// How to read the derivative identity `Q⁽⁵⁾ + 4V·(?) + 2Q′(2z − 2W ± V″) + 6V′Q″ − 2QW′`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DerivativeIdentityReading {
    /// `4V Q‴` and `+V″`: exactly `(d/dx first integral) / (2Q)`.
    Derived,
    /// `4V Q³` (a literal cube) with `+V″`.
    LiteralCube,
    /// `4V Q‴` with `−V″`.
    NegatedSecondDerivative,
}

pub fn derivative_identity(
    q: &Poly,
    v: &Poly,
    w: &Poly,
    reading: DerivativeIdentityReading,
) -> Poly {
    use DerivativeIdentityReading::*;
    let [q1, q2, q3, _] = derivs4(q);
    let q5 = q.dx_n(5);
    let v1 = v.dx();
    let v2 = v1.dx();
    let third = match reading {
        LiteralCube => q.pow(3),
        Derived | NegatedSecondDerivative => q3,
    };
    let v2_term = match reading {
        NegatedSecondDerivative => -v2,
        Derived | LiteralCube => v2,
    };
    let bracket = Poly::int(2) * Poly::z() - Poly::int(2) * w + v2_term;
    q5 + Poly::int(4) * v * third + Poly::int(2) * q1 * bracket + Poly::int(6) * v1 * q2
        - Poly::int(2) * q * w.dx()
}

/// Leading z-coefficient of the raw `δ` ladder:
/// `Π_{s<g} 2(s+1) / ((g−s)(s+g+1)(2s+1))`.
pub fn leading_z_factor(genus: u32) -> Rat {
    let g = i64::from(genus);
    (0..g).fold(Rat::one(), |acc, s| {
        acc * rat_int(2 * (s + 1)) / rat_int((g - s) * (s + g + 1) * (2 * s + 1))
    })
}
