//! Rational functions on the spectral curve with poles only on `Q = 0`.
//!
//! A [`CurveFun`] is `(A + B·w) / Q^m` in the coordinate ring of `w² = F(z)`.
//! Every denominator that arises from the eigenfunction equation
//! `ψ″ = χ₁ψ′ + χ₀ψ` is a power of `Q`, so reduction only ever needs exact
//! division by `Q` and no polynomial gcd.

pub mod series;

use std::sync::Arc;


use crate::curve::SpectralCurve;
use crate::error::{Error, Result};
use crate::poly::{rat, Poly, Rat};
use crate::qsolver::QPolynomial;
use crate::weyl::DiffOp;

pub use series::{expand_at_infinity, leading_terms_check, LaurentSeries, SeriesReport};

/// The pair `(Q, F)` every curve function is built over.
#[derive(Debug, PartialEq, Eq)]
pub struct CurveContext {
    pub genus: u32,
    pub q: Poly,
    pub f: Poly,
}

impl CurveContext {
    pub fn new(q: &QPolynomial, curve: &SpectralCurve) -> Arc<Self> {
        Arc::new(CurveContext {
            genus: q.genus,
            q: q.q.clone(),
            f: curve.poly(),
        })
    }
}

#[derive(Clone, Debug)]
pub struct CurveFun {
    a: Poly,
    b: Poly,
    m: u32,
    ctx: Arc<CurveContext>,
}

impl PartialEq for CurveFun {
    fn eq(&self, other: &Self) -> bool {
        self.same_context(other) && self.a == other.a && self.b == other.b && self.m == other.m
    }
}

impl CurveFun {
    /// `(a + b·w) / Q^m`, reduced.
    pub fn new(ctx: &Arc<CurveContext>, a: Poly, b: Poly, m: u32) -> Self {
        CurveFun {
            a,
            b,
            m,
            ctx: Arc::clone(ctx),
        }
        .reduced()
    }

    pub fn poly(ctx: &Arc<CurveContext>, a: Poly) -> Self {
        Self::new(ctx, a, Poly::zero(), 0)
    }

    pub fn w(ctx: &Arc<CurveContext>) -> Self {
        Self::new(ctx, Poly::zero(), Poly::one(), 0)
    }

    pub fn inv_q(ctx: &Arc<CurveContext>) -> Self {
        Self::new(ctx, Poly::one(), Poly::zero(), 1)
    }

    pub fn parts(&self) -> (&Poly, &Poly, u32) {
        (&self.a, &self.b, self.m)
    }

    pub fn context(&self) -> &Arc<CurveContext> {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    fn same_context(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ctx, &other.ctx) || self.ctx == other.ctx
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.same_context(other) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    fn reduced(mut self) -> Self {
        if self.is_zero() {
            self.m = 0;
            return self;
        }
        while self.m > 0 {
            let Ok(a) = self.a.exact_div(&self.ctx.q) else { break };
            let Ok(b) = self.b.exact_div(&self.ctx.q) else { break };
            self.a = a;
            self.b = b;
            self.m -= 1;
        }
        self
    }

    /// Numerator parts rescaled to denominator `Q^m`, `m ≥ self.m`.
    fn lifted(&self, m: u32) -> (Poly, Poly) {
        let k = self.ctx.q.pow(m - self.m);
        (&self.a * &k, &self.b * &k)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let m = self.m.max(other.m);
        let (a1, b1) = self.lifted(m);
        let (a2, b2) = other.lifted(m);
        Ok(Self::new(&self.ctx, a1 + a2, b1 + b2, m))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let a = &self.a * &other.a + &(&self.b * &other.b) * &self.ctx.f;
        let b = &self.a * &other.b + &self.b * &other.a;
        Ok(Self::new(&self.ctx, a, b, self.m + other.m))
    }

    pub fn neg(&self) -> Self {
        CurveFun {
            a: -&self.a,
            b: -&self.b,
            m: self.m,
            ctx: Arc::clone(&self.ctx),
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self::new(&self.ctx, self.a.scale(c), self.b.scale(c), self.m)
    }

    /// Multiplies by a polynomial in `x, z` and the parameters.
    pub fn mul_poly(&self, p: &Poly) -> Self {
        Self::new(&self.ctx, &self.a * p, &self.b * p, self.m)
    }

    /// `∂ₓ` with `w` constant in x.
    pub fn diff_x(&self) -> Self {
        let q = &self.ctx.q;
        let q1 = q.dx();
        let mq1 = q1.scale(&Rat::from_integer(self.m.into()));
        let a = &self.a.dx() * q - &mq1 * &self.a;
        let b = &self.b.dx() * q - &mq1 * &self.b;
        Self::new(&self.ctx, a, b, self.m + 1)
    }

    /// Pullback by the involution `w ↦ −w`.
    pub fn sigma(&self) -> Self {
        CurveFun {
            a: self.a.clone(),
            b: -&self.b,
            m: self.m,
            ctx: Arc::clone(&self.ctx),
        }
    }

    pub fn is_sigma_invariant(&self) -> bool {
        self.b.is_zero()
    }

    /// Total term count of the numerator (a size measure for reports).
    pub fn terms(&self) -> usize {
        self.a.len() + self.b.len()
    }
}

/// `χ₀ = −½ Q″/Q + w/Q − V` and `χ₁ = Q′/Q`.
pub fn build_chi(q: &QPolynomial, curve: &SpectralCurve) -> (CurveFun, CurveFun) {
    let ctx = CurveContext::new(q, curve);
    let qq = &q.q;
    let chi0_num = qq.dx().dx().scale(&rat(-1, 2)) - &q.v * qq;
    let chi0 = CurveFun::new(&ctx, chi0_num, Poly::one(), 1);
    let chi1 = CurveFun::new(&ctx, qq.dx(), Poly::zero(), 1);
    (chi0, chi1)
}

/// `(P₁ − z, P₂)` for `L₄ = ∂⁴ + f₂∂² + f₁∂ + f₀`, where `L₄ψ = P₁ψ + P₂ψ′` on
/// solutions of `ψ″ = χ₁ψ′ + χ₀ψ`.
pub fn verify_eigen_reduction(chi0: &CurveFun, chi1: &CurveFun, l4: &DiffOp) -> Result<(CurveFun, CurveFun)> {
    chi0.check(chi1)?;
    if l4.order() != Some(4) || !l4.is_monic() || !l4.coeff(3).is_zero() {
        return Err(Error::Param(format!("expected ∂⁴ + f₂∂² + f₁∂ + f₀, got {l4}")));
    }
    let ctx = chi0.context();
    let f = |i: usize| CurveFun::poly(ctx, l4.coeff(i));
    let (f0, f1, f2) = (f(0), f(1), f(2));

    let c0d = chi0.diff_x();
    let c0dd = c0d.diff_x();
    let c1d = chi1.diff_x();
    let c1dd = c1d.diff_x();
    let c1sq = chi1.mul(chi1)?;
    let two = Rat::from_integer(2.into());
    let three = Rat::from_integer(3.into());

    // P₁ = f₀ + f₂χ₀ + χ₀² + χ₁χ₀′ + χ₀(χ₁² + 2χ₁′) + χ₀″
    let p1 = f0
        .add(&f2.mul(chi0)?)?
        .add(&chi0.mul(chi0)?)?
        .add(&chi1.mul(&c0d)?)?
        .add(&chi0.mul(&c1sq.add(&c1d.scale(&two))?)?)?
        .add(&c0dd)?;
    // P₂ = f₁ + f₂χ₁ + χ₁³ + 2χ₀′ + χ₁(2χ₀ + 3χ₁′) + χ₁″
    let p2 = f1
        .add(&f2.mul(chi1)?)?
        .add(&c1sq.mul(chi1)?)?
        .add(&c0d.scale(&two))?
        .add(&chi1.mul(&chi0.scale(&two).add(&c1d.scale(&three))?)?)?
        .add(&c1dd)?;

    let z = CurveFun::poly(ctx, Poly::z());
    Ok((p1.sub(&z)?, p2))
}
