//! Strategies and property bodies shared by the property and acceptance suites.
#![allow(dead_code)]

use std::sync::Arc;

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use weyl_commute::chi::{expand_at_infinity, CurveContext, CurveFun};
use weyl_commute::params::Params;
use weyl_commute::poly::{rat, Monomial, Poly, Rat, Var, NVARS};
use weyl_commute::qsolver::QPolynomial;
use weyl_commute::weyl::DiffOp;

pub fn small_rat() -> impl Strategy<Value = Rat> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

pub fn nonzero_rat() -> impl Strategy<Value = Rat> {
    (prop_oneof![-6i64..=-1, 1i64..=6], 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

/// Sparse polynomial over the given variables with small exponents.
pub fn poly_in(vars: &'static [Var], max_exp: u16, max_terms: usize) -> impl Strategy<Value = Poly> {
    let term = (proptest::collection::vec(0..=max_exp, vars.len()), small_rat()).prop_map(move |(es, c)| {
        let mut e = [0u16; NVARS];
        for (v, k) in vars.iter().zip(es) {
            e[v.index()] = k;
        }
        (Monomial(e), c)
    });
    proptest::collection::vec(term, 0..=max_terms).prop_map(Poly::from_terms)
}

pub fn poly_xza() -> impl Strategy<Value = Poly> {
    poly_in(&[Var::X, Var::Z, Var::A0], 3, 4)
}

pub fn poly_x() -> impl Strategy<Value = Poly> {
    poly_in(&[Var::X], 4, 3)
}

/// Operators of order at most 3 with x-polynomial coefficients.
pub fn diff_op() -> impl Strategy<Value = DiffOp> {
    proptest::collection::vec(poly_x(), 0..=4).prop_map(|cs| DiffOp::from_coeffs(cs).expect("x only"))
}

/// A numeric tuple with nonzero `a3`.
pub fn params() -> impl Strategy<Value = Params> {
    (small_rat(), small_rat(), small_rat(), nonzero_rat())
        .prop_map(|(a0, a1, a2, a3)| Params::numeric(a0, a1, a2, a3).expect("a3 nonzero"))
}

pub fn check(ok: bool, what: &str) -> Result<(), TestCaseError> {
    if ok {
        Ok(())
    } else {
        Err(TestCaseError::fail(what.to_string()))
    }
}

pub fn poly_ring_axioms(p: &Poly, q: &Poly, r: &Poly) -> Result<(), TestCaseError> {
    check(&(p + q) + r == p + &(q + r), "addition associative")?;
    check(p + q == q + p, "addition commutative")?;
    check(&(p * q) * r == p * &(q * r), "multiplication associative")?;
    check(p * q == q * p, "multiplication commutative")?;
    check(p * &(q + r) == &(p * q) + &(p * r), "distributive")?;
    #[allow(clippy::eq_op)]
    check((p - p).is_zero(), "additive inverse")?;
    check(p * &Poly::one() == *p, "unit")
}

pub fn poly_leibniz(p: &Poly, q: &Poly) -> Result<(), TestCaseError> {
    for v in [Var::X, Var::Z] {
        let lhs = (p * q).diff(v).unwrap();
        let rhs = &p.diff(v).unwrap() * q + p * &q.diff(v).unwrap();
        check(lhs == rhs, "product rule")?;
    }
    Ok(())
}

pub fn weyl_leibniz(f: &Poly, a: &DiffOp) -> Result<(), TestCaseError> {
    // ∂ ∘ f = f ∂ + f′
    let lhs = DiffOp::d().compose(&DiffOp::mul_by(f.clone()));
    let rhs = &DiffOp::d().left_mul_poly(f) + &DiffOp::mul_by(f.dx());
    check(lhs == rhs, "∂ f = f ∂ + f'")?;
    // [∂, A] differentiates the coefficients of A
    let coeffs: Vec<Poly> = a.coeffs().iter().map(Poly::dx).collect();
    check(
        DiffOp::d().commutator(a) == DiffOp::from_coeffs(coeffs).unwrap(),
        "[∂, A] = A'",
    )
}

pub fn weyl_ring_axioms(a: &DiffOp, b: &DiffOp, c: &DiffOp) -> Result<(), TestCaseError> {
    check(a.compose(b).compose(c) == a.compose(&b.compose(c)), "composition associative")?;
    check(a.compose(&(b + c)) == &a.compose(b) + &a.compose(c), "left distributive")?;
    check((b + c).compose(a) == &b.compose(a) + &c.compose(a), "right distributive")?;
    check(a.compose(&DiffOp::one()) == *a && DiffOp::one().compose(a) == *a, "unit")
}

pub fn adjoint_laws(a: &DiffOp, b: &DiffOp) -> Result<(), TestCaseError> {
    check(a.adjoint().adjoint() == *a, "adjoint is an involution")?;
    check(a.compose(b).adjoint() == b.adjoint().compose(&a.adjoint()), "anti-homomorphism")?;
    check((a + b).adjoint() == &a.adjoint() + &b.adjoint(), "additive")
}

pub fn jacobi(a: &DiffOp, b: &DiffOp, c: &DiffOp) -> Result<(), TestCaseError> {
    let s = &(&a.commutator(&b.commutator(c)) + &b.commutator(&c.commutator(a))) + &c.commutator(&a.commutator(b));
    check(s.is_zero(), "Jacobi identity")
}

/// Genus-1 or genus-2 curve context at the given parameters.
pub fn curve_context(genus: u32, p: &Params) -> Arc<CurveContext> {
    let q = QPolynomial::build(genus, p).unwrap();
    let f = q.extract_f().unwrap();
    CurveContext::new(&q, &f)
}

pub fn curve_fun(ctx: &Arc<CurveContext>, a: &Poly, b: &Poly, m: u32) -> CurveFun {
    CurveFun::new(ctx, a.clone(), b.clone(), m)
}

pub fn curve_fun_axioms(u: &CurveFun, v: &CurveFun, t: &CurveFun) -> Result<(), TestCaseError> {
    let uv = u.mul(v).unwrap();
    check(uv == v.mul(u).unwrap(), "commutative")?;
    check(uv.mul(t).unwrap() == u.mul(&v.mul(t).unwrap()).unwrap(), "associative")?;
    check(
        u.mul(&v.add(t).unwrap()).unwrap() == uv.add(&u.mul(t).unwrap()).unwrap(),
        "distributive",
    )?;
    let lhs = uv.diff_x();
    let rhs = u.diff_x().mul(v).unwrap().add(&u.mul(&v.diff_x()).unwrap()).unwrap();
    check(lhs == rhs, "product rule in x")?;
    check(uv.sigma() == u.sigma().mul(&v.sigma()).unwrap(), "involution is multiplicative")
}

/// Expansion at infinity respects sums and products up to the common order.
pub fn expansion_homomorphism(u: &CurveFun, v: &CurveFun, n: i64) -> Result<(), TestCaseError> {
    let eu = expand_at_infinity(u, n).unwrap();
    let ev = expand_at_infinity(v, n).unwrap();
    let sum = expand_at_infinity(&u.add(v).unwrap(), n).unwrap();
    check(sum == eu.add(&ev).truncate(n), "sum")?;
    let prod = eu.mul(&ev);
    let m = prod.precision().min(n);
    let direct = expand_at_infinity(&u.mul(v).unwrap(), m).unwrap();
    check(direct == prod.truncate(m), "product")
}

/// `w² = F` survives truncation at every order.
pub fn w_squared_is_f(ctx: &Arc<CurveContext>, n: i64) -> Result<(), TestCaseError> {
    let w = expand_at_infinity(&CurveFun::w(ctx), n).unwrap();
    let sq = w.mul(&w);
    let f = expand_at_infinity(&CurveFun::poly(ctx, ctx.f.clone()), sq.precision()).unwrap();
    check(sq == f, "w^2 = F")
}
