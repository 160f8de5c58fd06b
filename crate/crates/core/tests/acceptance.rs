//! The ten acceptance criteria, one PASS/FAIL line each. Exits nonzero if any
//! criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config as RunnerConfig, RngAlgorithm, TestRng, TestRunner};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use weyl_commute::chi::{build_chi, expand_at_infinity, leading_terms_check, verify_eigen_reduction};
use weyl_commute::numeric::{roots_z, verify_potential_from_roots, verify_pole_relation, NumericContext, Tolerances};
use weyl_commute::pair::{
    check_uniqueness, commutant_containing, compare_example, printed_genus_three, printed_genus_two, OperatorPair,
};
use weyl_commute::params::Params;
use weyl_commute::pipeline::SAMPLE_POINTS;
use weyl_commute::poly::{rat, rat_int, Poly, Var};
use weyl_commute::qsolver::{DerivativeIdentityReading, QPolynomial};

type Verdict = (bool, String);
type Criterion = (&'static str, Duration, fn() -> Verdict);

/// Three seeded random tuples per genus, `a3 ≠ 0`.
fn random_tuples(genus: u32) -> Vec<Params> {
    let mut rng = StdRng::seed_from_u64(0x5eed_0000 + u64::from(genus));
    let mut r = |nonzero: bool| loop {
        let n: i64 = rng.random_range(-9..=9);
        let d: i64 = rng.random_range(1..=6);
        if !(nonzero && n == 0) {
            return rat(n, d);
        }
    };
    (0..3)
        .map(|_| Params::numeric(r(false), r(false), r(false), r(true)).expect("a3 nonzero"))
        .collect()
}

fn slice() -> Params {
    Params::dixmier_slice()
}

fn a0() -> Poly {
    Poly::var(Var::A0)
}

fn example_a() -> Verdict {
    let z = Poly::z();
    let pair = OperatorPair::build(2, &slice()).unwrap();
    let expected = z.pow(5) + Poly::int(27) * a0() * z.pow(2) + Poly::int(81);
    let curve_ok = pair.curve.poly() == expected;
    let report = compare_example(&printed_genus_two()).unwrap();
    let detail = format!(
        "F = {} ({}); M vs printed operator: {}{}; printed operator squares to F(L4): {}",
        pair.curve.poly(),
        if curve_ok { "exact" } else { "MISMATCH" },
        if report.operator_matches { "exact match" } else { "differs, constructed - printed = " },
        report
            .coefficient_diffs
            .iter()
            .map(|(i, d)| format!("[D^{i}] {d}"))
            .collect::<Vec<_>>()
            .join(", "),
        report.printed_satisfies_curve,
    );
    (curve_ok && report.operator_matches, detail)
}

fn example_b() -> Verdict {
    let z = Poly::z();
    let pair = OperatorPair::build(3, &slice()).unwrap();
    let expected = z.pow(7) + Poly::int(594) * a0() * z.pow(4) - Poly::int(2025) * z.pow(2)
        + Poly::int(91125) * a0().pow(2) * z;
    let curve_ok = pair.curve.poly() == expected;
    let comm = pair.verify_commutation().is_zero();
    let bc = pair.verify_bc().unwrap().is_zero();
    let report = compare_example(&printed_genus_three()).unwrap();
    let detail = format!(
        "F exact: {curve_ok}; [L4, M] = 0: {comm}; M^2 = F(L4): {bc}; printed operator: {}",
        if report.operator_matches {
            "exact match".to_string()
        } else {
            format!("{} differing coefficients", report.coefficient_diffs.len())
        }
    );
    (curve_ok && comm && bc, detail)
}

fn pairs_at_scale() -> Verdict {
    let mut worst_g5 = Duration::ZERO;
    let mut count = 0;
    for g in 1..=5u32 {
        for p in random_tuples(g) {
            let t = Instant::now();
            let pair = OperatorPair::build(g, &p).unwrap();
            let f = pair.curve.poly();
            let shape = f.is_free_of(Var::X) && f.deg(Var::Z) == 2 * g + 1 && f.coeffs_in(Var::Z).last() == Some(&Poly::one());
            if !shape || !pair.verify_commutation().is_zero() || !pair.verify_bc().unwrap().is_zero() {
                return (false, format!("g = {g}, {p}"));
            }
            if g == 5 {
                worst_g5 = worst_g5.max(t.elapsed());
            }
            count += 1;
        }
    }
    let within = worst_g5 < Duration::from_secs(300);
    (within, format!("{count} pairs; slowest g = 5 case {:.1} s", worst_g5.as_secs_f64()))
}

fn eigenfunction_reduction() -> Verdict {
    let mut n = 0;
    for g in 1..=4u32 {
        for p in [slice(), random_tuples(g).remove(0)] {
            let q = QPolynomial::build(g, &p).unwrap();
            let f = q.extract_f().unwrap();
            let l4 = weyl_commute::pair::build_l4(g, &p).unwrap();
            let (chi0, chi1) = build_chi(&q, &f);
            let (r1, r2) = verify_eigen_reduction(&chi0, &chi1, &l4).unwrap();
            if !r1.is_zero() || !r2.is_zero() {
                return (false, format!("g = {g}, {p}"));
            }
            n += 1;
        }
    }
    (true, format!("P1 - z = 0 and P2 = 0 in {n} instances"))
}

fn first_integral_family() -> Verdict {
    let mut n = 0;
    for g in 1..=5u32 {
        let mut all = random_tuples(g);
        all.push(slice());
        for p in all {
            let q = QPolynomial::build(g, &p).unwrap();
            let Ok(f) = q.extract_f() else {
                return (false, format!("F extraction failed at g = {g}, {p}"));
            };
            let ok = q.ode_residual().is_zero()
                && q.first_integral_residual(&f).is_zero()
                && q.derivative_identity_residual(DerivativeIdentityReading::Derived).is_zero();
            if !ok {
                return (false, format!("g = {g}, {p}"));
            }
            n += 1;
        }
    }
    let q1 = QPolynomial::build(1, &slice()).unwrap();
    let literal_fails = !q1.derivative_identity_residual(DerivativeIdentityReading::LiteralCube).is_zero();
    (
        literal_fails,
        format!("{n} instances exact; literal cube reading nonzero at g = 1: {literal_fails}"),
    )
}

fn series_at_infinity() -> Verdict {
    for g in 1..=4u32 {
        for p in [slice(), random_tuples(g).remove(1)] {
            let q = QPolynomial::build(g, &p).unwrap();
            let f = q.extract_f().unwrap();
            let l4 = weyl_commute::pair::build_l4(g, &p).unwrap();
            let (chi0, chi1) = build_chi(&q, &f);
            let n = 2 * i64::from(g) + 6;
            let s0 = expand_at_infinity(&chi0, n).unwrap();
            let s1 = expand_at_infinity(&chi1, n).unwrap();
            let report = leading_terms_check(&s0, &s1, &q, &f, &l4).unwrap();
            if let Some((name, _)) = report.checks.iter().find(|(_, ok)| !ok) {
                return (false, format!("g = {g}, {p}: {name}"));
            }
        }
    }
    (true, "a0 = -V, a1 = -W/2, b1 = 0, odd chi1 terms vanish through k^(2g+5), root-sum form of W; g = 1..4".into())
}

fn discriminants() -> Verdict {
    for g in 1..=4u32 {
        for p in random_tuples(g) {
            let f = QPolynomial::build(g, &p).unwrap().extract_f().unwrap();
            if !f.is_nonsingular(&p).unwrap() {
                return (false, format!("singular at g = {g}, {p}"));
            }
        }
    }
    let cusp = Params::numeric(rat_int(0), rat_int(0), rat_int(0), rat_int(1)).unwrap();
    let f = QPolynomial::build(1, &cusp).unwrap().extract_f().unwrap();
    let degenerate = f.discriminant().eval(&cusp.bindings()).is_zero();
    (degenerate, format!("12 sampled tuples nonsingular; g = 1, a0 = 0 discriminant zero: {degenerate}"))
}

fn root_level() -> Verdict {
    let tol = Tolerances::default();
    let mut worst = (0.0f64, 0.0f64, 0.0f64);
    let mut points = 0;
    for g in 2..=3u32 {
        let fixed = Params::numeric(rat_int(1), rat_int(0), rat_int(0), rat_int(1)).unwrap();
        for p in [fixed, random_tuples(g).remove(2)] {
            let q = QPolynomial::build(g, &p).unwrap();
            let f = q.extract_f().unwrap();
            let ctx = NumericContext::new(&q, &f).unwrap();
            let mut used = 0;
            for &x0 in SAMPLE_POINTS.iter() {
                if used == 5 {
                    break;
                }
                let outcome = roots_z(&ctx, x0, &tol).and_then(|_| {
                    Ok((verify_potential_from_roots(&ctx, x0, &tol)?, verify_pole_relation(&ctx, x0, 1e-4, &tol)?))
                });
                match outcome {
                    Ok((pot, kr)) => {
                        worst.0 = worst.0.max(pot.pairwise);
                        worst.1 = worst.1.max(pot.against_potential);
                        worst.2 = worst.2.max(kr.max_residual);
                        if kr.poles.len() != 2 * g as usize {
                            return (false, "pole count".into());
                        }
                        used += 1;
                    }
                    Err(weyl_commute::error::Error::DegenerateDerivative | weyl_commute::error::Error::BranchTracking) => {}
                    Err(e) => return (false, format!("g = {g}, {p}, x0 = {x0}: {e}")),
                }
            }
            if used < 5 {
                return (false, format!("only {used} usable points at g = {g}"));
            }
            points += used;
        }
    }
    let pass = worst.0 <= tol.corollary && worst.1 <= tol.corollary && worst.2 <= tol.krichever;
    (
        pass,
        format!(
            "{points} points, roots distinct; potential pairwise {:.1e}, vs V {:.1e} (tol 1e-8); pole relation {:.1e} (tol 1e-6)",
            worst.0, worst.1, worst.2
        ),
    )
}

fn commutant_oracle() -> Verdict {
    let mut parts = Vec::new();
    for g in 1..=2u32 {
        for p in [Params::numeric(rat_int(1), rat_int(0), rat_int(0), rat_int(1)).unwrap(), random_tuples(g).remove(0)] {
            let pair = OperatorPair::build(g, &p).unwrap();
            let space = match commutant_containing(&pair.l4, &pair.m, 4) {
                Ok(s) => s,
                Err(e) => return (false, format!("g = {g}, {p}: {e}")),
            };
            let unique = check_uniqueness(&space, &pair.m, &pair.l4).holds();
            if space.affine_dimension() != g as usize + 1 || !unique {
                return (false, format!("g = {g}: dimension {}, unique {unique}", space.affine_dimension()));
            }
            parts.push(format!("g = {g} dim {} (slack {})", space.affine_dimension(), space.slack));
        }
    }
    (true, format!("M in the solution space; {}", parts.join(", ")))
}

fn run_property<S: Strategy>(
    name: &str,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> std::result::Result<(), String> {
    let mut runner = TestRunner::new_with_rng(
        RunnerConfig {
            cases: 200,
            failure_persistence: None,
            ..RunnerConfig::default()
        },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    );
    runner.run(&strategy, test).map_err(|e| format!("{name}: {e}"))
}

fn property_suites() -> Verdict {
    use common::*;
    let slice_ctx = |g| curve_context(g, &slice());
    let results = [
        run_property("polynomial ring", (poly_xza(), poly_xza(), poly_xza()), |(p, q, r)| {
            poly_ring_axioms(&p, &q, &r)
        }),
        run_property("polynomial product rule", (poly_xza(), poly_xza()), |(p, q)| poly_leibniz(&p, &q)),
        run_property("operator ring", (diff_op(), diff_op(), diff_op()), |(a, b, c)| {
            weyl_ring_axioms(&a, &b, &c)
        }),
        run_property("operator product rule", (poly_x(), diff_op()), |(f, a)| weyl_leibniz(&f, &a)),
        run_property("adjoint", (diff_op(), diff_op()), |(a, b)| adjoint_laws(&a, &b)),
        run_property("Jacobi", (diff_op(), diff_op(), diff_op()), |(a, b, c)| jacobi(&a, &b, &c)),
        run_property(
            "expansion homomorphism",
            (
                poly_in(&[Var::X, Var::Z], 2, 3),
                poly_in(&[Var::X, Var::Z], 2, 2),
                poly_in(&[Var::X, Var::Z], 2, 3),
                0u32..=2,
                2i64..=10,
            ),
            |(a, b, c, m, n)| {
                let ctx = slice_ctx(1);
                let u = curve_fun(&ctx, &a, &b, m);
                let v = curve_fun(&ctx, &c, &Poly::one(), 1);
                expansion_homomorphism(&u, &v, n)
            },
        ),
        run_property("w^2 = F under truncation", (-2i64..=16, 1u32..=3), |(n, g)| {
            w_squared_is_f(&slice_ctx(g), n)
        }),
    ];
    let failures: Vec<String> = results.into_iter().filter_map(|r| r.err()).collect();
    if failures.is_empty() {
        (true, "8 suites x 200 cases".into())
    } else {
        (false, failures.join("; "))
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("genus-2 example reproduced exactly", Duration::from_secs(10), example_a),
        ("genus-3 example, commutation and spectral relation", Duration::from_secs(60), example_b),
        ("commuting pairs for g = 1..5 at random parameters", Duration::MAX, pairs_at_scale),
        ("eigenfunction reduction P1 - z = 0, P2 = 0", Duration::MAX, eigenfunction_reduction),
        ("Q equation, first integral, derivative identity", Duration::MAX, first_integral_family),
        ("expansion at infinity", Duration::MAX, series_at_infinity),
        ("curve discriminant", Duration::MAX, discriminants),
        ("roots of Q: distinctness, potential, pole relation", Duration::MAX, root_level),
        ("commutant by linear solve agrees with M", Duration::MAX, commutant_oracle),
        ("property suites", Duration::MAX, property_suites),
    ];
    let mut failed = 0;
    for (i, (title, budget, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let (pass, detail) = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            (false, format!("panicked: {msg}"))
        });
        let elapsed = t.elapsed();
        let pass = pass && elapsed < *budget;
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {:>2}: {} {title} [{:.2} s] - {detail}",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
    }
    println!("{} of 10 criteria pass", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
