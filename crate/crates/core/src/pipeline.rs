//! End-to-end construction and the full verification run behind the CLI.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;

use crate::chi::{build_chi, expand_at_infinity, leading_terms_check, verify_eigen_reduction, LaurentSeries};
use crate::curve::SpectralCurve;
use crate::error::{Error, Result};
use crate::numeric::{
    curve_residual, gamma_prime_fd_residual, reexpansion_residual, roots_z, verify_potential_from_roots, verify_pole_relation,
    NumericCheck, NumericContext, Tolerances,
};
use crate::pair::{build_l4, build_m, bc_residual};
use crate::params::Params;
use crate::poly::Poly;
use crate::qsolver::{build_deltas, assemble_q, DerivativeIdentityReading, QPolynomial};
use crate::weyl::DiffOp;

/// Environment variable bounding the term count of any intermediate operator
/// coefficient or polynomial.
pub const MAX_TERMS_VAR: &str = "WEYL_COMMUTE_MAX_TERMS";

/// Deliberate corruption for exercising the failure paths.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Fault {
    /// Adds `x` to `Q`.
    Q,
    /// Adds `1` to the constant term of `F`.
    F,
    /// Adds `x` to `M`.
    M,
}

impl std::str::FromStr for Fault {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "q" | "Q" => Ok(Fault::Q),
            "f" | "F" => Ok(Fault::F),
            "m" | "M" => Ok(Fault::M),
            _ => Err(Error::Parse(format!("unknown fault `{s}` (expected q, f or m)"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Config {
    pub genus: u32,
    pub params: Params,
    /// Series order for the checks at infinity; `None` means `2g + 8`.
    pub series_order: Option<i64>,
    /// Number of sample points for the float checks.
    pub samples: usize,
    pub tolerances: Tolerances,
    /// Finite-difference step for the float checks.
    pub step: f64,
    pub fault: Option<Fault>,
    pub max_terms: Option<usize>,
}

impl Config {
    pub fn new(genus: u32, params: Params) -> Self {
        Config {
            genus,
            params,
            series_order: None,
            samples: 3,
            tolerances: Tolerances::default(),
            step: 1e-4,
            fault: None,
            max_terms: max_terms_from_env(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.genus == 0 {
            return Err(Error::Param("genus must be at least 1".into()));
        }
        Ok(())
    }

    fn series_order(&self) -> i64 {
        self.series_order.unwrap_or(2 * i64::from(self.genus) + 8)
    }

    fn guard(&self, stage: &'static str, found: usize) -> Result<()> {
        match self.max_terms {
            Some(limit) if found > limit => Err(Error::TermLimit { stage, limit, found }),
            _ => Ok(()),
        }
    }
}

pub fn max_terms_from_env() -> Option<usize> {
    std::env::var(MAX_TERMS_VAR).ok().and_then(|v| v.trim().parse().ok())
}

/// Everything `construct` emits.
#[derive(Clone, Debug, Serialize)]
pub struct Construction {
    #[serde(rename = "g")]
    pub genus: u32,
    pub params: Params,
    #[serde(rename = "Q")]
    pub q: Poly,
    pub deltas: Vec<Poly>,
    #[serde(rename = "F")]
    pub curve: SpectralCurve,
    #[serde(rename = "L4")]
    pub l4: DiffOp,
    #[serde(rename = "M")]
    pub m: DiffOp,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<&'static str, f64>>,
}

fn apply_q_fault(q: QPolynomial, fault: Option<Fault>) -> QPolynomial {
    if fault == Some(Fault::Q) {
        q.perturbed(&Poly::x())
    } else {
        q
    }
}

fn apply_f_fault(curve: SpectralCurve, fault: Option<Fault>) -> SpectralCurve {
    if fault == Some(Fault::F) {
        SpectralCurve::from_poly(curve.genus(), &(curve.poly() + Poly::one())).expect("shape preserved")
    } else {
        curve
    }
}

fn apply_m_fault(m: DiffOp, fault: Option<Fault>) -> DiffOp {
    if fault == Some(Fault::M) {
        &m + &DiffOp::mul_by(Poly::x())
    } else {
        m
    }
}

/// Builds `Q`, `F`, `L₄` and `M`.
pub fn construct(cfg: &Config, timings: bool) -> Result<Construction> {
    cfg.validate()?;
    let mut clock: BTreeMap<&'static str, f64> = BTreeMap::new();
    let mut lap = |name: &'static str, t: Instant| {
        clock.insert(name, t.elapsed().as_secs_f64() * 1e3);
    };

    let t = Instant::now();
    let l4 = build_l4(cfg.genus, &cfg.params)?;
    let deltas = build_deltas(cfg.genus)?;
    let q = apply_q_fault(assemble_q(cfg.genus, &deltas, &cfg.params)?, cfg.fault);
    cfg.guard("Q", q.q.len())?;
    lap("Q", t);

    let t = Instant::now();
    let curve = apply_f_fault(q.extract_f()?, cfg.fault);
    lap("F", t);

    let t = Instant::now();
    let m = apply_m_fault(build_m(&q, &l4), cfg.fault);
    cfg.guard("M", m.max_terms())?;
    lap("M", t);

    Ok(Construction {
        genus: cfg.genus,
        params: cfg.params.clone(),
        q: q.q,
        deltas,
        curve,
        l4,
        m,
        timings_ms: timings.then_some(clock),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    Exact,
    Numeric,
}

/// One verified statement.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    /// The identity being checked, in words.
    pub identity: String,
    pub kind: CheckKind,
    pub pass: bool,
    /// `"0"` for a vanishing exact residual, a size summary otherwise, or the
    /// largest float residual.
    pub residual: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    fn exact(name: &str, identity: &str, residual_terms: Result<usize>) -> Self {
        let (pass, residual, detail) = match residual_terms {
            Ok(0) => (true, "0".to_string(), None),
            Ok(n) => (false, format!("nonzero ({n} terms)"), None),
            Err(e) => (false, "not computed".to_string(), Some(e.to_string())),
        };
        Check {
            name: name.into(),
            identity: identity.into(),
            kind: CheckKind::Exact,
            pass,
            residual,
            tolerance: None,
            detail,
        }
    }

    fn boolean(name: &str, identity: &str, outcome: Result<bool>) -> Self {
        let (pass, detail) = match outcome {
            Ok(b) => (b, None),
            Err(e) => (false, Some(e.to_string())),
        };
        Check {
            name: name.into(),
            identity: identity.into(),
            kind: CheckKind::Exact,
            pass,
            residual: if pass { "0" } else { "violated" }.into(),
            tolerance: None,
            detail,
        }
    }

    fn numeric(identity: &str, at: f64, c: Result<NumericCheck>) -> Self {
        match c {
            Ok(c) => Check {
                name: format!("{} @ x0={at}", c.name),
                identity: identity.into(),
                kind: CheckKind::Numeric,
                pass: c.pass,
                residual: format!("{:e}", c.max_residual),
                tolerance: Some(c.tolerance),
                detail: None,
            },
            Err(e) => Check {
                name: format!("{identity} @ x0={at}"),
                identity: identity.into(),
                kind: CheckKind::Numeric,
                pass: false,
                residual: "not computed".into(),
                tolerance: None,
                detail: Some(e.to_string()),
            },
        }
    }
}

fn op_terms(op: &DiffOp) -> usize {
    op.coeffs().iter().map(Poly::len).sum()
}

#[derive(Clone, Debug, Serialize)]
pub struct NotRun {
    pub name: String,
    pub reason: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    #[serde(rename = "g")]
    pub genus: u32,
    pub params: Params,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fault: Option<Fault>,
    pub checks: Vec<Check>,
    pub not_run: Vec<NotRun>,
    pub passed: usize,
    pub failed: usize,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.failed == 0
    }

    pub fn failing(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

/// Candidate float sample points, tried in order; a point is skipped only when
/// a derivative degenerates there or root tracking is ambiguous.
pub const SAMPLE_POINTS: [f64; 12] = [0.5, 1.0, 2.0, -0.5, 1.5, -1.0, 1.25, -1.5, 0.75, 2.5, -0.25, 3.0];

/// Runs every check for the configuration. Only invalid input is an `Err`;
/// internal failures become failed checks.
pub fn verify(cfg: &Config) -> Result<VerifyReport> {
    cfg.validate()?;
    let g = cfg.genus;
    let mut checks = Vec::new();
    let mut not_run = Vec::new();

    let l4 = build_l4(g, &cfg.params)?;
    let q = match QPolynomial::build(g, &cfg.params) {
        Ok(q) => apply_q_fault(q, cfg.fault),
        Err(e) => {
            checks.push(Check::exact("Q", "Q from the delta recursion", Err(e)));
            return Ok(finish(cfg, checks, not_run));
        }
    };
    if let Err(e) = cfg.guard("Q", q.q.len()) {
        checks.push(Check::exact("term limit", "intermediate size", Err(e)));
        return Ok(finish(cfg, checks, not_run));
    }

    checks.push(Check::exact(
        "Q ode",
        "linear fifth-order ODE in x satisfied by Q",
        Ok(q.ode_residual().len()),
    ));
    checks.push(Check::boolean("Q monic", "Q monic of degree g in z", Ok(is_monic_in_z(&q))));
    checks.push(Check::exact(
        "derivative identity",
        "x-derivative of the first integral, divided by 2Q",
        Ok(q.derivative_identity_residual(DerivativeIdentityReading::Derived).len()),
    ));
    checks.push(Check::boolean("L4 self-adjoint", "L4 equals its formal adjoint", Ok(l4.is_self_adjoint())));

    let curve = q.extract_f().map(|c| apply_f_fault(c, cfg.fault));
    checks.push(Check::boolean(
        "F shape",
        "first integral F is free of x, monic of degree 2g+1",
        curve.as_ref().map(|_| true).map_err(Clone::clone),
    ));
    let curve = match curve {
        Ok(c) => c,
        Err(e) => {
            for (name, identity) in DEPENDS_ON_CURVE {
                checks.push(Check::exact(name, identity, Err(e.clone())));
            }
            return Ok(finish(cfg, checks, not_run));
        }
    };

    checks.push(Check::exact(
        "first integral",
        "4F equals the first integral of the Q equation",
        Ok(q.first_integral_residual(&curve).len()),
    ));
    checks.push(Check::exact(
        "root sum",
        "W = 2 [z^(g-1)] Q - c_2g",
        Ok(q.root_sum_residual(&curve).len()),
    ));
    checks.push(Check::boolean(
        "curve nonsingular",
        "disc_z F nonzero",
        Ok(if cfg.params.is_fully_numeric() {
            curve.is_nonsingular(&cfg.params).unwrap_or(false)
        } else {
            !curve.discriminant().is_zero()
        }),
    ));

    let (chi0, chi1) = build_chi(&q, &curve);
    checks.push(Check::exact(
        "eigenfunction reduction",
        "L4 psi = z psi on psi'' = chi1 psi' + chi0 psi (P1 - z = 0, P2 = 0)",
        verify_eigen_reduction(&chi0, &chi1, &l4).map(|(r1, r2)| r1.terms() + r2.terms()),
    ));

    let n = cfg.series_order();
    let series = expand_at_infinity(&chi0, n).and_then(|s0| Ok((s0, expand_at_infinity(&chi1, n)?)));
    match series.and_then(|(s0, s1): (LaurentSeries, LaurentSeries)| leading_terms_check(&s0, &s1, &q, &curve, &l4)) {
        Ok(report) => {
            for (name, ok) in report.checks {
                checks.push(Check::boolean(
                    &format!("series: {name}"),
                    "expansion of chi0, chi1 at infinity in k = 1/sqrt(z)",
                    Ok(ok),
                ));
            }
        }
        Err(e) => checks.push(Check::exact("series", "expansion at infinity", Err(e))),
    }

    let m = apply_m_fault(build_m(&q, &l4), cfg.fault);
    if let Err(e) = cfg.guard("M", m.max_terms()) {
        checks.push(Check::exact("term limit", "intermediate size", Err(e)));
        return Ok(finish(cfg, checks, not_run));
    }
    checks.push(Check::boolean(
        "M order",
        "ord M = 4g+2, monic; gcd(4, 4g+2) = 2",
        Ok(m.order() == Some(4 * g as usize + 2) && m.is_monic()),
    ));
    checks.push(Check::exact("commutation", "[L4, M] = 0", Ok(op_terms(&l4.commutator(&m)))));
    checks.push(Check::exact(
        "spectral relation",
        "M^2 = F(L4)",
        bc_residual(&m, &l4, &curve).map(|r| op_terms(&r)),
    ));
    checks.push(Check::boolean("M self-adjoint", "M equals its formal adjoint", Ok(m.is_self_adjoint())));

    if cfg.params.is_fully_numeric() {
        numeric_checks(cfg, &q, &curve, &mut checks);
    } else {
        not_run.push(NotRun {
            name: "float checks at the roots of Q".into(),
            reason: "parameters are symbolic".into(),
        });
    }
    Ok(finish(cfg, checks, not_run))
}

const DEPENDS_ON_CURVE: [(&str, &str); 5] = [
    ("first integral", "4F equals the first integral of the Q equation"),
    ("root sum", "W = 2 [z^(g-1)] Q - c_2g"),
    ("eigenfunction reduction", "L4 psi = z psi on psi'' = chi1 psi' + chi0 psi"),
    ("commutation", "[L4, M] = 0"),
    ("spectral relation", "M^2 = F(L4)"),
];

fn is_monic_in_z(q: &QPolynomial) -> bool {
    q.z_coeffs().len() == q.genus as usize + 1 && q.z_coeffs().last() == Some(&Poly::one())
}

fn numeric_checks(cfg: &Config, q: &QPolynomial, curve: &SpectralCurve, checks: &mut Vec<Check>) {
    let tol = &cfg.tolerances;
    let ctx = match NumericContext::new(q, curve) {
        Ok(c) => c,
        Err(e) => {
            checks.push(Check::numeric("float evaluation", f64::NAN, Err(e)));
            return;
        }
    };
    let mut used = 0;
    for &x0 in SAMPLE_POINTS.iter() {
        if used == cfg.samples {
            break;
        }
        let point = sample_point(&ctx, x0, cfg.step, tol);
        match point {
            Err(Error::DegenerateDerivative | Error::BranchTracking) => continue,
            Err(e) => {
                checks.push(Check::numeric("distinct roots of Q", x0, Err(e)));
                used += 1;
            }
            Ok(found) => {
                checks.extend(found);
                used += 1;
            }
        }
    }
    if used < cfg.samples {
        checks.push(Check::numeric(
            "sample points",
            f64::NAN,
            Err(Error::Param(format!("only {used} usable sample points"))),
        ));
    }
}

fn sample_point(ctx: &NumericContext, x0: f64, h: f64, tol: &Tolerances) -> Result<Vec<Check>> {
    let roots = roots_z(ctx, x0, tol)?;
    let potential = verify_potential_from_roots(ctx, x0, tol)?;
    let pole_relation = verify_pole_relation(ctx, x0, h, tol)?;
    let fd = gamma_prime_fd_residual(ctx, &roots, h, tol)?;
    let [pairwise, value] = potential.checks(tol);
    Ok(vec![
        Check::numeric(
            "distinct roots of Q",
            x0,
            Ok(NumericCheck::new("roots of Q distinct", 0.0, 0.0)),
        ),
        Check::numeric(
            "roots reproduce Q",
            x0,
            Ok(NumericCheck::new("prod (z - gamma_i) = Q", reexpansion_residual(ctx, &roots), tol.reexpand)),
        ),
        Check::numeric(
            "w^2 = F at the poles",
            x0,
            Ok(NumericCheck::new("w_i^2 = F(gamma_i)", curve_residual(ctx, &roots), tol.reexpand)),
        ),
        Check::numeric(
            "gamma' by implicit differentiation",
            x0,
            Ok(NumericCheck::new("gamma' = -Q_x / Q_z", fd, tol.krichever)),
        ),
        Check::numeric("V from roots", x0, Ok(pairwise)),
        Check::numeric("V from roots", x0, Ok(value)),
        Check::numeric(
            "residues and regular parts at the poles",
            x0,
            Ok(pole_relation.check(tol)),
        ),
    ])
}

fn finish(cfg: &Config, checks: Vec<Check>, not_run: Vec<NotRun>) -> VerifyReport {
    let passed = checks.iter().filter(|c| c.pass).count();
    VerifyReport {
        genus: cfg.genus,
        params: cfg.params.clone(),
        fault: cfg.fault,
        failed: checks.len() - passed,
        passed,
        checks,
        not_run,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    #[test]
    fn symbolic_slice_verifies() {
        let cfg = Config::new(2, Params::dixmier_slice());
        let r = verify(&cfg).unwrap();
        assert!(r.all_pass(), "{:?}", r.failing().collect::<Vec<_>>());
        assert_eq!(r.not_run.len(), 1);
    }

    #[test]
    fn numeric_tuple_verifies() {
        let p = Params::numeric(rat(1, 2), rat(-1, 3), rat(2, 1), rat(3, 2)).unwrap();
        let r = verify(&Config::new(2, p)).unwrap();
        assert!(r.all_pass(), "{:?}", r.failing().collect::<Vec<_>>());
        assert!(r.checks.iter().any(|c| c.kind == CheckKind::Numeric));
    }

    #[test]
    fn faults_are_flagged() {
        let p = Params::numeric(rat(1, 1), rat(0, 1), rat(0, 1), rat(1, 1)).unwrap();
        for (fault, flagged) in [(Fault::Q, "Q ode"), (Fault::F, "spectral relation"), (Fault::M, "commutation")] {
            let mut cfg = Config::new(2, p.clone());
            cfg.fault = Some(fault);
            let r = verify(&cfg).unwrap();
            assert!(!r.all_pass());
            assert!(r.failing().any(|c| c.name == flagged), "{fault:?}");
        }
    }

    #[test]
    fn term_limit_trips() {
        let mut cfg = Config::new(3, Params::dixmier_slice());
        cfg.max_terms = Some(3);
        assert!(matches!(construct(&cfg, false), Err(Error::TermLimit { .. })));
        assert!(!verify(&cfg).unwrap().all_pass());
    }

    #[test]
    fn construct_is_deterministic() {
        let cfg = Config::new(2, Params::dixmier_slice());
        let a = serde_json::to_string(&construct(&cfg, false).unwrap()).unwrap();
        let b = serde_json::to_string(&construct(&cfg, false).unwrap()).unwrap();
        assert_eq!(a, b);
        assert!(!a.contains("timings_ms"));
    }

    #[test]
    fn genus_zero_rejected() {
        let cfg = Config::new(0, Params::dixmier_slice());
        assert!(matches!(verify(&cfg), Err(Error::Param(_))));
    }
}
