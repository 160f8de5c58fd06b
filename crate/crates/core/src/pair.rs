//! The commuting pair `L₄ = (∂² + V)² + W` and `M` of order `4g+2`.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;

use crate::curve::SpectralCurve;
use crate::error::{Error, Result};
use crate::linsolve::solve_affine;
use crate::params::Params;
use crate::poly::{rat, rat_int, Poly, Rat, Var};
use crate::qsolver::QPolynomial;
use crate::weyl::DiffOp;

/// `∂² + V`.
pub fn schrodinger(params: &Params) -> DiffOp {
    &DiffOp::d_pow(2) + &DiffOp::mul_by(params.potential_v())
}

/// `L₄ = (∂² + V)² + W` with `W = g(g+1) a3 x`.
pub fn build_l4(genus: u32, params: &Params) -> Result<DiffOp> {
    if genus == 0 {
        return Err(Error::Param("genus must be at least 1".into()));
    }
    if params.get(Var::A3).is_some_and(Zero::is_zero) {
        return Err(Error::Param("a3 must be nonzero".into()));
    }
    let h = schrodinger(params);
    Ok(&h.compose(&h) + &DiffOp::mul_by(params.potential_w(genus)))
}

/// `M = Σ_j (q_j (∂² + V) − q_j′ ∂ + ½ q_j″) ∘ L₄ʲ` where `Q = Σ_j q_j(x) zʲ`.
///
/// On a common eigenfunction with `L₄ψ = zψ` this acts as multiplication by
/// `w`, using `ψ″ = (Q′/Q) ψ′ + χ₀ ψ`. The branch is fixed by the leading
/// coefficient `+1`.
pub fn build_m(q: &QPolynomial, l4: &DiffOp) -> DiffOp {
    let h = &DiffOp::d_pow(2) + &DiffOp::mul_by(q.v.clone());
    let half = rat(1, 2);
    let mut acc = DiffOp::zero();
    // Horner in L₄ with coefficients on the left
    for qj in q.z_coeffs().iter().rev() {
        let qj1 = qj.dx();
        let qj2 = qj1.dx();
        let term = &(&h.left_mul_poly(qj) - &DiffOp::d().left_mul_poly(&qj1))
            + &DiffOp::mul_by(qj2.scale(&half));
        acc = &acc.compose(l4) + &term;
    }
    acc
}

/// `M² − F(L₄)`.
pub fn bc_residual(m: &DiffOp, l4: &DiffOp, curve: &SpectralCurve) -> Result<DiffOp> {
    let mut cs = curve.coeffs().to_vec();
    cs.push(Poly::one());
    Ok(&m.compose(m) - &DiffOp::poly_of_op(&cs, l4)?)
}

#[derive(Clone, Debug, Serialize)]
pub struct OperatorPair {
    #[serde(rename = "g")]
    pub genus: u32,
    #[serde(rename = "L4")]
    pub l4: DiffOp,
    #[serde(rename = "M")]
    pub m: DiffOp,
    #[serde(rename = "F")]
    pub curve: SpectralCurve,
    #[serde(rename = "Q")]
    pub q: QPolynomial,
}

impl OperatorPair {
    pub fn build(genus: u32, params: &Params) -> Result<Self> {
        let l4 = build_l4(genus, params)?;
        let q = QPolynomial::build(genus, params)?;
        let curve = q.extract_f()?;
        let m = build_m(&q, &l4);
        Ok(OperatorPair {
            genus,
            l4,
            m,
            curve,
            q,
        })
    }

    /// `[L₄, M]`.
    pub fn verify_commutation(&self) -> DiffOp {
        self.l4.commutator(&self.m)
    }

    /// `M² − F(L₄)`.
    pub fn verify_bc(&self) -> Result<DiffOp> {
        bc_residual(&self.m, &self.l4, &self.curve)
    }

    /// `gcd(ord L₄, ord M)`.
    pub fn rank(&self) -> usize {
        let a = self.l4.order().unwrap_or(0);
        let b = self.m.order().unwrap_or(0);
        a.gcd(&b)
    }
}

/// Monic operators of a fixed order commuting with `L₄`, within a
/// per-coefficient x-degree bound: `particular + span(kernel)`.
#[derive(Clone, Debug)]
pub struct CommutantSpace {
    pub order: usize,
    pub slack: u32,
    pub particular: DiffOp,
    pub kernel: Vec<DiffOp>,
    bounds: Vec<u32>,
}

impl CommutantSpace {
    pub fn affine_dimension(&self) -> usize {
        self.kernel.len()
    }

    /// Whether `op` lies in the affine solution space.
    pub fn contains(&self, op: &DiffOp) -> bool {
        if op.order() != Some(self.order) || !op.is_monic() {
            return false;
        }
        let Some(target) = flatten(&(op - &self.particular), &self.bounds) else {
            return false;
        };
        let n = self.kernel.len();
        let cols: Vec<Vec<Rat>> = self
            .kernel
            .iter()
            .map(|k| flatten(k, &self.bounds).expect("kernel lies within the bounds"))
            .collect();
        let rows: Vec<Vec<Rat>> = (0..target.len())
            .map(|r| cols.iter().map(|c| c[r].clone()).collect())
            .collect();
        solve_affine(&rows, &target, n).is_some()
    }
}

/// x-degree bound for the coefficient of `∂^i` in an operator of the given
/// order, from the grading `wt(x) = 2`, `wt(∂) = 3` that makes `∂² + x³`
/// homogeneous.
pub fn degree_bound(order: usize, i: usize, slack: u32) -> u32 {
    (3 * (order - i)).div_ceil(2) as u32 + slack
}

/// Coefficients of `op` (rational, x only) in the layout `(i, d) ↦ x^d ∂^i`,
/// `i < bounds.len()`. `None` if some term falls outside.
fn flatten(op: &DiffOp, bounds: &[u32]) -> Option<Vec<Rat>> {
    if op.order().is_some_and(|o| o >= bounds.len()) {
        return None;
    }
    let mut out = Vec::new();
    for (i, &b) in bounds.iter().enumerate() {
        let c = op.coeff(i);
        let cs = c.coeffs_in(Var::X);
        if cs.len() > b as usize + 1 {
            return None;
        }
        for d in 0..=b as usize {
            let cd = cs.get(d).cloned().unwrap_or_default();
            out.push(cd.as_constant()?);
        }
    }
    Some(out)
}

fn unflatten(values: &[Rat], bounds: &[u32]) -> DiffOp {
    let mut it = values.iter();
    let coeffs = bounds
        .iter()
        .map(|&b| {
            let cs: Vec<Poly> = (0..=b).map(|_| Poly::constant(it.next().expect("length").clone())).collect();
            Poly::from_coeffs_in(Var::X, &cs)
        })
        .collect();
    DiffOp::from_coeffs(coeffs).expect("x-only coefficients")
}

/// Solves `[L₄, M] = 0` for monic `M` of the given order whose coefficient of
/// `∂^i` has x-degree at most [`degree_bound`]. Requires numeric `L₄`.
pub fn commutant_solve(l4: &DiffOp, order: usize, slack: u32) -> Result<CommutantSpace> {
    for c in l4.coeffs() {
        if let Some(v) = Var::PARAMS.iter().find(|v| !c.is_free_of(**v)) {
            return Err(Error::SymbolicValue(*v));
        }
    }
    let bounds: Vec<u32> = (0..order).map(|i| degree_bound(order, i, slack)).collect();
    // one column per unknown x^d ∂^i; equations indexed by (∂-power, x-power)
    let mut columns: Vec<BTreeMap<(usize, u16), Rat>> = Vec::new();
    for (i, &b) in bounds.iter().enumerate() {
        for d in 0..=b {
            let basis = DiffOp::d_pow(i).left_mul_poly(&Poly::x().pow(d));
            columns.push(commutator_entries(l4, &basis));
        }
    }
    let fixed = commutator_entries(l4, &DiffOp::d_pow(order));
    let mut keys: Vec<(usize, u16)> = fixed.keys().copied().collect();
    for c in &columns {
        keys.extend(c.keys().copied());
    }
    keys.sort_unstable();
    keys.dedup();
    let rows: Vec<Vec<Rat>> = keys
        .iter()
        .map(|k| columns.iter().map(|c| c.get(k).cloned().unwrap_or_default()).collect())
        .collect();
    let rhs: Vec<Rat> = keys.iter().map(|k| -fixed.get(k).cloned().unwrap_or_default()).collect();
    let sol = solve_affine(&rows, &rhs, columns.len()).ok_or(Error::DegreeBoundTooSmall(slack))?;
    let particular = &unflatten(&sol.particular, &bounds) + &DiffOp::d_pow(order);
    let kernel = sol.kernel.iter().map(|k| unflatten(k, &bounds)).collect();
    let mut full_bounds = bounds;
    full_bounds.push(0);
    Ok(CommutantSpace {
        order,
        slack,
        particular,
        kernel,
        bounds: full_bounds,
    })
}

fn commutator_entries(l4: &DiffOp, op: &DiffOp) -> BTreeMap<(usize, u16), Rat> {
    let mut out = BTreeMap::new();
    for (i, c) in l4.commutator(op).coeffs().iter().enumerate() {
        for (m, r) in c.terms() {
            out.insert((i, m.exp(Var::X)), r.clone());
        }
    }
    out
}

/// Runs [`commutant_solve`] with growing slack until the space contains `m`.
pub fn commutant_containing(l4: &DiffOp, m: &DiffOp, max_slack: u32) -> Result<CommutantSpace> {
    let order = m.order().ok_or(Error::DegreeBoundTooSmall(0))?;
    for slack in 0..=max_slack {
        match commutant_solve(l4, order, slack) {
            Ok(space) if space.contains(m) => return Ok(space),
            Ok(_) | Err(Error::DegreeBoundTooSmall(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::DegreeBoundTooSmall(max_slack))
}

/// Result of checking that `m` is the only monic element of `space` whose
/// square is a polynomial in `L₄`.
#[derive(Clone, Debug, Serialize)]
pub struct UniquenessReport {
    /// Every kernel direction is a polynomial in `L₄`.
    pub kernel_in_l4_ring: bool,
    /// `M²` is a polynomial in `L₄`.
    pub square_in_l4_ring: bool,
    /// `(M + P)²` is not, for each probed nonzero `P`.
    pub perturbed_squares_rejected: usize,
    pub probes: usize,
}

impl UniquenessReport {
    pub fn holds(&self) -> bool {
        self.kernel_in_l4_ring && self.square_in_l4_ring && self.perturbed_squares_rejected == self.probes
    }
}

/// If every kernel direction `P` is a polynomial in `L₄`, then
/// `(M + P)² − M² = 2PM + P²` has `PM` of order `≡ 2 (mod 4)`, so it cannot
/// be a polynomial in `L₄` unless `P = 0`. This checks the hypotheses and
/// probes each basis direction and the all-ones combination directly.
pub fn check_uniqueness(space: &CommutantSpace, m: &DiffOp, l4: &DiffOp) -> UniquenessReport {
    let kernel_in_l4_ring = space.kernel.iter().all(|k| k.as_poly_in(l4).is_some());
    let square_in_l4_ring = m.compose(m).as_poly_in(l4).is_some();
    let mut probes: Vec<DiffOp> = space.kernel.clone();
    if space.kernel.len() > 1 {
        probes.push(space.kernel.iter().fold(DiffOp::zero(), |acc, k| &acc + k));
    }
    let rejected = probes
        .iter()
        .filter(|p| {
            let n = m + *p;
            n.compose(&n).as_poly_in(l4).is_none()
        })
        .count();
    UniquenessReport {
        kernel_in_l4_ring,
        square_in_l4_ring,
        perturbed_squares_rejected: rejected,
        probes: probes.len(),
    }
}

/// One summand of a printed formula in `H = ∂² + x³ + a0`.
#[derive(Clone, Debug, PartialEq)]
pub enum PrintedTerm {
    /// `c·Hᵏ`
    Power { coeff: Rat, power: u32 },
    /// `c·⟨p, Hᵏ⟩ = c(p Hᵏ + Hᵏ p)`
    Anti { coeff: Rat, poly: Poly, power: u32 },
    /// `c·p`
    Mult { coeff: Rat, poly: Poly },
}

/// A printed operator formula together with the printed spectral curve.
#[derive(Clone, Debug)]
pub struct PrintedExample {
    pub name: &'static str,
    pub genus: u32,
    pub curve: Poly,
    pub terms: Vec<PrintedTerm>,
}

impl PrintedExample {
    pub fn expand(&self) -> DiffOp {
        let h = schrodinger(&Params::dixmier_slice());
        let mut powers = vec![DiffOp::one()];
        let mut pow = |k: u32| {
            while powers.len() <= k as usize {
                let next = powers.last().expect("nonempty").compose(&h);
                powers.push(next);
            }
            powers[k as usize].clone()
        };
        self.terms.iter().fold(DiffOp::zero(), |acc, t| {
            let op = match t {
                PrintedTerm::Power { coeff, power } => pow(*power).scale(coeff),
                PrintedTerm::Anti { coeff, poly, power } => {
                    let p = DiffOp::mul_by(poly.clone());
                    p.anticommutator(&pow(*power)).scale(coeff)
                }
                PrintedTerm::Mult { coeff, poly } => DiffOp::mul_by(poly.scale(coeff)),
            };
            &acc + &op
        })
    }

    /// Replaces the coefficient of term `index`.
    pub fn with_coeff(&self, index: usize, value: Rat) -> Self {
        let mut out = self.clone();
        match &mut out.terms[index] {
            PrintedTerm::Power { coeff, .. }
            | PrintedTerm::Anti { coeff, .. }
            | PrintedTerm::Mult { coeff, .. } => *coeff = value,
        }
        out
    }
}

fn a0() -> Poly {
    Poly::var(Var::A0)
}

/// Genus 2: `H⁵ + 15/2⟨x, H³⟩ + 45⟨x², H⟩`, `w² = z⁵ + 27a0z² + 81`.
pub fn printed_genus_two() -> PrintedExample {
    let (x, z) = (Poly::x(), Poly::z());
    PrintedExample {
        name: "genus 2 pair",
        genus: 2,
        curve: z.pow(5) + Poly::int(27) * a0() * z.pow(2) + Poly::int(81),
        terms: vec![
            PrintedTerm::Power { coeff: rat_int(1), power: 5 },
            PrintedTerm::Anti { coeff: rat(15, 2), poly: x.clone(), power: 3 },
            PrintedTerm::Anti { coeff: rat_int(45), poly: x.pow(2), power: 1 },
        ],
    }
}

/// Genus 3: `H⁷ + 21⟨x, H⁵⟩ + 945/2⟨x², H³⟩ − 5418H² + 45/2⟨113a0 + 287x³, H⟩ − 486x`,
/// `w² = z⁷ + 594a0z⁴ − 2025z² + 91125a0²z`.
pub fn printed_genus_three() -> PrintedExample {
    let (x, z) = (Poly::x(), Poly::z());
    PrintedExample {
        name: "genus 3 pair",
        genus: 3,
        curve: z.pow(7) + Poly::int(594) * a0() * z.pow(4) - Poly::int(2025) * z.pow(2)
            + Poly::int(91125) * a0().pow(2) * z,
        terms: vec![
            PrintedTerm::Power { coeff: rat_int(1), power: 7 },
            PrintedTerm::Anti { coeff: rat_int(21), poly: x.clone(), power: 5 },
            PrintedTerm::Anti { coeff: rat(945, 2), poly: x.pow(2), power: 3 },
            PrintedTerm::Power { coeff: rat_int(-5418), power: 2 },
            PrintedTerm::Anti {
                coeff: rat(45, 2),
                poly: Poly::int(113) * a0() + Poly::int(287) * x.pow(3),
                power: 1,
            },
            PrintedTerm::Mult { coeff: rat_int(-486), poly: x },
        ],
    }
}

/// Coefficient-level comparison of a printed example with the constructed pair.
#[derive(Clone, Debug, Serialize)]
pub struct ExampleReport {
    pub name: String,
    #[serde(rename = "g")]
    pub genus: u32,
    pub curve_matches: bool,
    pub curve_printed: String,
    pub curve_computed: String,
    pub operator_matches: bool,
    /// `(i, constructed − printed)` for each differing coefficient of `∂^i`.
    pub coefficient_diffs: Vec<(usize, String)>,
    /// When the difference is a polynomial in `L₄`, its coefficients.
    pub diff_as_poly_in_l4: Option<Vec<String>>,
    /// Whether the printed operator itself commutes with `L₄`.
    pub printed_commutes: bool,
    /// Whether the printed operator squares to the printed curve polynomial in `L₄`.
    pub printed_satisfies_curve: bool,
}

impl ExampleReport {
    pub fn matches(&self) -> bool {
        self.curve_matches && self.operator_matches
    }
}

pub fn compare_example(example: &PrintedExample) -> Result<ExampleReport> {
    let params = Params::dixmier_slice();
    let pair = OperatorPair::build(example.genus, &params)?;
    let printed = example.expand();
    let diff = &pair.m - &printed;
    let n = diff.coeffs().len();
    let coefficient_diffs = (0..n)
        .filter(|&i| !diff.coeff(i).is_zero())
        .map(|i| (i, diff.coeff(i).to_string()))
        .collect();
    let diff_as_poly_in_l4 = if diff.is_zero() {
        None
    } else {
        diff.as_poly_in(&pair.l4)
            .map(|cs| cs.iter().map(Poly::to_string).collect())
    };
    let computed = pair.curve.poly();
    Ok(ExampleReport {
        name: example.name.to_string(),
        genus: example.genus,
        curve_matches: computed == example.curve,
        curve_printed: example.curve.to_string(),
        curve_computed: computed.to_string(),
        operator_matches: diff.is_zero(),
        coefficient_diffs,
        diff_as_poly_in_l4,
        printed_commutes: pair.l4.commutator(&printed).is_zero(),
        printed_satisfies_curve: SpectralCurve::from_poly(example.genus, &example.curve)
            .and_then(|c| bc_residual(&printed, &pair.l4, &c))
            .is_ok_and(|r| r.is_zero()),
    })
}

/// Both printed examples.
pub fn match_printed_examples() -> Result<Vec<ExampleReport>> {
    [printed_genus_two(), printed_genus_three()]
        .iter()
        .map(compare_example)
        .collect()
}
