//! Floating-point checks at the roots `γ_i(x)` of `Q(x, z)` in z, for
//! statements the exact layer cannot reach: distinctness of the roots, the
//! root-wise formula for `V`, and the relation between residues and regular
//! parts of `χ₀, χ₁` at their poles.
//!
//! Poles are expanded in the local parameter `z − γ_i(x)`, so near `γ_i`
//! `χ₁ = −γ_i′/(z − γ_i) + d₁ + …` and `χ₀ = −v γ_i′/(z − γ_i) + d₀ + …`.

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::curve::SpectralCurve;
use crate::error::{Error, Result};
use crate::poly::{Poly, Var};
use crate::qsolver::QPolynomial;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Tolerances {
    /// Relative residual `|Q(γ)| / Σ|q_j||γ|^j` accepted for a root.
    pub root: f64,
    /// Minimal `|γ_i − γ_j| / max(1, |γ|)`.
    pub separation: f64,
    pub corollary: f64,
    pub krichever: f64,
    pub reexpand: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            root: 1e-12,
            separation: 1e-8,
            corollary: 1e-8,
            krichever: 1e-6,
            reexpand: 1e-10,
        }
    }
}

/// A polynomial in x and z with float coefficients; `c[j][d]` multiplies `zʲ xᵈ`.
#[derive(Clone, Debug, Default)]
struct FloatPoly {
    c: Vec<Vec<f64>>,
}

impl FloatPoly {
    fn from_poly(p: &Poly) -> Result<Self> {
        if let Some(v) = Var::PARAMS.iter().find(|v| !p.is_free_of(**v)) {
            return Err(Error::SymbolicValue(*v));
        }
        let c = p
            .coeffs_in(Var::Z)
            .iter()
            .map(|cz| {
                cz.coeffs_in(Var::X)
                    .iter()
                    .map(|cx| cx.as_constant().and_then(|r| r.to_f64()).unwrap_or(f64::NAN))
                    .collect()
            })
            .collect();
        Ok(FloatPoly { c })
    }

    fn dx(&self) -> Self {
        let c = self
            .c
            .iter()
            .map(|row| row.iter().enumerate().skip(1).map(|(d, v)| d as f64 * v).collect())
            .collect();
        FloatPoly { c }
    }

    fn dz(&self) -> Self {
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, row)| row.iter().map(|v| j as f64 * v).collect())
            .collect();
        FloatPoly { c }
    }

    /// Coefficients in z at a fixed x.
    fn at_x(&self, x: f64) -> Vec<f64> {
        self.c
            .iter()
            .map(|row| row.iter().rev().fold(0.0, |acc, v| acc * x + v))
            .collect()
    }

    fn eval(&self, x: f64, z: Complex64) -> Complex64 {
        horner(&self.at_x(x), z)
    }
}

fn horner(cs: &[f64], z: Complex64) -> Complex64 {
    cs.iter().rev().fold(Complex64::zero(), |acc, v| acc * z + v)
}

/// Float images of `Q`, its partial derivatives, `F` and `V` at fixed
/// numeric parameters.
#[derive(Clone, Debug)]
pub struct NumericContext {
    pub genus: u32,
    q: FloatPoly,
    qx: FloatPoly,
    qxx: FloatPoly,
    qxxx: FloatPoly,
    qz: FloatPoly,
    qzz: FloatPoly,
    qxz: FloatPoly,
    qxxz: FloatPoly,
    f: Vec<f64>,
    fz: Vec<f64>,
    v: Vec<f64>,
}

impl NumericContext {
    pub fn new(q: &QPolynomial, curve: &SpectralCurve) -> Result<Self> {
        let fq = FloatPoly::from_poly(&q.q)?;
        let f = FloatPoly::from_poly(&curve.poly())?;
        let v = FloatPoly::from_poly(&q.v)?;
        let qx = fq.dx();
        let qxx = qx.dx();
        let qz = fq.dz();
        Ok(NumericContext {
            genus: q.genus,
            qxxx: qxx.dx(),
            qzz: qz.dz(),
            qxz: qx.dz(),
            qxxz: qxx.dz(),
            f: f.at_x(0.0),
            fz: f.dz().at_x(0.0),
            v: v.c.first().cloned().unwrap_or_default(),
            q: fq,
            qx,
            qxx,
            qz,
        })
    }

    pub fn potential(&self, x: f64) -> f64 {
        self.v.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    pub fn curve_at(&self, z: Complex64) -> Complex64 {
        horner(&self.f, z)
    }

    /// Coefficients of `Q(x, ·)`, constant term first.
    pub fn q_at(&self, x: f64) -> Vec<f64> {
        self.q.at_x(x)
    }
}

/// Roots of `Q(x₀, z)` with the data attached to the poles over them.
#[derive(Clone, Debug, Serialize)]
pub struct RootData {
    pub x0: f64,
    pub gammas: Vec<Complex64>,
    /// Principal `√F(γ_i)`; the other branch is its negative.
    pub w_values: Vec<Complex64>,
    /// `γ_i′ = −∂ₓQ / ∂_zQ` at `(x₀, γ_i)`.
    pub gamma_primes: Vec<Complex64>,
}

const MAX_ITERATIONS: usize = 2000;

/// Durand–Kerner iteration on a monic polynomial (constant term first).
fn durand_kerner(cs: &[f64], tol: f64) -> Result<Vec<Complex64>> {
    let n = cs.len() - 1;
    let lead = cs[n];
    let monic: Vec<f64> = cs.iter().map(|c| c / lead).collect();
    let radius = 1.0 + monic[..n].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(0.5 * radius, 0.4 + std::f64::consts::TAU * k as f64 / n as f64))
        .collect();
    let p = |w: Complex64| horner(&monic, w);
    let dp: Vec<f64> = monic.iter().enumerate().skip(1).map(|(j, c)| j as f64 * c).collect();
    for _ in 0..MAX_ITERATIONS {
        let mut step = 0.0f64;
        for k in 0..n {
            let denom = (0..n)
                .filter(|&j| j != k)
                .fold(Complex64::new(1.0, 0.0), |acc, j| acc * (z[k] - z[j]));
            let delta = p(z[k]) / denom;
            z[k] -= delta;
            step = step.max(delta.norm() / (1.0 + z[k].norm()));
        }
        if step < 1e-15 {
            break;
        }
    }
    // Newton polish
    for zk in z.iter_mut() {
        for _ in 0..2 {
            let d = horner(&dp, *zk);
            if d.norm() > 0.0 {
                *zk -= p(*zk) / d;
            }
        }
    }
    let mut worst = 0.0f64;
    for zk in &z {
        let scale: f64 = monic.iter().enumerate().map(|(j, c)| c.abs() * zk.norm().powi(j as i32)).sum();
        worst = worst.max(p(*zk).norm() / scale.max(f64::MIN_POSITIVE));
    }
    // also rejects NaN
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(worst <= tol) {
        return Err(Error::Convergence {
            iterations: MAX_ITERATIONS,
            residual: worst,
        });
    }
    z.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(z)
}

/// All `g` roots of `Q(x₀, z)`, checked to be pairwise separated.
pub fn roots_z(ctx: &NumericContext, x0: f64, tol: &Tolerances) -> Result<RootData> {
    let cs = ctx.q.at_x(x0);
    let gammas = durand_kerner(&cs, tol.root)?;
    for i in 0..gammas.len() {
        for j in i + 1..gammas.len() {
            let scale = 1f64.max(gammas[i].norm()).max(gammas[j].norm());
            if (gammas[i] - gammas[j]).norm() <= tol.separation * scale {
                return Err(Error::MultipleRoot(i, j));
            }
        }
    }
    let w_values = gammas.iter().map(|g| ctx.curve_at(*g).sqrt()).collect();
    let gamma_primes = gammas
        .iter()
        .map(|g| -ctx.qx.eval(x0, *g) / ctx.qz.eval(x0, *g))
        .collect();
    Ok(RootData {
        x0,
        gammas,
        w_values,
        gamma_primes,
    })
}

/// One named float check for reports.
#[derive(Clone, Debug, Serialize)]
pub struct NumericCheck {
    pub name: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl NumericCheck {
    pub fn new(name: impl Into<String>, max_residual: f64, tolerance: f64) -> Self {
        NumericCheck {
            name: name.into(),
            max_residual,
            tolerance,
            pass: max_residual <= tolerance,
        }
    }
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / 1f64.max(a.norm()).max(b.norm())
}

/// `((Q″)² − 2Q′Q‴ − 4F) / (4(Q′)²)` at each root, x-derivatives throughout.
#[derive(Clone, Debug, Serialize)]
pub struct PotentialFromRoots {
    pub x0: f64,
    pub values: Vec<Complex64>,
    pub potential: f64,
    /// Largest relative difference between two roots' values.
    pub pairwise: f64,
    /// Largest relative difference from `V(x₀)`.
    pub against_potential: f64,
}

impl PotentialFromRoots {
    pub fn checks(&self, tol: &Tolerances) -> [NumericCheck; 2] {
        [
            NumericCheck::new("root-wise potential: equal across roots", self.pairwise, tol.corollary),
            NumericCheck::new("root-wise potential: equals V(x0)", self.against_potential, tol.corollary),
        ]
    }
}

pub fn verify_potential_from_roots(ctx: &NumericContext, x0: f64, tol: &Tolerances) -> Result<PotentialFromRoots> {
    let roots = roots_z(ctx, x0, tol)?;
    let mut values = Vec::with_capacity(roots.gammas.len());
    for g in &roots.gammas {
        let q1 = ctx.qx.eval(x0, *g);
        let scale = 1f64.max(ctx.q.at_x(x0).iter().fold(0.0, |m, c| m.max(c.abs())));
        if q1.norm() <= 1e-12 * scale {
            return Err(Error::DegenerateDerivative);
        }
        let q2 = ctx.qxx.eval(x0, *g);
        let q3 = ctx.qxxx.eval(x0, *g);
        values.push((q2 * q2 - 2.0 * q1 * q3 - 4.0 * ctx.curve_at(*g)) / (4.0 * q1 * q1));
    }
    let potential = ctx.potential(x0);
    let mut pairwise = 0.0f64;
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            pairwise = pairwise.max(rel(values[i], values[j]));
        }
    }
    let against_potential = values
        .iter()
        .map(|v| rel(*v, Complex64::new(potential, 0.0)))
        .fold(0.0, f64::max);
    Ok(PotentialFromRoots {
        x0,
        values,
        potential,
        pairwise,
        against_potential,
    })
}

/// Residues and constant terms of `χ₀, χ₁` at one pole.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct PoleParts {
    /// Residue of `χ₀`.
    pub c0: Complex64,
    /// Residue of `χ₁`.
    pub c1: Complex64,
    pub d0: Complex64,
    pub d1: Complex64,
}

impl PoleParts {
    pub fn ratio(&self) -> Complex64 {
        self.c0 / self.c1
    }
}

/// `N/Q` at a simple root `γ` of `Q`: residue `n₀/a` and constant term
/// `(n₁ − n₀ b/a)/a`, with `N = n₀ + n₁t + …`, `Q = a t + b t² + …`, `t = z − γ`.
fn simple_pole(n0: Complex64, n1: Complex64, a: Complex64, b: Complex64) -> (Complex64, Complex64) {
    (n0 / a, (n1 - n0 * b / a) / a)
}

/// Pole data over `(γ, w)` at `x`.
pub fn pole_parts(ctx: &NumericContext, x: f64, gamma: Complex64, w: Complex64) -> Result<PoleParts> {
    let a = ctx.qz.eval(x, gamma);
    let b = 0.5 * ctx.qzz.eval(x, gamma);
    if a.norm() == 0.0 || w.norm() == 0.0 {
        return Err(Error::DegenerateDerivative);
    }
    let (c1, d1) = simple_pole(ctx.qx.eval(x, gamma), ctx.qxz.eval(x, gamma), a, b);
    let v = ctx.potential(x);
    let n0 = -0.5 * ctx.qxx.eval(x, gamma) + w;
    let n1 = -0.5 * ctx.qxxz.eval(x, gamma) - v * a + horner(&ctx.fz, gamma) / (2.0 * w);
    let (c0, d0) = simple_pole(n0, n1, a, b);
    if c1.norm() == 0.0 {
        return Err(Error::DegenerateDerivative);
    }
    Ok(PoleParts { c0, c1, d0, d1 })
}

/// Follows `(γ_i, w_i)` from `base` to the roots at `x` by nearest neighbour,
/// refusing ambiguous pairings.
fn track(ctx: &NumericContext, base: &RootData, x: f64, tol: &Tolerances) -> Result<Vec<(Complex64, Complex64)>> {
    let moved = roots_z(ctx, x, tol)?;
    let mut used = vec![false; moved.gammas.len()];
    let mut out = Vec::with_capacity(base.gammas.len());
    for (g0, w0) in base.gammas.iter().zip(&base.w_values) {
        let mut dist: Vec<(f64, usize)> = moved
            .gammas
            .iter()
            .enumerate()
            .map(|(j, g)| ((g - g0).norm(), j))
            .collect();
        dist.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (d, j) = dist[0];
        if used[j] || dist.get(1).is_some_and(|(d2, _)| d >= 0.5 * d2) {
            return Err(Error::BranchTracking);
        }
        used[j] = true;
        let w = moved.w_values[j];
        let (plus, minus) = ((w - w0).norm(), (w + w0).norm());
        if plus.min(minus) >= 0.5 * plus.max(minus) {
            return Err(Error::BranchTracking);
        }
        out.push((moved.gammas[j], if plus < minus { w } else { -w }));
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct KricheverPole {
    pub root: usize,
    /// `+1` for `w = +√F(γ)` (principal), `−1` for the other sheet.
    pub branch: i8,
    pub gamma: Complex64,
    pub gamma_prime: Complex64,
    pub parts: PoleParts,
    pub v: Complex64,
    pub v_prime: Complex64,
    /// `|d₀ − (v² + v d₁ − v′)|`, relative.
    pub residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct KricheverReport {
    pub x0: f64,
    pub step: f64,
    pub poles: Vec<KricheverPole>,
    pub max_residual: f64,
}

impl KricheverReport {
    pub fn check(&self, tol: &Tolerances) -> NumericCheck {
        NumericCheck::new("pole parts: d0 = v^2 + v d1 - v'", self.max_residual, tol.krichever)
    }
}

/// Checks `d₀ = v² + v d₁ − v′` with `v = c₀/c₁` at every pole on both
/// sheets. `v′` is a central difference at steps `h` and `h/2` combined by
/// Richardson extrapolation.
pub fn verify_pole_relation(ctx: &NumericContext, x0: f64, h: f64, tol: &Tolerances) -> Result<KricheverReport> {
    let base = roots_z(ctx, x0, tol)?;
    let offsets = [h, -h, h / 2.0, -h / 2.0];
    let tracked: Vec<Vec<(Complex64, Complex64)>> = offsets
        .iter()
        .map(|dx| track(ctx, &base, x0 + dx, tol))
        .collect::<Result<_>>()?;
    let mut poles = Vec::new();
    #[allow(clippy::needless_range_loop)]
    for i in 0..base.gammas.len() {
        for branch in [1i8, -1] {
            let s = f64::from(branch);
            let gamma = base.gammas[i];
            let parts = pole_parts(ctx, x0, gamma, s * base.w_values[i])?;
            let v = parts.ratio();
            let ratio_at = |k: usize| -> Result<Complex64> {
                let (g, w) = tracked[k][i];
                Ok(pole_parts(ctx, x0 + offsets[k], g, s * w)?.ratio())
            };
            let wide = (ratio_at(0)? - ratio_at(1)?) / (2.0 * h);
            let narrow = (ratio_at(2)? - ratio_at(3)?) / h;
            let v_prime = (4.0 * narrow - wide) / 3.0;
            let rhs = v * v + v * parts.d1 - v_prime;
            let scale = [parts.d0, v * v, v * parts.d1, v_prime]
                .iter()
                .fold(1f64, |m, c| m.max(c.norm()));
            let residual = (parts.d0 - rhs).norm() / scale;
            poles.push(KricheverPole {
                root: i,
                branch,
                gamma,
                gamma_prime: base.gamma_primes[i],
                parts,
                v,
                v_prime,
                residual,
            });
        }
    }
    let max_residual = poles.iter().map(|p| p.residual).fold(0.0, f64::max);
    Ok(KricheverReport {
        x0,
        step: h,
        poles,
        max_residual,
    })
}

/// `Π(z − γ_i)` against the coefficients of `Q(x₀, z)`, relative.
pub fn reexpansion_residual(ctx: &NumericContext, roots: &RootData) -> f64 {
    let mut prod = vec![Complex64::new(1.0, 0.0)];
    for g in &roots.gammas {
        let mut next = vec![Complex64::zero(); prod.len() + 1];
        for (j, c) in prod.iter().enumerate() {
            next[j + 1] += c;
            next[j] -= c * g;
        }
        prod = next;
    }
    ctx.q_at(roots.x0)
        .iter()
        .zip(&prod)
        .map(|(c, p)| rel(Complex64::new(*c, 0.0), *p))
        .fold(0.0, f64::max)
}

/// Largest relative gap between `γ_i′` and the central difference of the
/// tracked roots over `x₀ ± h` and `x₀ ± h/2`, Richardson-combined.
pub fn gamma_prime_fd_residual(ctx: &NumericContext, roots: &RootData, h: f64, tol: &Tolerances) -> Result<f64> {
    let at = |dx: f64| track(ctx, roots, roots.x0 + dx, tol);
    let (p, m, p2, m2) = (at(h)?, at(-h)?, at(h / 2.0)?, at(-h / 2.0)?);
    Ok(roots
        .gamma_primes
        .iter()
        .enumerate()
        .map(|(i, gp)| {
            let wide = (p[i].0 - m[i].0) / (2.0 * h);
            let narrow = (p2[i].0 - m2[i].0) / h;
            rel((4.0 * narrow - wide) / 3.0, *gp)
        })
        .fold(0.0, f64::max))
}

/// `w_i² = F(γ_i)` on both sheets, relative.
pub fn curve_residual(ctx: &NumericContext, roots: &RootData) -> f64 {
    roots
        .gammas
        .iter()
        .zip(&roots.w_values)
        .flat_map(|(g, w)| [*w, -*w].map(|w| rel(w * w, ctx.curve_at(*g))))
        .fold(0.0, f64::max)
}
