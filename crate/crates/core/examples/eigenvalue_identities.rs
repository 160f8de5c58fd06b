//! Common eigenfunctions satisfy ψ″ = χ₁ψ′ + χ₀ψ with χ₀, χ₁ functions on the
//! curve; applying L4 under that relation gives back z·ψ.

use weyl_commute::chi::{build_chi, verify_eigen_reduction};
use weyl_commute::pair::build_l4;
use weyl_commute::params::Params;
use weyl_commute::qsolver::QPolynomial;

fn main() {
    let p = Params::dixmier_slice();
    for g in 1..=3 {
        let q = QPolynomial::build(g, &p).unwrap();
        let f = q.extract_f().unwrap();
        let (chi0, chi1) = build_chi(&q, &f);
        let (a, b, m) = chi0.parts();
        println!("g = {g}: chi0 = ({a} + ({b}) w) / Q^{m}");
        let (a, _, m) = chi1.parts();
        println!("       chi1 = ({a}) / Q^{m}");
        let (r1, r2) = verify_eigen_reduction(&chi0, &chi1, &build_l4(g, &p).unwrap()).unwrap();
        println!("       L4 psi = z psi: {}", r1.is_zero() && r2.is_zero());
    }
}
