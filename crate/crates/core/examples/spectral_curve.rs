//! The polynomial Q, its ODE, the curve F it determines, and F's discriminant.

use weyl_commute::params::Params;
use weyl_commute::poly::rat_int;
use weyl_commute::qsolver::{build_deltas, DerivativeIdentityReading, QPolynomial};

fn main() {
    for g in 1..=4 {
        let deltas = build_deltas(g).unwrap();
        let q = QPolynomial::build(g, &Params::dixmier_slice()).unwrap();
        let f = q.extract_f().unwrap();
        println!("g = {g}");
        println!("  deltas: {}", deltas.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(", "));
        println!("  Q = {}", q.q);
        println!("  F = {}", f.poly());
        println!("  ODE residual zero: {}", q.ode_residual().is_zero());
        println!("  first integral residual zero: {}", q.first_integral_residual(&f).is_zero());
        println!(
            "  derivative identity zero: {}",
            q.derivative_identity_residual(DerivativeIdentityReading::Derived).is_zero()
        );
        println!("  disc F = {}", f.discriminant());
    }

    let cusp = Params::numeric(rat_int(0), rat_int(0), rat_int(0), rat_int(1)).unwrap();
    let f = QPolynomial::build(1, &cusp).unwrap().extract_f().unwrap();
    println!("a0 = 0, g = 1: F = {}, nonsingular: {}", f.poly(), f.is_nonsingular(&cusp).unwrap());
}
