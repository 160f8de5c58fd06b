//! Float checks at the roots of Q(x0, z).

use weyl_commute::numeric::{
    curve_residual, reexpansion_residual, roots_z, verify_potential_from_roots, verify_pole_relation, NumericContext, Tolerances,
};
use weyl_commute::params::Params;
use weyl_commute::poly::rat_int;
use weyl_commute::qsolver::QPolynomial;

fn main() {
    let tol = Tolerances::default();
    let p = Params::numeric(rat_int(1), rat_int(0), rat_int(0), rat_int(1)).unwrap();
    for g in 1..=3 {
        let q = QPolynomial::build(g, &p).unwrap();
        let ctx = NumericContext::new(&q, &q.extract_f().unwrap()).unwrap();
        for x0 in [0.5, 1.0, 2.0] {
            let r = roots_z(&ctx, x0, &tol).unwrap();
            let pot = verify_potential_from_roots(&ctx, x0, &tol).unwrap();
            let kr = verify_pole_relation(&ctx, x0, 1e-4, &tol).unwrap();
            println!(
                "g = {g} x0 = {x0}: roots {:?}; re-expand {:.1e}; w^2 - F {:.1e}; V {:.1e}/{:.1e}; poles {:.1e}",
                r.gammas.iter().map(|z| format!("{:.4}{:+.4}i", z.re, z.im)).collect::<Vec<_>>(),
                reexpansion_residual(&ctx, &r),
                curve_residual(&ctx, &r),
                pot.pairwise,
                pot.against_potential,
                kr.max_residual,
            );
        }
    }
}
