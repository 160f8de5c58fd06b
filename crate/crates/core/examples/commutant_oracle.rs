//! Solve [L4, M] = 0 as a linear system and compare with the closed form.

use weyl_commute::pair::{check_uniqueness, commutant_containing, commutant_solve, OperatorPair};
use weyl_commute::params::Params;
use weyl_commute::poly::rat;

fn main() {
    let p = Params::numeric(rat(1, 2), rat(-1, 3), rat(2, 1), rat(3, 2)).unwrap();
    for g in 1..=2 {
        let pair = OperatorPair::build(g, &p).unwrap();
        let space = commutant_containing(&pair.l4, &pair.m, 4).unwrap();
        println!(
            "g = {g}: affine dimension {} at slack {}, contains M: {}",
            space.affine_dimension(),
            space.slack,
            space.contains(&pair.m)
        );
        for (i, k) in space.kernel.iter().enumerate() {
            println!("  direction {i}: polynomial in L4 {:?}", k.as_poly_in(&pair.l4).map(|c| c.len() - 1));
        }
        println!("  M unique with square in C[L4]: {}", check_uniqueness(&space, &pair.m, &pair.l4).holds());
    }
    let l4 = OperatorPair::build(1, &p).unwrap().l4;
    println!("order 4: affine dimension {}", commutant_solve(&l4, 4, 0).unwrap().affine_dimension());
}
