//! Operators in the first Weyl algebra: composition, commutators, adjoints.

use weyl_commute::poly::Poly;
use weyl_commute::weyl::DiffOp;

fn main() {
    let d = DiffOp::d();
    let x = DiffOp::mul_by(Poly::x());

    // [∂, x] = 1
    println!("[D, x] = {}", d.commutator(&x));

    let h = &DiffOp::d_pow(2) + &DiffOp::mul_by(Poly::x().pow(3));
    println!("H = {h}");
    println!("H^2 = {}", h.pow(2));
    println!("<x, H> = {}", x.anticommutator(&h));
    println!("H self-adjoint: {}", h.is_self_adjoint());

    let a = &d.compose(&x) + &DiffOp::d_pow(3);
    println!("A = {a}");
    println!("A* = {}", a.adjoint());
    // Σ c_j L^j keeps c_j on the left
    let l = DiffOp::poly_of_op(&[Poly::x(), Poly::one()], &h).unwrap();
    println!("H + x = {l}");
    println!("H^2 + 3H + 2 as a polynomial in H: {:?}",
        DiffOp::poly_of_op(&[Poly::int(2), Poly::int(3), Poly::one()], &h)
            .unwrap()
            .as_poly_in(&h)
            .map(|cs| cs.iter().map(|c| c.to_string()).collect::<Vec<_>>()));
}
