//! Build a commuting pair and certify it.
//!
//! `cargo run --release --example construct_pair -- 3 a0=1/2,a1=-1,a2=0,a3=2`

use std::time::Instant;

use weyl_commute::pair::OperatorPair;
use weyl_commute::params::Params;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let genus: u32 = args.next().as_deref().unwrap_or("2").parse()?;
    let params: Params = match args.next() {
        Some(s) => s.parse()?,
        None => Params::dixmier_slice(),
    };

    let t = Instant::now();
    let pair = OperatorPair::build(genus, &params)?;
    println!("g = {genus}, {params}");
    println!("L4 = {}", pair.l4);
    println!("Q = {}", pair.q.q);
    println!("F = {}", pair.curve.poly());
    println!("ord M = {:?}, rank = {}", pair.m.order(), pair.rank());
    println!("[L4, M] = 0: {}", pair.verify_commutation().is_zero());
    println!("M^2 = F(L4): {}", pair.verify_bc()?.is_zero());
    println!("M self-adjoint: {}", pair.m.is_self_adjoint());
    println!("{:.2?}", t.elapsed());
    Ok(())
}
