//! Compare the constructed genus-2 and genus-3 operators with their
//! published closed forms in H = D^2 + x^3 + a0.

use weyl_commute::pair::match_printed_examples;

fn main() {
    for r in match_printed_examples().unwrap() {
        println!("{} (g = {})", r.name, r.genus);
        println!("  curve: {} [{}]", r.curve_computed, if r.curve_matches { "match" } else { "differs" });
        println!("  operator: {}", if r.operator_matches { "match" } else { "differs" });
        for (i, d) in &r.coefficient_diffs {
            println!("    D^{i}: constructed - printed = {d}");
        }
        if let Some(cs) = &r.diff_as_poly_in_l4 {
            println!("    difference as a polynomial in L4: {cs:?}");
        }
        println!("  printed operator commutes with L4: {}", r.printed_commutes);
        println!("  printed operator squares to F(L4): {}", r.printed_satisfies_curve);
    }
}
