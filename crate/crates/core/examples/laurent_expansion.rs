//! Expansions at the point at infinity in k = 1/√z.

use weyl_commute::chi::{build_chi, expand_at_infinity, leading_terms_check, CurveContext, CurveFun};
use weyl_commute::pair::build_l4;
use weyl_commute::params::Params;
use weyl_commute::qsolver::QPolynomial;

fn show(name: &str, s: &weyl_commute::chi::LaurentSeries) {
    let terms: Vec<String> = s.terms().map(|(e, c)| format!("({c}) k^{e}")).collect();
    println!("{name} = {} + O(k^{})", terms.join(" + "), s.precision());
}

fn main() {
    let g = 2;
    let p = Params::dixmier_slice();
    let q = QPolynomial::build(g, &p).unwrap();
    let f = q.extract_f().unwrap();
    let ctx = CurveContext::new(&q, &f);

    show("w", &expand_at_infinity(&CurveFun::w(&ctx), 10).unwrap());
    let (chi0, chi1) = build_chi(&q, &f);
    let n = 2 * g as i64 + 8;
    let s0 = expand_at_infinity(&chi0, 4).unwrap();
    show("chi0", &s0);
    let s0 = expand_at_infinity(&chi0, n).unwrap();
    let s1 = expand_at_infinity(&chi1, n).unwrap();
    show("chi1", &expand_at_infinity(&chi1, 6).unwrap());

    let report = leading_terms_check(&s0, &s1, &q, &f, &build_l4(g, &p).unwrap()).unwrap();
    for (name, ok) in &report.checks {
        println!("{} {name}", if *ok { "ok  " } else { "FAIL" });
    }
}
