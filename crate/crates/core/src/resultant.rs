//! Resultants and discriminants via fraction-free elimination of the
//! Sylvester matrix.

use crate::error::{Error, Result};
use crate::poly::{Poly, Var};

/// Determinant of a square matrix of polynomials by Bareiss elimination.
///
/// Every intermediate entry is a minor of the input, so each division by the
/// previous pivot is exact.
pub fn det_bareiss(mut a: Vec<Vec<Poly>>) -> Poly {
    let n = a.len();
    if n == 0 {
        return Poly::one();
    }
    assert!(a.iter().all(|row| row.len() == n), "matrix must be square");
    let mut negate = false;
    let mut prev = Poly::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return Poly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num
                    .exact_div(&prev)
                    .expect("Bareiss step must divide exactly");
            }
            a[i][k] = Poly::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Sylvester matrix of `p` and `q` as univariate polynomials in `var`.
pub fn sylvester(p: &Poly, q: &Poly, var: Var) -> Result<Vec<Vec<Poly>>> {
    let pc = p.coeffs_in(var);
    let qc = q.coeffs_in(var);
    if pc.len() < 2 || qc.len() < 2 {
        return Err(Error::ZeroDegree(var));
    }
    let m = pc.len() - 1;
    let n = qc.len() - 1;
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for shift in 0..n {
        rows.push(shifted_row(&pc, shift, size));
    }
    for shift in 0..m {
        rows.push(shifted_row(&qc, shift, size));
    }
    Ok(rows)
}

fn shifted_row(coeffs: &[Poly], shift: usize, size: usize) -> Vec<Poly> {
    let deg = coeffs.len() - 1;
    let mut row = vec![Poly::zero(); size];
    for (i, c) in coeffs.iter().enumerate() {
        row[shift + deg - i] = c.clone();
    }
    row
}

/// `Res_var(p, q)`: eliminates `var`.
pub fn resultant(p: &Poly, q: &Poly, var: Var) -> Result<Poly> {
    Ok(det_bareiss(sylvester(p, q, var)?))
}

/// Discriminant of `p` in `var`, normalized so that
/// `disc(z^2 + b z + c) = b^2 - 4c`.
pub fn discriminant(p: &Poly, var: Var) -> Result<Poly> {
    let n = p.deg(var);
    if n < 1 {
        return Err(Error::ZeroDegree(var));
    }
    if n == 1 {
        return Ok(Poly::one());
    }
    let dp = derivative_in(p, var);
    let res = resultant(p, &dp, var)?;
    let lc = p.coeffs_in(var).pop().expect("positive degree");
    let d = res.exact_div(&lc)?;
    let sign_negative = (n * (n - 1) / 2) % 2 == 1;
    Ok(if sign_negative { -d } else { d })
}

fn derivative_in(p: &Poly, var: Var) -> Poly {
    let cs = p.coeffs_in(var);
    let ds: Vec<Poly> = cs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c.scale(&crate::poly::rat_int(i as i64)))
        .collect();
    Poly::from_coeffs_in(var, &ds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat_int;

    fn z() -> Poly {
        Poly::z()
    }

    #[test]
    fn shared_root_gives_zero() {
        let p = z().pow(2) - Poly::one();
        let q = z() - Poly::one();
        assert!(resultant(&p, &q, Var::Z).unwrap().is_zero());
    }

    #[test]
    fn quadratic_discriminant() {
        let b = Poly::var(Var::A1);
        let c = Poly::var(Var::A0);
        let p = z().pow(2) + &b * &z() + c.clone();
        assert_eq!(
            discriminant(&p, Var::Z).unwrap(),
            b.pow(2) - Poly::int(4) * c
        );
    }

    #[test]
    fn pure_cubic_discriminant() {
        let a0 = Poly::var(Var::A0);
        let p = z().pow(3) - a0.clone();
        assert_eq!(
            discriminant(&p, Var::Z).unwrap(),
            Poly::int(-27) * a0.pow(2)
        );
    }

    #[test]
    fn depressed_cubic_matches_closed_form() {
        // disc(z^3 + p z + q) = -4 p^3 - 27 q^2
        let p = Poly::var(Var::A1);
        let q = Poly::var(Var::A2);
        let f = z().pow(3) + &p * &z() + q.clone();
        assert_eq!(
            discriminant(&f, Var::Z).unwrap(),
            Poly::int(-4) * p.pow(3) - Poly::int(27) * q.pow(2)
        );
    }

    #[test]
    fn triple_root_discriminant_vanishes() {
        assert!(discriminant(&z().pow(3), Var::Z).unwrap().is_zero());
    }

    #[test]
    fn resultant_of_linear_factors() {
        // Res(z - a, z - b) = a - b
        let a = Poly::var(Var::A0);
        let b = Poly::var(Var::A1);
        let r = resultant(&(z() - a.clone()), &(z() - b.clone()), Var::Z).unwrap();
        assert_eq!(r, a - b);
    }

    #[test]
    fn constant_operand_rejected() {
        assert_eq!(
            resultant(&Poly::int(3), &z(), Var::Z),
            Err(Error::ZeroDegree(Var::Z))
        );
    }

    #[test]
    fn bareiss_matches_cofactor_on_integers() {
        let m = |rows: [[i64; 3]; 3]| {
            rows.iter()
                .map(|r| r.iter().map(|&v| Poly::constant(rat_int(v))).collect())
                .collect::<Vec<Vec<Poly>>>()
        };
        // cofactor expansion: 2(5*9-6*8) - 3(4*9-6*7) + 1(4*8-5*7) = -6+18-3 = 9
        let a = m([[2, 3, 1], [4, 5, 6], [7, 8, 9]]);
        assert_eq!(det_bareiss(a), Poly::int(9));
        // zero leading pivot forces a row swap
        let b = m([[0, 1, 2], [1, 0, 3], [4, -3, 8]]);
        // cofactor: 0 - 1*(8-12) + 2*(-3-0) = 4 - 6 = -2
        assert_eq!(det_bareiss(b), Poly::int(-2));
    }
}
