//! Exact solution of rational linear systems by fraction-free elimination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::poly::Rat;

/// Solution set `particular + span(kernel)` of `A t = b`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineSolution {
    pub particular: Vec<Rat>,
    pub kernel: Vec<Vec<Rat>>,
}

impl AffineSolution {
    pub fn dimension(&self) -> usize {
        self.kernel.len()
    }
}

/// Solves `rows · t = rhs`. Returns `None` when the system is inconsistent.
///
/// Each row is scaled to integers, then reduced by one-step fraction-free
/// (Bareiss) elimination so every entry stays in `Z`; only the final back
/// substitution works in `Q`.
pub fn solve_affine(rows: &[Vec<Rat>], rhs: &[Rat], ncols: usize) -> Option<AffineSolution> {
    assert_eq!(rows.len(), rhs.len());
    // augmented integer matrix, last column = rhs
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .zip(rhs)
        .filter_map(|(row, b)| {
            assert_eq!(row.len(), ncols);
            let l = row
                .iter()
                .chain(std::iter::once(b))
                .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
            let ints: Vec<BigInt> = row
                .iter()
                .chain(std::iter::once(b))
                .map(|c| c.numer() * (&l / c.denom()))
                .collect();
            if ints.iter().all(Zero::is_zero) {
                None
            } else {
                Some(ints)
            }
        })
        .collect();

    let nrows = m.len();
    let mut pivots: Vec<usize> = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let (head, tail) = m.split_at_mut(r + 1);
        let pivot_row = &head[r];
        let piv = pivot_row[c].clone();
        for row in tail.iter_mut() {
            let factor = row[c].clone();
            for j in c..=ncols {
                let v = &piv * &row[j] - &factor * &pivot_row[j];
                debug_assert!((&v % &prev).is_zero());
                row[j] = v / &prev;
            }
        }
        prev = piv;
        pivots.push(c);
        r += 1;
    }

    // rows r.. are zero in the coefficient part; a nonzero rhs there is a contradiction
    if m[r..].iter().any(|row| !row[ncols].is_zero()) {
        return None;
    }

    let back_substitute = |free_values: &[(usize, Rat)], with_rhs: bool| -> Vec<Rat> {
        let mut t = vec![Rat::zero(); ncols];
        for (i, v) in free_values {
            t[*i] = v.clone();
        }
        for (ri, &pc) in pivots.iter().enumerate().rev() {
            let row = &m[ri];
            let mut acc = if with_rhs {
                Rat::from_integer(row[ncols].clone())
            } else {
                Rat::zero()
            };
            for j in pc + 1..ncols {
                if !row[j].is_zero() && !t[j].is_zero() {
                    acc -= Rat::from_integer(row[j].clone()) * &t[j];
                }
            }
            t[pc] = acc / Rat::from_integer(row[pc].clone());
        }
        t
    };

    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let particular = back_substitute(&[], true);
    let kernel = free
        .iter()
        .map(|&f| back_substitute(&[(f, Rat::one())], false))
        .collect();
    Some(AffineSolution { particular, kernel })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, rat_int};

    fn row(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| rat_int(x)).collect()
    }

    #[test]
    fn unique_solution() {
        // x + y = 3, x - y = 1
        let sol = solve_affine(&[row(&[1, 1]), row(&[1, -1])], &row(&[3, 1]), 2).unwrap();
        assert_eq!(sol.particular, row(&[2, 1]));
        assert_eq!(sol.dimension(), 0);
    }

    #[test]
    fn one_dimensional_kernel() {
        // x + 2y + 3z = 6, 2x + 4y + 6z = 12
        let sol = solve_affine(&[row(&[1, 2, 3]), row(&[2, 4, 6])], &row(&[6, 12]), 3).unwrap();
        assert_eq!(sol.dimension(), 2);
        for k in &sol.kernel {
            let s = &k[0] + rat_int(2) * &k[1] + rat_int(3) * &k[2];
            assert!(s.is_zero());
        }
        let p = &sol.particular;
        assert_eq!(&p[0] + rat_int(2) * &p[1] + rat_int(3) * &p[2], rat_int(6));
    }

    #[test]
    fn rational_entries() {
        // x/2 + y/3 = 1, x - y = 1/6
        let rows = vec![vec![rat(1, 2), rat(1, 3)], vec![rat_int(1), rat_int(-1)]];
        let sol = solve_affine(&rows, &[rat_int(1), rat(1, 6)], 2).unwrap();
        let (x, y) = (&sol.particular[0], &sol.particular[1]);
        assert_eq!(x * rat(1, 2) + y * rat(1, 3), rat_int(1));
        assert_eq!(x - y, rat(1, 6));
    }

    #[test]
    fn inconsistent_system() {
        assert!(solve_affine(&[row(&[1, 1]), row(&[2, 2])], &row(&[1, 3]), 2).is_none());
    }
}
