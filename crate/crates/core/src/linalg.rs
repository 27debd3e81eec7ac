//! Exact linear algebra over Q and Z: rank, square solves, integer kernels in
//! Hermite normal form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::scalar::Rational;

/// Rank over Q by Gaussian elimination.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..ncols {
        let Some(pivot) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pivot);
        for i in r + 1..m.len() {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] / &m[r][c];
            for j in c..ncols {
                let d = &f * &m[r][j];
                m[i][j] -= d;
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// The unique solution of a square nonsingular system `a x = b`.
pub fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.len();
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for c in 0..n {
        let pivot = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, pivot);
        let p = m[c][c].clone();
        for v in m[c].iter_mut() {
            *v /= &p;
        }
        for i in 0..n {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..=n {
                    let d = &f * &m[c][j];
                    m[i][j] -= d;
                }
            }
        }
    }
    Some(m.into_iter().map(|mut r| r.pop().expect("augmented")).collect())
}

/// Integer row echelon form on the first `ncols` columns by Euclidean row
/// operations on whole rows, in place. Returns the pivot column of each
/// nonzero row; rows vanishing on those columns sink to the end.
fn echelon(rows: &mut [Vec<BigInt>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        loop {
            let best = (r..rows.len())
                .filter(|&i| !rows[i][c].is_zero())
                .min_by_key(|&i| rows[i][c].abs());
            let Some(best) = best else { break };
            rows.swap(r, best);
            let mut done = true;
            for i in r + 1..rows.len() {
                if rows[i][c].is_zero() {
                    continue;
                }
                let q = rows[i][c].div_floor(&rows[r][c]);
                for j in 0..rows[i].len() {
                    let d = &q * &rows[r][j];
                    rows[i][j] -= d;
                }
                if !rows[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if !rows[r][c].is_zero() {
            pivots.push(c);
            r += 1;
        }
    }
    pivots
}

/// Row Hermite normal form: positive pivots, entries above each pivot
/// reduced into `0..pivot`, zero rows dropped.
pub fn hermite_rows(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut m = rows.to_vec();
    let pivots = echelon(&mut m, ncols);
    m.truncate(pivots.len());
    for (r, &c) in pivots.iter().enumerate() {
        if m[r][c].is_negative() {
            for v in m[r].iter_mut() {
                *v = -v.clone();
            }
        }
        for i in 0..r {
            let q = m[i][c].div_floor(&m[r][c]);
            if !q.is_zero() {
                for j in 0..ncols {
                    let d = &q * &m[r][j];
                    m[i][j] -= d;
                }
            }
        }
    }
    m
}

/// A Z-basis of `{x in Z^ncols : m x = 0}` in row Hermite normal form.
pub fn integer_kernel(m: &[Vec<BigInt>], ncols: usize) -> Vec<Vec<BigInt>> {
    let nrows = m.len();
    // Row j: (column j of m | e_j). Unimodular row operations keep the
    // right block a basis change, so rows with a zero left block span the kernel.
    let mut aug: Vec<Vec<BigInt>> = (0..ncols)
        .map(|j| {
            let mut row: Vec<BigInt> = (0..nrows).map(|i| m[i][j].clone()).collect();
            row.extend((0..ncols).map(|k| BigInt::from(u8::from(k == j))));
            row
        })
        .collect();
    let pivots = echelon(&mut aug, nrows);
    let kernel: Vec<Vec<BigInt>> = aug[pivots.len()..].iter().map(|r| r[nrows..].to_vec()).collect();
    hermite_rows(&kernel)
}

/// Whether `v` lies in the Z-span of rows already in Hermite normal form.
pub fn in_row_span(hnf: &[Vec<BigInt>], v: &[BigInt]) -> bool {
    let mut v = v.to_vec();
    for row in hnf {
        let Some(c) = row.iter().position(|x| !x.is_zero()) else {
            continue;
        };
        let (q, r) = v[c].div_rem(&row[c]);
        if !r.is_zero() {
            return false;
        }
        for (x, y) in v.iter_mut().zip(row) {
            *x -= &q * y;
        }
    }
    v.iter().all(|x| x.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn ints(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn rational_rank_and_solve() {
        let a = vec![vec![int(6), int(3)], vec![int(0), int(3)]];
        assert_eq!(rank(&a), 2);
        assert_eq!(solve(&a, &[int(2), int(0)]).unwrap(), vec![rat(1, 3), int(0)]);
        let dep = vec![vec![int(1), int(2)], vec![int(2), int(4)]];
        assert_eq!(rank(&dep), 1);
        assert!(solve(&dep, &[int(1), int(1)]).is_none());
    }

    #[test]
    fn cyclic_six_kernel() {
        // Prime-power marks of C6 at [1], [C2], [C3].
        let m = ints(&[&[6, 3, 2, 1], &[0, 3, 0, 1], &[0, 0, 2, 1]]);
        assert_eq!(integer_kernel(&m, 4), ints(&[&[1, -2, -3, 6]]));
    }

    #[test]
    fn kernels_are_saturated() {
        // x + 2y = 0 has kernel generated by (2, -1), HNF (2, -1).
        assert_eq!(integer_kernel(&ints(&[&[1, 2]]), 2), ints(&[&[2, -1]]));
        assert!(integer_kernel(&ints(&[&[1, 0], &[0, 1]]), 2).is_empty());
        assert_eq!(integer_kernel(&[], 2), ints(&[&[1, 0], &[0, 1]]));
        // 2x + 4y + 6z = 0: rank-2 lattice.
        let k = integer_kernel(&ints(&[&[2, 4, 6]]), 3);
        assert_eq!(k.len(), 2);
        assert!(in_row_span(&k, &ints(&[&[1, 1, -1]])[0]));
        assert!(!in_row_span(&k, &ints(&[&[1, 0, 0]])[0]));
    }

    #[test]
    fn hermite_is_canonical() {
        let a = hermite_rows(&ints(&[&[2, 4], &[1, 3]]));
        let b = hermite_rows(&ints(&[&[1, 3], &[3, 7]]));
        assert_eq!(a, b);
        assert_eq!(a, ints(&[&[1, 1], &[0, 2]]));
    }
}
