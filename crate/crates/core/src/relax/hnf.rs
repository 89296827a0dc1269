//! Integer solutions of `A v = b` through column-style Hermite reduction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

fn combine(cols: &mut [Vec<BigInt>], i: usize, j: usize, m: [&BigInt; 4]) {
    // (col_i, col_j) <- (m0 col_i + m1 col_j, m2 col_i + m3 col_j)
    let (lo, hi) = cols.split_at_mut(j);
    let (ci, cj) = (&mut lo[i], &mut hi[0]);
    for (a, b) in ci.iter_mut().zip(cj.iter_mut()) {
        if a.is_zero() && b.is_zero() {
            continue;
        }
        let na = m[0] * &*a + m[1] * &*b;
        let nb = m[2] * &*a + m[3] * &*b;
        *a = na;
        *b = nb;
    }
}

/// Reduces `a` (rows of length `n`) by unimodular column operations to lower
/// echelon form, then solves by forward substitution. `None` iff no integer solution exists.
pub fn solve_integer(a: &[Vec<BigInt>], b: &[BigInt], n: usize) -> Option<Vec<BigInt>> {
    let m = a.len();
    // columns of H stacked on columns of U
    let mut cols: Vec<Vec<BigInt>> = (0..n)
        .map(|j| {
            let mut c: Vec<BigInt> = a.iter().map(|row| row[j].clone()).collect();
            c.extend((0..n).map(|k| if k == j { BigInt::one() } else { BigInt::zero() }));
            c
        })
        .collect();
    let mut y: Vec<BigInt> = vec![BigInt::zero(); n];
    let mut pc = 0;
    for r in 0..m {
        if pc < n {
            for j in pc + 1..n {
                if cols[j][r].is_zero() {
                    continue;
                }
                let (x, z) = (cols[pc][r].clone(), cols[j][r].clone());
                let e = x.extended_gcd(&z);
                let (g, s, t) = (e.gcd, e.x, e.y);
                let (xg, zg) = (&x / &g, &z / &g);
                let neg_zg = -zg;
                combine(&mut cols, pc, j, [&s, &t, &neg_zg, &xg]);
            }
        }
        let known: BigInt = (0..pc).map(|k| &cols[k][r] * &y[k]).sum();
        let residual = &b[r] - known;
        if pc < n && !cols[pc][r].is_zero() {
            let (q, rem) = residual.div_rem(&cols[pc][r]);
            if !rem.is_zero() {
                return None;
            }
            y[pc] = q;
            pc += 1;
        } else if !residual.is_zero() {
            return None;
        }
    }
    let v: Vec<BigInt> = (0..n).map(|i| (0..pc).map(|k| &cols[k][m + i] * &y[k]).sum()).collect();
    let ok = a.iter().zip(b).all(|(row, bi)| row.iter().zip(&v).map(|(x, y)| x * y).sum::<BigInt>() == *bi);
    ok.then_some(v)
}

/// A basis of the integer row lattice spanned by `rows` (all of length `n`),
/// in row echelon form.
pub fn lattice_basis(rows: &[Vec<BigInt>], n: usize) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let mut basis = Vec::new();
    for c in 0..n {
        let Some(p) = rows.iter().position(|r| !r[c].is_zero()) else { continue };
        let mut pivot = rows.swap_remove(p);
        for r in rows.iter_mut() {
            if r[c].is_zero() {
                continue;
            }
            let e = pivot[c].extended_gcd(&r[c]);
            let (a, b) = (&pivot[c] / &e.gcd, &r[c] / &e.gcd);
            let new_pivot: Vec<BigInt> = pivot.iter().zip(r.iter()).map(|(x, y)| &e.x * x + &e.y * y).collect();
            let new_r: Vec<BigInt> = pivot.iter().zip(r.iter()).map(|(x, y)| &a * y - &b * x).collect();
            pivot = new_pivot;
            *r = new_r;
        }
        rows.retain(|r| r.iter().any(|x| !x.is_zero()));
        basis.push(pivot);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn mat(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| z(x)).collect()).collect()
    }

    #[test]
    fn scalar_and_parity() {
        assert_eq!(solve_integer(&mat(&[&[1]]), &[z(1)], 1), Some(vec![z(1)]));
        assert_eq!(solve_integer(&mat(&[&[2]]), &[z(1)], 1), None);
        assert!(solve_integer(&mat(&[&[6, 10, 15]]), &[z(1)], 3).is_some());
        assert!(solve_integer(&mat(&[&[6, 10]]), &[z(1)], 2).is_none());
    }

    fn in_lattice(basis: &[Vec<BigInt>], v: &[BigInt]) -> bool {
        let n = v.len();
        let a: Vec<Vec<BigInt>> = (0..n).map(|c| basis.iter().map(|r| r[c].clone()).collect()).collect();
        solve_integer(&a, v, basis.len()).is_some()
    }

    #[test]
    fn lattice_of_multiples() {
        let rows = mat(&[&[4, 0], &[6, 0], &[0, 3], &[2, 3]]);
        let b = lattice_basis(&rows, 2);
        assert_eq!(b.len(), 2);
        for r in &rows {
            assert!(in_lattice(&b, r));
        }
        for r in &b {
            assert!(in_lattice(&rows, r));
        }
        assert!(!in_lattice(&b, &[z(1), z(0)]));
    }

    #[test]
    fn dependent_rows() {
        let a = mat(&[&[1, 1], &[2, 2]]);
        assert!(solve_integer(&a, &[z(3), z(6)], 2).is_some());
        assert!(solve_integer(&a, &[z(3), z(7)], 2).is_none());
        assert_eq!(solve_integer(&[], &[], 0), Some(vec![]));
    }
}
