//! Integer kernels by unimodular column operations.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::Matrix;

/// A basis of the lattice `{x in Z^n : Ax = 0}`.
///
/// Column operations reduce `A` to column echelon form while the same
/// operations are applied to the identity; the columns of the transform that
/// end up under zero columns of `A` span the integer kernel.
pub fn integer_kernel(a: &Matrix<BigInt>) -> Vec<Vec<BigInt>> {
    let m = a.rows();
    let n = a.cols();
    // Work on columns: cols[j] is column j of A stacked over column j of U.
    let mut cols: Vec<Vec<BigInt>> = (0..n)
        .map(|j| {
            let mut c = a.column(j);
            c.extend((0..n).map(|i| if i == j { BigInt::one() } else { BigInt::zero() }));
            c
        })
        .collect();
    let mut pivot_col = 0;
    for row in 0..m {
        if pivot_col == n {
            break;
        }
        // Euclid on entries of this row among columns pivot_col..n.
        loop {
            let nonzero: Vec<usize> = (pivot_col..n).filter(|&j| !cols[j][row].is_zero()).collect();
            if nonzero.is_empty() {
                break;
            }
            let &best = nonzero.iter().min_by_key(|&&j| cols[j][row].abs()).expect("nonempty");
            cols.swap(pivot_col, best);
            if cols[pivot_col][row].is_negative() {
                for v in cols[pivot_col].iter_mut() {
                    *v = -v.clone();
                }
            }
            let p = cols[pivot_col][row].clone();
            let mut done = true;
            for j in pivot_col + 1..n {
                if cols[j][row].is_zero() {
                    continue;
                }
                let q = cols[j][row].div_floor(&p);
                let (left, right) = cols.split_at_mut(j);
                for (v, w) in right[0].iter_mut().zip(&left[pivot_col]) {
                    *v -= &q * w;
                }
                if !right[0][row].is_zero() {
                    done = false;
                }
            }
            if done {
                pivot_col += 1;
                break;
            }
        }
    }
    cols[pivot_col..].iter().map(|c| c[m..].to_vec()).collect()
}
