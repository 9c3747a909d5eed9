//! Vertex sets of convex hulls and gauge functions, by linear programming.

use super::lp::{minimize, LinearProgram, LpOutcome};
use super::matrix::Matrix;
use crate::scalar::Field;

/// Whether `p` is a convex combination of `others`.
pub fn in_convex_hull<T: Field>(p: &[T], others: &[&Vec<T>]) -> bool {
    if others.is_empty() {
        return false;
    }
    let d = p.len();
    let k = others.len();
    let mut rows = Vec::with_capacity(d + 1);
    for i in 0..d {
        rows.push(others.iter().map(|q| q[i].clone()).collect());
    }
    rows.push(vec![T::one(); k]);
    let mut rhs = p.to_vec();
    rhs.push(T::one());
    let lp = LinearProgram::nonnegative(vec![T::zero(); k], Matrix::from_rows(k, rows), rhs);
    matches!(super::lp::solve_lp(&lp), LpOutcome::Optimal(_))
}

/// The points that are vertices of the convex hull of `points`.
///
/// Exact duplicates are dropped first, keeping the first occurrence. Then
/// points are visited in input order and each one that is a convex
/// combination of the other points still retained is removed.
pub fn remove_redundant_points<T: Field>(points: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut kept: Vec<Vec<T>> = Vec::new();
    for p in points {
        if let Some(first) = kept.first() {
            assert_eq!(first.len(), p.len(), "points of different dimensions");
        }
        if !kept.contains(p) {
            kept.push(p.clone());
        }
    }
    let mut alive = vec![true; kept.len()];
    for i in 0..kept.len() {
        let others: Vec<&Vec<T>> = (0..kept.len()).filter(|&j| j != i && alive[j]).map(|j| &kept[j]).collect();
        if in_convex_hull(&kept[i], &others) {
            alive[i] = false;
        }
    }
    kept.into_iter().zip(alive).filter(|(_, a)| *a).map(|(p, _)| p).collect()
}

/// Gauge of `c` with respect to the hull of `vertices`: the least `s` with
/// `c` in `s` times the hull, computed as `min sum(mu)` over `sum(mu_i w_i) = c`,
/// `mu >= 0`. `None` when `c` is outside the cone over the vertices.
pub fn gauge<T: Field>(vertices: &[Vec<T>], c: &[T]) -> Option<T> {
    if c.iter().all(|x| x.is_zero()) {
        return Some(T::zero());
    }
    let k = vertices.len();
    let d = c.len();
    let rows: Vec<Vec<T>> = (0..d).map(|i| vertices.iter().map(|w| w[i].clone()).collect()).collect();
    let lp = LinearProgram::nonnegative(vec![T::one(); k], Matrix::from_rows(k, rows), c.to_vec());
    match minimize(&lp) {
        LpOutcome::Optimal(s) => Some(s.value),
        _ => None,
    }
}
