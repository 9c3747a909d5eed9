//! Extreme rays of cones `{x >= 0 : Ax = 0}` by the double description method.
//!
//! Hyperplanes are intersected one at a time with the current cone, starting
//! from the nonnegative orthant. New rays combine a ray on the positive side
//! with an adjacent ray on the negative side. Since both are nonnegative, the
//! support of the combination is the union of their supports; this is what
//! makes support filters (such as admissibility) safe to apply at every step.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use log::debug;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use super::matrix::{Matrix, RowSpace};
use crate::scalar::{Field, RayInt};

/// The cone `{x >= 0 : Ax = 0}` with `A` an integer matrix.
#[derive(Clone, Debug)]
pub struct ConeDescription {
    pub equations: Matrix<i64>,
}

impl ConeDescription {
    pub fn new(equations: Matrix<i64>) -> Self {
        ConeDescription { equations }
    }

    pub fn dim(&self) -> usize {
        self.equations.cols()
    }
}

/// An extreme ray with coprime nonnegative integer coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ray {
    pub coords: Vec<BigInt>,
    pub support: FixedBitSet,
}

impl Ray {
    pub fn from_coords(coords: Vec<BigInt>) -> Ray {
        let mut support = FixedBitSet::with_capacity(coords.len());
        for (i, c) in coords.iter().enumerate() {
            if !c.is_zero() {
                support.insert(i);
            }
        }
        Ray { coords, support }
    }

    pub fn to_rationals(&self) -> Vec<BigRational> {
        self.coords.iter().map(|c| BigRational::from(c.clone())).collect()
    }

    pub fn support_indices(&self) -> Vec<usize> {
        self.support.ones().collect()
    }
}

/// How the double description step decides whether two rays span a 2-face.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Adjacency {
    /// No third ray has support inside the union of the two supports.
    #[default]
    Combinatorial,
    /// The processed equations restricted to the union of supports have
    /// corank exactly 2.
    Rank,
}

/// Order in which the equations are intersected with the cone.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum RowOrder {
    /// Rows sorted by their lists of nonzero columns.
    #[default]
    Lexicographic,
    /// At each step, the remaining row with the fewest positive/negative
    /// ray pairs (ties broken by the lexicographic order).
    FewestPairs,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct DdOptions {
    pub adjacency: Adjacency,
    pub order: RowOrder,
}

/// Predicate on supports; must be downward closed.
pub type SupportFilter<'a> = &'a (dyn Fn(&FixedBitSet) -> bool + Sync);

pub fn enumerate_extreme_rays(cone: &ConeDescription) -> Vec<Ray> {
    enumerate_extreme_rays_filtered(cone, DdOptions::default(), &|_| true)
}

/// Extreme rays of the cone whose supports pass `keep`.
///
/// For a downward closed `keep` this is exactly the set of extreme rays of
/// the full cone that pass `keep`. Rays are returned sorted by coordinates.
pub fn enumerate_extreme_rays_filtered(cone: &ConeDescription, options: DdOptions, keep: SupportFilter<'_>) -> Vec<Ray> {
    let rows = ordered_rows(&cone.equations);
    let mut rays = match run::<i64>(&rows, cone.dim(), options, keep) {
        Some(r) => r.into_iter().map(|r| r.into_big()).collect(),
        None => {
            debug!("double description overflowed i64, retrying with i128");
            match run::<i128>(&rows, cone.dim(), options, keep) {
                Some(r) => r.into_iter().map(|r| r.into_big()).collect(),
                None => {
                    debug!("double description overflowed i128, retrying with big integers");
                    run::<BigInt>(&rows, cone.dim(), options, keep)
                        .expect("big integers do not overflow")
                        .into_iter()
                        .map(|r| r.into_big())
                        .collect::<Vec<Ray>>()
                }
            }
        }
    };
    rays.sort_by(|a, b| a.coords.cmp(&b.coords));
    rays
}

/// Nonzero rows, sorted lexicographically by their lists of nonzero columns.
fn ordered_rows(a: &Matrix<i64>) -> Vec<Vec<i64>> {
    let mut rows: Vec<(Vec<usize>, Vec<i64>)> = (0..a.rows())
        .map(|r| {
            let row = a.row(r).to_vec();
            let cols = row.iter().enumerate().filter(|(_, &x)| x != 0).map(|(i, _)| i).collect();
            (cols, row)
        })
        .filter(|(cols, _): &(Vec<usize>, _)| !cols.is_empty())
        .collect();
    rows.sort();
    rows.into_iter().map(|(_, row)| row).collect()
}

struct WorkRay<I> {
    coords: Vec<I>,
    support: FixedBitSet,
}

impl<I: RayInt> WorkRay<I> {
    fn into_big(self) -> Ray {
        Ray { coords: self.coords.iter().map(|c| c.to_bigint()).collect(), support: self.support }
    }
}

fn dot<I: RayInt>(row: &[i64], ray: &WorkRay<I>) -> Option<I> {
    let mut acc = I::zero();
    for i in ray.support.ones() {
        if row[i] == 0 {
            continue;
        }
        let term = ray.coords[i].checked_mul(&I::from_i64(row[i])?)?;
        acc = acc.checked_add(&term)?;
    }
    Some(acc)
}

/// `a * x + b * y` divided by the gcd of its entries, with `a, b > 0`.
fn combine<I: RayInt>(a: &I, x: &WorkRay<I>, b: &I, y: &WorkRay<I>) -> Option<WorkRay<I>> {
    let mut support = x.support.clone();
    support.union_with(&y.support);
    let mut coords = vec![I::zero(); x.coords.len()];
    let mut g = I::zero();
    for i in support.ones() {
        let v = a.checked_mul(&x.coords[i])?.checked_add(&b.checked_mul(&y.coords[i])?)?;
        g = g.gcd(&v);
        coords[i] = v;
    }
    if !g.is_one() {
        for i in support.ones() {
            coords[i] = coords[i].clone() / g.clone();
        }
    }
    Some(WorkRay { coords, support })
}

fn run<I: RayInt>(rows: &[Vec<i64>], dim: usize, options: DdOptions, keep: SupportFilter<'_>) -> Option<Vec<WorkRay<I>>> {
    let mut rays: Vec<WorkRay<I>> = (0..dim)
        .map(|i| {
            let mut coords = vec![I::zero(); dim];
            coords[i] = I::one();
            let mut support = FixedBitSet::with_capacity(dim);
            support.insert(i);
            WorkRay { coords, support }
        })
        .filter(|r| keep(&r.support))
        .collect();
    let mut processed = RowSpace::<BigRational>::new(dim);
    let mut processed_rows: Vec<Vec<i64>> = Vec::new();

    let mut remaining: Vec<usize> = (0..rows.len()).collect();
    while !remaining.is_empty() {
        let (pick, values) = match options.order {
            RowOrder::Lexicographic => {
                let r = remaining[0];
                (0, rays.par_iter().map(|x| dot(&rows[r], x)).collect::<Option<Vec<I>>>()?)
            }
            RowOrder::FewestPairs => {
                let mut best: Option<(usize, usize, Vec<I>)> = None;
                for (k, &r) in remaining.iter().enumerate() {
                    let values = rays.par_iter().map(|x| dot(&rows[r], x)).collect::<Option<Vec<I>>>()?;
                    let pos = values.iter().filter(|v| v.is_positive()).count();
                    let neg = values.iter().filter(|v| v.is_negative()).count();
                    let cost = pos * neg;
                    if best.as_ref().map_or(true, |(c, _, _)| cost < *c) {
                        best = Some((cost, k, values));
                    }
                }
                let (_, k, values) = best.expect("rows remain");
                (k, values)
            }
        };
        let row = &rows[remaining.remove(pick)];
        let big_row: Vec<BigRational> = row.iter().map(|&x| BigRational::from_int(x)).collect();
        if processed.contains(&big_row) {
            continue;
        }
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        let mut next = Vec::new();
        for (i, v) in values.iter().enumerate() {
            if v.is_positive() {
                pos.push(i);
            } else if v.is_negative() {
                neg.push(i);
            } else {
                next.push(i);
            }
        }
        let rank = processed.rank();
        let adjacency = AdjacencyTest::new(&rays, options.adjacency, &processed_rows, dim);
        let created: Vec<Option<Vec<WorkRay<I>>>> = pos
            .par_iter()
            .map(|&p| {
                let mut out = Vec::new();
                for &n in &neg {
                    let mut union = rays[p].support.clone();
                    union.union_with(&rays[n].support);
                    if union.count_ones(..) > rank + 2 || !keep(&union) {
                        continue;
                    }
                    if !adjacency.adjacent(p, n, &union) {
                        continue;
                    }
                    let a = values[p].clone();
                    let b = -values[n].clone();
                    out.push(combine(&a, &rays[n], &b, &rays[p])?);
                }
                Some(out)
            })
            .collect();
        let mut fresh = Vec::new();
        for group in created {
            fresh.extend(group?);
        }
        let mut new_rays: Vec<WorkRay<I>> = Vec::with_capacity(next.len() + fresh.len());
        let mut old: Vec<Option<WorkRay<I>>> = rays.into_iter().map(Some).collect();
        for i in next {
            new_rays.push(old[i].take().expect("each ray kept once"));
        }
        new_rays.extend(fresh);
        rays = new_rays;
        processed.insert(&big_row);
        processed_rows.push(row.clone());
        debug!("double description: rank {} rays {}", processed.rank(), rays.len());
    }
    Some(rays)
}

struct AdjacencyTest<'a, I> {
    rays: &'a [WorkRay<I>],
    mode: Adjacency,
    processed_rows: &'a [Vec<i64>],
    /// For each coordinate, the rays whose support contains it.
    occurrences: Vec<FixedBitSet>,
}

impl<'a, I: RayInt> AdjacencyTest<'a, I> {
    fn new(rays: &'a [WorkRay<I>], mode: Adjacency, processed_rows: &'a [Vec<i64>], dim: usize) -> Self {
        let mut occurrences = vec![FixedBitSet::with_capacity(rays.len()); dim];
        if mode == Adjacency::Combinatorial {
            for (k, r) in rays.iter().enumerate() {
                for i in r.support.ones() {
                    occurrences[i].insert(k);
                }
            }
        }
        AdjacencyTest { rays, mode, processed_rows, occurrences }
    }

    fn adjacent(&self, p: usize, n: usize, union: &FixedBitSet) -> bool {
        match self.mode {
            Adjacency::Combinatorial => {
                // Rays with support inside `union` are those that avoid every
                // coordinate outside it.
                let mut inside = FixedBitSet::with_capacity(self.rays.len());
                inside.insert_range(..);
                for i in 0..self.occurrences.len() {
                    if !union.contains(i) {
                        inside.difference_with(&self.occurrences[i]);
                    }
                }
                inside.ones().all(|k| k == p || k == n)
            }
            Adjacency::Rank => {
                let _ = (p, n);
                let cols: Vec<usize> = union.ones().collect();
                let sub = Matrix::from_rows(
                    cols.len(),
                    self.processed_rows
                        .iter()
                        .map(|row| cols.iter().map(|&c| BigRational::from_int(row[c])).collect())
                        .collect(),
                );
                cols.len() - sub.rank() == 2
            }
        }
    }
}

/// Sum of the coordinates of a ray.
pub fn coordinate_sum(ray: &Ray) -> BigInt {
    ray.coords.iter().fold(BigInt::zero(), |acc, c| acc + c)
}

/// True when no two rays share a support.
pub fn supports_distinct(rays: &[Ray]) -> bool {
    let mut seen: HashMap<&FixedBitSet, ()> = HashMap::new();
    rays.iter().all(|r| seen.insert(&r.support, ()).is_none())
}
