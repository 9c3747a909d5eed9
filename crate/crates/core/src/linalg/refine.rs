//! Cutting a cone given by generators with coordinate half-spaces.
//!
//! The input cone is `L + cone(R)` where `L` is a lineality space and `R` a
//! set of rays; some coordinates (`enforced`) are already nonnegative on it,
//! and lineality vectors vanish on them. Each step intersects with
//! `{x_j >= 0}`. If `L` is not contained in `{x_j = 0}` the step shrinks the
//! lineality space by one dimension, otherwise it is an ordinary double
//! description step.
//!
//! Adjacency is decided from zero sets on the enforced coordinates: two rays
//! span a 2-face exactly when no third ray vanishes on every enforced
//! coordinate where both of them vanish.

use fixedbitset::FixedBitSet;
use log::debug;
use num_bigint::BigInt;
use rayon::prelude::*;

use super::dd::{Ray, SupportFilter};
use crate::scalar::RayInt;

/// Generators of a cone together with the half-spaces still to be imposed.
#[derive(Clone, Debug)]
pub struct HalfspaceCut {
    pub dim: usize,
    /// Dimension of the linear span of the cone.
    pub span_dim: usize,
    pub rays: Vec<Vec<BigInt>>,
    pub lineality: Vec<Vec<BigInt>>,
    pub enforced: FixedBitSet,
    /// Coordinates to make nonnegative, in the order they are processed.
    pub cuts: Vec<usize>,
}

#[derive(Clone)]
struct WorkRay<I> {
    coords: Vec<I>,
    /// Nonzero enforced coordinates.
    support: FixedBitSet,
}

/// Extreme rays of the cut cone whose enforced supports pass `keep`.
///
/// Once every coordinate is enforced the result is a list of nonnegative
/// rays; `keep` must be downward closed on enforced supports, and every
/// initial ray must pass it. Sorted by coordinates.
pub fn cut_by_halfspaces(problem: &HalfspaceCut, keep: SupportFilter<'_>) -> Vec<Ray> {
    let mut rays = match run::<i64>(problem, keep) {
        Some(r) => r,
        None => {
            debug!("half-space cuts overflowed i64, retrying with i128");
            match run::<i128>(problem, keep) {
                Some(r) => r,
                None => {
                    debug!("half-space cuts overflowed i128, retrying with big integers");
                    run::<BigInt>(problem, keep).expect("big integers do not overflow")
                }
            }
        }
    };
    rays.sort_by(|a, b| a.coords.cmp(&b.coords));
    rays
}

fn convert<I: RayInt>(v: &[BigInt]) -> Option<Vec<I>> {
    v.iter().map(I::from_big).collect()
}

fn enforced_support<I: RayInt>(coords: &[I], enforced: &FixedBitSet) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(coords.len());
    for i in enforced.ones() {
        if !coords[i].is_zero() {
            s.insert(i);
        }
    }
    s
}

/// `a * x - b * y` divided by the gcd of its entries.
fn combine<I: RayInt>(a: &I, x: &[I], b: &I, y: &[I]) -> Option<Vec<I>> {
    let mut coords = Vec::with_capacity(x.len());
    let mut g = I::zero();
    for (u, v) in x.iter().zip(y) {
        let c = a.checked_mul(u)?.checked_sub(&b.checked_mul(v)?)?;
        g = g.gcd(&c);
        coords.push(c);
    }
    if !g.is_zero() && !g.is_one() {
        for c in coords.iter_mut() {
            *c = c.clone() / g.clone();
        }
    }
    Some(coords)
}

fn run<I: RayInt>(problem: &HalfspaceCut, keep: SupportFilter<'_>) -> Option<Vec<Ray>> {
    let mut enforced = problem.enforced.clone();
    let mut lineality: Vec<Vec<I>> = problem.lineality.iter().map(|v| convert(v)).collect::<Option<_>>()?;
    let mut rays: Vec<WorkRay<I>> = problem
        .rays
        .iter()
        .map(|v| {
            let coords = convert(v)?;
            let support = enforced_support(&coords, &enforced);
            Some(WorkRay { coords, support })
        })
        .collect::<Option<_>>()?;

    for &j in &problem.cuts {
        if enforced.contains(j) {
            continue;
        }
        enforced.insert(j);
        if let Some(k) = lineality.iter().position(|l| !l[j].is_zero()) {
            let mut l = lineality.remove(k);
            if l[j].is_negative() {
                l = l.into_iter().map(|x| -x).collect();
            }
            let lj = l[j].clone();
            for m in lineality.iter_mut() {
                if !m[j].is_zero() {
                    *m = combine(&lj, m, &m[j].clone(), &l)?;
                }
            }
            for r in rays.iter_mut() {
                if !r.coords[j].is_zero() {
                    r.coords = combine(&lj, &r.coords, &r.coords[j].clone(), &l)?;
                }
            }
            let support = enforced_support(&l, &enforced);
            rays.push(WorkRay { coords: l, support });
            debug!("half-space cut {j}: lineality {} rays {}", lineality.len(), rays.len());
            continue;
        }

        let mut pos = Vec::new();
        let mut neg = Vec::new();
        let mut zero = Vec::new();
        for (i, r) in rays.iter().enumerate() {
            let v = &r.coords[j];
            if v.is_positive() {
                pos.push(i);
            } else if v.is_negative() {
                neg.push(i);
            } else {
                zero.push(i);
            }
        }
        // A 2-face modulo lineality is cut out by at least this many
        // vanishing enforced coordinates.
        let min_common = (problem.span_dim - lineality.len()).saturating_sub(2);
        let enforced_count = enforced.count_ones(..) - 1;
        let mut occurrences = vec![FixedBitSet::with_capacity(rays.len()); problem.dim];
        for (k, r) in rays.iter().enumerate() {
            for i in r.support.ones() {
                occurrences[i].insert(k);
            }
        }
        let outside: Vec<usize> = enforced.ones().filter(|&i| i != j).collect();
        let created: Vec<Option<Vec<WorkRay<I>>>> = pos
            .par_iter()
            .map(|&p| {
                let mut out = Vec::new();
                for &n in &neg {
                    let mut union = rays[p].support.clone();
                    union.union_with(&rays[n].support);
                    union.set(j, false);
                    if enforced_count - union.count_ones(..) < min_common || !keep(&union) {
                        continue;
                    }
                    let mut inside = FixedBitSet::with_capacity(rays.len());
                    inside.insert_range(..);
                    for &i in &outside {
                        if !union.contains(i) {
                            inside.difference_with(&occurrences[i]);
                        }
                    }
                    if inside.ones().any(|k| k != p && k != n) {
                        continue;
                    }
                    let a = rays[p].coords[j].clone();
                    let b = rays[n].coords[j].clone();
                    let coords = combine(&a, &rays[n].coords, &b, &rays[p].coords)?;
                    let support = enforced_support(&coords, &enforced);
                    out.push(WorkRay { coords, support });
                }
                Some(out)
            })
            .collect();
        let mut next: Vec<WorkRay<I>> = Vec::new();
        let mut old: Vec<Option<WorkRay<I>>> = rays.into_iter().map(Some).collect();
        for i in zero {
            next.push(old[i].take().expect("each ray kept once"));
        }
        for i in pos {
            let mut r = old[i].take().expect("each ray kept once");
            r.support.insert(j);
            next.push(r);
        }
        for group in created {
            next.extend(group?);
        }
        rays = next;
        debug!("half-space cut {j}: rays {}", rays.len());
    }

    assert!(lineality.is_empty(), "cone still contains a line after all cuts");
    Some(
        rays.into_iter()
            .map(|r| Ray::from_coords(r.coords.iter().map(|c| c.to_bigint()).collect()))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::dd::{enumerate_extreme_rays, ConeDescription};
    use crate::linalg::Matrix;

    fn ints(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn plane_cut_to_quadrant() {
        let problem = HalfspaceCut {
            dim: 2,
            span_dim: 2,
            rays: vec![],
            lineality: vec![ints(&[1, 0]), ints(&[0, 1])],
            enforced: FixedBitSet::with_capacity(2),
            cuts: vec![0, 1],
        };
        let rays: Vec<_> = cut_by_halfspaces(&problem, &|_| true).into_iter().map(|r| r.coords).collect();
        assert_eq!(rays, vec![ints(&[0, 1]), ints(&[1, 0])]);
    }

    #[test]
    fn agrees_with_orthant_double_description() {
        // {x >= 0 : x0 + x1 = x2 + x3 + x4, x1 = x4 + x5}, starting from the
        // cone where only x0, x1, x2 are nonnegative.
        let eq = vec![vec![1, 1, -1, -1, -1, 0], vec![0, 1, 0, 0, -1, -1]];
        let direct = enumerate_extreme_rays(&ConeDescription::new(Matrix::from_rows(6, eq)));

        let mut enforced = FixedBitSet::with_capacity(6);
        enforced.insert_range(0..3);
        // Solutions are determined by (x0, x1, x2, x4); x3, x5 follow.
        let gen = |x0: i64, x1: i64, x2: i64, x4: i64| ints(&[x0, x1, x2, x0 + x1 - x2 - x4, x4, x1 - x4]);
        let problem = HalfspaceCut {
            dim: 6,
            span_dim: 4,
            rays: vec![gen(1, 0, 0, 0), gen(0, 1, 0, 0), gen(0, 0, 1, 0)],
            lineality: vec![gen(0, 0, 0, 1)],
            enforced,
            cuts: vec![3, 4, 5],
        };
        assert_eq!(cut_by_halfspaces(&problem, &|_| true), direct);
    }
}
