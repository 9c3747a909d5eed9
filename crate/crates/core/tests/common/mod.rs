//! Fixture loading and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use tnorm::linalg::{solve_lp, LinearProgram, LpOutcome};
use tnorm::linalg::Matrix;
use tnorm::normal::{is_compatible, NormalVector};
use tnorm::surfaces::NormalSurface;
use tnorm::ClosedTriangulation;

pub fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn fixture_path(name: &str) -> PathBuf {
    fixture_dir().join(format!("{name}.json"))
}

pub fn fixture(name: &str) -> ClosedTriangulation {
    let text = std::fs::read_to_string(fixture_path(name)).expect("fixture exists");
    ClosedTriangulation::from_json(&text).expect("fixture is valid")
}

pub fn corpus() -> Vec<(String, ClosedTriangulation)> {
    tnorm::cli::load_corpus(&fixture_dir()).expect("fixture corpus loads")
}

/// Fixtures with at most three tetrahedra.
pub fn small_corpus() -> Vec<(String, ClosedTriangulation)> {
    corpus().into_iter().filter(|(_, t)| t.size() <= 3).collect()
}

pub const CENSUS: &str = "m199_m4_1";

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Rank over the rationals by plain Gaussian elimination.
pub fn rank(rows: &[Vec<BigRational>]) -> usize {
    let mut a: Vec<Vec<BigRational>> = rows.to_vec();
    let cols = a.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = &a[i][c] / &a[r][c];
                for j in c..cols {
                    let d = &f * &a[r][j];
                    a[i][j] -= d;
                }
            }
        }
        r += 1;
    }
    r
}

/// A basis of `{x : A x = 0}` for the columns of `a` listed in `cols`.
fn kernel_on(a: &Matrix<i64>, cols: &[usize]) -> Vec<Vec<BigRational>> {
    let m = a.rows();
    let n = cols.len();
    let mut rows: Vec<Vec<BigRational>> = (0..m).map(|i| cols.iter().map(|&c| rat(*a.get(i, c))).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..m).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for j in 0..n {
            rows[r][j] = &rows[r][j] * &inv;
        }
        for i in 0..m {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..n {
                    let d = &f * &rows[r][j];
                    rows[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); n];
            v[f] = BigRational::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -rows[i][f].clone();
            }
            v
        })
        .collect()
}

fn primitive(v: &[BigRational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    ints.into_iter().map(|x| x / &g).collect()
}

/// Extreme rays of `{x >= 0 : A x = 0}`, found by walking support sets.
///
/// A support `S` carries an extreme ray exactly when the columns in `S` have
/// a one-dimensional kernel spanned by a strictly positive vector. Columns
/// are decided in order. A partial choice is abandoned once its chosen
/// columns have kernel dimension two, or once no nonnegative kernel vector
/// is positive on the chosen columns and zero on the excluded ones.
pub fn brute_force_extreme_rays(a: &Matrix<i64>) -> BTreeSet<Vec<BigInt>> {
    let n = a.cols();
    // Decide columns row by row so that rows close early.
    let mut order: Vec<usize> = Vec::with_capacity(n);
    for r in 0..a.rows() {
        for c in 0..n {
            if *a.get(r, c) != 0 && !order.contains(&c) {
                order.push(c);
            }
        }
    }
    order.extend((0..n).filter(|c| !order.contains(c)).collect::<Vec<_>>());
    let permuted = Matrix::from_rows(n, (0..a.rows()).map(|r| order.iter().map(|&c| *a.get(r, c)).collect()).collect());
    let eq = Matrix::from_rows(n, (0..a.rows()).map(|r| permuted.row(r).iter().map(|&v| rat(v)).collect()).collect());
    let mut walker = Walker { a: &permuted, eq, out: BTreeSet::new() };
    let mut state = vec![None::<bool>; n];
    if let Some(w) = walker.witness(&state) {
        walker.walk(0, &mut state, w);
    }
    walker
        .out
        .into_iter()
        .map(|ray| {
            let mut x = vec![BigInt::zero(); n];
            for (i, &c) in order.iter().enumerate() {
                x[c] = ray[i].clone();
            }
            x
        })
        .collect()
}

/// Rank of a small integer matrix by fraction-free elimination.
fn integer_rank(mut m: Vec<Vec<i128>>) -> usize {
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    let mut prev = 1i128;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..m.len() {
            for j in c + 1..cols {
                m[i][j] = (m[r][c] * m[i][j] - m[i][c] * m[r][j]) / prev;
            }
            m[i][c] = 0;
        }
        prev = m[r][c];
        r += 1;
    }
    r
}

/// Whether every row can still balance: a chosen column on one side of a
/// row needs a column on the other side that is not excluded.
fn sign_consistent(a: &Matrix<i64>, state: &[Option<bool>]) -> bool {
    (0..a.rows()).all(|r| {
        let row = a.row(r);
        let any = |pos: bool, pred: &dyn Fn(&Option<bool>) -> bool| {
            row.iter().zip(state).any(|(&v, s)| v != 0 && (v > 0) == pos && pred(s))
        };
        let chosen = |s: &Option<bool>| *s == Some(true);
        let open = |s: &Option<bool>| *s != Some(false);
        (!any(true, &chosen) || any(false, &open)) && (!any(false, &chosen) || any(true, &open))
    })
}

struct Walker<'a> {
    a: &'a Matrix<i64>,
    eq: Matrix<BigRational>,
    out: BTreeSet<Vec<BigInt>>,
}

impl Walker<'_> {
    /// A nonnegative kernel vector positive on chosen and zero on excluded
    /// columns, by exact LP.
    fn witness(&self, state: &[Option<bool>]) -> Option<Vec<BigRational>> {
        let n = self.a.cols();
        let lp = LinearProgram {
            objective: vec![BigRational::zero(); n],
            equations: self.eq.clone(),
            rhs: vec![BigRational::zero(); self.a.rows()],
            lower: state.iter().map(|s| Some(if *s == Some(true) { rat(1) } else { rat(0) })).collect(),
            upper: state.iter().map(|s| (*s == Some(false)).then(|| rat(0))).collect(),
        };
        match solve_lp(&lp) {
            LpOutcome::Optimal(sol) => Some(sol.x),
            _ => None,
        }
    }

    fn nullity(&self, chosen: &[usize]) -> usize {
        let m: Vec<Vec<i128>> = (0..self.a.rows()).map(|r| chosen.iter().map(|&c| i128::from(*self.a.get(r, c))).collect()).collect();
        chosen.len() - integer_rank(m)
    }

    fn walk(&mut self, j: usize, state: &mut Vec<Option<bool>>, witness: Vec<BigRational>) {
        let chosen: Vec<usize> = (0..j).filter(|&c| state[c] == Some(true)).collect();
        match self.nullity(&chosen) {
            0 => {}
            1 => {
                // Any superset with a one-dimensional kernel has this kernel,
                // whose support lies in the chosen set.
                let v = &kernel_on(self.a, &chosen)[0];
                let sign = if v[0].is_negative() { -rat(1) } else { rat(1) };
                if v.iter().all(|x| (x * &sign).is_positive()) {
                    let mut full = vec![BigRational::zero(); self.a.cols()];
                    for (&c, x) in chosen.iter().zip(v) {
                        full[c] = x * &sign;
                    }
                    self.out.insert(primitive(&full));
                }
                return;
            }
            _ => return,
        }
        if j == self.a.cols() {
            return;
        }
        for choice in [true, false] {
            state[j] = Some(choice);
            // The parent's witness still works when it agrees with the choice.
            let reuse = if choice { witness[j].is_positive() } else { witness[j].is_zero() };
            let next = if !sign_consistent(self.a, state) {
                None
            } else if reuse {
                Some(witness.clone())
            } else {
                self.witness(state)
            };
            if let Some(w) = next {
                self.walk(j + 1, state, w);
            }
            state[j] = None;
        }
    }
}

/// Whether an unoriented tetrahedron disc kind (0..3 triangles, 4..6 quads)
/// meets the tetrahedron edge `[a, b]`.
pub fn disc_meets_edge(kind: usize, a: usize, b: usize) -> bool {
    if kind < 4 {
        kind == a || kind == b
    } else {
        let k = kind - 3;
        let side = |v: usize| v == 0 || v == k;
        side(a) != side(b)
    }
}

const EDGES: [[usize; 2]; 6] = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]];

/// Euler characteristic of the normal surface with unoriented integral
/// coordinate `x`, counted as points on edges minus arcs plus discs.
pub fn euler_by_counting(tri: &ClosedTriangulation, x: &[i64]) -> i64 {
    let sk = tri.skeleton();
    let mut vertices = 0;
    for class in &sk.edge_classes {
        let (tet, ei) = class[0];
        let [a, b] = EDGES[ei];
        vertices += (0..7).filter(|&k| disc_meets_edge(k, a, b)).map(|k| x[7 * tet + k]).sum::<i64>();
    }
    let mut sides = 0;
    let mut faces = 0;
    for tet in 0..tri.size() {
        for k in 0..7 {
            let c = x[7 * tet + k];
            faces += c;
            sides += c * if k < 4 { 3 } else { 4 };
        }
    }
    assert_eq!(sides % 2, 0);
    vertices - sides / 2 + faces
}

pub fn to_i64(v: &NormalVector) -> Vec<i64> {
    v.coords.iter().map(|c| {
        assert!(c.is_integer());
        i64::try_from(c.to_integer()).expect("small coordinate")
    }).collect()
}

/// A random nonnegative integral combination of pairwise compatible rays,
/// restricted to one random quad kind per tetrahedron.
pub fn random_admissible_combination<R: Rng>(rng: &mut R, t: usize, rays: &[NormalVector], max_coef: i64) -> Option<NormalVector> {
    let per = if rays[0].oriented { 14 } else { 7 };
    let choice: Vec<usize> = (0..t).map(|_| rng.gen_range(1..4)).collect();
    let allowed: Vec<&NormalVector> = rays
        .iter()
        .filter(|r| {
            (0..t).all(|tet| {
                (1..4).filter(|&k| k != choice[tet]).all(|k| {
                    if per == 7 {
                        r.coords[7 * tet + 3 + k].is_zero()
                    } else {
                        r.coords[14 * tet + 6 + 2 * k].is_zero() && r.coords[14 * tet + 7 + 2 * k].is_zero()
                    }
                })
            })
        })
        .collect();
    if allowed.is_empty() {
        return None;
    }
    let mut x = NormalVector::zero(t, rays[0].oriented);
    for r in &allowed {
        let c = rng.gen_range(0..=max_coef);
        if c > 0 {
            x = x.add(&r.scale(&rat(c)));
        }
    }
    if x.is_zero() {
        let r = allowed[rng.gen_range(0..allowed.len())];
        x = r.clone();
    }
    for r in &allowed {
        debug_assert!(is_compatible(r, &x).unwrap());
    }
    Some(x)
}

/// Signed intersection numbers of one two-sided component with every edge
/// class, read from the discs meeting a representative tetrahedron edge.
/// A disc whose transverse orientation points from the lower toward the
/// higher vertex label of the edge counts +1.
pub fn component_intersections(tri: &ClosedTriangulation, surface: &NormalSurface, component: usize) -> Vec<i64> {
    let sk = tri.skeleton();
    sk.edge_classes
        .iter()
        .map(|class| {
            let (tet, ei) = class[0];
            let [a, b] = EDGES[ei];
            let mut total = 0i64;
            for (d, disc) in surface.discs.iter().enumerate() {
                if disc.tet != tet || surface.component_of[d] != component {
                    continue;
                }
                let kind = disc.kind.index();
                if !disc_meets_edge(kind, a, b) {
                    continue;
                }
                // Direction of the disc's positive side along the edge.
                let toward_b = if kind < 4 {
                    kind == b
                } else {
                    let k = kind - 3;
                    b == 0 || b == k
                };
                let side = i64::from(surface.sides[d].expect("two-sided component"));
                total += side * if toward_b { 1 } else { -1 };
            }
            total * i64::from(sk.edge_sign[tet][ei])
        })
        .collect()
}
