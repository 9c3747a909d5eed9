//! First cohomology of the triangulation and the homology map on oriented
//! normal coordinates.
//!
//! A transversely oriented normal surface meets every edge transversely; its
//! signed intersection numbers with the edge classes form a 1-cocycle, the
//! Poincaré dual of the surface's class in `H_2(M)`. Classes are reported in
//! an integral basis of `H^1(M; Z)` obtained from a spanning tree of the
//! 1-skeleton: every cocycle is cohomologous to a unique one vanishing on
//! the tree, and those form a lattice whose integer kernel basis is used.

use std::collections::VecDeque;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::lattice::integer_kernel;
use crate::linalg::Matrix;
use crate::normal::{arc_sign, build_matching_system, DiscKind, DiscType, NormalVector, ORIENTED_PER_TET};
use crate::scalar::Field;
use crate::triangulation::{edge_index, ClosedTriangulation};
use crate::{Integer, Rational};

/// Coboundary maps with respect to the directed edge classes and the face
/// classes oriented by their first side's ascending vertex labels.
#[derive(Clone, Debug)]
pub struct CochainComplex {
    /// Edges by vertices: `(d0 y)(e) = y(head) - y(tail)`.
    pub d0: Matrix<Integer>,
    /// Faces by edges.
    pub d1: Matrix<Integer>,
}

pub fn cochain_complex(tri: &ClosedTriangulation) -> CochainComplex {
    let sk = tri.skeleton();
    let ne = sk.edge_classes.len();
    let nv = sk.vertex_classes.len();
    let nf = sk.face_classes.len();
    let mut d0 = Matrix::filled(ne, nv, Integer::zero());
    for (e, &(tail, head)) in sk.edge_ends.iter().enumerate() {
        let v = d0.get(e, head) + 1;
        d0.set(e, head, v);
        let v = d0.get(e, tail) - 1;
        d0.set(e, tail, v);
    }
    let mut d1 = Matrix::filled(nf, ne, Integer::zero());
    for (f, [(tet, face), _]) in sk.face_classes.iter().enumerate() {
        let u: Vec<usize> = (0..4).filter(|v| v != face).collect();
        for (a, b, coef) in [(u[0], u[1], 1), (u[1], u[2], 1), (u[0], u[2], -1)] {
            let ei = edge_index(a, b);
            let e = sk.edge_of[*tet][ei];
            let v = d1.get(f, e) + coef * i64::from(sk.edge_sign[*tet][ei]);
            d1.set(f, e, v);
        }
    }
    CochainComplex { d0, d1 }
}

/// An integral basis of `H^1(M; Z)`.
#[derive(Clone, Debug)]
pub struct H1Basis {
    pub complex: CochainComplex,
    /// Edge classes in the spanning tree of the 1-skeleton.
    pub tree: Vec<bool>,
    /// Basis cocycles, each vanishing on the tree, indexed by edge class.
    pub cocycles: Vec<Vec<Integer>>,
    /// Maps a cocycle (by edge class) to its coordinates in the basis.
    pub projection: Matrix<Rational>,
}

impl H1Basis {
    pub fn rank(&self) -> usize {
        self.cocycles.len()
    }

    /// Coordinates of the class of a cocycle.
    pub fn coordinates(&self, z: &[Rational]) -> Vec<Rational> {
        self.projection.mul_vec(z)
    }
}

/// Spanning tree of the vertex classes, grown breadth first in edge order.
fn spanning_tree(tri: &ClosedTriangulation) -> Vec<bool> {
    let sk = tri.skeleton();
    let nv = sk.vertex_classes.len();
    let mut seen = vec![false; nv];
    let mut tree = vec![false; sk.edge_classes.len()];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    while let Some(v) = queue.pop_front() {
        for (e, &(tail, head)) in sk.edge_ends.iter().enumerate() {
            let other = if tail == v {
                head
            } else if head == v {
                tail
            } else {
                continue;
            };
            if !seen[other] {
                seen[other] = true;
                tree[e] = true;
                queue.push_back(other);
            }
        }
    }
    tree
}

/// The cocycle cohomologous to `z` that vanishes on the tree edges.
fn tree_normalize(tri: &ClosedTriangulation, tree: &[bool], z: &[Rational]) -> Vec<Rational> {
    let sk = tri.skeleton();
    let nv = sk.vertex_classes.len();
    let mut y: Vec<Option<Rational>> = vec![None; nv];
    y[0] = Some(Rational::from_int(0));
    // Tree edges in BFS order reach every vertex from the root.
    let mut changed = true;
    while changed {
        changed = false;
        for (e, &(tail, head)) in sk.edge_ends.iter().enumerate() {
            if !tree[e] {
                continue;
            }
            match (&y[tail], &y[head]) {
                (Some(t), None) => {
                    y[head] = Some(t + &z[e]);
                    changed = true;
                }
                (None, Some(h)) => {
                    y[tail] = Some(h - &z[e]);
                    changed = true;
                }
                _ => {}
            }
        }
    }
    let y: Vec<Rational> = y.into_iter().map(|v| v.expect("tree spans the vertices")).collect();
    sk.edge_ends.iter().enumerate().map(|(e, &(tail, head))| &z[e] - (&y[head] - &y[tail])).collect()
}

pub fn compute_h1_basis(tri: &ClosedTriangulation) -> H1Basis {
    let complex = cochain_complex(tri);
    let tree = spanning_tree(tri);
    let ne = tree.len();
    let free: Vec<usize> = (0..ne).filter(|&e| !tree[e]).collect();
    let restricted = complex.d1.select_columns(&free);
    let kernel = integer_kernel(&restricted);
    let b = kernel.len();
    let cocycles: Vec<Vec<Integer>> = kernel
        .iter()
        .map(|k| {
            let mut full = vec![Integer::zero(); ne];
            for (i, &e) in free.iter().enumerate() {
                full[e] = k[i].clone();
            }
            full
        })
        .collect();

    // Left inverse on a set of b rows where the basis is independent.
    let basis_rows = Matrix::from_rows(b, (0..free.len()).map(|i| kernel.iter().map(|k| Rational::from(k[i].clone())).collect()).collect());
    let pivots = basis_rows.transpose().echelon().pivots;
    assert_eq!(pivots.len(), b);
    let square = basis_rows.select_rows(&pivots);
    let inverse = if b == 0 { Matrix::zeros(0, 0) } else { square.inverse().expect("independent rows") };

    let mut projection = Matrix::zeros(b, ne);
    for e in 0..ne {
        let mut unit = vec![Rational::from_int(0); ne];
        unit[e] = Rational::from_int(1);
        let normal = tree_normalize(tri, &tree, &unit);
        let picked: Vec<Rational> = pivots.iter().map(|&i| normal[free[i]].clone()).collect();
        let coords = inverse.mul_vec(&picked);
        for (i, c) in coords.into_iter().enumerate() {
            projection.set(i, e, c);
        }
    }
    H1Basis { complex, tree, cocycles, projection }
}

/// Whether an edge cochain is a coboundary `d0 y`.
pub fn is_coboundary(complex: &CochainComplex, z: &[Rational]) -> bool {
    complex.d0.map(|v| Rational::from(v.clone())).solve(z).is_some()
}

/// Whether an edge cochain is a cocycle.
pub fn is_cocycle(complex: &CochainComplex, z: &[Rational]) -> bool {
    complex.d1.map(|v| Rational::from(v.clone())).mul_vec(z).iter().all(|v| v.is_zero())
}

/// The face used to read off intersections with each edge class: in the
/// smallest tetrahedron containing the class, its smallest face containing
/// a member edge, and the smallest such edge.
pub fn reading_faces(tri: &ClosedTriangulation) -> Vec<(usize, usize, usize)> {
    let sk = tri.skeleton();
    let mut out = vec![None; sk.edge_classes.len()];
    for tet in 0..tri.size() {
        for face in 0..4 {
            for (ei, &[a, b]) in crate::triangulation::EDGE_VERTICES.iter().enumerate() {
                if a == face || b == face {
                    continue;
                }
                let e = sk.edge_of[tet][ei];
                if out[e].is_none() {
                    out[e] = Some((tet, face, ei));
                }
            }
        }
    }
    out.into_iter().map(|x| x.expect("every edge lies in a face")).collect()
}

/// Signed intersections with edge `ei` of `tet`, read from arcs in `face`,
/// as a row over oriented disc columns. Positive means crossing from the
/// lower to the higher vertex label.
fn edge_reading_row(t: usize, tet: usize, face: usize, ei: usize) -> Vec<i64> {
    let [a, b] = crate::triangulation::EDGE_VERTICES[ei];
    debug_assert!(a != face && b != face);
    let mut row = vec![0i64; t * ORIENTED_PER_TET];
    for kind in (0..7).map(DiscKind::from_index) {
        for (f, corner) in kind.arcs() {
            if f != face || (corner != a && corner != b) {
                continue;
            }
            for s in [1i8, -1] {
                let sigma = i64::from(arc_sign(kind, corner, s));
                let col = DiscType { tet, kind, orientation: Some(s) }.column();
                row[col] += if corner == b { sigma } else { -sigma };
            }
        }
    }
    row
}

/// The matrix taking oriented coordinates to intersection cochains.
pub fn dual_cocycle_matrix(tri: &ClosedTriangulation) -> Matrix<i64> {
    let sk = tri.skeleton();
    let rows = reading_faces(tri)
        .into_iter()
        .map(|(tet, face, ei)| {
            let s = i64::from(sk.edge_sign[tet][ei]);
            edge_reading_row(tri.size(), tet, face, ei).into_iter().map(|v| v * s).collect()
        })
        .collect();
    Matrix::from_rows(tri.size() * ORIENTED_PER_TET, rows)
}

/// Intersection cochain of `x` with the member edge `ei` of `tet`, read in
/// `face`, oriented by the edge class. For matching vectors every choice
/// gives the same value.
pub fn edge_intersection(tri: &ClosedTriangulation, x: &NormalVector, tet: usize, face: usize, ei: usize) -> Rational {
    let s = Rational::from_int(i64::from(tri.skeleton().edge_sign[tet][ei]));
    let row = edge_reading_row(tri.size(), tet, face, ei);
    row.iter().zip(&x.coords).fold(Rational::from_int(0), |acc, (&r, v)| acc + Rational::from_int(r) * v) * s
}

fn check_oriented_kernel(tri: &ClosedTriangulation, x: &NormalVector) -> Result<()> {
    if !x.oriented {
        return Err(Error::TheoryMismatch { expected: "oriented" });
    }
    x.check_len(tri.size())?;
    if !build_matching_system(tri, true).is_in_kernel(&x.coords) {
        return Err(Error::NotInKernel);
    }
    Ok(())
}

/// Signed intersection numbers of a matching vector with every edge class.
pub fn dual_cocycle(tri: &ClosedTriangulation, x: &NormalVector) -> Result<Vec<Rational>> {
    check_oriented_kernel(tri, x)?;
    Ok(dual_cocycle_matrix(tri).map(|&v| Rational::from_int(v)).mul_vec(&x.coords))
}

/// The homology map in the chosen basis, as a `b x 14t` matrix.
#[derive(Clone, Debug)]
pub struct HomologyMap {
    pub basis: H1Basis,
    pub matrix: Matrix<Rational>,
}

impl HomologyMap {
    pub fn rank(&self) -> usize {
        self.basis.rank()
    }

    /// Class of an oriented coordinate vector; linear in `x`.
    pub fn class_of(&self, x: &NormalVector) -> Vec<Rational> {
        assert!(x.oriented, "homology classes need oriented coordinates");
        self.matrix.mul_vec(&x.coords)
    }

    pub fn class_of_checked(&self, tri: &ClosedTriangulation, x: &NormalVector) -> Result<Vec<Rational>> {
        check_oriented_kernel(tri, x)?;
        Ok(self.class_of(x))
    }
}

pub fn homology_map_matrix(tri: &ClosedTriangulation) -> HomologyMap {
    let basis = compute_h1_basis(tri);
    let z = dual_cocycle_matrix(tri).map(|&v| Rational::from_int(v));
    let matrix = basis.projection.mul(&z);
    HomologyMap { basis, matrix }
}

/// Clears denominators of a class when it is integral; otherwise `None`.
pub fn integral_class(c: &[Rational]) -> Option<Vec<Integer>> {
    c.iter().map(|v| v.is_integer().then(|| v.to_integer())).collect()
}

/// The sign pattern of a class is unaffected by the basis normalization;
/// used to report generators.
pub fn is_zero_class(c: &[Rational]) -> bool {
    c.iter().all(|v| !v.is_positive() && !v.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normal::{reverse_orientation, vertex_link};
    use crate::triangulation::tests::D2;

    #[test]
    fn d2_has_no_first_cohomology() {
        let tri = ClosedTriangulation::from_json(D2).unwrap();
        let h = homology_map_matrix(&tri);
        assert_eq!(h.rank(), 0);
        assert_eq!((h.matrix.rows(), h.matrix.cols()), (0, 28));
        let c = &h.basis.complex;
        assert!(c.d1.map(|v| Rational::from(v.clone())).mul(&c.d0.map(|v| Rational::from(v.clone()))).row_vecs().iter().flatten().all(|v| v.is_zero()));
    }

    #[test]
    fn vertex_links_are_coboundaries() {
        let tri = ClosedTriangulation::from_json(D2).unwrap();
        let h = homology_map_matrix(&tri);
        for v in 0..4 {
            let x = vertex_link(&tri, v, true, true);
            let z = dual_cocycle(&tri, &x).unwrap();
            assert!(is_coboundary(&h.basis.complex, &z));
            let rz = dual_cocycle(&tri, &reverse_orientation(&x)).unwrap();
            assert_eq!(rz, z.iter().map(|v| -v).collect::<Vec<_>>());
        }
    }

    #[test]
    fn non_kernel_vectors_are_rejected() {
        let tri = ClosedTriangulation::from_json(D2).unwrap();
        let mut x = NormalVector::zero(2, true);
        x.coords[0] = Rational::from_int(1);
        assert!(matches!(dual_cocycle(&tri, &x), Err(Error::NotInKernel)));
    }
}
