//! Vertex rays of the normal surface solution cones.
//!
//! Two routes are available. `Direct` runs the double description method on
//! `{x >= 0 : Mx = 0}` in all coordinates. `QuadFirst` enumerates the cone in
//! quad coordinates (the projection of the solution cone forgetting
//! triangles), lifts those rays back to the kernel, and then imposes the
//! triangle inequalities one at a time. The lineality space of the starting
//! cone is spanned by the triangle-only kernel vectors, i.e. the vertex links.
//! Both routes give the same rays; the second is far cheaper on larger
//! triangulations.

use fixedbitset::FixedBitSet;
use log::debug;
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::linalg::{
    cut_by_halfspaces, enumerate_extreme_rays_filtered, ConeDescription, DdOptions, HalfspaceCut, Matrix, Ray,
};
use crate::linalg::matrix::RowSpace;
use crate::normal::{admissible_support, build_matching_system, enumerate_arc_types, ORIENTED_PER_TET, UNORIENTED_PER_TET};
use crate::scalar::primitive_integer_vector;
use crate::triangulation::{edge_index, ClosedTriangulation};
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Method {
    Direct,
    #[default]
    QuadFirst,
}

/// Which rays to return.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RayFilter {
    All,
    Admissible,
}

/// The cone `{x >= 0 : Mx = 0}` of the chosen theory.
pub fn solution_cone(tri: &ClosedTriangulation, oriented: bool) -> ConeDescription {
    ConeDescription::new(build_matching_system(tri, oriented).matrix)
}

/// Columns of quad coordinates, in increasing order.
pub fn quad_columns(t: usize, oriented: bool) -> Vec<usize> {
    let width = if oriented { ORIENTED_PER_TET } else { UNORIENTED_PER_TET };
    let local: Vec<usize> = if oriented { (8..14).collect() } else { (4..7).collect() };
    (0..t).flat_map(|tet| local.iter().map(move |&c| width * tet + c)).collect()
}

/// Extreme rays of the solution cone, sorted by coordinates.
pub fn vertex_rays(tri: &ClosedTriangulation, oriented: bool, filter: RayFilter, method: Method) -> Vec<Ray> {
    let keep = move |s: &FixedBitSet| filter == RayFilter::All || admissible_support(s, oriented);
    match method {
        Method::Direct => enumerate_extreme_rays_filtered(&solution_cone(tri, oriented), DdOptions::default(), &keep),
        Method::QuadFirst => quad_first(tri, oriented, &keep),
    }
}

pub fn ray_is_admissible(ray: &Ray, oriented: bool) -> bool {
    admissible_support(&ray.support, oriented)
}

fn to_i64_row(v: &[Rational]) -> Vec<i64> {
    primitive_integer_vector(v).iter().map(|x| x.to_i64().expect("equation coefficient fits in i64")).collect()
}

/// Equations cutting out the projection of the kernel to quad coordinates.
///
/// Combinations of the matching rows at arcs next to a single edge class
/// that cancel every triangle give sparse equations, one family per edge.
/// Whatever they miss is completed from a dense basis of the annihilator.
fn quad_equations(
    tri: &ClosedTriangulation,
    oriented: bool,
    m: &Matrix<Rational>,
    quads: &[usize],
    triangles: &[usize],
    projected: &Matrix<Rational>,
) -> Vec<Vec<i64>> {
    let sk = tri.skeleton();
    let annihilator = projected.nullspace();
    let mut span = RowSpace::<Rational>::new(quads.len());
    let mut out = Vec::new();
    let mut push = |row: Vec<Rational>, out: &mut Vec<Vec<i64>>| {
        if span.rank() < annihilator.len() && !span.contains(&row) {
            span.insert(&row);
            out.push(to_i64_row(&row));
        }
    };
    let arcs = enumerate_arc_types(tri, oriented);
    for e in 0..sk.edge_classes.len() {
        let rows: Vec<usize> = arcs
            .iter()
            .enumerate()
            .filter(|(_, arc)| {
                let (tet, face) = sk.face_classes[arc.face_class][0];
                (0..4).any(|d| d != face && d != arc.corner && sk.edge_of[tet][edge_index(arc.corner, d)] == e)
            })
            .map(|(r, _)| r)
            .collect();
        let local = m.select_rows(&rows);
        for y in local.select_columns(triangles).transpose().nullspace() {
            let row: Vec<Rational> = quads
                .iter()
                .map(|&c| rows.iter().zip(&y).fold(Rational::zero(), |acc, (&r, yr)| acc + yr * m.get(r, c)))
                .collect();
            if row.iter().any(|v| !v.is_zero()) {
                push(row, &mut out);
            }
        }
    }
    let sparse = out.len();
    for row in annihilator.iter() {
        push(row.clone(), &mut out);
    }
    debug!("quad equations: {} from edges, {} dense", sparse, out.len() - sparse);
    out
}

fn quad_first(tri: &ClosedTriangulation, oriented: bool, keep: &(dyn Fn(&FixedBitSet) -> bool + Sync)) -> Vec<Ray> {
    let system = build_matching_system(tri, oriented);
    let m: Matrix<Rational> = system.rational_matrix();
    let n = m.cols();
    let kernel = m.nullspace();
    let quads = quad_columns(tri.size(), oriented);
    let triangles: Vec<usize> = (0..n).filter(|c| !quads.contains(c)).collect();

    let projected = Matrix::from_rows(quads.len(), kernel.iter().map(|v| quads.iter().map(|&c| v[c].clone()).collect()).collect());
    let quad_equations = quad_equations(tri, oriented, &m, &quads, &triangles, &projected);
    let quad_cone = ConeDescription::new(Matrix::from_rows(quads.len(), quad_equations));
    let lift_keep = |s: &FixedBitSet| {
        let mut full = FixedBitSet::with_capacity(n);
        for i in s.ones() {
            full.insert(quads[i]);
        }
        keep(&full)
    };
    let quad_rays = enumerate_extreme_rays_filtered(&quad_cone, DdOptions::default(), &lift_keep);
    debug!("quad coordinates: {} rays", quad_rays.len());

    // Lift each quad ray: the kernel basis projects onto the quad space, so
    // solve for coefficients there and take the same combination upstairs.
    let lift_system = projected.transpose();
    let lifts: Vec<Vec<BigInt>> = quad_rays
        .iter()
        .map(|r| {
            let c = lift_system.solve(&r.to_rationals()).expect("quad ray lies in the projected kernel");
            let mut x = vec![Rational::zero(); n];
            for (ci, v) in c.iter().zip(&kernel) {
                if ci.is_zero() {
                    continue;
                }
                for (xj, vj) in x.iter_mut().zip(v) {
                    *xj += ci * vj;
                }
            }
            primitive_integer_vector(&x)
        })
        .collect();

    // Triangle-only kernel vectors span the lineality space.
    let tri_matrix = m.select_columns(&triangles);
    let lineality: Vec<Vec<BigInt>> = tri_matrix
        .nullspace()
        .iter()
        .map(|v| {
            let mut x = vec![Rational::zero(); n];
            for (&c, vc) in triangles.iter().zip(v) {
                x[c] = vc.clone();
            }
            primitive_integer_vector(&x)
        })
        .collect();

    let mut enforced = FixedBitSet::with_capacity(n);
    for &c in &quads {
        enforced.insert(c);
    }
    let problem = HalfspaceCut { dim: n, span_dim: kernel.len(), rays: lifts, lineality, enforced, cuts: triangles };
    cut_by_halfspaces(&problem, keep)
}
