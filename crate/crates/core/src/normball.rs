//! The Thurston norm unit ball from vertices of the projective solution
//! space, norm evaluation, taut representatives, and 0-efficiency checks.

use std::collections::BTreeSet;

use log::{debug, info, warn};
use num_traits::{Signed, Zero};

use crate::chi::chi_star;
use crate::enumeration::{vertex_rays, Method, RayFilter};
use crate::error::{Error, Result};
use crate::homology::{homology_map_matrix, HomologyMap};
use crate::linalg::lp::{maximize_linear, minimize_linear};
use crate::linalg::{gauge, remove_redundant_points, solve_lp, LinearProgram, LpOutcome, Matrix, Ray};
use crate::normal::{forget_orientation, is_compatible, NormalVector};
use crate::scalar::Field;
use crate::surfaces::{assign_transverse_orientation, reconstruct_surface, NormalSurface, TransverseOrientation};
use crate::triangulation::ClosedTriangulation;
use crate::{Integer, Rational};

/// A vertex of the projective solution space.
#[derive(Clone, Debug)]
pub struct ProjectiveVertex {
    pub ray: Ray,
    /// The ray scaled to coordinate sum one.
    pub point: NormalVector,
    /// Euler characteristic functional of `point`.
    pub chi: Rational,
    pub admissible: bool,
}

impl ProjectiveVertex {
    /// The primitive integral representative.
    pub fn integral(&self) -> NormalVector {
        NormalVector::new(self.ray.to_rationals(), self.point.oriented)
    }
}

fn projective_vertices(tri: &ClosedTriangulation, oriented: bool, filter: RayFilter) -> Vec<ProjectiveVertex> {
    vertex_rays(tri, oriented, filter, Method::QuadFirst)
        .into_iter()
        .map(|ray| {
            let x = NormalVector::new(ray.to_rationals(), oriented);
            let point = x.scale(&(Rational::from_int(1) / x.total_weight()));
            let chi = chi_star(tri, &point);
            let admissible = crate::enumeration::ray_is_admissible(&ray, oriented);
            ProjectiveVertex { ray, point, chi, admissible }
        })
        .collect()
}

/// Vertices of the oriented projective solution space, all of them or only
/// the admissible ones.
pub fn project_solution_space(tri: &ClosedTriangulation, filter: RayFilter) -> Vec<ProjectiveVertex> {
    projective_vertices(tri, true, filter)
}

/// Vertices of the unoriented projective solution space.
pub fn project_unoriented_solution_space(tri: &ClosedTriangulation, filter: RayFilter) -> Vec<ProjectiveVertex> {
    projective_vertices(tri, false, filter)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    /// Admissible vertices with negative Euler characteristic.
    Strict,
    /// Also admissible vertices with zero Euler characteristic, kept as
    /// recession directions.
    NonStrict,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Strict => "strict",
            Variant::NonStrict => "le",
        }
    }
}

/// Points `v / |chi*(v)|` of `B`, with the primitive rays they come from.
#[derive(Clone, Debug, Default)]
pub struct BVertices {
    pub points: Vec<NormalVector>,
    pub rays: Vec<NormalVector>,
    /// Vertices with `chi* = 0` (non-strict variant only).
    pub recession: Vec<NormalVector>,
}

pub fn build_b(vertices: &[ProjectiveVertex], variant: Variant) -> BVertices {
    let mut out = BVertices::default();
    for v in vertices.iter().filter(|v| v.admissible) {
        if v.chi.is_negative() {
            out.points.push(v.point.scale(&(Rational::from_int(1) / v.chi.abs())));
            out.rays.push(v.integral());
        } else if v.chi.is_zero() && variant == Variant::NonStrict {
            out.recession.push(v.integral());
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct NormBall {
    pub variant: Variant,
    pub homology: HomologyMap,
    pub b: BVertices,
    /// Irredundant vertices of `h(B)` in the basis of `homology`.
    pub ball_vertices: Vec<Vec<Rational>>,
    /// Nonzero classes of recession directions; nonempty only when the
    /// manifold is not atoroidal.
    pub recession_classes: Vec<Vec<Rational>>,
    pub warnings: Vec<String>,
}

impl NormBall {
    pub fn rank(&self) -> usize {
        self.homology.rank()
    }

    /// Whether some zero-Euler-characteristic vertex has a nonzero class.
    pub fn has_hypothesis_certificate(&self) -> bool {
        !self.recession_classes.is_empty()
    }
}

/// The unit ball computed from the admissible vertices.
pub fn norm_ball(tri: &ClosedTriangulation, variant: Variant) -> NormBall {
    let vertices = project_solution_space(tri, RayFilter::Admissible);
    info!("{} admissible oriented vertices", vertices.len());
    norm_ball_from_vertices(tri, &vertices, variant)
}

pub fn norm_ball_from_vertices(tri: &ClosedTriangulation, vertices: &[ProjectiveVertex], variant: Variant) -> NormBall {
    let homology = homology_map_matrix(tri);
    let b = build_b(vertices, variant);
    let rank = homology.rank();
    let classes: Vec<Vec<Rational>> = b.points.iter().map(|w| homology.class_of(w)).collect();
    let mut ball_vertices = remove_redundant_points(&classes);
    if ball_vertices.is_empty() {
        ball_vertices.push(vec![Rational::zero(); rank]);
    }
    let mut recession_classes: Vec<Vec<Rational>> = Vec::new();
    for r in &b.recession {
        let c = homology.class_of(r);
        if c.iter().any(|v| !v.is_zero()) && !recession_classes.contains(&c) {
            recession_classes.push(c);
        }
    }
    let mut warnings = Vec::new();
    if !recession_classes.is_empty() {
        warnings.push(format!(
            "{} zero Euler characteristic vertices carry nonzero classes; the manifold is not atoroidal",
            recession_classes.len()
        ));
    }
    if !tri.is_simplicial() {
        if let ZeroEfficiency::Counterexample { .. } = check_zero_efficiency(tri) {
            warnings.push(
                "triangulation is not simplicial and has a non-vertex-linking normal sphere at a vertex; the result is not claimed to be the norm ball"
                    .to_string(),
            );
        }
    }
    for w in &warnings {
        warn!("{w}");
    }
    NormBall { variant, homology, b, ball_vertices, recession_classes, warnings }
}

fn check_class(ball: &NormBall, c: &[Rational]) -> Result<()> {
    if c.len() != ball.rank() {
        return Err(Error::ClassDimension { expected: ball.rank(), found: c.len() });
    }
    Ok(())
}

/// The gauge of `c` with respect to the computed ball.
pub fn evaluate_norm(ball: &NormBall, c: &[Rational]) -> Result<Rational> {
    if ball.variant != Variant::Strict {
        return Err(Error::WrongVariant);
    }
    check_class(ball, c)?;
    gauge(&ball.ball_vertices, c).ok_or(Error::DegenerateBall)
}

/// A linear functional `l` with `l <= 1` on the ball and `l(c) = ||c||`.
pub fn supporting_functional(ball: &NormBall, c: &[Rational]) -> Result<Vec<Rational>> {
    check_class(ball, c)?;
    let b = ball.rank();
    let k = ball.ball_vertices.len();
    // Variables: l (free), then one slack per vertex.
    let mut rows = Vec::with_capacity(k);
    for (i, w) in ball.ball_vertices.iter().enumerate() {
        let mut row = w.clone();
        row.extend((0..k).map(|j| if i == j { Rational::from_int(1) } else { Rational::zero() }));
        rows.push(row);
    }
    let mut objective = c.to_vec();
    objective.extend(vec![Rational::zero(); k]);
    let mut lower = vec![None; b];
    lower.extend(vec![Some(Rational::zero()); k]);
    let lp = LinearProgram {
        objective,
        equations: Matrix::from_rows(b + k, rows),
        rhs: vec![Rational::from_int(1); k],
        lower,
        upper: vec![None; b + k],
    };
    match solve_lp(&lp) {
        LpOutcome::Optimal(sol) => Ok(sol.x[..b].to_vec()),
        _ => Err(Error::DegenerateBall),
    }
}

#[derive(Clone, Debug)]
pub struct TautRepresentative {
    pub coords: NormalVector,
    pub surface: NormalSurface,
    /// Per component, the sign relative to the surface's recorded sides.
    pub orientation: Vec<i8>,
    pub weight: Integer,
}

#[derive(Clone, Debug)]
pub enum RepresentativeSearch {
    Found(TautRepresentative),
    NotFound { max_weight: u64 },
}

/// Searches the admissible integral points `x` with `h(x) = alpha` and
/// `chi*(x) = -||alpha||` lying in the cone over the non-positive vertices,
/// in increasing total weight, for one realized by a transversely oriented
/// surface without sphere, torus or one-sided components.
///
/// Such points are nonnegative combinations of pairwise compatible vertices
/// `v` on which a supporting functional `l` of the ball at `alpha` satisfies
/// `l(h(v)) = -chi*(v)`; the search runs over each maximal family of these.
pub fn find_taut_representative(
    tri: &ClosedTriangulation,
    ball: &NormBall,
    vertices: &[ProjectiveVertex],
    alpha: &[Integer],
    max_weight: u64,
) -> Result<RepresentativeSearch> {
    let alpha: Vec<Rational> = alpha.iter().map(|a| Rational::from(a.clone())).collect();
    check_class(ball, &alpha)?;
    if alpha.iter().all(|a| a.is_zero()) {
        let zero = NormalVector::zero(tri.size(), true);
        let surface = reconstruct_surface(tri, &forget_orientation(&zero))?;
        return Ok(RepresentativeSearch::Found(TautRepresentative {
            coords: zero,
            surface,
            orientation: Vec::new(),
            weight: Integer::zero(),
        }));
    }
    let norm = evaluate_norm(ball, &alpha)?;
    let l = supporting_functional(ball, &alpha)?;
    let dot = |c: &[Rational]| l.iter().zip(c).fold(Rational::zero(), |acc, (a, b)| acc + a * b);

    let candidates: Vec<NormalVector> = vertices
        .iter()
        .filter(|v| v.admissible && !v.chi.is_positive())
        .filter(|v| dot(&ball.homology.class_of(&v.point)) == -v.chi.clone())
        .map(|v| v.integral())
        .collect();
    debug!("norm {norm}: {} candidate vertices", candidates.len());
    let families = maximal_compatible_families(&candidates);
    debug!("{} maximal compatible families", families.len());

    let mut seen = BTreeSet::new();
    for w in 0..=max_weight {
        for family in &families {
            let rays: Vec<&NormalVector> = family.iter().map(|&i| &candidates[i]).collect();
            let search = FamilySearch::new(ball, &rays, &alpha, w);
            let mut found = None;
            search.run(&mut |x: &NormalVector| {
                if !seen.insert(x.coords.clone()) {
                    return false;
                }
                match realize(tri, x) {
                    Some(rep) => {
                        found = Some(rep);
                        true
                    }
                    None => false,
                }
            });
            if let Some(rep) = found {
                return Ok(RepresentativeSearch::Found(rep));
            }
        }
    }
    Ok(RepresentativeSearch::NotFound { max_weight })
}

/// The surface of `x` when it is transversely orientable to `x` and has no
/// sphere, torus or one-sided components.
fn realize(tri: &ClosedTriangulation, x: &NormalVector) -> Option<TautRepresentative> {
    let surface = reconstruct_surface(tri, &forget_orientation(x)).ok()?;
    if surface.components.iter().any(|c| !c.orientable || c.is_sphere() || c.is_torus()) {
        return None;
    }
    match assign_transverse_orientation(&surface, x).ok()? {
        TransverseOrientation::Assigned(orientation) => Some(TautRepresentative {
            weight: x.total_weight().to_integer(),
            coords: x.clone(),
            surface,
            orientation,
        }),
        _ => None,
    }
}

/// Maximal sets of pairwise compatible vectors (Bron-Kerbosch with pivoting).
fn maximal_compatible_families(vs: &[NormalVector]) -> Vec<Vec<usize>> {
    let n = vs.len();
    let adj: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| i != j && is_compatible(&vs[i], &vs[j]).unwrap_or(false)).collect())
        .collect();
    let mut out = Vec::new();
    fn expand(adj: &[Vec<bool>], r: Vec<usize>, mut p: Vec<usize>, mut x: Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if p.is_empty() && x.is_empty() {
            out.push(r);
            return;
        }
        let pivot = *p.iter().chain(&x).max_by_key(|&&u| p.iter().filter(|&&v| adj[u][v]).count()).expect("nonempty");
        for v in p.clone() {
            if adj[pivot][v] {
                continue;
            }
            let mut r2 = r.clone();
            r2.push(v);
            let p2 = p.iter().copied().filter(|&u| adj[v][u]).collect();
            let x2 = x.iter().copied().filter(|&u| adj[v][u]).collect();
            expand(adj, r2, p2, x2, out);
            p.retain(|&u| u != v);
            x.push(v);
        }
    }
    if n > 0 {
        expand(&adj, Vec::new(), (0..n).collect(), Vec::new(), &mut out);
    }
    for f in out.iter_mut() {
        f.sort_unstable();
    }
    out.sort();
    out
}

/// Integral points of `{sum(lambda_i r_i) : lambda >= 0}` with prescribed
/// class and total weight, enumerated coordinate by coordinate with LP
/// bounds on each coordinate.
struct FamilySearch<'a> {
    rays: Vec<&'a NormalVector>,
    support: Vec<usize>,
    /// Rows over lambda: class equations, then the weight equation.
    base_rows: Vec<Vec<Rational>>,
    base_rhs: Vec<Rational>,
}

impl<'a> FamilySearch<'a> {
    fn new(ball: &NormBall, rays: &[&'a NormalVector], alpha: &[Rational], weight: u64) -> Self {
        let n = rays.first().map_or(0, |r| r.len());
        let support: Vec<usize> = (0..n).filter(|&j| rays.iter().any(|r| !r.coords[j].is_zero())).collect();
        let classes: Vec<Vec<Rational>> = rays.iter().map(|r| ball.homology.class_of(r)).collect();
        let mut base_rows = Vec::new();
        let mut base_rhs = Vec::new();
        for (i, a) in alpha.iter().enumerate() {
            base_rows.push(classes.iter().map(|c| c[i].clone()).collect());
            base_rhs.push(a.clone());
        }
        base_rows.push(rays.iter().map(|r| r.total_weight()).collect());
        base_rhs.push(Rational::from_int(weight as i64));
        FamilySearch { rays: rays.to_vec(), support, base_rows, base_rhs }
    }

    fn coordinate_row(&self, j: usize) -> Vec<Rational> {
        self.rays.iter().map(|r| r.coords[j].clone()).collect()
    }

    /// Calls `visit` on each integral point in lexicographic order until it
    /// returns true.
    fn run(&self, visit: &mut dyn FnMut(&NormalVector) -> bool) {
        let mut fixed: Vec<(usize, Rational)> = Vec::new();
        self.descend(0, &mut fixed, visit);
    }

    fn program(&self, fixed: &[(usize, Rational)]) -> (Vec<Vec<Rational>>, Vec<Rational>) {
        let mut rows = self.base_rows.clone();
        let mut rhs = self.base_rhs.clone();
        for (j, v) in fixed {
            rows.push(self.coordinate_row(*j));
            rhs.push(v.clone());
        }
        (rows, rhs)
    }

    fn descend(&self, depth: usize, fixed: &mut Vec<(usize, Rational)>, visit: &mut dyn FnMut(&NormalVector) -> bool) -> bool {
        let (rows, rhs) = self.program(fixed);
        let k = self.rays.len();
        if depth == self.support.len() {
            if !lambda_feasible(k, &rows, &rhs) {
                return false;
            }
            let n = self.rays[0].len();
            let mut coords = vec![Rational::zero(); n];
            for (j, v) in fixed.iter() {
                coords[*j] = v.clone();
            }
            return visit(&NormalVector::new(coords, true));
        }
        let j = self.support[depth];
        let objective = self.coordinate_row(j);
        let Some(lo) = minimize_linear(k, &rows, &rhs, &objective) else {
            return false;
        };
        let hi = maximize_linear(k, &rows, &rhs, &objective).expect("bounded when feasible");
        let lo = lo.ceil().to_integer();
        let hi = hi.floor().to_integer();
        let mut v = lo;
        while v <= hi {
            fixed.push((j, Rational::from(v.clone())));
            if self.descend(depth + 1, fixed, visit) {
                return true;
            }
            fixed.pop();
            v += 1;
        }
        false
    }
}

fn lambda_feasible(k: usize, rows: &[Vec<Rational>], rhs: &[Rational]) -> bool {
    minimize_linear(k, rows, rhs, &vec![Rational::zero(); k]).is_some()
}

/// Result of looking for non-vertex-linking normal spheres.
#[derive(Clone, Debug)]
pub enum ZeroEfficiency {
    /// No vertex surface of the unoriented solution space has a sphere
    /// component that is not a vertex link.
    NoSphereAmongVertexSurfaces,
    Counterexample { coords: NormalVector, surface: NormalSurface },
}

pub fn check_zero_efficiency(tri: &ClosedTriangulation) -> ZeroEfficiency {
    for v in project_unoriented_solution_space(tri, RayFilter::Admissible) {
        let x = v.integral();
        let surface = reconstruct_surface(tri, &x).expect("admissible integral vertex rays are realizable");
        if surface.components.iter().any(|c| c.is_sphere() && c.vertex_link.is_none()) {
            return ZeroEfficiency::Counterexample { coords: x, surface };
        }
    }
    ZeroEfficiency::NoSphereAmongVertexSurfaces
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangulation::tests::D2;

    fn d2() -> ClosedTriangulation {
        ClosedTriangulation::from_json(D2).unwrap()
    }

    #[test]
    fn three_sphere_ball_is_a_point() {
        let tri = d2();
        let ball = norm_ball(&tri, Variant::Strict);
        assert_eq!(ball.rank(), 0);
        assert!(ball.b.points.is_empty());
        assert_eq!(ball.ball_vertices, vec![Vec::<Rational>::new()]);
        assert_eq!(evaluate_norm(&ball, &[]).unwrap(), Rational::zero());
        assert!(matches!(evaluate_norm(&ball, &[Rational::from_int(1)]), Err(Error::ClassDimension { .. })));
    }

    #[test]
    fn zero_chi_vertex_with_class_is_a_certificate() {
        let tri = ClosedTriangulation::from_json(include_str!("../tests/fixtures/s2xs1.json")).unwrap();
        let homology = homology_map_matrix(&tri);
        assert_eq!(homology.rank(), 1);
        let mut vertices = project_solution_space(&tri, RayFilter::Admissible);
        let v = vertices
            .iter_mut()
            .find(|v| homology.class_of(&v.point).iter().any(|c| !c.is_zero()))
            .expect("some vertex carries the generator");
        v.chi = Rational::zero();
        assert!(norm_ball_from_vertices(&tri, &vertices, Variant::NonStrict).has_hypothesis_certificate());
        assert!(!norm_ball_from_vertices(&tri, &vertices, Variant::Strict).has_hypothesis_certificate());
    }

    #[test]
    fn three_sphere_has_quad_sphere() {
        let tri = d2();
        let ZeroEfficiency::Counterexample { coords, surface } = check_zero_efficiency(&tri) else {
            panic!("expected a non-vertex-linking sphere");
        };
        assert_eq!(surface.euler_characteristic(), 2);
        assert!(surface.is_connected());
        let quads: usize = (0..tri.size()).map(|t| (4..7).filter(|&k| !coords.coords[7 * t + k].is_zero()).count()).sum();
        assert_eq!(quads, 2);
    }

    #[test]
    fn zero_class_representative_is_empty() {
        let tri = d2();
        let ball = norm_ball(&tri, Variant::Strict);
        let vertices = project_solution_space(&tri, RayFilter::Admissible);
        let RepresentativeSearch::Found(rep) = find_taut_representative(&tri, &ball, &vertices, &[], 3).unwrap() else {
            panic!("zero class");
        };
        assert!(rep.coords.is_zero());
    }

    #[test]
    fn families_are_maximal_cliques() {
        // Tetrahedron 0: quad kinds 0 and 1 conflict; everything else is compatible.
        let mk = |col: usize| {
            let mut c = vec![0i64; 14];
            c[col] = 1;
            NormalVector::from_ints(&c, true)
        };
        let vs = vec![mk(8), mk(10), mk(0)];
        assert_eq!(maximal_compatible_families(&vs), vec![vec![0, 2], vec![1, 2]]);
    }
}
