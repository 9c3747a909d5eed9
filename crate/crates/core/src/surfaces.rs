//! Embedded normal surfaces realizing admissible integral coordinates.
//!
//! Discs of one type in a tetrahedron are stacked in parallel sheets.
//! Triangle sheets are numbered outward from their vertex and quad sheets
//! starting from the side holding vertex 0. In each face, the arcs at a
//! corner are met in the order: triangle sheets, then quad sheets; arcs on
//! the two sides of a face are glued in that order.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::chi::chi_star_coefficients;
use crate::error::{Error, Result};
use crate::linalg::lp::{solve_lp, LinearProgram, LpOutcome};
use crate::normal::{
    arc_sign, build_matching_system, forget_orientation, on_positive_side, quad_conflict, quad_kind, DiscKind,
    DiscType, NormalVector, UNORIENTED_PER_TET,
};
use crate::scalar::{format_rational, Field};
use crate::triangulation::{ClosedTriangulation, EDGE_VERTICES};
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Disc {
    pub tet: usize,
    pub kind: DiscKind,
    pub sheet: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    /// Indices into [`NormalSurface::discs`], increasing.
    pub discs: Vec<usize>,
    pub euler_characteristic: i64,
    /// Two-sided components of a surface in an orientable manifold are
    /// exactly the orientable ones.
    pub orientable: bool,
    /// The vertex class this component links, if it is a vertex link.
    pub vertex_link: Option<usize>,
}

impl Component {
    pub fn genus(&self) -> Option<i64> {
        self.orientable.then(|| (2 - self.euler_characteristic) / 2)
    }

    pub fn is_sphere(&self) -> bool {
        self.orientable && self.euler_characteristic == 2
    }

    pub fn is_torus(&self) -> bool {
        self.orientable && self.euler_characteristic == 0
    }
}

#[derive(Clone, Debug)]
pub struct NormalSurface {
    /// Unoriented coordinate.
    pub coords: NormalVector,
    pub discs: Vec<Disc>,
    /// Glued pairs of disc boundary arcs, as disc indices.
    pub arc_pairs: Vec<(usize, usize)>,
    pub components: Vec<Component>,
    pub component_of: Vec<usize>,
    /// A transverse orientation of each disc, consistent along every arc of
    /// a two-sided component; `None` on one-sided components.
    pub sides: Vec<Option<i8>>,
}

impl NormalSurface {
    pub fn euler_characteristic(&self) -> i64 {
        self.components.iter().map(|c| c.euler_characteristic).sum()
    }

    pub fn is_connected(&self) -> bool {
        self.components.len() == 1
    }

    /// Per-component summary, with rational strings for numeric invariants.
    pub fn report(&self) -> Value {
        let components: Vec<Value> = self
            .components
            .iter()
            .map(|c| {
                json!({
                    "chi": format_rational(&Rational::from_int(c.euler_characteristic)),
                    "orientable": c.orientable,
                    "vertex_linking": c.vertex_link.is_some(),
                    "vertex_class": c.vertex_link,
                    "genus": c.genus().map(|g| format_rational(&Rational::from_int(g))),
                    "discs": c.discs.len(),
                })
            })
            .collect();
        let mut triangles = 0;
        let mut quads = 0;
        for d in &self.discs {
            match d.kind {
                DiscKind::Triangle(_) => triangles += 1,
                DiscKind::Quad(_) => quads += 1,
            }
        }
        json!({
            "chi": format_rational(&Rational::from_int(self.euler_characteristic())),
            "components": components,
            "disc_counts": {"triangles": triangles, "quads": quads},
        })
    }
}

fn count(x: &Rational) -> usize {
    x.to_integer().try_into().expect("disc count fits in usize")
}

/// Checks the preconditions of [`reconstruct_surface`] on an unoriented vector.
pub fn check_realizable(tri: &ClosedTriangulation, x: &NormalVector) -> Result<()> {
    if x.oriented {
        return Err(Error::TheoryMismatch { expected: "unoriented" });
    }
    x.check_len(tri.size())?;
    if !x.is_nonnegative() {
        return Err(Error::Negative);
    }
    if !x.is_integral() {
        return Err(Error::NotIntegral);
    }
    if let Some((tet, kinds)) = quad_conflict(x)? {
        return Err(Error::Inadmissible { tet, kinds });
    }
    if !build_matching_system(tri, false).is_in_kernel(&x.coords) {
        return Err(Error::NotInKernel);
    }
    Ok(())
}

/// The embedded surface with the given unoriented coordinate.
pub fn reconstruct_surface(tri: &ClosedTriangulation, x: &NormalVector) -> Result<NormalSurface> {
    check_realizable(tri, x)?;
    let t = tri.size();
    let sk = tri.skeleton();

    let mut discs = Vec::new();
    let mut first = vec![[0usize; UNORIENTED_PER_TET]; t];
    for tet in 0..t {
        for k in 0..UNORIENTED_PER_TET {
            first[tet][k] = discs.len();
            let kind = DiscKind::from_index(k);
            for sheet in 0..count(&x.coords[UNORIENTED_PER_TET * tet + k]) {
                discs.push(Disc { tet, kind, sheet });
            }
        }
    }
    let n_of = |tet: usize, kind: DiscKind| count(&x.coords[UNORIENTED_PER_TET * tet + kind.index()]);

    // Arcs at `corner` of `face`, from the corner outward.
    let arcs_at = |tet: usize, face: usize, corner: usize| -> Vec<usize> {
        let tri_kind = DiscKind::Triangle(corner);
        let mut out: Vec<usize> = (0..n_of(tet, tri_kind)).map(|s| first[tet][tri_kind.index()] + s).collect();
        let k = quad_kind(face, corner);
        let quad = DiscKind::Quad(k);
        let q = n_of(tet, quad);
        let start = first[tet][quad.index()];
        if on_positive_side(k, corner) {
            out.extend((0..q).map(|s| start + s));
        } else {
            out.extend((0..q).rev().map(|s| start + s));
        }
        out
    };

    let mut parent: Vec<usize> = (0..discs.len()).collect();
    fn find(parent: &mut [usize], mut a: usize) -> usize {
        while parent[a] != a {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        a
    }
    let mut arc_pairs = Vec::new();
    // Edges of the disc adjacency graph, with the relative orientation sign.
    let mut links: Vec<Vec<(usize, i8)>> = vec![Vec::new(); discs.len()];
    for &[(ta, fa), (tb, fb)] in &sk.face_classes {
        let g = tri.gluing(ta, fa);
        for c in (0..4).filter(|&c| c != fa) {
            let d = g.perm.apply(c);
            let a = arcs_at(ta, fa, c);
            let b = arcs_at(tb, fb, d);
            assert_eq!(a.len(), b.len(), "matching equations hold");
            for (&i, &j) in a.iter().zip(&b) {
                arc_pairs.push((i, j));
                // The same transverse arc sign on both sides of the face.
                let rel = arc_sign(discs[i].kind, c, 1) * arc_sign(discs[j].kind, d, 1);
                links[i].push((j, rel));
                links[j].push((i, rel));
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }

    let mut component_index = BTreeMap::new();
    let mut component_of = vec![0; discs.len()];
    let mut members: Vec<Vec<usize>> = Vec::new();
    for i in 0..discs.len() {
        let r = find(&mut parent, i);
        let c = *component_index.entry(r).or_insert_with(|| {
            members.push(Vec::new());
            members.len() - 1
        });
        component_of[i] = c;
        members[c].push(i);
    }

    // Points where the surface meets each edge class, read in the first
    // tetrahedron edge of the class.
    let mut vertices = vec![0i64; members.len()];
    for class in &sk.edge_classes {
        let (tet, e) = class[0];
        let [a, b] = EDGE_VERTICES[e];
        for (i, d) in discs.iter().enumerate().filter(|(_, d)| d.tet == tet) {
            let crosses = match d.kind {
                DiscKind::Triangle(v) => v == a || v == b,
                DiscKind::Quad(k) => on_positive_side(k, a) != on_positive_side(k, b),
            };
            if crosses {
                vertices[component_of[i]] += 1;
            }
        }
    }

    let mut sides: Vec<Option<i8>> = vec![None; discs.len()];
    let mut components = Vec::with_capacity(members.len());
    for (c, list) in members.into_iter().enumerate() {
        let faces = list.len() as i64;
        let edges = list.iter().map(|&i| discs[i].kind.sides() as i64).sum::<i64>() / 2;
        let mut two_sided = true;
        sides[list[0]] = Some(1);
        let mut stack = vec![list[0]];
        while let Some(i) = stack.pop() {
            let s = sides[i].expect("visited");
            for &(j, rel) in &links[i] {
                match sides[j] {
                    None => {
                        sides[j] = Some(s * rel);
                        stack.push(j);
                    }
                    Some(sj) if sj != s * rel => two_sided = false,
                    Some(_) => {}
                }
            }
        }
        if !two_sided {
            for &i in &list {
                sides[i] = None;
            }
        }
        let vertex_link = {
            let classes: Vec<Option<usize>> = list
                .iter()
                .map(|&i| match discs[i].kind {
                    DiscKind::Triangle(v) => Some(sk.vertex_of[discs[i].tet][v]),
                    DiscKind::Quad(_) => None,
                })
                .collect();
            match classes[0] {
                Some(v) if classes.iter().all(|&w| w == Some(v)) => Some(v),
                _ => None,
            }
        };
        components.push(Component {
            discs: list,
            euler_characteristic: vertices[c] - edges + faces,
            orientable: two_sided,
            vertex_link,
        });
    }

    Ok(NormalSurface { coords: x.clone(), discs, arc_pairs, components, component_of, sides })
}

/// Outcome of trying to give a surface a prescribed oriented coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TransverseOrientation {
    /// Per component, +1 keeps the orientation recorded in `sides`, -1
    /// reverses it.
    Assigned(Vec<i8>),
    /// These components admit no transverse orientation.
    OneSided(Vec<usize>),
    Impossible,
}

/// Oriented coordinate of the surface with component `c` flipped by `sign`.
fn oriented_contribution(surface: &NormalSurface, c: usize, sign: i8) -> Vec<Rational> {
    let t = surface.coords.num_tets();
    let mut out = vec![Rational::zero(); 2 * UNORIENTED_PER_TET * t];
    for &i in &surface.components[c].discs {
        let d = surface.discs[i];
        let s = surface.sides[i].expect("two-sided component") * sign;
        out[DiscType { tet: d.tet, kind: d.kind, orientation: Some(s) }.column()] += Rational::one();
    }
    out
}

/// Chooses a transverse orientation of each component so that the oriented
/// disc counts equal `target`.
pub fn assign_transverse_orientation(surface: &NormalSurface, target: &NormalVector) -> Result<TransverseOrientation> {
    if !target.oriented {
        return Err(Error::TheoryMismatch { expected: "oriented" });
    }
    if target.len() != 2 * surface.coords.len() || forget_orientation(target) != surface.coords {
        return Err(Error::CoordinateMismatch);
    }
    let one_sided: Vec<usize> = (0..surface.components.len()).filter(|&c| !surface.components[c].orientable).collect();
    if !one_sided.is_empty() {
        return Ok(TransverseOrientation::OneSided(one_sided));
    }

    // Parallel copies contribute identical vectors; choose how many of each
    // group are reversed.
    let mut groups: BTreeMap<(Vec<Rational>, Vec<Rational>), Vec<usize>> = BTreeMap::new();
    for c in 0..surface.components.len() {
        let key = (oriented_contribution(surface, c, 1), oriented_contribution(surface, c, -1));
        groups.entry(key).or_default().push(c);
    }
    let groups: Vec<_> = groups.into_iter().collect();
    let mut residual = target.coords.clone();
    let mut flips = vec![0usize; groups.len()];
    if search(&groups, 0, &mut residual, &mut flips) {
        let mut out = vec![1i8; surface.components.len()];
        for ((_, comps), f) in groups.iter().zip(&flips) {
            for &c in &comps[..*f] {
                out[c] = -1;
            }
        }
        Ok(TransverseOrientation::Assigned(out))
    } else {
        Ok(TransverseOrientation::Impossible)
    }
}

type Group = ((Vec<Rational>, Vec<Rational>), Vec<usize>);

fn search(groups: &[Group], g: usize, residual: &mut [Rational], flips: &mut [usize]) -> bool {
    if g == groups.len() {
        return residual.iter().all(|r| r.is_zero());
    }
    let ((plus, minus), comps) = &groups[g];
    let m = comps.len();
    for reversed in 0..=m {
        let kept = Rational::from_int((m - reversed) as i64);
        let rev = Rational::from_int(reversed as i64);
        let fits = residual
            .iter()
            .zip(plus.iter().zip(minus))
            .all(|(r, (p, q))| !(r.clone() - &kept * p - &rev * q).is_negative());
        if !fits {
            continue;
        }
        for (r, (p, q)) in residual.iter_mut().zip(plus.iter().zip(minus)) {
            *r -= &kept * p + &rev * q;
        }
        flips[g] = reversed;
        if search(groups, g + 1, residual, flips) {
            return true;
        }
        for (r, (p, q)) in residual.iter_mut().zip(plus.iter().zip(minus)) {
            *r += &kept * p + &rev * q;
        }
    }
    false
}

/// The oriented coordinate of a surface with the given per-component choice.
pub fn oriented_coordinate(surface: &NormalSurface, choice: &[i8]) -> NormalVector {
    let t = surface.coords.num_tets();
    let mut out = vec![Rational::zero(); 2 * UNORIENTED_PER_TET * t];
    for (c, &s) in choice.iter().enumerate() {
        for (o, v) in out.iter_mut().zip(oriented_contribution(surface, c, s)) {
            *o += v;
        }
    }
    NormalVector::new(out, true)
}

/// Largest value of the Euler characteristic functional over
/// `{y : My = 0, 0 <= y <= x}`.
pub fn max_chi_below(tri: &ClosedTriangulation, x: &NormalVector) -> Result<Rational> {
    if !x.oriented {
        return Err(Error::TheoryMismatch { expected: "oriented" });
    }
    x.check_len(tri.size())?;
    if !x.is_nonnegative() {
        return Err(Error::Negative);
    }
    let system = build_matching_system(tri, true);
    if !system.is_in_kernel(&x.coords) {
        return Err(Error::NotInKernel);
    }
    let n = x.len();
    let lp = LinearProgram {
        objective: chi_star_coefficients(tri, true),
        equations: system.rational_matrix(),
        rhs: vec![Rational::zero(); system.matrix.rows()],
        lower: vec![Some(Rational::zero()); n],
        upper: x.coords.iter().cloned().map(Some).collect(),
    };
    match solve_lp(&lp) {
        LpOutcome::Optimal(sol) => Ok(sol.value),
        other => unreachable!("y = 0 is feasible and the region is bounded: {other:?}"),
    }
}

/// Every `y` in the nonnegative kernel with `y <= x` has `chi*(y) <= 0`.
pub fn is_algebraically_aspherical(tri: &ClosedTriangulation, x: &NormalVector) -> Result<bool> {
    Ok(!max_chi_below(tri, x)?.is_positive())
}

/// Sum of two compatible nonnegative vectors of the same theory.
pub fn add_compatible(x: &NormalVector, y: &NormalVector) -> Result<NormalVector> {
    if x.oriented != y.oriented || x.len() != y.len() {
        return Err(Error::CoordinateMismatch);
    }
    if !x.is_nonnegative() || !y.is_nonnegative() {
        return Err(Error::Negative);
    }
    let sum = x.add(y);
    match quad_conflict(&sum)? {
        Some((tet, kinds)) => Err(Error::Incompatible { tet, kinds }),
        None => Ok(sum),
    }
}
