//! Disc and arc types, normal coordinates and matching equations.
//!
//! Unoriented disc types in a tetrahedron are the triangles `T0..T3` (kinds
//! 0..3, `Tv` cutting off vertex `v`) and the quads `Q1..Q3` (kinds 4..6, `Qk`
//! separating the edge `{0, k}` from the opposite edge). Unoriented column
//! `7 * tet + kind`; oriented column `14 * tet + 2 * kind + s` with `s = 0`
//! for the positive transverse orientation and `s = 1` for the negative one.
//! A triangle is positive when its transverse orientation points toward its
//! vertex, a quad when it points toward the side containing vertex 0.
//!
//! Arcs in a face are named by the corner they cut off and are positive
//! when oriented toward that corner.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{format_rational, parse_rational, Field};
use crate::triangulation::ClosedTriangulation;
use crate::Rational;

pub const UNORIENTED_PER_TET: usize = 7;
pub const ORIENTED_PER_TET: usize = 14;

/// Triangle at a vertex, or quad separating the edge `{0, k}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DiscKind {
    Triangle(usize),
    Quad(usize),
}

impl DiscKind {
    pub fn from_index(kind: usize) -> DiscKind {
        match kind {
            0..=3 => DiscKind::Triangle(kind),
            4..=6 => DiscKind::Quad(kind - 3),
            _ => panic!("disc kind {kind} out of range"),
        }
    }

    pub fn index(self) -> usize {
        match self {
            DiscKind::Triangle(v) => v,
            DiscKind::Quad(k) => 3 + k,
        }
    }

    pub fn sides(self) -> usize {
        match self {
            DiscKind::Triangle(_) => 3,
            DiscKind::Quad(_) => 4,
        }
    }

    /// Tetrahedron edges (as vertex pairs) the disc meets.
    pub fn edges(self) -> Vec<[usize; 2]> {
        match self {
            DiscKind::Triangle(v) => (0..4).filter(|&w| w != v).map(|w| [v.min(w), v.max(w)]).collect(),
            DiscKind::Quad(k) => {
                let side = [0, k];
                let other: Vec<usize> = (1..4).filter(|&w| w != k).collect();
                let mut out = Vec::with_capacity(4);
                for &a in &side {
                    for &b in &other {
                        out.push([a.min(b), a.max(b)]);
                    }
                }
                out
            }
        }
    }

    /// Corners `(face, corner)` of the arcs in the disc's boundary.
    pub fn arcs(self) -> Vec<(usize, usize)> {
        match self {
            DiscKind::Triangle(v) => (0..4).filter(|&f| f != v).map(|f| (f, v)).collect(),
            DiscKind::Quad(k) => {
                let mut out = Vec::with_capacity(4);
                for f in 0..4 {
                    for c in (0..4).filter(|&c| c != f) {
                        if quad_kind(f, c) == k {
                            out.push((f, c));
                        }
                    }
                }
                out
            }
        }
    }
}

/// Quad kind separating the pair `{a, b}` from the other two vertices.
pub fn quad_kind(a: usize, b: usize) -> usize {
    debug_assert!(a != b && a < 4 && b < 4);
    if a == 0 {
        b
    } else if b == 0 {
        a
    } else {
        6 - a - b
    }
}

/// Whether vertex `v` lies on the positive (vertex 0) side of quad kind `k`.
pub fn on_positive_side(k: usize, v: usize) -> bool {
    v == 0 || v == k
}

/// Sign of the arc a disc leaves at `corner`, for a disc orientation `sign`.
pub fn arc_sign(kind: DiscKind, corner: usize, sign: i8) -> i8 {
    match kind {
        DiscKind::Triangle(_) => sign,
        DiscKind::Quad(k) => {
            if on_positive_side(k, corner) {
                sign
            } else {
                -sign
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiscType {
    pub tet: usize,
    pub kind: DiscKind,
    /// Transverse orientation, `None` in the unoriented theory.
    pub orientation: Option<i8>,
}

impl DiscType {
    pub fn column(&self) -> usize {
        match self.orientation {
            None => UNORIENTED_PER_TET * self.tet + self.kind.index(),
            Some(s) => ORIENTED_PER_TET * self.tet + 2 * self.kind.index() + usize::from(s < 0),
        }
    }

    pub fn from_column(col: usize, oriented: bool) -> DiscType {
        if oriented {
            let tet = col / ORIENTED_PER_TET;
            let r = col % ORIENTED_PER_TET;
            DiscType { tet, kind: DiscKind::from_index(r / 2), orientation: Some(if r % 2 == 0 { 1 } else { -1 }) }
        } else {
            DiscType { tet: col / UNORIENTED_PER_TET, kind: DiscKind::from_index(col % UNORIENTED_PER_TET), orientation: None }
        }
    }
}

/// An arc class in an identified face: the corner it cuts off is named by
/// the vertex label on the face's first (smaller) side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArcType {
    pub face_class: usize,
    pub corner: usize,
    pub orientation: Option<i8>,
}

/// Every disc type in index order, for either theory.
pub fn enumerate_disc_types(t: usize, oriented: bool) -> Vec<DiscType> {
    let width = if oriented { ORIENTED_PER_TET } else { UNORIENTED_PER_TET };
    (0..t * width).map(|c| DiscType::from_column(c, oriented)).collect()
}

/// Every arc type in row order, for either theory.
pub fn enumerate_arc_types(tri: &ClosedTriangulation, oriented: bool) -> Vec<ArcType> {
    let sk = tri.skeleton();
    let mut out = Vec::new();
    for (f, [(_, face), _]) in sk.face_classes.iter().enumerate() {
        for corner in (0..4).filter(|c| c != face) {
            if oriented {
                for s in [1, -1] {
                    out.push(ArcType { face_class: f, corner, orientation: Some(s) });
                }
            } else {
                out.push(ArcType { face_class: f, corner, orientation: None });
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct MatchingSystem {
    pub oriented: bool,
    pub matrix: Matrix<i64>,
    pub rows: Vec<ArcType>,
    pub cols: Vec<DiscType>,
}

impl MatchingSystem {
    pub fn is_in_kernel(&self, x: &[Rational]) -> bool {
        self.matrix.map(|&v| Rational::from_int(v)).mul_vec(x).iter().all(|v| v == &Rational::from_int(0))
    }

    pub fn rational_matrix<T: Field>(&self) -> Matrix<T> {
        self.matrix.map(|&v| T::from_int(v))
    }
}

/// Matching equations: for each arc class, the discs on the first side of
/// the face carrying that arc, minus those on the second side, sum to zero.
pub fn build_matching_system(tri: &ClosedTriangulation, oriented: bool) -> MatchingSystem {
    let t = tri.size();
    let sk = tri.skeleton();
    let rows = enumerate_arc_types(tri, oriented);
    let cols = enumerate_disc_types(t, oriented);
    let mut matrix = Matrix::filled(rows.len(), cols.len(), 0i64);
    for (r, arc) in rows.iter().enumerate() {
        let [(ta, fa), (tb, fb)] = sk.face_classes[arc.face_class];
        let g = tri.gluing(ta, fa);
        debug_assert_eq!((g.target, g.perm.apply(fa)), (tb, fb));
        let sides = [(ta, fa, arc.corner, 1i64), (tb, fb, g.perm.apply(arc.corner), -1i64)];
        for (tet, face, corner, coef) in sides {
            let tri_kind = DiscKind::Triangle(corner);
            let quad = DiscKind::Quad(quad_kind(face, corner));
            for kind in [tri_kind, quad] {
                match arc.orientation {
                    None => {
                        let c = DiscType { tet, kind, orientation: None }.column();
                        let v = *matrix.get(r, c) + coef;
                        matrix.set(r, c, v);
                    }
                    Some(s) => {
                        // The disc orientation giving this arc sign.
                        let ds = arc_sign(kind, corner, s);
                        let c = DiscType { tet, kind, orientation: Some(ds) }.column();
                        let v = *matrix.get(r, c) + coef;
                        matrix.set(r, c, v);
                    }
                }
            }
        }
    }
    MatchingSystem { oriented, matrix, rows, cols }
}

/// A point of `ND` or its oriented analogue.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NormalVector {
    pub coords: Vec<Rational>,
    pub oriented: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NormalVectorJson {
    oriented: bool,
    coords: Vec<String>,
}

impl NormalVector {
    pub fn zero(t: usize, oriented: bool) -> NormalVector {
        let width = if oriented { ORIENTED_PER_TET } else { UNORIENTED_PER_TET };
        NormalVector { coords: vec![Rational::from_int(0); t * width], oriented }
    }

    pub fn new(coords: Vec<Rational>, oriented: bool) -> NormalVector {
        NormalVector { coords, oriented }
    }

    pub fn from_ints(coords: &[i64], oriented: bool) -> NormalVector {
        NormalVector { coords: coords.iter().map(|&c| Rational::from_int(c)).collect(), oriented }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn num_tets(&self) -> usize {
        self.coords.len() / if self.oriented { ORIENTED_PER_TET } else { UNORIENTED_PER_TET }
    }

    /// Checks length against a triangulation with `t` tetrahedra.
    pub fn check_len(&self, t: usize) -> Result<()> {
        let expected = t * if self.oriented { ORIENTED_PER_TET } else { UNORIENTED_PER_TET };
        if self.coords.len() == expected {
            Ok(())
        } else {
            Err(Error::LengthMismatch { expected, found: self.coords.len() })
        }
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coords.iter().all(|c| !c.is_negative())
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn total_weight(&self) -> Rational {
        self.coords.iter().fold(Rational::from_int(0), |a, c| a + c)
    }

    pub fn add(&self, other: &NormalVector) -> NormalVector {
        assert_eq!(self.oriented, other.oriented);
        assert_eq!(self.len(), other.len());
        NormalVector { coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(), oriented: self.oriented }
    }

    pub fn scale(&self, s: &Rational) -> NormalVector {
        NormalVector { coords: self.coords.iter().map(|a| a * s).collect(), oriented: self.oriented }
    }

    pub fn get(&self, d: DiscType) -> &Rational {
        &self.coords[d.column()]
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "oriented": self.oriented,
            "coords": self.coords.iter().map(format_rational).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(text: &str) -> Result<NormalVector> {
        let raw: NormalVectorJson = serde_json::from_str(text).map_err(|e| Error::Syntax(e.to_string()))?;
        let coords = raw
            .coords
            .iter()
            .map(|s| parse_rational(s).ok_or_else(|| Error::Syntax(format!("bad rational {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        let width = if raw.oriented { ORIENTED_PER_TET } else { UNORIENTED_PER_TET };
        if coords.len() % width != 0 {
            return Err(Error::Syntax(format!("coordinate count {} is not a multiple of {width}", coords.len())));
        }
        Ok(NormalVector { coords, oriented: raw.oriented })
    }

    /// Total weight (both orientations) of each unoriented disc type.
    pub fn unoriented_weights(&self) -> Vec<Rational> {
        if self.oriented {
            forget_orientation(self).coords
        } else {
            self.coords.clone()
        }
    }
}

/// Sums the two transverse orientations of every disc type.
pub fn forget_orientation(x: &NormalVector) -> NormalVector {
    assert!(x.oriented, "forget_orientation needs oriented coordinates");
    let coords = x.coords.chunks(2).map(|pair| &pair[0] + &pair[1]).collect();
    NormalVector { coords, oriented: false }
}

/// Swaps the two transverse orientations of every disc type.
pub fn reverse_orientation(x: &NormalVector) -> NormalVector {
    assert!(x.oriented, "reverse_orientation needs oriented coordinates");
    let mut coords = x.coords.clone();
    for pair in coords.chunks_mut(2) {
        pair.swap(0, 1);
    }
    NormalVector { coords, oriented: true }
}

/// Quad kinds with nonzero weight in each tetrahedron.
fn quad_kinds_used(weights: &[Rational]) -> Vec<Vec<usize>> {
    weights
        .chunks(UNORIENTED_PER_TET)
        .map(|tet| (1..=3).filter(|&k| !tet[3 + k].is_zero()).collect())
        .collect()
}

/// First tetrahedron carrying two or more quad kinds, with those kinds.
pub fn quad_conflict(x: &NormalVector) -> Result<Option<(usize, Vec<usize>)>> {
    if !x.is_nonnegative() {
        return Err(Error::Negative);
    }
    Ok(quad_kinds_used(&x.unoriented_weights()).into_iter().enumerate().find(|(_, kinds)| kinds.len() > 1))
}

/// At most one quad kind (either orientation) per tetrahedron.
pub fn is_admissible(x: &NormalVector) -> Result<bool> {
    Ok(quad_conflict(x)?.is_none())
}

pub fn is_compatible(x: &NormalVector, y: &NormalVector) -> Result<bool> {
    if x.oriented != y.oriented || x.len() != y.len() {
        return Err(Error::CoordinateMismatch);
    }
    if !x.is_nonnegative() || !y.is_nonnegative() {
        return Err(Error::Negative);
    }
    is_admissible(&x.add(y))
}

/// Admissibility as a downward closed predicate on supports.
pub fn admissible_support(support: &fixedbitset::FixedBitSet, oriented: bool) -> bool {
    let width = if oriented { ORIENTED_PER_TET } else { UNORIENTED_PER_TET };
    let t = support.len() / width;
    (0..t).all(|tet| {
        let used = (1..=3)
            .filter(|&k| {
                if oriented {
                    let base = width * tet + 2 * (3 + k);
                    support.contains(base) || support.contains(base + 1)
                } else {
                    support.contains(width * tet + 3 + k)
                }
            })
            .count();
        used <= 1
    })
}

/// The coordinate of the sphere linking a vertex class: one triangle at
/// each corner in the class. Oriented coordinates point away from the vertex
/// when `outward` is set.
pub fn vertex_link(tri: &ClosedTriangulation, vertex_class: usize, oriented: bool, outward: bool) -> NormalVector {
    let mut x = NormalVector::zero(tri.size(), oriented);
    for &(tet, v) in &tri.skeleton().vertex_classes[vertex_class] {
        let orientation = oriented.then_some(if outward { -1 } else { 1 });
        let d = DiscType { tet, kind: DiscKind::Triangle(v), orientation };
        x.coords[d.column()] += Rational::from_int(1);
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangulation::tests::D2;

    fn d2() -> ClosedTriangulation {
        ClosedTriangulation::from_json(D2).unwrap()
    }

    #[test]
    fn disc_columns_round_trip() {
        for oriented in [false, true] {
            for (c, d) in enumerate_disc_types(3, oriented).iter().enumerate() {
                assert_eq!(d.column(), c);
            }
        }
    }

    #[test]
    fn quad_arcs_and_edges() {
        for k in 1..=3 {
            let q = DiscKind::Quad(k);
            assert_eq!(q.arcs().len(), 4);
            assert_eq!(q.edges().len(), 4);
            for (f, c) in q.arcs() {
                assert_eq!(quad_kind(f, c), k);
            }
        }
        assert_eq!(quad_kind(1, 2), 3);
        assert_eq!(quad_kind(3, 0), 3);
    }

    #[test]
    fn d2_matching_dimensions() {
        let tri = d2();
        let o = build_matching_system(&tri, true);
        assert_eq!((o.matrix.rows(), o.matrix.cols()), (24, 28));
        let u = build_matching_system(&tri, false);
        assert_eq!((u.matrix.rows(), u.matrix.cols()), (12, 14));
        assert_eq!(o.rational_matrix::<Rational>().rank(), 13);
        assert_eq!(u.rational_matrix::<Rational>().rank(), 6);
    }

    #[test]
    fn vertex_links_lie_in_kernels() {
        let tri = d2();
        let o = build_matching_system(&tri, true);
        let u = build_matching_system(&tri, false);
        for v in 0..4 {
            assert!(o.is_in_kernel(&vertex_link(&tri, v, true, true).coords));
            assert!(o.is_in_kernel(&vertex_link(&tri, v, true, false).coords));
            assert!(u.is_in_kernel(&vertex_link(&tri, v, false, true).coords));
        }
    }

    #[test]
    fn admissibility_rules() {
        let mut x = NormalVector::zero(1, true);
        x.coords[DiscType { tet: 0, kind: DiscKind::Quad(1), orientation: Some(1) }.column()] = Rational::from_int(1);
        x.coords[DiscType { tet: 0, kind: DiscKind::Quad(1), orientation: Some(-1) }.column()] = Rational::from_int(1);
        assert!(is_admissible(&x).unwrap());
        assert_eq!(forget_orientation(&x).coords[4], Rational::from_int(2));
        let mut y = x.clone();
        y.coords[DiscType { tet: 0, kind: DiscKind::Quad(2), orientation: Some(1) }.column()] = Rational::from_int(1);
        assert!(!is_admissible(&y).unwrap());
        assert_eq!(quad_conflict(&y).unwrap(), Some((0, vec![1, 2])));
        let mut neg = x.clone();
        neg.coords[0] = Rational::from_int(-1);
        assert!(matches!(is_admissible(&neg), Err(Error::Negative)));
    }

    #[test]
    fn normal_vector_json_round_trip() {
        let x = NormalVector::from_ints(&[1, 0, 2, 0, 0, 0, 3], false);
        let text = x.to_json_value().to_string();
        assert_eq!(NormalVector::from_json(&text).unwrap(), x);
    }
}
