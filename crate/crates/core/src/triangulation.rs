//! Closed 3-manifold triangulations given as face-gluing tables.
//!
//! Face `i` of a tetrahedron is the face opposite vertex `i`. A gluing of
//! face `i` of tetrahedron `A` is a target tetrahedron `B` together with a
//! permutation `p` of the vertex labels; face `i` of `A` is identified with
//! face `p(i)` of `B`, vertex `v` going to vertex `p(v)`.

use std::collections::VecDeque;
use std::fmt;

use serde::Deserialize;

use crate::error::{Error, Result, ValidationFailure, ValidationReport};

/// Vertex pairs of the six tetrahedron edges, in edge-index order.
pub const EDGE_VERTICES: [[usize; 2]; 6] = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]];

pub fn edge_index(a: usize, b: usize) -> usize {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    EDGE_VERTICES
        .iter()
        .position(|e| e[0] == a && e[1] == b)
        .expect("distinct vertices of a tetrahedron")
}

/// A permutation of `{0, 1, 2, 3}`, stored as the images of 0, 1, 2, 3.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm4([u8; 4]);

impl Perm4 {
    pub const IDENTITY: Perm4 = Perm4([0, 1, 2, 3]);

    pub fn from_images(images: [u8; 4]) -> Option<Perm4> {
        let mut seen = [false; 4];
        for &x in &images {
            if x > 3 || seen[x as usize] {
                return None;
            }
            seen[x as usize] = true;
        }
        Some(Perm4(images))
    }

    /// Parses the 4-character image string, e.g. `"1032"`.
    pub fn parse(s: &str) -> Option<Perm4> {
        let bytes = s.as_bytes();
        if bytes.len() != 4 {
            return None;
        }
        let mut images = [0u8; 4];
        for (slot, &b) in images.iter_mut().zip(bytes) {
            if !(b'0'..=b'3').contains(&b) {
                return None;
            }
            *slot = b - b'0';
        }
        Perm4::from_images(images)
    }

    #[inline]
    pub fn apply(self, v: usize) -> usize {
        self.0[v] as usize
    }

    pub fn inverse(self) -> Perm4 {
        let mut inv = [0u8; 4];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u8;
        }
        Perm4(inv)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(self, other: Perm4) -> Perm4 {
        let mut out = [0u8; 4];
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = self.0[other.0[i] as usize];
        }
        Perm4(out)
    }

    /// +1 for even permutations, -1 for odd.
    pub fn sign(self) -> i8 {
        let mut inversions = 0;
        for i in 0..4 {
            for j in i + 1..4 {
                if self.0[i] > self.0[j] {
                    inversions += 1;
                }
            }
        }
        if inversions % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

impl fmt::Display for Perm4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for x in self.0 {
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm4({self})")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Gluing {
    pub target: usize,
    pub perm: Perm4,
}

/// A parsed gluing table. Nothing beyond syntax and index bounds is checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangulation {
    tets: Vec<[Option<Gluing>; 4]>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GluingFile {
    tets: Vec<Vec<Option<(i64, String)>>>,
}

/// Parses the JSON gluing format `{"tets": [[[t, "perm"], ...4], ...]}`.
///
/// A `null` entry marks an unglued face; it parses, and is rejected by
/// validation.
pub fn parse_triangulation(text: &str) -> Result<Triangulation> {
    let file: GluingFile = serde_json::from_str(text).map_err(|e| Error::Syntax(e.to_string()))?;
    if file.tets.is_empty() {
        return Err(Error::EmptyTriangulation);
    }
    let n = file.tets.len();
    let mut tets = Vec::with_capacity(n);
    for (tet, faces) in file.tets.into_iter().enumerate() {
        if faces.len() != 4 {
            return Err(Error::Syntax(format!(
                "tetrahedron {tet} lists {} gluings, expected 4",
                faces.len()
            )));
        }
        let mut row = [None; 4];
        for (face, entry) in faces.into_iter().enumerate() {
            let Some((target, perm)) = entry else { continue };
            if target < 0 || target as usize >= n {
                return Err(Error::IndexOutOfRange { tet, face, target });
            }
            let perm = Perm4::parse(&perm).ok_or(Error::BadPermutation { tet, face, perm })?;
            row[face] = Some(Gluing { target: target as usize, perm });
        }
        tets.push(row);
    }
    Ok(Triangulation { tets })
}

impl Triangulation {
    pub fn new(tets: Vec<[Option<Gluing>; 4]>) -> Result<Triangulation> {
        if tets.is_empty() {
            return Err(Error::EmptyTriangulation);
        }
        for (tet, row) in tets.iter().enumerate() {
            for (face, g) in row.iter().enumerate() {
                if let Some(g) = g {
                    if g.target >= tets.len() {
                        return Err(Error::IndexOutOfRange { tet, face, target: g.target as i64 });
                    }
                }
            }
        }
        Ok(Triangulation { tets })
    }

    pub fn size(&self) -> usize {
        self.tets.len()
    }

    pub fn gluing(&self, tet: usize, face: usize) -> Option<Gluing> {
        self.tets[tet][face]
    }

    /// Serializes back to the JSON gluing format.
    pub fn to_json(&self) -> String {
        let rows: Vec<String> = self
            .tets
            .iter()
            .map(|row| {
                let cells: Vec<String> = row
                    .iter()
                    .map(|g| match g {
                        Some(g) => format!("[{},\"{}\"]", g.target, g.perm),
                        None => "null".to_string(),
                    })
                    .collect();
                format!("[{}]", cells.join(","))
            })
            .collect();
        format!("{{\"tets\":[{}]}}", rows.join(","))
    }

    fn gluing_failures(&self) -> Vec<ValidationFailure> {
        let mut failures = Vec::new();
        for (tet, row) in self.tets.iter().enumerate() {
            for (face, g) in row.iter().enumerate() {
                let Some(g) = g else {
                    failures.push(ValidationFailure::Unglued { tet, face });
                    continue;
                };
                let back_face = g.perm.apply(face);
                if g.target == tet && back_face == face {
                    failures.push(ValidationFailure::FaceGluedToItself { tet, face });
                    continue;
                }
                let ok = matches!(
                    self.tets[g.target][back_face],
                    Some(b) if b.target == tet && b.perm == g.perm.inverse()
                );
                if !ok {
                    failures.push(ValidationFailure::NotInvolutive { tet, face });
                }
            }
        }
        failures
    }

    /// Checks closedness, involutive gluings, manifold vertex links and
    /// orientability; returns the per-tetrahedron orientation signs.
    ///
    /// Signs propagate breadth-first from tetrahedron 0 with sign +1; across a
    /// gluing with permutation `p` the neighbour receives `-sign(p)` times the
    /// current sign, so that the two tetrahedra induce opposite orientations
    /// on the shared face.
    pub fn validate_and_orient(&self) -> std::result::Result<Vec<i8>, ValidationReport> {
        let failures = self.gluing_failures();
        if !failures.is_empty() {
            return Err(ValidationReport { failures });
        }
        let (skeleton, mut failures) = build_skeleton(self);

        let n = self.size();
        let mut signs = vec![0i8; n];
        let mut components = 0;
        for start in 0..n {
            if signs[start] != 0 {
                continue;
            }
            components += 1;
            signs[start] = 1;
            let mut queue = VecDeque::from([start]);
            while let Some(a) = queue.pop_front() {
                for face in 0..4 {
                    let g = self.tets[a][face].expect("checked glued");
                    let want = -g.perm.sign() * signs[a];
                    if signs[g.target] == 0 {
                        signs[g.target] = want;
                        queue.push_back(g.target);
                    } else if signs[g.target] != want && (a, face) <= (g.target, g.perm.apply(face)) {
                        failures.push(ValidationFailure::NonOrientable { tet: a, face });
                    }
                }
            }
        }
        if components > 1 {
            failures.push(ValidationFailure::Disconnected { components });
        }
        for (vertex, euler) in vertex_link_euler(self, &skeleton).into_iter().enumerate() {
            if euler != 2 {
                failures.push(ValidationFailure::VertexLinkNotSphere { vertex, euler });
            }
        }
        if failures.is_empty() {
            Ok(signs)
        } else {
            Err(ValidationReport { failures })
        }
    }
}

/// Identified vertices, edges and faces of a closed triangulation.
///
/// Classes are numbered by their smallest `(tet, index)` member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Skeleton {
    pub vertex_of: Vec<[usize; 4]>,
    pub edge_of: Vec<[usize; 6]>,
    /// +1 when the tetrahedron edge, directed from its lower to its higher
    /// vertex label, agrees with the direction of its edge class.
    pub edge_sign: Vec<[i8; 6]>,
    pub face_of: Vec<[usize; 4]>,
    pub vertex_classes: Vec<Vec<(usize, usize)>>,
    pub edge_classes: Vec<Vec<(usize, usize)>>,
    /// Both sides of each face class, the smaller `(tet, face)` first.
    pub face_classes: Vec<[(usize, usize); 2]>,
    /// Number of tetrahedron corners around each edge class.
    pub degrees: Vec<usize>,
    /// Tail and head vertex classes of each directed edge class.
    pub edge_ends: Vec<(usize, usize)>,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

#[inline]
fn directed(tet: usize, a: usize, b: usize) -> usize {
    tet * 16 + a * 4 + b
}

struct DirectedEdges {
    uf: UnionFind,
}

impl DirectedEdges {
    fn new(tri: &Triangulation) -> Self {
        let mut uf = UnionFind::new(tri.size() * 16);
        for tet in 0..tri.size() {
            for face in 0..4 {
                let g = tri.tets[tet][face].expect("closed");
                for &[a, b] in &EDGE_VERTICES {
                    if a == face || b == face {
                        continue;
                    }
                    let (pa, pb) = (g.perm.apply(a), g.perm.apply(b));
                    uf.union(directed(tet, a, b), directed(g.target, pa, pb));
                    uf.union(directed(tet, b, a), directed(g.target, pb, pa));
                }
            }
        }
        DirectedEdges { uf }
    }
}

/// Derives the identified skeleton. Requires every face to be glued
/// involutively; reversed edge self-identifications are reported.
pub fn compute_skeleton(tri: &Triangulation) -> std::result::Result<Skeleton, ValidationReport> {
    let failures = tri.gluing_failures();
    if !failures.is_empty() {
        return Err(ValidationReport { failures });
    }
    let (skeleton, failures) = build_skeleton(tri);
    if failures.is_empty() {
        Ok(skeleton)
    } else {
        Err(ValidationReport { failures })
    }
}

fn build_skeleton(tri: &Triangulation) -> (Skeleton, Vec<ValidationFailure>) {
    let n = tri.size();
    let mut failures = Vec::new();

    let mut vuf = UnionFind::new(n * 4);
    for tet in 0..n {
        for face in 0..4 {
            let g = tri.tets[tet][face].expect("closed");
            for v in (0..4).filter(|&v| v != face) {
                vuf.union(tet * 4 + v, g.target * 4 + g.perm.apply(v));
            }
        }
    }
    let mut vertex_of = vec![[usize::MAX; 4]; n];
    let mut vertex_classes: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut root_class = vec![usize::MAX; n * 4];
    for tet in 0..n {
        for v in 0..4 {
            let r = vuf.find(tet * 4 + v);
            if root_class[r] == usize::MAX {
                root_class[r] = vertex_classes.len();
                vertex_classes.push(Vec::new());
            }
            vertex_of[tet][v] = root_class[r];
            vertex_classes[root_class[r]].push((tet, v));
        }
    }

    let mut dir = DirectedEdges::new(tri);
    let mut edge_of = vec![[usize::MAX; 6]; n];
    let mut edge_sign = vec![[0i8; 6]; n];
    let mut edge_classes: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut edge_ends = Vec::new();
    let mut canonical_root: Vec<usize> = Vec::new();
    let mut class_of_root = std::collections::HashMap::new();
    for tet in 0..n {
        for (e, &[a, b]) in EDGE_VERTICES.iter().enumerate() {
            let fwd = dir.uf.find(directed(tet, a, b));
            let bwd = dir.uf.find(directed(tet, b, a));
            if fwd == bwd {
                failures.push(ValidationFailure::EdgeReversed { tet, edge: e });
            }
            let (class, sign) = if let Some(&c) = class_of_root.get(&fwd) {
                (c, if canonical_root[c] == fwd { 1 } else { -1 })
            } else if let Some(&c) = class_of_root.get(&bwd) {
                (c, if canonical_root[c] == fwd { 1 } else { -1 })
            } else {
                let c = edge_classes.len();
                class_of_root.insert(fwd, c);
                class_of_root.insert(bwd, c);
                canonical_root.push(fwd);
                edge_classes.push(Vec::new());
                edge_ends.push((vertex_of[tet][a], vertex_of[tet][b]));
                (c, 1)
            };
            edge_of[tet][e] = class;
            edge_sign[tet][e] = sign;
            edge_classes[class].push((tet, e));
        }
    }
    let degrees = edge_classes.iter().map(|c| c.len()).collect();

    let mut face_of = vec![[usize::MAX; 4]; n];
    let mut face_classes = Vec::new();
    for tet in 0..n {
        for face in 0..4 {
            if face_of[tet][face] != usize::MAX {
                continue;
            }
            let g = tri.tets[tet][face].expect("closed");
            let other = (g.target, g.perm.apply(face));
            face_of[tet][face] = face_classes.len();
            face_of[other.0][other.1] = face_classes.len();
            face_classes.push([(tet, face), other]);
        }
    }

    (
        Skeleton {
            vertex_of,
            edge_of,
            edge_sign,
            face_of,
            vertex_classes,
            edge_classes,
            face_classes,
            degrees,
            edge_ends,
        },
        failures,
    )
}

/// Euler characteristic of each vertex link, from its induced triangulation.
fn vertex_link_euler(tri: &Triangulation, skeleton: &Skeleton) -> Vec<i64> {
    let mut dir = DirectedEdges::new(tri);
    let nv = skeleton.vertex_classes.len();
    let mut link_vertices = vec![std::collections::BTreeSet::new(); nv];
    for tet in 0..tri.size() {
        for a in 0..4 {
            for b in (0..4).filter(|&b| b != a) {
                let root = dir.uf.find(directed(tet, a, b));
                link_vertices[skeleton.vertex_of[tet][a]].insert(root);
            }
        }
    }
    (0..nv)
        .map(|v| {
            let triangles = skeleton.vertex_classes[v].len() as i64;
            // V - E + F with E = 3F/2.
            (2 * link_vertices[v].len() as i64 - triangles) / 2
        })
        .collect()
}

/// A validated, oriented closed triangulation with its skeleton derived.
#[derive(Clone, Debug)]
pub struct ClosedTriangulation {
    tri: Triangulation,
    signs: Vec<i8>,
    skeleton: Skeleton,
}

impl ClosedTriangulation {
    pub fn new(tri: Triangulation) -> std::result::Result<Self, ValidationReport> {
        let signs = tri.validate_and_orient()?;
        let skeleton = compute_skeleton(&tri)?;
        Ok(ClosedTriangulation { tri, signs, skeleton })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let tri = parse_triangulation(text)?;
        ClosedTriangulation::new(tri).map_err(Error::Invalid)
    }

    /// Number of tetrahedra.
    pub fn size(&self) -> usize {
        self.tri.size()
    }

    pub fn triangulation(&self) -> &Triangulation {
        &self.tri
    }

    pub fn skeleton(&self) -> &Skeleton {
        &self.skeleton
    }

    pub fn tet_signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn gluing(&self, tet: usize, face: usize) -> Gluing {
        self.tri.tets[tet][face].expect("validated triangulations are closed")
    }

    /// True when every simplex is embedded and determined by its vertices.
    pub fn is_simplicial(&self) -> bool {
        fn distinct_keys(keys: impl Iterator<Item = Vec<usize>>, arity: usize) -> bool {
            let mut seen = std::collections::HashSet::new();
            keys.into_iter().all(|mut key| {
                key.sort_unstable();
                key.dedup();
                key.len() == arity && seen.insert(key)
            })
        }
        let sk = &self.skeleton;
        let edges = sk.edge_classes.iter().map(|members| {
            let (t, e) = members[0];
            EDGE_VERTICES[e].iter().map(|&v| sk.vertex_of[t][v]).collect()
        });
        let faces = sk.face_classes.iter().map(|[(t, f), _]| {
            (0..4).filter(|v| v != f).map(|v| sk.vertex_of[*t][v]).collect()
        });
        let tets = sk.vertex_of.iter().map(|vs| vs.to_vec());
        distinct_keys(edges, 2) && distinct_keys(faces, 3) && distinct_keys(tets, 4)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) const D2: &str = r#"{"tets":[[[1,"0123"],[1,"0123"],[1,"0123"],[1,"0123"]],[[0,"0123"],[0,"0123"],[0,"0123"],[0,"0123"]]]}"#;

    #[test]
    fn perm_basics() {
        let p = Perm4::parse("1230").unwrap();
        assert_eq!(p.apply(0), 1);
        assert_eq!(p.compose(p.inverse()), Perm4::IDENTITY);
        assert_eq!(p.sign(), -1);
        assert_eq!(Perm4::parse("1032").unwrap().sign(), 1);
        assert!(Perm4::parse("0012").is_none());
        assert!(Perm4::parse("01234").is_none());
        assert!(Perm4::parse("0124").is_none());
    }

    #[test]
    fn parse_doubled_tetrahedron() {
        let tri = parse_triangulation(D2).unwrap();
        assert_eq!(tri.size(), 2);
        for face in 0..4 {
            assert_eq!(tri.gluing(0, face), Some(Gluing { target: 1, perm: Perm4::IDENTITY }));
        }
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_triangulation(r#"{"tets":[]}"#), Err(Error::EmptyTriangulation)));
        assert!(matches!(parse_triangulation("{\"tets\":"), Err(Error::Syntax(_))));
        assert!(matches!(
            parse_triangulation(r#"{"tets":[[[3,"0123"],[0,"0123"],[0,"0123"],[0,"0123"]]]}"#),
            Err(Error::IndexOutOfRange { target: 3, .. })
        ));
        assert!(matches!(
            parse_triangulation(r#"{"tets":[[[0,"0023"],[0,"0123"],[0,"0123"],[0,"0123"]]]}"#),
            Err(Error::BadPermutation { .. })
        ));
        assert!(matches!(parse_triangulation(&format!("{D2} x")), Err(Error::Syntax(_))));
    }

    #[test]
    fn non_involutive_gluing_parses_then_fails_validation() {
        // face 0 of tet 0 points to tet 1, but tet 1 face 0 points back to tet 1 face 1.
        let text = r#"{"tets":[[[1,"0123"],[1,"0123"],[1,"0123"],[1,"0123"]],[[1,"1023"],[0,"0123"],[0,"0123"],[0,"0123"]]]}"#;
        let tri = parse_triangulation(text).unwrap();
        let report = tri.validate_and_orient().unwrap_err();
        assert!(report.failures.iter().any(|f| matches!(f, ValidationFailure::NotInvolutive { .. })));
    }

    #[test]
    fn doubled_tetrahedron_orients_with_opposite_signs() {
        let tri = parse_triangulation(D2).unwrap();
        assert_eq!(tri.validate_and_orient().unwrap(), vec![1, -1]);
    }

    #[test]
    fn face_glued_to_itself_is_rejected() {
        let text = r#"{"tets":[[[0,"0132"],[0,"0123"],[0,"0123"],[0,"0123"]]]}"#;
        let report = parse_triangulation(text).unwrap().validate_and_orient().unwrap_err();
        assert!(report.failures.contains(&ValidationFailure::FaceGluedToItself { tet: 0, face: 0 }));
    }

    #[test]
    fn unglued_face_is_not_closed() {
        let text = r#"{"tets":[[null,[1,"0123"],[1,"0123"],[1,"0123"]],[null,[0,"0123"],[0,"0123"],[0,"0123"]]]}"#;
        let report = parse_triangulation(text).unwrap().validate_and_orient().unwrap_err();
        assert!(report.failures.contains(&ValidationFailure::Unglued { tet: 0, face: 0 }));
    }

    #[test]
    fn odd_regluing_of_doubled_tetrahedron_is_rejected() {
        // Face 0 reglued by the transposition (2 3): the two tetrahedra must now
        // carry equal signs across face 0 and opposite signs across the others.
        let text = r#"{"tets":[[[1,"0132"],[1,"0123"],[1,"0123"],[1,"0123"]],[[0,"0132"],[0,"0123"],[0,"0123"],[0,"0123"]]]}"#;
        let report = parse_triangulation(text).unwrap().validate_and_orient().unwrap_err();
        assert!(report.failures.iter().any(|f| matches!(f, ValidationFailure::NonOrientable { .. })));
    }

    #[test]
    fn doubled_tetrahedron_skeleton() {
        let tri = parse_triangulation(D2).unwrap();
        let sk = compute_skeleton(&tri).unwrap();
        assert_eq!(sk.edge_classes.len(), 6);
        assert!(sk.degrees.iter().all(|&d| d == 2));
        assert_eq!(sk.vertex_classes.len(), 4);
        assert_eq!(sk.face_classes.len(), 4);
        assert_eq!(sk.face_classes[0], [(0, 0), (1, 0)]);
        assert_eq!(sk.edge_of[1], [0, 1, 2, 3, 4, 5]);
        assert!(sk.edge_sign.iter().flatten().all(|&s| s == 1));
    }

    #[test]
    fn json_round_trip() {
        let tri = parse_triangulation(D2).unwrap();
        assert_eq!(parse_triangulation(&tri.to_json()).unwrap(), tri);
    }
}
