//! The linear Euler characteristic functional on disc coordinates.
//!
//! A disc with `s` sides contributes `1 - s/2 + sum(1/deg(e))` over the edges
//! `e` its corners lie on: each vertex of the disc lies on an edge shared by
//! `deg(e)` discs and each side on a face shared by two.

use crate::normal::{DiscKind, NormalVector, ORIENTED_PER_TET, UNORIENTED_PER_TET};
use crate::scalar::Field;
use crate::triangulation::{edge_index, ClosedTriangulation};
use crate::Rational;

/// Contribution of one disc of the given kind in tetrahedron `tet`.
pub fn disc_weight(tri: &ClosedTriangulation, tet: usize, kind: DiscKind) -> Rational {
    let sk = tri.skeleton();
    let sides = kind.sides() as i64;
    let corners = kind
        .edges()
        .into_iter()
        .map(|[a, b]| Rational::from_ratio(1, sk.degrees[sk.edge_of[tet][edge_index(a, b)]] as i64))
        .fold(Rational::from_int(0), |acc, x| acc + x);
    Rational::from_int(1) - Rational::from_ratio(sides, 2) + corners
}

/// Coefficient of each coordinate of the functional, for either theory.
pub fn chi_star_coefficients(tri: &ClosedTriangulation, oriented: bool) -> Vec<Rational> {
    let mut out = Vec::with_capacity(tri.size() * if oriented { ORIENTED_PER_TET } else { UNORIENTED_PER_TET });
    for tet in 0..tri.size() {
        for kind in 0..UNORIENTED_PER_TET {
            let w = disc_weight(tri, tet, DiscKind::from_index(kind));
            if oriented {
                out.push(w.clone());
            }
            out.push(w);
        }
    }
    out
}

pub fn chi_star(tri: &ClosedTriangulation, x: &NormalVector) -> Rational {
    let coeffs = chi_star_coefficients(tri, x.oriented);
    assert_eq!(coeffs.len(), x.len(), "coordinate length does not match the triangulation");
    coeffs.iter().zip(&x.coords).fold(Rational::from_int(0), |acc, (c, v)| acc + c * v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normal::{forget_orientation, reverse_orientation, vertex_link};
    use crate::triangulation::tests::D2;

    #[test]
    fn d2_disc_weights() {
        let tri = ClosedTriangulation::from_json(D2).unwrap();
        for kind in 0..7 {
            assert_eq!(disc_weight(&tri, 0, DiscKind::from_index(kind)), Rational::from_int(1));
        }
        for v in 0..4 {
            assert_eq!(chi_star(&tri, &vertex_link(&tri, v, true, true)), Rational::from_int(2));
            assert_eq!(chi_star(&tri, &vertex_link(&tri, v, false, true)), Rational::from_int(2));
        }
    }

    #[test]
    fn orientation_does_not_change_the_value() {
        let tri = ClosedTriangulation::from_json(D2).unwrap();
        let x = NormalVector::from_ints(&(0..28).map(|i| (i * 7 % 5) as i64).collect::<Vec<_>>(), true);
        let v = chi_star(&tri, &x);
        assert_eq!(chi_star(&tri, &reverse_orientation(&x)), v);
        assert_eq!(chi_star(&tri, &forget_orientation(&x)), v);
    }
}
