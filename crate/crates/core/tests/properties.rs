mod common;

use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

use common::*;
use tnorm::chi::chi_star;
use tnorm::enumeration::{vertex_rays, Method, RayFilter};
use tnorm::homology::{edge_intersection, homology_map_matrix};
use tnorm::linalg::gauge;
use tnorm::normal::{build_matching_system, reverse_orientation, NormalVector};
use tnorm::triangulation::{Gluing, Triangulation, EDGE_VERTICES};
use tnorm::{ClosedTriangulation, Rational};

fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn relabel(tri: &ClosedTriangulation, sigma: &[usize]) -> ClosedTriangulation {
    let t = tri.size();
    let mut tets = vec![[None::<Gluing>; 4]; t];
    for (tet, &image) in sigma.iter().enumerate() {
        for face in 0..4 {
            let g = tri.gluing(tet, face);
            tets[image][face] = Some(Gluing { target: sigma[g.target], perm: g.perm });
        }
    }
    ClosedTriangulation::new(Triangulation::new(tets).unwrap()).unwrap()
}

fn chi_profile(tri: &ClosedTriangulation) -> Vec<Rational> {
    let mut chis: Vec<Rational> = vertex_rays(tri, false, RayFilter::Admissible, Method::QuadFirst)
        .iter()
        .map(|r| chi_star(tri, &NormalVector::new(r.to_rationals(), false)))
        .collect();
    chis.sort();
    chis
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn relabelling_tetrahedra_preserves_vertex_surfaces(
        index in 0usize..12,
        sigma in Just((0..3).collect::<Vec<usize>>()).prop_shuffle(),
    ) {
        let fixtures = small_corpus();
        let (_, tri) = &fixtures[index % fixtures.len()];
        let sigma: Vec<usize> = sigma.into_iter().filter(|&i| i < tri.size()).collect();
        let other = relabel(tri, &sigma);
        prop_assert_eq!(chi_profile(tri), chi_profile(&other));
        prop_assert_eq!(homology_map_matrix(tri).rank(), homology_map_matrix(&other).rank());
    }

    #[test]
    fn chi_and_class_under_reversal(coefs in proptest::collection::vec(-6i64..=6, 10)) {
        let tri = fixture("s2xs1");
        let basis = build_matching_system(&tri, true).rational_matrix::<Rational>().nullspace();
        let mut x = vec![Rational::zero(); basis[0].len()];
        for (b, c) in basis.iter().zip(coefs.iter().cycle()) {
            for (xi, bi) in x.iter_mut().zip(b) {
                *xi += bi * q(*c, 1);
            }
        }
        let x = NormalVector::new(x, true);
        let y = reverse_orientation(&x);
        prop_assert_eq!(chi_star(&tri, &x), chi_star(&tri, &y));
        let h = homology_map_matrix(&tri);
        let (cx, cy) = (h.class_of(&x), h.class_of(&y));
        prop_assert!(cx.iter().zip(&cy).all(|(a, b)| a == &-b.clone()));
        let sum = x.add(&y);
        prop_assert!(h.class_of(&sum).iter().all(|c| c.is_zero()));
    }

    #[test]
    fn gauge_is_homogeneous_and_subadditive(
        pts in proptest::collection::vec((-8i64..=8, -8i64..=8), 2..5),
        a in (-20i64..=20, -20i64..=20),
        b in (-20i64..=20, -20i64..=20),
        n in -9i64..=9,
        d in 1i64..=5,
    ) {
        // Symmetric polygon from the points and their negatives, plus the
        // axis points so that it has interior.
        let mut vs: Vec<Vec<Rational>> = vec![vec![q(1, 1), q(0, 1)], vec![q(0, 1), q(1, 1)]];
        vs.extend(pts.iter().map(|&(x, y)| vec![q(x, 1), q(y, 1)]));
        let neg: Vec<Vec<Rational>> = vs.iter().map(|v| v.iter().map(|c| -c.clone()).collect()).collect();
        vs.extend(neg);
        let ca = vec![q(a.0, 1), q(a.1, 1)];
        let cb = vec![q(b.0, 1), q(b.1, 1)];
        let lambda = q(n, d);
        let ga = gauge(&vs, &ca).unwrap();
        let scaled: Vec<Rational> = ca.iter().map(|c| c * &lambda).collect();
        prop_assert_eq!(gauge(&vs, &scaled).unwrap(), ga.clone() * lambda.abs());
        let sum: Vec<Rational> = ca.iter().zip(&cb).map(|(x, y)| x + y).collect();
        prop_assert!(gauge(&vs, &sum).unwrap() <= ga + gauge(&vs, &cb).unwrap());
    }
}

use num_traits::Signed;

#[test]
fn edge_intersections_agree_across_faces() {
    for (name, tri) in small_corpus() {
        let sk = tri.skeleton();
        for ray in vertex_rays(&tri, true, RayFilter::Admissible, Method::QuadFirst) {
            let x = NormalVector::new(ray.to_rationals(), true);
            for class in &sk.edge_classes {
                let mut values = Vec::new();
                for &(tet, ei) in class {
                    let [a, b] = EDGE_VERTICES[ei];
                    for face in (0..4).filter(|&f| f != a && f != b) {
                        values.push(edge_intersection(&tri, &x, tet, face, ei));
                    }
                }
                assert!(values.windows(2).all(|w| w[0] == w[1]), "{name}: {values:?}");
            }
        }
    }
}

#[test]
fn integral_classes_have_integral_norms_on_the_census_segment() {
    // A symmetric segment with vertices of the form 1/n gives integral
    // norms on integral classes.
    let vs = vec![vec![q(1, 2)], vec![q(-1, 2)]];
    for c in -5..=5 {
        let n = gauge(&vs, &[q(c, 1)]).unwrap();
        assert!(n.is_integer());
        assert_eq!(n, q(2 * c.abs(), 1));
    }
}
