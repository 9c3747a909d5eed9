mod common;

use std::collections::BTreeSet;

use num_bigint::BigInt;

use common::*;
use tnorm::enumeration::{vertex_rays, Method, RayFilter};
use tnorm::normal::build_matching_system;

fn coords(rays: Vec<tnorm::linalg::Ray>) -> BTreeSet<Vec<BigInt>> {
    rays.into_iter().map(|r| r.coords).collect()
}

#[test]
fn unoriented_rays_match_support_walk() {
    for (name, tri) in small_corpus() {
        let brute = brute_force_extreme_rays(&build_matching_system(&tri, false).matrix);
        for method in [Method::Direct, Method::QuadFirst] {
            assert_eq!(coords(vertex_rays(&tri, false, RayFilter::All, method)), brute, "{name} {method:?}");
        }
    }
}

#[test]
fn routes_agree_on_admissible_rays() {
    for (name, tri) in small_corpus() {
        for oriented in [false, true] {
            let direct = vertex_rays(&tri, oriented, RayFilter::Admissible, Method::Direct);
            let quad = vertex_rays(&tri, oriented, RayFilter::Admissible, Method::QuadFirst);
            assert_eq!(direct, quad, "{name} oriented {oriented}");
        }
    }
}

#[test]
fn routes_agree_on_all_oriented_rays() {
    for (name, tri) in small_corpus().into_iter().filter(|(_, t)| t.size() <= 2) {
        let direct = vertex_rays(&tri, true, RayFilter::All, Method::Direct);
        let quad = vertex_rays(&tri, true, RayFilter::All, Method::QuadFirst);
        assert_eq!(direct, quad, "{name}");
    }
}

#[test]
fn admissible_rays_are_the_admissible_subset() {
    for (name, tri) in small_corpus().into_iter().filter(|(_, t)| t.size() <= 2) {
        for oriented in [false, true] {
            let all = vertex_rays(&tri, oriented, RayFilter::All, Method::QuadFirst);
            let admissible = vertex_rays(&tri, oriented, RayFilter::Admissible, Method::QuadFirst);
            let filtered: Vec<_> =
                all.into_iter().filter(|r| tnorm::enumeration::ray_is_admissible(r, oriented)).collect();
            assert_eq!(filtered, admissible, "{name} oriented {oriented}");
        }
    }
}
