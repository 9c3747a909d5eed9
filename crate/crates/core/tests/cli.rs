mod common;

use std::process::Command;

use serde_json::Value;

use common::*;

fn tnorm(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_tnorm")).args(args).output().expect("binary runs");
    let value = serde_json::from_slice(&out.stdout).expect("stdout is one JSON document");
    (out.status.code().unwrap(), value)
}

fn path(name: &str) -> String {
    fixture_path(name).to_str().unwrap().to_string()
}

fn scratch_file(tag: &str, contents: &str) -> std::path::PathBuf {
    let p = std::env::temp_dir().join(format!("tnorm-cli-{}-{tag}.json", std::process::id()));
    std::fs::write(&p, contents).unwrap();
    p
}

#[test]
fn validate_reports_skeleton() {
    let (code, v) = tnorm(&["validate", &path("d2")]);
    assert_eq!(code, 0);
    assert_eq!(v["valid"], true);
    assert_eq!(v["tetrahedra"], 2);
    assert_eq!(v["vertices"], 4);
    assert_eq!(v["edges"], 6);
    assert_eq!(v["orientation"], serde_json::json!([1, -1]));
}

#[test]
fn invalid_inputs_exit_one() {
    let unglued = scratch_file("unglued", r#"{"tets": [[[0, "1023"], [0, "1023"], null, null]]}"#);
    let (code, v) = tnorm(&["validate", unglued.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(v["valid"], false);

    let garbage = scratch_file("garbage", "{\"tets\": 3}");
    let (code, v) = tnorm(&["ball", garbage.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["code"], "syntax");

    let (code, v) = tnorm(&["ball", "/nonexistent/tri.json"]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["code"], "io");
    std::fs::remove_file(unglued).ok();
    std::fs::remove_file(garbage).ok();
}

#[test]
fn norm_with_wrong_class_length() {
    let (code, v) = tnorm(&["norm", &path("d2"), "--class", "1"]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["code"], "class_dimension_mismatch");
    assert!(v["error"]["message"].as_str().unwrap().starts_with("class dimension mismatch"));
}

#[test]
fn norm_on_the_three_sphere() {
    let (code, v) = tnorm(&["norm", &path("d2"), "--class="]);
    assert_eq!(code, 0);
    assert_eq!(v["norm"], "0/1");
}

#[test]
fn unoriented_enumeration_lists_quad_spheres() {
    let (code, v) = tnorm(&["enumerate", &path("d2"), "--unoriented"]);
    assert_eq!(code, 0);
    let vertices = v["vertices"].as_array().unwrap();
    assert_eq!(v["count"], vertices.len());
    // Independent count of extreme rays of the unoriented D2 cone.
    let tri = fixture("d2");
    let brute = brute_force_extreme_rays(&tnorm::normal::build_matching_system(&tri, false).matrix);
    assert_eq!(vertices.len(), brute.len());
    // The two-quad spheres: one quad of the same kind in each tetrahedron.
    for k in 4..7 {
        let mut sphere = vec!["0/1"; 14];
        sphere[k] = "1/1";
        sphere[7 + k] = "1/1";
        assert!(
            vertices.iter().any(|x| x["coords"]["coords"] == serde_json::json!(sphere) && x["chi"] == "1/1"),
            "quad sphere of kind {k}"
        );
    }
}

#[test]
fn surface_reports_orientation() {
    let tri = fixture("d2");
    let link = tnorm::normal::vertex_link(&tri, 0, true, true);
    let coords = link.to_json_value().to_string();
    let (code, v) = tnorm(&["surface", &path("d2"), "--coords", &coords]);
    assert_eq!(code, 0);
    assert_eq!(v["chi"], "2/1");
    assert_eq!(v["components"][0]["vertex_linking"], true);
    assert_eq!(v["transverse_orientation"]["realized"], true);

    let (code, v) = tnorm(&["surface", &path("d2"), "--coords", r#"{"oriented": false, "coords": ["1","0","0","0","0","0","0"]}"#]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["code"], "length_mismatch");
}

#[test]
fn le_variant_reports_recession() {
    let (code, v) = tnorm(&["ball", &path("s2xs1"), "--variant", "le", "--emit-homology"]);
    assert_eq!(code, 0);
    assert_eq!(v["variant"], "le");
    assert_eq!(v["rank"], 1);
    assert!(v["recession_directions"].as_array().is_some());
    assert_eq!(v["recession_classes"], serde_json::json!([]));
    assert_eq!(v["homology_matrix"].as_array().unwrap().len(), 1);
}

#[test]
fn representative_of_zero_class() {
    let (code, v) = tnorm(&["representative", &path("s2xs1"), "--class", "0", "--max-weight", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["found"], true);
    assert_eq!(v["weight"], "0/1");
}

#[test]
fn non_integral_representative_class() {
    let (code, v) = tnorm(&["representative", &path("s2xs1"), "--class", "1/2", "--max-weight", "2"]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["code"], "non_integral_class");
}
