//! Command-line front end: argument types and command dispatch.
//!
//! Every command writes one JSON document to standard output. Numbers with
//! mathematical meaning are rational strings `"p/q"`; indices and counts
//! are plain JSON integers.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::enumeration::RayFilter;
use crate::error::{Error, Result};
use crate::normal::{forget_orientation, NormalVector};
use crate::normball::{
    check_zero_efficiency, evaluate_norm, find_taut_representative, norm_ball, norm_ball_from_vertices,
    project_solution_space, project_unoriented_solution_space, RepresentativeSearch, Variant, ZeroEfficiency,
};
use crate::scalar::{format_rational, parse_rational};
use crate::surfaces::{assign_transverse_orientation, is_algebraically_aspherical, reconstruct_surface, TransverseOrientation};
use crate::triangulation::{parse_triangulation, ClosedTriangulation};
use crate::{Integer, Rational};

#[derive(Parser, Debug, Clone)]
#[command(name = "tnorm", version, about = "Thurston norm unit balls from transversely oriented normal surfaces")]
pub struct RunConfig {
    /// Worker threads for enumeration.
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Check that a gluing table is a closed orientable triangulation.
    Validate { file: PathBuf },
    /// List the vertices of the projective solution space.
    Enumerate {
        file: PathBuf,
        #[arg(long)]
        unoriented: bool,
        /// Only admissible vertices (much cheaper on larger inputs).
        #[arg(long)]
        admissible: bool,
    },
    /// Compute the unit ball of the Thurston norm.
    Ball {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = VariantArg::Strict)]
        variant: VariantArg,
        /// Include the homology map matrix in the output.
        #[arg(long)]
        emit_homology: bool,
        /// Warn about B vertices that are not algebraically aspherical.
        #[arg(long)]
        check_asphericity: bool,
    },
    /// Evaluate the norm of a class given in the emitted basis.
    Norm {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        class: String,
    },
    /// Reconstruct the surface of a coordinate vector.
    Surface {
        file: PathBuf,
        /// JSON `{"oriented": ..., "coords": [...]}`, inline or as a file path.
        #[arg(long)]
        coords: String,
    },
    /// Search for a norm-minimizing transversely oriented surface in a class.
    Representative {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        class: String,
        #[arg(long)]
        max_weight: u64,
    },
    /// Look for non-vertex-linking normal spheres among vertex surfaces.
    Efficiency { file: PathBuf },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum VariantArg {
    Strict,
    Le,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::Strict => Variant::Strict,
            VariantArg::Le => Variant::NonStrict,
        }
    }
}

/// Exit status and the JSON document for standard output.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub output: Value,
}

impl Outcome {
    fn ok(output: Value) -> Outcome {
        Outcome { code: 0, output }
    }
}

fn rationals(xs: &[Rational]) -> Vec<String> {
    xs.iter().map(format_rational).collect()
}

fn error_value(code: &str, message: String) -> Value {
    json!({"error": {"code": code, "message": message}})
}

pub fn error_outcome(e: &Error) -> Outcome {
    let mut v = error_value(e.code(), e.to_string());
    if let Error::Invalid(report) = e {
        v["error"]["failures"] = json!(report.failures.iter().map(|f| f.to_string()).collect::<Vec<_>>());
    }
    Outcome { code: 1, output: v }
}

fn read_input(path: &PathBuf) -> std::result::Result<String, Outcome> {
    std::fs::read_to_string(path).map_err(|e| Outcome {
        code: 1,
        output: error_value("io", format!("{}: {e}", path.display())),
    })
}

fn load(path: &PathBuf) -> std::result::Result<ClosedTriangulation, Outcome> {
    let text = read_input(path)?;
    ClosedTriangulation::from_json(&text).map_err(|e| error_outcome(&e))
}

/// Parses `c1,c2,...`; the empty string is the empty class.
pub fn parse_class(s: &str) -> Result<Vec<Rational>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|p| parse_rational(p.trim()).ok_or_else(|| Error::Syntax(format!("bad class entry {p:?}"))))
        .collect()
}

fn integral(c: &[Rational]) -> Result<Vec<Integer>> {
    c.iter().map(|v| if v.is_integer() { Ok(v.to_integer()) } else { Err(Error::NonIntegralClass) }).collect()
}

/// Runs a command on the configured thread pool.
pub fn run(config: &RunConfig) -> Outcome {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(config.threads.max(1)).build().expect("thread pool");
    pool.install(|| match dispatch(&config.command) {
        Ok(o) => o,
        Err(o) => o,
    })
}

fn dispatch(command: &Command) -> std::result::Result<Outcome, Outcome> {
    let lift = |e: Error| error_outcome(&e);
    match command {
        Command::Validate { file } => {
            let text = read_input(file)?;
            let tri = parse_triangulation(&text).map_err(lift)?;
            match ClosedTriangulation::new(tri) {
                Ok(closed) => {
                    let sk = closed.skeleton();
                    Ok(Outcome::ok(json!({
                        "valid": true,
                        "tetrahedra": closed.size(),
                        "vertices": sk.vertex_classes.len(),
                        "edges": sk.edge_classes.len(),
                        "faces": sk.face_classes.len(),
                        "simplicial": closed.is_simplicial(),
                        "orientation": closed.tet_signs(),
                    })))
                }
                Err(report) => Ok(Outcome {
                    code: 1,
                    output: json!({
                        "valid": false,
                        "failures": report.failures.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
                    }),
                }),
            }
        }
        Command::Enumerate { file, unoriented, admissible } => {
            let tri = load(file)?;
            let filter = if *admissible { RayFilter::Admissible } else { RayFilter::All };
            let vertices = if *unoriented {
                project_unoriented_solution_space(&tri, filter)
            } else {
                project_solution_space(&tri, filter)
            };
            let list: Vec<Value> = vertices
                .iter()
                .map(|v| {
                    json!({
                        "coords": v.integral().to_json_value(),
                        "point": rationals(&v.point.coords),
                        "support": v.ray.support_indices(),
                        "chi": format_rational(&v.chi),
                        "admissible": v.admissible,
                    })
                })
                .collect();
            Ok(Outcome::ok(json!({
                "oriented": !*unoriented,
                "admissible_only": *admissible,
                "count": list.len(),
                "vertices": list,
            })))
        }
        Command::Ball { file, variant, emit_homology, check_asphericity } => {
            let tri = load(file)?;
            let vertices = project_solution_space(&tri, RayFilter::Admissible);
            let mut ball = norm_ball_from_vertices(&tri, &vertices, (*variant).into());
            if *check_asphericity {
                for (i, r) in ball.b.rays.iter().enumerate() {
                    if !is_algebraically_aspherical(&tri, r).map_err(lift)? {
                        let w = format!("B vertex {i} is not algebraically aspherical");
                        log::warn!("{w}");
                        ball.warnings.push(w);
                    }
                }
            }
            let basis: Vec<Vec<String>> = ball
                .homology
                .basis
                .cocycles
                .iter()
                .map(|z| z.iter().map(|v| format_rational(&Rational::from(v.clone()))).collect())
                .collect();
            let mut out = json!({
                "variant": ball.variant.name(),
                "rank": ball.rank(),
                "basis": basis,
                "B_vertices": ball.b.points.iter().map(|p| rationals(&p.coords)).collect::<Vec<_>>(),
                "ball_vertices": ball.ball_vertices.iter().map(|p| rationals(p)).collect::<Vec<_>>(),
                "warnings": ball.warnings,
            });
            if ball.variant == Variant::NonStrict {
                out["recession_directions"] =
                    json!(ball.b.recession.iter().map(|p| rationals(&p.coords)).collect::<Vec<_>>());
                out["recession_classes"] = json!(ball.recession_classes.iter().map(|c| rationals(c)).collect::<Vec<_>>());
            }
            if *emit_homology {
                let m = &ball.homology.matrix;
                out["homology_matrix"] = json!((0..m.rows()).map(|r| rationals(m.row(r))).collect::<Vec<_>>());
            }
            let code = if ball.has_hypothesis_certificate() { 2 } else { 0 };
            Ok(Outcome { code, output: out })
        }
        Command::Norm { file, class } => {
            let tri = load(file)?;
            let c = parse_class(class).map_err(lift)?;
            let ball = norm_ball(&tri, Variant::Strict);
            let n = evaluate_norm(&ball, &c).map_err(lift)?;
            Ok(Outcome::ok(json!({"class": rationals(&c), "norm": format_rational(&n)})))
        }
        Command::Surface { file, coords } => {
            let tri = load(file)?;
            let text = if coords.trim_start().starts_with('{') {
                coords.clone()
            } else {
                read_input(&PathBuf::from(coords))?
            };
            let x = NormalVector::from_json(&text).map_err(lift)?;
            let unoriented = if x.oriented { forget_orientation(&x) } else { x.clone() };
            let surface = reconstruct_surface(&tri, &unoriented).map_err(lift)?;
            let mut out = surface.report();
            if x.oriented {
                out["transverse_orientation"] = match assign_transverse_orientation(&surface, &x).map_err(lift)? {
                    TransverseOrientation::Assigned(signs) => json!({"realized": true, "component_signs": signs}),
                    TransverseOrientation::OneSided(comps) => json!({"realized": false, "one_sided_components": comps}),
                    TransverseOrientation::Impossible => json!({"realized": false}),
                };
            }
            Ok(Outcome::ok(out))
        }
        Command::Representative { file, class, max_weight } => {
            let tri = load(file)?;
            let c = parse_class(class).map_err(lift)?;
            let alpha = integral(&c).map_err(lift)?;
            let vertices = project_solution_space(&tri, RayFilter::Admissible);
            let ball = norm_ball_from_vertices(&tri, &vertices, Variant::Strict);
            let out = match find_taut_representative(&tri, &ball, &vertices, &alpha, *max_weight).map_err(lift)? {
                RepresentativeSearch::Found(rep) => json!({
                    "found": true,
                    "class": rationals(&c),
                    "weight": format_rational(&Rational::from(rep.weight.clone())),
                    "coords": rep.coords.to_json_value(),
                    "surface": rep.surface.report(),
                    "component_signs": rep.orientation,
                }),
                RepresentativeSearch::NotFound { max_weight } => json!({
                    "found": false,
                    "class": rationals(&c),
                    "max_weight": max_weight,
                }),
            };
            Ok(Outcome::ok(out))
        }
        Command::Efficiency { file } => {
            let tri = load(file)?;
            let out = match check_zero_efficiency(&tri) {
                ZeroEfficiency::NoSphereAmongVertexSurfaces => json!({
                    "counterexample": null,
                    "message": "no non-vertex-linking sphere among vertex surfaces",
                }),
                ZeroEfficiency::Counterexample { coords, surface } => json!({
                    "counterexample": {"coords": coords.to_json_value(), "surface": surface.report()},
                    "message": "non-vertex-linking normal sphere at a vertex surface",
                }),
            };
            Ok(Outcome::ok(out))
        }
    }
}

/// Every `*.json` triangulation in `dir`, keyed by file stem, sorted by name.
pub fn load_corpus(dir: &std::path::Path) -> Result<Vec<(String, ClosedTriangulation)>> {
    let entries = std::fs::read_dir(dir).map_err(|e| Error::Syntax(format!("{}: {e}", dir.display())))?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let text = std::fs::read_to_string(&p).map_err(|e| Error::Syntax(format!("{}: {e}", p.display())))?;
            let name = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            Ok((name, ClosedTriangulation::from_json(&text)?))
        })
        .collect()
}
