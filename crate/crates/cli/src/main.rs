//! `finecurve` command-line front end.

mod io;
mod render;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use finecurve::complex::{fine_subcomplex, homology, Coefficients, ComplexFile, SimplicialComplex};
use finecurve::flows::{flow_sphere_to_star, hatcher_flow, verify_certificate, FlowCertificate};
use finecurve::kernel::intersect_curves;
use finecurve::moves::{arc_surgery_step, tighten_pair};
use finecurve::perturb::{perturb, pushoff_family};
use finecurve::samples;
use finecurve::topology::{collapse_map_f, is_essential};
use finecurve::{validate_curve, Error, PolyCurve};

use io::{load_curve, load_curves, load_surface, parse_q, sphere_map, Failure};

#[derive(Parser)]
#[command(name = "finecurve", version, about = "Exact curves and arcs on surfaces: intersections, surgery, flows")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Coeff {
    #[value(name = "Z")]
    Z,
    #[value(name = "Z2")]
    Z2,
}

#[derive(Clone, Copy, ValueEnum)]
enum Sample {
    TorusPair,
    Perturb,
    Family,
    Star,
    Hatcher,
    Disjoint,
}

#[derive(Subcommand)]
enum Command {
    /// Check a surface and, optionally, a curve on it.
    Validate {
        #[arg(long)]
        surface: String,
        #[arg(long)]
        curve: Option<PathBuf>,
    },
    /// Intersection report for two curves.
    Intersect {
        #[arg(long)]
        surface: String,
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Move a curve into crossing-only position with a family.
    Perturb {
        #[arg(long)]
        surface: String,
        #[arg(long)]
        a: PathBuf,
        /// File with a list of curves.
        #[arg(long)]
        family: PathBuf,
        #[arg(long, default_value = "1/64")]
        eps: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replace a family by pairwise crossing-only pushoffs.
    PushoffFamily {
        #[arg(long)]
        surface: String,
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Remove all bigons of `a` with `b`.
    Tighten {
        #[arg(long)]
        surface: String,
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// One first-intersection surgery of an arc family along a base arc.
    ArcStep {
        #[arg(long)]
        surface: String,
        #[arg(long)]
        arcs: PathBuf,
        #[arg(long)]
        beta: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Flow a sphere of curves into a vertex star; writes a certificate.
    FlowStar {
        #[arg(long)]
        surface: String,
        #[arg(long)]
        curves: PathBuf,
        /// `s0`, `cycle`, `octahedron` or a JSON file with `dim`, `complex`, `map`.
        #[arg(long)]
        sphere: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Flow a sphere of arcs into the star of a base arc; writes a certificate.
    HatcherFlow {
        #[arg(long)]
        surface: String,
        #[arg(long)]
        arcs: PathBuf,
        /// `auto` or a curve file.
        #[arg(long, default_value = "auto")]
        beta: String,
        #[arg(long)]
        sphere: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The fine complex on a list of curves or arcs.
    Complex {
        #[arg(long)]
        surface: String,
        #[arg(long)]
        curves: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reduced homology of a complex file.
    Homology {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long, value_enum, default_value = "Z")]
        coeff: Coeff,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check a flow certificate from scratch.
    Verify {
        #[arg(long)]
        cert: PathBuf,
    },
    /// SVG of curves on the fundamental polygon.
    Render {
        #[arg(long)]
        surface: String,
        /// Curve files or curve-list files.
        #[arg(long = "curves", num_args = 1..)]
        curves: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit a seeded sample instance.
    Generate {
        #[arg(long, value_enum)]
        kind: Sample,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn curve_summary(s: &finecurve::Surface, c: &PolyCurve) -> Value {
    match validate_curve(s, c) {
        Err(d) => json!({"valid": false, "defect": d.to_string()}),
        Ok(()) => json!({
            "valid": true,
            "essential": is_essential(s, c).ok(),
            "key": collapse_map_f(s, c).ok(),
        }),
    }
}

fn run(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Validate { surface, curve } => {
            let s = load_surface(&surface)?;
            let mut out = json!({
                "genus": s.genus(),
                "boundary": s.boundary_count(),
                "euler_characteristic": s.euler_characteristic(),
                "flat_model": report::model_name(&s),
                "admits_arc_flow": s.admits_arc_flow(),
            });
            if let Some(p) = curve {
                let c = load_curve(&p)?;
                out["curve"] = curve_summary(&s, &c);
                io::emit(&out, None)?;
                validate_curve(&s, &c).map_err(Error::from)?;
                return Ok(());
            }
            io::emit(&out, None)
        }
        Command::Intersect { surface, a, b } => {
            let s = load_surface(&surface)?;
            let (u, v) = (load_curve(&a)?, load_curve(&b)?);
            let r = intersect_curves(&s, &u, &v)?;
            io::emit(&report::intersection(&r), None)
        }
        Command::Perturb { surface, a, family, eps, out } => {
            let s = load_surface(&surface)?;
            let y = load_curve(&a)?;
            let fam = load_curves(&family)?;
            let eps = parse_q(&eps)?;
            let g = perturb(&s, &y, &fam, &eps)?;
            io::emit(&serde_json::to_value(&g).expect("curves serialise"), out.as_deref())
        }
        Command::PushoffFamily { surface, family, out } => {
            let s = load_surface(&surface)?;
            let fam = load_curves(&family)?;
            let g = pushoff_family(&s, &fam)?;
            io::emit(&serde_json::to_value(&g).expect("curves serialise"), out.as_deref())
        }
        Command::Tighten { surface, a, b, out } => {
            let s = load_surface(&surface)?;
            let (u, v) = (load_curve(&a)?, load_curve(&b)?);
            let before = intersect_curves(&s, &u, &v)?;
            if !before.all_crossing() {
                return Err(Error::Contract("curves must meet in crossings only; run perturb first".into()).into());
            }
            let t = tighten_pair(&s, &u, &v)?;
            let after = intersect_curves(&s, &t, &v)?;
            if let Some(path) = &out {
                io::emit(&serde_json::to_value(&t).expect("curves serialise"), Some(path))?;
            }
            io::emit(
                &json!({
                    "curve": t,
                    "crossings_before": before.crossing_count,
                    "crossing_count": after.crossing_count,
                }),
                None,
            )
        }
        Command::ArcStep { surface, arcs, beta, out } => {
            let s = load_surface(&surface)?;
            let gamma = load_curves(&arcs)?;
            let b = load_curve(&beta)?;
            let step = arc_surgery_step(&s, &gamma, &b)?;
            let replaced: Vec<Value> = step
                .replaced
                .iter()
                .map(|r| {
                    json!({
                        "index": r.index,
                        "arc": r.arc,
                        "delta": r.delta.to_string(),
                        "near": r.near.to_string(),
                        "beta_before": r.beta_before,
                        "beta_after": r.beta_after,
                    })
                })
                .collect();
            io::emit(&json!({"arcs": step.family, "replaced": replaced}), out.as_deref())
        }
        Command::FlowStar { surface, curves, sphere, out } => {
            let s = load_surface(&surface)?;
            let cs = load_curves(&curves)?;
            let phi = sphere_map(&s, cs, sphere.as_deref())?;
            let cert = flow_sphere_to_star(&s, &phi)?;
            emit_cert(&cert, out.as_deref())
        }
        Command::HatcherFlow { surface, arcs, beta, sphere, out } => {
            let s = load_surface(&surface)?;
            let cs = load_curves(&arcs)?;
            let b = match beta.as_str() {
                "auto" => None,
                path => Some(load_curve(path.as_ref())?),
            };
            if !s.admits_arc_flow() {
                return Err(Error::Inadmissible {
                    genus: s.genus(),
                    boundary: s.boundary_count(),
                }
                .into());
            }
            let phi = sphere_map(&s, cs, sphere.as_deref())?;
            let cert = hatcher_flow(&s, &phi, b.as_ref())?;
            emit_cert(&cert, out.as_deref())
        }
        Command::Complex { surface, curves, out } => {
            let s = load_surface(&surface)?;
            let cs = load_curves(&curves)?;
            let x = fine_subcomplex(&s, &cs)?;
            io::emit(&serde_json::to_value(ComplexFile::from(&x)).expect("complexes serialise"), out.as_deref())
        }
        Command::Homology { complex, coeff, out } => {
            let file: ComplexFile = io::read_json(&complex)?;
            let x = SimplicialComplex::try_from(&file)?;
            let c = match coeff {
                Coeff::Z => Coefficients::Z,
                Coeff::Z2 => Coefficients::Z2,
            };
            io::emit(&serde_json::to_value(homology(&x, c)).expect("reports serialise"), out.as_deref())
        }
        Command::Verify { cert } => {
            let c: FlowCertificate = io::read_json(&cert)?;
            let rep = verify_certificate(&c);
            io::emit(&serde_json::to_value(&rep).expect("reports serialise"), None)?;
            if rep.ok {
                Ok(())
            } else {
                Err(Failure {
                    code: 2,
                    message: format!(
                        "certificate rejected at step {:?}: {}",
                        rep.failed_step,
                        rep.reason.unwrap_or_default()
                    ),
                })
            }
        }
        Command::Render { surface, curves, out } => {
            let s = load_surface(&surface)?;
            let mut all = Vec::new();
            for p in &curves {
                all.extend(io::load_curve_or_list(p)?);
            }
            for c in &all {
                validate_curve(&s, c).map_err(Error::from)?;
            }
            let svg = render::svg(&s, &all)?;
            io::emit_text(&svg, out.as_deref())
        }
        Command::Generate { kind, seed, out } => {
            let v = match kind {
                Sample::TorusPair => {
                    let p = samples::torus_pair(seed);
                    json!({"surface": "torus", "a": p.a, "b": p.b, "u": p.u, "v": p.v})
                }
                Sample::Perturb => {
                    let p = samples::perturb_instance(seed);
                    json!({"surface": "torus", "y": p.y, "family": p.family})
                }
                Sample::Family => json!({"surface": "torus", "family": samples::curve_family(seed)}),
                Sample::Star => {
                    let m = samples::star_instance(seed);
                    json!({
                        "surface": "torus",
                        "curves": m.curves,
                        "sphere": io::sphere_json(&m.sphere, &m.assignment),
                    })
                }
                Sample::Hatcher => {
                    let (s, m) = samples::hatcher_instance(seed);
                    json!({
                        "surface": s.spec(),
                        "arcs": m.curves,
                        "sphere": io::sphere_json(&m.sphere, &m.assignment),
                    })
                }
                Sample::Disjoint => {
                    let (s, a, b) = samples::disjoint_pair(seed);
                    json!({"surface": s.spec(), "a": a, "b": b})
                }
            };
            io::emit(&v, out.as_deref())
        }
    }
}

fn emit_cert(cert: &FlowCertificate, out: Option<&std::path::Path>) -> Result<(), Failure> {
    let v = serde_json::to_value(cert).expect("certificates serialise");
    io::emit(&v, out)?;
    if out.is_some() {
        eprintln!(
            "{} steps, star centre {}, final set {:?}",
            cert.steps.len(),
            cert.star_center,
            cert.final_set
        );
    }
    Ok(())
}
