//! Input loading and output writing.

use std::collections::BTreeMap;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use finecurve::complex::{CombinatorialSphere, ComplexFile, Handle, SimplicialComplex};
use finecurve::flows::SphereMap;
use finecurve::kernel::disjoint;
use finecurve::surface::catalog;
use finecurve::{build_surface, Error, PolyCurve, Surface, SurfaceSpec, Q};

/// Exit status and message for a failed command.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn malformed(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: e.exit_code() as u8,
            message: e.to_string(),
        }
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::malformed(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::malformed(format!("{}: {e}", path.display())))
}

/// A surface from a JSON file, or one of the built-in names `torus`, `s05`,
/// `s12`, `genus-two`, `sphere-N` and `torus-N` (N holes).
pub fn load_surface(arg: &str) -> Result<Surface, Failure> {
    let path = Path::new(arg);
    if path.exists() {
        let spec: SurfaceSpec = read_json(path)?;
        return Ok(build_surface(&spec)?);
    }
    let spec = match arg {
        "torus" => catalog::torus_spec(),
        "s05" => catalog::sphere_with_holes_spec(4),
        "s12" => catalog::torus_with_holes_spec(2),
        "genus-two" => catalog::genus_two_spec(),
        _ => {
            let holes = |prefix: &str| arg.strip_prefix(prefix).and_then(|n| n.parse::<usize>().ok());
            match (holes("sphere-"), holes("torus-")) {
                (Some(n), _) if n <= 4 => catalog::sphere_with_holes_spec(n),
                (_, Some(n)) if n <= 4 => catalog::torus_with_holes_spec(n),
                _ => return Err(Failure::malformed(format!("{arg}: no such file or built-in surface"))),
            }
        }
    };
    Ok(build_surface(&spec)?)
}

pub fn load_curve(path: &Path) -> Result<PolyCurve, Failure> {
    read_json(path)
}

pub fn load_curves(path: &Path) -> Result<Vec<PolyCurve>, Failure> {
    read_json(path)
}

/// Either a single curve or a list of curves.
pub fn load_curve_or_list(path: &Path) -> Result<Vec<PolyCurve>, Failure> {
    let v: Value = read_json(path)?;
    let parsed = if v.is_array() {
        serde_json::from_value(v)
    } else {
        serde_json::from_value(v).map(|c| vec![c])
    };
    parsed.map_err(|e| Failure::malformed(format!("{}: {e}", path.display())))
}

pub fn parse_q(text: &str) -> Result<Q, Failure> {
    finecurve::geom::qstr::parse(text).ok_or_else(|| Failure::malformed(format!("{text}: not a rational")))
}

/// Pretty JSON to a file or stdout, with a trailing newline.
pub fn emit(v: &Value, out: Option<&Path>) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(v).expect("values serialise");
    emit_text(&(text + "\n"), out)
}

pub fn emit_text(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::malformed(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn sphere_json(sphere: &CombinatorialSphere, assignment: &BTreeMap<Handle, Handle>) -> Value {
    json!({
        "dim": sphere.dim,
        "complex": ComplexFile::from(&sphere.complex),
        "map": assignment,
    })
}

#[derive(serde::Deserialize)]
struct SphereInput {
    dim: usize,
    complex: ComplexFile,
    map: BTreeMap<Handle, Handle>,
}

/// The sphere map used by the flows. Named spheres map vertex `i` to curve
/// `i mod n`; without a name, two or fewer curves use `S^0` and more use the
/// cycle through the curves in order.
pub fn sphere_map(s: &Surface, curves: Vec<PolyCurve>, sphere: Option<&str>) -> Result<SphereMap, Failure> {
    let n = curves.len();
    if n == 0 {
        return Err(Failure::malformed("no curves given"));
    }
    let cyclic = |sp: CombinatorialSphere| {
        let assignment = sp.complex.vertices().map(|v| (v, v % n)).collect();
        (sp, assignment)
    };
    let (sphere, assignment) = match sphere {
        None if n <= 2 => {
            let sp = CombinatorialSphere::s0();
            (sp, BTreeMap::from([(0, 0), (1, n - 1)]))
        }
        None => {
            // fall back to S^0 on the first and last curves when consecutive
            // curves are not disjoint
            let mut ok = true;
            for i in 0..n {
                ok &= disjoint(s, &curves[i], &curves[(i + 1) % n])?;
            }
            if !ok {
                return Err(Error::Contract(
                    "consecutive curves are not disjoint; pass --sphere to choose a sphere map".into(),
                )
                .into());
            }
            cyclic(CombinatorialSphere::cycle(n)?)
        }
        Some("s0") => cyclic(CombinatorialSphere::s0()),
        Some("cycle") => cyclic(CombinatorialSphere::cycle(n.max(3))?),
        Some("octahedron") => cyclic(CombinatorialSphere::cross_polytope(2)?),
        Some(path) => {
            let input: SphereInput = read_json(Path::new(path))?;
            let complex = SimplicialComplex::try_from(&input.complex)?;
            (CombinatorialSphere::new(complex, input.dim)?, input.map)
        }
    };
    Ok(SphereMap {
        sphere,
        curves,
        assignment,
    })
}
