use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_finecurve"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| {
        panic!(
            "bad JSON ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&o.stdout),
            String::from_utf8_lossy(&o.stderr)
        )
    })
}

fn write(dir: &TempDir, name: &str, v: &Value) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, serde_json::to_string(v).unwrap()).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn closed(pts: &[(&str, &str)]) -> Value {
    let w: Vec<Value> = pts.iter().map(|(x, y)| json!({"x": x, "y": y})).collect();
    json!({"kind": "closed", "waypoints": w})
}

#[test]
fn meridian_meets_longitude_once() {
    let d = TempDir::new().unwrap();
    let a = write(&d, "a.json", &closed(&[("0", "1/3"), ("1", "1/3")]));
    let b = write(&d, "b.json", &closed(&[("1/4", "0"), ("1/4", "1")]));
    let o = run(&["intersect", "--surface", "torus", "--a", s(&a), "--b", s(&b)]);
    assert!(o.status.success());
    let v = stdout_json(&o);
    assert_eq!(v["crossing_count"], 1);
    assert_eq!(v["touching_count"], 0);
    assert_eq!(v["components"][0]["class"], "crossing");
}

#[test]
fn tighten_removes_the_bigon() {
    let d = TempDir::new().unwrap();
    let zig = closed(&[("1/4", "1/8"), ("1/4", "5/8"), ("3/8", "3/8"), ("1/2", "1"), ("1/2", "0")]);
    let a = write(&d, "a.json", &zig);
    let b = write(&d, "b.json", &closed(&[("0", "1/2"), ("1", "1/2")]));
    let out = d.path().join("t.json");
    let o = run(&["tighten", "--surface", "torus", "--a", s(&a), "--b", s(&b), "--out", s(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = stdout_json(&o);
    assert_eq!(v["crossings_before"], 3);
    assert_eq!(v["crossing_count"], 1);
    // the written curve is the tightened one
    let t = write(&d, "t2.json", &v["curve"]);
    let o = run(&["intersect", "--surface", "torus", "--a", s(&out), "--b", s(&b)]);
    assert_eq!(stdout_json(&o)["crossing_count"], 1);
    let o = run(&["validate", "--surface", "torus", "--curve", s(&t)]);
    assert!(o.status.success());
}

#[test]
fn parallel_curves_span_a_contractible_simplex() {
    let d = TempDir::new().unwrap();
    let curves: Vec<Value> = ["1/4", "1/2", "3/4"]
        .iter()
        .map(|y| closed(&[("0", y), ("1", y)]))
        .collect();
    let c = write(&d, "c.json", &json!(curves));
    let cx = d.path().join("cx.json");
    assert!(run(&["complex", "--surface", "torus", "--curves", s(&c), "--out", s(&cx)]).status.success());
    let o = run(&["homology", "--complex", s(&cx), "--coeff", "Z2"]);
    assert!(o.status.success());
    let v = stdout_json(&o);
    for g in v["groups"].as_array().unwrap() {
        assert_eq!(g["rank"], 0);
    }
}

#[test]
fn hatcher_certificate_round_trip() {
    let d = TempDir::new().unwrap();
    let o = run(&["generate", "--kind", "hatcher", "--seed", "0"]);
    assert!(o.status.success());
    let inst = stdout_json(&o);
    let surface = write(&d, "surface.json", &inst["surface"]);
    let arcs = write(&d, "arcs.json", &inst["arcs"]);
    let sphere = write(&d, "sphere.json", &inst["sphere"]);
    let cert = d.path().join("cert.json");
    let o = run(&[
        "hatcher-flow",
        "--surface",
        s(&surface),
        "--arcs",
        s(&arcs),
        "--sphere",
        s(&sphere),
        "--beta",
        "auto",
        "--out",
        s(&cert),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = run(&["verify", "--cert", s(&cert)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    assert_eq!(stdout_json(&o)["ok"], true);

    // claiming a different star centre must be rejected
    let mut c: Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    let center = c["star_center"].as_u64().unwrap();
    let other = c["final"]
        .as_array()
        .unwrap()
        .iter()
        .filter_map(Value::as_u64)
        .find(|&h| h != center);
    let Some(other) = other else { return };
    c["star_center"] = json!(other);
    let bad = write(&d, "bad.json", &c);
    let o = run(&["verify", "--cert", s(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stdout_json(&o)["ok"], false);
}

#[test]
fn star_flow_on_a_generated_instance_verifies() {
    let d = TempDir::new().unwrap();
    let o = run(&["generate", "--kind", "star", "--seed", "3"]);
    let inst = stdout_json(&o);
    let curves = write(&d, "curves.json", &inst["curves"]);
    let sphere = write(&d, "sphere.json", &inst["sphere"]);
    let cert = d.path().join("cert.json");
    let o = run(&[
        "flow-star",
        "--surface",
        "torus",
        "--curves",
        s(&curves),
        "--sphere",
        s(&sphere),
        "--out",
        s(&cert),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(run(&["verify", "--cert", s(&cert)]).status.success());
}

#[test]
fn malformed_input_exits_one() {
    let d = TempDir::new().unwrap();
    let a = d.path().join("a.json");
    std::fs::write(&a, "{ not json").unwrap();
    let o = run(&["validate", "--surface", "torus", "--curve", s(&a)]);
    assert_eq!(o.status.code(), Some(1));

    // a curve leaving the polygon
    let off = write(&d, "off.json", &closed(&[("0", "1/2"), ("2", "1/2")]));
    let b = write(&d, "b.json", &closed(&[("1/4", "0"), ("1/4", "1")]));
    let o = run(&["intersect", "--surface", "torus", "--a", s(&off), "--b", s(&b)]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn inadmissible_surface_exits_two() {
    let d = TempDir::new().unwrap();
    let arc = json!([{"kind": "arc", "waypoints": [{"x": "0", "y": "1/2"}, {"x": "1", "y": "1/2"}]}]);
    let arcs = write(&d, "arcs.json", &arc);
    let o = run(&["hatcher-flow", "--surface", "sphere-3", "--arcs", s(&arcs)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn render_writes_svg() {
    let d = TempDir::new().unwrap();
    let a = write(&d, "a.json", &closed(&[("0", "1/3"), ("1", "1/3")]));
    let b = write(&d, "b.json", &closed(&[("1/4", "0"), ("1/4", "1")]));
    let out = d.path().join("p.svg");
    let o = run(&["render", "--surface", "torus", "--curves", s(&a), s(&b), "--out", s(&out)]);
    assert!(o.status.success());
    let svg = std::fs::read_to_string(&out).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(svg.contains("<circle"));
}
