use serde_json::{json, Value};

use finecurve::kernel::{Classification, ComponentGeometry, IntersectionReport};
use finecurve::{CurvePos, FlatModel, Surface};

pub fn model_name(s: &Surface) -> &'static str {
    match s.flat_model() {
        FlatModel::Planar => "planar",
        FlatModel::Torus { .. } => "torus",
        FlatModel::General => "general",
    }
}

fn pos(p: &CurvePos) -> Value {
    json!({"seg": p.seg, "t": p.t.to_string()})
}

pub fn intersection(r: &IntersectionReport) -> Value {
    let components: Vec<Value> = r
        .components
        .iter()
        .map(|c| {
            let geometry = match &c.geometry {
                ComponentGeometry::Point(p) => json!({"type": "point", "at": p}),
                ComponentGeometry::Interval { from, to } => json!({"type": "interval", "from": from, "to": to}),
            };
            json!({
                "class": match c.class {
                    Classification::Crossing => "crossing",
                    Classification::Touching => "touching",
                },
                "geometry": geometry,
                "on_u": [pos(&c.on_u.0), pos(&c.on_u.1)],
                "on_v": [pos(&c.on_v.0), pos(&c.on_v.1)],
                "cyclic_order": c.cyclic_order,
            })
        })
        .collect();
    json!({
        "identical": r.identical,
        "crossing_count": r.crossing_count,
        "touching_count": r.touching_count(),
        "components": components,
        "problem_set": r.problem_set,
    })
}
