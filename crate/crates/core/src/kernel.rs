//! Exact intersection of two curves: components, crossing/touching
//! classification and the finite problem set.

use std::cmp::Ordering;

use num_traits::{One, Zero};

use crate::curve::{geometry, CurvePos, Geometry, PolyCurve, Strand};
use crate::error::{Error, Result};
use crate::geom::{angle_cmp, in_ccw_sweep, same_direction, segment_intersect, Point, SegHit};
use crate::surface::{Surface, SurfacePoint};

pub use crate::geom::segment_intersect as chart_segment_intersect;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Classification {
    Crossing,
    Touching,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComponentGeometry {
    Point(SurfacePoint),
    Interval { from: SurfacePoint, to: SurfacePoint },
}

/// One connected component of `u ∩ v`.
#[derive(Clone, Debug)]
pub struct IntersectionComponent {
    pub geometry: ComponentGeometry,
    pub class: Classification,
    /// Extent along `u`, start then end in `u`'s direction.
    pub on_u: (CurvePos, CurvePos),
    /// Positions on `v` matching the two ends of `on_u`.
    pub on_v: (CurvePos, CurvePos),
    /// Strand labels in counter-clockwise order around each end
    /// (`u-`, `u+`, `v-`, `v+`; coincident strands are joined with `=`).
    pub cyclic_order: Vec<Vec<String>>,
}

impl IntersectionComponent {
    pub fn is_point(&self) -> bool {
        matches!(self.geometry, ComponentGeometry::Point(_))
    }

    pub fn is_crossing(&self) -> bool {
        self.class == Classification::Crossing
    }
}

#[derive(Clone, Debug)]
pub struct IntersectionReport {
    /// `u` and `v` are the same point set; nothing is classified.
    pub identical: bool,
    pub components: Vec<IntersectionComponent>,
    pub crossing_count: usize,
    pub problem_set: Vec<SurfacePoint>,
}

impl IntersectionReport {
    pub fn is_empty(&self) -> bool {
        !self.identical && self.components.is_empty()
    }

    pub fn touching_count(&self) -> usize {
        self.components.iter().filter(|c| !c.is_crossing()).count()
    }

    /// Finite and every component a crossing.
    pub fn all_crossing(&self) -> bool {
        !self.identical && self.components.iter().all(|c| c.is_point() && c.is_crossing())
    }

    /// Crossing components that are single points, as `(u, v)` positions.
    pub fn crossing_points(&self) -> Vec<(CurvePos, CurvePos)> {
        self.components
            .iter()
            .filter(|c| c.is_point() && c.is_crossing())
            .map(|c| (c.on_u.0.clone(), c.on_v.0.clone()))
            .collect()
    }
}

#[derive(Clone, Debug)]
struct Piece {
    u0: CurvePos,
    u1: CurvePos,
    v0: CurvePos,
    v1: CurvePos,
}

/// Normalise a position; the closing point of a closed curve maps to the start
/// only when `wrap_end` is set.
fn norm(g: &Geometry, p: CurvePos, wrap_end: bool) -> CurvePos {
    if p.t == num_rational::BigRational::one() {
        if p.seg + 1 < g.len() {
            return CurvePos::new(p.seg + 1, Zero::zero());
        }
        if g.closed && wrap_end {
            return CurvePos::new(0, Zero::zero());
        }
    }
    p
}

fn raw_pieces(s: &Surface, gu: &Geometry, gv: &Geometry, first_only: bool) -> Vec<Piece> {
    let mut out = Vec::new();
    for (i, su) in gu.segs.iter().enumerate() {
        for (j, sv) in gv.segs.iter().enumerate() {
            match segment_intersect(&su.a, &su.b, &sv.a, &sv.b) {
                SegHit::Empty => continue,
                SegHit::Point { s: a, t: b, .. } => out.push(Piece {
                    u0: CurvePos::new(i, a.clone()),
                    u1: CurvePos::new(i, a),
                    v0: CurvePos::new(j, b.clone()),
                    v1: CurvePos::new(j, b),
                }),
                SegHit::Interval { s: (a0, a1), t: (b0, b1), .. } => out.push(Piece {
                    u0: CurvePos::new(i, a0),
                    u1: CurvePos::new(i, a1),
                    v0: CurvePos::new(j, b0),
                    v1: CurvePos::new(j, b1),
                }),
            }
            if first_only {
                return out;
            }
        }
    }
    // contacts across an identified edge
    let ends = |g: &Geometry| -> Vec<(CurvePos, Point)> {
        g.segs
            .iter()
            .enumerate()
            .flat_map(|(k, sg)| {
                [
                    (CurvePos::new(k, Zero::zero()), sg.a.clone()),
                    (CurvePos::new(k, One::one()), sg.b.clone()),
                ]
            })
            .collect()
    };
    let ue = ends(gu);
    let ve = ends(gv);
    for (pu, au) in &ue {
        let Some(tw) = s.twin(au) else { continue };
        for (pv, av) in &ve {
            if *av == tw {
                out.push(Piece {
                    u0: pu.clone(),
                    u1: pu.clone(),
                    v0: pv.clone(),
                    v1: pv.clone(),
                });
                if first_only {
                    return out;
                }
            }
        }
    }
    out
}

/// True iff the two curves meet.
pub fn curves_meet(s: &Surface, gu: &Geometry, gv: &Geometry) -> bool {
    !raw_pieces(s, gu, gv, true).is_empty()
}

/// Disjointness of two valid curves.
pub fn disjoint(s: &Surface, u: &PolyCurve, v: &PolyCurve) -> Result<bool> {
    let gu = geometry(s, u)?;
    let gv = geometry(s, v)?;
    Ok(!curves_meet(s, &gu, &gv))
}

fn map_strand(s: &Surface, st: &Strand, reference: &Point) -> Point {
    s.transport_dir(&st.at, reference, &st.dir)
}

fn surface_point(s: &Surface, p: &Point) -> SurfacePoint {
    let c = s.canonical(p);
    s.surface_point(&c).unwrap_or(SurfacePoint {
        coords: c,
        locus: crate::surface::Locus::Interior,
    })
}

fn cyclic_labels(dirs: Vec<(&str, Option<Point>)>) -> Vec<String> {
    let mut present: Vec<(String, Point)> = Vec::new();
    for (label, d) in dirs {
        let Some(d) = d else { continue };
        if let Some(slot) = present.iter_mut().find(|(_, e)| same_direction(e, &d)) {
            slot.0 = format!("{}={}", slot.0, label);
        } else {
            present.push((label.to_string(), d));
        }
    }
    present.sort_by(|a, b| angle_cmp(&a.1, &b.1));
    present.into_iter().map(|(l, _)| l).collect()
}

struct EndData {
    u_back: Option<Point>,
    u_fwd: Option<Point>,
    v_back: Option<Point>,
    v_fwd: Option<Point>,
}

fn end_data(s: &Surface, gu: &Geometry, gv: &Geometry, pu: &CurvePos, pv: &CurvePos) -> EndData {
    let reference = gu.point_at(pu);
    let (ub, uf) = gu.strands(pu);
    let (vb, vf) = gv.strands(pv);
    let m = |st: Option<Strand>| st.map(|st| map_strand(s, &st, &reference));
    EndData {
        u_back: m(ub),
        u_fwd: m(uf),
        v_back: m(vb),
        v_fwd: m(vf),
    }
}

/// `x` lies on the left of the path arriving from direction `inbound` and
/// leaving along `outbound`.
fn left_of(outbound: &Point, inbound: &Point, x: &Point) -> bool {
    in_ccw_sweep(outbound, inbound, x)
}

fn classify_point(e: &EndData) -> Classification {
    match (&e.u_back, &e.u_fwd, &e.v_back, &e.v_fwd) {
        (Some(ub), Some(uf), Some(vb), Some(vf)) => {
            if left_of(vf, vb, ub) != left_of(vf, vb, uf) {
                Classification::Crossing
            } else {
                Classification::Touching
            }
        }
        _ => Classification::Touching,
    }
}

fn other_strand(shared: &Point, a: &Option<Point>, b: &Option<Point>) -> Option<Point> {
    match (a, b) {
        (Some(x), _) if !same_direction(x, shared) => Some(x.clone()),
        (_, Some(y)) if !same_direction(y, shared) => Some(y.clone()),
        _ => None,
    }
}

fn classify_interval(start: &EndData, end: &EndData) -> Classification {
    let (Some(shared_fwd), Some(u_in)) = (&start.u_fwd, &start.u_back) else {
        return Classification::Touching;
    };
    let (Some(shared_back), Some(u_out)) = (&end.u_back, &end.u_fwd) else {
        return Classification::Touching;
    };
    let Some(v_out_s) = other_strand(shared_fwd, &start.v_back, &start.v_fwd) else {
        return Classification::Touching;
    };
    let Some(v_out_e) = other_strand(shared_back, &end.v_back, &end.v_fwd) else {
        return Classification::Touching;
    };
    let left_s = left_of(shared_fwd, &v_out_s, u_in);
    let left_e = left_of(&v_out_e, shared_back, u_out);
    if left_s != left_e {
        Classification::Crossing
    } else {
        Classification::Touching
    }
}

/// Components of the intersection of two already validated geometries.
pub fn intersect_geometries(s: &Surface, gu: &Geometry, gv: &Geometry) -> IntersectionReport {
    let mut pieces: Vec<Piece> = raw_pieces(s, gu, gv, false)
        .into_iter()
        .map(|p| {
            let point = p.u0 == p.u1;
            Piece {
                u0: norm(gu, p.u0, true),
                u1: norm(gu, p.u1, point),
                v0: norm(gv, p.v0, true),
                v1: norm(gv, p.v1, true),
            }
        })
        .collect();
    pieces.sort_by(|a, b| a.u0.cmp(&b.u0).then_with(|| b.u1.cmp(&a.u1)));

    let mut merged: Vec<Piece> = Vec::new();
    for p in pieces {
        if let Some(cur) = merged.last_mut() {
            if p.u0 <= cur.u1 {
                if p.u1 > cur.u1 {
                    cur.u1 = p.u1;
                    cur.v1 = p.v1;
                }
                continue;
            }
        }
        merged.push(p);
    }
    let last_pos = CurvePos::new(gu.len() - 1, One::one());
    let first_pos = CurvePos::new(0, Zero::zero());
    if gu.closed && merged.len() == 1 && merged[0].u0 == first_pos && merged[0].u1 == last_pos {
        return IntersectionReport {
            identical: true,
            components: vec![],
            crossing_count: 0,
            problem_set: vec![],
        };
    }
    if gu.closed && merged.len() > 1 {
        let wraps = merged.last().unwrap().u1 == last_pos && merged[0].u0 == first_pos;
        if wraps {
            let head = merged.remove(0);
            let tail = merged.last_mut().unwrap();
            tail.u1 = head.u1;
            tail.v1 = head.v1;
        }
    }
    // closing point normalised for strand lookup
    for p in &mut merged {
        if p.u1 == last_pos && gu.closed {
            p.u1 = first_pos.clone();
        }
    }

    let mut components = Vec::with_capacity(merged.len());
    let mut problem_set: Vec<SurfacePoint> = Vec::new();
    for p in merged {
        let start = end_data(s, gu, gv, &p.u0, &p.v0);
        let a = gu.point_at(&p.u0);
        if p.u0 == p.u1 {
            let class = classify_point(&start);
            let labels = cyclic_labels(vec![
                ("u-", start.u_back.clone()),
                ("u+", start.u_fwd.clone()),
                ("v-", start.v_back.clone()),
                ("v+", start.v_fwd.clone()),
            ]);
            let sp = surface_point(s, &a);
            problem_set.push(sp.clone());
            components.push(IntersectionComponent {
                geometry: ComponentGeometry::Point(sp),
                class,
                on_u: (p.u0.clone(), p.u1),
                on_v: (p.v0.clone(), p.v1),
                cyclic_order: vec![labels],
            });
        } else {
            let end = end_data(s, gu, gv, &p.u1, &p.v1);
            let class = classify_interval(&start, &end);
            let b = gu.point_at(&p.u1);
            let (from, to) = (surface_point(s, &a), surface_point(s, &b));
            problem_set.push(from.clone());
            problem_set.push(to.clone());
            let l0 = cyclic_labels(vec![
                ("u-", start.u_back.clone()),
                ("u+", start.u_fwd.clone()),
                ("v-", start.v_back.clone()),
                ("v+", start.v_fwd.clone()),
            ]);
            let l1 = cyclic_labels(vec![
                ("u-", end.u_back.clone()),
                ("u+", end.u_fwd.clone()),
                ("v-", end.v_back.clone()),
                ("v+", end.v_fwd.clone()),
            ]);
            components.push(IntersectionComponent {
                geometry: ComponentGeometry::Interval { from, to },
                class,
                on_u: (p.u0, p.u1),
                on_v: (p.v0, p.v1),
                cyclic_order: vec![l0, l1],
            });
        }
    }
    let crossing_count = components.iter().filter(|c| c.is_crossing()).count();
    dedup_points(&mut problem_set);
    IntersectionReport {
        identical: false,
        components,
        crossing_count,
        problem_set,
    }
}

fn dedup_points(pts: &mut Vec<SurfacePoint>) {
    pts.sort_by(|a, b| a.coords.cmp(&b.coords));
    pts.dedup_by(|a, b| a.coords == b.coords);
}

/// Decompose and classify `u ∩ v`.
pub fn intersect_curves(s: &Surface, u: &PolyCurve, v: &PolyCurve) -> Result<IntersectionReport> {
    let gu = geometry(s, u)?;
    let gv = geometry(s, v)?;
    Ok(intersect_geometries(s, &gu, &gv))
}

/// Union of the pairwise problem sets of a family.
pub fn problem_set(s: &Surface, curves: &[PolyCurve]) -> Result<Vec<SurfacePoint>> {
    let geoms: Vec<Geometry> = curves.iter().map(|c| geometry(s, c)).collect::<Result<_>>()?;
    let mut out = Vec::new();
    for i in 0..geoms.len() {
        for j in (i + 1)..geoms.len() {
            let r = intersect_geometries(s, &geoms[i], &geoms[j]);
            if r.identical {
                return Err(Error::Contract(format!("curves {i} and {j} coincide")));
            }
            out.extend(r.problem_set);
        }
    }
    dedup_points(&mut out);
    Ok(out)
}

/// Order positions of crossings along the second curve.
pub fn order_on_v(a: &IntersectionComponent, b: &IntersectionComponent) -> Ordering {
    a.on_v.0.cmp(&b.on_v.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{q, qr, Q};
    use crate::surface::catalog;

    fn pt(x: Q, y: Q) -> Point {
        Point::new(x, y)
    }

    fn vertical(x: Q) -> PolyCurve {
        PolyCurve::closed(vec![pt(x.clone(), q(0)), pt(x, q(1))])
    }

    fn horizontal(y: Q) -> PolyCurve {
        PolyCurve::closed(vec![pt(q(0), y.clone()), pt(q(1), y)])
    }

    #[test]
    fn straight_pair_crosses_once() {
        let t = catalog::torus();
        let r = intersect_curves(&t, &vertical(qr(1, 4)), &horizontal(qr(1, 2))).unwrap();
        assert_eq!(r.components.len(), 1);
        assert_eq!(r.crossing_count, 1);
        assert_eq!(r.problem_set.len(), 1);
        assert_eq!(r.problem_set[0].coords, pt(qr(1, 4), qr(1, 2)));
    }

    #[test]
    fn touching_point_from_the_right() {
        let t = catalog::torus();
        let bump = PolyCurve::closed(vec![
            pt(qr(1, 2), q(0)),
            pt(qr(1, 2), qr(1, 4)),
            pt(qr(1, 4), qr(1, 2)),
            pt(qr(1, 2), qr(3, 4)),
            pt(qr(1, 2), q(1)),
        ]);
        let r = intersect_curves(&t, &vertical(qr(1, 4)), &bump).unwrap();
        assert_eq!(r.components.len(), 1);
        assert_eq!(r.components[0].class, Classification::Touching);
        assert_eq!(r.crossing_count, 0);
    }

    #[test]
    fn shared_subsegment_same_side_is_touching() {
        let t = catalog::torus();
        let v = PolyCurve::closed(vec![
            pt(qr(1, 2), q(0)),
            pt(qr(1, 2), qr(1, 8)),
            pt(qr(1, 4), qr(1, 4)),
            pt(qr(1, 4), qr(1, 2)),
            pt(qr(1, 2), qr(5, 8)),
            pt(qr(1, 2), q(1)),
        ]);
        let r = intersect_curves(&t, &vertical(qr(1, 4)), &v).unwrap();
        assert_eq!(r.components.len(), 1);
        assert!(matches!(r.components[0].geometry, ComponentGeometry::Interval { .. }));
        assert_eq!(r.components[0].class, Classification::Touching);
        assert_eq!(r.problem_set.len(), 2);
    }

    #[test]
    fn shared_subsegment_opposite_sides_is_one_crossing() {
        let t = catalog::torus();
        let v = PolyCurve::closed(vec![
            pt(qr(1, 2), q(0)),
            pt(qr(1, 2), qr(1, 8)),
            pt(qr(1, 4), qr(1, 4)),
            pt(qr(1, 4), qr(1, 2)),
            pt(q(0), qr(5, 8)),
            pt(q(1), qr(5, 8)),
            pt(qr(1, 2), qr(3, 4)),
            pt(qr(1, 2), q(1)),
        ]);
        let r = intersect_curves(&t, &vertical(qr(1, 4)), &v).unwrap();
        assert_eq!(r.components.len(), 1, "{:?}", r.components);
        assert_eq!(r.crossing_count, 1);
    }

    #[test]
    fn crossing_on_identified_edge() {
        let t = catalog::torus();
        let u = vertical(qr(1, 4));
        let v = PolyCurve::closed(vec![pt(q(0), qr(1, 3)), pt(q(1), qr(1, 3))]);
        let r = intersect_curves(&t, &u, &v).unwrap();
        assert_eq!(r.crossing_count, 1);
        // a curve whose vertex sits on the top edge exactly at u's edge point
        let w = PolyCurve::closed(vec![
            pt(q(0), qr(1, 2)),
            pt(qr(1, 8), qr(1, 2)),
            pt(qr(1, 4), q(1)),
            pt(qr(1, 4), q(0)),
            pt(qr(3, 8), qr(1, 2)),
            pt(q(1), qr(1, 2)),
        ]);
        assert!(validate_ok(&t, &w));
        let r = intersect_curves(&t, &u, &w).unwrap();
        assert_eq!(r.components.len(), 1);
        assert_eq!(r.crossing_count, 1);
        let r2 = intersect_curves(&t, &w, &u).unwrap();
        assert_eq!(r2.crossing_count, 1);
    }

    fn validate_ok(s: &Surface, c: &PolyCurve) -> bool {
        crate::curve::validate_curve(s, c).is_ok()
    }

    #[test]
    fn identical_curves_are_flagged() {
        let t = catalog::torus();
        let u = vertical(qr(1, 4));
        let w = PolyCurve::closed(vec![
            pt(qr(1, 4), q(0)),
            pt(qr(1, 4), qr(1, 3)),
            pt(qr(1, 4), q(1)),
        ]);
        let r = intersect_curves(&t, &u, &w).unwrap();
        assert!(r.identical);
    }

    #[test]
    fn three_straight_curves_give_three_problem_points() {
        let t = catalog::torus();
        let diag = PolyCurve::closed(vec![
            pt(q(0), qr(1, 8)),
            pt(qr(7, 8), q(1)),
            pt(qr(7, 8), q(0)),
            pt(q(1), qr(1, 8)),
        ]);
        let fam = vec![vertical(qr(1, 4)), horizontal(qr(1, 2)), diag];
        let ps = problem_set(&t, &fam).unwrap();
        assert_eq!(ps.len(), 3);
    }

    #[test]
    fn disjoint_curves_have_empty_problem_set() {
        let t = catalog::torus();
        let ps = problem_set(&t, &[vertical(qr(1, 4)), vertical(qr(1, 2))]).unwrap();
        assert!(ps.is_empty());
    }
}
