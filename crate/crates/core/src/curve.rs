//! Concrete simple closed curves and properly embedded arcs.

use std::cmp::Ordering;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{CurveDefect, Error, Result};
use crate::geom::{orient, segment_intersect, winding_number, Point, SegHit, Q};
use crate::surface::Surface;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveKind {
    Closed,
    Arc,
}

/// A curve or arc as a chain of waypoints in polygon coordinates.
///
/// Consecutive waypoints that are the two copies of one point on an
/// identified edge denote a jump across that edge; all other consecutive
/// pairs are joined by straight segments inside the polygon. Closed curves
/// also link the last waypoint back to the first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PolyCurve {
    pub kind: CurveKind,
    pub waypoints: Vec<Point>,
}

impl PolyCurve {
    pub fn closed(waypoints: Vec<Point>) -> Self {
        PolyCurve {
            kind: CurveKind::Closed,
            waypoints,
        }
    }

    pub fn arc(waypoints: Vec<Point>) -> Self {
        PolyCurve {
            kind: CurveKind::Arc,
            waypoints,
        }
    }

    pub fn is_closed(&self) -> bool {
        self.kind == CurveKind::Closed
    }
}

/// A straight piece of a curve in polygon coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Seg {
    pub a: Point,
    pub b: Point,
}

impl Seg {
    pub fn new(a: Point, b: Point) -> Self {
        Seg { a, b }
    }

    pub fn dir(&self) -> Point {
        &self.b - &self.a
    }

    pub fn at(&self, t: &Q) -> Point {
        self.a.lerp(&self.b, t)
    }

    pub fn reversed(&self) -> Seg {
        Seg::new(self.b.clone(), self.a.clone())
    }
}

/// Position along a curve: segment index and parameter in `[0, 1)`
/// (`t = 1` only at the terminal endpoint of an arc).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CurvePos {
    pub seg: usize,
    pub t: Q,
}

impl CurvePos {
    pub fn new(seg: usize, t: Q) -> Self {
        CurvePos { seg, t }
    }
}

/// Direction of one strand leaving a point, with the chart point it is expressed at.
#[derive(Clone, Debug)]
pub struct Strand {
    pub dir: Point,
    pub at: Point,
}

/// The segment structure of a validated curve.
#[derive(Clone, Debug)]
pub struct Geometry {
    pub closed: bool,
    pub segs: Vec<Seg>,
}

impl Geometry {
    /// Split waypoints into segments, dropping jumps.
    pub fn from_curve(s: &Surface, c: &PolyCurve) -> Result<Geometry, CurveDefect> {
        let n = c.waypoints.len();
        if n < 2 {
            return Err(CurveDefect::TooShort);
        }
        let closed = c.is_closed();
        let links = if closed { n } else { n - 1 };
        let mut segs = Vec::new();
        let mut prev_jump = false;
        let mut first_jump = false;
        for k in 0..links {
            let (a, b) = (&c.waypoints[k], &c.waypoints[(k + 1) % n]);
            if a == b {
                return Err(CurveDefect::Repeated(k, (k + 1) % n));
            }
            // a two-point closed curve between twins is one segment plus the wrap jump
            let two_point_loop = closed && n == 2 && k == 0;
            if s.same_point(a, b) && !two_point_loop {
                if prev_jump {
                    return Err(CurveDefect::Repeated(k, (k + 1) % n));
                }
                prev_jump = true;
                if k == 0 {
                    first_jump = true;
                }
                continue;
            }
            prev_jump = false;
            segs.push(Seg::new(a.clone(), b.clone()));
        }
        if closed && prev_jump && first_jump {
            return Err(CurveDefect::Repeated(0, 1));
        }
        if segs.is_empty() {
            return Err(CurveDefect::TooShort);
        }
        Ok(Geometry { closed, segs })
    }

    pub fn len(&self) -> usize {
        self.segs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segs.is_empty()
    }

    /// Index of the segment after `k`, if any.
    pub fn next(&self, k: usize) -> Option<usize> {
        if k + 1 < self.segs.len() {
            Some(k + 1)
        } else if self.closed {
            Some(0)
        } else {
            None
        }
    }

    pub fn prev(&self, k: usize) -> Option<usize> {
        if k > 0 {
            Some(k - 1)
        } else if self.closed {
            Some(self.segs.len() - 1)
        } else {
            None
        }
    }

    /// Normalise `t = 1` to the start of the following segment.
    pub fn normalize(&self, pos: CurvePos) -> CurvePos {
        if pos.t == Q::one() {
            if let Some(n) = self.next(pos.seg) {
                return CurvePos::new(n, Q::zero());
            }
        }
        pos
    }

    pub fn start(&self) -> CurvePos {
        CurvePos::new(0, Q::zero())
    }

    pub fn end(&self) -> CurvePos {
        if self.closed {
            self.start()
        } else {
            CurvePos::new(self.segs.len() - 1, Q::one())
        }
    }

    pub fn point_at(&self, pos: &CurvePos) -> Point {
        self.segs[pos.seg].at(&pos.t)
    }

    /// Backward and forward strands at a position.
    pub fn strands(&self, pos: &CurvePos) -> (Option<Strand>, Option<Strand>) {
        let seg = &self.segs[pos.seg];
        let here = seg.at(&pos.t);
        let forward = if pos.t < Q::one() {
            Some(Strand {
                dir: seg.dir(),
                at: here.clone(),
            })
        } else {
            None
        };
        let backward = if pos.t > Q::zero() {
            Some(Strand {
                dir: -&seg.dir(),
                at: here,
            })
        } else {
            self.prev(pos.seg).map(|p| {
                let ps = &self.segs[p];
                Strand {
                    dir: -&ps.dir(),
                    at: ps.b.clone(),
                }
            })
        };
        (backward, forward)
    }

    /// Forward sub-path from `from` to `to` (wrapping for closed curves;
    /// `from == to` on a closed curve yields the whole loop).
    pub fn subpath(&self, from: &CurvePos, to: &CurvePos) -> Vec<Seg> {
        let mut out = Vec::new();
        let mut k = from.seg;
        let mut t0 = from.t.clone();
        let mut first = true;
        loop {
            let seg = &self.segs[k];
            let ends_here = k == to.seg && (to.t > t0 || (!first && to.t >= t0));
            let t1 = if ends_here { to.t.clone() } else { Q::one() };
            if t1 > t0 {
                out.push(Seg::new(seg.at(&t0), seg.at(&t1)));
            }
            if ends_here {
                break;
            }
            match self.next(k) {
                Some(nk) => {
                    k = nk;
                    t0 = Q::zero();
                    first = false;
                }
                None => break,
            }
        }
        out
    }

    /// Compare positions along the curve.
    pub fn cmp_pos(a: &CurvePos, b: &CurvePos) -> Ordering {
        a.cmp(b)
    }
}

/// The geometry of a curve, or the first defect found.
pub fn geometry(s: &Surface, c: &PolyCurve) -> Result<Geometry> {
    validate_curve(s, c)?;
    Ok(Geometry::from_curve(s, c)?)
}

/// Check simplicity, kind constraints and corner avoidance.
pub fn validate_curve(s: &Surface, c: &PolyCurve) -> Result<(), CurveDefect> {
    let n = c.waypoints.len();
    if n < 2 {
        return Err(CurveDefect::TooShort);
    }
    for (k, w) in c.waypoints.iter().enumerate() {
        if s.is_corner(w) {
            return Err(CurveDefect::OnCorner(k));
        }
        if s.locate(w).is_none() {
            return Err(CurveDefect::Outside(k));
        }
        let on_boundary = s.is_boundary_point(w);
        let endpoint = c.kind == CurveKind::Arc && (k == 0 || k == n - 1);
        if endpoint && !on_boundary {
            return Err(CurveDefect::EndpointOffBoundary(k));
        }
        if !endpoint && on_boundary {
            return Err(CurveDefect::InteriorOnBoundary(k));
        }
    }
    let g = Geometry::from_curve(s, c)?;
    let m = g.segs.len();

    for (k, seg) in g.segs.iter().enumerate() {
        let along_edge = (0..s.edge_count()).any(|e| {
            let (a, b) = s.edge(e);
            orient(a, b, &seg.a) == 0 && orient(a, b, &seg.b) == 0
        });
        if along_edge {
            return Err(CurveDefect::AlongEdge(k));
        }
        let mid = seg.at(&Q::new(1.into(), 2.into()));
        for (h, hole) in s.holes().iter().enumerate() {
            if winding_number(hole, &mid) != Some(0) {
                return Err(CurveDefect::CrossesHole(k));
            }
            for i in 0..hole.len() {
                let (ha, hb) = s.hole_edge(h, i);
                match segment_intersect(&seg.a, &seg.b, ha, hb) {
                    SegHit::Empty => {}
                    SegHit::Point { at, .. } => {
                        let is_endpoint = c.kind == CurveKind::Arc
                            && ((k == 0 && at == seg.a) || (k == m - 1 && at == seg.b));
                        if !is_endpoint {
                            return Err(CurveDefect::CrossesHole(k));
                        }
                    }
                    SegHit::Interval { .. } => return Err(CurveDefect::CrossesHole(k)),
                }
            }
        }
    }

    // pairwise simplicity
    for i in 0..m {
        for j in (i + 1)..m {
            let (si, sj) = (&g.segs[i], &g.segs[j]);
            let mut allowed: Vec<&Point> = Vec::new();
            if g.next(i) == Some(j) && si.b == sj.a {
                allowed.push(&si.b);
            }
            if g.next(j) == Some(i) && sj.b == si.a {
                allowed.push(&si.a);
            }
            match segment_intersect(&si.a, &si.b, &sj.a, &sj.b) {
                SegHit::Empty => {}
                SegHit::Point { at, .. } if allowed.contains(&&at) => {}
                _ => return Err(CurveDefect::SelfIntersection(i, j)),
            }
        }
    }
    // distinct vertices must be distinct surface points (catches cross-chart contacts)
    let vertex_reps: Vec<(usize, &Point, usize)> = g
        .segs
        .iter()
        .enumerate()
        .flat_map(|(k, sg)| {
            let start_vertex = k;
            let end_vertex = match g.next(k) {
                Some(nk) => nk,
                None => m,
            };
            [(start_vertex, &sg.a, k), (end_vertex, &sg.b, k)]
        })
        .collect();
    let twins: Vec<Option<Point>> = vertex_reps.iter().map(|(_, p, _)| s.twin(p)).collect();
    for x in 0..vertex_reps.len() {
        for y in (x + 1)..vertex_reps.len() {
            let (vx, px, kx) = vertex_reps[x];
            let (vy, py, ky) = vertex_reps[y];
            if vx != vy && (px == py || twins[x].as_ref() == Some(py)) {
                return Err(CurveDefect::SelfIntersection(kx.min(ky), kx.max(ky)));
            }
        }
    }
    // a vertex on an edge must not touch a segment through its twin chart point
    for (k, sg) in g.segs.iter().enumerate() {
        for ((_, _, kv), tw) in vertex_reps.iter().zip(&twins) {
            if let Some(tw) = tw {
                if *kv != k
                    && *tw != sg.a
                    && *tw != sg.b
                    && crate::geom::point_on_segment(tw, &sg.a, &sg.b)
                {
                    return Err(CurveDefect::SelfIntersection(k.min(*kv), k.max(*kv)));
                }
            }
        }
    }
    Ok(())
}

/// Validate, mapping defects into the crate error type.
pub fn ensure_valid(s: &Surface, c: &PolyCurve) -> Result<()> {
    validate_curve(s, c).map_err(Error::from)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{q, qr};
    use crate::surface::catalog;

    fn pt(x: Q, y: Q) -> Point {
        Point::new(x, y)
    }

    #[test]
    fn vertical_torus_curve_is_valid() {
        let t = catalog::torus();
        let c = PolyCurve::closed(vec![pt(qr(1, 4), q(0)), pt(qr(1, 4), q(1))]);
        assert_eq!(validate_curve(&t, &c), Ok(()));
        let g = Geometry::from_curve(&t, &c).unwrap();
        assert_eq!(g.len(), 1);
    }

    #[test]
    fn figure_eight_is_rejected() {
        let t = catalog::torus();
        let c = PolyCurve::closed(vec![
            pt(qr(1, 4), qr(1, 4)),
            pt(qr(3, 4), qr(3, 4)),
            pt(qr(3, 4), qr(1, 4)),
            pt(qr(1, 4), qr(3, 4)),
        ]);
        assert!(matches!(
            validate_curve(&t, &c),
            Err(CurveDefect::SelfIntersection(_, _))
        ));
    }

    #[test]
    fn arc_from_outer_boundary_to_hole() {
        let s = catalog::s05();
        let c = PolyCurve::arc(vec![pt(qr(1, 4), q(0)), pt(qr(1, 4), qr(1, 8))]);
        assert_eq!(validate_curve(&s, &c), Ok(()));
    }

    #[test]
    fn corner_waypoint_is_rejected() {
        let s = catalog::s05();
        let c = PolyCurve::arc(vec![pt(q(0), q(0)), pt(qr(1, 8), qr(1, 8))]);
        assert_eq!(validate_curve(&s, &c), Err(CurveDefect::OnCorner(0)));
    }

    #[test]
    fn arc_endpoint_must_be_on_boundary() {
        let s = catalog::s05();
        let c = PolyCurve::arc(vec![pt(qr(1, 4), q(0)), pt(qr(1, 2), qr(1, 2))]);
        assert_eq!(validate_curve(&s, &c), Err(CurveDefect::EndpointOffBoundary(1)));
    }

    #[test]
    fn segment_through_hole_is_rejected() {
        let s = catalog::s05();
        let c = PolyCurve::arc(vec![pt(qr(1, 4), q(0)), pt(qr(1, 4), q(1))]);
        assert!(matches!(validate_curve(&s, &c), Err(CurveDefect::CrossesHole(_))));
    }

    #[test]
    fn subpath_wraps_on_closed_curves() {
        let t = catalog::torus();
        let c = PolyCurve::closed(vec![
            pt(qr(1, 4), q(0)),
            pt(qr(1, 4), qr(1, 2)),
            pt(qr(1, 4), q(1)),
        ]);
        let g = Geometry::from_curve(&t, &c).unwrap();
        assert_eq!(g.len(), 2);
        let p = g.subpath(&CurvePos::new(1, qr(1, 2)), &CurvePos::new(0, qr(1, 2)));
        assert_eq!(p.len(), 2);
        assert_eq!(p[0].a, pt(qr(1, 4), qr(3, 4)));
        assert_eq!(p[1].b, pt(qr(1, 4), qr(1, 4)));
        let whole = g.subpath(&CurvePos::new(0, qr(1, 2)), &CurvePos::new(0, qr(1, 2)));
        assert_eq!(whole.len(), 3);
    }
}
