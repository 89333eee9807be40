//! Developing curves into the plane; disk, peripheral and essential tests;
//! isotopy class keys.

use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::curve::{geometry, Geometry, PolyCurve, Seg};
use crate::error::{Error, Result};
use crate::geom::{point_on_segment, winding_number, Point, Similarity, Q};
use crate::surface::{FlatModel, Surface};

/// A path carried into a single planar chart.
#[derive(Clone, Debug)]
pub struct Developed {
    /// Vertices in the plane, first segment start to last segment end.
    pub pts: Vec<Point>,
    /// Chart transformation of the final segment's chart.
    pub end_chart: Similarity,
    /// For closed paths: the map taking the start chart to the chart in
    /// which the path returns. Identity iff the lift closes up.
    pub holonomy: Similarity,
}

/// Develop a chain of segments, starting in the identity chart.
pub fn develop(s: &Surface, segs: &[Seg], closed: bool) -> Developed {
    let mut chart = Similarity::identity();
    let mut pts = vec![segs[0].a.clone()];
    for k in 0..segs.len() {
        if k > 0 && segs[k].a != segs[k - 1].b {
            chart = step_chart(s, &chart, &segs[k - 1].b);
        }
        pts.push(chart.apply(&segs[k].b));
    }
    let end_chart = chart.clone();
    let last = &segs[segs.len() - 1].b;
    let holonomy = if closed && *last != segs[0].a {
        step_chart(s, &chart, last)
    } else {
        chart
    };
    Developed { pts, end_chart, holonomy }
}

fn step_chart(s: &Surface, chart: &Similarity, at: &Point) -> Similarity {
    let e = s.polygon_edge_of(at).expect("jump happens on an edge");
    let g = s.glue_map(e).expect("jump edge is paired");
    chart.compose(g)
}

pub fn develop_geometry(s: &Surface, g: &Geometry) -> Developed {
    develop(s, &g.segs, g.closed)
}

fn lattice(s: &Surface) -> Result<Option<[Point; 2]>> {
    match s.flat_model() {
        FlatModel::Planar => Ok(None),
        FlatModel::Torus { basis } => Ok(Some(basis.clone())),
        FlatModel::General => Err(Error::Unsupported(
            "disk and class tests need a planar or flat torus model".into(),
        )),
    }
}

/// Coordinates of `x` in the basis `b`.
fn coords_in(b: &[Point; 2], x: &Point) -> (Q, Q) {
    let det = b[0].cross(&b[1]);
    (x.cross(&b[1]) / &det, b[0].cross(x) / &det)
}

/// All translates of `p` under the deck lattice that lie in the bounding box
/// of `pts` (just `p` itself on planar surfaces).
fn translates_in_box(lat: &Option<[Point; 2]>, pts: &[Point], p: &Point) -> Vec<Point> {
    let Some(b) = lat else {
        return vec![p.clone()];
    };
    let xmin = pts.iter().map(|v| &v.x).min().unwrap();
    let xmax = pts.iter().map(|v| &v.x).max().unwrap();
    let ymin = pts.iter().map(|v| &v.y).min().unwrap();
    let ymax = pts.iter().map(|v| &v.y).max().unwrap();
    let corners = [
        Point::new(xmin.clone(), ymin.clone()),
        Point::new(xmin.clone(), ymax.clone()),
        Point::new(xmax.clone(), ymin.clone()),
        Point::new(xmax.clone(), ymax.clone()),
    ];
    let cs: Vec<(Q, Q)> = corners.iter().map(|c| coords_in(b, &(c - p))).collect();
    let lo = |f: &dyn Fn(&(Q, Q)) -> Q| cs.iter().map(f).min().unwrap().floor().to_integer();
    let hi = |f: &dyn Fn(&(Q, Q)) -> Q| cs.iter().map(f).max().unwrap().ceil().to_integer();
    let (m0, m1) = (lo(&|c| c.0.clone()), hi(&|c| c.0.clone()));
    let (n0, n1) = (lo(&|c| c.1.clone()), hi(&|c| c.1.clone()));
    let mut out = Vec::new();
    let mut m = m0;
    while m <= m1 {
        let mut n = n0.clone();
        while n <= n1 {
            let v = &(&b[0].scale(&Q::from(m.clone())) + &b[1].scale(&Q::from(n.clone()))) + p;
            out.push(v);
            n += 1;
        }
        m += 1;
    }
    out
}

/// Does the planar region bounded by the developed loop contain a lift of
/// the surface point `p`?
pub fn loop_encloses(s: &Surface, lp: &[Point], p: &Point) -> Result<bool> {
    let lat = lattice(s)?;
    Ok(translates_in_box(&lat, lp, p)
        .iter()
        .any(|t| winding_number(lp, t).is_some_and(|w| w != 0)))
}

/// Holes whose lift lies inside the developed loop, as hole indices.
pub fn enclosed_holes(s: &Surface, lp: &[Point]) -> Result<Vec<usize>> {
    let lat = lattice(s)?;
    let mut out = Vec::new();
    for (h, p) in s.hole_probes().iter().enumerate() {
        if translates_in_box(&lat, lp, p)
            .iter()
            .any(|t| winding_number(lp, t).is_some_and(|w| w != 0))
        {
            out.push(h);
        }
    }
    Ok(out)
}

/// Topological type of a simple closed curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClosedType {
    /// Bounds a disk.
    Inessential,
    /// Cobounds an annulus with a boundary component.
    Peripheral,
    Essential,
}

fn closed_loop(s: &Surface, g: &Geometry) -> Result<Option<Vec<Point>>> {
    lattice(s)?;
    let d = develop_geometry(s, g);
    if !d.holonomy.is_identity() {
        return Ok(None);
    }
    let mut lp = d.pts;
    lp.pop();
    Ok(Some(lp))
}

pub fn closed_type(s: &Surface, c: &PolyCurve) -> Result<ClosedType> {
    if !c.is_closed() {
        return Err(Error::Contract("closed_type needs a closed curve".into()));
    }
    let g = geometry(s, c)?;
    let Some(lp) = closed_loop(s, &g)? else {
        return Ok(ClosedType::Essential);
    };
    let inside = enclosed_holes(s, &lp)?;
    let outside = s.boundary_count() as usize - inside.len();
    Ok(match (s.flat_model(), inside.len()) {
        (_, 0) => ClosedType::Inessential,
        (_, 1) => ClosedType::Peripheral,
        (FlatModel::Planar, _) if outside <= 1 => ClosedType::Peripheral,
        _ => ClosedType::Essential,
    })
}

/// True iff the simple closed curve bounds a disk.
pub fn bounds_disk(s: &Surface, c: &PolyCurve) -> Result<bool> {
    Ok(closed_type(s, c)? == ClosedType::Inessential)
}

/// True iff the closed polygonal loop, given as chart segments of the
/// surface, lifts to a closed planar loop enclosing no hole. The loop
/// must be simple.
pub fn segments_bound_disk(s: &Surface, segs: &[Seg]) -> Result<Option<Vec<Point>>> {
    lattice(s)?;
    let d = develop(s, segs, true);
    if !d.holonomy.is_identity() {
        return Ok(None);
    }
    let mut lp = d.pts;
    lp.pop();
    if enclosed_holes(s, &lp)?.is_empty() {
        Ok(Some(lp))
    } else {
        Ok(None)
    }
}

/// Position of `p` on a closed polygon: edge index and squared distance from
/// its start.
fn loop_position(lp: &[Point], p: &Point) -> Option<(usize, Q)> {
    let n = lp.len();
    (0..n).find_map(|i| {
        let (a, b) = (&lp[i], &lp[(i + 1) % n]);
        point_on_segment(p, a, b).then(|| (i, (p - a).norm2()))
    })
}

/// Walk along the closed polygon `lp` from `from` to `to` (both on it),
/// forwards; the result includes both ends.
fn walk(lp: &[Point], from: &Point, to: &Point) -> Option<Vec<Point>> {
    let n = lp.len();
    let (i, di) = loop_position(lp, from)?;
    let (j, dj) = loop_position(lp, to)?;
    let mut out = vec![from.clone()];
    if i == j && dj > di {
        out.push(to.clone());
        return Some(out);
    }
    let mut k = (i + 1) % n;
    loop {
        out.push(lp[k].clone());
        if k == j {
            break;
        }
        k = (k + 1) % n;
    }
    out.push(to.clone());
    out.dedup();
    Some(out)
}

/// An arc is essential unless it cobounds a disk with a boundary sub-arc.
pub fn arc_is_essential(s: &Surface, c: &PolyCurve) -> Result<bool> {
    if c.is_closed() {
        return Err(Error::Contract("arc_is_essential needs an arc".into()));
    }
    let g = geometry(s, c)?;
    let a = g.segs[0].a.clone();
    let b = g.segs[g.len() - 1].b.clone();
    let (ca, cb) = (s.boundary_component(&a), s.boundary_component(&b));
    if ca != cb {
        return Ok(true);
    }
    let comp = ca.ok_or_else(|| Error::Internal("arc endpoint off the boundary".into()))?;
    let lat = lattice(s)?;
    let d = develop_geometry(s, &g);
    if !d.end_chart.is_identity() {
        // the endpoints lie on different lifts of the boundary component
        return Ok(true);
    }
    let bl = s
        .boundary_loop(comp)
        .ok_or_else(|| Error::Unsupported("boundary component is not a closed chart polygon".into()))?;
    for back in [walk(&bl, &b, &a), reverse_walk(&bl, &b, &a)] {
        let Some(back) = back else {
            return Err(Error::Internal("arc endpoint not on its boundary loop".into()));
        };
        let mut lp = d.pts.clone();
        lp.extend(back[1..back.len() - 1].iter().cloned());
        let holes_inside = s.hole_probes().iter().any(|p| {
            translates_in_box(&lat, &lp, p)
                .iter()
                .any(|t| winding_number(&lp, t).is_some_and(|w| w != 0))
        });
        if !holes_inside {
            return Ok(false);
        }
    }
    Ok(true)
}

fn reverse_walk(lp: &[Point], from: &Point, to: &Point) -> Option<Vec<Point>> {
    let rev: Vec<Point> = lp.iter().rev().cloned().collect();
    walk(&rev, from, to)
}

/// Essential for arcs; essential and non-peripheral for closed curves.
pub fn is_essential(s: &Surface, c: &PolyCurve) -> Result<bool> {
    if c.is_closed() {
        Ok(closed_type(s, c)? == ClosedType::Essential)
    } else {
        arc_is_essential(s, c)
    }
}

/// Canonical label of an isotopy class.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IsotopyClassKey {
    /// Primitive homology class on the torus, sign-normalised.
    Torus { p: i64, q: i64 },
    /// Boundary components on the smaller side of a separating curve.
    Planar { components: Vec<usize> },
    /// Inessential or peripheral.
    Rejected,
}

impl std::fmt::Display for IsotopyClassKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            IsotopyClassKey::Torus { p, q } => write!(f, "({p},{q})"),
            IsotopyClassKey::Planar { components } => {
                let v: Vec<String> = components.iter().map(|c| c.to_string()).collect();
                write!(f, "{{{}}}", v.join(","))
            }
            IsotopyClassKey::Rejected => write!(f, "rejected"),
        }
    }
}

fn to_int(x: &Q) -> Result<i64> {
    if !x.is_integer() {
        return Err(Error::Internal("holonomy is not a lattice vector".into()));
    }
    x.to_integer()
        .to_i64()
        .ok_or_else(|| Error::Internal("homology class out of range".into()))
}

/// The collapsing map: a curve to its isotopy class.
pub fn collapse_map_f(s: &Surface, c: &PolyCurve) -> Result<IsotopyClassKey> {
    if !c.is_closed() {
        return Err(Error::Unsupported("class keys are defined for closed curves".into()));
    }
    let g = geometry(s, c)?;
    match s.flat_model() {
        FlatModel::Torus { basis } if s.holes().is_empty() => {
            let d = develop_geometry(s, &g);
            let (a, b) = coords_in(basis, &d.holonomy.shift);
            let (mut p, mut q) = (to_int(&a)?, to_int(&b)?);
            if p == 0 && q == 0 {
                return Ok(IsotopyClassKey::Rejected);
            }
            if p.gcd(&q) != 1 {
                return Err(Error::Internal("simple curve with non-primitive class".into()));
            }
            if p < 0 || (p == 0 && q < 0) {
                p = -p;
                q = -q;
            }
            Ok(IsotopyClassKey::Torus { p, q })
        }
        FlatModel::Planar => {
            let lp = closed_loop(s, &g)?.expect("planar loops close");
            let inside: Vec<usize> = enclosed_holes(s, &lp)?
                .into_iter()
                .map(|h| s.hole_component_id(h))
                .collect();
            let outside: Vec<usize> = (0..s.boundary_count() as usize)
                .filter(|c| !inside.contains(c))
                .collect();
            if inside.len() <= 1 || outside.len() <= 1 {
                return Ok(IsotopyClassKey::Rejected);
            }
            let components = match inside.len().cmp(&outside.len()) {
                std::cmp::Ordering::Less => inside,
                std::cmp::Ordering::Greater => outside,
                std::cmp::Ordering::Equal => inside.min(outside),
            };
            Ok(IsotopyClassKey::Planar { components })
        }
        _ => Err(Error::Unsupported(
            "class keys are implemented for the closed torus and planar surfaces".into(),
        )),
    }
}

/// Signed area of a developed loop, used to pick orientations.
pub fn developed_area2(lp: &[Point]) -> Q {
    crate::geom::signed_area2(lp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{q, qr};
    use crate::surface::catalog;

    fn pt(x: Q, y: Q) -> Point {
        Point::new(x, y)
    }

    fn square(cx: Q, cy: Q, r: Q) -> PolyCurve {
        PolyCurve::closed(vec![
            pt(&cx - &r, &cy - &r),
            pt(&cx + &r, &cy - &r),
            pt(&cx + &r, &cy + &r),
            pt(&cx - &r, &cy + &r),
        ])
    }

    #[test]
    fn torus_straight_keys() {
        let t = catalog::torus();
        let v = PolyCurve::closed(vec![pt(qr(1, 4), q(0)), pt(qr(1, 4), q(1))]);
        assert_eq!(collapse_map_f(&t, &v).unwrap(), IsotopyClassKey::Torus { p: 0, q: 1 });
        let h = PolyCurve::closed(vec![pt(q(1), qr(1, 3)), pt(q(0), qr(1, 3))]);
        assert_eq!(collapse_map_f(&t, &h).unwrap(), IsotopyClassKey::Torus { p: 1, q: 0 });
    }

    #[test]
    fn torus_small_square_is_rejected() {
        let t = catalog::torus();
        let c = square(qr(1, 2), qr(1, 2), qr(1, 8));
        assert_eq!(collapse_map_f(&t, &c).unwrap(), IsotopyClassKey::Rejected);
        assert!(bounds_disk(&t, &c).unwrap());
    }

    #[test]
    fn torus_diagonal_key() {
        let t = catalog::torus();
        let c = PolyCurve::closed(vec![
            pt(q(0), qr(1, 8)),
            pt(qr(7, 8), q(1)),
            pt(qr(7, 8), q(0)),
            pt(q(1), qr(1, 8)),
        ]);
        assert_eq!(collapse_map_f(&t, &c).unwrap(), IsotopyClassKey::Torus { p: 1, q: 1 });
    }

    #[test]
    fn planar_keys() {
        let s = catalog::s05();
        // holes occupy the four quadrant slots; a box around the bottom two
        let c = PolyCurve::closed(vec![
            pt(qr(1, 16), qr(1, 16)),
            pt(qr(15, 16), qr(1, 16)),
            pt(qr(15, 16), qr(7, 16)),
            pt(qr(1, 16), qr(7, 16)),
        ]);
        assert_eq!(
            collapse_map_f(&s, &c).unwrap(),
            IsotopyClassKey::Planar { components: vec![1, 2] }
        );
        assert_eq!(closed_type(&s, &c).unwrap(), ClosedType::Essential);
        let one = square(qr(1, 4), qr(1, 4), qr(3, 16));
        assert_eq!(collapse_map_f(&s, &one).unwrap(), IsotopyClassKey::Rejected);
        assert_eq!(closed_type(&s, &one).unwrap(), ClosedType::Peripheral);
        let three = PolyCurve::closed(vec![
            pt(qr(1, 16), qr(1, 16)),
            pt(qr(15, 16), qr(1, 16)),
            pt(qr(15, 16), qr(7, 16)),
            pt(qr(1, 2), qr(1, 2)),
            pt(qr(7, 16), qr(15, 16)),
            pt(qr(1, 16), qr(15, 16)),
        ]);
        // three holes inside leaves hole 4 and the outer boundary: smaller side
        assert_eq!(
            collapse_map_f(&s, &three).unwrap(),
            IsotopyClassKey::Planar { components: vec![0, 4] }
        );
    }

    #[test]
    fn arcs_essential_or_not() {
        let s = catalog::s05();
        // from the outer boundary to hole 1 (component 1)
        let a = PolyCurve::arc(vec![pt(qr(1, 4), q(0)), pt(qr(1, 4), qr(1, 8))]);
        assert!(arc_is_essential(&s, &a).unwrap());
        // outer boundary to itself, hugging a corner
        let b = PolyCurve::arc(vec![pt(qr(1, 16), q(0)), pt(qr(1, 16), qr(1, 16)), pt(q(0), qr(1, 16))]);
        assert!(!arc_is_essential(&s, &b).unwrap());
        // outer boundary to itself, separating the bottom holes from the top ones
        let c = PolyCurve::arc(vec![pt(q(0), qr(1, 2)), pt(q(1), qr(1, 2))]);
        assert!(arc_is_essential(&s, &c).unwrap());
    }

    #[test]
    fn general_model_is_unsupported() {
        let g2 = catalog::genus_two();
        let c = square(qr(3, 2), qr(3, 2), qr(1, 8));
        assert!(matches!(collapse_map_f(&g2, &c), Err(Error::Unsupported(_))));
    }
}
