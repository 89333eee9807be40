//! Innermost bigons, bigon surgery, tightening and first-intersection arc
//! surgery.

use std::cmp::Ordering;

use crate::curve::{geometry, CurvePos, Geometry, PolyCurve, Seg};
use crate::error::{Error, Result};
use crate::geom::{dist2_point_segment, q, Point, Q};
use crate::kernel::{curves_meet, intersect_geometries, IntersectionReport};
use crate::perturb::{embedding_radius, offset_at, Side, MAX_HALVINGS};
use crate::surface::Surface;
use crate::topology::{arc_is_essential, developed_area2, loop_encloses, segments_bound_disk};

/// Gluings composed when measuring neighbourhoods; enough to go once around
/// any polygon vertex of the catalogue surfaces.
const NEIGHBOURHOOD_DEPTH: usize = 8;

/// A disk bounded by one sub-path of a family member and one of the target.
#[derive(Clone, Debug)]
pub struct Bigon {
    pub member: usize,
    pub target: PolyCurve,
    /// Corners `x`, `y` as `(member position, target position)`; `x` comes
    /// first along the member.
    pub x: (CurvePos, CurvePos),
    pub y: (CurvePos, CurvePos),
    /// Member sub-path from `x` to `y`.
    pub side_u: Vec<Seg>,
    /// Target sub-path from `y` back to `x`.
    pub side_v: Vec<Seg>,
    /// The developed boundary `side_u + side_v`.
    pub disk: Vec<Point>,
    /// Start of the target sub-path in the target's parameterisation, then
    /// the member index.
    pub innermost_rank: (CurvePos, usize),
}

/// Open forward range `(a, b)` along a curve; wraps for closed curves.
fn strictly_between(a: &CurvePos, b: &CurvePos, p: &CurvePos, closed: bool) -> bool {
    match a.cmp(b) {
        Ordering::Less => a < p && p < b,
        _ if closed => p > a || p < b,
        _ => false,
    }
}

fn reversed(segs: &[Seg]) -> Vec<Seg> {
    segs.iter().rev().map(|s| s.reversed()).collect()
}

/// Turn a chain of segments into waypoints; consecutive segments either
/// share an endpoint or meet at twin points of an identified edge.
pub fn segments_to_curve(s: &Surface, segs: &[Seg], closed: bool) -> PolyCurve {
    let mut w: Vec<Point> = vec![segs[0].a.clone()];
    for sg in segs {
        if *w.last().unwrap() != sg.a {
            w.push(sg.a.clone());
        }
        w.push(sg.b.clone());
    }
    if closed {
        let first = w[0].clone();
        if *w.last().unwrap() == first {
            w.pop();
        } else {
            debug_assert!(s.same_point(w.last().unwrap(), &first));
        }
        PolyCurve::closed(w)
    } else {
        PolyCurve::arc(w)
    }
}

fn crossing_only(r: &IntersectionReport, what: &str) -> Result<()> {
    if r.identical {
        return Err(Error::Contract(format!("{what} coincides with the target")));
    }
    if r.components.iter().any(|c| !c.is_point() || !c.is_crossing()) {
        return Err(Error::Contract(format!(
            "{what} has touching or interval components with the target"
        )));
    }
    Ok(())
}

struct Member {
    geo: Geometry,
    /// Crossings sorted along the member.
    xs: Vec<(CurvePos, CurvePos)>,
}

fn members(s: &Surface, family: &[PolyCurve], gt: &Geometry) -> Result<Vec<Member>> {
    family
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let geo = geometry(s, c)?;
            let r = intersect_geometries(s, &geo, gt);
            crossing_only(&r, &format!("family member {i}"))?;
            let mut xs = r.crossing_points();
            xs.sort();
            Ok(Member { geo, xs })
        })
        .collect()
}

/// Some member `j != i` has a piece between consecutive crossings with the
/// target whose ends lie inside the target range and which enters the disk.
fn has_inner_piece(
    s: &Surface,
    ms: &[Member],
    i: usize,
    range: (&CurvePos, &CurvePos),
    target_closed: bool,
    disk: &[Point],
) -> Result<bool> {
    for (j, m) in ms.iter().enumerate() {
        if j == i || m.xs.len() < 2 {
            continue;
        }
        let k = m.xs.len();
        let pairs = if m.geo.closed { k } else { k - 1 };
        for a in 0..pairs {
            let (p0, p1) = (&m.xs[a], &m.xs[(a + 1) % k]);
            if !strictly_between(range.0, range.1, &p0.1, target_closed)
                || !strictly_between(range.0, range.1, &p1.1, target_closed)
            {
                continue;
            }
            let piece = m.geo.subpath(&p0.0, &p1.0);
            let probe = piece[0].at(&Q::new(1.into(), 2.into()));
            if loop_encloses(s, disk, &probe)? {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

fn candidate_bigons(s: &Surface, ms: &[Member], target: &PolyCurve, gt: &Geometry) -> Result<Vec<(Bigon, bool)>> {
    let mut out = Vec::new();
    for (i, m) in ms.iter().enumerate() {
        let k = m.xs.len();
        if k < 2 {
            continue;
        }
        let mut by_v: Vec<usize> = (0..k).collect();
        by_v.sort_by(|&a, &b| m.xs[a].1.cmp(&m.xs[b].1));
        let mut rank_v = vec![0; k];
        for (r, &idx) in by_v.iter().enumerate() {
            rank_v[idx] = r;
        }
        let pairs = if m.geo.closed { k } else { k - 1 };
        for a in 0..pairs {
            let (ia, ib) = (a, (a + 1) % k);
            let (x, y) = (&m.xs[ia], &m.xs[ib]);
            let (rx, ry) = (rank_v[ia], rank_v[ib]);
            // target ranges free of this member's other crossings
            let mut dirs: Vec<bool> = Vec::new();
            if ry == rx + 1 || (gt.closed && rx == k - 1 && ry == 0) {
                dirs.push(true); // x -> y forward along the target
            }
            if rx == ry + 1 || (gt.closed && ry == k - 1 && rx == 0) {
                dirs.push(false);
            }
            if k == 2 && gt.closed {
                dirs = vec![true, false];
            }
            for fwd in dirs {
                let side_u = m.geo.subpath(&x.0, &y.0);
                let (lo, hi, side_v) = if fwd {
                    (x.1.clone(), y.1.clone(), reversed(&gt.subpath(&x.1, &y.1)))
                } else {
                    (y.1.clone(), x.1.clone(), gt.subpath(&y.1, &x.1))
                };
                let mut lp_segs = side_u.clone();
                lp_segs.extend(side_v.iter().cloned());
                let Some(disk) = segments_bound_disk(s, &lp_segs)? else { continue };
                let inner = has_inner_piece(s, ms, i, (&lo, &hi), gt.closed, &disk)?;
                out.push((
                    Bigon {
                        member: i,
                        target: target.clone(),
                        x: x.clone(),
                        y: y.clone(),
                        side_u,
                        side_v,
                        disk,
                        innermost_rank: (lo, i),
                    },
                    !inner,
                ));
            }
        }
    }
    Ok(out)
}

/// An innermost bigon between some member of `family` and `target`.
pub fn find_innermost_bigon(s: &Surface, family: &[PolyCurve], target: &PolyCurve) -> Result<Option<Bigon>> {
    let gt = geometry(s, target)?;
    let ms = members(s, family, &gt)?;
    let cands = candidate_bigons(s, &ms, target, &gt)?;
    Ok(cands
        .into_iter()
        .filter(|(_, innermost)| *innermost)
        .map(|(b, _)| b)
        .min_by(|a, b| a.innermost_rank.cmp(&b.innermost_rank)))
}

/// The member curve with `side_u` replaced by the target side, still
/// containing that target sub-path.
fn surgered_core(s: &Surface, gu: &Geometry, b: &Bigon) -> PolyCurve {
    let along_v = reversed(&b.side_v); // x -> y
    if gu.closed {
        let mut segs = gu.subpath(&b.y.0, &b.x.0);
        segs.extend(along_v);
        segments_to_curve(s, &segs, true)
    } else {
        let mut segs = gu.subpath(&gu.start(), &b.x.0);
        segs.extend(along_v);
        segs.extend(gu.subpath(&b.y.0, &gu.end()));
        segments_to_curve(s, &segs, false)
    }
}

/// Replace the bigon's member by a pushoff of the surgered curve; its
/// crossing count with the target drops by exactly two.
pub fn bigon_surgery(s: &Surface, family: &[PolyCurve], b: &Bigon) -> Result<Vec<PolyCurve>> {
    let gt = geometry(s, &b.target)?;
    let ms = members(s, family, &gt)?;
    let i = b.member;
    if i >= ms.len() {
        return Err(Error::Contract("bigon member out of range".into()));
    }
    let (lo, hi) = if b.innermost_rank.0 == b.x.1 { (&b.x.1, &b.y.1) } else { (&b.y.1, &b.x.1) };
    if has_inner_piece(s, &ms, i, (lo, hi), gt.closed, &b.disk)? {
        return Err(Error::Contract("bigon is not innermost".into()));
    }
    let before = ms[i].xs.len();
    let core = surgered_core(s, &ms[i].geo, b);
    let gw = geometry(s, &core)?;
    let side = if developed_area2(&b.disk) > Q::from_integer(0.into()) {
        Side::Left
    } else {
        Side::Right
    };
    let mut avoid: Vec<Geometry> = vec![ms[i].geo.clone()];
    for (j, m) in ms.iter().enumerate() {
        if j != i && !curves_meet(s, &m.geo, &ms[i].geo) {
            avoid.push(m.geo.clone());
        }
    }
    let others: Vec<&Geometry> = ms.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, m)| &m.geo).collect();
    let mut d = embedding_radius(s, &core)?.min(q(1) / q(16));
    let two = q(2);
    let mut fallback: Option<PolyCurve> = None;
    let mut tries_after_fallback = 0;
    for _ in 0..MAX_HALVINGS {
        for sd in [side, side.flip()] {
            let Ok((off, og)) = offset_at(s, &gw, sd, &d, &avoid) else { continue };
            let r = intersect_geometries(s, &og, &gt);
            if !r.all_crossing() || r.crossing_count + 2 != before {
                continue;
            }
            let clean = others
                .iter()
                .all(|o| intersect_geometries(s, &og, o).all_crossing());
            if clean {
                let mut out = family.to_vec();
                out[i] = off.curve;
                return Ok(out);
            }
            if fallback.is_none() {
                fallback = Some(off.curve);
            }
        }
        if fallback.is_some() {
            tries_after_fallback += 1;
            if tries_after_fallback > 4 {
                break;
            }
        }
        d /= &two;
    }
    match fallback {
        Some(c) => {
            let mut out = family.to_vec();
            out[i] = c;
            Ok(out)
        }
        None => Err(Error::Internal("bigon surgery found no embedded pushoff".into())),
    }
}

/// Remove bigons of `u` with `v` until the two are in minimal position.
pub fn tighten_pair(s: &Surface, u: &PolyCurve, v: &PolyCurve) -> Result<PolyCurve> {
    let mut cur = u.clone();
    loop {
        let fam = [cur.clone()];
        match find_innermost_bigon(s, &fam, v)? {
            None => return Ok(cur),
            Some(b) => cur = bigon_surgery(s, &fam, &b)?.remove(0),
        }
    }
}

/// One replacement made by an arc surgery step.
#[derive(Clone, Debug)]
pub struct ArcReplacement {
    pub index: usize,
    pub arc: PolyCurve,
    /// Offset distance used.
    pub delta: Q,
    /// The new arc lies within this distance of the old arc together with
    /// the initial piece of `beta`; a small multiple of `delta`.
    pub near: Q,
    pub beta_before: usize,
    pub beta_after: usize,
}

#[derive(Clone, Debug)]
pub struct ArcStep {
    pub family: Vec<PolyCurve>,
    pub replaced: Vec<ArcReplacement>,
}

/// Multiples of the offset distance tried for the neighbourhood of
/// condition (4). Offset endpoints slide along the boundary by `delta` over
/// the sine of the meeting angle, so shallow arcs need the larger factors.
pub const NEAR_FACTORS: [i64; 4] = [4, 8, 16, 32];

/// Every waypoint of `c` lies within `r` of some segment of `core`,
/// measured in the chart metric across glued edges.
pub fn within_neighbourhood(s: &Surface, c: &PolyCurve, core: &[Seg], r: &Q) -> bool {
    let r2 = r * r;
    c.waypoints.iter().all(|w| {
        nearby_images(s, w, &r2)
            .iter()
            .any(|p| core.iter().any(|sg| dist2_point_segment(p, &sg.a, &sg.b) <= r2))
    })
}

/// Images of `w` in the charts glued around the polygon that come within
/// `sqrt(r2)` of its boundary, so distances are measured across edges and
/// around corners.
fn nearby_images(s: &Surface, w: &Point, r2: &Q) -> Vec<Point> {
    let poly = s.polygon();
    let near_boundary = |p: &Point| {
        (0..poly.len()).any(|i| dist2_point_segment(p, &poly[i], &poly[(i + 1) % poly.len()]) <= *r2)
    };
    let mut all = vec![w.clone()];
    let mut frontier = vec![w.clone()];
    for _ in 0..NEIGHBOURHOOD_DEPTH {
        let mut next = Vec::new();
        for p in &frontier {
            for e in 0..s.edge_count() {
                let Some(g) = s.glue_map(e) else { continue };
                let x = g.apply(p);
                if near_boundary(&x) && !all.contains(&x) {
                    all.push(x.clone());
                    next.push(x);
                }
            }
        }
        frontier = next;
    }
    all
}

fn beta_crossings(s: &Surface, g: &Geometry, gb: &Geometry, what: &str) -> Result<Vec<(CurvePos, CurvePos)>> {
    let r = intersect_geometries(s, g, gb);
    crossing_only(&r, what)?;
    Ok(r.crossing_points())
}

/// Surger every arc through the first intersection point along `beta`.
pub fn arc_surgery_step(s: &Surface, gamma: &[PolyCurve], beta: &PolyCurve) -> Result<ArcStep> {
    if beta.is_closed() || gamma.iter().any(|c| c.is_closed()) {
        return Err(Error::Contract("arc surgery works on arcs".into()));
    }
    let gb = geometry(s, beta)?;
    let geos: Vec<Geometry> = gamma.iter().map(|c| geometry(s, c)).collect::<Result<_>>()?;
    let head = gb.segs[0].a.clone();
    let tail = gb.segs[gb.len() - 1].b.clone();
    let mut xs = Vec::with_capacity(geos.len());
    for (i, g) in geos.iter().enumerate() {
        for sg in &g.segs {
            if crate::geom::point_on_segment(&head, &sg.a, &sg.b) || crate::geom::point_on_segment(&tail, &sg.a, &sg.b) {
                return Err(Error::Contract(format!("arc {i} meets an endpoint of beta")));
            }
        }
        xs.push(beta_crossings(s, g, &gb, &format!("arc {i}"))?);
    }
    let first = xs.iter().flatten().map(|(_, b)| b.clone()).min();
    let Some(first) = first else {
        return Ok(ArcStep {
            family: gamma.to_vec(),
            replaced: vec![],
        });
    };
    let piece = reversed(&gb.subpath(&gb.start(), &first)); // p -> head
    let mut family = gamma.to_vec();
    let mut replaced = Vec::new();
    for i in 0..geos.len() {
        let Some((pu, _)) = xs[i].iter().find(|(_, b)| *b == first) else { continue };
        let g = &geos[i];
        let before = xs[i].len();
        let mut wa = g.subpath(&g.start(), pu);
        wa.extend(piece.iter().cloned());
        let mut wb = reversed(&g.subpath(pu, &g.end()));
        wb.extend(piece.iter().cloned());
        let avoid: Vec<Geometry> = std::iter::once(g.clone())
            .chain(
                geos.iter()
                    .enumerate()
                    .filter(|(j, o)| *j != i && !curves_meet(s, o, g))
                    .map(|(_, o)| o.clone()),
            )
            .collect();
        let mut near_core = g.segs.clone();
        near_core.extend(piece.iter().cloned());
        let mut best: Option<(usize, PolyCurve, Q, Q)> = None;
        for w in [wa, wb] {
            let core = segments_to_curve(s, &w, false);
            let Ok(gw) = geometry(s, &core) else { continue };
            if let Some((cnt, c, d, near)) = surger_piece(s, &gw, &core, &gb, &avoid, &near_core, before)? {
                let better = match &best {
                    None => true,
                    Some((bc, bw, _, _)) => cnt < *bc || (cnt == *bc && c.waypoints < bw.waypoints),
                };
                if better {
                    best = Some((cnt, c, d, near));
                }
            }
        }
        let Some((cnt, c, d, near)) = best else {
            return Err(Error::Internal(format!(
                "neither surgered piece of arc {i} is essential"
            )));
        };
        family[i] = c.clone();
        replaced.push(ArcReplacement {
            index: i,
            arc: c,
            delta: d,
            near,
            beta_before: before,
            beta_after: cnt,
        });
    }
    Ok(ArcStep { family, replaced })
}

/// Pushoffs of one surgered piece: the first offset (shrinking, both sides)
/// meeting conditions (1)-(4), crossing-only with `beta`, and essential.
fn surger_piece(
    s: &Surface,
    gw: &Geometry,
    core: &PolyCurve,
    gb: &Geometry,
    avoid: &[Geometry],
    near_core: &[Seg],
    before: usize,
) -> Result<Option<(usize, PolyCurve, Q, Q)>> {
    let mut d = embedding_radius(s, core)?.min(q(1) / q(32));
    let two = q(2);
    for _ in 0..MAX_HALVINGS {
        for side in [Side::Left, Side::Right] {
            let Ok((off, og)) = offset_at(s, gw, side, &d, avoid) else { continue };
            let r = intersect_geometries(s, &og, gb);
            if !r.all_crossing() || r.crossing_count + 1 > before {
                continue;
            }
            let near = NEAR_FACTORS
                .iter()
                .map(|&k| &d * q(k))
                .find(|rad| within_neighbourhood(s, &off.curve, near_core, rad));
            let Some(near) = near else { continue };
            match arc_is_essential(s, &off.curve) {
                Ok(true) => return Ok(Some((r.crossing_count, off.curve, d, near))),
                Ok(false) => return Ok(None),
                Err(e) => return Err(e),
            }
        }
        d /= &two;
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::qr;
    use crate::kernel::intersect_curves;
    use crate::surface::catalog;
    use crate::topology::collapse_map_f;

    fn pt(x: Q, y: Q) -> Point {
        Point::new(x, y)
    }

    fn horizontal(y: Q) -> PolyCurve {
        PolyCurve::closed(vec![pt(q(0), y.clone()), pt(q(1), y)])
    }

    /// A (0,1) curve with a zig-zag that crosses y = 1/2 three times.
    fn zigzag() -> PolyCurve {
        PolyCurve::closed(vec![
            pt(qr(1, 4), qr(1, 8)),
            pt(qr(1, 4), qr(5, 8)),
            pt(qr(3, 8), qr(3, 8)),
            pt(qr(1, 2), q(1)),
            pt(qr(1, 2), q(0)),
        ])
    }

    #[test]
    fn zigzag_has_a_bigon() {
        let t = catalog::torus();
        let z = zigzag();
        let h = horizontal(qr(1, 2));
        assert_eq!(intersect_curves(&t, &z, &h).unwrap().crossing_count, 3);
        let b = find_innermost_bigon(&t, std::slice::from_ref(&z), &h).unwrap();
        assert!(b.is_some());
    }

    #[test]
    fn straight_pair_has_no_bigon() {
        let t = catalog::torus();
        let v = PolyCurve::closed(vec![pt(qr(1, 4), q(0)), pt(qr(1, 4), q(1))]);
        assert!(find_innermost_bigon(&t, &[v], &horizontal(qr(1, 2))).unwrap().is_none());
    }

    #[test]
    fn surgery_drops_two_and_keeps_class() {
        let t = catalog::torus();
        let z = zigzag();
        let h = horizontal(qr(1, 2));
        let b = find_innermost_bigon(&t, std::slice::from_ref(&z), &h).unwrap().unwrap();
        let out = bigon_surgery(&t, std::slice::from_ref(&z), &b).unwrap();
        let r = intersect_curves(&t, &out[0], &h).unwrap();
        assert_eq!(r.crossing_count, 1);
        assert!(r.all_crossing());
        assert!(crate::kernel::disjoint(&t, &out[0], &z).unwrap());
        assert_eq!(collapse_map_f(&t, &out[0]).unwrap(), collapse_map_f(&t, &z).unwrap());
    }

    #[test]
    fn tighten_zigzag() {
        let t = catalog::torus();
        let h = horizontal(qr(1, 2));
        let u = tighten_pair(&t, &zigzag(), &h).unwrap();
        assert_eq!(intersect_curves(&t, &u, &h).unwrap().crossing_count, 1);
        let again = tighten_pair(&t, &u, &h).unwrap();
        assert_eq!(again, u);
    }

    #[test]
    fn trivial_bigon_removed_entirely() {
        let t = catalog::torus();
        let h = horizontal(qr(1, 2));
        let sq = PolyCurve::closed(vec![
            pt(qr(1, 4), qr(1, 4)),
            pt(qr(1, 2), qr(1, 4)),
            pt(qr(1, 2), qr(3, 4)),
            pt(qr(1, 4), qr(3, 4)),
        ]);
        let u = tighten_pair(&t, &sq, &h).unwrap();
        assert!(crate::kernel::disjoint(&t, &u, &h).unwrap());
    }

    #[test]
    fn arc_step_removes_single_crossing() {
        let s = catalog::s05();
        // beta from the outer boundary up into hole 1; gamma runs from the
        // outer boundary to hole 2 and crosses it once
        let beta = PolyCurve::arc(vec![pt(qr(1, 4), q(0)), pt(qr(1, 4), qr(1, 8))]);
        let gamma = PolyCurve::arc(vec![pt(q(0), qr(1, 16)), pt(qr(9, 16), qr(1, 16)), pt(qr(5, 8), qr(1, 4))]);
        assert_eq!(intersect_curves(&s, &gamma, &beta).unwrap().crossing_count, 1);
        let step = arc_surgery_step(&s, std::slice::from_ref(&gamma), &beta).unwrap();
        assert_eq!(step.replaced.len(), 1);
        let new = &step.family[0];
        assert!(crate::kernel::disjoint(&s, new, &beta).unwrap());
        assert!(crate::kernel::disjoint(&s, new, &gamma).unwrap());
        assert!(arc_is_essential(&s, new).unwrap());
    }

    #[test]
    fn arc_step_identity_when_disjoint() {
        let s = catalog::s05();
        let beta = PolyCurve::arc(vec![pt(qr(1, 4), q(0)), pt(qr(1, 4), qr(1, 8))]);
        let gamma = PolyCurve::arc(vec![pt(qr(1, 2), q(0)), pt(qr(1, 2), q(1))]);
        let step = arc_surgery_step(&s, std::slice::from_ref(&gamma), &beta).unwrap();
        assert!(step.replaced.is_empty());
        assert_eq!(step.family, vec![gamma]);
    }
}
