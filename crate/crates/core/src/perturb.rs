//! Pushoffs, tubular regions and the perturbation into crossing-only position.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::curve::{geometry, Geometry, PolyCurve};
use crate::error::{Error, Result};
use crate::geom::{dist2_point_segment, line_intersection, point_on_segment, q, Point, Similarity, Q};
use crate::kernel::{curves_meet, intersect_geometries};
use crate::surface::{FlatModel, Surface};
use crate::topology::{develop_geometry, loop_encloses};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// Halvings tried before a pushoff gives up.
pub const MAX_HALVINGS: usize = 48;

/// An offset together with the planar data that witnesses it.
#[derive(Clone, Debug)]
pub struct Offset {
    pub curve: PolyCurve,
    pub distance: Q,
    /// Developed core vertices.
    pub core: Vec<Point>,
    /// Developed offset vertices, one per core vertex.
    pub shifted: Vec<Point>,
}

impl Offset {
    /// Largest squared distance from an offset vertex to the developed core.
    pub fn max_dist2(&self) -> Q {
        self.shifted
            .iter()
            .map(|v| {
                self.core
                    .windows(2)
                    .map(|w| dist2_point_segment(v, &w[0], &w[1]))
                    .min()
                    .unwrap()
            })
            .max()
            .unwrap()
    }
}

fn normal(e: &Point, side: Side, d: &Q) -> Point {
    let n = e.rot90().scale(&(d / e.norm_inf()));
    match side {
        Side::Left => n,
        Side::Right => -&n,
    }
}

fn meet(p: &Point, e: &Point, p2: &Point, f: &Point, fallback: Point) -> Point {
    line_intersection(p, e, p2, f).unwrap_or(fallback)
}

/// Where the offset line `p + s e` leaves through the boundary edge `(a, b)`;
/// must land strictly inside the edge.
fn boundary_end(p: &Point, e: &Point, a: &Point, b: &Point) -> Result<Point> {
    let x = line_intersection(p, e, a, &(b - a))
        .ok_or_else(|| Error::Construction("offset runs parallel to the boundary".into()))?;
    if !point_on_segment(&x, a, b) || x == *a || x == *b {
        return Err(Error::Construction("offset endpoint leaves its boundary edge".into()));
    }
    Ok(x)
}

/// The mitred offset of a validated curve at distance `d`, without any
/// checks beyond folding back onto the surface.
fn raw_offset(s: &Surface, g: &Geometry, side: Side, d: &Q) -> Result<Offset> {
    let dev = develop_geometry(s, g);
    let p = &dev.pts;
    let m = g.len();
    let dirs: Vec<Point> = (0..m).map(|k| &p[k + 1] - &p[k]).collect();
    let base: Vec<Point> = (0..m).map(|k| &p[k] + &normal(&dirs[k], side, d)).collect();
    let mut v: Vec<Point> = Vec::with_capacity(m + 1);
    if g.closed {
        let h = &dev.holonomy;
        let hinv = h.inverse();
        let prev_base = hinv.apply(&(&p[m] + &normal(&dirs[m - 1], side, d)));
        let prev_dir = hinv.apply_linear(&dirs[m - 1]);
        let fallback = &p[0] + &normal(&dirs[0], side, d);
        v.push(meet(&prev_base, &prev_dir, &base[0], &dirs[0], fallback));
    } else {
        let (a, b) = s
            .boundary_edge_at(&g.segs[0].a)
            .ok_or_else(|| Error::Internal("arc start off the boundary".into()))?;
        v.push(boundary_end(&base[0], &dirs[0], &a, &b)?);
    }
    for k in 1..m {
        let fallback = &p[k] + &normal(&dirs[k], side, d);
        v.push(meet(&base[k - 1], &dirs[k - 1], &base[k], &dirs[k], fallback));
    }
    let mut path: Vec<Point>;
    if g.closed {
        let h = &dev.holonomy;
        v.push(h.apply(&v[0]));
        let two = q(2);
        let mid = &(&p[0] + &p[1]).scale(&(Q::one() / &two)) + &normal(&dirs[0], side, d);
        path = vec![mid.clone()];
        path.extend(v[1..].iter().cloned());
        path.push(h.apply(&mid));
    } else {
        let (a, b) = s
            .boundary_edge_at(&g.segs[m - 1].b)
            .ok_or_else(|| Error::Internal("arc end off the boundary".into()))?;
        let (a, b) = (dev.end_chart.apply(&a), dev.end_chart.apply(&b));
        v.push(boundary_end(&base[m - 1], &dirs[m - 1], &a, &b)?);
        path = v.clone();
    }
    path.dedup();
    let folded = s.fold(&path, &Similarity::identity(), g.closed)?;
    let curve = if g.closed {
        PolyCurve::closed(folded)
    } else {
        PolyCurve::arc(folded)
    };
    Ok(Offset {
        curve,
        distance: d.clone(),
        core: dev.pts.clone(),
        shifted: v,
    })
}

/// The strip between core and offset contains no hole.
fn strip_is_clean(s: &Surface, off: &Offset) -> Result<bool> {
    if *s.flat_model() == FlatModel::General || s.holes().is_empty() {
        return Ok(true);
    }
    for k in 0..off.core.len() - 1 {
        let quad = [
            off.core[k].clone(),
            off.core[k + 1].clone(),
            off.shifted[k + 1].clone(),
            off.shifted[k].clone(),
        ];
        for probe in s.hole_probes() {
            if loop_encloses(s, &quad, probe)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// One offset attempt at exactly `d`: valid, disjoint from the core, isotopic
/// through a hole-free strip and disjoint from everything in `avoid`.
pub fn offset_at(
    s: &Surface,
    g: &Geometry,
    side: Side,
    d: &Q,
    avoid: &[Geometry],
) -> Result<(Offset, Geometry)> {
    let off = raw_offset(s, g, side, d)?;
    let og = geometry(s, &off.curve)?;
    if curves_meet(s, g, &og) {
        return Err(Error::Construction("offset meets its core".into()));
    }
    if !strip_is_clean(s, &off)? {
        return Err(Error::Construction("offset strip contains a hole".into()));
    }
    if avoid.iter().any(|a| curves_meet(s, a, &og)) {
        return Err(Error::Construction("offset meets a curve it must avoid".into()));
    }
    Ok((off, og))
}

/// Offset with auto-shrink: halve `d` until [`offset_at`] succeeds.
pub fn pushoff_avoiding(
    s: &Surface,
    c: &PolyCurve,
    side: Side,
    d: &Q,
    avoid: &[PolyCurve],
) -> Result<Offset> {
    let g = geometry(s, c)?;
    let avoid: Vec<Geometry> = avoid.iter().map(|a| geometry(s, a)).collect::<Result<_>>()?;
    let mut d = d.clone();
    let two = q(2);
    for _ in 0..MAX_HALVINGS {
        if let Ok((off, _)) = offset_at(s, &g, side, &d, &avoid) {
            return Ok(off);
        }
        d /= &two;
    }
    Err(Error::Construction("pushoff failed to embed after shrinking".into()))
}

/// A parallel copy of `c` on the given side.
pub fn pushoff(s: &Surface, c: &PolyCurve, side: Side, d: &Q) -> Result<PolyCurve> {
    Ok(pushoff_avoiding(s, c, side, d, &[])?.curve)
}

/// Default pushoff distance: a power of two below half the smallest distance
/// between non-adjacent segments of the core and from the core to corners.
pub fn embedding_radius(s: &Surface, c: &PolyCurve) -> Result<Q> {
    let g = geometry(s, c)?;
    let m = g.len();
    let mut best: Option<Q> = None;
    for i in 0..m {
        for j in (i + 1)..m {
            let adjacent = g.next(i) == Some(j) || g.next(j) == Some(i);
            if adjacent {
                continue;
            }
            let (a, b) = (&g.segs[i], &g.segs[j]);
            let d2 = crate::geom::dist2_segments(&a.a, &a.b, &b.a, &b.b);
            if best.as_ref().is_none_or(|x| d2 < *x) {
                best = Some(d2);
            }
        }
    }
    for corner in s.corners() {
        // polygon corners of a glued model are ordinary points
        if s.polygon().contains(corner) && *s.flat_model() != FlatModel::Planar {
            continue;
        }
        for sg in &g.segs {
            let d2 = dist2_point_segment(corner, &sg.a, &sg.b);
            if !d2.is_zero() && best.as_ref().is_none_or(|x| d2 < *x) {
                best = Some(d2);
            }
        }
    }
    let quarter = Q::new(1.into(), 4.into());
    Ok(match best {
        Some(b) => crate::geom::pow2_below_sqrt(&(b * quarter)),
        None => Q::new(1.into(), 8.into()),
    })
}

/// The two boundary curves of an embedded tubular region around `core`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TubularRegion {
    pub core: PolyCurve,
    pub left: PolyCurve,
    pub right: PolyCurve,
    #[serde(with = "crate::geom::qstr")]
    pub radius: Q,
}

pub fn tubular_region(s: &Surface, c: &PolyCurve, radius: &Q) -> Result<TubularRegion> {
    let mut d = radius.clone();
    let two = q(2);
    for _ in 0..MAX_HALVINGS {
        let l = pushoff_avoiding(s, c, Side::Left, &d, &[])?;
        let r = pushoff_avoiding(s, c, Side::Right, &d, &[])?;
        let dd = l.distance.clone().min(r.distance.clone());
        if l.distance == r.distance && crate::kernel::disjoint(s, &l.curve, &r.curve)? {
            return Ok(TubularRegion {
                core: c.clone(),
                left: l.curve,
                right: r.curve,
                radius: dd,
            });
        }
        d = dd / &two;
    }
    Err(Error::Construction("tubular region failed to embed".into()))
}

/// Divisors applied to the radius within one round of candidates.
const ROUND_DIVISORS: [i64; 6] = [2, 3, 5, 7, 11, 13];

/// Every intersection with every member of `others` is a crossing.
fn all_crossing(s: &Surface, g: &Geometry, others: &[Geometry]) -> Option<usize> {
    let mut total = 0;
    for o in others {
        let r = intersect_geometries(s, g, o);
        if !r.all_crossing() {
            return None;
        }
        total += r.crossing_count;
    }
    Some(total)
}

/// A curve near `y` meeting every member of `gamma` in crossings only.
pub fn perturb(s: &Surface, y: &PolyCurve, gamma: &[PolyCurve], eps: &Q) -> Result<PolyCurve> {
    if *eps <= Q::zero() {
        return Err(Error::Contract("perturbation radius must be positive".into()));
    }
    let gy = geometry(s, y)?;
    let others: Vec<Geometry> = gamma.iter().map(|c| geometry(s, c)).collect::<Result<_>>()?;
    if all_crossing(s, &gy, &others).is_some() {
        return Ok(y.clone());
    }
    perturb_candidates(s, &gy, eps, |og, _| all_crossing(s, og, &others))
}

/// Search pushoffs of `g` by rounds of shrinking distance; `score` rejects a
/// candidate with `None`, otherwise lower is better. Ties keep the earliest.
pub(crate) fn perturb_candidates<F>(s: &Surface, g: &Geometry, eps: &Q, mut score: F) -> Result<PolyCurve>
where
    F: FnMut(&Geometry, &Offset) -> Option<usize>,
{
    let eps2 = eps * eps;
    let mut scale = eps.clone();
    let two = q(2);
    for _ in 0..MAX_HALVINGS {
        let mut best: Option<(usize, PolyCurve)> = None;
        for div in ROUND_DIVISORS {
            let d = &scale / q(div);
            for side in [Side::Left, Side::Right] {
                let Ok((off, og)) = offset_at(s, g, side, &d, &[]) else { continue };
                if off.max_dist2() > eps2 {
                    continue;
                }
                if let Some(sc) = score(&og, &off) {
                    if best.as_ref().is_none_or(|(b, _)| sc < *b) {
                        best = Some((sc, off.curve));
                    }
                }
            }
        }
        if let Some((_, c)) = best {
            return Ok(c);
        }
        scale /= &two;
    }
    Err(Error::Construction("no perturbation found within the radius".into()))
}

/// A representative inside a tubular region: the core if it is
/// already in crossing-only position with `gamma`, else a perturbation.
pub fn region_representative(s: &Surface, r: &TubularRegion, gamma: &[PolyCurve]) -> Result<PolyCurve> {
    perturb(s, &r.core, gamma, &r.radius)
}

/// Sequential pushoff family: each curve is kept or replaced by a nearby
/// pushoff so that the result is pairwise crossing-only and disjointness is
/// preserved.
pub fn pushoff_family(s: &Surface, gamma: &[PolyCurve]) -> Result<Vec<PolyCurve>> {
    let geo: Vec<Geometry> = gamma.iter().map(|c| geometry(s, c)).collect::<Result<_>>()?;
    let n = geo.len();
    let mut disjoint = vec![vec![false; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let r = intersect_geometries(s, &geo[i], &geo[j]);
            if r.identical {
                return Err(Error::Contract(format!("curves {i} and {j} coincide")));
            }
            disjoint[i][j] = r.is_empty();
            disjoint[j][i] = disjoint[i][j];
        }
    }
    let mut out: Vec<PolyCurve> = Vec::with_capacity(n);
    let mut out_geo: Vec<Geometry> = Vec::with_capacity(n);
    for i in 0..n {
        let ok = |cand: &Geometry, is_core: bool| -> Option<usize> {
            let mut total = 0;
            for j in 0..n {
                if j != i && disjoint[i][j] && !is_core && curves_meet(s, cand, &geo[j]) {
                    return None;
                }
            }
            for (j, prev) in out_geo.iter().enumerate() {
                let r = intersect_geometries(s, cand, prev);
                if !r.all_crossing() || (disjoint[i][j] && !r.is_empty()) {
                    return None;
                }
                total += r.crossing_count;
            }
            Some(total)
        };
        if ok(&geo[i], true).is_some() {
            out.push(gamma[i].clone());
            out_geo.push(geo[i].clone());
            continue;
        }
        let eps = embedding_radius(s, &gamma[i])?;
        let c = perturb_candidates(s, &geo[i], &eps, |og, _| ok(og, false))?;
        out_geo.push(geometry(s, &c)?);
        out.push(c);
    }
    Ok(out)
}
