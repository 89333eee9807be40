//! Seeded instance generators: straight torus curves of a given class,
//! wiggles, touching and overlapping copies, arc families, and sphere maps
//! into the resulting fine complexes. Every generator is deterministic in
//! its seed.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::{CombinatorialSphere, Handle};
use crate::curve::{geometry, validate_curve, PolyCurve};
use crate::flows::SphereMap;
use crate::geom::{q, qr, Point, Q};
use crate::kernel::{curves_meet, intersect_curves};
use crate::surface::{catalog, Surface};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Denominators of base points; coprime to every class entry in `[-5, 5]`.
const BASE_DEN: (i64, i64) = (97, 89);

/// Apex heights of a wiggle, relative to the segment length.
const WIGGLE_HEIGHTS: [(i64, i64); 6] = [(1, 2), (1, 3), (1, 5), (1, 8), (1, 13), (1, 21)];

/// A random primitive class with entries in `[-bound, bound]`.
pub fn primitive_class(r: &mut SampleRng, bound: i64) -> (i64, i64) {
    loop {
        let p = r.gen_range(-bound..=bound);
        let q = r.gen_range(-bound..=bound);
        if p.gcd(&q) == 1 {
            return (p, q);
        }
    }
}

fn frac(x: &Q) -> Q {
    x - x.floor()
}

/// True when the straight `(p, q)` line through `base` misses the lattice.
pub fn generic_base(p: i64, q_: i64, base: &Point) -> bool {
    let c = &base.x * q(q_) - &base.y * q(p);
    !c.is_integer() && !base.x.is_integer() && !base.y.is_integer()
}

/// A random base point off every lattice translate of the `(p, q)` line.
pub fn random_base(r: &mut SampleRng, p: i64, q_: i64) -> Point {
    loop {
        let b = Point::new(
            qr(r.gen_range(1..BASE_DEN.0), BASE_DEN.0),
            qr(r.gen_range(1..BASE_DEN.1), BASE_DEN.1),
        );
        if generic_base(p, q_, &b) {
            return b;
        }
    }
}

/// The straight closed curve of class `(p, q)` on the unit-square torus
/// through `base`, which must satisfy [`generic_base`].
pub fn torus_line(p: i64, q_: i64, base: &Point) -> PolyCurve {
    assert!(p.gcd(&q_) == 1, "class must be primitive");
    let d = Point::int(p, q_);
    // parameters in (0, 1) where the developed line meets a grid line
    let mut ts: Vec<Q> = Vec::new();
    for (x0, dx) in [(&base.x, p), (&base.y, q_)] {
        if dx == 0 {
            continue;
        }
        let (lo, hi) = if dx > 0 { (x0.clone(), x0 + q(dx)) } else { (x0 + q(dx), x0.clone()) };
        let mut k = lo.ceil();
        while k < hi {
            if k > lo {
                ts.push((&k - x0) / q(dx));
            }
            k += q(1);
        }
    }
    ts.sort();
    let at = |t: &Q| base + &d.scale(t);
    let cell = |t0: &Q, t1: &Q| {
        let m = at(&((t0 + t1) / q(2)));
        Point::new(m.x.floor(), m.y.floor())
    };
    let mut pts = vec![base.clone()];
    let mut prev = Q::zero();
    for (i, t) in ts.iter().enumerate() {
        let next = ts.get(i + 1).cloned().unwrap_or_else(|| q(1));
        let x = at(t);
        pts.push(&x - &cell(&prev, t));
        pts.push(&x - &cell(t, &next));
        prev = t.clone();
    }
    PolyCurve::closed(pts)
}

/// Insert up to `count` triangular wiggles into ordinary segments of `c`,
/// keeping the curve valid.
pub fn wiggle(s: &Surface, c: &PolyCurve, count: usize, r: &mut SampleRng) -> PolyCurve {
    let mut cur = c.clone();
    let mut done = 0;
    let mut attempts = 0;
    while done < count && attempts < 20 * count + 20 {
        attempts += 1;
        let n = cur.waypoints.len();
        let segs: Vec<usize> = (0..n)
            .filter(|&i| {
                let j = (i + 1) % n;
                (j != 0 || cur.is_closed()) && !s.same_point(&cur.waypoints[i], &cur.waypoints[j])
            })
            .collect();
        let Some(&i) = segs.choose(r) else { break };
        let (a, b) = (&cur.waypoints[i], &cur.waypoints[(i + 1) % n]);
        let (hn, hd) = *WIGGLE_HEIGHTS.choose(r).unwrap();
        let h = if r.gen_bool(0.5) { qr(hn, hd) } else { qr(-hn, hd) };
        let apex = &a.lerp(b, &qr(1, 2)) + &(b - a).rot90().scale(&h);
        let mut next = cur.clone();
        next.waypoints.insert(i + 1, apex);
        if validate_curve(s, &next).is_ok() {
            cur = next;
            done += 1;
        }
    }
    cur
}

/// Transverse coordinate of the `(p, q)` line through `b`: points of one
/// such curve share it modulo 1.
fn transverse(p: i64, q_: i64, b: &Point) -> Q {
    &b.x * q(q_) - &b.y * q(p)
}

/// A copy of the straight `(p, q)` line through `from` with a finger pushed
/// across the parallel line through `to`.
pub fn finger(s: &Surface, p: i64, q_: i64, from: &Point, to: &Point, r: &mut SampleRng) -> Option<PolyCurve> {
    let gap = frac(&(transverse(p, q_, to) - transverse(p, q_, from)));
    let line = torus_line(p, q_, from);
    let n = line.waypoints.len();
    let norm2 = q(p * p + q_ * q_);
    for _ in 0..24 {
        // overshoot the target line, staying short of the next copy of `from`
        let shift = if r.gen_bool(0.5) { gap.clone() } else { &gap - q(1) };
        let (fn_, fd) = *[(5, 4), (4, 3), (3, 2)].choose(r).unwrap();
        let amount = &shift * qr(fn_, fd);
        if amount.abs() >= q(1) {
            continue;
        }
        let delta = Point::int(q_, -p).scale(&(&amount / &norm2));
        let i = r.gen_range(0..n);
        let (a, b) = (&line.waypoints[i], &line.waypoints[(i + 1) % n]);
        if s.same_point(a, b) {
            continue;
        }
        let t0 = qr(r.gen_range(1..5), 10);
        let t1 = &t0 + qr(r.gen_range(1..5), 10);
        if t1 >= q(1) {
            continue;
        }
        let (x0, x1) = (a.lerp(b, &t0), a.lerp(b, &t1));
        let mut c = line.clone();
        let tip = [x0.clone(), &x0 + &delta, &x1 + &delta, x1];
        for (k, w) in tip.into_iter().enumerate() {
            c.waypoints.insert(i + 1 + k, w);
        }
        if validate_curve(s, &c).is_ok() {
            return Some(c);
        }
    }
    None
}

/// A closed curve touching `y` (a straight torus line through `base`) at
/// exactly one point from one side.
pub fn touching_copy(s: &Surface, p: i64, q_: i64, base: &Point, r: &mut SampleRng) -> Option<PolyCurve> {
    let m = p.abs().max(q_.abs());
    for _ in 0..32 {
        let d = qr(1, r.gen_range(40..200));
        let sgn = if r.gen_bool(0.5) { q(1) } else { q(-1) };
        let v = Point::int(-q_, p).scale(&(&d * &sgn / q(m)));
        let b2 = Point::new(frac(&(&base.x + &v.x)), frac(&(&base.y + &v.y)));
        if !generic_base(p, q_, &b2) {
            continue;
        }
        let z = torus_line(p, q_, &b2);
        let n = z.waypoints.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(r);
        for i in order {
            let (a, b) = (&z.waypoints[i], &z.waypoints[(i + 1) % n]);
            if s.same_point(a, b) {
                continue;
            }
            let apex = &a.lerp(b, &qr(1, 2)) - &v;
            let mut c = z.clone();
            c.waypoints.insert(i + 1, apex);
            if validate_curve(s, &c).is_err() {
                continue;
            }
            let y = torus_line(p, q_, base);
            let rep = intersect_curves(s, &c, &y).ok()?;
            if rep.components.len() == 1 && rep.touching_count() == 1 {
                return Some(c);
            }
        }
    }
    None
}

/// A closed curve sharing a sub-segment with `y` but not equal to it.
pub fn overlapping_copy(s: &Surface, y: &PolyCurve, r: &mut SampleRng) -> Option<PolyCurve> {
    for _ in 0..16 {
        let c = wiggle(s, y, 1, r);
        if c != *y {
            return Some(c);
        }
    }
    None
}

/// A torus pair for the minimal-position oracle: classes and wiggled
/// representatives.
#[derive(Clone, Debug)]
pub struct TorusPair {
    pub a: (i64, i64),
    pub b: (i64, i64),
    pub u: PolyCurve,
    pub v: PolyCurve,
}

pub fn torus_pair(seed: u64) -> TorusPair {
    let s = catalog::torus();
    let mut r = rng(seed);
    let a = primitive_class(&mut r, 5);
    let b = primitive_class(&mut r, 5);
    let ub = random_base(&mut r, a.0, a.1);
    let vb = random_base(&mut r, b.0, b.1);
    let wa = r.gen_range(2..=8);
    let wb = r.gen_range(0..=wa.min(3));
    let u = wiggle(&s, &torus_line(a.0, a.1, &ub), wa, &mut r);
    let v = wiggle(&s, &torus_line(b.0, b.1, &vb), wb, &mut r);
    TorusPair { a, b, u, v }
}

/// A perturbation instance: target `y` and a family containing an
/// overlapping copy, a touching copy and a few other curves.
#[derive(Clone, Debug)]
pub struct PerturbInstance {
    pub y: PolyCurve,
    pub family: Vec<PolyCurve>,
}

pub fn perturb_instance(seed: u64) -> PerturbInstance {
    let s = catalog::torus();
    let mut r = rng(seed);
    loop {
        let (p, q_) = primitive_class(&mut r, 3);
        let base = random_base(&mut r, p, q_);
        let y = torus_line(p, q_, &base);
        let Some(over) = overlapping_copy(&s, &y, &mut r) else { continue };
        let Some(touch) = touching_copy(&s, p, q_, &base, &mut r) else { continue };
        let mut family = vec![over, touch];
        for _ in 0..r.gen_range(0..=3) {
            let (a, b) = primitive_class(&mut r, 3);
            let bb = random_base(&mut r, a, b);
            let w = r.gen_range(0..=2);
            family.push(wiggle(&s, &torus_line(a, b, &bb), w, &mut r));
        }
        family.shuffle(&mut r);
        return PerturbInstance { y, family };
    }
}

/// A family of at most five torus curves with disjoint, touching and
/// crossing pairs, pairwise distinct as point sets.
pub fn curve_family(seed: u64) -> Vec<PolyCurve> {
    let s = catalog::torus();
    let mut r = rng(seed);
    let n = r.gen_range(2..=5);
    let (p, q_) = primitive_class(&mut r, 3);
    let mut out: Vec<PolyCurve> = Vec::new();
    while out.len() < n {
        let base = random_base(&mut r, p, q_);
        let cand = match r.gen_range(0..4) {
            0 => Some(torus_line(p, q_, &base)),
            1 => touching_copy(&s, p, q_, &base, &mut r),
            2 => Some(wiggle(&s, &torus_line(p, q_, &base), 2, &mut r)),
            _ => {
                let (a, b) = primitive_class(&mut r, 3);
                let bb = random_base(&mut r, a, b);
                Some(wiggle(&s, &torus_line(a, b, &bb), 1, &mut r))
            }
        };
        let Some(c) = cand else { continue };
        let distinct = out.iter().all(|o| {
            intersect_curves(&s, o, &c).map(|rep| !rep.identical).unwrap_or(false)
        });
        if distinct {
            out.push(c);
        }
    }
    out
}

fn disjointness(s: &Surface, curves: &[PolyCurve]) -> Vec<Vec<bool>> {
    let geos: Vec<_> = curves.iter().map(|c| geometry(s, c).expect("valid sample")).collect();
    let n = curves.len();
    let mut adj = vec![vec![false; n]; n];
    for i in 0..n {
        adj[i][i] = true;
        for j in (i + 1)..n {
            let d = !curves_meet(s, &geos[i], &geos[j]);
            adj[i][j] = d;
            adj[j][i] = d;
        }
    }
    adj
}

/// A simplicial map of a `dim`-sphere into the fine complex on `curves`,
/// where `ok[i][j]` says `i` and `j` may share a simplex.
pub fn random_sphere_map(ok: &[Vec<bool>], dim: usize, r: &mut SampleRng) -> (CombinatorialSphere, BTreeMap<Handle, Handle>) {
    let n = ok.len();
    let compatible = |a: &[Handle], b: &[Handle]| a.iter().all(|&x| b.iter().all(|&y| ok[x][y]));
    match dim {
        0 => {
            // prefer two curves that meet, so the flow has work to do
            let meeting: Vec<(Handle, Handle)> =
                (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).filter(|&(a, b)| !ok[a][b]).collect();
            let (a, b) = match meeting.choose(r) {
                Some(&pair) => pair,
                None => (r.gen_range(0..n), r.gen_range(0..n)),
            };
            (CombinatorialSphere::s0(), BTreeMap::from([(0, a), (1, b)]))
        }
        1 => {
            for _ in 0..200 {
                let len = r.gen_range(4..=6);
                let mut walk = vec![r.gen_range(0..n)];
                while walk.len() < len {
                    let last = *walk.last().unwrap();
                    let nbrs: Vec<Handle> = (0..n).filter(|&j| ok[last][j]).collect();
                    walk.push(*nbrs.choose(r).unwrap());
                }
                if ok[walk[0]][*walk.last().unwrap()] {
                    let sphere = CombinatorialSphere::cycle(len).unwrap();
                    return (sphere, walk.into_iter().enumerate().collect());
                }
            }
            random_sphere_map(ok, 0, r)
        }
        _ => {
            // the octahedron: three antipodal pairs, any choice across pairs
            // must be compatible
            for _ in 0..400 {
                let pairs: Vec<[Handle; 2]> = (0..3).map(|_| [r.gen_range(0..n), r.gen_range(0..n)]).collect();
                let good = (0..3).all(|i| ((i + 1)..3).all(|j| compatible(&pairs[i], &pairs[j])));
                if good {
                    let sphere = CombinatorialSphere::cross_polytope(2).unwrap();
                    let assignment = pairs.iter().flatten().copied().enumerate().collect();
                    return (sphere, assignment);
                }
            }
            random_sphere_map(ok, 1, r)
        }
    }
}

/// A sphere map into one fibre on the torus: parallel straight copies of a
/// class together with copies fingered across their neighbours.
pub fn star_instance(seed: u64) -> SphereMap {
    let s = catalog::torus();
    let mut r = rng(seed);
    let (p, q_) = primitive_class(&mut r, 2);
    let n = r.gen_range(4..=8);
    let mut bases: Vec<Point> = Vec::new();
    let mut curves: Vec<PolyCurve> = Vec::new();
    while curves.len() < n {
        let c = if curves.len() < 2 || r.gen_bool(0.5) {
            let b = random_base(&mut r, p, q_);
            bases.push(b.clone());
            Some(torus_line(p, q_, &b))
        } else {
            let from = bases.choose(&mut r).unwrap().clone();
            let to = bases.choose(&mut r).unwrap().clone();
            if from == to {
                continue;
            }
            finger(&s, p, q_, &from, &to, &mut r)
        };
        let Some(c) = c else { continue };
        let distinct = curves
            .iter()
            .all(|o| intersect_curves(&s, o, &c).map(|rep| !rep.identical).unwrap_or(false));
        if distinct {
            curves.push(c);
        }
    }
    let ok = disjointness(&s, &curves);
    let dim = (seed % 3) as usize;
    let (sphere, assignment) = random_sphere_map(&ok, dim, &mut r);
    SphereMap {
        sphere,
        curves,
        assignment,
    }
}

/// Points on boundary edges of `s` together with their component.
fn boundary_edges(s: &Surface) -> Vec<(Point, Point)> {
    let mut edges = Vec::new();
    for i in 0..s.edge_count() {
        if s.partner(i).is_none() {
            let (a, b) = s.edge(i);
            edges.push((a.clone(), b.clone()));
        }
    }
    for h in 0..s.holes().len() {
        for e in 0..s.holes()[h].len() {
            let (a, b) = s.hole_edge(h, e);
            edges.push((a.clone(), b.clone()));
        }
    }
    edges
}

/// A random essential arc: a straight chord between points on different
/// boundary components.
pub fn random_arc(s: &Surface, r: &mut SampleRng) -> PolyCurve {
    let edges = boundary_edges(s);
    loop {
        let pick = |r: &mut SampleRng| {
            let (a, b) = edges.choose(r).unwrap();
            a.lerp(b, &qr(r.gen_range(1..83), 83))
        };
        let (x, y) = (pick(r), pick(r));
        if s.boundary_component(&x) == s.boundary_component(&y) {
            continue;
        }
        let c = PolyCurve::arc(vec![x, y]);
        if validate_curve(s, &c).is_ok() {
            return c;
        }
    }
}

/// An arc-flow instance on `S_{0,5}` (even seeds) or `S_{1,2}` (odd seeds).
pub fn hatcher_instance(seed: u64) -> (Surface, SphereMap) {
    let s = if seed.is_multiple_of(2) { catalog::s05() } else { catalog::s12() };
    let mut r = rng(seed);
    let n = r.gen_range(2..=6);
    let mut arcs: Vec<PolyCurve> = Vec::new();
    while arcs.len() < n {
        let c = random_arc(&s, &mut r);
        let fresh = arcs
            .iter()
            .all(|o| o.waypoints.iter().all(|w| c.waypoints.iter().all(|x| !s.same_point(w, x))));
        if fresh {
            arcs.push(c);
        }
    }
    let ok = disjointness(&s, &arcs);
    let dim = (seed / 2 % 2) as usize;
    let (sphere, assignment) = random_sphere_map(&ok, dim, &mut r);
    (
        s,
        SphereMap {
            sphere,
            curves: arcs,
            assignment,
        },
    )
}

/// An axis-parallel rectangle on `S_{0,5}` around a union of holes, with
/// margin `m` in `(0, 1/8)`.
fn s05_loop(shape: usize, m: &Q) -> PolyCurve {
    let lo = qr(1, 8) - m;
    let hi = qr(7, 8) + m;
    let mid_lo = qr(3, 8) + m;
    let mid_hi = qr(5, 8) - m;
    let rect = |x0: Q, y0: Q, x1: Q, y1: Q| {
        PolyCurve::closed(vec![
            Point::new(x0.clone(), y0.clone()),
            Point::new(x1.clone(), y0),
            Point::new(x1, y1.clone()),
            Point::new(x0, y1),
        ])
    };
    match shape {
        0 => rect(lo.clone(), lo, hi, mid_lo),            // holes 1, 2
        1 => rect(lo.clone(), mid_hi, hi.clone(), hi),    // holes 3, 4
        2 => rect(lo.clone(), lo.clone(), mid_lo, hi),    // holes 1, 3
        3 => rect(mid_hi, lo.clone(), hi.clone(), hi),    // holes 2, 4
        _ => PolyCurve::closed(vec![
            // holes 1, 2, 3: an L around the missing top-right quadrant
            Point::new(lo.clone(), lo.clone()),
            Point::new(hi.clone(), lo.clone()),
            Point::new(hi, mid_lo.clone()),
            Point::new(mid_lo.clone(), mid_lo.clone()),
            Point::new(mid_lo, qr(7, 8) + m),
            Point::new(lo, qr(7, 8) + m),
        ]),
    }
}

/// A disjoint pair of closed curves on the torus (even seeds) or `S_{0,5}`
/// (odd seeds). Retries until the kernel confirms disjointness.
pub fn disjoint_pair(seed: u64) -> (Surface, PolyCurve, PolyCurve) {
    let mut r = rng(seed);
    if seed.is_multiple_of(2) {
        let s = catalog::torus();
        loop {
            let (p, q_) = primitive_class(&mut r, 4);
            let a = torus_line(p, q_, &random_base(&mut r, p, q_));
            let b = torus_line(p, q_, &random_base(&mut r, p, q_));
            let a = wiggle(&s, &a, r.gen_range(0..=2), &mut r);
            if intersect_curves(&s, &a, &b).map(|x| x.is_empty()).unwrap_or(false) {
                return (s, a, b);
            }
        }
    }
    let s = catalog::s05();
    loop {
        let i = r.gen_range(0..5);
        let j = r.gen_range(0..5);
        let mi = qr(r.gen_range(1..16), 128);
        let mj = qr(r.gen_range(1..16), 128);
        let (a, b) = (s05_loop(i, &mi), s05_loop(j, &mj));
        if a == b {
            continue;
        }
        if intersect_curves(&s, &a, &b).map(|x| x.is_empty()).unwrap_or(false) {
            return (s, a, b);
        }
    }
}

/// Geometric intersection number of two torus classes.
pub fn torus_intersection_number(a: (i64, i64), b: (i64, i64)) -> i64 {
    (a.0 * b.1 - a.1 * b.0).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::{collapse_map_f, IsotopyClassKey};

    #[test]
    fn torus_lines_have_their_class() {
        let s = catalog::torus();
        let mut r = rng(7);
        for _ in 0..20 {
            let (p, q_) = primitive_class(&mut r, 5);
            let c = torus_line(p, q_, &random_base(&mut r, p, q_));
            validate_curve(&s, &c).unwrap();
            let key = collapse_map_f(&s, &c).unwrap();
            let (p, q_) = if p < 0 || (p == 0 && q_ < 0) { (-p, -q_) } else { (p, q_) };
            assert_eq!(key, IsotopyClassKey::Torus { p, q: q_ });
        }
    }

    #[test]
    fn wiggles_keep_class() {
        let s = catalog::torus();
        let mut r = rng(3);
        let c = torus_line(2, 1, &random_base(&mut r, 2, 1));
        let w = wiggle(&s, &c, 5, &mut r);
        assert!(w.waypoints.len() > c.waypoints.len());
        assert_eq!(collapse_map_f(&s, &w).unwrap(), collapse_map_f(&s, &c).unwrap());
    }

    #[test]
    fn touching_copy_touches_once() {
        let s = catalog::torus();
        let mut r = rng(11);
        let b = random_base(&mut r, 1, 2);
        let t = touching_copy(&s, 1, 2, &b, &mut r).unwrap();
        let rep = intersect_curves(&s, &t, &torus_line(1, 2, &b)).unwrap();
        assert_eq!((rep.components.len(), rep.touching_count()), (1, 1));
    }

    #[test]
    fn generators_are_deterministic() {
        assert_eq!(curve_family(5), curve_family(5));
        assert_eq!(star_instance(4).curves, star_instance(4).curves);
        assert_eq!(hatcher_instance(9).1.curves, hatcher_instance(9).1.curves);
    }

    #[test]
    fn s05_loops_are_valid() {
        let s = catalog::s05();
        for shape in 0..5 {
            let c = s05_loop(shape, &qr(1, 32));
            validate_curve(&s, &c).unwrap();
            assert!(!matches!(collapse_map_f(&s, &c).unwrap(), IsotopyClassKey::Rejected));
        }
    }
}
