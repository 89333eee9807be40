//! Exact planar primitives over arbitrary-precision rationals.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Lossy conversion, display only.
pub fn to_f64(x: &Q) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Point {
    #[serde(with = "qstr")]
    pub x: Q,
    #[serde(with = "qstr")]
    pub y: Q,
}

/// Rationals as `"p/q"` strings (integers also accepted as JSON numbers).
pub mod qstr {
    use super::Q;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(x)
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Str(String),
        Int(i64),
    }

    pub fn parse(text: &str) -> Option<Q> {
        let t = text.trim();
        let r: Q = t.parse().ok()?;
        Some(r)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        match Raw::deserialize(d)? {
            Raw::Str(s) => parse(&s).ok_or_else(|| de::Error::custom(format!("bad rational {s:?}"))),
            Raw::Int(n) => Ok(super::q(n)),
        }
    }
}

/// Points as `["p/q", "p/q"]` pairs.
pub mod pair {
    use super::{Point, Q};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct P(#[serde(with = "super::qstr")] Q, #[serde(with = "super::qstr")] Q);

    pub fn serialize<S: Serializer>(v: &[Point], s: S) -> Result<S::Ok, S::Error> {
        let raw: Vec<P> = v.iter().map(|p| P(p.x.clone(), p.y.clone())).collect();
        raw.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Point>, D::Error> {
        let raw: Vec<P> = Vec::deserialize(d)?;
        Ok(raw.into_iter().map(|P(x, y)| Point::new(x, y)).collect())
    }

    /// Nested lists of pairs.
    pub mod nested {
        use super::*;

        pub fn serialize<S: Serializer>(v: &[Vec<Point>], s: S) -> Result<S::Ok, S::Error> {
            let raw: Vec<Vec<P>> = v
                .iter()
                .map(|h| h.iter().map(|p| P(p.x.clone(), p.y.clone())).collect())
                .collect();
            raw.serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Point>>, D::Error> {
            let raw: Vec<Vec<P>> = Vec::deserialize(d)?;
            Ok(raw
                .into_iter()
                .map(|h| h.into_iter().map(|P(x, y)| Point::new(x, y)).collect())
                .collect())
        }
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Point {
    pub fn new(x: Q, y: Q) -> Self {
        Point { x, y }
    }

    pub fn int(x: i64, y: i64) -> Self {
        Point::new(q(x), q(y))
    }

    pub fn zero() -> Self {
        Point::new(Q::zero(), Q::zero())
    }

    pub fn scale(&self, s: &Q) -> Point {
        Point::new(&self.x * s, &self.y * s)
    }

    pub fn dot(&self, o: &Point) -> Q {
        &self.x * &o.x + &self.y * &o.y
    }

    pub fn cross(&self, o: &Point) -> Q {
        &self.x * &o.y - &self.y * &o.x
    }

    pub fn norm2(&self) -> Q {
        self.dot(self)
    }

    /// Counter-clockwise quarter turn.
    pub fn rot90(&self) -> Point {
        Point::new(-&self.y, self.x.clone())
    }

    pub fn norm_inf(&self) -> Q {
        let ax = self.x.abs();
        let ay = self.y.abs();
        if ax > ay {
            ax
        } else {
            ay
        }
    }

    pub fn lerp(&self, o: &Point, t: &Q) -> Point {
        self + &(o - self).scale(t)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (to_f64(&self.x), to_f64(&self.y))
    }
}

impl<'a> Add<&'a Point> for &'a Point {
    type Output = Point;
    fn add(self, o: &Point) -> Point {
        Point::new(&self.x + &o.x, &self.y + &o.y)
    }
}

impl<'a> Sub<&'a Point> for &'a Point {
    type Output = Point;
    fn sub(self, o: &Point) -> Point {
        Point::new(&self.x - &o.x, &self.y - &o.y)
    }
}

impl Neg for &Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-&self.x, -&self.y)
    }
}

impl<'a> Mul<&'a Q> for &'a Point {
    type Output = Point;
    fn mul(self, s: &Q) -> Point {
        self.scale(s)
    }
}

/// Sign of the turn a -> b -> c: +1 left, -1 right, 0 collinear.
pub fn orient(a: &Point, b: &Point, c: &Point) -> i32 {
    // unreduced fractions: denominators stay positive, no gcd needed
    let diff = |x: &Q, y: &Q| (x.numer() * y.denom() - y.numer() * x.denom(), x.denom() * y.denom());
    let (n1, d1) = diff(&b.x, &a.x);
    let (n2, d2) = diff(&c.y, &a.y);
    let (n3, d3) = diff(&b.y, &a.y);
    let (n4, d4) = diff(&c.x, &a.x);
    let v = n1 * n2 * (d3 * d4) - n3 * n4 * (d1 * d2);
    match v.sign() {
        num_bigint::Sign::Plus => 1,
        num_bigint::Sign::Minus => -1,
        num_bigint::Sign::NoSign => 0,
    }
}

pub fn sign(v: &Q) -> i32 {
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

/// Upper half plane (including the positive x axis) comes first.
fn half(d: &Point) -> u8 {
    if d.y.is_positive() || (d.y.is_zero() && d.x.is_positive()) {
        0
    } else {
        1
    }
}

/// Total order of nonzero direction vectors by angle in `[0, 2pi)`.
pub fn angle_cmp(a: &Point, b: &Point) -> Ordering {
    let (ha, hb) = (half(a), half(b));
    if ha != hb {
        return ha.cmp(&hb);
    }
    match sign(&a.cross(b)) {
        1 => Ordering::Less,
        -1 => Ordering::Greater,
        _ => Ordering::Equal,
    }
}

/// Positive multiples of each other.
pub fn same_direction(a: &Point, b: &Point) -> bool {
    a.cross(b).is_zero() && a.dot(b).is_positive()
}

/// True iff `d` lies strictly inside the counter-clockwise sweep from `from` to `to`.
pub fn in_ccw_sweep(from: &Point, to: &Point, d: &Point) -> bool {
    // rotate so that `from` is angle zero
    let rel = |v: &Point| -> Point { Point::new(from.dot(v), from.cross(v)) };
    let (t, x) = (rel(to), rel(d));
    if same_direction(&x, &Point::new(Q::one(), Q::zero())) {
        return false;
    }
    match angle_cmp(&x, &t) {
        Ordering::Less => true,
        _ => false,
    }
}

/// Result of intersecting two closed segments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SegHit {
    Empty,
    /// Point with parameters along the first and second segment.
    Point { at: Point, s: Q, t: Q },
    /// Overlap; endpoints ordered along the first segment.
    Interval {
        from: Point,
        to: Point,
        s: (Q, Q),
        t: (Q, Q),
    },
}

fn param_on(a: &Point, b: &Point, p: &Point) -> Q {
    let d = b - a;
    (p - a).dot(&d) / d.norm2()
}

/// Closed bounding boxes of the two segments are disjoint. Comparisons only,
/// so this is far cheaper than any exact predicate.
fn boxes_apart(a0: &Point, a1: &Point, b0: &Point, b1: &Point) -> bool {
    let (ax0, ax1) = if a0.x <= a1.x { (&a0.x, &a1.x) } else { (&a1.x, &a0.x) };
    let (bx0, bx1) = if b0.x <= b1.x { (&b0.x, &b1.x) } else { (&b1.x, &b0.x) };
    if ax1 < bx0 || bx1 < ax0 {
        return true;
    }
    let (ay0, ay1) = if a0.y <= a1.y { (&a0.y, &a1.y) } else { (&a1.y, &a0.y) };
    let (by0, by1) = if b0.y <= b1.y { (&b0.y, &b1.y) } else { (&b1.y, &b0.y) };
    ay1 < by0 || by1 < ay0
}

/// Exact intersection of closed segments `a0a1` and `b0b1` (both non-degenerate).
pub fn segment_intersect(a0: &Point, a1: &Point, b0: &Point, b1: &Point) -> SegHit {
    if boxes_apart(a0, a1, b0, b1) {
        return SegHit::Empty;
    }
    let r = a1 - a0;
    let s = b1 - b0;
    let denom = r.cross(&s);
    let qp = b0 - a0;
    if denom.is_zero() {
        if !qp.cross(&r).is_zero() {
            return SegHit::Empty;
        }
        // collinear: project b onto a
        let t0 = param_on(a0, a1, b0);
        let t1 = param_on(a0, a1, b1);
        let (lo, hi) = if t0 <= t1 { (t0, t1) } else { (t1, t0) };
        let lo = if lo < Q::zero() { Q::zero() } else { lo };
        let hi = if hi > Q::one() { Q::one() } else { hi };
        if lo > hi {
            return SegHit::Empty;
        }
        let p = a0.lerp(a1, &lo);
        let pq = a0.lerp(a1, &hi);
        let u0 = param_on(b0, b1, &p);
        if lo == hi {
            return SegHit::Point { at: p, s: lo, t: u0 };
        }
        let u1 = param_on(b0, b1, &pq);
        return SegHit::Interval {
            from: p,
            to: pq,
            s: (lo, hi),
            t: (u0, u1),
        };
    }
    let t = qp.cross(&s) / &denom;
    let u = qp.cross(&r) / &denom;
    let zero = Q::zero();
    let one = Q::one();
    if t < zero || t > one || u < zero || u > one {
        return SegHit::Empty;
    }
    SegHit::Point {
        at: a0.lerp(a1, &t),
        s: t,
        t: u,
    }
}

pub fn point_on_segment(p: &Point, a: &Point, b: &Point) -> bool {
    if boxes_apart(p, p, a, b) || orient(a, b, p) != 0 {
        return false;
    }
    let t = param_on(a, b, p);
    t >= Q::zero() && t <= Q::one()
}

pub fn dist2_point_segment(p: &Point, a: &Point, b: &Point) -> Q {
    let d = b - a;
    let l = d.norm2();
    if l.is_zero() {
        return (p - a).norm2();
    }
    let t = (p - a).dot(&d) / &l;
    let t = if t < Q::zero() {
        Q::zero()
    } else if t > Q::one() {
        Q::one()
    } else {
        t
    };
    (p - &a.lerp(b, &t)).norm2()
}

pub fn dist2_segments(a0: &Point, a1: &Point, b0: &Point, b1: &Point) -> Q {
    if !matches!(segment_intersect(a0, a1, b0, b1), SegHit::Empty) {
        return Q::zero();
    }
    let c = [
        dist2_point_segment(a0, b0, b1),
        dist2_point_segment(a1, b0, b1),
        dist2_point_segment(b0, a0, a1),
        dist2_point_segment(b1, a0, a1),
    ];
    c.into_iter().min().unwrap()
}

/// Twice the signed area of a closed polygon.
pub fn signed_area2(pts: &[Point]) -> Q {
    let n = pts.len();
    let mut acc = Q::zero();
    for i in 0..n {
        acc += pts[i].cross(&pts[(i + 1) % n]);
    }
    acc
}

/// Winding number of a closed polygon around `p`; `None` if `p` lies on it.
pub fn winding_number(poly: &[Point], p: &Point) -> Option<i64> {
    let n = poly.len();
    let mut w = 0i64;
    for i in 0..n {
        let a = &poly[i];
        let b = &poly[(i + 1) % n];
        if point_on_segment(p, a, b) {
            return None;
        }
        if a.y <= p.y {
            if b.y > p.y && orient(a, b, p) > 0 {
                w += 1;
            }
        } else if b.y <= p.y && orient(a, b, p) < 0 {
            w -= 1;
        }
    }
    Some(w)
}

/// Strictly inside a convex counter-clockwise polygon or on its boundary.
pub fn in_convex_closed(poly: &[Point], p: &Point) -> bool {
    let n = poly.len();
    (0..n).all(|i| orient(&poly[i], &poly[(i + 1) % n], p) >= 0)
}

/// Orientation-preserving similarity `z -> lambda * z + shift` with complex `lambda`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Similarity {
    pub lambda: Point,
    pub shift: Point,
}

fn cmul(a: &Point, b: &Point) -> Point {
    Point::new(&a.x * &b.x - &a.y * &b.y, &a.x * &b.y + &a.y * &b.x)
}

fn cdiv(a: &Point, b: &Point) -> Point {
    let n = b.norm2();
    let conj = Point::new(b.x.clone(), -&b.y);
    cmul(a, &conj).scale(&(Q::one() / n))
}

impl Similarity {
    pub fn identity() -> Self {
        Similarity {
            lambda: Point::new(Q::one(), Q::zero()),
            shift: Point::zero(),
        }
    }

    pub fn translation(v: Point) -> Self {
        Similarity {
            lambda: Point::new(Q::one(), Q::zero()),
            shift: v,
        }
    }

    /// The similarity sending `a0 -> b0` and `a1 -> b1`.
    pub fn from_pairs(a0: &Point, a1: &Point, b0: &Point, b1: &Point) -> Self {
        let lambda = cdiv(&(b1 - b0), &(a1 - a0));
        let shift = b0 - &cmul(&lambda, a0);
        Similarity { lambda, shift }
    }

    pub fn apply(&self, p: &Point) -> Point {
        &cmul(&self.lambda, p) + &self.shift
    }

    pub fn apply_linear(&self, d: &Point) -> Point {
        cmul(&self.lambda, d)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Similarity) -> Similarity {
        Similarity {
            lambda: cmul(&self.lambda, &other.lambda),
            shift: self.apply(&other.shift),
        }
    }

    pub fn inverse(&self) -> Similarity {
        let inv = cdiv(&Point::new(Q::one(), Q::zero()), &self.lambda);
        Similarity {
            shift: -&cmul(&inv, &self.shift),
            lambda: inv,
        }
    }

    pub fn is_translation(&self) -> bool {
        self.lambda == Point::new(Q::one(), Q::zero())
    }

    pub fn is_identity(&self) -> bool {
        self.is_translation() && self.shift.is_zero()
    }
}

/// Intersection of lines `p + s*d` and `q + t*e`; `None` if parallel.
pub fn line_intersection(p: &Point, d: &Point, q0: &Point, e: &Point) -> Option<Point> {
    let den = d.cross(e);
    if den.is_zero() {
        return None;
    }
    let s = (q0 - p).cross(e) / den;
    Some(p + &d.scale(&s))
}

/// Largest power of two `2^-k` (k >= 0) whose square is at most `bound2`.
pub fn pow2_below_sqrt(bound2: &Q) -> Q {
    let mut d = Q::one();
    if !bound2.is_positive() {
        return d;
    }
    let two = q(2);
    while &d * &d > *bound2 {
        d /= &two;
    }
    d
}
