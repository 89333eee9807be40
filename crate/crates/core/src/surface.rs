//! Compact orientable surfaces modelled as one convex fundamental polygon
//! with edge identifications and polygonal holes.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, SurfaceError};
use crate::geom::{
    in_convex_closed, orient, point_on_segment, segment_intersect, signed_area2, winding_number,
    Point, SegHit, Similarity, Q,
};

/// Input to [`build_surface`]. Edge `i` runs from `polygon[i]` to `polygon[i + 1]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceSpec {
    pub genus: u32,
    pub boundary: u32,
    #[serde(with = "crate::geom::pair")]
    pub polygon: Vec<Point>,
    /// `(i, j, flag)`; flag `-1` glues edge `i` to edge `j` with opposite traversal.
    pub identifications: Vec<(usize, usize, i8)>,
    #[serde(with = "crate::geom::pair::nested", default)]
    pub holes: Vec<Vec<Point>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Locus {
    Interior,
    PolygonEdge {
        edge: usize,
        #[serde(with = "crate::geom::qstr")]
        t: Q,
    },
    HoleEdge {
        hole: usize,
        edge: usize,
        #[serde(with = "crate::geom::qstr")]
        t: Q,
    },
}

/// A point of the surface given by a chart representative.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfacePoint {
    pub coords: Point,
    pub locus: Locus,
}

/// How curves on the surface lift to the plane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FlatModel {
    /// No identifications: the polygon minus holes is a planar domain.
    Planar,
    /// All gluings are translations generating a rank-2 lattice (genus one).
    Torus { basis: [Point; 2] },
    /// Anything else; only local operations are available.
    General,
}

#[derive(Clone, Debug)]
pub struct Surface {
    genus: u32,
    boundary: u32,
    polygon: Vec<Point>,
    identifications: Vec<(usize, usize, i8)>,
    partner: Vec<Option<usize>>,
    glue: Vec<Option<Similarity>>,
    holes: Vec<Vec<Point>>,
    hole_probes: Vec<Point>,
    /// Boundary polygon edges grouped into boundary components.
    outer_components: Vec<Vec<usize>>,
    euler: i64,
    flat: FlatModel,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, i: usize) -> usize {
        let mut r = i;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut c = i;
        while self.0[c] != r {
            let next = self.0[c];
            self.0[c] = r;
            c = next;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

fn is_strictly_convex_ccw(poly: &[Point]) -> bool {
    let n = poly.len();
    n >= 3 && (0..n).all(|i| orient(&poly[i], &poly[(i + 1) % n], &poly[(i + 2) % n]) > 0)
}

fn is_simple_polygon(poly: &[Point]) -> bool {
    let n = poly.len();
    if n < 3 {
        return false;
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if poly[i] == poly[j] {
                return false;
            }
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            let hit = segment_intersect(
                &poly[i],
                &poly[(i + 1) % n],
                &poly[j],
                &poly[(j + 1) % n],
            );
            match hit {
                SegHit::Empty => {}
                SegHit::Point { .. } if adjacent => {}
                _ => return false,
            }
        }
    }
    !signed_area2(poly).is_zero()
}

/// A point strictly inside a simple polygon (centroid of an ear).
fn interior_probe(poly: &[Point]) -> Point {
    let n = poly.len();
    let ccw = signed_area2(poly).is_positive();
    let turn = if ccw { 1 } else { -1 };
    for i in 0..n {
        let a = &poly[(i + n - 1) % n];
        let b = &poly[i];
        let c = &poly[(i + 1) % n];
        if orient(a, b, c) != turn {
            continue;
        }
        let tri = if ccw {
            vec![a.clone(), b.clone(), c.clone()]
        } else {
            vec![c.clone(), b.clone(), a.clone()]
        };
        let blocked = poly
            .iter()
            .enumerate()
            .any(|(k, p)| k != i && k != (i + n - 1) % n && k != (i + 1) % n && in_convex_closed(&tri, p));
        if !blocked {
            let three = Q::from_integer(3.into());
            return Point::new(
                (&a.x + &b.x + &c.x) / &three,
                (&a.y + &b.y + &c.y) / &three,
            );
        }
    }
    // every simple polygon has an ear
    unreachable!("simple polygon without an ear")
}

/// Validate a surface description and derive its cell structure.
pub fn build_surface(spec: &SurfaceSpec) -> Result<Surface> {
    let poly = &spec.polygon;
    if !is_strictly_convex_ccw(poly) {
        return Err(SurfaceError::BadPolygon.into());
    }
    let n = poly.len();
    let mut partner = vec![None; n];
    for &(i, j, flag) in &spec.identifications {
        for e in [i, j] {
            if e >= n {
                return Err(SurfaceError::EdgeOutOfRange(e).into());
            }
        }
        if i == j || partner[i].is_some() {
            return Err(SurfaceError::NonInvolutive(i).into());
        }
        if partner[j].is_some() {
            return Err(SurfaceError::NonInvolutive(j).into());
        }
        if flag != -1 {
            return Err(SurfaceError::NonOrientable(i, j).into());
        }
        partner[i] = Some(j);
        partner[j] = Some(i);
    }

    let mut holes = Vec::with_capacity(spec.holes.len());
    for (k, h) in spec.holes.iter().enumerate() {
        if !is_simple_polygon(h) {
            return Err(SurfaceError::BadHole(k).into());
        }
        let strictly_inside = h
            .iter()
            .all(|p| (0..n).all(|i| orient(&poly[i], &poly[(i + 1) % n], p) > 0));
        if !strictly_inside {
            return Err(SurfaceError::HoleOutside(k).into());
        }
        let mut h = h.clone();
        if signed_area2(&h).is_negative() {
            h.reverse();
        }
        holes.push(h);
    }
    let hole_probes: Vec<Point> = holes.iter().map(|h| interior_probe(h)).collect();
    for a in 0..holes.len() {
        for b in (a + 1)..holes.len() {
            let (ha, hb) = (&holes[a], &holes[b]);
            let edges_meet = (0..ha.len()).any(|i| {
                (0..hb.len()).any(|j| {
                    !matches!(
                        segment_intersect(
                            &ha[i],
                            &ha[(i + 1) % ha.len()],
                            &hb[j],
                            &hb[(j + 1) % hb.len()]
                        ),
                        SegHit::Empty
                    )
                })
            });
            let nested = (winding_number(ha, &hb[0]) != Some(0))
                || (winding_number(hb, &ha[0]) != Some(0));
            if edges_meet || nested {
                return Err(SurfaceError::OverlappingHoles(a, b).into());
            }
        }
    }

    // corners: corner i starts edge i
    let mut uf = UnionFind::new(n);
    for i in 0..n {
        if let Some(j) = partner[i] {
            // start of i ~ end of j, end of i ~ start of j
            uf.union(i, (j + 1) % n);
            uf.union((i + 1) % n, j);
        }
    }
    let vertex_classes = (0..n).filter(|&i| uf.find(i) == i).count() as i64;
    let pairs = partner.iter().flatten().count() as i64 / 2;
    let boundary_edges: Vec<usize> = (0..n).filter(|&i| partner[i].is_none()).collect();
    let edge_classes = pairs + boundary_edges.len() as i64;
    let h = holes.len() as i64;
    let euler = vertex_classes - edge_classes + 1 - h;

    // boundary components among polygon edges: connect boundary edges sharing a corner class
    let mut buf = UnionFind::new(n);
    for &e in &boundary_edges {
        let (s, t) = (uf.find(e), uf.find((e + 1) % n));
        buf.union(s, t);
    }
    let mut comps: Vec<(usize, Vec<usize>)> = Vec::new();
    for &e in &boundary_edges {
        let root = buf.find(uf.find(e));
        match comps.iter_mut().find(|(r, _)| *r == root) {
            Some((_, v)) => v.push(e),
            None => comps.push((root, vec![e])),
        }
    }
    let outer_components: Vec<Vec<usize>> = comps.into_iter().map(|(_, v)| v).collect();
    let computed_b = h + outer_components.len() as i64;
    if computed_b != spec.boundary as i64 {
        return Err(SurfaceError::BoundaryMismatch {
            computed: computed_b,
            declared: spec.boundary as i64,
        }
        .into());
    }
    let expected = 2 - 2 * spec.genus as i64 - spec.boundary as i64;
    if euler != expected {
        return Err(SurfaceError::EulerMismatch {
            computed: euler,
            expected,
        }
        .into());
    }

    let glue: Vec<Option<Similarity>> = (0..n)
        .map(|i| {
            partner[i].map(|j| {
                // neighbour chart across edge i: its edge j lands on edge i reversed
                Similarity::from_pairs(&poly[j], &poly[(j + 1) % n], &poly[(i + 1) % n], &poly[i])
            })
        })
        .collect();

    let flat = if pairs == 0 {
        FlatModel::Planar
    } else if spec.genus == 1 && glue.iter().flatten().all(|g| g.is_translation()) {
        torus_basis(&glue).map_or(FlatModel::General, |basis| FlatModel::Torus { basis })
    } else {
        FlatModel::General
    };

    Ok(Surface {
        genus: spec.genus,
        boundary: spec.boundary,
        polygon: poly.clone(),
        identifications: spec.identifications.clone(),
        partner,
        glue,
        holes,
        hole_probes,
        outer_components,
        euler,
        flat,
    })
}

fn torus_basis(glue: &[Option<Similarity>]) -> Option<[Point; 2]> {
    let mut vecs: Vec<Point> = Vec::new();
    for g in glue.iter().flatten() {
        let mut v = g.shift.clone();
        if v.x.is_negative() || (v.x.is_zero() && v.y.is_negative()) {
            v = -&v;
        }
        if !vecs.contains(&v) {
            vecs.push(v);
        }
    }
    // first vector: the most horizontal one
    vecs.sort_by(|a, b| {
        let ka = &a.x * &a.x * b.norm2();
        let kb = &b.x * &b.x * a.norm2();
        kb.cmp(&ka).then_with(|| a.cmp(b))
    });
    let first = vecs.first()?.clone();
    let second = vecs.iter().find(|v| !first.cross(v).is_zero())?.clone();
    let det = first.cross(&second);
    // every other translation must be an integer combination
    for v in &vecs {
        let a = v.cross(&second) / &det;
        let b = first.cross(v) / &det;
        if !a.is_integer() || !b.is_integer() {
            return None;
        }
    }
    Some([first, second])
}

impl Surface {
    /// A specification that rebuilds this surface.
    pub fn spec(&self) -> SurfaceSpec {
        SurfaceSpec {
            genus: self.genus,
            boundary: self.boundary,
            polygon: self.polygon.clone(),
            identifications: self.identifications.clone(),
            holes: self.holes.clone(),
        }
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn boundary_count(&self) -> u32 {
        self.boundary
    }

    pub fn polygon(&self) -> &[Point] {
        &self.polygon
    }

    pub fn identifications(&self) -> &[(usize, usize, i8)] {
        &self.identifications
    }

    pub fn holes(&self) -> &[Vec<Point>] {
        &self.holes
    }

    pub fn hole_probes(&self) -> &[Point] {
        &self.hole_probes
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.euler
    }

    pub fn flat_model(&self) -> &FlatModel {
        &self.flat
    }

    pub fn partner(&self, edge: usize) -> Option<usize> {
        self.partner[edge]
    }

    pub fn edge_count(&self) -> usize {
        self.polygon.len()
    }

    pub fn edge(&self, i: usize) -> (&Point, &Point) {
        let n = self.polygon.len();
        (&self.polygon[i], &self.polygon[(i + 1) % n])
    }

    pub fn hole_edge(&self, hole: usize, i: usize) -> (&Point, &Point) {
        let h = &self.holes[hole];
        (&h[i], &h[(i + 1) % h.len()])
    }

    /// Similarity carrying the neighbouring chart across `edge` into this chart.
    pub fn glue_map(&self, edge: usize) -> Option<&Similarity> {
        self.glue[edge].as_ref()
    }

    /// Number of boundary components contributed by declared-boundary polygon edges.
    pub fn outer_component_count(&self) -> usize {
        self.outer_components.len()
    }

    /// Boundary component ids: outer components first, then holes in order.
    pub fn hole_component_id(&self, hole: usize) -> usize {
        self.outer_components.len() + hole
    }

    pub fn is_corner(&self, p: &Point) -> bool {
        self.polygon.contains(p) || self.holes.iter().any(|h| h.contains(p))
    }

    /// Locate a point of the closed polygon; `None` if it is outside the
    /// surface or a corner.
    pub fn locate(&self, p: &Point) -> Option<Locus> {
        if self.is_corner(p) || !in_convex_closed(&self.polygon, p) {
            return None;
        }
        let n = self.polygon.len();
        for i in 0..n {
            let (a, b) = self.edge(i);
            if orient(a, b, p) == 0 {
                let d = b - a;
                return Some(Locus::PolygonEdge {
                    edge: i,
                    t: (p - a).dot(&d) / d.norm2(),
                });
            }
        }
        for (k, h) in self.holes.iter().enumerate() {
            for i in 0..h.len() {
                let (a, b) = (&h[i], &h[(i + 1) % h.len()]);
                if point_on_segment(p, a, b) {
                    let d = b - a;
                    return Some(Locus::HoleEdge {
                        hole: k,
                        edge: i,
                        t: (p - a).dot(&d) / d.norm2(),
                    });
                }
            }
            if winding_number(h, p).unwrap_or(0) != 0 {
                return None;
            }
        }
        Some(Locus::Interior)
    }

    pub fn surface_point(&self, p: &Point) -> Option<SurfacePoint> {
        self.locate(p).map(|locus| SurfacePoint {
            coords: p.clone(),
            locus,
        })
    }

    /// Index of the polygon edge containing `p` in its relative interior.
    pub fn polygon_edge_of(&self, p: &Point) -> Option<usize> {
        if self.polygon.contains(p) {
            return None;
        }
        (0..self.polygon.len()).find(|&i| {
            let (a, b) = self.edge(i);
            point_on_segment(p, a, b)
        })
    }

    /// Image of a point of edge `edge` on the partner edge.
    pub fn glue_point(&self, edge: usize, p: &Point) -> Option<Point> {
        let j = self.partner[edge]?;
        // the partner's glue map sends our chart into its chart
        Some(self.glue[j].as_ref()?.apply(p))
    }

    /// The other chart representative of a point on an identified edge.
    pub fn twin(&self, p: &Point) -> Option<Point> {
        let e = self.polygon_edge_of(p)?;
        self.glue_point(e, p)
    }

    /// Both representatives denote the same surface point.
    pub fn same_point(&self, a: &Point, b: &Point) -> bool {
        a == b || self.twin(a).as_ref() == Some(b)
    }

    /// Canonical representative: on an identified edge, the copy on the
    /// lower-indexed edge.
    pub fn canonical(&self, p: &Point) -> Point {
        if let Some(e) = self.polygon_edge_of(p) {
            if let Some(j) = self.partner[e] {
                if j < e {
                    return self.glue_point(e, p).expect("paired edge");
                }
            }
        }
        p.clone()
    }

    /// Carry a direction at chart point `from` to the chart of `to`, where
    /// both represent the same surface point.
    pub fn transport_dir(&self, from: &Point, to: &Point, d: &Point) -> Point {
        if from == to {
            return d.clone();
        }
        let e = self
            .polygon_edge_of(to)
            .expect("transport between twins requires an edge point");
        self.glue[e]
            .as_ref()
            .expect("paired edge")
            .apply_linear(d)
    }

    /// Boundary component containing `p`, if `p` lies on the boundary.
    pub fn boundary_component(&self, p: &Point) -> Option<usize> {
        match self.locate(p)? {
            Locus::HoleEdge { hole, .. } => Some(self.hole_component_id(hole)),
            Locus::PolygonEdge { edge, .. } if self.partner[edge].is_none() => self
                .outer_components
                .iter()
                .position(|c| c.contains(&edge)),
            _ => None,
        }
    }

    pub fn is_boundary_point(&self, p: &Point) -> bool {
        self.boundary_component(p).is_some()
    }

    /// The boundary edge (as a chart segment) containing `p`.
    pub fn boundary_edge_at(&self, p: &Point) -> Option<(Point, Point)> {
        match self.locate(p)? {
            Locus::HoleEdge { hole, edge, .. } => {
                let (a, b) = self.hole_edge(hole, edge);
                Some((a.clone(), b.clone()))
            }
            Locus::PolygonEdge { edge, .. } if self.partner[edge].is_none() => {
                let (a, b) = self.edge(edge);
                Some((a.clone(), b.clone()))
            }
            _ => None,
        }
    }

    /// Walk a boundary component as a closed polygon in chart coordinates,
    /// oriented counter-clockwise in the plane.
    pub fn boundary_loop(&self, component: usize) -> Option<Vec<Point>> {
        let outer = self.outer_components.len();
        if component >= outer {
            return self.holes.get(component - outer).cloned();
        }
        // outer components are only walkable when they form the whole polygon
        if self.outer_components[component].len() == self.polygon.len() {
            Some(self.polygon.clone())
        } else {
            None
        }
    }

    /// True for surfaces on which the arc flow is defined.
    pub fn admits_arc_flow(&self) -> bool {
        let (g, b) = (self.genus, self.boundary);
        b >= 1 && !matches!((g, b), (0, 1) | (0, 2) | (0, 3) | (0, 4) | (1, 1))
    }

    /// Positive lower bound for distances from the interior of the
    /// polygon to cone points.
    pub fn corners(&self) -> impl Iterator<Item = &Point> {
        self.polygon.iter().chain(self.holes.iter().flatten())
    }

    /// Fold a polyline drawn in the plane back onto the surface.
    ///
    /// `start_chart` maps polygon coordinates to the plane for the chart
    /// containing `pts[0]`. Closed curves pass the closing point explicitly.
    pub fn fold(&self, pts: &[Point], start_chart: &Similarity, closed: bool) -> Result<Vec<Point>> {
        let n = self.polygon.len();
        let mut chart = start_chart.clone();
        let mut inv = chart.inverse();
        let mut cur = inv.apply(&pts[0]);
        if !in_convex_closed(&self.polygon, &cur) {
            return Err(Error::Construction("fold start lies outside its chart".into()));
        }
        let mut out = vec![cur.clone()];
        for target in &pts[1..] {
            let mut guard = 0usize;
            loop {
                guard += 1;
                if guard > 10_000 {
                    return Err(Error::Internal("fold does not terminate".into()));
                }
                let qv = inv.apply(target);
                let mut best: Option<(Q, Vec<usize>)> = None;
                for i in 0..n {
                    let (a, b) = self.edge(i);
                    let d = b - a;
                    let sc = d.cross(&(&cur - a));
                    let sq = d.cross(&(&qv - a));
                    if sq.is_negative() && !sc.is_negative() {
                        let t = &sc / (&sc - &sq);
                        match &mut best {
                            Some((bt, es)) if *bt == t => es.push(i),
                            Some((bt, _)) if *bt < t => {}
                            _ => best = Some((t, vec![i])),
                        }
                    }
                }
                let Some((t, edges)) = best else {
                    out.push(qv.clone());
                    cur = qv;
                    break;
                };
                let x = cur.lerp(&qv, &t);
                if edges.len() > 1 || self.polygon.contains(&x) {
                    return Err(Error::Construction("path passes through a polygon corner".into()));
                }
                let e = edges[0];
                let Some(g) = self.glue[e].as_ref() else {
                    return Err(Error::Construction("path leaves the surface through a boundary edge".into()));
                };
                if x != cur {
                    out.push(x.clone());
                }
                let twin = self.glue_point(e, &x).expect("paired edge");
                out.push(twin.clone());
                chart = chart.compose(g);
                inv = chart.inverse();
                cur = twin;
            }
        }
        out.dedup();
        if closed {
            let first = out[0].clone();
            let last = out.last().unwrap().clone();
            if last == first {
                out.pop();
            } else if !self.same_point(&last, &first) {
                return Err(Error::Construction("folded path does not close".into()));
            }
        }
        Ok(out)
    }
}

/// Ready-made surfaces used throughout the tests and the CLI.
pub mod catalog {
    use super::*;
    use crate::geom::qr;

    fn unit_square() -> Vec<Point> {
        vec![Point::int(0, 0), Point::int(1, 0), Point::int(1, 1), Point::int(0, 1)]
    }

    fn square_hole(x: Q, y: Q, size: Q) -> Vec<Point> {
        vec![
            Point::new(x.clone(), y.clone()),
            Point::new(&x + &size, y.clone()),
            Point::new(&x + &size, &y + &size),
            Point::new(x, &y + &size),
        ]
    }

    pub fn torus_spec() -> SurfaceSpec {
        SurfaceSpec {
            genus: 1,
            boundary: 0,
            polygon: unit_square(),
            identifications: vec![(1, 3, -1), (0, 2, -1)],
            holes: vec![],
        }
    }

    /// Unit square torus: left/right and bottom/top identified.
    pub fn torus() -> Surface {
        build_surface(&torus_spec()).expect("torus")
    }

    pub fn sphere_with_holes_spec(holes: usize) -> SurfaceSpec {
        let slots = [
            (qr(1, 8), qr(1, 8)),
            (qr(5, 8), qr(1, 8)),
            (qr(1, 8), qr(5, 8)),
            (qr(5, 8), qr(5, 8)),
        ];
        assert!(holes <= slots.len());
        SurfaceSpec {
            genus: 0,
            boundary: holes as u32 + 1,
            polygon: unit_square(),
            identifications: vec![],
            holes: slots[..holes]
                .iter()
                .map(|(x, y)| square_hole(x.clone(), y.clone(), qr(1, 4)))
                .collect(),
        }
    }

    /// Unit square with all edges boundary and `holes` square holes.
    pub fn sphere_with_holes(holes: usize) -> Surface {
        build_surface(&sphere_with_holes_spec(holes)).expect("planar surface")
    }

    /// `S_{0,5}`: the outer square plus four holes.
    pub fn s05() -> Surface {
        sphere_with_holes(4)
    }

    pub fn torus_with_holes_spec(holes: usize) -> SurfaceSpec {
        let slots = [
            (qr(1, 8), qr(1, 8)),
            (qr(5, 8), qr(5, 8)),
            (qr(5, 8), qr(1, 8)),
            (qr(1, 8), qr(5, 8)),
        ];
        SurfaceSpec {
            genus: 1,
            boundary: holes as u32,
            polygon: unit_square(),
            identifications: vec![(1, 3, -1), (0, 2, -1)],
            holes: slots[..holes]
                .iter()
                .map(|(x, y)| square_hole(x.clone(), y.clone(), qr(1, 4)))
                .collect(),
        }
    }

    pub fn torus_with_holes(holes: usize) -> Surface {
        build_surface(&torus_with_holes_spec(holes)).expect("holed torus")
    }

    /// `S_{1,2}`.
    pub fn s12() -> Surface {
        torus_with_holes(2)
    }

    pub fn genus_two_spec() -> SurfaceSpec {
        SurfaceSpec {
            genus: 2,
            boundary: 0,
            polygon: vec![
                Point::int(1, 0),
                Point::int(2, 0),
                Point::int(3, 1),
                Point::int(3, 2),
                Point::int(2, 3),
                Point::int(1, 3),
                Point::int(0, 2),
                Point::int(0, 1),
            ],
            identifications: vec![(0, 2, -1), (1, 3, -1), (4, 6, -1), (5, 7, -1)],
            holes: vec![],
        }
    }

    /// Octagon with the word `a b a^-1 b^-1 c d c^-1 d^-1`.
    pub fn genus_two() -> Surface {
        build_surface(&genus_two_spec()).expect("genus two")
    }
}

#[cfg(test)]
mod tests {
    use super::catalog::*;
    use super::*;
    use crate::geom::{q, qr};

    #[test]
    fn torus_has_euler_zero() {
        let t = torus();
        assert_eq!(t.euler_characteristic(), 0);
        assert!(matches!(t.flat_model(), FlatModel::Torus { .. }));
        if let FlatModel::Torus { basis } = t.flat_model() {
            assert_eq!(basis[0], Point::int(1, 0));
            assert_eq!(basis[1], Point::int(0, 1));
        }
    }

    #[test]
    fn square_with_four_holes_is_s05() {
        let s = s05();
        assert_eq!(s.euler_characteristic(), -3);
        assert_eq!(s.boundary_count(), 5);
        assert_eq!(s.flat_model(), &FlatModel::Planar);
    }

    #[test]
    fn octagon_is_genus_two() {
        let s = genus_two();
        assert_eq!(s.euler_characteristic(), -2);
        assert_eq!(s.flat_model(), &FlatModel::General);
    }

    #[test]
    fn rejects_double_pairing() {
        let mut spec = torus_spec();
        spec.identifications.push((1, 0, -1));
        assert!(matches!(
            build_surface(&spec),
            Err(Error::Surface(SurfaceError::NonInvolutive(_)))
        ));
    }

    #[test]
    fn rejects_euler_mismatch() {
        let mut spec = torus_spec();
        spec.genus = 2;
        assert!(matches!(
            build_surface(&spec),
            Err(Error::Surface(SurfaceError::EulerMismatch { .. }))
        ));
    }

    #[test]
    fn rejects_overlapping_holes() {
        let mut spec = sphere_with_holes_spec(2);
        spec.holes[1] = spec.holes[0]
            .iter()
            .map(|p| Point::new(&p.x + &qr(1, 8), p.y.clone()))
            .collect();
        assert!(matches!(
            build_surface(&spec),
            Err(Error::Surface(SurfaceError::OverlappingHoles(0, 1)))
        ));
    }

    #[test]
    fn gluing_is_an_involution_on_points() {
        let t = genus_two();
        for e in 0..t.edge_count() {
            let (a, b) = t.edge(e);
            let p = a.lerp(b, &qr(2, 7));
            let img = t.glue_point(e, &p).unwrap();
            assert_eq!(t.glue_point(t.partner(e).unwrap(), &img).unwrap(), p);
            assert_eq!(t.canonical(&p), t.canonical(&img));
        }
    }

    #[test]
    fn fold_straight_torus_line() {
        let t = torus();
        let pts = vec![
            Point::new(qr(1, 4), qr(1, 2)),
            Point::new(qr(1, 4), qr(3, 2)),
        ];
        let w = t.fold(&pts, &Similarity::identity(), true).unwrap();
        assert_eq!(
            w,
            vec![
                Point::new(qr(1, 4), qr(1, 2)),
                Point::new(qr(1, 4), q(1)),
                Point::new(qr(1, 4), q(0)),
            ]
        );
    }

    #[test]
    fn fold_rejects_corner() {
        let t = torus();
        let pts = vec![Point::new(qr(1, 2), qr(1, 2)), Point::new(qr(3, 2), qr(3, 2))];
        assert!(t.fold(&pts, &Similarity::identity(), true).is_err());
    }
}
