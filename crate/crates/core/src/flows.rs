//! Certificate-producing flows: sphere maps into a fibre flowed into a
//! vertex star by bigon surgery, and arc families flowed into the star of
//! a base arc by first-intersection surgery. Certificates are re-checked by
//! an independent verifier.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::complex::{CombinatorialSphere, ComplexFile, Handle, SimplicialComplex};
use crate::curve::{geometry, Geometry, PolyCurve, Seg};
use crate::error::{Error, Result};
use crate::geom::{point_on_segment, qr, Q};
use crate::kernel::{curves_meet, intersect_geometries};
use crate::moves::{arc_surgery_step, bigon_surgery, find_innermost_bigon, within_neighbourhood};
use crate::perturb::{perturb, pushoff_family};
use crate::surface::{build_surface, Surface, SurfaceSpec};
use crate::topology::{collapse_map_f, is_essential, IsotopyClassKey};

/// The part of the fine complex on curves whose class lies in `a`.
pub fn fiber_subcomplex(s: &Surface, curves: &[PolyCurve], a: &[IsotopyClassKey]) -> Result<SimplicialComplex> {
    let keys: Vec<IsotopyClassKey> = curves.iter().map(|c| collapse_map_f(s, c)).collect::<Result<_>>()?;
    if let Some(i) = keys.iter().position(|k| *k == IsotopyClassKey::Rejected) {
        return Err(Error::Contract(format!("curve {i} is inessential or peripheral")));
    }
    if a.contains(&IsotopyClassKey::Rejected) {
        return Err(Error::Contract("a simplex of classes cannot contain the rejected key".into()));
    }
    let geos: Vec<Geometry> = curves.iter().map(|c| geometry(s, c)).collect::<Result<_>>()?;
    // classes in `a` must be realised disjointly by the supplied curves
    for (x, kx) in a.iter().enumerate() {
        for ky in &a[x + 1..] {
            let ix: Vec<usize> = (0..curves.len()).filter(|&i| keys[i] == *kx).collect();
            let iy: Vec<usize> = (0..curves.len()).filter(|&i| keys[i] == *ky).collect();
            if ix.is_empty() || iy.is_empty() {
                continue;
            }
            let witnessed = ix
                .iter()
                .any(|&i| iy.iter().any(|&j| !curves_meet(s, &geos[i], &geos[j])));
            if !witnessed {
                return Err(Error::Contract(format!(
                    "classes {kx} and {ky} have no disjoint representatives"
                )));
            }
        }
    }
    let keep: BTreeSet<Handle> = (0..curves.len()).filter(|&i| a.contains(&keys[i])).collect();
    let full = SimplicialComplex::flag(curves.len(), |i, j| {
        keep.contains(&i) && keep.contains(&j) && !curves_meet(s, &geos[i], &geos[j])
    });
    Ok(full.full_subcomplex(&keep))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepReason {
    Pushoff,
    BigonSurgery,
    ArcSurgery,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FlowKind {
    StarFlow,
    HatcherFlow,
}

/// A fact the verifier re-checks with the kernel.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Witness {
    /// The image vertex set before the step.
    Image { before: Vec<Handle> },
    Disjoint { a: Handle, b: Handle },
    /// `a` and `b` meet in exactly `count` crossings and nothing else.
    CrossingCount { a: Handle, b: Handle, count: usize },
    /// Total crossings of the image with the star centre after the step.
    CenterTotal { total: usize },
    /// Every waypoint of `handle` is within `radius` of the replaced curve
    /// together with the initial piece of the base arc.
    Near {
        handle: Handle,
        #[serde(with = "crate::geom::qstr")]
        radius: Q,
    },
    Essential { handle: Handle },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlowStep {
    pub replace: Handle,
    pub handle: Handle,
    pub with: PolyCurve,
    pub reason: StepReason,
    /// Steps of one multi-intersection share a group.
    pub group: usize,
    pub witnesses: Vec<Witness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SphereFile {
    pub dim: usize,
    pub complex: ComplexFile,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlowCertificate {
    pub kind: FlowKind,
    pub surface: SurfaceSpec,
    pub sphere: SphereFile,
    /// Source vertex to initial handle.
    pub map: BTreeMap<Handle, Handle>,
    /// Curves for the initial handles (and the base arc, if any).
    pub curves: Vec<PolyCurve>,
    pub initial: Vec<Handle>,
    pub steps: Vec<FlowStep>,
    #[serde(rename = "final")]
    pub final_set: Vec<Handle>,
    pub star_center: Handle,
}

/// A simplicial map from a sphere into the fine complex on `curves`.
#[derive(Clone, Debug)]
pub struct SphereMap {
    pub sphere: CombinatorialSphere,
    pub curves: Vec<PolyCurve>,
    pub assignment: BTreeMap<Handle, Handle>,
}

fn image_set(assignment: &BTreeMap<Handle, Handle>) -> Vec<Handle> {
    let set: BTreeSet<Handle> = assignment.values().copied().collect();
    set.into_iter().collect()
}

/// Kernel results memoised per handle pair.
struct Table<'a> {
    s: &'a Surface,
    curves: Vec<PolyCurve>,
    geos: Vec<Geometry>,
    memo: HashMap<(Handle, Handle), (bool, bool, usize)>,
}

impl<'a> Table<'a> {
    fn new(s: &'a Surface, curves: &[PolyCurve]) -> Result<Self> {
        let geos = curves.iter().map(|c| geometry(s, c)).collect::<Result<_>>()?;
        Ok(Table {
            s,
            curves: curves.to_vec(),
            geos,
            memo: HashMap::new(),
        })
    }

    fn push(&mut self, c: PolyCurve) -> Result<Handle> {
        self.geos.push(geometry(self.s, &c)?);
        self.curves.push(c);
        Ok(self.curves.len() - 1)
    }

    /// (meets, all components crossing, crossing count)
    fn pair(&mut self, a: Handle, b: Handle) -> (bool, bool, usize) {
        if a == b {
            return (true, false, 0);
        }
        let key = (a.min(b), a.max(b));
        if let Some(r) = self.memo.get(&key) {
            return *r;
        }
        let r = intersect_geometries(self.s, &self.geos[a], &self.geos[b]);
        let out = (!r.is_empty(), r.all_crossing(), r.crossing_count);
        self.memo.insert(key, out);
        out
    }

    fn disjoint(&mut self, a: Handle, b: Handle) -> bool {
        a != b && !self.pair(a, b).0
    }

    /// Pairwise disjoint, with repeated handles allowed.
    fn is_simplex(&mut self, hs: &[Handle]) -> bool {
        let set: Vec<Handle> = hs.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
        for i in 0..set.len() {
            for j in (i + 1)..set.len() {
                if !self.disjoint(set[i], set[j]) {
                    return false;
                }
            }
        }
        true
    }

    fn crossings(&mut self, a: Handle, b: Handle) -> Option<usize> {
        if a == b {
            return None;
        }
        match self.pair(a, b) {
            (false, _, _) => Some(0),
            (true, ok, n) => ok.then_some(n),
        }
    }
}

fn all_in_star(t: &mut Table, sphere: &SimplicialComplex, assignment: &BTreeMap<Handle, Handle>, center: Handle) -> bool {
    sphere.maximal_simplices().iter().all(|sg| {
        let mut img: Vec<Handle> = sg.iter().map(|v| assignment[v]).collect();
        img.push(center);
        t.is_simplex(&img)
    })
}

fn check_map(t: &mut Table, sphere: &SimplicialComplex, assignment: &BTreeMap<Handle, Handle>) -> Result<()> {
    for v in sphere.vertices() {
        match assignment.get(&v) {
            Some(&h) if h < t.curves.len() => {}
            _ => return Err(Error::Contract(format!("sphere vertex {v} has no image curve"))),
        }
    }
    for sg in sphere.maximal_simplices() {
        let img: Vec<Handle> = sg.iter().map(|v| assignment[v]).collect();
        if !t.is_simplex(&img) {
            return Err(Error::Contract(format!("simplex {sg:?} maps onto intersecting curves")));
        }
    }
    Ok(())
}

fn sphere_file(sp: &CombinatorialSphere) -> SphereFile {
    SphereFile {
        dim: sp.dim,
        complex: ComplexFile::from(&sp.complex),
    }
}

/// Flow a sphere map into the star of one image vertex.
pub fn flow_sphere_to_star(s: &Surface, phi: &SphereMap) -> Result<FlowCertificate> {
    if !phi.sphere.validated {
        return Err(Error::Contract("sphere not validated".into()));
    }
    let mut t = Table::new(s, &phi.curves)?;
    let src = &phi.sphere.complex;
    check_map(&mut t, src, &phi.assignment)?;
    let initial = image_set(&phi.assignment);
    // one fibre: the classes of the image form a simplex
    let keys: Vec<IsotopyClassKey> = initial.iter().map(|&h| collapse_map_f(s, &phi.curves[h])).collect::<Result<_>>()?;
    let distinct: Vec<IsotopyClassKey> = keys.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    fiber_subcomplex(
        s,
        &initial.iter().map(|&h| phi.curves[h].clone()).collect::<Vec<_>>(),
        &distinct,
    )
    .map_err(|e| Error::Contract(format!("image not inside one fiber: {e}")))?;

    let mut cert = FlowCertificate {
        kind: FlowKind::StarFlow,
        surface: s.spec(),
        sphere: sphere_file(&phi.sphere),
        map: phi.assignment.clone(),
        curves: phi.curves.clone(),
        initial: initial.clone(),
        steps: vec![],
        final_set: initial.clone(),
        star_center: initial[0],
    };
    if let Some(&c) = initial.iter().find(|&&c| all_in_star(&mut t, src, &phi.assignment, c)) {
        cert.star_center = c;
        return Ok(cert);
    }

    let mut assignment = phi.assignment.clone();
    let mut image = initial.clone();
    // normalise into pairwise crossing-only position
    let fam: Vec<PolyCurve> = image.iter().map(|&h| t.curves[h].clone()).collect();
    let normal = pushoff_family(s, &fam)?;
    for (k, c) in normal.into_iter().enumerate() {
        let old = image[k];
        if c == t.curves[old] {
            continue;
        }
        let before = image.clone();
        let h = t.push(c.clone())?;
        let mut witnesses = vec![Witness::Image { before: before.clone() }, Witness::Disjoint { a: old, b: h }];
        for &j in &before {
            if j == old {
                continue;
            }
            if t.disjoint(old, j) {
                witnesses.push(Witness::Disjoint { a: h, b: j });
            } else if let Some(n) = t.crossings(h, j) {
                witnesses.push(Witness::CrossingCount { a: h, b: j, count: n });
            }
        }
        replace(&mut assignment, &mut image, old, h);
        let group = cert.steps.len();
        cert.steps.push(FlowStep {
            replace: old,
            handle: h,
            with: c,
            reason: StepReason::Pushoff,
            group,
            witnesses,
        });
    }

    // centre: largest total crossing number, ties to the smallest handle
    let mut center = image[0];
    let mut best = 0usize;
    for &c in &image {
        let total: usize = image.iter().filter(|&&j| j != c).map(|&j| t.pair(c, j).2).sum();
        if total > best {
            best = total;
            center = c;
        }
    }
    let mut total = center_total(&mut t, &image, center)?;
    loop {
        let members: Vec<Handle> = image.iter().copied().filter(|&h| h != center).collect();
        let fam: Vec<PolyCurve> = members.iter().map(|&h| t.curves[h].clone()).collect();
        let Some(b) = find_innermost_bigon(s, &fam, &t.curves[center])? else { break };
        let out = bigon_surgery(s, &fam, &b)?;
        let old = members[b.member];
        let c = out[b.member].clone();
        let before = image.clone();
        let h = t.push(c.clone())?;
        let old_n = t.crossings(old, center).unwrap_or(0);
        let new_n = t
            .crossings(h, center)
            .ok_or_else(|| Error::Internal("surgery produced a touching".into()))?;
        let mut witnesses = vec![
            Witness::Image { before: before.clone() },
            Witness::Disjoint { a: old, b: h },
            Witness::CrossingCount { a: old, b: center, count: old_n },
            Witness::CrossingCount { a: h, b: center, count: new_n },
        ];
        for &j in &before {
            if j != old && t.disjoint(old, j) {
                witnesses.push(Witness::Disjoint { a: h, b: j });
            }
        }
        replace(&mut assignment, &mut image, old, h);
        let next = center_total(&mut t, &image, center)?;
        if next + 2 != total {
            return Err(Error::Internal("bigon surgery did not remove exactly two crossings".into()));
        }
        total = next;
        witnesses.push(Witness::CenterTotal { total });
        let group = cert.steps.len();
        cert.steps.push(FlowStep {
            replace: old,
            handle: h,
            with: c,
            reason: StepReason::BigonSurgery,
            group,
            witnesses,
        });
    }
    if total != 0 {
        return Err(Error::Internal("no bigon left but the image still meets the centre".into()));
    }
    cert.final_set = image;
    cert.star_center = center;
    Ok(cert)
}

fn center_total(t: &mut Table, image: &[Handle], center: Handle) -> Result<usize> {
    let mut total = 0;
    for &h in image {
        if h == center {
            continue;
        }
        total += t
            .crossings(h, center)
            .ok_or_else(|| Error::Internal(format!("curve {h} touches the centre")))?;
    }
    Ok(total)
}

fn replace(assignment: &mut BTreeMap<Handle, Handle>, image: &mut Vec<Handle>, old: Handle, new: Handle) {
    for v in assignment.values_mut() {
        if *v == old {
            *v = new;
        }
    }
    *image = image_set(assignment);
}

/// Parameters tried when sampling boundary points for the base arc.
const BETA_PARAMS: [(i64, i64); 4] = [(1, 3), (2, 5), (3, 7), (5, 11)];

/// Radius used to perturb the automatic base arc.
pub fn beta_radius() -> Q {
    qr(1, 64)
}

/// The automatic base arc: the shortest straight arc between sampled points
/// on different boundary components, perturbed into crossing-only position
/// and with endpoints off every arc of `gamma`.
pub fn auto_beta(s: &Surface, gamma: &[PolyCurve]) -> Result<PolyCurve> {
    let mut edges: Vec<(crate::geom::Point, crate::geom::Point)> = Vec::new();
    for i in 0..s.edge_count() {
        if s.partner(i).is_none() {
            let (a, b) = s.edge(i);
            edges.push((a.clone(), b.clone()));
        }
    }
    for (h, hole) in s.holes().iter().enumerate() {
        for e in 0..hole.len() {
            let (a, b) = s.hole_edge(h, e);
            edges.push((a.clone(), b.clone()));
        }
    }
    let mut pts = Vec::new();
    for (a, b) in &edges {
        for (n, d) in BETA_PARAMS {
            let p = a.lerp(b, &qr(n, d));
            if let Some(c) = s.boundary_component(&p) {
                pts.push((c, p));
            }
        }
    }
    let geos: Vec<Geometry> = gamma.iter().map(|c| geometry(s, c)).collect::<Result<_>>()?;
    let off_gamma = |p: &crate::geom::Point| {
        geos.iter()
            .all(|g| g.segs.iter().all(|sg| !point_on_segment(p, &sg.a, &sg.b)))
    };
    let mut pairs = Vec::new();
    for (i, (ca, a)) in pts.iter().enumerate() {
        for (cb, b) in &pts[i + 1..] {
            if ca != cb && off_gamma(a) && off_gamma(b) {
                pairs.push(((b - a).norm2(), a.clone(), b.clone()));
            }
        }
    }
    pairs.sort();
    for (_, a, b) in pairs {
        let cand = PolyCurve::arc(vec![a, b]);
        if crate::curve::validate_curve(s, &cand).is_err() {
            continue;
        }
        let Ok(beta) = perturb(s, &cand, gamma, &beta_radius()) else { continue };
        let ends = [beta.waypoints[0].clone(), beta.waypoints.last().unwrap().clone()];
        if ends.iter().all(&off_gamma) {
            return Ok(beta);
        }
    }
    Err(Error::Internal("no admissible base arc found".into()))
}

/// Flow an arc family, given as a sphere map, into the star of `beta`.
pub fn hatcher_flow(s: &Surface, phi: &SphereMap, beta: Option<&PolyCurve>) -> Result<FlowCertificate> {
    if !s.admits_arc_flow() {
        return Err(Error::Inadmissible {
            genus: s.genus(),
            boundary: s.boundary_count(),
        });
    }
    if !phi.sphere.validated {
        return Err(Error::Contract("sphere not validated".into()));
    }
    if phi.curves.iter().any(|c| c.is_closed()) {
        return Err(Error::Contract("hatcher flow needs arcs".into()));
    }
    let mut t = Table::new(s, &phi.curves)?;
    let src = &phi.sphere.complex;
    check_map(&mut t, src, &phi.assignment)?;
    let initial = image_set(&phi.assignment);
    let image_arcs: Vec<PolyCurve> = initial.iter().map(|&h| phi.curves[h].clone()).collect();
    let beta = match beta {
        Some(b) => b.clone(),
        None => auto_beta(s, &image_arcs)?,
    };
    let bh = t.push(beta.clone())?;
    let mut curves = phi.curves.clone();
    curves.push(beta.clone());
    let mut cert = FlowCertificate {
        kind: FlowKind::HatcherFlow,
        surface: s.spec(),
        sphere: sphere_file(&phi.sphere),
        map: phi.assignment.clone(),
        curves,
        initial: initial.clone(),
        steps: vec![],
        final_set: initial.clone(),
        star_center: bh,
    };
    let mut assignment = phi.assignment.clone();
    let mut image = initial;
    let mut group = 0;
    let mut total = center_total(&mut t, &image, bh)
        .map_err(|_| Error::Contract("base arc must meet every arc in crossings only".into()))?;
    while total > 0 {
        let fam: Vec<PolyCurve> = image.iter().map(|&h| t.curves[h].clone()).collect();
        let step = arc_surgery_step(s, &fam, &beta)?;
        if step.replaced.is_empty() {
            return Err(Error::Internal("arc surgery made no progress".into()));
        }
        for rep in step.replaced {
            let old = image[rep.index];
            let before = image.clone();
            let h = t.push(rep.arc.clone())?;
            let mut witnesses = vec![
                Witness::Image { before: before.clone() },
                Witness::Disjoint { a: old, b: h },
                Witness::CrossingCount { a: old, b: bh, count: rep.beta_before },
                Witness::CrossingCount { a: h, b: bh, count: rep.beta_after },
                Witness::Near {
                    handle: h,
                    radius: rep.near.clone(),
                },
                Witness::Essential { handle: h },
            ];
            for &j in &before {
                if j != old && t.disjoint(old, j) {
                    witnesses.push(Witness::Disjoint { a: h, b: j });
                }
            }
            replace(&mut assignment, &mut image, old, h);
            let next = center_total(&mut t, &image, bh)?;
            if next >= total {
                return Err(Error::Internal("arc surgery did not reduce the intersection total".into()));
            }
            total = next;
            witnesses.push(Witness::CenterTotal { total });
            cert.steps.push(FlowStep {
                replace: old,
                handle: h,
                with: rep.arc,
                reason: StepReason::ArcSurgery,
                group,
                witnesses,
            });
        }
        group += 1;
    }
    cert.final_set = image;
    Ok(cert)
}

/// Outcome of [`verify_certificate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub ok: bool,
    /// Index of the first failing step; `None` for failures outside the steps.
    pub failed_step: Option<usize>,
    pub reason: Option<String>,
}

impl VerifyReport {
    fn pass() -> Self {
        VerifyReport {
            ok: true,
            failed_step: None,
            reason: None,
        }
    }

    fn fail(step: Option<usize>, reason: impl Into<String>) -> Self {
        VerifyReport {
            ok: false,
            failed_step: step,
            reason: Some(reason.into()),
        }
    }
}

/// Re-check every invariant of a certificate from scratch.
pub fn verify_certificate(cert: &FlowCertificate) -> VerifyReport {
    match verify_inner(cert) {
        Ok(r) => r,
        Err(e) => VerifyReport::fail(None, e.to_string()),
    }
}

fn verify_inner(cert: &FlowCertificate) -> Result<VerifyReport> {
    let s = build_surface(&cert.surface)?;
    let src_complex = SimplicialComplex::try_from(&cert.sphere.complex)?;
    let sphere = match CombinatorialSphere::new(src_complex, cert.sphere.dim) {
        Ok(sp) => sp,
        Err(e) => return Ok(VerifyReport::fail(None, e.to_string())),
    };
    if !sphere.validated {
        return Ok(VerifyReport::fail(None, "sphere not validated"));
    }
    let src = &sphere.complex;
    let mut t = match Table::new(&s, &cert.curves) {
        Ok(t) => t,
        Err(e) => return Ok(VerifyReport::fail(None, format!("invalid curve: {e}"))),
    };
    if let Err(e) = check_map(&mut t, src, &cert.map) {
        return Ok(VerifyReport::fail(None, e.to_string()));
    }
    let mut assignment = cert.map.clone();
    let mut image = image_set(&assignment);
    if image != cert.initial {
        return Ok(VerifyReport::fail(None, "initial vertex set does not match the map"));
    }
    let center = cert.star_center;
    if center >= cert.curves.len() + cert.steps.len() {
        return Ok(VerifyReport::fail(None, "unknown star centre"));
    }
    let beta = match cert.kind {
        FlowKind::HatcherFlow => {
            if center >= cert.curves.len() {
                return Ok(VerifyReport::fail(None, "base arc must be a listed curve"));
            }
            Some(center)
        }
        FlowKind::StarFlow => None,
    };
    let mut total: Option<usize> = None;
    for (k, st) in cert.steps.iter().enumerate() {
        let fail = |r: String| Ok(VerifyReport::fail(Some(k), r));
        let before_ok = st
            .witnesses
            .iter()
            .any(|w| matches!(w, Witness::Image { before } if *before == image));
        if !before_ok {
            return fail("image witness does not match the current vertex set".into());
        }
        if !image.contains(&st.replace) {
            return fail(format!("handle {} is not in the image", st.replace));
        }
        if st.handle != t.curves.len() {
            return fail(format!("handle {} is not the next fresh handle", st.handle));
        }
        if st.with.kind != t.curves[st.replace].kind {
            return fail("replacement changes the curve kind".into());
        }
        let h = match t.push(st.with.clone()) {
            Ok(h) => h,
            Err(e) => return fail(format!("invalid replacement: {e}")),
        };
        let old = st.replace;
        // every stated witness must hold
        for w in &st.witnesses {
            let holds = match w {
                Witness::Image { .. } => true,
                Witness::Disjoint { a, b } => *a < t.curves.len() && *b < t.curves.len() && t.disjoint(*a, *b),
                Witness::CrossingCount { a, b, count } => {
                    *a < t.curves.len() && *b < t.curves.len() && t.crossings(*a, *b) == Some(*count)
                }
                Witness::CenterTotal { .. } => true,
                Witness::Near { handle, radius } => {
                    *handle == h && near_holds(&s, &mut t, old, h, beta, &image, radius)
                }
                Witness::Essential { handle } => {
                    *handle < t.curves.len() && is_essential(&s, &t.curves[*handle]).unwrap_or(false)
                }
            };
            if !holds {
                return fail(format!("witness {w:?} does not hold"));
            }
        }
        // facts required by the step's reason, recomputed independently
        if !t.disjoint(old, h) {
            return fail("replacement meets the replaced curve".into());
        }
        let same_group: BTreeSet<Handle> = cert.steps[..k]
            .iter()
            .filter(|p| p.group == st.group && st.reason == StepReason::ArcSurgery)
            .map(|p| p.handle)
            .collect();
        for &j in &image {
            if j != old && !same_group.contains(&j) && t.disjoint(old, j) && !t.disjoint(h, j) {
                return fail(format!("replacement meets {j}, which was disjoint from the replaced curve"));
            }
        }
        match st.reason {
            StepReason::Pushoff => {
                for &j in &image {
                    if j != old && t.crossings(h, j).is_none() {
                        return fail(format!("pushoff is not in crossing position with {j}"));
                    }
                }
            }
            StepReason::BigonSurgery => {
                if beta.is_some() {
                    return fail("bigon surgery in an arc flow".into());
                }
                let (Some(a), Some(b)) = (t.crossings(old, center), t.crossings(h, center)) else {
                    return fail("touching with the centre".into());
                };
                if b + 2 != a {
                    return fail(format!("crossings with the centre went {a} -> {b}, not down by two"));
                }
            }
            StepReason::ArcSurgery => {
                let Some(bh) = beta else {
                    return fail("arc surgery in a star flow".into());
                };
                let (Some(a), Some(b)) = (t.crossings(old, bh), t.crossings(h, bh)) else {
                    return fail("touching with the base arc".into());
                };
                if b + 1 > a {
                    return fail(format!("crossings with the base arc went {a} -> {b}"));
                }
                if !is_essential(&s, &t.curves[h]).unwrap_or(false) {
                    return fail("replacement arc is inessential".into());
                }
                if !st.witnesses.iter().any(|w| matches!(w, Witness::Near { .. })) {
                    return fail("missing neighbourhood witness".into());
                }
            }
        }
        // straight-line homotopy between the maps before and after
        let mut next = assignment.clone();
        for v in next.values_mut() {
            if *v == old {
                *v = h;
            }
        }
        for sg in src.maximal_simplices() {
            let mut u: Vec<Handle> = sg.iter().map(|v| assignment[v]).collect();
            u.extend(sg.iter().map(|v| next[v]));
            if !t.is_simplex(&u) {
                return fail(format!("straight-line homotopy breaks on simplex {sg:?}"));
            }
        }
        // monotone total against the centre
        if st.reason != StepReason::Pushoff {
            let prev = match total {
                Some(x) => x,
                None => match image_total(&mut t, &image, center) {
                    Some(x) => x,
                    None => return fail("image touches the centre".into()),
                },
            };
            let Some(now) = image_total(&mut t, &image_set(&next), center) else {
                return fail("image touches the centre".into());
            };
            let stated = st.witnesses.iter().find_map(|w| match w {
                Witness::CenterTotal { total } => Some(*total),
                _ => None,
            });
            if stated != Some(now) {
                return fail(format!("centre total witness {stated:?} but kernel gives {now}"));
            }
            let decreased = match st.reason {
                StepReason::BigonSurgery => now + 2 == prev,
                _ => now < prev,
            };
            if !decreased {
                return fail(format!("centre total went {prev} -> {now}"));
            }
            total = Some(now);
        }
        assignment = next;
        image = image_set(&assignment);
    }
    if image != cert.final_set {
        return Ok(VerifyReport::fail(None, "final vertex set does not match the steps"));
    }
    if !all_in_star(&mut t, src, &assignment, center) {
        return Ok(VerifyReport::fail(None, "final image is not in the star of the centre"));
    }
    Ok(VerifyReport::pass())
}

fn image_total(t: &mut Table, image: &[Handle], center: Handle) -> Option<usize> {
    let mut total = 0;
    for &h in image {
        if h != center {
            total += t.crossings(h, center)?;
        }
    }
    Some(total)
}

/// Condition (4): the new arc stays near the old arc plus the initial piece
/// of the base arc up to its first crossing with the current image.
fn near_holds(s: &Surface, t: &mut Table, old: Handle, new: Handle, beta: Option<Handle>, image: &[Handle], radius: &Q) -> bool {
    let Some(bh) = beta else { return false };
    let gb = t.geos[bh].clone();
    let mut first = None;
    for &h in image {
        let r = intersect_geometries(s, &t.geos[h], &gb);
        for (_, pb) in r.crossing_points() {
            if first.as_ref().is_none_or(|f| pb < *f) {
                first = Some(pb);
            }
        }
    }
    let Some(first) = first else { return false };
    let mut core: Vec<Seg> = gb.subpath(&gb.start(), &first);
    core.extend(t.geos[old].segs.iter().cloned());
    within_neighbourhood(s, &t.curves[new], &core, radius)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{q, Point};
    use crate::surface::catalog;

    fn pt(x: Q, y: Q) -> Point {
        Point::new(x, y)
    }

    fn vertical(x: Q) -> PolyCurve {
        PolyCurve::closed(vec![pt(x.clone(), q(0)), pt(x, q(1))])
    }

    fn bumped(x: Q) -> PolyCurve {
        // a (0,1) curve through x that swings left to x - 1/4
        PolyCurve::closed(vec![
            pt(x.clone(), q(0)),
            pt(x.clone(), qr(1, 4)),
            pt(&x - qr(1, 4), qr(1, 2)),
            pt(x.clone(), qr(3, 4)),
            pt(x, q(1)),
        ])
    }

    #[test]
    fn fiber_filters_by_class() {
        let t = catalog::torus();
        let h = PolyCurve::closed(vec![pt(q(0), qr(1, 2)), pt(q(1), qr(1, 2))]);
        let curves = vec![vertical(qr(1, 8)), vertical(qr(3, 8)), h, vertical(qr(5, 8))];
        let x = fiber_subcomplex(&t, &curves, &[IsotopyClassKey::Torus { p: 0, q: 1 }]).unwrap();
        assert_eq!(x.vertices().collect::<Vec<_>>(), vec![0, 1, 3]);
        assert_eq!(x.dim(), 2);
    }

    #[test]
    fn already_in_star_gives_empty_certificate() {
        let t = catalog::torus();
        let phi = SphereMap {
            sphere: CombinatorialSphere::s0(),
            curves: vec![vertical(qr(1, 8)), vertical(qr(3, 8))],
            assignment: BTreeMap::from([(0, 0), (1, 1)]),
        };
        let cert = flow_sphere_to_star(&t, &phi).unwrap();
        assert!(cert.steps.is_empty());
        assert!(verify_certificate(&cert).ok);
    }

    #[test]
    fn s0_on_crossing_representatives_flows() {
        let t = catalog::torus();
        let phi = SphereMap {
            sphere: CombinatorialSphere::s0(),
            curves: vec![vertical(qr(1, 8)), bumped(qr(5, 16))],
            assignment: BTreeMap::from([(0, 0), (1, 1)]),
        };
        let cert = flow_sphere_to_star(&t, &phi).unwrap();
        assert!(!cert.steps.is_empty());
        let rep = verify_certificate(&cert);
        assert!(rep.ok, "{rep:?}");
        // corrupt a count witness
        let mut bad = cert.clone();
        let k = bad
            .steps
            .iter()
            .position(|s| s.reason == StepReason::BigonSurgery)
            .unwrap();
        for w in &mut bad.steps[k].witnesses {
            if let Witness::CrossingCount { count, .. } = w {
                *count += 2;
                break;
            }
        }
        let rep = verify_certificate(&bad);
        assert!(!rep.ok);
        assert_eq!(rep.failed_step, Some(k));
    }

    #[test]
    fn inadmissible_surfaces_rejected() {
        let s = catalog::sphere_with_holes(3);
        let phi = SphereMap {
            sphere: CombinatorialSphere::s0(),
            curves: vec![],
            assignment: BTreeMap::new(),
        };
        assert!(matches!(
            hatcher_flow(&s, &phi, None),
            Err(Error::Inadmissible { genus: 0, boundary: 4 })
        ));
    }

    #[test]
    fn hatcher_single_arc() {
        let s = catalog::s05();
        let beta = PolyCurve::arc(vec![pt(qr(1, 4), q(0)), pt(qr(1, 4), qr(1, 8))]);
        let gamma = PolyCurve::arc(vec![pt(q(0), qr(1, 16)), pt(qr(9, 16), qr(1, 16)), pt(qr(5, 8), qr(1, 4))]);
        let other = PolyCurve::arc(vec![pt(qr(3, 4), q(1)), pt(qr(3, 4), qr(7, 8))]);
        let phi = SphereMap {
            sphere: CombinatorialSphere::s0(),
            curves: vec![gamma, other],
            assignment: BTreeMap::from([(0, 0), (1, 1)]),
        };
        let cert = hatcher_flow(&s, &phi, Some(&beta)).unwrap();
        assert_eq!(cert.steps.len(), 1);
        let rep = verify_certificate(&cert);
        assert!(rep.ok, "{rep:?}");
        let auto = hatcher_flow(&s, &phi, None).unwrap();
        let rep = verify_certificate(&auto);
        assert!(rep.ok, "{rep:?}");
    }
}
