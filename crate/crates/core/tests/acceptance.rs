//! Acceptance run: one PASS/FAIL line per criterion.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use finecurve::complex::{
    fine_subcomplex, homology, straight_line_homotopy_valid, CombinatorialSphere, Coefficients, SimplicialComplex,
    SimplicialMap,
};
use finecurve::curve::geometry;
use finecurve::flows::{
    flow_sphere_to_star, hatcher_flow, verify_certificate, FlowCertificate, SphereMap, StepReason, Witness,
};
use finecurve::geom::qr;
use finecurve::kernel::intersect_curves;
use finecurve::moves::{tighten_pair, within_neighbourhood};
use finecurve::perturb::{perturb, pushoff_family};
use finecurve::samples;
use finecurve::surface::catalog;
use finecurve::topology::{collapse_map_f, IsotopyClassKey};
use finecurve::{build_surface, Error, PolyCurve, Surface};

/// Wall-clock budget for criterion 1.
const TORUS_BUDGET: Duration = Duration::from_secs(60);

type Outcome = Result<String, String>;

fn criterion_1() -> Outcome {
    let s = catalog::torus();
    let start = Instant::now();
    for seed in 0..100u64 {
        let pair = samples::torus_pair(seed);
        let mut u = pair.u.clone();
        if !intersect_curves(&s, &u, &pair.v).map_err(|e| e.to_string())?.all_crossing() {
            u = perturb(&s, &u, std::slice::from_ref(&pair.v), &qr(1, 64)).map_err(|e| e.to_string())?;
        }
        let t = tighten_pair(&s, &u, &pair.v).map_err(|e| format!("seed {seed}: {e}"))?;
        let n = intersect_curves(&s, &t, &pair.v).map_err(|e| e.to_string())?.crossing_count as i64;
        let want = samples::torus_intersection_number(pair.a, pair.b);
        if n != want {
            return Err(format!("seed {seed}: classes {:?} {:?} gave {n}, expected {want}", pair.a, pair.b));
        }
    }
    let took = start.elapsed();
    if took > TORUS_BUDGET {
        return Err(format!("100 pairs took {took:.1?}"));
    }
    Ok(format!("100 pairs in {took:.1?}"))
}

fn criterion_2() -> Outcome {
    let s = catalog::torus();
    let eps = qr(1, 50);
    for seed in 0..100u64 {
        let inst = samples::perturb_instance(seed);
        let out = perturb(&s, &inst.y, &inst.family, &eps).map_err(|e| format!("seed {seed}: {e}"))?;
        for (i, c) in inst.family.iter().enumerate() {
            let r = intersect_curves(&s, &out, c).map_err(|e| e.to_string())?;
            if r.identical || r.touching_count() > 0 {
                return Err(format!("seed {seed}: member {i} still touches"));
            }
        }
        let gy = geometry(&s, &inst.y).map_err(|e| e.to_string())?;
        if !within_neighbourhood(&s, &out, &gy.segs, &eps) {
            return Err(format!("seed {seed}: output leaves the eps-neighbourhood"));
        }
        if collapse_map_f(&s, &out).ok() != collapse_map_f(&s, &inst.y).ok() {
            return Err(format!("seed {seed}: class changed"));
        }
    }
    Ok("100 instances".into())
}

fn criterion_3() -> Outcome {
    let s = catalog::torus();
    for seed in 0..50u64 {
        let fam = samples::curve_family(seed);
        let out = pushoff_family(&s, &fam).map_err(|e| format!("seed {seed}: {e}"))?;
        let meets = |a: &PolyCurve, b: &PolyCurve| intersect_curves(&s, a, b).map(|r| !r.is_empty()).unwrap_or(true);
        for i in 0..fam.len() {
            if out[i] != fam[i] && meets(&out[i], &fam[i]) {
                return Err(format!("seed {seed}: v{i}' meets v{i}"));
            }
            for j in 0..fam.len() {
                if i == j {
                    continue;
                }
                if !meets(&fam[i], &fam[j]) && (meets(&out[i], &out[j]) || meets(&out[i], &fam[j])) {
                    return Err(format!("seed {seed}: disjointness of {i},{j} lost"));
                }
                let r = intersect_curves(&s, &out[i], &out[j]).map_err(|e| e.to_string())?;
                if r.identical || !r.all_crossing() {
                    return Err(format!("seed {seed}: v{i}', v{j}' not crossing-only"));
                }
            }
        }
    }
    Ok("50 families".into())
}

fn all_curves(cert: &FlowCertificate) -> Vec<PolyCurve> {
    let mut v = cert.curves.clone();
    v.extend(cert.steps.iter().map(|s| s.with.clone()));
    v
}

/// Independent replay: crossing totals with the centre per surgery step and
/// straight-line validity in the fine complex on every curve involved.
fn replay(s: &Surface, cert: &FlowCertificate, sphere: &SimplicialComplex, drop: Option<usize>) -> Result<(), String> {
    let curves = all_curves(cert);
    let target = fine_subcomplex(s, &curves).map_err(|e| e.to_string())?;
    let total = |assignment: &BTreeMap<usize, usize>| -> Result<usize, String> {
        let image: std::collections::BTreeSet<usize> = assignment.values().copied().collect();
        let mut t = 0;
        for h in image {
            if h != cert.star_center {
                let r = intersect_curves(s, &curves[h], &curves[cert.star_center]).map_err(|e| e.to_string())?;
                if !r.all_crossing() {
                    return Err("touching with the centre".into());
                }
                t += r.crossing_count;
            }
        }
        Ok(t)
    };
    let mut cur = cert.map.clone();
    for (k, st) in cert.steps.iter().enumerate() {
        let mut next = cur.clone();
        for v in next.values_mut() {
            if *v == st.replace {
                *v = st.handle;
            }
        }
        let phi = SimplicialMap { source: sphere.clone(), target: target.clone(), assignment: cur.clone() };
        let psi = SimplicialMap { source: sphere.clone(), target: target.clone(), assignment: next.clone() };
        if !straight_line_homotopy_valid(&phi, &psi) {
            return Err(format!("step {k} is not straight-line valid"));
        }
        if st.reason != StepReason::Pushoff {
            let (a, b) = (total(&cur)?, total(&next)?);
            let ok = match drop {
                Some(d) => b + d == a,
                None => b < a,
            };
            if !ok {
                return Err(format!("step {k}: centre total {a} -> {b}"));
            }
        }
        cur = next;
    }
    let final_img: Vec<usize> = cur.values().copied().collect::<std::collections::BTreeSet<_>>().into_iter().collect();
    if final_img != cert.final_set {
        return Err("final set mismatch".into());
    }
    for sg in sphere.maximal_simplices() {
        let img: Vec<usize> = sg.iter().map(|v| cur[v]).collect();
        if !target.in_closed_star(cert.star_center, &img) {
            return Err("final image outside the closed star".into());
        }
    }
    Ok(())
}

fn star_certificate(seed: u64) -> Result<(Surface, SphereMap, FlowCertificate), String> {
    let s = catalog::torus();
    let phi = samples::star_instance(seed);
    let cert = flow_sphere_to_star(&s, &phi).map_err(|e| format!("seed {seed}: {e}"))?;
    Ok((s, phi, cert))
}

fn criterion_4() -> Outcome {
    let mut surgeries = 0;
    for seed in 0..50u64 {
        let (s, phi, cert) = star_certificate(seed)?;
        replay(&s, &cert, &phi.sphere.complex, Some(2)).map_err(|e| format!("seed {seed}: {e}"))?;
        let rep = verify_certificate(&cert);
        if !rep.ok {
            return Err(format!("seed {seed}: verifier rejected: {rep:?}"));
        }
        surgeries += cert.steps.iter().filter(|s| s.reason == StepReason::BigonSurgery).count();
    }
    Ok(format!("50 instances, {surgeries} bigon surgeries"))
}

fn criterion_5() -> Outcome {
    let mut steps = 0;
    for seed in 0..50u64 {
        let (s, phi) = samples::hatcher_instance(seed);
        let cert = hatcher_flow(&s, &phi, None).map_err(|e| format!("seed {seed}: {e}"))?;
        let curves = all_curves(&cert);
        let beta = &curves[cert.star_center];
        for &h in &cert.final_set {
            if !intersect_curves(&s, &curves[h], beta).map_err(|e| e.to_string())?.is_empty() {
                return Err(format!("seed {seed}: final arc {h} meets the base arc"));
            }
        }
        replay(&s, &cert, &phi.sphere.complex, None).map_err(|e| format!("seed {seed}: {e}"))?;
        let rep = verify_certificate(&cert);
        if !rep.ok {
            return Err(format!("seed {seed}: verifier rejected: {rep:?}"));
        }
        steps += cert.steps.len();
    }
    for spec in [catalog::sphere_with_holes_spec(3), catalog::torus_with_holes_spec(1)] {
        let s = build_surface(&spec).map_err(|e| e.to_string())?;
        let phi = SphereMap {
            sphere: CombinatorialSphere::s0(),
            curves: vec![],
            assignment: BTreeMap::new(),
        };
        match hatcher_flow(&s, &phi, None) {
            Err(e @ Error::Inadmissible { .. }) if e.exit_code() == 2 => {}
            other => return Err(format!("S_{{{},{}}} not rejected: {other:?}", spec.genus, spec.boundary)),
        }
    }
    Ok(format!("50 families, {steps} arc surgeries; (0,4) and (1,1) rejected"))
}

fn criterion_6() -> Outcome {
    let reduced = |x: &SimplicialComplex| {
        let r = homology(x, Coefficients::Z);
        (0..=x.dim().max(0))
            .map(|d| r.group(d).map(|g| (g.rank, g.torsion.clone())).unwrap_or((0, vec![])))
            .collect::<Vec<_>>()
    };
    for n in 1..=6 {
        let sp = CombinatorialSphere::simplex_boundary(n).map_err(|e| e.to_string())?;
        let h = reduced(&sp.complex);
        for (d, (rank, torsion)) in h.iter().enumerate() {
            let want = usize::from(d == n - 1);
            if *rank != want || !torsion.is_empty() {
                return Err(format!("boundary of the {n}-simplex: degree {d} rank {rank}"));
            }
        }
        for v in sp.complex.vertices() {
            let st = sp.complex.star(v).map_err(|e| e.to_string())?;
            if !homology(&st, Coefficients::Z).is_acyclic() {
                return Err(format!("star of {v} in the {n}-simplex boundary is not acyclic"));
            }
        }
    }
    let oct = CombinatorialSphere::cross_polytope(2).map_err(|e| e.to_string())?;
    let h = reduced(&oct.complex);
    if h != vec![(0, vec![]), (0, vec![]), (1, vec![])] {
        return Err(format!("octahedron: {h:?}"));
    }
    for v in oct.complex.vertices() {
        if !homology(&oct.complex.star(v).map_err(|e| e.to_string())?, Coefficients::Z).is_acyclic() {
            return Err("octahedron star not acyclic".into());
        }
    }
    Ok("simplex boundaries n <= 6, stars, octahedron".into())
}

/// Two planar keys (sides of a partition of the boundary components) are
/// realisable disjointly iff the partitions are nested.
fn planar_compatible(a: &[usize], b: &[usize], comps: usize) -> bool {
    let inside = |k: &[usize], c: usize| k.contains(&c);
    let mut seen = [false; 4];
    for c in 0..comps {
        seen[usize::from(inside(a, c)) * 2 + usize::from(inside(b, c))] = true;
    }
    seen.iter().any(|x| !x)
}

fn criterion_7() -> Outcome {
    let (mut equal, mut distinct) = (0, 0);
    for seed in 0..200u64 {
        let (s, a, b) = samples::disjoint_pair(seed);
        if !intersect_curves(&s, &a, &b).map_err(|e| e.to_string())?.is_empty() {
            return Err(format!("seed {seed}: sample pair is not disjoint"));
        }
        let ka = collapse_map_f(&s, &a).map_err(|e| e.to_string())?;
        let kb = collapse_map_f(&s, &b).map_err(|e| e.to_string())?;
        if ka == kb {
            equal += 1;
            continue;
        }
        let ok = match (&ka, &kb) {
            (IsotopyClassKey::Rejected, _) | (_, IsotopyClassKey::Rejected) => true,
            // distinct torus classes always meet
            (IsotopyClassKey::Torus { .. }, IsotopyClassKey::Torus { .. }) => false,
            (IsotopyClassKey::Planar { components: x }, IsotopyClassKey::Planar { components: y }) => {
                planar_compatible(x, y, s.boundary_count() as usize)
            }
            _ => false,
        };
        if !ok {
            return Err(format!("seed {seed}: disjoint curves with incompatible keys {ka} and {kb}"));
        }
        distinct += 1;
    }
    Ok(format!("200 pairs: {equal} equal keys, {distinct} distinct compatible"))
}

fn criterion_8() -> Outcome {
    let mut injected = 0;
    let mut seed = 0u64;
    while injected < 20 {
        if seed > 400 {
            return Err(format!("only {injected} certificates with steps found"));
        }
        let (_, _, cert) = star_certificate(seed)?;
        seed += 1;
        let surgeries: Vec<usize> = (0..cert.steps.len())
            .filter(|&k| cert.steps[k].reason == StepReason::BigonSurgery)
            .collect();
        let Some(&k) = surgeries.get(seed as usize % surgeries.len().max(1)) else { continue };
        let mut bad = cert.clone();
        let expected = if injected % 2 == 0 {
            let w = bad.steps[k]
                .witnesses
                .iter_mut()
                .find_map(|w| match w {
                    Witness::CrossingCount { count, .. } => Some(count),
                    _ => None,
                })
                .expect("surgery steps carry counts");
            *w += 2;
            k
        } else {
            if cert.steps.len() < 2 {
                continue;
            }
            let j = k.min(cert.steps.len() - 2);
            bad.steps.swap(j, j + 1);
            j
        };
        let rep = verify_certificate(&bad);
        if rep.ok || rep.failed_step != Some(expected) {
            return Err(format!("seed {}: expected failure at {expected}, got {rep:?}", seed - 1));
        }
        injected += 1;
    }
    Ok("20 corrupted certificates rejected at the right step".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("torus minimal-position oracle", criterion_1),
        ("perturbation contract", criterion_2),
        ("pushoff family contract", criterion_3),
        ("star-flow certificates", criterion_4),
        ("arc-flow certificates", criterion_5),
        ("homology engine", criterion_6),
        ("collapsing map simpliciality", criterion_7),
        ("verifier independence", criterion_8),
    ];
    // optional criterion numbers on the command line restrict the run
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        if !only.is_empty() && !only.contains(&(i + 1)) {
            continue;
        }
        let start = Instant::now();
        match f() {
            Ok(msg) => println!("criterion {}: PASS  {name} ({msg}; {:.1?})", i + 1, start.elapsed()),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} ({msg})", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
