//! Finite simplicial complexes over integer handles, combinatorial spheres,
//! simplicial maps and reduced homology by integer normal form.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::curve::{geometry, Geometry, PolyCurve};
use crate::error::{Error, Result};
use crate::geom::Q;
use crate::kernel::curves_meet;
use crate::surface::Surface;

pub type Handle = usize;

/// A downward-closed family of non-empty vertex sets, each stored sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertices: BTreeSet<Handle>,
    simplices: BTreeSet<Vec<Handle>>,
}

fn sorted(s: &[Handle]) -> Vec<Handle> {
    let mut v = s.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

fn faces_of(s: &[Handle], out: &mut BTreeSet<Vec<Handle>>) {
    if s.is_empty() || out.contains(s) {
        return;
    }
    out.insert(s.to_vec());
    for i in 0..s.len() {
        let mut f = s.to_vec();
        f.remove(i);
        faces_of(&f, out);
    }
}

impl SimplicialComplex {
    pub fn empty() -> Self {
        Self::default()
    }

    /// The complex generated by the given simplices and isolated vertices.
    pub fn from_maximal<I>(vertices: I, maximal: &[Vec<Handle>]) -> Result<Self>
    where
        I: IntoIterator<Item = Handle>,
    {
        let vertices: BTreeSet<Handle> = vertices.into_iter().collect();
        let mut simplices = BTreeSet::new();
        for m in maximal {
            let m = sorted(m);
            if m.is_empty() {
                return Err(Error::Contract("empty simplex".into()));
            }
            if let Some(v) = m.iter().find(|v| !vertices.contains(v)) {
                return Err(Error::Contract(format!("simplex uses unknown vertex {v}")));
            }
            faces_of(&m, &mut simplices);
        }
        for &v in &vertices {
            simplices.insert(vec![v]);
        }
        Ok(SimplicialComplex { vertices, simplices })
    }

    /// All cliques of the graph on `0..n` with the given adjacency.
    pub fn flag<F: Fn(Handle, Handle) -> bool>(n: usize, adjacent: F) -> Self {
        let mut adj = vec![BTreeSet::new(); n];
        for i in 0..n {
            for j in (i + 1)..n {
                if adjacent(i, j) {
                    adj[i].insert(j);
                    adj[j].insert(i);
                }
            }
        }
        let mut maximal = Vec::new();
        bron_kerbosch(&adj, &mut Vec::new(), (0..n).collect(), BTreeSet::new(), &mut maximal);
        Self::from_maximal(0..n, &maximal).expect("cliques use known vertices")
    }

    pub fn vertices(&self) -> impl Iterator<Item = Handle> + '_ {
        self.vertices.iter().copied()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn has_vertex(&self, v: Handle) -> bool {
        self.vertices.contains(&v)
    }

    pub fn simplices(&self) -> impl Iterator<Item = &Vec<Handle>> {
        self.simplices.iter()
    }

    pub fn is_simplex(&self, s: &[Handle]) -> bool {
        self.simplices.contains(&sorted(s))
    }

    /// Dimension; `-1` for the empty complex.
    pub fn dim(&self) -> i64 {
        self.simplices.iter().map(|s| s.len() as i64 - 1).max().unwrap_or(-1)
    }

    pub fn simplices_of_dim(&self, k: usize) -> Vec<Vec<Handle>> {
        self.simplices.iter().filter(|s| s.len() == k + 1).cloned().collect()
    }

    pub fn maximal_simplices(&self) -> Vec<Vec<Handle>> {
        self.simplices
            .iter()
            .filter(|s| {
                !self
                    .vertices
                    .iter()
                    .any(|v| !s.contains(v) && self.simplices.contains(&sorted(&[s.as_slice(), &[*v]].concat())))
            })
            .cloned()
            .collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.simplices
            .iter()
            .map(|s| if s.len() % 2 == 1 { 1 } else { -1 })
            .sum()
    }

    fn require(&self, v: Handle) -> Result<()> {
        if self.has_vertex(v) {
            Ok(())
        } else {
            Err(Error::Contract(format!("unknown vertex {v}")))
        }
    }

    /// Closed star of a vertex.
    pub fn star(&self, v: Handle) -> Result<Self> {
        self.require(v)?;
        let gens: Vec<Vec<Handle>> = self.simplices.iter().filter(|s| s.contains(&v)).cloned().collect();
        let verts: BTreeSet<Handle> = gens.iter().flatten().copied().collect();
        Self::from_maximal(verts, &gens)
    }

    pub fn link(&self, v: Handle) -> Result<Self> {
        self.require(v)?;
        let gens: Vec<Vec<Handle>> = self
            .simplices
            .iter()
            .filter(|s| s.contains(&v) && s.len() > 1)
            .map(|s| s.iter().copied().filter(|&w| w != v).collect())
            .collect();
        let verts: BTreeSet<Handle> = gens.iter().flatten().copied().collect();
        Self::from_maximal(verts, &gens)
    }

    /// Simplices all of whose vertices lie in `vs`.
    pub fn full_subcomplex(&self, vs: &BTreeSet<Handle>) -> Self {
        SimplicialComplex {
            vertices: self.vertices.intersection(vs).copied().collect(),
            simplices: self
                .simplices
                .iter()
                .filter(|s| s.iter().all(|v| vs.contains(v)))
                .cloned()
                .collect(),
        }
    }

    /// Every vertex of `s` is in the closed star of `center`, jointly.
    pub fn in_closed_star(&self, center: Handle, s: &[Handle]) -> bool {
        let mut with = s.to_vec();
        with.push(center);
        self.is_simplex(&with)
    }
}

fn bron_kerbosch(
    adj: &[BTreeSet<Handle>],
    r: &mut Vec<Handle>,
    p: BTreeSet<Handle>,
    mut x: BTreeSet<Handle>,
    out: &mut Vec<Vec<Handle>>,
) {
    if p.is_empty() && x.is_empty() {
        if !r.is_empty() {
            out.push(r.clone());
        }
        return;
    }
    let pivot = p.iter().chain(x.iter()).max_by_key(|u| adj[**u].intersection(&p).count()).copied();
    let cands: Vec<Handle> = match pivot {
        Some(u) => p.difference(&adj[u]).copied().collect(),
        None => p.iter().copied().collect(),
    };
    let mut p = p;
    for v in cands {
        r.push(v);
        let np: BTreeSet<Handle> = p.intersection(&adj[v]).copied().collect();
        let nx: BTreeSet<Handle> = x.intersection(&adj[v]).copied().collect();
        bron_kerbosch(adj, r, np, nx, out);
        r.pop();
        p.remove(&v);
        x.insert(v);
    }
}

/// JSON form of a complex.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ComplexFile {
    pub vertices: Vec<Handle>,
    pub maximal_simplices: Vec<Vec<Handle>>,
}

impl From<&SimplicialComplex> for ComplexFile {
    fn from(x: &SimplicialComplex) -> Self {
        ComplexFile {
            vertices: x.vertices().collect(),
            maximal_simplices: x.maximal_simplices(),
        }
    }
}

impl TryFrom<&ComplexFile> for SimplicialComplex {
    type Error = Error;

    fn try_from(f: &ComplexFile) -> Result<Self> {
        SimplicialComplex::from_maximal(f.vertices.iter().copied(), &f.maximal_simplices)
    }
}

/// Simplices are the pairwise disjoint subsets of `curves` (handles are
/// list indices).
pub fn fine_subcomplex(s: &Surface, curves: &[PolyCurve]) -> Result<SimplicialComplex> {
    if let Some(first) = curves.first() {
        if curves.iter().any(|c| c.kind != first.kind) {
            return Err(Error::Contract("fine complexes do not mix curves and arcs".into()));
        }
    }
    let geos: Vec<Geometry> = curves.iter().map(|c| geometry(s, c)).collect::<Result<_>>()?;
    Ok(SimplicialComplex::flag(geos.len(), |i, j| !curves_meet(s, &geos[i], &geos[j])))
}

/// A simplicial complex claimed to triangulate the `k`-sphere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CombinatorialSphere {
    pub complex: SimplicialComplex,
    pub dim: usize,
    /// Whether the sphere property was actually checked (only for `dim <= 2`).
    pub validated: bool,
}

fn is_connected(x: &SimplicialComplex) -> bool {
    let vs: Vec<Handle> = x.vertices().collect();
    let Some(&start) = vs.first() else { return true };
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for e in x.simplices_of_dim(1) {
            if e.contains(&v) {
                let w = if e[0] == v { e[1] } else { e[0] };
                if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
    }
    seen.len() == vs.len()
}

fn is_pure(x: &SimplicialComplex, k: usize) -> bool {
    x.maximal_simplices().iter().all(|s| s.len() == k + 1)
}

fn is_circle(x: &SimplicialComplex) -> bool {
    x.dim() == 1
        && is_pure(x, 1)
        && x.vertices().all(|v| x.simplices_of_dim(1).iter().filter(|e| e.contains(&v)).count() == 2)
        && is_connected(x)
}

impl CombinatorialSphere {
    pub fn new(complex: SimplicialComplex, dim: usize) -> Result<Self> {
        let ok = match dim {
            0 => complex.vertex_count() == 2 && complex.dim() == 0,
            1 => complex.vertex_count() >= 3 && is_circle(&complex),
            2 => {
                is_pure(&complex, 2)
                    && complex.dim() == 2
                    && is_connected(&complex)
                    && complex.euler_characteristic() == 2
                    && complex.simplices_of_dim(1).iter().all(|e| {
                        complex
                            .simplices_of_dim(2)
                            .iter()
                            .filter(|t| t.contains(&e[0]) && t.contains(&e[1]))
                            .count()
                            == 2
                    })
                    && complex
                        .vertices()
                        .all(|v| complex.link(v).is_ok_and(|l| is_circle(&l)))
            }
            _ => is_pure(&complex, dim),
        };
        if !ok {
            return Err(Error::Contract(format!("complex is not a combinatorial {dim}-sphere")));
        }
        Ok(CombinatorialSphere {
            complex,
            dim,
            validated: dim <= 2,
        })
    }

    pub fn s0() -> Self {
        Self::new(SimplicialComplex::from_maximal([0, 1], &[]).unwrap(), 0).unwrap()
    }

    /// The boundary of an `n`-gon, `n >= 3`.
    pub fn cycle(n: usize) -> Result<Self> {
        let edges: Vec<Vec<Handle>> = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
        Self::new(SimplicialComplex::from_maximal(0..n, &edges)?, 1)
    }

    /// The boundary of the `n`-simplex, an `(n - 1)`-sphere.
    pub fn simplex_boundary(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Contract("the 0-simplex has empty boundary".into()));
        }
        let facets: Vec<Vec<Handle>> = (0..=n)
            .map(|skip| (0..=n).filter(|&v| v != skip).collect())
            .collect();
        Self::new(SimplicialComplex::from_maximal(0..=n, &facets)?, n - 1)
    }

    /// The boundary of the `(k + 1)`-dimensional cross-polytope: vertices
    /// `2i` and `2i + 1` are antipodal. `k = 2` is the octahedron.
    pub fn cross_polytope(k: usize) -> Result<Self> {
        let mut facets: Vec<Vec<Handle>> = vec![vec![]];
        for i in 0..=k {
            facets = facets
                .into_iter()
                .flat_map(|f| {
                    [2 * i, 2 * i + 1].map(|v| {
                        let mut g = f.clone();
                        g.push(v);
                        g
                    })
                })
                .collect();
        }
        let facets = if k == 0 { vec![] } else { facets };
        Self::new(SimplicialComplex::from_maximal(0..2 * (k + 1), &facets)?, k)
    }
}

/// A vertex assignment between two complexes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialMap {
    pub source: SimplicialComplex,
    pub target: SimplicialComplex,
    pub assignment: BTreeMap<Handle, Handle>,
}

impl SimplicialMap {
    pub fn image(&self, s: &[Handle]) -> Option<Vec<Handle>> {
        s.iter().map(|v| self.assignment.get(v).copied()).collect::<Option<Vec<_>>>().map(|v| sorted(&v))
    }
}

/// Every source simplex maps onto a target simplex.
pub fn check_simplicial(f: &SimplicialMap) -> bool {
    f.source
        .simplices()
        .all(|s| f.image(s).is_some_and(|img| f.target.is_simplex(&img)))
}

/// The straight-line homotopy between two assignments is defined iff for
/// every source simplex the union of both images is a simplex according to
/// `is_simplex`.
pub fn straight_line_valid_by<F>(
    source: &SimplicialComplex,
    phi: &BTreeMap<Handle, Handle>,
    psi: &BTreeMap<Handle, Handle>,
    mut is_simplex: F,
) -> bool
where
    F: FnMut(&[Handle]) -> bool,
{
    source.maximal_simplices().iter().all(|s| {
        let mut img = Vec::with_capacity(2 * s.len());
        for v in s {
            match (phi.get(v), psi.get(v)) {
                (Some(a), Some(b)) => {
                    img.push(*a);
                    img.push(*b);
                }
                _ => return false,
            }
        }
        is_simplex(&sorted(&img))
    })
}

pub fn straight_line_homotopy_valid(phi: &SimplicialMap, psi: &SimplicialMap) -> bool {
    phi.source == psi.source
        && straight_line_valid_by(&phi.source, &phi.assignment, &psi.assignment, |s| {
            phi.target.is_simplex(s)
        })
}

/// A point of a simplex given by barycentric weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BarycentricPoint {
    pub weights: BTreeMap<Handle, Q>,
}

impl BarycentricPoint {
    pub fn new(weights: BTreeMap<Handle, Q>) -> Result<Self> {
        if weights.values().any(|w| !w.is_positive()) {
            return Err(Error::Contract("barycentric weights must be positive on the support".into()));
        }
        let total: Q = weights.values().sum();
        if total != Q::one() {
            return Err(Error::Contract("barycentric weights must sum to one".into()));
        }
        Ok(BarycentricPoint { weights })
    }

    pub fn support(&self) -> Vec<Handle> {
        self.weights.keys().copied().collect()
    }

    pub fn lies_in(&self, x: &SimplicialComplex) -> bool {
        x.is_simplex(&self.support())
    }

    /// Image under a vertex map, extended linearly.
    pub fn push_forward(&self, f: &BTreeMap<Handle, Handle>) -> Option<BarycentricPoint> {
        let mut w: BTreeMap<Handle, Q> = BTreeMap::new();
        for (v, t) in &self.weights {
            *w.entry(*f.get(v)?).or_insert_with(Q::zero) += t;
        }
        Some(BarycentricPoint { weights: w })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Coefficients {
    Z,
    Z2,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyGroup {
    /// Degree, from `-1`.
    pub degree: i64,
    pub rank: usize,
    /// Torsion coefficients over the integers (empty for mod-2).
    pub torsion: Vec<String>,
}

impl HomologyGroup {
    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyReport {
    pub coefficients: Coefficients,
    pub reduced: bool,
    pub euler_characteristic: i64,
    pub groups: Vec<HomologyGroup>,
}

impl HomologyReport {
    pub fn group(&self, degree: i64) -> Option<&HomologyGroup> {
        self.groups.iter().find(|g| g.degree == degree)
    }

    /// All reduced groups vanish.
    pub fn is_acyclic(&self) -> bool {
        self.groups.iter().all(|g| g.is_zero())
    }
}

type Matrix = Vec<Vec<BigInt>>;

/// Boundary matrices of the augmented chain complex; index `k + 1` holds
/// `d_k : C_k -> C_{k-1}` with `C_{-1} = Z`.
fn boundary_matrices(x: &SimplicialComplex) -> (Vec<usize>, Vec<Matrix>) {
    let top = x.dim().max(-1);
    let mut bases: Vec<Vec<Vec<Handle>>> = vec![vec![vec![]]];
    for k in 0..=top {
        bases.push(x.simplices_of_dim(k as usize));
    }
    let sizes: Vec<usize> = bases.iter().map(|b| b.len()).collect();
    let mut mats = vec![vec![]];
    for k in 1..bases.len() {
        let index: BTreeMap<&Vec<Handle>, usize> = bases[k - 1].iter().enumerate().map(|(i, s)| (s, i)).collect();
        let mut m = vec![vec![BigInt::zero(); bases[k].len()]; bases[k - 1].len()];
        for (j, s) in bases[k].iter().enumerate() {
            for i in 0..s.len() {
                let mut f = s.clone();
                f.remove(i);
                let sign = if i % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                m[index[&f]][j] = sign;
            }
        }
        mats.push(m);
    }
    (sizes, mats)
}

/// Nonzero invariant factors of an integer matrix.
pub fn invariant_factors(m: &Matrix) -> Vec<BigInt> {
    let mut a = m.clone();
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows && t < cols {
        // full pivoting on the smallest magnitude entry
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, v) in row.iter().enumerate().skip(t) {
                if !v.is_zero() && best.is_none_or(|(bi, bj)| v.abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut dirty = false;
            for i in (t + 1)..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let qt = a[i][t].div_floor(&a[t][t]);
                for j in t..cols {
                    let d = &qt * &a[t][j];
                    a[i][j] -= d;
                }
                if !a[i][t].is_zero() {
                    dirty = true;
                }
            }
            for j in (t + 1)..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let qt = a[t][j].div_floor(&a[t][t]);
                for i in t..rows {
                    let d = &qt * &a[i][t];
                    a[i][j] -= d;
                }
                if !a[t][j].is_zero() {
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
            // move the smallest remaining entry of row/column t to the pivot
            let mut best = (t, t);
            for i in (t + 1)..rows {
                if !a[i][t].is_zero() && a[i][t].abs() < a[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in (t + 1)..cols {
                if !a[t][j].is_zero() && a[t][j].abs() < a[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            if best.0 != t {
                a.swap(t, best.0);
            }
            if best.1 != t {
                for row in a.iter_mut() {
                    row.swap(t, best.1);
                }
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    // normalise to a divisibility chain
    for i in 0..diag.len() {
        for j in (i + 1)..diag.len() {
            let g = diag[i].gcd(&diag[j]);
            let l = diag[i].lcm(&diag[j]);
            diag[i] = g;
            diag[j] = l;
        }
    }
    diag
}

fn rank_mod2(m: &Matrix) -> usize {
    let mut a: Vec<Vec<bool>> = m.iter().map(|r| r.iter().map(|v| v.is_odd()).collect()).collect();
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| a[r][c]) else { continue };
        a.swap(rank, p);
        for r in 0..rows {
            if r != rank && a[r][c] {
                for k in c..cols {
                    let v = a[rank][k];
                    a[r][k] ^= v;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Reduced homology in degrees `-1 ..= dim`.
pub fn homology(x: &SimplicialComplex, coefficients: Coefficients) -> HomologyReport {
    let (sizes, mats) = boundary_matrices(x);
    let levels = sizes.len();
    let mut ranks = vec![0usize; levels + 1];
    let mut factors: Vec<Vec<BigInt>> = vec![vec![]; levels + 1];
    for k in 1..levels {
        match coefficients {
            Coefficients::Z => {
                let f = invariant_factors(&mats[k]);
                ranks[k] = f.len();
                factors[k] = f;
            }
            Coefficients::Z2 => ranks[k] = rank_mod2(&mats[k]),
        }
    }
    let groups = (0..levels)
        .map(|k| {
            let rank = sizes[k] - ranks[k] - ranks[k + 1];
            let torsion = factors[k + 1]
                .iter()
                .filter(|f| **f > BigInt::one())
                .map(|f| f.to_string())
                .collect();
            HomologyGroup {
                degree: k as i64 - 1,
                rank,
                torsion,
            }
        })
        .collect();
    HomologyReport {
        coefficients,
        reduced: true,
        euler_characteristic: x.euler_characteristic(),
        groups,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn octahedron_link_is_a_square() {
        let o = CombinatorialSphere::cross_polytope(2).unwrap();
        let l = o.complex.link(0).unwrap();
        assert_eq!(l.vertex_count(), 4);
        assert!(is_circle(&l));
        assert_eq!(l.simplices_of_dim(1).len(), 4);
    }

    #[test]
    fn star_of_simplex_vertex_is_everything() {
        let x = SimplicialComplex::from_maximal(0..3, &[vec![0, 1, 2]]).unwrap();
        assert_eq!(x.star(1).unwrap(), x);
        let d = SimplicialComplex::from_maximal(0..3, &[]).unwrap();
        let st = d.star(2).unwrap();
        assert_eq!(st.vertex_count(), 1);
        assert_eq!(d.link(2).unwrap().dim(), -1);
    }

    #[test]
    fn four_cycle_flag_complex() {
        let x = SimplicialComplex::flag(4, |i, j| (i + 1) % 4 == j || (j + 1) % 4 == i);
        assert_eq!(x.simplices_of_dim(1).len(), 4);
        assert!(x.simplices_of_dim(2).is_empty());
    }

    #[test]
    fn sphere_homology() {
        let s = CombinatorialSphere::simplex_boundary(3).unwrap();
        let h = homology(&s.complex, Coefficients::Z);
        for g in &h.groups {
            assert_eq!(g.rank, usize::from(g.degree == 2), "{g:?}");
            assert!(g.torsion.is_empty());
        }
        let o = CombinatorialSphere::cross_polytope(2).unwrap();
        assert_eq!(homology(&o.complex, Coefficients::Z).group(2).unwrap().rank, 1);
    }

    #[test]
    fn empty_complex_has_reduced_h_minus_one() {
        let h = homology(&SimplicialComplex::empty(), Coefficients::Z);
        assert_eq!(h.groups.len(), 1);
        assert_eq!(h.groups[0].rank, 1);
    }

    #[test]
    fn torsion_of_a_matrix() {
        let m: Matrix = vec![vec![2.into(), 0.into()], vec![0.into(), 3.into()]];
        assert_eq!(invariant_factors(&m), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn maps_and_homotopies() {
        let src = CombinatorialSphere::s0().complex;
        let tgt = SimplicialComplex::from_maximal(0..3, &[vec![0, 1], vec![1, 2]]).unwrap();
        let phi = SimplicialMap {
            source: src.clone(),
            target: tgt.clone(),
            assignment: BTreeMap::from([(0, 0), (1, 2)]),
        };
        assert!(check_simplicial(&phi));
        let psi = SimplicialMap {
            assignment: BTreeMap::from([(0, 1), (1, 1)]),
            ..phi.clone()
        };
        assert!(straight_line_homotopy_valid(&phi, &psi));
        assert!(straight_line_homotopy_valid(&phi, &phi));
        let bad = SimplicialMap {
            assignment: BTreeMap::from([(0, 2), (1, 2)]),
            ..phi.clone()
        };
        assert!(!straight_line_homotopy_valid(&phi, &bad));
        let edge_src = SimplicialComplex::from_maximal(0..2, &[vec![0, 1]]).unwrap();
        let non = SimplicialMap {
            source: edge_src,
            target: tgt,
            assignment: BTreeMap::from([(0, 0), (1, 2)]),
        };
        assert!(!check_simplicial(&non));
    }

    #[test]
    fn barycentric_push_forward() {
        let half = Q::new(1.into(), 2.into());
        let p = BarycentricPoint::new(BTreeMap::from([(0, half.clone()), (1, half)])).unwrap();
        let img = p.push_forward(&BTreeMap::from([(0, 5), (1, 5)])).unwrap();
        assert_eq!(img.weights[&5], Q::one());
    }
}
