//! Mutation engines on the diametric seed.
//!
//! Two layers live here. The non-symmetric layer is an honest cluster
//! algebra: a quiver on ordered solid pairs whose variables are tracked by
//! exact values at a few sample matrices. The symmetric layer works on sets
//! of canonical circular pairs and moves between them with the three-term
//! (P1) and (P2) relations, plus the one-off exchange at a seam pair.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circ::{binom2, combinations, enumerate_pairs, generate_diametric, CircError, CircularPair, Label, NonSymPair};
use crate::linalg::{circular_minor, nonsym_minor, signed_minor, ExactMatrix, Rational};
use crate::network::{response_matrix, well_connected};
use crate::sample::{random_conductance, rng_from_seed, SeededRng};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MutationError {
    #[error("mutation needs n >= {min}, got {n}")]
    TooSmall { n: usize, min: usize },
    #[error("{what} is limited to n <= {limit}, got {n}")]
    Scale { what: &'static str, n: usize, limit: usize },
    #[error("vertex {0} is frozen")]
    Frozen(String),
    #[error("no vertex carries {0}")]
    NoVertex(String),
    #[error("no {kind} exchange at {site}")]
    Inapplicable { kind: MoveKind, site: String },
    #[error("{0} is adjacent to its correspondent")]
    AdjacentPartner(String),
    #[error("no alternating orientation: {0}")]
    Orientation(String),
    #[error("construction of the initial graph failed: {0}")]
    Construction(String),
    #[error("not a solid seed: {0}")]
    NotSolid(String),
    #[error("seam exchanges are only defined from the initial cluster")]
    LimitingDepth,
    #[error("quiver lost its symmetry after mutating at {0}")]
    SymmetryBroken(String),
    #[error("{0} circular pairs do not fit the cluster bitmask")]
    TooManyPairs(usize),
    #[error("{0}")]
    Circ(#[from] CircError),
}

// ---------------------------------------------------------------------------
// sample points

/// What a value vector is, relative to the minors at the sample points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Identification {
    Pair(NonSymPair),
    NonPlucker,
    Indeterminate,
}

/// Fixed evaluation points: non-symmetric matrices `D·R·E` (positive
/// diagonal scalings of response matrices) followed by symmetric response
/// matrices. Every circular minor is positive at every point, and so is every
/// cluster variable reachable by subtraction-free exchanges.
#[derive(Debug, Clone)]
pub struct Samples {
    n: usize,
    nonsym: Vec<ExactMatrix>,
    sym: Vec<ExactMatrix>,
    table: HashMap<Vec<Rational>, NonSymPair>,
    sym_table: HashMap<Vec<Rational>, CircularPair>,
    ambiguous: HashSet<Vec<Rational>>,
}

const BASE_POINTS: usize = 3;
const MAX_POINTS: usize = 12;

impl Samples {
    pub fn new(n: usize, seed: u64) -> Self {
        let mut rng = rng_from_seed(seed);
        let mut s = Samples {
            n,
            nonsym: Vec::new(),
            sym: Vec::new(),
            table: HashMap::new(),
            sym_table: HashMap::new(),
            ambiguous: HashSet::new(),
        };
        for _ in 0..BASE_POINTS {
            s.push_point(&mut rng);
        }
        while !s.rebuild() && s.sym.len() < MAX_POINTS {
            s.push_point(&mut rng);
        }
        s
    }

    fn push_point(&mut self, rng: &mut SeededRng) {
        let n = self.n;
        let wc = well_connected(n);
        let r = response_matrix(&wc.with_random_conductances(rng)).expect("well-connected network is connected");
        self.sym.push(r.into_matrix());
        let r = response_matrix(&wc.with_random_conductances(rng)).expect("well-connected network is connected");
        let d: Vec<Rational> = (0..n).map(|_| random_conductance(rng)).collect();
        let e: Vec<Rational> = (0..n).map(|_| random_conductance(rng)).collect();
        let m = r.matrix();
        self.nonsym.push(ExactMatrix::from_fn(n, n, |i, j| &d[i] * m.get(i, j) * &e[j]));
    }

    // false when two distinct pairs share a value vector
    fn rebuild(&mut self) -> bool {
        self.table.clear();
        self.sym_table.clear();
        self.ambiguous.clear();
        let mut ok = true;
        for x in enumerate_pairs(self.n, None).iter() {
            let sv = self.sym_values(x);
            if self.sym_table.insert(sv.clone(), x.clone()).is_some() {
                self.ambiguous.insert(sv);
                ok = false;
            }
            for r in x.reps() {
                let v = self.values(&r);
                if self.table.insert(v.clone(), r).is_some() {
                    self.ambiguous.insert(v);
                    ok = false;
                }
            }
        }
        ok
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn len(&self) -> usize {
        self.nonsym.len() + self.sym.len()
    }
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
    pub fn nonsym_points(&self) -> &[ExactMatrix] {
        &self.nonsym
    }
    pub fn sym_points(&self) -> &[ExactMatrix] {
        &self.sym
    }
    /// Index of the first symmetric point in a value vector.
    pub fn sym_offset(&self) -> usize {
        self.nonsym.len()
    }

    /// Minor of an ordered pair at every point, non-symmetric points first.
    pub fn values(&self, x: &NonSymPair) -> Vec<Rational> {
        self.nonsym
            .iter()
            .chain(&self.sym)
            .map(|m| nonsym_minor(m, x).expect("pair fits the sample matrix"))
            .collect()
    }

    /// Minor of a canonical pair at the symmetric points.
    pub fn sym_values(&self, x: &CircularPair) -> Vec<Rational> {
        self.sym.iter().map(|m| circular_minor(m, x).expect("pair fits the sample matrix")).collect()
    }

    /// The unique ordered pair whose minor matches `v` at every point.
    pub fn identify(&self, v: &[Rational]) -> Identification {
        if self.ambiguous.contains(v) {
            return Identification::Indeterminate;
        }
        match self.table.get(v) {
            Some(p) => Identification::Pair(p.clone()),
            None => Identification::NonPlucker,
        }
    }

    /// Canonical pair matching `v` at the symmetric points.
    pub fn identify_sym(&self, v: &[Rational]) -> Option<CircularPair> {
        if self.ambiguous.contains(v) {
            return None;
        }
        self.sym_table.get(v).cloned()
    }
}

// ---------------------------------------------------------------------------
// initial graphs

/// An undirected graph on labelled vertices; edges are stored `(i, j)` with
/// `i < j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UGraph<L> {
    pub vertices: Vec<L>,
    pub frozen: Vec<bool>,
    pub edges: BTreeSet<(usize, usize)>,
}

impl<L: Ord + Clone> UGraph<L> {
    pub fn index_of(&self, x: &L) -> Option<usize> {
        self.vertices.binary_search(x).ok()
    }
    pub fn neighbours(&self, i: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| if a == i { Some(b) } else if b == i { Some(a) } else { None })
            .collect()
    }
    pub fn degree(&self, i: usize) -> usize {
        self.neighbours(i).len()
    }
}

fn is_frozen(x: &CircularPair) -> bool {
    x.is_empty() || x.classify().maximal
}

fn strip(list: &[Label], drop: &[Label]) -> Vec<Label> {
    list.iter().copied().filter(|x| !drop.contains(x)).collect()
}

fn nsp(n: usize, p: Vec<Label>, q: Vec<Label>) -> Option<NonSymPair> {
    NonSymPair::new(n, p, q).ok()
}

/// The six terms `[Δ^{a,c}, Δ^{b,d}, Δ^{a,d}, Δ^{b,c}, Δ^{ab,cd}, Δ]` of
/// (P1) on a square ground block.
fn p1_terms(n: usize, rows: &[Label], cols: &[Label], a: Label, b: Label, c: Label, d: Label) -> Option<[NonSymPair; 6]> {
    let t = |dr: &[Label], dc: &[Label]| nsp(n, strip(rows, dr), strip(cols, dc));
    Some([t(&[a], &[c])?, t(&[b], &[d])?, t(&[a], &[d])?, t(&[b], &[c])?, t(&[a, b], &[c, d])?, t(&[], &[])?])
}

/// The two (P1) relations in which the solid pair `x` is a left-hand term:
/// one grows `x` at its start, the other at its end. Each is returned as
/// `(partner, [same-size terms], [smaller, larger])`.
fn solid_p1_options(x: &NonSymPair) -> Vec<(NonSymPair, [NonSymPair; 2], [NonSymPair; 2])> {
    let n = x.n();
    let (p, q) = (x.p(), x.q());
    let k = p.len();
    let w = |v: i64| crate::circ::wrap(v, n);
    let mut out = Vec::new();
    // grow at the start: x = Δ^{p0,q0}
    let mut rows = vec![w(p[0] as i64 - 1)];
    rows.extend_from_slice(p);
    let mut cols = vec![w(q[0] as i64 + 1)];
    cols.extend_from_slice(q);
    if NonSymPair::new(n, rows.clone(), cols.clone()).is_ok() {
        if let Some(t) = p1_terms(n, &rows, &cols, rows[0], rows[k], cols[0], cols[k]) {
            let [_, bd, ad, bc, abcd, g] = t;
            out.push((bd, [ad, bc], [abcd, g]));
        }
    }
    // grow at the end: x = Δ^{p_{k+1},q_{k+1}}
    let mut rows = p.to_vec();
    rows.push(w(p[k - 1] as i64 + 1));
    let mut cols = q.to_vec();
    cols.push(w(q[k - 1] as i64 - 1));
    if NonSymPair::new(n, rows.clone(), cols.clone()).is_ok() {
        if let Some(t) = p1_terms(n, &rows, &cols, rows[0], rows[k], cols[0], cols[k]) {
            let [ac, _, ad, bc, abcd, g] = t;
            out.push((ac, [ad, bc], [abcd, g]));
        }
    }
    out
}

/// `U_n`: the diametric pairs and the empty pair, joined by the (P1)
/// neighbourhoods of the non-frozen, non-seam pairs and by the seam chain.
pub fn build_u(n: usize) -> Result<UGraph<CircularPair>, MutationError> {
    if n < 4 {
        return Err(MutationError::TooSmall { n, min: 4 });
    }
    let mut vertices: Vec<CircularPair> = generate_diametric(n).into_members().into_iter().collect();
    vertices.push(CircularPair::empty(n));
    vertices.sort();
    let frozen: Vec<bool> = vertices.iter().map(is_frozen).collect();
    let set: BTreeSet<CircularPair> = vertices.iter().cloned().collect();
    let idx = |x: &CircularPair| vertices.binary_search(x).expect("vertex present");
    let mut edges = BTreeSet::new();
    for (i, x) in vertices.iter().enumerate() {
        if frozen[i] || x.classify().limiting {
            continue;
        }
        let mut found: BTreeSet<BTreeSet<CircularPair>> = BTreeSet::new();
        for r in x.reps() {
            for (_, same, sizes) in solid_p1_options(&r) {
                let nb: BTreeSet<CircularPair> = same.iter().chain(&sizes).map(|y| y.canonical()).collect();
                if nb.iter().all(|y| set.contains(y)) {
                    found.insert(nb);
                }
            }
        }
        if found.len() != 1 {
            return Err(MutationError::Construction(format!("{x} has {} admissible (P1) neighbourhoods", found.len())));
        }
        for y in found.into_iter().next().expect("one neighbourhood") {
            let j = idx(&y);
            edges.insert((i.min(j), i.max(j)));
        }
    }
    let lim: Vec<usize> = (0..vertices.len()).filter(|&i| vertices[i].classify().limiting).collect();
    for &i in &lim {
        for &j in &lim {
            if i < j && vertices[i].k().abs_diff(vertices[j].k()) == 1 {
                edges.insert((i, j));
            }
        }
    }
    Ok(UGraph { vertices, frozen, edges })
}

/// `U'_n`: both orientations of every diametric pair plus the empty pair.
/// Seam pairs are chained only when their row sets meet.
pub fn build_uprime(n: usize) -> Result<UGraph<NonSymPair>, MutationError> {
    if n < 4 {
        return Err(MutationError::TooSmall { n, min: 4 });
    }
    let mut vertices: Vec<NonSymPair> = generate_diametric(n).iter().flat_map(|x| x.reps()).collect();
    vertices.push(NonSymPair::empty(n));
    vertices.sort();
    let frozen: Vec<bool> = vertices.iter().map(|v| is_frozen(&v.canonical())).collect();
    let set: BTreeSet<NonSymPair> = vertices.iter().cloned().collect();
    let idx = |x: &NonSymPair| vertices.binary_search(x).expect("vertex present");
    let mut edges = BTreeSet::new();
    for (i, x) in vertices.iter().enumerate() {
        if frozen[i] || x.canonical().classify().limiting {
            continue;
        }
        let opts: Vec<_> = solid_p1_options(x)
            .into_iter()
            .filter(|(_, same, sizes)| same.iter().chain(sizes).all(|y| set.contains(y)))
            .collect();
        if opts.len() != 1 {
            return Err(MutationError::Construction(format!("{x} has {} admissible (P1) neighbourhoods", opts.len())));
        }
        let (_, same, sizes) = &opts[0];
        for y in same.iter().chain(sizes) {
            let j = idx(y);
            edges.insert((i.min(j), i.max(j)));
        }
    }
    let lim: Vec<usize> = (0..vertices.len()).filter(|&i| vertices[i].canonical().classify().limiting).collect();
    for &i in &lim {
        for &j in &lim {
            let (a, b) = (&vertices[i], &vertices[j]);
            if i < j && a.k().abs_diff(b.k()) == 1 && a.p().iter().any(|x| b.p().contains(x)) {
                edges.insert((i, j));
            }
        }
    }
    Ok(UGraph { vertices, frozen, edges })
}

// ---------------------------------------------------------------------------
// orientation

/// Local directions around a vertex in the embedding with size as radius
/// and `T` as angle, listed in cyclic order.
const DIRS: [(i64, i64); 8] = [(1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1)];

fn position(x: &NonSymPair) -> Option<(i64, i64)> {
    x.triple().ok().map(|t| (t.t2, t.k as i64))
}

fn direction(n: usize, from: &NonSymPair, to: &NonSymPair) -> Option<usize> {
    let (t0, k0) = position(from)?;
    let step = match position(to) {
        None => (0, -1),
        Some((t1, k1)) => {
            let m = 2 * n as i64;
            let mut dt = (t1 - t0).rem_euclid(m);
            if dt > n as i64 {
                dt -= m;
            }
            (dt, k1 - k0)
        }
    };
    DIRS.iter().position(|&d| d == step)
}

/// Union-find with parity, over edge indices.
struct ParityDsu {
    parent: Vec<usize>,
    parity: Vec<u8>,
}

impl ParityDsu {
    fn new(m: usize) -> Self {
        ParityDsu { parent: (0..m).collect(), parity: vec![0; m] }
    }
    fn find(&mut self, x: usize) -> (usize, u8) {
        let p = self.parent[x];
        if p == x {
            return (x, 0);
        }
        let (r, par) = self.find(p);
        self.parent[x] = r;
        self.parity[x] ^= par;
        (r, self.parity[x])
    }
    /// Requires `o[x] ^ o[y] == rel`; false on contradiction.
    fn union(&mut self, x: usize, y: usize, rel: u8) -> bool {
        let (rx, px) = self.find(x);
        let (ry, py) = self.find(y);
        if rx == ry {
            return px ^ py == rel;
        }
        self.parent[rx] = ry;
        self.parity[rx] = px ^ py ^ rel;
        true
    }
}

/// Orients `edges` so that in- and out-edges alternate around every
/// non-frozen vertex, in the cyclic order of the embedding. In each
/// component of the constraint system the first circle edge points towards
/// increasing `T`; components without a circle edge point their first edge
/// from the smaller vertex to the larger.
pub fn orient_alternating(
    n: usize,
    vertices: &[NonSymPair],
    frozen: &[bool],
    edges: &BTreeSet<(usize, usize)>,
) -> Result<Vec<Vec<i32>>, MutationError> {
    let list: Vec<(usize, usize)> = edges.iter().copied().collect();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); vertices.len()];
    for (e, &(a, b)) in list.iter().enumerate() {
        incident[a].push(e);
        incident[b].push(e);
    }
    let mut dsu = ParityDsu::new(list.len());
    for v in 0..vertices.len() {
        if frozen[v] || incident[v].is_empty() {
            continue;
        }
        let mut around: Vec<(usize, usize)> = Vec::new();
        for &e in &incident[v] {
            let (a, b) = list[e];
            let u = if a == v { b } else { a };
            let d = direction(n, &vertices[v], &vertices[u]).ok_or_else(|| {
                MutationError::Orientation(format!("edge {}–{} leaves the local grid", vertices[v], vertices[u]))
            })?;
            around.push((d, e));
        }
        around.sort();
        if around.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(MutationError::Orientation(format!("two edges at {} share a direction", vertices[v])));
        }
        if around.len() % 2 == 1 {
            return Err(MutationError::Orientation(format!("{} has odd degree {}", vertices[v], around.len())));
        }
        let low = |e: usize| u8::from(list[e].0 == v);
        for i in 0..around.len() {
            let (e, f) = (around[i].1, around[(i + 1) % around.len()].1);
            if !dsu.union(e, f, 1 ^ low(e) ^ low(f)) {
                return Err(MutationError::Orientation(format!("alternation around {} is contradictory", vertices[v])));
            }
        }
    }
    // o[e] = 1 means the edge runs from its smaller endpoint to its larger
    let mut root_value: HashMap<usize, u8> = HashMap::new();
    for (e, &(a, b)) in list.iter().enumerate() {
        let (r, par) = dsu.find(e);
        if root_value.contains_key(&r) {
            continue;
        }
        let circle = match (position(&vertices[a]), position(&vertices[b])) {
            (Some((_, ka)), Some((_, kb))) => ka == kb,
            _ => false,
        };
        if circle {
            let forward = direction(n, &vertices[a], &vertices[b]) == Some(0);
            root_value.insert(r, u8::from(forward) ^ par);
        }
    }
    for (e, _) in list.iter().enumerate() {
        let (r, par) = dsu.find(e);
        root_value.entry(r).or_insert(1 ^ par);
    }
    let mut b = vec![vec![0i32; vertices.len()]; vertices.len()];
    for (e, &(x, y)) in list.iter().enumerate() {
        let (r, par) = dsu.find(e);
        let o = root_value[&r] ^ par;
        let (from, to) = if o == 1 { (x, y) } else { (y, x) };
        b[from][to] += 1;
        b[to][from] -= 1;
    }
    Ok(b)
}

/// A quiver on ordered pairs: `b[i][j] > 0` counts arrows `i → j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quiver {
    pub labels: Vec<NonSymPair>,
    pub frozen: Vec<bool>,
    pub b: Vec<Vec<i32>>,
}

impl Quiver {
    pub fn len(&self) -> usize {
        self.labels.len()
    }
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
    /// Undirected support, frozen–frozen arrows ignored.
    pub fn support(&self) -> BTreeSet<(usize, usize)> {
        let mut out = BTreeSet::new();
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                if self.b[i][j] != 0 && !(self.frozen[i] && self.frozen[j]) {
                    out.insert((i, j));
                }
            }
        }
        out
    }

    /// Standard matrix mutation at `k`; arrows between frozen vertices are
    /// dropped afterwards.
    pub fn mutate(&mut self, k: usize) {
        let m = self.len();
        let old = self.b.clone();
        for i in 0..m {
            for j in 0..m {
                self.b[i][j] = if i == k || j == k {
                    -old[i][j]
                } else {
                    let (x, y) = (old[i][k], old[k][j]);
                    old[i][j] + if x > 0 && y > 0 { x * y } else if x < 0 && y < 0 { -(x * y) } else { 0 }
                };
            }
        }
        for i in 0..m {
            for j in 0..m {
                if self.frozen[i] && self.frozen[j] {
                    self.b[i][j] = 0;
                }
            }
        }
    }
}

/// The quiver `Q_n`: `U'_n` oriented alternately.
pub fn build_quiver(n: usize) -> Result<Quiver, MutationError> {
    let u = build_uprime(n)?;
    let b = orient_alternating(n, &u.vertices, &u.frozen, &u.edges)?;
    Ok(Quiver { labels: u.vertices, frozen: u.frozen, b })
}

// ---------------------------------------------------------------------------
// solid clusters and seeds

/// Flags for the three nested notions of solidity.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SolidSeedFlags {
    pub solid_cluster: bool,
    pub solid_seed: bool,
    pub symmetric_solid_seed: bool,
}

/// Positions `(T2, k)` that a solid cluster must fill exactly once.
fn solid_positions(n: usize) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for k in 1..=(n / 2) as i64 {
        for t2 in 0..2 * n as i64 {
            if 2 * k == n as i64 && t2 % 2 == 0 {
                continue;
            }
            out.push((t2, k));
        }
    }
    out
}

/// `Some(map position → pair)` when `s` is a solid cluster.
fn solid_layout(n: usize, s: &BTreeSet<NonSymPair>) -> Option<BTreeMap<(i64, i64), NonSymPair>> {
    if s.len() != 2 * binom2(n) + 1 || !s.contains(&NonSymPair::empty(n)) {
        return None;
    }
    let mut at = BTreeMap::new();
    for x in s.iter().filter(|x| !x.is_empty()) {
        let t = x.triple().ok()?;
        if at.insert((t.t2, t.k as i64), x.clone()).is_some() {
            return None;
        }
    }
    if solid_positions(n).iter().any(|p| !at.contains_key(p)) {
        return None;
    }
    let m = 2 * n as i64;
    let d = |x: &NonSymPair| x.triple().expect("solid").d;
    for (&(t, k), x) in &at {
        for (dt, dk) in [(1, 0), (0, 1)] {
            if let Some(y) = at.get(&((t + dt).rem_euclid(m), k + dk)) {
                if (d(x) - d(y)).abs() != 2 {
                    return None;
                }
            }
        }
    }
    Some(at)
}

pub fn is_solid_cluster(n: usize, s: &BTreeSet<NonSymPair>) -> bool {
    solid_layout(n, s).is_some()
}

/// Edges prescribed for a solid seed on the solid cluster `s`, as index
/// pairs into the sorted vertex list.
pub fn solid_seed_edges(n: usize, s: &BTreeSet<NonSymPair>) -> Result<(Vec<NonSymPair>, Vec<bool>, BTreeSet<(usize, usize)>), MutationError> {
    let at = solid_layout(n, s).ok_or_else(|| MutationError::NotSolid("not a solid cluster".into()))?;
    let vertices: Vec<NonSymPair> = s.iter().cloned().collect();
    let frozen: Vec<bool> = vertices.iter().map(|v| is_frozen(&v.canonical())).collect();
    let idx = |x: &NonSymPair| vertices.binary_search(x).expect("member");
    let m = 2 * n as i64;
    let d = |x: &NonSymPair| x.triple().expect("solid").d;
    let mut edges = BTreeSet::new();
    let add = |edges: &mut BTreeSet<(usize, usize)>, i: usize, j: usize| {
        if !(frozen[i] && frozen[j]) {
            edges.insert((i.min(j), i.max(j)));
        }
    };
    for (&(t, k), x) in &at {
        let i = idx(x);
        for (dt, dk) in [(1, 0), (0, 1)] {
            if let Some(y) = at.get(&((t + dt).rem_euclid(m), k + dk)) {
                add(&mut edges, i, idx(y));
            }
        }
        for dt in [1, -1] {
            let t1 = (t + dt).rem_euclid(m);
            if let (Some(y), Some(a), Some(f)) = (at.get(&(t1, k + 1)), at.get(&(t1, k)), at.get(&(t, k + 1))) {
                if (d(a) - d(f)).abs() == 4 {
                    add(&mut edges, i, idx(y));
                }
            }
        }
    }
    let e0 = idx(&NonSymPair::empty(n));
    for (i, v) in vertices.iter().enumerate() {
        if v.k() == 1 && !frozen[i] {
            let deg = edges.iter().filter(|&&(a, b)| a == i || b == i).count();
            if deg % 2 == 1 {
                add(&mut edges, i, e0);
            }
        }
    }
    Ok((vertices, frozen, edges))
}

/// Whether in- and out-arrows alternate around every non-frozen vertex.
fn alternates(n: usize, q: &Quiver) -> bool {
    for v in 0..q.len() {
        if q.frozen[v] {
            continue;
        }
        let mut around = Vec::new();
        for u in 0..q.len() {
            if q.b[v][u] != 0 {
                match direction(n, &q.labels[v], &q.labels[u]) {
                    Some(d) => around.push((d, q.b[v][u] > 0)),
                    None => return false,
                }
            }
        }
        around.sort();
        for i in 0..around.len() {
            if around[i].1 == around[(i + 1) % around.len()].1 {
                return false;
            }
        }
    }
    true
}

fn c_closed(s: &BTreeSet<NonSymPair>) -> bool {
    s.iter().all(|x| s.contains(&x.correspond()))
}

/// Flags for a bare set of ordered pairs. A solid cluster always carries
/// the prescribed seed quiver when that quiver can be oriented.
pub fn classify_cluster(n: usize, s: &BTreeSet<NonSymPair>) -> SolidSeedFlags {
    let mut f = SolidSeedFlags::default();
    if !is_solid_cluster(n, s) {
        return f;
    }
    f.solid_cluster = true;
    f.solid_seed = solid_seed_edges(n, s)
        .and_then(|(v, fr, e)| orient_alternating(n, &v, &fr, &e))
        .is_ok();
    f.symmetric_solid_seed = f.solid_seed && c_closed(s);
    f
}

// ---------------------------------------------------------------------------
// seeds of the non-symmetric algebra

/// A seed: quiver, variable values at the sample points, and the ordered
/// pair each variable equals (when it is one).
#[derive(Debug, Clone)]
pub struct Seed {
    n: usize,
    quiver: Quiver,
    values: Vec<Vec<Rational>>,
    ident: Vec<Option<NonSymPair>>,
    partner: Vec<usize>,
    samples: Arc<Samples>,
}

impl PartialEq for Seed {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.quiver == other.quiver && self.values == other.values
    }
}

impl Seed {
    fn from_quiver(n: usize, quiver: Quiver, samples: Arc<Samples>) -> Seed {
        let values: Vec<Vec<Rational>> = quiver.labels.iter().map(|x| samples.values(x)).collect();
        let ident = quiver.labels.iter().map(|x| Some(x.clone())).collect();
        let partner = quiver
            .labels
            .iter()
            .map(|x| quiver.labels.binary_search(&x.correspond()).expect("vertex set is closed under c"))
            .collect();
        Seed { n, quiver, values, ident, partner, samples }
    }

    /// The seed on `V'_n` with quiver `Q_n`.
    pub fn initial(n: usize, samples: Arc<Samples>) -> Result<Seed, MutationError> {
        Ok(Seed::from_quiver(n, build_quiver(n)?, samples))
    }

    /// The solid seed carried by a c-closed solid cluster.
    pub fn from_solid_cluster(n: usize, s: &BTreeSet<NonSymPair>, samples: Arc<Samples>) -> Result<Seed, MutationError> {
        if !c_closed(s) {
            return Err(MutationError::NotSolid("cluster is not closed under c".into()));
        }
        let (labels, frozen, edges) = solid_seed_edges(n, s)?;
        let b = orient_alternating(n, &labels, &frozen, &edges)?;
        Ok(Seed::from_quiver(n, Quiver { labels, frozen, b }, samples))
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }
    pub fn values(&self, v: usize) -> &[Rational] {
        &self.values[v]
    }
    pub fn samples(&self) -> &Arc<Samples> {
        &self.samples
    }
    pub fn len(&self) -> usize {
        self.quiver.len()
    }
    pub fn is_empty(&self) -> bool {
        self.quiver.is_empty()
    }
    pub fn ident(&self, v: usize) -> Option<&NonSymPair> {
        self.ident[v].as_ref()
    }
    pub fn partner(&self, v: usize) -> usize {
        self.partner[v]
    }
    pub fn is_frozen(&self, v: usize) -> bool {
        self.quiver.frozen[v]
    }

    /// Vertex whose variable currently equals `x`.
    pub fn vertex(&self, x: &NonSymPair) -> Option<usize> {
        self.ident.iter().position(|i| i.as_ref() == Some(x))
    }

    /// Identified variables, when every variable is an ordered pair.
    pub fn cluster(&self) -> Option<BTreeSet<NonSymPair>> {
        self.ident.iter().cloned().collect()
    }

    /// Quiver mutation at `v` with the exchange
    /// `x_v x_v' = Π_{i→v} x_i + Π_{v→i} x_i` evaluated at every point.
    pub fn mutate_cm(&self, v: usize) -> Result<Seed, MutationError> {
        if self.quiver.frozen[v] {
            return Err(MutationError::Frozen(self.describe(v)));
        }
        let pts = self.samples.len();
        let mut next = self.clone();
        let col: Vec<i32> = (0..self.len()).map(|i| self.quiver.b[i][v]).collect();
        let mut new = Vec::with_capacity(pts);
        for s in 0..pts {
            let (mut inn, mut out) = (Rational::one(), Rational::one());
            for (i, &m) in col.iter().enumerate() {
                for _ in 0..m.unsigned_abs() {
                    if m > 0 {
                        inn *= &self.values[i][s];
                    } else {
                        out *= &self.values[i][s];
                    }
                }
            }
            let x = &self.values[v][s];
            debug_assert!(!x.is_zero());
            new.push((inn + out) / x);
        }
        next.ident[v] = match self.samples.identify(&new) {
            Identification::Pair(p) => Some(p),
            _ => None,
        };
        next.values[v] = new;
        next.quiver.mutate(v);
        Ok(next)
    }

    /// `μ_v` followed by `μ_{c(v)}`, with the edge symmetry
    /// `#(x→y) = #(c(y)→c(x))` checked afterwards.
    pub fn mutate_sym(&self, v: usize) -> Result<Seed, MutationError> {
        let w = self.partner[v];
        if w != v && self.quiver.b[v][w] != 0 {
            return Err(MutationError::AdjacentPartner(self.describe(v)));
        }
        let s = self.mutate_cm(v)?;
        let s = if w == v { s } else { s.mutate_cm(w)? };
        if !s.is_symmetric() {
            return Err(MutationError::SymmetryBroken(self.describe(v)));
        }
        Ok(s)
    }

    pub fn is_symmetric(&self) -> bool {
        let m = self.len();
        (0..m).all(|x| (0..m).all(|y| self.quiver.b[x][y] == self.quiver.b[self.partner[y]][self.partner[x]]))
    }

    /// Values at the symmetric points, one entry per c-orbit.
    pub fn symmetrize(&self) -> BTreeSet<Vec<Rational>> {
        let off = self.samples.sym_offset();
        self.values.iter().map(|v| v[off..].to_vec()).collect()
    }

    pub fn flags(&self) -> SolidSeedFlags {
        let mut f = SolidSeedFlags::default();
        let Some(s) = self.cluster() else { return f };
        let Some(_) = solid_layout(self.n, &s) else { return f };
        f.solid_cluster = true;
        let Ok((labels, frozen, edges)) = solid_seed_edges(self.n, &s) else { return f };
        // compare in terms of the current variables
        let here: Vec<NonSymPair> = self.ident.iter().map(|x| x.clone().expect("identified")).collect();
        let pos = |x: &NonSymPair| here.iter().position(|y| y == x).expect("member");
        let frozen_ok = labels.iter().zip(&frozen).all(|(x, &f)| self.quiver.frozen[pos(x)] == f);
        let ours: BTreeSet<(usize, usize)> = edges
            .iter()
            .map(|&(a, b)| {
                let (i, j) = (pos(&labels[a]), pos(&labels[b]));
                (i.min(j), i.max(j))
            })
            .collect();
        let mult_ok = (0..self.len()).all(|i| (0..self.len()).all(|j| self.quiver.b[i][j].abs() <= 1));
        let current = Quiver { labels: here, frozen: self.quiver.frozen.clone(), b: self.quiver.b.clone() };
        f.solid_seed = frozen_ok && mult_ok && ours == self.quiver.support() && alternates(self.n, &current);
        f.symmetric_solid_seed = f.solid_seed && c_closed(&s);
        f
    }

    fn describe(&self, v: usize) -> String {
        match &self.ident[v] {
            Some(x) => format!("{x}'"),
            None => format!("vertex {v} (initially {}')", self.quiver.labels[v]),
        }
    }
}

/// Flags for a seed.
pub fn classify_solid(seed: &Seed) -> SolidSeedFlags {
    seed.flags()
}

/// Trace of [`reduce_to_canonical`].
#[derive(Debug, Clone)]
pub struct Reduction {
    /// Ordered pairs mutated, in order.
    pub steps: Vec<NonSymPair>,
    /// How many of `steps` belong to the descending phase.
    pub descending: usize,
    /// `Σ|D|` before the first step and after each (symmetric) step.
    pub weights: Vec<i64>,
    pub result: Seed,
}

fn total_d(seed: &Seed) -> i64 {
    seed.ident.iter().flatten().filter_map(|x| x.triple().ok()).map(|t| t.d.abs()).sum()
}

fn identified(seed: &Seed, v: usize) -> Result<NonSymPair, MutationError> {
    seed.ident[v].clone().ok_or_else(|| MutationError::NotSolid("unidentified variable".into()))
}

// one step at v (and at c(v) for symmetric seeds), staying among solid pairs
fn reduction_step(cur: &Seed, v: usize, sym: bool, steps: &mut Vec<NonSymPair>) -> Result<Seed, MutationError> {
    let mut next = cur.mutate_cm(v)?;
    steps.push(identified(cur, v)?);
    let w = cur.partner[v];
    if sym && w != v {
        steps.push(identified(cur, w)?);
        next = next.mutate_cm(w)?;
    }
    if next.cluster().is_none() {
        return Err(MutationError::NotSolid(format!("mutation at {} left the solid pairs", steps.last().expect("step"))));
    }
    Ok(next)
}

fn descend(seed: &Seed, sym: bool) -> Result<Reduction, MutationError> {
    let mut cur = seed.clone();
    let mut steps = Vec::new();
    let mut weights = vec![total_d(&cur)];
    loop {
        let mut best: Option<(i64, NonSymPair, usize)> = None;
        for v in 0..cur.len() {
            if cur.is_frozen(v) {
                continue;
            }
            let x = identified(&cur, v)?;
            let d = x.triple()?.d.abs();
            if d > 2 && best.as_ref().map_or(true, |(bd, bx, _)| d > *bd || (d == *bd && x < *bx)) {
                best = Some((d, x, v));
            }
        }
        let Some((_, _, v)) = best else { break };
        let next = reduction_step(&cur, v, sym, &mut steps)?;
        let wt = total_d(&next);
        if wt >= *weights.last().expect("weight") {
            return Err(MutationError::NotSolid("Σ|D| failed to decrease".into()));
        }
        weights.push(wt);
        cur = next;
    }
    Ok(Reduction { descending: steps.len(), steps, weights, result: cur })
}

/// `I'_n`: the cluster reached from the initial seed by the descending
/// phase. Every `|D|` in it is at most 2. For odd `n` no other solid
/// cluster has that property; for even `n` each position with `D = ±2`
/// leaves a choice of sign, and this one is used as the reference.
pub fn canonical_cluster(n: usize) -> Result<BTreeSet<NonSymPair>, MutationError> {
    let samples = Arc::new(Samples::new(n, 0));
    let init = Seed::initial(n, samples)?;
    descend(&init, true)?.result.cluster().ok_or_else(|| MutationError::NotSolid("unidentified variable".into()))
}

/// Mutates at a vertex of largest `|D|` until every `|D| <= 2`, then flips
/// the remaining `D = ±2` positions that disagree with [`canonical_cluster`]
/// (each flip keeps `Σ|D|`). Symmetric seeds are mutated in correspondent
/// pairs.
pub fn reduce_to_canonical(seed: &Seed) -> Result<Reduction, MutationError> {
    let flags = seed.flags();
    if !flags.solid_seed {
        return Err(MutationError::NotSolid("reduction needs a solid seed".into()));
    }
    let sym = flags.symmetric_solid_seed;
    let mut red = descend(seed, sym)?;
    let target: BTreeMap<(i64, i64), NonSymPair> = canonical_cluster(seed.n)?
        .into_iter()
        .filter_map(|x| position(&x).map(|p| (p, x)))
        .collect();
    loop {
        let cur = &red.result;
        let mut progressed = false;
        for v in 0..cur.len() {
            let x = identified(cur, v)?;
            let Some(p) = position(&x) else { continue };
            if cur.is_frozen(v) || target.get(&p) == Some(&x) {
                continue;
            }
            let mut steps = Vec::new();
            let next = reduction_step(cur, v, sym, &mut steps)?;
            if next.ident[v].as_ref() == target.get(&p) && total_d(&next) == total_d(cur) {
                red.steps.extend(steps);
                red.weights.push(total_d(&next));
                red.result = next;
                progressed = true;
                break;
            }
        }
        if !progressed {
            break;
        }
    }
    let done = red.result.cluster().map(|c| c.iter().all(|x| position(x).map_or(true, |p| target.get(&p) == Some(x))));
    if done != Some(true) {
        return Err(MutationError::NotSolid("sign flips did not reach the canonical cluster".into()));
    }
    Ok(red)
}

// ---------------------------------------------------------------------------
// the symmetric algebra on canonical pairs

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MoveKind {
    P1,
    P2,
    Limiting,
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MoveKind::P1 => "p1",
            MoveKind::P2 => "p2",
            MoveKind::Limiting => "limiting",
        })
    }
}

impl std::str::FromStr for MoveKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "p1" => Ok(MoveKind::P1),
            "p2" => Ok(MoveKind::P2),
            "limiting" => Ok(MoveKind::Limiting),
            other => Err(format!("unknown move {other:?}")),
        }
    }
}

/// `lhs[0]·lhs[1] = rhs[0][0]·rhs[0][1] + rhs[1][0]·rhs[1][1]` on canonical
/// pairs (the empty pair stands for the constant 1).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Relation {
    pub kind: MoveKind,
    pub lhs: [CircularPair; 2],
    pub rhs: [[CircularPair; 2]; 2],
}

impl Relation {
    fn normalized(kind: MoveKind, lhs: [CircularPair; 2], rhs: [[CircularPair; 2]; 2]) -> Relation {
        let mut lhs = lhs;
        lhs.sort();
        let mut rhs = rhs.map(|mut t| {
            t.sort();
            t
        });
        rhs.sort();
        Relation { kind, lhs, rhs }
    }

    pub fn holds_at(&self, m: &ExactMatrix) -> bool {
        let v = |x: &CircularPair| circular_minor(m, x).expect("pair fits");
        v(&self.lhs[0]) * v(&self.lhs[1]) == v(&self.rhs[0][0]) * v(&self.rhs[0][1]) + v(&self.rhs[1][0]) * v(&self.rhs[1][1])
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{} = {}{} + {}{}",
            self.lhs[0], self.lhs[1], self.rhs[0][0], self.rhs[0][1], self.rhs[1][0], self.rhs[1][1]
        )
    }
}

/// Ordered ground blocks `r1..ra, cb..c1` clockwise with `a` rows and `b`
/// columns.
fn grounds(n: usize, a: usize, b: usize) -> Vec<(Vec<Label>, Vec<Label>)> {
    let labels: Vec<Label> = (1..=n as Label).collect();
    let mut out = Vec::new();
    for chosen in combinations(&labels, a + b) {
        let m = chosen.len();
        for s in 0..m {
            let rows: Vec<Label> = (0..a).map(|j| chosen[(s + j) % m]).collect();
            let cols: Vec<Label> = (0..b).map(|j| chosen[(s + m - 1 - j) % m]).collect();
            out.push((rows, cols));
        }
    }
    out
}

/// Every instance of (P1) and (P2) on circular ground blocks, in canonical
/// form and without repetitions.
pub fn relations(n: usize, kinds: &[MoveKind]) -> Vec<Relation> {
    let mut out = BTreeSet::new();
    let cp = |r: &[Label], c: &[Label]| CircularPair::from_valid(n, r.to_vec(), c.to_vec());
    if kinds.contains(&MoveKind::P1) {
        for m in 2..=n / 2 {
            for (rows, cols) in grounds(n, m, m) {
                for i in 0..m {
                    for j in i + 1..m {
                        for k in 0..m {
                            for l in k + 1..m {
                                let (a, b, c, d) = (rows[i], rows[j], cols[k], cols[l]);
                                let t = |dr: &[Label], dc: &[Label]| cp(&strip(&rows, dr), &strip(&cols, dc));
                                out.insert(Relation::normalized(
                                    MoveKind::P1,
                                    [t(&[a], &[c]), t(&[b], &[d])],
                                    [[t(&[a], &[d]), t(&[b], &[c])], [t(&[a, b], &[c, d]), t(&[], &[])]],
                                ));
                            }
                        }
                    }
                }
            }
        }
    }
    if kinds.contains(&MoveKind::P2) {
        for m in 1..n {
            if 2 * m + 1 > n {
                break;
            }
            for (rows, cols) in grounds(n, m + 1, m) {
                for i in 0..=m {
                    for j in i + 1..=m {
                        for k in j + 1..=m {
                            for &d in &cols {
                                let (a, b, c) = (rows[i], rows[j], rows[k]);
                                let t = |dr: &[Label], dc: &[Label]| cp(&strip(&rows, dr), &strip(&cols, dc));
                                out.insert(Relation::normalized(
                                    MoveKind::P2,
                                    [t(&[b], &[]), t(&[a, c], &[d])],
                                    [[t(&[a], &[]), t(&[b, c], &[d])], [t(&[c], &[]), t(&[a, b], &[d])]],
                                ));
                            }
                        }
                    }
                }
            }
        }
    }
    out.into_iter().collect()
}

/// The variable produced by the seam exchange at a seam pair of size `k`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SeamVariable {
    pub replaces: CircularPair,
    pub k: usize,
}

/// A cluster of the symmetric algebra: canonical pairs (empty pair left
/// implicit), the frozen ones among them, and any seam variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LmCluster {
    pub n: usize,
    pub pairs: BTreeSet<CircularPair>,
    pub frozen: BTreeSet<CircularPair>,
    pub nonplucker: Vec<SeamVariable>,
}

impl LmCluster {
    pub fn initial(n: usize) -> LmCluster {
        let pairs = generate_diametric(n).into_members();
        let frozen = pairs.iter().filter(|x| is_frozen(x)).cloned().collect();
        LmCluster { n, pairs, frozen, nonplucker: Vec::new() }
    }

    pub fn from_pairs(n: usize, pairs: BTreeSet<CircularPair>) -> LmCluster {
        let frozen = LmCluster::initial(n).frozen;
        LmCluster { n, pairs, frozen, nonplucker: Vec::new() }
    }

    fn has(&self, x: &CircularPair) -> bool {
        x.is_empty() || self.pairs.contains(x)
    }

    pub fn is_initial(&self) -> bool {
        self.nonplucker.is_empty() && self.pairs == generate_diametric(self.n).into_members()
    }
}

/// One applicable exchange.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LmMove {
    pub kind: MoveKind,
    pub leaving: CircularPair,
    pub entering: Option<CircularPair>,
    pub relation: Option<Relation>,
}

/// Every (P1)/(P2) exchange whose right-hand side and one left-hand term
/// lie in the cluster, with the other left-hand term outside it.
pub fn lm_moves(cluster: &LmCluster, rels: &[Relation]) -> Vec<LmMove> {
    let mut out = Vec::new();
    for r in rels {
        if !r.rhs.iter().flatten().all(|x| cluster.has(x)) {
            continue;
        }
        for (i, j) in [(0, 1), (1, 0)] {
            let (x, y) = (&r.lhs[i], &r.lhs[j]);
            if cluster.has(x) && !cluster.has(y) && !cluster.frozen.contains(x) && !x.is_empty() {
                out.push(LmMove { kind: r.kind, leaving: x.clone(), entering: Some(y.clone()), relation: Some(r.clone()) });
            }
        }
    }
    out.sort_by(|a, b| (&a.leaving, &a.entering, &a.relation).cmp(&(&b.leaving, &b.entering, &b.relation)));
    out.dedup_by(|a, b| a.leaving == b.leaving && a.entering == b.entering);
    out
}

/// Replaces `leaving` using the given kind of exchange. For (P1)/(P2)
/// `entering` picks among several candidates (the first is used when absent).
pub fn mutate_lm(
    cluster: &LmCluster,
    kind: MoveKind,
    leaving: &CircularPair,
    entering: Option<&CircularPair>,
) -> Result<(LmCluster, LmMove), MutationError> {
    let n = cluster.n;
    if cluster.frozen.contains(leaving) || leaving.is_empty() {
        return Err(MutationError::Frozen(leaving.to_string()));
    }
    if !cluster.pairs.contains(leaving) {
        return Err(MutationError::Inapplicable { kind, site: format!("{leaving} (not in the cluster)") });
    }
    if kind == MoveKind::Limiting {
        if !cluster.is_initial() {
            return Err(MutationError::LimitingDepth);
        }
        if !leaving.classify().limiting {
            return Err(MutationError::Inapplicable { kind, site: leaving.to_string() });
        }
        let mut next = cluster.clone();
        next.pairs.remove(leaving);
        next.nonplucker.push(SeamVariable { replaces: leaving.clone(), k: leaving.k() });
        let mv = LmMove { kind, leaving: leaving.clone(), entering: None, relation: None };
        return Ok((next, mv));
    }
    if !cluster.nonplucker.is_empty() {
        return Err(MutationError::LimitingDepth);
    }
    let rels = relations(n, &[kind]);
    let mv = lm_moves(cluster, &rels)
        .into_iter()
        .find(|m| &m.leaving == leaving && entering.map_or(true, |e| m.entering.as_ref() == Some(e)))
        .ok_or_else(|| MutationError::Inapplicable { kind, site: leaving.to_string() })?;
    let mut next = cluster.clone();
    next.pairs.remove(leaving);
    next.pairs.insert(mv.entering.clone().expect("plücker move enters a pair"));
    Ok((next, mv))
}

/// Ground block and labels `(b, c, d, e, f, g)` of the seam exchange at a
/// seam pair `X`, taken in the orientation that ends its columns at `n`:
/// rows `(P, p_k+1)`, columns `(q_1+1, Q, q_k-1)`, `X = Δ^{c,dg}`.
pub fn seam_ground(x: &CircularPair) -> Result<(Vec<Label>, Vec<Label>, [Label; 6]), MutationError> {
    let n = x.n();
    if !x.classify().limiting {
        return Err(MutationError::Inapplicable { kind: MoveKind::Limiting, site: x.to_string() });
    }
    let r = x.reps().into_iter().find(|r| r.q().last() == Some(&(n as Label))).expect("seam pairs end at n");
    let w = |v: i64| crate::circ::wrap(v, n);
    let (p, q) = (r.p(), r.q());
    let k = p.len();
    let mut rows = p.to_vec();
    rows.push(w(p[k - 1] as i64 + 1));
    let mut cols = vec![w(q[0] as i64 + 1)];
    cols.extend_from_slice(q);
    cols.push(w(q[k - 1] as i64 - 1));
    let labels = [p[k - 1], rows[k], cols[0], q[0], q[k - 1], cols[k + 1]];
    cols.dedup();
    Ok((rows, cols, labels))
}

fn seam_delta(m: &ExactMatrix, rows: &[Label], cols: &[Label], dr: &[Label], dc: &[Label]) -> Rational {
    signed_minor(m, &strip(rows, dr), &strip(cols, dc)).expect("labels fit")
}

/// `Δ^{b,de}Δ^{c,fg} − Δ^{b,fg}Δ^{c,de}`, the variable entering at a seam
/// pair, at the matrix `m`.
pub fn seam_value(m: &ExactMatrix, x: &CircularPair) -> Result<Rational, MutationError> {
    let (rows, cols, [b, c, d, e, f, g]) = seam_ground(x)?;
    let dl = |dr: &[Label], dc: &[Label]| seam_delta(m, &rows, &cols, dr, dc);
    Ok(dl(&[b], &[d, e]) * dl(&[c], &[f, g]) - dl(&[b], &[f, g]) * dl(&[c], &[d, e]))
}

/// The exchange polynomial at a seam pair:
/// `Δ^{∅,d}Δ^{c,fg}Δ^{bc,deg} + Δ^{∅,g}Δ^{c,de}Δ^{bc,dfg}`.
pub fn seam_exchange(m: &ExactMatrix, x: &CircularPair) -> Result<Rational, MutationError> {
    let (rows, cols, [b, c, d, e, f, g]) = seam_ground(x)?;
    let dl = |dr: &[Label], dc: &[Label]| seam_delta(m, &rows, &cols, dr, dc);
    Ok(dl(&[], &[d]) * dl(&[c], &[f, g]) * dl(&[b, c], &[d, e, g]) + dl(&[], &[g]) * dl(&[c], &[d, e]) * dl(&[b, c], &[d, f, g]))
}

/// The factors of the seam exchange polynomial as canonical pairs.
pub fn seam_exchange_terms(x: &CircularPair) -> Result<[[CircularPair; 3]; 2], MutationError> {
    let n = x.n();
    let (rows, cols, [b, c, d, e, f, g]) = seam_ground(x)?;
    let t = |dr: &[Label], dc: &[Label]| CircularPair::from_valid(n, strip(&rows, dr), strip(&cols, dc));
    Ok([[t(&[], &[d]), t(&[c], &[f, g]), t(&[b, c], &[d, e, g])], [t(&[], &[g]), t(&[c], &[d, e]), t(&[b, c], &[d, f, g])]])
}

// ---------------------------------------------------------------------------
// enumeration

/// Canonical pairs on `n` vertices indexed for bitmask clusters; index 0 is
/// the empty pair.
#[derive(Debug, Clone)]
pub struct PairIndex {
    pairs: Vec<CircularPair>,
    index: HashMap<CircularPair, usize>,
}

impl PairIndex {
    pub fn new(n: usize) -> Result<PairIndex, MutationError> {
        let pairs: Vec<CircularPair> = enumerate_pairs(n, None).into_members().into_iter().collect();
        if pairs.len() > 128 {
            return Err(MutationError::TooManyPairs(pairs.len()));
        }
        let index = pairs.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        Ok(PairIndex { pairs, index })
    }
    pub fn len(&self) -> usize {
        self.pairs.len()
    }
    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
    pub fn pair(&self, i: usize) -> &CircularPair {
        &self.pairs[i]
    }
    pub fn index(&self, p: &CircularPair) -> usize {
        self.index[p]
    }
    pub fn mask<'a, I: IntoIterator<Item = &'a CircularPair>>(&self, it: I) -> u128 {
        it.into_iter().fold(0u128, |m, p| m | (1u128 << self.index[p]))
    }
    /// Nonempty members of a mask.
    pub fn set(&self, mask: u128) -> BTreeSet<CircularPair> {
        (1..self.pairs.len()).filter(|&i| mask >> i & 1 == 1).map(|i| self.pairs[i].clone()).collect()
    }
}

#[derive(Debug, Clone, Copy)]
struct CompiledRelation {
    lhs: [u8; 2],
    rhs: u128,
}

/// The closure of the initial cluster under the chosen exchanges, with a
/// breadth-first parent for every cluster.
#[derive(Debug, Clone)]
pub struct ClusterFamily {
    pub n: usize,
    pub kinds: Vec<MoveKind>,
    index: PairIndex,
    rels: Vec<Relation>,
    order: Vec<u128>,
    parent: HashMap<u128, Option<(u128, usize, usize)>>,
}

impl ClusterFamily {
    pub fn len(&self) -> usize {
        self.order.len()
    }
    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }
    pub fn index(&self) -> &PairIndex {
        &self.index
    }
    pub fn masks(&self) -> &[u128] {
        &self.order
    }
    /// Clusters as sets of nonempty canonical pairs, in discovery order.
    pub fn clusters(&self) -> Vec<BTreeSet<CircularPair>> {
        self.order.iter().map(|&m| self.index.set(m)).collect()
    }
    pub fn contains(&self, c: &BTreeSet<CircularPair>) -> bool {
        self.parent.contains_key(&(self.index.mask(c.iter()) | 1))
    }
    /// Moves leading from the initial cluster to `c`.
    pub fn path(&self, c: &BTreeSet<CircularPair>) -> Option<Vec<LmMove>> {
        let mut m = self.index.mask(c.iter()) | 1;
        let mut out = Vec::new();
        while let Some(step) = self.parent.get(&m)? {
            let &(prev, r, left) = step;
            let rel = &self.rels[r];
            let leaving = self.index.pair(left).clone();
            let entering = if rel.lhs[0] == leaving { rel.lhs[1].clone() } else { rel.lhs[0].clone() };
            out.push(LmMove { kind: rel.kind, leaving, entering: Some(entering), relation: Some(rel.clone()) });
            m = prev;
        }
        out.reverse();
        Some(out)
    }
}

/// Breadth-first closure of the diametric cluster under (P1) and,
/// optionally, (P2) exchanges.
pub fn enumerate_plucker_clusters(n: usize, kinds: &[MoveKind]) -> Result<ClusterFamily, MutationError> {
    let limit = if kinds.contains(&MoveKind::P2) { 6 } else { 7 };
    if n > limit {
        return Err(MutationError::Scale { what: "cluster enumeration", n, limit });
    }
    if n < 3 {
        return Err(MutationError::TooSmall { n, min: 3 });
    }
    let kinds: Vec<MoveKind> = kinds.iter().copied().filter(|k| *k != MoveKind::Limiting).collect();
    let index = PairIndex::new(n)?;
    let rels = relations(n, &kinds);
    let compiled: Vec<CompiledRelation> = rels
        .iter()
        .map(|r| CompiledRelation {
            lhs: [index.index(&r.lhs[0]) as u8, index.index(&r.lhs[1]) as u8],
            rhs: index.mask(r.rhs.iter().flatten()),
        })
        .collect();
    let init = LmCluster::initial(n);
    let frozen = index.mask(init.frozen.iter()) | 1;
    let start = index.mask(init.pairs.iter()) | 1;
    let mut parent: HashMap<u128, Option<(u128, usize, usize)>> = HashMap::new();
    parent.insert(start, None);
    let mut order = vec![start];
    let mut frontier = vec![start];
    while !frontier.is_empty() {
        let found: Vec<Vec<(u128, usize, usize)>> = frontier
            .par_iter()
            .map(|&c| {
                let mut out = Vec::new();
                for (ri, r) in compiled.iter().enumerate() {
                    if c & r.rhs != r.rhs {
                        continue;
                    }
                    for (i, j) in [(0, 1), (1, 0)] {
                        let (x, y) = (r.lhs[i] as usize, r.lhs[j] as usize);
                        if c >> x & 1 == 1 && c >> y & 1 == 0 && frozen >> x & 1 == 0 {
                            out.push(((c & !(1u128 << x)) | (1u128 << y), ri, x));
                        }
                    }
                }
                out
            })
            .collect();
        let mut next = Vec::new();
        for (&c, succ) in frontier.iter().zip(found) {
            for (m, ri, x) in succ {
                if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(m) {
                    e.insert(Some((c, ri, x)));
                    order.push(m);
                    next.push(m);
                }
            }
        }
        frontier = next;
    }
    Ok(ClusterFamily { n, kinds, index, rels, order, parent })
}

/// The ordered-pair double of a canonical cluster, with the empty pair.
pub fn double_cover(n: usize, c: &BTreeSet<CircularPair>) -> BTreeSet<NonSymPair> {
    let mut out: BTreeSet<NonSymPair> = c.iter().flat_map(|x| x.reps()).collect();
    out.insert(NonSymPair::empty(n));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn pair(n: usize, p: &[Label], q: &[Label]) -> CircularPair {
        CircularPair::new(n, p.to_vec(), q.to_vec()).unwrap()
    }
    fn ns(n: usize, p: &[Label], q: &[Label]) -> NonSymPair {
        NonSymPair::new(n, p.to_vec(), q.to_vec()).unwrap()
    }

    #[test]
    fn graphs_build_for_small_n() {
        for n in 4..=9 {
            let u = build_u(n).unwrap();
            assert_eq!(u.vertices.len(), binom2(n) + 1);
            let up = build_uprime(n).unwrap();
            assert_eq!(up.vertices.len(), 2 * binom2(n) + 1);
            build_quiver(n).unwrap();
        }
    }

    #[test]
    fn frozen_and_seam_vertices() {
        let u = build_u(4).unwrap();
        let frozen: BTreeSet<String> = (0..u.vertices.len()).filter(|&i| u.frozen[i]).map(|i| u.vertices[i].to_string()).collect();
        let want: BTreeSet<String> = ["(1;3)", "(2;4)", "(1,2;4,3)", "(2,3;1,4)", "(;)"].iter().map(|s| s.to_string()).collect();
        assert_eq!(frozen, want);
        let u8g = build_u(8).unwrap();
        let lim: Vec<String> = u8g.vertices.iter().filter(|v| v.classify().limiting).map(|v| v.to_string()).collect();
        assert_eq!(lim, ["(4;8)", "(4,5;1,8)", "(4,5,6;2,1,8)"]);
        assert!(build_u(5).unwrap().vertices.iter().all(|v| !v.classify().limiting));
    }

    #[test]
    fn exchange_at_a_seam_neighbour() {
        // the vertex (1,2;5,4) at n = 8 sees two seam pairs
        let u = build_u(8).unwrap();
        let i = u.index_of(&pair(8, &[1, 2], &[5, 4])).unwrap();
        let nb: BTreeSet<String> = u.neighbours(i).into_iter().map(|j| u.vertices[j].to_string()).collect();
        let want: BTreeSet<String> = [pair(8, &[4, 5], &[1, 8]), pair(8, &[1, 2], &[6, 5]), pair(8, &[1], &[5]), pair(8, &[8, 1, 2], &[6, 5, 4])]
            .iter()
            .map(|p| p.to_string())
            .collect();
        assert_eq!(nb, want);
    }

    #[test]
    fn initial_quiver_is_a_solid_seed() {
        for n in 4..=8 {
            let q = build_quiver(n).unwrap();
            let s: BTreeSet<NonSymPair> = q.labels.iter().cloned().collect();
            let (labels, _, edges) = solid_seed_edges(n, &s).unwrap();
            assert_eq!(labels, q.labels);
            assert_eq!(edges, q.support(), "n={n}");
            assert!(alternates(n, &q));
        }
    }

    #[test]
    fn cm_mutation_example_and_involution() {
        let samples = Arc::new(Samples::new(5, 0));
        let s = Seed::initial(5, samples).unwrap();
        let v = s.vertex(&ns(5, &[1], &[3])).unwrap();
        let t = s.mutate_cm(v).unwrap();
        assert_eq!(t.ident(v), Some(&ns(5, &[5], &[4])));
        assert_eq!(t.mutate_cm(v).unwrap(), s);
        for v in 0..s.len() {
            if !s.is_frozen(v) {
                assert_eq!(s.mutate_cm(v).unwrap().mutate_cm(v).unwrap(), s);
            }
        }
    }

    #[test]
    fn symmetric_mutations_match_plucker_moves() {
        for n in [5, 6] {
            let samples = Arc::new(Samples::new(n, 1));
            let rels = relations(n, &[MoveKind::P1]);
            let mut rng = rng_from_seed(5);
            for _ in 0..15 {
                let mut seed = Seed::initial(n, samples.clone()).unwrap();
                let mut lm = LmCluster::initial(n);
                for _ in 0..rng.gen_range(1..=6) {
                    let moves = lm_moves(&lm, &rels);
                    let mv = &moves[rng.gen_range(0..moves.len())];
                    let v = seed.vertex(&mv.leaving.rep()).unwrap();
                    seed = seed.mutate_sym(v).unwrap();
                    lm = mutate_lm(&lm, MoveKind::P1, &mv.leaving, mv.entering.as_ref()).unwrap().0;
                    let mut want: BTreeSet<Vec<Rational>> = lm.pairs.iter().map(|x| samples.sym_values(x)).collect();
                    want.insert(samples.sym_values(&CircularPair::empty(n)));
                    assert_eq!(seed.symmetrize(), want);
                    assert!(seed.is_symmetric());
                }
            }
        }
    }

    #[test]
    fn plucker_example_relation() {
        let lm = LmCluster::initial(5);
        let (next, mv) = mutate_lm(&lm, MoveKind::P1, &pair(5, &[1], &[3]), None).unwrap();
        assert_eq!(mv.entering, Some(pair(5, &[4], &[5])));
        assert!(next.pairs.contains(&pair(5, &[4], &[5])));
        let r = mv.relation.unwrap();
        let mut rng = rng_from_seed(2);
        for _ in 0..5 {
            assert!(r.holds_at(&crate::sample::random_symmetric_zero_rowsum(5, &mut rng)));
        }
    }

    #[test]
    fn triple_form_of_p1() {
        for n in 4..=8 {
            for x in crate::circ::solid_nonsym_pairs(n) {
                let t = x.triple().unwrap();
                for (partner, same, sizes) in solid_p1_options(&x) {
                    let tp = partner.triple().unwrap();
                    assert_eq!((tp.t2, tp.k), (t.t2, t.k));
                    assert_eq!((tp.d - t.d).abs(), 4);
                    let mid = (tp.d + t.d) / 2;
                    let mut ts: Vec<i64> = same.iter().map(|y| y.triple().unwrap()).map(|y| {
                        assert_eq!((y.d, y.k), (mid, t.k));
                        (y.t2 - t.t2).rem_euclid(2 * n as i64)
                    }).collect();
                    ts.sort();
                    assert_eq!(ts, vec![1, 2 * n as i64 - 1]);
                    assert_eq!(sizes[0].k() + 1, t.k);
                    assert_eq!(sizes[1].k(), t.k + 1);
                    if let Ok(y) = sizes[1].triple() {
                        assert_eq!((y.d, y.t2), (mid, t.t2));
                    }
                }
            }
        }
    }

    #[test]
    fn seam_exchange_identity_and_nonplucker() {
        let samples = Samples::new(8, 3);
        for k in 1..=2 {
            let x = generate_diametric(8).into_members().into_iter().find(|p| p.classify().limiting && p.k() == k).unwrap();
            let (rows, cols, [_, c, d, _, _, g]) = seam_ground(&x).unwrap();
            assert_eq!(CircularPair::from_valid(8, strip(&rows, &[c]), strip(&cols, &[d, g])), x);
            let mut vals = Vec::new();
            for m in samples.nonsym_points().iter().chain(samples.sym_points()) {
                let y = seam_value(m, &x).unwrap();
                assert_eq!(circular_minor(m, &x).unwrap() * &y, seam_exchange(m, &x).unwrap());
                vals.push(y);
            }
            if k == 2 {
                assert_eq!(samples.identify(&vals), Identification::NonPlucker);
            }
        }
        // the seam exchange factors are neighbours of the seam pair in U_8
        let u = build_u(8).unwrap();
        let x = pair(8, &[4], &[8]);
        let i = u.index_of(&x).unwrap();
        let nb: BTreeSet<CircularPair> = u.neighbours(i).into_iter().map(|j| u.vertices[j].clone()).collect();
        for t in seam_exchange_terms(&x).unwrap().iter().flatten() {
            assert!(t.is_empty() || nb.contains(t), "{t}");
        }
    }

    #[test]
    fn identification_round_trip() {
        let samples = Samples::new(5, 0);
        let x = ns(5, &[1], &[3]);
        assert_eq!(samples.identify(&samples.values(&x)), Identification::Pair(x));
    }

    #[test]
    fn small_families() {
        let f = enumerate_plucker_clusters(4, &[MoveKind::P1, MoveKind::P2]).unwrap();
        assert!(f.len() > 1);
        for c in f.clusters() {
            assert_eq!(c.len(), binom2(4));
            for a in &c {
                for b in &c {
                    assert!(crate::circ::weakly_separated_pairs(a, b));
                }
            }
            let path = f.path(&c).unwrap();
            let mut cur = LmCluster::initial(4);
            for mv in &path {
                cur = mutate_lm(&cur, mv.kind, &mv.leaving, mv.entering.as_ref()).unwrap().0;
            }
            assert_eq!(cur.pairs, c);
        }
    }

    #[test]
    fn reduction_reaches_small_d() {
        for n in [4, 5, 6] {
            let samples = Arc::new(Samples::new(n, 0));
            let init = Seed::initial(n, samples.clone()).unwrap();
            assert!(classify_solid(&init).symmetric_solid_seed);
            let canon = canonical_cluster(n).unwrap();
            assert!(canon.iter().all(|x| x.triple().map_or(true, |t| t.d.abs() <= 2)));
            assert!(reduce_to_canonical(&Seed::from_solid_cluster(n, &canon, samples.clone()).unwrap()).unwrap().steps.is_empty());
            let fam = enumerate_plucker_clusters(n, &[MoveKind::P1]).unwrap();
            for c in fam.clusters() {
                let s = Seed::from_solid_cluster(n, &double_cover(n, &c), samples.clone()).unwrap();
                assert!(classify_solid(&s).symmetric_solid_seed);
                let red = reduce_to_canonical(&s).unwrap();
                assert!(red.weights.windows(2).all(|w| w[1] <= w[0]));
                if n % 2 == 1 {
                    assert_eq!(red.descending, red.steps.len());
                    assert!(red.weights.windows(2).all(|w| w[1] < w[0]));
                }
                assert_eq!(red.result.cluster().unwrap(), canon);
            }
        }
    }
}
