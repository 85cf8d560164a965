//! Circular planar electrical networks.
//!
//! Planarity is not certified: a network is an abstract graph together with the
//! clockwise order of its boundary vertices. Generators and local moves in this
//! module keep planarity by construction.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use num_traits::{One, Signed, Zero};
use rand::Rng;
use thiserror::Error;

use crate::circ::{enumerate_pairs, CircularPair, Label, PairSet};
use crate::linalg::{circular_minor, ExactMatrix, Rational};
use crate::sample::random_conductance;

/// Total vertex budget; vertex sets are packed into `u128` masks.
pub const MAX_VERTICES: usize = 128;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetworkError {
    #[error("network needs at least one boundary vertex")]
    NoBoundary,
    #[error("network has {0} vertices, more than the supported {MAX_VERTICES}")]
    TooLarge(usize),
    #[error("edge {index} has non-positive conductance {g}")]
    NonPositive { index: usize, g: String },
    #[error("edge {index} refers to unknown vertex {vertex}")]
    UnknownVertex { index: usize, vertex: String },
    #[error("interior vertices {0:?} are not connected to the boundary")]
    Floating(Vec<String>),
    #[error("edge index {0} out of range")]
    NoSuchEdge(usize),
    #[error("no interior vertex named {0:?}")]
    NoSuchVertex(String),
    #[error("cannot apply {mv} here: {why}")]
    Pattern { mv: &'static str, why: String },
    #[error("edge {0} joins two boundary vertices and cannot be contracted")]
    BoundaryContraction(usize),
    #[error("duplicate interior vertex name {0:?}")]
    DuplicateName(String),
}

/// A vertex of a network: boundary label `1..=n` or interior index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Vertex {
    Boundary(Label),
    Interior(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub u: Vertex,
    pub v: Vertex,
    pub g: Rational,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }
    pub fn other(&self, x: Vertex) -> Vertex {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
    pub fn touches(&self, x: Vertex) -> bool {
        self.u == x || self.v == x
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    n: usize,
    interior: Vec<String>,
    edges: Vec<Edge>,
}

impl fmt::Display for Network {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "network on {} boundary vertices, {} interior, {} edges", self.n, self.interior.len(), self.edges.len())
    }
}

impl Network {
    pub fn new(n: usize, interior: Vec<String>, edges: Vec<Edge>) -> Result<Self, NetworkError> {
        if n == 0 {
            return Err(NetworkError::NoBoundary);
        }
        if n > crate::circ::MAX_N || n + interior.len() > MAX_VERTICES {
            return Err(NetworkError::TooLarge(n + interior.len()));
        }
        let mut names = HashSet::new();
        for s in &interior {
            if !names.insert(s) {
                return Err(NetworkError::DuplicateName(s.clone()));
            }
        }
        let net = Network { n, interior, edges };
        for (i, e) in net.edges.iter().enumerate() {
            if !e.g.is_positive() {
                return Err(NetworkError::NonPositive { index: i, g: crate::linalg::format_rational(&e.g) });
            }
            for x in [e.u, e.v] {
                let ok = match x {
                    Vertex::Boundary(b) => b >= 1 && (b as usize) <= n,
                    Vertex::Interior(j) => j < net.interior.len(),
                };
                if !ok {
                    return Err(NetworkError::UnknownVertex { index: i, vertex: format!("{x:?}") });
                }
            }
        }
        Ok(net)
    }

    pub fn empty(n: usize) -> Self {
        Network { n, interior: Vec::new(), edges: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn interior(&self) -> &[String] {
        &self.interior
    }
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }
    pub fn num_vertices(&self) -> usize {
        self.n + self.interior.len()
    }

    pub fn vertex_name(&self, x: Vertex) -> String {
        match x {
            Vertex::Boundary(b) => b.to_string(),
            Vertex::Interior(i) => self.interior[i].clone(),
        }
    }

    pub fn interior_index(&self, name: &str) -> Result<usize, NetworkError> {
        self.interior.iter().position(|s| s == name).ok_or_else(|| NetworkError::NoSuchVertex(name.to_string()))
    }

    /// Dense index: boundary `b` is `b-1`, interior `i` is `n+i`.
    pub fn index(&self, x: Vertex) -> usize {
        match x {
            Vertex::Boundary(b) => b as usize - 1,
            Vertex::Interior(i) => self.n + i,
        }
    }

    pub fn add_edge(&mut self, u: Vertex, v: Vertex, g: Rational) {
        debug_assert!(g.is_positive());
        self.edges.push(Edge { u, v, g });
    }

    pub fn add_interior(&mut self, hint: &str) -> Vertex {
        let mut name = hint.to_string();
        let mut t = 0;
        while self.interior.contains(&name) {
            t += 1;
            name = format!("{hint}{t}");
        }
        self.interior.push(name);
        Vertex::Interior(self.interior.len() - 1)
    }

    /// Edges at `x`, with self-loops counted once.
    pub fn incident(&self, x: Vertex) -> Vec<usize> {
        (0..self.edges.len()).filter(|&i| self.edges[i].touches(x)).collect()
    }

    /// Replace every conductance with a fresh random one.
    pub fn with_random_conductances<R: Rng + ?Sized>(&self, rng: &mut R) -> Network {
        let mut out = self.clone();
        for e in &mut out.edges {
            e.g = random_conductance(rng);
        }
        out
    }

    fn neighbours(&self) -> Vec<u128> {
        let mut adj = vec![0u128; self.num_vertices()];
        for e in &self.edges {
            if e.is_loop() {
                continue;
            }
            let (a, b) = (self.index(e.u), self.index(e.v));
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
        adj
    }

    /// Interior vertices with no path to the boundary.
    pub fn floating_interior(&self) -> Vec<usize> {
        let adj = self.neighbours();
        let mut reach: u128 = 0;
        let mut stack: Vec<usize> = (0..self.n).collect();
        for &s in &stack {
            reach |= 1 << s;
        }
        while let Some(v) = stack.pop() {
            let mut fresh = adj[v] & !reach;
            reach |= fresh;
            while fresh != 0 {
                let w = fresh.trailing_zeros() as usize;
                fresh &= fresh - 1;
                stack.push(w);
            }
        }
        (0..self.interior.len()).filter(|&i| reach & (1 << (self.n + i)) == 0).collect()
    }

    /// Drops interior vertices cut off from the boundary together with their edges.
    pub fn prune_floating(&self) -> Network {
        let dead: BTreeSet<usize> = self.floating_interior().into_iter().collect();
        if dead.is_empty() {
            return self.clone();
        }
        self.remove_interior(&dead)
    }

    fn remove_interior(&self, dead: &BTreeSet<usize>) -> Network {
        let mut remap = vec![usize::MAX; self.interior.len()];
        let mut interior = Vec::new();
        for (i, s) in self.interior.iter().enumerate() {
            if !dead.contains(&i) {
                remap[i] = interior.len();
                interior.push(s.clone());
            }
        }
        let mv = |x: Vertex| match x {
            Vertex::Interior(i) => Vertex::Interior(remap[i]),
            b => b,
        };
        let gone = |x: Vertex| matches!(x, Vertex::Interior(i) if dead.contains(&i));
        let edges = self
            .edges
            .iter()
            .filter(|e| !gone(e.u) && !gone(e.v))
            .map(|e| Edge { u: mv(e.u), v: mv(e.v), g: e.g.clone() })
            .collect();
        Network { n: self.n, interior, edges }
    }

    pub fn laplacian(&self) -> ExactMatrix {
        let nv = self.num_vertices();
        let mut l = ExactMatrix::zeros(nv, nv);
        for e in &self.edges {
            if e.is_loop() {
                continue;
            }
            let (a, b) = (self.index(e.u), self.index(e.v));
            l.set(a, a, l.get(a, a) + &e.g);
            l.set(b, b, l.get(b, b) + &e.g);
            l.set(a, b, l.get(a, b) - &e.g);
            l.set(b, a, l.get(b, a) - &e.g);
        }
        l
    }
}

/// Kirchhoff matrix of the boundary: symmetric, zero row sums, nonpositive
/// off-diagonal entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResponseMatrix(ExactMatrix);

impl ResponseMatrix {
    pub fn matrix(&self) -> &ExactMatrix {
        &self.0
    }
    pub fn into_matrix(self) -> ExactMatrix {
        self.0
    }
    pub fn n(&self) -> usize {
        self.0.rows()
    }
    pub fn minor(&self, p: &CircularPair) -> Rational {
        circular_minor(&self.0, p).expect("pair on the same boundary")
    }
}

/// Schur complement of the Laplacian onto the boundary, computed by
/// eliminating interior vertices one at a time.
pub fn response_matrix(g: &Network) -> Result<ResponseMatrix, NetworkError> {
    let floating = g.floating_interior();
    if !floating.is_empty() {
        return Err(NetworkError::Floating(floating.iter().map(|&i| g.interior[i].clone()).collect()));
    }
    let nv = g.num_vertices();
    let n = g.n;
    let mut l = g.laplacian();
    for v in (n..nv).rev() {
        let pivot = l.get(v, v).clone();
        debug_assert!(pivot.is_positive());
        let col: Vec<(usize, Rational)> =
            (0..v).filter(|&i| !l.get(i, v).is_zero()).map(|i| (i, l.get(i, v).clone() / &pivot)).collect();
        for &(i, ref f) in &col {
            for j in 0..v {
                let lvj = l.get(v, j);
                if !lvj.is_zero() {
                    let x = l.get(i, j) - f * lvj;
                    l.set(i, j, x);
                }
            }
        }
    }
    let idx: Vec<usize> = (0..n).collect();
    Ok(ResponseMatrix(l.select(&idx, &idx).expect("in range")))
}

/// `π(G)`: the circular pairs joined by vertex-disjoint paths `p_i → q_i`
/// whose interior vertices are interior to the network.
pub fn connections(g: &Network) -> PairSet {
    let adj = g.neighbours();
    let mut out = PairSet::new(g.n);
    for pair in enumerate_pairs(g.n, None).iter() {
        if has_connection(g, &adj, pair) {
            out.insert(pair.clone());
        }
    }
    out
}

fn has_connection(g: &Network, adj: &[u128], pair: &CircularPair) -> bool {
    let n = g.n;
    let ends: Vec<(usize, usize)> = pair.p().iter().zip(pair.q()).map(|(&a, &b)| (a as usize - 1, b as usize - 1)).collect();
    let interior_mask: u128 = (n..g.num_vertices()).fold(0, |m, i| m | 1 << i);
    let mut dead: HashSet<(usize, u128)> = HashSet::new();
    route(adj, interior_mask, &ends, 0, 0, &mut dead)
}

// Route path `i` and the rest, `used` holding interior vertices already taken.
fn route(adj: &[u128], interior: u128, ends: &[(usize, usize)], i: usize, used: u128, dead: &mut HashSet<(usize, u128)>) -> bool {
    if i == ends.len() {
        return true;
    }
    if dead.contains(&(i, used)) {
        return false;
    }
    let (s, t) = ends[i];
    let ok = extend(adj, interior, ends, i, s, t, used, dead);
    if !ok {
        dead.insert((i, used));
    }
    ok
}

#[allow(clippy::too_many_arguments)]
fn extend(
    adj: &[u128],
    interior: u128,
    ends: &[(usize, usize)],
    i: usize,
    at: usize,
    t: usize,
    on_path: u128,
    dead: &mut HashSet<(usize, u128)>,
) -> bool {
    if adj[at] & (1 << t) != 0 && route(adj, interior, ends, i + 1, on_path, dead) {
        return true;
    }
    let mut next = adj[at] & interior & !on_path;
    while next != 0 {
        let w = next.trailing_zeros() as usize;
        next &= next - 1;
        if extend(adj, interior, ends, i, w, t, on_path | 1 << w, dead) {
            return true;
        }
    }
    false
}

/// Outcome of comparing positive minors with connections.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct MinorConnectionReport {
    pub positive: Vec<String>,
    pub connected: Vec<String>,
    /// Pairs with a negative minor.
    pub negative: Vec<String>,
    /// Pairs on which positivity and connectivity disagree.
    pub mismatched: Vec<String>,
}

impl MinorConnectionReport {
    pub fn ok(&self) -> bool {
        self.negative.is_empty() && self.mismatched.is_empty()
    }
}

pub fn verify_minor_connection(g: &Network) -> Result<MinorConnectionReport, NetworkError> {
    let m = response_matrix(g)?;
    let conn = connections(g);
    let mut r = MinorConnectionReport { positive: vec![], connected: vec![], negative: vec![], mismatched: vec![] };
    for pair in enumerate_pairs(g.n, None).iter() {
        let v = m.minor(pair);
        let pos = v.is_positive();
        let c = conn.contains(pair);
        if pos {
            r.positive.push(pair.to_string());
        }
        if c {
            r.connected.push(pair.to_string());
        }
        if v.is_negative() {
            r.negative.push(pair.to_string());
        }
        if pos != c {
            r.mismatched.push(pair.to_string());
        }
    }
    Ok(r)
}

pub fn equivalent(g1: &Network, g2: &Network) -> bool {
    g1.n == g2.n && connections(g1) == connections(g2)
}

pub fn delete_edge(g: &Network, e: usize) -> Result<Network, NetworkError> {
    if e >= g.edges.len() {
        return Err(NetworkError::NoSuchEdge(e));
    }
    let mut out = g.clone();
    out.edges.remove(e);
    Ok(out)
}

/// Identifies the endpoints of edge `e`. A boundary endpoint survives; other
/// edges between the two endpoints become loops and are dropped.
pub fn contract_edge(g: &Network, e: usize) -> Result<Network, NetworkError> {
    let edge = g.edges.get(e).ok_or(NetworkError::NoSuchEdge(e))?;
    if edge.is_loop() {
        return delete_edge(g, e);
    }
    let (keep, gone) = match (edge.u, edge.v) {
        (Vertex::Boundary(_), Vertex::Boundary(_)) => return Err(NetworkError::BoundaryContraction(e)),
        (b @ Vertex::Boundary(_), i @ Vertex::Interior(_)) | (i @ Vertex::Interior(_), b @ Vertex::Boundary(_)) => (b, i),
        (a, b) => (a, b),
    };
    let mut out = g.clone();
    out.edges.remove(e);
    for x in &mut out.edges {
        if x.u == gone {
            x.u = keep;
        }
        if x.v == gone {
            x.v = keep;
        }
    }
    out.edges.retain(|x| !x.is_loop());
    let Vertex::Interior(gi) = gone else { unreachable!() };
    Ok(out.remove_interior(&BTreeSet::from([gi])))
}

/// A local equivalence and where to apply it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LocalMove {
    RemoveLoop { edge: usize },
    RemoveSpike { vertex: usize },
    Series { vertex: usize },
    Parallel { e1: usize, e2: usize },
    YDelta { vertex: usize },
    DeltaY { e1: usize, e2: usize, e3: usize },
}

impl LocalMove {
    pub fn name(&self) -> &'static str {
        match self {
            LocalMove::RemoveLoop { .. } => "remove_loop",
            LocalMove::RemoveSpike { .. } => "remove_spike",
            LocalMove::Series { .. } => "series",
            LocalMove::Parallel { .. } => "parallel",
            LocalMove::YDelta { .. } => "y_delta",
            LocalMove::DeltaY { .. } => "delta_y",
        }
    }
}

fn pattern(mv: &'static str, why: impl Into<String>) -> NetworkError {
    NetworkError::Pattern { mv, why: why.into() }
}

fn check_edge(g: &Network, e: usize) -> Result<&Edge, NetworkError> {
    g.edges.get(e).ok_or(NetworkError::NoSuchEdge(e))
}

fn check_interior(g: &Network, v: usize) -> Result<Vertex, NetworkError> {
    if v < g.interior.len() {
        Ok(Vertex::Interior(v))
    } else {
        Err(NetworkError::NoSuchVertex(format!("#{v}")))
    }
}

fn without_edges(g: &Network, idx: &[usize]) -> Network {
    let mut out = g.clone();
    let drop: BTreeSet<usize> = idx.iter().copied().collect();
    out.edges = g.edges.iter().enumerate().filter(|(i, _)| !drop.contains(i)).map(|(_, e)| e.clone()).collect();
    out
}

pub fn local_move(g: &Network, mv: &LocalMove) -> Result<Network, NetworkError> {
    let name = mv.name();
    match *mv {
        LocalMove::RemoveLoop { edge } => {
            if !check_edge(g, edge)?.is_loop() {
                return Err(pattern(name, format!("edge {edge} is not a loop")));
            }
            Ok(without_edges(g, &[edge]))
        }
        LocalMove::RemoveSpike { vertex } => {
            let x = check_interior(g, vertex)?;
            let inc = g.incident(x);
            if inc.len() != 1 || g.edges[inc[0]].is_loop() {
                return Err(pattern(name, format!("{} is not a spike end", g.interior[vertex])));
            }
            Ok(without_edges(g, &inc).remove_interior(&BTreeSet::from([vertex])))
        }
        LocalMove::Series { vertex } => {
            let x = check_interior(g, vertex)?;
            let inc = g.incident(x);
            if inc.len() != 2 || inc.iter().any(|&i| g.edges[i].is_loop()) {
                return Err(pattern(name, format!("{} does not have degree two", g.interior[vertex])));
            }
            let (e1, e2) = (&g.edges[inc[0]], &g.edges[inc[1]]);
            let gs = &e1.g * &e2.g / (&e1.g + &e2.g);
            let (a, b) = (e1.other(x), e2.other(x));
            let mut out = without_edges(g, &inc);
            out.add_edge(a, b, gs);
            Ok(out.remove_interior(&BTreeSet::from([vertex])))
        }
        LocalMove::Parallel { e1, e2 } => {
            let (a, b) = (check_edge(g, e1)?, check_edge(g, e2)?);
            let same = (a.u == b.u && a.v == b.v) || (a.u == b.v && a.v == b.u);
            if e1 == e2 || !same {
                return Err(pattern(name, format!("edges {e1} and {e2} are not parallel")));
            }
            let gs = &a.g + &b.g;
            let (u, v) = (a.u, a.v);
            let mut out = without_edges(g, &[e1, e2]);
            out.add_edge(u, v, gs);
            Ok(out)
        }
        LocalMove::YDelta { vertex } => {
            let x = check_interior(g, vertex)?;
            let inc = g.incident(x);
            let nb: Vec<Vertex> = inc.iter().map(|&i| g.edges[i].other(x)).collect();
            if inc.len() != 3 || nb.contains(&x) || nb[0] == nb[1] || nb[1] == nb[2] || nb[0] == nb[2] {
                return Err(pattern(name, format!("{} is not the centre of a Y", g.interior[vertex])));
            }
            let c: Vec<&Rational> = inc.iter().map(|&i| &g.edges[i].g).collect();
            let s = c[0] + c[1] + c[2];
            let mut out = without_edges(g, &inc);
            for (i, j) in [(0, 1), (1, 2), (0, 2)] {
                out.add_edge(nb[i], nb[j], c[i] * c[j] / &s);
            }
            Ok(out.remove_interior(&BTreeSet::from([vertex])))
        }
        LocalMove::DeltaY { e1, e2, e3 } => {
            let es = [check_edge(g, e1)?, check_edge(g, e2)?, check_edge(g, e3)?];
            let mut verts: BTreeSet<Vertex> = BTreeSet::new();
            for e in es {
                verts.insert(e.u);
                verts.insert(e.v);
            }
            let ends = |e: &Edge| (e.u.min(e.v), e.u.max(e.v));
            let distinct = ends(es[0]) != ends(es[1]) && ends(es[1]) != ends(es[2]) && ends(es[0]) != ends(es[2]);
            if !distinct || verts.len() != 3 || es.iter().any(|e| e.is_loop()) {
                return Err(pattern(name, format!("edges {e1}, {e2}, {e3} do not form a triangle")));
            }
            // the Y edge at vertex v sits opposite the triangle edge avoiding v
            let num = &es[0].g * &es[1].g + &es[1].g * &es[2].g + &es[2].g * &es[0].g;
            let mut out = without_edges(g, &[e1, e2, e3]);
            let y = out.add_interior("y");
            for v in verts {
                let opposite = es.iter().find(|e| !e.touches(v)).expect("triangle");
                out.add_edge(y, v, &num / &opposite.g);
            }
            Ok(out)
        }
    }
}

/// Every site where some local move applies.
pub fn applicable_moves(g: &Network) -> Vec<LocalMove> {
    let mut out = Vec::new();
    for (i, e) in g.edges.iter().enumerate() {
        if e.is_loop() {
            out.push(LocalMove::RemoveLoop { edge: i });
        }
        for j in i + 1..g.edges.len() {
            let f = &g.edges[j];
            if !e.is_loop() && ((e.u == f.u && e.v == f.v) || (e.u == f.v && e.v == f.u)) {
                out.push(LocalMove::Parallel { e1: i, e2: j });
            }
        }
    }
    for v in 0..g.interior.len() {
        for mv in [LocalMove::RemoveSpike { vertex: v }, LocalMove::Series { vertex: v }, LocalMove::YDelta { vertex: v }] {
            if local_move(g, &mv).is_ok() {
                out.push(mv);
            }
        }
    }
    // triangles on simple edges
    let m = g.edges.len();
    for a in 0..m {
        for b in a + 1..m {
            for c in b + 1..m {
                let mv = LocalMove::DeltaY { e1: a, e2: b, e3: c };
                let ea = &g.edges[a];
                if !(g.edges[b].touches(ea.u) || g.edges[b].touches(ea.v)) {
                    continue;
                }
                if local_move(g, &mv).is_ok() {
                    out.push(mv);
                }
            }
        }
    }
    out
}

/// A network with every circular minor positive, all conductances 1.
///
/// Built from the reduced wiring diagram of the longest permutation: `n`
/// wires, crossings of adjacent wires in bubble-sort order, faces in
/// alternating columns coloured black. Black faces are the vertices; each
/// crossing contributes one edge between the two black faces it touches.
/// The `n` black faces on the outer boundary become boundary vertices.
pub fn well_connected(n: usize) -> Network {
    assert!(n >= 2, "well_connected needs n >= 2");
    let word: Vec<usize> = (1..n).flat_map(|i| 1..=n - i).collect();
    let mut seg = vec![0usize; n + 1];
    let mut face_edges: Vec<((usize, usize), (usize, usize))> = Vec::new();
    for &j in &word {
        if j % 2 == 0 {
            face_edges.push(((j, seg[j]), (j, seg[j] + 1)));
        } else {
            face_edges.push(((j - 1, seg[j - 1]), (j + 1, seg[j + 1])));
        }
        seg[j] += 1;
    }
    let mut outer = vec![(0, 0)];
    outer.extend((1..n).map(|gap| (gap, seg[gap])));
    outer.push((n, 0));
    outer.extend((1..n).rev().map(|gap| (gap, 0)));
    let labels: BTreeMap<(usize, usize), Label> =
        outer.into_iter().filter(|f| f.0 % 2 == 0).enumerate().map(|(i, f)| (f, (i + 1) as Label)).collect();
    debug_assert_eq!(labels.len(), n);
    let mut net = Network::empty(n);
    let mut inner: BTreeMap<(usize, usize), Vertex> = BTreeMap::new();
    let mut vertex = |net: &mut Network, f: (usize, usize)| -> Vertex {
        if let Some(&b) = labels.get(&f) {
            return Vertex::Boundary(b);
        }
        *inner.entry(f).or_insert_with(|| net.add_interior(&format!("f{}_{}", f.0, f.1)))
    };
    for (a, b) in face_edges {
        let (u, v) = (vertex(&mut net, a), vertex(&mut net, b));
        net.add_edge(u, v, Rational::one());
    }
    net
}

/// Random network: start from [`well_connected`] and apply random deletions,
/// contractions, subdivisions, parallel copies, spikes and loops, keeping at
/// most `max_interior` interior vertices. Conductances are random.
pub fn random_network<R: Rng + ?Sized>(n: usize, max_interior: usize, rng: &mut R) -> Network {
    let mut g = well_connected(n);
    // shrink the interior first
    while g.interior.len() > max_interior {
        let cands: Vec<usize> =
            (0..g.edges.len()).filter(|&i| matches!(g.edges[i].u, Vertex::Interior(_)) || matches!(g.edges[i].v, Vertex::Interior(_))).collect();
        let e = cands[rng.gen_range(0..cands.len())];
        g = if rng.gen_bool(0.7) { contract_edge(&g, e).unwrap() } else { delete_edge(&g, e).unwrap().prune_floating() };
    }
    let steps = rng.gen_range(0..6);
    for _ in 0..steps {
        if g.edges.is_empty() {
            break;
        }
        let e = rng.gen_range(0..g.edges.len());
        match rng.gen_range(0..6) {
            0 => g = delete_edge(&g, e).unwrap().prune_floating(),
            1 => {
                if let Ok(h) = contract_edge(&g, e) {
                    g = h;
                }
            }
            2 if g.interior.len() < max_interior && !g.edges[e].is_loop() => {
                let Edge { u, v, .. } = g.edges[e].clone();
                let mut h = delete_edge(&g, e).unwrap();
                let w = h.add_interior("s");
                h.add_edge(u, w, Rational::one());
                h.add_edge(w, v, Rational::one());
                g = h;
            }
            3 => {
                let Edge { u, v, .. } = g.edges[e].clone();
                g.add_edge(u, v, Rational::one());
            }
            4 if g.interior.len() < max_interior => {
                let u = g.edges[e].u;
                let w = g.add_interior("t");
                g.add_edge(u, w, Rational::one());
            }
            5 => {
                let u = g.edges[e].v;
                g.add_edge(u, u, Rational::one());
            }
            _ => {}
        }
    }
    g.with_random_conductances(rng)
}

/// Pairs with a positive minor.
pub fn positive_pairs(m: &ResponseMatrix) -> PairSet {
    let mut out = PairSet::new(m.n());
    for p in enumerate_pairs(m.n(), None).iter() {
        if m.minor(p).is_positive() {
            out.insert(p.clone());
        }
    }
    out
}
