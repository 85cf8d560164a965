//! Weak separation of circular pairs: maximal collections, the size
//! bounds, Hall matchings, and the search for positivity-test evidence.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::circ::{binom2, generate_diametric, weakly_separated_pairs, CircularPair, Label};
use crate::linalg::{circular_minor, ExactMatrix, Rational};
use crate::mutation::{enumerate_plucker_clusters, ClusterFamily, MoveKind, MutationError, PairIndex};
use crate::network::{response_matrix, well_connected};
use crate::rewrite::{ExprArena, ExprId, RewriteError, Rewriter};
use crate::sample::{random_conductance, rng_from_seed, SeededRng};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WsepError {
    #[error("{what} is limited to n <= {limit}, got {n}")]
    Scale { what: &'static str, n: usize, limit: usize },
    #[error("{0} and {1} are not weakly separated")]
    NotWeaklySeparated(String, String),
    #[error("target {0} already belongs to the set")]
    TargetInSet(String),
    #[error("{0} is not a cluster reachable by (P1)/(P2) exchanges")]
    NotACluster(String),
    #[error("pairs live on different vertex counts")]
    Mixed,
    #[error(transparent)]
    Mutation(#[from] MutationError),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
}

fn show(c: &BTreeSet<CircularPair>) -> String {
    let v: Vec<String> = c.iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", v.join(" "))
}

/// Nonempty circular pairs with weak separation as adjacency.
#[derive(Debug, Clone)]
pub struct CompatibilityGraph {
    index: PairIndex,
    adj: Vec<u128>,
}

impl CompatibilityGraph {
    pub fn new(n: usize) -> Result<Self, WsepError> {
        let index = PairIndex::new(n)?;
        let m = index.len();
        let mut adj = vec![0u128; m];
        for i in 1..m {
            for j in i + 1..m {
                if weakly_separated_pairs(index.pair(i), index.pair(j)) {
                    adj[i] |= 1 << j;
                    adj[j] |= 1 << i;
                }
            }
        }
        Ok(CompatibilityGraph { index, adj })
    }
    pub fn index(&self) -> &PairIndex {
        &self.index
    }
    pub fn vertex_count(&self) -> usize {
        self.index.len() - 1
    }
    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.count_ones() as usize).sum::<usize>() / 2
    }
    pub fn adjacent(&self, x: &CircularPair, y: &CircularPair) -> bool {
        self.adj[self.index.index(x)] >> self.index.index(y) & 1 == 1
    }
    /// All maximal cliques, as bitmasks over the pair index.
    pub fn maximal_cliques(&self) -> Vec<u128> {
        let all: u128 = (1..self.index.len()).fold(0, |m, i| m | 1 << i);
        // split the top level by degeneracy order, then pivot below
        let order = degeneracy_order(&self.adj, all);
        let mut tops = Vec::new();
        let mut p = all;
        let mut x = 0u128;
        for &v in &order {
            let bit = 1u128 << v;
            tops.push((bit, p & self.adj[v], x & self.adj[v]));
            p &= !bit;
            x |= bit;
        }
        let mut out: Vec<u128> = tops
            .into_par_iter()
            .flat_map_iter(|(r, p, x)| {
                let mut acc = Vec::new();
                bron_kerbosch(r, p, x, &self.adj, &mut acc);
                acc
            })
            .collect();
        out.sort_unstable();
        out
    }
}

fn bits(mut m: u128) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            return None;
        }
        let i = m.trailing_zeros() as usize;
        m &= m - 1;
        Some(i)
    })
}

fn degeneracy_order(adj: &[u128], all: u128) -> Vec<usize> {
    let mut left = all;
    let mut order = Vec::new();
    while left != 0 {
        let v = bits(left).min_by_key(|&v| (adj[v] & left).count_ones()).expect("nonempty");
        order.push(v);
        left &= !(1u128 << v);
    }
    order
}

fn bron_kerbosch(r: u128, mut p: u128, mut x: u128, adj: &[u128], out: &mut Vec<u128>) {
    if p == 0 {
        if x == 0 {
            out.push(r);
        }
        return;
    }
    let pivot = bits(p | x).max_by_key(|&u| (p & adj[u]).count_ones()).expect("nonempty");
    for v in bits(p & !adj[pivot]) {
        let bit = 1u128 << v;
        bron_kerbosch(r | bit, p & adj[v], x & adj[v], adj, out);
        p &= !bit;
        x |= bit;
    }
}

/// Every maximal set of pairwise weakly separated nonempty circular pairs.
pub fn maximal_ws_collections(n: usize) -> Result<Vec<BTreeSet<CircularPair>>, WsepError> {
    if n > 6 {
        return Err(WsepError::Scale { what: "maximal collection enumeration", n, limit: 6 });
    }
    let g = CompatibilityGraph::new(n)?;
    let mut out: Vec<BTreeSet<CircularPair>> = g.maximal_cliques().into_iter().map(|m| g.index.set(m)).collect();
    out.sort();
    Ok(out)
}

/// First pair of elements that are not weakly separated.
pub fn ws_witness(c: &BTreeSet<CircularPair>) -> Option<(CircularPair, CircularPair)> {
    let v: Vec<&CircularPair> = c.iter().collect();
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if !weakly_separated_pairs(v[i], v[j]) {
                return Some((v[i].clone(), v[j].clone()));
            }
        }
    }
    None
}

fn require_ws(c: &BTreeSet<CircularPair>) -> Result<(), WsepError> {
    if let Some((a, b)) = ws_witness(c) {
        return Err(WsepError::NotWeaklySeparated(a.to_string(), b.to_string()));
    }
    Ok(())
}

/// `|C|` against the number of chords `|E|` used by `C`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StrongBound {
    pub size: usize,
    pub chords: usize,
}

impl StrongBound {
    pub fn holds(&self) -> bool {
        self.size <= self.chords
    }
}

pub fn check_strongbound(c: &BTreeSet<CircularPair>) -> Result<StrongBound, WsepError> {
    require_ws(c)?;
    let chords: BTreeSet<(Label, Label)> = c.iter().flat_map(|x| x.edges()).collect();
    Ok(StrongBound { size: c.len(), chords: chords.len() })
}

/// An injection `e` with `e(P;Q) ∈ E(P;Q)`, by augmenting paths. `None`
/// means no such injection exists.
pub fn hall_matching(c: &BTreeSet<CircularPair>) -> Result<Option<BTreeMap<CircularPair, (Label, Label)>>, WsepError> {
    require_ws(c)?;
    let left: Vec<&CircularPair> = c.iter().collect();
    let chords: Vec<(Label, Label)> = c.iter().flat_map(|x| x.edges()).collect::<BTreeSet<_>>().into_iter().collect();
    let options: Vec<Vec<usize>> = left
        .iter()
        .map(|x| x.edges().iter().map(|e| chords.binary_search(e).expect("chord listed")).collect())
        .collect();
    let mut owner: Vec<Option<usize>> = vec![None; chords.len()];
    fn augment(u: usize, options: &[Vec<usize>], owner: &mut [Option<usize>], seen: &mut [bool]) -> bool {
        for &e in &options[u] {
            if seen[e] {
                continue;
            }
            seen[e] = true;
            if owner[e].map_or(true, |w| augment(w, options, owner, seen)) {
                owner[e] = Some(u);
                return true;
            }
        }
        false
    }
    for u in 0..left.len() {
        let mut seen = vec![false; chords.len()];
        if !augment(u, &options, &mut owner, &mut seen) {
            return Ok(None);
        }
    }
    let mut out = BTreeMap::new();
    for (e, o) in owner.iter().enumerate() {
        if let Some(u) = o {
            out.insert(left[*u].clone(), chords[e]);
        }
    }
    Ok(Some(out))
}

/// A pairwise weakly separated set: a random maximal collection cut to a
/// random size.
pub fn random_ws_subset(n: usize, rng: &mut SeededRng) -> BTreeSet<CircularPair> {
    let mut pool: Vec<CircularPair> = crate::circ::enumerate_pairs(n, None).into_members().into_iter().filter(|x| !x.is_empty()).collect();
    pool.shuffle(rng);
    let mut out: Vec<CircularPair> = Vec::new();
    for x in pool {
        if out.iter().all(|y| weakly_separated_pairs(&x, y)) {
            out.push(x);
        }
    }
    let keep = rng.gen_range(1..=out.len());
    out.truncate(keep);
    out.into_iter().collect()
}

// ---------------------------------------------------------------------------
// positivity tests

/// Expressions of every diametric minor over the variables of one cluster,
/// built by undoing its exchange path.
#[derive(Debug, Clone)]
pub struct Certificate {
    pub cluster: BTreeSet<CircularPair>,
    pub arena: ExprArena,
    pub roots: BTreeMap<CircularPair, ExprId>,
}

impl Certificate {
    pub fn build(family: &ClusterFamily, cluster: &BTreeSet<CircularPair>) -> Result<Certificate, WsepError> {
        let path = family.path(cluster).ok_or_else(|| WsepError::NotACluster(show(cluster)))?;
        let mut arena = ExprArena::new();
        let mut expr: BTreeMap<CircularPair, ExprId> = BTreeMap::new();
        for x in cluster {
            let id = arena.var(x.clone());
            expr.insert(x.clone(), id);
        }
        let get = |arena: &mut ExprArena, expr: &BTreeMap<CircularPair, ExprId>, x: &CircularPair| match expr.get(x) {
            Some(&id) => id,
            None => {
                debug_assert!(x.is_empty());
                arena.one()
            }
        };
        for mv in path.iter().rev() {
            let rel = mv.relation.as_ref().expect("plücker move");
            let y = mv.entering.as_ref().expect("plücker move");
            let t: Vec<ExprId> = rel.rhs.iter().flatten().map(|r| get(&mut arena, &expr, r)).collect();
            let a = arena.mul(t[0], t[1]);
            let b = arena.mul(t[2], t[3]);
            let s = arena.add(a, b);
            let yid = get(&mut arena, &expr, y);
            let x = arena.div(s, yid);
            expr.insert(mv.leaving.clone(), x);
        }
        let n = family.n;
        let roots = generate_diametric(n).into_members().into_iter().map(|d| (d.clone(), expr[&d])).collect();
        Ok(Certificate { cluster: cluster.clone(), arena, roots })
    }

    pub fn is_subtraction_free(&self) -> bool {
        self.roots.values().all(|&r| {
            self.arena.operators(r).iter().all(|o| matches!(*o, "+" | "*" | "/"))
                && self.arena.variables(r).iter().all(|v| self.cluster.contains(v))
        })
    }

    /// Diametric values from cluster values.
    pub fn diametric_values(&self, value: &dyn Fn(&CircularPair) -> Option<Rational>) -> Result<BTreeMap<CircularPair, Rational>, RewriteError> {
        let keys: Vec<&CircularPair> = self.roots.keys().collect();
        let ids: Vec<ExprId> = self.roots.values().copied().collect();
        let vals = self.arena.eval_many(&ids, value)?;
        Ok(keys.into_iter().cloned().zip(vals).collect())
    }

    /// Subtraction-free and exact at every matrix.
    pub fn check(&self, matrices: &[ExactMatrix]) -> bool {
        self.is_subtraction_free()
            && matrices.iter().all(|m| {
                match self.diametric_values(&|p| circular_minor(m, p).ok()) {
                    Ok(v) => v.iter().all(|(d, x)| circular_minor(m, d).ok().as_ref() == Some(x)),
                    Err(_) => false,
                }
            })
    }
}

/// The off-diagonal entries as expressions over the diametric minors.
#[derive(Debug, Clone)]
pub struct EntryRewrites {
    n: usize,
    rewriter: Rewriter,
    roots: Vec<(usize, usize, ExprId)>,
}

impl EntryRewrites {
    pub fn new(n: usize) -> Result<Self, WsepError> {
        let mut rewriter = Rewriter::new(n);
        let mut roots = Vec::new();
        for i in 1..=n as Label {
            for j in i + 1..=n as Label {
                let x = CircularPair::new(n, vec![i], vec![j]).map_err(MutationError::from)?;
                roots.push((i as usize - 1, j as usize - 1, rewriter.express(&x)?));
            }
        }
        Ok(EntryRewrites { n, rewriter, roots })
    }

    /// The symmetric zero-row-sum matrix whose diametric minors take the
    /// given values, when the rewrite has no vanishing denominator.
    pub fn matrix(&self, diametric: &BTreeMap<CircularPair, Rational>) -> Option<ExactMatrix> {
        let ids: Vec<ExprId> = self.roots.iter().map(|r| r.2).collect();
        let vals = self.rewriter.arena().eval_many(&ids, &|p| diametric.get(p).cloned()).ok()?;
        let mut m = ExactMatrix::zeros(self.n, self.n);
        for (&(i, j, _), v) in self.roots.iter().zip(vals) {
            // a 1×1 circular minor is -M_ij
            m.set(i, j, -v.clone());
            m.set(j, i, -v);
        }
        for i in 0..self.n {
            let s: Rational = (0..self.n).filter(|&j| j != i).map(|j| m.get(i, j).clone()).sum();
            m.set(i, i, -s);
        }
        Some(m)
    }
}

fn separates(m: &ExactMatrix, keep: &BTreeSet<CircularPair>, target: &CircularPair) -> bool {
    keep.iter().all(|c| circular_minor(m, c).is_ok_and(|v| v.is_positive()))
        && circular_minor(m, target).is_ok_and(|v| !v.is_positive())
}

/// Falsifies the positivity-test property of `cluster − x` using cluster
/// coordinates: `x` is set negative and the rest positive, the diametric
/// minors are recovered from the certificate and the matrix from the
/// rewrites. Each attempt is checked exactly.
pub fn falsify_in_cluster(
    cert: &Certificate,
    entries: &EntryRewrites,
    x: &CircularPair,
    budget: usize,
    rng: &mut SeededRng,
) -> Option<ExactMatrix> {
    let keep: BTreeSet<CircularPair> = cert.cluster.iter().filter(|c| *c != x).cloned().collect();
    for _ in 0..budget {
        let vals: BTreeMap<CircularPair, Rational> = cert
            .cluster
            .iter()
            .map(|c| {
                let v = random_conductance(rng);
                (c.clone(), if c == x { -v } else { v })
            })
            .collect();
        let Ok(d) = cert.diametric_values(&|p| vals.get(p).cloned()) else { continue };
        let Some(m) = entries.matrix(&d) else { continue };
        if separates(&m, &keep, x) {
            return Some(m);
        }
    }
    None
}

// Plain f64 determinant, partial pivoting.
fn det_f64(mut a: Vec<Vec<f64>>) -> f64 {
    let k = a.len();
    let mut det = 1.0;
    for c in 0..k {
        let p = (c..k).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).expect("rows");
        if a[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c];
        for r in c + 1..k {
            let f = a[r][c] / a[c][c];
            for j in c..k {
                a[r][j] -= f * a[c][j];
            }
        }
    }
    det
}

fn minor_f64(w: &[Vec<f64>], x: &CircularPair) -> f64 {
    // off-diagonal entries only: M_ij = -w_ij
    let a: Vec<Vec<f64>> = x
        .p()
        .iter()
        .map(|&i| x.q().iter().map(|&j| -w[i as usize - 1][j as usize - 1]).collect())
        .collect();
    let s = if x.k() % 2 == 0 { 1.0 } else { -1.0 };
    s * det_f64(a)
}

fn to_exact(w: &[Vec<f64>]) -> ExactMatrix {
    let n = w.len();
    let r = |v: f64| Rational::from_float(v).unwrap_or_else(Rational::zero);
    let mut m = ExactMatrix::from_fn(n, n, |i, j| if i == j { Rational::zero() } else { -r(w[i][j]) });
    for i in 0..n {
        let s: Rational = (0..n).filter(|&j| j != i).map(|j| m.get(i, j).clone()).sum();
        m.set(i, i, -s);
    }
    m
}

/// Randomised search for a symmetric zero-row-sum matrix with every minor
/// of `c` positive and the `target` minor non-positive. Hill-climbs on the
/// off-diagonal entries from restarts at response matrices; `budget`
/// bounds the number of evaluations. A hit is verified exactly.
pub fn positivity_falsify(
    c: &BTreeSet<CircularPair>,
    target: &CircularPair,
    budget: usize,
    seed: u64,
) -> Result<Option<ExactMatrix>, WsepError> {
    if c.contains(target) {
        return Err(WsepError::TargetInSet(target.to_string()));
    }
    let n = target.n();
    if c.iter().any(|x| x.n() != n) {
        return Err(WsepError::Mixed);
    }
    let mut rng = rng_from_seed(seed);
    let wc = well_connected(n);
    let keep: Vec<&CircularPair> = c.iter().filter(|x| !x.is_empty()).collect();
    let loss = |w: &[Vec<f64>]| -> f64 {
        let scale = |x: &CircularPair| 1.0 / (x.k().max(1) as f64);
        let mut l = 0.0;
        for x in &keep {
            let v = minor_f64(w, x);
            if v <= 0.0 {
                l += (1.0 - v).ln() * scale(x) + 1.0;
            }
        }
        let v = minor_f64(w, target);
        if v > 0.0 {
            l += (1.0 + v).ln() * scale(target) + 1.0;
        }
        l
    };
    let mut spent = 0usize;
    let mut restart = 0usize;
    while spent < budget {
        // alternate between a positive start and one with random signs
        let mut w: Vec<Vec<f64>> = if restart % 2 == 0 {
            let r = response_matrix(&wc.with_random_conductances(&mut rng)).expect("connected");
            (0..n).map(|i| (0..n).map(|j| if i == j { 0.0 } else { -r.matrix().get(i, j).to_f64_lossy() }).collect()).collect()
        } else {
            let mut w = vec![vec![0.0; n]; n];
            for i in 0..n {
                for j in i + 1..n {
                    let v = rng.gen_range(-1.0..1.0);
                    w[i][j] = v;
                    w[j][i] = v;
                }
            }
            w
        };
        restart += 1;
        let mut cur = loss(&w);
        spent += 1;
        let mut step = 0.5;
        let mut stale = 0;
        while spent < budget && stale < 100 {
            if cur == 0.0 {
                let m = to_exact(&w);
                if separates(&m, c, target) {
                    return Ok(Some(m));
                }
                break;
            }
            let old = w.clone();
            if rng.gen_bool(0.5) {
                let i = rng.gen_range(0..n);
                let mut j = rng.gen_range(0..n - 1);
                if j >= i {
                    j += 1;
                }
                let nv = w[i][j] + step * w[i][j].abs().max(1e-3) * rng.gen_range(-1.0..1.0);
                w[i][j] = nv;
                w[j][i] = nv;
            } else {
                for i in 0..n {
                    for j in i + 1..n {
                        let nv = w[i][j] + step * rng.gen_range(-1.0..1.0);
                        w[i][j] = nv;
                        w[j][i] = nv;
                    }
                }
            }
            let l = loss(&w);
            spent += 1;
            if l < cur {
                cur = l;
                stale = 0;
            } else {
                w = old;
                stale += 1;
                if stale % 25 == 0 {
                    step *= 0.5;
                }
            }
        }
    }
    Ok(None)
}

trait LossyF64 {
    fn to_f64_lossy(&self) -> f64;
}

impl LossyF64 for Rational {
    fn to_f64_lossy(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.to_f64().unwrap_or(0.0)
    }
}

// ---------------------------------------------------------------------------
// the conjecture harness

#[derive(Debug, Clone, Default, Serialize)]
pub struct ConjectureCounts {
    pub ws_collections: usize,
    pub clusters: usize,
    pub certified: usize,
    pub minimality_checks: usize,
    pub falsified: usize,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct ConjectureEqualities {
    /// Maximal collections that are not clusters.
    pub ws_minus_clusters: Vec<String>,
    /// Clusters that are not maximal collections.
    pub clusters_minus_ws: Vec<String>,
    pub ws_equals_clusters: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConjectureReport {
    pub n: usize,
    pub counts: ConjectureCounts,
    pub equalities: ConjectureEqualities,
    pub failures: Vec<String>,
    pub seed: u64,
    pub budget: usize,
    pub wall_time: f64,
}

impl ConjectureReport {
    pub fn ok(&self) -> bool {
        self.equalities.ws_equals_clusters && self.failures.is_empty()
    }
}

fn mix(seed: u64, a: usize, b: usize) -> u64 {
    seed ^ (a as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ (b as u64).wrapping_mul(0xc2b2_ae3d_27d4_eb4f)
}

/// Compares maximal weakly separated collections with the (P1)/(P2)
/// clusters, certifies every cluster as a positivity test, and searches
/// for evidence that no element of a cluster can be dropped.
pub fn verify_conjecture(n: usize, budget: usize, seed: u64) -> Result<ConjectureReport, WsepError> {
    if !(3..=6).contains(&n) {
        return Err(WsepError::Scale { what: "conjecture verification", n, limit: 6 });
    }
    let start = Instant::now();
    let ws: BTreeSet<BTreeSet<CircularPair>> = maximal_ws_collections(n)?.into_iter().collect();
    let family = enumerate_plucker_clusters(n, &[MoveKind::P1, MoveKind::P2])?;
    let clusters: BTreeSet<BTreeSet<CircularPair>> = family.clusters().into_iter().collect();
    let equalities = ConjectureEqualities {
        ws_minus_clusters: ws.difference(&clusters).map(show).collect(),
        clusters_minus_ws: clusters.difference(&ws).map(show).collect(),
        ws_equals_clusters: ws == clusters,
    };
    let entries = EntryRewrites::new(n)?;
    let mut rng = rng_from_seed(seed);
    let wc = well_connected(n);
    let probes: Vec<ExactMatrix> =
        (0..3).map(|_| response_matrix(&wc.with_random_conductances(&mut rng)).expect("connected").into_matrix()).collect();
    let list: Vec<BTreeSet<CircularPair>> = clusters.into_iter().collect();
    let results: Vec<(bool, usize, usize, Vec<String>)> = list
        .par_iter()
        .enumerate()
        .map(|(ci, c)| {
            let mut failures = Vec::new();
            let cert = match Certificate::build(&family, c) {
                Ok(cert) => cert,
                Err(e) => return (false, 0, 0, vec![format!("{}: {e}", show(c))]),
            };
            let certified = cert.check(&probes);
            if !certified {
                failures.push(format!("{}: certificate failed", show(c)));
            }
            let (mut checks, mut hits) = (0, 0);
            for (xi, x) in c.iter().enumerate() {
                checks += 1;
                let mut r = rng_from_seed(mix(seed, ci, xi));
                if falsify_in_cluster(&cert, &entries, x, budget, &mut r).is_some() {
                    hits += 1;
                } else {
                    failures.push(format!("{}: no counterexample dropping {x} within {budget} attempts", show(c)));
                }
            }
            (certified, checks, hits, failures)
        })
        .collect();
    let mut counts = ConjectureCounts { ws_collections: ws.len(), clusters: list.len(), ..Default::default() };
    let mut failures = Vec::new();
    for (ok, checks, hits, f) in results {
        counts.certified += usize::from(ok);
        counts.minimality_checks += checks;
        counts.falsified += hits;
        failures.extend(f);
    }
    if list.iter().any(|c| c.len() != binom2(n)) {
        failures.push("a cluster does not have C(n,2) elements".into());
    }
    Ok(ConjectureReport { n, counts, equalities, failures, seed, budget, wall_time: start.elapsed().as_secs_f64() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(n: usize, p: &[Label], q: &[Label]) -> CircularPair {
        CircularPair::new(n, p.to_vec(), q.to_vec()).unwrap()
    }

    #[test]
    fn diametric_extends_to_a_maximal_collection() {
        let d = generate_diametric(4).into_members();
        let all = maximal_ws_collections(4).unwrap();
        assert!(all.iter().any(|c| c.is_superset(&d) && c.len() == 6));
        for n in [4, 5] {
            for c in maximal_ws_collections(n).unwrap() {
                assert!(c.len() <= binom2(n));
                assert!(check_strongbound(&c).unwrap().holds());
                assert!(hall_matching(&c).unwrap().is_some());
            }
        }
    }

    #[test]
    fn strongbound_examples() {
        let c: BTreeSet<_> = [pair(4, &[1], &[3])].into_iter().collect();
        assert_eq!(check_strongbound(&c).unwrap(), StrongBound { size: 1, chords: 1 });
        assert!(check_strongbound(&generate_diametric(5).into_members()).unwrap().holds());
        let bad: BTreeSet<_> = [pair(4, &[1], &[2]), pair(4, &[3], &[4])].into_iter().collect();
        assert!(matches!(check_strongbound(&bad), Err(WsepError::NotWeaklySeparated(..))));
    }

    #[test]
    fn hall_example() {
        let c: BTreeSet<_> = [pair(4, &[1], &[2]), pair(4, &[1], &[3])].into_iter().collect();
        let m = hall_matching(&c).unwrap().unwrap();
        assert_eq!(m[&pair(4, &[1], &[2])], (1, 2));
        assert_eq!(m[&pair(4, &[1], &[3])], (1, 3));
        for n in 4..=6 {
            assert!(hall_matching(&generate_diametric(n).into_members()).unwrap().is_some());
        }
    }

    #[test]
    fn falsifier_on_diametric_sets() {
        let d = generate_diametric(4).into_members();
        let frozen = crate::mutation::LmCluster::initial(4).frozen;
        for x in d.iter().filter(|x| !frozen.contains(x)) {
            let mut c = d.clone();
            c.remove(x);
            let m = positivity_falsify(&c, x, 10_000, 0).unwrap().expect("counterexample");
            assert!(separates(&m, &c, x));
        }
        assert!(matches!(positivity_falsify(&d, d.iter().next().unwrap(), 10, 0), Err(WsepError::TargetInSet(_))));
        let d5 = generate_diametric(5).into_members();
        for x in crate::circ::enumerate_pairs(5, None).iter().filter(|x| !x.is_empty() && !d5.contains(x)).take(4) {
            assert!(positivity_falsify(&d5, x, 2_000, 1).unwrap().is_none());
        }
    }

    #[test]
    fn conjecture_at_four() {
        let r = verify_conjecture(4, 1000, 0).unwrap();
        assert!(r.ok(), "{r:?}");
        assert_eq!(r.counts.ws_collections, r.counts.clusters);
    }
}
