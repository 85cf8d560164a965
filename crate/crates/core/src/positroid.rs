//! Electrical positroid axioms, boundary edge/spike properties and the
//! extensions that add a boundary edge or spike, plus desk-scale enumeration
//! of positroids and of the sets realised by networks.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::circ::{arrange, combinations, enumerate_pairs, CircularPair, Label, PairSet};
use crate::network::{connections, well_connected, Network, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PositroidError {
    #[error("exhaustive search on {n} boundary vertices is out of scale (limit {limit})")]
    Scale { n: usize, limit: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub enum AxiomId {
    A1a,
    A1b,
    A1c,
    A2a,
    A2b,
    /// The three-term row axiom with premise `(P−c;Q),(P−a−b;Q−d)`.
    A2c,
    /// The same axiom with the premise `(P−c;Q),(P−a−c;Q−d)`.
    A2cPrinted,
    Subset,
    Empty,
}

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            AxiomId::A1a => "1a",
            AxiomId::A1b => "1b",
            AxiomId::A1c => "1c",
            AxiomId::A2a => "2a",
            AxiomId::A2b => "2b",
            AxiomId::A2c => "2c",
            AxiomId::A2cPrinted => "2c-printed",
            AxiomId::Subset => "3",
            AxiomId::Empty => "4",
        };
        f.write_str(s)
    }
}

/// A failing instance of an axiom. Replaying `premises` against the set finds
/// them all present and at least one of `missing` absent.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct AxiomWitness {
    pub axiom: AxiomId,
    /// The frame `(P;Q)` the axiom is instantiated on, and the chosen labels.
    pub frame: (Vec<Label>, Vec<Label>),
    pub labels: Vec<Label>,
    pub premises: Vec<String>,
    pub missing: Vec<String>,
}

impl fmt::Display for AxiomWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "axiom {} on frame {:?};{:?} with labels {:?}: {} present but {} missing",
            self.axiom,
            self.frame.0,
            self.frame.1,
            self.labels,
            self.premises.join(", "),
            self.missing.join(", ")
        )
    }
}

/// Verdict of [`axiom_report`].
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct AxiomReport {
    pub failure: Option<AxiomWitness>,
    /// Instances where the printed form of the three-term row axiom fails.
    /// They do not affect the verdict.
    pub printed_2c_failures: Vec<AxiomWitness>,
}

fn rm(list: &[Label], drop: &[Label]) -> Vec<Label> {
    list.iter().copied().filter(|x| !drop.contains(x)).collect()
}

/// All orderings `(R;C)` of `|R| = r`, `|C| = c` labels with `r1..rr, cc..c1`
/// clockwise. For `r = c` each circular pair appears under both
/// representatives.
pub fn ladder_frames(n: usize, r: usize, c: usize) -> Vec<(Vec<Label>, Vec<Label>)> {
    let labels: Vec<Label> = (1..=n as Label).collect();
    let mut out = Vec::new();
    if r + c > n {
        return out;
    }
    for chosen in combinations(&labels, r + c) {
        let m = chosen.len();
        for s in 0..m {
            let rows: Vec<Label> = (0..r).map(|j| chosen[(s + j) % m]).collect();
            let cols: Vec<Label> = (0..c).map(|j| chosen[(s + m - 1 - j) % m]).collect();
            out.push((rows, cols));
        }
    }
    out
}

struct Checker<'a> {
    n: usize,
    set: &'a HashSet<CircularPair>,
}

impl Checker<'_> {
    fn pair(&self, p: Vec<Label>, q: Vec<Label>) -> CircularPair {
        CircularPair::from_valid(self.n, p, q)
    }
    fn has(&self, p: &CircularPair) -> bool {
        self.set.contains(p)
    }
}

fn witness(
    axiom: AxiomId,
    frame: (&[Label], &[Label]),
    labels: &[Label],
    prem: &[&CircularPair],
    concl: &[&CircularPair],
    chk: &Checker,
) -> AxiomWitness {
    AxiomWitness {
        axiom,
        frame: (frame.0.to_vec(), frame.1.to_vec()),
        labels: labels.to_vec(),
        premises: prem.iter().map(|p| p.to_string()).collect(),
        missing: concl.iter().filter(|p| !chk.has(p)).map(|p| p.to_string()).collect(),
    }
}

/// Checks all eight axioms. The verdict uses the three-term row axiom with
/// premise `(P−c;Q),(P−a−b;Q−d)`; instances of the printed premise
/// `(P−c;Q),(P−a−c;Q−d)` that fail are collected separately.
pub fn axiom_report(s: &PairSet) -> AxiomReport {
    let n = s.n();
    let set: HashSet<CircularPair> = s.iter().cloned().collect();
    let chk = Checker { n, set: &set };
    let mut printed = Vec::new();
    let fail = |w| AxiomReport { failure: Some(w), printed_2c_failures: Vec::new() };

    let empty = CircularPair::empty(n);
    if !chk.has(&empty) {
        return fail(AxiomWitness {
            axiom: AxiomId::Empty,
            frame: (vec![], vec![]),
            labels: vec![],
            premises: vec![],
            missing: vec![empty.to_string()],
        });
    }
    for x in s.iter() {
        for i in 0..x.k() {
            let (a, b) = (x.p()[i], x.q()[i]);
            let sub = chk.pair(rm(x.p(), &[a]), rm(x.q(), &[b]));
            if !chk.has(&sub) {
                return fail(witness(AxiomId::Subset, (x.p(), x.q()), &[a, b], &[x], &[&sub], &chk));
            }
        }
    }
    for big in 2..=n / 2 {
        for (p, q) in ladder_frames(n, big, big) {
            for i in 0..big {
                for j in i + 1..big {
                    for k in 0..big {
                        for l in k + 1..big {
                            let (a, b, c, d) = (p[i], p[j], q[k], q[l]);
                            let ac = chk.pair(rm(&p, &[a]), rm(&q, &[c]));
                            let bd = chk.pair(rm(&p, &[b]), rm(&q, &[d]));
                            let ad = chk.pair(rm(&p, &[a]), rm(&q, &[d]));
                            let bc = chk.pair(rm(&p, &[b]), rm(&q, &[c]));
                            let abcd = chk.pair(rm(&p, &[a, b]), rm(&q, &[c, d]));
                            let full = chk.pair(p.clone(), q.clone());
                            let labels = [a, b, c, d];
                            let (hac, hbd, had, hbc, habcd, hfull) =
                                (chk.has(&ac), chk.has(&bd), chk.has(&ad), chk.has(&bc), chk.has(&abcd), chk.has(&full));
                            if hac && hbd && !((had && hbc) || (habcd && hfull)) {
                                return fail(witness(AxiomId::A1a, (&p, &q), &labels, &[&ac, &bd], &[&ad, &bc, &abcd, &full], &chk));
                            }
                            if had && hbc && !(hac && hbd) {
                                return fail(witness(AxiomId::A1b, (&p, &q), &labels, &[&ad, &bc], &[&ac, &bd], &chk));
                            }
                            if habcd && hfull && !(hac && hbd) {
                                return fail(witness(AxiomId::A1c, (&p, &q), &labels, &[&abcd, &full], &[&ac, &bd], &chk));
                            }
                        }
                    }
                }
            }
        }
    }
    for small in 2..=(n - 1) / 2 {
        for (p, q) in ladder_frames(n, small + 1, small) {
            for i in 0..=small {
                for j in i + 1..=small {
                    for k in j + 1..=small {
                        for l in 0..small {
                            let (a, b, c, d) = (p[i], p[j], p[k], q[l]);
                            let qd = rm(&q, &[d]);
                            let pa = chk.pair(rm(&p, &[a]), q.clone());
                            let pb = chk.pair(rm(&p, &[b]), q.clone());
                            let pc = chk.pair(rm(&p, &[c]), q.clone());
                            let pbc = chk.pair(rm(&p, &[b, c]), qd.clone());
                            let pac = chk.pair(rm(&p, &[a, c]), qd.clone());
                            let pab = chk.pair(rm(&p, &[a, b]), qd.clone());
                            let labels = [a, b, c, d];
                            let (ha, hb, hc, hbc, hac, hab) =
                                (chk.has(&pa), chk.has(&pb), chk.has(&pc), chk.has(&pbc), chk.has(&pac), chk.has(&pab));
                            if hb && hac && !((ha && hbc) || (hc && hab)) {
                                return fail(witness(AxiomId::A2a, (&p, &q), &labels, &[&pb, &pac], &[&pa, &pbc, &pc, &pab], &chk));
                            }
                            if ha && hbc && !(hb && hac) {
                                return fail(witness(AxiomId::A2b, (&p, &q), &labels, &[&pa, &pbc], &[&pb, &pac], &chk));
                            }
                            if hc && hab && !(hb && hac) {
                                return fail(witness(AxiomId::A2c, (&p, &q), &labels, &[&pc, &pab], &[&pb, &pac], &chk));
                            }
                            if hc && hac && !hb {
                                printed.push(witness(AxiomId::A2cPrinted, (&p, &q), &labels, &[&pc, &pac], &[&pb, &pac], &chk));
                            }
                        }
                    }
                }
            }
        }
    }
    AxiomReport { failure: None, printed_2c_failures: printed }
}

/// `Ok` when `s` is an electrical positroid, otherwise the first failing
/// instance (empty-set axiom, subset axiom, then the exchange axioms).
pub fn check_axioms(s: &PairSet) -> Result<(), AxiomWitness> {
    match axiom_report(s).failure {
        Some(w) => Err(w),
        None => Ok(()),
    }
}

fn labels_of(x: &[Label]) -> BTreeSet<Label> {
    x.iter().copied().collect()
}

/// `(P+x;Q+y)` for an ordered representative, if it is a circular pair.
pub fn add_to(n: usize, p: &[Label], q: &[Label], x: Label, y: Label) -> Option<CircularPair> {
    if x == y || p.contains(&x) || q.contains(&x) || p.contains(&y) || q.contains(&y) {
        return None;
    }
    let mut rows = labels_of(p);
    let mut cols = labels_of(q);
    rows.insert(x);
    cols.insert(y);
    let (r, c) = arrange(&rows, &cols, n)?;
    // the new pair must extend the given ordering
    let keep_r: Vec<Label> = r.iter().copied().filter(|&z| z != x).collect();
    let keep_c: Vec<Label> = c.iter().copied().filter(|&z| z != y).collect();
    if keep_r != p || keep_c != q {
        return None;
    }
    Some(CircularPair::from_valid(n, r, c))
}

fn next_label(i: Label, n: usize) -> Label {
    crate::circ::wrap(i as i64 + 1, n)
}

/// The `(i,i+1)` boundary edge property.
pub fn has_bep(s: &PairSet, i: Label) -> bool {
    let n = s.n();
    let j = next_label(i, n);
    s.iter().all(|x| x.reps().iter().all(|r| add_to(n, r.p(), r.q(), i, j).map_or(true, |y| s.contains(&y))))
}

/// The `i` boundary spike property.
pub fn has_bsp(s: &PairSet, i: Label) -> bool {
    bsp_missing(s, i).is_empty()
}

fn bsp_missing(s: &PairSet, i: Label) -> BTreeSet<CircularPair> {
    let n = s.n();
    let mut out = BTreeSet::new();
    for x in s.iter() {
        for r in x.reps() {
            let (p, q) = (r.p(), r.q());
            for xl in 1..=n as Label {
                let Some(a) = add_to(n, p, q, xl, i) else { continue };
                if !s.contains(&a) {
                    continue;
                }
                for yl in 1..=n as Label {
                    let Some(b) = add_to(n, p, q, i, yl) else { continue };
                    if !s.contains(&b) {
                        continue;
                    }
                    if let Some(t) = add_to(n, p, q, xl, yl) {
                        if !s.contains(&t) {
                            out.insert(t);
                        }
                    }
                }
            }
        }
    }
    out
}

/// Adds `(P+1;Q+n)` for every member with `P ∪ Q ⊆ 2..n−1`, under either
/// representative. The result has the `(n,1)` boundary edge property.
pub fn bep_extension(s: &PairSet) -> PairSet {
    let n = s.n();
    let mut out = s.clone();
    for x in s.iter() {
        for r in x.reps() {
            if let Some(y) = add_to(n, r.p(), r.q(), 1, n as Label) {
                out.insert(y);
            }
        }
    }
    out
}

/// Adds every `(P+x;Q+y)` with `(P+x;Q+1)` and `(P+1;Q+y)` in `s`, where
/// `(P;Q)` ranges over all circular pairs avoiding `1`.
pub fn bsp_extension(s: &PairSet) -> PairSet {
    let n = s.n();
    let mut out = s.clone();
    for base in enumerate_pairs(n, None).iter() {
        for r in base.reps() {
            let (p, q) = (r.p(), r.q());
            if p.contains(&1) || q.contains(&1) {
                continue;
            }
            for xl in 2..=n as Label {
                let Some(a) = add_to(n, p, q, xl, 1) else { continue };
                if !s.contains(&a) {
                    continue;
                }
                for yl in 2..=n as Label {
                    let Some(b) = add_to(n, p, q, 1, yl) else { continue };
                    if !s.contains(&b) {
                        continue;
                    }
                    if let Some(t) = add_to(n, p, q, xl, yl) {
                        out.insert(t);
                    }
                }
            }
        }
    }
    out
}

/// Least set containing `(∅;∅)` with every boundary edge and spike property.
pub fn bep_bsp_closure(n: usize) -> PairSet {
    let mut s = PairSet::new(n);
    s.insert(CircularPair::empty(n));
    loop {
        let before = s.len();
        for i in 1..=n as Label {
            let j = next_label(i, n);
            let adds: Vec<CircularPair> = s
                .iter()
                .flat_map(|x| x.reps())
                .filter_map(|r| add_to(n, r.p(), r.q(), i, j))
                .collect();
            for y in adds {
                s.insert(y);
            }
            for y in bsp_missing(&s, i) {
                s.insert(y);
            }
        }
        if s.len() == before {
            return s;
        }
    }
}

/// Every electrical positroid on `n` vertices. Candidates are the sets closed
/// under the subset axiom, enumerated size by size.
pub fn enumerate_positroids(n: usize) -> Result<BTreeSet<PairSet>, PositroidError> {
    if n > 5 {
        return Err(PositroidError::Scale { n, limit: 5 });
    }
    let all: Vec<CircularPair> = enumerate_pairs(n, None).iter().filter(|p| !p.is_empty()).cloned().collect();
    let index: HashMap<CircularPair, usize> = all.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    // subpairs as bitmasks over `all`
    let subs: Vec<u64> = all
        .iter()
        .map(|x| {
            let mut m = 0u64;
            for i in 0..x.k() {
                let y = CircularPair::from_valid(n, rm(x.p(), &[x.p()[i]]), rm(x.q(), &[x.q()[i]]));
                if let Some(&j) = index.get(&y) {
                    m |= 1 << j;
                }
            }
            m
        })
        .collect();
    // pairs in increasing size, so a downset is decided in one pass
    let mut order: Vec<usize> = (0..all.len()).collect();
    order.sort_by_key(|&i| all[i].k());
    let mut downsets: Vec<u64> = vec![0];
    for &i in &order {
        let mut more = Vec::new();
        for &d in &downsets {
            if d & subs[i] == subs[i] {
                more.push(d | 1 << i);
            }
        }
        downsets.extend(more);
    }
    let found: Vec<PairSet> = downsets
        .par_iter()
        .filter_map(|&mask| {
            let mut s = PairSet::new(n);
            s.insert(CircularPair::empty(n));
            for (i, p) in all.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    s.insert(p.clone());
                }
            }
            check_axioms(&s).is_ok().then_some(s)
        })
        .collect();
    Ok(found.into_iter().collect())
}

/// `π(G)` for every `G` obtained from [`well_connected`] by deleting some
/// edges and contracting others (never two boundary vertices together).
pub fn realizable_family(n: usize) -> Result<BTreeSet<PairSet>, PositroidError> {
    if n > 5 {
        return Err(PositroidError::Scale { n, limit: 5 });
    }
    let top = well_connected(n);
    let nv = top.num_vertices();
    let m = top.edges().len();
    let ends: Vec<(usize, usize)> = top.edges().iter().map(|e| (top.index(e.u), top.index(e.v))).collect();
    // choice per edge: 0 keep, 1 delete, 2 contract
    let mut graphs: HashSet<Vec<(usize, usize)>> = HashSet::new();
    let mut stack: Vec<(usize, Vec<usize>, Vec<u8>)> = vec![(0, (0..nv).collect(), Vec::new())];
    while let Some((e, parent, choice)) = stack.pop() {
        if e == m {
            let find = |mut x: usize| {
                while parent[x] != x {
                    x = parent[x];
                }
                x
            };
            let mut key: Vec<(usize, usize)> = (0..m)
                .filter(|&t| choice[t] == 0)
                .map(|t| {
                    let (a, b) = (find(ends[t].0), find(ends[t].1));
                    (a.min(b), a.max(b))
                })
                .filter(|(a, b)| a != b)
                .collect();
            key.sort_unstable();
            graphs.insert(key);
            continue;
        }
        for c in 0..3u8 {
            let mut par = parent.clone();
            if c == 2 {
                let find = |p: &Vec<usize>, mut x: usize| {
                    while p[x] != x {
                        x = p[x];
                    }
                    x
                };
                let (a, b) = (find(&par, ends[e].0), find(&par, ends[e].1));
                if a == b {
                    continue;
                }
                // roots of boundary classes are boundary vertices
                if a < n && b < n {
                    continue;
                }
                let (keep, gone) = if a < n { (a, b) } else if b < n { (b, a) } else { (a.min(b), a.max(b)) };
                par[gone] = keep;
            }
            let mut ch = choice.clone();
            ch.push(c);
            stack.push((e + 1, par, ch));
        }
    }
    let keys: Vec<Vec<(usize, usize)>> = graphs.into_iter().collect();
    let sets: Vec<PairSet> = keys
        .par_iter()
        .map(|key| {
            let mut g = Network::empty(n);
            let mut inner: HashMap<usize, Vertex> = HashMap::new();
            let mut vert = |g: &mut Network, x: usize| -> Vertex {
                if x < n {
                    Vertex::Boundary((x + 1) as Label)
                } else {
                    *inner.entry(x).or_insert_with(|| g.add_interior(&format!("v{x}")))
                }
            };
            for &(a, b) in key {
                let (u, v) = (vert(&mut g, a), vert(&mut g, b));
                g.add_edge(u, v, crate::linalg::rat_int(1));
            }
            connections(&g)
        })
        .collect();
    Ok(sets.into_iter().collect())
}

/// Whether `s` is `π(G)` for some deletion/contraction descendant of the
/// well-connected network.
pub fn is_positroid_realizable(s: &PairSet) -> Result<bool, PositroidError> {
    Ok(realizable_family(s.n())?.contains(s))
}

/// All pairs but `x`.
pub fn all_but(n: usize, x: &CircularPair) -> PairSet {
    let mut s = enumerate_pairs(n, None);
    s.remove(x);
    s
}
