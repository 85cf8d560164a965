//! Circular pairs on a boundary circle with vertices `1..=n` labelled clockwise.
//!
//! A circular pair `(P;Q)` is two disjoint ordered label lists of equal length
//! with `p1,..,pk,qk,..,q1` in clockwise order. The pair `(P;Q)` and its flip
//! `(Q~;P~)` (both lists reversed, roles swapped) index the same minor of a
//! symmetric matrix; [`CircularPair`] stores the lexicographically smaller of
//! the two. [`NonSymPair`] keeps the ordered pair as given, for non-symmetric
//! matrices where the two representatives differ.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// A boundary label in `1..=n`.
pub type Label = u8;

/// Largest supported boundary size. Vertex sets are packed into `u64` masks.
pub const MAX_N: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircError {
    #[error("boundary size {0} is unsupported (need 1..={MAX_N})")]
    BadSize(usize),
    #[error("label {label} is outside 1..={n}")]
    LabelOutOfRange { label: usize, n: usize },
    #[error("P has {p} labels but Q has {q}")]
    LengthMismatch { p: usize, q: usize },
    #[error("label {0} is used more than once")]
    Repeated(Label),
    #[error("labels {0} and {1} break the clockwise order of p1..pk,qk..q1 = {2:?}")]
    NotClockwise(Label, Label, Vec<Label>),
    #[error("{0} is not solid")]
    NotSolid(String),
    #[error("the empty pair has no arc statistics")]
    Empty,
    #[error("no solid pair on {n} vertices has triple (D={d}, T2={t2}, k={k})")]
    BadTriple { n: usize, d: i64, t2: i64, k: usize },
    #[error("chords {0:?} and {1:?} cross or share an endpoint")]
    BadChords((Label, Label), (Label, Label)),
    #[error("chords {0:?} are not the edges of a single circular pair")]
    NotALadder(Vec<(Label, Label)>),
    #[error("pairs live on different boundary sizes ({0} and {1})")]
    SizeMismatch(usize, usize),
}

pub(crate) fn check_n(n: usize) -> Result<(), CircError> {
    if n == 0 || n > MAX_N {
        Err(CircError::BadSize(n))
    } else {
        Ok(())
    }
}

/// Reduce an arbitrary integer to its representative in `1..=n`.
pub fn wrap(x: i64, n: usize) -> Label {
    let n = n as i64;
    let r = ((x - 1).rem_euclid(n)) + 1;
    r as Label
}

/// Number of boundary vertices met walking clockwise from `a` to `b`, both
/// endpoints included. `d(a,a) = 1` and `d(a,b) + d(b,a) = n + 2` for `a != b`.
pub fn arc_distance(a: Label, b: Label, n: usize) -> usize {
    debug_assert!(a as usize >= 1 && a as usize <= n && b as usize >= 1 && b as usize <= n);
    ((b as i64 - a as i64).rem_euclid(n as i64)) as usize + 1
}

/// Checks that `seq` lists distinct labels in clockwise cyclic order.
/// Returns the first offending consecutive pair otherwise.
fn clockwise_violation(seq: &[Label]) -> Option<(Label, Label)> {
    let len = seq.len();
    if len < 3 {
        return None;
    }
    let mut seen_descent = false;
    for i in 0..len {
        let (a, b) = (seq[i], seq[(i + 1) % len]);
        if a > b {
            if seen_descent {
                return Some((a, b));
            }
            seen_descent = true;
        }
    }
    None
}

fn validate(p: &[Label], q: &[Label], n: usize) -> Result<(), CircError> {
    check_n(n)?;
    if p.len() != q.len() {
        return Err(CircError::LengthMismatch { p: p.len(), q: q.len() });
    }
    validate_ladder(p, q, n)
}

/// Validates `p1..pr, qs..q1` clockwise with distinct in-range labels; the two
/// sides may differ in length.
fn validate_ladder(p: &[Label], q: &[Label], n: usize) -> Result<(), CircError> {
    let mut seen = 0u64;
    for &x in p.iter().chain(q) {
        if x == 0 || x as usize > n {
            return Err(CircError::LabelOutOfRange { label: x as usize, n });
        }
        let bit = 1u64 << (x - 1);
        if seen & bit != 0 {
            return Err(CircError::Repeated(x));
        }
        seen |= bit;
    }
    let seq: Vec<Label> = p.iter().copied().chain(q.iter().rev().copied()).collect();
    match clockwise_violation(&seq) {
        Some((a, b)) => Err(CircError::NotClockwise(a, b, seq)),
        None => Ok(()),
    }
}

/// True when `p1..pr, qs..q1` are distinct and clockwise.
pub fn is_ladder(p: &[Label], q: &[Label], n: usize) -> bool {
    validate_ladder(p, q, n).is_ok()
}

/// Orders a row set and a column set as `r1..rm, cl..c1` clockwise, if the
/// rows form one contiguous block of `rows ∪ cols` in cyclic order.
/// Returns `(rows, cols)` as ordered lists. The arrangement is unique when
/// both sets are nonempty.
pub fn arrange(rows: &BTreeSet<Label>, cols: &BTreeSet<Label>, _n: usize) -> Option<(Vec<Label>, Vec<Label>)> {
    if !rows.is_disjoint(cols) {
        return None;
    }
    if cols.is_empty() {
        // any rotation works; start from the smallest label
        return Some((rows.iter().copied().collect(), Vec::new()));
    }
    if rows.is_empty() {
        let mut c: Vec<Label> = cols.iter().copied().collect();
        c.reverse();
        return Some((Vec::new(), c));
    }
    let all: Vec<(Label, bool)> = {
        let mut v: Vec<(Label, bool)> = rows.iter().map(|&x| (x, true)).chain(cols.iter().map(|&x| (x, false))).collect();
        v.sort_unstable();
        v
    };
    let len = all.len();
    // the block of rows starts right after a column
    let start = (0..len).find(|&i| all[i].1 && !all[(i + len - 1) % len].1)?;
    let m = rows.len();
    let mut r = Vec::with_capacity(m);
    for j in 0..m {
        let (x, is_row) = all[(start + j) % len];
        if !is_row {
            return None;
        }
        r.push(x);
    }
    let mut c = Vec::with_capacity(len - m);
    for j in m..len {
        let (x, is_row) = all[(start + j) % len];
        if is_row {
            return None;
        }
        c.push(x);
    }
    c.reverse();
    Some((r, c))
}

/// An ordered circular pair with no flip identification, used for minors of
/// non-symmetric matrices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NonSymPair {
    n: Label,
    p: Vec<Label>,
    q: Vec<Label>,
}

/// A circular pair in canonical form: the lexicographically smaller of
/// `(P;Q)` and `(Q~;P~)` compared as the flattened sequence `P` then `Q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CircularPair {
    n: Label,
    p: Vec<Label>,
    q: Vec<Label>,
}

/// `(D, T2, k)` coordinates of a non-symmetric solid pair. `T2 = 2T` is kept
/// as an integer modulo `2n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub d: i64,
    pub t2: i64,
    pub k: usize,
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.t2 % 2 == 0 {
            write!(f, "({}, {}, {})", self.d, self.t2 / 2, self.k)
        } else {
            write!(f, "({}, {}.5, {})", self.d, self.t2 / 2, self.k)
        }
    }
}

/// Combinatorial flags of a circular pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize)]
pub struct PairClass {
    pub solid: bool,
    pub picked: bool,
    pub diametric: bool,
    pub maximal: bool,
    /// The seam pairs that have no (P1) exchange inside the diametric set
    /// (see [`CircularPair::classify`]).
    pub limiting: bool,
    /// The textual criterion: `|d1-d2| = 2`, picked, and `1` is `p1` or `qk`.
    pub limiting_as_printed: bool,
}

/// Components of the potential `Φ` that drives the non-solid rewrite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct Phi {
    pub d3p: usize,
    pub d4p: usize,
    pub d3q: usize,
    pub d4q: usize,
}

impl Phi {
    pub fn total(&self) -> usize {
        self.d3p + self.d4p + self.d3q + self.d4q
    }
}

fn fmt_pair(f: &mut fmt::Formatter<'_>, p: &[Label], q: &[Label], prime: bool) -> fmt::Result {
    let join = |s: &[Label]| s.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
    write!(f, "({};{})", join(p), join(q))?;
    if prime {
        write!(f, "'")?;
    }
    Ok(())
}

impl fmt::Display for NonSymPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_pair(f, &self.p, &self.q, true)
    }
}

impl fmt::Display for CircularPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_pair(f, &self.p, &self.q, false)
    }
}

fn consecutive_cw(s: &[Label], n: usize) -> bool {
    s.windows(2).all(|w| wrap(w[0] as i64 + 1, n) == w[1])
}

// shared statistics on an ordered representative
fn solid_raw(p: &[Label], q: &[Label], n: usize) -> bool {
    // P clockwise consecutive, and qk..q1 clockwise consecutive
    let qrev: Vec<Label> = q.iter().rev().copied().collect();
    consecutive_cw(p, n) && consecutive_cw(&qrev, n)
}

fn d12_raw(p: &[Label], q: &[Label], n: usize) -> (usize, usize) {
    let k = p.len();
    (arc_distance(p[k - 1], q[k - 1], n), arc_distance(q[0], p[0], n))
}

fn picked_raw(p: &[Label], q: &[Label], n: usize) -> bool {
    let (d1, d2) = d12_raw(p, q, n);
    let k = p.len();
    let half = n as f64 / 2.0;
    (d1 <= d2 && (p[0] as f64) <= half) || (d1 >= d2 && (q[k - 1] as f64) <= half)
}

impl NonSymPair {
    pub fn new(n: usize, p: Vec<Label>, q: Vec<Label>) -> Result<Self, CircError> {
        validate(&p, &q, n)?;
        Ok(NonSymPair { n: n as Label, p, q })
    }

    pub fn empty(n: usize) -> Self {
        NonSymPair { n: n as Label, p: Vec::new(), q: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }
    pub fn p(&self) -> &[Label] {
        &self.p
    }
    pub fn q(&self) -> &[Label] {
        &self.q
    }
    pub fn k(&self) -> usize {
        self.p.len()
    }
    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    pub fn is_solid(&self) -> bool {
        solid_raw(&self.p, &self.q, self.n())
    }

    /// `(d1, d2) = (d(pk,qk), d(q1,p1))`.
    pub fn solid_stats(&self) -> Result<(usize, usize), CircError> {
        if self.is_empty() {
            return Err(CircError::Empty);
        }
        if !self.is_solid() {
            return Err(CircError::NotSolid(self.to_string()));
        }
        Ok(d12_raw(&self.p, &self.q, self.n()))
    }

    /// The correspondence `c`: swap the roles of rows and columns. As an
    /// ordered circular pair this is `(Q~;P~)'`.
    pub fn correspond(&self) -> NonSymPair {
        let mut p = self.q.clone();
        let mut q = self.p.clone();
        p.reverse();
        q.reverse();
        NonSymPair { n: self.n, p, q }
    }

    pub fn canonical(&self) -> CircularPair {
        CircularPair::from_valid(self.n(), self.p.clone(), self.q.clone())
    }

    pub fn triple(&self) -> Result<Triple, CircError> {
        let (d1, d2) = self.solid_stats()?;
        let n = self.n() as i64;
        let (p1, q1) = (self.p[0] as i64, self.q[0] as i64);
        let t2 = if p1 < q1 { p1 + q1 } else { p1 + q1 + n };
        Ok(Triple { d: d1 as i64 - d2 as i64, t2: t2.rem_euclid(2 * n), k: self.k() })
    }

    /// Inverse of [`NonSymPair::triple`].
    pub fn from_triple(n: usize, t: Triple) -> Result<NonSymPair, CircError> {
        check_n(n)?;
        let bad = || CircError::BadTriple { n, d: t.d, t2: t.t2, k: t.k };
        let ni = n as i64;
        let k = t.k as i64;
        if t.k == 0 || t.d.abs() + 2 * k > ni || (t.d + ni).rem_euclid(2) != 0 {
            return Err(bad());
        }
        let d1 = (t.d + ni - 2 * k + 4) / 2;
        let s = 2 * k + d1 - 3;
        let diff = (t.t2 - s).rem_euclid(2 * ni);
        if diff % 2 != 0 {
            return Err(bad());
        }
        let p1 = diff / 2;
        let p: Vec<Label> = (0..k).map(|i| wrap(p1 + i, n)).collect();
        let qk = p1 + k - 1 + d1 - 1;
        let q: Vec<Label> = (0..k).map(|i| wrap(qk + (k - 1 - i), n)).collect();
        let pair = NonSymPair::new(n, p, q).map_err(|_| bad())?;
        debug_assert_eq!(pair.triple().ok(), Some(Triple { t2: t.t2.rem_euclid(2 * ni), ..t }));
        Ok(pair)
    }
}

impl CircularPair {
    /// Validates and canonicalizes `(P;Q)`.
    pub fn new(n: usize, p: Vec<Label>, q: Vec<Label>) -> Result<Self, CircError> {
        validate(&p, &q, n)?;
        Ok(Self::from_valid(n, p, q))
    }

    pub(crate) fn from_valid(n: usize, p: Vec<Label>, q: Vec<Label>) -> Self {
        let mut fp = q.clone();
        let mut fq = p.clone();
        fp.reverse();
        fq.reverse();
        if (&fp, &fq) < (&p, &q) {
            CircularPair { n: n as Label, p: fp, q: fq }
        } else {
            CircularPair { n: n as Label, p, q }
        }
    }

    pub fn empty(n: usize) -> Self {
        CircularPair { n: n as Label, p: Vec::new(), q: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }
    pub fn p(&self) -> &[Label] {
        &self.p
    }
    pub fn q(&self) -> &[Label] {
        &self.q
    }
    pub fn k(&self) -> usize {
        self.p.len()
    }
    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    /// The stored representative as an ordered pair.
    pub fn rep(&self) -> NonSymPair {
        NonSymPair { n: self.n, p: self.p.clone(), q: self.q.clone() }
    }

    /// Both ordered representatives; one for the empty pair.
    pub fn reps(&self) -> Vec<NonSymPair> {
        let r = self.rep();
        if self.is_empty() {
            vec![r]
        } else {
            let f = r.correspond();
            vec![r, f]
        }
    }

    pub fn is_solid(&self) -> bool {
        solid_raw(&self.p, &self.q, self.n())
    }

    /// `(d1, d2)` of the canonical representative.
    pub fn solid_stats(&self) -> Result<(usize, usize), CircError> {
        self.rep().solid_stats()
    }

    /// Evaluates the solid/picked/diametric/maximal/limiting predicates.
    ///
    /// `limiting` marks the pairs that admit no (P1) exchange with all four
    /// right-hand terms diametric: for even `n` these are the solid pairs with
    /// `d1 = d2`, `n` equal to `p1` or `qk`, and `2k + 2 <= n`. On eight
    /// vertices they are `(4;8)`, `(4,5;1,8)` and `(8,1,2;6,5,4)`.
    pub fn classify(&self) -> PairClass {
        let n = self.n();
        let mut c = PairClass::default();
        if self.is_empty() {
            c.solid = true;
            return c;
        }
        if !self.is_solid() {
            return c;
        }
        c.solid = true;
        let k = self.k();
        let (d1, d2) = d12_raw(&self.p, &self.q, n);
        let gap = d1.abs_diff(d2);
        let reps = self.reps();
        c.picked = reps.iter().any(|r| picked_raw(&r.p, &r.q, n));
        c.diametric = gap <= 1 || (gap == 2 && c.picked);
        c.maximal = 2 * k + 2 > n || (2 * k + 2 == n && d1 == d2);
        let nl = n as Label;
        c.limiting = n % 2 == 0 && d1 == d2 && 2 * k + 2 <= n && (self.p[0] == nl || self.q[k - 1] == nl);
        c.limiting_as_printed = gap == 2
            && c.picked
            && reps.iter().any(|r| r.p[0] == 1 || r.q[k - 1] == 1);
        c
    }

    pub fn triple(&self) -> Result<Triple, CircError> {
        self.rep().triple()
    }

    /// The chords `{p_i, q_i}`, each stored with the smaller label first.
    pub fn edges(&self) -> BTreeSet<(Label, Label)> {
        self.p.iter().zip(&self.q).map(|(&a, &b)| (a.min(b), a.max(b))).collect()
    }

    /// Potential `Φ = d3(P) + d4(P) + d3(Q) + d4(Q)`, zero exactly on solid pairs.
    ///
    /// For `Q` the construction mirrors the one for `P` read counterclockwise:
    /// `c_Q` is the smallest index with `qk,..,q_{c_Q}` consecutive clockwise,
    /// and `d3(Q) = d(q_{c_Q}, q_{c_Q - 1})`, `d4(Q) = d(qk, q1)`.
    pub fn phi(&self) -> Result<Phi, CircError> {
        if self.is_empty() {
            return Err(CircError::Empty);
        }
        Ok(phi_raw(&self.p, &self.q, self.n()))
    }
}

pub(crate) fn phi_raw(p: &[Label], q: &[Label], n: usize) -> Phi {
    let k = p.len();
    let mut cp = 1;
    while cp < k && wrap(p[cp - 1] as i64 + 1, n) == p[cp] {
        cp += 1;
    }
    let (d3p, d4p) = if cp < k { (arc_distance(p[cp - 1], p[cp], n), arc_distance(p[0], p[k - 1], n)) } else { (0, 0) };
    // c_Q, 1-based: smallest index with q_k .. q_{c_Q} consecutive clockwise
    let mut cq = k;
    while cq > 1 && wrap(q[cq - 1] as i64 + 1, n) == q[cq - 2] {
        cq -= 1;
    }
    let (d3q, d4q) =
        if cq > 1 { (arc_distance(q[cq - 1], q[cq - 2], n), arc_distance(q[k - 1], q[0], n)) } else { (0, 0) };
    Phi { d3p, d4p, d3q, d4q }
}

/// Canonical representative of `(P;Q)`.
pub fn canonicalize(p: &[Label], q: &[Label], n: usize) -> Result<CircularPair, CircError> {
    CircularPair::new(n, p.to_vec(), q.to_vec())
}

/// The circular pair whose chords are exactly `edges`.
pub fn pair_of_edges(edges: &BTreeSet<(Label, Label)>, n: usize) -> Result<CircularPair, CircError> {
    check_n(n)?;
    let chords: Vec<(Label, Label)> = edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
    for &(a, b) in &chords {
        for &x in &[a, b] {
            if x == 0 || x as usize > n {
                return Err(CircError::LabelOutOfRange { label: x as usize, n });
            }
        }
        if a == b {
            return Err(CircError::Repeated(a));
        }
    }
    for (i, &(a, b)) in chords.iter().enumerate() {
        for &(c, d) in &chords[i + 1..] {
            let shared = a == c || a == d || b == c || b == d;
            let cross = (a < c && c < b && b < d) || (c < a && a < d && d < b);
            if shared || cross {
                return Err(CircError::BadChords((a, b), (c, d)));
            }
        }
    }
    let k = chords.len();
    if k == 0 {
        return Ok(CircularPair::empty(n));
    }
    let mut ends: Vec<Label> = chords.iter().flat_map(|&(a, b)| [a, b]).collect();
    ends.sort_unstable();
    let m = ends.len();
    for s in 0..m {
        let p: Vec<Label> = (0..k).map(|j| ends[(s + j) % m]).collect();
        let q: Vec<Label> = (0..k).map(|j| ends[(s + m - 1 - j) % m]).collect();
        let cand: BTreeSet<(Label, Label)> = p.iter().zip(&q).map(|(&a, &b)| (a.min(b), a.max(b))).collect();
        if cand == *edges && is_ladder(&p, &q, n) {
            return Ok(CircularPair::from_valid(n, p, q));
        }
    }
    Err(CircError::NotALadder(chords))
}

/// `A` and `B` are weakly separated when no `a,a'` in `A\B` and `b,b'` in `B\A`
/// interleave as `a<b<a'<b'` or `b<a<b'<a'`.
pub fn weakly_separated_sets(a: &BTreeSet<Label>, b: &BTreeSet<Label>) -> bool {
    let mut tagged: Vec<(Label, bool)> =
        a.difference(b).map(|&x| (x, true)).chain(b.difference(a).map(|&x| (x, false))).collect();
    tagged.sort_unstable();
    let mut runs = 0;
    let mut last = None;
    for (_, t) in tagged {
        if last != Some(t) {
            runs += 1;
            last = Some(t);
        }
    }
    runs <= 3
}

/// `(P;Q)` and `(R;S)` are weakly separated when `P∪R` is weakly separated
/// from `Q∪S` and `P∪S` from `Q∪R`.
pub fn weakly_separated_pairs(x: &CircularPair, y: &CircularPair) -> bool {
    let set = |a: &[Label], b: &[Label]| a.iter().chain(b).copied().collect::<BTreeSet<Label>>();
    weakly_separated_sets(&set(&x.p, &y.p), &set(&x.q, &y.q))
        && weakly_separated_sets(&set(&x.p, &y.q), &set(&x.q, &y.p))
}

/// All `k`-subsets of `items`, in lexicographic order.
pub(crate) fn combinations<T: Copy>(items: &[T], k: usize) -> Vec<Vec<T>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > items.len() {
        return out;
    }
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + items.len() - k {
                break;
            }
            if i == 0 && idx[0] == items.len() - k {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// A set of canonical circular pairs on a common boundary.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairSet {
    n: usize,
    members: BTreeSet<CircularPair>,
}

impl PairSet {
    pub fn new(n: usize) -> Self {
        PairSet { n, members: BTreeSet::new() }
    }

    pub fn from_pairs<I: IntoIterator<Item = CircularPair>>(n: usize, pairs: I) -> Result<Self, CircError> {
        let mut s = PairSet::new(n);
        for p in pairs {
            if p.n() != n {
                return Err(CircError::SizeMismatch(n, p.n()));
            }
            s.members.insert(p);
        }
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn len(&self) -> usize {
        self.members.len()
    }
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
    pub fn contains(&self, p: &CircularPair) -> bool {
        self.members.contains(p)
    }
    pub fn insert(&mut self, p: CircularPair) -> bool {
        debug_assert_eq!(p.n(), self.n);
        self.members.insert(p)
    }
    pub fn remove(&mut self, p: &CircularPair) -> bool {
        self.members.remove(p)
    }
    pub fn iter(&self) -> impl Iterator<Item = &CircularPair> {
        self.members.iter()
    }
    pub fn members(&self) -> &BTreeSet<CircularPair> {
        &self.members
    }
    pub fn into_members(self) -> BTreeSet<CircularPair> {
        self.members
    }
}

impl<'a> IntoIterator for &'a PairSet {
    type Item = &'a CircularPair;
    type IntoIter = std::collections::btree_set::Iter<'a, CircularPair>;
    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

/// Every canonical circular pair of size at most `k_max` (default `n/2`),
/// the empty pair included.
pub fn enumerate_pairs(n: usize, k_max: Option<usize>) -> PairSet {
    let mut out = PairSet::new(n);
    out.insert(CircularPair::empty(n));
    let kmax = k_max.unwrap_or(n / 2).min(n / 2);
    let labels: Vec<Label> = (1..=n as Label).collect();
    for k in 1..=kmax {
        for chosen in combinations(&labels, 2 * k) {
            let m = chosen.len();
            for s in 0..m {
                let p: Vec<Label> = (0..k).map(|j| chosen[(s + j) % m]).collect();
                let q: Vec<Label> = (0..k).map(|j| chosen[(s + m - 1 - j) % m]).collect();
                out.insert(CircularPair::from_valid(n, p, q));
            }
        }
    }
    out
}

/// All nonempty solid pairs as ordered (non-symmetric) pairs.
pub fn solid_nonsym_pairs(n: usize) -> Vec<NonSymPair> {
    let mut out = Vec::new();
    for k in 1..=n / 2 {
        for p1 in 1..=n as i64 {
            // d1 + d2 = n - 2k + 4 with d1, d2 >= 2
            for d1 in 2..=(n as i64 - 2 * k as i64 + 2) {
                let p: Vec<Label> = (0..k as i64).map(|i| wrap(p1 + i, n)).collect();
                let qk = p1 + k as i64 - 1 + d1 - 1;
                let q: Vec<Label> = (0..k as i64).map(|i| wrap(qk + (k as i64 - 1 - i), n)).collect();
                if let Ok(x) = NonSymPair::new(n, p, q) {
                    out.push(x);
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// All nonempty canonical solid pairs.
pub fn solid_pairs(n: usize) -> BTreeSet<CircularPair> {
    solid_nonsym_pairs(n).iter().map(|x| x.canonical()).collect()
}

/// The diametric pairs: solid with `|d1-d2| <= 1`, or `|d1-d2| = 2` and picked.
pub fn generate_diametric(n: usize) -> PairSet {
    let mut out = PairSet::new(n);
    for p in solid_pairs(n) {
        if p.classify().diametric {
            out.insert(p);
        }
    }
    out
}

/// `n choose 2`.
pub fn binom2(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}
