//! Subtraction-free expressions of circular minors in the diametric minors.
//!
//! Solid pairs are reduced by the three-term (P1) relation on a ground block
//! one size larger, which moves `|d1 − d2|` towards zero. Other pairs are
//! reduced by the (P2) relation on a block with one extra row, which lowers
//! the potential `Φ`.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::circ::{generate_diametric, phi_raw, wrap, CircularPair, Label, NonSymPair};
use crate::linalg::{circular_minor, ExactMatrix, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("pair {0} lives on {1} vertices, the rewriter on {2}")]
    SizeMismatch(String, usize, usize),
    #[error("no reducing relation applies to {0}")]
    Stuck(String),
    #[error("rewriting {0} needs itself")]
    Cycle(String),
    #[error("division by zero while evaluating")]
    ZeroDivision,
    #[error("no value supplied for variable {0}")]
    MissingValue(String),
}

pub type ExprId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Node {
    One,
    Var(CircularPair),
    Add(ExprId, ExprId),
    Mul(ExprId, ExprId),
    Div(ExprId, ExprId),
}

/// Hash-consed expression DAG. There is no subtraction node, so every
/// expression built here is subtraction-free by construction.
#[derive(Debug, Clone, Default)]
pub struct ExprArena {
    nodes: Vec<Node>,
    index: HashMap<Node, ExprId>,
}

impl ExprArena {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn node(&self, id: ExprId) -> &Node {
        &self.nodes[id]
    }
    pub fn len(&self) -> usize {
        self.nodes.len()
    }
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn intern(&mut self, node: Node) -> ExprId {
        if let Some(&id) = self.index.get(&node) {
            return id;
        }
        let id = self.nodes.len();
        self.nodes.push(node.clone());
        self.index.insert(node, id);
        id
    }

    pub fn one(&mut self) -> ExprId {
        self.intern(Node::One)
    }
    pub fn var(&mut self, p: CircularPair) -> ExprId {
        if p.is_empty() {
            return self.one();
        }
        self.intern(Node::Var(p))
    }
    pub fn add(&mut self, a: ExprId, b: ExprId) -> ExprId {
        self.intern(Node::Add(a, b))
    }
    pub fn mul(&mut self, a: ExprId, b: ExprId) -> ExprId {
        match (&self.nodes[a], &self.nodes[b]) {
            (Node::One, _) => b,
            (_, Node::One) => a,
            _ => self.intern(Node::Mul(a, b)),
        }
    }
    pub fn div(&mut self, a: ExprId, b: ExprId) -> ExprId {
        if let Node::One = self.nodes[b] {
            return a;
        }
        self.intern(Node::Div(a, b))
    }

    /// Nodes reachable from `root`, children before parents.
    pub fn reachable(&self, root: ExprId) -> Vec<ExprId> {
        let mut seen = vec![false; self.nodes.len()];
        let mut order = Vec::new();
        let mut stack = vec![(root, false)];
        while let Some((id, done)) = stack.pop() {
            if done {
                order.push(id);
                continue;
            }
            if seen[id] {
                continue;
            }
            seen[id] = true;
            stack.push((id, true));
            match self.nodes[id] {
                Node::Add(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
                    stack.push((b, false));
                    stack.push((a, false));
                }
                _ => {}
            }
        }
        order
    }

    /// Variables the expression depends on.
    pub fn variables(&self, root: ExprId) -> BTreeSet<CircularPair> {
        self.reachable(root)
            .into_iter()
            .filter_map(|id| match &self.nodes[id] {
                Node::Var(p) => Some(p.clone()),
                _ => None,
            })
            .collect()
    }

    /// Operators used below `root`, as `"+"`, `"*"`, `"/"`.
    pub fn operators(&self, root: ExprId) -> BTreeSet<&'static str> {
        self.reachable(root)
            .into_iter()
            .filter_map(|id| match self.nodes[id] {
                Node::Add(..) => Some("+"),
                Node::Mul(..) => Some("*"),
                Node::Div(..) => Some("/"),
                _ => None,
            })
            .collect()
    }

    pub fn eval(&self, root: ExprId, value: &dyn Fn(&CircularPair) -> Option<Rational>) -> Result<Rational, RewriteError> {
        let mut memo: HashMap<ExprId, Rational> = HashMap::new();
        for id in self.reachable(root) {
            let v = match &self.nodes[id] {
                Node::One => Rational::one(),
                Node::Var(p) => value(p).ok_or_else(|| RewriteError::MissingValue(p.to_string()))?,
                Node::Add(a, b) => &memo[a] + &memo[b],
                Node::Mul(a, b) => &memo[a] * &memo[b],
                Node::Div(a, b) => {
                    if memo[b].is_zero() {
                        return Err(RewriteError::ZeroDivision);
                    }
                    &memo[a] / &memo[b]
                }
            };
            memo.insert(id, v);
        }
        Ok(memo.remove(&root).expect("root evaluated"))
    }

    /// Evaluates several roots, sharing common subexpressions.
    pub fn eval_many(&self, roots: &[ExprId], value: &dyn Fn(&CircularPair) -> Option<Rational>) -> Result<Vec<Rational>, RewriteError> {
        let mut memo: Vec<Option<Rational>> = vec![None; self.nodes.len()];
        for &root in roots {
            for id in self.reachable(root) {
                if memo[id].is_some() {
                    continue;
                }
                let get = |i: ExprId| memo[i].as_ref().expect("children first");
                let v = match &self.nodes[id] {
                    Node::One => Rational::one(),
                    Node::Var(p) => value(p).ok_or_else(|| RewriteError::MissingValue(p.to_string()))?,
                    Node::Add(a, b) => get(*a) + get(*b),
                    Node::Mul(a, b) => get(*a) * get(*b),
                    Node::Div(a, b) => {
                        if get(*b).is_zero() {
                            return Err(RewriteError::ZeroDivision);
                        }
                        get(*a) / get(*b)
                    }
                };
                memo[id] = Some(v);
            }
        }
        Ok(roots.iter().map(|&r| memo[r].clone().expect("root evaluated")).collect())
    }

    /// Evaluate with the signed circular minors of `m`.
    pub fn eval_minors(&self, root: ExprId, m: &ExactMatrix) -> Result<Rational, RewriteError> {
        self.eval(root, &|p| circular_minor(m, p).ok())
    }

    /// JSON node list: `{"root": r, "nodes": [{"op": ..., "args": [..]} | {"var": "(P;Q)"}]}`.
    pub fn to_json(&self, root: ExprId) -> serde_json::Value {
        let order = self.reachable(root);
        let local: HashMap<ExprId, usize> = order.iter().enumerate().map(|(i, &id)| (id, i)).collect();
        let nodes: Vec<serde_json::Value> = order
            .iter()
            .map(|&id| match &self.nodes[id] {
                Node::One => serde_json::json!({ "op": "one" }),
                Node::Var(p) => serde_json::json!({ "var": p.to_string(), "P": p.p(), "Q": p.q() }),
                Node::Add(a, b) => serde_json::json!({ "op": "+", "args": [local[a], local[b]] }),
                Node::Mul(a, b) => serde_json::json!({ "op": "*", "args": [local[a], local[b]] }),
                Node::Div(a, b) => serde_json::json!({ "op": "/", "args": [local[a], local[b]] }),
            })
            .collect();
        serde_json::json!({ "root": local[&root], "nodes": nodes })
    }

    /// Infix rendering with shared subterms expanded; meant for small trees.
    pub fn render(&self, root: ExprId) -> String {
        let mut s = String::new();
        self.render_into(root, &mut s);
        s
    }

    fn render_into(&self, id: ExprId, s: &mut String) {
        match &self.nodes[id] {
            Node::One => s.push('1'),
            Node::Var(p) => {
                let _ = write!(s, "{p}");
            }
            Node::Add(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
                let op = match self.nodes[id] {
                    Node::Add(..) => " + ",
                    Node::Mul(..) => "*",
                    _ => " / ",
                };
                s.push('[');
                self.render_into(*a, s);
                s.push_str(op);
                self.render_into(*b, s);
                s.push(']');
            }
        }
    }
}

/// The relation used to rewrite one pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub target: CircularPair,
    /// `target = (n1*n2 + n3*n4) / den`.
    pub num: [(CircularPair, CircularPair); 2],
    pub den: CircularPair,
}

fn pair_from(n: usize, p: Vec<Label>, q: Vec<Label>) -> CircularPair {
    CircularPair::from_valid(n, p, q)
}

fn rm(list: &[Label], drop: &[Label]) -> Vec<Label> {
    list.iter().copied().filter(|x| !drop.contains(x)).collect()
}

/// The reducing relation for a pair outside the diametric set.
pub fn reduction_step(x: &CircularPair) -> Result<Step, RewriteError> {
    let cls = x.classify();
    if cls.solid {
        solid_step(x).ok_or_else(|| RewriteError::Stuck(x.to_string()))
    } else {
        for r in x.reps() {
            if let Some(s) = spread_step(&r) {
                return Ok(s);
            }
        }
        Err(RewriteError::Stuck(x.to_string()))
    }
}

// (P1) on the block grown by one row and column; `target` = Δ^{a,c}.
fn p1_step(n: usize, rows: &[Label], cols: &[Label], a: Label, b: Label, c: Label, d: Label, target: &CircularPair) -> Step {
    let t = |dr: &[Label], dc: &[Label]| pair_from(n, rm(rows, dr), rm(cols, dc));
    Step {
        target: target.clone(),
        num: [(t(&[a], &[d]), t(&[b], &[c])), (t(&[a, b], &[c, d]), t(&[], &[]))],
        den: t(&[b], &[d]),
    }
}

fn solid_step(x: &CircularPair) -> Option<Step> {
    let n = x.n();
    let (d1, d2) = x.solid_stats().ok()?;
    let (p, q) = (x.p(), x.q());
    let k = p.len();
    let prepend = || -> Option<(Vec<Label>, Vec<Label>)> {
        let p0 = wrap(p[0] as i64 - 1, n);
        let q0 = wrap(q[0] as i64 + 1, n);
        let mut rows = vec![p0];
        rows.extend_from_slice(p);
        let mut cols = vec![q0];
        cols.extend_from_slice(q);
        NonSymPair::new(n, rows.clone(), cols.clone()).ok().map(|_| (rows, cols))
    };
    let append = || -> Option<(Vec<Label>, Vec<Label>)> {
        let mut rows = p.to_vec();
        rows.push(wrap(p[k - 1] as i64 + 1, n));
        let mut cols = q.to_vec();
        cols.push(wrap(q[k - 1] as i64 - 1, n));
        NonSymPair::new(n, rows.clone(), cols.clone()).ok().map(|_| (rows, cols))
    };
    if d1 < d2 {
        // X = Δ^{p0,q0} on (p0,P; q0,Q)
        let (rows, cols) = prepend()?;
        Some(p1_step(n, &rows, &cols, rows[0], rows[k], cols[0], cols[k], x))
    } else if d1 > d2 {
        // X = Δ^{p_{k+1},q_{k+1}} on (P,p_{k+1}; Q,q_{k+1}); (P1) with the
        // roles of the first and last rows swapped
        let (rows, cols) = append()?;
        let (a, b, c, d) = (rows[0], rows[k], cols[0], cols[k]);
        let t = |dr: &[Label], dc: &[Label]| pair_from(n, rm(&rows, dr), rm(&cols, dc));
        Some(Step {
            target: x.clone(),
            num: [(t(&[a], &[d]), t(&[b], &[c])), (t(&[a, b], &[c, d]), t(&[], &[]))],
            den: t(&[a], &[c]),
        })
    } else {
        None
    }
}

// (P2) on (P + ℓ; Q) where ℓ fills the first gap of P; `target` = Δ^{ℓ,∅}.
fn spread_step(r: &NonSymPair) -> Option<Step> {
    let n = r.n();
    let (p, q) = (r.p(), r.q());
    let k = p.len();
    let mut cp = 1;
    while cp < k && wrap(p[cp - 1] as i64 + 1, n) == p[cp] {
        cp += 1;
    }
    if cp == k {
        return None;
    }
    let ell = wrap(p[cp - 1] as i64 + 1, n);
    let mut rows = p[..cp].to_vec();
    rows.push(ell);
    rows.extend_from_slice(&p[cp..]);
    let (a, c, d) = (p[0], p[k - 1], q[k - 1]);
    let t = |dr: &[Label], dc: &[Label]| pair_from(n, rm(&rows, dr), rm(q, dc));
    Some(Step {
        target: r.canonical(),
        num: [(t(&[a], &[]), t(&[ell, c], &[d])), (t(&[c], &[]), t(&[a, ell], &[d]))],
        den: t(&[a, c], &[d]),
    })
}

/// Builds and caches expressions of circular minors over the diametric set.
#[derive(Debug, Clone)]
pub struct Rewriter {
    n: usize,
    base: BTreeSet<CircularPair>,
    arena: ExprArena,
    memo: HashMap<CircularPair, ExprId>,
}

impl Rewriter {
    pub fn new(n: usize) -> Self {
        let base = generate_diametric(n).into_members();
        Rewriter { n, base, arena: ExprArena::new(), memo: HashMap::new() }
    }

    /// Rewriter over an arbitrary base set; used by tests and by the cluster
    /// certificates.
    pub fn with_base(n: usize, base: BTreeSet<CircularPair>) -> Self {
        Rewriter { n, base, arena: ExprArena::new(), memo: HashMap::new() }
    }

    pub fn arena(&self) -> &ExprArena {
        &self.arena
    }

    pub fn express(&mut self, x: &CircularPair) -> Result<ExprId, RewriteError> {
        if x.n() != self.n {
            return Err(RewriteError::SizeMismatch(x.to_string(), x.n(), self.n));
        }
        let mut active = BTreeSet::new();
        self.go(x, &mut active)
    }

    fn go(&mut self, x: &CircularPair, active: &mut BTreeSet<CircularPair>) -> Result<ExprId, RewriteError> {
        if let Some(&id) = self.memo.get(x) {
            return Ok(id);
        }
        if x.is_empty() || self.base.contains(x) {
            let id = self.arena.var(x.clone());
            self.memo.insert(x.clone(), id);
            return Ok(id);
        }
        if !active.insert(x.clone()) {
            return Err(RewriteError::Cycle(x.to_string()));
        }
        let step = reduction_step(x)?;
        let mut e = |s: &mut Self, y: &CircularPair| s.go(y, active);
        let a1 = e(self, &step.num[0].0)?;
        let a2 = e(self, &step.num[0].1)?;
        let b1 = e(self, &step.num[1].0)?;
        let b2 = e(self, &step.num[1].1)?;
        let dd = e(self, &step.den)?;
        let t1 = self.arena.mul(a1, a2);
        let t2 = self.arena.mul(b1, b2);
        let s = self.arena.add(t1, t2);
        let id = self.arena.div(s, dd);
        active.remove(x);
        self.memo.insert(x.clone(), id);
        Ok(id)
    }
}

/// Expression of `x` over the diametric minors, with its arena.
pub fn minor_rewrite(x: &CircularPair) -> Result<(ExprArena, ExprId), RewriteError> {
    let mut r = Rewriter::new(x.n());
    let id = r.express(x)?;
    Ok((r.arena, id))
}

/// Termination measure: `(non-solid, Φ, |d1 − d2|)`.
pub fn measure(x: &CircularPair) -> (bool, usize, usize) {
    if x.is_empty() {
        return (false, 0, 0);
    }
    let phi = phi_raw(x.p(), x.q(), x.n()).total();
    let gap = x.solid_stats().map(|(a, b)| a.abs_diff(b)).unwrap_or(0);
    (phi > 0, phi, gap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circ::enumerate_pairs;
    use crate::network::{response_matrix, well_connected};
    use crate::sample::{random_symmetric_zero_rowsum, rng_from_seed};

    #[test]
    fn every_step_is_an_identity() {
        let mut rng = rng_from_seed(17);
        for n in 4..=7 {
            let m = random_symmetric_zero_rowsum(n, &mut rng);
            let base = generate_diametric(n);
            for x in enumerate_pairs(n, None).iter() {
                if x.is_empty() || base.contains(x) {
                    continue;
                }
                let s = reduction_step(x).unwrap();
                let v = |p: &CircularPair| circular_minor(&m, p).unwrap();
                let lhs = v(&s.target) * v(&s.den);
                let rhs = v(&s.num[0].0) * v(&s.num[0].1) + v(&s.num[1].0) * v(&s.num[1].1);
                assert_eq!(lhs, rhs, "n={n} {x}");
            }
        }
    }

    #[test]
    fn rewrites_agree_with_direct_minors() {
        let mut rng = rng_from_seed(23);
        for n in 3..=8 {
            let mut r = Rewriter::new(n);
            let base = generate_diametric(n);
            let nets: Vec<_> = (0..3)
                .map(|_| response_matrix(&well_connected(n).with_random_conductances(&mut rng)).unwrap())
                .collect();
            for x in enumerate_pairs(n, None).iter() {
                let id = r.express(x).unwrap();
                assert!(r.arena().variables(id).iter().all(|v| base.contains(v)));
                for m in &nets {
                    assert_eq!(r.arena().eval_minors(id, m.matrix()).unwrap(), m.minor(x), "n={n} {x}");
                }
            }
        }
    }

    #[test]
    fn example_render() {
        let x = CircularPair::new(5, vec![1], vec![2]).unwrap();
        let (arena, id) = minor_rewrite(&x).unwrap();
        assert!(arena.render(id).contains('/'));
        assert!(arena.operators(id).iter().all(|o| ["+", "*", "/"].contains(o)));
    }
}
