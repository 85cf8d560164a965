//! JSON encodings shared by the command line and the reports.
//!
//! Pairs are `{"n":5,"P":[1,2],"Q":[5,4]}` (`n` may be omitted inside a
//! container that carries it), matrices hold rationals as strings, networks
//! name boundary vertices by integers and interior vertices by strings.

use std::collections::BTreeSet;

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::circ::{CircError, CircularPair, Label, NonSymPair, PairSet};
use crate::linalg::{format_rational, parse_rational, ExactMatrix, LinalgError};
use crate::mutation::{LmCluster, LmMove, MoveKind, SeamVariable};
use crate::network::{Edge, Network, NetworkError, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IoError {
    #[error("invalid JSON: {0}")]
    Syntax(String),
    #[error("field {field:?}: {why}")]
    Field { field: String, why: String },
    #[error(transparent)]
    Circ(#[from] CircError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Network(#[from] NetworkError),
}

fn bad(field: &str, why: impl Into<String>) -> IoError {
    IoError::Field { field: field.to_string(), why: why.into() }
}

pub fn parse(text: &str) -> Result<Value, IoError> {
    serde_json::from_str(text).map_err(|e| IoError::Syntax(e.to_string()))
}

fn get<'a>(v: &'a Value, field: &str) -> Result<&'a Value, IoError> {
    v.get(field).ok_or_else(|| bad(field, "missing"))
}

fn get_n(v: &Value, fallback: Option<usize>) -> Result<usize, IoError> {
    match v.get("n") {
        Some(x) => x.as_u64().map(|n| n as usize).ok_or_else(|| bad("n", "expected a non-negative integer")),
        None => fallback.ok_or_else(|| bad("n", "missing")),
    }
}

fn labels(v: &Value, field: &str) -> Result<Vec<Label>, IoError> {
    get(v, field)?
        .as_array()
        .ok_or_else(|| bad(field, "expected an array of labels"))?
        .iter()
        .map(|x| x.as_u64().filter(|&l| l >= 1 && l <= Label::MAX as u64).map(|l| l as Label).ok_or_else(|| bad(field, format!("bad label {x}"))))
        .collect()
}

pub fn pair_to_json(x: &CircularPair) -> Value {
    json!({"n": x.n(), "P": x.p(), "Q": x.q()})
}

fn pair_body(x: &CircularPair) -> Value {
    json!({"P": x.p(), "Q": x.q()})
}

/// Reads a pair and canonicalizes it.
pub fn pair_from_json(v: &Value, n: Option<usize>) -> Result<CircularPair, IoError> {
    let n = get_n(v, n)?;
    Ok(CircularPair::new(n, labels(v, "P")?, labels(v, "Q")?)?)
}

pub fn nonsym_to_json(x: &NonSymPair) -> Value {
    json!({"n": x.n(), "P": x.p(), "Q": x.q()})
}

pub fn nonsym_from_json(v: &Value, n: Option<usize>) -> Result<NonSymPair, IoError> {
    let n = get_n(v, n)?;
    Ok(NonSymPair::new(n, labels(v, "P")?, labels(v, "Q")?)?)
}

/// Pair given on the command line: JSON, or the short form `"(1,2;5,4)"`.
pub fn pair_from_arg(s: &str, n: Option<usize>) -> Result<CircularPair, IoError> {
    let t = s.trim();
    if t.starts_with('{') {
        return pair_from_json(&parse(t)?, n);
    }
    let inner = t.strip_prefix('(').and_then(|x| x.strip_suffix(')')).ok_or_else(|| bad("pair", format!("cannot read {s:?}")))?;
    let (p, q) = inner.split_once(';').ok_or_else(|| bad("pair", format!("no ';' in {s:?}")))?;
    let list = |x: &str| -> Result<Vec<Label>, IoError> {
        x.split(',')
            .map(str::trim)
            .filter(|y| !y.is_empty() && *y != "∅")
            .map(|y| y.parse::<Label>().map_err(|_| bad("pair", format!("bad label {y:?}"))))
            .collect()
    };
    let n = n.ok_or_else(|| bad("n", "the short pair form needs --n"))?;
    Ok(CircularPair::new(n, list(p)?, list(q)?)?)
}

pub fn pairs_to_json<'a>(n: usize, pairs: impl IntoIterator<Item = &'a CircularPair>) -> Value {
    json!({"n": n, "pairs": pairs.into_iter().map(pair_body).collect::<Vec<_>>()})
}

pub fn pairset_to_json(s: &PairSet) -> Value {
    pairs_to_json(s.n(), s.iter())
}

fn pair_list(v: &Value, field: &str, n: usize) -> Result<Vec<CircularPair>, IoError> {
    get(v, field)?
        .as_array()
        .ok_or_else(|| bad(field, "expected an array of pairs"))?
        .iter()
        .map(|p| pair_from_json(p, Some(n)))
        .collect()
}

pub fn pairset_from_json(v: &Value) -> Result<PairSet, IoError> {
    let n = get_n(v, None)?;
    Ok(PairSet::from_pairs(n, pair_list(v, "pairs", n)?)?)
}

pub fn matrix_to_json(m: &ExactMatrix) -> Value {
    json!({"n": m.rows(), "entries": m.to_strings()})
}

pub fn matrix_from_json(v: &Value) -> Result<ExactMatrix, IoError> {
    let rows = get(v, "entries")?.as_array().ok_or_else(|| bad("entries", "expected rows"))?;
    let mut out = Vec::new();
    for r in rows {
        let r = r.as_array().ok_or_else(|| bad("entries", "expected a row array"))?;
        let mut row = Vec::new();
        for x in r {
            let s = match x {
                Value::String(s) => s.clone(),
                Value::Number(k) => k.to_string(),
                _ => return Err(bad("entries", format!("bad entry {x}"))),
            };
            row.push(parse_rational(&s)?);
        }
        out.push(row);
    }
    let m = ExactMatrix::from_rows(out)?;
    if let Some(n) = v.get("n").and_then(Value::as_u64) {
        if n as usize != m.rows() || !m.is_square() {
            return Err(bad("n", format!("{n} does not match a {}×{} matrix", m.rows(), m.cols())));
        }
    }
    Ok(m)
}

pub fn network_to_json(g: &Network) -> Value {
    let vertex = |x: Vertex| match x {
        Vertex::Boundary(b) => json!(b),
        Vertex::Interior(_) => json!(g.vertex_name(x)),
    };
    let edges: Vec<Value> = g.edges().iter().map(|e| json!({"u": vertex(e.u), "v": vertex(e.v), "g": format_rational(&e.g)})).collect();
    json!({"n": g.n(), "interior": g.interior(), "edges": edges})
}

pub fn network_from_json(v: &Value) -> Result<Network, IoError> {
    let n = get_n(v, None)?;
    let interior: Vec<String> = match v.get("interior") {
        None => Vec::new(),
        Some(a) => a
            .as_array()
            .ok_or_else(|| bad("interior", "expected an array of names"))?
            .iter()
            .map(|x| x.as_str().map(str::to_string).ok_or_else(|| bad("interior", format!("bad name {x}"))))
            .collect::<Result<_, _>>()?,
    };
    let vertex = |x: &Value, field: &str| -> Result<Vertex, IoError> {
        match x {
            Value::Number(k) => {
                let b = k.as_u64().filter(|&b| b >= 1 && b as usize <= n).ok_or_else(|| bad(field, format!("boundary vertex {k} outside 1..{n}")))?;
                Ok(Vertex::Boundary(b as Label))
            }
            Value::String(s) => interior
                .iter()
                .position(|y| y == s)
                .map(Vertex::Interior)
                .ok_or_else(|| bad(field, format!("unknown interior vertex {s:?}"))),
            _ => Err(bad(field, format!("bad vertex {x}"))),
        }
    };
    let mut edges = Vec::new();
    for e in get(v, "edges")?.as_array().ok_or_else(|| bad("edges", "expected an array"))? {
        let g = match get(e, "g")? {
            Value::String(s) => parse_rational(s)?,
            Value::Number(k) => parse_rational(&k.to_string())?,
            x => return Err(bad("g", format!("bad conductance {x}"))),
        };
        edges.push(Edge { u: vertex(get(e, "u")?, "u")?, v: vertex(get(e, "v")?, "v")?, g });
    }
    Ok(Network::new(n, interior, edges)?)
}

pub fn cluster_to_json(c: &LmCluster) -> Value {
    let mut m = Map::new();
    m.insert("n".into(), json!(c.n));
    m.insert("pairs".into(), c.pairs.iter().map(pair_body).collect::<Vec<_>>().into());
    m.insert("frozen".into(), c.frozen.iter().map(pair_body).collect::<Vec<_>>().into());
    if !c.nonplucker.is_empty() {
        let np: Vec<Value> = c.nonplucker.iter().map(|s| json!({"replaces": pair_body(&s.replaces), "k": s.k})).collect();
        m.insert("nonplucker".into(), np.into());
    }
    Value::Object(m)
}

/// Reads a cluster; the frozen list defaults to the frozen diametric pairs.
pub fn cluster_from_json(v: &Value) -> Result<LmCluster, IoError> {
    let n = get_n(v, None)?;
    let pairs: BTreeSet<CircularPair> = pair_list(v, "pairs", n)?.into_iter().filter(|x| !x.is_empty()).collect();
    let mut c = LmCluster::from_pairs(n, pairs);
    if v.get("frozen").is_some() {
        c.frozen = pair_list(v, "frozen", n)?.into_iter().collect();
    }
    if let Some(np) = v.get("nonplucker") {
        for s in np.as_array().ok_or_else(|| bad("nonplucker", "expected an array"))? {
            let replaces = pair_from_json(get(s, "replaces")?, Some(n))?;
            let k = replaces.k();
            c.nonplucker.push(SeamVariable { replaces, k });
        }
    }
    Ok(c)
}

/// One replayable step: `{"move":"p1","site":{..},"entering":{..}}`.
pub fn move_to_json(m: &LmMove) -> Value {
    let mut o = Map::new();
    o.insert("move".into(), json!(m.kind.to_string()));
    o.insert("site".into(), pair_body(&m.leaving));
    o.insert("entering".into(), m.entering.as_ref().map_or(Value::Null, pair_body));
    if let Some(r) = &m.relation {
        o.insert("relation".into(), json!(r.to_string()));
    }
    Value::Object(o)
}

pub fn trace_to_json(moves: &[LmMove]) -> Value {
    Value::Array(moves.iter().map(move_to_json).collect())
}

/// A step read back from a trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub kind: MoveKind,
    pub site: CircularPair,
    pub entering: Option<CircularPair>,
}

pub fn trace_from_json(v: &Value, n: usize) -> Result<Vec<TraceStep>, IoError> {
    let arr = v.as_array().ok_or_else(|| bad("trace", "expected an array of steps"))?;
    arr.iter()
        .map(|s| {
            let kind: MoveKind = get(s, "move")?.as_str().ok_or_else(|| bad("move", "expected a string"))?.parse().map_err(|e: String| bad("move", e))?;
            let site = pair_from_json(get(s, "site")?, Some(n))?;
            let entering = match s.get("entering") {
                None | Some(Value::Null) => None,
                Some(p) => Some(pair_from_json(p, Some(n))?),
            };
            Ok(TraceStep { kind, site, entering })
        })
        .collect()
}

/// Ordered pairs of a seed file `{"n":5,"pairs":[..]}`.
pub fn nonsym_set_from_json(v: &Value) -> Result<(usize, BTreeSet<NonSymPair>), IoError> {
    let n = get_n(v, None)?;
    let list = get(v, "pairs")?.as_array().ok_or_else(|| bad("pairs", "expected an array of pairs"))?;
    let set = list.iter().map(|p| nonsym_from_json(p, Some(n))).collect::<Result<_, _>>()?;
    Ok((n, set))
}

pub fn nonsym_set_to_json<'a>(n: usize, pairs: impl IntoIterator<Item = &'a NonSymPair>) -> Value {
    json!({"n": n, "pairs": pairs.into_iter().map(|x| json!({"P": x.p(), "Q": x.q()})).collect::<Vec<_>>()})
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circ::generate_diametric;
    use crate::mutation::mutate_lm;
    use crate::network::well_connected;
    use crate::sample::rng_from_seed;

    #[test]
    fn pair_round_trip_canonicalizes() {
        let v = parse(r#"{"n":5,"P":[4,5],"Q":[2,1]}"#).unwrap();
        let x = pair_from_json(&v, None).unwrap();
        assert_eq!(x, CircularPair::new(5, vec![1, 2], vec![5, 4]).unwrap());
        assert_eq!(pair_from_json(&pair_to_json(&x), None).unwrap(), x);
        assert_eq!(pair_from_arg("(4,5;2,1)", Some(5)).unwrap(), x);
        assert_eq!(pair_from_arg("(;)", Some(5)).unwrap(), CircularPair::empty(5));
        assert!(pair_from_json(&parse(r#"{"n":5,"P":[1,3],"Q":[2,4]}"#).unwrap(), None).is_err());
    }

    #[test]
    fn containers_round_trip() {
        let d = generate_diametric(5);
        assert_eq!(pairset_from_json(&pairset_to_json(&d)).unwrap(), d);
        let g = well_connected(4).with_random_conductances(&mut rng_from_seed(1));
        let h = network_from_json(&network_to_json(&g)).unwrap();
        assert_eq!(network_to_json(&h), network_to_json(&g));
        let m = crate::network::response_matrix(&g).unwrap().into_matrix();
        assert_eq!(matrix_from_json(&matrix_to_json(&m)).unwrap(), m);
        let c = LmCluster::initial(5);
        let x = CircularPair::new(5, vec![1], vec![3]).unwrap();
        let (c2, mv) = mutate_lm(&c, MoveKind::P1, &x, None).unwrap();
        assert_eq!(cluster_from_json(&cluster_to_json(&c2)).unwrap(), c2);
        let t = trace_from_json(&trace_to_json(std::slice::from_ref(&mv)), 5).unwrap();
        assert_eq!(t, vec![TraceStep { kind: MoveKind::P1, site: x, entering: mv.entering }]);
    }

    #[test]
    fn network_example_parses() {
        let v = parse(r#"{"n":4,"interior":["i1"],"edges":[{"u":1,"v":"i1","g":"3/2"},{"u":2,"v":"i1","g":1}]}"#).unwrap();
        let g = network_from_json(&v).unwrap();
        assert_eq!(g.edges().len(), 2);
        assert!(network_from_json(&parse(r#"{"n":4,"edges":[{"u":7,"v":1,"g":"1"}]}"#).unwrap()).is_err());
    }
}
