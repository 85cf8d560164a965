//! `circnet`: command-line access to the verification pipelines.
//!
//! Exit status: 0 when every check passes, 1 when a property or identity
//! fails (details on standard error), 2 on invalid input.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use circnet::circ::{binom2, generate_diametric};
use circnet::io::{self, IoError};
use circnet::linalg::{circular_minor, format_rational};
use circnet::mutation::{self, LmCluster, MoveKind, Samples, Seed};
use circnet::network::{self, LocalMove};
use circnet::positroid;
use circnet::rewrite::Rewriter;
use circnet::sample::rng_from_seed;
use circnet::wsep;

#[derive(Parser, Debug)]
#[command(name = "circnet", version, about = "Circular planar networks, circular minors and their cluster structure")]
struct Cli {
    /// Seed for every randomised step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Cap on worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write the JSON result here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// The diametric pairs on n vertices.
    Diametric {
        #[arg(long)]
        n: usize,
    },
    /// Response matrix of a network.
    Response {
        #[arg(long)]
        network: PathBuf,
    },
    /// Connected circular pairs of a network.
    Connections {
        #[arg(long)]
        network: PathBuf,
    },
    /// Positive minors against connections, and nonnegativity of all minors.
    #[command(name = "verify-theorem226")]
    VerifyTheorem226 {
        #[arg(long)]
        network: PathBuf,
    },
    /// Electrical positroid axioms on a pair set.
    CheckPositroid {
        #[arg(long)]
        pairs: PathBuf,
    },
    /// Boundary edge or boundary spike extension of a pair set.
    Extend {
        #[arg(long)]
        pairs: PathBuf,
        #[arg(long, value_enum)]
        mode: ExtendMode,
    },
    /// Subtraction-free expression of a minor over the diametric minors.
    MinorRewrite {
        #[arg(long)]
        n: usize,
        /// `(1,2;5,4)` or a pair JSON object.
        #[arg(long)]
        pair: String,
        /// Random response matrices to check the expression on.
        #[arg(long, default_value_t = 3)]
        checks: usize,
    },
    /// One exchange on a cluster, or a replayed trace.
    Mutate {
        #[arg(long)]
        cluster: Option<PathBuf>,
        /// Start from the diametric cluster on n vertices instead.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long = "move")]
        kind: Option<MoveKind>,
        #[arg(long)]
        site: Option<String>,
        /// Pick the entering pair when several exchanges apply.
        #[arg(long)]
        entering: Option<String>,
        /// Replay a trace file of {move, site, entering} steps.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Clusters reachable from the diametric cluster.
    EnumerateClusters {
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',', default_value = "p1")]
        moves: Vec<MoveKind>,
    },
    /// Maximal weakly separated collections.
    EnumerateWs {
        #[arg(long)]
        n: usize,
    },
    /// Maximal collections against clusters, with positivity certificates.
    VerifyConjecture {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
    },
    /// Reduce a solid seed to the canonical one.
    ReduceCanonical {
        /// `{"n":5,"pairs":[..]}` with ordered pairs, or `{"n":5,"initial":true}`.
        #[arg(long = "seed-file", alias = "from")]
        seed_file: PathBuf,
    },
    /// Apply a local move and check the response matrix is unchanged.
    LocalMove {
        #[arg(long)]
        network: PathBuf,
        #[arg(long = "move", value_enum)]
        kind: MoveName,
        /// Edge or vertex indices, comma separated; interior vertices may be named.
        #[arg(long)]
        site: String,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ExtendMode {
    Bep,
    Bsp,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MoveName {
    Loop,
    Spike,
    Series,
    Parallel,
    YDelta,
    DeltaY,
}

/// Failure classes, mapped to exit codes 1 and 2.
enum Fail {
    Violation(String, Value),
    Invalid(String),
}

macro_rules! input_error {
    ($($t:ty),*) => { $(impl From<$t> for Fail { fn from(e: $t) -> Self { Fail::Invalid(e.to_string()) } })* };
}
input_error!(
    IoError,
    circnet::CircError,
    circnet::LinalgError,
    network::NetworkError,
    mutation::MutationError,
    circnet::rewrite::RewriteError,
    wsep::WsepError,
    positroid::PositroidError,
    std::io::Error
);

fn read_json(path: &Path) -> Result<Value, Fail> {
    let text = fs::read_to_string(path).map_err(|e| Fail::Invalid(format!("{}: {e}", path.display())))?;
    Ok(io::parse(&text)?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let (value, code) = match run(&cli) {
        Ok(v) => (v, 0),
        Err(Fail::Violation(msg, v)) => {
            eprintln!("violation: {msg}");
            (v, 1)
        }
        Err(Fail::Invalid(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let text = serde_json::to_string_pretty(&value).expect("serializable");
    match &cli.out {
        Some(p) => {
            if let Err(e) = fs::write(p, text + "\n") {
                eprintln!("error: {}: {e}", p.display());
                return ExitCode::from(2);
            }
        }
        None => {
            use std::io::Write;
            // A closed pipe downstream is not an error worth reporting.
            let _ = writeln!(std::io::stdout().lock(), "{text}");
        }
    }
    ExitCode::from(code)
}

fn check(ok: bool, msg: impl FnOnce() -> String, v: Value) -> Result<Value, Fail> {
    if ok {
        Ok(v)
    } else {
        Err(Fail::Violation(msg(), v))
    }
}

fn run(cli: &Cli) -> Result<Value, Fail> {
    match &cli.cmd {
        Cmd::Diametric { n } => {
            if *n < 2 {
                return Err(Fail::Invalid(format!("n must be at least 2, got {n}")));
            }
            let d = generate_diametric(*n);
            Ok(json!({"n": n, "count": d.len(), "pairs": io::pairset_to_json(&d)["pairs"]}))
        }
        Cmd::Response { network } => {
            let g = io::network_from_json(&read_json(network)?)?;
            Ok(io::matrix_to_json(network::response_matrix(&g)?.matrix()))
        }
        Cmd::Connections { network } => {
            let g = io::network_from_json(&read_json(network)?)?;
            Ok(io::pairset_to_json(&network::connections(&g)))
        }
        Cmd::VerifyTheorem226 { network } => {
            let g = io::network_from_json(&read_json(network)?)?;
            let r = network::verify_minor_connection(&g)?;
            let v = serde_json::to_value(&r).expect("serializable");
            check(r.ok(), || format!("mismatched {:?}, negative {:?}", r.mismatched, r.negative), v)
        }
        Cmd::CheckPositroid { pairs } => {
            let s = io::pairset_from_json(&read_json(pairs)?)?;
            let r = positroid::axiom_report(&s);
            let v = json!({"positroid": r.failure.is_none(), "report": r});
            check(r.failure.is_none(), || r.failure.as_ref().map(|w| w.to_string()).unwrap_or_default(), v)
        }
        Cmd::Extend { pairs, mode } => {
            let s = io::pairset_from_json(&read_json(pairs)?)?;
            let e = match mode {
                ExtendMode::Bep => positroid::bep_extension(&s),
                ExtendMode::Bsp => positroid::bsp_extension(&s),
            };
            Ok(io::pairset_to_json(&e))
        }
        Cmd::MinorRewrite { n, pair, checks } => minor_rewrite(*n, pair, *checks, cli.seed),
        Cmd::Mutate { cluster, n, kind, site, entering, trace } => mutate(cluster, *n, *kind, site, entering, trace),
        Cmd::EnumerateClusters { n, moves } => {
            let fam = mutation::enumerate_plucker_clusters(*n, moves)?;
            let clusters: Vec<Value> = fam.clusters().iter().map(|c| io::pairs_to_json(*n, c)["pairs"].clone()).collect();
            let ok = fam.clusters().iter().all(|c| c.len() == binom2(*n));
            let v = json!({"n": n, "moves": moves.iter().map(|m| m.to_string()).collect::<Vec<_>>(), "count": fam.len(), "clusters": clusters});
            check(ok, || "a cluster does not have C(n,2) elements".into(), v)
        }
        Cmd::EnumerateWs { n } => {
            let all = wsep::maximal_ws_collections(*n)?;
            let cols: Vec<Value> = all.iter().map(|c| io::pairs_to_json(*n, c)["pairs"].clone()).collect();
            let ok = all.iter().all(|c| c.len() <= binom2(*n));
            check(ok, || "a maximal collection exceeds C(n,2)".into(), json!({"n": n, "count": all.len(), "collections": cols}))
        }
        Cmd::VerifyConjecture { n, budget } => {
            let r = wsep::verify_conjecture(*n, *budget, cli.seed)?;
            let v = serde_json::to_value(&r).expect("serializable");
            check(r.ok(), || format!("{} failures; collections equal clusters: {}", r.failures.len(), r.equalities.ws_equals_clusters), v)
        }
        Cmd::ReduceCanonical { seed_file } => reduce(seed_file, cli.seed),
        Cmd::LocalMove { network, kind, site } => local_move(network, *kind, site),
    }
}

fn minor_rewrite(n: usize, pair: &str, checks: usize, seed: u64) -> Result<Value, Fail> {
    let x = io::pair_from_arg(pair, Some(n))?;
    if x.n() != n {
        return Err(Fail::Invalid(format!("pair is on {} vertices, not {n}", x.n())));
    }
    let mut r = Rewriter::new(n);
    let root = r.express(&x)?;
    let arena = r.arena();
    let mut rng = rng_from_seed(seed);
    let wc = network::well_connected(n);
    let mut mismatches = Vec::new();
    for i in 0..checks {
        let m = network::response_matrix(&wc.with_random_conductances(&mut rng))?.into_matrix();
        let direct = circular_minor(&m, &x)?;
        let got = arena.eval_minors(root, &m)?;
        if got != direct {
            mismatches.push(json!({"check": i, "direct": format_rational(&direct), "expression": format_rational(&got)}));
        }
    }
    let ops: Vec<&str> = arena.operators(root).into_iter().collect();
    let v = json!({
        "pair": io::pair_to_json(&x),
        "expression": arena.to_json(root),
        "rendered": arena.render(root),
        "operators": ops,
        "checks": checks,
        "mismatches": mismatches,
    });
    let free = ops.iter().all(|o| matches!(*o, "+" | "*" | "/"));
    check(mismatches.is_empty() && free, || format!("expression for {x} disagrees with the determinant"), v)
}

fn mutate(
    cluster: &Option<PathBuf>,
    n: Option<usize>,
    kind: Option<MoveKind>,
    site: &Option<String>,
    entering: &Option<String>,
    trace: &Option<PathBuf>,
) -> Result<Value, Fail> {
    let mut c = match (cluster, n) {
        (Some(p), _) => {
            // accept the output of a previous `mutate` as well
            let v = read_json(p)?;
            io::cluster_from_json(v.get("cluster").unwrap_or(&v))?
        }
        (None, Some(n)) => LmCluster::initial(n),
        (None, None) => return Err(Fail::Invalid("give --cluster or --n".into())),
    };
    let n = c.n;
    let steps: Vec<io::TraceStep> = match (trace, kind, site) {
        (Some(t), _, _) => io::trace_from_json(&read_json(t)?, n)?,
        (None, Some(kind), Some(site)) => vec![io::TraceStep {
            kind,
            site: io::pair_from_arg(site, Some(n))?,
            entering: entering.as_deref().map(|e| io::pair_from_arg(e, Some(n))).transpose()?,
        }],
        _ => return Err(Fail::Invalid("give --move and --site, or --trace".into())),
    };
    let mut done = Vec::new();
    for s in &steps {
        let (next, mv) = mutation::mutate_lm(&c, s.kind, &s.site, s.entering.as_ref())?;
        done.push(mv);
        c = next;
    }
    Ok(json!({"cluster": io::cluster_to_json(&c), "trace": io::trace_to_json(&done)}))
}

fn reduce(path: &Path, seed: u64) -> Result<Value, Fail> {
    let v = read_json(path)?;
    let initial = v.get("initial").and_then(Value::as_bool).unwrap_or(false);
    let n = v.get("n").and_then(Value::as_u64).ok_or_else(|| Fail::Invalid("seed file needs n".into()))? as usize;
    let samples = Arc::new(Samples::new(n, seed));
    let s = if initial {
        Seed::initial(n, samples)?
    } else {
        let (_, set) = io::nonsym_set_from_json(&v)?;
        Seed::from_solid_cluster(n, &set, samples)?
    };
    let red = mutation::reduce_to_canonical(&s)?;
    let result = red.result.cluster().expect("reduction ends on ordered pairs");
    // strictly decreasing, then constant through the sign flips
    let w = &red.weights;
    let turn = w.windows(2).position(|p| p[1] >= p[0]).map_or(w.len(), |i| i + 1);
    let monotone = w[turn.saturating_sub(1)..].iter().all(|x| *x == w[turn - 1]);
    let v = json!({
        "n": n,
        "steps": red.steps.iter().map(io::nonsym_to_json).collect::<Vec<_>>(),
        "descending_steps": red.descending,
        "weights": red.weights,
        "result": io::nonsym_set_to_json(n, &result),
    });
    check(monotone, || "Σ|D| did not decrease".into(), v)
}

fn local_move(path: &Path, kind: MoveName, site: &str) -> Result<Value, Fail> {
    let g = io::network_from_json(&read_json(path)?)?;
    let parts: Vec<&str> = site.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    let num = |i: usize| -> Result<usize, Fail> {
        let s = parts.get(i).ok_or_else(|| Fail::Invalid(format!("site {site:?} needs more indices")))?;
        s.parse().map_err(|_| Fail::Invalid(format!("bad index {s:?}")))
    };
    let vertex = || -> Result<usize, Fail> {
        let s = parts.first().ok_or_else(|| Fail::Invalid("site needs a vertex".into()))?;
        match s.parse::<usize>() {
            Ok(i) => Ok(i),
            Err(_) => Ok(g.interior_index(s)?),
        }
    };
    let mv = match kind {
        MoveName::Loop => LocalMove::RemoveLoop { edge: num(0)? },
        MoveName::Spike => LocalMove::RemoveSpike { vertex: vertex()? },
        MoveName::Series => LocalMove::Series { vertex: vertex()? },
        MoveName::Parallel => LocalMove::Parallel { e1: num(0)?, e2: num(1)? },
        MoveName::YDelta => LocalMove::YDelta { vertex: vertex()? },
        MoveName::DeltaY => LocalMove::DeltaY { e1: num(0)?, e2: num(1)?, e3: num(2)? },
    };
    let h = network::local_move(&g, &mv)?;
    let before = network::response_matrix(&g)?;
    let after = network::response_matrix(&h)?;
    let same = before.matrix() == after.matrix();
    let v = json!({"move": mv.name(), "network": io::network_to_json(&h), "response_preserved": same});
    check(same, || format!("{} changed the response matrix", mv.name()), v)
}
