//! Acceptance run: one PASS/FAIL line per criterion, each under its wall-clock
//! bound. Determinants, sign twists and matchings are recomputed here from
//! scratch rather than through the library paths they check.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_traits::{One, Signed, Zero};
use rand::Rng;
use rayon::prelude::*;

use circnet::circ::{binom2, enumerate_pairs, generate_diametric, solid_pairs, CircularPair, Label};
use circnet::linalg::{check_gp1, check_gp2, check_limiting_identity, limiting_ground, ExactMatrix, GroundSet, Rational};
use circnet::mutation::{self, enumerate_plucker_clusters, lm_moves, mutate_lm, relations, LmCluster, MoveKind, Samples, Seed};
use circnet::network::{self, response_matrix, well_connected};
use circnet::positroid;
use circnet::rewrite::Rewriter;
use circnet::sample::{random_matrix, rng_from_seed};
use circnet::wsep;

// ---------------------------------------------------------------------------
// oracles

/// Determinant by plain Gaussian elimination over the rationals.
fn det(mut a: Vec<Vec<Rational>>) -> Rational {
    let n = a.len();
    let mut d = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else { return Rational::zero() };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        let piv = a[c][c].clone();
        d *= &piv;
        for r in c + 1..n {
            if a[r][c].is_zero() {
                continue;
            }
            let f = &a[r][c] / &piv;
            for k in c..n {
                let t = &f * &a[c][k];
                a[r][k] -= t;
            }
        }
    }
    d
}

fn block(m: &ExactMatrix, rows: &[Label], cols: &[Label]) -> Rational {
    det(rows.iter().map(|&r| cols.iter().map(|&c| m.get(r as usize - 1, c as usize - 1).clone()).collect()).collect())
}

/// The quantity that is nonnegative on response matrices.
fn minor(m: &ExactMatrix, x: &CircularPair) -> Rational {
    let d = block(m, x.p(), x.q());
    if x.k() % 2 == 1 {
        -d
    } else {
        d
    }
}

/// Ground-block minors with a few rows and columns deleted, cached.
struct Deltas<'a> {
    m: &'a ExactMatrix,
    rows: Vec<Label>,
    cols: Vec<Label>,
    cache: HashMap<(Vec<Label>, Vec<Label>), Rational>,
}

impl Deltas<'_> {
    fn get(&mut self, dr: &[Label], dc: &[Label]) -> Rational {
        let key = (dr.to_vec(), dc.to_vec());
        if let Some(v) = self.cache.get(&key) {
            return v.clone();
        }
        let r: Vec<Label> = self.rows.iter().copied().filter(|x| !dr.contains(x)).collect();
        let c: Vec<Label> = self.cols.iter().copied().filter(|x| !dc.contains(x)).collect();
        let v = block(self.m, &r, &c);
        self.cache.insert(key, v.clone());
        v
    }
}

fn cp(n: usize, p: &[Label], q: &[Label]) -> CircularPair {
    CircularPair::new(n, p.to_vec(), q.to_vec()).unwrap()
}

fn random_response<R: Rng>(n: usize, rng: &mut R) -> ExactMatrix {
    response_matrix(&well_connected(n).with_random_conductances(rng)).unwrap().into_matrix()
}

// ---------------------------------------------------------------------------
// criteria

fn c1() -> Result<(), String> {
    for n in 3..=12 {
        let d = generate_diametric(n);
        if d.len() != n * (n - 1) / 2 {
            return Err(format!("n={n}: {} diametric pairs", d.len()));
        }
    }
    Ok(())
}

fn c2() -> Result<(), String> {
    let bad: Vec<String> = (0..200u64)
        .into_par_iter()
        .flat_map_iter(|t| {
            let mut rng = rng_from_seed(1000 + t);
            let m = random_matrix(7, 7, &mut rng);
            let mut bad = Vec::new();
            for s in 2..=6u8 {
                // (P1): square ground block
                let rows: Vec<Label> = (1..=s).collect();
                let cols: Vec<Label> = (2..=s + 1).collect();
                let g = GroundSet::new(rows.clone(), cols.clone()).unwrap();
                let mut dl = Deltas { m: &m, rows: rows.clone(), cols: cols.clone(), cache: HashMap::new() };
                for (i, &a) in rows.iter().enumerate() {
                    for &b in &rows[i + 1..] {
                        for (j, &c) in cols.iter().enumerate() {
                            for &d in &cols[j + 1..] {
                                let lhs = dl.get(&[a], &[c]) * dl.get(&[b], &[d]);
                                let rhs = dl.get(&[a], &[d]) * dl.get(&[b], &[c]) + dl.get(&[a, b], &[c, d]) * dl.get(&[], &[]);
                                if lhs != rhs || !check_gp1(&m, &g, a, b, c, d).unwrap() {
                                    bad.push(format!("P1 t={t} s={s} {a}{b}{c}{d}"));
                                }
                            }
                        }
                    }
                }
                // (P2): one extra row
                let rows: Vec<Label> = (1..=s + 1).collect();
                let cols: Vec<Label> = (1..=s).rev().collect();
                let g = GroundSet::new(rows.clone(), cols.clone()).unwrap();
                let mut dl = Deltas { m: &m, rows: rows.clone(), cols: cols.clone(), cache: HashMap::new() };
                for (i, &a) in rows.iter().enumerate() {
                    for (j, &b) in rows.iter().enumerate().skip(i + 1) {
                        for &c in &rows[j + 1..] {
                            for &d in &cols {
                                let lhs = dl.get(&[b], &[]) * dl.get(&[a, c], &[d]);
                                let rhs = dl.get(&[a], &[]) * dl.get(&[b, c], &[d]) + dl.get(&[c], &[]) * dl.get(&[a, b], &[d]);
                                if lhs != rhs || !check_gp2(&m, &g, a, b, c, d).unwrap() {
                                    bad.push(format!("P2 t={t} s={s} {a}{b}{c}{d}"));
                                }
                            }
                        }
                    }
                }
            }
            bad
        })
        .collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(format!("{} failures, first {}", bad.len(), bad[0]))
    }
}

fn c3() -> Result<(), String> {
    for n in [6usize, 8, 10] {
        for k in (1..).take_while(|k| k + 2 <= n / 2) {
            let (g, [b, c, d, e, f, gg]) = limiting_ground(n, k).map_err(|x| x.to_string())?;
            let failures: usize = (0..100u64)
                .into_par_iter()
                .filter(|&t| {
                    let mut rng = rng_from_seed((n * 1000 + k * 100) as u64 + t);
                    let m = random_matrix(n, n, &mut rng);
                    let mut dl = Deltas { m: &m, rows: g.rows.clone(), cols: g.cols.clone(), cache: HashMap::new() };
                    let mut col = |r: &[Label], cs: &[Label]| {
                        let mut v = cs.to_vec();
                        v.dedup();
                        dl.get(r, &v)
                    };
                    let lhs = col(&[], &[d]) * col(&[c], &[f, gg]) * col(&[b, c], &[d, e, gg])
                        + col(&[], &[gg]) * col(&[c], &[d, e]) * col(&[b, c], &[d, f, gg]);
                    let rhs = col(&[c], &[d, gg]) * (col(&[b], &[d, e]) * col(&[c], &[f, gg]) - col(&[b], &[f, gg]) * col(&[c], &[d, e]));
                    lhs != rhs || !check_limiting_identity(&m, n, k).unwrap()
                })
                .count();
            if failures > 0 {
                return Err(format!("n={n} k={k}: {failures} of 100 matrices"));
            }
        }
        // the exchange used by the mutation engine, at every seam pair
        for x in generate_diametric(n).iter().filter(|x| x.classify().limiting) {
            let (rows, cols, [b, c, d, e, f, gg]) = mutation::seam_ground(x).map_err(|e| e.to_string())?;
            let failures = (0..100u64)
                .into_par_iter()
                .filter(|&t| {
                    let mut rng = rng_from_seed((n * 7000 + x.k() * 100) as u64 + t);
                    let m = random_matrix(n, n, &mut rng);
                    let mut dl = Deltas { m: &m, rows: rows.clone(), cols: cols.clone(), cache: HashMap::new() };
                    let xv = dl.get(&[c], &[d, gg]);
                    let y = dl.get(&[b], &[d, e]) * dl.get(&[c], &[f, gg]) - dl.get(&[b], &[f, gg]) * dl.get(&[c], &[d, e]);
                    let fv = dl.get(&[], &[d]) * dl.get(&[c], &[f, gg]) * dl.get(&[b, c], &[d, e, gg])
                        + dl.get(&[], &[gg]) * dl.get(&[c], &[d, e]) * dl.get(&[b, c], &[d, f, gg]);
                    xv * y != fv || block(&m, &strip(&rows, &[c]), &strip(&cols, &[d, gg])).abs() != minor(&m, x).abs()
                })
                .count();
            if failures > 0 {
                return Err(format!("n={n} seam pair {x}: {failures} of 100 matrices"));
            }
        }
    }
    Ok(())
}

fn strip(v: &[Label], drop: &[Label]) -> Vec<Label> {
    v.iter().copied().filter(|x| !drop.contains(x)).collect()
}

fn c4() -> Result<(), String> {
    let mut rng = rng_from_seed(4);
    for t in 0..60 {
        let n = rng.gen_range(3..=5);
        let g = network::random_network(n, 3, &mut rng);
        let m = response_matrix(&g).map_err(|e| e.to_string())?.into_matrix();
        let pi = network::connections(&g);
        for x in enumerate_pairs(n, None).iter() {
            let v = minor(&m, x);
            if v.is_negative() {
                return Err(format!("network {t}: {x} = {v}"));
            }
            if v.is_positive() != pi.contains(x) {
                return Err(format!("network {t}: {x} = {v} but connected = {}", pi.contains(x)));
            }
        }
        if !network::verify_minor_connection(&g).map_err(|e| e.to_string())?.ok() {
            return Err(format!("network {t}: library report disagrees"));
        }
    }
    Ok(())
}

fn c5() -> Result<(), String> {
    let mut rng = rng_from_seed(5);
    let mut done = 0;
    let mut kinds = BTreeMap::new();
    while done < 150 {
        let n = rng.gen_range(3..=5);
        let g = network::random_network(n, 4, &mut rng);
        let moves = network::applicable_moves(&g);
        if moves.is_empty() {
            continue;
        }
        let mv = &moves[rng.gen_range(0..moves.len())];
        let h = network::local_move(&g, mv).map_err(|e| e.to_string())?;
        let before = response_matrix(&g).map_err(|e| e.to_string())?.into_matrix();
        let after = response_matrix(&h).map_err(|e| e.to_string())?.into_matrix();
        if before != after {
            return Err(format!("{} changed the response matrix", mv.name()));
        }
        *kinds.entry(mv.name()).or_insert(0) += 1;
        done += 1;
    }
    println!("  local moves applied: {kinds:?}");
    Ok(())
}

fn c6() -> Result<(), String> {
    for n in [5usize, 6, 7] {
        let mut rng = rng_from_seed(60 + n as u64);
        let mats: Vec<ExactMatrix> = (0..10).map(|_| random_response(n, &mut rng)).collect();
        let mut r = Rewriter::new(n);
        let pairs: Vec<CircularPair> = enumerate_pairs(n, None).iter().cloned().collect();
        let roots: Vec<_> = pairs.iter().map(|x| r.express(x).map_err(|e| format!("{x}: {e}"))).collect::<Result<_, _>>()?;
        let arena = r.arena();
        for (x, &root) in pairs.iter().zip(&roots) {
            if let Some(op) = arena.operators(root).into_iter().find(|o| !matches!(*o, "+" | "*" | "/")) {
                return Err(format!("{x} uses {op}"));
            }
        }
        let diam = generate_diametric(n);
        for m in &mats {
            let at: HashMap<CircularPair, Rational> =
                diam.iter().chain([&CircularPair::empty(n)]).map(|x| (x.clone(), minor(m, x))).collect();
            let got = arena.eval_many(&roots, &|x| at.get(x).cloned()).map_err(|e| e.to_string())?;
            for (x, v) in pairs.iter().zip(got) {
                if v != minor(m, x) {
                    return Err(format!("n={n}: {x} evaluates to {v}"));
                }
            }
        }
        println!("  n={n}: {} pairs, {} expression nodes", pairs.len(), arena.len());
    }
    Ok(())
}

fn c7() -> Result<(), String> {
    let axioms = positroid::enumerate_positroids(4).map_err(|e| e.to_string())?;
    let real = positroid::realizable_family(4).map_err(|e| e.to_string())?;
    println!("  n=4: {} axiom-passing sets, {} realizable", axioms.len(), real.len());
    if axioms != real {
        let extra = axioms.difference(&real).count();
        let missing = real.difference(&axioms).count();
        return Err(format!("{extra} unrealized positroids, {missing} realizable sets failing the axioms"));
    }
    Ok(())
}

fn c8() -> Result<(), String> {
    for n in 4..=6 {
        let all = enumerate_pairs(n, None);
        if positroid::bep_bsp_closure(n) != all {
            return Err(format!("n={n}: BEP/BSP closure of the empty pair is not every pair"));
        }
        let mut count = 0;
        for x in solid_pairs(n) {
            if x.is_empty() || !x.classify().maximal {
                continue;
            }
            let (d1, d2) = x.solid_stats().map_err(|e| e.to_string())?;
            if d1.abs_diff(d2) > 1 {
                continue;
            }
            if let Err(w) = positroid::check_axioms(&positroid::all_but(n, &x)) {
                return Err(format!("n={n}: removing {x}: {w}"));
            }
            count += 1;
        }
        println!("  n={n}: {count} maximal pairs checked");
    }
    // direct form at n = 4: an axiom-passing set with every property is everything
    let full = enumerate_pairs(4, None);
    for s in positroid::enumerate_positroids(4).map_err(|e| e.to_string())? {
        if (1..=4).all(|i| positroid::has_bep(&s, i) && positroid::has_bsp(&s, i)) && s != full {
            return Err(format!("n=4: a positroid with every BEP and BSP has {} pairs", s.len()));
        }
    }
    Ok(())
}

fn c9() -> Result<(), String> {
    for n in [5usize, 6] {
        let samples = Arc::new(Samples::new(n, 1));
        let rels = relations(n, &[MoveKind::P1]);
        let mut rng = rng_from_seed(90 + n as u64);
        for s in 0..120 {
            let mut seed = Seed::initial(n, samples.clone()).map_err(|e| e.to_string())?;
            let mut lm = LmCluster::initial(n);
            for step in 0..rng.gen_range(1..=6) {
                let moves = lm_moves(&lm, &rels);
                let mv = &moves[rng.gen_range(0..moves.len())];
                let v = seed.vertex(&mv.leaving.rep()).ok_or("leaving pair has no vertex")?;
                seed = seed.mutate_sym(v).map_err(|e| e.to_string())?;
                lm = mutate_lm(&lm, MoveKind::P1, &mv.leaving, mv.entering.as_ref()).map_err(|e| e.to_string())?.0;
                // values of the LM cluster, recomputed at the symmetric sample points
                let want: BTreeSet<Vec<Rational>> =
                    lm.pairs.iter().chain([&CircularPair::empty(n)]).map(|x| samples.sym_points().iter().map(|m| minor(m, x)).collect()).collect();
                if seed.symmetrize() != want || !seed.is_symmetric() {
                    return Err(format!("n={n} sequence {s} step {step}: value sets differ"));
                }
            }
        }
    }
    Ok(())
}

/// Cliques of the given size in the weak-separation graph on `v`.
fn ws_cliques(v: Vec<CircularPair>, target: usize) -> BTreeSet<BTreeSet<CircularPair>> {
    let adj: Vec<Vec<bool>> =
        v.iter().map(|x| v.iter().map(|y| x != y && circnet::circ::weakly_separated_pairs(x, y)).collect()).collect();
    let mut out = BTreeSet::new();
    fn grow(i: usize, cur: &mut Vec<usize>, adj: &[Vec<bool>], target: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == target {
            out.push(cur.clone());
            return;
        }
        for j in i..adj.len() {
            if adj.len() - j < target - cur.len() {
                return;
            }
            if cur.iter().all(|&c| adj[c][j]) {
                cur.push(j);
                grow(j + 1, cur, adj, target, out);
                cur.pop();
            }
        }
    }
    let mut found = Vec::new();
    grow(0, &mut Vec::new(), &adj, target, &mut found);
    for f in found {
        out.insert(f.into_iter().map(|i| v[i].clone()).collect());
    }
    out
}

fn c10() -> Result<(), String> {
    for n in [4usize, 5] {
        let fam: BTreeSet<BTreeSet<CircularPair>> =
            enumerate_plucker_clusters(n, &[MoveKind::P1]).map_err(|e| e.to_string())?.clusters().into_iter().collect();
        let solid = solid_pairs(n).into_iter().filter(|x| !x.is_empty()).collect();
        let cliques = ws_cliques(solid, binom2(n));
        println!("  n={n}: {} clusters, {} solid collections", fam.len(), cliques.len());
        if fam != cliques {
            return Err(format!("n={n}: families differ"));
        }
    }
    Ok(())
}

fn c11() -> Result<(), String> {
    for n in [4usize, 5, 6] {
        let fam = enumerate_plucker_clusters(n, &[MoveKind::P1]).map_err(|e| e.to_string())?;
        let seen: BTreeSet<CircularPair> = fam.clusters().into_iter().flatten().collect();
        for i in 1..=n as Label {
            for j in i + 1..=n as Label {
                if !seen.contains(&cp(n, &[i], &[j])) {
                    return Err(format!("n={n}: ({i};{j}) is in no cluster"));
                }
            }
        }
    }
    Ok(())
}

fn c12() -> Result<(), String> {
    for n in [4usize, 5] {
        let r = wsep::verify_conjecture(n, 10_000, 12).map_err(|e| e.to_string())?;
        let c = &r.counts;
        println!(
            "  n={n}: {} collections, {} clusters, {} certified, {}/{} removals falsified",
            c.ws_collections, c.clusters, c.certified, c.falsified, c.minimality_checks
        );
        if !r.ok() {
            return Err(format!("n={n}: {:?}", r.failures.first()));
        }
        let fam: BTreeSet<BTreeSet<CircularPair>> = enumerate_plucker_clusters(n, &[MoveKind::P1, MoveKind::P2])
            .map_err(|e| e.to_string())?
            .clusters()
            .into_iter()
            .collect();
        let pool = enumerate_pairs(n, None).into_members().into_iter().filter(|x| !x.is_empty()).collect();
        if ws_cliques(pool, binom2(n)) != fam {
            return Err(format!("n={n}: recomputed collections differ from the clusters"));
        }
    }
    Ok(())
}

fn check_matching(c: &BTreeSet<CircularPair>) -> Result<(), String> {
    let sb = wsep::check_strongbound(c).map_err(|e| e.to_string())?;
    let chords: BTreeSet<(Label, Label)> =
        c.iter().flat_map(|x| x.p().iter().zip(x.q()).map(|(&a, &b)| (a.min(b), a.max(b))).collect::<Vec<_>>()).collect();
    if sb.chords != chords.len() || c.len() > chords.len() {
        return Err(format!("bound fails: {} pairs, {} chords", c.len(), chords.len()));
    }
    let m = wsep::hall_matching(c).map_err(|e| e.to_string())?.ok_or_else(|| format!("no matching for {} pairs", c.len()))?;
    let mut used = BTreeSet::new();
    for x in c {
        let &(a, b) = m.get(x).ok_or_else(|| format!("{x} unmatched"))?;
        let own = x.p().iter().zip(x.q()).any(|(&p, &q)| (p.min(q), p.max(q)) == (a, b));
        if !own || !used.insert((a, b)) {
            return Err(format!("{x} matched to chord {a}-{b}"));
        }
    }
    Ok(())
}

fn c13() -> Result<(), String> {
    for n in [4usize, 5] {
        let cols = wsep::maximal_ws_collections(n).map_err(|e| e.to_string())?;
        for c in &cols {
            check_matching(c)?;
        }
        let mut rng = rng_from_seed(130 + n as u64);
        for _ in 0..200 {
            check_matching(&wsep::random_ws_subset(n, &mut rng))?;
        }
        println!("  n={n}: {} maximal collections and 200 random subsets", cols.len());
    }
    Ok(())
}

type Criterion = (u32, fn() -> Result<(), String>, u64);

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        (1, c1, 1),
        (2, c2, 30),
        (3, c3, 60),
        (4, c4, 120),
        (5, c5, 60),
        (6, c6, 120),
        (7, c7, 120),
        (8, c8, 60),
        (9, c9, 120),
        (10, c10, 180),
        (11, c11, 60),
        (12, c12, 900),
        (13, c13, 120),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (id, f, bound) in criteria {
        let t = Instant::now();
        let r = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panic".into()))
        });
        let took = t.elapsed();
        let r = r.and_then(|()| {
            if took > Duration::from_secs(bound) {
                Err(format!("took longer than {bound} s"))
            } else {
                Ok(())
            }
        });
        match r {
            Ok(()) => println!("criterion {id}: PASS ({:.2} s)", took.as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("criterion {id}: FAIL ({:.2} s) {why}", took.as_secs_f64());
            }
        }
    }
    println!("{} of 13 criteria passed", 13 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
