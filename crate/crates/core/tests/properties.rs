use std::collections::BTreeSet;
use std::sync::Arc;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

use circnet::circ::{enumerate_pairs, weakly_separated_pairs, CircularPair, Label, NonSymPair};
use circnet::laurent::LaurentTracker;
use circnet::linalg::{circular_minor, GroundSet, Rational};
use circnet::mutation::{
    build_quiver, canonical_cluster, lm_moves, mutate_lm, reduce_to_canonical, relations, LmCluster, MoveKind, Samples,
    Seed,
};
use circnet::network::{self, response_matrix, well_connected};
use circnet::rewrite::Rewriter;
use circnet::sample::{random_matrix, rng_from_seed};

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

/// A random walk of exchanges from the diametric cluster.
fn walk(n: usize, kinds: &[MoveKind], len: usize, seed: u64) -> Vec<LmCluster> {
    let rels = relations(n, kinds);
    let mut rng = rng_from_seed(seed);
    let mut c = LmCluster::initial(n);
    let mut out = vec![c.clone()];
    for _ in 0..len {
        let moves = lm_moves(&c, &rels);
        let mv = moves.choose(&mut rng).expect("a move");
        c = mutate_lm(&c, mv.kind, &mv.leaving, mv.entering.as_ref()).unwrap().0;
        out.push(c.clone());
    }
    out
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn canonical_form_ignores_the_flip(n in 3usize..=8, seed in any::<u64>()) {
        let all: Vec<CircularPair> = enumerate_pairs(n, None).iter().cloned().collect();
        let mut rng = rng_from_seed(seed);
        let x = all.choose(&mut rng).unwrap();
        for r in x.reps() {
            let mut p: Vec<Label> = r.q().to_vec();
            p.reverse();
            let mut q: Vec<Label> = r.p().to_vec();
            q.reverse();
            prop_assert_eq!(&CircularPair::new(n, p, q).unwrap(), x);
        }
    }

    #[test]
    fn response_matrices_are_symmetric_with_zero_row_sums(n in 2usize..=6, seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let g = network::random_network(n, 3, &mut rng);
        let m = response_matrix(&g).unwrap().into_matrix();
        prop_assert!(m.is_symmetric() && m.has_zero_row_sums());
        for x in enumerate_pairs(n, None).iter() {
            prop_assert!(circular_minor(&m, x).unwrap() >= Rational::from_integer(0.into()));
        }
    }

    #[test]
    fn gp1_on_random_blocks(seed in any::<u64>(), s in 2usize..=5) {
        let mut rng = rng_from_seed(seed);
        let m = random_matrix(8, 8, &mut rng);
        let mut labels: Vec<Label> = (1..=8).collect();
        labels.shuffle(&mut rng);
        let mut rows = labels[..s].to_vec();
        let mut cols = labels[8 - s..].to_vec();
        rows.sort();
        cols.sort();
        let g = GroundSet::new(rows.clone(), cols.clone()).unwrap();
        let (i, j) = (rng.gen_range(0..s - 1), rng.gen_range(0..s - 1));
        let (a, b) = (rows[i], rows[rng.gen_range(i + 1..s)]);
        let (c, d) = (cols[j], cols[rng.gen_range(j + 1..s)]);
        prop_assert!(circnet::linalg::check_gp1(&m, &g, a, b, c, d).unwrap());
    }

    #[test]
    fn quiver_mutation_is_an_involution(n in 4usize..=8, pick in any::<prop::sample::Index>()) {
        let q = build_quiver(n).unwrap();
        let mutable: Vec<usize> = (0..q.len()).filter(|&i| !q.frozen[i]).collect();
        let k = mutable[pick.index(mutable.len())];
        let mut r = q.clone();
        r.mutate(k);
        r.mutate(k);
        prop_assert_eq!(r, q);
    }

    #[test]
    fn rewrites_match_the_determinant(n in 4usize..=7, seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let all: Vec<CircularPair> = enumerate_pairs(n, None).iter().cloned().collect();
        let x = all.choose(&mut rng).unwrap();
        let m = response_matrix(&well_connected(n).with_random_conductances(&mut rng)).unwrap().into_matrix();
        let mut r = Rewriter::new(n);
        let root = r.express(x).unwrap();
        prop_assert!(r.arena().operators(root).iter().all(|o| ["+", "*", "/"].contains(o)));
        prop_assert_eq!(r.arena().eval_minors(root, &m).unwrap(), circular_minor(&m, x).unwrap());
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn exchanges_keep_clusters_weakly_separated(n in 4usize..=6, len in 0usize..=8, p2 in any::<bool>(), seed in any::<u64>()) {
        let kinds: &[MoveKind] = if p2 { &[MoveKind::P1, MoveKind::P2] } else { &[MoveKind::P1] };
        for c in walk(n, kinds, len, seed) {
            let v: Vec<&CircularPair> = c.pairs.iter().collect();
            prop_assert_eq!(v.len(), n * (n - 1) / 2);
            for i in 0..v.len() {
                for j in i + 1..v.len() {
                    prop_assert!(weakly_separated_pairs(v[i], v[j]), "{} {}", v[i], v[j]);
                }
            }
        }
    }

    #[test]
    fn symmetric_seed_mutation_tracks_plucker_moves(n in 5usize..=6, len in 1usize..=6, seed in any::<u64>()) {
        let samples = Arc::new(Samples::new(n, 1));
        let rels = relations(n, &[MoveKind::P1]);
        let mut rng = rng_from_seed(seed);
        let mut s = Seed::initial(n, samples.clone()).unwrap();
        let mut lm = LmCluster::initial(n);
        for _ in 0..len {
            let moves = lm_moves(&lm, &rels);
            let mv = moves.choose(&mut rng).unwrap();
            s = s.mutate_sym(s.vertex(&mv.leaving.rep()).unwrap()).unwrap();
            lm = mutate_lm(&lm, MoveKind::P1, &mv.leaving, mv.entering.as_ref()).unwrap().0;
        }
        let want: BTreeSet<Vec<Rational>> =
            lm.pairs.iter().chain([&CircularPair::empty(n)]).map(|x| samples.sym_values(x)).collect();
        prop_assert_eq!(s.symmetrize(), want);
    }

    #[test]
    fn cm_mutation_is_an_involution(n in 4usize..=6, seed in any::<u64>()) {
        let samples = Arc::new(Samples::new(n, 2));
        let s = Seed::initial(n, samples).unwrap();
        let mut rng = rng_from_seed(seed);
        let mutable: Vec<usize> = (0..s.len()).filter(|&v| !s.is_frozen(v)).collect();
        let v = *mutable.choose(&mut rng).unwrap();
        prop_assert_eq!(s.mutate_cm(v).unwrap().mutate_cm(v).unwrap(), s);
    }

    #[test]
    fn reduction_reaches_the_canonical_cluster(n in 4usize..=6, len in 0usize..=6, seed in any::<u64>()) {
        let c = walk(n, &[MoveKind::P1], len, seed).pop().unwrap();
        let lifted: BTreeSet<NonSymPair> = circnet::mutation::double_cover(n, &c.pairs);
        let s = Seed::from_solid_cluster(n, &lifted, Arc::new(Samples::new(n, 0))).unwrap();
        let red = reduce_to_canonical(&s).unwrap();
        prop_assert_eq!(red.result.cluster().unwrap(), canonical_cluster(n).unwrap());
        prop_assert!(red.weights.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn short_exchange_sequences_stay_laurent(len in 1usize..=4, seed in any::<u64>()) {
        let n = 4;
        let rels = relations(n, &[MoveKind::P1, MoveKind::P2]);
        let mut rng = rng_from_seed(seed);
        let mut c = LmCluster::initial(n);
        let mut path = Vec::new();
        for _ in 0..len {
            let moves = lm_moves(&c, &rels);
            let mv = moves.choose(&mut rng).unwrap().clone();
            c = mutate_lm(&c, mv.kind, &mv.leaving, mv.entering.as_ref()).unwrap().0;
            path.push(mv);
        }
        let mut t = LaurentTracker::new(n);
        t.apply(&path).unwrap();
        let m = response_matrix(&well_connected(n).with_random_conductances(&mut rng)).unwrap().into_matrix();
        let at: Vec<Rational> = t.variables.iter().map(|v| circular_minor(&m, v).unwrap()).collect();
        for x in &c.pairs {
            let e = &t.exprs[x];
            prop_assert!(e.has_integer_coefficients() && e.has_positive_coefficients(), "{}: {}", x, e);
            prop_assert_eq!(e.eval(&at), circular_minor(&m, x).unwrap());
        }
    }
}
