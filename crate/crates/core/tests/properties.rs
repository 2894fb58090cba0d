//! Cross-module properties: specialised solvers against the exhaustive
//! oracle, solution counts, the transitive negated-conjunction criterion
//! and danger witnesses.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use semdep::danger::{is_dangerous, realize_candidate};
use semdep::generators::{gen_chain, gen_random_simply_connected, ChainForm};
use semdep::solve::{
    enumerate_acceptable, induced_andnot_system, solve_brute, solve_chain, solve_simply_connected, solve_topological,
    yablo_like_check,
};
use semdep::{DangerLimits, DenotationSystem, DiGraph, Formula, SolveStatus, VarId, YabloLikeVerdict};

fn names(n: usize) -> Vec<VarId> {
    (0..n).map(|i| VarId::new(format!("v{i}"))).collect()
}

/// Random DAG on `v0..v{n-1}` with edges only from lower to higher index.
fn random_dag(rng: &mut ChaCha8Rng, n: usize, p: f64) -> DiGraph {
    let vs = names(n);
    let mut g = DiGraph::with_vertices(vs.iter().cloned());
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(p) {
                g.connect(vs[i].clone(), vs[j].clone());
            }
        }
    }
    g
}

/// Random cycle-free system, possibly open: each vertex gets a random
/// formula over a random subset of later vertices and some free names.
fn random_dag_system(rng: &mut ChaCha8Rng, n: usize, free: usize) -> DenotationSystem {
    let vs = names(n);
    let frees: Vec<VarId> = (0..free).map(|i| VarId::new(format!("f{i}"))).collect();
    let defs = (0..n).map(|i| {
        let pool: Vec<VarId> = vs[i + 1..]
            .iter()
            .chain(&frees)
            .filter(|_| rng.random_bool(0.4))
            .cloned()
            .collect();
        let f = if pool.is_empty() {
            Formula::constant(rng.random_bool(0.5))
        } else {
            let lits: Vec<Formula> = pool
                .into_iter()
                .map(|v| {
                    if rng.random_bool(0.5) {
                        Formula::Var(v)
                    } else {
                        Formula::not(Formula::Var(v))
                    }
                })
                .collect();
            if rng.random_bool(0.5) {
                Formula::And(lits)
            } else {
                Formula::Or(lits)
            }
        };
        (vs[i].clone(), f)
    });
    DenotationSystem::new(defs.collect::<Vec<_>>(), false).unwrap()
}

#[test]
fn topological_agrees_with_oracle_and_counts() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..150 {
        let n = rng.random_range(1..=8);
        let free = rng.random_range(0..=3);
        let sys = random_dag_system(&mut rng, n, free);
        let out = solve_topological(&sys).unwrap();
        let v = out.valuation.unwrap();
        assert!(sys.check_acceptable(&v).unwrap().acceptable);
        assert!(solve_brute(&sys).unwrap().is_acceptable());
        let k = sys.free_vars().len();
        assert_eq!(enumerate_acceptable(&sys).unwrap().len(), 1 << k, "{}", sys.to_source());
    }
}

#[test]
fn simply_connected_agrees_with_oracle() {
    for seed in 0..200u64 {
        let n = 1 + (seed as usize * 7) % 10;
        let sys = gen_random_simply_connected(n, seed, 3).unwrap();
        let out = solve_simply_connected(&sys).unwrap();
        assert!(
            sys.check_acceptable(out.valuation.as_ref().unwrap())
                .unwrap()
                .acceptable
        );
        let brute = solve_brute(&sys).unwrap();
        assert_eq!(brute.status, SolveStatus::Acceptable);
        // closed and cycle-free: both find the one solution
        assert_eq!(brute.valuation, out.valuation);
        assert_eq!(out.stats.choices_made, 0);
    }
}

/// Opening a simply connected system (dropping some definitions) makes the
/// choice step do real work.
#[test]
fn simply_connected_open_systems() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut chose = 0;
    for seed in 0..200u64 {
        let n = 2 + (seed as usize) % 9;
        let closed = gen_random_simply_connected(n, seed, 3).unwrap();
        let defs: Vec<(VarId, Formula)> = closed
            .definitions()
            .filter(|_| rng.random_bool(0.7))
            .map(|(v, f)| (v.clone(), f.clone()))
            .collect();
        let sys = DenotationSystem::new(defs, false).unwrap();
        let out = solve_simply_connected(&sys).unwrap();
        chose += out.stats.choices_made;
        assert!(
            sys.check_acceptable(out.valuation.as_ref().unwrap())
                .unwrap()
                .acceptable
        );
        assert!(solve_brute(&sys).unwrap().is_acceptable());
    }
    assert!(chose > 0);
}

#[test]
fn chain_agrees_with_oracle_on_open_chains() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let len = rng.random_range(1..=10);
        let forms: Vec<ChainForm> = (0..len).map(|_| ChainForm::ALL[rng.random_range(0..4)]).collect();
        let sys = gen_chain(&forms, true).unwrap();
        let v = solve_chain(&sys).unwrap().valuation.unwrap();
        assert!(sys.check_acceptable(&v).unwrap().acceptable);
        assert_eq!(enumerate_acceptable(&sys).unwrap().len(), 2);
    }
}

#[test]
fn transitive_negated_conjunction_criterion() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let n = rng.random_range(1..=10);
        let g = random_dag(&mut rng, n, 0.3).transitive_closure();
        let sys = induced_andnot_system(&g);
        match yablo_like_check(&g).unwrap() {
            YabloLikeVerdict::SafeValuation(v) => assert!(sys.check_acceptable(&v).unwrap().acceptable),
            YabloLikeVerdict::ParadoxWitness(x) => {
                panic!("cycle-free transitive graph reported paradox at {x}")
            }
        }
        // with a loop the verdict still matches the oracle in both
        // directions; a loop at a sink is always a witness
        let mut looped = g.clone();
        let x = g.vertices()[rng.random_range(0..n)].clone();
        let was_sink = g.out_degree(&x).unwrap() == 0;
        looped.connect(x.clone(), x.clone());
        let looped = looped.transitive_closure();
        let paradox = solve_brute(&induced_andnot_system(&looped)).unwrap().status == SolveStatus::Paradoxical;
        match yablo_like_check(&looped).unwrap() {
            YabloLikeVerdict::ParadoxWitness(_) => assert!(paradox),
            YabloLikeVerdict::SafeValuation(v) => {
                assert!(!paradox && !was_sink);
                assert!(induced_andnot_system(&looped).check_acceptable(&v).unwrap().acceptable);
            }
        }
    }
}

/// A loop whose vertex also reaches a sink is not paradoxical: x = !x & !y
/// is satisfied by x false, y true.
#[test]
fn loop_with_sink_successor_is_safe() {
    let g = DiGraph::from_edges([("x", "x"), ("x", "y")]);
    assert!(g.is_transitive());
    let safe: semdep::Valuation = [("x", false), ("y", true)].into_iter().collect();
    assert_eq!(
        yablo_like_check(&g).unwrap(),
        YabloLikeVerdict::SafeValuation(safe.clone())
    );
    assert!(induced_andnot_system(&g).check_acceptable(&safe).unwrap().acceptable);
}

#[test]
fn danger_witnesses_reverify() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut dangerous = 0;
    for _ in 0..60 {
        let n = rng.random_range(1..=4);
        let vs = names(n);
        let mut g = DiGraph::with_vertices(vs.iter().cloned());
        for a in &vs {
            for b in &vs {
                if rng.random_bool(0.3) && g.out_degree(a).unwrap() < 3 {
                    g.connect(a.clone(), b.clone());
                }
            }
        }
        let report = is_dangerous(&g, DangerLimits::default()).unwrap();
        assert_eq!(report.dangerous, !g.is_cycle_free());
        if let Some(w) = &report.witness {
            dangerous += 1;
            let sys = realize_candidate(&g, w).unwrap();
            assert_eq!(sys.dependency_graph(false).unwrap(), g);
            assert_eq!(solve_brute(&sys).unwrap().status, SolveStatus::Paradoxical);
        }
    }
    assert!(dangerous > 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Any table assignment realizes a system with exactly the given graph,
    /// and its paradoxicality is decided the same way by the oracle and by
    /// direct evaluation of the tables.
    #[test]
    fn realized_candidates_keep_the_graph(edges in proptest::collection::vec((0..3usize, 0..3usize), 0..6),
                                          seed in any::<u64>()) {
        let vs = names(3);
        let mut g = DiGraph::with_vertices(vs.iter().cloned());
        for (a, b) in edges {
            g.connect(vs[a].clone(), vs[b].clone());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = g.vertices().iter().map(|v| {
            let size = 1 << g.out_degree(v).unwrap();
            (v.clone(), (0..size).map(|_| rng.random_bool(0.5)).collect::<Vec<bool>>())
        }).collect();
        let sys = realize_candidate(&g, &c).unwrap();
        prop_assert_eq!(sys.dependency_graph(false).unwrap(), g.clone());
        // a valuation is acceptable iff every vertex agrees with its table
        let table_ok = |bits: u32| vs.iter().enumerate().all(|(i, v)| {
            let succ = g.succ(v).unwrap();
            let row = succ.iter().fold(0usize, |r, s| {
                let j = vs.iter().position(|x| x == s).unwrap();
                r << 1 | (bits >> j & 1) as usize
            });
            c.table(v).unwrap()[row] == (bits >> i & 1 == 1)
        });
        let direct = (0..8u32).any(table_ok);
        prop_assert_eq!(solve_brute(&sys).unwrap().is_acceptable(), direct);
    }
}
