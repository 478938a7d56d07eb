mod common;

use dpcolor::config::Configuration;
use dpcolor::constructible::{build_c, build_k, build_m, is_constructible, merge, Twist};
use dpcolor::graph::Graph;
use dpcolor::Cover;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use std::collections::BTreeMap;

/// Colourability straight from the definition: some transversal whose
/// induced subgraph of `H` is strictly f-degenerate.
fn oracle_colorable(c: &Configuration) -> bool {
    let cover = c.cover();
    let adj = common::h_masks(cover);
    let flat_f: Vec<u32> = c.f_values().iter().flatten().copied().collect();
    common::any_transversal(cover, |_, set| common::strictly_f_degenerate_by_subsets(&adj, set, &flat_f))
}

fn random_matching(rng: &mut StdRng, a: usize, b: usize) -> Vec<(usize, usize)> {
    let mut right: Vec<usize> = (0..b).collect();
    right.shuffle(rng);
    (0..a).zip(right).filter(|_| rng.gen_bool(0.7)).collect()
}

fn random_config(seed: u64, max_n: usize) -> Configuration {
    let mut rng = StdRng::seed_from_u64(seed);
    let n = rng.gen_range(1..=max_n);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(0.5) {
                edges.push((u, v));
            }
        }
    }
    let g = Graph::from_edges(n, &edges).unwrap();
    let fibers: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=3)).collect();
    let mut matchings = BTreeMap::new();
    for &(u, v) in &edges {
        matchings.insert((u, v), random_matching(&mut rng, fibers[u], fibers[v]));
    }
    let cover = Cover::new(g, fibers.clone(), matchings).unwrap();
    let f = fibers.iter().map(|&s| (0..s).map(|_| rng.gen_range(0..=2)).collect()).collect();
    Configuration::new(cover, f).unwrap()
}

fn random_block(rng: &mut StdRng, s: usize) -> Configuration {
    match rng.gen_range(0..3) {
        0 => {
            let g = [Graph::complete(2), Graph::complete(3), Graph::cycle(4), diamond()]
                .choose(rng)
                .unwrap()
                .clone();
            let embedding: Vec<usize> = (0..g.order()).map(|_| rng.gen_range(0..s)).collect();
            build_m(&g, s, &embedding).unwrap()
        }
        1 => {
            let n = rng.gen_range(1..=4);
            let mut t = Vec::new();
            if n > 1 {
                t = vec![1u32; rng.gen_range(1..=s.min(n - 1))];
                for _ in t.len()..n - 1 {
                    let i = rng.gen_range(0..t.len());
                    t[i] += 1;
                }
            }
            build_k(n, &t, s).unwrap()
        }
        _ => {
            let n = rng.gen_range(3..=5);
            let twist = if n % 2 == 1 { Twist::Odd } else { Twist::Even };
            build_c(n, s.max(2), twist).unwrap()
        }
    }
}

fn random_merged(seed: u64) -> Configuration {
    let mut rng = StdRng::seed_from_u64(seed);
    let s = rng.gen_range(2..=3);
    let mut acc = random_block(&mut rng, s);
    for _ in 0..rng.gen_range(0..=2) {
        let next = random_block(&mut rng, s);
        if acc.base().order() + next.base().order() > 10 {
            break;
        }
        let v1 = rng.gen_range(0..acc.base().order());
        let v2 = rng.gen_range(0..next.base().order());
        let (s1, s2) = (acc.cover().fiber_size(v1), next.cover().fiber_size(v2));
        if s1 != s2 {
            continue;
        }
        let mut bij: Vec<usize> = (0..s1).collect();
        bij.shuffle(&mut rng);
        acc = merge(&acc, v1, &next, v2, &bij).unwrap();
    }
    acc
}

/// `K_4` minus an edge.
fn diamond() -> Graph {
    Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn engines_agree_with_definition(seed in any::<u64>()) {
        let c = random_config(seed, 6);
        let oracle = oracle_colorable(&c);
        let t = c.solve_cross_checked().unwrap();
        prop_assert_eq!(t.is_some(), oracle);
        if let Some(t) = t {
            prop_assert!(c.is_solution(&t));
        }
    }

    #[test]
    fn merged_blocks_are_uncolorable_and_recognized(seed in any::<u64>()) {
        let c = random_merged(seed);
        prop_assert!(c.is_degree_feasible());
        prop_assert!(c.solve().is_none());
        if c.cover().fibers().iter().sum::<usize>() <= 20 {
            prop_assert!(!oracle_colorable(&c));
        }
        let cert = is_constructible(&c);
        prop_assert!(cert.is_some());
        prop_assert!(cert.unwrap().verify(&c));
    }

    #[test]
    fn verdicts_survive_relabelling(seed in any::<u64>(), perm_seed in any::<u64>()) {
        let c = if seed % 2 == 0 { random_merged(seed) } else { random_config(seed, 6) };
        let mut perm: Vec<usize> = (0..c.base().order()).collect();
        perm.shuffle(&mut StdRng::seed_from_u64(perm_seed));
        let d = c.relabel(&perm);
        prop_assert_eq!(c.solve().is_some(), d.solve().is_some());
        prop_assert_eq!(is_constructible(&c).is_some(), is_constructible(&d).is_some());
        for v in 0..c.base().order() {
            prop_assert_eq!(c.f_fiber(v), d.f_fiber(perm[v]));
        }
    }

    #[test]
    fn json_round_trip(seed in any::<u64>()) {
        let c = random_config(seed, 6);
        let text = serde_json::to_string(&c).unwrap();
        prop_assert_eq!(Configuration::from_json(&text).unwrap(), c);
    }
}
