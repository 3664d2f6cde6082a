use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use sp_equitable::generators::{gen_random_k4_free, gen_random_sp};
use sp_equitable::oracle::oracle_k4_minor;
use sp_equitable::solver::{min_colors, solve, two_part_greedy, MultiplicityVector, SolveOptions};
use sp_equitable::sp_tree::{common_pole_neighbors_independent, is_normal_form, reroot};
use sp_equitable::{decompose, is_equitable, normalize, Coloring, Graph, Vertex};

fn connected_sp(n: u32, seed: u64) -> Option<Graph> {
    let g = gen_random_k4_free(n, 0.0, seed).ok()?;
    g.is_connected().then_some(g)
}

fn any_graph(max_n: u32) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs = (n * n.saturating_sub(1) / 2) as usize;
        proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
            let mut g = Graph::with_vertices(0..n);
            let mut it = bits.into_iter();
            for u in 0..n {
                for v in u + 1..n {
                    if it.next().unwrap() {
                        g.insert_edge(u, v).unwrap();
                    }
                }
            }
            g
        })
    })
}

fn classes(c: &Coloring) -> BTreeSet<BTreeSet<Vertex>> {
    let mut by: BTreeMap<u32, BTreeSet<Vertex>> = BTreeMap::new();
    for (&v, &col) in &c.assignment {
        by.entry(col).or_default().insert(v);
    }
    by.into_values().collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn minor_detector_matches_brute_force(g in any_graph(7)) {
        prop_assert_eq!(g.has_k4_minor(), oracle_k4_minor(&g));
    }

    #[test]
    fn random_sp_is_deterministic_and_minor_free(n in 2u32..80, seed in any::<u64>()) {
        let t = gen_random_sp(n, seed).unwrap();
        prop_assert_eq!(&t, &gen_random_sp(n, seed).unwrap());
        let g = t.realize_source().unwrap();
        prop_assert_eq!(g.vertex_count(), n as usize);
        prop_assert!(!g.has_k4_minor());
    }

    #[test]
    fn decompose_roundtrips(n in 2u32..120, seed in any::<u64>()) {
        let Some(g) = connected_sp(n, seed) else { return Ok(()) };
        let t = decompose(&g).unwrap();
        prop_assert_eq!(t.realize_source().unwrap(), g.clone());
        prop_assert!(t.virtual_edges().unwrap().is_empty());
        for node in t.root.postorder() {
            prop_assert_eq!(node.width + 2, node.vertex_set().len());
        }
    }

    #[test]
    fn normalize_preserves_graph(n in 2u32..120, seed in any::<u64>()) {
        let t = gen_random_sp(n, seed).unwrap();
        let m = normalize(&t).unwrap();
        prop_assert!(is_normal_form(&m));
        prop_assert_eq!(m.poles(), t.poles());
        prop_assert_eq!(m.realize().unwrap(), t.realize().unwrap());
        prop_assert_eq!(normalize(&m).unwrap(), m);
    }

    #[test]
    fn reroot_moves_pole(n in 3u32..60, seed in any::<u64>(), pick in any::<prop::sample::Index>()) {
        let Some(g) = connected_sp(n, seed) else { return Ok(()) };
        let t = decompose(&g).unwrap();
        let vs: Vec<Vertex> = g.vertices().collect();
        let v = vs[pick.index(vs.len())];
        let r = reroot(&t, v).unwrap();
        prop_assert_eq!(r.poles().0, v);
        prop_assert_eq!(r.realize_source().unwrap(), g);
    }

    #[test]
    fn pole_common_neighbors_are_independent(n in 2u32..100, seed in any::<u64>()) {
        let Some(g) = connected_sp(n, seed) else { return Ok(()) };
        let t = normalize(&decompose(&g).unwrap()).unwrap();
        for node in t.root.postorder() {
            let h = g.induced(&node.vertex_set());
            prop_assert!(common_pole_neighbors_independent(&h, node.poles));
        }
    }

    #[test]
    fn sorting_colors_keeps_classes(g in any_graph(12), k in 1u32..6, seed in any::<u64>()) {
        let mut c = Coloring::new(k);
        for (i, v) in g.vertices().enumerate() {
            c.set(v, 1 + ((seed >> (i % 32)) as u32 + i as u32) % k);
        }
        let s = c.sort_colors_increasing();
        prop_assert_eq!(classes(&s), classes(&c));
        let sizes = s.class_sizes();
        prop_assert!(sizes.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn contraction_degree_is_bounded(n in 3u32..40, seed in any::<u64>(), take in 1usize..5) {
        let g = gen_random_k4_free(n, 0.2, seed).unwrap();
        let s: BTreeSet<Vertex> = g.vertices().take(take).collect();
        let (f, c) = g.contract_set(&s).unwrap();
        let boundary: usize = s.iter().map(|&v| g.neighbors(v).filter(|u| !s.contains(u)).count()).sum();
        prop_assert!(f.degree(c) <= boundary);
        prop_assert_eq!(f.vertex_count(), g.vertex_count() - s.len() + 1);
    }

    #[test]
    fn two_part_greedy_respects_multiplicities(
        lambda in proptest::collection::vec(1usize..=2, 1..8),
        split in any::<prop::sample::Index>(),
    ) {
        let m = lambda.len();
        let total: usize = lambda.iter().sum();
        let counts: BTreeMap<u32, usize> = lambda.iter().enumerate().map(|(i, &l)| (i as u32 + 1, l)).collect();
        let mv = MultiplicityVector::from_counts(&counts).unwrap();
        // Both sides hold at most m vertices.
        let lo = total.saturating_sub(m);
        let hi = m.min(total);
        prop_assume!(lo <= hi);
        let n1 = lo + split.index(hi - lo + 1);
        let a1: Vec<Vertex> = (0..n1 as u32).collect();
        let a2: Vec<Vertex> = (n1 as u32..total as u32).collect();
        let placed = two_part_greedy(&a1, &a2, &mv).unwrap();
        prop_assert_eq!(placed.len(), total);
        let mut seen: BTreeMap<u32, usize> = BTreeMap::new();
        let mut side1 = BTreeSet::new();
        let mut side2 = BTreeSet::new();
        for (v, c) in placed {
            *seen.entry(c).or_default() += 1;
            let side = if (v as usize) < n1 { &mut side1 } else { &mut side2 };
            prop_assert!(side.insert(c), "color {} repeated within a side", c);
        }
        prop_assert_eq!(seen, counts);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn solver_output_is_equitable(n in 1u32..60, seed in any::<u64>(), drop in 0.0f64..0.3, extra in 0u32..3) {
        let g = gen_random_k4_free(n, drop, seed).unwrap();
        let k = min_colors(&g) + extra;
        let sol = solve(&g, k, SolveOptions::default()).unwrap();
        prop_assert!(is_equitable(&g, &sol.coloring).unwrap());
        prop_assert!(sol.trace.iter().all(|r| r.conserved()));
        prop_assert!(sol.trace.iter().all(|r| r.fresh.iter().all(|v| !r.region.contains(v))));
        // A step is recorded after the step on its smaller graph.
        for w in sol.trace.windows(2) {
            if w[0].depth == w[1].depth + 1 {
                prop_assert!(w[0].n < w[1].n);
            }
        }
        prop_assert!(sol.trace.iter().all(|r| r.n <= g.vertex_count()));
        let again = solve(&g, k, SolveOptions::default()).unwrap();
        prop_assert_eq!(again.coloring, sol.coloring);
        prop_assert_eq!(again.trace, sol.trace);
    }
}
