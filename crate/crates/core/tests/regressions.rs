//! Random instances that once tripped the solver.

use sp_equitable::generators::gen_random_k4_free;
use sp_equitable::solver::{min_colors, solve, SolveOptions};
use sp_equitable::is_equitable;

fn solves_without_fallback(cases: &[(u32, u64)]) {
    for &(n, seed) in cases {
        let g = gen_random_k4_free(n, 0.1, seed).unwrap();
        let k = min_colors(&g);
        let sol = solve(&g, k, SolveOptions::default()).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
        assert!(is_equitable(&g, &sol.coloring).unwrap());
        assert_eq!(sol.stats.fallback_activations, 0, "seed {seed}");
        for r in &sol.trace {
            assert!(r.fresh.iter().all(|v| !r.region.contains(v)), "seed {seed}: fresh vertex reuses a region id");
        }
    }
}

/// A site pole of degree `2k - 3` with no neighbor among the inner vertices
/// left no admissible reduction.
#[test]
fn detached_pole_at_full_degree() {
    solves_without_fallback(&[(195, 2664), (57, 2783), (25, 4134), (25, 7153), (30, 9017)]);
}

/// Fresh parallel vertices took the id of a deleted inner vertex, which
/// counted its color twice in the extension target.
#[test]
fn fresh_vertices_avoid_region_ids() {
    solves_without_fallback(&[(29, 3515), (56, 4103), (58, 4705), (63, 6536), (224, 1167), (395, 3166)]);
}
