//! The recursive reduce-and-extend coloring engine.
//!
//! Each level decomposes and normalizes the current graph, scans the tree for
//! a reducible site, builds the smaller graph `F` prescribed by the matching
//! reduction, colors `F` recursively with the same `k`, renames its colors so
//! class sizes increase with the color index, and extends the coloring over
//! the site. Every extension adds `t` copies of `1..=k` plus `1..=r` to the
//! classes, which keeps an increasingly ordered equitable coloring equitable.

pub mod dispatch;
pub mod extend;
pub mod greedy;
pub mod site;
pub mod trace;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{is_equitable, Color, Coloring, Graph, Vertex};
use crate::sp_tree::{common_pole_neighbors_independent, decompose, normalize, GadgetKind};

pub use dispatch::{applicable_steps, check_admissible, dispatch, Inadmissible, LemmaTag, ReductionStep};
pub use extend::{exhaustive_extend, literal_extend, target_multiset, verify_extension, Multiset};
pub use greedy::{two_part_greedy, MultiplicityVector};
pub use site::{candidate_sites, find_reduction_site, JoinKind, ReductionSite};
pub use trace::TraceRecord;

/// Graphs above this size are solved on a thread with a large stack.
const DEEP_RECURSION: usize = 128;
const STACK_BYTES: usize = 512 << 20;

/// `ceil((Δ + 3) / 2)`, the smallest `k` the solver accepts.
pub fn min_colors(g: &Graph) -> u32 {
    (g.max_degree() as u32 + 4) / 2
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    /// Check the per-site structural lemmas and record them in the trace.
    pub check_invariants: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            check_invariants: true,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveStats {
    pub steps: usize,
    pub candidates_tried: usize,
    pub fallback_activations: usize,
    /// Reductions rejected because `F` would exceed degree `2k - 3`.
    pub degree_diagnostics: usize,
    pub pole_neighbor_violations: usize,
    pub forest_violations: usize,
    pub conservation_failures: usize,
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub coloring: Coloring,
    pub trace: Vec<TraceRecord>,
    pub stats: SolveStats,
}

/// A proper equitable `k`-coloring of `g`.
pub fn equitable_color(g: &Graph, k: u32) -> Result<Coloring> {
    Ok(solve(g, k, SolveOptions::default())?.coloring)
}

/// Checks the hypotheses and runs the solver, returning the trace as well.
pub fn solve(g: &Graph, k: u32, opts: SolveOptions) -> Result<Solution> {
    solve_traced(g, k, opts).map_err(|(e, _)| e)
}

/// Like [`solve`], but a failure also returns the steps completed so far.
pub fn solve_traced(
    g: &Graph,
    k: u32,
    opts: SolveOptions,
) -> std::result::Result<Solution, (Error, Vec<TraceRecord>)> {
    let bound = min_colors(g);
    if k < bound {
        return Err((
            Error::KBelowBound {
                k,
                bound,
                max_degree: g.max_degree(),
            },
            Vec::new(),
        ));
    }
    if g.has_k4_minor() {
        return Err((Error::K4Minor, Vec::new()));
    }
    let run = || {
        let mut ctx = Ctx {
            k: k as usize,
            opts,
            trace: Vec::new(),
            stats: SolveStats::default(),
        };
        match ctx.solve_rec(g, 0) {
            Ok(coloring) => Ok(Solution {
                coloring,
                trace: ctx.trace,
                stats: ctx.stats,
            }),
            Err(e) => Err((e, ctx.trace)),
        }
    };
    let sol = if g.vertex_count() > DEEP_RECURSION {
        std::thread::scope(|s| {
            let handle = std::thread::Builder::new()
                .stack_size(STACK_BYTES)
                .spawn_scoped(s, run)
                .map_err(|e| (Error::Invariant(format!("cannot spawn solver thread: {e}")), Vec::new()))?;
            handle
                .join()
                .map_err(|_| (Error::Invariant("solver thread panicked".into()), Vec::new()))?
        })?
    } else {
        run()?
    };
    match is_equitable(g, &sol.coloring) {
        Ok(true) => Ok(sol),
        Ok(false) => Err((Error::Invariant("final coloring is not equitable".into()), sol.trace)),
        Err(e) => Err((e, sol.trace)),
    }
}

struct Ctx {
    k: usize,
    opts: SolveOptions,
    trace: Vec<TraceRecord>,
    stats: SolveStats,
}

impl Ctx {
    fn solve_rec(&mut self, g: &Graph, depth: usize) -> Result<Coloring> {
        let k = self.k;
        let n = g.vertex_count();
        if n <= k {
            let mut col = Coloring::new(k as u32);
            for (i, v) in g.vertices().enumerate() {
                col.set(v, (k - i) as Color);
            }
            return Ok(col);
        }
        if k <= 2 {
            return Ok(color_matching(g, k as u32));
        }
        if !g.is_connected() {
            let h = bridge(g)?;
            let col = self.solve_rec(&h, depth)?;
            return Ok(col.restrict(g));
        }
        let tree = normalize(&decompose(g)?)?;
        for site in candidate_sites(&tree, g, k) {
            for step in applicable_steps(g, &site, k)? {
                self.stats.candidates_tried += 1;
                match check_admissible(g, &step, k) {
                    Ok(()) => {}
                    Err(Inadmissible::Degree { .. }) => {
                        self.stats.degree_diagnostics += 1;
                        continue;
                    }
                    Err(_) => continue,
                }
                let alpha = self.solve_rec(&step.f, depth + 1)?.sort_colors_increasing();
                if let Some(col) = self.extend(g, &site, &step, &alpha, depth)? {
                    return Ok(col);
                }
            }
        }
        Err(Error::Invariant(format!(
            "no admissible reduction on a graph with {n} vertices at k = {k}"
        )))
    }

    fn extend(
        &mut self,
        g: &Graph,
        site: &ReductionSite,
        step: &ReductionStep,
        alpha: &Coloring,
        depth: usize,
    ) -> Result<Option<Coloring>> {
        let target = target_multiset(step, alpha, self.k)?;
        let literal = literal_extend(g, step, alpha, &target)
            .ok()
            .filter(|c| verify_extension(g, c, &step.region, &target));
        let fallback = literal.is_none();
        let col = match literal {
            Some(c) => c,
            None => {
                self.stats.fallback_activations += 1;
                let base = extend::base_coloring(g, step, alpha);
                match exhaustive_extend(g, &base, &step.region, &target) {
                    Some(c) => c,
                    None => return Ok(None),
                }
            }
        };
        let mut released = Multiset::new();
        for v in step.fresh.iter().copied().chain(step.recolored()) {
            *released.entry(alpha.get(v).ok_or(Error::PartialColoring(v))?).or_default() += 1;
        }
        let (pni, forest) = if self.opts.check_invariants {
            site_invariants(g, site, self.k)
        } else {
            (true, None)
        };
        let rec = TraceRecord {
            depth,
            n: g.vertex_count(),
            k: self.k,
            tag: step.tag,
            poles: (step.a, step.b),
            far_pole: step.c,
            width: step.width,
            mu: step.mu,
            gadget: site.gadget,
            removed: step.removed.clone(),
            fresh: step.fresh.clone(),
            added_edges: step.added_edges.clone(),
            region: step.region.clone(),
            target: target.into_iter().collect(),
            released: released.into_iter().collect(),
            profile_f: alpha.class_sizes(),
            profile_g: col.class_sizes(),
            fallback,
            pole_neighbors_independent: pni,
            inner_forest: forest,
        };
        self.stats.steps += 1;
        self.stats.pole_neighbor_violations += usize::from(!pni);
        self.stats.forest_violations += usize::from(forest == Some(false));
        self.stats.conservation_failures += usize::from(!rec.conserved());
        self.trace.push(rec);
        Ok(Some(col))
    }
}

/// Independence of the poles' common neighbors on the site, and the forest
/// property of every piece of width at most `k` whose inner vertices are
/// dominated by a pole (or that is a primed gadget).
fn site_invariants(g: &Graph, site: &ReductionSite, k: usize) -> (bool, Option<bool>) {
    let h = g.induced(&site.vertex_set());
    let pni = common_pole_neighbors_independent(&h, site.poles);
    let mut pieces: Vec<(Vec<Vertex>, (Vertex, Vertex))> = Vec::new();
    let (a, b) = site.poles;
    pieces.push((site.inner.iter().copied().collect(), site.poles));
    match (site.join, site.middle, &site.parts) {
        (JoinKind::Series, Some(m), Some((p1, p2))) => {
            pieces.push((p1.iter().copied().filter(|&x| x != m).collect(), (a, m)));
            pieces.push((p2.iter().copied().filter(|&x| x != m).collect(), (m, b)));
        }
        (JoinKind::Parallel, _, _) => {
            pieces.extend(site.components.iter().map(|c| (c.clone(), site.poles)));
        }
        _ => {}
    }
    let mut verdict = None;
    for (inner, (p, q)) in pieces {
        if inner.is_empty() || inner.len() > k {
            continue;
        }
        let set: BTreeSet<Vertex> = inner.iter().copied().collect();
        let dominated = [p, q].iter().any(|&x| inner.iter().all(|&y| g.has_edge(x, y)));
        let mut with_poles = set.clone();
        with_poles.extend([p, q]);
        let primed = matches!(
            crate::sp_tree::classify_gadget(&g.induced(&with_poles), (p, q)),
            GadgetKind::CrystalPrime(_) | GadgetKind::DiamondPrime(_)
        );
        if dominated || primed {
            let ok = g.induced(&set).is_forest();
            verdict = Some(verdict.unwrap_or(true) && ok);
        }
    }
    (pni, verdict)
}

/// Direct coloring when `Δ <= 1`: each edge takes both colors and isolated
/// vertices go to the smaller class.
fn color_matching(g: &Graph, k: u32) -> Coloring {
    let mut col = Coloring::new(k);
    let mut sizes = vec![0usize; k as usize];
    for (u, v) in g.edges() {
        col.set(u, 1);
        col.set(v, 2.min(k));
        sizes[0] += 1;
        sizes[(2.min(k) - 1) as usize] += 1;
    }
    for v in g.vertices() {
        if col.get(v).is_none() {
            let (i, _) = sizes.iter().enumerate().min_by_key(|(_, &s)| s).unwrap();
            col.set(v, i as Color + 1);
            sizes[i] += 1;
        }
    }
    col
}

/// Joins consecutive components by bridges between low-degree vertices.
/// Bridges create no K4 minor, and the maximum degree stays at most
/// `max(Δ, 3)` because K4-minor-free components always offer vertices of
/// degree at most 2.
fn bridge(g: &Graph) -> Result<Graph> {
    let comps = g.components();
    let mut h = g.clone();
    let lowest = |h: &Graph, comp: &[Vertex]| *comp.iter().min_by_key(|&&v| (h.degree(v), v)).unwrap();
    for pair in comps.windows(2) {
        let x = lowest(&h, &pair[0]);
        let y = lowest(&h, &pair[1]);
        h.insert_edge(x, y)?;
    }
    if h.max_degree() > g.max_degree().max(3) {
        return Err(Error::Invariant("bridging raised the maximum degree".into()));
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::oracle_equitable;

    fn star(leaves: u32) -> Graph {
        Graph::from_edges((1..=leaves).map(|i| (0, i))).unwrap()
    }

    #[test]
    fn bound() {
        assert_eq!(min_colors(&star(5)), 4);
        assert_eq!(min_colors(&star(3)), 3);
        assert_eq!(min_colors(&Graph::with_vertices([0])), 2);
        assert_eq!(min_colors(&Graph::from_edges([(0, 1)]).unwrap()), 2);
    }

    #[test]
    fn triangle_uses_each_color_once() {
        let g = Graph::from_edges([(0, 1), (1, 2), (2, 0)]).unwrap();
        let c = equitable_color(&g, 3).unwrap();
        assert_eq!(c.class_sizes(), vec![1, 1, 1]);
    }

    #[test]
    fn star_five_at_four() {
        let g = star(5);
        let c = equitable_color(&g, 4).unwrap();
        assert!(is_equitable(&g, &c).unwrap());
        let center = c.get(0).unwrap();
        assert_eq!(c.class_sizes()[center as usize - 1], 1);
        let mut sizes = c.class_sizes();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 1, 2, 2]);
        assert!(!oracle_equitable(&g, 3).feasible);
    }

    #[test]
    fn crystal_two_at_three() {
        let g = Graph::from_edges([(0, 1), (0, 2), (2, 1), (0, 3), (3, 1)]).unwrap();
        let c = equitable_color(&g, 3).unwrap();
        assert!(is_equitable(&g, &c).unwrap());
        assert_eq!(c.get(2), c.get(3));
        assert_ne!(c.get(0), c.get(1));
    }

    #[test]
    fn rejects_small_k_and_minors() {
        let err = equitable_color(&star(5), 3).unwrap_err();
        assert!(matches!(err, Error::KBelowBound { bound: 4, .. }));
        let k4 = Graph::from_edges([(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert!(matches!(equitable_color(&k4, 5), Err(Error::K4Minor)));
    }

    #[test]
    fn disconnected_and_matchings() {
        let g = Graph::from_edges([(0, 1), (2, 3), (4, 5), (6, 7), (7, 8)]).unwrap();
        for k in 3..6 {
            let c = equitable_color(&g, k).unwrap();
            assert!(is_equitable(&g, &c).unwrap());
        }
        let mut m = Graph::from_edges([(0, 1), (2, 3)]).unwrap();
        m.add_vertex(9);
        let c = equitable_color(&m, 2).unwrap();
        assert!(is_equitable(&m, &c).unwrap());
    }

    #[test]
    fn long_path() {
        let g = Graph::from_edges((0..40).map(|i| (i, i + 1))).unwrap();
        let sol = solve(&g, 3, SolveOptions::default()).unwrap();
        assert!(is_equitable(&g, &sol.coloring).unwrap());
        assert!(sol.trace.iter().all(|r| r.conserved()));
        assert_eq!(sol.stats.fallback_activations, 0);
    }
}
