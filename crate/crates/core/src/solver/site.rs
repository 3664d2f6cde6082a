//! Reducible sites in a normalized tree.
//!
//! The scan walks the tree bottom-up. A frontier node has width at least
//! `k - 1` while each of its children has width at most `k - 2`; at such a
//! node children are accumulated (any subset for P-nodes, consecutive runs
//! for S-nodes) until the join first reaches width `k - 1`, so each part of
//! the join has width at most `k - 2` and the join at most `2k - 3`.
//! Several candidates are produced per frontier node so the solver can move
//! on when a reduction turns out to be inadmissible.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::sp_tree::{classify_gadget, GadgetKind, NodeKind, SpNode, SpTree};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JoinKind {
    Parallel,
    Series,
    Atomic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionSite {
    /// Outer poles. For a series site these are the two ends of the run.
    pub poles: (Vertex, Vertex),
    pub inner: BTreeSet<Vertex>,
    pub width: usize,
    /// `width - k`; may be negative.
    pub mu: i64,
    pub gadget: GadgetKind,
    pub join: JoinKind,
    /// Inner vertex sets of the children of a parallel site.
    pub components: Vec<Vec<Vertex>>,
    /// Inner vertices of the two joined parts, when the site is a join.
    pub parts: Option<(Vec<Vertex>, Vec<Vertex>)>,
    /// Shared pole of a series site.
    pub middle: Option<Vertex>,
}

impl ReductionSite {
    pub fn vertex_set(&self) -> BTreeSet<Vertex> {
        let mut s = self.inner.clone();
        s.insert(self.poles.0);
        s.insert(self.poles.1);
        s
    }

    fn new(
        g: &Graph,
        k: usize,
        poles: (Vertex, Vertex),
        inner: BTreeSet<Vertex>,
        join: JoinKind,
    ) -> Self {
        let width = inner.len();
        let mut vs = inner.clone();
        vs.insert(poles.0);
        vs.insert(poles.1);
        let gadget = classify_gadget(&g.induced(&vs), poles);
        ReductionSite {
            poles,
            inner,
            width,
            mu: width as i64 - k as i64,
            gadget,
            join,
            components: Vec::new(),
            parts: None,
            middle: None,
        }
    }

    fn atomic(g: &Graph, k: usize, node: &SpNode) -> Self {
        Self::new(g, k, node.poles, node.inner_vertices().into_iter().collect(), JoinKind::Atomic)
    }

    fn parallel(g: &Graph, k: usize, poles: (Vertex, Vertex), comps: Vec<Vec<Vertex>>) -> Self {
        let inner = comps.iter().flatten().copied().collect();
        let mut s = Self::new(g, k, poles, inner, JoinKind::Parallel);
        if comps.len() >= 2 {
            let (last, first) = comps.split_last().unwrap();
            s.parts = Some((first.concat(), last.clone()));
        }
        s.components = comps;
        s
    }

    /// Drops components with at most `μ + 1` vertices while `μ >= 1`.
    fn trimmed(mut self, g: &Graph, k: usize) -> Self {
        loop {
            let mu = self.width as i64 - k as i64;
            if mu < 1 {
                return self;
            }
            let small = self
                .components
                .iter()
                .enumerate()
                .filter(|(_, c)| c.len() as i64 <= mu + 1)
                .min_by_key(|(_, c)| c.len())
                .map(|(i, _)| i);
            let Some(i) = small else { return self };
            let mut comps = self.components.clone();
            comps.remove(i);
            self = Self::parallel(g, k, self.poles, comps);
        }
    }
}

fn is_spoke(g: &Graph, (a, b): (Vertex, Vertex), node: &SpNode) -> bool {
    if node.width != 1 {
        return false;
    }
    let x = node.inner_vertices()[0];
    g.degree(x) == 2 && g.has_edge(x, a) && g.has_edge(x, b)
}

fn is_claw(g: &Graph, (a, b): (Vertex, Vertex), node: &SpNode) -> bool {
    if node.width != 2 {
        return false;
    }
    let inner = node.inner_vertices();
    inner.iter().any(|&x| {
        let p = if inner[0] == x { inner[1] } else { inner[0] };
        g.degree(x) == 3
            && g.has_edge(x, a)
            && g.has_edge(x, b)
            && g.has_edge(x, p)
            && g.degree(p) == 1
    })
}

fn parallel_candidates(g: &Graph, k: usize, node: &SpNode, out: &mut Vec<ReductionSite>) {
    let poles = node.poles;
    let kids: Vec<&SpNode> = node.children.iter().filter(|c| c.width > 0).collect();
    let spokes: Vec<&SpNode> = kids.iter().copied().filter(|c| is_spoke(g, poles, c)).collect();
    let inner_of = |c: &SpNode| c.inner_vertices();

    // k - 1 two-edge paths: a diamond or crystal of width k - 1
    if spokes.len() >= k - 1 {
        let comps = spokes[..k - 1].iter().map(|c| inner_of(c)).collect();
        out.push(ReductionSite::parallel(g, k, poles, comps));
    }
    // a claw with k - 2 two-edge paths: D'(k - 2) or C'(k - 2)
    if k >= 3 && spokes.len() >= k - 2 {
        if let Some(claw) = kids.iter().find(|c| is_claw(g, poles, c)) {
            let mut comps = vec![inner_of(claw)];
            comps.extend(spokes[..k - 2].iter().map(|c| inner_of(c)));
            out.push(ReductionSite::parallel(g, k, poles, comps));
        }
    }
    // child order as given, widest first, narrowest first
    for order in 0..3 {
        let mut seq = kids.clone();
        match order {
            1 => seq.sort_by_key(|c| std::cmp::Reverse(c.width)),
            2 => seq.sort_by_key(|c| c.width),
            _ => {}
        }
        let mut acc: Vec<Vec<Vertex>> = Vec::new();
        let mut width = 0;
        for c in seq {
            width += c.width;
            acc.push(inner_of(c));
            if width + 1 >= k {
                break;
            }
        }
        if width + 1 >= k && acc.len() >= 2 {
            let site = ReductionSite::parallel(g, k, poles, acc).trimmed(g, k);
            if !out.iter().any(|s| s.inner == site.inner) {
                out.push(site);
            }
        }
    }
}

fn series_candidates(g: &Graph, k: usize, node: &SpNode, out: &mut Vec<ReductionSite>) {
    let ch = &node.children;
    // inner vertices of the run ch[i..=j], junction poles included
    let run_inner = |i: usize, j: usize| -> Vec<Vertex> {
        let mut v = Vec::new();
        for (t, c) in ch[i..=j].iter().enumerate() {
            if t > 0 {
                v.push(c.poles.0);
            }
            v.extend(c.inner_vertices());
        }
        v.sort_unstable();
        v
    };
    let run_width = |i: usize, j: usize| ch[i..=j].iter().map(|c| c.width).sum::<usize>() + (j - i);
    for i in 0..ch.len() {
        let Some(j) = (i + 1..ch.len()).find(|&j| run_width(i, j) + 1 >= k) else {
            continue;
        };
        // the run minus its last child, or minus its first child, must be small
        let splits = [(j - 1, j), (i, i + 1)];
        for (split_end, right_start) in splits {
            let (lw, rw) = (run_width(i, split_end), run_width(right_start, j));
            if lw + 2 > k || rw + 2 > k {
                continue;
            }
            let inner = run_inner(i, j).into_iter().collect();
            let poles = (ch[i].poles.0, ch[j].poles.1);
            let mut s = ReductionSite::new(g, k, poles, inner, JoinKind::Series);
            s.middle = Some(ch[right_start].poles.0);
            s.parts = Some((run_inner(i, split_end), run_inner(right_start, j)));
            if !out.iter().any(|o| o.inner == s.inner && o.middle == s.middle) {
                out.push(s);
            }
        }
    }
}

/// Candidate sites in scan order: for each frontier node, the gadget
/// sub-selections, then the accumulated joins. The small children of the
/// frontier nodes follow at the end as atomic sites.
pub fn candidate_sites(t: &SpTree, g: &Graph, k: usize) -> Vec<ReductionSite> {
    let mut out = Vec::new();
    let mut atomic = Vec::new();
    for node in t.root.postorder() {
        if node.is_leaf() || node.width + 1 < k || node.children.iter().any(|c| c.width + 2 > k) {
            continue;
        }
        match node.kind {
            NodeKind::Parallel => parallel_candidates(g, k, node, &mut out),
            NodeKind::Series => series_candidates(g, k, node, &mut out),
            NodeKind::Leaf { .. } => {}
        }
        for c in node.children.iter().filter(|c| c.width > 0 && !c.is_leaf()) {
            atomic.push(ReductionSite::atomic(g, k, c));
        }
    }
    out.extend(atomic);
    out
}

/// The first accumulated join of the bottom-up scan.
pub fn find_reduction_site(t: &SpTree, g: &Graph, k: usize) -> Result<ReductionSite> {
    if g.vertex_count() <= k {
        return Err(Error::Invalid(format!(
            "no reduction needed: {} vertices and k = {k}",
            g.vertex_count()
        )));
    }
    candidate_sites(t, g, k)
        .into_iter()
        .find(|s| s.join != JoinKind::Atomic)
        .ok_or_else(|| Error::Invariant("no construction subtree of width >= k - 1".into()))
}
