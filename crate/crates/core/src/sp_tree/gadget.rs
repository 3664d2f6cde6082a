//! Recognition of the diamond and crystal families.
//!
//! `D(i)`: `i` two-edge paths between the poles. `C(i)`: the same plus the
//! pole edge (`C(0)` is a single edge). `D'(i)`: a claw whose center is
//! adjacent to both poles and to one pendant inner vertex, in parallel with
//! `i - 1` two-edge paths. `C'(i)`: `D'(i)` plus the pole edge.

use serde::{Deserialize, Serialize};

use crate::graph::{Graph, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GadgetKind {
    Crystal(usize),
    Diamond(usize),
    CrystalPrime(usize),
    DiamondPrime(usize),
    Other,
}

/// Exact classification of the two-terminal graph `h` with the given poles.
pub fn classify_gadget(h: &Graph, (a, b): (Vertex, Vertex)) -> GadgetKind {
    if a == b || !h.contains(a) || !h.contains(b) {
        return GadgetKind::Other;
    }
    let width = h.vertex_count() - 2;
    let has_ab = h.has_edge(a, b);
    let inner: Vec<Vertex> = h.vertices().filter(|&v| v != a && v != b).collect();
    let is_spoke = |v: Vertex| h.degree(v) == 2 && h.has_edge(v, a) && h.has_edge(v, b);

    if inner.iter().all(|&v| is_spoke(v)) {
        return match (has_ab, width) {
            (true, w) => GadgetKind::Crystal(w),
            (false, 0) => GadgetKind::Other,
            (false, w) => GadgetKind::Diamond(w),
        };
    }
    if width < 2 {
        return GadgetKind::Other;
    }
    // exactly one pendant inner vertex hanging from a claw center
    let pendants: Vec<Vertex> = inner.iter().copied().filter(|&v| h.degree(v) == 1).collect();
    let [p] = pendants[..] else {
        return GadgetKind::Other;
    };
    let center = *h.neighbor_set(p).iter().next().unwrap();
    if center == a || center == b {
        return GadgetKind::Other;
    }
    let claw = h.degree(center) == 3 && h.has_edge(center, a) && h.has_edge(center, b);
    let rest_ok = inner
        .iter()
        .filter(|&&v| v != p && v != center)
        .all(|&v| is_spoke(v));
    if !claw || !rest_ok {
        return GadgetKind::Other;
    }
    if has_ab {
        GadgetKind::CrystalPrime(width - 1)
    } else {
        GadgetKind::DiamondPrime(width - 1)
    }
}

/// True iff the common neighbors of the two poles are pairwise non-adjacent.
pub fn common_pole_neighbors_independent(h: &Graph, (a, b): (Vertex, Vertex)) -> bool {
    let common: Vec<Vertex> = h
        .neighbor_set(a)
        .intersection(h.neighbor_set(b))
        .copied()
        .collect();
    common
        .iter()
        .enumerate()
        .all(|(i, &x)| common[i + 1..].iter().all(|&y| !h.has_edge(x, y)))
}
