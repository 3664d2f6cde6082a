//! Brute-force ground truth, sharing no code with the solver or the
//! reduction-based minor test.

use std::collections::BTreeMap;

use crate::graph::{Coloring, Graph, Vertex};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    pub feasible: bool,
    pub witness: Option<Coloring>,
    pub nodes_explored: u64,
}

struct Search<'a> {
    order: Vec<Vertex>,
    index: BTreeMap<Vertex, usize>,
    g: &'a Graph,
    k: usize,
    /// base class size and the number of classes allowed one more
    base: usize,
    big: usize,
    counts: Vec<usize>,
    colors: Vec<usize>,
    nodes: u64,
}

impl Search<'_> {
    fn go(&mut self, pos: usize) -> bool {
        self.nodes += 1;
        if pos == self.order.len() {
            return true;
        }
        let remaining = self.order.len() - pos;
        let deficit: usize = self.counts.iter().map(|&c| self.base.saturating_sub(c)).sum();
        if deficit > remaining {
            return false;
        }
        let v = self.order[pos];
        let used = self.counts.iter().take_while(|&&c| c > 0).count();
        let full = self.counts.iter().filter(|&&c| c > self.base).count();
        for col in 0..self.k.min(used + 1) {
            let c = self.counts[col];
            if c > self.base || (c == self.base && full >= self.big) {
                continue;
            }
            let clash = self.g.neighbors(v).any(|u| {
                let i = self.index[&u];
                i < pos && self.colors[i] == col
            });
            if clash {
                continue;
            }
            self.colors[pos] = col;
            self.counts[col] += 1;
            if self.go(pos + 1) {
                return true;
            }
            self.counts[col] -= 1;
        }
        false
    }
}

/// Exact decision: does `g` have a proper coloring with `k` classes whose
/// sizes differ by at most one?
pub fn oracle_equitable(g: &Graph, k: u32) -> OracleResult {
    let n = g.vertex_count();
    let ku = k as usize;
    if ku == 0 {
        return OracleResult {
            feasible: n == 0,
            witness: (n == 0).then(|| Coloring::new(0)),
            nodes_explored: 0,
        };
    }
    let mut order: Vec<Vertex> = g.vertices().collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    let index = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut s = Search {
        order,
        index,
        g,
        k: ku,
        base: n / ku,
        big: n % ku,
        counts: vec![0; ku],
        colors: vec![0; n],
        nodes: 0,
    };
    // color classes are introduced in order, so counts stay a prefix of
    // nonzero entries until the last class is opened
    let feasible = s.go(0);
    let witness = feasible.then(|| Coloring {
        k,
        assignment: s
            .order
            .iter()
            .zip(&s.colors)
            .map(|(&v, &c)| (v, c as u32 + 1))
            .collect(),
    });
    OracleResult {
        feasible,
        witness,
        nodes_explored: s.nodes,
    }
}

/// Exhaustive search for four disjoint connected vertex sets that are
/// pairwise joined by an edge. Intended for graphs with at most a dozen
/// vertices.
pub fn oracle_k4_minor(g: &Graph) -> bool {
    let verts: Vec<Vertex> = g.vertices().collect();
    let n = verts.len();
    assert!(n <= 20, "oracle_k4_minor is exponential in |V|");
    let pos: BTreeMap<Vertex, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let nbr: Vec<u32> = verts
        .iter()
        .map(|&v| g.neighbors(v).fold(0u32, |m, u| m | 1 << pos[&u]))
        .collect();
    let neigh_of = |set: u32| -> u32 {
        let mut m = 0;
        let mut s = set;
        while s != 0 {
            let i = s.trailing_zeros() as usize;
            m |= nbr[i];
            s &= s - 1;
        }
        m
    };
    // connected subsets by flood fill inside the mask
    let connected = |set: u32| -> bool {
        let mut reach = set & set.wrapping_neg();
        loop {
            let next = (reach | neigh_of(reach)) & set;
            if next == reach {
                return reach == set;
            }
            reach = next;
        }
    };
    let mut sets: Vec<(u32, u32)> = (1u32..(1u32 << n))
        .filter(|&s| connected(s))
        .map(|s| (s, neigh_of(s)))
        .collect();
    // order by lowest member so each model is found with S1 < S2 < S3 < S4
    sets.sort_by_key(|&(s, _)| (s.trailing_zeros(), s));
    let low = |s: u32| s.trailing_zeros();
    for (i, &(s1, n1)) in sets.iter().enumerate() {
        for (j, &(s2, n2)) in sets.iter().enumerate().skip(i + 1) {
            if low(s2) <= low(s1) || s2 & s1 != 0 || n1 & s2 == 0 {
                continue;
            }
            for (l, &(s3, n3)) in sets.iter().enumerate().skip(j + 1) {
                if low(s3) <= low(s2) || s3 & (s1 | s2) != 0 || n1 & s3 == 0 || n2 & s3 == 0 {
                    continue;
                }
                let used = s1 | s2 | s3;
                let found = sets.iter().skip(l + 1).any(|&(s4, _)| {
                    low(s4) > low(s3)
                        && s4 & used == 0
                        && n1 & s4 != 0
                        && n2 & s4 != 0
                        && n3 & s4 != 0
                });
                if found {
                    return true;
                }
            }
        }
    }
    false
}

/// All connected simple graphs on vertices `0..n`, each labeled graph once.
pub fn enumerate_connected_graphs(n: u32) -> impl Iterator<Item = Graph> {
    let pairs: Vec<(Vertex, Vertex)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let total: u64 = 1 << pairs.len();
    (0..total).filter_map(move |mask| {
        let mut g = Graph::with_vertices(0..n);
        for (i, &(u, v)) in pairs.iter().enumerate() {
            if mask >> i & 1 == 1 {
                g.insert_edge(u, v).unwrap();
            }
        }
        g.is_connected().then_some(g)
    })
}
