//! Decomposition by reduction history.
//!
//! Every edge of a working multigraph carries the SP tree of the subgraph it
//! stands for. Parallel edges are merged into P-nodes, unprotected vertices
//! of degree two are suppressed into S-nodes, and pendant or isolated
//! vertices are folded into a neighboring edge through an edgeless leaf.
//! When two vertices remain, the single edge between them carries the tree.
//! Getting stuck with more vertices left means the graph has a K4 minor.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

use super::{NodeKind, SpNode, SpTree};

struct Reducer {
    /// edge id -> tree whose poles are the edge endpoints
    edges: Vec<Option<SpNode>>,
    /// vertex -> neighbor -> edge id
    inc: BTreeMap<Vertex, BTreeMap<Vertex, usize>>,
    protected: BTreeSet<Vertex>,
    queue: VecDeque<Vertex>,
}

impl Reducer {
    fn new(vertices: impl IntoIterator<Item = Vertex>, protected: BTreeSet<Vertex>) -> Self {
        let inc: BTreeMap<_, _> = vertices.into_iter().map(|v| (v, BTreeMap::new())).collect();
        let queue = inc.keys().copied().collect();
        Reducer {
            edges: Vec::new(),
            inc,
            protected,
            queue,
        }
    }

    /// Adds a tree between its poles, merging with an existing parallel edge.
    fn add(&mut self, tree: SpNode) -> Result<()> {
        let (u, v) = tree.poles;
        if let Some(&id) = self.inc[&u].get(&v) {
            let old = self.edges[id].take().unwrap();
            self.edges[id] = Some(SpNode::parallel(vec![old, tree])?);
        } else {
            let id = self.edges.len();
            self.edges.push(Some(tree));
            self.inc.get_mut(&u).unwrap().insert(v, id);
            self.inc.get_mut(&v).unwrap().insert(u, id);
        }
        self.queue.push_back(u);
        self.queue.push_back(v);
        Ok(())
    }

    /// Removes the edge `uv` and returns its tree oriented from `u` to `v`.
    fn take(&mut self, u: Vertex, v: Vertex) -> SpNode {
        let id = self.inc.get_mut(&u).unwrap().remove(&v).unwrap();
        self.inc.get_mut(&v).unwrap().remove(&u);
        let t = self.edges[id].take().unwrap();
        if t.poles.0 == u {
            t
        } else {
            t.reversed()
        }
    }

    fn remove_vertex(&mut self, v: Vertex) {
        debug_assert!(self.inc[&v].is_empty());
        self.inc.remove(&v);
    }

    /// Some live edge, preferring one at a protected vertex.
    fn any_edge(&self, avoid: Vertex) -> Option<(Vertex, Vertex)> {
        self.protected
            .iter()
            .chain(self.inc.keys())
            .filter(|&&x| x != avoid)
            .find_map(|&x| {
                self.inc
                    .get(&x)
                    .and_then(|ns| ns.keys().find(|&&y| y != avoid).map(|&y| (x, y)))
            })
    }

    fn step(&mut self, v: Vertex) -> Result<()> {
        if self.protected.contains(&v) || self.inc.len() <= 2 {
            return Ok(());
        }
        let Some(ns) = self.inc.get(&v) else {
            return Ok(());
        };
        match ns.len() {
            0 => {
                // isolated: hang it between the endpoints of any edge
                let Some((x, y)) = self.any_edge(v) else {
                    return Ok(());
                };
                let t = self.take(x, y);
                self.remove_vertex(v);
                let hang = SpNode::series(vec![SpNode::edgeless(x, v), SpNode::edgeless(v, y)])?;
                self.add(SpNode::parallel(vec![t, hang])?)?;
            }
            1 => {
                let u = *ns.keys().next().unwrap();
                let Some(&w) = self.inc[&u].keys().find(|&&w| w != v) else {
                    return Ok(());
                };
                let pendant = self.take(u, v);
                let other = self.take(u, w);
                self.remove_vertex(v);
                let hang = SpNode::series(vec![pendant, SpNode::edgeless(v, w)])?;
                self.add(SpNode::parallel(vec![other, hang])?)?;
            }
            2 => {
                let mut it = ns.keys();
                let (u, w) = (*it.next().unwrap(), *it.next().unwrap());
                let left = self.take(u, v);
                let right = self.take(v, w);
                self.remove_vertex(v);
                self.add(SpNode::series(vec![left, right])?)?;
            }
            _ => {}
        }
        Ok(())
    }

    fn run(mut self) -> Result<SpNode> {
        while let Some(v) = self.queue.pop_front() {
            self.step(v)?;
        }
        if self.inc.len() != 2 {
            return Err(Error::K4Minor);
        }
        let mut it = self.inc.keys();
        let (u, v) = (*it.next().unwrap(), *it.next().unwrap());
        match self.inc[&u].get(&v) {
            Some(_) => Ok(self.take(u, v)),
            None => Ok(SpNode::edgeless(u, v)),
        }
    }
}

fn seed(
    g: &Graph,
    virt: &BTreeSet<(Vertex, Vertex)>,
    protected: BTreeSet<Vertex>,
) -> Result<Reducer> {
    let mut r = Reducer::new(g.vertices(), protected);
    for (u, v) in g.edges() {
        r.add(SpNode::leaf(u, v, true, virt.contains(&(u, v))))?;
    }
    Ok(r)
}

/// Orders the children of every P-node by smallest inner vertex, edge leaf
/// first.
pub(crate) fn canonicalize(n: SpNode) -> SpNode {
    let SpNode {
        kind,
        poles,
        children,
        width,
    } = n;
    let mut children: Vec<SpNode> = children.into_iter().map(canonicalize).collect();
    if kind == NodeKind::Parallel {
        children.sort_by_cached_key(|c| c.canonical_key());
    }
    SpNode {
        kind,
        poles,
        children,
        width,
    }
}

/// SP-decomposition tree of a connected K4-minor-free graph. The tree
/// realizes the graph exactly; pendant structure hangs from edgeless leaves,
/// so no virtual edges are introduced.
pub fn decompose(g: &Graph) -> Result<SpTree> {
    if g.vertex_count() < 2 {
        return Err(Error::TooSmall);
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let root = seed(g, &BTreeSet::new(), BTreeSet::new())?.run()?;
    Ok(SpTree::new(canonicalize(root)))
}

/// Tree of `g` with root poles exactly `(a, b)`. Requires `g + ab` to be
/// K4-minor-free; every component of `g` must meet `a` or `b` unless it can
/// be hung from an edgeless leaf.
pub fn decompose_with_poles(
    g: &Graph,
    virt: &BTreeSet<(Vertex, Vertex)>,
    a: Vertex,
    b: Vertex,
) -> Result<SpNode> {
    if a == b || !g.contains(a) || !g.contains(b) {
        return Err(Error::Invalid(format!("bad pole pair ({a}, {b})")));
    }
    let mut r = seed(g, virt, BTreeSet::from([a, b]))?;
    r.add(SpNode::edgeless(a, b))?;
    let root = r.run()?;
    let root = if root.poles.0 == a { root } else { root.reversed() };
    Ok(canonicalize(root))
}

/// Tree realizing the same graph (virtual marks included) with `v` as the
/// first root pole.
pub fn reroot(t: &SpTree, v: Vertex) -> Result<SpTree> {
    let (a, b) = t.poles();
    if v == a {
        return Ok(t.clone());
    }
    if v == b {
        return Ok(SpTree::new(t.root.clone().reversed()));
    }
    let (g, virt) = t.root.realize_parts()?;
    if !g.contains(v) {
        return Err(Error::MissingVertex(v));
    }
    let mut r = seed(&g, &virt, BTreeSet::from([v]))?;
    // The root pole pair bounds every component of the realized graph.
    r.add(SpNode::edgeless(a, b))?;
    let root = r.run()?;
    let root = if root.poles.0 == v { root } else { root.reversed() };
    Ok(SpTree::new(canonicalize(root)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roundtrip(g: &Graph) -> SpTree {
        let t = decompose(g).unwrap();
        t.root.check_structure().unwrap();
        assert_eq!(t.realize_source().unwrap(), *g);
        assert!(t.virtual_edges().unwrap().is_empty());
        t
    }

    #[test]
    fn path_is_a_series_node() {
        let g = Graph::from_edges([(0, 2), (2, 1)]).unwrap();
        assert_eq!(roundtrip(&g).root.width, 1);
        let t = decompose_with_poles(&g, &BTreeSet::new(), 0, 1).unwrap();
        assert_eq!(t.kind, NodeKind::Series);
        assert_eq!(t.children.len(), 2);
    }

    #[test]
    fn claw_realizes_with_edgeless_leaf() {
        let g = Graph::from_edges([(9, 1), (9, 2), (9, 3)]).unwrap();
        let t = roundtrip(&g);
        assert!(t.root.leaves().iter().any(|l| l.is_edgeless_leaf()));
        let r = reroot(&t, 1).unwrap();
        assert_eq!(r.poles().0, 1);
        assert_eq!(r.realize_source().unwrap(), g);
        // poles at two leaves give D'(1)
        let n = decompose_with_poles(&g, &BTreeSet::new(), 1, 2).unwrap();
        assert_eq!(n.realize_parts().unwrap().0, g);
        assert_eq!(
            crate::sp_tree::classify_gadget(&g, (1, 2)),
            crate::sp_tree::GadgetKind::DiamondPrime(1)
        );
    }

    #[test]
    fn k4_is_rejected() {
        let g = Graph::from_edges([(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert!(matches!(decompose(&g), Err(Error::K4Minor)));
    }

    #[test]
    fn disconnected_and_tiny_rejected() {
        let g = Graph::from_edges([(0, 1), (2, 3)]).unwrap();
        assert!(matches!(decompose(&g), Err(Error::Disconnected)));
        assert!(matches!(decompose(&Graph::with_vertices([0])), Err(Error::TooSmall)));
    }

    #[test]
    fn reroot_path_at_middle() {
        // S(e_ac, e_cb) with a = 0, b = 1, c = 2
        let t = SpTree::new(SpNode::series(vec![SpNode::edge(0, 2), SpNode::edge(2, 1)]).unwrap());
        let r = reroot(&t, 2).unwrap();
        assert_eq!(r.poles(), (2, 1));
        assert_eq!(r.realize().unwrap().0, t.realize().unwrap().0);
        let expected = SpNode::parallel(vec![
            SpNode::edge(2, 1),
            SpNode::series(vec![SpNode::edge(2, 0), SpNode::edgeless(0, 1)]).unwrap(),
        ])
        .unwrap();
        assert_eq!(r.root, canonicalize(expected));
    }

    #[test]
    fn reroot_diamond_at_inner_vertex() {
        let g = Graph::from_edges([(0, 2), (2, 1), (0, 3), (3, 1)]).unwrap();
        let t = SpTree::new(decompose_with_poles(&g, &BTreeSet::new(), 0, 1).unwrap());
        assert_eq!(t.poles(), (0, 1));
        let r = reroot(&t, 3).unwrap();
        assert_eq!(r.poles().0, 3);
        assert_eq!(r.realize().unwrap().0, g);
        assert!(matches!(reroot(&t, 42), Err(Error::MissingVertex(42))));
    }

    #[test]
    fn reroot_keeps_virtual_marks() {
        let t = SpTree::new(
            SpNode::parallel(vec![
                SpNode::leaf(0, 1, true, true),
                SpNode::series(vec![SpNode::edge(0, 2), SpNode::edge(2, 1)]).unwrap(),
            ])
            .unwrap(),
        );
        let r = reroot(&t, 2).unwrap();
        assert_eq!(r.virtual_edges().unwrap(), t.virtual_edges().unwrap());
        assert_eq!(r.realize().unwrap().0, t.realize().unwrap().0);
    }

    #[test]
    fn poles_can_be_forced() {
        // C(2) plus a pendant at an inner vertex
        let g = Graph::from_edges([(0, 1), (0, 2), (2, 1), (0, 3), (3, 1), (3, 4)]).unwrap();
        let n = decompose_with_poles(&g, &BTreeSet::new(), 0, 1).unwrap();
        assert_eq!(n.poles, (0, 1));
        assert_eq!(n.realize_parts().unwrap().0, g);
    }
}
