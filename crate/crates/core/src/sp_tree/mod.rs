//! SP-decomposition trees of two-terminal graphs.
//!
//! Leaves are pole pairs that may or may not carry an edge; inner nodes are
//! serial (S) or parallel (P) joins of two or more children. Edgeless leaves
//! let pendant structure and isolated vertices live inside a two-terminal
//! object, so every K4-minor-free connected graph has a tree that realizes it
//! exactly.

mod decompose;
mod gadget;
mod normalize;

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

pub use decompose::{decompose, decompose_with_poles, reroot};
pub use gadget::{classify_gadget, common_pole_neighbors_independent, GadgetKind};
pub use normalize::{is_normal_form, normalize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Leaf { has_edge: bool, is_virtual: bool },
    Series,
    Parallel,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpNode {
    pub kind: NodeKind,
    pub poles: (Vertex, Vertex),
    pub children: Vec<SpNode>,
    /// Number of inner (non-pole) vertices of the represented graph.
    pub width: usize,
}

impl SpNode {
    pub fn edge(a: Vertex, b: Vertex) -> SpNode {
        Self::leaf(a, b, true, false)
    }

    pub fn edgeless(a: Vertex, b: Vertex) -> SpNode {
        Self::leaf(a, b, false, false)
    }

    pub fn leaf(a: Vertex, b: Vertex, has_edge: bool, is_virtual: bool) -> SpNode {
        SpNode {
            kind: NodeKind::Leaf {
                has_edge,
                is_virtual: has_edge && is_virtual,
            },
            poles: (a, b),
            children: Vec::new(),
            width: 0,
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self.kind, NodeKind::Leaf { .. })
    }

    pub fn is_edge_leaf(&self) -> bool {
        matches!(self.kind, NodeKind::Leaf { has_edge: true, .. })
    }

    pub fn is_edgeless_leaf(&self) -> bool {
        matches!(self.kind, NodeKind::Leaf { has_edge: false, .. })
    }

    /// Serial join of `children` in order. Nested S-nodes are spliced in.
    pub fn series(children: Vec<SpNode>) -> Result<SpNode> {
        if children.is_empty() {
            return Err(Error::Structure("empty serial join".into()));
        }
        let mut flat = Vec::with_capacity(children.len());
        for c in children {
            if c.kind == NodeKind::Series {
                flat.extend(c.children);
            } else {
                flat.push(c);
            }
        }
        if flat.len() == 1 {
            return Ok(flat.pop().unwrap());
        }
        for w in flat.windows(2) {
            if w[0].poles.1 != w[1].poles.0 {
                return Err(Error::Structure(format!(
                    "serial join poles {:?} and {:?} do not chain",
                    w[0].poles, w[1].poles
                )));
            }
        }
        let poles = (flat[0].poles.0, flat[flat.len() - 1].poles.1);
        if poles.0 == poles.1 {
            return Err(Error::Structure("serial join closes a cycle".into()));
        }
        let width = flat.iter().map(|c| c.width).sum::<usize>() + flat.len() - 1;
        Ok(SpNode {
            kind: NodeKind::Series,
            poles,
            children: flat,
            width,
        })
    }

    /// Parallel join. Children are reoriented to the poles of the first one;
    /// nested P-nodes are spliced in, edgeless leaves dropped when anything
    /// else is present, and duplicate edge leaves merged (a real edge wins
    /// over a virtual one).
    pub fn parallel(children: Vec<SpNode>) -> Result<SpNode> {
        let Some(first) = children.first() else {
            return Err(Error::Structure("empty parallel join".into()));
        };
        let poles = first.poles;
        let mut flat: Vec<SpNode> = Vec::with_capacity(children.len());
        let mut edge: Option<SpNode> = None;
        let mut edgeless: Option<SpNode> = None;
        let mut stack: Vec<SpNode> = children.into_iter().rev().collect();
        while let Some(c) = stack.pop() {
            let c = if c.poles == poles {
                c
            } else if c.poles == (poles.1, poles.0) {
                c.reversed()
            } else {
                return Err(Error::Structure(format!(
                    "parallel join poles {:?} and {:?} differ",
                    poles, c.poles
                )));
            };
            match c.kind {
                NodeKind::Parallel => stack.extend(c.children.into_iter().rev()),
                NodeKind::Leaf { has_edge: true, is_virtual } => {
                    let old_virtual = edge
                        .as_ref()
                        .map(|e| matches!(e.kind, NodeKind::Leaf { is_virtual: true, .. }));
                    if old_virtual.is_none() || (old_virtual == Some(true) && !is_virtual) {
                        edge = Some(c);
                    }
                }
                NodeKind::Leaf { has_edge: false, .. } => edgeless = Some(c),
                NodeKind::Series => flat.push(c),
            }
        }
        if let Some(e) = edge {
            flat.insert(0, e);
        }
        if flat.is_empty() {
            return edgeless.ok_or_else(|| Error::Structure("empty parallel join".into()));
        }
        if flat.len() == 1 {
            return Ok(flat.pop().unwrap());
        }
        let width = flat.iter().map(|c| c.width).sum();
        Ok(SpNode {
            kind: NodeKind::Parallel,
            poles,
            children: flat,
            width,
        })
    }

    /// Same graph with the poles swapped.
    pub fn reversed(self) -> SpNode {
        let SpNode {
            kind,
            poles,
            mut children,
            width,
        } = self;
        if kind == NodeKind::Series {
            children.reverse();
        }
        SpNode {
            kind,
            poles: (poles.1, poles.0),
            children: children.into_iter().map(SpNode::reversed).collect(),
            width,
        }
    }

    /// Inner vertices of the represented graph, sorted.
    pub fn inner_vertices(&self) -> Vec<Vertex> {
        let mut out = Vec::with_capacity(self.width);
        self.collect_inner(&mut out);
        out.sort_unstable();
        out
    }

    fn collect_inner(&self, out: &mut Vec<Vertex>) {
        match self.kind {
            NodeKind::Leaf { .. } => {}
            NodeKind::Parallel => self.children.iter().for_each(|c| c.collect_inner(out)),
            NodeKind::Series => {
                for (i, c) in self.children.iter().enumerate() {
                    if i > 0 {
                        out.push(c.poles.0);
                    }
                    c.collect_inner(out);
                }
            }
        }
    }

    pub fn vertex_set(&self) -> BTreeSet<Vertex> {
        let mut s: BTreeSet<Vertex> = self.inner_vertices().into_iter().collect();
        s.insert(self.poles.0);
        s.insert(self.poles.1);
        s
    }

    /// Every leaf in left-to-right order.
    pub fn leaves(&self) -> Vec<&SpNode> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(n) = stack.pop() {
            if n.is_leaf() {
                out.push(n);
            } else {
                stack.extend(n.children.iter().rev());
            }
        }
        out
    }

    /// Realized graph (virtual edges included) and the set of virtual edges.
    pub fn realize_parts(&self) -> Result<(Graph, BTreeSet<(Vertex, Vertex)>)> {
        self.check_structure()?;
        let mut g = Graph::new();
        let mut virt = BTreeSet::new();
        for leaf in self.leaves() {
            let (a, b) = leaf.poles;
            g.add_vertex(a);
            g.add_vertex(b);
            if let NodeKind::Leaf {
                has_edge: true,
                is_virtual,
            } = leaf.kind
            {
                g.insert_edge(a, b)?;
                if is_virtual {
                    virt.insert((a.min(b), a.max(b)));
                }
            }
        }
        // A pair carried both by a real and a virtual leaf is real.
        for leaf in self.leaves() {
            if let NodeKind::Leaf {
                has_edge: true,
                is_virtual: false,
            } = leaf.kind
            {
                let (a, b) = leaf.poles;
                virt.remove(&(a.min(b), a.max(b)));
            }
        }
        Ok((g, virt))
    }

    /// Checks pole chaining, arity, cached widths and inner-vertex
    /// disjointness.
    pub fn check_structure(&self) -> Result<()> {
        self.check_rec()?;
        let inner = self.inner_vertices();
        let distinct: BTreeSet<Vertex> = inner.iter().copied().collect();
        if distinct.len() != inner.len()
            || distinct.contains(&self.poles.0)
            || distinct.contains(&self.poles.1)
        {
            return Err(Error::Structure("inner vertex sets overlap".into()));
        }
        Ok(())
    }

    fn check_rec(&self) -> Result<usize> {
        if self.poles.0 == self.poles.1 {
            return Err(Error::Structure(format!("node with equal poles {:?}", self.poles)));
        }
        let width = match self.kind {
            NodeKind::Leaf { .. } => {
                if !self.children.is_empty() {
                    return Err(Error::Structure("leaf with children".into()));
                }
                0
            }
            NodeKind::Series | NodeKind::Parallel => {
                if self.children.len() < 2 {
                    return Err(Error::Structure("inner node with fewer than two children".into()));
                }
                let mut ws = 0;
                for c in &self.children {
                    ws += c.check_rec()?;
                }
                if self.kind == NodeKind::Series {
                    for w in self.children.windows(2) {
                        if w[0].poles.1 != w[1].poles.0 {
                            return Err(Error::Structure(format!(
                                "serial children {:?} and {:?} do not chain",
                                w[0].poles, w[1].poles
                            )));
                        }
                    }
                    let n = self.children.len();
                    if self.poles != (self.children[0].poles.0, self.children[n - 1].poles.1) {
                        return Err(Error::Structure("serial node poles mismatch".into()));
                    }
                    ws + n - 1
                } else {
                    if self.children.iter().any(|c| c.poles != self.poles) {
                        return Err(Error::Structure(format!(
                            "parallel children must share poles {:?}",
                            self.poles
                        )));
                    }
                    ws
                }
            }
        };
        if width != self.width {
            return Err(Error::Structure(format!(
                "cached width {} differs from {} at {:?}",
                self.width, width, self.poles
            )));
        }
        Ok(width)
    }

    /// Post-order traversal.
    pub fn postorder(&self) -> Vec<&SpNode> {
        let mut out = Vec::new();
        let mut stack = vec![(self, false)];
        while let Some((n, done)) = stack.pop() {
            if done || n.is_leaf() {
                out.push(n);
            } else {
                stack.push((n, true));
                stack.extend(n.children.iter().rev().map(|c| (c, false)));
            }
        }
        out
    }

    /// Smallest inner vertex, used to order P-node children canonically.
    fn canonical_key(&self) -> (Option<Vertex>, bool) {
        (self.inner_vertices().first().copied(), !self.is_edge_leaf())
    }
}

/// A rooted SP-decomposition tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpTree {
    pub root: SpNode,
}

impl SpTree {
    pub fn new(root: SpNode) -> Self {
        SpTree { root }
    }

    pub fn poles(&self) -> (Vertex, Vertex) {
        self.root.poles
    }

    /// The realized two-terminal graph (virtual edges included) and its poles.
    pub fn realize(&self) -> Result<(Graph, (Vertex, Vertex))> {
        let (g, _) = self.root.realize_parts()?;
        Ok((g, self.root.poles))
    }

    /// The realized graph without virtual edges.
    pub fn realize_source(&self) -> Result<Graph> {
        let (mut g, virt) = self.root.realize_parts()?;
        for (u, v) in virt {
            g.remove_edge(u, v);
        }
        Ok(g)
    }

    pub fn virtual_edges(&self) -> Result<BTreeSet<(Vertex, Vertex)>> {
        Ok(self.root.realize_parts()?.1)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&NodeJson::from(&self.root))?)
    }

    pub fn from_json(text: &str) -> Result<SpTree> {
        let json: NodeJson = serde_json::from_str(text)?;
        let root = json.into_node()?;
        root.check_structure()?;
        Ok(SpTree { root })
    }

    /// DOT rendering of the tree, nodes labeled by kind, width and poles.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph SPTree {\n  node [shape=box];\n");
        let mut next = 0usize;
        fn walk(n: &SpNode, out: &mut String, next: &mut usize) -> usize {
            let id = *next;
            *next += 1;
            let label = match n.kind {
                NodeKind::Series => format!("S w={}", n.width),
                NodeKind::Parallel => format!("P w={}", n.width),
                NodeKind::Leaf { has_edge: true, is_virtual: true } => "leaf (virtual)".to_string(),
                NodeKind::Leaf { has_edge: true, .. } => "leaf".to_string(),
                NodeKind::Leaf { has_edge: false, .. } => "leaf (no edge)".to_string(),
            };
            let _ = writeln!(
                out,
                "  n{id} [label=\"{label}\\n({}, {})\"];",
                n.poles.0, n.poles.1
            );
            for c in &n.children {
                let cid = walk(c, out, next);
                let _ = writeln!(out, "  n{id} -> n{cid};");
            }
            id
        }
        walk(&self.root, &mut out, &mut next);
        out.push_str("}\n");
        out
    }
}

#[derive(Serialize, Deserialize)]
struct NodeJson {
    kind: String,
    poles: [Vertex; 2],
    #[serde(skip_serializing_if = "Option::is_none", default)]
    has_edge: Option<bool>,
    #[serde(rename = "virtual", skip_serializing_if = "Option::is_none", default)]
    is_virtual: Option<bool>,
    #[serde(default)]
    children: Vec<NodeJson>,
}

impl From<&SpNode> for NodeJson {
    fn from(n: &SpNode) -> Self {
        let (kind, has_edge, is_virtual) = match n.kind {
            NodeKind::Leaf { has_edge, is_virtual } => ("leaf", Some(has_edge), Some(is_virtual)),
            NodeKind::Series => ("S", None, None),
            NodeKind::Parallel => ("P", None, None),
        };
        NodeJson {
            kind: kind.to_string(),
            poles: [n.poles.0, n.poles.1],
            has_edge,
            is_virtual,
            children: n.children.iter().map(NodeJson::from).collect(),
        }
    }
}

impl NodeJson {
    fn into_node(self) -> Result<SpNode> {
        let poles = (self.poles[0], self.poles[1]);
        let children = self
            .children
            .into_iter()
            .map(NodeJson::into_node)
            .collect::<Result<Vec<_>>>()?;
        let (kind, width) = match self.kind.as_str() {
            "leaf" => {
                let has_edge = self.has_edge.unwrap_or(true);
                (
                    NodeKind::Leaf {
                        has_edge,
                        is_virtual: has_edge && self.is_virtual.unwrap_or(false),
                    },
                    0,
                )
            }
            "S" => (
                NodeKind::Series,
                children.iter().map(|c| c.width).sum::<usize>() + children.len().saturating_sub(1),
            ),
            "P" => (NodeKind::Parallel, children.iter().map(|c| c.width).sum()),
            other => return Err(Error::Structure(format!("unknown node kind {other:?}"))),
        };
        Ok(SpNode {
            kind,
            poles,
            children,
            width,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_acb() -> SpNode {
        SpNode::series(vec![SpNode::edge(0, 2), SpNode::edge(2, 1)]).unwrap()
    }

    #[test]
    fn realize_single_edge() {
        let t = SpTree::new(SpNode::edge(3, 4));
        let (g, poles) = t.realize().unwrap();
        assert_eq!(poles, (3, 4));
        assert_eq!(g, Graph::from_edges([(3, 4)]).unwrap());
    }

    #[test]
    fn realize_diamond() {
        let chains = (0..3)
            .map(|i| SpNode::series(vec![SpNode::edge(0, 10 + i), SpNode::edge(10 + i, 1)]).unwrap())
            .collect();
        let t = SpTree::new(SpNode::parallel(chains).unwrap());
        let (g, _) = t.realize().unwrap();
        assert_eq!(g.vertex_count(), 5);
        assert_eq!(g.edge_count(), 6);
        assert_eq!(t.root.width, 3);
        assert_eq!(
            classify_gadget(&g, (0, 1)),
            GadgetKind::Diamond(3)
        );
    }

    #[test]
    fn realize_path() {
        let t = SpTree::new(path_acb());
        let (g, poles) = t.realize().unwrap();
        assert_eq!(poles, (0, 1));
        assert_eq!(g, Graph::from_edges([(0, 2), (2, 1)]).unwrap());
        assert_eq!(t.root.width, 1);
    }

    #[test]
    fn pole_mismatch_is_rejected() {
        assert!(SpNode::series(vec![SpNode::edge(0, 1), SpNode::edge(2, 3)]).is_err());
        assert!(SpNode::parallel(vec![SpNode::edge(0, 1), SpNode::edge(0, 3)]).is_err());
        let bad = SpNode {
            kind: NodeKind::Series,
            poles: (0, 3),
            children: vec![SpNode::edge(0, 1), SpNode::edge(2, 3)],
            width: 1,
        };
        assert!(SpTree::new(bad).realize().is_err());
    }

    #[test]
    fn parallel_join_cleans_leaves() {
        let p = SpNode::parallel(vec![SpNode::edgeless(0, 1), path_acb(), SpNode::edge(1, 0)]).unwrap();
        assert_eq!(p.children.len(), 2);
        assert!(p.children[0].is_edge_leaf());
        let single = SpNode::parallel(vec![SpNode::edgeless(0, 1), path_acb()]).unwrap();
        assert_eq!(single, path_acb());
    }

    #[test]
    fn json_roundtrip_and_shape() {
        let t = SpTree::new(
            SpNode::parallel(vec![SpNode::leaf(0, 1, true, true), path_acb()]).unwrap(),
        );
        let text = t.to_json().unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["kind"], "P");
        assert_eq!(v["children"][0]["kind"], "leaf");
        assert_eq!(v["children"][0]["virtual"], true);
        assert!(v["children"][1].get("has_edge").is_none());
        assert_eq!(SpTree::from_json(&text).unwrap(), t);
        assert_eq!(t.virtual_edges().unwrap().len(), 1);
        assert_eq!(t.realize_source().unwrap().edge_count(), 2);
    }

    #[test]
    fn reversal_keeps_graph() {
        let n = SpNode::series(vec![path_acb(), SpNode::edge(1, 5)]).unwrap();
        let r = n.clone().reversed();
        assert_eq!(r.poles, (5, 0));
        assert_eq!(r.realize_parts().unwrap().0, n.realize_parts().unwrap().0);
    }
}
