//! Normal form.
//!
//! A node with poles `a, b` whose graph `H` has `H - {a, b}` split into
//! `m >= 2` components must be a P-node with one child per component (the
//! component plus the poles, edge `ab` removed) and an edge leaf exactly when
//! `ab` is an edge of `H`. Nodes with `m <= 1` are unconstrained.

use std::collections::BTreeSet;

use crate::error::Result;
use crate::graph::{Graph, Vertex};

use super::decompose::canonicalize;
use super::{NodeKind, SpNode, SpTree};

/// Components of `h - {a, b}`.
fn inner_components(h: &Graph, a: Vertex, b: Vertex) -> Vec<Vec<Vertex>> {
    let mut rest = h.clone();
    rest.remove_vertex(a);
    rest.remove_vertex(b);
    rest.components()
}

/// Realized graph of a subtree, ignoring virtual marks.
fn subtree_graph(n: &SpNode) -> Graph {
    let mut g = Graph::new();
    for leaf in n.leaves() {
        let (a, b) = leaf.poles;
        g.add_vertex(a);
        g.add_vertex(b);
        if leaf.is_edge_leaf() {
            g.insert_edge(a, b).expect("leaf endpoints present");
        }
    }
    g
}

/// One component of `H - {a, b}` as a normal-form node on the poles of its
/// owner, together with whether it has neighbors at each pole.
struct Comp {
    node: SpNode,
    left: bool,
    right: bool,
}

impl Comp {
    fn reversed(self) -> Comp {
        Comp {
            node: self.node.reversed(),
            left: self.right,
            right: self.left,
        }
    }
}

/// A node split into its pole edge and its inner components.
struct Split {
    poles: (Vertex, Vertex),
    edge: Option<SpNode>,
    comps: Vec<Comp>,
}

impl Split {
    fn reversed(self) -> Split {
        Split {
            poles: (self.poles.1, self.poles.0),
            edge: self.edge.map(SpNode::reversed),
            comps: self.comps.into_iter().map(Comp::reversed).collect(),
        }
    }

    fn into_node(self) -> Result<SpNode> {
        let (a, b) = self.poles;
        let mut children: Vec<SpNode> = self.edge.into_iter().collect();
        children.extend(self.comps.into_iter().map(|c| c.node));
        if children.is_empty() {
            return Ok(SpNode::edgeless(a, b));
        }
        let n = SpNode::parallel(children)?;
        Ok(if n.poles == (a, b) { n } else { n.reversed() })
    }
}

/// Moves pole `from`, which has no neighbors in the subtree, to `to`.
fn rename(n: SpNode, from: Vertex, to: Vertex) -> SpNode {
    let map = |v: Vertex| if v == from { to } else { v };
    SpNode {
        kind: n.kind,
        poles: (map(n.poles.0), map(n.poles.1)),
        children: n.children.into_iter().map(|c| rename(c, from, to)).collect(),
        width: n.width,
    }
}

fn split(n: &SpNode) -> Result<Split> {
    let poles = n.poles;
    match n.kind {
        NodeKind::Leaf { has_edge, .. } => Ok(Split {
            poles,
            edge: has_edge.then(|| n.clone()),
            comps: Vec::new(),
        }),
        NodeKind::Parallel => {
            let mut edge: Option<SpNode> = None;
            let mut comps = Vec::new();
            for c in &n.children {
                let mut s = split(c)?;
                if s.poles != poles {
                    s = s.reversed();
                }
                if let Some(e) = s.edge {
                    edge = Some(match edge {
                        None => e,
                        Some(old) => SpNode::parallel(vec![old, e])?,
                    });
                }
                comps.extend(s.comps);
            }
            Ok(Split { poles, edge, comps })
        }
        NodeKind::Series => {
            let (a, b) = poles;
            let last = n.children.len() - 1;
            let mut comps = Vec::new();
            // Inner components formed around runs of junctions joined by
            // bridging pieces: the chain so far and whether it reaches `a`.
            let mut chain: Vec<SpNode> = Vec::new();
            let mut touch_a = false;
            for (i, c) in n.children.iter().enumerate() {
                let s = split(c)?;
                let (l, r) = s.poles;
                let (jl, jr) = (i > 0, i < last);
                let bridging = s.edge.is_some() || s.comps.iter().any(|c| c.left && c.right);
                let mut kept = Split {
                    poles: s.poles,
                    edge: s.edge,
                    comps: Vec::new(),
                };
                let mut left_part = Vec::new();
                let mut right_part = Vec::new();
                for comp in s.comps {
                    let (tl, tr) = (comp.left && jl, comp.right && jr);
                    if bridging && (tl || tr) {
                        kept.comps.push(comp);
                    } else if tl {
                        left_part.push(comp);
                    } else if tr {
                        right_part.push(comp);
                    } else {
                        // Touches no junction: a component of its own.
                        let node = rename(rename(comp.node, l, a), r, b);
                        comps.push(Comp {
                            node,
                            left: !jl && comp.left,
                            right: !jr && comp.right,
                        });
                    }
                }
                if bridging {
                    touch_a |= i == 0;
                    chain.push(kept.into_node()?);
                    continue;
                }
                if jl {
                    let part = Split { poles: s.poles, edge: None, comps: left_part };
                    chain.push(rename(part.into_node()?, r, b));
                    comps.push(Comp {
                        node: SpNode::series(std::mem::take(&mut chain))?,
                        left: touch_a,
                        right: false,
                    });
                }
                if jr {
                    let part = Split { poles: s.poles, edge: None, comps: right_part };
                    chain.push(rename(part.into_node()?, l, a));
                    touch_a = false;
                }
            }
            if !chain.is_empty() {
                comps.push(Comp {
                    node: SpNode::series(chain)?,
                    left: touch_a,
                    right: true,
                });
            }
            Ok(Split {
                poles,
                edge: None,
                comps,
            })
        }
    }
}

/// Normal-form tree realizing the same graph with the same root poles and
/// virtual marks. Same-kind nested nodes are merged, so P-nodes have only
/// S-nodes and leaves as children and vice versa.
pub fn normalize(t: &SpTree) -> Result<SpTree> {
    t.root.realize_parts()?;
    let root = split(&t.root)?.into_node()?;
    Ok(SpTree::new(canonicalize(root)))
}

fn node_is_normal(n: &SpNode) -> bool {
    if n.is_leaf() {
        return true;
    }
    let h = subtree_graph(n);
    let (a, b) = n.poles;
    let comps = inner_components(&h, a, b);
    if comps.len() <= 1 {
        return true;
    }
    if n.kind != NodeKind::Parallel {
        return false;
    }
    let mut edge_leaves = 0;
    let mut matched = BTreeSet::new();
    for c in &n.children {
        if c.width == 0 {
            if !c.is_edge_leaf() {
                return false;
            }
            edge_leaves += 1;
            continue;
        }
        let inner = c.inner_vertices();
        let Some(idx) = comps.iter().position(|comp| *comp == inner) else {
            return false;
        };
        if !matched.insert(idx) {
            return false;
        }
        let mut vs: BTreeSet<Vertex> = inner.into_iter().collect();
        vs.insert(a);
        vs.insert(b);
        let mut expected = h.induced(&vs);
        expected.remove_edge(a, b);
        if subtree_graph(c) != expected {
            return false;
        }
    }
    matched.len() == comps.len() && edge_leaves == usize::from(h.has_edge(a, b))
}

/// True iff every node of the tree is in normal form.
pub fn is_normal_form(t: &SpTree) -> bool {
    t.root.postorder().into_iter().all(node_is_normal)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3(a: Vertex, x: Vertex, b: Vertex) -> SpNode {
        SpNode::series(vec![SpNode::edge(a, x), SpNode::edge(x, b)]).unwrap()
    }

    fn raw_parallel(children: Vec<SpNode>) -> SpNode {
        let poles = children[0].poles;
        let width = children.iter().map(|c| c.width).sum();
        SpNode {
            kind: NodeKind::Parallel,
            poles,
            children,
            width,
        }
    }

    #[test]
    fn leaf_is_normal() {
        let t = SpTree::new(SpNode::edge(0, 1));
        assert!(is_normal_form(&t));
        assert_eq!(normalize(&t).unwrap(), t);
    }

    #[test]
    fn nested_diamond_flattens() {
        let inner = raw_parallel(vec![p3(0, 2, 1), p3(0, 3, 1)]);
        let t = SpTree::new(raw_parallel(vec![inner, p3(0, 4, 1)]));
        assert!(!is_normal_form(&t));
        let n = normalize(&t).unwrap();
        assert!(is_normal_form(&n));
        assert_eq!(n.root.kind, NodeKind::Parallel);
        assert_eq!(n.root.children.len(), 3);
        assert_eq!(n.realize().unwrap(), t.realize().unwrap());
    }

    #[test]
    fn child_with_two_components_is_rejected() {
        // Child: two paths joined under one S-chain through an edgeless leaf.
        let two = SpNode {
            kind: NodeKind::Series,
            poles: (0, 1),
            children: vec![
                SpNode::edge(0, 2),
                SpNode::edgeless(2, 3),
                SpNode::edge(3, 1),
            ],
            width: 2,
        };
        let t = SpTree::new(raw_parallel(vec![two, p3(0, 4, 1)]));
        assert!(!is_normal_form(&t));
        let n = normalize(&t).unwrap();
        assert!(is_normal_form(&n));
        assert_eq!(n.realize().unwrap(), t.realize().unwrap());
    }

    #[test]
    fn series_with_split_middle_becomes_parallel() {
        // S(G1, G2) where G1 = D(1) on (0, 5) and G2 = pendant-ish path on (5, 1)
        // with an inner vertex 6 adjacent only to 1: H - {0, 1} = {2,5} ∪ {6}.
        let g1 = p3(0, 2, 5);
        let g2 = SpNode::series(vec![SpNode::edgeless(5, 6), SpNode::edge(6, 1)]).unwrap();
        let t = SpTree::new(SpNode::series(vec![g1, g2]).unwrap());
        assert!(!is_normal_form(&t));
        let n = normalize(&t).unwrap();
        assert!(is_normal_form(&n));
        assert_eq!(n.root.kind, NodeKind::Parallel);
        assert_eq!(n.poles(), (0, 1));
        assert_eq!(n.realize().unwrap(), t.realize().unwrap());
    }

    #[test]
    fn crystal_keeps_edge_leaf() {
        let t = SpTree::new(raw_parallel(vec![p3(0, 2, 1), SpNode::edge(0, 1), p3(0, 3, 1)]));
        let n = normalize(&t).unwrap();
        assert!(is_normal_form(&n));
        assert_eq!(n.root.children.iter().filter(|c| c.is_edge_leaf()).count(), 1);
    }
}
