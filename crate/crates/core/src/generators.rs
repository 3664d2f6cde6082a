//! Test instances: the gadget families and seeded random SP graphs.
//!
//! Random trees split the requested number of inner vertices recursively;
//! each inner node is S or P with equal probability and each leaf is
//! edgeless with probability 0.1. Everything is driven by a ChaCha8 stream,
//! so a seed fixes the output exactly.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::sp_tree::{SpNode, SpTree};

const EDGELESS_LEAF_PROB: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Diamond,
    Crystal,
    CrystalPrime,
    DiamondPrime,
    /// `K_{1,n}`
    Star,
    /// `P_n`, the path with `n` vertices
    Path,
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "diamond" => Family::Diamond,
            "crystal" => Family::Crystal,
            "crystal_prime" => Family::CrystalPrime,
            "diamond_prime" => Family::DiamondPrime,
            "star" => Family::Star,
            "path" => Family::Path,
            other => return Err(Error::Invalid(format!("unknown family {other:?}"))),
        })
    }
}

/// A gadget with poles `0` and `1` (for the star: two leaves; for the path:
/// its endpoints).
pub fn gen_family(family: Family, size: u32) -> Result<(Graph, (Vertex, Vertex))> {
    let spokes = |g: &mut Graph, from: Vertex, count: u32| {
        for x in from..from + count {
            g.add_vertex(x);
            g.insert_edge(0, x).unwrap();
            g.insert_edge(x, 1).unwrap();
        }
    };
    let mut g = Graph::with_vertices([0, 1]);
    match family {
        Family::Diamond | Family::Crystal => {
            if family == Family::Diamond && size == 0 {
                return Err(Error::Invalid("diamond width must be at least 1".into()));
            }
            spokes(&mut g, 2, size);
            if family == Family::Crystal {
                g.insert_edge(0, 1)?;
            }
        }
        Family::DiamondPrime | Family::CrystalPrime => {
            if size == 0 {
                return Err(Error::Invalid("primed gadgets need width parameter >= 1".into()));
            }
            // claw center 2 with pendant 3
            g.add_vertex(2);
            g.add_vertex(3);
            g.insert_edge(0, 2)?;
            g.insert_edge(2, 1)?;
            g.insert_edge(2, 3)?;
            spokes(&mut g, 4, size - 1);
            if family == Family::CrystalPrime {
                g.insert_edge(0, 1)?;
            }
        }
        Family::Star => {
            if size < 2 {
                return Err(Error::Invalid("star needs at least two leaves".into()));
            }
            let star = Graph::from_edges((1..=size).map(|i| (0, i)))?;
            return Ok((star, (1, 2)));
        }
        Family::Path => {
            if size < 2 {
                return Err(Error::Invalid("path needs at least two vertices".into()));
            }
            let path = Graph::from_edges((0..size - 1).map(|i| (i, i + 1)))?;
            return Ok((path, (0, size - 1)));
        }
    }
    Ok((g, (0, 1)))
}

struct TreeGen {
    rng: ChaCha8Rng,
    next: Vertex,
}

impl TreeGen {
    fn fresh(&mut self) -> Vertex {
        self.next += 1;
        self.next - 1
    }

    fn build(&mut self, a: Vertex, b: Vertex, inner: usize) -> SpNode {
        if inner == 0 {
            let has_edge = !self.rng.gen_bool(EDGELESS_LEAF_PROB);
            return SpNode::leaf(a, b, has_edge, false);
        }
        if self.rng.gen_bool(0.5) {
            let c = self.fresh();
            let left = self.rng.gen_range(0..inner);
            let l = self.build(a, c, left);
            let r = self.build(c, b, inner - 1 - left);
            SpNode::series(vec![l, r]).expect("chained poles")
        } else {
            let left = self.rng.gen_range(0..=inner);
            let l = self.build(a, b, left);
            let r = self.build(a, b, inner - left);
            SpNode::parallel(vec![l, r]).expect("shared poles")
        }
    }
}

/// Seeded random SP tree with exactly `n >= 2` realized vertices `0..n`.
pub fn gen_random_sp(n: u32, seed: u64) -> Result<SpTree> {
    if n < 2 {
        return Err(Error::Invalid("random SP trees need n >= 2".into()));
    }
    let mut gen = TreeGen {
        rng: ChaCha8Rng::seed_from_u64(seed),
        next: 2,
    };
    Ok(SpTree::new(gen.build(0, 1, n as usize - 2)))
}

/// Random K4-minor-free graph on `0..n`: the realization of a random SP tree
/// with each edge dropped independently with probability `drop_prob`.
pub fn gen_random_k4_free(n: u32, drop_prob: f64, seed: u64) -> Result<Graph> {
    if n == 0 {
        return Err(Error::Invalid("n must be at least 1".into()));
    }
    if !(0.0..=1.0).contains(&drop_prob) {
        return Err(Error::Invalid(format!("drop probability {drop_prob} outside [0, 1]")));
    }
    if n == 1 {
        return Ok(Graph::with_vertices([0]));
    }
    let (full, _) = gen_random_sp(n, seed)?.realize()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut g = Graph::with_vertices(full.vertices());
    for (u, v) in full.edges() {
        if !rng.gen_bool(drop_prob) {
            g.insert_edge(u, v)?;
        }
    }
    Ok(g)
}
