//! Simple undirected graphs, colorings and the primitives used by the
//! reductions (contraction, deletion, edge insertion, K4-minor test).

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Vertex identifier. Ids are stable across deletions.
pub type Vertex = u32;

/// Color in `1..=k`.
pub type Color = u32;

/// Simple undirected graph with adjacency-set semantics.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    adj: BTreeMap<Vertex, BTreeSet<Vertex>>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a graph from an edge list; endpoints are added as vertices.
    pub fn from_edges(edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Result<Self> {
        let mut g = Graph::new();
        for (u, v) in edges {
            g.add_vertex(u);
            g.add_vertex(v);
            g.insert_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn with_vertices(vs: impl IntoIterator<Item = Vertex>) -> Self {
        let mut g = Graph::new();
        for v in vs {
            g.add_vertex(v);
        }
        g
    }

    pub fn add_vertex(&mut self, v: Vertex) {
        self.adj.entry(v).or_default();
    }

    /// In-place edge insertion. Idempotent on existing edges.
    pub fn insert_edge(&mut self, u: Vertex, v: Vertex) -> Result<()> {
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        if !self.contains(u) {
            return Err(Error::MissingVertex(u));
        }
        if !self.contains(v) {
            return Err(Error::MissingVertex(v));
        }
        self.adj.get_mut(&u).unwrap().insert(v);
        self.adj.get_mut(&v).unwrap().insert(u);
        Ok(())
    }

    pub fn remove_edge(&mut self, u: Vertex, v: Vertex) {
        if let Some(n) = self.adj.get_mut(&u) {
            n.remove(&v);
        }
        if let Some(n) = self.adj.get_mut(&v) {
            n.remove(&u);
        }
    }

    pub fn remove_vertex(&mut self, v: Vertex) {
        if let Some(ns) = self.adj.remove(&v) {
            for u in ns {
                self.adj.get_mut(&u).unwrap().remove(&v);
            }
        }
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj.get(&u).is_some_and(|n| n.contains(&v))
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.adj.keys().copied()
    }

    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.adj.get(&v).into_iter().flat_map(|n| n.iter().copied())
    }

    pub fn neighbor_set(&self, v: Vertex) -> &BTreeSet<Vertex> {
        static EMPTY: BTreeSet<Vertex> = BTreeSet::new();
        self.adj.get(&v).unwrap_or(&EMPTY)
    }

    /// Edges as ordered pairs `(u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adj
            .iter()
            .flat_map(|(&u, ns)| ns.range(u + 1..).map(move |&v| (u, v)))
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.values().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj.get(&v).map_or(0, BTreeSet::len)
    }

    pub fn max_degree(&self) -> usize {
        self.adj.values().map(BTreeSet::len).max().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    /// Smallest id strictly above every vertex of the graph.
    pub fn fresh_id(&self) -> Vertex {
        self.adj.keys().next_back().map_or(0, |&v| v + 1)
    }

    /// Subgraph induced by `vs` (absent ids are ignored).
    pub fn induced(&self, vs: &BTreeSet<Vertex>) -> Graph {
        let adj = vs
            .iter()
            .filter_map(|v| {
                self.adj
                    .get(v)
                    .map(|ns| (*v, ns.iter().filter(|u| vs.contains(u)).copied().collect()))
            })
            .collect();
        Graph { adj }
    }

    /// `G - S`. Every vertex of `s` must be present.
    pub fn delete_set(&self, s: &BTreeSet<Vertex>) -> Result<Graph> {
        if let Some(&v) = s.iter().find(|v| !self.contains(**v)) {
            return Err(Error::MissingVertex(v));
        }
        let mut g = self.clone();
        for &v in s {
            g.remove_vertex(v);
        }
        Ok(g)
    }

    /// Copy of the graph with edge `uv` present.
    pub fn add_edge(&self, u: Vertex, v: Vertex) -> Result<Graph> {
        let mut g = self.clone();
        g.insert_edge(u, v)?;
        Ok(g)
    }

    /// Replaces `s` by one fresh vertex adjacent to `(∪ N(s)) \ s`.
    pub fn contract_set(&self, s: &BTreeSet<Vertex>) -> Result<(Graph, Vertex)> {
        if s.is_empty() {
            return Err(Error::EmptySet);
        }
        if let Some(&v) = s.iter().find(|v| !self.contains(**v)) {
            return Err(Error::MissingVertex(v));
        }
        let c = self.fresh_id();
        let boundary: BTreeSet<Vertex> = s
            .iter()
            .flat_map(|&v| self.neighbors(v))
            .filter(|u| !s.contains(u))
            .collect();
        let mut g = self.clone();
        for &v in s {
            g.remove_vertex(v);
        }
        g.add_vertex(c);
        for u in boundary {
            g.insert_edge(c, u)?;
        }
        Ok((g, c))
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for v in self.vertices() {
            if !seen.insert(v) {
                continue;
            }
            let mut comp = vec![v];
            let mut queue = VecDeque::from([v]);
            while let Some(x) = queue.pop_front() {
                for y in self.neighbors(x) {
                    if seen.insert(y) {
                        comp.push(y);
                        queue.push_back(y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// True iff the graph has no cycle.
    pub fn is_forest(&self) -> bool {
        self.edge_count() + self.components().len() == self.vertex_count()
    }

    /// True iff `K4` is a minor. Deletes vertices of degree at most one and
    /// suppresses vertices of degree two until stuck; the graph is
    /// K4-minor-free iff every component vanishes down to a vertex or edge.
    pub fn has_k4_minor(&self) -> bool {
        let mut adj: HashMap<Vertex, HashSet<Vertex>> = self
            .adj
            .iter()
            .map(|(&v, ns)| (v, ns.iter().copied().collect()))
            .collect();
        let mut queue: VecDeque<Vertex> = adj
            .iter()
            .filter(|(_, ns)| ns.len() <= 2)
            .map(|(&v, _)| v)
            .collect();
        while let Some(v) = queue.pop_front() {
            let Some(ns) = adj.get(&v) else { continue };
            match ns.len() {
                0 | 1 => {
                    let ns = adj.remove(&v).unwrap();
                    for u in ns {
                        let nu = adj.get_mut(&u).unwrap();
                        nu.remove(&v);
                        if nu.len() <= 2 {
                            queue.push_back(u);
                        }
                    }
                }
                2 => {
                    let ns = adj.remove(&v).unwrap();
                    let mut it = ns.into_iter();
                    let (x, y) = (it.next().unwrap(), it.next().unwrap());
                    for (p, q) in [(x, y), (y, x)] {
                        let np = adj.get_mut(&p).unwrap();
                        np.remove(&v);
                        np.insert(q);
                        if np.len() <= 2 {
                            queue.push_back(p);
                        }
                    }
                }
                _ => {}
            }
        }
        !adj.is_empty()
    }
}

/// Total map from vertices to colors `1..=k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    pub k: u32,
    #[serde(rename = "colors")]
    pub assignment: BTreeMap<Vertex, Color>,
}

impl Coloring {
    pub fn new(k: u32) -> Self {
        Coloring {
            k,
            assignment: BTreeMap::new(),
        }
    }

    pub fn get(&self, v: Vertex) -> Option<Color> {
        self.assignment.get(&v).copied()
    }

    pub fn set(&mut self, v: Vertex, c: Color) {
        self.assignment.insert(v, c);
    }

    /// Class sizes indexed by `color - 1`; unused colors count as zero.
    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k as usize];
        for &c in self.assignment.values() {
            if (1..=self.k).contains(&c) {
                sizes[(c - 1) as usize] += 1;
            }
        }
        sizes
    }

    pub fn profile(&self) -> ColorProfile {
        ColorProfile::from_sizes(self.class_sizes())
    }

    /// Permutes color names so class sizes are nondecreasing in the color
    /// index. The partition into classes is unchanged. Ties keep their
    /// original relative order.
    pub fn sort_colors_increasing(&self) -> Coloring {
        let sizes = self.class_sizes();
        let mut order: Vec<usize> = (0..self.k as usize).collect();
        order.sort_by_key(|&i| sizes[i]);
        let mut rename = vec![0; self.k as usize];
        for (new, &old) in order.iter().enumerate() {
            rename[old] = new as Color + 1;
        }
        Coloring {
            k: self.k,
            assignment: self
                .assignment
                .iter()
                .map(|(&v, &c)| (v, rename[(c - 1) as usize]))
                .collect(),
        }
    }

    pub fn restrict(&self, g: &Graph) -> Coloring {
        Coloring {
            k: self.k,
            assignment: self
                .assignment
                .iter()
                .filter(|(v, _)| g.contains(**v))
                .map(|(&v, &c)| (v, c))
                .collect(),
        }
    }
}

/// Class-size profile of a coloring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorProfile {
    pub sizes: Vec<usize>,
    pub ordered: bool,
}

impl ColorProfile {
    pub fn from_sizes(sizes: Vec<usize>) -> Self {
        let ordered = sizes.windows(2).all(|w| w[0] <= w[1]);
        ColorProfile { sizes, ordered }
    }

    pub fn total(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn is_balanced(&self) -> bool {
        match (self.sizes.iter().min(), self.sizes.iter().max()) {
            (Some(lo), Some(hi)) => hi - lo <= 1,
            _ => true,
        }
    }
}

/// True iff `c` is a proper coloring of `g` whose `k` classes (empty ones
/// included) differ in size by at most one. Fails on a partial assignment
/// or a color outside `1..=k`.
pub fn is_equitable(g: &Graph, c: &Coloring) -> Result<bool> {
    for v in g.vertices() {
        match c.get(v) {
            None => return Err(Error::PartialColoring(v)),
            Some(col) if col == 0 || col > c.k => return Err(Error::ColorOutOfRange(col, c.k)),
            _ => {}
        }
    }
    if g.edges().any(|(u, v)| c.get(u) == c.get(v)) {
        return Ok(false);
    }
    Ok(c.restrict(g).profile().is_balanced())
}

/// True iff `c` colors every vertex and no edge is monochromatic.
pub fn is_proper(g: &Graph, c: &Coloring) -> bool {
    g.vertices().all(|v| c.get(v).is_some()) && g.edges().all(|(u, v)| c.get(u) != c.get(v))
}
