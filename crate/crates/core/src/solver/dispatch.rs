//! Choosing a reduction for a site and building the reduced graph `F`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::sp_tree::GadgetKind;

use super::site::{JoinKind, ReductionSite};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum LemmaTag {
    CrystalDiamond,
    InnerDeletion,
    Contraction,
    PoleDeletion,
    WidthK,
    ParallelSmall,
    ParallelLarge,
    ParallelDominated,
    SeriesIndependent,
    SeriesClique,
}

impl LemmaTag {
    pub const ALL: [LemmaTag; 10] = [
        LemmaTag::CrystalDiamond,
        LemmaTag::InnerDeletion,
        LemmaTag::Contraction,
        LemmaTag::PoleDeletion,
        LemmaTag::WidthK,
        LemmaTag::ParallelSmall,
        LemmaTag::ParallelLarge,
        LemmaTag::ParallelDominated,
        LemmaTag::SeriesIndependent,
        LemmaTag::SeriesClique,
    ];
}

/// Vertices singled out by a branch for the extension.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Chosen {
    pub a_prime: Option<Vertex>,
    pub b_prime: Option<Vertex>,
    pub u1: Option<Vertex>,
    pub u2: Option<Vertex>,
    pub w1: Vec<Vertex>,
    pub w2: Vec<Vertex>,
    /// Independent pair used by WIDTH_K.
    pub pair: Vec<Vertex>,
    /// SERIES_CLIQUE: `d` receives the middle vertex's color, `e` the far pole's.
    pub d: Option<Vertex>,
    pub e: Option<Vertex>,
    /// Two mutually non-adjacent sides of the inner vertices.
    pub sides: (Vec<Vertex>, Vec<Vertex>),
}

#[derive(Clone, Debug)]
pub struct ReductionStep {
    pub tag: LemmaTag,
    /// Poles as named by the branch: `a` is the pole the proof singles out.
    pub a: Vertex,
    pub b: Vertex,
    /// Far pole of a series site (`b` is then the middle vertex).
    pub c: Option<Vertex>,
    pub width: usize,
    pub mu: i64,
    pub f: Graph,
    /// Vertices of `G` missing from `F`.
    pub removed: Vec<Vertex>,
    /// Vertices of `F` missing from `G`.
    pub fresh: Vec<Vertex>,
    pub added_edges: Vec<(Vertex, Vertex)>,
    /// Vertices of `G` colored by the extension.
    pub region: Vec<Vertex>,
    /// `(t, r)`: the region receives the colors released from `F` plus
    /// `t` copies of `1..=k` plus `1..=r`.
    pub base: (usize, usize),
    pub chosen: Chosen,
}

impl ReductionStep {
    /// Region vertices that also live in `F` and so carry a color there.
    pub fn recolored(&self) -> Vec<Vertex> {
        self.region
            .iter()
            .copied()
            .filter(|v| self.f.contains(*v))
            .collect()
    }
}

/// Why a built `F` cannot be recursed on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Inadmissible {
    NotSmaller,
    Degree { max_degree: usize, bound: usize },
    K4Minor,
}

pub fn check_admissible(g: &Graph, step: &ReductionStep, k: usize) -> Result<(), Inadmissible> {
    if step.f.vertex_count() >= g.vertex_count() {
        return Err(Inadmissible::NotSmaller);
    }
    let bound = 2 * k - 3;
    let max_degree = step.f.max_degree();
    if max_degree > bound {
        return Err(Inadmissible::Degree { max_degree, bound });
    }
    if step.f.has_k4_minor() {
        return Err(Inadmissible::K4Minor);
    }
    Ok(())
}

fn non_neighbors(g: &Graph, p: Vertex, of: &[Vertex]) -> Vec<Vertex> {
    of.iter().copied().filter(|&x| !g.has_edge(p, x)).collect()
}

fn dominates(g: &Graph, p: Vertex, of: &[Vertex]) -> bool {
    of.iter().all(|&x| g.has_edge(p, x))
}

/// Lexicographically smallest independent pair of `of`.
fn independent_pair(g: &Graph, of: &[Vertex]) -> Option<(Vertex, Vertex)> {
    of.iter().enumerate().find_map(|(i, &x)| {
        of[i + 1..]
            .iter()
            .find(|&&y| !g.has_edge(x, y))
            .map(|&y| (x, y))
    })
}

struct Builder<'a> {
    g: &'a Graph,
    site: &'a ReductionSite,
    k: usize,
    inner: Vec<Vertex>,
}

impl Builder<'_> {
    fn step(&self, tag: LemmaTag, a: Vertex, b: Vertex) -> ReductionStep {
        ReductionStep {
            tag,
            a,
            b,
            c: None,
            width: self.site.width,
            mu: self.site.mu,
            f: Graph::new(),
            removed: Vec::new(),
            fresh: Vec::new(),
            added_edges: Vec::new(),
            region: Vec::new(),
            base: (1, 0),
            chosen: Chosen::default(),
        }
    }

    /// `F = G - del` plus the given edges.
    fn delete(&self, s: &mut ReductionStep, del: &[Vertex], edges: &[(Vertex, Vertex)]) -> Result<()> {
        let set: BTreeSet<Vertex> = del.iter().copied().collect();
        let mut f = self.g.delete_set(&set)?;
        for &(u, v) in edges {
            if !f.has_edge(u, v) {
                f.insert_edge(u, v)?;
                s.added_edges.push((u.min(v), u.max(v)));
            }
        }
        s.f = f;
        s.removed = set.iter().copied().collect();
        s.region = s.removed.clone();
        Ok(())
    }

    fn contract(&self, s: &mut ReductionStep) -> Result<()> {
        let vs = self.site.vertex_set();
        let (f, c) = self.g.contract_set(&vs)?;
        s.f = f;
        s.fresh = vec![c];
        s.removed = vs.iter().copied().collect();
        s.region = s.removed.clone();
        Ok(())
    }

    fn poles_both_ways(&self) -> [(Vertex, Vertex); 2] {
        let (a, b) = self.site.poles;
        [(a, b), (b, a)]
    }

    fn crystal_diamond(&self) -> Result<Option<ReductionStep>> {
        let w = self.k - 1;
        if !matches!(self.site.gadget, GadgetKind::Crystal(i) | GadgetKind::Diamond(i) if i == w) {
            return Ok(None);
        }
        let (a, b) = self.site.poles;
        let mut s = self.step(LemmaTag::CrystalDiamond, a, b);
        self.contract(&mut s)?;
        Ok(Some(s))
    }

    /// The pole edge a reduction adds, unless a pole has no neighbor in
    /// `IN(H)`: such a pole puts no constraint on the extension, and the edge
    /// could only push its degree past `2k - 3`.
    fn pole_edge(&self, a: Vertex, b: Vertex) -> Vec<(Vertex, Vertex)> {
        let detached = |p: Vertex| non_neighbors(self.g, p, &self.inner).len() == self.inner.len();
        if detached(a) || detached(b) {
            Vec::new()
        } else {
            vec![(a, b)]
        }
    }

    fn inner_deletion(&self) -> Result<Option<ReductionStep>> {
        let (a, b) = self.site.poles;
        let na = non_neighbors(self.g, a, &self.inner);
        let nb = non_neighbors(self.g, b, &self.inner);
        let edge = self.pole_edge(a, b);
        let (ap, bp) = if edge.is_empty() && !self.g.has_edge(a, b) {
            // only a pole with inner neighbors needs its color placed, on
            // one of its non-neighbors
            let pick = |non: &[Vertex]| match non.len() == self.inner.len() {
                true => Some(None),
                false => non.first().map(|&x| Some(x)),
            };
            let (Some(ap), Some(bp)) = (pick(&na), pick(&nb)) else { return Ok(None) };
            (ap, bp)
        } else {
            let pick = na
                .iter()
                .flat_map(|&x| nb.iter().map(move |&y| (x, y)))
                .find(|(x, y)| x != y);
            let Some((x, y)) = pick else { return Ok(None) };
            (Some(x), Some(y))
        };
        let mut s = self.step(LemmaTag::InnerDeletion, a, b);
        self.delete(&mut s, &self.inner, &edge)?;
        s.base = (0, self.site.width);
        s.chosen.a_prime = ap;
        s.chosen.b_prime = bp;
        Ok(Some(s))
    }

    fn contraction(&self) -> Result<Option<ReductionStep>> {
        let (a, b) = self.site.poles;
        let h = self.g.induced(&self.site.vertex_set());
        if h.degree(a) + h.degree(b) + 3 < 2 * self.k {
            return Ok(None);
        }
        // orient so that `a` has an inner non-neighbor when the poles are adjacent
        let (a, b) = if non_neighbors(self.g, a, &self.inner).is_empty() { (b, a) } else { (a, b) };
        let mut s = self.step(LemmaTag::Contraction, a, b);
        s.chosen.a_prime = non_neighbors(self.g, a, &self.inner).first().copied();
        self.contract(&mut s)?;
        Ok(Some(s))
    }

    fn pole_deletion(&self) -> Result<Option<ReductionStep>> {
        for (a, b) in self.poles_both_ways() {
            let dom = self.inner.len() - non_neighbors(self.g, a, &self.inner).len();
            let Some(&bp) = non_neighbors(self.g, b, &self.inner).first() else { continue };
            if dom + 2 < self.k {
                continue;
            }
            let mut s = self.step(LemmaTag::PoleDeletion, a, b);
            let mut del = self.inner.clone();
            del.push(a);
            self.delete(&mut s, &del, &[])?;
            s.chosen.b_prime = Some(bp);
            return Ok(Some(s));
        }
        Ok(None)
    }

    fn width_k(&self) -> Result<Option<ReductionStep>> {
        for (a, b) in self.poles_both_ways() {
            if !dominates(self.g, a, &self.inner) {
                continue;
            }
            let Some(&bp) = non_neighbors(self.g, b, &self.inner).first() else { continue };
            let edge = self.pole_edge(a, b);
            let bp = (!edge.is_empty() || self.g.has_edge(a, b)).then_some(bp);
            let mut s = self.step(LemmaTag::WidthK, a, b);
            let rest: Vec<Vertex> = self.inner.iter().copied().filter(|&x| Some(x) != bp).collect();
            let pool = if self.k == 3 { &self.inner } else { &rest };
            let Some((x, y)) = independent_pair(self.g, pool) else { continue };
            self.delete(&mut s, &self.inner, &edge)?;
            s.region.push(a);
            s.region.sort_unstable();
            s.chosen.b_prime = bp;
            s.chosen.pair = vec![x, y];
            return Ok(Some(s));
        }
        Ok(None)
    }

    /// Sides of a parallel site: components dominated by `a` against the rest.
    fn parallel_sides(&self, a: Vertex) -> (Vec<Vertex>, Vec<Vertex>) {
        let mut s1 = Vec::new();
        let mut s2 = Vec::new();
        for comp in &self.site.components {
            if dominates(self.g, a, comp) {
                s1.extend(comp);
            } else {
                s2.extend(comp);
            }
        }
        s1.sort_unstable();
        s2.sort_unstable();
        (s1, s2)
    }

    fn parallel(&self) -> Result<Option<ReductionStep>> {
        let mu = self.site.mu;
        if self.site.join != JoinKind::Parallel || mu < 1 {
            return Ok(None);
        }
        let mu = mu as usize;
        for (a, b) in self.poles_both_ways() {
            if dominates(self.g, a, &self.inner) {
                let mut s = self.step(LemmaTag::ParallelDominated, a, b);
                let mut del = self.inner.clone();
                del.push(a);
                self.delete(&mut s, &del, &[])?;
                s.base = (1, mu + 1);
                s.chosen.sides = self.site.parts.clone().unwrap_or_default();
                return Ok(Some(s));
            }
        }
        let (a, b) = self.site.poles;
        let (s1, s2) = self.parallel_sides(a);
        if s1.is_empty() || s2.is_empty() {
            return Ok(None);
        }
        let (u1, u2) = (non_neighbors(self.g, b, &s1), non_neighbors(self.g, a, &s2));
        let mut s;
        if mu <= 2 {
            let (Some(&u1), Some(&u2)) = (u1.first(), u2.first()) else { return Ok(None) };
            s = self.step(LemmaTag::ParallelSmall, a, b);
            self.delete(&mut s, &self.inner, &[(a, b)])?;
            // fresh ids come from G so they never reuse a deleted region vertex
            let first = self.g.fresh_id();
            for v in first..first + mu as Vertex {
                s.f.add_vertex(v);
                s.f.insert_edge(a, v)?;
                s.f.insert_edge(v, b)?;
                s.fresh.push(v);
            }
            s.chosen.u1 = Some(u1);
            s.chosen.u2 = Some(u2);
        } else {
            let (Some(w1), Some(w2)) = (independent_pair(self.g, &u1), independent_pair(self.g, &u2))
            else {
                return Ok(None);
            };
            s = self.step(LemmaTag::ParallelLarge, a, b);
            self.delete(&mut s, &self.inner, &[(a, b)])?;
            s.base = (1, mu);
            s.chosen.w1 = vec![w1.0, w1.1];
            s.chosen.w2 = vec![w2.0, w2.1];
        }
        s.chosen.sides = (s1, s2);
        Ok(Some(s))
    }

    fn series(&self) -> Result<Option<ReductionStep>> {
        if self.site.join != JoinKind::Series || self.site.mu < 1 {
            return Ok(None);
        }
        let (Some(mid), Some((p1, p2))) = (self.site.middle, self.site.parts.as_ref()) else {
            return Ok(None);
        };
        let (a, c) = self.site.poles;
        let i1: Vec<Vertex> = p1.iter().copied().filter(|&x| x != mid).collect();
        let i2: Vec<Vertex> = p2.iter().copied().filter(|&x| x != mid).collect();
        let pair1 = independent_pair(self.g, &i1);
        let pair2 = independent_pair(self.g, &i2);
        if pair1.is_some() && pair2.is_some() {
            let mut s = self.step(LemmaTag::SeriesIndependent, a, mid);
            s.c = Some(c);
            self.delete(&mut s, &self.inner, &self.pole_edge(a, c))?;
            s.base = (1, self.site.width - self.k);
            s.chosen.sides = (i1, i2);
            return Ok(Some(s));
        }
        // the clique side becomes H1, with `a` its outer pole
        let is_clique_pair = |v: &[Vertex]| v.len() == 2 && self.g.has_edge(v[0], v[1]);
        let (a, c, i1, i2) = if is_clique_pair(&i1) {
            (a, c, i1, i2)
        } else if is_clique_pair(&i2) {
            (c, a, i2, i1)
        } else {
            return Ok(None);
        };
        if self.k < 4 || i2.len() + 2 != self.k {
            return Ok(None);
        }
        let mut s = self.step(LemmaTag::SeriesClique, a, mid);
        s.c = Some(c);
        let mut del = i1.clone();
        del.extend(&i2);
        // `d` takes α(mid) and `e` takes α(c). The pair needs α(mid) != α(c),
        // and each pole edge is only needed where that pole sees the vertex.
        let (d, e) = if !self.g.has_edge(a, i1[0]) && self.g.has_edge(a, i1[1]) {
            (i1[1], i1[0])
        } else {
            (i1[0], i1[1])
        };
        let mut edges = vec![(mid, c)];
        if self.g.has_edge(a, d) {
            edges.push((a, mid));
        }
        if self.g.has_edge(a, e) {
            edges.push((a, c));
        }
        self.delete(&mut s, &del, &edges)?;
        s.region.push(mid);
        s.region.sort_unstable();
        s.chosen.d = Some(d);
        s.chosen.e = Some(e);
        s.chosen.sides = (i1, i2);
        Ok(Some(s))
    }
}

/// Every branch whose hypotheses hold at `site`, in ladder order, with `F`
/// built. Admissibility of `F` is left to the caller.
pub fn applicable_steps(g: &Graph, site: &ReductionSite, k: usize) -> Result<Vec<ReductionStep>> {
    let b = Builder {
        g,
        site,
        k,
        inner: site.inner.iter().copied().collect(),
    };
    let w = site.width;
    let mut out = Vec::new();
    if matches!(site.gadget, GadgetKind::CrystalPrime(i) | GadgetKind::DiamondPrime(i) if i + 1 == k) {
        // handled through the claw sub-selection, which has width k - 1
        return Ok(out);
    }
    if site.join == JoinKind::Atomic {
        if (1..=k).contains(&w) {
            out.extend(b.inner_deletion()?);
        }
        return Ok(out);
    }
    out.extend(b.crystal_diamond()?);
    if w + 1 == k {
        out.extend(b.inner_deletion()?);
        out.extend(b.contraction()?);
        out.extend(b.pole_deletion()?);
    } else if w == k {
        // inner deletion is sound for every width up to k; the width-k
        // argument assumes it has been ruled out
        out.extend(b.inner_deletion()?);
        out.extend(b.width_k()?);
    } else if w > k {
        out.extend(b.parallel()?);
        out.extend(b.series()?);
    }
    Ok(out)
}

/// The branch the case ladder selects for `site`.
pub fn dispatch(g: &Graph, site: &ReductionSite, k: usize) -> Result<ReductionStep> {
    applicable_steps(g, site, k)?.into_iter().next().ok_or_else(|| {
        Error::Invariant(format!(
            "no reduction applies to the site with poles {:?} and width {}",
            site.poles, site.width
        ))
    })
}
