//! Lifting a coloring of `F` back to `G`.
//!
//! Each branch first makes the assignments its proof prescribes and then
//! places the remaining colors of the target multiset. The result is checked
//! against the contract (proper, exact multiset on the region); a failure
//! hands the region to a bounded exhaustive search over the same contract.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{Color, Coloring, Graph, Vertex};

use super::dispatch::{LemmaTag, ReductionStep};
use super::greedy::{two_part_greedy, MultiplicityVector};

/// Node budget of a completion search.
pub const SEARCH_LIMIT: u64 = 200_000;

pub type Multiset = BTreeMap<Color, usize>;

fn take(ms: &mut Multiset, c: Color) -> Result<()> {
    match ms.get_mut(&c) {
        Some(n) if *n > 0 => {
            *n -= 1;
            if *n == 0 {
                ms.remove(&c);
            }
            Ok(())
        }
        _ => Err(Error::Invariant(format!("color {c} not available in the target multiset"))),
    }
}

/// Colors released from `F` (fresh and recolored vertices) plus the branch's
/// base of `t` copies of `1..=k` and `1..=r`.
pub fn target_multiset(step: &ReductionStep, alpha: &Coloring, k: usize) -> Result<Multiset> {
    let mut ms = Multiset::new();
    for v in step.fresh.iter().copied().chain(step.recolored()) {
        let c = alpha.get(v).ok_or(Error::PartialColoring(v))?;
        *ms.entry(c).or_default() += 1;
    }
    let (t, r) = step.base;
    for c in 1..=k as Color {
        let n = t + usize::from((c as usize) <= r);
        if n > 0 {
            *ms.entry(c).or_default() += n;
        }
    }
    Ok(ms)
}

/// `α` restricted to the vertices of `G` outside the region.
pub fn base_coloring(g: &Graph, step: &ReductionStep, alpha: &Coloring) -> Coloring {
    let mut col = alpha.restrict(g);
    for v in &step.region {
        col.assignment.remove(v);
    }
    col
}

/// Region colors equal `target` and no edge of `G` is monochromatic.
pub fn verify_extension(g: &Graph, col: &Coloring, region: &[Vertex], target: &Multiset) -> bool {
    let mut got = Multiset::new();
    for &v in region {
        match col.get(v) {
            Some(c) => *got.entry(c).or_default() += 1,
            None => return false,
        }
    }
    got == *target
        && region
            .iter()
            .all(|&v| g.neighbors(v).all(|u| col.get(u) != col.get(v)))
}

fn blocked(g: &Graph, col: &Coloring, v: Vertex, c: Color) -> bool {
    g.neighbors(v).any(|u| col.get(u) == Some(c))
}

/// Smallest color in `1..=k` outside `exclude` that no colored neighbor of
/// `v` uses.
fn avail(g: &Graph, col: &Coloring, v: Vertex, exclude: &[Color]) -> Option<Color> {
    (1..=col.k).find(|&c| !exclude.contains(&c) && !blocked(g, col, v, c))
}

struct Completion<'a> {
    g: &'a Graph,
    nodes: u64,
    limit: u64,
}

impl Completion<'_> {
    fn options(&self, col: &Coloring, v: Vertex, ms: &Multiset) -> Vec<Color> {
        ms.keys().copied().filter(|&c| !blocked(self.g, col, v, c)).collect()
    }

    fn go(&mut self, col: &mut Coloring, free: &mut Vec<Vertex>, ms: &mut Multiset) -> bool {
        if free.is_empty() {
            return true;
        }
        self.nodes += 1;
        if self.nodes > self.limit {
            return false;
        }
        // most constrained vertex first
        let (i, opts) = free
            .iter()
            .enumerate()
            .map(|(i, &v)| (i, self.options(col, v, ms)))
            .min_by_key(|(_, o)| o.len())
            .unwrap();
        let v = free.swap_remove(i);
        for c in opts {
            col.set(v, c);
            take(ms, c).unwrap();
            if self.go(col, free, ms) {
                return true;
            }
            *ms.entry(c).or_default() += 1;
            col.assignment.remove(&v);
        }
        free.push(v);
        let last = free.len() - 1;
        free.swap(i, last);
        false
    }
}

/// Colors `free` with exactly the colors of `ms` without creating a
/// monochromatic edge, or reports failure within `limit` search nodes.
pub fn complete(g: &Graph, col: &mut Coloring, free: &[Vertex], ms: &Multiset, limit: u64) -> bool {
    if free.len() != ms.values().sum::<usize>() {
        return false;
    }
    let mut search = Completion { g, nodes: 0, limit };
    let mut free = free.to_vec();
    let mut ms = ms.clone();
    search.go(col, &mut free, &mut ms)
}

/// Exhaustive fallback: any proper assignment of `target` to the region.
pub fn exhaustive_extend(
    g: &Graph,
    base: &Coloring,
    region: &[Vertex],
    target: &Multiset,
) -> Option<Coloring> {
    let mut col = base.clone();
    complete(g, &mut col, region, target, SEARCH_LIMIT).then_some(col)
}

struct Lift<'a> {
    g: &'a Graph,
    step: &'a ReductionStep,
    alpha: &'a Coloring,
    col: Coloring,
    ms: Multiset,
}

impl Lift<'_> {
    fn old(&self, v: Vertex) -> Result<Color> {
        self.alpha.get(v).ok_or(Error::PartialColoring(v))
    }

    fn put(&mut self, v: Vertex, c: Color) -> Result<()> {
        if self.col.get(v).is_some() {
            return Err(Error::Invariant(format!("vertex {v} colored twice")));
        }
        take(&mut self.ms, c)?;
        self.col.set(v, c);
        Ok(())
    }

    fn uncolored(&self, vs: &[Vertex]) -> Vec<Vertex> {
        vs.iter().copied().filter(|&v| self.col.get(v).is_none()).collect()
    }

    /// Places every remaining color on the remaining region vertices.
    fn finish(&mut self) -> Result<()> {
        let free = self.uncolored(&self.step.region);
        if !complete(self.g, &mut self.col, &free, &self.ms, SEARCH_LIMIT) {
            return Err(Error::Invariant("no completion of the prescribed assignment".into()));
        }
        self.ms.clear();
        Ok(())
    }

    /// Finishes with the two-sides greedy.
    fn finish_sides(&mut self) -> Result<()> {
        let (s1, s2) = &self.step.chosen.sides;
        let (a1, a2) = (self.uncolored(s1), self.uncolored(s2));
        let mv = MultiplicityVector::from_counts(&self.ms)?;
        for (v, c) in two_part_greedy(&a1, &a2, &mv)? {
            self.put(v, c)?;
        }
        if !self.uncolored(&self.step.region).is_empty() {
            return Err(Error::Invariant("region vertices outside both sides".into()));
        }
        Ok(())
    }

    fn mult(&self, c: Color) -> usize {
        self.ms.get(&c).copied().unwrap_or(0)
    }

    fn run(&mut self) -> Result<()> {
        let s = self.step;
        let ch = &s.chosen;
        let (a, b) = (s.a, s.b);
        let k = self.col.k;
        match s.tag {
            LemmaTag::CrystalDiamond | LemmaTag::Contraction => {
                let c0 = self.old(s.fresh[0])?;
                if !self.g.has_edge(a, b) {
                    self.put(a, c0)?;
                    self.put(b, c0)?;
                } else if s.tag == LemmaTag::CrystalDiamond {
                    let ca = avail(self.g, &self.col, a, &[c0]).ok_or_else(no_color)?;
                    self.put(a, ca)?;
                    let cb = avail(self.g, &self.col, b, &[c0]).ok_or_else(no_color)?;
                    self.put(b, cb)?;
                } else {
                    let ap = ch.a_prime.ok_or_else(|| Error::Invariant("missing a'".into()))?;
                    self.put(a, c0)?;
                    self.put(ap, c0)?;
                    let cb = avail(self.g, &self.col, b, &[c0]).ok_or_else(no_color)?;
                    self.put(b, cb)?;
                }
                self.finish()
            }
            LemmaTag::InnerDeletion => {
                let w = s.width as Color;
                let (ca, cb) = (self.old(a)?, self.old(b)?);
                // both are set only when the poles are adjacent in `F`
                for (p, c) in [(ch.a_prime, ca), (ch.b_prime, cb)] {
                    if let (Some(p), true) = (p, c <= w) {
                        self.put(p, c)?;
                    }
                }
                self.finish()
            }
            LemmaTag::PoleDeletion => {
                let ca = avail(self.g, &self.col, a, &[]).ok_or_else(no_color)?;
                self.put(a, ca)?;
                let cb = self.old(b)?;
                if ca != cb {
                    self.put(ch.b_prime.unwrap(), cb)?;
                }
                self.finish()
            }
            LemmaTag::WidthK => {
                let (ca, cb) = (self.old(a)?, self.old(b)?);
                if let Some(bp) = ch.b_prime.filter(|_| k >= 4) {
                    let na = avail(self.g, &self.col, a, &[ca, cb]).ok_or_else(no_color)?;
                    self.put(a, na)?;
                    self.put(bp, cb)?;
                } else if ch.b_prime.is_none() {
                    // `b` has no inner neighbor, so its color is unconstrained
                    let na = avail(self.g, &self.col, a, &[ca]).ok_or_else(no_color)?;
                    self.put(a, na)?;
                } else {
                    self.put(a, cb)?;
                }
                self.put(ch.pair[0], ca)?;
                self.put(ch.pair[1], ca)?;
                self.finish()
            }
            LemmaTag::ParallelSmall => {
                let (ca, cb) = (self.old(a)?, self.old(b)?);
                self.put(ch.u1.unwrap(), cb)?;
                self.put(ch.u2.unwrap(), ca)?;
                let triple = self.ms.iter().find(|(_, &n)| n == 3).map(|(&c, _)| c);
                if let Some(x) = triple {
                    let (s1, s2) = (self.uncolored(&ch.sides.0), self.uncolored(&ch.sides.1));
                    let pair = s1.iter().enumerate().find_map(|(i, &p)| {
                        s1[i + 1..].iter().find(|&&q| !self.g.has_edge(p, q)).map(|&q| (p, q))
                    });
                    let (Some((p, q)), Some(&r)) = (pair, s2.first()) else {
                        return Err(Error::Invariant("no room for the triple color".into()));
                    };
                    self.put(p, x)?;
                    self.put(q, x)?;
                    self.put(r, x)?;
                }
                self.finish_sides()
            }
            LemmaTag::ParallelLarge => {
                let (ca, cb) = (self.old(a)?, self.old(b)?);
                for (ws, c) in [(&ch.w2, ca), (&ch.w1, cb)] {
                    for &w in ws.iter().take(self.mult(c)) {
                        self.put(w, c)?;
                    }
                }
                self.finish_sides()
            }
            LemmaTag::ParallelDominated => {
                let cb = self.old(b)?;
                let ca = self
                    .ms
                    .iter()
                    .filter(|(&c, &n)| n == 1 && c != cb && !blocked(self.g, &self.col, a, c))
                    .map(|(&c, _)| c)
                    .next()
                    .ok_or_else(no_color)?;
                self.put(a, ca)?;
                let mut spots = Vec::new();
                for side in [&ch.sides.0, &ch.sides.1] {
                    spots.extend(side.iter().copied().find(|&x| !self.g.has_edge(b, x)));
                }
                for &x in spots.iter().take(self.mult(cb)) {
                    self.put(x, cb)?;
                }
                self.finish_sides()
            }
            LemmaTag::SeriesIndependent => {
                let c = s.c.unwrap();
                let (ca, cc) = (self.old(a)?, self.old(c)?);
                let gamma = self
                    .ms
                    .iter()
                    .find(|(&x, &n)| n == 1 && x != ca && x != cc)
                    .map(|(&x, _)| x)
                    .ok_or_else(no_color)?;
                self.put(b, gamma)?;
                // α(a) goes right of b or on non-neighbors of a, α(c)
                // symmetrically; two copies go one per side when possible,
                // otherwise on a non-adjacent pair within one side
                let (left, right) = (ch.sides.0.clone(), ch.sides.1.clone());
                let inner: Vec<Vertex> = left.iter().chain(&right).copied().chain([b]).collect();
                let attached = |p: Vertex| inner.iter().any(|&x| self.g.has_edge(p, x));
                for (color, pole, near, far) in [(ca, a, &left, &right), (cc, c, &right, &left)] {
                    // a pole without inner neighbors leaves its color unconstrained
                    if !attached(pole) {
                        continue;
                    }
                    let free = |x: &Vertex| self.col.get(*x).is_none() && !blocked(self.g, &self.col, *x, color);
                    let near: Vec<Vertex> = near
                        .iter()
                        .copied()
                        .filter(|&x| !self.g.has_edge(pole, x))
                        .filter(free)
                        .collect();
                    let far: Vec<Vertex> = far.iter().copied().filter(free).collect();
                    let spots = match self.mult(color) {
                        0 => Vec::new(),
                        1 => far.iter().chain(&near).take(1).copied().collect(),
                        _ => {
                            let pair = |p: &[Vertex], q: &[Vertex]| {
                                p.iter().find_map(|&x| {
                                    q.iter().find(|&&y| y != x && !self.g.has_edge(x, y)).map(|&y| vec![x, y])
                                })
                            };
                            pair(&far, &near)
                                .or_else(|| pair(&far, &far))
                                .or_else(|| pair(&near, &near))
                                .unwrap_or_default()
                        }
                    };
                    for x in spots {
                        self.put(x, color)?;
                    }
                }
                self.finish_sides()
            }
            LemmaTag::SeriesClique => {
                let c = s.c.unwrap();
                let (ca, cb, cc) = (self.old(a)?, self.old(b)?, self.old(c)?);
                let gamma = (1..=k)
                    .find(|x| ![ca, cb, cc].contains(x))
                    .ok_or_else(no_color)?;
                self.put(b, gamma)?;
                self.put(ch.d.unwrap(), cb)?;
                if let Some(e) = ch.e {
                    self.put(e, cc)?;
                }
                self.finish()
            }
        }
    }
}

fn no_color() -> Error {
    Error::Invariant("no admissible color for a pole".into())
}

/// The branch's own extension. The caller verifies the result.
pub fn literal_extend(
    g: &Graph,
    step: &ReductionStep,
    alpha: &Coloring,
    target: &Multiset,
) -> Result<Coloring> {
    let mut lift = Lift {
        g,
        step,
        alpha,
        col: base_coloring(g, step, alpha),
        ms: target.clone(),
    };
    lift.run()?;
    Ok(lift.col)
}
