//! Coloring two mutually non-adjacent vertex sets with colors of
//! multiplicity one or two.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{Color, Vertex};

/// Multiplicity (1 or 2) of each color still to be placed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MultiplicityVector {
    pub lambda: BTreeMap<Color, u8>,
}

impl MultiplicityVector {
    pub fn from_counts(counts: &BTreeMap<Color, usize>) -> Result<Self> {
        let mut lambda = BTreeMap::new();
        for (&c, &n) in counts {
            match n {
                0 => {}
                1 | 2 => {
                    lambda.insert(c, n as u8);
                }
                _ => {
                    return Err(Error::Invariant(format!(
                        "color {c} has multiplicity {n}, expected 1 or 2"
                    )))
                }
            }
        }
        Ok(MultiplicityVector { lambda })
    }

    /// Number of colors.
    pub fn m(&self) -> usize {
        self.lambda.len()
    }

    pub fn count_with(&self, mult: u8) -> usize {
        self.lambda.values().filter(|&&l| l == mult).count()
    }

    pub fn total(&self) -> usize {
        self.lambda.values().map(|&l| l as usize).sum()
    }
}

/// Colors `a1 ∪ a2` with every multiplicity-2 color used once on each side
/// and every multiplicity-1 color used once overall, so colors within a side
/// are pairwise distinct. Requires `Σλ = |A1| + |A2|` and `|A_i| <= m`,
/// which together force `|A_i| >= m₂`.
pub fn two_part_greedy(
    a1: &[Vertex],
    a2: &[Vertex],
    mv: &MultiplicityVector,
) -> Result<Vec<(Vertex, Color)>> {
    let m = mv.m();
    let m2 = mv.count_with(2);
    if mv.total() != a1.len() + a2.len() {
        return Err(Error::Invariant(format!(
            "multiplicities sum to {} for {} vertices",
            mv.total(),
            a1.len() + a2.len()
        )));
    }
    if a1.len() > m || a2.len() > m {
        return Err(Error::Invariant(format!(
            "side sizes {} and {} exceed {m} colors",
            a1.len(),
            a2.len()
        )));
    }
    debug_assert!(a1.len() >= m2 && a2.len() >= m2);
    let mut out = Vec::with_capacity(a1.len() + a2.len());
    let doubles = mv.lambda.iter().filter(|(_, &l)| l == 2).map(|(&c, _)| c);
    for (i, c) in doubles.enumerate() {
        out.push((a1[i], c));
        out.push((a2[i], c));
    }
    let rest = a1[m2..].iter().chain(&a2[m2..]);
    let singles = mv.lambda.iter().filter(|(_, &l)| l == 1).map(|(&c, _)| c);
    out.extend(rest.copied().zip(singles));
    Ok(out)
}
