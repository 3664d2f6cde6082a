//! One record per reduction step, written as JSON lines.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::{Color, Vertex};
use crate::sp_tree::GadgetKind;

use super::dispatch::LemmaTag;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub depth: usize,
    pub n: usize,
    pub k: usize,
    pub tag: LemmaTag,
    pub poles: (Vertex, Vertex),
    /// Far pole of a series site.
    pub far_pole: Option<Vertex>,
    pub width: usize,
    pub mu: i64,
    pub gadget: GadgetKind,
    pub removed: Vec<Vertex>,
    pub fresh: Vec<Vertex>,
    pub added_edges: Vec<(Vertex, Vertex)>,
    pub region: Vec<Vertex>,
    /// Target multiset on the region as `(color, count)` pairs.
    pub target: Vec<(Color, usize)>,
    /// Colors of `F` given up by the step (fresh and recolored vertices).
    pub released: Vec<(Color, usize)>,
    pub profile_f: Vec<usize>,
    pub profile_g: Vec<usize>,
    pub fallback: bool,
    pub pole_neighbors_independent: bool,
    /// `None` when the site gives no reason to expect a forest.
    pub inner_forest: Option<bool>,
}

impl TraceRecord {
    /// `profile_g = profile_f - released + target`, color by color.
    pub fn conserved(&self) -> bool {
        let k = self.profile_f.len();
        if self.profile_g.len() != k {
            return false;
        }
        let mut expect: Vec<i64> = self.profile_f.iter().map(|&x| x as i64).collect();
        for &(c, n) in &self.released {
            if c == 0 || c as usize > k {
                return false;
            }
            expect[c as usize - 1] -= n as i64;
        }
        for &(c, n) in &self.target {
            if c == 0 || c as usize > k {
                return false;
            }
            expect[c as usize - 1] += n as i64;
        }
        expect
            .iter()
            .zip(&self.profile_g)
            .all(|(&e, &g)| e == g as i64)
    }
}

pub fn to_json_lines(records: &[TraceRecord]) -> Result<String> {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r)?);
        out.push('\n');
    }
    Ok(out)
}

pub fn from_json_lines(text: &str) -> Result<Vec<TraceRecord>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| Ok(serde_json::from_str(l)?))
        .collect()
}
