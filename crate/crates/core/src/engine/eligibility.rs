use std::collections::BTreeSet;

use crate::clique_graph::{CliqueGraph, CliqueId};
use crate::graph::Graph;
use crate::vertex_set::VertexSet;

/// Symmetric `n × n` matrix of pairs whose addition keeps the model chordal,
/// each with a clique-graph edge that certifies it.
///
/// A witness is only a hint: it may name cliques that have since been
/// absorbed or removed, and callers must validate it before use.
#[derive(Debug, Clone)]
pub struct ForwardEligibility {
    n: usize,
    matrix: Vec<bool>,
    witness: Vec<Option<(CliqueId, CliqueId)>>,
}

impl ForwardEligibility {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            matrix: vec![false; n * n],
            witness: vec![None; n * n],
        }
    }

    /// Fills the matrix from every clique-graph edge `(C1, C2)`: each pair in
    /// `(C1 ∖ S) × (C2 ∖ S)` is eligible with that edge as witness.
    pub fn from_clique_graph(cg: &CliqueGraph) -> Self {
        let mut e = Self::new(cg.n());
        for (_, edge) in cg.edges() {
            let (c1, c2) = edge.ends;
            let r1 = cg.members(c1).difference(&edge.separator);
            let r2 = cg.members(c2).difference(&edge.separator);
            for x in r1.iter() {
                for y in r2.iter() {
                    e.set(x, y, (c1, c2));
                }
            }
        }
        e
    }

    fn idx(&self, a: usize, b: usize) -> usize {
        a.min(b) * self.n + a.max(b)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_eligible(&self, a: usize, b: usize) -> bool {
        a != b && a < self.n && b < self.n && self.matrix[self.idx(a, b)]
    }

    /// Marks `(a, b)` eligible; `witness` is oriented so that `a` lies in its
    /// first clique.
    pub fn set(&mut self, a: usize, b: usize, witness: (CliqueId, CliqueId)) {
        let i = self.idx(a, b);
        self.matrix[i] = true;
        self.witness[i] = Some(if a < b { witness } else { (witness.1, witness.0) });
    }

    pub fn clear(&mut self, a: usize, b: usize) {
        let i = self.idx(a, b);
        self.matrix[i] = false;
        self.witness[i] = None;
    }

    /// Stored witness for `(a, b)` oriented so that `a` is in the first clique.
    pub fn witness(&self, a: usize, b: usize) -> Option<(CliqueId, CliqueId)> {
        let w = self.witness[self.idx(a, b)]?;
        Some(if a < b { w } else { (w.1, w.0) })
    }

    /// Eligible pairs `(a, b)`, `a < b`, ascending.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in a + 1..self.n {
                if self.matrix[a * self.n + b] {
                    out.push((a, b));
                }
            }
        }
        out
    }
}

/// Per-edge count of maximal cliques containing it. An edge is deletable
/// iff its count is exactly one.
#[derive(Debug, Clone)]
pub struct DeleteEligibility {
    n: usize,
    counts: Vec<u32>,
}

impl DeleteEligibility {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            counts: vec![0; n * n],
        }
    }

    pub fn from_clique_graph(cg: &CliqueGraph) -> Self {
        let mut d = Self::new(cg.n());
        for (_, c) in cg.cliques() {
            d.add_clique(c);
        }
        d
    }

    fn pairs_of(c: &VertexSet) -> impl Iterator<Item = (usize, usize)> + '_ {
        c.iter()
            .flat_map(move |x| c.iter().filter(move |&y| y > x).map(move |y| (x, y)))
    }

    pub fn add_clique(&mut self, c: &VertexSet) {
        for (x, y) in Self::pairs_of(c) {
            self.counts[x * self.n + y] += 1;
        }
    }

    pub fn remove_clique(&mut self, c: &VertexSet) {
        for (x, y) in Self::pairs_of(c) {
            self.counts[x * self.n + y] -= 1;
        }
    }

    pub fn membership_count(&self, a: usize, b: usize) -> u32 {
        self.counts[a.min(b) * self.n + a.max(b)]
    }

    pub fn is_deletable(&self, a: usize, b: usize) -> bool {
        a != b && self.membership_count(a, b) == 1
    }

    /// Deletable edges `(a, b)`, `a < b`, ascending.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in a + 1..self.n {
                if self.counts[a * self.n + b] == 1 {
                    out.push((a, b));
                }
            }
        }
        out
    }
}

/// Pairs made eligible for addition by some clique-graph edge: `a ∈ C1`,
/// `b ∈ C2`, `(a, b) ∉ E`. Returned as `a < b`, ascending.
pub fn eligible_additions(cg: &CliqueGraph, g: &Graph) -> Vec<(usize, usize)> {
    let mut out = BTreeSet::new();
    for (_, edge) in cg.edges() {
        let (c1, c2) = (cg.members(edge.ends.0), cg.members(edge.ends.1));
        for x in c1.iter() {
            for y in c2.iter() {
                if x != y && !g.has_edge(x, y) {
                    out.insert((x.min(y), x.max(y)));
                }
            }
        }
    }
    out.into_iter().collect()
}

/// Model edges contained in exactly one maximal clique, ascending.
pub fn eligible_deletions(g: &Graph, cg: &CliqueGraph) -> Vec<(usize, usize)> {
    let counts = DeleteEligibility::from_clique_graph(cg);
    g.edges()
        .into_iter()
        .filter(|&(a, b)| counts.is_deletable(a, b))
        .collect()
}
