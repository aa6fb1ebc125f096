//! Clique graphs of chordal graphs and the junction trees they contain.
//!
//! Nodes are the maximal cliques. Two cliques are joined iff their
//! intersection separates their residuals in the model graph. Cliques in
//! different connected components are therefore joined by edges with an
//! empty separator, which keeps the clique graph connected.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::{components_excluding, maximal_cliques, Graph};
use crate::separator_index::SeparatorIndex;
use crate::vertex_set::VertexSet;

/// Handle for a clique-graph node. Never reused within one clique graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CliqueId(pub u32);

/// Handle for a clique-graph edge. Never reused within one clique graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub u64);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CgEdge {
    /// Endpoints with `ends.0 < ends.1`.
    pub ends: (CliqueId, CliqueId),
    pub separator: VertexSet,
}

#[derive(Debug, Clone)]
struct Node {
    members: VertexSet,
    adj: BTreeMap<CliqueId, EdgeId>,
}

#[derive(Debug, Clone)]
pub struct CliqueGraph {
    n: usize,
    nodes: BTreeMap<CliqueId, Node>,
    edges: HashMap<EdgeId, CgEdge>,
    index: SeparatorIndex,
    next_clique: u32,
    next_edge: u64,
}

/// Id-free form of a clique graph, used to compare two clique graphs of the
/// same model graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalCliqueGraph {
    pub cliques: Vec<VertexSet>,
    /// `(smaller clique, larger clique, separator)`, sorted.
    pub edges: Vec<(VertexSet, VertexSet, VertexSet)>,
}

impl CliqueGraph {
    /// A clique graph with no nodes over a vertex range of size `n`.
    pub fn new(n: usize) -> Self {
        Self {
            n,
            nodes: BTreeMap::new(),
            edges: HashMap::new(),
            index: SeparatorIndex::new(n),
            next_clique: 0,
            next_edge: 0,
        }
    }

    /// Builds the clique graph of `g` from scratch.
    pub fn build(g: &Graph) -> Result<Self> {
        let cliques = maximal_cliques(g)?;
        let mut cg = Self::new(g.n());
        let ids: Vec<CliqueId> = cliques.iter().map(|c| cg.add_node(c.clone())).collect();
        // Group candidate pairs by separator so components are computed once each.
        let mut by_sep: BTreeMap<VertexSet, Vec<(usize, usize)>> = BTreeMap::new();
        for i in 0..cliques.len() {
            for j in i + 1..cliques.len() {
                by_sep
                    .entry(cliques[i].intersection(&cliques[j]))
                    .or_default()
                    .push((i, j));
            }
        }
        for (sep, pairs) in by_sep {
            let comp = components_excluding(g, &sep);
            for (i, j) in pairs {
                if residuals_separated(&comp, &cliques[i], &cliques[j], &sep) {
                    cg.add_edge(ids[i], ids[j]);
                }
            }
        }
        Ok(cg)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains_node(&self, id: CliqueId) -> bool {
        self.nodes.contains_key(&id)
    }

    /// Panics if `id` is not a live node.
    pub fn members(&self, id: CliqueId) -> &VertexSet {
        &self.nodes[&id].members
    }

    pub fn get_members(&self, id: CliqueId) -> Option<&VertexSet> {
        self.nodes.get(&id).map(|n| &n.members)
    }

    /// Nodes in ascending id order.
    pub fn cliques(&self) -> impl Iterator<Item = (CliqueId, &VertexSet)> + '_ {
        self.nodes.iter().map(|(&id, n)| (id, &n.members))
    }

    pub fn clique_ids(&self) -> Vec<CliqueId> {
        self.nodes.keys().copied().collect()
    }

    pub fn neighbors(&self, id: CliqueId) -> impl Iterator<Item = (CliqueId, EdgeId)> + '_ {
        self.nodes[&id].adj.iter().map(|(&c, &e)| (c, e))
    }

    pub fn degree(&self, id: CliqueId) -> usize {
        self.nodes[&id].adj.len()
    }

    pub fn edge(&self, e: EdgeId) -> Option<&CgEdge> {
        self.edges.get(&e)
    }

    pub fn edge_between(&self, c1: CliqueId, c2: CliqueId) -> Option<EdgeId> {
        self.nodes.get(&c1)?.adj.get(&c2).copied()
    }

    /// All edges ordered by endpoint ids.
    pub fn edges(&self) -> Vec<(EdgeId, &CgEdge)> {
        let mut out: Vec<_> = self.edges.iter().map(|(&id, e)| (id, e)).collect();
        out.sort_by_key(|(_, e)| e.ends);
        out
    }

    pub fn add_node(&mut self, members: VertexSet) -> CliqueId {
        let id = CliqueId(self.next_clique);
        self.next_clique += 1;
        self.nodes.insert(
            id,
            Node {
                members,
                adj: BTreeMap::new(),
            },
        );
        id
    }

    /// Removes a node and every edge incident to it.
    pub fn remove_node(&mut self, id: CliqueId) -> Option<VertexSet> {
        let node = self.nodes.remove(&id)?;
        for (other, e) in node.adj {
            if let Some(o) = self.nodes.get_mut(&other) {
                o.adj.remove(&id);
            }
            self.edges.remove(&e);
        }
        Some(node.members)
    }

    /// Joins two live nodes, with the separator set to their intersection.
    /// Returns `None` if they are already joined.
    pub fn add_edge(&mut self, c1: CliqueId, c2: CliqueId) -> Option<EdgeId> {
        assert_ne!(c1, c2, "clique-graph self-loop");
        if self.edge_between(c1, c2).is_some() {
            return None;
        }
        let separator = self.members(c1).intersection(self.members(c2));
        let id = EdgeId(self.next_edge);
        self.next_edge += 1;
        self.index.insert(&separator, id);
        self.nodes.get_mut(&c1).unwrap().adj.insert(c2, id);
        self.nodes.get_mut(&c2).unwrap().adj.insert(c1, id);
        self.edges.insert(
            id,
            CgEdge {
                ends: (c1.min(c2), c1.max(c2)),
                separator,
            },
        );
        Some(id)
    }

    pub fn remove_edge(&mut self, e: EdgeId) -> Option<CgEdge> {
        let edge = self.edges.remove(&e)?;
        let (a, b) = edge.ends;
        if let Some(n) = self.nodes.get_mut(&a) {
            n.adj.remove(&b);
        }
        if let Some(n) = self.nodes.get_mut(&b) {
            n.adj.remove(&a);
        }
        Some(edge)
    }

    /// Edges whose separator equals `s`, newest first, via the separator
    /// index (at most `n` trie levels plus the leaf length).
    pub fn index_lookup(&self, s: &VertexSet) -> Vec<EdgeId> {
        self.index
            .get(s)
            .filter(|e| self.edges.contains_key(e))
            .collect()
    }

    /// Drops handles of removed edges from the index leaf for `s`.
    pub fn compact_index(&mut self, s: &VertexSet) {
        let edges = &self.edges;
        self.index.retain(s, |e| edges.contains_key(&e));
    }

    pub fn canonical(&self) -> CanonicalCliqueGraph {
        let mut cliques: Vec<VertexSet> = self.nodes.values().map(|n| n.members.clone()).collect();
        cliques.sort();
        let mut edges: Vec<_> = self
            .edges
            .values()
            .map(|e| {
                let x = self.members(e.ends.0).clone();
                let y = self.members(e.ends.1).clone();
                let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
                (lo, hi, e.separator.clone())
            })
            .collect();
        edges.sort();
        CanonicalCliqueGraph { cliques, edges }
    }

    /// First violation of the closure property: for edges `(C1, C2)` and
    /// `(C2, C3)` with `C1 ∩ C2 ⊊ C2 ∩ C3`, the edge `(C1, C3)` must exist.
    pub fn closure_violation(&self) -> Option<(CliqueId, CliqueId, CliqueId)> {
        for (&c2, node) in &self.nodes {
            for (&c1, &e12) in &node.adj {
                let s12 = &self.edges[&e12].separator;
                for (&c3, &e23) in &node.adj {
                    if c3 == c1 {
                        continue;
                    }
                    let s23 = &self.edges[&e23].separator;
                    if s12.is_proper_subset(s23) && self.edge_between(c1, c3).is_none() {
                        return Some((c1, c2, c3));
                    }
                }
            }
        }
        None
    }

    /// First edge whose separator does not separate the residuals in `g`, or
    /// whose stored separator is not the endpoint intersection.
    pub fn separation_violation(&self, g: &Graph) -> Option<EdgeId> {
        self.edges().into_iter().find_map(|(id, e)| {
            let (c1, c2) = (self.members(e.ends.0), self.members(e.ends.1));
            let ok = c1.intersection(c2) == e.separator && edge_valid(g, c1, c2);
            (!ok).then_some(id)
        })
    }

    /// Maximum-weight spanning tree (weight = separator size) by Kruskal.
    /// Equal weights prefer the smaller `(CliqueId, CliqueId)` pair.
    pub fn junction_tree(&self) -> JunctionTree {
        let ids = self.clique_ids();
        let pos: HashMap<CliqueId, usize> = ids.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut edges = self.edges();
        edges.sort_by(|(_, x), (_, y)| {
            y.separator
                .len()
                .cmp(&x.separator.len())
                .then(x.ends.cmp(&y.ends))
        });
        let mut dsu = DisjointSets::new(ids.len());
        let mut tree_edges = Vec::new();
        for (_, e) in edges {
            let (i, j) = (pos[&e.ends.0], pos[&e.ends.1]);
            if dsu.union(i, j) {
                tree_edges.push((i, j, e.separator.clone()));
            }
        }
        let mut separators: Vec<VertexSet> = tree_edges.iter().map(|t| t.2.clone()).collect();
        separators.sort();
        JunctionTree {
            cliques: ids.iter().map(|c| self.members(*c).clone()).collect(),
            edges: tree_edges,
            separators,
        }
    }
}

fn residuals_separated(
    comp: &[Option<usize>],
    c1: &VertexSet,
    c2: &VertexSet,
    sep: &VertexSet,
) -> bool {
    let side1: VertexSet = c1.difference(sep).iter().filter_map(|v| comp[v]).collect();
    c2.difference(sep)
        .iter()
        .filter_map(|v| comp[v])
        .all(|c| !side1.contains(c))
}

/// Whether `c1 ∩ c2` separates `c1 ∖ c2` from `c2 ∖ c1` in `g`.
pub fn edge_valid(g: &Graph, c1: &VertexSet, c2: &VertexSet) -> bool {
    let sep = c1.intersection(c2);
    let comp = components_excluding(g, &sep);
    residuals_separated(&comp, c1, c2, &sep)
}

/// A junction tree: cliques, tree edges between clique positions, and the
/// sorted multiset of tree separators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JunctionTree {
    pub cliques: Vec<VertexSet>,
    pub edges: Vec<(usize, usize, VertexSet)>,
    pub separators: Vec<VertexSet>,
}

impl JunctionTree {
    /// Spanning and running-intersection check: the tree has
    /// `cliques.len() - 1` edges joining all cliques, and the intersection of
    /// any two cliques lies in every clique on the path between them.
    pub fn is_valid(&self) -> bool {
        let k = self.cliques.len();
        if k == 0 {
            return self.edges.is_empty();
        }
        if self.edges.len() != k - 1 {
            return false;
        }
        let mut adj = vec![Vec::new(); k];
        for (i, j, sep) in &self.edges {
            if *sep != self.cliques[*i].intersection(&self.cliques[*j]) {
                return false;
            }
            adj[*i].push(*j);
            adj[*j].push(*i);
        }
        for root in 0..k {
            // parent pointers of the tree rooted at `root`
            let mut parent = vec![usize::MAX; k];
            parent[root] = root;
            let mut stack = vec![root];
            while let Some(u) = stack.pop() {
                for &w in &adj[u] {
                    if parent[w] == usize::MAX {
                        parent[w] = u;
                        stack.push(w);
                    }
                }
            }
            if parent.contains(&usize::MAX) {
                return false;
            }
            for other in root + 1..k {
                let common = self.cliques[root].intersection(&self.cliques[other]);
                let mut cur = other;
                while cur != root {
                    if !common.is_subset(&self.cliques[cur]) {
                        return false;
                    }
                    cur = parent[cur];
                }
            }
        }
        true
    }
}

struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// Convenience: [`CliqueGraph::build`] that reports non-chordal input.
pub fn build(g: &Graph) -> Result<CliqueGraph> {
    CliqueGraph::build(g)
}
