//! Undirected model graphs and the chordality machinery built on
//! lexicographic breadth-first search.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vertex_set::VertexSet;

/// A simple undirected graph on the dense vertex range `0..n`, stored as
/// bitset adjacency rows.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Graph {
    n: usize,
    adj: Vec<VertexSet>,
}

impl Graph {
    /// The empty (null) graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            adj: vec![VertexSet::new(); n],
        }
    }

    /// The complete (saturated) graph on `n` vertices.
    pub fn complete(n: usize) -> Self {
        let full = VertexSet::full(n);
        Self {
            n,
            adj: (0..n).map(|v| full.without(v)).collect(),
        }
    }

    pub fn path(n: usize) -> Self {
        let mut g = Self::empty(n);
        for v in 1..n {
            g.add_edge(v - 1, v);
        }
        g
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Self::empty(n);
        for (u, v) in edges {
            g.check_vertex(u)?;
            g.check_vertex(v)?;
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    /// Adds the edge `(u, v)`; returns whether it was absent.
    ///
    /// Panics on a self-loop or an out-of-range vertex.
    pub fn add_edge(&mut self, u: usize, v: usize) -> bool {
        assert!(u != v, "self-loop on vertex {u}");
        assert!(u < self.n && v < self.n, "vertex out of range");
        self.adj[v].insert(u);
        self.adj[u].insert(v)
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        self.adj[v].remove(u);
        self.adj[u].remove(v)
    }

    pub fn neighbors(&self, v: usize) -> &VertexSet {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(VertexSet::len).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, in ascending order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|u| {
                self.adj[u]
                    .iter()
                    .filter(move |&v| v > u)
                    .map(move |v| (u, v))
            })
            .collect()
    }

    /// Non-adjacent pairs `(u, v)` with `u < v`, in ascending order.
    pub fn non_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.has_edge(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn is_clique(&self, s: &VertexSet) -> bool {
        s.iter().all(|v| s.without(v).is_subset(&self.adj[v]))
    }

    /// Subgraph induced on `0..n` after deleting every vertex in `s`'s edges
    /// (vertices keep their ids).
    pub fn without_vertices(&self, s: &VertexSet) -> Self {
        Self {
            n: self.n,
            adj: (0..self.n)
                .map(|v| {
                    if s.contains(v) {
                        VertexSet::new()
                    } else {
                        self.adj[v].difference(s)
                    }
                })
                .collect(),
        }
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}

/// Lexicographic breadth-first search from `start`.
///
/// Returns the visit order, which is the reverse of an elimination order.
/// Each next vertex carries the lexicographically highest label among the
/// remaining ones; remaining ties go to the smallest vertex id. Implemented
/// by partition refinement with classes kept in ascending id order.
pub fn lex_bfs(g: &Graph, start: usize) -> Vec<usize> {
    let n = g.n();
    if n == 0 {
        return Vec::new();
    }
    assert!(start < n, "start vertex out of range");
    let rest: Vec<usize> = (0..n).filter(|&v| v != start).collect();
    let mut classes: Vec<Vec<usize>> = vec![vec![start]];
    if !rest.is_empty() {
        classes.push(rest);
    }
    let mut order = Vec::with_capacity(n);
    while let Some(first) = classes.first_mut() {
        let v = first.remove(0);
        if first.is_empty() {
            classes.remove(0);
        }
        order.push(v);
        let nbrs = g.neighbors(v);
        let mut refined = Vec::with_capacity(classes.len() + 1);
        for class in classes.drain(..) {
            let (inside, outside): (Vec<usize>, Vec<usize>) =
                class.into_iter().partition(|&u| nbrs.contains(u));
            if !inside.is_empty() {
                refined.push(inside);
            }
            if !outside.is_empty() {
                refined.push(outside);
            }
        }
        classes = refined;
    }
    order
}

/// Whether eliminating vertices in `order` never creates a fill-in edge,
/// i.e. every vertex's later-ordered neighbors form a clique.
pub fn is_perfect_elimination(g: &Graph, order: &[usize]) -> Result<bool> {
    let n = g.n();
    if order.len() != n {
        return Err(Error::NotAPermutation);
    }
    let mut seen = VertexSet::new();
    for &v in order {
        if v >= n || !seen.insert(v) {
            return Err(Error::NotAPermutation);
        }
    }
    let mut later = VertexSet::full(n);
    for &v in order {
        later.remove(v);
        let succ = g.neighbors(v).intersection(&later);
        if !g.is_clique(&succ) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The perfect elimination order found by lex-BFS from vertex 0, or `None`
/// when the graph is not chordal.
pub fn perfect_elimination_order(g: &Graph) -> Option<Vec<usize>> {
    if g.n() == 0 {
        return Some(Vec::new());
    }
    let mut order = lex_bfs(g, 0);
    order.reverse();
    match is_perfect_elimination(g, &order) {
        Ok(true) => Some(order),
        _ => None,
    }
}

pub fn is_chordal(g: &Graph) -> bool {
    perfect_elimination_order(g).is_some()
}

/// Maximal cliques of a chordal graph, each once, in ascending
/// lexicographic order.
pub fn maximal_cliques(g: &Graph) -> Result<Vec<VertexSet>> {
    let order = perfect_elimination_order(g).ok_or(Error::NotChordal)?;
    let mut later = VertexSet::full(g.n());
    let mut candidates = Vec::with_capacity(g.n());
    for &v in &order {
        later.remove(v);
        candidates.push(g.neighbors(v).intersection(&later).with(v));
    }
    // Larger sets first so a candidate only needs checking against kept ones.
    candidates.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    candidates.dedup();
    let mut kept: Vec<VertexSet> = Vec::new();
    for c in candidates {
        if !kept.iter().any(|k| c.is_subset(k)) {
            kept.push(c);
        }
    }
    kept.sort();
    Ok(kept)
}

/// Connected components of `g - s`.
///
/// Vertices in `s` get `None`; every other vertex gets the smallest vertex id
/// of its component.
pub fn components_excluding(g: &Graph, s: &VertexSet) -> Vec<Option<usize>> {
    let n = g.n();
    let mut label = vec![None; n];
    let mut unvisited = VertexSet::full(n).difference(s);
    let mut stack = Vec::new();
    while let Some(root) = unvisited.first() {
        unvisited.remove(root);
        label[root] = Some(root);
        stack.push(root);
        while let Some(u) = stack.pop() {
            for w in g.neighbors(u).intersection(&unvisited).iter() {
                unvisited.remove(w);
                label[w] = Some(root);
                stack.push(w);
            }
        }
    }
    label
}

/// Whether `s` separates `x` from `y` in `g` (neither may be in `s`).
pub fn separates(g: &Graph, s: &VertexSet, x: &VertexSet, y: &VertexSet) -> bool {
    let comp = components_excluding(g, s);
    let xs: VertexSet = x.difference(s).iter().filter_map(|v| comp[v]).collect();
    y.difference(s)
        .iter()
        .filter_map(|v| comp[v])
        .all(|c| !xs.contains(c))
}

/// Chordality of `g` augmented with one extra vertex adjacent to every
/// vertex in `discrete`.
pub fn is_strongly_decomposable(g: &Graph, discrete: &VertexSet) -> bool {
    let n = g.n();
    let mut aug = Graph::empty(n + 1);
    for (u, v) in g.edges() {
        aug.add_edge(u, v);
    }
    for v in discrete.iter().filter(|&v| v < n) {
        aug.add_edge(n, v);
    }
    is_chordal(&aug)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[usize]) -> VertexSet {
        xs.iter().copied().collect()
    }

    fn cycle(n: usize) -> Graph {
        let mut g = Graph::path(n);
        g.add_edge(n - 1, 0);
        g
    }

    #[test]
    fn lex_bfs_examples() {
        assert_eq!(lex_bfs(&Graph::complete(3), 0), vec![0, 1, 2]);
        assert_eq!(lex_bfs(&Graph::path(4), 3), vec![3, 2, 1, 0]);
        assert_eq!(lex_bfs(&Graph::empty(1), 0), vec![0]);
    }

    #[test]
    fn perfect_elimination_examples() {
        assert!(is_perfect_elimination(&Graph::path(4), &[0, 1, 2, 3]).unwrap());
        assert!(is_perfect_elimination(&Graph::empty(4), &[2, 0, 3, 1]).unwrap());
        // every permutation of C4 forces a fill-in
        let c4 = cycle(4);
        let mut perm = vec![0, 1, 2, 3];
        for _ in 0..24 {
            assert!(!is_perfect_elimination(&c4, &perm).unwrap());
            next_permutation(&mut perm);
        }
    }

    fn next_permutation(p: &mut [usize]) {
        let Some(i) = (0..p.len().saturating_sub(1)).rev().find(|&i| p[i] < p[i + 1]) else {
            p.reverse();
            return;
        };
        let j = (i + 1..p.len()).rev().find(|&j| p[j] > p[i]).unwrap();
        p.swap(i, j);
        p[i + 1..].reverse();
    }

    #[test]
    fn perfect_elimination_rejects_non_permutations() {
        let g = Graph::path(3);
        assert_eq!(is_perfect_elimination(&g, &[0, 1]), Err(Error::NotAPermutation));
        assert_eq!(is_perfect_elimination(&g, &[0, 1, 1]), Err(Error::NotAPermutation));
        assert_eq!(is_perfect_elimination(&g, &[0, 1, 5]), Err(Error::NotAPermutation));
    }

    #[test]
    fn chordality_examples() {
        assert!(is_chordal(&Graph::path(4)));
        assert!(!is_chordal(&cycle(4)));
        assert!(!is_chordal(&cycle(5)));
        assert!(is_chordal(&Graph::empty(5)));
        assert!(is_chordal(&Graph::empty(0)));
        let mut c4 = cycle(4);
        c4.add_edge(0, 2);
        assert!(is_chordal(&c4));
    }

    #[test]
    fn maximal_clique_examples() {
        assert_eq!(
            maximal_cliques(&Graph::path(4)).unwrap(),
            vec![set(&[0, 1]), set(&[1, 2]), set(&[2, 3])]
        );
        assert_eq!(
            maximal_cliques(&Graph::empty(3)).unwrap(),
            vec![set(&[0]), set(&[1]), set(&[2])]
        );
        let g = Graph::from_edges(4, [(0, 1), (0, 2), (1, 2), (2, 3)]).unwrap();
        assert_eq!(
            maximal_cliques(&g).unwrap(),
            vec![set(&[0, 1, 2]), set(&[2, 3])]
        );
        assert_eq!(maximal_cliques(&cycle(4)), Err(Error::NotChordal));
    }

    #[test]
    fn component_examples() {
        let g = Graph::path(4);
        assert_eq!(
            components_excluding(&g, &set(&[1])),
            vec![Some(0), None, Some(2), Some(2)]
        );
        assert_eq!(components_excluding(&g, &set(&[])), vec![Some(0); 4]);
        assert_eq!(
            components_excluding(&g, &set(&[1, 2])),
            vec![Some(0), None, None, Some(3)]
        );
    }

    #[test]
    fn strong_decomposability_examples() {
        let p = Graph::path(4);
        assert!(is_strongly_decomposable(&p, &VertexSet::new()));
        assert!(is_strongly_decomposable(&p, &p.vertices()));
        assert!(!is_strongly_decomposable(&p, &set(&[0, 3])));
        assert!(!is_strongly_decomposable(&cycle(4), &VertexSet::new()));
    }

    #[test]
    fn from_edges_validates() {
        assert_eq!(Graph::from_edges(2, [(0, 0)]), Err(Error::SelfLoop(0)));
        assert_eq!(
            Graph::from_edges(2, [(0, 2)]),
            Err(Error::VertexOutOfRange { vertex: 2, n: 2 })
        );
    }
}
