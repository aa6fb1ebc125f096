use std::collections::VecDeque;

use crate::clique_graph::EdgeId;
use crate::vertex_set::VertexSet;

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone)]
struct TrieNode {
    child: [u32; 2],
    leaf: VecDeque<EdgeId>,
}

impl TrieNode {
    fn new() -> Self {
        Self {
            child: [NONE, NONE],
            leaf: VecDeque::new(),
        }
    }
}

/// Binary trie over `n`-bit separator membership strings.
///
/// Level `v` branches on whether vertex `v` is in the separator, so vertex 0
/// is the root-most bit and every key has length exactly `n`. A leaf holds
/// the clique-graph edges carrying that separator, most recent first.
///
/// Removal is lazy: the owning clique graph filters dead handles on lookup and
/// calls [`SeparatorIndex::retain`] to compact a leaf.
#[derive(Debug, Clone)]
pub struct SeparatorIndex {
    n: usize,
    nodes: Vec<TrieNode>,
}

impl SeparatorIndex {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            nodes: vec![TrieNode::new()],
        }
    }

    pub fn key_len(&self) -> usize {
        self.n
    }

    fn find(&self, sep: &VertexSet) -> Option<usize> {
        let mut node = 0usize;
        for v in 0..self.n {
            let next = self.nodes[node].child[usize::from(sep.contains(v))];
            if next == NONE {
                return None;
            }
            node = next as usize;
        }
        Some(node)
    }

    /// Prepends `edge` to the leaf for `sep`, creating the path as needed.
    pub fn insert(&mut self, sep: &VertexSet, edge: EdgeId) {
        let mut node = 0usize;
        for v in 0..self.n {
            let bit = usize::from(sep.contains(v));
            let next = self.nodes[node].child[bit];
            node = if next == NONE {
                let id = self.nodes.len();
                self.nodes.push(TrieNode::new());
                self.nodes[node].child[bit] = id as u32;
                id
            } else {
                next as usize
            };
        }
        self.nodes[node].leaf.push_front(edge);
    }

    /// Handles stored under `sep`, including any not yet compacted away.
    pub fn get(&self, sep: &VertexSet) -> impl Iterator<Item = EdgeId> + '_ {
        self.find(sep)
            .into_iter()
            .flat_map(move |node| self.nodes[node].leaf.iter().copied())
    }

    pub fn retain<F: FnMut(EdgeId) -> bool>(&mut self, sep: &VertexSet, mut keep: F) {
        if let Some(node) = self.find(sep) {
            self.nodes[node].leaf.retain(|&e| keep(e));
        }
    }

    /// Number of trie nodes allocated so far.
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leaves_prepend_and_keys_are_exact() {
        let mut idx = SeparatorIndex::new(4);
        let s1: VertexSet = [1].into_iter().collect();
        let s12: VertexSet = [1, 2].into_iter().collect();
        idx.insert(&s1, EdgeId(0));
        idx.insert(&s12, EdgeId(1));
        idx.insert(&s1, EdgeId(2));
        assert_eq!(idx.get(&s1).collect::<Vec<_>>(), vec![EdgeId(2), EdgeId(0)]);
        assert_eq!(idx.get(&s12).collect::<Vec<_>>(), vec![EdgeId(1)]);
        assert_eq!(idx.get(&VertexSet::new()).count(), 0);
        idx.retain(&s1, |e| e != EdgeId(2));
        assert_eq!(idx.get(&s1).collect::<Vec<_>>(), vec![EdgeId(0)]);
    }

    #[test]
    fn empty_separator_has_full_length_key() {
        let mut idx = SeparatorIndex::new(3);
        idx.insert(&VertexSet::new(), EdgeId(7));
        // root + one node per level
        assert_eq!(idx.node_count(), 4);
        assert_eq!(idx.get(&VertexSet::new()).collect::<Vec<_>>(), vec![EdgeId(7)]);
    }
}
