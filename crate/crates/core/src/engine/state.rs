//! The model graph together with its incrementally maintained clique graph
//! and eligibility structures.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::eligibility::{DeleteEligibility, ForwardEligibility};
use crate::clique_graph::{CliqueGraph, CliqueId};
use crate::error::{Error, Result};
use crate::graph::{components_excluding, Graph};
use crate::vertex_set::VertexSet;

/// Deliberate defects for exercising the verification harness.
#[doc(hidden)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FaultInjection {
    /// Keep clique-graph edges that a forward step should have removed.
    pub skip_stale_edge_removal: bool,
}

/// What a forward step changed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AddOutcome {
    pub v_a: usize,
    pub v_b: usize,
    /// Witness clique containing `v_a`, as it was before the step.
    pub c_a: VertexSet,
    /// Witness clique containing `v_b`, as it was before the step.
    pub c_b: VertexSet,
    pub c_ab: VertexSet,
    pub c_ab_id: CliqueId,
    pub separator: VertexSet,
    /// Clique-graph edges removed, as member sets.
    pub removed_edges: Vec<(VertexSet, VertexSet)>,
    /// New clique-graph edges `(C', separator)`; the other endpoint is `c_ab`.
    pub added_edges: Vec<(VertexSet, VertexSet)>,
    /// Witness cliques absorbed into `c_ab`.
    pub absorbed: Vec<VertexSet>,
    /// Degrees of `v_a` and `v_b` before the edge was added.
    pub degrees_before: (usize, usize),
}

/// What a backward step changed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeleteOutcome {
    pub v_a: usize,
    pub v_b: usize,
    /// The unique maximal clique that contained the edge.
    pub clique: VertexSet,
    pub separator: VertexSet,
    /// `clique − v_b` and `clique − v_a`, where they became maximal.
    pub new_cliques: Vec<VertexSet>,
    pub without_b_maximal: bool,
    pub without_a_maximal: bool,
}

/// A chordal model graph with its clique graph, forward eligibility matrix
/// and clique-membership counts, kept consistent across steps.
#[derive(Debug, Clone)]
pub struct ModelState {
    g: Graph,
    cg: CliqueGraph,
    forward: ForwardEligibility,
    deletion: DeleteEligibility,
    /// Absorbed clique -> the clique that absorbed it.
    redirects: HashMap<CliqueId, CliqueId>,
    faults: FaultInjection,
    check_invariants: bool,
}

impl ModelState {
    pub fn new(g: Graph) -> Result<Self> {
        let cg = CliqueGraph::build(&g)?;
        let forward = ForwardEligibility::from_clique_graph(&cg);
        let deletion = DeleteEligibility::from_clique_graph(&cg);
        Ok(Self {
            g,
            cg,
            forward,
            deletion,
            redirects: HashMap::new(),
            faults: FaultInjection::default(),
            check_invariants: false,
        })
    }

    /// After every step, compare the clique graph against a rebuild and fail
    /// with `InternalInconsistency` on mismatch. Slow; off by default.
    pub fn set_check_invariants(&mut self, on: bool) {
        self.check_invariants = on;
    }

    #[doc(hidden)]
    pub fn set_faults(&mut self, faults: FaultInjection) {
        self.faults = faults;
    }

    pub fn graph(&self) -> &Graph {
        &self.g
    }

    pub fn clique_graph(&self) -> &CliqueGraph {
        &self.cg
    }

    pub fn forward_eligibility(&self) -> &ForwardEligibility {
        &self.forward
    }

    pub fn delete_eligibility(&self) -> &DeleteEligibility {
        &self.deletion
    }

    /// Pairs eligible for addition, read from the maintained matrix.
    pub fn eligible_additions(&self) -> Vec<(usize, usize)> {
        self.forward.pairs()
    }

    /// Edges eligible for deletion, read from the maintained counts.
    pub fn eligible_deletions(&self) -> Vec<(usize, usize)> {
        self.deletion.edges()
    }

    /// Minimal separator of an addition-eligible pair: every separator of a
    /// non-adjacent pair contains the common neighbourhood, and for an
    /// eligible pair the minimal one lies inside it, so they coincide.
    pub fn separator_of(&self, a: usize, b: usize) -> VertexSet {
        self.g.neighbors(a).intersection(self.g.neighbors(b))
    }

    /// The unique maximal clique containing edge `(a, b)`, if deletable.
    pub fn containing_clique(&self, a: usize, b: usize) -> Option<(CliqueId, &VertexSet)> {
        if !self.g.has_edge(a, b) || !self.deletion.is_deletable(a, b) {
            return None;
        }
        self.cg
            .cliques()
            .find(|(_, c)| c.contains(a) && c.contains(b))
    }

    fn resolve(&self, mut id: CliqueId) -> CliqueId {
        while let Some(&next) = self.redirects.get(&id) {
            id = next;
        }
        id
    }

    /// A clique-graph edge `(C1, C2)` with `a ∈ C1 ∖ S`, `b ∈ C2 ∖ S`.
    /// Uses the stored witness when still valid, else scans every edge.
    fn witness(&self, a: usize, b: usize) -> Option<(CliqueId, CliqueId)> {
        let certifies = |c1: CliqueId, c2: CliqueId| -> bool {
            if c1 == c2 || self.cg.edge_between(c1, c2).is_none() {
                return false;
            }
            let (m1, m2) = (self.cg.members(c1), self.cg.members(c2));
            m1.contains(a) && !m2.contains(a) && m2.contains(b) && !m1.contains(b)
        };
        if let Some((w1, w2)) = self.forward.witness(a, b) {
            let (c1, c2) = (self.resolve(w1), self.resolve(w2));
            if certifies(c1, c2) {
                return Some((c1, c2));
            }
        }
        self.cg.edges().into_iter().find_map(|(_, e)| {
            let (x, y) = e.ends;
            if certifies(x, y) {
                Some((x, y))
            } else if certifies(y, x) {
                Some((y, x))
            } else {
                None
            }
        })
    }

    /// Adds the eligible edge `(a, b)` and updates the clique graph and the
    /// eligibility structures incrementally in `O(n^2)`.
    pub fn apply_add(&mut self, a: usize, b: usize) -> Result<AddOutcome> {
        self.g.check_vertex(a)?;
        self.g.check_vertex(b)?;
        if !self.forward.is_eligible(a, b) {
            return Err(Error::NotEligible(a, b));
        }
        let (ca, cb) = self
            .witness(a, b)
            .ok_or_else(|| Error::InternalInconsistency(format!("no witness for eligible pair ({a}, {b})")))?;
        let ca_set = self.cg.members(ca).clone();
        let cb_set = self.cg.members(cb).clone();
        let sep = ca_set.intersection(&cb_set);
        let sep_a = sep.with(a);
        let sep_b = sep.with(b);
        let cab_set = sep_a.with(b);
        let degrees_before = (self.g.degree(a), self.g.degree(b));

        // Components of G − S, before the new edge exists.
        let comp = components_excluding(&self.g, &sep);
        let (la, lb) = (comp[a], comp[b]);
        let side_of = |c: &VertexSet| c.difference(&sep).first().and_then(|v| comp[v]);

        self.g.add_edge(a, b);

        let mut removed_edges = Vec::new();
        if let Some(e) = self.cg.edge_between(ca, cb) {
            self.cg.remove_edge(e);
            removed_edges.push((ca_set.clone(), cb_set.clone()));
        }
        let cab = self.cg.add_node(cab_set.clone());
        let mut added = Vec::new();
        for c in [ca, cb] {
            if self.cg.add_edge(c, cab).is_some() {
                added.push(c);
            }
        }

        // Stale edges can only carry the separator S.
        if !self.faults.skip_stale_edge_removal {
            for e in self.cg.index_lookup(&sep) {
                let (c1, c2) = self.cg.edge(e).expect("live edge").ends;
                if c1 == cab || c2 == cab {
                    continue;
                }
                let (s1, s2) = (side_of(self.cg.members(c1)), side_of(self.cg.members(c2)));
                if (s1 == la && s2 == lb) || (s1 == lb && s2 == la) {
                    let m = (self.cg.members(c1).clone(), self.cg.members(c2).clone());
                    self.cg.remove_edge(e);
                    removed_edges.push(m);
                }
            }
        }
        self.cg.compact_index(&sep);

        for (side, side_set, other_label) in [(ca, &sep_a, lb), (cb, &sep_b, la)] {
            // Neighbours of the witness clique whose overlap lies strictly
            // inside S + v.
            let nbrs: Vec<CliqueId> = self
                .cg
                .neighbors(side)
                .map(|(c, _)| c)
                .filter(|&c| c != cab)
                .collect();
            for c in nbrs {
                let overlap = self.cg.members(c).intersection(self.cg.members(side));
                if overlap.is_proper_subset(side_set) && self.cg.add_edge(c, cab).is_some() {
                    added.push(c);
                }
            }
            // Cliques meeting the new clique in exactly S + v, joined when
            // S + v separates the other endpoint from their residual.
            let exact: Vec<CliqueId> = self
                .cg
                .cliques()
                .filter(|&(c, m)| c != cab && m.intersection(&cab_set) == *side_set)
                .map(|(c, _)| c)
                .collect();
            for c in exact {
                let residual = self.cg.members(c).difference(side_set);
                let separated = residual.iter().all(|x| comp[x] != other_label);
                if separated && self.cg.add_edge(c, cab).is_some() {
                    added.push(c);
                }
            }
        }

        let mut absorbed = Vec::new();
        for (c, set) in [(ca, &ca_set), (cb, &cb_set)] {
            if set.is_proper_subset(&cab_set) {
                self.cg.remove_node(c);
                self.redirects.insert(c, cab);
                self.deletion.remove_clique(set);
                absorbed.push(set.clone());
            }
        }
        self.deletion.add_clique(&cab_set);

        let added_edges: Vec<(CliqueId, VertexSet)> = added
            .into_iter()
            .filter(|c| self.cg.contains_node(*c))
            .map(|c| (c, self.cg.members(c).intersection(&cab_set)))
            .collect();

        // Eligibility: the new edge, then every pair straddling the removed
        // edges, then the pairs opened by the new clique-graph edges.
        self.forward.clear(a, b);
        let a_side: Vec<usize> = (0..self.g.n()).filter(|&x| comp[x].is_some() && comp[x] == la).collect();
        let b_side: Vec<usize> = (0..self.g.n()).filter(|&y| comp[y].is_some() && comp[y] == lb).collect();
        for &x in &a_side {
            for &y in &b_side {
                self.forward.clear(x, y);
            }
        }
        for (c, s) in &added_edges {
            let residual = self.cg.members(*c).difference(s);
            for v in [a, b] {
                if s.contains(v) {
                    continue;
                }
                for x in residual.iter() {
                    self.forward.set(x, v, (*c, cab));
                }
            }
        }

        if self.check_invariants {
            self.verify_against_rebuild()?;
        }

        Ok(AddOutcome {
            v_a: a,
            v_b: b,
            c_a: ca_set,
            c_b: cb_set,
            c_ab: cab_set,
            c_ab_id: cab,
            separator: sep,
            removed_edges,
            added_edges: added_edges
                .into_iter()
                .map(|(c, s)| (self.cg.members(c).clone(), s))
                .collect(),
            absorbed,
            degrees_before,
        })
    }

    /// Deletes `(a, b)`, which must lie in exactly one maximal clique `C`.
    ///
    /// `C` is replaced by `C − a` and `C − b` where maximal; clique-graph
    /// edges are re-derived for the new cliques and for pairs of surviving
    /// cliques whose separator avoids both endpoints (the only pairs whose
    /// separation can change).
    pub fn apply_delete(&mut self, a: usize, b: usize) -> Result<DeleteOutcome> {
        self.g.check_vertex(a)?;
        self.g.check_vertex(b)?;
        let (cid, clique) = match self.containing_clique(a, b) {
            Some((id, c)) => (id, c.clone()),
            None => return Err(Error::NotEligible(a, b)),
        };
        let separator = clique.without(a).without(b);
        self.g.remove_edge(a, b);
        self.cg.remove_node(cid);
        self.deletion.remove_clique(&clique);

        let without_b = clique.without(b);
        let without_a = clique.without(a);
        let is_maximal = |cg: &CliqueGraph, s: &VertexSet| !cg.cliques().any(|(_, c)| s.is_subset(c));
        let without_b_maximal = is_maximal(&self.cg, &without_b);
        let without_a_maximal = is_maximal(&self.cg, &without_a);

        let old_ids = self.cg.clique_ids();
        let mut new_ids = Vec::new();
        let mut new_cliques = Vec::new();
        for (keep, set) in [(without_b_maximal, &without_b), (without_a_maximal, &without_a)] {
            if keep {
                new_ids.push(self.cg.add_node(set.clone()));
                self.deletion.add_clique(set);
                new_cliques.push(set.clone());
            }
        }

        // Group candidate pairs by separator so that components are computed
        // once per distinct separator.
        let mut by_sep: HashMap<VertexSet, Vec<(CliqueId, CliqueId)>> = HashMap::new();
        for (i, &x) in new_ids.iter().enumerate() {
            for &y in old_ids.iter().chain(&new_ids[i + 1..]) {
                let s = self.cg.members(x).intersection(self.cg.members(y));
                by_sep.entry(s).or_default().push((x, y));
            }
        }
        for (i, &x) in old_ids.iter().enumerate() {
            for &y in &old_ids[i + 1..] {
                if self.cg.edge_between(x, y).is_some() {
                    continue;
                }
                let s = self.cg.members(x).intersection(self.cg.members(y));
                if !s.contains(a) && !s.contains(b) {
                    by_sep.entry(s).or_default().push((x, y));
                }
            }
        }
        let mut groups: Vec<_> = by_sep.into_iter().collect();
        groups.sort_by(|p, q| p.0.cmp(&q.0));
        for (s, mut pairs) in groups {
            pairs.sort();
            let comp = components_excluding(&self.g, &s);
            for (x, y) in pairs {
                let rx: VertexSet = self
                    .cg
                    .members(x)
                    .difference(&s)
                    .iter()
                    .filter_map(|v| comp[v])
                    .collect();
                let ok = self
                    .cg
                    .members(y)
                    .difference(&s)
                    .iter()
                    .filter_map(|v| comp[v])
                    .all(|c| !rx.contains(c));
                if ok {
                    self.cg.add_edge(x, y);
                }
            }
        }

        self.forward = ForwardEligibility::from_clique_graph(&self.cg);
        self.redirects.clear();

        if self.check_invariants {
            self.verify_against_rebuild()?;
        }

        Ok(DeleteOutcome {
            v_a: a,
            v_b: b,
            clique,
            separator,
            new_cliques,
            without_b_maximal,
            without_a_maximal,
        })
    }

    fn verify_against_rebuild(&self) -> Result<()> {
        let fresh = CliqueGraph::build(&self.g)?;
        if fresh.canonical() != self.cg.canonical() {
            return Err(Error::InternalInconsistency(
                "maintained clique graph differs from a rebuild".into(),
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[usize]) -> VertexSet {
        xs.iter().copied().collect()
    }

    fn assert_consistent(st: &ModelState) {
        let fresh = CliqueGraph::build(st.graph()).unwrap();
        assert_eq!(st.clique_graph().canonical(), fresh.canonical());
        assert_eq!(
            st.eligible_additions(),
            super::super::eligibility::eligible_additions(&fresh, st.graph())
        );
        assert_eq!(
            st.eligible_deletions(),
            super::super::eligibility::eligible_deletions(st.graph(), &fresh)
        );
    }

    #[test]
    fn add_to_path_absorbs_both() {
        let mut st = ModelState::new(Graph::path(4)).unwrap();
        let out = st.apply_add(0, 2).unwrap();
        assert_eq!(out.separator, set(&[1]));
        assert_eq!(out.c_ab, set(&[0, 1, 2]));
        assert_eq!(out.absorbed.len(), 2);
        let c = st.clique_graph().canonical();
        assert_eq!(c.cliques, vec![set(&[0, 1, 2]), set(&[2, 3])]);
        assert_eq!(c.edges, vec![(set(&[0, 1, 2]), set(&[2, 3]), set(&[2]))]);
        assert_consistent(&st);
    }

    #[test]
    fn add_to_empty_graph() {
        let mut st = ModelState::new(Graph::empty(3)).unwrap();
        st.apply_add(0, 1).unwrap();
        let c = st.clique_graph().canonical();
        assert_eq!(c.cliques, vec![set(&[0, 1]), set(&[2])]);
        assert_eq!(c.edges, vec![(set(&[0, 1]), set(&[2]), set(&[]))]);
        assert_eq!(st.eligible_additions(), vec![(0, 2), (1, 2)]);
        assert_consistent(&st);
    }

    #[test]
    fn add_to_star() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (1, 3)]).unwrap();
        let mut st = ModelState::new(g).unwrap();
        st.apply_add(0, 2).unwrap();
        assert_eq!(
            st.clique_graph().canonical().cliques,
            vec![set(&[0, 1, 2]), set(&[1, 3])]
        );
        assert!(st.forward_eligibility().is_eligible(0, 3));
        assert!(st.forward_eligibility().is_eligible(2, 3));
        assert_consistent(&st);
    }

    #[test]
    fn add_rejects_ineligible() {
        let mut st = ModelState::new(Graph::path(4)).unwrap();
        assert!(matches!(st.apply_add(0, 3), Err(Error::NotEligible(0, 3))));
        assert!(matches!(st.apply_add(0, 1), Err(Error::NotEligible(0, 1))));
    }

    #[test]
    fn delete_examples() {
        let g = Graph::from_edges(4, [(0, 1), (0, 2), (1, 2), (2, 3)]).unwrap();
        let mut st = ModelState::new(g).unwrap();
        let out = st.apply_delete(0, 1).unwrap();
        assert_eq!(out.separator, set(&[2]));
        assert_eq!(
            st.clique_graph().canonical().cliques,
            vec![set(&[0, 2]), set(&[1, 2]), set(&[2, 3])]
        );
        assert_consistent(&st);

        let mut st = ModelState::new(Graph::path(4)).unwrap();
        st.apply_delete(1, 2).unwrap();
        let c = st.clique_graph().canonical();
        assert_eq!(c.cliques, vec![set(&[0, 1]), set(&[2, 3])]);
        assert_eq!(c.edges, vec![(set(&[0, 1]), set(&[2, 3]), set(&[]))]);
        assert_consistent(&st);

        let mut st = ModelState::new(Graph::complete(2)).unwrap();
        st.apply_delete(0, 1).unwrap();
        let c = st.clique_graph().canonical();
        assert_eq!(c.cliques, vec![set(&[0]), set(&[1])]);
        assert_eq!(c.edges.len(), 1);
        assert_consistent(&st);
    }

    #[test]
    fn delete_rejects_shared_edge() {
        let g = Graph::from_edges(4, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]).unwrap();
        let mut st = ModelState::new(g).unwrap();
        assert!(matches!(st.apply_delete(1, 2), Err(Error::NotEligible(1, 2))));
        assert!(matches!(st.apply_delete(0, 3), Err(Error::NotEligible(0, 3))));
    }

    #[test]
    fn add_then_delete_restores() {
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (2, 3), (1, 4)]).unwrap();
        let before = CliqueGraph::build(&g).unwrap().canonical();
        let mut st = ModelState::new(g).unwrap();
        for (a, b) in st.eligible_additions() {
            let mut s = st.clone();
            s.apply_add(a, b).unwrap();
            s.apply_delete(a, b).unwrap();
            assert_eq!(s.clique_graph().canonical(), before);
        }
        st.apply_add(0, 2).unwrap();
        assert_consistent(&st);
    }
}
