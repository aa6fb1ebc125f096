//! Entropy-based scoring of decomposable models.
//!
//! The model entropy is `H(M) = Σ_C H(C) − Σ_S H(S)` over the maximal cliques
//! and the separator multiset of any junction tree; minimizing it minimizes
//! the KL divergence from the saturated model. Entropies are standard
//! Shannon entropies in nats of the empirical distribution, with
//! `0 · ln 0 = 0`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Mutex, RwLock};

use serde::{Deserialize, Serialize};

use crate::clique_graph::JunctionTree;
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::vertex_set::VertexSet;

/// Entropy (nats) of the empirical joint distribution of the columns in `s`.
pub fn subset_entropy(data: &Dataset, s: &VertexSet) -> Result<f64> {
    let rows = data.n_rows();
    if rows == 0 {
        return Err(Error::EmptyDataset);
    }
    if s.is_empty() {
        return Ok(0.0);
    }
    let total = rows as f64;
    // H = ln N − (1/N) Σ f ln f
    let sum: f64 = data
        .projection_counts(s)
        .into_iter()
        .map(|f| {
            let f = f64::from(f);
            f * f.ln()
        })
        .sum();
    Ok((total.ln() - sum / total).max(0.0))
}

/// Memoized subset entropies with a log of the sets computed since the last
/// [`EntropyCache::take_misses`].
///
/// Lookups take a shared lock; a miss computes outside the lock and then
/// inserts. Two threads may compute the same set concurrently; the writes
/// are identical.
#[derive(Debug, Default)]
pub struct EntropyCache {
    values: RwLock<HashMap<VertexSet, f64>>,
    misses: Mutex<Vec<VertexSet>>,
}

impl EntropyCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, data: &Dataset, s: &VertexSet) -> Result<f64> {
        if s.is_empty() {
            return if data.n_rows() == 0 {
                Err(Error::EmptyDataset)
            } else {
                Ok(0.0)
            };
        }
        if let Some(&h) = self.values.read().unwrap().get(s) {
            return Ok(h);
        }
        let h = subset_entropy(data, s)?;
        let fresh = self.values.write().unwrap().insert(s.clone(), h).is_none();
        if fresh {
            self.misses.lock().unwrap().push(s.clone());
        }
        Ok(h)
    }

    pub fn contains(&self, s: &VertexSet) -> bool {
        s.is_empty() || self.values.read().unwrap().contains_key(s)
    }

    /// Number of cached (non-empty) sets.
    pub fn len(&self) -> usize {
        self.values.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn miss_count(&self) -> usize {
        self.misses.lock().unwrap().len()
    }

    /// Returns and clears the sets computed since the previous call.
    pub fn take_misses(&self) -> Vec<VertexSet> {
        std::mem::take(&mut *self.misses.lock().unwrap())
    }
}

/// `H(S+a) + H(S+b) − H(S+a+b) − H(S)`: the entropy decrease from adding the
/// edge `(a, b)` whose minimal separator is `S`. Equals the empirical
/// conditional mutual information `I(a; b | S)`.
pub fn add_delta(
    cache: &EntropyCache,
    data: &Dataset,
    sep: &VertexSet,
    a: usize,
    b: usize,
) -> Result<f64> {
    debug_assert!(!sep.contains(a) && !sep.contains(b) && a != b);
    let sa = sep.with(a);
    let sb = sep.with(b);
    let sab = sa.with(b);
    Ok(cache.get(data, &sa)? + cache.get(data, &sb)? - cache.get(data, &sab)? - cache.get(data, sep)?)
}

/// Entropy increase from deleting `(a, b)`, where `clique` is the unique
/// maximal clique containing the edge.
pub fn delete_delta(
    cache: &EntropyCache,
    data: &Dataset,
    clique: &VertexSet,
    a: usize,
    b: usize,
) -> Result<f64> {
    if a == b || !clique.contains(a) || !clique.contains(b) {
        return Err(Error::NotInClique(a, b));
    }
    let sep = clique.without(a).without(b);
    add_delta(cache, data, &sep, a, b)
}

/// `Σ_C H(C) − Σ_S H(S)` over a junction tree.
pub fn model_entropy(jt: &JunctionTree, data: &Dataset, cache: &EntropyCache) -> Result<f64> {
    let mut h = 0.0;
    for c in &jt.cliques {
        h += cache.get(data, c)?;
    }
    for s in &jt.separators {
        h -= cache.get(data, s)?;
    }
    Ok(h)
}

/// Which cliques a forward step absorbed into the new clique.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DiffCase {
    /// Neither endpoint clique absorbed.
    NoneAbsorbed,
    /// The clique on `a`'s side was absorbed.
    FirstAbsorbed,
    /// The clique on `b`'s side was absorbed.
    SecondAbsorbed,
    BothAbsorbed,
}

/// Cliques, separator multiset and entropy of the current model, updated by
/// junction-tree differences rather than rebuilt.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScoreState {
    cliques: BTreeSet<VertexSet>,
    separators: BTreeMap<VertexSet, usize>,
    h_model: f64,
}

impl ScoreState {
    pub fn from_junction_tree(jt: &JunctionTree, data: &Dataset, cache: &EntropyCache) -> Result<Self> {
        let mut separators = BTreeMap::new();
        for s in &jt.separators {
            *separators.entry(s.clone()).or_insert(0) += 1;
        }
        Ok(Self {
            cliques: jt.cliques.iter().cloned().collect(),
            separators,
            h_model: model_entropy(jt, data, cache)?,
        })
    }

    pub fn h_model(&self) -> f64 {
        self.h_model
    }

    pub fn cliques(&self) -> impl Iterator<Item = &VertexSet> {
        self.cliques.iter()
    }

    /// Separators with multiplicity, sorted.
    pub fn separators(&self) -> Vec<VertexSet> {
        self.separators
            .iter()
            .flat_map(|(s, &k)| std::iter::repeat_n(s.clone(), k))
            .collect()
    }

    fn push_sep(&mut self, s: VertexSet) {
        *self.separators.entry(s).or_insert(0) += 1;
    }

    fn pop_sep(&mut self, s: &VertexSet) -> Result<()> {
        match self.separators.get_mut(s) {
            Some(k) if *k > 1 => *k -= 1,
            Some(_) => {
                self.separators.remove(s);
            }
            None => return Err(Error::SeparatorNotPresent(s.to_string())),
        }
        Ok(())
    }

    fn drop_clique(&mut self, c: &VertexSet) -> Result<()> {
        if self.cliques.remove(c) {
            Ok(())
        } else {
            Err(Error::InternalInconsistency(format!("clique {c} not in the model")))
        }
    }

    /// Applies the forward step that joined `ca` (containing `a`) and `cb`
    /// (containing `b`) through `sab` into the new clique `cab`.
    ///
    /// Removes one occurrence of `sab`; adds `cab ∩ ca` / `cab ∩ cb` unless
    /// that side's clique was absorbed into `cab`.
    pub fn apply_junction_diff(
        &mut self,
        ca: &VertexSet,
        cb: &VertexSet,
        cab: &VertexSet,
        sab: &VertexSet,
        cache: &EntropyCache,
        data: &Dataset,
    ) -> Result<DiffCase> {
        let both = cab.difference(sab);
        let (a, b) = match both.to_vec()[..] {
            [x, y] if ca.contains(x) => (x, y),
            [x, y] => (y, x),
            _ => return Err(Error::InternalInconsistency("new clique must add two vertices".into())),
        };
        let delta = add_delta(cache, data, sab, a, b)?;
        let a_absorbed = ca.is_proper_subset(cab);
        let b_absorbed = cb.is_proper_subset(cab);
        self.pop_sep(sab)?;
        if a_absorbed {
            self.drop_clique(ca)?;
        } else {
            self.push_sep(cab.intersection(ca));
        }
        if b_absorbed {
            self.drop_clique(cb)?;
        } else {
            self.push_sep(cab.intersection(cb));
        }
        self.cliques.insert(cab.clone());
        self.h_model -= delta;
        Ok(match (a_absorbed, b_absorbed) {
            (false, false) => DiffCase::NoneAbsorbed,
            (true, false) => DiffCase::FirstAbsorbed,
            (false, true) => DiffCase::SecondAbsorbed,
            (true, true) => DiffCase::BothAbsorbed,
        })
    }

    /// Reverse of [`ScoreState::apply_junction_diff`] for deleting `(a, b)`
    /// from its unique clique `c`. `without_b_maximal` says whether `c − b`
    /// became a maximal clique (otherwise it is contained in an existing
    /// one); likewise `without_a_maximal`.
    #[allow(clippy::too_many_arguments)]
    pub fn apply_delete_diff(
        &mut self,
        c: &VertexSet,
        a: usize,
        b: usize,
        without_b_maximal: bool,
        without_a_maximal: bool,
        cache: &EntropyCache,
        data: &Dataset,
    ) -> Result<f64> {
        let delta = delete_delta(cache, data, c, a, b)?;
        let side_a = c.without(b);
        let side_b = c.without(a);
        self.drop_clique(c)?;
        if without_b_maximal {
            self.cliques.insert(side_a);
        } else {
            self.pop_sep(&side_a)?;
        }
        if without_a_maximal {
            self.cliques.insert(side_b);
        } else {
            self.pop_sep(&side_b)?;
        }
        self.push_sep(c.without(a).without(b));
        self.h_model += delta;
        Ok(delta)
    }
}

/// `|x − y| ≤ tol · max(1, |x|, |y|)`.
pub fn rel_close(x: f64, y: f64, tol: f64) -> bool {
    (x - y).abs() <= tol * 1f64.max(x.abs()).max(y.abs())
}
