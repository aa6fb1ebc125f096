//! Greedy forward, backward and alternating selection.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::state::ModelState;
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::scoring::{add_delta, delete_delta, EntropyCache, ScoreState};
use crate::vertex_set::VertexSet;

/// Deltas within this distance are treated as equal when choosing a move and
/// when comparing against `min_delta`.
pub const DELTA_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Forward,
    Backward,
    Alternating,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Action {
    Add,
    Delete,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionConfig {
    pub mode: Mode,
    pub max_steps: usize,
    /// Forward moves need a delta of at least this; backward moves at most.
    pub min_delta: f64,
    pub max_clique_size: Option<usize>,
    /// Compare the clique graph against a rebuild after every step.
    #[serde(default)]
    pub check_invariants: bool,
}

impl Default for SelectionConfig {
    fn default() -> Self {
        Self {
            mode: Mode::Forward,
            max_steps: usize::MAX,
            min_delta: 1e-9,
            max_clique_size: None,
            check_invariants: false,
        }
    }
}

/// One applied move. `delta` is the entropy decrease for an addition and the
/// entropy increase for a deletion, so both are nonnegative.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub step: usize,
    pub action: Action,
    pub v_a: usize,
    pub v_b: usize,
    pub separator: VertexSet,
    pub delta: f64,
    /// Entropies computed for this step: cache misses while applying it and
    /// rescoring the candidates it changed.
    pub entropies_computed: usize,
    /// Candidate deltas (re)computed after this step.
    pub delta_evaluations: usize,
    pub h_model: f64,
    /// Degrees of `v_a`, `v_b` before the move.
    pub neighbors_before: (usize, usize),
    /// Degrees of `v_a`, `v_b` after the move.
    pub neighbors_after: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub graph: Graph,
    pub steps: Vec<StepRecord>,
    pub initial_h_model: f64,
    /// Cache misses while scoring the starting model's candidates.
    pub initial_entropies_computed: usize,
    pub initial_delta_evaluations: usize,
    pub cliques: Vec<VertexSet>,
    pub separators: Vec<VertexSet>,
    pub h_model: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Phase {
    Forward,
    Backward,
}

/// Incremental selection driver. Call [`Selector::step`] until it returns
/// `None`.
#[derive(Debug)]
pub struct Selector<'d> {
    data: &'d Dataset,
    state: ModelState,
    cache: EntropyCache,
    score: ScoreState,
    config: SelectionConfig,
    phase: Phase,
    /// Addition candidates: pair -> (separator, delta).
    add_scores: HashMap<(usize, usize), (VertexSet, f64)>,
    /// Deletion candidates: edge -> (containing clique, delta).
    delete_scores: HashMap<(usize, usize), (VertexSet, f64)>,
    scored: Option<Phase>,
    steps_taken: usize,
    idle_phases: usize,
    visited: HashSet<(Graph, Action, usize, usize)>,
    pending_evaluations: usize,
    initial_h_model: f64,
    trace: Vec<StepRecord>,
    last_misses: Vec<VertexSet>,
    initial_entropies: usize,
    initial_evaluations: usize,
    done: bool,
}

impl<'d> Selector<'d> {
    pub fn new(g0: Graph, data: &'d Dataset, config: SelectionConfig) -> Result<Self> {
        Self::with_cache(g0, data, config, EntropyCache::new())
    }

    /// Starts from `g0` reusing entropies already held in `cache`.
    pub fn with_cache(g0: Graph, data: &'d Dataset, config: SelectionConfig, cache: EntropyCache) -> Result<Self> {
        if data.n_columns() != g0.n() {
            return Err(Error::ColumnMismatch {
                data: data.n_columns(),
                graph: g0.n(),
            });
        }
        let mut state = ModelState::new(g0)?;
        state.set_check_invariants(config.check_invariants);
        let done = state.graph().n() <= 1;
        let score = if state.graph().n() == 0 {
            ScoreState::default()
        } else {
            ScoreState::from_junction_tree(&state.clique_graph().junction_tree(), data, &cache)?
        };
        let phase = match config.mode {
            Mode::Backward => Phase::Backward,
            _ => Phase::Forward,
        };
        let mut sel = Self {
            data,
            state,
            cache,
            score: score.clone(),
            config,
            phase,
            add_scores: HashMap::new(),
            delete_scores: HashMap::new(),
            scored: None,
            steps_taken: 0,
            idle_phases: 0,
            visited: HashSet::new(),
            pending_evaluations: 0,
            initial_h_model: score.h_model(),
            trace: Vec::new(),
            last_misses: Vec::new(),
            initial_entropies: 0,
            initial_evaluations: 0,
            done,
        };
        if !sel.done {
            sel.cache.take_misses();
            sel.rescore()?;
            sel.initial_entropies = sel.cache.take_misses().len();
            sel.initial_evaluations = std::mem::take(&mut sel.pending_evaluations);
        }
        Ok(sel)
    }

    #[doc(hidden)]
    pub fn set_faults(&mut self, faults: super::FaultInjection) {
        self.state.set_faults(faults);
    }

    pub fn state(&self) -> &ModelState {
        &self.state
    }

    pub fn graph(&self) -> &Graph {
        self.state.graph()
    }

    pub fn score(&self) -> &ScoreState {
        &self.score
    }

    pub fn h_model(&self) -> f64 {
        self.score.h_model()
    }

    pub fn cache(&self) -> &EntropyCache {
        &self.cache
    }

    pub fn into_cache(self) -> EntropyCache {
        self.cache
    }

    pub fn initial_entropies_computed(&self) -> usize {
        self.initial_entropies
    }

    pub fn initial_delta_evaluations(&self) -> usize {
        self.initial_evaluations
    }

    /// Current addition candidates with their deltas, ascending by pair.
    pub fn addition_candidates(&self) -> Vec<((usize, usize), f64)> {
        let mut v: Vec<_> = self.add_scores.iter().map(|(&p, &(_, d))| (p, d)).collect();
        v.sort_by_key(|x| x.0);
        v
    }

    /// Current deletion candidates with their deltas, ascending by pair.
    pub fn deletion_candidates(&self) -> Vec<((usize, usize), f64)> {
        let mut v: Vec<_> = self.delete_scores.iter().map(|(&p, &(_, d))| (p, d)).collect();
        v.sort_by_key(|x| x.0);
        v
    }

    fn within_size_limit(&self, sep: &VertexSet) -> bool {
        self.config.max_clique_size.is_none_or(|k| sep.len() + 2 <= k)
    }

    /// Brings the candidate deltas of the current phase up to date,
    /// recomputing only those whose separator or clique changed.
    fn rescore(&mut self) -> Result<()> {
        match self.phase {
            Phase::Forward => {
                let mut next = HashMap::new();
                for (a, b) in self.state.eligible_additions() {
                    let sep = self.state.separator_of(a, b);
                    if !self.within_size_limit(&sep) {
                        continue;
                    }
                    let entry = match self.add_scores.remove(&(a, b)) {
                        Some((s, d)) if s == sep => (s, d),
                        _ => {
                            self.pending_evaluations += 1;
                            let d = add_delta(&self.cache, self.data, &sep, a, b)?;
                            (sep, d)
                        }
                    };
                    next.insert((a, b), entry);
                }
                self.add_scores = next;
            }
            Phase::Backward => {
                let mut next = HashMap::new();
                for (a, b) in self.state.eligible_deletions() {
                    let clique = match self.state.containing_clique(a, b) {
                        Some((_, c)) => c.clone(),
                        None => continue,
                    };
                    let entry = match self.delete_scores.remove(&(a, b)) {
                        Some((c, d)) if c == clique => (c, d),
                        _ => {
                            self.pending_evaluations += 1;
                            let d = delete_delta(&self.cache, self.data, &clique, a, b)?;
                            (clique, d)
                        }
                    };
                    next.insert((a, b), entry);
                }
                self.delete_scores = next;
            }
        }
        self.scored = Some(self.phase);
        Ok(())
    }

    /// The best qualifying move of the current phase, if any.
    fn best_move(&self) -> Option<(usize, usize)> {
        let tol = DELTA_TOLERANCE;
        match self.phase {
            Phase::Forward => {
                let best = self.add_scores.values().map(|&(_, d)| d).fold(f64::NEG_INFINITY, f64::max);
                if best < self.config.min_delta - tol {
                    return None;
                }
                self.add_scores
                    .iter()
                    .filter(|(_, &(_, d))| d >= best - tol)
                    .map(|(&p, _)| p)
                    .min()
            }
            Phase::Backward => {
                let best = self.delete_scores.values().map(|&(_, d)| d).fold(f64::INFINITY, f64::min);
                if best > self.config.min_delta + tol {
                    return None;
                }
                self.delete_scores
                    .iter()
                    .filter(|(_, &(_, d))| d <= best + tol)
                    .map(|(&p, _)| p)
                    .min()
            }
        }
    }

    /// Applies the next greedy move, or returns `None` once selection stops.
    pub fn step(&mut self) -> Result<Option<StepRecord>> {
        if self.done || self.steps_taken >= self.config.max_steps {
            return Ok(None);
        }
        loop {
            if self.scored != Some(self.phase) {
                self.rescore()?;
            }
            let action = match self.phase {
                Phase::Forward => Action::Add,
                Phase::Backward => Action::Delete,
            };
            let chosen = self.best_move().filter(|&(a, b)| {
                self.config.mode != Mode::Alternating
                    || !self.visited.contains(&(self.state.graph().clone(), action, a, b))
            });
            match chosen {
                Some((a, b)) => {
                    if self.config.mode == Mode::Alternating {
                        self.visited.insert((self.state.graph().clone(), action, a, b));
                    }
                    self.idle_phases = 0;
                    return self.apply(action, a, b).map(Some);
                }
                None if self.config.mode == Mode::Alternating => {
                    self.idle_phases += 1;
                    if self.idle_phases >= 2 {
                        self.done = true;
                        return Ok(None);
                    }
                    self.phase = match self.phase {
                        Phase::Forward => Phase::Backward,
                        Phase::Backward => Phase::Forward,
                    };
                }
                None => {
                    self.done = true;
                    return Ok(None);
                }
            }
        }
    }

    /// Applies a chosen move instead of the greedy one. The move must be
    /// eligible; entropies needed to score it count towards its record.
    pub fn apply_move(&mut self, action: Action, a: usize, b: usize) -> Result<StepRecord> {
        let (a, b) = (a.min(b), a.max(b));
        let g = self.state.graph();
        g.check_vertex(b)?;
        let eligible = match action {
            Action::Add => self.state.forward_eligibility().is_eligible(a, b),
            Action::Delete => g.has_edge(a, b) && self.state.delete_eligibility().is_deletable(a, b),
        };
        if !eligible {
            return Err(Error::NotEligible(a, b));
        }
        self.phase = match action {
            Action::Add => Phase::Forward,
            Action::Delete => Phase::Backward,
        };
        if self.scored != Some(self.phase) {
            self.rescore()?;
        }
        self.apply(action, a, b)
    }

    fn apply(&mut self, action: Action, a: usize, b: usize) -> Result<StepRecord> {
        let g = self.state.graph();
        let neighbors_before = (g.degree(a), g.degree(b));
        let (separator, delta) = match action {
            Action::Add => {
                let delta = match self.add_scores.get(&(a, b)) {
                    Some(&(_, d)) => d,
                    None => add_delta(&self.cache, self.data, &self.state.separator_of(a, b), a, b)?,
                };
                let out = self.state.apply_add(a, b)?;
                self.score.apply_junction_diff(
                    &out.c_a,
                    &out.c_b,
                    &out.c_ab,
                    &out.separator,
                    &self.cache,
                    self.data,
                )?;
                (out.separator, delta)
            }
            Action::Delete => {
                let out = self.state.apply_delete(a, b)?;
                let delta = self.score.apply_delete_diff(
                    &out.clique,
                    a,
                    b,
                    out.without_b_maximal,
                    out.without_a_maximal,
                    &self.cache,
                    self.data,
                )?;
                (out.separator, delta)
            }
        };
        self.rescore()?;
        self.steps_taken += 1;
        self.last_misses = self.cache.take_misses();
        let g = self.state.graph();
        let record = StepRecord {
            step: self.steps_taken,
            action,
            v_a: a,
            v_b: b,
            separator,
            delta,
            entropies_computed: self.last_misses.len(),
            delta_evaluations: std::mem::take(&mut self.pending_evaluations),
            h_model: self.score.h_model(),
            neighbors_before,
            neighbors_after: (g.degree(a), g.degree(b)),
        };
        self.trace.push(record.clone());
        Ok(record)
    }

    /// Subsets whose entropy the last step computed.
    pub fn last_misses(&self) -> &[VertexSet] {
        &self.last_misses
    }

    /// Steps applied so far.
    pub fn trace(&self) -> &[StepRecord] {
        &self.trace
    }

    pub fn finish(self) -> RunResult {
        let jt = self.state.clique_graph().junction_tree();
        RunResult {
            graph: self.state.graph().clone(),
            steps: self.trace,
            initial_h_model: self.initial_h_model,
            initial_entropies_computed: self.initial_entropies,
            initial_delta_evaluations: self.initial_evaluations,
            cliques: jt.cliques,
            separators: jt.separators,
            h_model: self.score.h_model(),
        }
    }
}

/// Runs greedy selection from `g0` until no qualifying move remains or
/// `max_steps` moves have been made.
pub fn run(g0: Graph, data: &Dataset, config: SelectionConfig) -> Result<RunResult> {
    let mut sel = Selector::new(g0, data, config)?;
    while sel.step()?.is_some() {}
    Ok(sel.finish())
}
