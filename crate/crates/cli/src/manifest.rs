use std::time::Instant;

use decomposable::dataset::Dataset;
use decomposable::engine::{Mode, SelectionConfig, Selector, StepRecord};
use decomposable::graph::Graph;
use decomposable::VertexSet;
use serde::{Deserialize, Serialize};

use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Column {
    pub name: String,
    pub domain_size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InitialPass {
    pub h_model: f64,
    pub entropies_computed: usize,
    pub delta_evaluations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FinalModel {
    pub edges: Vec<(usize, usize)>,
    pub cliques: Vec<VertexSet>,
    pub separators: Vec<VertexSet>,
    pub h_model: f64,
}

/// Everything needed to reproduce and inspect a selection run. Field order
/// is the serialized key order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub input: String,
    pub columns: Vec<Column>,
    pub config: SelectionConfig,
    pub start_edges: Vec<(usize, usize)>,
    pub initial: InitialPass,
    pub steps: Vec<StepRecord>,
    pub model: FinalModel,
    /// Wall-clock seconds per step; only recorded on request because it
    /// makes output differ between runs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step_seconds: Option<Vec<f64>>,
}

/// The start model when none is given: the saturated model for backward
/// selection, the null model otherwise.
pub fn default_start(mode: Mode, n: usize) -> Graph {
    match mode {
        Mode::Backward => Graph::complete(n),
        Mode::Forward | Mode::Alternating => Graph::empty(n),
    }
}

pub fn select(
    data: &Dataset,
    input: &str,
    config: SelectionConfig,
    start: Option<Graph>,
    timings: bool,
) -> Result<RunManifest> {
    let start = start.unwrap_or_else(|| default_start(config.mode, data.n_columns()));
    let start_edges = start.edges();
    let mut sel = Selector::new(start, data, config.clone())?;
    let initial = InitialPass {
        h_model: sel.h_model(),
        entropies_computed: sel.initial_entropies_computed(),
        delta_evaluations: sel.initial_delta_evaluations(),
    };
    let mut seconds = Vec::new();
    loop {
        let t = Instant::now();
        let Some(_) = sel.step()? else { break };
        seconds.push(t.elapsed().as_secs_f64());
    }
    let result = sel.finish();
    Ok(RunManifest {
        input: input.to_owned(),
        columns: (0..data.n_columns())
            .map(|j| Column {
                name: data.names()[j].clone(),
                domain_size: data.domain_size(j),
            })
            .collect(),
        config,
        start_edges,
        initial,
        steps: result.steps,
        model: FinalModel {
            edges: result.graph.edges(),
            cliques: result.cliques,
            separators: result.separators,
            h_model: result.h_model,
        },
        step_seconds: timings.then_some(seconds),
    })
}
