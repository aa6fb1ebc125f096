//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Each exported function takes plain strings and numbers and returns JSON.
//! The `*_json` functions hold the logic and are usable (and tested) natively.

use decomposable::clique_graph::CliqueGraph;
use decomposable::dataset::Dataset;
use decomposable::engine::{Action, Mode, ModelState, SelectionConfig, Selector};
use decomposable::graph::{is_chordal, Graph};
use decomposable::oracle::random_dataset;
use decomposable::VertexSet;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use wasm_bindgen::prelude::*;

type Result<T> = std::result::Result<T, String>;

fn parse_csv(text: &str) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let names: Vec<String> = reader
        .headers()
        .map_err(|e| e.to_string())?
        .iter()
        .map(|s| s.trim().to_owned())
        .collect();
    let rows = reader
        .records()
        .map(|r| r.map(|r| r.iter().map(|s| s.trim().to_owned()).collect::<Vec<_>>()))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    if rows.is_empty() {
        return Err("the CSV has no data rows".into());
    }
    Dataset::from_string_rows(names, rows).map_err(|e| e.to_string())
}

/// A CSV of `rows` random rows over `n` loosely dependent columns.
pub fn random_csv_text(seed: u64, n: usize, rows: usize) -> String {
    let data = random_dataset(&mut ChaCha8Rng::seed_from_u64(seed), n, rows, 3);
    let mut out = data.names().join(",");
    out.push('\n');
    for r in 0..data.n_rows() {
        let row: Vec<&str> = (0..n)
            .map(|j| data.dictionary(j)[data.column(j)[r] as usize].as_str())
            .collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct Frame {
    step: usize,
    action: Option<Action>,
    edge: Option<(usize, usize)>,
    separator: Vec<usize>,
    delta: f64,
    entropies_computed: usize,
    h_model: f64,
    edges: Vec<(usize, usize)>,
    cliques: Vec<VertexSet>,
}

#[derive(Serialize)]
struct Trace {
    columns: Vec<String>,
    frames: Vec<Frame>,
}

fn frame(sel: &Selector<'_>) -> Frame {
    Frame {
        step: 0,
        action: None,
        edge: None,
        separator: Vec::new(),
        delta: 0.0,
        entropies_computed: sel.initial_entropies_computed(),
        h_model: sel.h_model(),
        edges: sel.graph().edges(),
        cliques: sel.state().clique_graph().canonical().cliques,
    }
}

/// Runs selection on CSV text and returns every intermediate model, so the
/// page can scrub through the trajectory.
pub fn learn_json(csv: &str, mode: &str, max_steps: usize, min_delta: f64, max_clique_size: usize) -> Result<String> {
    let data = parse_csv(csv)?;
    let mode = match mode {
        "forward" => Mode::Forward,
        "backward" => Mode::Backward,
        "alternating" => Mode::Alternating,
        other => return Err(format!("unknown mode {other:?}")),
    };
    let n = data.n_columns();
    let start = if mode == Mode::Backward { Graph::complete(n) } else { Graph::empty(n) };
    let config = SelectionConfig {
        mode,
        max_steps,
        min_delta,
        max_clique_size: (max_clique_size >= 2).then_some(max_clique_size),
        check_invariants: false,
    };
    let mut sel = Selector::new(start, &data, config).map_err(|e| e.to_string())?;
    let mut frames = vec![frame(&sel)];
    while let Some(rec) = sel.step().map_err(|e| e.to_string())? {
        frames.push(Frame {
            step: rec.step,
            action: Some(rec.action),
            edge: Some((rec.v_a, rec.v_b)),
            separator: rec.separator.to_vec(),
            delta: rec.delta,
            entropies_computed: rec.entropies_computed,
            ..frame(&sel)
        });
    }
    serde_json::to_string(&Trace {
        columns: data.names().to_vec(),
        frames,
    })
    .map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct Structure {
    chordal: bool,
    cliques: Vec<VertexSet>,
    clique_edges: Vec<(usize, usize, VertexSet)>,
    junction_tree: Vec<(usize, usize, VertexSet)>,
    eligible_additions: Vec<(usize, usize)>,
    eligible_deletions: Vec<(usize, usize)>,
}

fn parse_edges(n: usize, edges: &str) -> Result<Graph> {
    let mut g = Graph::empty(n);
    for token in edges.split([';', '\n']).map(str::trim).filter(|t| !t.is_empty()) {
        let (a, b) = token
            .split_once(['-', ','])
            .ok_or_else(|| format!("bad edge {token:?}"))?;
        let parse = |s: &str| s.trim().parse::<usize>().map_err(|_| format!("bad vertex {s:?}"));
        let (a, b) = (parse(a)?, parse(b)?);
        if a >= n || b >= n || a == b {
            return Err(format!("bad edge {token:?}"));
        }
        g.add_edge(a, b);
    }
    Ok(g)
}

/// Clique graph, one junction tree and the eligible moves of the graph on
/// `n` vertices given as `"a-b; c-d"`. Clique indices refer to the sorted
/// clique list.
pub fn structure_json(n: usize, edges: &str) -> Result<String> {
    let g = parse_edges(n, edges)?;
    let s = if !is_chordal(&g) {
        Structure {
            chordal: false,
            cliques: Vec::new(),
            clique_edges: Vec::new(),
            junction_tree: Vec::new(),
            eligible_additions: Vec::new(),
            eligible_deletions: Vec::new(),
        }
    } else {
        let cg = CliqueGraph::build(&g).map_err(|e| e.to_string())?;
        let canon = cg.canonical();
        let index = |c: &VertexSet| canon.cliques.iter().position(|k| k == c).expect("clique listed");
        let jt = cg.junction_tree();
        let state = ModelState::new(g).map_err(|e| e.to_string())?;
        Structure {
            chordal: true,
            clique_edges: canon.edges.iter().map(|(a, b, s)| (index(a), index(b), s.clone())).collect(),
            junction_tree: jt
                .edges
                .iter()
                .map(|(i, j, s)| (index(&jt.cliques[*i]), index(&jt.cliques[*j]), s.clone()))
                .collect(),
            cliques: canon.cliques,
            eligible_additions: state.eligible_additions(),
            eligible_deletions: state.eligible_deletions(),
        }
    };
    serde_json::to_string(&s).map_err(|e| e.to_string())
}

/// Applies one add or delete move to the graph and returns the new edge
/// list as `"a-b; ..."`, refusing moves that would break chordality.
pub fn toggle_edge_text(n: usize, edges: &str, a: usize, b: usize) -> Result<String> {
    let g = parse_edges(n, edges)?;
    let mut state = ModelState::new(g).map_err(|e| e.to_string())?;
    if a >= n || b >= n || a == b {
        return Err(format!("bad pair ({a}, {b})"));
    }
    let action = if state.graph().has_edge(a, b) { Action::Delete } else { Action::Add };
    match action {
        Action::Add => state.apply_add(a, b).map(|_| ()),
        Action::Delete => state.apply_delete(a, b).map(|_| ()),
    }
    .map_err(|e| e.to_string())?;
    Ok(state
        .graph()
        .edges()
        .iter()
        .map(|(x, y)| format!("{x}-{y}"))
        .collect::<Vec<_>>()
        .join("; "))
}

#[wasm_bindgen]
pub fn random_csv(seed: u32, n: u32, rows: u32) -> String {
    random_csv_text(u64::from(seed), n as usize, rows as usize)
}

#[wasm_bindgen]
pub fn learn(csv: &str, mode: &str, max_steps: u32, min_delta: f64, max_clique_size: u32) -> std::result::Result<String, JsValue> {
    learn_json(csv, mode, max_steps as usize, min_delta, max_clique_size as usize).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn structure(n: u32, edges: &str) -> std::result::Result<String, JsValue> {
    structure_json(n as usize, edges).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn toggle_edge(n: u32, edges: &str, a: u32, b: u32) -> std::result::Result<String, JsValue> {
    toggle_edge_text(n as usize, edges, a as usize, b as usize).map_err(|e| JsValue::from_str(&e))
}
