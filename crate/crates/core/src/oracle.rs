//! Slow reference implementations that define ground truth for the
//! incremental structures, plus random generators and a trajectory checker.
//!
//! Everything here is exponential or polynomial of high degree and is meant
//! for `n ≤ 14`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::clique_graph::CliqueGraph;
use crate::dataset::Dataset;
use crate::engine::{Action, FaultInjection, SelectionConfig, Selector};
use crate::error::{Error, Result};
use crate::graph::{components_excluding, Graph};
use crate::scoring::{model_entropy, rel_close};
use crate::vertex_set::VertexSet;

/// Largest vertex count accepted by [`verify_trajectory`].
pub const MAX_ORACLE_N: usize = 14;

/// Chordality by repeatedly removing a simplicial vertex.
pub fn brute_chordal(g: &Graph) -> bool {
    let mut alive = g.vertices();
    while !alive.is_empty() {
        let simplicial = alive
            .iter()
            .find(|&v| g.is_clique(&g.neighbors(v).intersection(&alive)));
        match simplicial {
            Some(v) => {
                alive.remove(v);
            }
            None => return false,
        }
    }
    true
}

/// Maximal cliques by subset enumeration, ascending.
pub fn brute_cliques(g: &Graph) -> Vec<VertexSet> {
    let n = g.n();
    assert!(n <= 20, "subset enumeration limited to 20 vertices");
    let cliques: Vec<VertexSet> = (0u64..1 << n)
        .map(|mask| (0..n).filter(|&v| mask >> v & 1 == 1).collect::<VertexSet>())
        .filter(|s| !s.is_empty() && g.is_clique(s))
        .collect();
    let mut out: Vec<VertexSet> = cliques
        .iter()
        .filter(|s| !cliques.iter().any(|t| s.is_proper_subset(t)))
        .cloned()
        .collect();
    out.sort();
    out
}

fn require_chordal(g: &Graph) -> Result<()> {
    if brute_chordal(g) {
        Ok(())
    } else {
        Err(Error::NotChordal)
    }
}

/// Non-edges whose addition keeps `g` chordal, found by adding each and
/// testing.
pub fn brute_eligible_additions(g: &Graph) -> Result<Vec<(usize, usize)>> {
    require_chordal(g)?;
    Ok(g.non_edges()
        .into_iter()
        .filter(|&(a, b)| {
            let mut h = g.clone();
            h.add_edge(a, b);
            brute_chordal(&h)
        })
        .collect())
}

/// Edges whose deletion keeps `g` chordal, found by deleting each and
/// testing.
pub fn brute_eligible_deletions(g: &Graph) -> Result<Vec<(usize, usize)>> {
    require_chordal(g)?;
    Ok(g.edges()
        .into_iter()
        .filter(|&(a, b)| {
            let mut h = g.clone();
            h.remove_edge(a, b);
            brute_chordal(&h)
        })
        .collect())
}

fn subsets(s: &VertexSet) -> impl Iterator<Item = VertexSet> + '_ {
    let items = s.to_vec();
    (0u64..1 << items.len()).map(move |mask| {
        items
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &v)| v)
            .collect()
    })
}

fn splits(g: &Graph, s: &VertexSet, a: usize, b: usize) -> bool {
    let comp = components_excluding(g, s);
    comp[a] != comp[b]
}

/// A smallest `(a, b)` separator, lexicographically first among those of
/// that size; `∅` when `a` and `b` are already disconnected.
pub fn brute_minimal_separator(g: &Graph, a: usize, b: usize) -> Result<VertexSet> {
    if g.has_edge(a, b) {
        return Err(Error::AreAdjacent(a, b));
    }
    let pool = g.vertices().without(a).without(b);
    let mut all: Vec<VertexSet> = subsets(&pool).collect();
    all.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
    Ok(all
        .into_iter()
        .find(|s| splits(g, s, a, b))
        .unwrap_or_else(|| unreachable!("the full pool always separates non-adjacent vertices")))
}

/// Addition eligibility by the direct characterization: some subset of the
/// common neighbourhood separates `a` from `b` and no proper subset of it
/// does.
pub fn direct_addition_eligible(g: &Graph, a: usize, b: usize) -> bool {
    if a == b || g.has_edge(a, b) {
        return false;
    }
    let common = g.neighbors(a).intersection(g.neighbors(b));
    let found = subsets(&common).any(|s| splits(g, &s, a, b) && s.iter().all(|x| !splits(g, &s.without(x), a, b)));
    found
}

/// A random chordal graph: eliminate vertices in a random order, give each a
/// random set of later neighbours with probability `p`, and fill in.
pub fn random_chordal_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> Graph {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut g = Graph::empty(n);
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(order[i], order[j]);
            }
        }
    }
    for i in 0..n {
        let v = order[i];
        let later: Vec<usize> = order[i + 1..].iter().copied().filter(|&u| g.has_edge(v, u)).collect();
        for (k, &x) in later.iter().enumerate() {
            for &y in &later[k + 1..] {
                g.add_edge(x, y);
            }
        }
    }
    g
}

/// A random categorical dataset where each column is either drawn
/// uniformly or copied from an earlier column with some noise.
pub fn random_dataset<R: Rng>(rng: &mut R, n: usize, rows: usize, max_domain: u32) -> Dataset {
    let max_domain = max_domain.max(1);
    let mut columns: Vec<Vec<u32>> = Vec::with_capacity(n);
    for j in 0..n {
        let domain = rng.gen_range(1..=max_domain);
        let parent = (j > 0 && rng.gen_bool(0.6)).then(|| rng.gen_range(0..j));
        let noise = rng.gen_range(0.0..0.6);
        let col = (0..rows)
            .map(|r| match parent {
                Some(p) if !rng.gen_bool(noise) => columns[p][r] % domain,
                _ => rng.gen_range(0..domain),
            })
            .collect();
        columns.push(col);
    }
    Dataset::from_unnamed_codes(columns).expect("columns have equal length")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub structure: String,
    pub expected: String,
    pub actual: String,
    pub step: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub checks: usize,
    pub mismatches: Vec<Mismatch>,
}

impl OracleReport {
    pub fn is_clean(&self) -> bool {
        self.mismatches.is_empty()
    }

    fn check(&mut self, step: usize, structure: &str, expected: String, actual: String) {
        self.checks += 1;
        if expected != actual {
            self.mismatches.push(Mismatch {
                structure: structure.into(),
                expected,
                actual,
                step,
            });
        }
    }
}

fn pairs(v: &[(usize, usize)]) -> String {
    format!("{v:?}")
}

/// Compares every maintained structure of `sel` against its reference.
fn check_state(report: &mut OracleReport, sel: &Selector<'_>, data: &Dataset, step: usize) -> Result<()> {
    let g = sel.graph();
    let cg = sel.state().clique_graph();
    let fresh = CliqueGraph::build(g)?;
    report.check(
        step,
        "clique graph",
        format!("{:?}", fresh.canonical()),
        format!("{:?}", cg.canonical()),
    );
    report.check(
        step,
        "clique graph closure",
        "None".into(),
        format!("{:?}", cg.closure_violation()),
    );
    report.check(
        step,
        "clique graph separation",
        "None".into(),
        format!("{:?}", cg.separation_violation(g)),
    );
    report.check(
        step,
        "maximal cliques",
        format!("{:?}", brute_cliques(g)),
        format!("{:?}", cg.canonical().cliques),
    );
    report.check(
        step,
        "eligible additions",
        pairs(&brute_eligible_additions(g)?),
        pairs(&sel.state().eligible_additions()),
    );
    report.check(
        step,
        "eligible deletions",
        pairs(&brute_eligible_deletions(g)?),
        pairs(&sel.state().eligible_deletions()),
    );
    let jt = cg.junction_tree();
    report.check(step, "junction tree", "true".into(), jt.is_valid().to_string());
    let batch = model_entropy(&jt, data, sel.cache())?;
    report.check(
        step,
        "model entropy",
        format!("{batch:.9e}"),
        if rel_close(batch, sel.h_model(), 1e-9) {
            format!("{batch:.9e}")
        } else {
            format!("{:.9e}", sel.h_model())
        },
    );
    Ok(())
}

/// Runs a random trajectory of eligible moves and checks, after every step,
/// the clique graph, both eligibility sets, the junction tree and the model
/// entropy against from-scratch references, and the forward entropy budget
/// on consecutive additions.
pub fn verify_trajectory(seed: u64, n: usize, steps: usize) -> Result<OracleReport> {
    verify_trajectory_with_faults(seed, n, steps, FaultInjection::default())
}

#[doc(hidden)]
pub fn verify_trajectory_with_faults(seed: u64, n: usize, steps: usize, faults: FaultInjection) -> Result<OracleReport> {
    if n > MAX_ORACLE_N {
        return Err(Error::VertexOutOfRange {
            vertex: n,
            n: MAX_ORACLE_N,
        });
    }
    let mut report = OracleReport::default();
    if n <= 1 {
        return Ok(report);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = random_dataset(&mut rng, n, 200, 3);
    let density = rng.gen_range(0.0..0.3);
    let g0 = random_chordal_graph(&mut rng, n, density);
    let mut sel = Selector::new(g0, &data, SelectionConfig::default())?;
    sel.set_faults(faults);
    check_state(&mut report, &sel, &data, 0)?;
    let mut previous = None;
    for step in 1..=steps {
        let adds = sel.state().eligible_additions();
        let dels = sel.state().eligible_deletions();
        let action = match (adds.is_empty(), dels.is_empty()) {
            (true, true) => break,
            (false, true) => Action::Add,
            (true, false) => Action::Delete,
            (false, false) if rng.gen_bool(0.7) => Action::Add,
            _ => Action::Delete,
        };
        let (a, b) = match action {
            Action::Add => *adds.choose(&mut rng).expect("non-empty"),
            Action::Delete => *dels.choose(&mut rng).expect("non-empty"),
        };
        let record = match sel.apply_move(action, a, b) {
            Ok(r) => r,
            Err(e) => {
                report.check(step, "step", "ok".into(), e.to_string());
                break;
            }
        };
        if action == Action::Add && previous == Some(Action::Add) {
            let (na, nb) = record.neighbors_before;
            let bound = 2 * (n - na) + 2 * (n - nb);
            report.check(
                step,
                "forward entropy budget",
                format!("<= {bound}"),
                if record.entropies_computed <= bound {
                    format!("<= {bound}")
                } else {
                    record.entropies_computed.to_string()
                },
            );
        }
        previous = Some(action);
        if let Err(e) = check_state(&mut report, &sel, &data, step) {
            report.check(step, "reference rebuild", "ok".into(), e.to_string());
            break;
        }
    }
    Ok(report)
}
