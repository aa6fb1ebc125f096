//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Criteria listed in `KNOWN_RED` are reported as failing but do not fail
//! the process; any other failure, or a known-red criterion that starts
//! passing, exits non-zero.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use decomposable::clique_graph::CliqueGraph;
use decomposable::dataset::Dataset;
use decomposable::engine::{run, Action, Mode, ModelState, SelectionConfig, Selector};
use decomposable::graph::{is_chordal, is_strongly_decomposable, Graph};
use decomposable::oracle::{
    brute_chordal, brute_eligible_additions, brute_eligible_deletions, random_chordal_graph, random_dataset,
};
use decomposable::scoring::{model_entropy, rel_close};
use decomposable::VertexSet;
use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Criteria that cannot pass as stated; the analysis is in the project notes
/// and in the detail line printed for each.
const KNOWN_RED: &[&str] = &["7b"];

struct Outcome {
    id: &'static str,
    title: &'static str,
    passed: bool,
    detail: String,
}

fn outcome(id: &'static str, title: &'static str, failures: usize, detail: String) -> Outcome {
    Outcome {
        id,
        title,
        passed: failures == 0,
        detail,
    }
}

/// Runs a full trajectory of random additions from a random chordal graph
/// until the graph is complete, calling `each` after every step.
fn addition_trajectory(seed: u64, mut each: impl FnMut(&ModelState, Option<&decomposable::engine::AddOutcome>)) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=12);
    let density = rng.gen_range(0.0..0.4);
    let g = random_chordal_graph(&mut rng, n, density);
    let mut st = ModelState::new(g).expect("generator yields chordal graphs");
    each(&st, None);
    loop {
        let pairs = st.eligible_additions();
        let Some(&(a, b)) = pairs.choose(&mut rng) else { break };
        let out = st.apply_add(a, b).expect("eligible pair");
        each(&st, Some(&out));
    }
}

/// A random mix of additions and deletions from a random chordal graph.
fn mixed_trajectory(seed: u64, steps: usize, mut each: impl FnMut(&ModelState)) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=12);
    let density = rng.gen_range(0.0..0.5);
    let g = random_chordal_graph(&mut rng, n, density);
    let mut st = ModelState::new(g).expect("generator yields chordal graphs");
    each(&st);
    for _ in 0..steps {
        let adds = st.eligible_additions();
        let dels = st.eligible_deletions();
        let add = match (adds.is_empty(), dels.is_empty()) {
            (true, true) => break,
            (false, true) => true,
            (true, false) => false,
            _ => rng.gen_bool(0.5),
        };
        if add {
            let &(a, b) = adds.choose(&mut rng).unwrap();
            st.apply_add(a, b).expect("eligible pair");
        } else {
            let &(a, b) = dels.choose(&mut rng).unwrap();
            st.apply_delete(a, b).expect("deletable edge");
        }
        each(&st);
    }
}

const TRAJECTORIES: u64 = 1000;

fn criterion_1() -> Outcome {
    let (mut checks, mut failures) = (0, 0);
    for seed in 0..TRAJECTORIES {
        addition_trajectory(seed, |st, _| {
            checks += 1;
            if st.eligible_additions() != brute_eligible_additions(st.graph()).unwrap() {
                failures += 1;
            }
        });
    }
    outcome(
        "1",
        "forward eligibility equals brute force",
        failures,
        format!("{TRAJECTORIES} trajectories, {checks} states, {failures} mismatches"),
    )
}

fn criterion_2() -> Outcome {
    let (mut checks, mut failures) = (0, 0);
    let mut check = |st: &ModelState| {
        checks += 1;
        if st.eligible_deletions() != brute_eligible_deletions(st.graph()).unwrap() {
            failures += 1;
        }
    };
    for seed in 0..TRAJECTORIES {
        addition_trajectory(seed, |st, _| check(st));
        mixed_trajectory(seed, 40, &mut check);
    }
    outcome(
        "2",
        "backward eligibility equals brute force",
        failures,
        format!("{} trajectories, {checks} states, {failures} mismatches", 2 * TRAJECTORIES),
    )
}

/// Every separator of a clique-graph edge added by a forward step is
/// `S + a`, `S + b`, or a proper subset of one of them.
fn added_edges_well_formed(out: &decomposable::engine::AddOutcome) -> bool {
    let sa = out.separator.with(out.v_a);
    let sb = out.separator.with(out.v_b);
    out.added_edges
        .iter()
        .all(|(_, s)| s.is_subset(&sa) || s.is_subset(&sb))
}

fn criterion_3() -> Outcome {
    let mut checks = 0;
    let mut failures = 0;
    let mut check = |st: &ModelState, out: Option<&decomposable::engine::AddOutcome>| {
        checks += 1;
        let cg = st.clique_graph();
        let fresh = CliqueGraph::build(st.graph()).unwrap();
        if cg.canonical() != fresh.canonical()
            || cg.closure_violation().is_some()
            || cg.separation_violation(st.graph()).is_some()
            || out.is_some_and(|o| !added_edges_well_formed(o))
        {
            failures += 1;
        }
    };
    for seed in 0..TRAJECTORIES {
        addition_trajectory(seed, &mut check);
        mixed_trajectory(seed, 40, |st| check(st, None));
    }
    outcome(
        "3",
        "maintained clique graph equals rebuild; closure and separation hold",
        failures,
        format!("{checks} states, {failures} mismatches"),
    )
}

fn criterion_4() -> Outcome {
    let (mut checks, mut failures) = (0, 0);
    let mut check = |st: &ModelState| {
        checks += 1;
        let jt = st.clique_graph().junction_tree();
        if !jt.is_valid() || jt.cliques.len() > st.graph().n().max(1) {
            failures += 1;
        }
    };
    for seed in 0..TRAJECTORIES {
        addition_trajectory(seed, |st, _| check(st));
        mixed_trajectory(seed, 40, &mut check);
    }
    outcome(
        "4",
        "junction trees have running intersection; cliques <= n",
        failures,
        format!("{checks} states, {failures} failures"),
    )
}

fn criterion_5() -> Outcome {
    let (mut checks, mut failures) = (0, 0);
    for seed in 0..TRAJECTORIES {
        let mut rng = ChaCha8Rng::seed_from_u64(10_000 + seed);
        let n = rng.gen_range(2..=10);
        let rows = rng.gen_range(1..=500);
        let data = random_dataset(&mut rng, n, rows, 4);
        let density = rng.gen_range(0.0..0.4);
        let g = random_chordal_graph(&mut rng, n, density);
        let mut sel = Selector::new(g, &data, SelectionConfig::default()).unwrap();
        for _ in 0..30 {
            let adds = sel.state().eligible_additions();
            let dels = sel.state().eligible_deletions();
            let action = match (adds.is_empty(), dels.is_empty()) {
                (true, true) => break,
                (false, true) => Action::Add,
                (true, false) => Action::Delete,
                _ if rng.gen_bool(0.6) => Action::Add,
                _ => Action::Delete,
            };
            let &(a, b) = match action {
                Action::Add => adds.choose(&mut rng).unwrap(),
                Action::Delete => dels.choose(&mut rng).unwrap(),
            };
            sel.apply_move(action, a, b).unwrap();
            let jt = sel.state().clique_graph().junction_tree();
            let batch = model_entropy(&jt, &data, sel.cache()).unwrap();
            checks += 1;
            if !rel_close(batch, sel.h_model(), 1e-9) {
                failures += 1;
            }
        }
    }
    outcome(
        "5",
        "incremental model entropy matches recomputation (1e-9 rel)",
        failures,
        format!("{TRAJECTORIES} trajectories, {checks} steps, {failures} mismatches"),
    )
}

fn seeded_data(seed: u64, n: usize, rows: usize) -> Dataset {
    random_dataset(&mut ChaCha8Rng::seed_from_u64(seed), n, rows, 4)
}

/// Forward selection from the null model that runs until no pair remains.
fn forward_from_null(data: &Dataset) -> Selector<'_> {
    let config = SelectionConfig {
        min_delta: 0.0,
        ..SelectionConfig::default()
    };
    Selector::new(Graph::empty(data.n_columns()), data, config).unwrap()
}

fn criterion_6() -> Outcome {
    let (mut checks, mut failures) = (0, 0);
    let mut worst = f64::INFINITY;
    for seed in 0..300 {
        let n = 2 + (seed as usize % 9);
        let data = seeded_data(20_000 + seed, n, 50 + (seed as usize * 7) % 450);
        let mut sel = forward_from_null(&data);
        let mut h = sel.h_model();
        loop {
            for (_, d) in sel.addition_candidates() {
                checks += 1;
                worst = worst.min(d);
                if d < -1e-12 {
                    failures += 1;
                }
            }
            let Some(rec) = sel.step().unwrap() else { break };
            if rec.h_model > h + 1e-12 * h.abs().max(1.0) {
                failures += 1;
            }
            h = rec.h_model;
        }
    }
    outcome(
        "6",
        "forward deltas >= -1e-12; H_model non-increasing",
        failures,
        format!("{checks} candidate deltas, min {worst:.3e}, {failures} failures"),
    )
}

fn criterion_7a() -> Outcome {
    let (mut checks, mut failures) = (0, 0);
    for seed in 0..300 {
        let n = 2 + (seed as usize % 11);
        let data = seeded_data(30_000 + seed, n, 200);
        let mut sel = forward_from_null(&data);
        while let Some(rec) = sel.step().unwrap() {
            let (na, nb) = rec.neighbors_before;
            checks += 1;
            if rec.entropies_computed > 2 * (n - na) + 2 * (n - nb) {
                failures += 1;
            }
        }
    }
    outcome(
        "7a",
        "forward entropy budget 2(n-n_a)+2(n-n_b)",
        failures,
        format!("{checks} forward steps, {failures} over budget"),
    )
}

/// Warm cache: the forward run that built the model, then the same edges
/// deleted in reverse order with that cache.
fn criterion_7b() -> Outcome {
    let (mut checks, mut over, mut off_form) = (0, 0, 0);
    for seed in 0..300 {
        let n = 3 + (seed as usize % 8);
        let mut rng = ChaCha8Rng::seed_from_u64(40_000 + seed);
        let data = random_dataset(&mut rng, n, 300, 3);
        let mut f = forward_from_null(&data);
        while f.step().unwrap().is_some() {}
        let g = f.graph().clone();
        let trace = f.trace().to_vec();
        let backward = SelectionConfig {
            mode: Mode::Backward,
            ..SelectionConfig::default()
        };
        let mut b = Selector::with_cache(g, &data, backward, f.into_cache()).unwrap();
        for added in trace.iter().rev() {
            let rec = b.apply_move(Action::Delete, added.v_a, added.v_b).unwrap();
            let s = &rec.separator;
            checks += 1;
            if rec.entropies_computed > s.len().saturating_sub(1) {
                over += 1;
            }
            if !b
                .last_misses()
                .iter()
                .all(|m| m.is_subset(s) && m.len() + 1 == s.len())
            {
                off_form += 1;
            }
        }
    }
    outcome(
        "7b",
        "warm backward budget |S|-1, misses of form S minus one vertex",
        over + off_form,
        format!(
            "{checks} deletions, {over} over budget, {off_form} with misses outside S minus one vertex; \
             rescoring the new deletion candidates needs H(S+a-x), which forward play does not compute"
        ),
    )
}

fn criterion_8() -> Outcome {
    let mut failures = 0;
    for n in 2..=30 {
        let data = seeded_data(50_000 + n as u64, n, 100);
        let sel = forward_from_null(&data);
        let expected = n * (n - 1) / 2;
        if sel.initial_delta_evaluations() != expected {
            failures += 1;
        }
    }
    outcome(
        "8",
        "first pass from the null model evaluates C(n,2) deltas",
        failures,
        format!("n = 2..30, {failures} mismatches"),
    )
}

fn median(mut v: Vec<Duration>) -> f64 {
    v.sort();
    v[v.len() / 2].as_secs_f64()
}

fn criterion_9() -> Outcome {
    let sizes = [50usize, 100, 200, 400];
    let mut points = Vec::new();
    for &n in &sizes {
        let mut times = Vec::new();
        for rep in 0..3u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(60_000 + rep * 1000 + n as u64);
            let mut st = ModelState::new(Graph::empty(n)).unwrap();
            // Sparse: about 1.5 n random additions, which keeps the model
            // close to a forest with a few small cliques.
            for _ in 0..(3 * n / 2) {
                let pairs = st.eligible_additions();
                let Some(&(a, b)) = pairs.choose(&mut rng) else { break };
                let start = Instant::now();
                st.apply_add(a, b).unwrap();
                times.push(start.elapsed());
            }
        }
        points.push((n as f64, median(times)));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / xs.len() as f64;
    let my = ys.iter().sum::<f64>() / ys.len() as f64;
    let k = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    let table: Vec<String> = points
        .iter()
        .map(|(n, t)| format!("n={n} {:.1}us", t * 1e6))
        .collect();
    outcome(
        "9",
        "apply_add time grows with exponent k <= 2.5",
        usize::from(k.is_nan() || k > 2.5),
        format!("k = {k:.2}; median per step: {}", table.join(", ")),
    )
}

/// `Π c^c` over a list of counts.
fn power_product(counts: impl IntoIterator<Item = u32>) -> BigUint {
    counts
        .into_iter()
        .fold(BigUint::from(1u32), |acc, c| acc * BigUint::from(c).pow(c))
}

/// Mutual information of a pair as an exact ratio `num / den` of
/// `exp(N · MI)` up to the common factor `N^N`.
fn mi_ratio(data: &Dataset, a: usize, b: usize) -> (BigUint, BigUint) {
    let ab: VertexSet = [a, b].into_iter().collect();
    let num = power_product(data.projection_counts(&ab));
    let den = power_product(data.projection_counts(&VertexSet::singleton(a)))
        * power_product(data.projection_counts(&VertexSet::singleton(b)));
    (num, den)
}

/// Kruskal over pairs ordered by exact mutual information, larger first,
/// ties to the smaller pair.
fn chow_liu(data: &Dataset) -> BTreeSet<(usize, usize)> {
    let n = data.n_columns();
    let mut pairs: Vec<((usize, usize), (BigUint, BigUint))> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .map(|(a, b)| ((a, b), mi_ratio(data, a, b)))
        .collect();
    pairs.sort_by(|(p, (n1, d1)), (q, (n2, d2))| (n2 * d1).cmp(&(n1 * d2)).then(p.cmp(q)));
    let mut root: Vec<usize> = (0..n).collect();
    fn find(root: &mut [usize], mut v: usize) -> usize {
        while root[v] != v {
            root[v] = root[root[v]];
            v = root[v];
        }
        v
    }
    let mut tree = BTreeSet::new();
    for ((a, b), _) in pairs {
        let (ra, rb) = (find(&mut root, a), find(&mut root, b));
        if ra != rb {
            root[ra] = rb;
            tree.insert((a, b));
        }
    }
    tree
}

fn criterion_10() -> Outcome {
    let mut failures = 0;
    let datasets = 200;
    for seed in 0..datasets {
        let mut rng = ChaCha8Rng::seed_from_u64(70_000 + seed);
        let n = rng.gen_range(2..=8);
        let rows = rng.gen_range(5..=120);
        let data = random_dataset(&mut rng, n, rows, 3);
        let config = SelectionConfig {
            mode: Mode::Forward,
            max_steps: n - 1,
            min_delta: 0.0,
            max_clique_size: Some(2),
            check_invariants: false,
        };
        let result = run(Graph::empty(n), &data, config).unwrap();
        let learned: BTreeSet<(usize, usize)> = result.graph.edges().into_iter().collect();
        if learned != chow_liu(&data) {
            failures += 1;
        }
    }
    outcome(
        "10",
        "size-2 forward selection equals the Chow-Liu tree",
        failures,
        format!("{datasets} datasets, {failures} mismatches"),
    )
}

fn criterion_11() -> Outcome {
    let mut failures = 0;
    let pairs = 2000;
    for seed in 0..pairs {
        let mut rng = ChaCha8Rng::seed_from_u64(80_000 + seed);
        let n = rng.gen_range(1..=10);
        let g = if rng.gen_bool(0.5) {
            let density = rng.gen_range(0.0..0.6);
            random_chordal_graph(&mut rng, n, density)
        } else {
            let mut g = Graph::empty(n);
            for a in 0..n {
                for b in a + 1..n {
                    if rng.gen_bool(0.3) {
                        g.add_edge(a, b);
                    }
                }
            }
            g
        };
        let discrete: VertexSet = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
        let mut star = Graph::empty(n + 1);
        for (a, b) in g.edges() {
            star.add_edge(a, b);
        }
        for v in discrete.iter() {
            star.add_edge(v, n);
        }
        let expected = brute_chordal(&star);
        if is_strongly_decomposable(&g, &discrete) != expected || is_chordal(&star) != expected {
            failures += 1;
        }
    }
    outcome(
        "11",
        "strong decomposability equals chordality of the star-augmented graph",
        failures,
        format!("{pairs} pairs, {failures} mismatches"),
    )
}

fn main() {
    let criteria: Vec<fn() -> Outcome> = vec![
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7a,
        criterion_7b,
        criterion_8,
        criterion_9,
        criterion_10,
        criterion_11,
    ];
    let mut unexpected = Vec::new();
    for criterion in criteria {
        let start = Instant::now();
        let o = criterion();
        let known_red = KNOWN_RED.contains(&o.id);
        let verdict = match (o.passed, known_red) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => "FAIL",
        };
        println!(
            "criterion {:>3} {verdict:<12} {} [{}; {:.1}s]",
            o.id,
            o.title,
            o.detail,
            start.elapsed().as_secs_f64()
        );
        if o.passed == known_red {
            unexpected.push(o.id);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected results for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
