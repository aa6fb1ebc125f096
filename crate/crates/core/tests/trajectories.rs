use decomposable::clique_graph::CliqueGraph;
use decomposable::engine::{eligible_additions, ModelState};
use decomposable::oracle::{brute_eligible_additions, brute_minimal_separator, direct_addition_eligible, random_chordal_graph};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn add_then_delete_restores_the_clique_graph(seed in any::<u64>(), n in 2usize..=10, p in 0.0f64..0.5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_chordal_graph(&mut rng, n, p);
        let before = CliqueGraph::build(&g).unwrap().canonical();
        let st = ModelState::new(g).unwrap();
        for (a, b) in st.eligible_additions() {
            let mut s = st.clone();
            s.apply_add(a, b).unwrap();
            prop_assert!(s.eligible_deletions().contains(&(a, b)));
            s.apply_delete(a, b).unwrap();
            prop_assert_eq!(s.clique_graph().canonical(), before.clone());
            prop_assert_eq!(s.eligible_additions(), st.eligible_additions());
        }
    }

    #[test]
    fn new_clique_graph_edges_fall_in_the_four_cases(seed in any::<u64>(), n in 2usize..=12, p in 0.0f64..0.5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut st = ModelState::new(random_chordal_graph(&mut rng, n, p)).unwrap();
        while let Some(&(a, b)) = st.eligible_additions().choose(&mut rng) {
            let out = st.apply_add(a, b).unwrap();
            let sa = out.separator.with(a);
            let sb = out.separator.with(b);
            for (_, s) in &out.added_edges {
                prop_assert!(*s == sa || *s == sb || s.is_proper_subset(&sa) || s.is_proper_subset(&sb));
            }
            prop_assert_eq!(out.c_ab.len(), out.separator.len() + 2);
        }
    }

    #[test]
    fn witness_separator_is_the_minimal_separator(seed in any::<u64>(), n in 2usize..=9, p in 0.0f64..0.5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let st = ModelState::new(random_chordal_graph(&mut rng, n, p)).unwrap();
        for (a, b) in st.eligible_additions() {
            let s = st.separator_of(a, b);
            prop_assert_eq!(brute_minimal_separator(st.graph(), a, b).unwrap(), s.clone());
            let witnessed = st.clique_graph().edges().into_iter().any(|(_, e)| {
                let (c1, c2) = (st.clique_graph().members(e.ends.0), st.clique_graph().members(e.ends.1));
                e.separator == s
                    && ((c1.contains(a) && c2.contains(b)) || (c1.contains(b) && c2.contains(a)))
            });
            prop_assert!(witnessed);
        }
    }

    #[test]
    fn direct_characterization_matches_brute_force(seed in any::<u64>(), n in 1usize..=8, p in 0.0f64..0.7) {
        let g = random_chordal_graph(&mut ChaCha8Rng::seed_from_u64(seed), n, p);
        let direct: Vec<(usize, usize)> = g
            .non_edges()
            .into_iter()
            .filter(|&(a, b)| direct_addition_eligible(&g, a, b))
            .collect();
        prop_assert_eq!(&direct, &brute_eligible_additions(&g).unwrap());
        let cg = CliqueGraph::build(&g).unwrap();
        prop_assert_eq!(direct, eligible_additions(&cg, &g));
    }
}

#[test]
fn check_invariants_passes_on_correct_updates() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut st = ModelState::new(random_chordal_graph(&mut rng, 10, 0.2)).unwrap();
    st.set_check_invariants(true);
    for _ in 0..30 {
        let adds = st.eligible_additions();
        match adds.choose(&mut rng) {
            Some(&(a, b)) => {
                st.apply_add(a, b).unwrap();
            }
            None => break,
        }
        if let Some(&(a, b)) = st.eligible_deletions().choose(&mut rng) {
            st.apply_delete(a, b).unwrap();
        }
    }
}
