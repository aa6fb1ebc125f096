use decomposable::graph::{
    is_chordal, is_perfect_elimination, lex_bfs, maximal_cliques, perfect_elimination_order, Graph,
};
use decomposable::oracle::{brute_chordal, brute_cliques, random_chordal_graph};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn arbitrary_graph() -> impl Strategy<Value = Graph> {
    (1usize..=9).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut g = Graph::empty(n);
            let mut k = 0;
            for a in 0..n {
                for b in a + 1..n {
                    if bits[k] {
                        g.add_edge(a, b);
                    }
                    k += 1;
                }
            }
            g
        })
    })
}

fn chordal_graph() -> impl Strategy<Value = Graph> {
    (any::<u64>(), 1usize..=12, 0.0f64..0.6)
        .prop_map(|(seed, n, p)| random_chordal_graph(&mut ChaCha8Rng::seed_from_u64(seed), n, p))
}

proptest! {
    #[test]
    fn chordality_agrees_with_simplicial_elimination(g in arbitrary_graph()) {
        prop_assert_eq!(is_chordal(&g), brute_chordal(&g));
    }

    #[test]
    fn reversed_lex_bfs_is_perfect_from_every_start(g in chordal_graph()) {
        for s in 0..g.n() {
            let mut order = lex_bfs(&g, s);
            prop_assert_eq!(order[0], s);
            order.reverse();
            prop_assert!(is_perfect_elimination(&g, &order).unwrap());
        }
    }

    #[test]
    fn maximal_cliques_match_enumeration(g in chordal_graph()) {
        let cliques = maximal_cliques(&g).unwrap();
        prop_assert!(cliques.len() <= g.n());
        for c in &cliques {
            prop_assert!(g.is_clique(c));
        }
        prop_assert_eq!(cliques, brute_cliques(&g));
    }

    #[test]
    fn non_chordal_graphs_have_no_elimination_order(g in arbitrary_graph()) {
        prop_assert_eq!(perfect_elimination_order(&g).is_some(), brute_chordal(&g));
    }
}

#[test]
fn cycles_of_length_four_or_more_are_not_chordal() {
    for n in 4..9 {
        let mut g = Graph::path(n);
        g.add_edge(0, n - 1);
        assert!(!is_chordal(&g));
        assert!(maximal_cliques(&g).is_err());
    }
}
