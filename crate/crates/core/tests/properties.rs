use std::collections::BTreeSet;

use proptest::prelude::*;

use vizing_core::io::{edge_list_string, read_coloring, read_edge_list, coloring_string};
use vizing_core::{
    derive_params, edge_color_with, verify_coloring, ChainParams, Color, ColoringState, Counters,
    EdgeId, Epsilon, Graph, Mode, Msva, Overrides, RngStream, RunOptions, BLANK,
};

/// Simple graphs on up to `max_n` vertices.
fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n).prop_flat_map(|n| {
        proptest::collection::vec((0..n as u64, 0..n as u64), 0..3 * n).prop_map(move |pairs| {
            let edges: BTreeSet<(u64, u64)> = pairs
                .into_iter()
                .filter(|(u, v)| u != v)
                .map(|(u, v)| (u.min(v), u.max(v)))
                .collect();
            let edges: Vec<_> = edges.into_iter().collect();
            Graph::new(n, &edges).unwrap()
        })
    })
}

/// Colors seen at `x` by brute force over all edges.
fn used_at(g: &Graph, colors: &[Color], x: u32) -> BTreeSet<Color> {
    g.edges()
        .zip(colors)
        .filter(|&((u, v), &c)| (u == x || v == x) && c != BLANK)
        .map(|(_, &c)| c)
        .collect()
}

fn naive_shift(colors: &mut [Color], chain: &[EdgeId]) {
    for w in chain.windows(2) {
        colors[w[0] as usize] = colors[w[1] as usize];
    }
    colors[*chain.last().unwrap() as usize] = BLANK;
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn edge_list_round_trip(g in graph(30)) {
        let text = edge_list_string(&g);
        let back = read_edge_list(text.as_bytes()).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn missing_table_matches_brute_force(g in graph(12), ops in proptest::collection::vec((any::<u32>(), any::<u32>()), 0..200)) {
        let q = g.max_degree() as u32 + 2;
        let mut s = ColoringState::new(&g, q).unwrap();
        prop_assume!(g.m() > 0);
        for (a, b) in ops {
            let e = a % g.m() as u32;
            let c = 1 + b % q;
            if s.color_of(e) != BLANK {
                s.uncolor_edge(e);
                continue;
            }
            let (u, v) = g.endpoints(e);
            let legal = !used_at(&g, s.colors(), u).contains(&c) && !used_at(&g, s.colors(), v).contains(&c);
            prop_assert_eq!(s.color_edge(e, c).is_ok(), legal);
        }
        prop_assert!(s.mirror_consistent());
        for x in 0..g.n() as u32 {
            let used = used_at(&g, s.colors(), x);
            prop_assert_eq!(s.missing_count(x), q as usize - used.len());
            for c in 1..=q {
                prop_assert_eq!(s.is_missing(x, c), !used.contains(&c));
            }
        }
        let blanks = s.colors().iter().filter(|&&c| c == BLANK).count();
        prop_assert_eq!(s.uncolored_count(), blanks);
    }

    #[test]
    fn chains_shift_like_the_reference(g in graph(40), seed in any::<u64>()) {
        prop_assume!(g.max_degree() >= 2);
        let q = g.max_degree() as u32 + 1;
        let mut rng = RngStream::new(seed);
        let mut msva = Msva::new(g.n(), g.m(), ChainParams { k_max: 8, ell: 3 });
        let mut s = ColoringState::new(&g, q).unwrap();
        s.set_validation(true);
        let mut order: Vec<EdgeId> = (0..g.m() as EdgeId).collect();
        rng.shuffle(&mut order);
        for e in order {
            let (a, _) = g.endpoints(e);
            let before = s.clone();
            let out = msva.run(&mut s, e, a, &mut rng, &mut Counters::default()).unwrap();
            let chain = out.full_edges();

            // the live state holds the shift of the whole chain except the tail
            let mut expected = before.colors().to_vec();
            naive_shift(&mut expected, &chain);
            let mut whole = before.clone();
            whole.shift(&chain).unwrap();
            prop_assert_eq!(whole.colors(), expected.as_slice());
            let mut parts = s.clone();
            parts.shift(&out.tail_edges()).unwrap();
            prop_assert!(parts == whole);

            let reversed: Vec<EdgeId> = chain.iter().rev().copied().collect();
            whole.shift(&reversed).unwrap();
            prop_assert!(whole == before);

            s.augment(&out.tail_edges(), out.color).unwrap();
            prop_assert!(s.verify_proper().proper);
        }
        prop_assert_eq!(s.uncolored_count(), 0);
    }

    #[test]
    fn colorings_are_proper_and_round_trip(g in graph(40), seed in any::<u64>(), den in 1u64..=4) {
        let eps = Epsilon::new(1, den).unwrap();
        let delta = g.max_degree() as u64;
        let Ok(params) = derive_params(g.max_degree(), eps, Overrides::default(), Mode::Practical) else {
            prop_assert!(delta >= 2 && delta / den == 0);
            return Ok(());
        };
        prop_assert!(params.q as u64 <= (delta + delta / den).max(1));
        let out = edge_color_with(&g, &params, seed, RunOptions { validate: true, ..RunOptions::default() }).unwrap();
        let report = verify_coloring(&g, out.state.colors(), params.q);
        prop_assert!(report.proper);
        prop_assert_eq!(report.colored, g.m());

        let text = coloring_string(&g, params.q, out.state.colors());
        let file = read_coloring(&g, text.as_bytes()).unwrap();
        prop_assert_eq!(file.colors.as_slice(), out.state.colors());
    }
}
