//! Fixtures shared by the benchmarks.

use vizing_core::{derive_params, generate, Graph, GraphFamily, Mode, Overrides, Params, RngStream};

/// A near-regular graph with `n` vertices and degree `d`, fixed by `seed`.
pub fn near_regular(n: usize, d: usize, seed: u64) -> Graph {
    let mut rng = RngStream::new(seed);
    generate(GraphFamily::NearRegular { n, d }, &mut rng).expect("feasible generator parameters")
}

/// Practical-mode parameters for `g` at `epsilon`.
pub fn practical_params(g: &Graph, epsilon: &str) -> Params {
    let eps = epsilon.parse().expect("valid epsilon");
    derive_params(g.max_degree(), eps, Overrides::default(), Mode::Practical)
        .expect("epsilon large enough for the graph")
}
