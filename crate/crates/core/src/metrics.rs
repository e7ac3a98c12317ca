//! One flat record per coloring run, serialized as a single JSON line.

use serde::Serialize;

use crate::coloring::ProperReport;
use crate::driver::{Params, RunStats};
use crate::graph::Graph;

/// Field order is part of the output format.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MetricsRecord {
    pub n: usize,
    pub m: usize,
    pub delta: usize,
    pub epsilon: f64,
    pub q: u32,
    pub seed: u64,
    pub k_max: usize,
    pub ell: u64,
    pub iterations_total: u64,
    pub fan_restarts: u64,
    pub color_calls: u64,
    pub color_draws: u64,
    pub backward_steps: u64,
    pub max_chain_edges: u64,
    pub avg_chain_edges: f64,
    pub wall_ms: f64,
    pub proper: bool,
}

impl MetricsRecord {
    /// `report` must come from the independent verifier run on the output.
    pub fn new(g: &Graph, params: &Params, seed: u64, stats: &RunStats, report: &ProperReport) -> Self {
        Self {
            n: g.n(),
            m: g.m(),
            delta: g.max_degree(),
            epsilon: params.epsilon.as_f64(),
            q: params.q,
            seed,
            k_max: params.k_max,
            ell: params.ell,
            iterations_total: stats.counters.iterations,
            fan_restarts: stats.counters.fan_restarts,
            color_calls: stats.counters.color_calls,
            color_draws: stats.counters.color_draws,
            backward_steps: stats.counters.backward_steps,
            max_chain_edges: stats.max_chain_edges,
            avg_chain_edges: stats.avg_chain_edges(),
            wall_ms: stats.wall_ms,
            proper: report.proper && report.colored == g.m() && report.out_of_range.is_empty(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("metrics serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::driver::{derive_params, edge_color, Mode, Overrides};

    #[test]
    fn keys_in_fixed_order() {
        let g = Graph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let p = derive_params(2, "1".parse().unwrap(), Overrides::default(), Mode::Practical).unwrap();
        let (state, stats) = edge_color(&g, &p, 7).unwrap();
        let report = state.verify_proper();
        let json = MetricsRecord::new(&g, &p, 7, &stats.without_timing(), &report).to_json();
        let keys = [
            "n", "m", "delta", "epsilon", "q", "seed", "k_max", "ell", "iterations_total",
            "fan_restarts", "color_calls", "color_draws", "backward_steps", "max_chain_edges",
            "avg_chain_edges", "wall_ms", "proper",
        ];
        let mut last = 0;
        for key in keys {
            let at = json.find(&format!("\"{key}\":")).unwrap();
            assert!(at >= last, "{key} out of order in {json}");
            last = at;
        }
        assert!(json.starts_with("{\"n\":3,\"m\":3,\"delta\":2,\"epsilon\":1.0,\"q\":4,\"seed\":7"));
        assert!(json.ends_with("\"wall_ms\":0.0,\"proper\":true}"));
    }
}
