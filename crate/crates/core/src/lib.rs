//! Randomized `(1+ε)Δ` edge coloring of simple graphs in time linear in the
//! number of edges, built on multi-step Vizing chains.
//!
//! ```
//! use vizing_core::{derive_params, edge_color, Graph, Mode, Overrides};
//!
//! let g = Graph::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap();
//! let eps = "1".parse().unwrap();
//! let params = derive_params(g.max_degree(), eps, Overrides::default(), Mode::Practical).unwrap();
//! let (coloring, _stats) = edge_color(&g, &params, 42).unwrap();
//! assert!(coloring.verify_proper().proper);
//! assert!(coloring.colors().iter().all(|&c| 1 <= c && c <= params.q));
//! ```

pub mod chain;
pub mod coloring;
pub mod driver;
pub mod engine;
pub mod generate;
pub mod graph;
pub mod io;
pub mod metrics;
pub mod rng;

pub use chain::{Fan, MultiStepChain, PathChain, StepRecord};
pub use coloring::{verify_coloring, Color, ColoringError, ColoringState, ProperReport, BLANK};
pub use driver::{
    derive_params, edge_color, edge_color_with, Epsilon, Mode, Overrides, ParamError, Params,
    RunOptions, RunOutput, RunStats, UncoloredSet,
};
pub use engine::{ChainParams, Counters, EngineError, Msva, MsvaOutcome, TraceEvent};
pub use generate::{generate, GraphFamily};
pub use graph::{EdgeId, Graph, GraphError, Vertex};
pub use metrics::MetricsRecord;
pub use rng::RngStream;
