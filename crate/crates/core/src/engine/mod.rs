//! The randomized chain builders: missing-color sampling, fans, Vizing
//! chains, and the multi-step driver that stitches them together.

mod msva;
mod random;
mod visited;

use serde::Serialize;
use thiserror::Error;

use crate::chain::ChainError;
use crate::coloring::{Color, ColoringError};
use crate::graph::{EdgeId, Vertex};

pub use msva::{first_intersection, Element, Msva, MsvaOutcome, TraceEvent};
pub use random::{random_fan, random_missing_color, random_vizing_chain, FanDraw, VizingDraw};
pub use visited::VisitedMap;

/// Fan cap and path parameter shared by the builders.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChainParams {
    pub k_max: usize,
    /// Paths are walked to at most `2 * ell` edges.
    pub ell: u64,
}

impl ChainParams {
    #[inline]
    pub fn path_cap(&self) -> usize {
        usize::try_from(self.ell.saturating_mul(2)).unwrap_or(usize::MAX)
    }
}

/// Restarts of a single fan construction before giving up.
pub const FAN_RESTART_LIMIT: u64 = 1_000_000;

/// Running totals kept by the builders.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Counters {
    /// Basic-loop passes of the multi-step algorithm.
    pub iterations: u64,
    /// Calls to the Vizing-chain builder.
    pub chain_calls: u64,
    /// Fan constructions abandoned at the length cap.
    pub fan_restarts: u64,
    /// Calls to the missing-color sampler.
    pub color_calls: u64,
    /// Individual color draws, rejected ones included.
    pub color_draws: u64,
    /// Backward iterations of any depth.
    pub backward_steps: u64,
    /// Backward iterations that returned to the newest step.
    pub zero_backward_steps: u64,
    /// Zero-backward iterations whose first hit was not a vertex of the
    /// newest fan. Always zero for a correct implementation.
    pub zero_backward_off_fan: u64,
}

impl Counters {
    pub fn add(&mut self, other: &Counters) {
        self.iterations += other.iterations;
        self.chain_calls += other.chain_calls;
        self.fan_restarts += other.fan_restarts;
        self.color_calls += other.color_calls;
        self.color_draws += other.color_draws;
        self.backward_steps += other.backward_steps;
        self.zero_backward_steps += other.zero_backward_steps;
        self.zero_backward_off_fan += other.zero_backward_off_fan;
    }
}

/// Failures of the chain builders.
///
/// Apart from [`EngineError::PreconditionViolated`], every variant means the
/// implementation broke one of its own invariants.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("internal error: multi-step search reached its failure branch at step {step}")]
    FailBranch { step: usize },
    #[error("internal error: {draws} consecutive rejected color draws at vertex {vertex}")]
    ColorWatchdog { vertex: Vertex, draws: u64 },
    #[error("internal error: fan around pivot {pivot} restarted {restarts} times")]
    RestartWatchdog { pivot: Vertex, restarts: u64 },
    #[error("internal error: {0}")]
    InvariantViolated(String),
    #[error("internal error: {0}")]
    Coloring(#[from] ColoringError),
    #[error("internal error: {0}")]
    Chain(#[from] ChainError),
}

impl EngineError {
    pub fn is_internal(&self) -> bool {
        !matches!(self, EngineError::PreconditionViolated(_))
    }
}

pub(crate) fn invariant(msg: impl Into<String>) -> EngineError {
    EngineError::InvariantViolated(msg.into())
}

pub(crate) fn ensure_blank(
    state: &crate::coloring::ColoringState<'_>,
    e: EdgeId,
) -> Result<(), EngineError> {
    if state.color_of(e) != crate::coloring::BLANK {
        return Err(EngineError::PreconditionViolated(format!(
            "edge {e} is colored {}",
            state.color_of(e)
        )));
    }
    Ok(())
}

/// The other color of an alternating pair.
#[inline]
pub(crate) fn other_color(pair: (Color, Color), c: Color) -> Color {
    if pair.0 == c {
        pair.1
    } else {
        pair.0
    }
}
