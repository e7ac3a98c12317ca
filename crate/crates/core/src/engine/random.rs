use crate::chain::{walk_alternating_path, Fan, PathChain};
use crate::coloring::{Color, ColoringState, BLANK};
use crate::graph::{EdgeId, Vertex};
use crate::rng::RngStream;

use super::{ensure_blank, invariant, ChainParams, Counters, EngineError, FAN_RESTART_LIMIT};

/// Uniform color from `M(φ, x) \ {θ}` by rejection from `[q]`.
///
/// Callers guarantee the set is non-empty. A run of more than
/// `64·q/(q−Δ)` rejections is reported as [`EngineError::ColorWatchdog`].
pub fn random_missing_color(
    state: &ColoringState<'_>,
    x: Vertex,
    theta: Color,
    rng: &mut RngStream,
    counters: &mut Counters,
) -> Result<Color, EngineError> {
    counters.color_calls += 1;
    let q = state.q() as u64;
    let slack = q.saturating_sub(state.graph().max_degree() as u64).max(1);
    let limit = (64 * q).div_ceil(slack).max(64);
    let mut draws = 0;
    loop {
        draws += 1;
        counters.color_draws += 1;
        let eta = 1 + rng.uniform_below(q) as Color;
        if eta != theta && state.is_missing(x, eta) {
            return Ok(eta);
        }
        if draws > limit {
            return Err(EngineError::ColorWatchdog { vertex: x, draws });
        }
    }
}

/// Result of [`random_fan`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanDraw {
    pub fan: Fan,
    /// Missing at `vEnd(F)` and at `vEnd(F|j)`.
    pub delta: Color,
    /// `1 <= j <= len(F)`.
    pub j: usize,
    pub restarts: u64,
}

/// Grows a fan around `x` from the blank edge `e = xy`.
///
/// Each round draws a missing color `η` at the newest leaf (avoiding `β` at
/// `y` only). It stops when `η` is missing at the pivot, equals `β`, or is
/// missing at an earlier leaf (the first such leaf wins). Otherwise the edge
/// at `x` colored `η` becomes the next leaf. Reaching `k_max` leaves without
/// stopping restarts the construction from scratch.
pub fn random_fan(
    state: &ColoringState<'_>,
    e: EdgeId,
    x: Vertex,
    beta: Color,
    rng: &mut RngStream,
    k_max: usize,
    counters: &mut Counters,
) -> Result<FanDraw, EngineError> {
    ensure_blank(state, e)?;
    let g = state.graph();
    let y = g.other_endpoint(e, x);
    if beta != BLANK && !state.is_missing(y, beta) {
        return Err(EngineError::PreconditionViolated(format!(
            "beta = {beta} is not missing at {y}"
        )));
    }
    let mut fan = Fan::single(x, y, e);
    let mut restarts = 0;
    loop {
        let mut theta = beta;
        let mut k = 0;
        while k < k_max {
            let eta = random_missing_color(state, fan.leaves[k], theta, rng, counters)?;
            theta = BLANK;
            if state.is_missing(x, eta) || eta == beta {
                return Ok(FanDraw {
                    fan,
                    delta: eta,
                    j: k + 1,
                    restarts,
                });
            }
            if let Some(j) = (1..=k).find(|&j| state.is_missing(fan.leaves[j - 1], eta)) {
                return Ok(FanDraw {
                    fan,
                    delta: eta,
                    j,
                    restarts,
                });
            }
            k += 1;
            let next = state
                .missing_edge(x, eta)
                .expect("eta is not missing at the pivot");
            fan.leaves.push(g.other_endpoint(next, x));
            fan.edges.push(next);
        }
        restarts += 1;
        counters.fan_restarts += 1;
        if restarts > FAN_RESTART_LIMIT {
            return Err(EngineError::RestartWatchdog { pivot: x, restarts });
        }
        fan.leaves.truncate(1);
        fan.edges.truncate(1);
    }
}

/// Result of [`random_vizing_chain`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VizingDraw {
    pub fan: Fan,
    pub path: PathChain,
    /// Valid for `End(P)` after shifting `F + P` whenever `F + P` is happy.
    pub eta: Color,
}

/// Walks the alternating path off `fan` in `Shift(φ, fan)` and shifts back.
fn walk_after_fan(
    state: &mut ColoringState<'_>,
    fan: &Fan,
    first: Color,
    second: Color,
    cap: usize,
) -> Result<PathChain, EngineError> {
    state.shift(&fan.edges)?;
    let path = walk_alternating_path(state, fan.end(), fan.vend(), first, second, cap);
    state.unshift(&fan.edges)?;
    Ok(path?)
}

/// Builds one Vizing chain `F + P` starting at the blank edge `e = uv` with
/// pivot `u`.
///
/// `(α, β)` are the colors of the previous path (both blank for the first
/// chain); otherwise `α ∈ M(u) \ M(v)` and `β ∈ M(v)`. The coloring is shifted
/// and restored internally and is unchanged on return.
pub fn random_vizing_chain(
    state: &mut ColoringState<'_>,
    e: EdgeId,
    u: Vertex,
    alpha: Color,
    beta: Color,
    rng: &mut RngStream,
    params: ChainParams,
    counters: &mut Counters,
) -> Result<VizingDraw, EngineError> {
    ensure_blank(state, e)?;
    let v = state.graph().other_endpoint(e, u);
    let valid_colors = (alpha == BLANK && beta == BLANK)
        || (alpha != BLANK
            && beta != BLANK
            && state.is_missing(u, alpha)
            && !state.is_missing(v, alpha)
            && state.is_missing(v, beta));
    if !valid_colors {
        return Err(EngineError::PreconditionViolated(format!(
            "colors ({alpha}, {beta}) invalid for edge {e} at pivot {u}"
        )));
    }
    counters.chain_calls += 1;
    let fingerprint = state.fingerprint();
    let (calls_before, restarts_before) = (counters.color_calls, counters.fan_restarts);
    let cap = params.path_cap();

    let FanDraw { fan, delta, j, .. } =
        random_fan(state, e, u, beta, rng, params.k_max, counters)?;
    check_fan(state, &fan, delta, j, params.k_max)?;

    let draw = if state.is_missing(u, delta) {
        let path = PathChain::single(fan.end(), u, fan.vend());
        VizingDraw { fan, path, eta: delta }
    } else if delta == beta {
        let path = walk_after_fan(state, &fan, alpha, beta, cap)?;
        let eta = if path.len() > 1 && path.end_color() == alpha {
            beta
        } else {
            alpha
        };
        VizingDraw { fan, path, eta }
    } else {
        let gamma = random_missing_color(state, u, alpha, rng, counters)?;
        let path = walk_after_fan(state, &fan, gamma, delta, cap)?;
        // The prefix F|j is only needed when the full fan's path closes back
        // at the pivot; the walks consume no randomness.
        let (fan, path) = if path.vend() != u {
            (fan, path)
        } else {
            let prefix = fan.prefix(j);
            let prefix_path = walk_after_fan(state, &prefix, gamma, delta, cap)?;
            (prefix, prefix_path)
        };
        let eta = if path.len() > 1 && path.end_color() == gamma {
            delta
        } else {
            gamma
        };
        VizingDraw { fan, path, eta }
    };

    if state.fingerprint() != fingerprint {
        return Err(invariant("Vizing chain construction left the coloring modified"));
    }
    let calls = counters.color_calls - calls_before;
    let restarts = counters.fan_restarts - restarts_before;
    if calls > params.k_max as u64 * (restarts + 1) + 1 {
        return Err(invariant(format!(
            "{calls} color calls exceed k_max(S+1)+1 with S = {restarts}"
        )));
    }
    Ok(draw)
}

/// Cheap post-conditions of the fan builder.
fn check_fan(
    state: &ColoringState<'_>,
    fan: &Fan,
    delta: Color,
    j: usize,
    k_max: usize,
) -> Result<(), EngineError> {
    if fan.is_empty() || fan.len() > k_max || j == 0 || j > fan.len() {
        return Err(invariant(format!(
            "fan of length {} with j = {j} (k_max = {k_max})",
            fan.len()
        )));
    }
    if !state.is_missing(fan.vend(), delta) || !state.is_missing(fan.leaves[j - 1], delta) {
        return Err(invariant(format!("delta = {delta} not missing at the fan ends")));
    }
    if fan.edges[1..].iter().any(|&f| state.color_of(f) == BLANK) {
        return Err(invariant("fan edge after the start is blank"));
    }
    Ok(())
}
