//! Partial edge colorings with constant-time missing-color lookups, and the
//! chain shift / augment primitives.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{EdgeId, Graph, Vertex};

/// Colors are `1..=q`; [`BLANK`] marks an uncolored edge.
pub type Color = u32;
pub const BLANK: Color = 0;

const NO_EDGE: EdgeId = EdgeId::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ColoringError {
    #[error("q = {q} colors is too few for maximum degree {max_degree} (need q > max degree)")]
    QTooSmall { q: u32, max_degree: usize },
    #[error("chain is not shiftable at position {position}: {reason}")]
    NotShiftable { position: usize, reason: &'static str },
    #[error("color {color} cannot be assigned to edge {edge}")]
    InvalidFinalColor { edge: EdgeId, color: Color },
    #[error("empty chain")]
    EmptyChain,
}

#[inline]
fn mix(e: EdgeId, c: Color) -> u64 {
    // splitmix64 finalizer
    let mut z = ((e as u64) << 32 | c as u64).wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// A proper partial `q`-edge-coloring of a borrowed graph.
///
/// `missing` holds one `(q+1)`-wide row per vertex; entry `[x][c]` is the
/// edge at `x` colored `c`, or nothing when `c` is missing at `x`. The row
/// always agrees with `edge_color`.
///
/// A Zobrist-style fingerprint of the coloring is kept up to date so that
/// callers can compare states in O(1).
#[derive(Clone)]
pub struct ColoringState<'g> {
    graph: &'g Graph,
    q: u32,
    stride: usize,
    edge_color: Vec<Color>,
    missing: Vec<EdgeId>,
    uncolored: usize,
    fingerprint: u64,
    validate: bool,
}

impl PartialEq for ColoringState<'_> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.graph, other.graph)
            && self.q == other.q
            && self.uncolored == other.uncolored
            && self.edge_color == other.edge_color
            && self.missing == other.missing
    }
}

impl Eq for ColoringState<'_> {}

impl fmt::Debug for ColoringState<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ColoringState")
            .field("q", &self.q)
            .field("uncolored", &self.uncolored)
            .field("edge_color", &self.edge_color)
            .finish()
    }
}

impl<'g> ColoringState<'g> {
    /// Empty coloring. Requires `q > Δ`.
    pub fn new(graph: &'g Graph, q: u32) -> Result<Self, ColoringError> {
        if (q as usize) <= graph.max_degree() {
            return Err(ColoringError::QTooSmall {
                q,
                max_degree: graph.max_degree(),
            });
        }
        Ok(Self::new_unchecked(graph, q))
    }

    /// Empty coloring without the `q > Δ` check, for graphs of maximum
    /// degree at most one.
    pub(crate) fn new_unchecked(graph: &'g Graph, q: u32) -> Self {
        let stride = q as usize + 1;
        Self {
            graph,
            q,
            stride,
            edge_color: vec![BLANK; graph.m()],
            missing: vec![NO_EDGE; graph.n() * stride],
            uncolored: graph.m(),
            fingerprint: 0,
            validate: cfg!(debug_assertions),
        }
    }

    /// Turns full chain validation in [`shift`](Self::shift) on or off.
    /// Defaults to on in debug builds.
    pub fn set_validation(&mut self, on: bool) {
        self.validate = on;
    }

    pub fn validation(&self) -> bool {
        self.validate
    }

    #[inline]
    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn color_of(&self, e: EdgeId) -> Color {
        self.edge_color[e as usize]
    }

    pub fn colors(&self) -> &[Color] {
        &self.edge_color
    }

    #[inline]
    pub fn uncolored_count(&self) -> usize {
        self.uncolored
    }

    #[inline]
    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    #[inline]
    fn slot(&self, x: Vertex, c: Color) -> usize {
        debug_assert!(c >= 1 && c <= self.q, "color {c} outside 1..={}", self.q);
        x as usize * self.stride + c as usize
    }

    #[inline]
    pub fn is_missing(&self, x: Vertex, c: Color) -> bool {
        self.missing[self.slot(x, c)] == NO_EDGE
    }

    /// Edge at `x` colored `c`.
    #[inline]
    pub fn missing_edge(&self, x: Vertex, c: Color) -> Option<EdgeId> {
        match self.missing[self.slot(x, c)] {
            NO_EDGE => None,
            e => Some(e),
        }
    }

    /// Neighbor `y` with `φ(xy) = c`.
    #[inline]
    pub fn missing_partner(&self, x: Vertex, c: Color) -> Option<Vertex> {
        self.missing_edge(x, c)
            .map(|e| self.graph.other_endpoint(e, x))
    }

    /// Number of colors missing at `x`; O(q).
    pub fn missing_count(&self, x: Vertex) -> usize {
        let row = x as usize * self.stride;
        self.missing[row + 1..row + self.stride]
            .iter()
            .filter(|&&e| e == NO_EDGE)
            .count()
    }

    /// Colors `e` with `c`. The edge must be blank and `c` missing at both
    /// endpoints.
    pub fn color_edge(&mut self, e: EdgeId, c: Color) -> Result<(), ColoringError> {
        let (a, b) = self.graph.endpoints(e);
        if c == BLANK
            || c > self.q
            || self.color_of(e) != BLANK
            || !self.is_missing(a, c)
            || !self.is_missing(b, c)
        {
            return Err(ColoringError::InvalidFinalColor { edge: e, color: c });
        }
        self.set(e, a, b, c);
        Ok(())
    }

    /// Blanks `e`; no-op on blank edges.
    pub fn uncolor_edge(&mut self, e: EdgeId) {
        let c = self.color_of(e);
        if c == BLANK {
            return;
        }
        let (a, b) = self.graph.endpoints(e);
        let (sa, sb) = (self.slot(a, c), self.slot(b, c));
        self.missing[sa] = NO_EDGE;
        self.missing[sb] = NO_EDGE;
        self.edge_color[e as usize] = BLANK;
        self.fingerprint ^= mix(e, c);
        self.uncolored += 1;
    }

    #[inline]
    fn set(&mut self, e: EdgeId, a: Vertex, b: Vertex, c: Color) {
        let (sa, sb) = (self.slot(a, c), self.slot(b, c));
        self.missing[sa] = e;
        self.missing[sb] = e;
        self.edge_color[e as usize] = c;
        self.fingerprint ^= mix(e, c);
        self.uncolored -= 1;
    }

    /// Replaces the coloring by `Shift(φ, chain)`: each edge takes the color
    /// of its successor and the last edge becomes blank. O(length).
    ///
    /// The chain must be shiftable. With validation on, a non-shiftable chain
    /// is reported as [`ColoringError::NotShiftable`]; the state may then be
    /// partially shifted.
    pub fn shift(&mut self, chain: &[EdgeId]) -> Result<(), ColoringError> {
        self.shift_edges(chain.iter().copied())?;
        if self.validate {
            self.check_chain_consistent(chain)?;
        }
        Ok(())
    }

    /// `Shift(φ, chain*)`, the inverse of [`shift`](Self::shift), without
    /// materializing the reversed chain.
    pub fn unshift(&mut self, chain: &[EdgeId]) -> Result<(), ColoringError> {
        self.shift_edges(chain.iter().rev().copied())?;
        if self.validate {
            self.check_chain_consistent(chain)?;
        }
        Ok(())
    }

    fn shift_edges(&mut self, mut chain: impl Iterator<Item = EdgeId>) -> Result<(), ColoringError> {
        let Some(mut ei) = chain.next() else {
            return Err(ColoringError::EmptyChain);
        };
        if self.validate && self.color_of(ei) != BLANK {
            return Err(ColoringError::NotShiftable {
                position: 0,
                reason: "first edge is colored",
            });
        }
        let g = self.graph;
        // (position, edge, color) displaced from the table at a gaining endpoint
        let mut displaced = Vec::new();
        for (i, ej) in chain.enumerate() {
            let Some(y) = g.shared_vertex(ei, ej).filter(|_| ei != ej) else {
                return Err(ColoringError::NotShiftable {
                    position: i + 1,
                    reason: "consecutive edges are not adjacent",
                });
            };
            let c = self.edge_color[ej as usize];
            self.edge_color[ei as usize] = c;
            self.edge_color[ej as usize] = BLANK;
            if c != BLANK {
                let x = g.other_endpoint(ei, y);
                let z = g.other_endpoint(ej, y);
                let (sx, sy, sz) = (self.slot(x, c), self.slot(y, c), self.slot(z, c));
                if self.validate && self.missing[sx] != NO_EDGE {
                    displaced.push((i, self.missing[sx], c));
                }
                self.missing[sx] = ei;
                self.missing[sy] = ei;
                // z may already have picked c up again from an earlier chain edge
                if self.missing[sz] == ej {
                    self.missing[sz] = NO_EDGE;
                }
                self.fingerprint ^= mix(ej, c) ^ mix(ei, c);
            }
            ei = ej;
        }
        // A displaced edge that still carries the color is a real clash; one
        // that was shifted later in the chain was only transient.
        if let Some(&(position, _, _)) = displaced.iter().find(|&&(_, f, c)| self.color_of(f) == c) {
            return Err(ColoringError::NotShiftable {
                position,
                reason: "shifted coloring is not proper",
            });
        }
        Ok(())
    }

    /// Every colored chain edge must own its color at both endpoints.
    /// Together with the per-step updates this is equivalent to properness
    /// of the shifted coloring around the chain.
    fn check_chain_consistent(&self, chain: &[EdgeId]) -> Result<(), ColoringError> {
        for (position, &e) in chain.iter().enumerate() {
            let c = self.color_of(e);
            if c == BLANK {
                continue;
            }
            let (a, b) = self.graph.endpoints(e);
            if self.missing[self.slot(a, c)] != e || self.missing[self.slot(b, c)] != e {
                return Err(ColoringError::NotShiftable {
                    position,
                    reason: "shifted coloring is not proper",
                });
            }
        }
        Ok(())
    }

    /// `Aug(φ, chain, ξ)`: shift, then color the (now blank) last edge `ξ`.
    pub fn augment(&mut self, chain: &[EdgeId], xi: Color) -> Result<(), ColoringError> {
        self.shift(chain)?;
        let end = *chain.last().expect("shift rejects empty chains");
        self.color_edge(end, xi)
    }

    /// Rebuilds the missing table from `edge_color` and compares it with the
    /// incrementally maintained one. O(n·q + m).
    pub fn mirror_consistent(&self) -> bool {
        let mut rebuilt = vec![NO_EDGE; self.missing.len()];
        for (e, &c) in self.edge_color.iter().enumerate() {
            if c == BLANK {
                continue;
            }
            let (a, b) = self.graph.endpoints(e as EdgeId);
            for v in [a, b] {
                let s = self.slot(v, c);
                if rebuilt[s] != NO_EDGE {
                    return false;
                }
                rebuilt[s] = e as EdgeId;
            }
        }
        let blanks = self.edge_color.iter().filter(|&&c| c == BLANK).count();
        rebuilt == self.missing && blanks == self.uncolored
    }

    /// Exhaustive properness scan over `edge_color` only.
    pub fn verify_proper(&self) -> ProperReport {
        verify_coloring(self.graph, &self.edge_color, self.q)
    }
}

/// Outcome of [`verify_coloring`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProperReport {
    pub proper: bool,
    /// Pairs of adjacent edges sharing a color.
    pub violations: Vec<(EdgeId, EdgeId)>,
    /// Edges whose color exceeds `q`.
    pub out_of_range: Vec<EdgeId>,
    pub colored: usize,
}

/// Checks that no two adjacent edges share a non-blank color and that all
/// colors are at most `q`. Independent of any incremental bookkeeping.
pub fn verify_coloring(g: &Graph, colors: &[Color], q: u32) -> ProperReport {
    assert_eq!(colors.len(), g.m(), "one color per edge");
    let mut out_of_range = Vec::new();
    let mut colored = 0;
    for (e, &c) in colors.iter().enumerate() {
        if c != BLANK {
            colored += 1;
            if c > q {
                out_of_range.push(e as EdgeId);
            }
        }
    }
    // owner[c] = (vertex + 1, edge) of the last edge seen with color c
    // out-of-range colors are already reported and skipped below
    let mut owner: Vec<(u32, EdgeId)> = vec![(0, 0); q as usize + 1];
    let mut violations = Vec::new();
    for v in 0..g.n() as Vertex {
        for &(_, e) in g.neighbors(v) {
            let c = colors[e as usize] as usize;
            if c == BLANK as usize || c > q as usize {
                continue;
            }
            let (stamp, prev) = owner[c];
            if stamp == v + 1 {
                violations.push((prev.min(e), prev.max(e)));
            } else {
                owner[c] = (v + 1, e);
            }
        }
    }
    violations.sort_unstable();
    violations.dedup();
    ProperReport {
        proper: violations.is_empty() && out_of_range.is_empty(),
        violations,
        out_of_range,
        colored,
    }
}
