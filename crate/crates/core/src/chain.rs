//! Chain shapes: plain chains, fans, alternating path chains and multi-step
//! Vizing chains, plus the alternating-path walker.

use std::collections::HashMap;
use std::io::{self, Write};

use thiserror::Error;

use crate::coloring::{Color, ColoringState, BLANK};
use crate::graph::{EdgeId, Graph, Vertex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChainError {
    #[error("cannot concatenate: end edge {end} differs from start edge {start}")]
    BoundaryMismatch { end: EdgeId, start: EdgeId },
    #[error("vertex {vertex} has two edges colored {alpha}/{beta}; no alternating path starts there")]
    BadStart { vertex: Vertex, alpha: Color, beta: Color },
}

/// A sequence of distinct edges, consecutive ones adjacent.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Chain(pub Vec<EdgeId>);

impl Chain {
    pub fn edges(&self) -> &[EdgeId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn start(&self) -> Option<EdgeId> {
        self.0.first().copied()
    }

    pub fn end(&self) -> Option<EdgeId> {
        self.0.last().copied()
    }

    /// `C|j`, the first `j` edges.
    pub fn initial_segment(&self, j: usize) -> Chain {
        Chain(self.0[..j.min(self.0.len())].to_vec())
    }

    /// `C + C'`; the end of `self` must be the start of `other`.
    pub fn concat(&self, other: &Chain) -> Result<Chain, ChainError> {
        match (self.end(), other.start()) {
            (None, _) => Ok(other.clone()),
            (_, None) => Ok(self.clone()),
            (Some(end), Some(start)) if end == start => {
                let mut edges = self.0.clone();
                edges.extend_from_slice(&other.0[1..]);
                Ok(Chain(edges))
            }
            (Some(end), Some(start)) => Err(ChainError::BoundaryMismatch { end, start }),
        }
    }

    /// `C*`.
    pub fn reversed(&self) -> Chain {
        Chain(self.0.iter().rev().copied().collect())
    }
}

/// Fan `(xy_0, ..., xy_{k-1})` around the pivot `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    pub pivot: Vertex,
    pub leaves: Vec<Vertex>,
    pub edges: Vec<EdgeId>,
}

impl Fan {
    pub fn single(pivot: Vertex, leaf: Vertex, edge: EdgeId) -> Self {
        Self {
            pivot,
            leaves: vec![leaf],
            edges: vec![edge],
        }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn start(&self) -> EdgeId {
        self.edges[0]
    }

    pub fn end(&self) -> EdgeId {
        *self.edges.last().expect("fans are non-empty")
    }

    pub fn vstart(&self) -> Vertex {
        self.leaves[0]
    }

    pub fn vend(&self) -> Vertex {
        *self.leaves.last().expect("fans are non-empty")
    }

    /// `F|j`.
    pub fn prefix(&self, j: usize) -> Fan {
        Fan {
            pivot: self.pivot,
            leaves: self.leaves[..j].to_vec(),
            edges: self.edges[..j].to_vec(),
        }
    }

    /// Pivot followed by the leaves.
    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        std::iter::once(self.pivot).chain(self.leaves.iter().copied())
    }
}

/// Path chain `(e_0, e_1, ..., e_{k-1})` where `e_0 = x_0 x_1` and
/// `e_1, ...` is a path `x_1 x_2 ...` alternating between two colors.
///
/// `vStart` is stored explicitly so single-edge chains keep an orientation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathChain {
    pub start_edge: EdgeId,
    /// `x_0`.
    pub start_vertex: Vertex,
    /// `x_1, ..., x_k`.
    pub vertices: Vec<Vertex>,
    /// `e_1, ..., e_{k-1}`.
    pub edges: Vec<EdgeId>,
    /// `e_1` has the first color, `e_2` the second, and so on.
    pub colors: (Color, Color),
    /// The walk stopped at the length cap while the path continued.
    pub capped: bool,
}

impl PathChain {
    pub fn single(start_edge: EdgeId, start_vertex: Vertex, far: Vertex) -> Self {
        Self {
            start_edge,
            start_vertex,
            vertices: vec![far],
            edges: Vec::new(),
            colors: (BLANK, BLANK),
            capped: false,
        }
    }

    /// Number of edges including the start edge.
    pub fn len(&self) -> usize {
        1 + self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn end_edge(&self) -> EdgeId {
        self.edges.last().copied().unwrap_or(self.start_edge)
    }

    pub fn vend(&self) -> Vertex {
        *self.vertices.last().expect("path chains have x_1")
    }

    /// Color of `e_i` (1-based along the path) in the coloring the path was
    /// walked in.
    pub fn color_at(&self, i: usize) -> Color {
        match i {
            0 => BLANK,
            i if i % 2 == 1 => self.colors.0,
            _ => self.colors.1,
        }
    }

    /// Color of the last edge in the walked coloring; blank for single edges.
    pub fn end_color(&self) -> Color {
        self.color_at(self.edges.len())
    }

    /// `P|j`, keeping the first `j >= 1` edges.
    pub fn initial_segment(&self, j: usize) -> PathChain {
        assert!(j >= 1 && j <= self.len(), "segment length {j} out of 1..={}", self.len());
        PathChain {
            start_edge: self.start_edge,
            start_vertex: self.start_vertex,
            vertices: self.vertices[..j].to_vec(),
            edges: self.edges[..j - 1].to_vec(),
            colors: self.colors,
            capped: false,
        }
    }

    /// Internal edges: all but the first and the last.
    pub fn internal_edges(&self) -> &[EdgeId] {
        match self.edges.len() {
            0 => &[],
            k => &self.edges[..k - 1],
        }
    }

    pub fn all_edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        std::iter::once(self.start_edge).chain(self.edges.iter().copied())
    }

    /// `x_0, x_1, ..., x_k`.
    pub fn all_vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        std::iter::once(self.start_vertex).chain(self.vertices.iter().copied())
    }
}

/// Edges of the Vizing chain `F + P` (the fan's end is the path's start).
pub fn vizing_chain_edges(fan: &Fan, path: &PathChain) -> Vec<EdgeId> {
    debug_assert_eq!(fan.end(), path.start_edge);
    let mut edges = Vec::with_capacity(fan.len() + path.edges.len());
    edges.extend_from_slice(&fan.edges);
    edges.extend_from_slice(&path.edges);
    edges
}

/// One completed step `F_j + P_j` of a multi-step chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepRecord {
    pub index: usize,
    pub fan: Fan,
    /// `P_j`, the randomly truncated path.
    pub path: PathChain,
    /// The capped walk `P_j` was cut from.
    pub full_path: PathChain,
    /// `P_j` alternates `alpha`/`beta` with `End(P_j)` colored `beta`.
    pub alpha: Color,
    pub beta: Color,
    /// Coloring fingerprint before this step was shifted.
    pub fingerprint_before: u64,
}

/// `F_0 + P_0 + ... + F_{k-1} + P_{k-1}`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MultiStepChain {
    pub steps: Vec<StepRecord>,
}

impl MultiStepChain {
    pub fn len_steps(&self) -> usize {
        self.steps.len()
    }

    /// Concatenated edges; consecutive pieces share their boundary edge.
    pub fn edges(&self) -> Vec<EdgeId> {
        let mut out = Vec::new();
        for step in &self.steps {
            push_piece(&mut out, &vizing_chain_edges(&step.fan, &step.path));
        }
        out
    }
}

fn push_piece(out: &mut Vec<EdgeId>, piece: &[EdgeId]) {
    match out.last() {
        Some(&last) if piece.first() == Some(&last) => out.extend_from_slice(&piece[1..]),
        _ => out.extend_from_slice(piece),
    }
}

/// Concatenates `steps` and the final candidate into one chain.
pub fn full_chain_edges(chain: &MultiStepChain, fan: &Fan, path: &PathChain) -> Vec<EdgeId> {
    let mut out = chain.edges();
    push_piece(&mut out, &vizing_chain_edges(fan, path));
    out
}

/// Number of `α`/`β` edges at `v`: two table probes.
#[inline]
pub fn degree_ab(state: &ColoringState<'_>, v: Vertex, alpha: Color, beta: Color) -> u8 {
    (!state.is_missing(v, alpha)) as u8 + (!state.is_missing(v, beta)) as u8
}

/// Smallest color missing at both ends of `e`. O(q).
pub fn is_happy_edge(state: &ColoringState<'_>, e: EdgeId) -> Option<Color> {
    let (x, y) = state.graph().endpoints(e);
    (1..=state.q()).find(|&c| state.is_missing(x, c) && state.is_missing(y, c))
}

/// Walks `P(e; φ, αβ)` capped at `cap` edges: the start edge `xy` followed by
/// the maximal `αβ`-path leaving `y` along its `α` edge.
///
/// `y` must have `αβ`-degree at most one, otherwise the component through `y`
/// does not start there. Read-only; O(min(path length, cap)).
pub fn walk_alternating_path(
    state: &ColoringState<'_>,
    start_edge: EdgeId,
    from: Vertex,
    alpha: Color,
    beta: Color,
    cap: usize,
) -> Result<PathChain, ChainError> {
    debug_assert!(alpha != beta);
    if degree_ab(state, from, alpha, beta) == 2 {
        return Err(ChainError::BadStart {
            vertex: from,
            alpha,
            beta,
        });
    }
    let g = state.graph();
    let mut path = PathChain {
        start_edge,
        start_vertex: g.other_endpoint(start_edge, from),
        vertices: vec![from],
        edges: Vec::new(),
        colors: (alpha, beta),
        capped: false,
    };
    let (mut cur, mut color, mut other) = (from, alpha, beta);
    loop {
        let Some(e) = state.missing_edge(cur, color) else {
            break;
        };
        if path.len() >= cap {
            path.capped = true;
            break;
        }
        cur = g.other_endpoint(e, cur);
        path.edges.push(e);
        path.vertices.push(cur);
        std::mem::swap(&mut color, &mut other);
    }
    Ok(path)
}

/// What a non-intersection audit found.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IntersectionViolation {
    /// A vertex of `F_i` reappears in `F_j + P_j`, `i < j`.
    FanVertex { earlier: usize, later: usize, vertex: Vertex },
    /// An internal edge of `P_i` reappears in `F_j + P_j`, `i < j`.
    InternalEdge { earlier: usize, later: usize, edge: EdgeId },
}

/// Checks that `pieces = [F_0 + P_0, ..., F_k + P_k]` is non-intersecting:
/// for `i < j`, `V(F_i) ∩ V(F_j + P_j) = ∅` and
/// `E_int(P_i) ∩ E(F_j + P_j) = ∅`. O(total size) expected.
pub fn check_non_intersecting(
    g: &Graph,
    pieces: &[(&Fan, &PathChain)],
) -> Result<(), IntersectionViolation> {
    let mut fan_vertex_owner: HashMap<Vertex, usize> = HashMap::new();
    let mut internal_edge_owner: HashMap<EdgeId, usize> = HashMap::new();
    for (j, (fan, path)) in pieces.iter().enumerate() {
        let mut vertices: Vec<Vertex> = fan.vertices().collect();
        vertices.extend(path.all_vertices());
        for v in vertices {
            if let Some(&i) = fan_vertex_owner.get(&v) {
                return Err(IntersectionViolation::FanVertex {
                    earlier: i,
                    later: j,
                    vertex: v,
                });
            }
        }
        for e in fan.edges.iter().copied().chain(path.all_edges()) {
            if let Some(&i) = internal_edge_owner.get(&e) {
                return Err(IntersectionViolation::InternalEdge {
                    earlier: i,
                    later: j,
                    edge: e,
                });
            }
            let (a, b) = g.endpoints(e);
            debug_assert!(a != b);
        }
        for v in fan.vertices() {
            fan_vertex_owner.insert(v, j);
        }
        for &e in path.internal_edges() {
            internal_edge_owner.insert(e, j);
        }
    }
    Ok(())
}

/// Writes `pieces` as a DOT graph. Vertices are labeled by id; chain edges
/// carry `step:color`, listed in step order then chain order.
pub fn write_dot<W: Write>(
    out: &mut W,
    g: &Graph,
    pieces: &[(&Fan, &PathChain)],
    color_of: impl Fn(EdgeId) -> Color,
) -> io::Result<()> {
    writeln!(out, "graph chain {{")?;
    let mut seen_vertex = HashMap::new();
    let mut order = Vec::new();
    for (fan, path) in pieces {
        for v in fan.vertices().chain(path.all_vertices()) {
            if seen_vertex.insert(v, ()).is_none() {
                order.push(v);
            }
        }
    }
    for v in order {
        writeln!(out, "  {v} [label=\"{v}\"];")?;
    }
    let mut emitted = HashMap::new();
    for (step, (fan, path)) in pieces.iter().enumerate() {
        for e in vizing_chain_edges(fan, path) {
            if emitted.insert(e, ()).is_some() {
                continue;
            }
            let (u, v) = g.endpoints(e);
            writeln!(out, "  {u} -- {v} [label=\"{step}:{}\"];", color_of(e))?;
        }
    }
    writeln!(out, "}}")
}
