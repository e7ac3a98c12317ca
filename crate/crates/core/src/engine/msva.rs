use crate::chain::{
    check_non_intersecting, full_chain_edges, vizing_chain_edges, Fan, MultiStepChain, PathChain,
    StepRecord,
};
use crate::coloring::{Color, ColoringState, BLANK};
use crate::graph::{EdgeId, Vertex};
use crate::rng::RngStream;

use super::random::random_vizing_chain;
use super::visited::VisitedMap;
use super::{ensure_blank, invariant, other_color, ChainParams, Counters, EngineError};

/// A vertex or edge of a candidate chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Element {
    Vertex(Vertex),
    Edge(EdgeId),
}

/// First marked element of the candidate `F + P` and the step that owns it.
///
/// Elements are visited in chain order: pivot, `vStart(F)`, `Start(F)`, then
/// each further fan edge followed by its leaf, then each path edge followed
/// by its far endpoint.
pub fn first_intersection(
    visited: &VisitedMap,
    fan: &Fan,
    path: &PathChain,
) -> Option<(usize, Element)> {
    let vertex = |v: Vertex| visited.vertex_step(v).map(|s| (s, Element::Vertex(v)));
    let edge = |e: EdgeId| visited.edge_step(e).map(|s| (s, Element::Edge(e)));
    vertex(fan.pivot)
        .or_else(|| vertex(fan.vstart()))
        .or_else(|| edge(fan.start()))
        .or_else(|| {
            fan.edges[1..]
                .iter()
                .zip(&fan.leaves[1..])
                .find_map(|(&e, &y)| edge(e).or_else(|| vertex(y)))
        })
        .or_else(|| {
            path.edges
                .iter()
                .zip(&path.vertices[1..])
                .find_map(|(&e, &w)| edge(e).or_else(|| vertex(w)))
        })
}

/// Per-iteration events of the basic loop.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceEvent {
    /// Step `step` was fixed with a path truncated to `ell_prime` edges.
    Forward {
        step: usize,
        ell_prime: usize,
        alpha: Color,
        beta: Color,
    },
    /// The candidate hit `element`, owned by step `to`; steps `to..=from`
    /// were undone.
    Backward {
        from: usize,
        to: usize,
        element: Element,
    },
    /// A happy chain with `steps` fixed steps and `edges` edges in total.
    Success { steps: usize, edges: usize },
}

/// A happy multi-step chain `C + F + P` and the color `ξ` for its last edge.
#[derive(Clone, Debug)]
pub struct MsvaOutcome {
    pub chain: MultiStepChain,
    pub fan: Fan,
    pub path: PathChain,
    pub color: Color,
    /// Work done by this call alone.
    pub counters: Counters,
}

impl MsvaOutcome {
    /// `F + P`, the part not yet shifted in the live coloring.
    pub fn tail_edges(&self) -> Vec<EdgeId> {
        vizing_chain_edges(&self.fan, &self.path)
    }

    /// The whole chain `C + F + P`.
    pub fn full_edges(&self) -> Vec<EdgeId> {
        full_chain_edges(&self.chain, &self.fan, &self.path)
    }

    /// `full_edges().len()` without building the vector.
    pub fn edge_count(&self) -> usize {
        let piece = |fan: &Fan, path: &PathChain| fan.len() + path.edges.len();
        let steps: usize = self.chain.steps.iter().map(|s| piece(&s.fan, &s.path)).sum();
        steps + piece(&self.fan, &self.path) - self.chain.steps.len()
    }

    /// `[F_0 + P_0, ..., F_{k-1} + P_{k-1}, F + P]`.
    pub fn pieces(&self) -> Vec<(&Fan, &PathChain)> {
        self.chain
            .steps
            .iter()
            .map(|s| (&s.fan, &s.path))
            .chain(std::iter::once((&self.fan, &self.path)))
            .collect()
    }
}

/// Reusable state of the multi-step search over one graph.
pub struct Msva {
    visited: VisitedMap,
    params: ChainParams,
    trace: Option<Box<dyn FnMut(&TraceEvent)>>,
}

impl Msva {
    pub fn new(n: usize, m: usize, params: ChainParams) -> Self {
        Self {
            visited: VisitedMap::new(n, m),
            params,
            trace: None,
        }
    }

    pub fn params(&self) -> ChainParams {
        self.params
    }

    pub fn set_trace(&mut self, hook: Option<Box<dyn FnMut(&TraceEvent)>>) {
        self.trace = hook;
    }

    fn emit(&mut self, event: TraceEvent) {
        if let Some(hook) = self.trace.as_mut() {
            hook(&event);
        }
    }

    /// Finds a happy multi-step chain starting at the blank edge `e` with
    /// first pivot `x`.
    ///
    /// On success `state` holds `Shift(φ, C)`; the caller finishes with
    /// `state.augment(&outcome.tail_edges(), outcome.color)`.
    pub fn run(
        &mut self,
        state: &mut ColoringState<'_>,
        e: EdgeId,
        x: Vertex,
        rng: &mut RngStream,
        counters: &mut Counters,
    ) -> Result<MsvaOutcome, EngineError> {
        ensure_blank(state, e)?;
        let g = state.graph();
        let (a, b) = g.endpoints(e);
        if x != a && x != b {
            return Err(EngineError::PreconditionViolated(format!(
                "vertex {x} is not an endpoint of edge {e}"
            )));
        }
        if self.params.k_max < 2 || self.params.ell < 3 {
            return Err(EngineError::PreconditionViolated(format!(
                "parameters below floors: {:?}",
                self.params
            )));
        }
        let before = *counters;
        let params = self.params;
        let cap = params.path_cap();
        self.visited.clear();

        let first = random_vizing_chain(state, e, x, BLANK, BLANK, rng, params, counters)?;
        let (mut fan, mut path, mut xi) = (first.fan, first.path, first.eta);
        let mut steps: Vec<StepRecord> = Vec::new();

        loop {
            counters.iterations += 1;
            if path.len() < cap {
                break;
            }
            let k = steps.len();
            let ell = params.ell as usize;
            let ell_prime = ell + rng.uniform_below(params.ell) as usize;
            let truncated = path.initial_segment(ell_prime);
            let beta = truncated.end_color();
            let alpha = other_color(truncated.colors, beta);
            let fingerprint_before = state.fingerprint();
            state.shift(&vizing_chain_edges(&fan, &truncated))?;
            for v in fan.vertices() {
                self.visited.mark_vertex(v, k);
            }
            for &f in truncated.internal_edges() {
                self.visited.mark_edge(f, k);
            }
            let uv = truncated.end_edge();
            let v = truncated.vend();
            let u = g.other_endpoint(uv, v);
            self.emit(TraceEvent::Forward {
                step: k,
                ell_prime,
                alpha,
                beta,
            });
            steps.push(StepRecord {
                index: k,
                fan,
                path: truncated,
                full_path: path,
                alpha,
                beta,
                fingerprint_before,
            });

            let cand = random_vizing_chain(state, uv, u, alpha, beta, rng, params, counters)?;
            if let Some((j, element)) = first_intersection(&self.visited, &cand.fan, &cand.path) {
                if j > k {
                    return Err(invariant(format!("mark owned by future step {j} at step {k}")));
                }
                counters.backward_steps += 1;
                if j == k {
                    counters.zero_backward_steps += 1;
                    if !matches!(element, Element::Vertex(_)) {
                        counters.zero_backward_off_fan += 1;
                    }
                }
                for step in steps[j..].iter().rev() {
                    state.unshift(&vizing_chain_edges(&step.fan, &step.path))?;
                    for w in step.fan.vertices() {
                        if self.visited.vertex_step(w) == Some(step.index) {
                            self.visited.unmark_vertex(w);
                        }
                    }
                    for &f in step.path.internal_edges() {
                        if self.visited.edge_step(f) == Some(step.index) {
                            self.visited.unmark_edge(f);
                        }
                    }
                }
                let restored = steps.drain(j..).next().expect("j <= k");
                if state.fingerprint() != restored.fingerprint_before {
                    return Err(invariant(format!("backward to step {j} did not restore the coloring")));
                }
                self.emit(TraceEvent::Backward {
                    from: k,
                    to: j,
                    element,
                });
                fan = restored.fan;
                path = restored.full_path;
                xi = other_color(path.colors, path.end_color());
            } else if cand.path.len() >= 2
                && cand.path.len() < cap
                && cand.path.vend() == cand.fan.pivot
            {
                return Err(EngineError::FailBranch { step: k });
            } else {
                fan = cand.fan;
                path = cand.path;
                xi = cand.eta;
            }
        }

        let mut delta = *counters;
        delta.iterations -= before.iterations;
        delta.chain_calls -= before.chain_calls;
        delta.fan_restarts -= before.fan_restarts;
        delta.color_calls -= before.color_calls;
        delta.color_draws -= before.color_draws;
        delta.backward_steps -= before.backward_steps;
        delta.zero_backward_steps -= before.zero_backward_steps;
        delta.zero_backward_off_fan -= before.zero_backward_off_fan;

        let outcome = MsvaOutcome {
            chain: MultiStepChain { steps },
            fan,
            path,
            color: xi,
            counters: delta,
        };
        if state.validation() {
            audit(state, &outcome, params)?;
        }
        self.emit(TraceEvent::Success {
            steps: outcome.chain.steps.len(),
            edges: outcome.edge_count(),
        });
        Ok(outcome)
    }
}

/// Structural checks on a success, run in validation mode.
fn audit(
    state: &mut ColoringState<'_>,
    outcome: &MsvaOutcome,
    params: ChainParams,
) -> Result<(), EngineError> {
    let ell = params.ell as usize;
    let cap = params.path_cap();
    for step in &outcome.chain.steps {
        if step.path.len() < ell || step.path.len() >= cap || step.full_path.len() != cap {
            return Err(invariant(format!(
                "step {} has path lengths {} / {} for ell = {ell}",
                step.index,
                step.path.len(),
                step.full_path.len()
            )));
        }
    }
    if outcome.path.len() >= cap {
        return Err(invariant("final path is not shorter than the cap"));
    }
    check_non_intersecting(state.graph(), &outcome.pieces())
        .map_err(|v| invariant(format!("chain intersects itself: {v:?}")))?;
    let end = outcome.path.end_edge();
    let (a, b) = state.graph().endpoints(end);
    let tail = outcome.tail_edges();
    state.shift(&tail)?;
    let valid = state.is_missing(a, outcome.color) && state.is_missing(b, outcome.color);
    state.unshift(&tail)?;
    if !valid {
        return Err(invariant(format!(
            "color {} is not valid for the last chain edge {end}",
            outcome.color
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn params(k_max: usize, ell: u64) -> ChainParams {
        ChainParams { k_max, ell }
    }

    #[test]
    fn empty_coloring_gives_single_edge() {
        let g = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let mut s = ColoringState::new(&g, 3).unwrap();
        s.set_validation(true);
        let mut m = Msva::new(3, 2, params(4, 3));
        let mut rng = RngStream::new(9);
        let mut c = Counters::default();
        let out = m.run(&mut s, 0, 0, &mut rng, &mut c).unwrap();
        assert!(out.chain.steps.is_empty());
        assert_eq!(out.tail_edges(), vec![0]);
        assert_eq!(out.edge_count(), 1);
        assert_eq!(c.iterations, 1);
        s.augment(&out.tail_edges(), out.color).unwrap();
        assert!(s.verify_proper().proper);
    }

    /// Edge 0 = (0, 1) is blank with `M(0) = {1, 2}` and `M(1) = {3, 4}`
    /// (q = 4). The fan must grow to a leaf `a` (or `b`) whose only free
    /// color is missing at 1, and every walk from there follows a colored
    /// alternating path of length `len`.
    fn long_path_instance(len: u64) -> (Graph, Vec<(EdgeId, Color)>) {
        let mut edges = Vec::new();
        let mut colors = Vec::new();
        let mut next = 6u64;
        let mut add = |edges: &mut Vec<(u64, u64)>, u: u64, v: u64, c: Color| {
            colors.push((edges.len() as EdgeId, c));
            edges.push((u, v));
        };
        edges.push((0, 1));
        let (a, b, c, d) = (2, 3, 4, 5);
        add(&mut edges, 0, a, 3);
        add(&mut edges, 0, b, 4);
        add(&mut edges, 1, c, 1);
        add(&mut edges, 1, d, 2);
        for (leaf, delta) in [(a, 4), (b, 3)] {
            for gamma in [1, 2] {
                let mut prev = leaf;
                for i in 0..len {
                    add(&mut edges, prev, next, if i % 2 == 0 { gamma } else { delta });
                    prev = next;
                    next += 1;
                }
            }
        }
        (Graph::new(next as usize, &edges).unwrap(), colors)
    }

    #[test]
    fn long_path_forces_forward_iteration() {
        let (g, colors) = long_path_instance(12);
        assert_eq!(g.max_degree(), 3);
        let mut s = ColoringState::new(&g, 4).unwrap();
        for (e, c) in colors {
            s.color_edge(e, c).unwrap();
        }
        assert!(s.verify_proper().proper);
        s.set_validation(true);
        let p = params(4, 4);
        let mut m = Msva::new(g.n(), g.m(), p);
        for seed in 0..50 {
            let mut state = s.clone();
            let mut rng = RngStream::new(seed);
            let mut c = Counters::default();
            let out = m.run(&mut state, 0, 0, &mut rng, &mut c).unwrap();
            assert!(!out.chain.steps.is_empty(), "seed {seed}");
            let first = &out.chain.steps[0];
            assert_eq!(first.fan.len(), 2);
            for step in &out.chain.steps {
                assert!((4..8).contains(&step.path.len()));
                assert_eq!(step.full_path.len(), 8);
            }
            assert!(out.path.len() < 8);
            state.augment(&out.tail_edges(), out.color).unwrap();
            let report = state.verify_proper();
            assert!(report.proper, "seed {seed}: {report:?}");
            assert_eq!(report.colored, g.m() - state.uncolored_count());
            assert_eq!(state.uncolored_count(), 0);
            assert_eq!(c.zero_backward_off_fan, 0);
        }
    }

    #[test]
    fn scan_with_no_marks() {
        let visited = VisitedMap::new(4, 4);
        let fan = Fan::single(0, 1, 0);
        let path = PathChain::single(0, 0, 1);
        assert_eq!(first_intersection(&visited, &fan, &path), None);
    }

    #[test]
    fn scan_finds_marked_pivot() {
        let mut visited = VisitedMap::new(4, 4);
        visited.mark_vertex(0, 2);
        let fan = Fan::single(0, 1, 0);
        let path = PathChain::single(0, 0, 1);
        assert_eq!(
            first_intersection(&visited, &fan, &path),
            Some((2, Element::Vertex(0)))
        );
    }

    #[test]
    fn scan_order_is_positional() {
        // fan 0: (0,1) (0,2); path from 2: (2,3) (3,4)
        let mut visited = VisitedMap::new(6, 6);
        let fan = Fan {
            pivot: 0,
            leaves: vec![1, 2],
            edges: vec![0, 1],
        };
        let path = PathChain {
            start_edge: 1,
            start_vertex: 0,
            vertices: vec![2, 3, 4],
            edges: vec![2, 3],
            colors: (1, 2),
            capped: false,
        };
        visited.mark_edge(3, 1);
        visited.mark_vertex(2, 3);
        assert_eq!(
            first_intersection(&visited, &fan, &path),
            Some((3, Element::Vertex(2)))
        );
        visited.unmark_vertex(2);
        assert_eq!(
            first_intersection(&visited, &fan, &path),
            Some((1, Element::Edge(3)))
        );
        visited.mark_edge(1, 0);
        assert_eq!(
            first_intersection(&visited, &fan, &path),
            Some((0, Element::Edge(1)))
        );
    }
}
