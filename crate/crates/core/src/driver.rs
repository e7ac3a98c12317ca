//! The sequential coloring loop and parameter derivation.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::chain::{write_dot, Fan, PathChain};
use crate::coloring::{Color, ColoringState, BLANK};
use crate::engine::{invariant, ChainParams, Counters, EngineError, Msva, TraceEvent};
use crate::graph::{EdgeId, Graph};
use crate::rng::RngStream;

/// Largest `ell` accepted; keeps `2 * ell` addressable.
pub const ELL_LIMIT: u64 = 1 << 60;

/// A positive rational `ε = num / den` in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Epsilon {
    num: u64,
    den: u64,
}

impl Epsilon {
    pub fn new(num: u64, den: u64) -> Result<Self, ParamError> {
        if num == 0 || den == 0 {
            return Err(ParamError::EpsilonNotPositive);
        }
        let g = gcd(num, den);
        Ok(Self {
            num: num / g,
            den: den / g,
        })
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `⌊ε·x⌋`, saturating.
    pub fn floor_mul(&self, x: u64) -> u64 {
        let p = x as u128 * self.num as u128 / self.den as u128;
        u64::try_from(p).unwrap_or(u64::MAX)
    }

    /// `⌈c/ε⌉`, saturating.
    fn ceil_div(&self, c: u64) -> u64 {
        let p = (c as u128 * self.den as u128).div_ceil(self.num as u128);
        u64::try_from(p).unwrap_or(u64::MAX)
    }

    /// `⌈1/ε²⌉`, saturating.
    fn ceil_inverse_square(&self) -> u64 {
        let p = (self.den as u128 * self.den as u128).div_ceil(self.num as u128 * self.num as u128);
        u64::try_from(p).unwrap_or(u64::MAX)
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl FromStr for Epsilon {
    type Err = ParamError;

    /// A decimal such as `0.25` or `.5`, or a fraction such as `1/4`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ParamError::EpsilonParse(s.to_string());
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n: u64 = n.trim().parse().map_err(|_| bad())?;
            let d: u64 = d.trim().parse().map_err(|_| bad())?;
            return Self::new(n, d);
        }
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if int.is_empty() && frac.is_empty()
            || !int.bytes().all(|b| b.is_ascii_digit())
            || !frac.bytes().all(|b| b.is_ascii_digit())
            || frac.len() > 18
        {
            return Err(bad());
        }
        let den = 10u64.pow(frac.len() as u32);
        let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
        let frac: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        let num = int
            .checked_mul(den)
            .and_then(|v| v.checked_add(frac))
            .ok_or_else(bad)?;
        Self::new(num, den)
    }
}

impl fmt::Display for Epsilon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_f64())
    }
}

/// How unset parameters are chosen.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Small constants that work well in practice.
    #[default]
    Practical,
    /// Constants large enough for the worst-case runtime analysis.
    Theory,
}

impl FromStr for Mode {
    type Err = ParamError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "practical" => Ok(Mode::Practical),
            "theory" => Ok(Mode::Theory),
            other => Err(ParamError::InvalidOverride(format!("unknown mode {other:?}"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Practical => "practical",
            Mode::Theory => "theory",
        })
    }
}

/// Explicit parameter choices that replace the derived defaults.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Overrides {
    pub k_max: Option<usize>,
    pub ell: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Params {
    pub epsilon: Epsilon,
    pub q: u32,
    pub k_max: usize,
    pub ell: u64,
    pub mode: Mode,
}

impl Params {
    pub fn chain_params(&self) -> ChainParams {
        ChainParams {
            k_max: self.k_max,
            ell: self.ell,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParamError {
    #[error("epsilon must be positive")]
    EpsilonNotPositive,
    #[error("cannot parse epsilon {0:?} (expected a decimal like 0.25 or a fraction like 1/4)")]
    EpsilonParse(String),
    #[error("epsilon = {epsilon} is too small for maximum degree {delta}: need floor(epsilon * delta) >= 1")]
    EpsilonTooSmall { delta: usize, epsilon: String },
    #[error("invalid parameter: {0}")]
    InvalidOverride(String),
}

/// Derives `q`, `k_max` and `ell` for maximum degree `delta`.
///
/// `q = Δ + ⌊εΔ⌋`, which needs `⌊εΔ⌋ ≥ 1`. Graphs with `Δ ≤ 1` are colored
/// directly and get `q = max(1, ⌊(1+ε)Δ⌋)`.
pub fn derive_params(
    delta: usize,
    epsilon: Epsilon,
    overrides: Overrides,
    mode: Mode,
) -> Result<Params, ParamError> {
    let slack = epsilon.floor_mul(delta as u64);
    let q = if delta <= 1 {
        (delta as u64 + slack).max(1)
    } else if slack == 0 {
        return Err(ParamError::EpsilonTooSmall {
            delta,
            epsilon: epsilon.to_string(),
        });
    } else {
        delta as u64 + slack
    };
    let q = u32::try_from(q)
        .ok()
        .filter(|&q| q < u32::MAX)
        .ok_or_else(|| ParamError::InvalidOverride(format!("q = {q} colors is too many")))?;

    let fan_floor = usize::try_from(epsilon.ceil_div(16)).unwrap_or(usize::MAX);
    let k_max = match (overrides.k_max, mode) {
        (Some(k), _) => k,
        (None, Mode::Practical) => fan_floor.max(8),
        (None, Mode::Theory) => fan_floor.max(2),
    };
    if k_max < 2 {
        return Err(ParamError::InvalidOverride(format!("k_max = {k_max} is below 2")));
    }
    let theory_ell = theory_ell(k_max);
    let ell = match (overrides.ell, mode) {
        (Some(l), _) => l,
        (None, Mode::Practical) => epsilon.ceil_inverse_square().clamp(4, ELL_LIMIT),
        (None, Mode::Theory) => theory_ell,
    };
    if ell < 3 {
        return Err(ParamError::InvalidOverride(format!("ell = {ell} is below 3")));
    }
    if ell > ELL_LIMIT {
        return Err(ParamError::InvalidOverride(format!("ell = {ell} exceeds 2^60")));
    }
    if mode == Mode::Theory {
        if k_max < fan_floor {
            return Err(ParamError::InvalidOverride(format!(
                "theory mode needs k_max >= ceil(16/epsilon) = {fan_floor}, got {k_max}"
            )));
        }
        if ell < theory_ell {
            return Err(ParamError::InvalidOverride(format!(
                "theory mode needs ell >= 6400 * k_max^4 = {theory_ell}, got {ell}"
            )));
        }
    }
    Ok(Params {
        epsilon,
        q,
        k_max,
        ell,
        mode,
    })
}

/// `6400·k_max⁴`, capped at [`ELL_LIMIT`].
fn theory_ell(k_max: usize) -> u64 {
    let k = k_max as u128;
    let v = 6400u128.saturating_mul(k.saturating_pow(4));
    v.min(ELL_LIMIT as u128) as u64
}

/// The set `U` of uncolored edges with O(1) uniform sampling and removal.
#[derive(Clone, Debug)]
pub struct UncoloredSet {
    items: Vec<EdgeId>,
    position: Vec<u32>,
}

const ABSENT: u32 = u32::MAX;

impl UncoloredSet {
    /// All edges `0..m`.
    pub fn new(m: usize) -> Self {
        Self {
            items: (0..m as EdgeId).collect(),
            position: (0..m as u32).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.position[e as usize] != ABSENT
    }

    /// Uniform member, or `None` when empty.
    pub fn sample(&self, rng: &mut RngStream) -> Option<EdgeId> {
        if self.items.is_empty() {
            return None;
        }
        Some(self.items[rng.uniform_below(self.items.len() as u64) as usize])
    }

    /// Removes `e`; panics if `e` is not a member.
    pub fn remove(&mut self, e: EdgeId) {
        let pos = self.position[e as usize];
        assert!(pos != ABSENT, "edge {e} is not in the set");
        let last = self.items.pop().expect("non-empty");
        if last != e {
            self.items[pos as usize] = last;
            self.position[last as usize] = pos;
        }
        self.position[e as usize] = ABSENT;
    }
}

/// Totals over one coloring run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct RunStats {
    pub counters: Counters,
    /// Number of multi-step searches, one per colored edge.
    pub searches: u64,
    pub max_chain_edges: u64,
    pub total_chain_edges: u64,
    pub wall_ms: f64,
}

impl RunStats {
    pub fn avg_chain_edges(&self) -> f64 {
        if self.searches == 0 {
            0.0
        } else {
            self.total_chain_edges as f64 / self.searches as f64
        }
    }

    /// The same statistics with the wall time zeroed, for exact comparisons.
    pub fn without_timing(mut self) -> Self {
        self.wall_ms = 0.0;
        self
    }
}

/// The largest augmenting chain of a run, with the colors its edges had
/// right after augmenting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainSnapshot {
    pub start: EdgeId,
    pub pieces: Vec<(Fan, PathChain)>,
    pub colors: Vec<(EdgeId, Color)>,
    pub edge_count: usize,
}

impl ChainSnapshot {
    pub fn write_dot<W: std::io::Write>(&self, out: &mut W, g: &Graph) -> std::io::Result<()> {
        let pieces: Vec<_> = self.pieces.iter().map(|(f, p)| (f, p)).collect();
        let colors: std::collections::HashMap<_, _> = self.colors.iter().copied().collect();
        write_dot(out, g, &pieces, |e| colors.get(&e).copied().unwrap_or(BLANK))
    }
}

/// Knobs of [`edge_color_with`].
pub struct RunOptions {
    /// Full shift validation and per-search structural audits.
    pub validate: bool,
    /// Keep a copy of the largest chain for tracing.
    pub keep_largest_chain: bool,
    pub trace: Option<Box<dyn FnMut(&TraceEvent)>>,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            validate: cfg!(debug_assertions),
            keep_largest_chain: false,
            trace: None,
        }
    }
}

/// Result of a coloring run.
pub struct RunOutput<'g> {
    pub state: ColoringState<'g>,
    pub stats: RunStats,
    pub largest_chain: Option<ChainSnapshot>,
}

/// Colors every edge of `g` with colors `1..=params.q`.
pub fn edge_color<'g>(
    g: &'g Graph,
    params: &Params,
    seed: u64,
) -> Result<(ColoringState<'g>, RunStats), EngineError> {
    let out = edge_color_with(g, params, seed, RunOptions::default())?;
    Ok((out.state, out.stats))
}

/// [`edge_color`] with explicit options.
///
/// Repeatedly picks a uniform uncolored edge and a uniform endpoint, finds a
/// happy multi-step chain for it and augments. Deterministic in
/// `(g, params, seed)` apart from the wall time.
pub fn edge_color_with<'g>(
    g: &'g Graph,
    params: &Params,
    seed: u64,
    mut options: RunOptions,
) -> Result<RunOutput<'g>, EngineError> {
    let started = Instant::now();
    let mut stats = RunStats::default();
    let mut largest: Option<ChainSnapshot> = None;

    if g.max_degree() <= 1 {
        let mut state = ColoringState::new_unchecked(g, params.q.max(1));
        state.set_validation(options.validate);
        for e in 0..g.m() as EdgeId {
            state.color_edge(e, 1)?;
            stats.searches += 1;
            stats.total_chain_edges += 1;
            stats.max_chain_edges = 1;
        }
        if options.keep_largest_chain && g.m() > 0 {
            let (u, v) = g.endpoints(0);
            largest = Some(ChainSnapshot {
                start: 0,
                pieces: vec![(Fan::single(u, v, 0), PathChain::single(0, u, v))],
                colors: vec![(0, 1)],
                edge_count: 1,
            });
        }
        stats.wall_ms = started.elapsed().as_secs_f64() * 1e3;
        return Ok(RunOutput {
            state,
            stats,
            largest_chain: largest,
        });
    }

    let mut state = ColoringState::new(g, params.q)?;
    state.set_validation(options.validate);
    let mut rng = RngStream::new(seed);
    let mut uncolored = UncoloredSet::new(g.m());
    let mut msva = Msva::new(g.n(), g.m(), params.chain_params());
    msva.set_trace(options.trace.take());
    let mut counters = Counters::default();

    while let Some(e) = uncolored.sample(&mut rng) {
        let (a, b) = g.endpoints(e);
        let x = if rng.coin() { a } else { b };
        let outcome = msva.run(&mut state, e, x, &mut rng, &mut counters)?;
        let tail = outcome.tail_edges();
        state.augment(&tail, outcome.color)?;
        if state.color_of(e) == BLANK {
            return Err(invariant(format!("edge {e} is still blank after augmenting")));
        }
        uncolored.remove(e);
        if uncolored.len() != state.uncolored_count() {
            return Err(invariant(format!(
                "{} edges tracked as uncolored but {} are blank",
                uncolored.len(),
                state.uncolored_count()
            )));
        }
        let size = outcome.edge_count() as u64;
        stats.searches += 1;
        stats.total_chain_edges += size;
        if size > stats.max_chain_edges {
            stats.max_chain_edges = size;
            if options.keep_largest_chain {
                let edges = outcome.full_edges();
                largest = Some(ChainSnapshot {
                    start: e,
                    colors: edges.iter().map(|&f| (f, state.color_of(f))).collect(),
                    pieces: outcome
                        .pieces()
                        .into_iter()
                        .map(|(f, p)| (f.clone(), p.clone()))
                        .collect(),
                    edge_count: edges.len(),
                });
            }
        }
    }
    stats.counters = counters;
    if options.validate && !state.mirror_consistent() {
        return Err(invariant("missing-color table diverged from the coloring"));
    }
    stats.wall_ms = started.elapsed().as_secs_f64() * 1e3;
    Ok(RunOutput {
        state,
        stats,
        largest_chain: largest,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::verify_coloring;

    fn eps(s: &str) -> Epsilon {
        s.parse().unwrap()
    }

    #[test]
    fn parse_epsilon() {
        assert_eq!(eps("0.25"), Epsilon::new(1, 4).unwrap());
        assert_eq!(eps("1/4"), Epsilon::new(1, 4).unwrap());
        assert_eq!(eps("1"), Epsilon::new(1, 1).unwrap());
        assert_eq!(eps(".5"), Epsilon::new(1, 2).unwrap());
        assert_eq!(eps("0.1").to_string(), "0.1");
        for bad in ["", ".", "0", "0.0", "-1", "abc", "1/0", "1e-3"] {
            assert!(bad.parse::<Epsilon>().is_err(), "{bad}");
        }
    }

    #[test]
    fn default_parameters() {
        let p = derive_params(16, eps("1"), Overrides::default(), Mode::Practical).unwrap();
        assert_eq!((p.q, p.k_max, p.ell), (32, 16, 4));
        let p = derive_params(16, eps("0.25"), Overrides::default(), Mode::Practical).unwrap();
        assert_eq!((p.q, p.k_max, p.ell), (20, 64, 16));
        assert!(matches!(
            derive_params(4, eps("0.1"), Overrides::default(), Mode::Practical),
            Err(ParamError::EpsilonTooSmall { delta: 4, .. })
        ));
        // ⌊0.2·5⌋ = 1 is just enough
        let p = derive_params(5, eps("0.2"), Overrides::default(), Mode::Practical).unwrap();
        assert_eq!(p.q, 6);
    }

    #[test]
    fn small_degree_parameters() {
        let p = derive_params(1, eps("0.5"), Overrides::default(), Mode::Practical).unwrap();
        assert_eq!(p.q, 1);
        let p = derive_params(0, eps("0.5"), Overrides::default(), Mode::Practical).unwrap();
        assert_eq!(p.q, 1);
        let p = derive_params(1, eps("1"), Overrides::default(), Mode::Practical).unwrap();
        assert_eq!(p.q, 2);
    }

    #[test]
    fn overrides_and_floors() {
        let o = Overrides {
            k_max: Some(3),
            ell: Some(5),
        };
        let p = derive_params(16, eps("1"), o, Mode::Practical).unwrap();
        assert_eq!((p.k_max, p.ell), (3, 5));
        let low_ell = Overrides {
            ell: Some(2),
            ..Overrides::default()
        };
        assert!(matches!(
            derive_params(16, eps("1"), low_ell, Mode::Practical),
            Err(ParamError::InvalidOverride(_))
        ));
        let low_k = Overrides {
            k_max: Some(1),
            ..Overrides::default()
        };
        assert!(derive_params(16, eps("1"), low_k, Mode::Practical).is_err());
    }

    #[test]
    fn theory_parameters() {
        let p = derive_params(16, eps("1"), Overrides::default(), Mode::Theory).unwrap();
        assert_eq!(p.k_max, 16);
        assert_eq!(p.ell, 6400 * 16u64.pow(4));
        let p = derive_params(1000, eps("0.001"), Overrides::default(), Mode::Theory).unwrap();
        assert_eq!(p.k_max, 16000);
        assert_eq!(p.ell, ELL_LIMIT);
        let o = Overrides {
            ell: Some(100),
            ..Overrides::default()
        };
        assert!(derive_params(16, eps("1"), o, Mode::Theory).is_err());
        let o = Overrides {
            k_max: Some(4),
            ..Overrides::default()
        };
        assert!(derive_params(16, eps("1"), o, Mode::Theory).is_err());
    }

    #[test]
    fn uncolored_set_removal() {
        let mut u = UncoloredSet::new(3);
        u.remove(1);
        assert!(!u.contains(1));
        assert!(u.contains(0) && u.contains(2));
        let mut rng = RngStream::new(4);
        let mut counts = [0u32; 3];
        for _ in 0..10_000 {
            counts[u.sample(&mut rng).unwrap() as usize] += 1;
        }
        assert_eq!(counts[1], 0);
        // binomial(10⁴, 1/2): σ = 50
        assert!((counts[0] as i64 - 5000).abs() < 250, "{counts:?}");
        u.remove(0);
        u.remove(2);
        assert!(u.is_empty());
        assert_eq!(u.sample(&mut rng), None);
    }

    #[test]
    fn triangle_gets_three_colors() {
        let g = Graph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let p = derive_params(2, eps("1"), Overrides::default(), Mode::Practical).unwrap();
        assert_eq!(p.q, 4);
        for seed in 0..20 {
            let (state, stats) = edge_color(&g, &p, seed).unwrap();
            let mut colors = state.colors().to_vec();
            colors.sort_unstable();
            colors.dedup();
            assert_eq!(colors.len(), 3);
            assert!(colors.iter().all(|&c| (1..=4).contains(&c)));
            assert_eq!(stats.searches, 3);
        }
    }

    #[test]
    fn matching_is_colored_with_one_color() {
        let g = Graph::new(6, &[(0, 1), (2, 3), (4, 5)]).unwrap();
        let p = derive_params(1, eps("0.5"), Overrides::default(), Mode::Practical).unwrap();
        let (state, _) = edge_color(&g, &p, 0).unwrap();
        assert_eq!(state.colors(), &[1, 1, 1]);
        assert!(verify_coloring(&g, state.colors(), p.q).proper);
    }

    #[test]
    fn runs_are_deterministic() {
        let mut rng = RngStream::new(1);
        let g = crate::generate::generate(
            crate::generate::GraphFamily::NearRegular { n: 200, d: 6 },
            &mut rng,
        )
        .unwrap();
        let p = derive_params(g.max_degree(), eps("0.5"), Overrides::default(), Mode::Practical)
            .unwrap();
        let (s1, r1) = edge_color(&g, &p, 11).unwrap();
        let (s2, r2) = edge_color(&g, &p, 11).unwrap();
        assert_eq!(s1.colors(), s2.colors());
        assert_eq!(r1.without_timing(), r2.without_timing());
        let report = verify_coloring(&g, s1.colors(), p.q);
        assert!(report.proper);
        assert_eq!(report.colored, g.m());
    }

    #[test]
    fn largest_chain_snapshot() {
        let mut rng = RngStream::new(3);
        let g = crate::generate::generate(
            crate::generate::GraphFamily::NearRegular { n: 100, d: 5 },
            &mut rng,
        )
        .unwrap();
        let p = derive_params(g.max_degree(), eps("0.5"), Overrides::default(), Mode::Practical)
            .unwrap();
        let options = RunOptions {
            validate: true,
            keep_largest_chain: true,
            trace: None,
        };
        let out = edge_color_with(&g, &p, 0, options).unwrap();
        let chain = out.largest_chain.unwrap();
        assert_eq!(chain.edge_count as u64, out.stats.max_chain_edges);
        assert_eq!(chain.colors.len(), chain.edge_count);
        let mut dot = Vec::new();
        chain.write_dot(&mut dot, &g).unwrap();
        let dot = String::from_utf8(dot).unwrap();
        assert!(dot.starts_with("graph chain {"));
        assert_eq!(dot.matches(" -- ").count(), chain.edge_count);
    }
}
