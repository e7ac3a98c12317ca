//! Seeded generators for the test and benchmark corpus.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use crate::graph::{Graph, GraphError};
use crate::rng::RngStream;

/// Families understood by [`generate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphFamily {
    /// Configuration-model pairing; every degree ends up in `{d-1, d}`.
    NearRegular { n: usize, d: usize },
    /// `m` distinct uniformly random pairs.
    ErdosRenyiM { n: usize, m: usize },
    CompleteBipartite { a: usize, b: usize },
    Cycle { n: usize },
    /// Center 0 joined to leaves `1..=d`.
    Star { d: usize },
}

const SWAP_BUDGET_PER_BAD_PAIR: usize = 1000;

fn key(u: u64, v: u64) -> u64 {
    (u.min(v) << 32) | u.max(v)
}

/// Generates a graph from `family` using `rng`.
pub fn generate(family: GraphFamily, rng: &mut RngStream) -> Result<Graph, GraphError> {
    match family {
        GraphFamily::Cycle { n } => {
            if n < 3 {
                return Err(GraphError::Infeasible(format!("cycle needs n >= 3, got {n}")));
            }
            let edges: Vec<_> = (0..n as u64).map(|i| (i, (i + 1) % n as u64)).collect();
            Graph::new(n, &edges)
        }
        GraphFamily::Star { d } => {
            let edges: Vec<_> = (1..=d as u64).map(|i| (0, i)).collect();
            Graph::new(d + 1, &edges)
        }
        GraphFamily::CompleteBipartite { a, b } => {
            let mut edges = Vec::with_capacity(a * b);
            for i in 0..a as u64 {
                for j in 0..b as u64 {
                    edges.push((i, a as u64 + j));
                }
            }
            Graph::new(a + b, &edges)
        }
        GraphFamily::ErdosRenyiM { n, m } => erdos_renyi_m(n, m, rng),
        GraphFamily::NearRegular { n, d } => near_regular(n, d, rng),
    }
}

fn erdos_renyi_m(n: usize, m: usize, rng: &mut RngStream) -> Result<Graph, GraphError> {
    let pairs = (n as u128) * (n as u128).saturating_sub(1) / 2;
    if m as u128 > pairs {
        return Err(GraphError::Infeasible(format!(
            "{m} edges do not fit in a simple graph on {n} vertices"
        )));
    }
    let mut seen = HashSet::with_capacity(m);
    let mut edges = Vec::with_capacity(m);
    while edges.len() < m {
        let u = rng.uniform_below(n as u64);
        let v = rng.uniform_below(n as u64);
        if u != v && seen.insert(key(u, v)) {
            edges.push((u, v));
        }
    }
    Graph::new(n, &edges)
}

/// Random pairing of `d` stubs per vertex. Loops and repeated pairs are
/// repaired by random two-edge switches; a pair that cannot be repaired is
/// dropped, which costs each endpoint one degree at most once.
fn near_regular(n: usize, d: usize, rng: &mut RngStream) -> Result<Graph, GraphError> {
    if d >= n {
        return Err(GraphError::Infeasible(format!(
            "degree {d} needs more than {n} vertices"
        )));
    }
    if (n * d) % 2 != 0 {
        return Err(GraphError::Infeasible(format!("n*d = {} is odd", n * d)));
    }
    let mut stubs: Vec<u64> = (0..n as u64)
        .flat_map(|v| std::iter::repeat(v).take(d))
        .collect();
    rng.shuffle(&mut stubs);

    let mut edges: Vec<(u64, u64)> = Vec::with_capacity(stubs.len() / 2);
    let mut seen = HashSet::with_capacity(stubs.len() / 2);
    let mut bad = Vec::new();
    for pair in stubs.chunks_exact(2) {
        let (u, v) = (pair[0], pair[1]);
        if u != v && seen.insert(key(u, v)) {
            edges.push((u, v));
        } else {
            bad.push((u, v));
        }
    }

    let mut lost = vec![false; n];
    for (u, v) in bad {
        let mut fixed = false;
        if !edges.is_empty() {
            for _ in 0..SWAP_BUDGET_PER_BAD_PAIR {
                let i = rng.uniform_below(edges.len() as u64) as usize;
                let (a, b) = if rng.coin() {
                    edges[i]
                } else {
                    (edges[i].1, edges[i].0)
                };
                // (u,v) + (a,b) -> (u,a) + (v,b)
                if u == a || v == b || seen.contains(&key(u, a)) || seen.contains(&key(v, b)) {
                    continue;
                }
                if key(u, a) == key(v, b) {
                    continue;
                }
                seen.remove(&key(a, b));
                seen.insert(key(u, a));
                seen.insert(key(v, b));
                edges[i] = (u, a);
                edges.push((v, b));
                fixed = true;
                break;
            }
        }
        if !fixed {
            let endpoints = if u == v { vec![u] } else { vec![u, v] };
            if u == v || endpoints.iter().any(|&w| lost[w as usize]) {
                // A loop would cost two stubs of one vertex.
                return Err(GraphError::Infeasible(format!(
                    "pairing repair budget exhausted at ({u}, {v})"
                )));
            }
            for w in endpoints {
                lost[w as usize] = true;
            }
        }
    }
    Graph::new(n, &edges)
}

impl fmt::Display for GraphFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GraphFamily::NearRegular { n, d } => write!(f, "near_regular:{n}:{d}"),
            GraphFamily::ErdosRenyiM { n, m } => write!(f, "erdos_renyi_m:{n}:{m}"),
            GraphFamily::CompleteBipartite { a, b } => write!(f, "complete_bipartite:{a}:{b}"),
            GraphFamily::Cycle { n } => write!(f, "cycle:{n}"),
            GraphFamily::Star { d } => write!(f, "star:{d}"),
        }
    }
}

impl FromStr for GraphFamily {
    type Err = String;

    /// Parses `kind:arg[:arg]`, e.g. `near_regular:1000:16` or `cycle:10`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parts = s.split(':');
        let kind = parts.next().unwrap_or_default();
        let args: Vec<usize> = parts
            .map(|p| p.parse::<usize>().map_err(|e| format!("bad number {p:?}: {e}")))
            .collect::<Result<_, _>>()?;
        let want = |k: usize| {
            if args.len() == k {
                Ok(())
            } else {
                Err(format!("{kind} takes {k} argument(s), got {}", args.len()))
            }
        };
        match kind.replace('-', "_").as_str() {
            "near_regular" => want(2).map(|_| GraphFamily::NearRegular { n: args[0], d: args[1] }),
            "erdos_renyi_m" => want(2).map(|_| GraphFamily::ErdosRenyiM { n: args[0], m: args[1] }),
            "complete_bipartite" => {
                want(2).map(|_| GraphFamily::CompleteBipartite { a: args[0], b: args[1] })
            }
            "cycle" => want(1).map(|_| GraphFamily::Cycle { n: args[0] }),
            "star" => want(1).map(|_| GraphFamily::Star { d: args[0] }),
            other => Err(format!("unknown graph family {other:?}")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_five() {
        let g = generate(GraphFamily::Cycle { n: 5 }, &mut RngStream::new(0)).unwrap();
        assert_eq!((g.n(), g.m(), g.max_degree()), (5, 5, 2));
    }

    #[test]
    fn k23() {
        let g = generate(GraphFamily::CompleteBipartite { a: 2, b: 3 }, &mut RngStream::new(0))
            .unwrap();
        assert_eq!((g.m(), g.max_degree()), (6, 3));
    }

    #[test]
    fn star_five() {
        let g = generate(GraphFamily::Star { d: 5 }, &mut RngStream::new(0)).unwrap();
        assert_eq!((g.n(), g.m(), g.max_degree()), (6, 5, 5));
    }

    #[test]
    fn near_regular_degree_histogram() {
        for seed in 0..10 {
            let g = generate(GraphFamily::NearRegular { n: 100, d: 4 }, &mut RngStream::new(seed))
                .unwrap();
            for v in 0..100 {
                assert!((3..=4).contains(&g.degree(v)), "seed {seed} vertex {v}");
            }
            assert_eq!(g.max_degree(), 4);
        }
    }

    #[test]
    fn near_regular_dense() {
        let g = generate(GraphFamily::NearRegular { n: 40, d: 30 }, &mut RngStream::new(9)).unwrap();
        for v in 0..40 {
            assert!((29..=30).contains(&g.degree(v)));
        }
    }

    #[test]
    fn near_regular_rejects_odd_stub_count() {
        let err = generate(GraphFamily::NearRegular { n: 5, d: 3 }, &mut RngStream::new(0));
        assert!(matches!(err, Err(GraphError::Infeasible(_))));
    }

    #[test]
    fn erdos_renyi_counts() {
        let g = generate(GraphFamily::ErdosRenyiM { n: 30, m: 200 }, &mut RngStream::new(1))
            .unwrap();
        assert_eq!(g.m(), 200);
        assert!(generate(GraphFamily::ErdosRenyiM { n: 4, m: 7 }, &mut RngStream::new(1)).is_err());
    }

    #[test]
    fn same_seed_same_graph() {
        let fam = GraphFamily::NearRegular { n: 500, d: 8 };
        let a = generate(fam, &mut RngStream::new(5)).unwrap();
        let b = generate(fam, &mut RngStream::new(5)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn family_strings() {
        for fam in [
            GraphFamily::NearRegular { n: 10, d: 3 },
            GraphFamily::ErdosRenyiM { n: 10, m: 4 },
            GraphFamily::CompleteBipartite { a: 2, b: 3 },
            GraphFamily::Cycle { n: 7 },
            GraphFamily::Star { d: 4 },
        ] {
            assert_eq!(fam.to_string().parse::<GraphFamily>().unwrap(), fam);
        }
        assert!("cycle".parse::<GraphFamily>().is_err());
        assert!("wheel:5".parse::<GraphFamily>().is_err());
    }
}
