//! Influence spread over an ensemble of sampled live-edge subgraphs.
//!
//! Each subgraph keeps every edge of the base graph independently with its
//! propagation probability; the objective is the mean, over subgraphs, of the
//! number of vertices reachable from the seed set (seeds included). Averaging
//! reachability counts of a frozen ensemble makes the function deterministic,
//! monotone, and submodular, and small instances stay brute-forceable.
//!
//! Reachability is answered from per-subgraph single-source reach sets,
//! memoized on first use, plus a guarded cache of the union reached by the
//! current query set; the cache only amortizes work and never changes values.

use crate::error::{Error, Result};
use crate::oracle::{CallCounter, ValueOracle};
use crate::set::{ElementId, ElementSet};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;
use std::io::{BufRead, Write};
use std::path::Path;
use std::sync::{Mutex, OnceLock};

/// A directed graph with optional per-edge propagation probabilities.
#[derive(Clone, Debug, PartialEq)]
pub struct DiGraph {
    pub n: usize,
    pub edges: Vec<(u32, u32)>,
    pub probs: Option<Vec<f64>>,
}

impl DiGraph {
    pub fn new(n: usize, edges: Vec<(u32, u32)>) -> Self {
        assert!(edges
            .iter()
            .all(|&(u, v)| (u as usize) < n && (v as usize) < n));
        DiGraph {
            n,
            edges,
            probs: None,
        }
    }

    pub fn with_probs(mut self, probs: Vec<f64>) -> Self {
        assert_eq!(probs.len(), self.edges.len());
        assert!(probs.iter().all(|p| (0.0..=1.0).contains(p)));
        self.probs = Some(probs);
        self
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(u, _)| u as usize == v).count()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(_, w)| w as usize == v).count()
    }

    /// Write one `<u> <v> [p]` line per edge.
    pub fn write<W: Write>(&self, mut out: W) -> Result<()> {
        for (i, (u, v)) in self.edges.iter().enumerate() {
            match &self.probs {
                Some(p) => writeln!(out, "{u} {v} {}", p[i])?,
                None => writeln!(out, "{u} {v}")?,
            }
        }
        Ok(())
    }

    /// Read the edge-list format; vertex count is `max id + 1`. Probabilities
    /// are optional per line but must be all-present or all-absent.
    pub fn read<P: AsRef<Path>>(path: P) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path)?;
        let err = |line: usize, message: String| Error::Parse {
            path: path.display().to_string(),
            line,
            message,
        };
        let mut edges = Vec::new();
        let mut probs = Vec::new();
        let mut n = 0usize;
        for (idx, line) in std::io::BufReader::new(file).lines().enumerate() {
            let line = line?;
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let toks: Vec<&str> = body.split_whitespace().collect();
            if toks.len() != 2 && toks.len() != 3 {
                return Err(err(idx + 1, "expected `<u> <v> [p]`".into()));
            }
            let u: u32 = toks[0].parse().map_err(|e| err(idx + 1, format!("{e}")))?;
            let v: u32 = toks[1].parse().map_err(|e| err(idx + 1, format!("{e}")))?;
            n = n.max(u as usize + 1).max(v as usize + 1);
            edges.push((u, v));
            if toks.len() == 3 {
                let p: f64 = toks[2].parse().map_err(|e| err(idx + 1, format!("{e}")))?;
                if !(0.0..=1.0).contains(&p) {
                    return Err(err(idx + 1, format!("probability {p} outside [0, 1]")));
                }
                probs.push(p);
            }
        }
        if !probs.is_empty() && probs.len() != edges.len() {
            return Err(err(
                0,
                "probabilities must be given on all edges or none".into(),
            ));
        }
        let g = DiGraph::new(n, edges);
        Ok(if probs.is_empty() {
            g
        } else {
            g.with_probs(probs)
        })
    }
}

/// Random simple digraph with `n_edges` distinct non-loop edges.
pub fn gen_random_digraph(n: usize, n_edges: usize, seed: u64) -> DiGraph {
    assert!(n >= 2, "need at least two vertices");
    assert!(n_edges <= n * (n - 1), "too many edges requested");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::new();
    let mut edges = Vec::with_capacity(n_edges);
    while edges.len() < n_edges {
        let u = rng.gen_range(0..n as u32);
        let v = rng.gen_range(0..n as u32);
        if u != v && seen.insert((u, v)) {
            edges.push((u, v));
        }
    }
    DiGraph::new(n, edges)
}

/// Per-edge probabilities set to the reciprocal of the target's in-degree and
/// per-vertex costs `max(gamma * outdeg(v), c_min)`, so popular vertices cost
/// more and isolated vertices still carry a positive cost.
pub fn degree_weighted_setup(graph: &DiGraph, gamma: f64, c_min: f64) -> (Vec<f64>, Vec<f64>) {
    assert!(gamma > 0.0 && c_min > 0.0);
    let mut indeg = vec![0usize; graph.n];
    let mut outdeg = vec![0usize; graph.n];
    for &(u, v) in &graph.edges {
        outdeg[u as usize] += 1;
        indeg[v as usize] += 1;
    }
    let probs = graph
        .edges
        .iter()
        .map(|&(_, v)| 1.0 / indeg[v as usize] as f64)
        .collect();
    let costs = outdeg
        .iter()
        .map(|&d| (gamma * d as f64).max(c_min))
        .collect();
    (probs, costs)
}

/// Compressed forward adjacency of one sampled subgraph.
#[derive(Clone, Debug)]
struct Csr {
    offsets: Vec<u32>,
    targets: Vec<u32>,
}

impl Csr {
    fn build(n: usize, edges: impl Iterator<Item = (u32, u32)>) -> Csr {
        let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
        for (u, v) in edges {
            adj[u as usize].push(v);
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for list in adj {
            targets.extend(list);
            offsets.push(targets.len() as u32);
        }
        Csr { offsets, targets }
    }

    fn neighbors(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v] as usize..self.offsets[v + 1] as usize]
    }

    fn edge_count(&self) -> usize {
        self.targets.len()
    }
}

/// Frozen sample of `R` live-edge subgraphs of a base graph.
///
/// Implements [`ValueOracle`] with `f(S) = (1/R) Σ_r |reach_r(S)|`.
pub struct LiveEdgeEnsemble {
    base: DiGraph,
    subgraphs: Vec<Csr>,
    seed: u64,
    /// reach_cache[r][v]: sorted vertex list reachable from v in subgraph r.
    reach_cache: Vec<Vec<OnceLock<Vec<u32>>>>,
    state: Mutex<OracleState>,
    calls: CallCounter,
}

struct OracleState {
    scratch_visited: Vec<u64>,
    scratch_stack: Vec<u32>,
    union: Option<UnionCache>,
}

struct UnionCache {
    key: ElementSet,
    /// Per-subgraph bitmap of vertices reached by `key`.
    reached: Vec<Vec<u64>>,
    /// Σ_r |reached_r|.
    total: u64,
}

/// Sample `r_subgraphs` live-edge subgraphs: each base edge is kept
/// independently with its probability. Deterministic for a fixed seed.
pub fn sample_live_edges(
    graph: &DiGraph,
    r_subgraphs: usize,
    seed: u64,
) -> Result<LiveEdgeEnsemble> {
    if r_subgraphs == 0 {
        return Err(Error::InvalidParameter(
            "ensemble size R must be at least 1".into(),
        ));
    }
    let probs = graph
        .probs
        .as_ref()
        .ok_or_else(|| Error::InvalidParameter("graph carries no edge probabilities".into()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut subgraphs = Vec::with_capacity(r_subgraphs);
    for _ in 0..r_subgraphs {
        let kept = graph
            .edges
            .iter()
            .zip(probs)
            .filter(|&(_, &p)| rng.gen::<f64>() < p)
            .map(|(&e, _)| e);
        subgraphs.push(Csr::build(graph.n, kept));
    }
    let reach_cache = (0..r_subgraphs)
        .map(|_| (0..graph.n).map(|_| OnceLock::new()).collect())
        .collect();
    Ok(LiveEdgeEnsemble {
        base: graph.clone(),
        subgraphs,
        seed,
        reach_cache,
        state: Mutex::new(OracleState {
            scratch_visited: vec![0; graph.n.div_ceil(64)],
            scratch_stack: Vec::new(),
            union: None,
        }),
        calls: CallCounter::new(),
    })
}

impl LiveEdgeEnsemble {
    pub fn n_vertices(&self) -> usize {
        self.base.n
    }

    pub fn r_subgraphs(&self) -> usize {
        self.subgraphs.len()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn base(&self) -> &DiGraph {
        &self.base
    }

    /// Total live edges kept in subgraph `r`.
    pub fn live_edge_count(&self, r: usize) -> usize {
        self.subgraphs[r].edge_count()
    }

    /// Sorted vertices reachable from `v` in subgraph `r` (including `v`).
    fn reach(&self, r: usize, v: usize) -> &[u32] {
        self.reach_cache[r][v].get_or_init(|| {
            let csr = &self.subgraphs[r];
            let mut visited = vec![0u64; self.base.n.div_ceil(64)];
            let mut stack = vec![v as u32];
            visited[v / 64] |= 1 << (v % 64);
            while let Some(u) = stack.pop() {
                for &w in csr.neighbors(u as usize) {
                    let (blk, bit) = (w as usize / 64, w % 64);
                    if visited[blk] >> bit & 1 == 0 {
                        visited[blk] |= 1 << bit;
                        stack.push(w);
                    }
                }
            }
            let mut out = Vec::new();
            for (blk, &bits) in visited.iter().enumerate() {
                let mut bits = bits;
                while bits != 0 {
                    let tz = bits.trailing_zeros();
                    out.push((blk * 64) as u32 + tz);
                    bits &= bits - 1;
                }
            }
            out
        })
    }

    /// Count-only BFS reusing the guarded scratch; avoids materializing reach
    /// lists during the dense marginal scan at the empty set.
    fn reach_count(&self, r: usize, v: usize, state: &mut OracleState) -> u64 {
        if let Some(list) = self.reach_cache[r][v].get() {
            return list.len() as u64;
        }
        let csr = &self.subgraphs[r];
        let visited = &mut state.scratch_visited;
        visited.iter_mut().for_each(|b| *b = 0);
        let stack = &mut state.scratch_stack;
        stack.clear();
        stack.push(v as u32);
        visited[v / 64] |= 1 << (v % 64);
        let mut count = 1u64;
        while let Some(u) = stack.pop() {
            for &w in csr.neighbors(u as usize) {
                let (blk, bit) = (w as usize / 64, w % 64);
                if visited[blk] >> bit & 1 == 0 {
                    visited[blk] |= 1 << bit;
                    stack.push(w);
                    count += 1;
                }
            }
        }
        count
    }

    /// Make the union cache describe exactly `set`, rebuilding as needed.
    fn ensure_union<'s>(&self, state: &'s mut OracleState, set: &ElementSet) -> &'s UnionCache {
        enum Plan {
            Hit,
            /// One new seed since the cached key.
            Grow(usize),
            Rebuild,
        }
        let plan = match &state.union {
            Some(c) if &c.key == set => Plan::Hit,
            Some(c) if c.key.is_subset_of(set) && set.len() == c.key.len() + 1 => {
                match set.iter().find(|&v| !c.key.contains(v)) {
                    Some(v) => Plan::Grow(v),
                    None => Plan::Rebuild,
                }
            }
            _ => Plan::Rebuild,
        };
        match plan {
            Plan::Hit => {}
            Plan::Grow(new_seed) => {
                let cache = state.union.as_mut().expect("cache exists");
                let mut gained = 0u64;
                for (r, bitmap) in cache.reached.iter_mut().enumerate() {
                    for &w in self.reach(r, new_seed) {
                        let (blk, bit) = (w as usize / 64, w % 64);
                        if bitmap[blk] >> bit & 1 == 0 {
                            bitmap[blk] |= 1 << bit;
                            gained += 1;
                        }
                    }
                }
                cache.total += gained;
                cache.key = set.clone();
            }
            Plan::Rebuild => {
                let blocks = self.base.n.div_ceil(64);
                let mut reached = vec![vec![0u64; blocks]; self.subgraphs.len()];
                let mut total = 0u64;
                for (r, bitmap) in reached.iter_mut().enumerate() {
                    for v in set.iter() {
                        for &w in self.reach(r, v) {
                            bitmap[w as usize / 64] |= 1 << (w % 64);
                        }
                    }
                    total += bitmap.iter().map(|b| b.count_ones() as u64).sum::<u64>();
                }
                state.union = Some(UnionCache {
                    key: set.clone(),
                    reached,
                    total,
                });
            }
        }
        state.union.as_ref().expect("cache exists")
    }
}

impl ValueOracle for LiveEdgeEnsemble {
    fn ground_size(&self) -> usize {
        self.base.n
    }

    fn value(&self, set: &ElementSet) -> f64 {
        self.calls.bump();
        if set.is_empty() {
            return 0.0;
        }
        let mut state = self.state.lock().expect("oracle state poisoned");
        let total = self.ensure_union(&mut state, set).total;
        total as f64 / self.subgraphs.len() as f64
    }

    fn marginal(&self, v: ElementId, set: &ElementSet) -> f64 {
        self.calls.bump();
        debug_assert!(!set.contains(v));
        let mut state = self.state.lock().expect("oracle state poisoned");
        if set.is_empty() {
            let mut total = 0u64;
            for r in 0..self.subgraphs.len() {
                total += self.reach_count(r, v, &mut state);
            }
            return total as f64 / self.subgraphs.len() as f64;
        }
        self.ensure_union(&mut state, set);
        let cache = state.union.as_ref().expect("cache exists");
        let mut gained = 0u64;
        for (r, bitmap) in cache.reached.iter().enumerate() {
            for &w in self.reach(r, v) {
                if bitmap[w as usize / 64] >> (w % 64) & 1 == 0 {
                    gained += 1;
                }
            }
        }
        gained as f64 / self.subgraphs.len() as f64
    }

    fn calls(&self) -> u64 {
        self.calls.get()
    }

    fn reset_calls(&self) {
        self.calls.reset()
    }
}
