//! Budgeted maximum coverage: objects cover words, `f(S) = |Γ(S)|`.
//!
//! Incidence is stored as sorted word-id arrays per object; evaluation marks
//! a word bitmap scratch buffer, so unions cost O(Σ|Γ(v)| + m/64) per call.

use crate::error::Result;
use crate::instance::Instance;
use crate::oracle::{CallCounter, ValueOracle};
use crate::set::{ElementId, ElementSet};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::io::{BufRead, Write};
use std::path::Path;

/// A coverage instance: `n` objects over `m` universe words, with per-object
/// costs and a default budget (runs usually override the budget).
#[derive(Clone, Debug, PartialEq)]
pub struct CoverageInstance {
    n_words: usize,
    /// Per-object covered word ids, each sorted ascending and duplicate-free.
    incidence: Vec<Vec<u32>>,
    costs: Vec<f64>,
    budget: f64,
}

impl CoverageInstance {
    pub fn new(
        n_words: usize,
        incidence: Vec<Vec<u32>>,
        costs: Vec<f64>,
        budget: f64,
    ) -> Result<Self> {
        assert_eq!(incidence.len(), costs.len());
        let mut incidence = incidence;
        for words in &mut incidence {
            words.sort_unstable();
            words.dedup();
            if let Some(&w) = words.last() {
                assert!((w as usize) < n_words, "word id {w} outside [0, {n_words})");
            }
        }
        // Validate costs/budget through the shared instance rules.
        Instance::new(costs.clone(), budget)?;
        Ok(CoverageInstance {
            n_words,
            incidence,
            costs,
            budget,
        })
    }

    pub fn n_objects(&self) -> usize {
        self.incidence.len()
    }

    pub fn n_words(&self) -> usize {
        self.n_words
    }

    pub fn words_of(&self, object: ElementId) -> &[u32] {
        &self.incidence[object]
    }

    pub fn costs(&self) -> &[f64] {
        &self.costs
    }

    pub fn budget(&self) -> f64 {
        self.budget
    }

    pub fn set_budget(&mut self, budget: f64) {
        self.budget = budget;
    }

    pub fn set_costs(&mut self, costs: Vec<f64>) -> Result<()> {
        Instance::new(costs.clone(), self.budget)?;
        self.costs = costs;
        Ok(())
    }

    /// The knapsack instance (costs + budget) this objective lives on.
    pub fn instance(&self) -> Instance {
        Instance::new(self.costs.clone(), self.budget).expect("validated at construction")
    }

    /// The oracle view of `f(S) = |Γ(S)|`.
    pub fn oracle(&self) -> CoverageOracle<'_> {
        CoverageOracle {
            inst: self,
            calls: CallCounter::new(),
        }
    }

    /// Total number of incidence edges.
    pub fn edge_count(&self) -> usize {
        self.incidence.iter().map(Vec::len).sum()
    }

    /// Write the text format: header `<n_objects> <n_words>`, then one line
    /// per object `<cost> <k> <w1> ... <wk>`.
    pub fn write<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{} {}", self.n_objects(), self.n_words)?;
        for (words, cost) in self.incidence.iter().zip(&self.costs) {
            write!(out, "{cost} {}", words.len())?;
            for w in words {
                write!(out, " {w}")?;
            }
            writeln!(out)?;
        }
        Ok(())
    }

    pub fn read<P: AsRef<Path>>(path: P) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path)?;
        let err = |line: usize, message: String| crate::error::Error::Parse {
            path: path.display().to_string(),
            line,
            message,
        };
        let mut rows: Vec<(usize, Vec<String>)> = Vec::new();
        for (idx, line) in std::io::BufReader::new(file).lines().enumerate() {
            let line = line?;
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            rows.push((
                idx + 1,
                body.split_whitespace().map(str::to_string).collect(),
            ));
        }
        let (hline, header) = rows
            .first()
            .cloned()
            .ok_or_else(|| err(0, "empty coverage file".into()))?;
        if header.len() != 2 {
            return Err(err(hline, "header must be `<n_objects> <n_words>`".into()));
        }
        let n_objects: usize = header[0].parse().map_err(|e| err(hline, format!("{e}")))?;
        let n_words: usize = header[1].parse().map_err(|e| err(hline, format!("{e}")))?;
        if rows.len() != n_objects + 1 {
            return Err(err(hline, format!("expected {n_objects} object lines")));
        }
        let mut incidence = Vec::with_capacity(n_objects);
        let mut costs = Vec::with_capacity(n_objects);
        for (lno, toks) in rows.into_iter().skip(1) {
            let cost: f64 = toks
                .first()
                .ok_or_else(|| err(lno, "missing cost".into()))?
                .parse()
                .map_err(|e| err(lno, format!("bad cost: {e}")))?;
            let k: usize = toks
                .get(1)
                .ok_or_else(|| err(lno, "missing word count".into()))?
                .parse()
                .map_err(|e| err(lno, format!("bad word count: {e}")))?;
            if toks.len() != 2 + k {
                return Err(err(lno, format!("expected {k} word ids")));
            }
            let mut words = Vec::with_capacity(k);
            for t in &toks[2..] {
                let w: u32 = t
                    .parse()
                    .map_err(|e| err(lno, format!("bad word id: {e}")))?;
                if w as usize >= n_words {
                    return Err(err(lno, format!("word id {w} outside [0, {n_words})")));
                }
                words.push(w);
            }
            incidence.push(words);
            costs.push(cost);
        }
        // Budget is a per-run parameter; default to the total cost so the
        // loaded instance is valid until a run overrides it.
        let budget = costs.iter().sum::<f64>().max(1.0);
        CoverageInstance::new(n_words, incidence, costs, budget)
    }
}

/// Oracle over a [`CoverageInstance`]; evaluation counts distinct covered words.
pub struct CoverageOracle<'a> {
    inst: &'a CoverageInstance,
    calls: CallCounter,
}

impl CoverageOracle<'_> {
    fn covered_bitmap(&self, set: &ElementSet) -> Vec<u64> {
        let mut bitmap = vec![0u64; self.inst.n_words.div_ceil(64)];
        for obj in set.iter() {
            for &w in &self.inst.incidence[obj] {
                bitmap[w as usize / 64] |= 1 << (w % 64);
            }
        }
        bitmap
    }
}

impl ValueOracle for CoverageOracle<'_> {
    fn ground_size(&self) -> usize {
        self.inst.n_objects()
    }

    fn value(&self, set: &ElementSet) -> f64 {
        self.calls.bump();
        self.covered_bitmap(set)
            .iter()
            .map(|b| b.count_ones() as u64)
            .sum::<u64>() as f64
    }

    fn marginal(&self, v: ElementId, set: &ElementSet) -> f64 {
        self.calls.bump();
        debug_assert!(!set.contains(v));
        let covered = self.covered_bitmap(set);
        self.inst.incidence[v]
            .iter()
            .filter(|&&w| covered[w as usize / 64] >> (w % 64) & 1 == 0)
            .count() as f64
    }

    fn calls(&self) -> u64 {
        self.calls.get()
    }

    fn reset_calls(&self) {
        self.calls.reset()
    }
}

/// Random bipartite coverage instance: each (object, word) pair is connected
/// independently with probability `p`; unit costs; deterministic under `seed`.
pub fn gen_random_bipartite(
    n_objects: usize,
    n_words: usize,
    p: f64,
    seed: u64,
) -> CoverageInstance {
    assert!(n_objects >= 1 && n_words >= 1);
    assert!((0.0..=1.0).contains(&p), "probability outside [0, 1]");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut incidence = Vec::with_capacity(n_objects);
    for _ in 0..n_objects {
        let mut words = Vec::new();
        for w in 0..n_words {
            if rng.gen::<f64>() < p {
                words.push(w as u32);
            }
        }
        incidence.push(words);
    }
    let costs = vec![1.0; n_objects];
    let budget = n_objects as f64;
    CoverageInstance::new(n_words, incidence, costs, budget).expect("unit costs are valid")
}
