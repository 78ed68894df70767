//! Additive objective: `f(S) = Σ_{v∈S} w(v)` with nonnegative weights.

use crate::oracle::{CallCounter, ValueOracle};
use crate::set::{ElementId, ElementSet};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Modular set function given by per-element weights `w(v) >= 0`.
#[derive(Debug)]
pub struct ModularObjective {
    weights: Vec<f64>,
    calls: CallCounter,
}

impl ModularObjective {
    pub fn new(weights: Vec<f64>) -> Self {
        assert!(
            weights.iter().all(|&w| w >= 0.0 && w.is_finite()),
            "modular weights must be nonnegative"
        );
        ModularObjective {
            weights,
            calls: CallCounter::new(),
        }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// Random modular objective: weights uniform in `[0, w_max)`, deterministic
/// under `seed`.
pub fn gen_random_modular(n: usize, w_max: f64, seed: u64) -> ModularObjective {
    assert!(n >= 1 && w_max > 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ModularObjective::new((0..n).map(|_| rng.gen_range(0.0..w_max)).collect())
}

impl ValueOracle for ModularObjective {
    fn ground_size(&self) -> usize {
        self.weights.len()
    }

    fn value(&self, set: &ElementSet) -> f64 {
        self.calls.bump();
        set.iter().map(|id| self.weights[id]).sum()
    }

    fn marginal(&self, v: ElementId, set: &ElementSet) -> f64 {
        self.calls.bump();
        if set.contains(v) {
            0.0
        } else {
            self.weights[v]
        }
    }

    fn calls(&self) -> u64 {
        self.calls.get()
    }

    fn reset_calls(&self) {
        self.calls.reset()
    }
}
