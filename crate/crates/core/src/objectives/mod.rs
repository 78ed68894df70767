//! Concrete monotone submodular objectives and instance generators.
//!
//! Three families cover the experiments this crate targets: budgeted
//! coverage over a bipartite incidence structure, modular (additive)
//! functions, and influence spread over an ensemble of sampled live-edge
//! subgraphs.

mod coverage;
mod influence;
mod modular;

pub use coverage::{gen_random_bipartite, CoverageInstance};
pub use influence::{
    degree_weighted_setup, gen_random_digraph, sample_live_edges, DiGraph, LiveEdgeEnsemble,
};
pub use modular::{gen_random_modular, ModularObjective};

use crate::oracle::ValueOracle;

/// Any of the supported objective families, owned; callers borrow the oracle
/// view per evaluation scope.
pub enum AnyObjective {
    Coverage(CoverageInstance),
    Modular(ModularObjective),
    Influence(LiveEdgeEnsemble),
}

impl AnyObjective {
    /// Run `f` with the oracle view of this objective.
    pub fn with_oracle<R>(&self, f: impl FnOnce(&dyn ValueOracle) -> R) -> R {
        match self {
            AnyObjective::Coverage(c) => f(&c.oracle()),
            AnyObjective::Modular(m) => f(m),
            AnyObjective::Influence(e) => f(e),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            AnyObjective::Coverage(_) => "coverage",
            AnyObjective::Modular(_) => "modular",
            AnyObjective::Influence(_) => "influence",
        }
    }

    pub fn ground_size(&self) -> usize {
        match self {
            AnyObjective::Coverage(c) => c.n_objects(),
            AnyObjective::Modular(m) => m.ground_size(),
            AnyObjective::Influence(e) => e.n_vertices(),
        }
    }
}
