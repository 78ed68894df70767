//! Monotone submodular maximization under a knapsack constraint.
//!
//! The crate provides:
//!
//! - the cost-effectiveness greedy with a best-singleton safeguard
//!   ([`greedy::mgreedy`]) and a lazy accelerator producing identical runs;
//! - a data-dependent upper bound on the optimum computed alongside the
//!   greedy run ([`bounds::mgreedy_ub`]), with the guarantee that the
//!   solution value is at least `alpha_prime ~ 0.3578` times the bound;
//! - exact solvers: exhaustive enumeration and a best-first branch-and-bound
//!   whose node bounds come either from the greedy upper bound or from a
//!   single fractional-knapsack term ([`exact`]);
//! - concrete objectives: budgeted coverage, modular functions, and influence
//!   spread over sampled live-edge subgraphs ([`objectives`]);
//! - a verification suite that solves the approximation constants by
//!   bisection, falsification-tests the worst-case programs, and re-checks
//!   every bound inequality against brute-forced optima ([`analysis`]).
//!
//! Objectives are read through the [`oracle::ValueOracle`] contract: `f` is
//! normalized (`f(∅) = 0`), monotone nondecreasing, and submodular.
//!
//! ```
//! use submod::bounds::mgreedy_ub;
//! use submod::instance::Instance;
//! use submod::objectives::CoverageInstance;
//!
//! // Three objects covering parts of a three-word universe, unit costs.
//! let cov = CoverageInstance::new(
//!     3,
//!     vec![vec![0, 1], vec![1, 2], vec![2]],
//!     vec![1.0, 1.0, 1.0],
//!     2.0,
//! )?;
//! let oracle = cov.oracle();
//! let instance = Instance::unit(3, 2.0)?;
//!
//! let (trace, report) = mgreedy_ub(&oracle, &instance)?;
//! assert_eq!(trace.chosen_value, 3.0); // words {0, 1, 2} covered
//! assert_eq!(report.lambda, 3.0); // the bound certifies optimality
//! assert!(report.ratio_lambda >= 0.3578); // guaranteed for every run
//! # Ok::<(), submod::Error>(())
//! ```

pub mod analysis;
pub mod bounds;
pub mod error;
pub mod exact;
pub mod greedy;
pub mod instance;
pub mod objectives;
pub mod oracle;
pub mod set;

pub use error::{Error, Result};
pub use instance::{Instance, SolutionSet};
pub use oracle::ValueOracle;
pub use set::{ElementId, ElementSet};
