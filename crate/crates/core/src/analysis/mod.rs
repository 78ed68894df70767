//! Approximation constants, program falsification, and the proof-trace
//! verification suite.

mod constants;
mod programs;
pub mod verify;
mod witness;

pub use constants::{
    beta_equation, bisect, bound_ratio_equation, factor_main_equation, solve_constants, Constants,
};
pub use programs::{
    falsify_program_main, falsify_program_simple, main_program_alpha, simple_program_alpha,
    ProgramMinimum,
};
pub use verify::{
    gen_suite_instance, run_verification, InequalitySummary, SuiteInstance, VerificationReport,
    VerifyConfig, SUITE_INFLUENCE_SAMPLES,
};
pub use witness::{
    proof_trace_check, proof_trace_check_with, InequalityCheck, ProofWitness, INEQUALITY_NAMES,
};
