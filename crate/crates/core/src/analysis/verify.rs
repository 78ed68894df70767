//! Batch verification driver: generates a reproducible suite of small
//! instances across all objective families, brute-forces each optimum, and
//! checks every runtime inequality (upper-bound soundness, the guaranteed
//! value-to-bound ratio, the worst-case factors, the proof-trace
//! inequalities, and the unit-cost bound cap).
//!
//! Used both by the command-line `verify` subcommand and the acceptance
//! tests, so all thresholds live here in one place.

use crate::analysis::constants::{solve_constants, Constants};
use crate::analysis::programs::{falsify_program_main, falsify_program_simple, ProgramMinimum};
use crate::analysis::witness::{proof_trace_check_with, INEQUALITY_NAMES};
use crate::bounds::{cardinality_lambda, mgreedy_ub_with_mode, DeltaMode};
use crate::error::{Error, Result};
use crate::exact::brute_force;
use crate::instance::Instance;
use crate::objectives::{
    degree_weighted_setup, gen_random_bipartite, gen_random_digraph, sample_live_edges,
    AnyObjective, ModularObjective,
};
use crate::oracle::{RestrictedOracle, ValueOracle};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::fmt::Write as _;

/// One generated suite member.
pub struct SuiteInstance {
    pub label: String,
    pub objective: AnyObjective,
    pub instance: Instance,
    pub unit_costs: bool,
}

/// Ensemble size used for the suite's influence instances.
pub const SUITE_INFLUENCE_SAMPLES: usize = 50;

/// Budget fractions cycled through the suite, spanning 10% to 100% of the
/// total cost.
const BUDGET_FRACTIONS: [f64; 7] = [0.1, 0.25, 0.4, 0.55, 0.7, 0.85, 1.0];

/// Deterministically generate the `index`-th suite instance.
///
/// Objectives rotate coverage / modular / influence; costs alternate unit and
/// uniform-random; budgets cycle fractions of the total cost. Unit-cost
/// budgets are nudged to half-integers so optima strictly under the budget
/// stay the common case. Every 13th instance is an adversarial modular
/// family where the ratio rule alone is poor, so the safeguard and the
/// worst-case inequalities are exercised near their binding region rather
/// than only on benign random instances.
pub fn gen_suite_instance(index: usize, master_seed: u64) -> SuiteInstance {
    let seed = master_seed
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(index as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if index % 13 == 12 {
        return gen_adversarial_instance(index, &mut rng);
    }
    let kind = index % 3;
    let unit_costs = (index / 3).is_multiple_of(2);
    let frac = BUDGET_FRACTIONS[(index / 6) % BUDGET_FRACTIONS.len()];

    // Influence enumerates reachability per subset; keep its ground sets a
    // little smaller than the coverage/modular ones.
    let n = match kind {
        2 => rng.gen_range(8..=13),
        _ if index % 10 == 9 => rng.gen_range(16..=18),
        _ => rng.gen_range(8..=14),
    };

    let costs: Vec<f64> = if unit_costs {
        vec![1.0; n]
    } else {
        (0..n).map(|_| rng.gen_range(0.5..2.0)).collect()
    };
    let total: f64 = costs.iter().sum();
    let min_cost = costs.iter().cloned().fold(f64::INFINITY, f64::min);
    let budget = if unit_costs {
        ((frac * total).floor() + 0.5).max(1.5)
    } else {
        (frac * total * 1.002).max(min_cost * 1.05)
    };

    let objective = match kind {
        0 => {
            let m = rng.gen_range(12..=24);
            let p = rng.gen_range(0.15..0.4);
            let mut gen_seed = rng.gen::<u64>();
            let cov = loop {
                let cov = gen_random_bipartite(n, m, p, gen_seed);
                if cov.edge_count() > 0 {
                    break cov;
                }
                gen_seed = gen_seed.wrapping_add(0x9E37);
            };
            let mut cov = cov;
            cov.set_budget(total.max(budget));
            cov.set_costs(costs.clone()).expect("positive costs");
            AnyObjective::Coverage(cov)
        }
        1 => {
            let weights: Vec<f64> = (0..n)
                .map(|_| {
                    if rng.gen::<f64>() < 0.15 {
                        0.0
                    } else {
                        rng.gen_range(0.0..5.0)
                    }
                })
                .collect();
            let weights = if weights.iter().all(|&w| w < 0.01) {
                (0..n).map(|i| 1.0 + i as f64).collect()
            } else {
                weights
            };
            AnyObjective::Modular(ModularObjective::new(weights))
        }
        _ => {
            let max_edges = n * (n - 1);
            let edges = rng.gen_range(n..=(3 * n).min(max_edges));
            let graph = gen_random_digraph(n, edges, rng.gen::<u64>());
            let (probs, _) = degree_weighted_setup(&graph, 1.0, 1.0);
            let graph = graph.with_probs(probs);
            let ens = sample_live_edges(&graph, SUITE_INFLUENCE_SAMPLES, rng.gen::<u64>())
                .expect("valid ensemble parameters");
            AnyObjective::Influence(ens)
        }
    };

    SuiteInstance {
        label: format!(
            "suite-{index}-{}-{}-b{:.2}",
            objective.kind(),
            if unit_costs { "unit" } else { "rand" },
            budget
        ),
        objective,
        instance: Instance::new(costs, budget).expect("positive costs and budget"),
        unit_costs,
    }
}

/// Two modular families where the plain ratio rule goes wrong.
///
/// The safeguard family has one high-value element filling the whole budget
/// and a few cheap high-ratio crumbs: the loop collects crumbs, the budget
/// blocks the valuable element, and only the best-singleton pass recovers
/// it. The tightness family has two unit elements forming the optimum and a
/// slightly better-ratio element whose cost blocks both, pinning the
/// achieved ratio near (1 + 2eps)/2.
fn gen_adversarial_instance(index: usize, rng: &mut ChaCha8Rng) -> SuiteInstance {
    let scale = rng.gen_range(0.5..4.0);
    let eps = rng.gen_range(0.01..0.3);
    let (weights, costs, budget, tag) = if (index / 13).is_multiple_of(2) {
        // Safeguard family: ratio of each crumb (2*scale/budget) beats the
        // valuable element (scale/budget), but k crumbs are worth only
        // 2*k*eps*scale in total.
        let budget = rng.gen_range(1.0..5.0);
        let crumbs = rng.gen_range(2..=4usize);
        let mut weights = vec![scale];
        let mut costs = vec![budget];
        for _ in 0..crumbs {
            weights.push(2.0 * eps * scale);
            costs.push(eps * budget);
        }
        (weights, costs, budget, "safeguard")
    } else {
        // Tightness family: optimum {u, v} has value 2*scale; the greedy
        // and the best singleton both land on w.
        let unit = rng.gen_range(0.5..2.0);
        let weights = vec![scale, scale, scale * (1.0 + 2.0 * eps)];
        let costs = vec![unit, unit, unit * (1.0 + eps)];
        (weights, costs, 2.0 * unit, "tightness")
    };
    SuiteInstance {
        label: format!("suite-{index}-adversarial-{tag}-b{budget:.2}"),
        objective: AnyObjective::Modular(ModularObjective::new(weights)),
        instance: Instance::new(costs, budget).expect("positive costs and budget"),
        unit_costs: false,
    }
}

/// Configuration for a verification run.
#[derive(Clone, Debug)]
pub struct VerifyConfig {
    /// Number of suite instances to generate and check.
    pub instances: usize,
    /// Samples per falsification program.
    pub samples: u64,
    pub seed: u64,
    /// Certificate width for the constants.
    pub tolerance: f64,
    /// Bound computation mode; `DropFractional` is the mutation-test hook.
    pub delta_mode: DeltaMode,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            instances: 300,
            samples: 1_000_000,
            seed: 0,
            tolerance: 1e-9,
            delta_mode: DeltaMode::Exact,
        }
    }
}

/// Per-inequality tally over the suite.
#[derive(Clone, Debug)]
pub struct InequalitySummary {
    pub name: String,
    pub checked: usize,
    pub skipped: usize,
    pub violations: usize,
    pub min_slack: f64,
}

/// Everything a verification run establishes.
pub struct VerificationReport {
    pub constants: Constants,
    pub program_main: ProgramMinimum,
    pub program_simple: ProgramMinimum,
    pub suite_size: usize,
    /// One line per (instance, inequality): label, name, slack or skip.
    pub lines: Vec<String>,
    pub summaries: Vec<InequalitySummary>,
    pub failures: Vec<String>,
    /// Worst observed `f(S_m) / f(OPT)` over the suite.
    pub min_ratio: f64,
    /// Unit-cost instances that exercised the cardinality bound.
    pub cardinality_checked: usize,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn summary_csv(&self) -> String {
        let mut out = String::from("inequality,checked,skipped,violations,min_slack\n");
        for s in &self.summaries {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                s.name, s.checked, s.skipped, s.violations, s.min_slack
            );
        }
        out
    }
}

struct Tally {
    name: String,
    checked: usize,
    skipped: usize,
    violations: usize,
    min_slack: f64,
}

impl Tally {
    fn new(name: &str) -> Tally {
        Tally {
            name: name.to_string(),
            checked: 0,
            skipped: 0,
            violations: 0,
            min_slack: f64::INFINITY,
        }
    }

    fn record(&mut self, slack: f64) {
        self.checked += 1;
        self.min_slack = self.min_slack.min(slack);
        if slack < -1e-9 {
            self.violations += 1;
        }
    }
}

/// Run the full verification: constants, both program falsifications, and
/// the per-instance inequality suite. Failures are collected, not panicked,
/// so callers can render the report before deciding the exit status.
pub fn run_verification(config: &VerifyConfig) -> Result<VerificationReport> {
    if config.samples == 0 {
        return Err(Error::InvalidParameter(
            "falsification needs a positive sample count".into(),
        ));
    }
    if config.instances == 0 {
        return Err(Error::InvalidParameter(
            "verification needs at least one suite instance".into(),
        ));
    }
    let constants = solve_constants(config.tolerance)?;
    let mut failures: Vec<String> = Vec::new();

    let program_main = falsify_program_main(config.samples, config.seed, &constants);
    if program_main.alpha < constants.alpha_bot - 1e-6 {
        failures.push(format!(
            "program_main found feasible alpha {} below {}",
            program_main.alpha, constants.alpha_bot
        ));
    }
    let program_simple = falsify_program_simple(config.samples, config.seed);
    if program_simple.alpha < constants.one_minus_inv_sqrt_e - 1e-6 {
        failures.push(format!(
            "program_simple found feasible alpha {} below {}",
            program_simple.alpha, constants.one_minus_inv_sqrt_e
        ));
    }

    let mut lines: Vec<String> = Vec::new();
    let mut tallies: Vec<Tally> = INEQUALITY_NAMES.iter().map(|n| Tally::new(n)).collect();
    let mut lambda_tally = Tally::new("lambda_soundness");
    let mut chain_tally = Tally::new("bound_ratio_chain");
    let mut cardinality_tally = Tally::new("cardinality_cap");
    let mut min_ratio = f64::INFINITY;

    for index in 0..config.instances {
        let suite = gen_suite_instance(index, config.seed);
        let (filtered, map) = suite.instance.filter_overweight()?;
        let outcome = suite.objective.with_oracle(|oracle| -> Result<()> {
            let view = RestrictedOracle::remap(oracle, map.new_to_old().to_vec());
            let (opt_value, opt_set) = brute_force(&view, &filtered)?;
            let (trace, report) = mgreedy_ub_with_mode(&view, &filtered, false, config.delta_mode)?;

            let lambda_slack = report.lambda - opt_value;
            lambda_tally.record(lambda_slack);
            lines.push(format!("{} lambda_soundness {lambda_slack}", suite.label));
            if lambda_slack < -1e-9 {
                failures.push(format!(
                    "{}: upper bound {} fell below the optimum {}",
                    suite.label, report.lambda, opt_value
                ));
            }

            let chain_slack = report.f_sm - constants.alpha_prime * report.lambda;
            chain_tally.record(chain_slack);
            lines.push(format!("{} bound_ratio_chain {chain_slack}", suite.label));
            if chain_slack < -1e-9 {
                failures.push(format!(
                    "{}: value {} below alpha_prime * lambda = {}",
                    suite.label,
                    report.f_sm,
                    constants.alpha_prime * report.lambda
                ));
            }

            match proof_trace_check_with(
                &view,
                &filtered,
                &trace,
                opt_value,
                &opt_set,
                &constants,
                &suite.label,
            ) {
                Ok(witness) => {
                    min_ratio = min_ratio.min(witness.ratio);
                    if witness.first_rejected.is_none() {
                        lines.push(format!("{} markers o=dummy o_prime=dummy", suite.label));
                    } else if witness.second_rejected.is_none() {
                        lines.push(format!("{} markers o_prime=dummy", suite.label));
                    }
                    for check in &witness.checks {
                        let tally = tallies
                            .iter_mut()
                            .find(|t| t.name == check.name)
                            .expect("every inequality has a tally");
                        match check.skipped {
                            Some(reason) => {
                                tally.skipped += 1;
                                lines.push(format!(
                                    "{} {} SKIPPED {reason}",
                                    suite.label, check.name
                                ));
                            }
                            None => {
                                tally.record(check.slack);
                                lines.push(format!(
                                    "{} {} {}",
                                    suite.label, check.name, check.slack
                                ));
                            }
                        }
                    }
                }
                Err(Error::InequalityViolated {
                    name,
                    slack,
                    context,
                }) => {
                    if let Some(tally) = tallies.iter_mut().find(|t| t.name == name) {
                        tally.record(slack);
                    }
                    lines.push(format!("{} {name} {slack}", suite.label));
                    failures.push(format!("{name} violated ({slack:.3e}) on {context}"));
                }
                Err(other) => return Err(other),
            }

            if suite.unit_costs {
                let k = filtered.budget().floor() as usize;
                if k >= 1 {
                    match cardinality_lambda(&view, &filtered, k) {
                        Ok((sg, lambda)) => {
                            let sg_value = view.value(&sg);
                            let slack = sg_value / constants.one_minus_inv_e - lambda;
                            cardinality_tally.record(slack);
                            lines.push(format!("{} cardinality_cap {slack}", suite.label));
                        }
                        Err(Error::InequalityViolated {
                            name,
                            slack,
                            context,
                        }) => {
                            cardinality_tally.record(slack);
                            failures.push(format!("{name} violated ({slack:.3e}) on {context}"));
                        }
                        Err(other) => return Err(other),
                    }
                }
            }
            Ok(())
        });
        outcome?;
    }

    let mut summaries: Vec<InequalitySummary> = tallies
        .into_iter()
        .chain([lambda_tally, chain_tally, cardinality_tally])
        .map(|t| InequalitySummary {
            name: t.name,
            checked: t.checked,
            skipped: t.skipped,
            violations: t.violations,
            min_slack: if t.min_slack.is_finite() {
                t.min_slack
            } else {
                0.0
            },
        })
        .collect();
    summaries.sort_by(|a, b| a.name.cmp(&b.name));
    let cardinality_checked = summaries
        .iter()
        .find(|s| s.name == "cardinality_cap")
        .map_or(0, |s| s.checked);

    Ok(VerificationReport {
        constants,
        program_main,
        program_simple,
        suite_size: config.instances,
        lines,
        summaries,
        failures,
        min_ratio: if min_ratio.is_finite() {
            min_ratio
        } else {
            1.0
        },
        cardinality_checked,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_verification_run_passes() {
        let config = VerifyConfig {
            instances: 24,
            samples: 5_000,
            ..VerifyConfig::default()
        };
        let report = run_verification(&config).unwrap();
        assert!(report.passed(), "failures: {:?}", report.failures);
        assert!(report.min_ratio >= report.constants.alpha_bot - 1e-9);
        assert!(report.cardinality_checked > 0);
        assert!(!report.lines.is_empty());
    }

    #[test]
    fn crippled_bound_is_caught() {
        let config = VerifyConfig {
            instances: 40,
            samples: 1_000,
            delta_mode: DeltaMode::DropFractional,
            ..VerifyConfig::default()
        };
        let report = run_verification(&config).unwrap();
        assert!(
            !report.passed(),
            "dropping the fractional term must violate soundness somewhere"
        );
    }

    #[test]
    fn zero_samples_is_invalid() {
        let config = VerifyConfig {
            samples: 0,
            ..VerifyConfig::default()
        };
        assert!(run_verification(&config).is_err());
    }

    #[test]
    fn suite_generation_is_deterministic() {
        let a = gen_suite_instance(17, 3);
        let b = gen_suite_instance(17, 3);
        assert_eq!(a.label, b.label);
        assert_eq!(a.instance, b.instance);
    }
}
