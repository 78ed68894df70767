//! Runtime checker for the inequalities that tie a greedy run to the true
//! optimum on brute-forceable instances.
//!
//! For one instance the checker runs the greedy, brute-forces the optimum,
//! locates the first two optimal elements rejected for budget violation (`o`
//! and `o'`, with the greedy prefixes `Q` and `Q'` current at their
//! rejection), and asserts every inequality with a small negative slack
//! allowance. A violation is an implementation bug, never expected behavior,
//! so it surfaces as a structured error naming the inequality and instance.
//!
//! When no optimal element is rejected, `o` is a zero-cost dummy considered
//! after everything else: `Q` becomes the full greedy set and ratio terms
//! with `c(o)` denominators take their limit value zero. Inequalities whose
//! denominators genuinely vanish (`c(Q) = 0`, `c(Q) = b`, `c(OPT) >= b`) are
//! skipped and the skip is recorded.

use crate::analysis::constants::Constants;
use crate::error::{Error, Result};
use crate::exact::brute_force;
use crate::greedy::{mgreedy, GreedyTrace};
use crate::instance::Instance;
use crate::oracle::ValueOracle;
use crate::set::{ElementId, ElementSet};

const SLACK_TOLERANCE: f64 = 1e-9;

/// One checked inequality: `slack = lhs - rhs`, negative means violated.
#[derive(Clone, Debug)]
pub struct InequalityCheck {
    pub name: &'static str,
    pub slack: f64,
    pub skipped: Option<&'static str>,
}

/// The short names of every inequality the checker asserts.
pub const INEQUALITY_NAMES: [&str; 8] = [
    "prefix_exponential",
    "rejection_exponential",
    "singleton_lower",
    "rejection_linear",
    "budget_linear",
    "extension_exponential",
    "factor_main",
    "factor_simple",
];

/// Everything established about one instance: the optimum, the rejected
/// optimal elements with their prefixes, and all inequality slacks.
#[derive(Clone, Debug)]
pub struct ProofWitness {
    pub opt_value: f64,
    pub opt_set: ElementSet,
    /// First optimal element rejected by the greedy loop, if any.
    pub first_rejected: Option<ElementId>,
    /// Second such element.
    pub second_rejected: Option<ElementId>,
    /// Prefix length current when `o` was rejected (greedy length if dummy).
    pub q_len: usize,
    pub q_prime_len: usize,
    pub checks: Vec<InequalityCheck>,
    /// `f(S_m) / f(OPT)`, defined as 1 on degenerate all-zero objectives.
    pub ratio: f64,
}

impl ProofWitness {
    pub fn min_slack(&self) -> f64 {
        self.checks
            .iter()
            .filter(|c| c.skipped.is_none())
            .map(|c| c.slack)
            .fold(f64::INFINITY, f64::min)
    }
}

fn describe(instance: &Instance, label: &str) -> String {
    format!(
        "{label}; n = {}, budget = {}, costs = {:?}",
        instance.len(),
        instance.budget(),
        instance.costs()
    )
}

/// Run the greedy and the enumeration oracle, then check every inequality.
pub fn proof_trace_check<O: ValueOracle + ?Sized>(
    oracle: &O,
    instance: &Instance,
    constants: &Constants,
    label: &str,
) -> Result<ProofWitness> {
    let trace = mgreedy(oracle, instance)?;
    let (opt_value, opt_set) = brute_force(oracle, instance)?;
    proof_trace_check_with(
        oracle, instance, &trace, opt_value, &opt_set, constants, label,
    )
}

/// The checker proper, reusing a precomputed trace and optimum.
#[allow(clippy::too_many_arguments)]
pub fn proof_trace_check_with<O: ValueOracle + ?Sized>(
    oracle: &O,
    instance: &Instance,
    trace: &GreedyTrace,
    opt_value: f64,
    opt_set: &ElementSet,
    constants: &Constants,
    label: &str,
) -> Result<ProofWitness> {
    let budget = instance.budget();
    let k = trace.steps.len();

    // o and o': the first two optimal elements in the rejection order.
    let mut rejected_opt = trace
        .abandoned
        .iter()
        .filter(|r| opt_set.contains(r.element));
    let first = rejected_opt.next().cloned();
    let second = rejected_opt.next().cloned();
    drop(rejected_opt);

    let q_len = first.as_ref().map_or(k, |r| r.step);
    let q_prime_len = second.as_ref().map_or(k, |r| r.step);
    let q_set = trace.prefix_set(q_len);
    let f_q = trace.prefix_value(q_len);
    let c_q = trace.prefix_cost(q_len);
    let c_o = first
        .as_ref()
        .map_or(0.0, |r| instance.element_cost(r.element));
    let c_o_prime = second
        .as_ref()
        .map_or(0.0, |r| instance.element_cost(r.element));

    // OPT' = OPT \ (Q ∪ {o}) and its marginal value on top of Q.
    let mut opt_rest = opt_set.clone();
    for v in q_set.iter() {
        opt_rest.remove(v);
    }
    if let Some(r) = &first {
        opt_rest.remove(r.element);
    }
    let f_opt_rest_given_q = {
        let mut union = q_set.clone();
        union.union_with(&opt_rest);
        oracle.value(&union) - f_q
    };

    let f_sg = trace.greedy_value;
    let f_sm = trace.chosen_value;
    let f_vstar = trace.best_singleton.map_or(0.0, |(_, v)| v);
    let c_opt = instance.cost_of_set(opt_set);

    let mut checks: Vec<InequalityCheck> = Vec::new();
    let mut push = |name: &'static str, slack: f64, skipped: Option<&'static str>| {
        checks.push(InequalityCheck {
            name,
            slack,
            skipped,
        });
    };

    // The greedy set dominates the exponential-saturation curve of the
    // budget spent by the prefix current at the first rejection.
    push(
        "prefix_exponential",
        f_sg - (1.0 - (-c_q / budget).exp()) * opt_value,
        None,
    );

    // Relative to Q, the rest of the run still extracts an exponential share
    // of what the unrejected optimal remainder is worth on top of Q.
    if c_q > 0.0 {
        let factor = 1.0 - ((c_q + c_o_prime - budget) / c_q).exp();
        push(
            "rejection_exponential",
            f_sg - (f_q + factor * f_opt_rest_given_q),
            None,
        );
    } else {
        push("rejection_exponential", 0.0, Some("empty_prefix"));
    }

    // Lower bound on the best singleton; the ratio term takes its limit
    // value zero when o is a dummy.
    {
        let ratio_term = match &first {
            Some(r) => {
                let gain_o = oracle.marginal(r.element, &q_set).max(0.0);
                (gain_o / c_o) * (c_q + c_o + c_o_prime - budget)
            }
            None => 0.0,
        };
        let rhs = opt_value / 2.0 + (ratio_term - f_q) / (2.0 * constants.one_minus_inv_e);
        push("singleton_lower", f_vstar - rhs, None);
    }

    // Linear counterpart of the rejection bound; degenerate at c(Q) = b.
    if (budget - c_q).abs() > 1e-12 {
        let factor = 1.0 - c_q / (budget - c_q);
        push(
            "rejection_linear",
            f_sg - (f_q + factor * f_opt_rest_given_q),
            None,
        );
    } else {
        push("rejection_linear", 0.0, Some("prefix_cost_at_budget"));
    }

    // Straight-line bound against any strictly cheaper optimum.
    if c_opt < budget {
        push(
            "budget_linear",
            f_sg - (1.0 - c_opt / budget) * opt_value,
            None,
        );
    } else {
        push("budget_linear", 0.0, Some("opt_cost_at_budget"));
    }

    // Continuous extension against the optimum restricted to elements not
    // yet abandoned at the sampled cost point.
    {
        let ext = trace.extension();
        let mut worst = f64::INFINITY;
        for i in 1..=k {
            let knots = [
                0.5 * (trace.prefix_cost(i - 1) + trace.prefix_cost(i)),
                trace.prefix_cost(i),
            ];
            for x in knots {
                if x <= 0.0 {
                    continue;
                }
                // Segment index j with c(S_j) < x <= c(S_{j+1}).
                let j = (0..k)
                    .find(|&j| x <= trace.prefix_cost(j + 1))
                    .expect("x lies within the greedy cost range");
                let dropped = trace.abandoned_before(j);
                let mut t = opt_set.clone();
                for v in dropped.iter() {
                    t.remove(v);
                }
                let c_t = instance.cost_of_set(&t);
                let f_t = oracle.value(&t);
                let rhs = if c_t > 0.0 {
                    (1.0 - (-x / c_t).exp()) * f_t
                } else {
                    0.0
                };
                worst = worst.min(ext.value(x)? - rhs);
            }
        }
        if worst.is_finite() {
            push("extension_exponential", worst, None);
        } else {
            push("extension_exponential", 0.0, Some("empty_greedy_set"));
        }
    }

    push("factor_main", f_sm - constants.alpha_bot * opt_value, None);
    push(
        "factor_simple",
        f_sm - constants.one_minus_inv_sqrt_e * opt_value,
        None,
    );

    let witness = ProofWitness {
        opt_value,
        opt_set: opt_set.clone(),
        first_rejected: first.map(|r| r.element),
        second_rejected: second.map(|r| r.element),
        q_len,
        q_prime_len,
        ratio: if opt_value > 1e-12 {
            f_sm / opt_value
        } else {
            1.0
        },
        checks,
    };

    for check in &witness.checks {
        if check.skipped.is_none() && check.slack < -SLACK_TOLERANCE {
            return Err(Error::InequalityViolated {
                name: check.name,
                slack: check.slack,
                context: describe(instance, label),
            });
        }
    }
    Ok(witness)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::constants::solve_constants;
    use crate::objectives::{gen_random_bipartite, ModularObjective};

    #[test]
    fn half_plus_epsilon_instance_passes_all_checks() {
        let c = solve_constants(1e-9).unwrap();
        let f = ModularObjective::new(vec![1.0, 1.0, 1.2]);
        let inst = Instance::new(vec![1.0, 1.0, 1.1], 2.0).unwrap();
        let w = proof_trace_check(&f, &inst, &c, "half-plus-epsilon").unwrap();
        assert!((w.ratio - 0.6).abs() < 1e-12);
        assert_eq!(w.opt_value, 2.0);
        assert_eq!(w.first_rejected, Some(0));
        assert_eq!(w.second_rejected, Some(1));
        assert_eq!(w.q_len, 1);
        assert!(w.min_slack() >= -1e-9);
    }

    #[test]
    fn dummy_markers_when_nothing_optimal_is_rejected() {
        let c = solve_constants(1e-9).unwrap();
        // Budget covers everything: nothing is ever rejected.
        let f = ModularObjective::new(vec![3.0, 2.0, 1.0]);
        let inst = Instance::unit(3, 5.0).unwrap();
        let w = proof_trace_check(&f, &inst, &c, "all-fit").unwrap();
        assert_eq!(w.first_rejected, None);
        assert_eq!(w.second_rejected, None);
        // Q falls back to the full greedy set.
        assert_eq!(w.q_len, 3);
        assert!(w.min_slack() >= -1e-9);
    }

    #[test]
    fn random_coverage_instances_pass() {
        let c = solve_constants(1e-9).unwrap();
        for seed in 0..40 {
            let cov = gen_random_bipartite(12, 20, 0.3, seed);
            let oracle = cov.oracle();
            let inst = cov.instance().with_budget(4.5).unwrap();
            proof_trace_check(&oracle, &inst, &c, &format!("coverage-{seed}")).unwrap();
        }
    }
}
