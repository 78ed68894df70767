//! Data-dependent upper bounds on the optimum.
//!
//! `delta(b|S)` is the fractional-knapsack relaxation of the best marginal
//! gain achievable on top of `S` within budget `b`: sort the remaining
//! elements by `f(v|S)/c(v)` descending, take whole elements while they fit,
//! and add a fractional share of the first violator. It upper-bounds the gain
//! of every feasible completion, so `f(S) + delta(b|S)` upper-bounds the
//! optimum for any `S`.
//!
//! The bound `lambda` sharpens this by taking the minimum of
//! `f(S_i) + delta(b|S_i)` over every prefix of the greedy run, the empty set
//! included. The single last term `f(S_g) + delta(b|S_g)` is kept separately
//! for comparison; `lambda` can never exceed it.

use crate::error::{Error, Result};
use crate::greedy::{run_greedy, GreedyTrace, StepObserver};
use crate::instance::{Instance, FEASIBILITY_SLACK};
use crate::oracle::ValueOracle;
use crate::set::{ElementId, ElementSet};

/// Switch used by the verification harness to cripple `delta` on purpose and
/// prove the soundness checks catch it. Production paths always use `Exact`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeltaMode {
    Exact,
    /// Drop the fractional share of the first violator (an unsound bound).
    DropFractional,
}

fn delta_over_pool<O: ValueOracle + ?Sized>(
    oracle: &O,
    costs: &[f64],
    pool: impl Iterator<Item = ElementId>,
    base: &ElementSet,
    budget: f64,
    mode: DeltaMode,
) -> Result<f64> {
    if budget < 0.0 {
        return Err(Error::Domain {
            what: "delta budget",
            value: budget,
            lo: 0.0,
            hi: f64::INFINITY,
        });
    }
    // (id, gain, cost, gain/cost) per candidate.
    let mut items: Vec<(ElementId, f64, f64, f64)> = Vec::new();
    for v in pool {
        debug_assert!(!base.contains(v));
        let gain = oracle.marginal(v, base).max(0.0);
        items.push((v, gain, costs[v], gain / costs[v]));
    }
    // Descending cost-effectiveness, ties toward the lower id.
    items.sort_unstable_by(|a, b| b.3.total_cmp(&a.3).then_with(|| a.0.cmp(&b.0)));
    let mut total = 0.0;
    let mut spent = 0.0;
    for &(_, gain, cost, _) in &items {
        if spent + cost <= budget + FEASIBILITY_SLACK {
            total += gain;
            spent += cost;
        } else {
            if mode == DeltaMode::Exact {
                total += gain * ((budget - spent).max(0.0) / cost);
            }
            break;
        }
    }
    Ok(total)
}

/// Fractional-knapsack upper bound on the best marginal gain on top of `S`
/// within `budget`, over all elements outside `S`.
pub fn delta<O: ValueOracle + ?Sized>(
    oracle: &O,
    instance: &Instance,
    base: &ElementSet,
    budget: f64,
) -> Result<f64> {
    delta_over_pool(
        oracle,
        instance.costs(),
        (0..instance.len()).filter(|&v| !base.contains(v)),
        base,
        budget,
        DeltaMode::Exact,
    )
}

/// `delta` restricted to an explicit candidate pool; used by search nodes
/// where candidates are a subset of the ground set.
pub fn delta_restricted<O: ValueOracle + ?Sized>(
    oracle: &O,
    instance: &Instance,
    base: &ElementSet,
    pool: &[ElementId],
    budget: f64,
) -> Result<f64> {
    delta_over_pool(
        oracle,
        instance.costs(),
        pool.iter().copied(),
        base,
        budget,
        DeltaMode::Exact,
    )
}

/// Upper-bound report of one greedy run.
#[derive(Clone, Debug)]
pub struct BoundReport {
    /// Value of the returned solution.
    pub f_sm: f64,
    /// Running minimum of the per-prefix bound terms.
    pub lambda: f64,
    /// The final-prefix term `f(S_g) + delta(b|S_g)` alone.
    pub leskovec: f64,
    /// `f(S_i) + delta(b|S_i)` for `i = 0..=|S_g|`.
    pub terms: Vec<f64>,
    pub ratio_lambda: f64,
    pub ratio_leskovec: f64,
    /// Oracle calls consumed by the run, bound computations included.
    pub oracle_calls: u64,
}

impl BoundReport {
    pub const CSV_HEADER: &'static str =
        "instance_id,budget,f_sm,lambda,leskovec,ratio_lambda,ratio_leskovec,oracle_calls,time_ms";

    pub fn csv_row(&self, instance_id: &str, budget: f64, time_ms: f64) -> String {
        format!(
            "{instance_id},{budget},{},{},{},{},{},{},{time_ms}",
            self.f_sm,
            self.lambda,
            self.leskovec,
            self.ratio_lambda,
            self.ratio_leskovec,
            self.oracle_calls
        )
    }
}

struct BoundObserver<'a, O: ValueOracle + ?Sized> {
    oracle: &'a O,
    instance: &'a Instance,
    mode: DeltaMode,
    terms: Vec<f64>,
}

impl<O: ValueOracle + ?Sized> StepObserver for BoundObserver<'_, O> {
    fn observe(&mut self, current: &ElementSet, value: f64) -> Result<()> {
        let d = delta_over_pool(
            self.oracle,
            self.instance.costs(),
            (0..self.instance.len()).filter(|&v| !current.contains(v)),
            current,
            self.instance.budget(),
            self.mode,
        )?;
        self.terms.push(value + d);
        Ok(())
    }
}

fn ratio_or_one(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else {
        1.0
    }
}

/// Greedy run instrumented with the per-prefix bound terms. `lazy` selects
/// the accelerated scan (identical trace on submodular oracles).
pub fn mgreedy_ub_with_mode<O: ValueOracle + ?Sized>(
    oracle: &O,
    instance: &Instance,
    lazy: bool,
    mode: DeltaMode,
) -> Result<(GreedyTrace, BoundReport)> {
    let calls_before = oracle.calls();
    let mut observer = BoundObserver {
        oracle,
        instance,
        mode,
        terms: Vec::new(),
    };
    let trace = run_greedy(oracle, instance, lazy, &mut observer)?;
    let terms = observer.terms;
    let lambda = terms.iter().copied().fold(f64::INFINITY, f64::min);
    let leskovec = *terms.last().expect("the empty-prefix term always exists");
    let f_sm = trace.chosen_value;
    let report = BoundReport {
        f_sm,
        lambda,
        leskovec,
        ratio_lambda: ratio_or_one(f_sm, lambda),
        ratio_leskovec: ratio_or_one(f_sm, leskovec),
        terms,
        oracle_calls: oracle.calls() - calls_before,
    };
    Ok((trace, report))
}

/// The greedy run of [`crate::greedy::mgreedy`] plus the upper bound: before
/// the loop and after every addition, `f(S_i) + delta(b|S_i)` is recorded and
/// `lambda` is their minimum.
pub fn mgreedy_ub<O: ValueOracle + ?Sized>(
    oracle: &O,
    instance: &Instance,
) -> Result<(GreedyTrace, BoundReport)> {
    mgreedy_ub_with_mode(oracle, instance, false, DeltaMode::Exact)
}

/// [`mgreedy_ub`] with the lazy scan; the preferred entry point on large
/// instances.
pub fn lazy_mgreedy_ub<O: ValueOracle + ?Sized>(
    oracle: &O,
    instance: &Instance,
) -> Result<(GreedyTrace, BoundReport)> {
    mgreedy_ub_with_mode(oracle, instance, true, DeltaMode::Exact)
}

/// True iff the report satisfies `f_sm >= alpha_prime * lambda - 1e-9`, the
/// guaranteed relation between the returned value and the upper bound.
pub fn guarantee_check(report: &BoundReport, alpha_prime: f64) -> bool {
    report.f_sm >= alpha_prime * report.lambda - 1e-9
}

/// Unit-cost specialization: plain greedy by marginal gain under a
/// cardinality budget `k`, with the bound
/// `lambda = min_i {f(S_i) + delta(k|S_i)}` where the fractional term
/// vanishes. Asserts `lambda <= f(S_g)/(1 - 1/e) + 1e-9` before returning.
pub fn cardinality_lambda<O: ValueOracle + ?Sized>(
    oracle: &O,
    instance: &Instance,
    k: usize,
) -> Result<(ElementSet, f64)> {
    for (id, &c) in instance.costs().iter().enumerate() {
        if c != 1.0 {
            return Err(Error::NonUnitCosts { id, cost: c });
        }
    }
    if k == 0 {
        return Err(Error::InvalidParameter(
            "cardinality budget k must be positive".into(),
        ));
    }
    let unit = Instance::unit(instance.len(), k as f64)?;
    let (trace, report) = mgreedy_ub_with_mode(oracle, &unit, true, DeltaMode::Exact)?;
    let one_minus_inv_e = 1.0 - (-1.0f64).exp();
    if report.lambda > trace.greedy_value / one_minus_inv_e + 1e-9 {
        return Err(Error::InequalityViolated {
            name: "cardinality_lambda_cap",
            slack: trace.greedy_value / one_minus_inv_e - report.lambda,
            context: format!("n = {}, k = {k}", instance.len()),
        });
    }
    Ok((trace.greedy_set, report.lambda))
}
