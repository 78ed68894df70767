//! Cost-effectiveness greedy with the best-singleton safeguard, recording a
//! full run trace, plus a lazy-evaluation accelerator.
//!
//! The loop repeatedly takes the element maximizing `f(v|S)/c(v)` among the
//! not-yet-considered elements, adds it when the budget permits and abandons
//! it otherwise, until every element has been considered. The returned
//! solution is the better of the accumulated set and the best singleton.
//!
//! Each candidate's selection key is its precomputed gain-per-cost quotient,
//! with ties broken toward the lowest element id, so runs are exactly
//! reproducible and the ordering is a genuine total order. The lazy variant reuses stale ratios as upper bounds (valid
//! under submodularity) and produces a bit-identical trace with fewer oracle
//! calls; if it ever observes a stale ratio increase it flags the oracle as
//! non-submodular and falls back to exact rescans.

use crate::error::{Error, Result};
use crate::instance::{Instance, FEASIBILITY_SLACK};
use crate::oracle::ValueOracle;
use crate::set::{ElementId, ElementSet};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Marginals this far below zero are float noise and are clipped; anything
/// lower is a genuine monotonicity violation.
const MONOTONE_TOLERANCE: f64 = 1e-9;

/// One successful addition: the element, its gain at selection time, and the
/// set value/cost right after the addition.
#[derive(Clone, Debug, PartialEq)]
pub struct GreedyStep {
    pub element: ElementId,
    /// `f(u | S)` measured when the element was selected.
    pub gain: f64,
    /// `f(S_i)` after this addition.
    pub value: f64,
    /// `c(S_i)` after this addition.
    pub cost: f64,
}

/// An element rejected for budget violation, and how many elements had been
/// added when it was considered.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rejection {
    pub element: ElementId,
    /// `|S|` at the moment of rejection; the prefix it was rejected on top of.
    pub step: usize,
}

/// Which of the two candidate solutions the run returned.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Chosen {
    GreedySet,
    BestSingleton,
}

/// Full history of one greedy run.
#[derive(Clone, Debug, PartialEq)]
pub struct GreedyTrace {
    pub n: usize,
    pub budget: f64,
    /// Elements added, in order, with per-step values and cumulative costs.
    pub steps: Vec<GreedyStep>,
    /// Elements abandoned for budget violation, in rejection order.
    pub abandoned: Vec<Rejection>,
    /// `f({v})` for every element, recorded from the scan at the empty set.
    pub singleton_values: Vec<f64>,
    /// Best singleton `v*` and its value (`None` only on an empty ground set).
    pub best_singleton: Option<(ElementId, f64)>,
    /// The accumulated greedy set and its value/cost.
    pub greedy_set: ElementSet,
    pub greedy_value: f64,
    pub greedy_cost: f64,
    /// Which candidate won, its members, and its value.
    pub chosen: Chosen,
    pub chosen_set: ElementSet,
    pub chosen_value: f64,
    /// Set when the lazy accelerator detected a stale-ratio increase and fell
    /// back to exact rescans (the oracle is not submodular).
    pub lazy_fallback: bool,
}

impl GreedyTrace {
    /// `f(S_i)` for `i = 0..=k` (prefix values, starting at 0).
    pub fn prefix_value(&self, i: usize) -> f64 {
        if i == 0 {
            0.0
        } else {
            self.steps[i - 1].value
        }
    }

    /// `c(S_i)` for `i = 0..=k`.
    pub fn prefix_cost(&self, i: usize) -> f64 {
        if i == 0 {
            0.0
        } else {
            self.steps[i - 1].cost
        }
    }

    /// Members of the prefix `S_i`.
    pub fn prefix_set(&self, i: usize) -> ElementSet {
        ElementSet::from_ids(self.n, self.steps[..i].iter().map(|s| s.element))
    }

    /// Elements abandoned before the `(i+1)`-th addition was selected, i.e.
    /// every rejection that happened on top of a prefix shorter than `i + 1`.
    pub fn abandoned_before(&self, i: usize) -> ElementSet {
        ElementSet::from_ids(
            self.n,
            self.abandoned
                .iter()
                .filter(|r| r.step <= i)
                .map(|r| r.element),
        )
    }

    /// The piecewise-linear interpolation of prefix values along cost.
    pub fn extension(&self) -> ContinuousExtension<'_> {
        ContinuousExtension { trace: self }
    }

    /// Line-oriented text dump consumed by the verification tooling.
    pub fn to_text(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        let _ = writeln!(out, "n {} budget {}", self.n, self.budget);
        for (i, s) in self.steps.iter().enumerate() {
            let _ = writeln!(
                out,
                "add {} element {} gain {} value {} cost {}",
                i + 1,
                s.element,
                s.gain,
                s.value,
                s.cost
            );
        }
        for r in &self.abandoned {
            let _ = writeln!(out, "abandon element {} at {}", r.element, r.step);
        }
        if let Some((v, fv)) = self.best_singleton {
            let _ = writeln!(out, "singleton element {v} value {fv}");
        }
        let kind = match self.chosen {
            Chosen::GreedySet => "greedy",
            Chosen::BestSingleton => "singleton",
        };
        let _ = writeln!(out, "chosen {kind} value {}", self.chosen_value);
        out
    }
}

/// Piecewise-linear continuous extension of the greedy prefix values.
///
/// On the segment `c(S_j) < x <= c(S_{j+1})` the value interpolates between
/// `f(S_j)` and `f(S_{j+1})` linearly in cost, with `F(0) = 0`; it is
/// nondecreasing and concave on `[0, c(S_g)]`.
pub struct ContinuousExtension<'a> {
    trace: &'a GreedyTrace,
}

impl ContinuousExtension<'_> {
    /// `F(x)`; errors if `x` lies outside `[0, c(S_g)]`.
    pub fn value(&self, x: f64) -> Result<f64> {
        let hi = self.trace.greedy_cost;
        if !(0.0..=hi + FEASIBILITY_SLACK).contains(&x) {
            return Err(Error::Domain {
                what: "extension argument",
                value: x,
                lo: 0.0,
                hi,
            });
        }
        if x == 0.0 {
            return Ok(0.0);
        }
        // Locate j with c(S_j) < x <= c(S_{j+1}).
        let mut j = 0;
        while self.trace.prefix_cost(j + 1) < x && j + 1 < self.trace.steps.len() {
            j += 1;
        }
        let (lo_c, lo_v) = (self.trace.prefix_cost(j), self.trace.prefix_value(j));
        let step = &self.trace.steps[j];
        if x >= step.cost {
            // x == c(S_{j+1}) up to feasibility slack: return the exact knot.
            return Ok(step.value);
        }
        let segment_gain = step.value - lo_v;
        let element_cost = step.cost - lo_c;
        Ok(lo_v + segment_gain * (x - lo_c) / element_cost)
    }
}

/// Selection key: the precomputed quotient `gain / cost` with the element id
/// as tie-breaker (lower id first). Greater means "picked first". Comparing
/// precomputed keys keeps the order total, which pairwise cross-multiplied
/// comparisons cannot guarantee under rounding.
#[derive(Clone, Copy, Debug)]
struct RatioKey {
    gain: f64,
    cost: f64,
    ratio: f64,
    id: ElementId,
}

impl RatioKey {
    fn new(gain: f64, cost: f64, id: ElementId) -> RatioKey {
        RatioKey {
            gain,
            cost,
            ratio: gain / cost,
            id,
        }
    }

    fn cmp_ratio(&self, other: &RatioKey) -> Ordering {
        self.ratio
            .total_cmp(&other.ratio)
            .then_with(|| other.id.cmp(&self.id))
    }
}

impl PartialEq for RatioKey {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_ratio(other) == Ordering::Equal
    }
}
impl Eq for RatioKey {}
impl PartialOrd for RatioKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for RatioKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_ratio(other)
    }
}

/// Heap entry for the lazy path: a ratio key plus the prefix length it was
/// computed at.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct LazyEntry {
    key: RatioKey,
    stamp: usize,
}

impl PartialOrd for LazyEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for LazyEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key.cmp(&other.key)
    }
}

/// Hook invoked before the loop and after every successful addition; used by
/// the bound computation layered on top of this engine.
pub(crate) trait StepObserver {
    fn observe(&mut self, current: &ElementSet, value: f64) -> Result<()>;
}

pub(crate) struct NoObserver;
impl StepObserver for NoObserver {
    fn observe(&mut self, _: &ElementSet, _: f64) -> Result<()> {
        Ok(())
    }
}

fn checked_marginal<O: ValueOracle + ?Sized>(
    oracle: &O,
    v: ElementId,
    set: &ElementSet,
) -> Result<f64> {
    let m = oracle.marginal(v, set);
    if m < -MONOTONE_TOLERANCE {
        Err(Error::NonMonotoneOracle {
            element: v,
            marginal: m,
        })
    } else {
        Ok(m.max(0.0))
    }
}

pub(crate) fn run_greedy<O: ValueOracle + ?Sized, Obs: StepObserver>(
    oracle: &O,
    instance: &Instance,
    lazy: bool,
    observer: &mut Obs,
) -> Result<GreedyTrace> {
    let n = instance.len();
    debug_assert_eq!(n, oracle.ground_size());
    let mut current = ElementSet::empty(n);
    let mut steps: Vec<GreedyStep> = Vec::new();
    let mut abandoned: Vec<Rejection> = Vec::new();
    let mut singleton_values = vec![0.0; n];
    let mut cost = 0.0;
    let mut value = 0.0;
    let mut lazy_fallback = false;

    observer.observe(&current, value)?;

    // Scan at the empty set: records every f({v}) for the best-singleton
    // pass and, on the lazy path, seeds the heap.
    let mut heap: BinaryHeap<LazyEntry> = BinaryHeap::new();
    let mut remaining: Vec<bool> = vec![true; n];
    let mut remaining_count = n;
    for (v, slot) in singleton_values.iter_mut().enumerate() {
        let gain = checked_marginal(oracle, v, &current)?;
        *slot = gain;
        if lazy {
            heap.push(LazyEntry {
                key: RatioKey::new(gain, instance.element_cost(v), v),
                stamp: 0,
            });
        }
    }

    while remaining_count > 0 {
        let pick = if lazy && !lazy_fallback {
            loop {
                let top = heap.pop().expect("heap tracks remaining elements");
                if top.stamp == steps.len() {
                    break top.key;
                }
                let fresh = checked_marginal(oracle, top.key.id, &current)?;
                if fresh > top.key.gain + MONOTONE_TOLERANCE {
                    // Stale ratios must upper-bound fresh ones; this oracle
                    // is not submodular, so stop trusting the heap.
                    lazy_fallback = true;
                    heap.push(LazyEntry {
                        key: RatioKey::new(fresh, top.key.cost, top.key.id),
                        stamp: steps.len(),
                    });
                    break rescan_argmax(oracle, instance, &remaining, &current)?;
                }
                heap.push(LazyEntry {
                    key: RatioKey::new(fresh, top.key.cost, top.key.id),
                    stamp: steps.len(),
                });
            }
        } else {
            // Exact path, and the lazy path after a fallback: a fresh scan
            // of everything still unconsidered.
            rescan_argmax(oracle, instance, &remaining, &current)?
        };

        let u = pick.id;
        debug_assert!(remaining[u]);
        remaining[u] = false;
        remaining_count -= 1;

        if cost + instance.element_cost(u) <= instance.budget() + FEASIBILITY_SLACK {
            current.insert(u);
            cost += instance.element_cost(u);
            value = oracle.value(&current);
            steps.push(GreedyStep {
                element: u,
                gain: pick.gain,
                value,
                cost,
            });
            observer.observe(&current, value)?;
        } else {
            abandoned.push(Rejection {
                element: u,
                step: steps.len(),
            });
        }
    }

    // Best singleton over the whole ground set, abandoned elements included.
    let best_singleton = singleton_values
        .iter()
        .enumerate()
        .max_by(|(i, a), (j, b)| a.partial_cmp(b).unwrap().then_with(|| j.cmp(i)))
        .map(|(i, &v)| (i, v));

    let greedy_value = value;
    let (chosen, chosen_set, chosen_value) = match best_singleton {
        Some((v, fv)) if fv > greedy_value => {
            (Chosen::BestSingleton, ElementSet::from_ids(n, [v]), fv)
        }
        _ => (Chosen::GreedySet, current.clone(), greedy_value),
    };

    Ok(GreedyTrace {
        n,
        budget: instance.budget(),
        steps,
        abandoned,
        singleton_values,
        best_singleton,
        greedy_set: current,
        greedy_value,
        greedy_cost: cost,
        chosen,
        chosen_set,
        chosen_value,
        lazy_fallback,
    })
}

fn rescan_argmax<O: ValueOracle + ?Sized>(
    oracle: &O,
    instance: &Instance,
    remaining: &[bool],
    current: &ElementSet,
) -> Result<RatioKey> {
    let mut best: Option<RatioKey> = None;
    for (v, &live) in remaining.iter().enumerate() {
        if !live {
            continue;
        }
        let key = RatioKey::new(
            checked_marginal(oracle, v, current)?,
            instance.element_cost(v),
            v,
        );
        best = match best {
            Some(b) if b >= key => Some(b),
            _ => Some(key),
        };
    }
    Ok(best.expect("called with at least one remaining element"))
}

/// Run the greedy loop with the best-singleton safeguard on a filtered
/// instance (every cost at most the budget), returning the full trace.
pub fn mgreedy<O: ValueOracle + ?Sized>(oracle: &O, instance: &Instance) -> Result<GreedyTrace> {
    run_greedy(oracle, instance, false, &mut NoObserver)
}

/// Lazy-evaluation variant of [`mgreedy`]: identical trace on submodular
/// oracles with no more oracle calls. A detected stale-ratio increase flags
/// [`GreedyTrace::lazy_fallback`] and switches to exact rescans.
pub fn lazy_mgreedy<O: ValueOracle + ?Sized>(
    oracle: &O,
    instance: &Instance,
) -> Result<GreedyTrace> {
    run_greedy(oracle, instance, true, &mut NoObserver)
}

/// `F(x)` for a recorded trace; see [`ContinuousExtension`].
pub fn eval_extension(trace: &GreedyTrace, x: f64) -> Result<f64> {
    trace.extension().value(x)
}
