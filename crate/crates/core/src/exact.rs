//! Exact solvers: exhaustive enumeration for small instances and a
//! best-first branch-and-bound with pluggable bounding rules.
//!
//! The search explores lattices `[A, B]` (all sets `S` with `A ⊆ S ⊆ B`).
//! Bounding either runs the full greedy upper bound on the marginal
//! subproblem over `B \ A` (strategy `lambda`) or takes the single
//! fractional-knapsack term `f(A) + delta(b - c(A) | A)` (strategy `dca`,
//! always at least as loose). The frontier is ordered by bound, ties by node
//! id, so node counts are exactly reproducible.

use crate::bounds::{delta_restricted, lazy_mgreedy_ub};
use crate::error::{Error, Result};
use crate::instance::{Instance, FEASIBILITY_SLACK};
use crate::oracle::{RestrictedOracle, ValueOracle};
use crate::set::{ElementId, ElementSet};
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::{Duration, Instant};

/// Hard cap on exhaustive enumeration; `2^25` evaluations is already minutes.
pub const BRUTE_FORCE_CAP: usize = 25;

/// Exact maximum of `f` over all feasible subsets by exhaustive enumeration.
/// Ties are broken toward the lexicographically smallest set.
pub fn brute_force<O: ValueOracle + ?Sized>(
    oracle: &O,
    instance: &Instance,
) -> Result<(f64, ElementSet)> {
    let n = instance.len();
    if n > BRUTE_FORCE_CAP {
        return Err(Error::GroundSetTooLarge {
            n,
            cap: BRUTE_FORCE_CAP,
        });
    }
    let mut best_value = 0.0;
    let mut best_set = ElementSet::empty(n);
    for mask in 0u64..(1u64 << n) {
        let mut cost = 0.0;
        let mut bits = mask;
        while bits != 0 {
            cost += instance.element_cost(bits.trailing_zeros() as usize);
            bits &= bits - 1;
        }
        if !instance.fits(cost) {
            continue;
        }
        let set = ElementSet::from_mask(n, mask);
        let value = oracle.value(&set);
        if value > best_value || (value == best_value && set.lex_cmp(&best_set) == Ordering::Less) {
            best_value = value;
            best_set = set;
        }
    }
    Ok((best_value, best_set))
}

/// Bounding rule used by the search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundStrategy {
    /// Greedy upper bound of the marginal subproblem over `B \ A`.
    Lambda,
    /// The single term `f(A) + delta(b - c(A) | A)` over `B \ A`.
    Dca,
}

impl BoundStrategy {
    pub fn name(&self) -> &'static str {
        match self {
            BoundStrategy::Lambda => "lambda",
            BoundStrategy::Dca => "dca",
        }
    }
}

impl std::str::FromStr for BoundStrategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lambda" => Ok(BoundStrategy::Lambda),
            "dca" => Ok(BoundStrategy::Dca),
            other => Err(Error::InvalidParameter(format!(
                "unknown strategy `{other}` (expected lambda or dca)"
            ))),
        }
    }
}

/// One lattice `[A, B]` of the search.
#[derive(Clone, Debug)]
pub struct SearchNode {
    /// Committed-in set `A`.
    pub committed: ElementSet,
    /// Candidate superset `B` (`A ⊆ B`).
    pub candidates: ElementSet,
    /// `f(A)`.
    pub committed_value: f64,
    /// `c(A)`.
    pub committed_cost: f64,
}

impl SearchNode {
    pub fn root<O: ValueOracle + ?Sized>(oracle: &O, instance: &Instance) -> SearchNode {
        let n = instance.len();
        SearchNode {
            committed: ElementSet::empty(n),
            candidates: ElementSet::full(n),
            committed_value: 0.0,
            committed_cost: 0.0,
        }
        .assert_valid(oracle)
    }

    pub fn new<O: ValueOracle + ?Sized>(
        oracle: &O,
        instance: &Instance,
        committed: ElementSet,
        candidates: ElementSet,
    ) -> SearchNode {
        let committed_value = oracle.value(&committed);
        let committed_cost = instance.cost_of_set(&committed);
        SearchNode {
            committed,
            candidates,
            committed_value,
            committed_cost,
        }
        .assert_valid(oracle)
    }

    fn assert_valid<O: ValueOracle + ?Sized>(self, _oracle: &O) -> SearchNode {
        debug_assert!(self.committed.is_subset_of(&self.candidates));
        self
    }

    pub fn residual_budget(&self, instance: &Instance) -> f64 {
        instance.budget() - self.committed_cost
    }

    /// Free candidates `B \ A` in id order.
    pub fn free(&self) -> Vec<ElementId> {
        self.candidates
            .iter()
            .filter(|&v| !self.committed.contains(v))
            .collect()
    }
}

fn check_residual(node: &SearchNode, instance: &Instance) -> Result<f64> {
    let residual = node.residual_budget(instance);
    if residual < -FEASIBILITY_SLACK {
        return Err(Error::InfeasibleNode { residual });
    }
    Ok(residual.max(0.0))
}

/// Upper bound on the node optimum via the greedy bound of the marginal
/// subproblem `g(T) = f(T ∪ A) − f(A)` over `B \ A` with the residual budget.
pub fn lambda_bound<O: ValueOracle + ?Sized>(
    oracle: &O,
    instance: &Instance,
    node: &SearchNode,
) -> Result<f64> {
    let residual = check_residual(node, instance)?;
    // Candidates that no longer fit cannot join any feasible completion.
    let members: Vec<ElementId> = node
        .free()
        .into_iter()
        .filter(|&v| instance.element_cost(v) <= residual + FEASIBILITY_SLACK)
        .collect();
    if members.is_empty() || residual <= 0.0 {
        return Ok(node.committed_value);
    }
    let costs: Vec<f64> = members.iter().map(|&v| instance.element_cost(v)).collect();
    let sub_instance = Instance::new(costs, residual)?;
    let sub_oracle = RestrictedOracle::anchored(
        oracle,
        members,
        node.committed.clone(),
        node.committed_value,
    );
    let (_, report) = lazy_mgreedy_ub(&sub_oracle, &sub_instance)?;
    Ok(node.committed_value + report.lambda)
}

/// Upper bound on the node optimum via the single fractional-knapsack term
/// `f(A) + delta(b - c(A) | A)` over `B \ A`.
pub fn dca_bound<O: ValueOracle + ?Sized>(
    oracle: &O,
    instance: &Instance,
    node: &SearchNode,
) -> Result<f64> {
    let residual = check_residual(node, instance)?;
    let free = node.free();
    if free.is_empty() || residual <= 0.0 {
        return Ok(node.committed_value);
    }
    let d = delta_restricted(oracle, instance, &node.committed, &free, residual)?;
    Ok(node.committed_value + d)
}

/// Search configuration. `node_cap` bounds the number of expanded nodes
/// (a capped run returns the incumbent with `capped` set); `audit_bounds`
/// additionally evaluates the other strategy's bound on every expanded node
/// and records the worst gap, for soundness comparisons.
#[derive(Clone, Debug)]
pub struct BnbConfig {
    pub strategy: BoundStrategy,
    pub node_cap: u64,
    pub audit_bounds: bool,
    /// Start from this incumbent instead of the greedy one (value, set).
    pub incumbent_hint: Option<(f64, ElementSet)>,
}

impl BnbConfig {
    pub fn new(strategy: BoundStrategy) -> Self {
        BnbConfig {
            strategy,
            node_cap: 10_000_000,
            audit_bounds: false,
            incumbent_hint: None,
        }
    }
}

/// Outcome of a branch-and-bound run.
#[derive(Clone, Debug)]
pub struct BnbStats {
    pub optimum: f64,
    pub optimum_set: ElementSet,
    /// Nodes popped from the frontier.
    pub nodes_expanded: u64,
    /// Nodes discarded by the bound test (at push or at the final cut).
    pub nodes_pruned: u64,
    /// Incumbent improvements after the greedy initialization.
    pub incumbent_updates: u64,
    pub wall: Duration,
    pub strategy: BoundStrategy,
    /// True when the node cap stopped the search; the result is best-effort.
    pub capped: bool,
    /// With `audit_bounds`: minimum of `dca_bound - lambda_bound` over
    /// expanded nodes.
    pub min_bound_gap: Option<f64>,
}

impl BnbStats {
    pub const CSV_HEADER: &'static str =
        "instance_id,budget,strategy,optimum,nodes_expanded,nodes_pruned,time_ms,capped_flag";

    pub fn csv_row(&self, instance_id: &str, budget: f64, time_ms: f64) -> String {
        format!(
            "{instance_id},{budget},{},{},{},{},{time_ms},{}",
            self.strategy.name(),
            self.optimum,
            self.nodes_expanded,
            self.nodes_pruned,
            if self.capped { 1 } else { 0 }
        )
    }
}

struct FrontierEntry {
    bound: f64,
    id: u64,
    node: SearchNode,
}

impl PartialEq for FrontierEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for FrontierEntry {}
impl PartialOrd for FrontierEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for FrontierEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // Max bound first; for equal bounds the earlier node id wins.
        self.bound
            .total_cmp(&other.bound)
            .then_with(|| other.id.cmp(&self.id))
    }
}

/// Best-first branch-and-bound, exact up to the node cap.
///
/// The incumbent starts from the greedy-with-bound run. At each expansion the
/// free candidates that exceed the residual budget are dropped, the best
/// gain-per-cost candidate is branched on, and both children are bounded and
/// pushed unless their bound cannot beat the incumbent.
pub fn branch_and_bound<O: ValueOracle + ?Sized>(
    oracle: &O,
    instance: &Instance,
    config: &BnbConfig,
) -> Result<BnbStats> {
    let start = Instant::now();
    let bound_of = |node: &SearchNode| -> Result<f64> {
        match config.strategy {
            BoundStrategy::Lambda => lambda_bound(oracle, instance, node),
            BoundStrategy::Dca => dca_bound(oracle, instance, node),
        }
    };

    let (mut incumbent_value, mut incumbent_set) = match &config.incumbent_hint {
        Some((v, s)) => (*v, s.clone()),
        None => {
            let (trace, _) = lazy_mgreedy_ub(oracle, instance)?;
            (trace.chosen_value, trace.chosen_set)
        }
    };

    let mut stats = BnbStats {
        optimum: incumbent_value,
        optimum_set: incumbent_set.clone(),
        nodes_expanded: 0,
        nodes_pruned: 0,
        incumbent_updates: 0,
        wall: Duration::default(),
        strategy: config.strategy,
        capped: false,
        min_bound_gap: None,
    };

    let root = SearchNode::root(oracle, instance);
    let root_bound = bound_of(&root)?;
    let mut next_id = 0u64;
    let mut frontier = BinaryHeap::new();
    frontier.push(FrontierEntry {
        bound: root_bound,
        id: next_id,
        node: root,
    });

    while let Some(entry) = frontier.pop() {
        stats.nodes_expanded += 1;
        if config.audit_bounds {
            let gap = dca_bound(oracle, instance, &entry.node)?
                - lambda_bound(oracle, instance, &entry.node)?;
            stats.min_bound_gap = Some(stats.min_bound_gap.map_or(gap, |g: f64| g.min(gap)));
        }
        if entry.bound <= incumbent_value + 1e-9 {
            // Best-first order: nothing left can beat the incumbent.
            stats.nodes_pruned += 1 + frontier.len() as u64;
            break;
        }
        if stats.nodes_expanded > config.node_cap {
            stats.capped = true;
            break;
        }

        let node = entry.node;
        let residual = check_residual(&node, instance)?;
        // Drop free candidates that no longer fit the residual budget.
        let mut candidates = node.committed.clone();
        let mut free: Vec<ElementId> = Vec::new();
        for v in node.candidates.iter() {
            if node.committed.contains(v) {
                continue;
            }
            if instance.element_cost(v) <= residual + FEASIBILITY_SLACK {
                candidates.insert(v);
                free.push(v);
            }
        }

        if free.is_empty() {
            // Leaf: the lattice collapsed to A itself.
            if node.committed_value > incumbent_value {
                incumbent_value = node.committed_value;
                incumbent_set = node.committed.clone();
                stats.incumbent_updates += 1;
            }
            continue;
        }

        // Branch on the best gain-per-cost free candidate (ties: lower id).
        let mut branch = free[0];
        let mut branch_key = (
            oracle.marginal(free[0], &node.committed).max(0.0),
            instance.element_cost(free[0]),
        );
        let mut branch_ratio = branch_key.0 / branch_key.1;
        for &v in &free[1..] {
            let gain = oracle.marginal(v, &node.committed).max(0.0);
            let cost = instance.element_cost(v);
            if gain / cost > branch_ratio {
                branch = v;
                branch_key = (gain, cost);
                branch_ratio = gain / cost;
            }
        }

        // Child with the branch element committed.
        let mut with_committed = node.committed.clone();
        with_committed.insert(branch);
        let child_in_value = oracle.value(&with_committed);
        let child_in = SearchNode {
            committed_value: child_in_value,
            committed_cost: node.committed_cost + branch_key.1,
            committed: with_committed,
            candidates: candidates.clone(),
        };
        // The committed set itself is feasible: refresh the incumbent.
        if child_in_value > incumbent_value {
            incumbent_value = child_in_value;
            incumbent_set = child_in.committed.clone();
            stats.incumbent_updates += 1;
        }

        // Child with the branch element excluded.
        let mut without_candidates = candidates.clone();
        without_candidates.remove(branch);
        let child_out = SearchNode {
            committed: node.committed.clone(),
            candidates: without_candidates,
            committed_value: node.committed_value,
            committed_cost: node.committed_cost,
        };

        for child in [child_in, child_out] {
            let bound = bound_of(&child)?;
            if bound > incumbent_value + 1e-9 {
                next_id += 1;
                frontier.push(FrontierEntry {
                    bound,
                    id: next_id,
                    node: child,
                });
            } else {
                stats.nodes_pruned += 1;
            }
        }
    }

    stats.optimum = incumbent_value;
    stats.optimum_set = incumbent_set;
    stats.wall = start.elapsed();
    Ok(stats)
}
