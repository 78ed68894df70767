//! Problem instances: a ground set with positive per-element costs and a budget.
//!
//! An [`Instance`] is the feasibility universe shared by all solvers: a set
//! `S` is feasible iff `c(S) = Σ_{v∈S} c(v) <= b`. Costs are strictly
//! positive and, after [`Instance::filter_overweight`], every retained
//! element fits the budget on its own.

use crate::error::{Error, Result};
use crate::set::{ElementId, ElementSet};
use std::io::{BufRead, Write};
use std::path::Path;

/// Absolute slack used in budget comparisons, absorbing float accumulation.
pub const FEASIBILITY_SLACK: f64 = 1e-12;

/// Ground set with per-element costs and a budget.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    costs: Vec<f64>,
    budget: f64,
}

impl Instance {
    /// Build an instance from strictly positive costs and a positive budget.
    pub fn new(costs: Vec<f64>, budget: f64) -> Result<Self> {
        if budget.is_nan() || budget <= 0.0 {
            return Err(Error::NonPositiveBudget { budget });
        }
        for (id, &c) in costs.iter().enumerate() {
            if c.is_nan() || c <= 0.0 || !c.is_finite() {
                return Err(Error::NonPositiveCost { id, cost: c });
            }
        }
        Ok(Instance { costs, budget })
    }

    /// Unit costs over `n` elements.
    pub fn unit(n: usize, budget: f64) -> Result<Self> {
        Self::new(vec![1.0; n], budget)
    }

    pub fn len(&self) -> usize {
        self.costs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.costs.is_empty()
    }

    pub fn budget(&self) -> f64 {
        self.budget
    }

    /// Same ground set under a different (positive) budget.
    pub fn with_budget(&self, budget: f64) -> Result<Self> {
        Self::new(self.costs.clone(), budget)
    }

    pub fn element_cost(&self, id: ElementId) -> f64 {
        self.costs[id]
    }

    pub fn costs(&self) -> &[f64] {
        &self.costs
    }

    pub fn total_cost(&self) -> f64 {
        self.costs.iter().sum()
    }

    pub fn has_unit_costs(&self) -> bool {
        self.costs.iter().all(|&c| c == 1.0)
    }

    /// `c(S)` for a set given as raw ids; rejects ids outside `[0, n)`.
    pub fn cost_of_ids(&self, ids: &[ElementId]) -> Result<f64> {
        let mut total = 0.0;
        for &id in ids {
            if id >= self.costs.len() {
                return Err(Error::MalformedSolution {
                    id,
                    n: self.costs.len(),
                });
            }
            total += self.costs[id];
        }
        Ok(total)
    }

    /// `c(S)` for a bitset over this instance's universe.
    pub fn cost_of_set(&self, set: &ElementSet) -> f64 {
        set.iter().map(|id| self.costs[id]).sum()
    }

    /// True iff `cost <= b` up to [`FEASIBILITY_SLACK`].
    pub fn fits(&self, cost: f64) -> bool {
        cost <= self.budget + FEASIBILITY_SLACK
    }

    /// True iff `c(S) <= b` up to [`FEASIBILITY_SLACK`].
    pub fn is_feasible_ids(&self, ids: &[ElementId]) -> Result<bool> {
        Ok(self.fits(self.cost_of_ids(ids)?))
    }

    pub fn is_feasible(&self, set: &ElementSet) -> bool {
        self.fits(self.cost_of_set(set))
    }

    /// Drop every element whose cost exceeds the budget (such elements belong
    /// to no feasible solution); ids are re-densified. Returns the filtered
    /// instance together with the old-to-new id mapping.
    pub fn filter_overweight(&self) -> Result<(Instance, IdMap)> {
        let mut kept = Vec::new();
        let mut costs = Vec::new();
        for (id, &c) in self.costs.iter().enumerate() {
            if self.fits(c) {
                kept.push(id);
                costs.push(c);
            }
        }
        if kept.is_empty() {
            return Err(Error::EmptyInstance);
        }
        let mut old_to_new = vec![None; self.costs.len()];
        for (new, &old) in kept.iter().enumerate() {
            old_to_new[old] = Some(new);
        }
        Ok((
            Instance {
                costs,
                budget: self.budget,
            },
            IdMap {
                old_to_new,
                new_to_old: kept,
            },
        ))
    }

    /// Read a cost file: one `<id> <cost>` pair per line, `#` comments
    /// allowed, ids dense in `[0, n)` in any order.
    pub fn read_costs<P: AsRef<Path>>(path: P, budget: f64) -> Result<Self> {
        Instance::new(read_dense_values(path.as_ref())?, budget)
    }

    /// Write the cost file format accepted by [`Instance::read_costs`].
    pub fn write_costs<W: Write>(&self, mut out: W) -> Result<()> {
        for (id, c) in self.costs.iter().enumerate() {
            writeln!(out, "{id} {c}")?;
        }
        Ok(())
    }
}

/// Parse a file of `<id> <value>` lines (`#` comments allowed) whose ids are
/// a permutation of `[0, n)`, returning the values in id order. This is the
/// shared shape of cost and weight files.
pub fn read_dense_values(path: &Path) -> Result<Vec<f64>> {
    let file = std::fs::File::open(path)?;
    let mut pairs: Vec<(usize, usize, f64)> = Vec::new();
    for (idx, line) in std::io::BufReader::new(file).lines().enumerate() {
        let line = line?;
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse {
            path: path.display().to_string(),
            line: idx + 1,
            message,
        };
        let mut it = body.split_whitespace();
        let id: usize = it
            .next()
            .ok_or_else(|| err("missing id".into()))?
            .parse()
            .map_err(|e| err(format!("bad id: {e}")))?;
        let value: f64 = it
            .next()
            .ok_or_else(|| err("missing value".into()))?
            .parse()
            .map_err(|e| err(format!("bad value: {e}")))?;
        pairs.push((idx + 1, id, value));
    }
    let n = pairs.len();
    let mut values = vec![f64::NAN; n];
    for (line, id, value) in pairs {
        if id >= n || !values[id].is_nan() {
            return Err(Error::Parse {
                path: path.display().to_string(),
                line,
                message: format!("id {id} duplicated or outside dense range [0, {n})"),
            });
        }
        values[id] = value;
    }
    Ok(values)
}

/// Mapping produced by [`Instance::filter_overweight`].
#[derive(Clone, Debug)]
pub struct IdMap {
    old_to_new: Vec<Option<ElementId>>,
    new_to_old: Vec<ElementId>,
}

impl IdMap {
    pub fn identity(n: usize) -> Self {
        IdMap {
            old_to_new: (0..n).map(Some).collect(),
            new_to_old: (0..n).collect(),
        }
    }

    pub fn to_new(&self, old: ElementId) -> Option<ElementId> {
        self.old_to_new[old]
    }

    pub fn to_old(&self, new: ElementId) -> ElementId {
        self.new_to_old[new]
    }

    pub fn new_to_old(&self) -> &[ElementId] {
        &self.new_to_old
    }

    pub fn is_identity(&self) -> bool {
        self.new_to_old.iter().enumerate().all(|(n, &o)| n == o)
    }
}

/// A duplicate-free solution set with its total cost cached.
///
/// The cached cost tracks `Σ_{v∈S} c(v)` to within 1e-9 relative tolerance;
/// it is maintained incrementally so membership updates stay O(1).
#[derive(Clone, Debug, PartialEq)]
pub struct SolutionSet {
    members: ElementSet,
    total_cost: f64,
}

impl SolutionSet {
    pub fn empty(instance: &Instance) -> Self {
        SolutionSet {
            members: ElementSet::empty(instance.len()),
            total_cost: 0.0,
        }
    }

    pub fn from_ids(instance: &Instance, ids: &[ElementId]) -> Result<Self> {
        let mut s = Self::empty(instance);
        for &id in ids {
            if id >= instance.len() {
                return Err(Error::MalformedSolution {
                    id,
                    n: instance.len(),
                });
            }
            s.insert(id, instance);
        }
        Ok(s)
    }

    /// Insert an element, updating the cached cost. Returns false if already present.
    pub fn insert(&mut self, id: ElementId, instance: &Instance) -> bool {
        let fresh = self.members.insert(id);
        if fresh {
            self.total_cost += instance.element_cost(id);
        }
        fresh
    }

    pub fn contains(&self, id: ElementId) -> bool {
        self.members.contains(id)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn cost(&self) -> f64 {
        self.total_cost
    }

    pub fn members(&self) -> &ElementSet {
        &self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = ElementId> + '_ {
        self.members.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cost_of_empty_set_is_zero() {
        let inst = Instance::new(vec![1.0, 0.25], 1.0).unwrap();
        assert_eq!(inst.cost_of_ids(&[]).unwrap(), 0.0);
    }

    #[test]
    fn cost_of_two_element_set() {
        // costs {1, ε} with ε = 0.25
        let inst = Instance::new(vec![1.0, 0.25], 1.0).unwrap();
        assert!((inst.cost_of_ids(&[0, 1]).unwrap() - 1.25).abs() < 1e-12);
    }

    #[test]
    fn cost_of_overweight_singleton() {
        // c(w) = 1 + ε with ε = 0.1
        let inst = Instance::new(vec![1.0, 1.0, 1.1], 2.0).unwrap();
        assert!((inst.cost_of_ids(&[2]).unwrap() - 1.1).abs() < 1e-12);
    }

    #[test]
    fn cost_rejects_out_of_range_id() {
        let inst = Instance::new(vec![1.0], 1.0).unwrap();
        assert!(matches!(
            inst.cost_of_ids(&[3]),
            Err(Error::MalformedSolution { id: 3, n: 1 })
        ));
    }

    #[test]
    fn feasibility_boundary() {
        let inst = Instance::new(vec![1.0, 1.0, 1.1], 2.0).unwrap();
        assert!(inst.is_feasible_ids(&[0, 1]).unwrap()); // cost 2 = b
        assert!(!inst.is_feasible_ids(&[2, 0]).unwrap()); // 2.1 > 2
        assert!(inst.is_feasible_ids(&[]).unwrap());
    }

    #[test]
    fn filter_drops_only_overweight() {
        let inst = Instance::new(vec![0.5, 3.0], 2.0).unwrap();
        let (filtered, map) = inst.filter_overweight().unwrap();
        assert_eq!(filtered.len(), 1);
        assert_eq!(filtered.element_cost(0), 0.5);
        assert_eq!(map.to_new(0), Some(0));
        assert_eq!(map.to_new(1), None);
        assert_eq!(map.to_old(0), 0);
    }

    #[test]
    fn filter_is_identity_when_all_fit() {
        let inst = Instance::new(vec![0.5, 1.0], 2.0).unwrap();
        let (filtered, map) = inst.filter_overweight().unwrap();
        assert_eq!(filtered.len(), 2);
        assert!(map.is_identity());
    }

    #[test]
    fn filter_keeps_boundary_cost() {
        // c(v) = b is feasible as a singleton, so it is retained.
        let inst = Instance::new(vec![2.0], 2.0).unwrap();
        let (filtered, _) = inst.filter_overweight().unwrap();
        assert_eq!(filtered.len(), 1);
    }

    #[test]
    fn filter_errors_on_empty_result() {
        let inst = Instance::new(vec![5.0, 7.0], 2.0).unwrap();
        assert!(matches!(
            inst.filter_overweight(),
            Err(Error::EmptyInstance)
        ));
    }

    #[test]
    fn rejects_bad_costs_and_budget() {
        assert!(Instance::new(vec![0.0], 1.0).is_err());
        assert!(Instance::new(vec![-1.0], 1.0).is_err());
        assert!(Instance::new(vec![1.0], 0.0).is_err());
    }

    #[test]
    fn solution_set_cached_cost_tracks_sum() {
        let inst = Instance::new(vec![0.3, 0.7, 1.1], 5.0).unwrap();
        let mut s = SolutionSet::empty(&inst);
        s.insert(0, &inst);
        s.insert(2, &inst);
        s.insert(0, &inst); // duplicate insert must not double-count
        let recomputed = inst.cost_of_set(s.members());
        assert!((s.cost() - recomputed).abs() <= 1e-9 * recomputed.max(1.0));
        assert_eq!(s.len(), 2);
    }

    proptest::proptest! {
        #[test]
        fn cost_is_monotone_under_inclusion(
            costs in proptest::collection::vec(0.01f64..10.0, 1..20),
            picks in proptest::collection::vec(proptest::bool::ANY, 20),
        ) {
            let n = costs.len();
            let inst = Instance::new(costs, 100.0).unwrap();
            let small: Vec<usize> = (0..n).filter(|&i| picks[i]).collect();
            let large: Vec<usize> = (0..n).collect();
            let c_small = inst.cost_of_ids(&small).unwrap();
            let c_large = inst.cost_of_ids(&large).unwrap();
            proptest::prop_assert!(c_small <= c_large + 1e-12);
        }
    }

    #[test]
    fn cost_file_round_trip() {
        let inst = Instance::new(vec![0.5, 2.0, 1.25], 3.0).unwrap();
        let dir = std::env::temp_dir().join("submod-instance-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("costs.txt");
        let mut buf = Vec::new();
        inst.write_costs(&mut buf).unwrap();
        std::fs::write(&path, buf).unwrap();
        let back = Instance::read_costs(&path, 3.0).unwrap();
        assert_eq!(back, inst);
    }
}
