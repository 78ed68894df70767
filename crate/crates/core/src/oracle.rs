//! The value-oracle contract: black-box access to a monotone submodular `f`.
//!
//! Solvers read the objective only through this trait. Implementations must
//! be normalized (`f(∅) = 0`) and monotone nondecreasing on the sets they are
//! queried with; the marginal gain must agree with the evaluation difference
//! `f(S ∪ {v}) − f(S)` to within 1e-9.

use crate::set::{ElementId, ElementSet};
use std::sync::atomic::{AtomicU64, Ordering};

/// Black-box access to a set function `f` with call counting.
///
/// The call counter increases by exactly 1 per [`value`](ValueOracle::value)
/// and by at most 2 per [`marginal`](ValueOracle::marginal). Implementations
/// must permit concurrent evaluation of a read-only oracle; counters are
/// atomic so concurrent bumps stay well-defined.
pub trait ValueOracle: Sync {
    /// Ground-set size `n`; queries address ids in `[0, n)`.
    fn ground_size(&self) -> usize;

    /// `f(S)`.
    fn value(&self, set: &ElementSet) -> f64;

    /// Marginal gain `f(v | S) = f(S ∪ {v}) − f(S)`.
    ///
    /// The default takes the evaluation difference (two calls); objectives
    /// override it when a cheaper exact route exists.
    fn marginal(&self, v: ElementId, set: &ElementSet) -> f64 {
        debug_assert!(!set.contains(v));
        let before = self.value(set);
        let mut with = set.clone();
        with.insert(v);
        self.value(&with) - before
    }

    /// Number of oracle calls made so far.
    fn calls(&self) -> u64;

    /// Reset the call counter to zero.
    fn reset_calls(&self);
}

/// Shared atomic call counter for oracle implementations.
#[derive(Debug, Default)]
pub struct CallCounter(AtomicU64);

impl CallCounter {
    pub fn new() -> Self {
        CallCounter(AtomicU64::new(0))
    }

    #[inline]
    pub fn bump(&self) {
        self.0.fetch_add(1, Ordering::Relaxed);
    }

    pub fn get(&self) -> u64 {
        self.0.load(Ordering::Relaxed)
    }

    pub fn reset(&self) {
        self.0.store(0, Ordering::Relaxed);
    }
}

/// A view of a base oracle restricted to a subset of elements, optionally
/// anchored on a fixed set `A`: the restricted function is
/// `g(T) = f(map(T) ∪ A) − f(A)` over re-densified ids.
///
/// With an empty anchor this remaps ids after
/// [`filter_overweight`](crate::instance::Instance::filter_overweight); with a
/// non-empty anchor it is the marginal objective used on search subproblems,
/// which is again monotone submodular. Calls are counted on the base oracle.
pub struct RestrictedOracle<'a, O: ValueOracle + ?Sized> {
    base: &'a O,
    /// Restricted id -> base id.
    members: Vec<ElementId>,
    anchor: ElementSet,
    anchor_value: f64,
}

impl<'a, O: ValueOracle + ?Sized> RestrictedOracle<'a, O> {
    /// Restrict `base` to `members` (restricted id `i` maps to `members[i]`).
    pub fn remap(base: &'a O, members: Vec<ElementId>) -> Self {
        let anchor = ElementSet::empty(base.ground_size());
        RestrictedOracle {
            base,
            members,
            anchor,
            anchor_value: 0.0,
        }
    }

    /// Restrict to `members` and anchor on `A`; `anchor_value` must be `f(A)`.
    pub fn anchored(
        base: &'a O,
        members: Vec<ElementId>,
        anchor: ElementSet,
        anchor_value: f64,
    ) -> Self {
        debug_assert!(members.iter().all(|&m| !anchor.contains(m)));
        RestrictedOracle {
            base,
            members,
            anchor,
            anchor_value,
        }
    }

    fn expand(&self, set: &ElementSet) -> ElementSet {
        let mut full = self.anchor.clone();
        for i in set.iter() {
            full.insert(self.members[i]);
        }
        full
    }
}

impl<O: ValueOracle + ?Sized> ValueOracle for RestrictedOracle<'_, O> {
    fn ground_size(&self) -> usize {
        self.members.len()
    }

    fn value(&self, set: &ElementSet) -> f64 {
        self.base.value(&self.expand(set)) - self.anchor_value
    }

    fn marginal(&self, v: ElementId, set: &ElementSet) -> f64 {
        self.base.marginal(self.members[v], &self.expand(set))
    }

    fn calls(&self) -> u64 {
        self.base.calls()
    }

    fn reset_calls(&self) {
        self.base.reset_calls()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::ModularObjective;

    #[test]
    fn restricted_oracle_remaps_ids() {
        let base = ModularObjective::new(vec![1.0, 10.0, 100.0]);
        let view = RestrictedOracle::remap(&base, vec![0, 2]);
        assert_eq!(view.ground_size(), 2);
        let s = ElementSet::from_ids(2, [1]); // restricted id 1 -> base id 2
        assert_eq!(view.value(&s), 100.0);
        assert_eq!(view.marginal(0, &s), 1.0);
    }

    #[test]
    fn anchored_oracle_is_marginal_function() {
        let base = ModularObjective::new(vec![1.0, 10.0, 100.0]);
        let anchor = ElementSet::from_ids(3, [1]);
        let view = RestrictedOracle::anchored(&base, vec![0, 2], anchor, 10.0);
        let empty = ElementSet::empty(2);
        assert_eq!(view.value(&empty), 0.0);
        let s = ElementSet::from_ids(2, [0, 1]);
        assert_eq!(view.value(&s), 101.0);
    }
}
