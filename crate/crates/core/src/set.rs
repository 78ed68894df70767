//! Dense bitset over a fixed universe `[0, n)`.
//!
//! Element ids are dense integers, so a packed bitset is the canonical set
//! representation at the scales this crate targets: a single `u64` word covers
//! `n <= 64`, larger universes fall back to a word vector.

/// Index of an element in the ground set. Ids are dense in `[0, n)`.
pub type ElementId = usize;

const BITS: usize = 64;

/// A set of element ids over a fixed universe `[0, universe)`.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct ElementSet {
    blocks: Vec<u64>,
    universe: usize,
}

impl ElementSet {
    /// The empty set over a universe of `n` ids.
    pub fn empty(n: usize) -> Self {
        ElementSet {
            blocks: vec![0; n.div_ceil(BITS)],
            universe: n,
        }
    }

    /// The full set `{0, 1, ..., n-1}`.
    pub fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        for b in 0..n / BITS {
            s.blocks[b] = !0;
        }
        if !n.is_multiple_of(BITS) {
            s.blocks[n / BITS] = (1u64 << (n % BITS)) - 1;
        }
        s
    }

    pub fn from_ids<I: IntoIterator<Item = ElementId>>(n: usize, ids: I) -> Self {
        let mut s = Self::empty(n);
        for id in ids {
            s.insert(id);
        }
        s
    }

    /// Decode the low `n` bits of `mask` as a set. Used by exhaustive enumeration.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        assert!(n <= BITS, "mask decoding limited to one word");
        let mut s = Self::empty(n);
        if !s.blocks.is_empty() {
            s.blocks[0] = mask;
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn contains(&self, id: ElementId) -> bool {
        debug_assert!(id < self.universe);
        self.blocks[id / BITS] >> (id % BITS) & 1 == 1
    }

    /// Insert `id`; returns true if it was not already present.
    pub fn insert(&mut self, id: ElementId) -> bool {
        assert!(
            id < self.universe,
            "id {id} outside universe {}",
            self.universe
        );
        let block = &mut self.blocks[id / BITS];
        let bit = 1u64 << (id % BITS);
        let fresh = *block & bit == 0;
        *block |= bit;
        fresh
    }

    /// Remove `id`; returns true if it was present.
    pub fn remove(&mut self, id: ElementId) -> bool {
        assert!(id < self.universe);
        let block = &mut self.blocks[id / BITS];
        let bit = 1u64 << (id % BITS);
        let present = *block & bit != 0;
        *block &= !bit;
        present
    }

    pub fn len(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    pub fn clear(&mut self) {
        self.blocks.iter_mut().for_each(|b| *b = 0);
    }

    pub fn is_subset_of(&self, other: &ElementSet) -> bool {
        debug_assert_eq!(self.universe, other.universe);
        self.blocks
            .iter()
            .zip(&other.blocks)
            .all(|(a, b)| a & !b == 0)
    }

    /// In-place union with `other`.
    pub fn union_with(&mut self, other: &ElementSet) {
        debug_assert_eq!(self.universe, other.universe);
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a |= b;
        }
    }

    /// `|self \ other|` without allocating.
    pub fn difference_len(&self, other: &ElementSet) -> usize {
        debug_assert_eq!(self.universe, other.universe);
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| (a & !b).count_ones() as usize)
            .sum()
    }

    /// Iterate member ids in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = ElementId> + '_ {
        self.blocks.iter().enumerate().flat_map(|(bi, &block)| {
            let mut bits = block;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let tz = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    Some(bi * BITS + tz)
                }
            })
        })
    }

    /// Lexicographic order on the ascending id sequences, e.g. {0,2} < {1} < {1,3}.
    pub fn lex_cmp(&self, other: &ElementSet) -> std::cmp::Ordering {
        self.iter().cmp(other.iter())
    }
}

impl FromIterator<ElementId> for ElementSet {
    /// Collect ids into a set whose universe is just large enough to hold them.
    fn from_iter<I: IntoIterator<Item = ElementId>>(iter: I) -> Self {
        let ids: Vec<ElementId> = iter.into_iter().collect();
        let n = ids.iter().map(|&i| i + 1).max().unwrap_or(0);
        Self::from_ids(n, ids)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    #[test]
    fn empty_and_full() {
        let e = ElementSet::empty(70);
        assert_eq!(e.len(), 0);
        assert!(e.is_empty());
        let f = ElementSet::full(70);
        assert_eq!(f.len(), 70);
        assert!(f.contains(0) && f.contains(69));
        assert!(e.is_subset_of(&f));
    }

    #[test]
    fn insert_remove_iter() {
        let mut s = ElementSet::empty(10);
        assert!(s.insert(3));
        assert!(!s.insert(3));
        assert!(s.insert(7));
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![3, 7]);
        assert!(s.remove(3));
        assert!(!s.remove(3));
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn lex_order() {
        let a = ElementSet::from_ids(4, [0, 2]);
        let b = ElementSet::from_ids(4, [1]);
        let c = ElementSet::from_ids(4, [0]);
        assert_eq!(a.lex_cmp(&b), std::cmp::Ordering::Less);
        assert_eq!(c.lex_cmp(&a), std::cmp::Ordering::Less);
        assert_eq!(a.lex_cmp(&a), std::cmp::Ordering::Equal);
    }

    proptest! {
        #[test]
        fn matches_btreeset_model(ops in proptest::collection::vec((0usize..100, any::<bool>()), 0..200)) {
            let mut s = ElementSet::empty(100);
            let mut model = BTreeSet::new();
            for (id, add) in ops {
                if add {
                    prop_assert_eq!(s.insert(id), model.insert(id));
                } else {
                    prop_assert_eq!(s.remove(id), model.remove(&id));
                }
            }
            prop_assert_eq!(s.len(), model.len());
            prop_assert_eq!(s.iter().collect::<Vec<_>>(), model.iter().copied().collect::<Vec<_>>());
        }

        #[test]
        fn difference_len_matches_model(a in proptest::collection::btree_set(0usize..128, 0..60),
                                        b in proptest::collection::btree_set(0usize..128, 0..60)) {
            let sa = ElementSet::from_ids(128, a.iter().copied());
            let sb = ElementSet::from_ids(128, b.iter().copied());
            prop_assert_eq!(sa.difference_len(&sb), a.difference(&b).count());
        }
    }
}
