//! Fixed-length membership sets over group element indices.

use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

const WORD: usize = 64;

/// A set of indices in `0..len`, stored one bit per element.
///
/// Sets compare by cardinality first and then lexicographically by their
/// sorted member lists, which is the canonical order used for every list of
/// subgroups this crate returns.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitSet {
    len: usize,
    words: SmallVec<[u64; 2]>,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        Self { len, words: SmallVec::from_elem(0, len.div_ceil(WORD)) }
    }

    pub fn full(len: usize) -> Self {
        let mut set = Self::new(len);
        for i in 0..len {
            set.insert(i);
        }
        set
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(len: usize, indices: I) -> Self {
        let mut set = Self::new(len);
        for i in indices {
            set.insert(i);
        }
        set
    }

    /// Length of the universe, not the number of members.
    pub fn universe(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.len && self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    /// Inserts `i`, returning true if it was not already present.
    #[inline]
    pub fn insert(&mut self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} outside universe of {}", self.len);
        let w = &mut self.words[i / WORD];
        let mask = 1u64 << (i % WORD);
        let fresh = *w & mask == 0;
        *w |= mask;
        fresh
    }

    pub fn remove(&mut self, i: usize) {
        if i < self.len {
            self.words[i / WORD] &= !(1u64 << (i % WORD));
        }
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> Ones<'_> {
        Ones { words: &self.words, index: 0, current: self.words.first().copied().unwrap_or(0) }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn union(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection_count(&self, other: &Self) -> usize {
        debug_assert_eq!(self.len, other.len);
        self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones() as usize).sum()
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(u64, u64) -> u64) -> Self {
        debug_assert_eq!(self.len, other.len);
        let words = self.words.iter().zip(&other.words).map(|(&a, &b)| f(a, b)).collect();
        Self { len: self.len, words }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

pub struct Ones<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl Iterator for Ones<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.index * WORD + bit);
            }
            self.index += 1;
            self.current = *self.words.get(self.index)?;
        }
    }
}

impl Ord for BitSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len
            .cmp(&other.len)
            .then_with(|| self.count().cmp(&other.count()))
            .then_with(|| {
                // Equal cardinality: the set holding the least element of the
                // symmetric difference sorts first.
                for (a, b) in self.words.iter().zip(&other.words) {
                    let diff = a ^ b;
                    if diff != 0 {
                        let low = diff & diff.wrapping_neg();
                        return if a & low != 0 { Ordering::Less } else { Ordering::Greater };
                    }
                }
                Ordering::Equal
            })
    }
}

impl PartialOrd for BitSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for BitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn insert_contains_count() {
        let mut s = BitSet::new(130);
        assert!(s.insert(0));
        assert!(s.insert(129));
        assert!(!s.insert(129));
        assert!(s.contains(129) && !s.contains(64));
        assert_eq!(s.count(), 2);
        assert_eq!(s.to_vec(), vec![0, 129]);
        s.remove(0);
        assert_eq!(s.to_vec(), vec![129]);
    }

    #[test]
    fn canonical_order_is_size_then_lexicographic() {
        let a = BitSet::from_indices(8, [0, 1, 5]);
        let b = BitSet::from_indices(8, [0, 2, 3]);
        let c = BitSet::from_indices(8, [0, 7]);
        assert!(a < b);
        assert!(c < a);
    }

    proptest! {
        #[test]
        fn order_matches_sorted_member_lists(
            xs in proptest::collection::btree_set(0usize..150, 0..20),
            ys in proptest::collection::btree_set(0usize..150, 0..20),
        ) {
            let a = BitSet::from_indices(150, xs.iter().copied());
            let b = BitSet::from_indices(150, ys.iter().copied());
            let xv: Vec<_> = xs.into_iter().collect();
            let yv: Vec<_> = ys.into_iter().collect();
            let expected = xv.len().cmp(&yv.len()).then_with(|| xv.cmp(&yv));
            prop_assert_eq!(a.cmp(&b), expected);
            prop_assert_eq!(a.iter().collect::<Vec<_>>(), xv);
        }
    }
}
