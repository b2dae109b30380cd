//! Subsets of the variable index set `{0, .., n-1}` as bitmasks.

use alloc::vec::Vec;
use core::fmt;

/// Largest supported dimension.
pub const MAX_DIM: usize = 16;

/// A subset of variable indices, stored as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VarSet(u32);

impl VarSet {
    pub const EMPTY: VarSet = VarSet(0);

    pub fn from_bits(bits: u32) -> Self {
        VarSet(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    /// The full set `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_DIM);
        VarSet(((1u64 << n) - 1) as u32)
    }

    pub fn singleton(j: usize) -> Self {
        VarSet(1 << j)
    }

    pub fn from_indices(idx: &[usize]) -> Self {
        idx.iter().fold(VarSet::EMPTY, |s, &j| s.with(j))
    }

    pub fn with(self, j: usize) -> Self {
        VarSet(self.0 | (1 << j))
    }

    pub fn without(self, j: usize) -> Self {
        VarSet(self.0 & !(1 << j))
    }

    pub fn contains(self, j: usize) -> bool {
        j < 32 && self.0 & (1 << j) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: VarSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: VarSet) -> Self {
        VarSet(self.0 | other.0)
    }

    pub fn intersection(self, other: VarSet) -> Self {
        VarSet(self.0 & other.0)
    }

    pub fn difference(self, other: VarSet) -> Self {
        VarSet(self.0 & !other.0)
    }

    /// Complement inside `{0, .., n-1}`.
    pub fn complement(self, n: usize) -> Self {
        VarSet(Self::full(n).0 & !self.0)
    }

    /// Indices in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..32).filter(move |j| bits & (1 << j) != 0)
    }

    pub fn indices(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// All subsets of `self`, in increasing bitmask order.
    pub fn subsets(self) -> Vec<VarSet> {
        let mut out = Vec::with_capacity(1 << self.len());
        let mut s = 0u32;
        loop {
            out.push(VarSet(s));
            if s == self.0 {
                break;
            }
            s = (s.wrapping_sub(self.0)) & self.0;
        }
        out
    }

    /// All subsets of `{0, .., n-1}` in increasing bitmask order.
    pub fn all(n: usize) -> Vec<VarSet> {
        Self::full(n).subsets()
    }
}

impl fmt::Debug for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_enumerate_power_set() {
        let s = VarSet::from_indices(&[0, 2, 3]);
        let subs = s.subsets();
        assert_eq!(subs.len(), 8);
        assert!(subs.iter().all(|x| x.is_subset(s)));
        assert_eq!(subs[0], VarSet::EMPTY);
        assert_eq!(*subs.last().unwrap(), s);
        assert_eq!(VarSet::all(3).len(), 8);
    }

    #[test]
    fn complement_and_len() {
        let s = VarSet::from_indices(&[1]);
        assert_eq!(s.complement(3).indices(), alloc::vec![0, 2]);
        assert_eq!(VarSet::full(4).len(), 4);
        assert!(VarSet::EMPTY.is_empty());
    }
}
