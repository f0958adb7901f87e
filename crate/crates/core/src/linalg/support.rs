use alloc::vec::Vec;
use core::ops::Deref;

use crate::error::{Error, Result};

/// Strictly ascending list of distinct 0-based feature indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct SupportVector(Vec<usize>);

impl SupportVector {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    /// Validates that `indices` is strictly ascending and below `cols`.
    pub fn new(indices: Vec<usize>, cols: usize) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::NotAscending);
        }
        if let Some(&last) = indices.last() {
            if last >= cols {
                return Err(Error::IndexOutOfRange { index: last, cols });
            }
        }
        Ok(Self(indices))
    }

    /// Sorts and deduplicates before validating the range.
    pub fn from_unsorted(mut indices: Vec<usize>, cols: usize) -> Result<Self> {
        indices.sort_unstable();
        indices.dedup();
        Self::new(indices, cols)
    }

    /// Converts 1-based indices (the file and CLI convention).
    pub fn from_one_based(indices: &[usize], cols: usize) -> Result<Self> {
        let mut zero = Vec::with_capacity(indices.len());
        for &i in indices {
            if i == 0 || i > cols {
                return Err(Error::IndexOutOfRange { index: i, cols });
            }
            zero.push(i - 1);
        }
        Self::new(zero, cols)
    }

    /// The full index set `0..cols`.
    pub fn full(cols: usize) -> Self {
        Self((0..cols).collect())
    }

    pub(crate) fn from_sorted_unchecked(indices: Vec<usize>) -> Self {
        debug_assert!(indices.windows(2).all(|w| w[0] < w[1]));
        Self(indices)
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.0.iter().map(|i| i + 1).collect()
    }

    pub fn into_inner(self) -> Vec<usize> {
        self.0
    }

    pub fn contains_index(&self, index: usize) -> bool {
        self.0.binary_search(&index).is_ok()
    }

    /// True iff every entry of `other` is also in `self`.
    pub fn is_superset_of(&self, other: &SupportVector) -> bool {
        other.0.iter().all(|i| self.contains_index(*i))
    }

    /// Entries of `self` missing from `other`.
    pub fn difference(&self, other: &SupportVector) -> SupportVector {
        Self(self.0.iter().copied().filter(|i| !other.contains_index(*i)).collect())
    }

    pub fn union(&self, other: &SupportVector) -> SupportVector {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut a, mut b) = (self.0.iter().peekable(), other.0.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&x), Some(&&y)) => {
                    if x < y {
                        out.push(x);
                        a.next();
                    } else if y < x {
                        out.push(y);
                        b.next();
                    } else {
                        out.push(x);
                        a.next();
                        b.next();
                    }
                }
                (Some(&&x), None) => {
                    out.push(x);
                    a.next();
                }
                (None, Some(&&y)) => {
                    out.push(y);
                    b.next();
                }
                (None, None) => break,
            }
        }
        Self(out)
    }

    pub fn with_index(&self, index: usize) -> SupportVector {
        match self.0.binary_search(&index) {
            Ok(_) => self.clone(),
            Err(pos) => {
                let mut v = self.0.clone();
                v.insert(pos, index);
                Self(v)
            }
        }
    }

    pub fn without_index(&self, index: usize) -> SupportVector {
        Self(self.0.iter().copied().filter(|&i| i != index).collect())
    }

    /// Checks the range invariant against a matrix width.
    pub fn check_range(&self, cols: usize) -> Result<()> {
        match self.0.last() {
            Some(&last) if last >= cols => Err(Error::IndexOutOfRange { index: last, cols }),
            _ => Ok(()),
        }
    }
}

impl Deref for SupportVector {
    type Target = [usize];

    fn deref(&self) -> &[usize] {
        &self.0
    }
}

impl AsRef<[usize]> for SupportVector {
    fn as_ref(&self) -> &[usize] {
        &self.0
    }
}
