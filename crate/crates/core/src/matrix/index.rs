use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A strictly increasing set of 1-based row or column indices.
///
/// Ordering is lexicographic on the index lists, which is the order used
/// for compound matrices and for reporting witness minors.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    /// Validates that `indices` is strictly increasing and within `[1, n]`.
    pub fn new(indices: Vec<usize>, n: usize) -> Result<Self> {
        let set = IndexSet::try_from(indices)?;
        if let Some(&last) = set.0.last() {
            if last > n {
                return Err(Error::IndexOutOfRange(format!("{set} exceeds dimension {n}")));
            }
        }
        Ok(set)
    }

    /// The contiguous set `{first, ..., last}`; empty when `first > last`.
    pub fn range(first: usize, last: usize) -> Self {
        assert!(first >= 1, "indices are 1-based");
        IndexSet((first..=last).collect())
    }

    /// All `k`-subsets of `{1, ..., n}` in lexicographic order.
    pub fn all(n: usize, k: usize) -> impl Iterator<Item = IndexSet> {
        (1..=n).combinations(k).map(IndexSet)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn max(&self) -> Option<usize> {
        self.0.last().copied()
    }

    /// Zero-based positions, for indexing into storage.
    pub(crate) fn zero_based(&self) -> Vec<usize> {
        self.0.iter().map(|i| i - 1).collect()
    }
}

impl TryFrom<Vec<usize>> for IndexSet {
    type Error = Error;

    fn try_from(indices: Vec<usize>) -> Result<Self> {
        if indices.first() == Some(&0) {
            return Err(Error::IndexOutOfRange("indices are 1-based".into()));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::IndexOutOfRange(format!(
                "{indices:?} is not strictly increasing"
            )));
        }
        Ok(IndexSet(indices))
    }
}

impl From<IndexSet> for Vec<usize> {
    fn from(set: IndexSet) -> Self {
        set.0
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.0.iter().join(","))
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
