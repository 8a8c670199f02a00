//! Item identifiers and small sorted item sets.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Index of an item in the extended ground set.
///
/// Ids `0..n` are real items, ids `n..n + l` are dummy items.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ItemId(pub usize);

impl ItemId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }

    #[inline]
    pub fn is_dummy(self, n: usize) -> bool {
        self.0 >= n
    }
}

impl fmt::Display for ItemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<usize> for ItemId {
    fn from(v: usize) -> Self {
        ItemId(v)
    }
}

/// A set of items kept sorted ascending without duplicates.
///
/// Iteration order is ascending by id, which the solver relies on for
/// tie-breaking and for the trim pass order.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<ItemId>", into = "Vec<ItemId>")]
pub struct ItemSet(Vec<ItemId>);

impl ItemSet {
    pub fn new() -> Self {
        ItemSet(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, x: ItemId) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    /// Inserts `x`; returns false if it was already present.
    pub fn insert(&mut self, x: ItemId) -> bool {
        match self.0.binary_search(&x) {
            Ok(_) => false,
            Err(pos) => {
                self.0.insert(pos, x);
                true
            }
        }
    }

    /// Removes `x`; returns false if it was absent.
    pub fn remove(&mut self, x: ItemId) -> bool {
        match self.0.binary_search(&x) {
            Ok(pos) => {
                self.0.remove(pos);
                true
            }
            Err(_) => false,
        }
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = ItemId> + ExactSizeIterator + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[ItemId] {
        &self.0
    }

    /// `self ∪ {x}` as a new set.
    pub fn with(&self, x: ItemId) -> ItemSet {
        let mut s = self.clone();
        s.insert(x);
        s
    }

    /// `self ∖ {y}` as a new set.
    pub fn without(&self, y: ItemId) -> ItemSet {
        let mut s = self.clone();
        s.remove(y);
        s
    }

    /// `self ∪ {x} ∖ {y}` as a new set.
    pub fn swapped(&self, x: ItemId, y: ItemId) -> ItemSet {
        let mut s = self.without(y);
        s.insert(x);
        s
    }

    pub fn is_subset(&self, other: &ItemSet) -> bool {
        self.iter().all(|x| other.contains(x))
    }

    /// Drops every id `>= n`.
    pub fn real_items(&self, n: usize) -> ItemSet {
        ItemSet(self.0.iter().copied().filter(|x| !x.is_dummy(n)).collect())
    }

    pub fn to_indices(&self) -> Vec<usize> {
        self.0.iter().map(|x| x.0).collect()
    }
}

impl From<Vec<ItemId>> for ItemSet {
    fn from(v: Vec<ItemId>) -> Self {
        v.into_iter().collect()
    }
}

impl From<ItemSet> for Vec<ItemId> {
    fn from(s: ItemSet) -> Self {
        s.0
    }
}

impl FromIterator<ItemId> for ItemSet {
    fn from_iter<I: IntoIterator<Item = ItemId>>(iter: I) -> Self {
        let mut v: Vec<ItemId> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        ItemSet(v)
    }
}

impl FromIterator<usize> for ItemSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        iter.into_iter().map(ItemId).collect()
    }
}

impl<'a> IntoIterator for &'a ItemSet {
    type Item = ItemId;
    type IntoIter = std::iter::Copied<std::slice::Iter<'a, ItemId>>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter().copied()
    }
}

impl fmt::Display for ItemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

/// Shorthand for building a set from raw indices.
pub fn set<I: IntoIterator<Item = usize>>(items: I) -> ItemSet {
    items.into_iter().collect()
}
