use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Maximum number of nodes a [`NodeSet`] (and therefore a
/// [`Digraph`](super::Digraph)) can hold.
pub const MAX_NODES: usize = 64;

/// Index of a node in a [`Digraph`](super::Digraph).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub usize);

impl NodeId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<usize> for NodeId {
    fn from(i: usize) -> Self {
        NodeId(i)
    }
}

/// A set of nodes backed by a 64-bit mask.
///
/// Iteration is always in ascending id order. Serializes as a sorted list of ids.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct NodeSet(u64);

impl NodeSet {
    pub const fn empty() -> Self {
        NodeSet(0)
    }

    /// `{0, 1, ..., n-1}`.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_NODES, "node count {n} exceeds {MAX_NODES}");
        if n == MAX_NODES {
            NodeSet(u64::MAX)
        } else {
            NodeSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(v: NodeId) -> Self {
        let mut s = NodeSet::empty();
        s.insert(v);
        s
    }

    pub const fn from_bits(bits: u64) -> Self {
        NodeSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub fn insert(&mut self, v: NodeId) -> bool {
        assert!(v.0 < MAX_NODES, "node id {} exceeds {MAX_NODES}", v.0);
        let had = self.contains(v);
        self.0 |= 1 << v.0;
        !had
    }

    pub fn remove(&mut self, v: NodeId) -> bool {
        let had = self.contains(v);
        if v.0 < MAX_NODES {
            self.0 &= !(1 << v.0);
        }
        had
    }

    pub fn contains(self, v: NodeId) -> bool {
        v.0 < MAX_NODES && self.0 & (1 << v.0) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: NodeSet) -> NodeSet {
        NodeSet(self.0 | other.0)
    }

    pub fn intersection(self, other: NodeSet) -> NodeSet {
        NodeSet(self.0 & other.0)
    }

    pub fn difference(self, other: NodeSet) -> NodeSet {
        NodeSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: NodeSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: NodeSet) -> bool {
        self.0 & other.0 == 0
    }

    /// Largest id in the set.
    pub fn max(self) -> Option<NodeId> {
        if self.0 == 0 {
            None
        } else {
            Some(NodeId(63 - self.0.leading_zeros() as usize))
        }
    }

    pub fn iter(self) -> Iter {
        Iter(self.0)
    }

    /// Canonical order: by cardinality, then lexicographically on the
    /// ascending element lists.
    pub fn canonical_cmp(&self, other: &NodeSet) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.iter().cmp(other.iter()))
    }
}

pub struct Iter(u64);

impl Iterator for Iter {
    type Item = NodeId;

    fn next(&mut self) -> Option<NodeId> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(NodeId(i))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Iter {}

impl IntoIterator for NodeSet {
    type Item = NodeId;
    type IntoIter = Iter;

    fn into_iter(self) -> Iter {
        self.iter()
    }
}

impl FromIterator<NodeId> for NodeSet {
    fn from_iter<I: IntoIterator<Item = NodeId>>(iter: I) -> Self {
        let mut s = NodeSet::empty();
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl<const N: usize> From<[usize; N]> for NodeSet {
    fn from(ids: [usize; N]) -> Self {
        ids.into_iter().map(NodeId).collect()
    }
}

impl fmt::Debug for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|v| v.0)).finish()
    }
}

impl fmt::Display for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for NodeSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter().map(|v| v.0))
    }
}

impl<'de> Deserialize<'de> for NodeSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let ids = Vec::<usize>::deserialize(d)?;
        let mut s = NodeSet::empty();
        for id in ids {
            if id >= MAX_NODES {
                return Err(serde::de::Error::custom(format!(
                    "node id {id} exceeds the supported maximum of {}",
                    MAX_NODES - 1
                )));
            }
            s.insert(NodeId(id));
        }
        Ok(s)
    }
}

/// All `k`-element subsets of `pool`, in lexicographic order.
pub(crate) struct Combinations {
    pool: Vec<NodeId>,
    idx: Vec<usize>,
    done: bool,
}

impl Combinations {
    pub(crate) fn new(pool: NodeSet, k: usize) -> Self {
        let pool: Vec<NodeId> = pool.iter().collect();
        let done = k > pool.len();
        Combinations {
            pool,
            idx: (0..k).collect(),
            done,
        }
    }
}

impl Iterator for Combinations {
    type Item = NodeSet;

    fn next(&mut self) -> Option<NodeSet> {
        if self.done {
            return None;
        }
        let out: NodeSet = self.idx.iter().map(|&i| self.pool[i]).collect();
        let k = self.idx.len();
        let m = self.pool.len();
        // advance to the next combination
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < m - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

/// Every subset of `pool` in canonical order (cardinality, then lexicographic).
pub(crate) fn subsets_canonical(pool: NodeSet) -> impl Iterator<Item = NodeSet> {
    (0..=pool.len()).flat_map(move |k| Combinations::new(pool, k))
}
