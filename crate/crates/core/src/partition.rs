//! Set partitions of `{0, …, n−1}` with the refinement order and meets.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bitset::BitSet;
use crate::error::{Error, Result};

/// A partition of `{0, …, n−1}` into nonempty blocks, listed by increasing
/// minimum element. The canonical order makes derived equality and hashing
/// agree with set-partition equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    n: usize,
    blocks: Vec<BitSet>,
}

impl Partition {
    /// Builds a partition from arbitrary blocks, checking that they are
    /// nonempty, disjoint and cover `{0, …, n−1}`.
    pub fn from_blocks(n: usize, blocks: impl IntoIterator<Item = BitSet>) -> Result<Self> {
        let mut blocks: Vec<BitSet> = blocks.into_iter().collect();
        let mut seen = BitSet::new();
        for b in &blocks {
            if b.is_empty() {
                return Err(Error::Partition("empty block".into()));
            }
            if b.last().is_some_and(|m| m >= n) {
                return Err(Error::Partition(format!("block {b} exceeds ground set of size {n}")));
            }
            if !seen.is_disjoint(b) {
                return Err(Error::Partition(format!("block {b} overlaps another block")));
            }
            seen = seen.union(b);
        }
        if seen.len() != n {
            return Err(Error::Partition(format!("blocks do not cover all {n} indices")));
        }
        blocks.sort_by_key(|b| b.first());
        Ok(Partition { n, blocks })
    }

    /// Groups indices by equal key: `i` and `j` share a block iff `keys[i] == keys[j]`.
    pub fn from_keys<K: Hash + Eq>(keys: &[K]) -> Self {
        let mut index: HashMap<&K, usize> = HashMap::with_capacity(keys.len());
        let mut blocks: Vec<BitSet> = Vec::new();
        for (i, key) in keys.iter().enumerate() {
            let b = *index.entry(key).or_insert_with(|| {
                blocks.push(BitSet::new());
                blocks.len() - 1
            });
            blocks[b].insert(i);
        }
        Partition { n: keys.len(), blocks }
    }

    /// Block labels in first-occurrence order; `labels[i]` is the block of `i`.
    pub fn labels(&self) -> Vec<usize> {
        let mut labels = vec![0; self.n];
        for (b, block) in self.blocks.iter().enumerate() {
            for i in block.iter() {
                labels[i] = b;
            }
        }
        labels
    }

    pub fn singletons(n: usize) -> Self {
        Partition { n, blocks: (0..n).map(BitSet::singleton).collect() }
    }

    /// The one-block partition (empty when `n == 0`).
    pub fn whole(n: usize) -> Self {
        let blocks = if n == 0 { vec![] } else { vec![BitSet::full(n)] };
        Partition { n, blocks }
    }

    /// `{{0}, {1, …, n−1}}`, the shape of the coarsest supercharacter theory.
    pub fn identity_and_rest(n: usize) -> Self {
        let mut blocks = vec![BitSet::singleton(0)];
        if n > 1 {
            blocks.push(BitSet::singleton(0).complement(n));
        }
        Partition { n, blocks }
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[BitSet] {
        &self.blocks
    }

    pub fn contains_block(&self, b: &BitSet) -> bool {
        b.first().is_some_and(|m| self.block_of(m) == b)
    }

    /// The block containing `i`.
    pub fn block_of(&self, i: usize) -> &BitSet {
        self.blocks.iter().find(|b| b.contains(i)).expect("index outside the ground set")
    }

    /// True iff every block of `self` lies inside a block of `other` (`self ⪯ other`).
    pub fn is_refinement(&self, other: &Partition) -> bool {
        assert_eq!(self.n, other.n, "partitions over different ground sets");
        self.blocks.iter().all(|b| b.is_subset(other.block_of(b.first().unwrap())))
    }

    /// Common refinement: all nonempty intersections of a block of each.
    pub fn meet(&self, other: &Partition) -> Partition {
        assert_eq!(self.n, other.n, "partitions over different ground sets");
        let a = self.labels();
        let b = other.labels();
        let keys: Vec<(usize, usize)> = a.into_iter().zip(b).collect();
        Partition::from_keys(&keys)
    }

    /// Image under an index permutation.
    pub fn map(&self, perm: &[usize]) -> Partition {
        let mut blocks: Vec<BitSet> = self.blocks.iter().map(|b| b.map(perm)).collect();
        blocks.sort_by_key(|b| b.first());
        Partition { n: self.n, blocks }
    }

    pub fn to_vecs(&self) -> Vec<Vec<usize>> {
        self.blocks.iter().map(|b| b.iter().collect()).collect()
    }

    /// Parses the `[[0,2],[1,4],[3]]` text form over a ground set of size `n`.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let vecs: Vec<Vec<usize>> = serde_json::from_str(text)
            .map_err(|e| Error::Partition(format!("expected a list of index lists: {e}")))?;
        Self::from_vecs(n, vecs)
    }

    pub fn from_vecs(n: usize, vecs: Vec<Vec<usize>>) -> Result<Self> {
        let mut blocks = Vec::with_capacity(vecs.len());
        for v in vecs {
            let len = v.len();
            let b: BitSet = v.into_iter().collect();
            if b.len() != len {
                return Err(Error::Partition("repeated index inside a block".into()));
            }
            blocks.push(b);
        }
        Self::from_blocks(n, blocks)
    }
}

/// Orders by block count, then lexicographically by block lists.
impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n
            .cmp(&other.n)
            .then(self.blocks.len().cmp(&other.blocks.len()))
            .then_with(|| self.blocks.cmp(&other.blocks))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{b}")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Infers the ground set as `{0, …, max}`.
    fn from_str(s: &str) -> Result<Self> {
        let vecs: Vec<Vec<usize>> = serde_json::from_str(s)
            .map_err(|e| Error::Partition(format!("expected a list of index lists: {e}")))?;
        let n = vecs.iter().flatten().max().map_or(0, |m| m + 1);
        Self::from_vecs(n, vecs)
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_vecs().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let vecs = Vec::<Vec<usize>>::deserialize(deserializer)?;
        let n = vecs.iter().flatten().max().map_or(0, |m| m + 1);
        Partition::from_vecs(n, vecs).map_err(serde::de::Error::custom)
    }
}
