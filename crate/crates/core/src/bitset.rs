//! Small bitsets over row or column indices.

use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

const WORD_BITS: usize = 64;

/// A set of indices, stored as 64-bit words; one inline word covers every
/// table with at most 64 classes.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitSet {
    words: SmallVec<[u64; 1]>,
}

impl BitSet {
    pub fn new() -> Self {
        BitSet::default()
    }

    pub fn from_mask(mask: u64) -> Self {
        let mut s = BitSet::new();
        if mask != 0 {
            s.words.push(mask);
        }
        s
    }

    /// `{0, …, n−1}`.
    pub fn full(n: usize) -> Self {
        (0..n).collect()
    }

    pub fn singleton(i: usize) -> Self {
        let mut s = BitSet::new();
        s.insert(i);
        s
    }

    pub fn insert(&mut self, i: usize) {
        let w = i / WORD_BITS;
        if self.words.len() <= w {
            self.words.resize(w + 1, 0);
        }
        self.words[w] |= 1 << (i % WORD_BITS);
    }

    pub fn remove(&mut self, i: usize) {
        let w = i / WORD_BITS;
        if w < self.words.len() {
            self.words[w] &= !(1 << (i % WORD_BITS));
            self.trim();
        }
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words
            .get(i / WORD_BITS)
            .is_some_and(|w| w & (1 << (i % WORD_BITS)) != 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn last(&self) -> Option<usize> {
        let (w, word) = self.words.iter().enumerate().rev().find(|(_, w)| **w != 0)?;
        Some(w * WORD_BITS + (WORD_BITS - 1 - word.leading_zeros() as usize))
    }

    pub fn is_subset(&self, other: &BitSet) -> bool {
        self.words.len() <= other.words.len()
            && self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &BitSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn intersection(&self, other: &BitSet) -> BitSet {
        let mut s = BitSet {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        };
        s.trim();
        s
    }

    pub fn union(&self, other: &BitSet) -> BitSet {
        let (long, short) = if self.words.len() >= other.words.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut s = long.clone();
        for (a, b) in s.words.iter_mut().zip(&short.words) {
            *a |= b;
        }
        s
    }

    pub fn difference(&self, other: &BitSet) -> BitSet {
        let mut s = self.clone();
        for (a, b) in s.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
        s.trim();
        s
    }

    /// Complement within `{0, …, n−1}`.
    pub fn complement(&self, n: usize) -> BitSet {
        BitSet::full(n).difference(self)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &word)| {
            let mut bits = word;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let t = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w * WORD_BITS + t)
            })
        })
    }

    /// Image under an index permutation.
    pub fn map(&self, perm: &[usize]) -> BitSet {
        self.iter().map(|i| perm[i]).collect()
    }

    /// The low word, for sets known to live below 64.
    pub fn as_mask(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }
}

impl FromIterator<usize> for BitSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = BitSet::new();
        for i in iter {
            s.insert(i);
        }
        s
    }
}

/// Lexicographic order on the ascending element lists.
impl Ord for BitSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
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

impl fmt::Display for BitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (n, i) in self.iter().enumerate() {
            if n > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("]")
    }
}
