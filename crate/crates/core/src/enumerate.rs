//! Enumeration of all supercharacter theories of a table.
//!
//! Step one runs the superclass test on every subset of nontrivial classes
//! covering at most half of them; the theories found are then closed under
//! meets, and `M(G)` is added.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use crate::auts::{automorphism_group, TableAutomorphism};
use crate::bitset::BitSet;
use crate::chartable::CharacterTable;
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::sct::{clpt, coarsest_sct_with_superclass, irpt, refine_classes, refine_classes_to_sct, SuperTheory};

/// Largest `k` the subset scan accepts; subsets are held in one machine word.
pub const MAX_SCAN_K: usize = 64;

/// Snapshot handed to a progress callback during the subset scan.
#[derive(Clone, Copy, Debug)]
pub struct Progress {
    pub scanned: u64,
    pub total: u64,
    pub elapsed: Duration,
}

pub type ProgressFn = Arc<dyn Fn(Progress) + Send + Sync>;

#[derive(Clone)]
pub struct Options {
    /// Number of scanning threads; 0 picks the available parallelism.
    pub workers: usize,
    pub use_auts: bool,
    pub progress: Option<ProgressFn>,
}

impl Default for Options {
    fn default() -> Self {
        Options { workers: 0, use_auts: true, progress: None }
    }
}

impl Options {
    fn worker_count(&self) -> usize {
        match self.workers {
            0 => std::thread::available_parallelism().map_or(1, |n| n.get()),
            n => n,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub subsets_scanned: u64,
    pub step1_theories: usize,
    pub meets_computed: u64,
    pub elapsed: Duration,
}

#[derive(Clone, Debug)]
pub struct EnumerationResult {
    /// Sorted by number of superclasses, then class partition.
    pub theories: Vec<SuperTheory>,
    pub stats: Stats,
}

/// Orders equal-size masks as the ascending element lists they encode.
fn lex_less(a: u64, b: u64) -> bool {
    let diff = a ^ b;
    diff != 0 && a & (diff & diff.wrapping_neg()) != 0
}

fn mask_image(mask: u64, perm: &[usize]) -> u64 {
    let mut out = 0;
    let mut rest = mask;
    while rest != 0 {
        let j = rest.trailing_zeros() as usize;
        out |= 1 << perm[j];
        rest &= rest - 1;
    }
    out
}

fn orbit_rep(mask: u64, perms: &[&[usize]]) -> u64 {
    perms
        .iter()
        .map(|p| mask_image(mask, p))
        .fold(mask, |best, m| if lex_less(m, best) { m } else { best })
}

/// Subsets of the nontrivial classes in scan order: increasing size, and
/// within a size increasing as integers. Each item is a class mask (bit 0
/// is the identity class, never set).
fn scan_order(k: usize) -> impl Iterator<Item = u64> {
    let m = k.saturating_sub(1) as u32;
    (1..=m / 2).flat_map(move |c| {
        let mut next = Some((1u64 << c) - 1);
        std::iter::from_fn(move || {
            let v = next?;
            // Gosper's hack
            let low = v & v.wrapping_neg();
            let ripple = v + low;
            let succ = (((ripple ^ v) >> 2) / low) | ripple;
            next = (succ < 1u64 << m).then_some(succ);
            Some(v << 1)
        })
    })
}

/// Step one of the algorithm: the distinct theories `𝔏(S)` over the scanned subsets.
pub fn step1_scan(t: &CharacterTable, use_auts: bool) -> Result<Vec<SuperTheory>> {
    let opts = Options { use_auts, ..Options::default() };
    let auts = if use_auts { automorphism_group(t) } else { Vec::new() };
    Ok(scan(t, &opts, &auts)?.0.into_iter().collect())
}

fn scan(t: &CharacterTable, opts: &Options, auts: &[TableAutomorphism]) -> Result<(BTreeSet<SuperTheory>, u64)> {
    let k = t.k();
    if k > MAX_SCAN_K {
        return Err(Error::TooLarge { k, max: MAX_SCAN_K });
    }
    let m = k.saturating_sub(1) as u32;
    let nontrivial = if m == 0 { 0 } else { (u64::MAX >> (64 - m)) << 1 };
    let half = if m % 2 == 0 { Some(m / 2) } else { None };
    let perms: Vec<&[usize]> = auts.iter().filter(|a| !a.is_identity()).map(|a| a.col_perm()).collect();
    let keep = |mask: u64| -> bool {
        let at_half = half == Some(mask.count_ones());
        if perms.is_empty() {
            // of S and its complement keep the one holding class 1
            return !at_half || mask & 2 != 0;
        }
        if orbit_rep(mask, &perms) != mask {
            return false;
        }
        !at_half || !lex_less(orbit_rep(nontrivial ^ mask, &perms), mask)
    };

    // candidates before the half and orbit filters
    let total: u64 = (1..=m as u64 / 2)
        .map(|c| (0..c).fold(1u64, |acc, x| acc * (m as u64 - x) / (x + 1)))
        .sum();
    let workers = opts.worker_count().max(1);
    let counter = AtomicU64::new(0);
    let start = Instant::now();
    let report = |done: u64| {
        let scanned = counter.fetch_add(done, Ordering::Relaxed) + done;
        if let Some(progress) = &opts.progress {
            progress(Progress { scanned, total, elapsed: start.elapsed() });
        }
    };
    let work = |w: usize| -> (HashSet<SuperTheory>, u64) {
        let mut found = HashSet::new();
        let mut scanned = 0;
        let mut pending = 0;
        for (idx, mask) in scan_order(k).enumerate() {
            if idx % workers != w {
                continue;
            }
            pending += 1;
            if pending == 1 << 14 {
                report(pending);
                pending = 0;
            }
            if !keep(mask) {
                continue;
            }
            scanned += 1;
            if let Some(theory) = coarsest_sct_with_superclass(t, &BitSet::from_mask(mask)) {
                found.insert(theory);
            }
        }
        report(pending);
        (found, scanned)
    };
    let parts: Vec<(HashSet<SuperTheory>, u64)> = if workers == 1 {
        vec![work(0)]
    } else {
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..workers).map(|w| s.spawn(move || work(w))).collect();
            handles.into_iter().map(|h| h.join().expect("scan worker panicked")).collect()
        })
    };
    let mut theories = BTreeSet::new();
    let mut scanned = 0;
    for (found, n) in parts {
        theories.extend(found);
        scanned += n;
    }
    if !perms.is_empty() {
        let images: Vec<SuperTheory> =
            theories.iter().flat_map(|th| auts.iter().map(move |a| a.apply(th))).collect();
        theories.extend(images);
    }
    Ok((theories, scanned))
}

/// Coarsest theory refining both `a` and `b`.
pub fn meet_sct(t: &CharacterTable, a: &SuperTheory, b: &SuperTheory) -> SuperTheory {
    refine_classes_to_sct(t, &a.classes().meet(b.classes()))
}

/// Every supercharacter theory of `t`, using all available threads.
pub fn all_scts(t: &CharacterTable, use_auts: bool) -> Result<EnumerationResult> {
    all_scts_with(t, &Options { use_auts, ..Options::default() })
}

pub fn all_scts_with(t: &CharacterTable, opts: &Options) -> Result<EnumerationResult> {
    let start = Instant::now();
    let auts = if opts.use_auts { automorphism_group(t) } else { Vec::new() };
    let (found, subsets_scanned) = scan(t, opts, &auts)?;
    let step1_theories = found.len();

    let mut meets_computed = 0;
    let mut done: Vec<SuperTheory> = Vec::new();
    let mut seen: HashSet<SuperTheory> = found.iter().cloned().collect();
    let mut queue: Vec<SuperTheory> = found.into_iter().rev().collect();
    while let Some(theory) = queue.pop() {
        for other in &done {
            if theory.refines(other) || other.refines(&theory) {
                continue;
            }
            meets_computed += 1;
            let meet = meet_sct(t, &theory, other);
            if seen.insert(meet.clone()) {
                queue.push(meet);
            }
        }
        done.push(theory);
    }
    done.push(SuperTheory::coarse(t.k()));
    let theories: BTreeSet<SuperTheory> = done.into_iter().collect();
    Ok(EnumerationResult {
        theories: theories.into_iter().collect(),
        stats: Stats { subsets_scanned, step1_theories, meets_computed, elapsed: start.elapsed() },
    })
}

/// Calls `f` on every partition of the classes having `{0}` as a block.
pub fn for_each_identity_partition(k: usize, mut f: impl FnMut(Partition)) {
    if k == 0 {
        return;
    }
    // restricted growth string; label 0 is reserved for the identity class
    let mut labels = vec![0usize; k];
    fn go(labels: &mut [usize], pos: usize, max: usize, f: &mut dyn FnMut(Partition)) {
        if pos == labels.len() {
            f(Partition::from_keys(labels));
            return;
        }
        for label in 1..=max + 1 {
            labels[pos] = label;
            go(labels, pos + 1, max.max(label), f);
        }
    }
    go(&mut labels, 1, 0, &mut f);
}

/// Independent enumeration over every partition of the classes; feasible for small `k` only.
pub fn brute_force_all_scts(t: &CharacterTable, max_k: usize) -> Result<Vec<SuperTheory>> {
    let k = t.k();
    if k > max_k {
        return Err(Error::TooLarge { k, max: max_k });
    }
    let mut out = BTreeSet::new();
    for_each_identity_partition(k, |classes| {
        let chars = irpt(t, classes.blocks());
        if chars.block_count() == classes.block_count() && clpt(t, chars.blocks()) == classes {
            out.insert(SuperTheory::new_unchecked(chars, classes));
        }
    });
    Ok(out.into_iter().collect())
}

pub const HISTOGRAM_MAX_K: usize = 12;

/// Tally of refinement runs by number of Irpt/Clpt applications, over every
/// partition of the classes with `{0}` as a block.
pub fn refinement_histogram(t: &CharacterTable) -> Result<BTreeMap<usize, u64>> {
    let k = t.k();
    if k > HISTOGRAM_MAX_K {
        return Err(Error::TooLarge { k, max: HISTOGRAM_MAX_K });
    }
    let mut tally = BTreeMap::new();
    for_each_identity_partition(k, |classes| {
        *tally.entry(refine_classes(t, &classes).steps).or_insert(0) += 1;
    });
    Ok(tally)
}

/// Cover relations `(a, b)` with `theories[a] ⪯ theories[b]` and nothing strictly between.
pub fn lattice_edges(theories: &[SuperTheory]) -> Vec<(usize, usize)> {
    let n = theories.len();
    let below = |a: usize, b: usize| a != b && theories[a].refines(&theories[b]);
    let mut edges = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if below(a, b) && !(0..n).any(|c| below(a, c) && below(c, b)) {
                edges.push((a, b));
            }
        }
    }
    edges
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chartable::tests::fixture;

    #[test]
    fn scan_order_counts() {
        for (k, expected) in [(2, 0), (3, 2), (5, 10), (9, 162)] {
            assert_eq!(scan_order(k).count(), expected);
        }
        let c4: Vec<u64> = scan_order(4).collect();
        assert_eq!(c4, vec![0b0010, 0b0100, 0b1000]);
        assert!(scan_order(9).all(|m| m & 1 == 0 && m < 1 << 9));
    }

    #[test]
    fn scanned_subsets_match_half_rule() {
        // 2^(k-2) - 1 subsets survive the cutoff
        let a7 = fixture("a7");
        let (_, scanned) = scan(&a7, &Options { workers: 1, use_auts: false, progress: None }, &[]).unwrap();
        assert_eq!(scanned, 127);
        let a6 = fixture("a6");
        let (_, scanned) = scan(&a6, &Options { workers: 3, use_auts: false, progress: None }, &[]).unwrap();
        assert_eq!(scanned, 31);
    }

    #[test]
    fn step1_examples() {
        let c3 = fixture("c3");
        assert_eq!(step1_scan(&c3, false).unwrap(), vec![SuperTheory::finest(3)]);
        let a5 = fixture("a5");
        for use_auts in [false, true] {
            let found = step1_scan(&a5, use_auts).unwrap();
            assert_eq!(found.len(), 2);
            assert_eq!(found[0].classes().to_string(), "[[0],[1],[2],[3,4]]");
            assert_eq!(found[1], SuperTheory::finest(5));
        }
    }

    #[test]
    fn meet_examples() {
        let a5 = fixture("a5");
        let all = all_scts(&a5, false).unwrap().theories;
        for x in &all {
            assert_eq!(meet_sct(&a5, x, x), *x);
            assert_eq!(meet_sct(&a5, x, &SuperTheory::finest(5)), SuperTheory::finest(5));
            for y in &all {
                let m = meet_sct(&a5, x, y);
                assert!(m.refines(x) && m.refines(y));
            }
        }
    }

    #[test]
    fn counts() {
        for (name, count) in [("c2", 1), ("c3", 2), ("s3", 2), ("a5", 3), ("psl2_7", 4), ("a6", 7), ("d8", 9)] {
            let t = fixture(name);
            let plain = all_scts(&t, false).unwrap();
            assert_eq!(plain.theories.len(), count, "{name}");
            assert_eq!(all_scts(&t, true).unwrap().theories, plain.theories, "{name}");
            assert!(plain.theories.contains(&SuperTheory::finest(t.k())));
            assert!(plain.theories.contains(&SuperTheory::coarse(t.k())));
        }
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(brute_force_all_scts(&fixture("c2"), 8).unwrap().len(), 1);
        assert_eq!(brute_force_all_scts(&fixture("s3"), 8).unwrap().len(), 2);
        let c5 = brute_force_all_scts(&fixture("c5"), 8).unwrap();
        let blocks: Vec<usize> = c5.iter().map(SuperTheory::block_count).collect();
        assert_eq!(blocks, vec![2, 3, 5]);
        assert!(matches!(brute_force_all_scts(&fixture("a7"), 8), Err(Error::TooLarge { k: 9, max: 8 })));
    }

    #[test]
    fn partition_counts_are_bell_numbers() {
        for (k, bell) in [(1, 1), (2, 1), (3, 2), (5, 15), (9, 4140)] {
            let mut n = 0;
            for_each_identity_partition(k, |p| {
                assert!(p.contains_block(&BitSet::singleton(0)));
                n += 1;
            });
            assert_eq!(n, bell);
        }
    }

    #[test]
    fn histogram_examples() {
        assert_eq!(refinement_histogram(&fixture("c2")).unwrap(), BTreeMap::from([(0, 1)]));
        assert_eq!(refinement_histogram(&fixture("s3")).unwrap(), BTreeMap::from([(0, 2)]));
        assert_eq!(refinement_histogram(&fixture("a5")).unwrap(), BTreeMap::from([(0, 3), (1, 12)]));
    }

    #[test]
    fn lattice_of_a5_is_a_chain() {
        let a5 = fixture("a5");
        let all = all_scts(&a5, true).unwrap().theories;
        assert_eq!(all.last(), Some(&SuperTheory::finest(5)));
        assert_eq!(lattice_edges(&all), vec![(1, 0), (2, 1)]);
        assert!(lattice_edges(&all_scts(&fixture("c2"), true).unwrap().theories).is_empty());
    }
}
