//! Table automorphisms: pairs of row and column permutations preserving every entry.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::chartable::{CharacterTable, ClassSubset};
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::sct::SuperTheory;

/// `(σ, τ)` with `values[σ(i)][τ(j)] = values[i][j]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TableAutomorphism {
    row_perm: Vec<usize>,
    col_perm: Vec<usize>,
}

impl TableAutomorphism {
    pub fn identity(k: usize) -> Self {
        TableAutomorphism { row_perm: (0..k).collect(), col_perm: (0..k).collect() }
    }

    /// Accepts the pair only if it is an automorphism of `t`.
    pub fn new(t: &CharacterTable, row_perm: Vec<usize>, col_perm: Vec<usize>) -> Option<Self> {
        let a = TableAutomorphism { row_perm, col_perm };
        a.is_automorphism_of(t).then_some(a)
    }

    pub fn row_perm(&self) -> &[usize] {
        &self.row_perm
    }

    pub fn col_perm(&self) -> &[usize] {
        &self.col_perm
    }

    pub fn is_identity(&self) -> bool {
        self.col_perm.iter().enumerate().all(|(j, &c)| j == c)
            && self.row_perm.iter().enumerate().all(|(i, &r)| i == r)
    }

    pub fn is_automorphism_of(&self, t: &CharacterTable) -> bool {
        let k = t.k();
        is_permutation(&self.row_perm, k)
            && is_permutation(&self.col_perm, k)
            && (0..k).all(|i| (0..k).all(|j| t.value_id(self.row_perm[i], self.col_perm[j]) == t.value_id(i, j)))
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &TableAutomorphism) -> TableAutomorphism {
        TableAutomorphism {
            row_perm: other.row_perm.iter().map(|&i| self.row_perm[i]).collect(),
            col_perm: other.col_perm.iter().map(|&j| self.col_perm[j]).collect(),
        }
    }

    pub fn inverse(&self) -> TableAutomorphism {
        TableAutomorphism { row_perm: invert(&self.row_perm), col_perm: invert(&self.col_perm) }
    }

    pub fn fixed_rows(&self) -> usize {
        self.row_perm.iter().enumerate().filter(|(i, &r)| *i == r).count()
    }

    pub fn fixed_cols(&self) -> usize {
        self.col_perm.iter().enumerate().filter(|(j, &c)| *j == c).count()
    }

    /// Blockwise image `(𝒳^σ, 𝒦^τ)`.
    pub fn apply(&self, theory: &SuperTheory) -> SuperTheory {
        theory.map(&self.row_perm, &self.col_perm)
    }

    pub fn apply_classes(&self, subset: &ClassSubset) -> ClassSubset {
        subset.map(&self.col_perm)
    }

    fn order(&self) -> u64 {
        let mut power = self.clone();
        let mut n = 1;
        while !power.is_identity() {
            power = power.compose(self);
            n += 1;
        }
        n
    }
}

impl fmt::Display for TableAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rows {:?} cols {:?}", self.row_perm, self.col_perm)
    }
}

fn is_permutation(p: &[usize], k: usize) -> bool {
    let mut seen = vec![false; k];
    p.len() == k && p.iter().all(|&x| x < k && !std::mem::replace(&mut seen[x], true))
}

fn invert(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (x, &y) in p.iter().enumerate() {
        inv[y] = x;
    }
    inv
}

/// Row permutation matching a column permutation, if the rows can be matched exactly.
fn rows_for(t: &CharacterTable, col_perm: &[usize]) -> Option<Vec<usize>> {
    let k = t.k();
    let mut used = vec![false; k];
    (0..k)
        .map(|i| {
            let image = (0..k).find(|&i2| !used[i2] && (0..k).all(|j| t.value_id(i2, col_perm[j]) == t.value_id(i, j)))?;
            used[image] = true;
            Some(image)
        })
        .collect()
}

fn cols_for(t: &CharacterTable, row_perm: &[usize]) -> Option<Vec<usize>> {
    let k = t.k();
    let mut used = vec![false; k];
    (0..k)
        .map(|j| {
            let image = (0..k).find(|&j2| !used[j2] && (0..k).all(|i| t.value_id(row_perm[i], j2) == t.value_id(i, j)))?;
            used[image] = true;
            Some(image)
        })
        .collect()
}

/// Canonical relabelling of signatures to small integers.
fn relabel<S: Ord + Clone>(sigs: &[S]) -> Vec<usize> {
    let ranks: BTreeMap<S, usize> = sigs.iter().cloned().collect::<BTreeSet<_>>().into_iter().zip(0..).collect();
    sigs.iter().map(|s| ranks[s]).collect()
}

/// Colour classes of columns that every automorphism must preserve,
/// refined by alternating row and column signatures until stable.
fn column_colours(t: &CharacterTable) -> Vec<usize> {
    let k = t.k();
    let sorted = |mut v: Vec<(usize, u32)>| {
        v.sort_unstable();
        v
    };
    let mut cols = relabel(
        &(0..k)
            .map(|j| (j == 0, t.class_sizes()[j], sorted((0..k).map(|i| (0, t.value_id(i, j))).collect())))
            .collect::<Vec<_>>(),
    );
    let mut rows = relabel(&(0..k).map(|i| sorted((0..k).map(|j| (cols[j], t.value_id(i, j))).collect())).collect::<Vec<_>>());
    loop {
        let new_cols =
            relabel(&(0..k).map(|j| (cols[j], sorted((0..k).map(|i| (rows[i], t.value_id(i, j))).collect()))).collect::<Vec<_>>());
        let new_rows =
            relabel(&(0..k).map(|i| (rows[i], sorted((0..k).map(|j| (new_cols[j], t.value_id(i, j))).collect()))).collect::<Vec<_>>());
        let stable = distinct(&new_cols) == distinct(&cols) && distinct(&new_rows) == distinct(&rows);
        cols = new_cols;
        rows = new_rows;
        if stable {
            return cols;
        }
    }
}

fn distinct(v: &[usize]) -> usize {
    v.iter().collect::<BTreeSet<_>>().len()
}

struct Search<'a> {
    t: &'a CharacterTable,
    colours: Vec<usize>,
    image: Vec<usize>,
    used: Vec<bool>,
    found: Vec<TableAutomorphism>,
}

impl Search<'_> {
    /// The rows restricted to the first `depth` columns must form the same
    /// multiset as the rows restricted to their images.
    fn consistent(&self, depth: usize) -> bool {
        let k = self.t.k();
        let mut src: Vec<Vec<u32>> = (0..k).map(|i| (0..depth).map(|j| self.t.value_id(i, j)).collect()).collect();
        let mut dst: Vec<Vec<u32>> =
            (0..k).map(|i| (0..depth).map(|j| self.t.value_id(i, self.image[j])).collect()).collect();
        src.sort_unstable();
        dst.sort_unstable();
        src == dst
    }

    fn extend(&mut self, depth: usize) {
        let k = self.t.k();
        if depth == k {
            if let Some(rows) = rows_for(self.t, &self.image) {
                self.found.push(TableAutomorphism { row_perm: rows, col_perm: self.image.clone() });
            }
            return;
        }
        for target in 0..k {
            if self.used[target] || self.colours[target] != self.colours[depth] {
                continue;
            }
            self.image[depth] = target;
            self.used[target] = true;
            if self.consistent(depth + 1) {
                self.extend(depth + 1);
            }
            self.used[target] = false;
        }
    }
}

/// Every table automorphism, ordered lexicographically by column permutation.
pub fn automorphism_group(t: &CharacterTable) -> Vec<TableAutomorphism> {
    let k = t.k();
    let mut search = Search { t, colours: column_colours(t), image: vec![0; k], used: vec![false; k], found: Vec::new() };
    search.used[0] = true;
    search.extend(1);
    search.found
}

/// Whether the column permutation commutes with every stored power map.
pub fn preserves_power_maps(t: &CharacterTable, a: &TableAutomorphism) -> bool {
    t.power_maps()
        .values()
        .all(|map| (0..t.k()).all(|j| map[a.col_perm[j]] == a.col_perm[map[j]]))
}

/// The subgroup of automorphisms that also respect the power maps.
pub fn power_map_automorphisms(t: &CharacterTable) -> Vec<TableAutomorphism> {
    automorphism_group(t).into_iter().filter(|a| preserves_power_maps(t, a)).collect()
}

/// Brauer's permutation lemma: an automorphism fixes as many rows as columns.
pub fn brauer_check(_t: &CharacterTable, a: &TableAutomorphism) -> bool {
    a.fixed_rows() == a.fixed_cols()
}

fn check_closed(elements: &[TableAutomorphism]) -> Result<()> {
    let set: BTreeSet<&TableAutomorphism> = elements.iter().collect();
    let closed = elements.first().is_some_and(|e| set.contains(&TableAutomorphism::identity(e.col_perm.len())))
        && elements.iter().all(|a| elements.iter().all(|b| set.contains(&a.compose(b))));
    if closed {
        Ok(())
    } else {
        Err(Error::NotClosed)
    }
}

/// Theory formed by the row orbits and column orbits of a group of automorphisms.
pub fn orbit_sct(t: &CharacterTable, subgroup: &[TableAutomorphism]) -> Result<SuperTheory> {
    check_closed(subgroup)?;
    let k = t.k();
    let row_keys: Vec<usize> = (0..k).map(|i| subgroup.iter().map(|a| a.row_perm[i]).min().unwrap()).collect();
    let col_keys: Vec<usize> = (0..k).map(|j| subgroup.iter().map(|a| a.col_perm[j]).min().unwrap()).collect();
    let theory = SuperTheory::new(t, Partition::from_keys(&row_keys), Partition::from_keys(&col_keys));
    Ok(theory.expect("orbits of a group of table automorphisms form a supercharacter theory"))
}

/// Automorphisms induced by the Galois group of the table's field, one per
/// distinct automorphism, tagged with the smallest `r` producing it.
pub fn galois_automorphisms(t: &CharacterTable) -> Result<Vec<(u32, TableAutomorphism)>> {
    let k = t.k();
    let n = t.conductor();
    let mut out: Vec<(u32, TableAutomorphism)> = Vec::new();
    for r in (1..n.max(2)).filter(|r| r.gcd(&n) == 1) {
        let rows = (0..k)
            .map(|i| {
                let image = t.row(i).iter().map(|v| v.galois(r)).collect::<Result<Vec<_>>>()?;
                t.find_row(&image)
                    .ok_or_else(|| Error::InvalidTable(format!("row {i} has no Galois conjugate under r = {r}")))
            })
            .collect::<Result<Vec<usize>>>()?;
        let cols = cols_for(t, &rows)
            .ok_or_else(|| Error::InvalidTable(format!("no column permutation matches r = {r}")))?;
        let a = TableAutomorphism { row_perm: rows, col_perm: cols };
        if !out.iter().any(|(_, b)| *b == a) {
            out.push((r, a));
        }
    }
    Ok(out)
}

/// Orbit representative of `subset` under the column action: the least image.
pub fn orbit_representative(auts: &[TableAutomorphism], subset: &ClassSubset) -> ClassSubset {
    auts.iter().map(|a| a.apply_classes(subset)).min().unwrap_or_else(|| subset.clone())
}

/// Keeps the subsets that are the least member of their orbit, paired with the orbit size.
pub fn subset_orbit_representatives<'a>(
    auts: &'a [TableAutomorphism],
    subsets: impl IntoIterator<Item = ClassSubset> + 'a,
) -> impl Iterator<Item = (ClassSubset, usize)> + 'a {
    subsets.into_iter().filter_map(move |s| {
        let orbit: BTreeSet<ClassSubset> = auts.iter().map(|a| a.apply_classes(&s)).collect();
        match orbit.first() {
            None => Some((s, 1)),
            Some(least) if *least == s => Some((s, orbit.len())),
            Some(_) => None,
        }
    })
}

fn closure(elements: &[TableAutomorphism], generators: impl IntoIterator<Item = usize>, mul: &[Vec<usize>]) -> BitSet {
    let identity = elements.iter().position(TableAutomorphism::is_identity).expect("group has an identity");
    let mut set = BitSet::singleton(identity);
    let gens: Vec<usize> = generators.into_iter().collect();
    let mut frontier = vec![identity];
    while let Some(x) = frontier.pop() {
        for &g in &gens {
            let y = mul[x][g];
            if !set.contains(y) {
                set.insert(y);
                frontier.push(y);
            }
        }
    }
    set
}

/// All subgroups of a finite group of automorphisms, each as a sorted element list.
pub fn subgroups(group: &[TableAutomorphism]) -> Result<Vec<Vec<TableAutomorphism>>> {
    check_closed(group)?;
    let index: HashMap<&TableAutomorphism, usize> = group.iter().zip(0..).collect();
    let mul: Vec<Vec<usize>> =
        group.iter().map(|a| group.iter().map(|b| index[&a.compose(b)]).collect()).collect();
    let mut found: BTreeSet<BitSet> = (0..group.len()).map(|g| closure(group, [g], &mul)).collect();
    loop {
        let current: Vec<BitSet> = found.iter().cloned().collect();
        let mut grew = false;
        for (x, a) in current.iter().enumerate() {
            for b in &current[x + 1..] {
                if a.is_subset(b) || b.is_subset(a) {
                    continue;
                }
                grew |= found.insert(closure(group, a.union(b).iter(), &mul));
            }
        }
        if !grew {
            break;
        }
    }
    let mut out: Vec<Vec<TableAutomorphism>> =
        found.iter().map(|s| s.iter().map(|x| group[x].clone()).collect()).collect();
    out.sort_by_key(|s| s.len());
    Ok(out)
}

/// Distinct theories arising as orbit theories of subgroups of `group`, sorted.
pub fn automorphism_theories(t: &CharacterTable, group: &[TableAutomorphism]) -> Result<Vec<SuperTheory>> {
    let theories: BTreeSet<SuperTheory> =
        subgroups(group)?.iter().map(|h| orbit_sct(t, h)).collect::<Result<_>>()?;
    Ok(theories.into_iter().collect())
}

/// Invariant factors `[d1, d2, …]` with `d1 | d2 | …` when the group is
/// abelian; an empty list for the trivial group and `None` otherwise.
pub fn abelian_invariants(group: &[TableAutomorphism]) -> Option<Vec<u64>> {
    if !group.iter().all(|a| group.iter().all(|b| a.compose(b) == b.compose(a))) {
        return None;
    }
    let orders: Vec<u64> = group.iter().map(TableAutomorphism::order).collect();
    let n = group.len() as u64;
    // p-primary parts from the number of elements whose order divides p^e
    let mut primary: Vec<Vec<u64>> = Vec::new();
    let mut m = n;
    let mut p = 2;
    while m > 1 {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            let rank_at = |e: u32| -> u32 {
                let count = orders.iter().filter(|&&o| p.pow(e) % o == 0).count() as u64;
                count.ilog(p)
            };
            // at_least[e - 1] cyclic factors have order at least p^e
            let mut at_least: Vec<u32> = Vec::new();
            let mut e = 1;
            while rank_at(e) > rank_at(e - 1) {
                at_least.push(rank_at(e) - rank_at(e - 1));
                e += 1;
            }
            let mut factors = Vec::new();
            for (x, &count) in at_least.iter().enumerate() {
                let longer = at_least.get(x + 1).copied().unwrap_or(0);
                factors.extend(std::iter::repeat(p.pow(x as u32 + 1)).take((count - longer) as usize));
            }
            factors.sort_unstable_by(|a, b| b.cmp(a));
            primary.push(factors);
        }
        p += 1;
    }
    let width = primary.iter().map(Vec::len).max().unwrap_or(0);
    let mut invariants: Vec<u64> =
        (0..width).map(|x| primary.iter().map(|f| f.get(x).copied().unwrap_or(1)).product()).collect();
    invariants.reverse();
    Some(invariants)
}

/// `"C2 x C2"`-style name of an abelian group, `"1"` when trivial.
pub fn abelian_name(invariants: &[u64]) -> String {
    if invariants.is_empty() {
        return "1".to_string();
    }
    invariants.iter().map(|d| format!("C{d}")).collect::<Vec<_>>().join(" x ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chartable::tests::fixture;
    use crate::sct::is_sct;

    fn set(v: &[usize]) -> BitSet {
        v.iter().copied().collect()
    }

    #[test]
    fn group_orders() {
        let expected = [
            ("c2", 1),
            ("c3", 2),
            ("c4", 2),
            ("c5", 4),
            ("c7", 6),
            ("s3", 1),
            ("a4", 2),
            ("a5", 2),
            ("psl2_7", 2),
            ("a7", 2),
            ("m11", 4),
        ];
        for (name, order) in expected {
            let t = fixture(name);
            let group = automorphism_group(&t);
            assert_eq!(group.len(), order, "{name}");
            assert!(group[0].is_identity());
            assert!(group.windows(2).all(|w| w[0].col_perm < w[1].col_perm), "{name}");
            for a in &group {
                assert!(a.is_automorphism_of(&t) && brauer_check(&t, a), "{name} {a}");
            }
            check_closed(&group).unwrap();
        }
    }

    #[test]
    fn a5_automorphism() {
        let a5 = fixture("a5");
        let group = automorphism_group(&a5);
        assert_eq!(group[1].row_perm(), &[0, 2, 1, 3, 4]);
        assert_eq!(group[1].col_perm(), &[0, 1, 2, 4, 3]);
        assert_eq!((group[1].fixed_rows(), group[1].fixed_cols()), (3, 3));
        assert_eq!(abelian_invariants(&group), Some(vec![2]));
    }

    #[test]
    fn invariant_factors() {
        let m11 = automorphism_group(&fixture("m11"));
        assert_eq!(abelian_name(&abelian_invariants(&m11).unwrap()), "C2 x C2");
        assert_eq!(abelian_name(&abelian_invariants(&automorphism_group(&fixture("c7"))).unwrap()), "C6");
        assert_eq!(abelian_name(&abelian_invariants(&automorphism_group(&fixture("c2"))).unwrap()), "1");
        assert_eq!(abelian_name(&abelian_invariants(&automorphism_group(&fixture("c5"))).unwrap()), "C4");
    }

    #[test]
    fn power_map_restriction_is_a_subgroup() {
        for name in ["a5", "psl2_7", "d8", "q8", "c5"] {
            let t = fixture(name);
            let restricted = power_map_automorphisms(&t);
            check_closed(&restricted).unwrap();
            assert!(automorphism_group(&t).len() % restricted.len() == 0);
        }
    }

    #[test]
    fn orbit_theories() {
        let a5 = fixture("a5");
        let group = automorphism_group(&a5);
        assert_eq!(orbit_sct(&a5, &group[..1]).unwrap(), SuperTheory::finest(5));
        let fused = orbit_sct(&a5, &group).unwrap();
        assert_eq!(fused.classes().to_string(), "[[0],[1],[2],[3,4]]");
        assert!(matches!(orbit_sct(&a5, &group[1..]), Err(Error::NotClosed)));

        let m11 = fixture("m11");
        let group = automorphism_group(&m11);
        assert_eq!(subgroups(&group).unwrap().len(), 5);
        let theories = automorphism_theories(&m11, &group).unwrap();
        assert_eq!(theories.len(), 4);
        assert!(!theories.contains(&SuperTheory::coarse(10)));
        let psl = fixture("psl2_7");
        assert_eq!(automorphism_theories(&psl, &automorphism_group(&psl)).unwrap().len(), 2);
    }

    #[test]
    fn galois_examples() {
        let s3 = fixture("s3");
        let gal = galois_automorphisms(&s3).unwrap();
        assert_eq!(gal.len(), 1);
        assert!(gal[0].1.is_identity());

        let a5 = fixture("a5");
        let gal = galois_automorphisms(&a5).unwrap();
        assert_eq!(gal.len(), 2);
        assert_eq!(gal[1].0, 2);
        assert_eq!(gal[1].1, automorphism_group(&a5)[1]);

        let c5 = fixture("c5");
        let gal = galois_automorphisms(&c5).unwrap();
        assert_eq!(gal.len(), 4);
        let (r, a) = &gal[1];
        assert_eq!(*r, 2);
        assert_eq!(a.fixed_rows(), 1);
        assert_eq!(a.fixed_cols(), 1);
        assert_eq!(a.order(), 4);

        for name in ["m11", "a7", "psl2_7", "q8"] {
            let t = fixture(name);
            let group = automorphism_group(&t);
            for (_, a) in galois_automorphisms(&t).unwrap() {
                assert!(group.contains(&a), "{name}");
                for theory in [SuperTheory::finest(t.k()), SuperTheory::coarse(t.k())] {
                    assert_eq!(a.apply(&theory), theory);
                }
            }
        }
    }

    #[test]
    fn orbit_representatives() {
        let a5 = fixture("a5");
        let trivial = vec![TableAutomorphism::identity(5)];
        let subsets: Vec<ClassSubset> = (1u64..32).map(BitSet::from_mask).collect();
        let passed: Vec<_> = subset_orbit_representatives(&trivial, subsets.clone()).collect();
        assert_eq!(passed.len(), 31);
        assert!(passed.iter().all(|(_, size)| *size == 1));

        let group = automorphism_group(&a5);
        let reps: Vec<_> = subset_orbit_representatives(&group, subsets.clone()).collect();
        assert_eq!(reps.iter().map(|(_, size)| size).sum::<usize>(), 31);
        assert!(reps.contains(&(set(&[3]), 2)));
        assert!(!reps.iter().any(|(s, _)| *s == set(&[4])));
        assert!(reps.contains(&(set(&[3, 4]), 1)));
        assert_eq!(orbit_representative(&group, &set(&[1, 4])), set(&[1, 3]));
    }

    #[test]
    fn images_of_theories_are_theories() {
        let t = fixture("a6");
        let group = automorphism_group(&t);
        let theory = crate::sct::refine_classes_to_sct(&t, &"[[0],[1],[2,3],[4],[5],[6]]".parse().unwrap());
        for a in &group {
            let image = a.apply(&theory);
            assert!(is_sct(&t, image.chars(), image.classes()));
        }
    }
}
