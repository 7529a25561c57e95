//! Supercharacter theories: the Clpt/Irpt maps, refinement to the coarsest
//! theory, verification, and constructions from normal subgroups.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::chartable::{CharSubset, CharacterTable, ClassSubset};
use crate::cyclotomic::{Cyclotomic, Rational};
use crate::error::{Error, Result};
use crate::partition::Partition;

/// A pair (character partition, class partition) forming a supercharacter theory.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SuperTheory {
    chars: Partition,
    classes: Partition,
}

impl SuperTheory {
    /// Checks the pair with [`is_sct`] before accepting it.
    pub fn new(t: &CharacterTable, chars: Partition, classes: Partition) -> Option<Self> {
        is_sct(t, &chars, &classes).then_some(SuperTheory { chars, classes })
    }

    pub(crate) fn new_unchecked(chars: Partition, classes: Partition) -> Self {
        SuperTheory { chars, classes }
    }

    /// Ordinary character theory: all blocks singletons.
    pub fn finest(k: usize) -> Self {
        SuperTheory { chars: Partition::singletons(k), classes: Partition::singletons(k) }
    }

    /// `M(G)`: the identity class and the trivial character alone, everything else fused.
    pub fn coarse(k: usize) -> Self {
        SuperTheory {
            chars: Partition::identity_and_rest(k),
            classes: Partition::identity_and_rest(k),
        }
    }

    pub fn chars(&self) -> &Partition {
        &self.chars
    }

    pub fn classes(&self) -> &Partition {
        &self.classes
    }

    pub fn block_count(&self) -> usize {
        self.classes.block_count()
    }

    /// `self ⪯ other`; for theories the class and character orders agree.
    pub fn refines(&self, other: &SuperTheory) -> bool {
        self.classes.is_refinement(&other.classes)
    }

    /// Image under a row permutation and a column permutation.
    pub fn map(&self, row_perm: &[usize], col_perm: &[usize]) -> Self {
        SuperTheory { chars: self.chars.map(row_perm), classes: self.classes.map(col_perm) }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("theory serializes")
    }
}

/// Sorted by the number of superclasses, then by the class partition.
impl Ord for SuperTheory {
    fn cmp(&self, other: &Self) -> Ordering {
        self.classes.cmp(&other.classes).then_with(|| self.chars.cmp(&other.chars))
    }
}

impl PartialOrd for SuperTheory {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SuperTheory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "chars {} classes {}", self.chars, self.classes)
    }
}

/// `σ_X = Σ_{χ∈X} χ(1)χ` as a vector over the classes.
pub fn sigma_vector(t: &CharacterTable, chars: &CharSubset) -> Vec<Cyclotomic> {
    let mut out = vec![Cyclotomic::zero(t.conductor()); t.k()];
    for i in chars.iter() {
        let deg = Rational::from_integer(t.degree(i));
        for (j, slot) in out.iter_mut().enumerate() {
            *slot = &*slot + &t.value(i, j).scale(&deg);
        }
    }
    out
}

fn partition_from_flat_keys(keys: &[i128], n: usize) -> Partition {
    if n == 0 {
        return Partition::from_keys::<&[i128]>(&[]);
    }
    let stride = keys.len() / n;
    if stride == 0 {
        return Partition::whole(n);
    }
    let chunks: Vec<&[i128]> = keys.chunks(stride).collect();
    Partition::from_keys(&chunks)
}

/// Coarsest partition of the classes on which every `σ_X`, `X` in `family`, is constant.
pub fn clpt(t: &CharacterTable, family: &[CharSubset]) -> Partition {
    match t.kernel() {
        Some(kernel) => partition_from_flat_keys(&kernel.clpt_keys(family), t.k()),
        None => clpt_exact(t, family),
    }
}

/// [`clpt`] evaluated with exact cyclotomic arithmetic only.
pub fn clpt_exact(t: &CharacterTable, family: &[CharSubset]) -> Partition {
    let sigmas: Vec<Vec<Cyclotomic>> = family.iter().map(|x| sigma_vector(t, x)).collect();
    let keys: Vec<Vec<&Cyclotomic>> =
        (0..t.k()).map(|j| sigmas.iter().map(|s| &s[j]).collect()).collect();
    Partition::from_keys(&keys)
}

/// Coarsest partition of the characters on which every `ω_χ(Ŝ)`, `S` in `family`, is constant.
pub fn irpt(t: &CharacterTable, family: &[ClassSubset]) -> Partition {
    match t.kernel().and_then(|kernel| kernel.irpt_keys(family)) {
        Some(keys) => partition_from_flat_keys(&keys, t.k()),
        None => irpt_exact(t, family),
    }
}

/// [`irpt`] evaluated with exact cyclotomic arithmetic only.
pub fn irpt_exact(t: &CharacterTable, family: &[ClassSubset]) -> Partition {
    let keys: Vec<Vec<Cyclotomic>> = (0..t.k())
        .map(|i| family.iter().map(|s| t.omega_value(i, s)).collect())
        .collect();
    Partition::from_keys(&keys)
}

/// The supercharacter theory reached by a refinement run, and the number of
/// Irpt/Clpt applications made before two consecutive partitions had equal
/// block counts (0 when the start partition already belongs to a theory).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Refinement {
    pub theory: SuperTheory,
    pub steps: usize,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Classes,
    Chars,
}

/// Alternates Irpt and Clpt from `start` until two consecutive partitions
/// have equal block counts. `keep` sees every class partition produced by
/// Clpt and can abort the run.
fn alternate(
    t: &CharacterTable,
    start: Partition,
    side: Side,
    mut keep: impl FnMut(&Partition) -> bool,
) -> Option<Refinement> {
    let mut current = start;
    let mut side = side;
    let mut steps = 0;
    // block counts grow strictly until they stabilise
    let cap = 2 * t.k() + 2;
    loop {
        let next = match side {
            Side::Classes => irpt(t, current.blocks()),
            Side::Chars => {
                let next = clpt(t, current.blocks());
                if !keep(&next) {
                    return None;
                }
                next
            }
        };
        if next.block_count() == current.block_count() {
            let theory = match side {
                Side::Classes => SuperTheory { chars: next, classes: current },
                Side::Chars => SuperTheory { chars: current, classes: next },
            };
            debug_assert!(is_sct(t, &theory.chars, &theory.classes));
            return Some(Refinement { theory, steps });
        }
        current = next;
        side = match side {
            Side::Classes => Side::Chars,
            Side::Chars => Side::Classes,
        };
        steps += 1;
        assert!(steps <= cap, "refinement failed to stabilise; the table is not a character table");
    }
}

/// Coarsest supercharacter theory whose class partition refines `classes`.
pub fn refine_classes_to_sct(t: &CharacterTable, classes: &Partition) -> SuperTheory {
    refine_classes(t, classes).theory
}

/// [`refine_classes_to_sct`] together with its step count.
pub fn refine_classes(t: &CharacterTable, classes: &Partition) -> Refinement {
    assert_eq!(classes.ground_size(), t.k(), "partition is not over the classes of the table");
    alternate(t, classes.clone(), Side::Classes, |_| true).expect("unguarded refinement")
}

/// Coarsest supercharacter theory whose character partition refines `chars`.
pub fn refine_chars_to_sct(t: &CharacterTable, chars: &Partition) -> SuperTheory {
    refine_chars(t, chars).theory
}

pub fn refine_chars(t: &CharacterTable, chars: &Partition) -> Refinement {
    assert_eq!(chars.ground_size(), t.k(), "partition is not over the characters of the table");
    alternate(t, chars.clone(), Side::Chars, |_| true).expect("unguarded refinement")
}

/// Whether `(chars, classes)` is a supercharacter theory of `t`.
pub fn is_sct(t: &CharacterTable, chars: &Partition, classes: &Partition) -> bool {
    if chars.ground_size() != t.k() || classes.ground_size() != t.k() {
        return false;
    }
    let ok = chars.block_count() == classes.block_count() && clpt(t, chars.blocks()) == *classes;
    debug_assert_eq!(
        ok,
        chars.block_count() == classes.block_count() && irpt(t, classes.blocks()) == *chars,
        "Clpt and Irpt characterisations disagree"
    );
    ok
}

/// Coarsest supercharacter theory having `subset` as a superclass, or `None`
/// if `subset` is a superclass of no theory.
pub fn coarsest_sct_with_superclass(t: &CharacterTable, subset: &ClassSubset) -> Option<SuperTheory> {
    let first = irpt(t, std::slice::from_ref(subset));
    alternate(t, first, Side::Chars, |classes| classes.contains_block(subset)).map(|r| r.theory)
}

/// A normalized supercharacter `τ_X = σ_X / d_X` with `d_X = gcd{χ(1) : χ ∈ X}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizedSupercharacter {
    pub chars: CharSubset,
    pub degree_gcd: BigInt,
    pub values: Vec<Cyclotomic>,
}

pub fn normalized_supercharacters(t: &CharacterTable, theory: &SuperTheory) -> Vec<NormalizedSupercharacter> {
    theory
        .chars
        .blocks()
        .iter()
        .map(|x| {
            let degree_gcd = x.iter().map(|i| t.degree(i)).fold(BigInt::zero(), |a, b| a.gcd(&b));
            let inv = Rational::new(BigInt::one(), degree_gcd.clone());
            let values = sigma_vector(t, x).iter().map(|v| v.scale(&inv)).collect();
            NormalizedSupercharacter { chars: x.clone(), degree_gcd, values }
        })
        .collect()
}

/// Outcome of a verification pass; `violations` is empty when every check held.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub checks: usize,
    pub violations: Vec<String>,
}

impl VerifyReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Decomposes every product `τ_X τ_Y` in the basis of normalized
/// supercharacters and checks that all coefficients are nonnegative integers.
///
/// The `τ_Z` are pairwise orthogonal class functions spanning the functions
/// constant on superclasses, so the coefficient of `τ_Z` is
/// `⟨τ_X τ_Y, τ_Z⟩ / ⟨τ_Z, τ_Z⟩`; the expansion is then re-evaluated on every
/// class to confirm the product really lies in the span.
pub fn verify_supercharacter_products(t: &CharacterTable, theory: &SuperTheory) -> Result<VerifyReport> {
    let k = t.k();
    let n = t.conductor();
    let taus = normalized_supercharacters(t, theory);
    let weights: Vec<Rational> = t
        .class_sizes()
        .iter()
        .map(|&s| Rational::new(s.into(), t.order().into()))
        .collect();
    let inner = |f: &[Cyclotomic], g: &[Cyclotomic]| -> Cyclotomic {
        let mut sum = Cyclotomic::zero(n);
        for j in 0..k {
            sum = &sum + &(&f[j] * &g[j].conj()).scale(&weights[j]);
        }
        sum
    };
    let norms = taus
        .iter()
        .map(|tau| {
            inner(&tau.values, &tau.values)
                .as_rational()
                .filter(|q| q.is_positive())
                .ok_or_else(|| Error::InvalidTable(format!("supercharacter {} has no positive norm", tau.chars)))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut report = VerifyReport::default();
    for (a, tau_a) in taus.iter().enumerate() {
        for tau_b in taus.iter().skip(a) {
            let product: Vec<Cyclotomic> =
                tau_a.values.iter().zip(&tau_b.values).map(|(x, y)| x * y).collect();
            let mut rebuilt = vec![Cyclotomic::zero(n); k];
            for (z, tau_z) in taus.iter().enumerate() {
                report.checks += 1;
                let coeff = inner(&product, &tau_z.values).scale(&norms[z].recip());
                if !coeff.is_nonneg_integer() {
                    report.violations.push(format!(
                        "coefficient of tau{} in tau{} * tau{} is {coeff}",
                        tau_z.chars, tau_a.chars, tau_b.chars
                    ));
                }
                for (slot, v) in rebuilt.iter_mut().zip(&tau_z.values) {
                    *slot = &*slot + &(&coeff * v);
                }
            }
            if rebuilt != product {
                report.violations.push(format!(
                    "tau{} * tau{} is not in the span of the supercharacters",
                    tau_a.chars, tau_b.chars
                ));
            }
        }
    }
    Ok(report)
}

/// Checks that superclass sums span a Schur ring: every product `K̂ L̂` is a
/// nonnegative integer combination of superclass sums.
pub fn verify_schur_closure(t: &CharacterTable, theory: &SuperTheory) -> Result<VerifyReport> {
    let k = t.k();
    let constants = t.structure_constants()?;
    let blocks = theory.classes.blocks();
    let mut report = VerifyReport::default();
    for (a, ka) in blocks.iter().enumerate() {
        for kb in &blocks[a..] {
            let coeff = |l: usize| -> BigInt {
                let mut sum = BigInt::zero();
                for i in ka.iter() {
                    for j in kb.iter() {
                        sum += &constants[(i * k + j) * k + l];
                    }
                }
                sum
            };
            for m in blocks {
                report.checks += 1;
                let mut members = m.iter();
                let rep = members.next().expect("blocks are nonempty");
                let value = coeff(rep);
                if value.is_negative() {
                    report.violations.push(format!("coefficient of {m} in {ka} * {kb} is {value}"));
                }
                for l in members {
                    let other = coeff(l);
                    if other != value {
                        report.violations.push(format!(
                            "{ka} * {kb} has coefficients {value} and {other} on classes {rep} and {l} of {m}"
                        ));
                    }
                }
            }
        }
    }
    Ok(report)
}

fn product_support(t: &CharacterTable, a: &ClassSubset, b: &ClassSubset) -> Result<ClassSubset> {
    let k = t.k();
    let constants = t.structure_constants()?;
    Ok((0..k)
        .filter(|&l| {
            a.iter().any(|i| b.iter().any(|j| !constants[(i * k + j) * k + l].is_zero()))
        })
        .collect())
}

/// Whether the union of classes `subset` is a (normal) subgroup.
pub fn is_subgroup(t: &CharacterTable, subset: &ClassSubset) -> Result<bool> {
    Ok(subset.contains(0) && product_support(t, subset, subset)?.is_subset(subset))
}

/// Normal subgroups as class subsets: all intersections of character kernels,
/// sorted by size and then lexicographically.
pub fn normal_subgroups_from_table(t: &CharacterTable) -> Vec<ClassSubset> {
    let k = t.k();
    let mut found: BTreeSet<(usize, ClassSubset)> = BTreeSet::new();
    let mut frontier = vec![BitSet::full(k)];
    for i in 0..k {
        let kernel: ClassSubset = (0..k).filter(|&j| t.value(i, j) == t.value(i, 0)).collect();
        frontier.push(kernel);
    }
    while let Some(s) = frontier.pop() {
        let order: usize = s.iter().map(|j| t.class_sizes()[j] as usize).sum();
        if !found.insert((order, s.clone())) {
            continue;
        }
        let meets: Vec<ClassSubset> = found.iter().map(|(_, other)| s.intersection(other)).collect();
        frontier.extend(meets);
    }
    found.into_iter().map(|(_, s)| s).collect()
}

/// Supercharacter theory generated by a family of normal subgroups: close the
/// family under products and intersections, split the classes by the
/// smallest member containing them, and refine that partition to a theory.
pub fn sct_from_normal_family(t: &CharacterTable, family: &[ClassSubset]) -> Result<SuperTheory> {
    let k = t.k();
    for s in family {
        if s.last().is_some_and(|m| m >= k) || !is_subgroup(t, s)? {
            return Err(Error::NotASubgroup(s.to_string()));
        }
    }
    // products, starting from the trivial subgroup
    let mut products: BTreeSet<ClassSubset> = BTreeSet::from([BitSet::singleton(0)]);
    let mut queue: Vec<ClassSubset> = family.to_vec();
    while let Some(s) = queue.pop() {
        if !products.insert(s.clone()) {
            continue;
        }
        for other in products.clone() {
            queue.push(product_support(t, &s, &other)?);
        }
    }
    // intersections, including the whole group
    let mut closed: BTreeSet<ClassSubset> = BTreeSet::from([BitSet::full(k)]);
    let mut queue: Vec<ClassSubset> = products.into_iter().collect();
    while let Some(s) = queue.pop() {
        if !closed.insert(s.clone()) {
            continue;
        }
        for other in closed.clone() {
            queue.push(s.intersection(&other));
        }
    }
    let keys: Vec<ClassSubset> = (0..k)
        .map(|j| {
            closed
                .iter()
                .filter(|n| n.contains(j))
                .fold(BitSet::full(k), |acc, n| acc.intersection(n))
        })
        .collect();
    Ok(refine_classes_to_sct(t, &Partition::from_keys(&keys)))
}
