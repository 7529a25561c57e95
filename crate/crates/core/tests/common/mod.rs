#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use supercharacter::auts::{automorphism_group, galois_automorphisms};
use supercharacter::sct::{clpt, irpt, is_sct, refine_chars_to_sct, refine_classes_to_sct, verify_schur_closure, verify_supercharacter_products};
use supercharacter::{BitSet, CharacterTable, Partition, SuperTheory};

pub const ALL: [&str; 14] = ["c2", "c3", "c4", "c5", "c7", "s3", "d8", "q8", "a4", "a5", "a6", "psl2_7", "a7", "m11"];

/// Fixtures with at most 8 classes.
pub const SMALL: [&str; 11] = ["c2", "c3", "c4", "c5", "c7", "s3", "d8", "q8", "a4", "a5", "a6"];

/// Theory counts from an independent floating-point brute force over all
/// class partitions.
pub const EXPECTED_COUNTS: [(&str, usize); 14] = [
    ("c2", 1),
    ("c3", 2),
    ("c4", 3),
    ("c5", 3),
    ("c7", 4),
    ("s3", 2),
    ("d8", 9),
    ("q8", 9),
    ("a4", 3),
    ("a5", 3),
    ("a6", 7),
    ("psl2_7", 4),
    ("a7", 3),
    ("m11", 5),
];

/// Class partitions of every theory, from the same brute force.
pub const EXPECTED_CLASSES: [(&str, &[&str]); 9] = [
    ("a4", &["[[0],[1,2,3]]", "[[0],[1],[2,3]]", "[[0],[1],[2],[3]]"]),
    ("a5", &["[[0],[1,2,3,4]]", "[[0],[1],[2],[3,4]]", "[[0],[1],[2],[3],[4]]"]),
    ("c4", &["[[0],[1,2,3]]", "[[0],[1,3],[2]]", "[[0],[1],[2],[3]]"]),
    ("c5", &["[[0],[1,2,3,4]]", "[[0],[1,4],[2,3]]", "[[0],[1],[2],[3],[4]]"]),
    ("c7", &["[[0],[1,2,3,4,5,6]]", "[[0],[1,2,4],[3,5,6]]", "[[0],[1,6],[2,5],[3,4]]", "[[0],[1],[2],[3],[4],[5],[6]]"]),
    ("psl2_7", &["[[0],[1,2,3,4,5]]", "[[0],[1,3],[2],[4,5]]", "[[0],[1],[2],[3],[4,5]]", "[[0],[1],[2],[3],[4],[5]]"]),
    (
        "a6",
        &[
            "[[0],[1,2,3,4,5,6]]",
            "[[0],[1,4],[2,3],[5,6]]",
            "[[0],[1],[2,3],[4],[5,6]]",
            "[[0],[1,4],[2,3],[5],[6]]",
            "[[0],[1],[2],[3],[4],[5,6]]",
            "[[0],[1],[2,3],[4],[5],[6]]",
            "[[0],[1],[2],[3],[4],[5],[6]]",
        ],
    ),
    ("a7", &["[[0],[1,2,3,4,5,6,7,8]]", "[[0],[1],[2],[3],[4],[5],[6],[7,8]]", "[[0],[1],[2],[3],[4],[5],[6],[7],[8]]"]),
    (
        "m11",
        &[
            "[[0],[1,2,3,4,5,6,7,8,9]]",
            "[[0],[1],[2],[3],[4],[5],[6,7],[8,9]]",
            "[[0],[1],[2],[3],[4],[5],[6,7],[8],[9]]",
            "[[0],[1],[2],[3],[4],[5],[6],[7],[8,9]]",
            "[[0],[1],[2],[3],[4],[5],[6],[7],[8],[9]]",
        ],
    ),
];

pub fn fixture_path(name: &str) -> String {
    format!("{}/fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"))
}

pub fn fixture(name: &str) -> CharacterTable {
    CharacterTable::from_path(fixture_path(name)).unwrap()
}

pub fn expected_count(name: &str) -> usize {
    EXPECTED_COUNTS.iter().find(|(n, _)| *n == name).unwrap().1
}

/// Every set partition of `0..n`, as label vectors.
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(labels: &mut Vec<usize>, n: usize, max: usize, out: &mut Vec<Vec<usize>>) {
        if labels.len() == n {
            out.push(labels.clone());
            return;
        }
        for label in 0..=max {
            labels.push(label);
            go(labels, n, max.max(label + 1), out);
            labels.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), n, 0, &mut out);
    out
}

/// Supercharacter theories straight from the definition, in floating point:
/// `|X| = |K|`, `{1}` a block of `K`, and every `σ_X` constant on every
/// block of `K`. Exponential; meant for `k ≤ 6`.
pub fn definitional_theories(t: &CharacterTable) -> BTreeSet<(Vec<usize>, Vec<usize>)> {
    let k = t.k();
    let values: Vec<Vec<(f64, f64)>> = (0..k).map(|i| t.row(i).iter().map(|v| v.to_complex()).collect()).collect();
    let degree: Vec<f64> = (0..k).map(|i| values[i][0].0).collect();
    let char_partitions = set_partitions(k);
    let class_partitions: Vec<Vec<usize>> = set_partitions(k - 1)
        .into_iter()
        .map(|rest| std::iter::once(0).chain(rest.into_iter().map(|l| l + 1)).collect())
        .collect();
    let mut out = BTreeSet::new();
    for xs in &char_partitions {
        let nx = xs.iter().max().unwrap() + 1;
        // σ_X on every class
        let mut sigma = vec![vec![(0.0, 0.0); k]; nx];
        for (i, &x) in xs.iter().enumerate() {
            for j in 0..k {
                sigma[x][j].0 += degree[i] * values[i][j].0;
                sigma[x][j].1 += degree[i] * values[i][j].1;
            }
        }
        for ks in &class_partitions {
            let nk = ks.iter().max().unwrap() + 1;
            if nk != nx {
                continue;
            }
            let constant = (0..k).all(|j| {
                let rep = ks.iter().position(|&b| b == ks[j]).unwrap();
                sigma.iter().all(|s| (s[j].0 - s[rep].0).abs() < 1e-6 && (s[j].1 - s[rep].1).abs() < 1e-6)
            });
            if constant {
                out.insert((xs.clone(), ks.clone()));
            }
        }
    }
    out
}

/// Canonical label vector of a partition (blocks numbered by least element).
pub fn labels(p: &Partition) -> Vec<usize> {
    p.labels()
}

pub fn random_partition(rng: &mut ChaCha8Rng, n: usize, identity_block: bool) -> Partition {
    let blocks = rng.gen_range(1..=n);
    let keys: Vec<usize> = (0..n)
        .map(|x| if identity_block && x == 0 { usize::MAX } else { rng.gen_range(0..blocks) })
        .collect();
    Partition::from_keys(&keys)
}

/// Random coarsening: blocks of `p` merged at random.
pub fn random_coarsening(rng: &mut ChaCha8Rng, p: &Partition) -> Partition {
    let targets = rng.gen_range(1..=p.block_count());
    let merge: Vec<usize> = (0..p.block_count()).map(|_| rng.gen_range(0..targets)).collect();
    let labels = p.labels();
    Partition::from_keys(&labels.iter().map(|&l| merge[l]).collect::<Vec<_>>())
}

/// Checks the four claims of the main theorem, membership of the identity
/// blocks, monotonicity of both maps, and the refinement corollaries, on
/// `samples` random partitions. Returns the violations found.
pub fn property_suite(t: &CharacterTable, theories: &[SuperTheory], samples: usize, seed: u64) -> Vec<String> {
    let k = t.k();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = Vec::new();
    let identity = BitSet::singleton(0);
    for n in 0..samples {
        let classes = random_partition(&mut rng, k, n % 2 == 0);
        let chars = random_partition(&mut rng, k, n % 3 == 0);
        let ik = irpt(t, classes.blocks());
        let cx = clpt(t, chars.blocks());
        let cik = clpt(t, ik.blocks());
        let icx = irpt(t, cx.blocks());
        let k_is_sct = is_sct(t, &ik, &classes);
        let x_is_sct = is_sct(t, &chars, &cx);
        let mut check = |ok: bool, what: &str, p: &Partition| {
            if !ok {
                bad.push(format!("{}: {what} fails for {p}", t.name()));
            }
        };
        check(classes.block_count() <= ik.block_count(), "|K| <= |Irpt(K)|", &classes);
        check((classes.block_count() == ik.block_count()) == k_is_sct, "equality iff theory (classes)", &classes);
        check(chars.block_count() <= cx.block_count(), "|X| <= |Clpt(X)|", &chars);
        check((chars.block_count() == cx.block_count()) == x_is_sct, "equality iff theory (chars)", &chars);
        check(cik.is_refinement(&classes), "Clpt(Irpt(K)) refines K", &classes);
        check((cik == classes) == k_is_sct, "Clpt(Irpt(K)) = K iff theory", &classes);
        check(icx.is_refinement(&chars), "Irpt(Clpt(X)) refines X", &chars);
        check((icx == chars) == x_is_sct, "Irpt(Clpt(X)) = X iff theory", &chars);
        check(cx.contains_block(&identity), "{1} in Clpt(X)", &chars);
        check(ik.contains_block(&identity), "{1_G} in Irpt(K)", &classes);

        let coarser_classes = random_coarsening(&mut rng, &classes);
        check(ik.is_refinement(&irpt(t, coarser_classes.blocks())), "Irpt monotone", &classes);
        let coarser_chars = random_coarsening(&mut rng, &chars);
        check(cx.is_refinement(&clpt(t, coarser_chars.blocks())), "Clpt monotone", &chars);

        // coarsest theory below a partition
        let from_classes = refine_classes_to_sct(t, &classes);
        check(from_classes.classes().is_refinement(&classes), "refined classes refine K", &classes);
        check(is_sct(t, from_classes.chars(), from_classes.classes()), "refinement is a theory", &classes);
        for other in theories {
            if other.classes().is_refinement(&classes) && !other.refines(&from_classes) {
                check(false, "refinement is the coarsest theory below K", &classes);
            }
        }
        let from_chars = refine_chars_to_sct(t, &chars);
        check(from_chars.chars().is_refinement(&chars), "refined chars refine X", &chars);
        for other in theories {
            if other.chars().is_refinement(&chars) && !other.refines(&from_chars) {
                check(false, "refinement is the coarsest theory below X", &chars);
            }
        }
    }
    bad
}

/// Every theory passes `is_sct`, Schur closure and the product test, is
/// fixed by every Galois automorphism, and the list is closed under the
/// table automorphisms and under meets. Returns the violations found.
pub fn closure_suite(t: &CharacterTable, theories: &[SuperTheory]) -> Vec<String> {
    let mut bad = Vec::new();
    let name = t.name();
    let set: BTreeSet<&SuperTheory> = theories.iter().collect();
    let galois = galois_automorphisms(t).unwrap();
    let auts = automorphism_group(t);
    for theory in theories {
        if !is_sct(t, theory.chars(), theory.classes()) {
            bad.push(format!("{name}: {theory} is not a theory"));
        }
        let schur = verify_schur_closure(t, theory).unwrap();
        bad.extend(schur.violations.iter().map(|v| format!("{name}: schur {v}")));
        let products = verify_supercharacter_products(t, theory).unwrap();
        bad.extend(products.violations.iter().map(|v| format!("{name}: products {v}")));
        for (r, g) in &galois {
            if g.apply(theory) != *theory {
                bad.push(format!("{name}: {theory} moved by Galois r = {r}"));
            }
        }
        for a in &auts {
            if !set.contains(&a.apply(theory)) {
                bad.push(format!("{name}: image of {theory} under {a} missing"));
            }
        }
        for other in theories {
            let meet = supercharacter::enumerate::meet_sct(t, theory, other);
            if !set.contains(&meet) {
                bad.push(format!("{name}: meet of {theory} and {other} missing"));
            }
        }
    }
    bad
}
