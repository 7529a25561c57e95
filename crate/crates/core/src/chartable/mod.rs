//! Character tables: parsing, validation and derived class-algebra data.
//!
//! Rows are irreducible characters, columns are conjugacy classes. Row 0 must
//! be the trivial character and column 0 the identity class; every entry is
//! stored in one cyclotomic field whose conductor is the lcm of the
//! conductors occurring in the input.

mod algebra;
mod kernel;
mod validate;

use std::collections::{BTreeMap, HashMap};
use std::path::Path;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::cyclotomic::{lcm, Cyclotomic, Expr};
use crate::error::{Error, Result};

pub(crate) use kernel::Kernel;
pub use validate::{ValidationFailure, ValidationReport};

/// A subset of columns, i.e. a union of conjugacy classes.
pub type ClassSubset = BitSet;
/// A subset of rows, i.e. a set of irreducible characters.
pub type CharSubset = BitSet;

#[derive(Debug)]
pub struct CharacterTable {
    name: String,
    order: u64,
    class_sizes: Vec<u64>,
    values: Vec<Vec<Cyclotomic>>,
    conductor: u32,
    class_names: Option<Vec<String>>,
    char_names: Option<Vec<String>>,
    power_maps: BTreeMap<u32, Vec<usize>>,
    /// Interned entries: equal values share an id.
    value_ids: Vec<Vec<u32>>,
    kernel: Option<Kernel>,
    structure_constants: OnceLock<Result<Vec<BigInt>, String>>,
}

#[derive(Deserialize, Serialize)]
struct RawTable {
    name: String,
    order: u64,
    class_sizes: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    classes: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    characters: Option<Vec<String>>,
    values: Vec<Vec<RawValue>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    power_maps: Option<BTreeMap<String, Vec<usize>>>,
}

#[derive(Deserialize, Serialize)]
#[serde(untagged)]
enum RawValue {
    Int(i64),
    Text(String),
}

impl CharacterTable {
    /// Parses the JSON table format. Structural requirements (square matrix,
    /// identity class first, trivial character first) are enforced here; the
    /// orthogonality relations are left to [`CharacterTable::validate`].
    pub fn from_json(document: &str) -> Result<Self> {
        let raw: RawTable = serde_json::from_str(document)?;
        let k = raw.class_sizes.len();
        if raw.values.len() != k {
            return Err(Error::Schema(format!(
                "{} rows of values for {k} class sizes",
                raw.values.len()
            )));
        }
        let mut exprs = Vec::with_capacity(k);
        for (i, row) in raw.values.iter().enumerate() {
            if row.len() != k {
                return Err(Error::Schema(format!("row {i} has {} entries, expected {k}", row.len())));
            }
            let parsed = row
                .iter()
                .enumerate()
                .map(|(j, v)| match v {
                    RawValue::Int(z) => Ok(Expr::Int((*z).into())),
                    RawValue::Text(s) => Expr::parse(s).map_err(|e| Error::Value {
                        row: i,
                        col: j,
                        source: Box::new(e),
                    }),
                })
                .collect::<Result<Vec<_>>>()?;
            exprs.push(parsed);
        }
        let conductor = exprs.iter().flatten().fold(1, |acc, e| lcm(acc, e.conductor()));
        let values = exprs
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, e)| {
                        e.eval(conductor).map_err(|err| Error::Value {
                            row: i,
                            col: j,
                            source: Box::new(err),
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let mut power_maps = BTreeMap::new();
        for (p, map) in raw.power_maps.unwrap_or_default() {
            let p: u32 = p
                .parse()
                .map_err(|_| Error::Schema(format!("power map key {p:?} is not an integer")))?;
            power_maps.insert(p, map);
        }
        let mut table = Self::from_parts(raw.name, raw.order, raw.class_sizes, values)?;
        table.class_names = raw.classes;
        table.char_names = raw.characters;
        table.power_maps = power_maps;
        table.check_names_and_maps()?;
        Ok(table)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
        Self::from_json(&text)
    }

    /// Builds a table from values already living in one common field.
    pub fn from_parts(
        name: impl Into<String>,
        order: u64,
        class_sizes: Vec<u64>,
        values: Vec<Vec<Cyclotomic>>,
    ) -> Result<Self> {
        let k = class_sizes.len();
        if k == 0 {
            return Err(Error::Schema("empty table".into()));
        }
        if values.len() != k || values.iter().any(|r| r.len() != k) {
            return Err(Error::Schema(format!("values must form a {k}x{k} matrix")));
        }
        let conductor = values[0][0].conductor();
        if values.iter().flatten().any(|v| v.conductor() != conductor) {
            return Err(Error::Schema("values live in different cyclotomic fields".into()));
        }
        if class_sizes[0] != 1 {
            return Err(Error::Schema("column 0 must be the identity class (size 1)".into()));
        }
        let one = Cyclotomic::one(conductor);
        if let Some(j) = values[0].iter().position(|v| *v != one) {
            return Err(Error::Schema(format!(
                "row 0 must be the trivial character; entry {j} is {}",
                values[0][j]
            )));
        }
        for (i, row) in values.iter().enumerate() {
            if !row[0].as_integer().is_some_and(|d| d.is_positive()) {
                return Err(Error::Schema(format!(
                    "column 0 must hold positive integer degrees; row {i} has {}",
                    row[0]
                )));
            }
        }
        let mut intern: HashMap<&Cyclotomic, u32> = HashMap::new();
        let value_ids = values
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| {
                        let next = intern.len() as u32;
                        *intern.entry(v).or_insert(next)
                    })
                    .collect()
            })
            .collect();
        let kernel = Kernel::build(&values, &class_sizes);
        Ok(CharacterTable {
            name: name.into(),
            order,
            class_sizes,
            values,
            conductor,
            class_names: None,
            char_names: None,
            power_maps: BTreeMap::new(),
            value_ids,
            kernel,
            structure_constants: OnceLock::new(),
        })
    }

    fn check_names_and_maps(&self) -> Result<()> {
        let k = self.k();
        for (what, names) in [("classes", &self.class_names), ("characters", &self.char_names)] {
            if let Some(names) = names {
                if names.len() != k {
                    return Err(Error::Schema(format!("{what} lists {} names for {k} entries", names.len())));
                }
            }
        }
        for (p, map) in &self.power_maps {
            if map.len() != k || map.iter().any(|&j| j >= k) {
                return Err(Error::Schema(format!("power map {p} is not a map on {k} classes")));
            }
        }
        Ok(())
    }

    /// Serializes back to the JSON table format with canonical value strings.
    pub fn to_json(&self) -> String {
        let raw = RawTable {
            name: self.name.clone(),
            order: self.order,
            class_sizes: self.class_sizes.clone(),
            classes: self.class_names.clone(),
            characters: self.char_names.clone(),
            values: self
                .values
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|v| match v.as_integer().and_then(|z| i64::try_from(z).ok()) {
                            Some(z) => RawValue::Int(z),
                            None => RawValue::Text(v.to_string()),
                        })
                        .collect()
                })
                .collect(),
            power_maps: (!self.power_maps.is_empty()).then(|| {
                self.power_maps.iter().map(|(p, m)| (p.to_string(), m.clone())).collect()
            }),
        };
        serde_json::to_string_pretty(&raw).expect("table serializes")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Number of classes, equal to the number of irreducible characters.
    pub fn k(&self) -> usize {
        self.class_sizes.len()
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn class_sizes(&self) -> &[u64] {
        &self.class_sizes
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn value(&self, row: usize, col: usize) -> &Cyclotomic {
        &self.values[row][col]
    }

    pub fn row(&self, row: usize) -> &[Cyclotomic] {
        &self.values[row]
    }

    pub(crate) fn value_id(&self, row: usize, col: usize) -> u32 {
        self.value_ids[row][col]
    }

    /// Degree `χ_i(1)`.
    pub fn degree(&self, row: usize) -> BigInt {
        self.values[row][0].as_integer().expect("degrees are integers")
    }

    pub fn class_names(&self) -> Option<&[String]> {
        self.class_names.as_deref()
    }

    pub fn char_names(&self) -> Option<&[String]> {
        self.char_names.as_deref()
    }

    pub fn power_maps(&self) -> &BTreeMap<u32, Vec<usize>> {
        &self.power_maps
    }

    pub(crate) fn kernel(&self) -> Option<&Kernel> {
        self.kernel.as_ref()
    }

    /// Index of the column equal to `column`, if any.
    pub(crate) fn find_column(&self, column: &[Cyclotomic]) -> Option<usize> {
        (0..self.k()).find(|&j| (0..self.k()).all(|i| self.values[i][j] == column[i]))
    }

    pub(crate) fn find_row(&self, row: &[Cyclotomic]) -> Option<usize> {
        self.values.iter().position(|r| r.as_slice() == row)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn fixture(name: &str) -> CharacterTable {
        let path = format!("{}/fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"));
        CharacterTable::from_path(path).unwrap()
    }

    #[test]
    fn parses_fixtures_with_expected_conductors() {
        let s3 = fixture("s3");
        assert_eq!((s3.k(), s3.conductor(), s3.class_sizes()), (3, 1, &[1u64, 3, 2][..]));
        let a5 = fixture("a5");
        assert_eq!((a5.k(), a5.conductor()), (5, 5));
        assert_eq!(fixture("m11").conductor(), 88);
        assert_eq!(fixture("c4").power_maps()[&2], vec![0, 2, 0, 2]);
    }

    #[test]
    fn malformed_value_reports_location() {
        let doc = r#"{"name":"x","order":2,"class_sizes":[1,1],"values":[[1,1],[1,"E(4"]]}"#;
        match CharacterTable::from_json(doc) {
            Err(Error::Value { row: 1, col: 1, source }) => {
                assert!(matches!(*source, Error::Syntax { .. }))
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn structural_violations_rejected() {
        let non_square = r#"{"name":"x","order":2,"class_sizes":[1,1],"values":[[1,1],[1]]}"#;
        assert!(matches!(CharacterTable::from_json(non_square), Err(Error::Schema(_))));
        let bad_row0 = r#"{"name":"x","order":2,"class_sizes":[1,1],"values":[[1,-1],[1,1]]}"#;
        assert!(matches!(CharacterTable::from_json(bad_row0), Err(Error::Schema(_))));
        let bad_col0 = r#"{"name":"x","order":2,"class_sizes":[1,1],"values":[[1,1],["E(4)",1]]}"#;
        assert!(matches!(CharacterTable::from_json(bad_col0), Err(Error::Schema(_))));
        let bad_sizes = r#"{"name":"x","order":2,"class_sizes":[2,1],"values":[[1,1],[1,-1]]}"#;
        assert!(matches!(CharacterTable::from_json(bad_sizes), Err(Error::Schema(_))));
        let bad_map = r#"{"name":"x","order":2,"class_sizes":[1,1],"values":[[1,1],[1,-1]],"power_maps":{"2":[0,5]}}"#;
        assert!(matches!(CharacterTable::from_json(bad_map), Err(Error::Schema(_))));
        assert!(matches!(CharacterTable::from_json("{"), Err(Error::Json(_))));
    }

    #[test]
    fn json_round_trip() {
        for name in ["a5", "m11", "c4"] {
            let t = fixture(name);
            let again = CharacterTable::from_json(&t.to_json()).unwrap();
            assert_eq!(again.k(), t.k());
            assert_eq!(again.conductor(), t.conductor());
            for i in 0..t.k() {
                assert_eq!(again.row(i), t.row(i));
            }
        }
    }
}
