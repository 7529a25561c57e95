//! Class-algebra quantities derived from the table.

use num_bigint::BigInt;
use num_traits::One;

use super::{CharacterTable, ClassSubset};
use crate::cyclotomic::{Cyclotomic, Rational};
use crate::error::{Error, Result};

impl CharacterTable {
    /// Permutation `π` of columns with `values[i][π(j)] = conj(values[i][j])`;
    /// `π(j)` is the class of inverses of elements in class `j`.
    pub fn inverse_class_perm(&self) -> Result<Vec<usize>> {
        let k = self.k();
        (0..k)
            .map(|j| {
                let column: Vec<Cyclotomic> = (0..k).map(|i| self.value(i, j).conj()).collect();
                self.find_column(&column).ok_or_else(|| {
                    Error::InvalidTable(format!("no column matches the conjugate of column {j}"))
                })
            })
            .collect()
    }

    /// Central character value `ω_χi(Ŝ) = Σ_{j∈S} |C_j| χ_i(g_j) / χ_i(1)`.
    pub fn omega_value(&self, row: usize, subset: &ClassSubset) -> Cyclotomic {
        let mut sum = Cyclotomic::zero(self.conductor());
        for j in subset.iter() {
            let size = Rational::from_integer(self.class_sizes()[j].into());
            sum = &sum + &self.value(row, j).scale(&size);
        }
        sum.scale(&Rational::new(BigInt::one(), self.degree(row)))
    }

    /// Coefficient of `Ĉ_l` in `Ĉ_i Ĉ_j`, by Burnside's formula.
    pub fn structure_constant(&self, i: usize, j: usize, l: usize) -> Result<Rational> {
        let n = self.conductor();
        let mut sum = Cyclotomic::zero(n);
        for chi in 0..self.k() {
            let term = &(self.value(chi, i) * self.value(chi, j)) * &self.value(chi, l).conj();
            sum = &sum + &term.scale(&Rational::new(BigInt::one(), self.degree(chi)));
        }
        let factor = Rational::new(
            BigInt::from(self.class_sizes()[i]) * self.class_sizes()[j],
            self.order().into(),
        );
        sum.scale(&factor).as_rational().ok_or_else(|| {
            Error::InvalidTable(format!("structure constant ({i}, {j}, {l}) is not rational"))
        })
    }

    /// All structure constants as integers, indexed `(i * k + j) * k + l`;
    /// computed once per table.
    pub fn structure_constants(&self) -> Result<&[BigInt]> {
        self.structure_constants
            .get_or_init(|| self.compute_structure_constants())
            .as_deref()
            .map_err(|msg| Error::InvalidTable(msg.clone()))
    }

    fn compute_structure_constants(&self) -> Result<Vec<BigInt>, String> {
        let k = self.k();
        let n = self.conductor();
        let inv_degree: Vec<Rational> =
            (0..k).map(|chi| Rational::new(BigInt::one(), self.degree(chi))).collect();
        let conj: Vec<Vec<Cyclotomic>> =
            (0..k).map(|chi| self.row(chi).iter().map(Cyclotomic::conj).collect()).collect();
        let mut out = vec![BigInt::default(); k * k * k];
        for i in 0..k {
            for j in i..k {
                let products: Vec<Cyclotomic> = (0..k)
                    .map(|chi| (self.value(chi, i) * self.value(chi, j)).scale(&inv_degree[chi]))
                    .collect();
                let factor = Rational::new(
                    BigInt::from(self.class_sizes()[i]) * self.class_sizes()[j],
                    self.order().into(),
                );
                for l in 0..k {
                    let mut sum = Cyclotomic::zero(n);
                    for chi in 0..k {
                        sum = &sum + &(&products[chi] * &conj[chi][l]);
                    }
                    let value = sum
                        .scale(&factor)
                        .as_integer()
                        .ok_or_else(|| format!("structure constant ({i}, {j}, {l}) is not an integer"))?;
                    out[(j * k + i) * k + l] = value.clone();
                    out[(i * k + j) * k + l] = value;
                }
            }
        }
        Ok(out)
    }
}
