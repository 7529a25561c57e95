use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use super::CharacterTable;
use crate::cyclotomic::{Cyclotomic, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValidationFailure {
    ClassSizeSum { order: u64, sum: BigInt },
    DegreeSquareSum { order: u64, sum: BigInt },
    ZeroClassSize { class: usize },
    RowOrthogonality { row: usize, other: usize },
    ColumnOrthogonality { col: usize, other: usize },
}

impl fmt::Display for ValidationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::ClassSizeSum { order, sum } => {
                write!(f, "class sizes sum to {sum}, group order is {order}")
            }
            Self::DegreeSquareSum { order, sum } => {
                write!(f, "squared degrees sum to {sum}, group order is {order}")
            }
            Self::ZeroClassSize { class } => write!(f, "class {class} has size 0"),
            Self::RowOrthogonality { row, other } => {
                write!(f, "row orthogonality fails for rows {row} and {other}")
            }
            Self::ColumnOrthogonality { col, other } => {
                write!(f, "column orthogonality fails for columns {col} and {other}")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub failures: Vec<ValidationFailure>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.failures.is_empty() {
            return writeln!(f, "ok");
        }
        for failure in &self.failures {
            writeln!(f, "{failure}")?;
        }
        Ok(())
    }
}

impl CharacterTable {
    /// Checks class sizes, degrees and both orthogonality relations exactly.
    pub fn validate(&self) -> ValidationReport {
        let k = self.k();
        let n = self.conductor();
        let mut failures = Vec::new();

        let size_sum: BigInt = self.class_sizes().iter().map(|&s| BigInt::from(s)).sum();
        if size_sum != BigInt::from(self.order()) {
            failures.push(ValidationFailure::ClassSizeSum { order: self.order(), sum: size_sum });
        }
        let degree_sum: BigInt = (0..k).map(|i| self.degree(i).pow(2)).sum();
        if degree_sum != BigInt::from(self.order()) {
            failures.push(ValidationFailure::DegreeSquareSum { order: self.order(), sum: degree_sum });
        }
        for (j, &s) in self.class_sizes().iter().enumerate() {
            if s == 0 {
                failures.push(ValidationFailure::ZeroClassSize { class: j });
            }
        }

        let conj: Vec<Vec<Cyclotomic>> =
            (0..k).map(|i| self.row(i).iter().map(Cyclotomic::conj).collect()).collect();

        for i in 0..k {
            let weighted: Vec<Cyclotomic> = (0..k)
                .map(|j| self.value(i, j).scale(&Rational::from_integer(self.class_sizes()[j].into())))
                .collect();
            for (i2, other) in conj.iter().enumerate().skip(i) {
                let mut sum = Cyclotomic::zero(n);
                for (w, c) in weighted.iter().zip(other) {
                    sum = &sum + &(w * c);
                }
                let expected = if i == i2 { BigInt::from(self.order()) } else { BigInt::zero() };
                if sum != Cyclotomic::from_integer(n, expected) {
                    failures.push(ValidationFailure::RowOrthogonality { row: i, other: i2 });
                }
            }
        }

        for j in 0..k {
            #[allow(clippy::needless_range_loop)]
            for j2 in j..k {
                let mut sum = Cyclotomic::zero(n);
                for (i, row) in conj.iter().enumerate() {
                    sum = &sum + &(self.value(i, j) * &row[j2]);
                }
                let expected = if j != j2 {
                    Rational::zero()
                } else if self.class_sizes()[j] == 0 {
                    // already reported; avoid dividing by zero
                    continue;
                } else {
                    Rational::new(self.order().into(), self.class_sizes()[j].into())
                };
                if sum != Cyclotomic::from_rational(n, &expected) {
                    failures.push(ValidationFailure::ColumnOrthogonality { col: j, other: j2 });
                }
            }
        }
        ValidationReport { failures }
    }
}
