//! Fixed-width integer image of a table for the Clpt/Irpt hot loops.
//!
//! Entries of a genuine character table are algebraic integers, so their
//! power-basis coefficients are integers, and so are the coefficients of
//! every `σ_X(g)` and every central character value `ω_χ(Ŝ)`. When those
//! coefficients provably fit into `i128` the partition keys are computed
//! here; otherwise callers fall back to exact `Cyclotomic` arithmetic.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use crate::bitset::BitSet;
use crate::cyclotomic::Cyclotomic;

/// Headroom below `i128::MAX` for the key sums.
const KEY_BOUND_BITS: u64 = 120;

#[derive(Debug)]
pub(crate) struct Kernel {
    k: usize,
    phi: usize,
    /// `χ_i(1)·χ_i(g_j)` at `(i * k + j) * phi`.
    sigma: Vec<i128>,
    /// `|C_j|·χ_i(g_j)` at `(i * k + j) * phi`.
    omega_num: Vec<i128>,
    degrees: Vec<i128>,
}

impl Kernel {
    pub(crate) fn build(values: &[Vec<Cyclotomic>], class_sizes: &[u64]) -> Option<Kernel> {
        let k = class_sizes.len();
        let phi = values[0][0].degree();
        let mut max_coeff = BigInt::from(0);
        for v in values.iter().flatten() {
            let (num, den) = v.numerators();
            if den != &BigInt::from(1) {
                return None;
            }
            for c in num {
                if c.abs() > max_coeff {
                    max_coeff = c.abs();
                }
            }
        }
        let degrees: Vec<BigInt> = values.iter().map(|r| r[0].as_integer()).collect::<Option<_>>()?;
        let degree_sum: BigInt = degrees.iter().sum();
        let size_sum: BigInt = class_sizes.iter().map(|&s| BigInt::from(s)).sum();
        let bound = (degree_sum.clone() * degrees.iter().max()? + size_sum) * max_coeff;
        if bound.bits() >= KEY_BOUND_BITS {
            return None;
        }
        let mut sigma = vec![0i128; k * k * phi];
        let mut omega_num = vec![0i128; k * k * phi];
        for i in 0..k {
            let deg = degrees[i].to_i128()?;
            for j in 0..k {
                let (num, _) = values[i][j].numerators();
                let base = (i * k + j) * phi;
                for (c, coeff) in num.iter().enumerate() {
                    let c_int = coeff.to_i128()?;
                    sigma[base + c] = deg * c_int;
                    omega_num[base + c] = class_sizes[j] as i128 * c_int;
                }
            }
        }
        Some(Kernel {
            k,
            phi,
            sigma,
            omega_num,
            degrees: degrees.iter().map(|d| d.to_i128()).collect::<Option<_>>()?,
        })
    }

    /// Flattened `σ_X(g_j)` tuples: column `j` owns `[j * m * phi, (j + 1) * m * phi)`.
    pub(crate) fn clpt_keys(&self, family: &[BitSet]) -> Vec<i128> {
        let (k, phi, m) = (self.k, self.phi, family.len());
        let mut keys = vec![0i128; k * m * phi];
        for (x, block) in family.iter().enumerate() {
            for i in block.iter() {
                for j in 0..k {
                    let src = &self.sigma[(i * k + j) * phi..][..phi];
                    let dst = &mut keys[(j * m + x) * phi..][..phi];
                    for (d, s) in dst.iter_mut().zip(src) {
                        *d += s;
                    }
                }
            }
        }
        keys
    }

    /// Flattened `ω_χ(Ŝ)` tuples: row `i` owns `[i * m * phi, (i + 1) * m * phi)`.
    /// `None` when some value is not integral, which cannot happen for a
    /// genuine character table.
    pub(crate) fn irpt_keys(&self, family: &[BitSet]) -> Option<Vec<i128>> {
        let (k, phi, m) = (self.k, self.phi, family.len());
        let mut keys = vec![0i128; k * m * phi];
        for i in 0..k {
            for (s, block) in family.iter().enumerate() {
                let dst = &mut keys[(i * m + s) * phi..][..phi];
                for j in block.iter() {
                    let src = &self.omega_num[(i * k + j) * phi..][..phi];
                    for (d, v) in dst.iter_mut().zip(src) {
                        *d += v;
                    }
                }
                let deg = self.degrees[i];
                for d in dst.iter_mut() {
                    if *d % deg != 0 {
                        return None;
                    }
                    *d /= deg;
                }
            }
        }
        Some(keys)
    }
}
