//! Per-conductor reduction data for `Q[x]/Φ_N(x)`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;

/// Reduction data for the `n`-th cyclotomic field in the power basis.
#[derive(Debug)]
pub(crate) struct Field {
    pub(crate) n: u32,
    pub(crate) phi: usize,
    /// `powers[e]` holds `x^e mod Φ_n` for `0 <= e < n`, as `phi` integer coefficients.
    pub(crate) powers: Vec<Vec<i64>>,
}

static FIELDS: OnceLock<Mutex<HashMap<u32, Arc<Field>>>> = OnceLock::new();

/// Shared field data for conductor `n`, built on first use.
pub(crate) fn field(n: u32) -> Arc<Field> {
    assert!(n >= 1, "conductor must be positive");
    let cache = FIELDS.get_or_init(Default::default);
    if let Some(f) = cache.lock().unwrap().get(&n) {
        return Arc::clone(f);
    }
    let built = Arc::new(Field::build(n));
    let mut guard = cache.lock().unwrap();
    Arc::clone(guard.entry(n).or_insert(built))
}

impl Field {
    fn build(n: u32) -> Field {
        let poly = cyclotomic_polynomial(n);
        let phi = poly.len() - 1;
        let mut powers = Vec::with_capacity(n as usize);
        let mut cur = vec![0i64; phi];
        cur[0] = 1;
        for _ in 0..n {
            powers.push(cur.clone());
            // multiply by x, then eliminate x^phi using the monic relation
            let top = cur[phi - 1];
            for i in (1..phi).rev() {
                cur[i] = cur[i - 1];
            }
            cur[0] = 0;
            if top != 0 {
                for (c, p) in cur.iter_mut().zip(&poly[..phi]) {
                    *c = c
                        .checked_sub(top.checked_mul(*p).expect("conductor too large"))
                        .expect("conductor too large");
                }
            }
        }
        Field { n, phi, powers }
    }
}

/// Coefficients of Φ_n, lowest degree first.
pub(crate) fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    // x^n - 1 divided by Φ_d for every proper divisor d of n
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            num = exact_div(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

fn exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let qn = num.len() - den.len();
    let mut quot = vec![0i64; qn + 1];
    for i in (0..=qn).rev() {
        // den is monic
        let c = rem[i + dn];
        quot[i] = c;
        if c != 0 {
            for (j, d) in den.iter().enumerate() {
                rem[i + j] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

/// Euler's totient.
pub fn euler_phi(n: u32) -> u32 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

pub(crate) fn lcm(a: u32, b: u32) -> u32 {
    a.lcm(&b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(8), vec![1, 0, 0, 0, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn totient_matches_polynomial_degree() {
        for n in 1..60 {
            assert_eq!(euler_phi(n) as usize, cyclotomic_polynomial(n).len() - 1, "n = {n}");
        }
    }

    #[test]
    fn powers_wrap_around() {
        let f = field(5);
        assert_eq!(f.phi, 4);
        assert_eq!(f.powers[4], vec![-1, -1, -1, -1]);
        let f = field(4);
        assert_eq!(f.powers[2], vec![-1, 0]);
        assert_eq!(f.powers[3], vec![0, -1]);
    }
}
