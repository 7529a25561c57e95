//! Exact arithmetic in cyclotomic fields `Q(ζ_N)`.
//!
//! An element is stored in the power basis `1, ζ, …, ζ^(φ(N)−1)` of
//! `Q[x]/Φ_N(x)` as integer numerators over one shared positive denominator,
//! kept in lowest terms. Within a fixed conductor this representation is
//! canonical, so structural equality and hashing are exact value equality.

mod expr;
mod field;

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use expr::Expr;
pub use field::euler_phi;
use field::Field;
pub(crate) use field::lcm;

/// Rational numbers with arbitrary precision.
pub type Rational = BigRational;

#[derive(Clone)]
pub struct Cyclotomic {
    field: Arc<Field>,
    num: Vec<BigInt>,
    den: BigInt,
}

impl Cyclotomic {
    pub fn zero(conductor: u32) -> Self {
        let field = field::field(conductor);
        let num = vec![BigInt::zero(); field.phi];
        Cyclotomic { field, num, den: BigInt::one() }
    }

    pub fn one(conductor: u32) -> Self {
        Self::from_integer(conductor, 1)
    }

    pub fn from_integer(conductor: u32, value: impl Into<BigInt>) -> Self {
        let mut z = Self::zero(conductor);
        z.num[0] = value.into();
        z
    }

    pub fn from_rational(conductor: u32, q: &Rational) -> Self {
        let mut z = Self::zero(conductor);
        z.num[0] = q.numer().clone();
        z.den = q.denom().clone();
        z.normalize();
        z
    }

    /// `ζ_n^e` embedded in the field of conductor `conductor`; `n` must divide it.
    pub fn root_of_unity(n: u32, e: i64, conductor: u32) -> Result<Self> {
        if n == 0 || conductor % n != 0 {
            return Err(Error::ConductorMismatch { n, target: conductor });
        }
        let exp = (e.rem_euclid(n as i64) as u64 * (conductor / n) as u64) % conductor as u64;
        let field = field::field(conductor);
        let num = field.powers[exp as usize].iter().map(|&c| BigInt::from(c)).collect();
        Ok(Cyclotomic { field, num, den: BigInt::one() })
    }

    /// Parses a cyclotomic expression such as `1/2*E(8)-1/2*E(8)^3` into the
    /// field of conductor `conductor`.
    pub fn parse(text: &str, conductor: u32) -> Result<Self> {
        Expr::parse(text)?.eval(conductor)
    }

    pub fn conductor(&self) -> u32 {
        self.field.n
    }

    /// Dimension of the field over `Q`, i.e. `φ(N)`.
    pub fn degree(&self) -> usize {
        self.field.phi
    }

    /// Power-basis coefficients as reduced rationals.
    pub fn coeffs(&self) -> Vec<Rational> {
        self.num
            .iter()
            .map(|c| Rational::new(c.clone(), self.den.clone()))
            .collect()
    }

    pub fn coeff(&self, i: usize) -> Rational {
        Rational::new(self.num[i].clone(), self.den.clone())
    }

    /// Integer numerators and the shared denominator of the coefficient vector.
    pub fn numerators(&self) -> (&[BigInt], &BigInt) {
        (&self.num, &self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_rational(&self) -> Option<Rational> {
        if self.num[1..].iter().all(Zero::is_zero) {
            Some(self.coeff(0))
        } else {
            None
        }
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational().filter(|q| q.is_integer()).map(|q| q.to_integer())
    }

    pub fn is_nonneg_integer(&self) -> bool {
        self.as_integer().is_some_and(|z| !z.is_negative())
    }

    fn is_rational(&self) -> bool {
        self.num[1..].iter().all(Zero::is_zero)
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -&self.den;
            for c in &mut self.num {
                *c = -&*c;
            }
        }
        if self.den.is_one() {
            return;
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                return;
            }
            g = g.gcd(c);
        }
        if !g.is_one() {
            self.den /= &g;
            for c in &mut self.num {
                *c /= &g;
            }
        }
    }

    fn check_same_field(&self, other: &Self) -> Result<()> {
        if self.field.n != other.field.n {
            return Err(Error::ConductorMismatch { n: other.field.n, target: self.field.n });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_same_field(other)?;
        let (num, den) = if self.den == other.den {
            let num = self.num.iter().zip(&other.num).map(|(a, b)| a + b).collect();
            (num, self.den.clone())
        } else {
            let num = self
                .num
                .iter()
                .zip(&other.num)
                .map(|(a, b)| a * &other.den + b * &self.den)
                .collect();
            (num, &self.den * &other.den)
        };
        let mut out = Cyclotomic { field: Arc::clone(&self.field), num, den };
        out.normalize();
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_same_field(other)?;
        if self.is_rational() {
            return Ok(other.scale_parts(&self.num[0], &self.den));
        }
        if other.is_rational() {
            return Ok(self.scale_parts(&other.num[0], &other.den));
        }
        let n = self.field.n as usize;
        let mut raw = vec![BigInt::zero(); n];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.num.iter().enumerate() {
                if !b.is_zero() {
                    raw[(i + j) % n] += a * b;
                }
            }
        }
        let mut out = self.reduce(raw, &self.den * &other.den);
        out.normalize();
        Ok(out)
    }

    fn scale_parts(&self, num: &BigInt, den: &BigInt) -> Self {
        let mut out = Cyclotomic {
            field: Arc::clone(&self.field),
            num: self.num.iter().map(|c| c * num).collect(),
            den: &self.den * den,
        };
        if out.is_zero() {
            out.den = BigInt::one();
        }
        out.normalize();
        out
    }

    /// Multiplies by a rational scalar.
    pub fn scale(&self, q: &Rational) -> Self {
        self.scale_parts(q.numer(), q.denom())
    }

    /// Reduces a vector indexed by exponents mod N into the power basis.
    fn reduce(&self, raw: Vec<BigInt>, den: BigInt) -> Self {
        let phi = self.field.phi;
        let mut num = vec![BigInt::zero(); phi];
        for (e, c) in raw.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if e < phi {
                num[e] += c;
            } else {
                for (slot, &p) in num.iter_mut().zip(&self.field.powers[e]) {
                    if p != 0 {
                        *slot += &c * p;
                    }
                }
            }
        }
        Cyclotomic { field: Arc::clone(&self.field), num, den }
    }

    /// Applies the field automorphism `ζ_N ↦ ζ_N^r`.
    pub fn galois(&self, r: u32) -> Result<Self> {
        let n = self.field.n;
        if n.gcd(&r) != 1 {
            return Err(Error::NotCoprime { r, n });
        }
        Ok(self.galois_unchecked(r))
    }

    fn galois_unchecked(&self, r: u32) -> Self {
        let n = self.field.n as u64;
        if self.is_rational() {
            return self.clone();
        }
        let mut raw = vec![BigInt::zero(); n as usize];
        for (i, c) in self.num.iter().enumerate() {
            if !c.is_zero() {
                raw[((i as u64 * r as u64) % n) as usize] += c;
            }
        }
        self.reduce(raw, self.den.clone())
    }

    /// Complex conjugate, the automorphism `ζ_N ↦ ζ_N^(N−1)`.
    pub fn conj(&self) -> Self {
        let n = self.field.n;
        if n <= 2 {
            return self.clone();
        }
        self.galois_unchecked(n - 1)
    }

    /// Embeds into the field of conductor `target`, which must be a multiple of ours.
    pub fn promote(&self, target: u32) -> Result<Self> {
        let n = self.field.n;
        if target % n != 0 {
            return Err(Error::ConductorMismatch { n, target });
        }
        let step = (target / n) as usize;
        let mut z = Self::zero(target);
        let mut raw = vec![BigInt::zero(); target as usize];
        for (i, c) in self.num.iter().enumerate() {
            raw[i * step] = c.clone();
        }
        z = z.reduce(raw, self.den.clone());
        z.normalize();
        Ok(z)
    }

    /// Floating-point value at `ζ_N = exp(2πi/N)`. Diagnostics only.
    pub fn to_complex(&self) -> (f64, f64) {
        let n = self.field.n as f64;
        let den = self.den.to_f64().unwrap_or(f64::NAN);
        let (mut re, mut im) = (0.0, 0.0);
        for (i, c) in self.num.iter().enumerate() {
            let c = c.to_f64().unwrap_or(f64::NAN) / den;
            let angle = 2.0 * std::f64::consts::PI * i as f64 / n;
            re += c * angle.cos();
            im += c * angle.sin();
        }
        (re, im)
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        self.field.n == other.field.n && self.den == other.den && self.num == other.num
    }
}

impl Eq for Cyclotomic {}

impl Hash for Cyclotomic {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.n.hash(state);
        self.num.hash(state);
        self.den.hash(state);
    }
}

impl PartialOrd for Cyclotomic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Arbitrary but total order on the canonical encoding; not a field order.
impl Ord for Cyclotomic {
    fn cmp(&self, other: &Self) -> Ordering {
        self.field
            .n
            .cmp(&other.field.n)
            .then_with(|| self.den.cmp(&other.den))
            .then_with(|| self.num.cmp(&other.num))
    }
}

impl<'a> Add<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.checked_add(rhs).expect("cyclotomic conductor mismatch")
    }
}

impl Add for Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: Cyclotomic) -> Cyclotomic {
        &self + &rhs
    }
}

impl<'a> Sub<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self + &(-rhs)
    }
}

impl Sub for Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: Cyclotomic) -> Cyclotomic {
        &self - &rhs
    }
}

impl<'a> Mul<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.checked_mul(rhs).expect("cyclotomic conductor mismatch")
    }
}

impl Mul for Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: Cyclotomic) -> Cyclotomic {
        &self * &rhs
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            field: Arc::clone(&self.field),
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

/// Canonical form `a0 + a1*E(N) + a2*E(N)^2 + …`, zero terms omitted.
impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.field.n;
        let mut first = true;
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let q = Rational::new(c.clone(), self.den.clone());
            let negative = q.is_negative();
            let mag = q.abs();
            if first {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            first = false;
            if i == 0 {
                write!(f, "{mag}")?;
                continue;
            }
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            if i == 1 {
                write!(f, "E({n})")?;
            } else {
                write!(f, "E({n})^{i}")?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclotomic[N={}]({})", self.field.n, self)
    }
}
