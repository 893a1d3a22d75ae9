//! p-adic integers at finite precision, frequencies and the compact open
//! set algebra of `Z_p`.

mod ball;
mod level;

pub use ball::{Ball, CompactOpenSet, SetOp};
pub use level::{LevelSet, PointSet};

use std::fmt;

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::{Error, Rational, Result};

/// Largest modulus `p^n` accepted for residues.
pub const MAX_MODULUS: u64 = 1 << 62;

/// Largest modulus `p^n` for objects stored densely (level sets, cyclotomic
/// coefficient vectors, frequencies).
pub const MAX_DENSE: u64 = 1 << 24;

/// A prime `p`, validated at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrimeBase(u64);

impl PrimeBase {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::domain(format!("{p} is not prime")));
        }
        if p > MAX_DENSE {
            return Err(Error::domain(format!("prime {p} exceeds {MAX_DENSE}")));
        }
        Ok(PrimeBase(p))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    /// `p^n`, or an error when it exceeds [`MAX_MODULUS`].
    pub fn pow(self, n: u32) -> Result<u64> {
        self.0
            .checked_pow(n)
            .filter(|&m| m <= MAX_MODULUS)
            .ok_or_else(|| Error::domain(format!("{}^{n} exceeds {MAX_MODULUS}", self.0)))
    }

    /// `p^n` for a size limited to [`MAX_DENSE`].
    pub fn dense_pow(self, n: u32) -> Result<u64> {
        self.0
            .checked_pow(n)
            .filter(|&m| m <= MAX_DENSE)
            .ok_or_else(|| {
                Error::domain(format!(
                    "{}^{n} exceeds the dense limit {MAX_DENSE}",
                    self.0
                ))
            })
    }

    /// `p^n` for an exponent already validated by a constructor.
    #[inline]
    pub(crate) fn modulus(self, n: u32) -> u64 {
        self.0.pow(n)
    }

    /// Valuation of a nonzero integer; `None` for zero.
    pub fn valuation_u64(self, mut x: u64) -> Option<u32> {
        if x == 0 {
            return None;
        }
        let mut v = 0;
        while x.is_multiple_of(self.0) {
            x /= self.0;
            v += 1;
        }
        Some(v)
    }

    /// Valuation of `a − b` as residues mod `p^n`, or `None` when they agree.
    pub(crate) fn difference_valuation(self, a: u64, b: u64) -> Option<u32> {
        self.valuation_u64(a.abs_diff(b))
    }
}

impl fmt::Display for PrimeBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `a·b mod m` without overflow.
#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Inverse of `a` modulo `m` for `gcd(a, m) = 1`.
fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let g = (a as i128).extended_gcd(&(m as i128));
    if g.gcd != 1 {
        return None;
    }
    Some(g.x.rem_euclid(m as i128) as u64)
}

/// The p-adic valuation of a nonzero rational: `x = p^v·(a/b)` with `p ∤ a·b`.
pub fn valuation(base: PrimeBase, x: Rational) -> Result<i32> {
    if x.is_zero() {
        return Err(Error::domain("valuation of 0 is +infinity"));
    }
    let num = base
        .valuation_u64(x.numer().unsigned_abs())
        .expect("nonzero numerator");
    let den = base
        .valuation_u64(x.denom().unsigned_abs())
        .expect("nonzero denominator");
    Ok(num as i32 - den as i32)
}

/// A p-adic integer known modulo `p^precision`, i.e. the residue class
/// `residue + p^precision Z_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PAdicInt {
    base: PrimeBase,
    precision: u32,
    residue: u64,
}

impl PAdicInt {
    pub fn new(base: PrimeBase, precision: u32, residue: u64) -> Result<Self> {
        let modulus = base.pow(precision)?;
        if residue >= modulus {
            return Err(Error::domain(format!(
                "residue {residue} is not below {}^{precision}",
                base.get()
            )));
        }
        Ok(PAdicInt {
            base,
            precision,
            residue,
        })
    }

    /// The class of an integer, reduced modulo `p^precision`.
    pub fn from_i64(base: PrimeBase, precision: u32, value: i64) -> Result<Self> {
        let modulus = base.pow(precision)?;
        let residue = (value as i128).rem_euclid(modulus as i128) as u64;
        Ok(PAdicInt {
            base,
            precision,
            residue,
        })
    }

    /// The precision-0 element: no digits known, all of `Z_p`.
    pub fn unknown(base: PrimeBase) -> Self {
        PAdicInt {
            base,
            precision: 0,
            residue: 0,
        }
    }

    pub fn base(&self) -> PrimeBase {
        self.base
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    /// The residue modulo `p^k` for `k ≤ precision`.
    pub fn truncate(&self, k: u32) -> Result<Self> {
        if k > self.precision {
            return Err(Error::precision(format!(
                "cannot read {k} digits from an element known to {} digits",
                self.precision
            )));
        }
        Ok(PAdicInt {
            base: self.base,
            precision: k,
            residue: self.residue % self.base.modulus(k),
        })
    }

    /// Valuation when it is determined by the known digits.
    pub fn valuation(&self) -> Option<u32> {
        self.base.valuation_u64(self.residue)
    }

    pub fn is_unit(&self) -> bool {
        self.precision >= 1 && !self.residue.is_multiple_of(self.base.get())
    }
}

impl fmt::Display for PAdicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}^{}", self.residue, self.base, self.precision)
    }
}

/// An element `ξ = u·p^{−k}` of `Q_p/Z_p`, the domain of Fourier transforms
/// of functions supported in `Z_p`.
///
/// Any `ξ ∈ Z_p` gives the trivial character on `Z_p` and is stored as
/// `exponent = 0, unit = 0`. For `exponent ≥ 1` the unit is prime to `p`, so
/// `|ξ|_p = p^exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Frequency {
    base: PrimeBase,
    exponent: u32,
    unit: u64,
}

impl Frequency {
    /// Builds `u·p^{−k}`. Exponents `k ≤ 0` collapse to the trivial class.
    pub fn new(base: PrimeBase, exponent: i32, unit: u64) -> Result<Self> {
        if exponent <= 0 {
            return Ok(Frequency::trivial(base));
        }
        let exponent = exponent as u32;
        let order = base.dense_pow(exponent)?;
        if unit >= order {
            return Err(Error::domain(format!(
                "unit {unit} is not below {}^{exponent}",
                base.get()
            )));
        }
        if unit.is_multiple_of(base.get()) {
            return Err(Error::domain(format!(
                "unit {unit} is divisible by {}",
                base.get()
            )));
        }
        Ok(Frequency {
            base,
            exponent,
            unit,
        })
    }

    pub fn trivial(base: PrimeBase) -> Self {
        Frequency {
            base,
            exponent: 0,
            unit: 0,
        }
    }

    /// The class of a rational number in `Q_p/Z_p`.
    pub fn from_rational(base: PrimeBase, x: Rational) -> Result<Self> {
        if x.is_zero() {
            return Ok(Frequency::trivial(base));
        }
        let v = valuation(base, x)?;
        if v >= 0 {
            return Ok(Frequency::trivial(base));
        }
        let k = (-v) as u32;
        let order = base.dense_pow(k)?;
        // x = numer / (p^k · rest) with numer and rest prime to p.
        let rest = x.denom().unsigned_abs() / order;
        let numer = (*x.numer() as i128).rem_euclid(order as i128) as u64;
        let inv = inv_mod(rest % order, order).expect("denominator part prime to p");
        Frequency::new(base, k as i32, mul_mod(numer, inv, order))
    }

    pub fn base(&self) -> PrimeBase {
        self.base
    }

    /// `k` with `|ξ|_p = p^k`, or 0 for the trivial class.
    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn unit(&self) -> u64 {
        self.unit
    }

    pub fn is_trivial(&self) -> bool {
        self.exponent == 0
    }

    /// `p^k`, the order of `ξ` in `Q_p/Z_p`.
    pub fn order(&self) -> u64 {
        self.base.modulus(self.exponent)
    }

    /// The representative `u / p^k` as a rational.
    pub fn to_rational(&self) -> Rational {
        Rational::new(self.unit as i64, self.order() as i64)
    }

    /// All frequencies with `|ξ|_p = p^k` (just the trivial class for `k = 0`),
    /// in increasing unit order.
    pub fn with_exponent(base: PrimeBase, k: u32) -> Result<Vec<Frequency>> {
        if k == 0 {
            return Ok(vec![Frequency::trivial(base)]);
        }
        let order = base.dense_pow(k)?;
        Ok((1..order)
            .filter(|u| u % base.get() != 0)
            .map(|unit| Frequency {
                base,
                exponent: k,
                unit,
            })
            .collect())
    }

    /// All `p^n` classes of `p^{−n}Z_p / Z_p`, ordered by exponent then unit.
    pub fn all_up_to(base: PrimeBase, n: u32) -> Result<Vec<Frequency>> {
        let mut out = Vec::new();
        for k in 0..=n {
            out.extend(Frequency::with_exponent(base, k)?);
        }
        Ok(out)
    }
}

impl fmt::Display for Frequency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", self.unit, self.order())
        }
    }
}

/// The fractional part `{t·ξ} = m / p^k` as the pair `(k, m)`, with
/// `k = exponent(ξ)`.
///
/// Only `t mod p^k` matters, which is why `χ(tξ)` is locally constant in `t`.
pub fn fractional_part(xi: &Frequency, t: &PAdicInt) -> Result<(u32, u64)> {
    if xi.base != t.base {
        return Err(Error::domain("frequency and element use different primes"));
    }
    let k = xi.exponent;
    if k == 0 {
        return Ok((0, 0));
    }
    let t = t.truncate(k)?;
    Ok((k, mul_mod(t.residue, xi.unit, xi.order())))
}

/// Absolute value helper used by shift checks: `|x|_p ≤ 1`.
pub(crate) fn is_padic_integer(base: PrimeBase, x: Rational) -> bool {
    x.is_zero() || valuation(base, x.abs()).map(|v| v >= 0).unwrap_or(true)
}
