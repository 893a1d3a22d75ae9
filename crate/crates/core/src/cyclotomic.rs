//! Exact rational combinations of `p^γ`-th roots of unity.
//!
//! A [`CyclotomicSum`] stores the dense coefficient vector of
//! `Σ_i a_i ω^i` with `ω = e^{2πi/p^γ}`. Its exact zero test rests on the
//! classical structure of vanishing sums of prime-power roots of unity: for
//! integer coefficients, `Σ a_i ω^i = 0` exactly when `a_i = a_{i + j p^{γ−1}}`
//! for every `j < p`. Multiplying rational coefficients by a common positive
//! denominator preserves both sides of that equivalence, so the same blockwise
//! test applies verbatim to rationals.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use crate::padic::PrimeBase;
use crate::{Error, Rational, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicSum {
    base: PrimeBase,
    gamma: u32,
    coeffs: Vec<Rational>,
}

impl CyclotomicSum {
    /// The zero sum over `p^γ`-th roots of unity.
    ///
    /// # Panics
    /// If `p^γ` exceeds [`crate::padic::MAX_DENSE`].
    pub fn zero(base: PrimeBase, gamma: u32) -> Self {
        let order = base
            .dense_pow(gamma)
            .expect("root order within the dense limit");
        CyclotomicSum {
            base,
            gamma,
            coeffs: vec![Rational::zero(); order as usize],
        }
    }

    pub fn constant(base: PrimeBase, value: Rational) -> Self {
        CyclotomicSum {
            base,
            gamma: 0,
            coeffs: vec![value],
        }
    }

    pub fn from_coeffs(base: PrimeBase, gamma: u32, coeffs: Vec<Rational>) -> Result<Self> {
        let order = base.dense_pow(gamma)?;
        if coeffs.len() as u64 != order {
            return Err(Error::domain(format!(
                "expected {order} coefficients, got {}",
                coeffs.len()
            )));
        }
        Ok(CyclotomicSum {
            base,
            gamma,
            coeffs,
        })
    }

    pub fn from_integers(base: PrimeBase, gamma: u32, coeffs: &[i64]) -> Result<Self> {
        Self::from_coeffs(
            base,
            gamma,
            coeffs.iter().map(|&c| Rational::from_integer(c)).collect(),
        )
    }

    pub fn base(&self) -> PrimeBase {
        self.base
    }

    pub fn gamma(&self) -> u32 {
        self.gamma
    }

    /// `p^γ`.
    pub fn order(&self) -> u64 {
        self.coeffs.len() as u64
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Adds `weight·ω^exponent`, reducing the exponent mod `p^γ`.
    pub fn add_root(mut self, exponent: i64, weight: Rational) -> Self {
        self.push_root(exponent, weight);
        self
    }

    pub fn push_root(&mut self, exponent: i64, weight: Rational) {
        let idx = exponent.rem_euclid(self.coeffs.len() as i64) as usize;
        self.coeffs[idx] += weight;
    }

    /// The same value written over `p^{γ'}`-th roots, using `ω_γ = ω_{γ'}^{p^{γ'−γ}}`.
    pub fn lift(&self, gamma_new: u32) -> Result<Self> {
        if gamma_new < self.gamma {
            return Err(Error::domain(format!(
                "cannot lift from gamma {} down to {gamma_new}",
                self.gamma
            )));
        }
        if gamma_new == self.gamma {
            return Ok(self.clone());
        }
        let stride = self.base.modulus(gamma_new - self.gamma) as usize;
        let mut out = CyclotomicSum::from_coeffs(
            self.base,
            gamma_new,
            vec![Rational::zero(); self.coeffs.len() * stride],
        )?;
        for (i, c) in self.coeffs.iter().enumerate() {
            out.coeffs[i * stride] = *c;
        }
        Ok(out)
    }

    /// Exact test for the complex value being 0.
    pub fn is_zero(&self) -> bool {
        blocks_constant(self.base.get(), self.gamma, &self.coeffs)
    }

    /// Whether two sums have the same complex value.
    pub fn value_eq(&self, other: &CyclotomicSum) -> bool {
        self.base == other.base && (self.clone() - other.clone()).is_zero()
    }

    pub fn scale(&self, factor: Rational) -> Self {
        CyclotomicSum {
            base: self.base,
            gamma: self.gamma,
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// Floating point evaluation, for cross-checks and display.
    pub fn to_complex(&self) -> Complex64 {
        let order = self.coeffs.len() as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let angle = 2.0 * PI * i as f64 / order;
                Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN), angle)
            })
            .sum()
    }

    fn lifted_pair(self, other: Self) -> (Self, Self) {
        assert_eq!(
            self.base, other.base,
            "cyclotomic sums over different primes"
        );
        let gamma = self.gamma.max(other.gamma);
        (
            self.lift(gamma).expect("lift up"),
            other.lift(gamma).expect("lift up"),
        )
    }
}

/// The blockwise zero criterion on a coefficient vector of length `p^γ`:
/// every residue class `i mod p^{γ−1}` carries a constant coefficient.
pub(crate) fn blocks_constant<T: PartialEq + Zero>(p: u64, gamma: u32, coeffs: &[T]) -> bool {
    if gamma == 0 {
        return coeffs[0].is_zero();
    }
    let block = coeffs.len() / p as usize;
    (0..block).all(|i| {
        let first = &coeffs[i];
        coeffs[i..].iter().step_by(block).all(|c| c == first)
    })
}

impl Add for CyclotomicSum {
    type Output = CyclotomicSum;

    /// # Panics
    /// If the sums are over different primes.
    fn add(self, other: CyclotomicSum) -> CyclotomicSum {
        let (mut a, b) = self.lifted_pair(other);
        for (x, y) in a.coeffs.iter_mut().zip(b.coeffs) {
            *x += y;
        }
        a
    }
}

impl Neg for CyclotomicSum {
    type Output = CyclotomicSum;

    fn neg(mut self) -> CyclotomicSum {
        for c in &mut self.coeffs {
            *c = -*c;
        }
        self
    }
}

impl Sub for CyclotomicSum {
    type Output = CyclotomicSum;

    fn sub(self, other: CyclotomicSum) -> CyclotomicSum {
        self + (-other)
    }
}

impl fmt::Display for CyclotomicSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "] over ω_{}", self.order())
    }
}
