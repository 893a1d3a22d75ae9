//! Exhaustive and randomized self-checks of the harmonic analysis behind the
//! tiling results: the transform of a ball, vanishing sums of prime-power
//! roots of unity, vanishing of `p`-point measures, and the non-vanishing of
//! `μ̂_T` far from the origin.
//!
//! Each sweep compares a library routine against an independent computation
//! (direct summation or floating point evaluation) and counts disagreements.

use std::fmt;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cyclotomic::CyclotomicSum;
use crate::fourier::{check_nonvanishing, check_pair_vanishing, ft_ball};
use crate::padic::{mul_mod, Ball, Frequency, PointSet, PrimeBase};
use crate::{Error, Rational, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepOutcome {
    pub name: &'static str,
    pub cases: u64,
    pub failures: u64,
    pub first_failure: Option<String>,
}

impl SweepOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    fn from_results(name: &'static str, results: Vec<Option<String>>) -> Self {
        let cases = results.len() as u64;
        let mut failures = results.into_iter().flatten();
        let first_failure = failures.next();
        let failures = failures.count() as u64 + u64::from(first_failure.is_some());
        SweepOutcome {
            name,
            cases,
            failures,
            first_failure,
        }
    }
}

impl fmt::Display for SweepOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "ok" } else { "FAILED" };
        write!(
            f,
            "{:<24} {status}: {} cases, {} failures",
            self.name, self.cases, self.failures
        )?;
        if let Some(first) = &self.first_failure {
            write!(f, " (first: {first})")?;
        }
        Ok(())
    }
}

/// `(1/p^n)·Σ_{x mod p^n, x ∈ ball} χ̄(xξ)`: the Haar integral of
/// `χ̄_ξ` over the ball as a Riemann sum at level `n`.
pub fn riemann_ball_transform(ball: &Ball, xi: &Frequency, n: u32) -> CyclotomicSum {
    let base = ball.base();
    let modulus = base.modulus(n);
    let order = xi.order();
    let step = base.modulus(ball.level());
    let weight = Rational::new(1, modulus as i64);
    let mut sum = CyclotomicSum::zero(base, xi.exponent());
    let mut x = ball.center();
    while x < modulus {
        sum.push_root(-(mul_mod(x % order, xi.unit(), order) as i64), weight);
        x += step;
    }
    sum
}

/// Ball transforms against Riemann sums for every ball of level
/// `< max_gamma` and every `|ξ|_p ≤ p^{max_gamma}`, at levels
/// `max_gamma + 1` and `max_gamma + 2`.
pub fn ball_transform_sweep(base: PrimeBase, max_gamma: u32) -> Result<SweepOutcome> {
    let n = max_gamma + 1;
    base.dense_pow(n + 1)?;
    let frequencies = Frequency::all_up_to(base, max_gamma)?;
    let mut cases = Vec::new();
    for level in 0..max_gamma {
        for center in 0..base.modulus(level) {
            cases.push(Ball::new(base, level, center)?);
        }
    }
    let results = cases
        .par_iter()
        .flat_map_iter(|ball| {
            frequencies.iter().map(move |xi| {
                let exact = ft_ball(ball, xi).expect("same base");
                let coarse = riemann_ball_transform(ball, xi, n);
                let fine = riemann_ball_transform(ball, xi, n + 1);
                (exact.value_eq(&coarse) && coarse.value_eq(&fine))
                    .then_some(())
                    .map_or_else(|| Some(format!("{ball} at xi = {xi}")), |_| None)
            })
        })
        .collect();
    Ok(SweepOutcome::from_results("ball transform", results))
}

/// Random integer sums (coefficients in `[−5, 5]`, `γ ≤ max_gamma`) and random
/// block-constant sums: the exact zero test must agree with `|z| < 1e−9`.
pub fn vanishing_sum_sweep(
    base: PrimeBase,
    max_gamma: u32,
    samples: usize,
    seed: u64,
) -> Result<SweepOutcome> {
    base.dense_pow(max_gamma)?;
    let p = base.get();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut results = Vec::with_capacity(2 * samples);
    for i in 0..2 * samples {
        let gamma = rng.gen_range(0..=max_gamma);
        let len = p.pow(gamma) as usize;
        let coeffs: Vec<i64> = if i % 2 == 0 || gamma == 0 {
            (0..len).map(|_| rng.gen_range(-5..=5)).collect()
        } else {
            let block = len / p as usize;
            let seed: Vec<i64> = (0..block).map(|_| rng.gen_range(-5..=5)).collect();
            (0..len).map(|j| seed[j % block]).collect()
        };
        let sum = CyclotomicSum::from_integers(base, gamma, &coeffs)?;
        let exact = sum.is_zero();
        let float = sum.to_complex().norm() < 1e-9;
        results.push((exact != float).then(|| format!("{sum}: exact {exact}, float {float}")));
    }
    Ok(SweepOutcome::from_results("vanishing sums", results))
}

/// Every `p`-point subset of `Z/p^level`, every `ξ` with `1 ≤ k ≤ level`:
/// transform vanishing agrees with the pairwise distance condition.
pub fn pair_vanishing_sweep(base: PrimeBase, level: u32) -> Result<SweepOutcome> {
    let modulus = base.dense_pow(level)?;
    let mut frequencies = Vec::new();
    for k in 1..=level {
        frequencies.extend(Frequency::with_exponent(base, k)?);
    }
    let subsets: Vec<Vec<u64>> = (0..modulus).combinations(base.get() as usize).collect();
    let results = subsets
        .into_par_iter()
        .flat_map_iter(|s| {
            let s = PointSet::new(base, level, s).expect("distinct residues");
            frequencies
                .iter()
                .map(|xi| {
                    let (zero, pairwise) = check_pair_vanishing(&s, xi).expect("valid case");
                    (zero != pairwise).then(|| format!("S = {s}, xi = {xi}"))
                })
                .collect::<Vec<_>>()
        })
        .collect();
    Ok(SweepOutcome::from_results("pair vanishing", results))
}

/// Every `T ⊆ Z/p^level` with `2 ≤ |T| ≤ max_size`, every `ξ` with
/// `p^{γ_T+1} < |ξ|_p ≤ p^{γ_T+2}`: `μ̂_T(ξ) ≠ 0`.
///
/// The points are read as integers, i.e. with zero digits beyond `level`, so
/// the finest frequencies (`k = level + 1`) are still determined.
pub fn nonvanishing_sweep(base: PrimeBase, level: u32, max_size: usize) -> Result<SweepOutcome> {
    let modulus = base.dense_pow(level)?;
    base.dense_pow(level + 1)?;
    let subsets: Vec<Vec<u64>> = (2..=max_size)
        .flat_map(|size| (0..modulus).combinations(size))
        .collect();
    let results = subsets
        .into_par_iter()
        .flat_map_iter(|t| {
            let t = PointSet::new(base, level + 1, t).expect("distinct residues");
            let gamma = t.max_difference_valuation().expect("two points");
            Frequency::with_exponent(base, gamma + 2)
                .expect("within dense limit")
                .into_iter()
                .map(|xi| match check_nonvanishing(&t, &xi) {
                    Ok(true) => None,
                    Ok(false) => Some(format!("T = {t} vanishes at xi = {xi}")),
                    Err(e) => Some(format!("T = {t}, xi = {xi}: {e}")),
                })
                .collect::<Vec<_>>()
        })
        .collect();
    Ok(SweepOutcome::from_results("nonvanishing", results))
}

/// All sweeps for one prime at the size given by `max_gamma`.
pub fn run_all(base: PrimeBase, max_gamma: u32) -> Result<Vec<SweepOutcome>> {
    if max_gamma == 0 {
        return Err(Error::domain("max gamma must be at least 1"));
    }
    Ok(vec![
        ball_transform_sweep(base, max_gamma)?,
        vanishing_sum_sweep(base, max_gamma, 1000, 0x5eed)?,
        pair_vanishing_sweep(base, max_gamma.min(2))?,
        nonvanishing_sweep(base, max_gamma.min(3), 4)?,
    ])
}
