//! Exact Fourier transforms of objects supported in `Z_p`.
//!
//! The transform is `μ̂(ξ) = ∫ χ̄(ξx) dμ(x)` with `χ(x) = e^{2πi{x}}`. Every
//! object here is supported in `Z_p`, so its transform only depends on
//! `ξ mod Z_p` and is evaluated at a [`Frequency`]. Transform values at
//! `|ξ|_p = p^k` are exact sums over `p^k`-th roots of unity.

use crate::cyclotomic::CyclotomicSum;
use crate::padic::{
    fractional_part, is_padic_integer, mul_mod, Ball, CompactOpenSet, Frequency, LevelSet, PointSet,
};
use crate::{Error, Rational, Result};

/// An exact transform value.
pub type FtValue = CyclotomicSum;

/// Transform of the indicator of `c + p^kZ_p`:
/// `χ̄(cξ)·p^{−k}` when `|ξ|_p ≤ p^k`, and 0 otherwise.
pub fn ft_ball(ball: &Ball, xi: &Frequency) -> Result<FtValue> {
    same_base(ball.base().get(), xi)?;
    let base = ball.base();
    let e = xi.exponent();
    let value = CyclotomicSum::zero(base, e);
    if e > ball.level() {
        return Ok(value);
    }
    let m = mul_mod(ball.center() % xi.order(), xi.unit(), xi.order());
    Ok(value.add_root(-(m as i64), ball.measure()))
}

/// Transform of `μ_T = Σ_{t∈T} δ_t`: `Σ_t χ̄(tξ)`.
pub fn ft_point_measure(t_set: &PointSet, xi: &Frequency) -> Result<FtValue> {
    same_base(t_set.base().get(), xi)?;
    let mut value = CyclotomicSum::zero(t_set.base(), xi.exponent());
    let one = Rational::from_integer(1);
    for t in t_set.elements() {
        let (_, m) = fractional_part(xi, &t)?;
        value.push_root(-(m as i64), one);
    }
    Ok(value)
}

/// Transform of a compact open set, summed ball by ball.
pub fn ft_compact_open(set: &CompactOpenSet, xi: &Frequency) -> Result<FtValue> {
    same_base(set.base().get(), xi)?;
    let mut value = CyclotomicSum::zero(set.base(), xi.exponent());
    for ball in set.balls() {
        value = value + ft_ball(ball, xi)?;
    }
    Ok(value)
}

/// Transform of the union of level-`n` balls described by a level set.
pub fn ft_level_set(omega: &LevelSet, xi: &Frequency) -> Result<FtValue> {
    same_base(omega.base().get(), xi)?;
    let mut value = CyclotomicSum::zero(omega.base(), xi.exponent());
    if xi.exponent() > omega.level() {
        return Ok(value);
    }
    let weight = Rational::new(1, omega.modulus() as i64);
    let order = xi.order();
    for x in omega.members() {
        value.push_root(-(mul_mod(x % order, xi.unit(), order) as i64), weight);
    }
    Ok(value)
}

/// Both sides of the vanishing criterion for a `p`-point measure: whether
/// `μ̂_S(ξ) = 0` and whether `|(s − s')ξ|_p = p` for all distinct pairs.
/// The two are computed independently and always agree.
pub fn check_pair_vanishing(s_points: &PointSet, xi: &Frequency) -> Result<(bool, bool)> {
    let p = s_points.base().get();
    if s_points.len() as u64 != p {
        return Err(Error::domain(format!(
            "expected exactly {p} points, got {}",
            s_points.len()
        )));
    }
    let ft_is_zero = ft_point_measure(s_points, xi)?.is_zero();
    let e = xi.exponent();
    let points = s_points.points();
    let pairwise = points.iter().enumerate().all(|(i, &a)| {
        points[i + 1..].iter().all(|&b| {
            // |(a − b)ξ|_p = p^{e − v(a − b)}
            let v = s_points
                .base()
                .difference_valuation(a, b)
                .expect("distinct");
            e >= 1 && v == e - 1
        })
    });
    Ok((ft_is_zero, pairwise))
}

/// `μ̂_T(ξ) ≠ 0`, for `|ξ|_p > p^{γ_T+1}`. A singleton uses `γ_T = −1`.
pub fn check_nonvanishing(t_set: &PointSet, xi: &Frequency) -> Result<bool> {
    let threshold = nonvanishing_threshold(t_set);
    if xi.exponent() <= threshold {
        return Err(Error::domain(format!(
            "|xi|_p = p^{} is inside B(0, p^{threshold})",
            xi.exponent()
        )));
    }
    Ok(!ft_point_measure(t_set, xi)?.is_zero())
}

/// `γ_T + 1`, the exponent beyond which `μ̂_T` cannot vanish.
pub(crate) fn nonvanishing_threshold(t_set: &PointSet) -> u32 {
    t_set.max_difference_valuation().map_or(0, |g| g + 1)
}

/// Compares `1̂_s(ξ)` with `1̂_s(ξ + u)` for a shift `u ∈ Z_p`.
///
/// Both frequencies are reduced from their rational values independently,
/// so the check exercises the reduction as well as the transform.
pub fn check_local_constancy(set: &CompactOpenSet, xi: Rational, shift: Rational) -> Result<bool> {
    let base = set.base();
    if !is_padic_integer(base, shift) {
        return Err(Error::domain(format!(
            "shift {shift} is not in Z_{}",
            base.get()
        )));
    }
    let at_xi = ft_compact_open(set, &Frequency::from_rational(base, xi)?)?;
    let at_shifted = ft_compact_open(set, &Frequency::from_rational(base, xi + shift)?)?;
    Ok(at_xi.value_eq(&at_shifted))
}

/// Exact transform of the counting measure of a level set, as integer
/// coefficients over `p^k`-th roots. Used by the spectral tiling test, where
/// only vanishing matters.
pub(crate) fn counting_transform(members: impl Iterator<Item = u64>, xi: &Frequency) -> Vec<i64> {
    let order = xi.order();
    let mut coeffs = vec![0i64; order as usize];
    for x in members {
        let m = mul_mod(x % order, xi.unit(), order);
        coeffs[((order - m) % order) as usize] += 1;
    }
    coeffs
}

fn same_base(p: u64, xi: &Frequency) -> Result<()> {
    if xi.base().get() != p {
        return Err(Error::domain(format!(
            "frequency over p = {} applied to an object over p = {p}",
            xi.base()
        )));
    }
    Ok(())
}
