//! Tiling pairs `(Ω, T)` in `Z_p` at finite resolution.
//!
//! A level-`n` set `Ω` and a finite `T ⊂ Z_p` known mod `p^n` tile when every
//! residue `x mod p^n` is covered exactly once by the translates `Ω + t`:
//! `Σ_{t∈T} 1_Ω(x − t) = 1`. Since `Ω` is a union of level-`n` balls this
//! finite statement is the same as tiling `Z_p`.

mod search;

pub use search::{census, enumerate_tiles, find_complements, CensusRecord};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cyclotomic::blocks_constant;
use crate::fourier::counting_transform;
use crate::padic::{Ball, CompactOpenSet, Frequency, LevelSet, PointSet};
use crate::{Error, Result};

/// `γ_T = max v_p(t − t')` over distinct `t, t' ∈ T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GammaT(u32);

impl GammaT {
    pub fn value(self) -> u32 {
        self.0
    }
}

pub fn gamma_t(t_set: &PointSet) -> Result<GammaT> {
    t_set
        .max_difference_valuation()
        .map(GammaT)
        .ok_or_else(|| Error::domain("gamma_T needs at least two points"))
}

/// The level `γ_T + 1` of the cells a tile is made of. Singletons give 0,
/// matching the convention `γ_T = −1` for a one-point complement.
pub fn cell_level(t_set: &PointSet) -> u32 {
    t_set.max_difference_valuation().map_or(0, |g| g + 1)
}

/// Why a pair fails to tile.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    /// A residue covered `count ≠ 1` times.
    Residue { x: u64, count: u64 },
    /// A nontrivial frequency where neither transform vanishes.
    Frequency { k: u32, u: u64 },
    /// `|Ω|·|T| ≠ p^n`.
    Mass {
        omega: u64,
        complement: u64,
        modulus: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TilingReport {
    pub is_tiling: bool,
    pub witness: Option<Witness>,
    /// coverage count ↦ number of residues with that count.
    pub coverage_histogram: BTreeMap<u64, u64>,
}

fn check_pair(omega: &LevelSet, t_set: &PointSet) -> Result<()> {
    if omega.base() != t_set.base() {
        return Err(Error::domain(format!(
            "set over p = {} with complement over p = {}",
            omega.base(),
            t_set.base()
        )));
    }
    if omega.level() != t_set.precision() {
        return Err(Error::domain(format!(
            "set at level {} with complement at precision {}",
            omega.level(),
            t_set.precision()
        )));
    }
    Ok(())
}

/// Coverage count of every residue mod `p^n` by the translates `Ω + t`.
fn coverage(omega: &LevelSet, t_set: &PointSet) -> Vec<u64> {
    let modulus = omega.modulus();
    let mut counts = vec![0u64; modulus as usize];
    for &t in t_set.points() {
        for x in omega.members() {
            counts[((x + t) % modulus) as usize] += 1;
        }
    }
    counts
}

/// Direct check of `Σ_{t∈T} 1_Ω(x − t) = 1` for every residue.
pub fn verify_tiling(omega: &LevelSet, t_set: &PointSet) -> Result<TilingReport> {
    check_pair(omega, t_set)?;
    let counts = coverage(omega, t_set);
    let mut histogram = BTreeMap::new();
    for &c in &counts {
        *histogram.entry(c).or_insert(0) += 1;
    }
    let witness = counts
        .iter()
        .position(|&c| c != 1)
        .map(|x| Witness::Residue {
            x: x as u64,
            count: counts[x],
        });
    Ok(TilingReport {
        is_tiling: witness.is_none(),
        witness,
        coverage_histogram: histogram,
    })
}

/// Spectral check: `|Ω|·|T| = p^n`, and at every nontrivial frequency of
/// `Z/p^n` one of `1̂_Ω`, `μ̂_T` vanishes.
///
/// The coverage counts are never formed, so the histogram is the one a tiling
/// implies (`{1 ↦ p^n}`) on success and empty on failure; the witness names
/// the failing frequency or the mass mismatch.
pub fn verify_tiling_spectral(omega: &LevelSet, t_set: &PointSet) -> Result<TilingReport> {
    check_pair(omega, t_set)?;
    let modulus = omega.modulus();
    let fail = |witness| TilingReport {
        is_tiling: false,
        witness: Some(witness),
        coverage_histogram: BTreeMap::new(),
    };
    let size = omega.cardinality();
    if size * t_set.len() as u64 != modulus {
        return Ok(fail(Witness::Mass {
            omega: size,
            complement: t_set.len() as u64,
            modulus,
        }));
    }
    let p = omega.base().get();
    for k in 1..=omega.level() {
        for xi in Frequency::with_exponent(omega.base(), k)? {
            let omega_ft = counting_transform(omega.members(), &xi);
            if blocks_constant(p, k, &omega_ft) {
                continue;
            }
            let t_ft = counting_transform(t_set.points().iter().copied(), &xi);
            if !blocks_constant(p, k, &t_ft) {
                return Ok(fail(Witness::Frequency { k, u: xi.unit() }));
            }
        }
    }
    Ok(TilingReport {
        is_tiling: true,
        witness: None,
        coverage_histogram: BTreeMap::from([(1, modulus)]),
    })
}

/// Member count of `Ω` in each cell `c + p^{level}Z/p^nZ`.
fn cell_counts(omega: &LevelSet, level: u32) -> Vec<u64> {
    let cells = omega.base().modulus(level);
    let mut counts = vec![0u64; cells as usize];
    for x in omega.members() {
        counts[(x % cells) as usize] += 1;
    }
    counts
}

/// The compact open set that `Ω` agrees with up to sub-majority noise: the
/// union of the level-`(γ_T + 1)` balls in which `Ω` holds a strict majority
/// of points.
pub fn regularize(omega: &LevelSet, t_set: &PointSet) -> Result<CompactOpenSet> {
    check_pair(omega, t_set)?;
    let level = cell_level(t_set);
    let n = omega.level();
    if n < level {
        return Err(Error::precision(format!(
            "level {n} is coarser than the cell level {level}"
        )));
    }
    let capacity = omega.base().modulus(n - level);
    let mut balls = Vec::new();
    for (center, count) in cell_counts(omega, level).into_iter().enumerate() {
        let center = center as u64;
        if 2 * count == capacity {
            return Err(Error::AmbiguousCell {
                level,
                center,
                count,
                capacity,
            });
        }
        if 2 * count > capacity {
            balls.push(Ball::new(omega.base(), level, center)?);
        }
    }
    CompactOpenSet::canonicalize(omega.base(), balls)
}

/// For a tiling pair: whether `Ω` is a union of residue classes mod
/// `p^{γ_T+1}`, i.e. every cell is full or empty.
pub fn theorem_shadow_check(omega: &LevelSet, t_set: &PointSet) -> Result<bool> {
    if !verify_tiling(omega, t_set)?.is_tiling {
        return Err(Error::domain("the pair does not tile"));
    }
    let level = cell_level(t_set);
    let capacity = omega.base().modulus(omega.level() - level);
    Ok(cell_counts(omega, level)
        .into_iter()
        .all(|c| c == 0 || c == capacity))
}
