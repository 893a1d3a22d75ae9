//! Exact tiling analysis in the ring of p-adic integers.
//!
//! A bounded measurable set `Ω ⊂ Z_p` is studied through its level-`n`
//! discretization, a subset of `Z/p^nZ`. The crate provides:
//!
//! * [`padic`]: primes, residue-class p-adic integers, frequencies of the dual
//!   group `Q_p/Z_p`, balls and the canonical algebra of compact open sets.
//! * [`cyclotomic`]: exact rational combinations of `p^γ`-th roots of unity
//!   with an exact zero test.
//! * [`fourier`]: exact Fourier transforms of ball indicators, compact open
//!   sets and finite point measures.
//! * [`tiling`]: direct and spectral tiling verification, `γ_T`, majority
//!   vote regularization to a compact open set, and exhaustive complement
//!   search.
//! * [`sweeps`]: self-check sweeps over the harmonic analysis facts the
//!   tiling argument rests on.
//!
//! Tilings of `Q_p` by a bounded set reduce to tilings of `Z_p` after a
//! translation and dilation (the coset representatives of `Z_p` in `Q_p`
//! tile with `Z_p`), so every set here lives inside `Z_p`.
//!
//! All values are immutable and every operation is pure.

pub mod cyclotomic;
pub mod encoding;
pub mod fourier;
pub mod padic;
pub mod sweeps;
pub mod tiling;

mod error;

pub use cyclotomic::CyclotomicSum;
pub use error::{Error, Result};
pub use padic::{
    fractional_part, valuation, Ball, CompactOpenSet, Frequency, LevelSet, PAdicInt, PointSet,
    PrimeBase, SetOp,
};
pub use tiling::{CensusRecord, GammaT, TilingReport, Witness};

/// Exact rational numbers used for measures and transform coefficients.
///
/// Every denominator that arises is a power of `p` bounded by the dense
/// size limits, so 64-bit components are sufficient.
pub type Rational = num_rational::Ratio<i64>;
