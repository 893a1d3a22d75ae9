use std::fmt;

use super::{Ball, CompactOpenSet, PAdicInt, PrimeBase};
use crate::{Error, Rational, Result};

/// A subset of `Z/p^nZ`: the union of the level-`n` balls `x + p^nZ_p` for
/// its members. This is how a measurable `Ω ⊂ Z_p` is seen at resolution
/// `p^{−n}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LevelSet {
    base: PrimeBase,
    level: u32,
    members: Vec<bool>,
}

impl LevelSet {
    pub fn empty(base: PrimeBase, level: u32) -> Result<Self> {
        let size = base.dense_pow(level)?;
        Ok(LevelSet {
            base,
            level,
            members: vec![false; size as usize],
        })
    }

    pub fn full(base: PrimeBase, level: u32) -> Result<Self> {
        let size = base.dense_pow(level)?;
        Ok(LevelSet {
            base,
            level,
            members: vec![true; size as usize],
        })
    }

    /// Builds a level set from residues; repeats are harmless.
    pub fn from_members(
        base: PrimeBase,
        level: u32,
        members: impl IntoIterator<Item = u64>,
    ) -> Result<Self> {
        let mut out = LevelSet::empty(base, level)?;
        for x in members {
            if x >= out.modulus() {
                return Err(Error::domain(format!(
                    "member {x} is not below {}^{level}",
                    base.get()
                )));
            }
            out.insert(x);
        }
        Ok(out)
    }

    pub fn base(&self) -> PrimeBase {
        self.base
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// `p^level`.
    pub fn modulus(&self) -> u64 {
        self.members.len() as u64
    }

    pub fn contains(&self, x: u64) -> bool {
        self.members.get(x as usize).copied().unwrap_or(false)
    }

    pub(crate) fn insert(&mut self, x: u64) {
        self.members[x as usize] = true;
    }

    /// Flips membership of `x`.
    pub fn toggle(&mut self, x: u64) {
        let slot = &mut self.members[x as usize];
        *slot = !*slot;
    }

    pub fn members(&self) -> impl Iterator<Item = u64> + '_ {
        self.members
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| i as u64)
    }

    pub fn bits(&self) -> &[bool] {
        &self.members
    }

    pub fn cardinality(&self) -> u64 {
        self.members.iter().filter(|&&b| b).count() as u64
    }

    /// Haar measure of the union of level-`n` balls: `|Ω| / p^n`.
    pub fn measure(&self) -> Rational {
        Rational::new(self.cardinality() as i64, self.modulus() as i64)
    }

    /// The same subset of `Z_p` seen at a finer level: every member gets all
    /// of its `p^{new−old}` extensions.
    pub fn lift(&self, new_level: u32) -> Result<LevelSet> {
        if new_level < self.level {
            return Err(Error::precision(format!(
                "cannot lift level {} down to {new_level}",
                self.level
            )));
        }
        let mut out = LevelSet::empty(self.base, new_level)?;
        let step = self.modulus();
        let copies = self.base.modulus(new_level - self.level);
        for x in self.members() {
            for j in 0..copies {
                out.insert(x + j * step);
            }
        }
        Ok(out)
    }

    /// Canonical compact open form of the union of level-`n` balls.
    pub fn to_compact_open(&self) -> CompactOpenSet {
        let balls = self
            .members()
            .map(|x| Ball::new(self.base, self.level, x).expect("member"));
        CompactOpenSet::canonicalize(self.base, balls).expect("single base")
    }
}

impl fmt::Display for LevelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.members().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}} mod {}^{}", self.base, self.level)
    }
}

/// A finite set of distinct p-adic integers known modulo `p^precision`.
/// Tiling complements and supports of point measures live here.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointSet {
    base: PrimeBase,
    precision: u32,
    points: Vec<u64>,
}

impl PointSet {
    /// Sorts `points`; repeated residues are a precision error since the
    /// known digits cannot tell the points apart.
    pub fn new(base: PrimeBase, precision: u32, mut points: Vec<u64>) -> Result<Self> {
        if precision == 0 {
            return Err(Error::domain("point sets need precision at least 1"));
        }
        let modulus = base.pow(precision)?;
        if points.is_empty() {
            return Err(Error::domain("point sets must be nonempty"));
        }
        if let Some(&x) = points.iter().find(|&&x| x >= modulus) {
            return Err(Error::domain(format!(
                "point {x} is not below {}^{precision}",
                base.get()
            )));
        }
        points.sort_unstable();
        if let Some(w) = points.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::precision(format!(
                "point {} repeated modulo {}^{precision}",
                w[0],
                base.get()
            )));
        }
        Ok(PointSet {
            base,
            precision,
            points,
        })
    }

    pub fn base(&self) -> PrimeBase {
        self.base
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn points(&self) -> &[u64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn elements(&self) -> impl Iterator<Item = PAdicInt> + '_ {
        self.points
            .iter()
            .map(|&x| PAdicInt::new(self.base, self.precision, x).expect("validated residue"))
    }

    /// `max v_p(t − t')` over distinct pairs, or `None` for a singleton.
    /// Distinct residues mod `p^n` keep this below `n`.
    pub fn max_difference_valuation(&self) -> Option<u32> {
        let mut best = None;
        for (i, &a) in self.points.iter().enumerate() {
            for &b in &self.points[i + 1..] {
                let v = self.base.difference_valuation(a, b).expect("distinct");
                best = Some(best.map_or(v, |m: u32| m.max(v)));
            }
        }
        best
    }

    /// The same points read at a higher precision (extra digits zero).
    pub fn lift(&self, new_precision: u32) -> Result<PointSet> {
        if new_precision < self.precision {
            return Err(Error::precision(format!(
                "cannot lift precision {} down to {new_precision}",
                self.precision
            )));
        }
        PointSet::new(self.base, new_precision, self.points.clone())
    }
}

impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.points.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}} mod {}^{}", self.base, self.precision)
    }
}
