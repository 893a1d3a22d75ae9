use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use super::{LevelSet, PrimeBase};
use crate::{Error, Rational, Result};

/// The closed ball `center + p^level Z_p` of radius `p^{−level}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ball {
    base: PrimeBase,
    level: u32,
    center: u64,
}

impl Ball {
    pub fn new(base: PrimeBase, level: u32, center: u64) -> Result<Self> {
        let modulus = base.pow(level)?;
        if center >= modulus {
            return Err(Error::domain(format!(
                "ball center {center} is not below {}^{level}",
                base.get()
            )));
        }
        Ok(Ball {
            base,
            level,
            center,
        })
    }

    /// `Z_p` itself.
    pub fn whole(base: PrimeBase) -> Self {
        Ball {
            base,
            level: 0,
            center: 0,
        }
    }

    pub fn base(&self) -> PrimeBase {
        self.base
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn center(&self) -> u64 {
        self.center
    }

    /// Haar measure `p^{−level}`.
    pub fn measure(&self) -> Rational {
        Rational::new(1, self.base.modulus(self.level) as i64)
    }

    /// Whether `other ⊆ self`.
    pub fn contains(&self, other: &Ball) -> bool {
        self.base == other.base
            && self.level <= other.level
            && other.center % self.base.modulus(self.level) == self.center
    }

    /// Balls are either nested or disjoint.
    pub fn intersects(&self, other: &Ball) -> bool {
        self.contains(other) || other.contains(self)
    }

    /// Whether the residue `x mod p^n` lies in the ball (requires `n ≥ level`).
    pub fn contains_residue(&self, x: u64) -> bool {
        x % self.base.modulus(self.level) == self.center
    }

    /// The `p` balls of the next level inside this one.
    pub fn children(&self) -> impl Iterator<Item = Ball> + '_ {
        let step = self.base.modulus(self.level);
        (0..self.base.get()).map(move |d| Ball {
            base: self.base,
            level: self.level + 1,
            center: self.center + d * step,
        })
    }

    fn key(&self) -> (u32, u64) {
        (self.level, self.center)
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B({}, {}^-{})", self.center, self.base, self.level)
    }
}

/// Set operations supported by [`CompactOpenSet::apply`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetOp {
    Union,
    Intersect,
    Difference,
}

/// A compact open subset of `Z_p` in canonical form: pairwise disjoint,
/// maximal balls (no complete family of `p` siblings), sorted by
/// `(level, center)`. Structural equality is set equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CompactOpenSet {
    base: PrimeBase,
    balls: Vec<Ball>,
}

impl CompactOpenSet {
    pub fn empty(base: PrimeBase) -> Self {
        CompactOpenSet {
            base,
            balls: Vec::new(),
        }
    }

    pub fn whole(base: PrimeBase) -> Self {
        CompactOpenSet {
            base,
            balls: vec![Ball::whole(base)],
        }
    }

    /// Canonical form of the union of `balls`.
    pub fn canonicalize(base: PrimeBase, balls: impl IntoIterator<Item = Ball>) -> Result<Self> {
        let mut sorted = Vec::new();
        for ball in balls {
            if ball.base != base {
                return Err(Error::domain(format!(
                    "ball over p = {} in a set over p = {}",
                    ball.base, base
                )));
            }
            sorted.push(ball);
        }
        sorted.sort_by_key(Ball::key);
        sorted.dedup();

        // Drop balls nested inside a coarser one; survivors are disjoint.
        let mut kept: HashSet<(u32, u64)> = HashSet::new();
        let mut by_level: BTreeMap<u32, BTreeSet<u64>> = BTreeMap::new();
        for ball in sorted {
            let covered =
                (0..ball.level).any(|j| kept.contains(&(j, ball.center % base.modulus(j))));
            if !covered {
                kept.insert(ball.key());
                by_level.entry(ball.level).or_default().insert(ball.center);
            }
        }

        // Merge complete sibling families, finest level first.
        let max_level = by_level.keys().next_back().copied().unwrap_or(0);
        for level in (1..=max_level).rev() {
            let Some(centers) = by_level.get(&level) else {
                continue;
            };
            let parent_mod = base.modulus(level - 1);
            let mut families: HashMap<u64, u64> = HashMap::new();
            for c in centers {
                *families.entry(c % parent_mod).or_default() += 1;
            }
            let full: Vec<u64> = families
                .into_iter()
                .filter(|&(_, n)| n == base.get())
                .map(|(parent, _)| parent)
                .collect();
            if full.is_empty() {
                continue;
            }
            let centers = by_level.get_mut(&level).expect("level present");
            centers.retain(|c| !full.contains(&(c % parent_mod)));
            by_level.entry(level - 1).or_default().extend(full);
        }

        let balls = by_level
            .into_iter()
            .flat_map(|(level, centers)| {
                centers.into_iter().map(move |center| Ball {
                    base,
                    level,
                    center,
                })
            })
            .collect();
        Ok(CompactOpenSet { base, balls })
    }

    pub fn base(&self) -> PrimeBase {
        self.base
    }

    pub fn balls(&self) -> &[Ball] {
        &self.balls
    }

    pub fn is_empty(&self) -> bool {
        self.balls.is_empty()
    }

    /// Exact Haar measure, normalized so that `Z_p` has measure 1.
    pub fn measure(&self) -> Rational {
        self.balls.iter().map(Ball::measure).sum()
    }

    /// The finest level among the balls (0 for the empty set).
    pub fn max_level(&self) -> u32 {
        self.balls.iter().map(Ball::level).max().unwrap_or(0)
    }

    /// The residues modulo `p^n` contained in the set.
    pub fn to_level_set(&self, n: u32) -> Result<LevelSet> {
        if n < self.max_level() {
            return Err(Error::precision(format!(
                "level {n} is coarser than the ball level {}",
                self.max_level()
            )));
        }
        let mut out = LevelSet::empty(self.base, n)?;
        for ball in &self.balls {
            let step = self.base.modulus(ball.level);
            let count = self.base.modulus(n - ball.level);
            for j in 0..count {
                out.insert(ball.center + j * step);
            }
        }
        Ok(out)
    }

    pub fn contains_residue(&self, x: u64) -> bool {
        self.balls.iter().any(|b| b.contains_residue(x))
    }

    pub fn apply(&self, other: &CompactOpenSet, op: SetOp) -> Result<CompactOpenSet> {
        match op {
            SetOp::Union => self.union(other),
            SetOp::Intersect => self.intersect(other),
            SetOp::Difference => self.difference(other),
        }
    }

    pub fn union(&self, other: &CompactOpenSet) -> Result<CompactOpenSet> {
        self.same_base(other)?;
        CompactOpenSet::canonicalize(
            self.base,
            self.balls.iter().chain(other.balls.iter()).copied(),
        )
    }

    pub fn intersect(&self, other: &CompactOpenSet) -> Result<CompactOpenSet> {
        self.same_base(other)?;
        let mut out = Vec::new();
        for a in &self.balls {
            for b in &other.balls {
                if a.contains(b) {
                    out.push(*b);
                } else if b.contains(a) {
                    out.push(*a);
                }
            }
        }
        CompactOpenSet::canonicalize(self.base, out)
    }

    pub fn difference(&self, other: &CompactOpenSet) -> Result<CompactOpenSet> {
        self.same_base(other)?;
        let mut pieces: Vec<Ball> = self.balls.clone();
        for b in &other.balls {
            pieces = pieces.into_iter().flat_map(|a| ball_minus(a, *b)).collect();
        }
        CompactOpenSet::canonicalize(self.base, pieces)
    }

    /// `Z_p ∖ self`.
    pub fn complement(&self) -> CompactOpenSet {
        CompactOpenSet::whole(self.base)
            .difference(self)
            .expect("same base")
    }

    fn same_base(&self, other: &CompactOpenSet) -> Result<()> {
        if self.base != other.base {
            return Err(Error::domain(format!(
                "sets over p = {} and p = {}",
                self.base, other.base
            )));
        }
        Ok(())
    }
}

impl fmt::Display for CompactOpenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.balls.is_empty() {
            return write!(f, "∅");
        }
        for (i, ball) in self.balls.iter().enumerate() {
            if i > 0 {
                write!(f, " ∪ ")?;
            }
            write!(f, "{ball}")?;
        }
        Ok(())
    }
}

/// `a ∖ b` as a list of disjoint balls.
fn ball_minus(a: Ball, b: Ball) -> Vec<Ball> {
    if b.contains(&a) {
        return Vec::new();
    }
    if !a.contains(&b) {
        return vec![a];
    }
    // Walk down from `a` toward `b`, keeping every sibling off the path.
    let mut out = Vec::new();
    let mut current = a;
    while current.level < b.level {
        let next_mod = a.base.modulus(current.level + 1);
        let on_path = b.center % next_mod;
        let mut next = None;
        for child in current.children() {
            if child.center == on_path {
                next = Some(child);
            } else {
                out.push(child);
            }
        }
        current = next.expect("path child");
    }
    out
}
