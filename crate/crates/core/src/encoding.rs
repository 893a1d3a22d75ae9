//! Canonical JSON encodings.
//!
//! ```text
//! PointSet        {"p":2,"precision":2,"points":[0,2]}
//! LevelSet        {"p":2,"level":2,"members":[0,3]}
//! CompactOpenSet  {"p":2,"balls":[{"level":2,"center":0},{"level":2,"center":3}]}
//! census record   {"omega":[..],"complements":[[..],..],"gamma_t":1,"compact_open":{"balls":[..]}}
//! ```
//!
//! Output keys appear in the order shown and lists are sorted ascending, so
//! equal values always encode to identical bytes. Readers accept any order
//! and canonicalize.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::padic::{Ball, CompactOpenSet, LevelSet, PointSet, PrimeBase};
use crate::tiling::CensusRecord;
use crate::Error;

#[derive(Debug, Error)]
pub enum DecodeError {
    /// Not JSON, or JSON of the wrong shape.
    #[error("malformed JSON at byte {offset} (line {line}, column {column}): {message}")]
    Malformed {
        offset: usize,
        line: usize,
        column: usize,
        message: String,
    },
    /// Well-formed JSON describing an invalid value.
    #[error(transparent)]
    Invalid(#[from] Error),
}

pub trait JsonCodec: Sized {
    fn to_json(&self) -> String;
    fn from_json(text: &str) -> Result<Self, DecodeError>;
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PointSetJson {
    p: u64,
    precision: u32,
    points: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LevelSetJson {
    p: u64,
    level: u32,
    members: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BallJson {
    level: u32,
    center: u64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CompactOpenSetJson {
    p: u64,
    balls: Vec<BallJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BallsJson {
    balls: Vec<BallJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CensusRecordJson {
    omega: Vec<u64>,
    complements: Vec<Vec<u64>>,
    gamma_t: i64,
    compact_open: BallsJson,
}

fn parse<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T, DecodeError> {
    serde_json::from_str(text).map_err(|e| {
        let (line, column) = (e.line(), e.column());
        DecodeError::Malformed {
            offset: byte_offset(text, line, column),
            line,
            column,
            message: e.to_string(),
        }
    })
}

/// Byte offset of a 1-based line and column as reported by `serde_json`.
fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    let line_start: usize = text
        .split_inclusive('\n')
        .take(line.saturating_sub(1))
        .map(str::len)
        .sum();
    (line_start + column.saturating_sub(1)).min(text.len())
}

fn write<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("plain data serializes")
}

fn balls_json(set: &CompactOpenSet) -> Vec<BallJson> {
    set.balls()
        .iter()
        .map(|b| BallJson {
            level: b.level(),
            center: b.center(),
        })
        .collect()
}

fn balls_from_json(base: PrimeBase, balls: Vec<BallJson>) -> Result<CompactOpenSet, Error> {
    let balls = balls
        .into_iter()
        .map(|b| Ball::new(base, b.level, b.center))
        .collect::<Result<Vec<_>, _>>()?;
    CompactOpenSet::canonicalize(base, balls)
}

impl JsonCodec for PointSet {
    fn to_json(&self) -> String {
        write(&PointSetJson {
            p: self.base().get(),
            precision: self.precision(),
            points: self.points().to_vec(),
        })
    }

    fn from_json(text: &str) -> Result<Self, DecodeError> {
        let raw: PointSetJson = parse(text)?;
        Ok(PointSet::new(
            PrimeBase::new(raw.p)?,
            raw.precision,
            raw.points,
        )?)
    }
}

impl JsonCodec for LevelSet {
    fn to_json(&self) -> String {
        write(&LevelSetJson {
            p: self.base().get(),
            level: self.level(),
            members: self.members().collect(),
        })
    }

    fn from_json(text: &str) -> Result<Self, DecodeError> {
        let raw: LevelSetJson = parse(text)?;
        Ok(LevelSet::from_members(
            PrimeBase::new(raw.p)?,
            raw.level,
            raw.members,
        )?)
    }
}

impl JsonCodec for CompactOpenSet {
    fn to_json(&self) -> String {
        write(&CompactOpenSetJson {
            p: self.base().get(),
            balls: balls_json(self),
        })
    }

    fn from_json(text: &str) -> Result<Self, DecodeError> {
        let raw: CompactOpenSetJson = parse(text)?;
        Ok(balls_from_json(PrimeBase::new(raw.p)?, raw.balls)?)
    }
}

impl CensusRecord {
    pub fn to_json(&self) -> String {
        write(&CensusRecordJson {
            omega: self.omega.members().collect(),
            complements: self
                .complements
                .iter()
                .map(|t| t.points().to_vec())
                .collect(),
            gamma_t: self.gamma_t,
            compact_open: BallsJson {
                balls: balls_json(&self.compact_open),
            },
        })
    }

    /// Reads a census line; the prime and level are not part of the record.
    pub fn from_json(base: PrimeBase, n: u32, text: &str) -> Result<Self, DecodeError> {
        let raw: CensusRecordJson = parse(text)?;
        let omega = LevelSet::from_members(base, n, raw.omega)?;
        let complements = raw
            .complements
            .into_iter()
            .map(|t| PointSet::new(base, n, t))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(CensusRecord {
            omega,
            complements,
            gamma_t: raw.gamma_t,
            compact_open: balls_from_json(base, raw.compact_open.balls)?,
        })
    }
}
