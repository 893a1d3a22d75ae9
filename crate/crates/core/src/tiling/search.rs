use itertools::Itertools;
use rayon::prelude::*;

use crate::padic::{CompactOpenSet, LevelSet, PointSet, PrimeBase};
use crate::Result;

/// All complements `T ∋ 0` of `Ω` in `Z/p^nZ`, sorted lexicographically.
///
/// Exact cover by backtracking: the translate by 0 is placed first, then the
/// smallest uncovered residue `x` is covered by some `Ω + t` with
/// `t ∈ x − Ω`, skipping translates that overlap covered residues. Every
/// complement is reached along exactly one branch.
///
/// When `|Ω|` does not divide `p^n` (including `Ω = ∅`) the list is empty,
/// as it is at level 0 where no point set can be formed.
pub fn find_complements(omega: &LevelSet) -> Vec<PointSet> {
    let modulus = omega.modulus();
    let members: Vec<u64> = omega.members().collect();
    let size = members.len() as u64;
    if omega.level() == 0 || size == 0 || !modulus.is_multiple_of(size) {
        return Vec::new();
    }
    let mut search = Search {
        modulus,
        members: &members,
        covered: vec![false; modulus as usize],
        chosen: Vec::new(),
        found: Vec::new(),
    };
    search.place(0);
    search.run(0);

    let mut found = search.found;
    for t in &mut found {
        t.sort_unstable();
    }
    found.sort();
    found
        .into_iter()
        .map(|t| PointSet::new(omega.base(), omega.level(), t).expect("distinct residues"))
        .collect()
}

struct Search<'a> {
    modulus: u64,
    members: &'a [u64],
    covered: Vec<bool>,
    chosen: Vec<u64>,
    found: Vec<Vec<u64>>,
}

impl Search<'_> {
    fn fits(&self, t: u64) -> bool {
        self.members
            .iter()
            .all(|&x| !self.covered[((x + t) % self.modulus) as usize])
    }

    fn mark(&mut self, t: u64, value: bool) {
        for &x in self.members {
            self.covered[((x + t) % self.modulus) as usize] = value;
        }
    }

    fn place(&mut self, t: u64) {
        self.mark(t, true);
        self.chosen.push(t);
    }

    fn unplace(&mut self) {
        let t = self.chosen.pop().expect("placed translate");
        self.mark(t, false);
    }

    fn run(&mut self, from: u64) {
        let Some(x) = (from..self.modulus).find(|&x| !self.covered[x as usize]) else {
            self.found.push(self.chosen.clone());
            return;
        };
        for i in 0..self.members.len() {
            let t = (x + self.modulus - self.members[i]) % self.modulus;
            if self.fits(t) {
                self.place(t);
                self.run(x + 1);
                self.unplace();
            }
        }
    }
}

/// One tile of a census with everything known about it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusRecord {
    pub omega: LevelSet,
    /// Complements containing 0, sorted.
    pub complements: Vec<PointSet>,
    /// Smallest `γ_T` over the complements; `−1` for a one-point complement.
    pub gamma_t: i64,
    /// Canonical compact open form of `Ω`.
    pub compact_open: CompactOpenSet,
}

const CHUNK: usize = 1 << 14;

/// Every `Ω ⊆ Z/p^nZ` with `|Ω| = size` and `0 ∈ Ω` that tiles, with its
/// complements. Sizes other than a power `p^j ≤ p^n` give an empty census.
///
/// Candidates are examined in parallel on the current rayon pool; the output
/// order is the lexicographic order of the member lists regardless of the
/// number of threads.
pub fn census(base: PrimeBase, n: u32, size: u64) -> Result<Vec<CensusRecord>> {
    let modulus = base.dense_pow(n)?;
    if size == 0 || size > modulus || modulus % size != 0 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let candidates = (1..modulus).combinations(size as usize - 1);
    for chunk in &candidates.chunks(CHUNK) {
        let chunk: Vec<Vec<u64>> = chunk.collect();
        let records: Vec<CensusRecord> = chunk
            .into_par_iter()
            .filter_map(|rest| {
                let omega = LevelSet::from_members(base, n, std::iter::once(0).chain(rest))
                    .expect("members in range");
                let complements = find_complements(&omega);
                if complements.is_empty() {
                    return None;
                }
                let gamma_t = complements
                    .iter()
                    .map(|t| t.max_difference_valuation().map_or(-1, i64::from))
                    .min()
                    .expect("nonempty");
                let compact_open = omega.to_compact_open();
                Some(CensusRecord {
                    omega,
                    complements,
                    gamma_t,
                    compact_open,
                })
            })
            .collect();
        out.extend(records);
    }
    Ok(out)
}

/// Tiles of size `size` containing 0, each with its number of complements.
pub fn enumerate_tiles(base: PrimeBase, n: u32, size: u64) -> Result<Vec<(LevelSet, usize)>> {
    Ok(census(base, n, size)?
        .into_iter()
        .map(|r| {
            let count = r.complements.len();
            (r.omega, count)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base(p: u64) -> PrimeBase {
        PrimeBase::new(p).unwrap()
    }

    fn omega(p: u64, n: u32, m: &[u64]) -> LevelSet {
        LevelSet::from_members(base(p), n, m.iter().copied()).unwrap()
    }

    fn pts(sets: &[PointSet]) -> Vec<Vec<u64>> {
        sets.iter().map(|t| t.points().to_vec()).collect()
    }

    #[test]
    fn complements_examples() {
        assert_eq!(
            pts(&find_complements(&omega(2, 2, &[0, 1]))),
            vec![vec![0, 2]]
        );
        assert_eq!(
            pts(&find_complements(&omega(2, 2, &[0, 3]))),
            vec![vec![0, 2]]
        );
        assert_eq!(pts(&find_complements(&omega(2, 1, &[0]))), vec![vec![0, 1]]);
        assert!(find_complements(&omega(3, 1, &[0, 1])).is_empty());
        assert!(find_complements(&omega(3, 1, &[])).is_empty());
    }

    #[test]
    fn complements_of_translated_tile() {
        // {1, 2} mod 4 does not contain 0 but still tiles.
        assert_eq!(
            pts(&find_complements(&omega(2, 2, &[1, 2]))),
            vec![vec![0, 2]]
        );
    }

    #[test]
    fn complements_sorted() {
        let found = pts(&find_complements(&omega(3, 2, &[0, 3, 6])));
        let mut sorted = found.clone();
        sorted.sort();
        assert_eq!(found, sorted);
        assert_eq!(found.len(), 9);
    }

    #[test]
    fn enumerate_examples() {
        let tiles = enumerate_tiles(base(2), 2, 2).unwrap();
        let members: Vec<Vec<u64>> = tiles.iter().map(|(o, _)| o.members().collect()).collect();
        assert_eq!(members, vec![vec![0, 1], vec![0, 2], vec![0, 3]]);
        assert!(tiles.iter().all(|&(_, c)| c >= 1));
        assert!(enumerate_tiles(base(2), 2, 3).unwrap().is_empty());
        let full = enumerate_tiles(base(2), 1, 2).unwrap();
        assert_eq!(full.len(), 1);
        assert_eq!(full[0].1, 1);
    }

    #[test]
    fn census_gamma_and_form() {
        let records = census(base(2), 2, 2).unwrap();
        let r = &records[1];
        assert_eq!(r.omega.members().collect::<Vec<_>>(), vec![0, 2]);
        assert_eq!(pts(&r.complements), vec![vec![0, 1], vec![0, 3]]);
        assert_eq!(r.gamma_t, 0);
        assert_eq!(r.compact_open.balls().len(), 1);
        let full = census(base(3), 1, 3).unwrap();
        assert_eq!(full[0].gamma_t, -1);
    }

    #[test]
    fn census_is_deterministic_across_pools() {
        let serial = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| census(base(2), 4, 4).unwrap());
        let parallel = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap()
            .install(|| census(base(2), 4, 4).unwrap());
        assert_eq!(serial, parallel);
    }
}
