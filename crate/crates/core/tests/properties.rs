use padic_tiles::fourier::{ft_compact_open, ft_level_set, ft_point_measure};
use padic_tiles::tiling::{
    census, find_complements, regularize, verify_tiling, verify_tiling_spectral,
};
use padic_tiles::{
    fractional_part, Ball, CompactOpenSet, Frequency, LevelSet, PAdicInt, PointSet, PrimeBase,
    Rational,
};
use std::sync::OnceLock;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn base(p: u64) -> PrimeBase {
    PrimeBase::new(p).unwrap()
}

/// Random balls of level ≤ 4 over a small prime.
fn arb_balls() -> impl Strategy<Value = (u64, Vec<Ball>)> {
    prop::sample::select(vec![2u64, 3, 5]).prop_flat_map(|p| {
        let ball = (0u32..=4, any::<u64>())
            .prop_map(move |(l, c)| Ball::new(base(p), l, c % p.pow(l)).unwrap());
        (Just(p), prop::collection::vec(ball, 0..12))
    })
}

proptest! {
    #[test]
    fn canonicalize_is_idempotent((p, balls) in arb_balls()) {
        let once = CompactOpenSet::canonicalize(base(p), balls).unwrap();
        let twice = CompactOpenSet::canonicalize(base(p), once.balls().to_vec()).unwrap();
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn canonical_form_is_disjoint_maximal_sorted((p, balls) in arb_balls()) {
        let set = CompactOpenSet::canonicalize(base(p), balls).unwrap();
        let b = set.balls();
        for (i, x) in b.iter().enumerate() {
            for y in &b[i + 1..] {
                prop_assert!(!x.intersects(y));
                prop_assert!((x.level(), x.center()) < (y.level(), y.center()));
            }
            if x.level() > 0 {
                let family = x.center() % p.pow(x.level() - 1);
                let siblings = b
                    .iter()
                    .filter(|y| y.level() == x.level() && y.center() % p.pow(x.level() - 1) == family)
                    .count();
                prop_assert!(siblings < p as usize);
            }
        }
    }

    #[test]
    fn measure_matches_finest_level_count((p, balls) in arb_balls()) {
        let set = CompactOpenSet::canonicalize(base(p), balls.clone()).unwrap();
        let n = 4;
        let mut hit = vec![false; p.pow(n) as usize];
        for b in &balls {
            for x in 0..p.pow(n) {
                if b.contains_residue(x) {
                    hit[x as usize] = true;
                }
            }
        }
        let count = hit.iter().filter(|&&h| h).count() as i64;
        prop_assert_eq!(set.measure(), Rational::new(count, p.pow(n) as i64));
        prop_assert_eq!(set.to_level_set(n).unwrap().cardinality() as i64, count);
    }

    #[test]
    fn level_set_round_trip((p, balls) in arb_balls(), extra in 0u32..=1) {
        let set = CompactOpenSet::canonicalize(base(p), balls).unwrap();
        let n = set.max_level() + extra;
        let level_set = set.to_level_set(n).unwrap();
        prop_assert_eq!(level_set.to_compact_open(), set);
    }

    #[test]
    fn inclusion_exclusion((p, a) in arb_balls(), b_raw in prop::collection::vec((0u32..=4, any::<u64>()), 0..12)) {
        let a = CompactOpenSet::canonicalize(base(p), a).unwrap();
        let b = CompactOpenSet::canonicalize(
            base(p),
            b_raw.into_iter().map(|(l, c)| Ball::new(base(p), l, c % p.pow(l)).unwrap()),
        )
        .unwrap();
        let union = a.union(&b).unwrap();
        let inter = a.intersect(&b).unwrap();
        prop_assert_eq!(a.measure() + b.measure(), union.measure() + inter.measure());
        let diff = a.difference(&b).unwrap();
        prop_assert_eq!(diff.measure(), a.measure() - inter.measure());
        prop_assert_eq!(diff.union(&inter).unwrap(), a.clone());
        prop_assert_eq!(a.union(&a.complement()).unwrap(), CompactOpenSet::whole(base(p)));
        prop_assert!(a.intersect(&a.complement()).unwrap().is_empty());
        // Pointwise agreement at level 4.
        for x in 0..p.pow(4) {
            prop_assert_eq!(union.contains_residue(x), a.contains_residue(x) || b.contains_residue(x));
            prop_assert_eq!(inter.contains_residue(x), a.contains_residue(x) && b.contains_residue(x));
            prop_assert_eq!(diff.contains_residue(x), a.contains_residue(x) && !b.contains_residue(x));
        }
    }

    #[test]
    fn fractional_part_only_sees_low_digits(
        p in prop::sample::select(vec![2u64, 3, 5, 7]),
        k in 1u32..=4,
        unit_seed in any::<u64>(),
        t in any::<u32>(),
        high in any::<u32>(),
    ) {
        let b = base(p);
        let order = p.pow(k);
        let mut u = unit_seed % order;
        if u % p == 0 { u += 1; }
        let xi = Frequency::new(b, k as i32, u).unwrap();
        let t_low = t as u64 % order;
        let x = PAdicInt::new(b, k + 3, t_low).unwrap();
        let y = PAdicInt::new(b, k + 3, t_low + order * (high as u64 % p.pow(3))).unwrap();
        prop_assert_eq!(fractional_part(&xi, &x).unwrap(), fractional_part(&xi, &y).unwrap());
    }

    #[test]
    fn transform_depends_only_on_frequency_class(
        p in prop::sample::select(vec![2u64, 3, 5]),
        pts in prop::collection::btree_set(0u64..125, 1..6),
        num in -200i64..200,
        k in 1u32..=3,
        shift in -50i64..50,
    ) {
        let b = base(p);
        let modulus = p.pow(3);
        let pts: Vec<u64> = pts.into_iter().map(|x| x % modulus).collect::<std::collections::BTreeSet<_>>().into_iter().collect();
        let t = PointSet::new(b, 3, pts).unwrap();
        let xi = Rational::new(num, p.pow(k) as i64);
        let a = Frequency::from_rational(b, xi).unwrap();
        let c = Frequency::from_rational(b, xi + Rational::from_integer(shift)).unwrap();
        prop_assert_eq!(a, c);
        let va = ft_point_measure(&t, &a).unwrap();
        let vc = ft_point_measure(&t, &c).unwrap();
        prop_assert!(va.value_eq(&vc));
    }
}

#[test]
fn parseval_at_finite_level() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (p, n) in [(2u64, 4u32), (3, 2), (5, 2)] {
        let b = base(p);
        let modulus = p.pow(n);
        let all: Vec<u64> = (0..modulus).collect();
        for size in [1usize, 2, modulus as usize / 3 + 1, modulus as usize] {
            let members: Vec<u64> = all.choose_multiple(&mut rng, size).copied().collect();
            let omega = LevelSet::from_members(b, n, members).unwrap();
            let energy: f64 = Frequency::all_up_to(b, n)
                .unwrap()
                .iter()
                .map(|xi| ft_level_set(&omega, xi).unwrap().to_complex().norm_sqr())
                .sum();
            let density = size as f64 / modulus as f64;
            assert!(
                (energy - density).abs() < 1e-9,
                "p={p} n={n} size={size}: {energy} vs {density}"
            );
        }
    }
}

#[test]
fn compact_open_and_level_set_transforms_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for (p, n) in [(2u64, 4u32), (3, 3)] {
        let b = base(p);
        let all: Vec<u64> = (0..p.pow(n)).collect();
        for _ in 0..20 {
            let size = rand::Rng::gen_range(&mut rng, 0..all.len());
            let omega =
                LevelSet::from_members(b, n, all.choose_multiple(&mut rng, size).copied()).unwrap();
            let co = omega.to_compact_open();
            for xi in Frequency::all_up_to(b, n + 1).unwrap() {
                assert!(ft_level_set(&omega, &xi)
                    .unwrap()
                    .value_eq(&ft_compact_open(&co, &xi).unwrap()));
            }
        }
    }
}

#[test]
fn direct_and_spectral_agree_on_random_candidates() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for (p, n) in [(2u64, 1u32), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3)] {
        let b = base(p);
        let modulus = p.pow(n);
        let pool: Vec<u64> = (1..modulus).collect();
        for size in [p, p * p].into_iter().filter(|&s| s <= modulus) {
            let records = census(b, n, size).unwrap();
            for r in &records {
                for t in &r.complements {
                    assert!(verify_tiling_spectral(&r.omega, t).unwrap().is_tiling);
                }
            }
            // 200 random non-complements of the right size.
            let t_size = (modulus / size) as usize;
            let mut tried = 0;
            while tried < 200 && !records.is_empty() {
                let r = records.choose(&mut rng).unwrap();
                let mut pts: Vec<u64> = pool
                    .choose_multiple(&mut rng, t_size - 1)
                    .copied()
                    .collect();
                pts.push(0);
                let t = PointSet::new(b, n, pts).unwrap();
                let direct = verify_tiling(&r.omega, &t).unwrap();
                let spectral = verify_tiling_spectral(&r.omega, &t).unwrap();
                assert_eq!(direct.is_tiling, spectral.is_tiling, "{} / {t}", r.omega);
                assert_eq!(direct.is_tiling, r.complements.contains(&t));
                tried += 1;
            }
        }
    }
}

#[test]
fn tiling_is_level_independent() {
    for (p, n) in [(2u64, 3u32), (3, 2)] {
        let b = base(p);
        let modulus = p.pow(n);
        for size in (0..=n).map(|j| p.pow(j)) {
            for r in census(b, n, size).unwrap() {
                let lifted = r.omega.lift(n + 1).unwrap();
                for t in &r.complements {
                    assert!(
                        verify_tiling(&lifted, &t.lift(n + 1).unwrap())
                            .unwrap()
                            .is_tiling
                    );
                }
            }
        }
        // Non-tiling pairs stay non-tiling after lifting.
        let omega = LevelSet::from_members(b, n, [0, 1]).unwrap();
        let t = PointSet::new(b, n, (0..modulus / 2).collect()).unwrap();
        let before = verify_tiling(&omega, &t).unwrap().is_tiling;
        let after = verify_tiling(&omega.lift(n + 1).unwrap(), &t.lift(n + 1).unwrap())
            .unwrap()
            .is_tiling;
        assert_eq!(before, after);
    }
}

#[test]
fn complements_are_closed_under_recheck() {
    // Every returned complement contains 0 and really tiles.
    let b = base(2);
    for mask in 1u32..(1 << 8) {
        let omega = LevelSet::from_members(b, 3, (0..8).filter(|i| mask >> i & 1 == 1)).unwrap();
        for t in find_complements(&omega) {
            assert_eq!(t.points()[0], 0);
            assert!(verify_tiling(&omega, &t).unwrap().is_tiling);
        }
    }
}

/// Tiling pairs of `Z/27` with tiles of size 3 and 9.
fn census_pairs() -> &'static [(LevelSet, PointSet)] {
    static PAIRS: OnceLock<Vec<(LevelSet, PointSet)>> = OnceLock::new();
    PAIRS.get_or_init(|| {
        let mut pairs = Vec::new();
        for size in [3u64, 9] {
            for r in census(base(3), 3, size).unwrap() {
                for t in r.complements {
                    pairs.push((r.omega.clone(), t));
                }
            }
        }
        pairs
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn regularize_absorbs_sub_majority_noise(
        pick in any::<prop::sample::Index>(),
        noise in prop::collection::vec(any::<prop::sample::Index>(), 0..64),
        flip_budget in any::<prop::sample::Index>(),
    ) {
        let (omega, t) = pick.get(census_pairs()).clone();
        let cell_level = t.max_difference_valuation().map_or(0, |g| g + 1);
        let level = cell_level + 2;
        let lifted = omega.lift(level).unwrap();
        let lifted_t = t.lift(level).unwrap();
        let expected = omega.to_compact_open();

        let cells = 3u64.pow(cell_level);
        let capacity = 9u64;
        let mut noisy = lifted.clone();
        let mut flipped = vec![std::collections::BTreeSet::new(); cells as usize];
        let budget = flip_budget.index(5); // at most 4 < 9/2 flips per cell
        for idx in noise {
            let x = idx.index(3u64.pow(level) as usize) as u64;
            let cell = &mut flipped[(x % cells) as usize];
            if cell.len() < budget && cell.insert(x) {
                noisy.toggle(x);
            }
        }
        prop_assert!(flipped.iter().all(|c| (c.len() as u64) * 2 < capacity));
        prop_assert_eq!(regularize(&noisy, &lifted_t).unwrap(), expected);
    }
}
