use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;

use super::*;
use crate::grid::{build_grid_instance, validate_cycle_cover, validate_tour, Coverage, GridInstance, Pixel};

fn inst(px: &[(i32, i32)], coverage: Coverage, k: i64, t: i64) -> GridInstance {
    build_grid_instance(px.iter().map(|&(x, y)| Pixel::new(x, y)), coverage, k.into(), t.into()).unwrap()
}

fn block(w: i32, h: i32) -> Vec<(i32, i32)> {
    (0..w).flat_map(|x| (0..h).map(move |y| (x, y))).collect()
}

fn opts() -> ExactOptions {
    ExactOptions::default()
}

#[test]
fn domino() {
    for (k, want) in [(0, 4), (1, 6)] {
        let i = inst(&[(0, 0), (1, 0)], Coverage::Full, k, 1);
        assert_eq!(solve_exact_tour(&i, &opts()).unwrap().value, want.into());
        assert_eq!(solve_exact_cycle_cover(&i, &opts()).unwrap().value, want.into());
        assert_eq!(brute_force_tour(&i).unwrap().1, want.into());
    }
}

#[test]
fn strip_formulation_agrees() {
    let shapes: [&[(i32, i32)]; 4] =
        [&[(0, 0), (1, 0)], &[(0, 0), (1, 0), (0, 1)], &[(0, 0), (1, 0), (0, 1), (1, 1)], &[(0, 0), (1, 0), (2, 0), (1, 1)]];
    for px in shapes {
        for k in 0..2 {
            let i = inst(px, Coverage::Full, k, 1);
            let a = solve_exact_cycle_cover(&i, &opts()).unwrap();
            let b = solve_strip_cycle_cover(&i, &opts()).unwrap();
            assert_eq!(a.value, b.value, "{px:?} k={k}");
            assert!(validate_cycle_cover(&i, &b.cover).is_valid());
        }
    }
}

#[test]
fn small_blocks() {
    for (w, h) in [(2, 2), (2, 3), (3, 2)] {
        let i = inst(&block(w, h), Coverage::Full, 0, 1);
        let r = solve_exact_tour(&i, &opts()).unwrap();
        assert_eq!(r.value, 4.into(), "{w}x{h}");
        assert!(validate_tour(&i, &r.cover).is_valid());
    }
}

#[test]
fn corridors_take_four_turns() {
    for len in 2..9 {
        let px: Vec<(i32, i32)> = (0..len).map(|x| (x, 0)).collect();
        let i = inst(&px, Coverage::Full, 0, 1);
        assert_eq!(solve_exact_tour(&i, &opts()).unwrap().value, 4.into());
    }
}

#[test]
fn two_rooms_need_cuts() {
    // Two 2x2 rooms joined by a corridor: cheapest covers are two squares.
    let mut px = block(2, 2);
    px.extend([(2, 0), (3, 0)]);
    px.extend(block(2, 2).into_iter().map(|(x, y)| (x + 4, y)));
    let i = inst(&px, Coverage::Full, 0, 1);
    let cover = solve_exact_cycle_cover(&i, &opts()).unwrap();
    let tour = solve_exact_tour(&i, &opts()).unwrap();
    assert!(tour.value >= cover.value);
    assert_eq!(tour.value, brute_force_tour(&i).unwrap().1);
    assert!(validate_tour(&i, &tour.cover).is_valid());
}

#[test]
fn size_limit() {
    let i = inst(&block(8, 8), Coverage::Full, 0, 1);
    let o = ExactOptions { max_pixels: 10, ..opts() };
    assert!(matches!(solve_exact_tour(&i, &o), Err(ExactError::SizeLimitExceeded { pixels: 64, limit: 10 })));
    assert!(matches!(brute_force_tour(&i), Err(ExactError::TooLarge { .. })));
}

#[test]
fn separators_on_disjoint_squares() {
    let mut px = block(2, 2);
    px.extend(block(2, 2).into_iter().map(|(x, y)| (x + 2, y)));
    let i = inst(&px, Coverage::Full, 0, 1);
    let m = TraversalModel::new(&i);
    let left = crate::grid::Cycle::new(
        [(0, 0, 'E'), (1, 0, 'E'), (1, 0, 'N'), (1, 1, 'N'), (1, 1, 'W'), (0, 1, 'W'), (0, 1, 'S'), (0, 0, 'S')]
            .map(|(x, y, h)| crate::grid::Configuration::new(Pixel::new(x, y), crate::grid::Heading::from_letter(h).unwrap()))
            .to_vec(),
    )
    .unwrap();
    let shifted = crate::grid::Cycle::new(
        left.steps().iter().map(|c| crate::grid::Configuration::new(Pixel::new(c.pixel.x + 2, c.pixel.y), c.heading)).collect(),
    )
    .unwrap();
    let x = m.counts(&i, &crate::grid::CycleCover::new(vec![left, shifted]));
    assert_eq!(components(&i, &m, &x).len(), 2);
    let simple = separate_simple_cut(&i, &m, &x).unwrap();
    assert_eq!(simple.len(), 2);
    assert!(simple.iter().all(|c| c.is_violated_by(&x)));
    let adv = separate_advanced_cut(&i, &m, &x).unwrap();
    assert!(adv.iter().all(|c| c.is_violated_by(&x) && c.kind == CutKind::Advanced));
    let global = separate_global_cut(&i, &m, &x).unwrap();
    assert!(global.is_violated_by(&x));
    // The optimal tour satisfies all of them.
    let (tour, _) = brute_force_tour(&i).unwrap();
    let y = m.counts(&i, &tour);
    for c in simple.iter().chain(&adv).chain([&global]) {
        assert!(!c.is_violated_by(&y));
    }
    assert_eq!(separate_simple_cut(&i, &m, &y), Err(SeparationError::NoViolation));
}

fn polyomino() -> impl Strategy<Value = Vec<(i32, i32)>> {
    prop::collection::vec(0usize..4, 1..16).prop_map(|walk| {
        let mut at = (0, 0);
        let mut set = BTreeSet::from([at]);
        for d in walk {
            let (dx, dy) = [(0, 1), (1, 0), (0, -1), (-1, 0)][d];
            at = (at.0 + dx, at.1 + dy);
            set.insert(at);
        }
        set.into_iter().collect()
    })
}

fn with_coverage(px: &[(i32, i32)], variant: u8, picks: &[i64]) -> Coverage {
    let pick = |i: usize| picks[i % picks.len()];
    match variant {
        0 => Coverage::Full,
        1 => {
            let mut s: BTreeSet<Pixel> = px.iter().enumerate().filter(|&(i, _)| pick(i) % 2 == 0).map(|(_, &(x, y))| Pixel::new(x, y)).collect();
            s.insert(Pixel::new(px[0].0, px[0].1));
            Coverage::Subset(s)
        }
        _ => Coverage::Penalty(
            px.iter().enumerate().filter(|&(i, _)| pick(i) > 0).map(|(i, &(x, y))| (Pixel::new(x, y), pick(i).into())).collect::<BTreeMap<_, _>>(),
        ),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn exact_matches_brute_force(px in polyomino(), variant in 0u8..3, picks in prop::collection::vec(0i64..7, 1..8), k in 0i64..2, t in 1i64..3) {
        prop_assume!(px.len() >= 2 && px.len() <= BRUTE_FORCE_LIMIT);
        let i = inst(&px, with_coverage(&px, variant, &picks), k, t);
        let (bc, bv) = brute_force_cycle_cover(&i).unwrap();
        prop_assert!(validate_cycle_cover(&i, &bc).is_valid());
        prop_assert_eq!(validate_cycle_cover(&i, &bc).cost.total, bv);
        let c = solve_exact_cycle_cover(&i, &opts()).unwrap();
        prop_assert_eq!(c.value, bv);

        let (bt, tv) = brute_force_tour(&i).unwrap();
        prop_assert!(validate_tour(&i, &bt).is_valid());
        prop_assert_eq!(validate_tour(&i, &bt).cost.total, tv);
        let r = solve_exact_tour(&i, &opts()).unwrap();
        prop_assert_eq!(r.value, tv);
        prop_assert!(validate_tour(&i, &r.cover).is_valid());
        // Every cut added keeps the optimal tour.
        let m = TraversalModel::new(&i);
        let y = m.counts(&i, &bt);
        prop_assert!(r.cuts.violated_by(&y).is_empty());
    }
}
