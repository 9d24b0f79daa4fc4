mod common;

use plumb_core::catalog;
use plumb_core::engine::{BoxBounds, MinQuery, Region};
use plumb_core::oracle::brute_min_chi;
use plumb_core::{Cycle, Lattice, RatCycle};
use proptest::prelude::*;
use rand::Rng;

fn widened(lat: &Lattice, q: &MinQuery) -> BoxBounds {
    let b = lat.certify_bound(q).unwrap();
    let floor = !matches!(q.region, Region::FullLattice);
    let cap = match &q.region {
        Region::Box(z) => Some(z.clone()),
        _ => None,
    };
    BoxBounds {
        lo: Cycle(b.lo.0.iter().map(|&x| if floor { (x - 1).max(0) } else { x - 1 }).collect()),
        hi: Cycle(
            b.hi.0
                .iter()
                .enumerate()
                .map(|(v, &x)| cap.as_ref().map_or(x + 1, |z| (x + 1).min(z.0[v])))
                .collect(),
        ),
    }
}

fn shift_rh_plus(rng: &mut impl Rng, lat: &Lattice) -> RatCycle {
    let reps: Vec<RatCycle> = lat.discriminant_group().representatives().map(|(_, r)| r.clone()).collect();
    let r = &reps[rng.gen_range(0..reps.len())];
    r.add_cycle(&Cycle((0..lat.rank()).map(|_| rng.gen_range(-2..=2)).collect()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn engine_matches_oracle_on_widened_box(seed in any::<u64>()) {
        let lat = common::random_lattices(seed, 1, 5).pop().unwrap();
        let mut rng = common::rng(seed ^ 0x9e37);
        let n = lat.rank();
        let shift = shift_rh_plus(&mut rng, &lat);
        let region = match rng.gen_range(0..3) {
            0 => Region::Box(common::random_positive(&mut rng, n, 3)),
            1 => Region::NonNegOrthant,
            _ => Region::FullLattice,
        };
        let mut q = MinQuery::new(shift, region.clone());
        if region != Region::FullLattice && rng.gen_bool(0.5) {
            q = q.excluding_zero();
        }
        let fast = lat.min_chi(&q).unwrap();
        let slow = brute_min_chi(&lat, &q.shift, &widened(&lat, &q), q.exclude_zero).unwrap();
        prop_assert_eq!(&fast.value, &slow.value);
        prop_assert_eq!(&fast.minimizers, &slow.minimizers);
        prop_assert_eq!(&fast.min_minimizer, &slow.min_minimizer);
        prop_assert_eq!(&fast.max_minimizer, &slow.max_minimizer);
    }

    #[test]
    fn region_monotonicity(seed in any::<u64>()) {
        let lat = common::random_lattices(seed, 1, 6).pop().unwrap();
        let mut rng = common::rng(seed);
        let shift = common::random_dual(&mut rng, &lat);
        let z = common::random_effective(&mut rng, lat.rank(), 3);
        let full = lat.min_chi(&MinQuery::new(shift.clone(), Region::FullLattice)).unwrap().value;
        let orthant = lat.min_chi(&MinQuery::new(shift.clone(), Region::NonNegOrthant)).unwrap().value;
        let boxed = lat.min_chi(&MinQuery::new(shift, Region::Box(z))).unwrap().value;
        prop_assert!(full <= orthant);
        prop_assert!(orthant <= boxed);
    }

    #[test]
    fn translation_covariance(seed in any::<u64>()) {
        let lat = common::random_lattices(seed, 1, 6).pop().unwrap();
        let mut rng = common::rng(seed);
        let n = lat.rank();
        let x = common::random_dual(&mut rng, &lat);
        let m = Cycle((0..n).map(|_| rng.gen_range(-3..=3)).collect());
        let a = lat.min_chi(&MinQuery::new(x.clone(), Region::FullLattice)).unwrap();
        let b = lat.min_chi(&MinQuery::new(x.add_cycle(&m), Region::FullLattice)).unwrap();
        prop_assert_eq!(&b.value, &a.value);
        prop_assert_eq!(&b.min_minimizer, &(&a.min_minimizer - &m));
        prop_assert_eq!(&b.max_minimizer, &(&a.max_minimizer - &m));
    }

    #[test]
    fn box_minimum_stabilises_past_certified_box(seed in any::<u64>()) {
        let lat = common::random_lattices(seed, 1, 6).pop().unwrap();
        let mut rng = common::rng(seed);
        let shift = common::random_dual(&mut rng, &lat);
        let q = MinQuery::new(shift.clone(), Region::NonNegOrthant);
        let orthant = lat.min_chi(&q).unwrap();
        let k = lat.certify_bound(&q).unwrap().hi.0.into_iter().max().unwrap();
        for extra in 0..3 {
            let z = Cycle(vec![k + extra; lat.rank()]);
            let boxed = lat.min_chi(&MinQuery::new(shift.clone(), Region::Box(z))).unwrap();
            prop_assert_eq!(&boxed.value, &orthant.value);
            prop_assert_eq!(&boxed.minimizers, &orthant.minimizers);
        }
    }
}

#[test]
fn orthant_equals_full_lattice_for_representatives() {
    for (name, g) in catalog::all_fixtures() {
        let lat = Lattice::new(g).unwrap();
        for (_, r) in lat.discriminant_group().representatives() {
            let full = lat.min_chi(&MinQuery::new(r.clone(), Region::FullLattice)).unwrap();
            let orthant = lat.min_chi(&MinQuery::new(r.clone(), Region::NonNegOrthant)).unwrap();
            assert_eq!(full.value, orthant.value, "{name} at {r}");
        }
    }
}

#[test]
fn node_limit_is_reported() {
    let lat = Lattice::new(catalog::e(8)).unwrap();
    let q = MinQuery::new(RatCycle::zero(8), Region::NonNegOrthant).excluding_zero();
    assert!(matches!(lat.min_chi_limited(&q, 3), Err(plumb_core::Error::ResourceLimit(_))));
}
