mod common;

use plumb_core::catalog;
use plumb_core::rational::ratio;
use plumb_core::series::{verify_convolution, SeriesKind};
use plumb_core::{Cycle, RatCycle, Singularity};
use proptest::prelude::*;

fn poincare_a1(m: i64) -> i64 {
    Singularity::new(catalog::a(1)).unwrap().poincare_coefficient(&RatCycle(vec![ratio(m, 2)])).unwrap()
}

#[test]
fn a1_poincare_closed_form() {
    for m in 0..=8 {
        assert_eq!(poincare_a1(m), m + 1, "m = {m}");
    }
}

#[test]
fn a1_hilbert_counts_lower_degrees_of_same_parity() {
    let s = Singularity::new(catalog::a(1)).unwrap();
    for m in 0..=8i64 {
        let expected: i64 = (0..m).filter(|d| (m - d) % 2 == 0).map(|d| d + 1).sum();
        assert_eq!(s.hilbert_coefficient(&RatCycle(vec![ratio(m, 2)])), Ok(expected), "m = {m}");
    }
}

#[test]
fn convolution_on_small_fixtures() {
    for (name, g) in catalog::all_fixtures().into_iter().filter(|(_, g)| g.len() <= 4) {
        let s = Singularity::new(g).unwrap();
        let n = s.lattice().rank();
        let p = s.series_truncation(SeriesKind::Poincare, &Cycle(vec![1; n])).unwrap();
        let h = s.series_truncation(SeriesKind::Hilbert, &Cycle(vec![2; n])).unwrap();
        assert!(verify_convolution(&h, &p).unwrap(), "{name}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hilbert_is_invariant_under_antinef_closure(idx in 0usize..12, seed in any::<u64>()) {
        let (_, g) = catalog::all_fixtures().swap_remove(idx);
        let s = Singularity::new(g).unwrap();
        let mut rng = common::rng(seed);
        let l = common::random_dual(&mut rng, s.lattice());
        let closure = s.lattice().antinef_closure(&l);
        prop_assert_eq!(s.hilbert_coefficient(&l).unwrap(), s.hilbert_coefficient(&closure).unwrap());
    }

    #[test]
    fn poincare_vanishes_off_the_lipman_cone(idx in 0usize..12, seed in any::<u64>()) {
        let (_, g) = catalog::all_fixtures().swap_remove(idx);
        let s = Singularity::new(g).unwrap();
        let lat = s.lattice();
        let mut rng = common::rng(seed);
        let n = lat.rank();
        let reps: Vec<RatCycle> = lat.discriminant_group().representatives().map(|(_, r)| r.clone()).collect();
        let r = &reps[rand::Rng::gen_range(&mut rng, 0..reps.len())];
        let l = r.add_cycle(&common::random_effective(&mut rng, n, 2));
        if !lat.in_lipman_cone(&l) {
            prop_assert_eq!(s.poincare_coefficient(&l).unwrap(), 0);
        }
    }
}
