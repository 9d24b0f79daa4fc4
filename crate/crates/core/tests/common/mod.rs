#![allow(dead_code)]

use plumb_core::rational::rat;
use plumb_core::{Cycle, Lattice, PlumbingGraph, RatCycle};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random tree on `1..=max_vertices` vertices with Euler numbers in
/// `[-5, -1]`; not necessarily negative definite.
pub fn random_tree(rng: &mut impl Rng, max_vertices: usize) -> PlumbingGraph {
    let n = rng.gen_range(1..=max_vertices);
    let euler: Vec<i64> = (0..n).map(|_| rng.gen_range(-5..=-1)).collect();
    let edges: Vec<(usize, usize)> = (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
    PlumbingGraph::from_indices(&euler, &edges).expect("a tree")
}

/// The first `count` negative-definite random trees from the seed.
pub fn random_lattices(seed: u64, count: usize, max_vertices: usize) -> Vec<Lattice> {
    let mut rng = rng(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        if let Ok(lat) = Lattice::new(random_tree(&mut rng, max_vertices)) {
            out.push(lat);
        }
    }
    out
}

/// A random element of `L'`: small combination of the `E*_v` plus a small
/// integral offset.
pub fn random_dual(rng: &mut impl Rng, lat: &Lattice) -> RatCycle {
    let n = lat.rank();
    let mut x = RatCycle::zero(n);
    for v in 0..n {
        let k = rng.gen_range(-1..=1);
        x = &x + &lat.dual_basis()[v].scale(&rat(k));
        x.add_basis(v, rng.gen_range(-1..=1));
    }
    x
}

pub fn random_effective(rng: &mut impl Rng, n: usize, max: i64) -> Cycle {
    Cycle((0..n).map(|_| rng.gen_range(0..=max)).collect())
}

pub fn random_positive(rng: &mut impl Rng, n: usize, max: i64) -> Cycle {
    loop {
        let c = random_effective(rng, n, max);
        if !c.is_zero() {
            return c;
        }
    }
}
