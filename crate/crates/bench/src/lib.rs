//! Benchmark fixtures.

use plumb_core::catalog;
use plumb_core::{Lattice, PlumbingGraph};

/// Graphs the benchmarks run on, with a short label each.
pub fn fixtures() -> Vec<(&'static str, PlumbingGraph)> {
    vec![
        ("e8", catalog::e(8)),
        ("sigma237", catalog::sigma_237()),
        ("a10", catalog::a(10)),
        ("star-2x5", catalog::star(-2, &[&[-2, -2], &[-3], &[-5], &[-2, -2, -2]])),
    ]
}

pub fn lattice(graph: &PlumbingGraph) -> Lattice {
    Lattice::new(graph.clone()).expect("fixture is negative definite")
}
