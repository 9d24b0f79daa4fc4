//! Standard plumbing graphs: the ADE trees and star-shaped (Seifert) graphs.

use crate::graph::PlumbingGraph;

/// `A_n`: a chain of `n` (-2)-vertices.
pub fn a(n: usize) -> PlumbingGraph {
    chain(&vec![-2; n])
}

/// `D_n` (`n >= 4`): chain of length `n - 2` with two extra leaves on the
/// second-to-last vertex.
pub fn d(n: usize) -> PlumbingGraph {
    assert!(n >= 4, "D_n needs n >= 4");
    let mut edges: Vec<(usize, usize)> = (0..n - 3).map(|i| (i, i + 1)).collect();
    edges.push((n - 3, n - 2));
    edges.push((n - 3, n - 1));
    PlumbingGraph::from_indices(&vec![-2; n], &edges).expect("valid D_n")
}

/// `E_6`, `E_7`, `E_8`: node 0 is the trivalent vertex; legs of lengths
/// 1, 2 and `n - 4`.
pub fn e(n: usize) -> PlumbingGraph {
    assert!((6..=8).contains(&n), "E_n needs 6 <= n <= 8");
    star(-2, &[&[-2], &[-2, -2], &vec![-2; n - 4]])
}

/// A chain with the given Euler numbers.
pub fn chain(euler: &[i64]) -> PlumbingGraph {
    let edges: Vec<(usize, usize)> = (1..euler.len()).map(|i| (i - 1, i)).collect();
    PlumbingGraph::from_indices(euler, &edges).expect("valid chain")
}

/// A star: a central vertex with the given legs, each leg listed from the
/// vertex adjacent to the centre outwards. The centre is vertex 0.
pub fn star(center: i64, legs: &[&[i64]]) -> PlumbingGraph {
    let mut euler = vec![center];
    let mut edges = Vec::new();
    for leg in legs {
        let mut prev = 0;
        for &e in leg.iter() {
            euler.push(e);
            let v = euler.len() - 1;
            edges.push((prev, v));
            prev = v;
        }
    }
    PlumbingGraph::from_indices(&euler, &edges).expect("valid star")
}

/// Minimal good resolution graph of the Brieskorn sphere `Σ(2,3,7)`,
/// vertex order `(c, a, b, d)` = `(-1, -2, -3, -7)`.
pub fn sigma_237() -> PlumbingGraph {
    PlumbingGraph::new(
        vec![
            ("c".into(), -1),
            ("a".into(), -2),
            ("b".into(), -3),
            ("d".into(), -7),
        ],
        vec![
            ("c".into(), "a".into()),
            ("c".into(), "b".into()),
            ("c".into(), "d".into()),
        ],
    )
    .expect("valid graph")
}

/// Star with centre `-1` and legs `[-7]`, `[-7]`, `[-2, -2]`: numerically
/// Gorenstein with `min_{l>0} chi = -1`, so neither rational nor elliptic.
pub fn star_77_22() -> PlumbingGraph {
    star(-1, &[&[-7], &[-7], &[-2, -2]])
}

/// Star with centre `-1` and legs `[-7]`, `[-7]`, `[-2, -3]`: not
/// numerically Gorenstein, `min_{l>0} chi = -1`.
pub fn star_77_23() -> PlumbingGraph {
    star(-1, &[&[-7], &[-7], &[-2, -3]])
}

/// The non-rational fixtures.
pub fn non_rational_fixtures() -> Vec<(&'static str, PlumbingGraph)> {
    vec![("sigma237", sigma_237()), ("star77-22", star_77_22()), ("star77-23", star_77_23())]
}

/// ADE plus non-rational fixtures.
pub fn all_fixtures() -> Vec<(&'static str, PlumbingGraph)> {
    let mut all = ade_fixtures();
    all.extend(non_rational_fixtures());
    all
}

/// The nine ADE fixtures `A_1..A_5, D_4, E_6, E_7, E_8` with their names.
pub fn ade_fixtures() -> Vec<(&'static str, PlumbingGraph)> {
    vec![
        ("A1", a(1)),
        ("A2", a(2)),
        ("A3", a(3)),
        ("A4", a(4)),
        ("A5", a(5)),
        ("D4", d(4)),
        ("E6", e(6)),
        ("E7", e(7)),
        ("E8", e(8)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(a(5).len(), 5);
        assert_eq!(d(4).len(), 4);
        assert_eq!(d(4).neighbors(1).len(), 3);
        assert_eq!(e(8).len(), 8);
        assert_eq!(e(6).neighbors(0).len(), 3);
        assert_eq!(sigma_237().euler_numbers(), vec![-1, -2, -3, -7]);
    }
}
