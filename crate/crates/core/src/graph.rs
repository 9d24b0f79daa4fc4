//! Plumbing graphs: parsing, validation, the intersection form and its
//! definiteness certificate.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};

use crate::cycle::RatCycle;
use crate::error::{Error, Result};
use crate::rational::{rat, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub id: String,
    pub euler: i64,
}

/// A decorated tree; every vertex is a rational curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlumbingGraph {
    vertices: Vec<Vertex>,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl PlumbingGraph {
    /// Builds and validates a graph from vertex ids and id pairs.
    pub fn new(vertices: Vec<(String, i64)>, edges: Vec<(String, String)>) -> Result<Self> {
        let mut index = HashMap::new();
        let mut vs = Vec::with_capacity(vertices.len());
        for (id, euler) in vertices {
            if index.insert(id.clone(), vs.len()).is_some() {
                return Err(Error::DuplicateVertex(id));
            }
            vs.push(Vertex { id, euler });
        }
        let mut es = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            let i = *index.get(&a).ok_or_else(|| Error::UnknownVertex(a.clone()))?;
            let j = *index.get(&b).ok_or_else(|| Error::UnknownVertex(b.clone()))?;
            es.push((i, j));
        }
        Self::from_parts(vs, es)
    }

    /// Convenience constructor with generated ids `v0, v1, ...`.
    pub fn from_indices(euler: &[i64], edges: &[(usize, usize)]) -> Result<Self> {
        let vs = euler
            .iter()
            .enumerate()
            .map(|(i, &e)| Vertex { id: format!("v{i}"), euler: e })
            .collect();
        for &(a, b) in edges {
            if a >= euler.len() || b >= euler.len() {
                return Err(Error::UnknownVertex(format!("v{}", a.max(b))));
            }
        }
        Self::from_parts(vs, edges.to_vec())
    }

    fn from_parts(vertices: Vec<Vertex>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let n = vertices.len();
        if n == 0 {
            return Err(Error::NotATree("no vertices".into()));
        }
        let mut seen = HashSet::new();
        let mut adjacency = vec![Vec::new(); n];
        for &(a, b) in &edges {
            if a == b {
                return Err(Error::SelfLoop(vertices[a].id.clone()));
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(Error::DuplicateEdge(vertices[a].id.clone(), vertices[b].id.clone()));
            }
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        if edges.len() != n - 1 {
            return Err(Error::NotATree(format!(
                "{} vertices but {} edges",
                n,
                edges.len()
            )));
        }
        let g = PlumbingGraph { vertices, edges, adjacency };
        let all: Vec<usize> = (0..n).collect();
        if g.support_components(&all).len() != 1 {
            return Err(Error::NotATree("graph is disconnected".into()));
        }
        Ok(g)
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn euler(&self, v: usize) -> i64 {
        self.vertices[v].euler
    }

    pub fn euler_numbers(&self) -> Vec<i64> {
        self.vertices.iter().map(|v| v.euler).collect()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.id == id)
    }

    pub fn intersection_form(&self) -> IntersectionForm {
        let n = self.len();
        let mut m = vec![vec![0i64; n]; n];
        for (v, row) in m.iter_mut().enumerate() {
            row[v] = self.vertices[v].euler;
        }
        for &(a, b) in &self.edges {
            m[a][b] = 1;
            m[b][a] = 1;
        }
        IntersectionForm { matrix: m }
    }

    /// Connected components of the subgraph induced on `subset`, each
    /// sorted, ordered by smallest vertex.
    pub fn support_components(&self, subset: &[usize]) -> Vec<Vec<usize>> {
        let inside: HashSet<usize> = subset.iter().copied().collect();
        let mut visited = HashSet::new();
        let mut roots: Vec<usize> = inside.iter().copied().collect();
        roots.sort_unstable();
        let mut out = Vec::new();
        for r in roots {
            if !visited.insert(r) {
                continue;
            }
            let mut comp = vec![r];
            let mut stack = vec![r];
            while let Some(v) = stack.pop() {
                for &w in &self.adjacency[v] {
                    if inside.contains(&w) && visited.insert(w) {
                        comp.push(w);
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// The induced subgraph on a connected vertex subset, keeping ids and
    /// the relative vertex order.
    pub fn subgraph(&self, subset: &[usize]) -> Result<PlumbingGraph> {
        let mut sorted = subset.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let pos: HashMap<usize, usize> = sorted.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let vs = sorted.iter().map(|&v| self.vertices[v].clone()).collect();
        let es = self
            .edges
            .iter()
            .filter_map(|(a, b)| Some((*pos.get(a)?, *pos.get(b)?)))
            .collect();
        Self::from_parts(vs, es)
    }

    /// Canonical text form; `parse_graph(g.serialize()) == g`.
    pub fn serialize(&self) -> String {
        let mut s = String::new();
        for v in &self.vertices {
            let _ = writeln!(s, "vertex {} {}", v.id, v.euler);
        }
        for &(a, b) in &self.edges {
            let _ = writeln!(s, "edge {} {}", self.vertices[a].id, self.vertices[b].id);
        }
        s
    }
}

/// Parses the line format
///
/// ```text
/// # comment
/// vertex <id> <euler_number>
/// edge <id> <id>
/// ```
pub fn parse_graph(text: &str) -> Result<PlumbingGraph> {
    let mut vertices: Vec<(String, i64)> = Vec::new();
    let mut ids: HashSet<String> = HashSet::new();
    let mut edges = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let tokens = tokenize(line);
        let Some(&(col, keyword)) = tokens.first() else {
            continue;
        };
        let syntax = |column: usize, message: String| Error::Syntax {
            line: lineno + 1,
            column,
            message,
        };
        match keyword {
            "vertex" => {
                if tokens.len() != 3 {
                    let c = tokens.get(3).map_or(col, |t| t.0);
                    return Err(syntax(c, "expected `vertex <id> <euler_number>`".into()));
                }
                let id = tokens[1].1;
                let (e_col, e) = tokens[2];
                let euler: i64 = e
                    .parse()
                    .map_err(|_| syntax(e_col, format!("invalid euler number `{e}`")))?;
                if !ids.insert(id.to_string()) {
                    return Err(Error::DuplicateVertex(id.to_string()));
                }
                vertices.push((id.to_string(), euler));
            }
            "edge" => {
                if tokens.len() != 3 {
                    let c = tokens.get(3).map_or(col, |t| t.0);
                    return Err(syntax(c, "expected `edge <id> <id>`".into()));
                }
                edges.push((tokens[1].1.to_string(), tokens[2].1.to_string()));
            }
            other => return Err(syntax(col, format!("unknown directive `{other}`"))),
        }
    }
    PlumbingGraph::new(vertices, edges)
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokenize(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter()
        .map(|(s, t)| (line[..s].chars().count() + 1, t))
        .collect()
}

/// Symmetric integer matrix of the intersection pairing in vertex order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionForm {
    pub matrix: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Definiteness {
    NegativeDefinite,
    /// A nonzero `x` with `(x, x) >= 0`.
    Witness(RatCycle),
}

impl IntersectionForm {
    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.matrix[i][j]
    }

    /// `x^T M y`.
    pub fn pair(&self, x: &[Rat], y: &[Rat]) -> Rat {
        let mut acc = Rat::zero();
        for (i, row) in self.matrix.iter().enumerate() {
            if x[i].is_zero() {
                continue;
            }
            let mut s = Rat::zero();
            for (j, &m) in row.iter().enumerate() {
                if m != 0 && !y[j].is_zero() {
                    s += &y[j] * rat(m);
                }
            }
            acc += &x[i] * s;
        }
        acc
    }

    /// Exact verdict via rational LDL^T: negative definite iff every pivot
    /// is negative. The first non-negative pivot `k` yields the witness
    /// `x = (-M_k^{-1} m_k, 1, 0, ..)` with `(x, x)` equal to that pivot.
    pub fn check_negative_definite(&self) -> Definiteness {
        let n = self.dim();
        // l[i][j] for j < i, d[i] pivots
        let mut l = vec![vec![Rat::zero(); n]; n];
        let mut d: Vec<Rat> = Vec::with_capacity(n);
        for i in 0..n {
            for j in 0..i {
                let mut s = rat(self.matrix[i][j]);
                for k in 0..j {
                    s -= &l[i][k] * &l[j][k] * &d[k];
                }
                l[i][j] = s / &d[j];
            }
            let mut piv = rat(self.matrix[i][i]);
            for k in 0..i {
                piv -= &l[i][k] * &l[i][k] * &d[k];
            }
            if !piv.is_negative() {
                // Solve L^T x = e_i restricted to the first i+1 coordinates.
                let mut x = vec![Rat::zero(); n];
                x[i] = Rat::one();
                for r in (0..i).rev() {
                    let mut s = Rat::zero();
                    for c in r + 1..=i {
                        s -= &l[c][r] * &x[c];
                    }
                    x[r] = s;
                }
                return Definiteness::Witness(RatCycle(x));
            }
            d.push(piv);
        }
        Definiteness::NegativeDefinite
    }

    /// Leading principal minors `det M_1, ..., det M_n`.
    pub fn leading_minors(&self) -> Vec<Rat> {
        let n = self.dim();
        let mut a: Vec<Vec<Rat>> = self
            .matrix
            .iter()
            .map(|r| r.iter().map(|&x| rat(x)).collect())
            .collect();
        let mut out = Vec::with_capacity(n);
        let mut det = Rat::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                // a zero pivot means this and all later minors need pivoting;
                // definite forms never reach here
                out.extend(std::iter::repeat_n(Rat::zero(), n - k));
                return out;
            }
            det *= &a[k][k];
            out.push(det.clone());
            for i in k + 1..n {
                let f = &a[i][k] / &a[k][k];
                for j in k..n {
                    let t = &f * &a[k][j];
                    a[i][j] -= t;
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_inputs() {
        let g = parse_graph("vertex a -2").unwrap();
        assert_eq!(g.len(), 1);
        assert!(g.edges().is_empty());
        let g = parse_graph("vertex a -2\nvertex b -2\nedge a b").unwrap();
        assert_eq!(g.edges(), &[(0, 1)]);
    }

    #[test]
    fn comments_and_blank_lines() {
        let g = parse_graph("# A2\n\nvertex a -2  # left\n  vertex b -3\nedge b a\n").unwrap();
        assert_eq!(g.euler_numbers(), vec![-2, -3]);
    }

    #[test]
    fn rejects_bad_inputs() {
        let dup = parse_graph("vertex a -2\nvertex b -2\nedge a b\nedge a b");
        assert!(matches!(dup, Err(Error::DuplicateEdge(..))));
        assert!(matches!(
            parse_graph("vertex a -2\nvertex a -3"),
            Err(Error::DuplicateVertex(_))
        ));
        assert!(matches!(
            parse_graph("vertex a -2\nedge a b"),
            Err(Error::UnknownVertex(_))
        ));
        assert!(matches!(parse_graph("vertex a -2\nedge a a"), Err(Error::SelfLoop(_))));
        assert!(matches!(
            parse_graph("vertex a -2\nvertex b -2"),
            Err(Error::NotATree(_))
        ));
        let cyc = "vertex a -2\nvertex b -2\nvertex c -2\nedge a b\nedge b c\nedge c a";
        assert!(matches!(parse_graph(cyc), Err(Error::NotATree(_))));
        assert!(matches!(parse_graph(""), Err(Error::NotATree(_))));
    }

    #[test]
    fn syntax_errors_carry_position() {
        match parse_graph("vertex a -2\n  vertex b x") {
            Err(Error::Syntax { line, column, .. }) => assert_eq!((line, column), (2, 12)),
            other => panic!("{other:?}"),
        }
        // genus decoration is not part of the format
        match parse_graph("vertex a -2 1") {
            Err(Error::Syntax { line, column, .. }) => assert_eq!((line, column), (1, 13)),
            other => panic!("{other:?}"),
        }
        match parse_graph("node a -2") {
            Err(Error::Syntax { column, .. }) => assert_eq!(column, 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn forms() {
        let a1 = parse_graph("vertex a -2").unwrap().intersection_form();
        assert_eq!(a1.matrix, vec![vec![-2]]);
        let a2 = parse_graph("vertex a -2\nvertex b -2\nedge a b").unwrap().intersection_form();
        assert_eq!(a2.matrix, vec![vec![-2, 1], vec![1, -2]]);
        assert_eq!(a2.leading_minors(), vec![rat(-2), rat(3)]);
        assert_eq!(a2.check_negative_definite(), Definiteness::NegativeDefinite);
    }

    #[test]
    fn degenerate_witness() {
        let f = IntersectionForm { matrix: vec![vec![-1, 1], vec![1, -1]] };
        match f.check_negative_definite() {
            Definiteness::Witness(x) => {
                assert_eq!(x, RatCycle(vec![rat(1), rat(1)]));
                assert!(f.pair(&x.0, &x.0) >= Rat::zero());
            }
            d => panic!("{d:?}"),
        }
        let f = IntersectionForm { matrix: vec![vec![1]] };
        assert!(matches!(f.check_negative_definite(), Definiteness::Witness(_)));
        // zero pivot only at the last vertex
        let f = IntersectionForm {
            matrix: vec![vec![-2, 1, 0], vec![1, -1, 1], vec![0, 1, -1]],
        };
        match f.check_negative_definite() {
            Definiteness::Witness(x) => assert!(f.pair(&x.0, &x.0) >= Rat::zero()),
            d => panic!("{d:?}"),
        }
    }

    #[test]
    fn components() {
        let g = PlumbingGraph::from_indices(&[-1, -2, -3, -7], &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(g.support_components(&[1, 2, 3]), vec![vec![1], vec![2], vec![3]]);
        assert_eq!(g.support_components(&[0, 2]), vec![vec![0, 2]]);
        assert!(g.support_components(&[]).is_empty());
        let sub = g.subgraph(&[0, 3]).unwrap();
        assert_eq!(sub.euler_numbers(), vec![-1, -7]);
        assert!(g.subgraph(&[1, 2]).is_err());
    }

    #[test]
    fn serialize_round_trip() {
        let text = "vertex c -1\nvertex a -2\nvertex b -3\nvertex d -7\nedge c a\nedge c b\nedge c d\n";
        let g = parse_graph(text).unwrap();
        assert_eq!(g.serialize(), text);
        assert_eq!(parse_graph(&g.serialize()).unwrap(), g);
    }
}
