//! The lattice `L`, its dual `L'`, distinguished cycles and the
//! Riemann–Roch function `chi`.

mod smith;

pub use smith::{smith_normal_form, DiscriminantGroup, HClass, SmithForm};

use num_traits::{One, Signed, Zero};

use crate::cycle::{Cycle, RatCycle};
use crate::engine::SearchTables;
use crate::error::{Error, Result};
use crate::graph::{Definiteness, IntersectionForm, PlumbingGraph};
use crate::rational::{rat, Rat};

/// A validated negative-definite plumbing lattice with its distinguished
/// elements precomputed. Immutable after construction.
#[derive(Clone, Debug)]
pub struct Lattice {
    graph: PlumbingGraph,
    form: IntersectionForm,
    /// `duals[v] = E*_v`, i.e. column `v` of `(-M)^{-1}`.
    duals: Vec<RatCycle>,
    zk: RatCycle,
    group: DiscriminantGroup,
    pub(crate) tables: SearchTables,
}

impl Lattice {
    /// Fails with `NotNegativeDefinite` when the form is not definite.
    pub fn new(graph: PlumbingGraph) -> Result<Self> {
        let form = graph.intersection_form();
        if let Definiteness::Witness(x) = form.check_negative_definite() {
            return Err(Error::NotNegativeDefinite { witness: x.to_string() });
        }
        let duals = dual_basis(&form);
        let n = graph.len();
        let mut zk = RatCycle::zero(n);
        for (v, dual) in duals.iter().enumerate() {
            let rhs = rat(-(graph.euler(v) + 2));
            zk = &zk + &dual.scale(&rhs);
        }
        let group = DiscriminantGroup::new(&form.matrix, &duals)?;
        let tables = SearchTables::new(&form)?;
        Ok(Lattice { graph, form, duals, zk, group, tables })
    }

    pub fn graph(&self) -> &PlumbingGraph {
        &self.graph
    }

    pub fn form(&self) -> &IntersectionForm {
        &self.form
    }

    pub fn rank(&self) -> usize {
        self.graph.len()
    }

    /// `E*_v` for every vertex, with `(E*_v, E_w) = -δ_vw`.
    pub fn dual_basis(&self) -> &[RatCycle] {
        &self.duals
    }

    /// `Z_K`, solving `(Z_K, E_v) = E_v^2 + 2`.
    pub fn anticanonical_cycle(&self) -> &RatCycle {
        &self.zk
    }

    pub fn discriminant_group(&self) -> &DiscriminantGroup {
        &self.group
    }

    fn check_dim(&self, len: usize) -> Result<()> {
        if len != self.rank() {
            return Err(Error::Dimension { expected: self.rank(), got: len });
        }
        Ok(())
    }

    pub fn pairing(&self, x: &RatCycle, y: &RatCycle) -> Result<Rat> {
        self.check_dim(x.len())?;
        self.check_dim(y.len())?;
        Ok(self.form.pair(&x.0, &y.0))
    }

    /// `(x, E_v)` using the sparsity of the tree.
    pub fn pairing_with_basis(&self, x: &RatCycle, v: usize) -> Rat {
        let mut s = &x.0[v] * rat(self.graph.euler(v));
        for &w in self.graph.neighbors(v) {
            s += &x.0[w];
        }
        s
    }

    pub fn pairings(&self, x: &RatCycle) -> Vec<Rat> {
        (0..self.rank()).map(|v| self.pairing_with_basis(x, v)).collect()
    }

    /// Integer pairings `(l, E_v)` of an integral cycle.
    pub fn int_pairings(&self, l: &Cycle) -> Vec<i64> {
        (0..self.rank())
            .map(|v| {
                l.0[v] * self.graph.euler(v)
                    + self.graph.neighbors(v).iter().map(|&w| l.0[w]).sum::<i64>()
            })
            .collect()
    }

    pub fn in_dual_lattice(&self, x: &RatCycle) -> bool {
        x.len() == self.rank() && self.pairings(x).iter().all(|p| p.is_integer())
    }

    /// Validates `x ∈ L'`.
    pub fn dual_element(&self, x: RatCycle) -> Result<RatCycle> {
        self.check_dim(x.len())?;
        if !self.in_dual_lattice(&x) {
            return Err(Error::NotInDualLattice(x.to_string()));
        }
        Ok(x)
    }

    /// `chi(x) = -(x, x - Z_K) / 2`.
    pub fn chi(&self, x: &RatCycle) -> Rat {
        let diff = x - &self.zk;
        -self.form.pair(&x.0, &diff.0) / rat(2)
    }

    pub fn chi_int(&self, l: &Cycle) -> i64 {
        // 2 chi(l) = -(l,l) + (l, Z_K) with (E_v, Z_K) = e_v + 2
        let p = self.int_pairings(l);
        let mut twice = 0i64;
        for v in 0..self.rank() {
            twice += -l.0[v] * p[v] + l.0[v] * (self.graph.euler(v) + 2);
        }
        twice / 2
    }

    /// `chi_{k_h}(x) = chi(x + r_h) - chi(r_h)`.
    pub fn chi_kh(&self, h: &HClass, x: &RatCycle) -> Result<Rat> {
        let r = self
            .group
            .representative(h)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown class {:?}", h.0)))?;
        Ok(self.chi(&(x + r)) - self.chi(r))
    }

    pub fn class_of(&self, x: &RatCycle) -> Result<HClass> {
        self.check_dim(x.len())?;
        self.group.class_from_pairings(&self.pairings(x))
    }

    /// Writes `l' = r_h + l_0` with `l_0 ∈ L`.
    pub fn decompose(&self, x: &RatCycle) -> Result<(HClass, Cycle)> {
        let h = self.class_of(x)?;
        let r = self.group.representative(&h).expect("every class has a representative");
        let l0 = (x - r)
            .to_cycle()
            .ok_or_else(|| Error::Internal(format!("{x} - r_h is not integral")))?;
        Ok((h, l0))
    }

    /// Lipman cone membership: `(x, E_v) <= 0` for all `v`.
    pub fn in_lipman_cone(&self, x: &RatCycle) -> bool {
        (0..self.rank()).all(|v| !self.pairing_with_basis(x, v).is_positive())
    }

    /// `s(x)`: the least element of the Lipman cone in `x + L_{>=0}`,
    /// reached by adding `E_v` at the smallest `v` with `(y, E_v) > 0`.
    pub fn antinef_closure(&self, x: &RatCycle) -> RatCycle {
        self.antinef_closure_trace(x).0
    }

    /// The closure together with the vertex sequence of the increments.
    pub fn antinef_closure_trace(&self, x: &RatCycle) -> (RatCycle, Vec<usize>) {
        let mut y = x.clone();
        let mut p = self.pairings(x);
        let mut trace = Vec::new();
        while let Some(v) = p.iter().position(|q| q.is_positive()) {
            y.add_basis(v, 1);
            p[v] += rat(self.graph.euler(v));
            for &w in self.graph.neighbors(v) {
                p[w] += Rat::one();
            }
            trace.push(v);
        }
        (y, trace)
    }

    /// Integer version of the closure acting on an offset with known
    /// integral starting pairings; both are updated in place.
    pub(crate) fn antinef_closure_in_place(&self, pairings: &mut [i64], offset: &mut [i64]) {
        while let Some(v) = pairings.iter().position(|&q| q > 0) {
            offset[v] += 1;
            pairings[v] += self.graph.euler(v);
            for &w in self.graph.neighbors(v) {
                pairings[w] += 1;
            }
        }
    }

    /// Artin's fundamental cycle, `min (S' ∩ L_{>0})`, via Laufer's algorithm.
    pub fn fundamental_cycle(&self) -> Cycle {
        self.fundamental_cycle_from(0)
    }

    pub fn fundamental_cycle_from(&self, start: usize) -> Cycle {
        let mut offset = vec![0i64; self.rank()];
        offset[start] = 1;
        let mut p = self.int_pairings(&Cycle(offset.clone()));
        self.antinef_closure_in_place(&mut p, &mut offset);
        Cycle(offset)
    }

    pub fn is_numerically_gorenstein(&self) -> bool {
        self.zk.is_integral()
    }
}

/// `E*_v = -(M^{-1}) e_v`, by exact Gauss–Jordan elimination.
pub fn dual_basis(form: &IntersectionForm) -> Vec<RatCycle> {
    let n = form.dim();
    let mut a: Vec<Vec<Rat>> = form
        .matrix
        .iter()
        .map(|r| r.iter().map(|&x| rat(-x)).collect())
        .collect();
    let mut inv: Vec<Vec<Rat>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero()).expect("definite form is invertible");
        a.swap(c, p);
        inv.swap(c, p);
        let piv = a[c][c].clone();
        for j in 0..n {
            a[c][j] /= &piv;
            inv[c][j] /= &piv;
        }
        for r in 0..n {
            if r == c || a[r][c].is_zero() {
                continue;
            }
            let f = a[r][c].clone();
            for j in 0..n {
                let t = &f * &a[c][j];
                a[r][j] -= t;
                let t = &f * &inv[c][j];
                inv[r][j] -= t;
            }
        }
    }
    (0..n).map(|v| RatCycle((0..n).map(|i| inv[i][v].clone()).collect())).collect()
}
