//! Certified exact minimization of `l ↦ chi(x0 + l)` over integral `l` in
//! a box, the non-negative orthant, or the whole lattice.
//!
//! With `Q = -M` positive definite,
//!
//! ```text
//! chi(x0 + l) - chi(x0) = 1/2 l^T Q l - b^T l,   b_v = (x0, E_v) - (E_v^2 + 2)/2,
//! ```
//!
//! so the problem is a closest-vector search around `l* = Q^{-1} b = Z_K/2 - x0`.
//! The search enumerates coordinates from the last vertex down to the
//! first and prunes a partial assignment as soon as the exact minimum of
//! the objective over all real completions exceeds the incumbent. That
//! lower bound is a Schur complement; scaled by the determinant of the free
//! block it is an integer, so the whole search runs in `i128`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::cycle::{Cycle, RatCycle};
use crate::error::{Error, Result};
use crate::graph::IntersectionForm;
use crate::lattice::{dual_basis, Lattice};
use crate::rational::{floor, integer_interval, lcm_of_denominators, rat, ratio, to_i128, to_i64, Rat};

/// Default cap on visited search nodes.
pub const DEFAULT_MAX_NODES: u64 = 100_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Region {
    /// `0 <= l <= Z`.
    Box(Cycle),
    /// `l >= 0`.
    NonNegOrthant,
    FullLattice,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MinQuery {
    pub shift: RatCycle,
    pub region: Region,
    /// Drop the single point `l = 0` from the region.
    pub exclude_zero: bool,
}

impl MinQuery {
    pub fn new(shift: RatCycle, region: Region) -> Self {
        MinQuery { shift, region, exclude_zero: false }
    }

    pub fn excluding_zero(mut self) -> Self {
        self.exclude_zero = true;
        self
    }

    pub fn contains(&self, l: &Cycle) -> bool {
        if self.exclude_zero && l.is_zero() {
            return false;
        }
        match &self.region {
            Region::Box(z) => l.is_effective() && l <= z,
            Region::NonNegOrthant => l.is_effective(),
            Region::FullLattice => true,
        }
    }
}

/// An inclusive integer box `lo <= l <= hi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxBounds {
    pub lo: Cycle,
    pub hi: Cycle,
}

impl BoxBounds {
    pub fn contains(&self, l: &Cycle) -> bool {
        &self.lo <= l && l <= &self.hi
    }

    /// Number of lattice points, or `None` on overflow.
    pub fn volume(&self) -> Option<u128> {
        self.lo.0.iter().zip(&self.hi.0).try_fold(1u128, |acc, (a, b)| {
            let side = u128::try_from(b - a + 1).ok()?;
            acc.checked_mul(side)
        })
    }
}

/// Exact minimum with the extremal elements of the minimizer set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinResult {
    pub value: Rat,
    /// The meet of all minimizers when that meet is itself a minimizer
    /// (`meet_attained`); otherwise the lexicographically first
    /// `<=`-minimal minimizer.
    pub min_minimizer: Cycle,
    /// The join of all minimizers when attained, otherwise the
    /// lexicographically last `<=`-maximal minimizer.
    pub max_minimizer: Cycle,
    pub meet_attained: bool,
    pub join_attained: bool,
    /// Every minimizer, sorted lexicographically.
    pub minimizers: Vec<Cycle>,
    /// Search nodes visited.
    pub visited_nodes: u64,
}

impl MinResult {
    /// Folds a finite set of minimizers into a result.
    pub fn from_minimizers(value: Rat, mut minimizers: Vec<Cycle>, visited_nodes: u64) -> Self {
        assert!(!minimizers.is_empty(), "a minimum needs at least one minimizer");
        minimizers.sort_by(|a, b| a.0.cmp(&b.0));
        minimizers.dedup();
        let meet = minimizers.iter().skip(1).fold(minimizers[0].clone(), |m, x| m.meet(x));
        let join = minimizers.iter().skip(1).fold(minimizers[0].clone(), |m, x| m.join(x));
        let meet_attained = minimizers.binary_search_by(|x| x.0.cmp(&meet.0)).is_ok();
        let join_attained = minimizers.binary_search_by(|x| x.0.cmp(&join.0)).is_ok();
        let min_minimizer = if meet_attained {
            meet
        } else {
            minimal_elements(&minimizers)[0].clone()
        };
        let max_minimizer = if join_attained {
            join
        } else {
            maximal_elements(&minimizers).last().expect("nonempty").clone()
        };
        MinResult {
            value,
            min_minimizer,
            max_minimizer,
            meet_attained,
            join_attained,
            minimizers,
            visited_nodes,
        }
    }

    pub fn enumerated_count(&self) -> usize {
        self.minimizers.len()
    }

    /// The `<=`-minimal minimizers, lexicographically sorted.
    pub fn minimal_minimizers(&self) -> Vec<Cycle> {
        minimal_elements(&self.minimizers)
    }
}

fn minimal_elements(xs: &[Cycle]) -> Vec<Cycle> {
    xs.iter()
        .filter(|x| !xs.iter().any(|y| y.partial_cmp(x) == Some(Ordering::Less)))
        .cloned()
        .collect()
}

fn maximal_elements(xs: &[Cycle]) -> Vec<Cycle> {
    xs.iter()
        .filter(|x| !xs.iter().any(|y| y.partial_cmp(x) == Some(Ordering::Greater)))
        .cloned()
        .collect()
}

/// Per-lattice tables for the search: the adjugates and determinants of
/// every leading principal block of `Q = -M`.
#[derive(Clone, Debug)]
pub(crate) struct SearchTables {
    n: usize,
    q: Vec<Vec<i128>>,
    /// sparse rows of `Q` without the diagonal
    off_diagonal: Vec<Vec<(usize, i128)>>,
    /// `(Q^{-1})_{vv}`
    inverse_diagonal: Vec<Rat>,
    /// `det Q[0..k, 0..k]` for `k = 0..=n`
    prefix_det: Vec<i128>,
    /// `adj Q[0..k, 0..k]` for `k = 0..=n`
    prefix_adj: Vec<Vec<Vec<i128>>>,
}

impl SearchTables {
    pub(crate) fn new(form: &IntersectionForm) -> Result<Self> {
        let n = form.dim();
        let q: Vec<Vec<i128>> = form
            .matrix
            .iter()
            .map(|r| r.iter().map(|&x| -(x as i128)).collect())
            .collect();
        let off_diagonal = (0..n)
            .map(|i| (0..n).filter(|&j| j != i && q[i][j] != 0).map(|j| (j, q[i][j])).collect())
            .collect();
        let duals = dual_basis(form);
        let inverse_diagonal = (0..n).map(|v| duals[v].0[v].clone()).collect();
        let minors = form.leading_minors();
        let mut prefix_det = vec![1i128];
        let mut prefix_adj = vec![Vec::new()];
        for k in 1..=n {
            // det(-M_k) = (-1)^k det(M_k)
            let det = if k % 2 == 0 { minors[k - 1].clone() } else { -minors[k - 1].clone() };
            let sub = IntersectionForm {
                matrix: form.matrix[..k].iter().map(|r| r[..k].to_vec()).collect(),
            };
            // columns of (-M_k)^{-1}
            let inv = dual_basis(&sub);
            let mut adj = vec![vec![0i128; k]; k];
            for (j, col) in inv.iter().enumerate() {
                for i in 0..k {
                    let e = &col.0[i] * &det;
                    if !e.is_integer() {
                        return Err(Error::Internal("adjugate is not integral".into()));
                    }
                    adj[i][j] = to_i128(e.numer())?;
                }
            }
            if !det.is_integer() || !det.is_positive() {
                return Err(Error::Internal("leading block is not positive definite".into()));
            }
            prefix_det.push(to_i128(det.numer())?);
            prefix_adj.push(adj);
        }
        Ok(SearchTables { n, q, off_diagonal, inverse_diagonal, prefix_det, prefix_adj })
    }
}

impl Lattice {
    /// A box containing every minimizer of the query, already clipped to
    /// the query region.
    pub fn certify_bound(&self, q: &MinQuery) -> Result<BoxBounds> {
        Ok(self.certify(q)?.0)
    }

    /// The certified box together with the incumbent used to size it.
    fn certify(&self, q: &MinQuery) -> Result<(BoxBounds, Cycle)> {
        let n = self.rank();
        if q.shift.len() != n {
            return Err(Error::Dimension { expected: n, got: q.shift.len() });
        }
        let (region_lo, region_hi): (Vec<Option<i64>>, Vec<Option<i64>>) = match &q.region {
            Region::Box(z) => {
                if z.len() != n {
                    return Err(Error::Dimension { expected: n, got: z.len() });
                }
                if !z.is_effective() {
                    return Err(Error::InvalidArgument(format!("box corner {z} is not effective")));
                }
                if q.exclude_zero && z.is_zero() {
                    return Err(Error::EmptyRegion);
                }
                (vec![Some(0); n], z.0.iter().map(|&c| Some(c)).collect())
            }
            Region::NonNegOrthant => (vec![Some(0); n], vec![None; n]),
            Region::FullLattice => (vec![None; n], vec![None; n]),
        };

        // f(l) = chi(x0 + l) - chi(x0) = 1/2 l^T Q l - b^T l
        let lin: Vec<Rat> = (0..n)
            .map(|v| self.pairing_with_basis(&q.shift, v) - ratio(self.graph().euler(v) + 2, 2))
            .collect();
        let f = |l: &[Rat]| -self.form().pair(l, l) / rat(2) - dot(&lin, l);
        let unconstrained = &self.anticanonical_cycle().scale(&ratio(1, 2)) - &q.shift;
        // the unconstrained minimizer is a valid, looser, fallback centre
        let center = self
            .region_minimizer(&lin, &region_lo, &region_hi, unconstrained.0.clone())
            .unwrap_or(unconstrained.0);

        let mut candidates = Vec::new();
        if !q.exclude_zero {
            candidates.push(Cycle::zero(n));
        }
        for v in 0..n {
            candidates.push(Cycle::basis(n, v));
        }
        let rounded: Vec<i64> = center
            .iter()
            .zip(region_lo.iter().zip(&region_hi))
            .map(|(c, (lo, hi))| {
                let mut r = to_i64(&floor(&(c + ratio(1, 2))))?;
                if let Some(lo) = lo {
                    r = r.max(*lo);
                }
                if let Some(hi) = hi {
                    r = r.min(*hi);
                }
                Ok(r)
            })
            .collect::<Result<_>>()?;
        candidates.push(Cycle(rounded));
        let incumbent = candidates
            .into_iter()
            .filter(|p| q.contains(p))
            .map(|p| (f(&p.to_rat().0), p))
            .min_by(|a, b| a.0.cmp(&b.0))
            .map(|(_, p)| p)
            .ok_or(Error::EmptyRegion)?;

        // On the region f(l) >= f(c) + 1/2 (l - c)^T Q (l - c) for the
        // region minimizer c (and everywhere for the unconstrained one), so every improving l has
        // 1/2 (l - c)^T Q (l - c) <= f(p) - f(c).
        let radius = f(&incumbent.to_rat().0) - f(&center);
        let mut lo = Vec::with_capacity(n);
        let mut hi = Vec::with_capacity(n);
        for v in 0..n {
            let r2 = &radius * rat(2) * &self.tables.inverse_diagonal[v];
            let (a, b) = integer_interval(&center[v], &r2)
                .ok_or_else(|| Error::Internal("incumbent outside its own ellipsoid".into()))?;
            let mut a = to_i64(&a)?;
            let mut b = to_i64(&b)?;
            if let Some(l) = region_lo[v] {
                a = a.max(l);
            }
            if let Some(h) = region_hi[v] {
                b = b.min(h);
            }
            lo.push(a);
            hi.push(b);
        }
        let bounds = BoxBounds { lo: Cycle(lo), hi: Cycle(hi) };
        if !bounds.contains(&incumbent) {
            return Err(Error::Internal("certified box misses the incumbent".into()));
        }
        Ok((bounds, incumbent))
    }

    /// Exact minimizer of `1/2 l^T Q l - lin^T l` over `lo <= l <= hi`
    /// (missing bounds are infinite), by a primal active-set method
    /// started from the clipped unconstrained minimizer `free_min`. `None`
    /// if the method fails to settle within its iteration budget.
    fn region_minimizer(
        &self,
        lin: &[Rat],
        lo: &[Option<i64>],
        hi: &[Option<i64>],
        free_min: Vec<Rat>,
    ) -> Option<Vec<Rat>> {
        let n = lin.len();
        let q = |i: usize, j: usize| rat(-self.form().matrix[i][j]);
        let lo: Vec<Option<Rat>> = lo.iter().map(|b| b.map(rat)).collect();
        let hi: Vec<Option<Rat>> = hi.iter().map(|b| b.map(rat)).collect();
        let mut x = free_min;
        let mut fixed = vec![false; n];
        for v in 0..n {
            if let Some(l) = lo[v].as_ref().filter(|l| x[v] < **l) {
                x[v] = l.clone();
                fixed[v] = true;
            } else if let Some(h) = hi[v].as_ref().filter(|h| x[v] > **h) {
                x[v] = h.clone();
                fixed[v] = true;
            }
        }
        for _ in 0..4 * n * n + 16 {
            // minimize over the free coordinates with the rest held
            let free: Vec<usize> = (0..n).filter(|&v| !fixed[v]).collect();
            let mut system: Vec<Vec<Rat>> = free
                .iter()
                .map(|&i| {
                    let mut row: Vec<Rat> = free.iter().map(|&j| q(i, j)).collect();
                    let rhs = (0..n)
                        .filter(|&j| fixed[j])
                        .fold(lin[i].clone(), |acc, j| acc - q(i, j) * &x[j]);
                    row.push(rhs);
                    row
                })
                .collect();
            let sol = solve_spd(&mut system);
            let mut y = x.clone();
            for (k, &v) in free.iter().enumerate() {
                y[v] = sol[k].clone();
            }
            // longest feasible step from x towards y
            let mut step = Rat::one();
            let mut blocking = None;
            for &v in &free {
                let d = &y[v] - &x[v];
                let limit = if d.is_negative() {
                    lo[v].as_ref().map(|l| (l - &x[v]) / &d)
                } else if d.is_positive() {
                    hi[v].as_ref().map(|h| (h - &x[v]) / &d)
                } else {
                    None
                };
                if let Some(t) = limit.filter(|t| *t < step) {
                    step = t;
                    blocking = Some(v);
                }
            }
            if let Some(v) = blocking {
                for &w in &free {
                    let d = &y[w] - &x[w];
                    x[w] += &step * d;
                }
                fixed[v] = true;
                continue;
            }
            x = y;
            // release the bound whose multiplier has the wrong sign
            let grad = |i: usize| (0..n).fold(-lin[i].clone(), |acc, j| acc + q(i, j) * &x[j]);
            let mut worst: Option<(usize, Rat)> = None;
            for v in (0..n).filter(|&v| fixed[v]) {
                let g = grad(v);
                let at_lower = lo[v].as_ref() == Some(&x[v]);
                let violation = if at_lower { -g } else { g };
                if violation.is_positive() && worst.as_ref().is_none_or(|(_, w)| violation > *w) {
                    worst = Some((v, violation));
                }
            }
            match worst {
                Some((v, _)) => fixed[v] = false,
                None => return Some(x),
            }
        }
        None
    }

    pub fn min_chi(&self, q: &MinQuery) -> Result<MinResult> {
        self.min_chi_limited(q, DEFAULT_MAX_NODES)
    }

    /// As [`Lattice::min_chi`], failing with `ResourceLimit` after
    /// `max_nodes` search nodes.
    pub fn min_chi_limited(&self, q: &MinQuery, max_nodes: u64) -> Result<MinResult> {
        let (bounds, incumbent) = self.certify(q)?;
        let n = self.rank();
        let t = &self.tables;

        // integer objective G(l) = D l^T Q l - c^T l = 2D (chi(x0+l) - chi(x0))
        let twice_b: Vec<Rat> = (0..n)
            .map(|v| {
                self.pairing_with_basis(&q.shift, v) * rat(2) - rat(self.graph().euler(v) + 2)
            })
            .collect();
        let d_big = lcm_of_denominators(twice_b.iter());
        let d = to_i128(&d_big)?;
        let c: Vec<i128> = twice_b
            .iter()
            .map(|x| to_i128(&(x * Rat::from_integer(d_big.clone())).to_integer()))
            .collect::<Result<_>>()?;

        check_magnitudes(t, d, &c, &bounds)?;

        let mut search = Search {
            t,
            d,
            lo: bounds.lo.0.clone(),
            hi: bounds.hi.0.clone(),
            exclude_zero: q.exclude_zero,
            best: objective(t, d, &c, &incumbent.0),
            found: Vec::new(),
            nodes: 0,
            max_nodes,
            a: vec![0; n],
            w: c,
        };
        search.descend(n, 0)?;
        if search.found.is_empty() {
            return Err(Error::Internal("search lost the incumbent".into()));
        }
        let value = self.chi(&q.shift)
            + Rat::new(BigInt::from(search.best), BigInt::from(2 * d));
        let minimizers = search.found.into_iter().map(Cycle).collect();
        Ok(MinResult::from_minimizers(value, minimizers, search.nodes))
    }
}

fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solves a symmetric positive definite system given as an augmented
/// matrix, by exact Gaussian elimination.
fn solve_spd(a: &mut [Vec<Rat>]) -> Vec<Rat> {
    let n = a.len();
    for k in 0..n {
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let factor = &a[i][k] / &a[k][k];
            for j in k..=n {
                let delta = &factor * &a[k][j];
                a[i][j] -= delta;
            }
        }
    }
    let mut x = vec![Rat::zero(); n];
    for i in (0..n).rev() {
        let s = (i + 1..n).fold(a[i][n].clone(), |acc, j| acc - &a[i][j] * &x[j]);
        x[i] = s / &a[i][i];
    }
    x
}

fn objective(t: &SearchTables, d: i128, c: &[i128], l: &[i64]) -> i128 {
    let mut quad = 0i128;
    for i in 0..t.n {
        for j in 0..t.n {
            quad += t.q[i][j] * l[i] as i128 * l[j] as i128;
        }
    }
    d * quad - c.iter().zip(l).map(|(&ci, &li)| ci * li as i128).sum::<i128>()
}

/// Rejects inputs whose intermediate values could leave `i128`.
fn check_magnitudes(t: &SearchTables, d: i128, c: &[i128], bounds: &BoxBounds) -> Result<()> {
    let n = t.n as u128;
    let a = bounds
        .lo
        .0
        .iter()
        .chain(&bounds.hi.0)
        .map(|x| x.unsigned_abs() as u128)
        .max()
        .unwrap_or(0)
        .max(1);
    let d = d.unsigned_abs();
    let qrow = t.q.iter().map(|r| r.iter().map(|x| x.unsigned_abs()).sum::<u128>()).max().unwrap_or(1);
    let cmax = c.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0);
    let adj = t
        .prefix_adj
        .iter()
        .flatten()
        .flatten()
        .map(|x| x.unsigned_abs())
        .max()
        .unwrap_or(1);
    let det = t.prefix_det.iter().map(|x| x.unsigned_abs()).max().unwrap_or(1);
    let w = cmax.saturating_add(2u128.saturating_mul(d).saturating_mul(qrow).saturating_mul(a));
    let konst = d
        .saturating_mul(n)
        .saturating_mul(qrow)
        .saturating_mul(a)
        .saturating_mul(a)
        .saturating_add(n.saturating_mul(cmax).saturating_mul(a));
    let scaled = 4u128.saturating_mul(d).saturating_mul(det).saturating_mul(konst);
    let quad = n.saturating_mul(n).saturating_mul(adj).saturating_mul(w).saturating_mul(w);
    let total = scaled.saturating_add(quad).saturating_mul(4);
    if total >= 1u128 << 124 {
        return Err(Error::ResourceLimit(
            "search magnitudes exceed 128-bit arithmetic".into(),
        ));
    }
    Ok(())
}

struct Search<'a> {
    t: &'a SearchTables,
    d: i128,
    lo: Vec<i64>,
    hi: Vec<i64>,
    exclude_zero: bool,
    best: i128,
    found: Vec<Vec<i64>>,
    nodes: u64,
    max_nodes: u64,
    a: Vec<i64>,
    /// `w_i = c_i - 2D sum_{j assigned} Q_ij a_j`
    w: Vec<i128>,
}

impl Search<'_> {
    /// `4D det_k * (min over real completions of G)`, coordinates `k..n`
    /// assigned and `konst` their contribution to `G`.
    fn scaled_bound(&self, k: usize, konst: i128) -> i128 {
        let adj = &self.t.prefix_adj[k];
        let mut quad = 0i128;
        for i in 0..k {
            let mut s = 0i128;
            for j in 0..k {
                s += adj[i][j] * self.w[j];
            }
            quad += self.w[i] * s;
        }
        4 * self.d * self.t.prefix_det[k] * konst - quad
    }

    fn admissible(&self, k: usize, konst: i128) -> bool {
        self.scaled_bound(k, konst) <= 4 * self.d * self.t.prefix_det[k] * self.best
    }

    fn descend(&mut self, k: usize, konst: i128) -> Result<()> {
        if k == 0 {
            if self.exclude_zero && self.a.iter().all(|&x| x == 0) {
                return Ok(());
            }
            match konst.cmp(&self.best) {
                Ordering::Less => {
                    self.best = konst;
                    self.found.clear();
                    self.found.push(self.a.clone());
                }
                Ordering::Equal => self.found.push(self.a.clone()),
                Ordering::Greater => {}
            }
            return Ok(());
        }
        let j = k - 1;
        // real minimizer of coordinate j given the assigned suffix
        let adj = &self.t.prefix_adj[k];
        let num: i128 = (0..k).map(|i| adj[j][i] * self.w[i]).sum();
        let den = 2 * self.d * self.t.prefix_det[k];
        let center = num.div_euclid(den) as i64;
        let start = center.clamp(self.lo[j], self.hi[j]);

        let mut t = start;
        while t >= self.lo[j] {
            if !self.try_value(j, t, konst)? {
                break;
            }
            t -= 1;
        }
        let mut t = start + 1;
        while t <= self.hi[j] {
            if !self.try_value(j, t, konst)? {
                break;
            }
            t += 1;
        }
        Ok(())
    }

    /// Assigns `a_j = value`; recurses when the bound admits it. Returns
    /// whether the bound admitted the value.
    fn try_value(&mut self, j: usize, value: i64, konst: i128) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(Error::ResourceLimit(format!(
                "search exceeded {} nodes",
                self.max_nodes
            )));
        }
        let tv = value as i128;
        let next = konst + self.d * self.t.q[j][j] * tv * tv - tv * self.w[j];
        let step = 2 * self.d * tv;
        for &(i, qij) in &self.t.off_diagonal[j] {
            self.w[i] -= step * qij;
        }
        self.a[j] = value;
        let ok = self.admissible(j, next);
        if ok {
            self.descend(j, next)?;
        }
        for &(i, qij) in &self.t.off_diagonal[j] {
            self.w[i] += step * qij;
        }
        self.a[j] = 0;
        Ok(ok)
    }
}
