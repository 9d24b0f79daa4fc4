//! Brute-force reference computations.
//!
//! Everything here enumerates lattice points in an explicit box and
//! evaluates `chi` straight from the intersection matrix, sharing no code
//! with the search engine. Intended for small graphs and for testing.

use std::fmt;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::cycle::{Cycle, RatCycle};
use crate::engine::{BoxBounds, MinQuery, MinResult, Region};
use crate::error::{Error, Result};
use crate::invariants::Singularity;
use crate::lattice::{HClass, Lattice};
use crate::rational::{format_rat, lcm_of_denominators, to_i128, Rat};

/// Largest box the oracle will enumerate.
pub const MAX_ENUMERATION: u128 = 100_000_000;

/// Every lattice point of the box, in lexicographic order.
pub fn enumerate_box(bounds: &BoxBounds) -> Result<Vec<Cycle>> {
    let volume = checked_volume(bounds)?;
    let mut out = Vec::with_capacity(volume as usize);
    for i in 0..volume {
        out.push(point_at(bounds, i));
    }
    Ok(out)
}

fn checked_volume(bounds: &BoxBounds) -> Result<u128> {
    checked_volume_capped(bounds, MAX_ENUMERATION)
}

fn checked_volume_capped(bounds: &BoxBounds, cap: u128) -> Result<u128> {
    if bounds.lo.len() != bounds.hi.len() {
        return Err(Error::Dimension { expected: bounds.lo.len(), got: bounds.hi.len() });
    }
    if bounds.lo.0.iter().zip(&bounds.hi.0).any(|(a, b)| a > b) {
        return Err(Error::EmptyRegion);
    }
    match bounds.volume() {
        Some(v) if v <= cap => Ok(v),
        _ => Err(Error::ResourceLimit(format!("box has more than {cap} points"))),
    }
}

/// The `i`-th point in lexicographic order, last coordinate fastest.
fn point_at(bounds: &BoxBounds, mut i: u128) -> Cycle {
    let n = bounds.lo.len();
    let mut c = vec![0i64; n];
    for v in (0..n).rev() {
        let side = (bounds.hi.0[v] - bounds.lo.0[v] + 1) as u128;
        c[v] = bounds.lo.0[v] + (i % side) as i64;
        i /= side;
    }
    Cycle(c)
}

/// `chi(x0 + l)` scaled to an integer: `x0 = Y/N`, `Z_K = K/N`, and
/// `chi = -(Y, Y - K) / (2 N^2)`.
struct ScaledChi {
    matrix: Vec<Vec<i128>>,
    scale: i128,
    base: Vec<i128>,
    canonical: Vec<i128>,
}

impl ScaledChi {
    fn new(lattice: &Lattice, shift: &RatCycle) -> Result<Self> {
        let zk = lattice.anticanonical_cycle();
        let big = lcm_of_denominators(shift.0.iter().chain(zk.0.iter()));
        let scale = to_i128(&big)?;
        let scaled = |x: &Rat| to_i128(&(x * Rat::from_integer(big.clone())).to_integer());
        Ok(ScaledChi {
            matrix: lattice
                .form()
                .matrix
                .iter()
                .map(|r| r.iter().map(|&x| x as i128).collect())
                .collect(),
            scale,
            base: shift.0.iter().map(scaled).collect::<Result<_>>()?,
            canonical: zk.0.iter().map(scaled).collect::<Result<_>>()?,
        })
    }

    /// Numerator over `2 N^2`.
    fn numerator(&self, l: &Cycle) -> i128 {
        let n = self.base.len();
        let y: Vec<i128> = (0..n).map(|v| self.base[v] + self.scale * l.0[v] as i128).collect();
        let mut acc = 0i128;
        for i in 0..n {
            for j in 0..n {
                acc += y[i] * self.matrix[i][j] * (y[j] - self.canonical[j]);
            }
        }
        -acc
    }

    fn value(&self, numerator: i128) -> Rat {
        Rat::new(BigInt::from(numerator), BigInt::from(2 * self.scale * self.scale))
    }
}

/// Exhaustive minimum of `chi(shift + l)` over `l` in the box, optionally
/// skipping `l = 0`.
pub fn brute_min_chi(
    lattice: &Lattice,
    shift: &RatCycle,
    bounds: &BoxBounds,
    exclude_zero: bool,
) -> Result<MinResult> {
    brute_min_chi_capped(lattice, shift, bounds, exclude_zero, MAX_ENUMERATION)
}

/// As [`brute_min_chi`] with an explicit cap on the box volume.
pub fn brute_min_chi_capped(
    lattice: &Lattice,
    shift: &RatCycle,
    bounds: &BoxBounds,
    exclude_zero: bool,
    cap: u128,
) -> Result<MinResult> {
    let n = lattice.rank();
    if shift.len() != n || bounds.lo.len() != n {
        return Err(Error::Dimension { expected: n, got: shift.len().min(bounds.lo.len()) });
    }
    let volume = checked_volume_capped(bounds, cap)?;
    let chi = ScaledChi::new(lattice, shift)?;
    let (best, minimizers) = (0..volume)
        .into_par_iter()
        .fold(
            || (i128::MAX, Vec::new()),
            |(best, mut found), i| {
                let l = point_at(bounds, i);
                if exclude_zero && l.is_zero() {
                    return (best, found);
                }
                let v = chi.numerator(&l);
                if v < best {
                    (v, vec![l])
                } else {
                    if v == best {
                        found.push(l);
                    }
                    (best, found)
                }
            },
        )
        .reduce(
            || (i128::MAX, Vec::new()),
            |(a, mut fa), (b, mut fb)| match a.cmp(&b) {
                std::cmp::Ordering::Less => (a, fa),
                std::cmp::Ordering::Greater => (b, fb),
                std::cmp::Ordering::Equal => {
                    fa.append(&mut fb);
                    (a, fa)
                }
            },
        );
    if minimizers.is_empty() {
        return Err(Error::EmptyRegion);
    }
    let visited = u64::try_from(volume).unwrap_or(u64::MAX);
    Ok(MinResult::from_minimizers(chi.value(best), minimizers, visited))
}

/// Convenience box `0 <= l <= (bound, .., bound)`.
pub fn cube(n: usize, bound: i64) -> BoxBounds {
    BoxBounds { lo: Cycle::zero(n), hi: Cycle(vec![bound; n]) }
}

/// The smallest positive cycle with `(Z, E_v) <= 0` for all `v`, found by
/// scanning `0 <= Z <= bound`.
pub fn brute_fundamental_cycle(lattice: &Lattice, bound: &Cycle) -> Result<Cycle> {
    let n = lattice.rank();
    let points = enumerate_box(&BoxBounds { lo: Cycle::zero(n), hi: bound.clone() })?;
    let m = &lattice.form().matrix;
    let antinef: Vec<Cycle> = points
        .into_iter()
        .filter(|l| {
            l.is_positive() && (0..n).all(|v| (0..n).map(|w| m[v][w] * l.0[w]).sum::<i64>() <= 0)
        })
        .collect();
    let minimal: Vec<&Cycle> = antinef
        .iter()
        .filter(|c| !antinef.iter().any(|d| d != *c && d <= *c))
        .collect();
    match minimal.as_slice() {
        [] => Err(Error::Infeasible(format!("no antinef cycle below {bound}"))),
        [only] => Ok((*only).clone()),
        _ => Err(Error::Internal(format!("{} minimal antinef cycles", minimal.len()))),
    }
}

/// Lipman cone membership from the matrix and the coordinates alone.
pub fn brute_in_lipman_cone(lattice: &Lattice, x: &RatCycle) -> bool {
    let m = &lattice.form().matrix;
    let zero = Rat::from_integer(0.into());
    (0..lattice.rank()).all(|v| {
        let s: Rat = (0..lattice.rank()).map(|w| Rat::from_integer(m[v][w].into()) * &x.0[w]).sum();
        s.is_integer() && s <= zero
    })
}

/// Exhaustive `min_{l > 0} chi(shift + l)` over a box that is certified to
/// hold all minimizers, widened by one layer.
fn brute_positive_min(lattice: &Lattice, shift: &RatCycle, cap: u128) -> Result<MinResult> {
    let q = MinQuery::new(shift.clone(), Region::NonNegOrthant).excluding_zero();
    let b = lattice.certify_bound(&q)?;
    let wide = BoxBounds { lo: b.lo, hi: Cycle(b.hi.0.iter().map(|x| x + 1).collect()) };
    brute_min_chi_capped(lattice, shift, &wide, true, cap)
}

/// Integral members of the analytic semigroup in `0 <= l <= bound`: `0`
/// and every `l` with `chi(l) < chi(l + x)` for all `x > 0`.
pub fn brute_semigroup(lattice: &Lattice, bound: &Cycle) -> Result<Vec<Cycle>> {
    let n = lattice.rank();
    let points = enumerate_box(&BoxBounds { lo: Cycle::zero(n), hi: bound.clone() })?;
    let mut out = Vec::new();
    for l in points {
        if l.is_zero() || !has_non_increasing_step(lattice, &l)? {
            out.push(l);
        }
    }
    Ok(out)
}

/// Whether some `x > 0` has `chi(l + x) <= chi(l)`. Stops at the first hit.
fn has_non_increasing_step(lattice: &Lattice, l: &Cycle) -> Result<bool> {
    let shift = l.to_rat();
    let q = MinQuery::new(shift.clone(), Region::NonNegOrthant).excluding_zero();
    let bounds = lattice.certify_bound(&q)?;
    let volume = checked_volume(&bounds)?;
    let chi = ScaledChi::new(lattice, &shift)?;
    let here = chi.numerator(&Cycle::zero(l.len()));
    Ok((0..volume).into_par_iter().any(|i| {
        let x = point_at(&bounds, i);
        !x.is_zero() && chi.numerator(&x) <= here
    }))
}

/// One comparison between the engine and the brute-force oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl AuditCheck {
    fn new(name: &str, engine: impl fmt::Display, oracle: impl fmt::Display) -> Self {
        let (e, o) = (engine.to_string(), oracle.to_string());
        AuditCheck {
            name: name.into(),
            passed: e == o,
            detail: format!("engine {e}, oracle {o}"),
        }
    }
}

/// Recomputes the main invariants by enumeration and compares them with
/// the engine. Boxes larger than `cap` points fail with `ResourceLimit`.
pub fn audit(s: &Singularity, cap: u128) -> Result<Vec<AuditCheck>> {
    let lat = s.lattice();
    let n = lat.rank();
    let zero = RatCycle::zero(n);
    let mut checks = Vec::new();

    let engine = s.positive_minimum()?;
    let brute = brute_positive_min(lat, &zero, cap)?;
    checks.push(AuditCheck::new("min_positive_chi", format_rat(&engine.value), format_rat(&brute.value)));
    checks.push(AuditCheck::new(
        "positive_minimizers",
        join_cycles(&engine.minimizers),
        join_cycles(&brute.minimizers),
    ));

    let zmin = lat.fundamental_cycle();
    let bound = Cycle(zmin.0.iter().map(|x| x + 1).collect());
    checks.push(AuditCheck::new("fundamental_cycle", &zmin, brute_fundamental_cycle(lat, &bound)?));

    for (h, r) in lat.discriminant_group().representatives() {
        let q = MinQuery::new(r.clone(), Region::FullLattice);
        let b = lat.certify_bound(&q)?;
        let wide = BoxBounds {
            lo: Cycle(b.lo.0.iter().map(|x| x - 1).collect()),
            hi: Cycle(b.hi.0.iter().map(|x| x + 1).collect()),
        };
        let full = brute_min_chi_capped(lat, r, &wide, false, cap)?;
        let name = format!("orthant_min[{}]", class_label(h));
        checks.push(AuditCheck::new(&name, format_rat(&s.orthant_min(r)?), format_rat(&full.value)));
    }

    let semigroup_box = Cycle(vec![1; n]);
    let brute = brute_semigroup(lat, &semigroup_box)?;
    let engine: Vec<Cycle> = enumerate_box(&BoxBounds { lo: Cycle::zero(n), hi: semigroup_box })?
        .into_iter()
        .filter_map(|l| match s.in_analytic_semigroup(&l.to_rat()) {
            Ok(true) => Some(Ok(l)),
            Ok(false) => None,
            Err(e) => Some(Err(e)),
        })
        .collect::<Result<_>>()?;
    checks.push(AuditCheck::new("semigroup", join_cycles(&engine), join_cycles(&brute)));
    Ok(checks)
}

fn join_cycles(xs: &[Cycle]) -> String {
    xs.iter().map(Cycle::to_string).collect::<Vec<_>>().join(" ")
}

fn class_label(h: &HClass) -> String {
    h.0.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
}
