//! Coefficients of the equivariant Hilbert and Poincaré series of the
//! divisorial filtration, for the generic analytic structure.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::cycle::{Cycle, RatCycle};
use crate::error::{Error, Result};
use crate::invariants::Singularity;
use crate::lattice::{HClass, Lattice};
use crate::rational::{integral, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SeriesKind {
    Hilbert,
    Poincare,
}

impl fmt::Display for SeriesKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SeriesKind::Hilbert => "hilbert",
            SeriesKind::Poincare => "poincare",
        })
    }
}

/// Coefficients at `l' = r_h + l_0` for every class `h` and every
/// `0 <= l_0 <= bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesTruncation {
    pub kind: SeriesKind,
    pub bound: Cycle,
    pub coefficients: BTreeMap<(HClass, Vec<i64>), i64>,
}

impl SeriesTruncation {
    pub fn get(&self, h: &HClass, l0: &[i64]) -> Option<i64> {
        self.coefficients.get(&(h.clone(), l0.to_vec())).copied()
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Entries as `(class, exponent r_h + l_0, coefficient)`, in key order.
    pub fn entries<'a>(
        &'a self,
        lattice: &'a Lattice,
    ) -> impl Iterator<Item = (&'a HClass, RatCycle, i64)> + 'a {
        self.coefficients.iter().map(move |((h, l0), &c)| {
            let r = lattice.discriminant_group().representative(h).expect("known class");
            (h, r.add_cycle(&Cycle(l0.clone())), c)
        })
    }
}

/// Lattice points of `[0, bound]` in lexicographic order.
fn window(bound: &Cycle) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for &b in &bound.0 {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..=b).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

/// All subsets `I` of the vertex set with their `(-1)^{|I|+1}` signs.
fn signed_subsets(n: usize) -> impl Iterator<Item = (u64, i64)> {
    (0u64..1 << n).map(|mask| (mask, if mask.count_ones() % 2 == 0 { -1 } else { 1 }))
}

fn add_subset(l0: &[i64], mask: u64) -> Vec<i64> {
    l0.iter()
        .enumerate()
        .map(|(v, &x)| x + i64::from(mask >> v & 1 == 1))
        .collect()
}

impl Singularity {
    /// `h(l')`, defined for every `l' ∈ L'` through `l' = r_h + l_0`.
    pub fn hilbert_coefficient(&self, l: &RatCycle) -> Result<i64> {
        let (h, l0) = self.lattice().decompose(l)?;
        self.class_hilbert(&h, &l0.0)
    }

    fn class_hilbert(&self, h: &HClass, l0: &[i64]) -> Result<i64> {
        let l0 = if l0.iter().all(|&x| x >= 0) {
            l0.to_vec()
        } else {
            // h(l') = h(s(l')), and s(l') - r_h is effective
            let r = self.lattice().discriminant_group().representative(h).expect("known class");
            let s = self.lattice().antinef_closure(&r.add_cycle(&Cycle(l0.to_vec())));
            (&s - r).to_cycle().expect("same class").0
        };
        if l0.iter().all(|&x| x == 0) {
            return Ok(0);
        }
        let zero = vec![0; l0.len()];
        let diff: Rat = self.class_orthant_min(h, &l0)? - self.class_orthant_min(h, &zero)?;
        let correction = i64::from(h.is_zero() && !self.is_rational()?);
        Ok(integral(&diff)? + correction)
    }

    /// `p(l')` for `l' ∈ L'` with `l' >= 0`.
    pub fn poincare_coefficient(&self, l: &RatCycle) -> Result<i64> {
        let l = self.lattice().dual_element(l.clone())?;
        if !l.is_effective() {
            return Err(Error::InvalidArgument(format!("{l} is not effective")));
        }
        let (h, l0) = self.lattice().decompose(&l)?;
        self.class_poincare(&h, &l0.0)
    }

    fn class_poincare(&self, h: &HClass, l0: &[i64]) -> Result<i64> {
        if h.is_zero() && l0.iter().all(|&x| x == 0) {
            return Ok(1);
        }
        let mut total = Rat::from_integer(0.into());
        for (mask, sign) in signed_subsets(l0.len()) {
            let m = self.class_orthant_min(h, &add_subset(l0, mask))?;
            total += m * Rat::from_integer(sign.into());
        }
        integral(&total)
    }

    /// Every coefficient with `0 <= l_0 <= bound`, over all classes.
    pub fn series_truncation(&self, kind: SeriesKind, bound: &Cycle) -> Result<SeriesTruncation> {
        let n = self.lattice().rank();
        if bound.len() != n {
            return Err(Error::Dimension { expected: n, got: bound.len() });
        }
        if !bound.is_effective() {
            return Err(Error::InvalidArgument(format!("bound {bound} is not effective")));
        }
        let points = window(bound);
        let classes: Vec<HClass> = self.lattice().discriminant_group().classes().cloned().collect();
        let jobs: Vec<(HClass, Vec<i64>)> = classes
            .iter()
            .flat_map(|h| points.iter().map(move |p| (h.clone(), p.clone())))
            .collect();
        let values: Vec<i64> = jobs
            .par_iter()
            .map(|(h, p)| match kind {
                SeriesKind::Hilbert => self.class_hilbert(h, p),
                SeriesKind::Poincare => self.class_poincare(h, p),
            })
            .collect::<Result<_>>()?;
        Ok(SeriesTruncation {
            kind,
            bound: bound.clone(),
            coefficients: jobs.into_iter().zip(values).collect(),
        })
    }
}

/// Checks `p(l') = sum_I (-1)^{|I|+1} h(l' + E_I)` on the whole window of
/// `p`.
pub fn verify_convolution(h: &SeriesTruncation, p: &SeriesTruncation) -> Result<bool> {
    if h.kind != SeriesKind::Hilbert || p.kind != SeriesKind::Poincare {
        return Err(Error::InvalidArgument("expected a Hilbert and a Poincaré truncation".into()));
    }
    let n = p.bound.len();
    if h.bound.len() != n || h.bound.0.iter().zip(&p.bound.0).any(|(a, b)| *a < b + 1) {
        return Err(Error::InvalidArgument(format!(
            "Hilbert window {} must exceed Poincaré window {} by one in every coordinate",
            h.bound, p.bound
        )));
    }
    for ((class, l0), &coeff) in &p.coefficients {
        let mut sum = 0;
        for (mask, sign) in signed_subsets(n) {
            match h.get(class, &add_subset(l0, mask)) {
                Some(x) => sum += sign * x,
                None => return Err(Error::InvalidArgument("Hilbert truncation is missing a class".into())),
            }
        }
        if sum != coeff {
            return Ok(false);
        }
    }
    Ok(true)
}
