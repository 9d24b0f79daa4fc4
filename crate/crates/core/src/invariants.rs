//! Invariants of the generic analytic structure supported on a plumbing
//! graph, all reduced to minima of `chi`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_traits::Signed;
use rayon::prelude::*;

use crate::cycle::{Cycle, RatCycle};
use crate::engine::{MinQuery, MinResult, Region, DEFAULT_MAX_NODES};
use crate::error::{Error, Result};
use crate::graph::PlumbingGraph;
use crate::lattice::{HClass, Lattice};
use crate::rational::{integral, Rat};

/// Which sufficient condition certified an `h^1` value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Hypothesis {
    CoeffsNegativeOnSupport,
    ComputationSequenceTerminal,
    AdjacencyCondition,
    GenericBundleFormula,
    Uncertified,
}

impl Hypothesis {
    pub fn tag(self) -> &'static str {
        match self {
            Hypothesis::CoeffsNegativeOnSupport => "coeffs_negative_on_support",
            Hypothesis::ComputationSequenceTerminal => "computation_sequence_terminal",
            Hypothesis::AdjacencyCondition => "adjacency_condition",
            Hypothesis::GenericBundleFormula => "generic_bundle_formula",
            Hypothesis::Uncertified => "uncertified",
        }
    }
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct H1Result {
    pub value: i64,
    pub certified: bool,
    pub hypothesis: Hypothesis,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceStep {
    pub chern: RatCycle,
    pub cycle: Cycle,
    pub vertex: usize,
}

/// Laufer-type computation sequence `(l'_k, Z_k)`; each step subtracts
/// `E_w` from both entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComputationSequence {
    pub steps: Vec<SequenceStep>,
    pub terminal: (RatCycle, Cycle),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Classification {
    pub rational: bool,
    pub elliptic: bool,
    pub minimally_elliptic: bool,
    pub numerically_gorenstein: bool,
    pub qgorenstein_generic_admissible: bool,
}

/// A plumbing lattice with memoized minima, answering questions about the
/// generic analytic structure.
#[derive(Debug)]
pub struct Singularity {
    lattice: Lattice,
    max_nodes: u64,
    positive_min: OnceLock<MinResult>,
    /// `min_{l >= 0} chi(r_h + l_0 + l)` keyed by `(h, l_0)` with
    /// `r_h + l_0` antinef
    orthant_mins: Mutex<HashMap<(HClass, Vec<i64>), Rat>>,
    /// integer pairings `(r_h, E_v)` per class
    class_pairings: OnceLock<HashMap<HClass, Vec<i64>>>,
}

impl Singularity {
    pub fn new(graph: PlumbingGraph) -> Result<Self> {
        Ok(Self::from_lattice(Lattice::new(graph)?))
    }

    pub fn from_lattice(lattice: Lattice) -> Self {
        Singularity {
            lattice,
            max_nodes: DEFAULT_MAX_NODES,
            positive_min: OnceLock::new(),
            orthant_mins: Mutex::new(HashMap::new()),
            class_pairings: OnceLock::new(),
        }
    }

    /// Caps the search nodes of every minimization.
    pub fn with_max_nodes(mut self, max_nodes: u64) -> Self {
        self.max_nodes = max_nodes;
        self
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn max_nodes(&self) -> u64 {
        self.max_nodes
    }

    fn n(&self) -> usize {
        self.lattice.rank()
    }

    pub fn min_chi(&self, q: &MinQuery) -> Result<MinResult> {
        self.lattice.min_chi_limited(q, self.max_nodes)
    }

    /// `min_{l > 0} chi(l)` with all its minimizers.
    pub fn positive_minimum(&self) -> Result<&MinResult> {
        if let Some(r) = self.positive_min.get() {
            return Ok(r);
        }
        let q = MinQuery::new(RatCycle::zero(self.n()), Region::NonNegOrthant).excluding_zero();
        let r = self.min_chi(&q)?;
        Ok(self.positive_min.get_or_init(|| r))
    }

    pub fn min_positive_chi(&self) -> Result<i64> {
        integral(&self.positive_minimum()?.value)
    }

    pub fn is_rational(&self) -> Result<bool> {
        Ok(self.min_positive_chi()? == 1)
    }

    /// `min_{l >= 0} chi(y + l)` for `y ∈ L'`.
    pub fn orthant_min(&self, y: &RatCycle) -> Result<Rat> {
        let (h, l0) = self.lattice.decompose(y)?;
        self.class_orthant_min(&h, &l0.0)
    }

    fn class_pairings(&self, h: &HClass) -> Result<&[i64]> {
        let table = self.class_pairings.get_or_init(|| {
            self.lattice
                .discriminant_group()
                .representatives()
                .map(|(h, r)| {
                    let p = self.lattice.pairings(r);
                    (h.clone(), p.iter().map(|x| integral(x).expect("r_h lies in L'")).collect())
                })
                .collect()
        });
        table
            .get(h)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown class {:?}", h.0)))
    }

    /// `min_{l >= 0} chi(r_h + l_0 + l)`. Memoized on the antinef closure,
    /// which leaves the minimum unchanged.
    pub fn class_orthant_min(&self, h: &HClass, l0: &[i64]) -> Result<Rat> {
        if l0.len() != self.n() {
            return Err(Error::Dimension { expected: self.n(), got: l0.len() });
        }
        let mut pairings = self.class_pairings(h)?.to_vec();
        for (p, q) in pairings.iter_mut().zip(self.lattice.int_pairings(&Cycle(l0.to_vec())).iter()) {
            *p += q;
        }
        let mut offset = l0.to_vec();
        self.lattice.antinef_closure_in_place(&mut pairings, &mut offset);
        let key = (h.clone(), offset);
        if let Some(v) = self.orthant_mins.lock().expect("cache lock").get(&key) {
            return Ok(v.clone());
        }
        let r = self.lattice.discriminant_group().representative(h).expect("class checked above");
        let shift = r.add_cycle(&Cycle(key.1.clone()));
        // for antinef s, chi(s + l) = chi(s) + chi(l) - (s, l) >= chi(s) when
        // chi is non-negative on L_{>=0}
        let value = if self.is_rational()? {
            self.lattice.chi(&shift)
        } else {
            self.min_chi(&MinQuery::new(shift, Region::NonNegOrthant))?.value
        };
        self.orthant_mins.lock().expect("cache lock").insert(key, value.clone());
        Ok(value)
    }

    /// `p_g = 1 - min_{l > 0} chi(l)`.
    pub fn geometric_genus_generic(&self) -> Result<i64> {
        Ok(1 - self.min_positive_chi()?)
    }

    pub fn classify(&self) -> Result<Classification> {
        let m = self.min_positive_chi()?;
        let rational = m == 1;
        let elliptic = m == 0;
        let numerically_gorenstein = self.lattice.is_numerically_gorenstein();
        let minimally_elliptic = elliptic
            && self.lattice.chi_int(&self.lattice.fundamental_cycle()) == 0
            && self.vertex_deletions_rational()?;
        Ok(Classification {
            rational,
            elliptic,
            minimally_elliptic,
            numerically_gorenstein,
            qgorenstein_generic_admissible: rational || minimally_elliptic,
        })
    }

    fn vertex_deletions_rational(&self) -> Result<bool> {
        let graph = self.lattice.graph();
        for v in 0..self.n() {
            let rest: Vec<usize> = (0..self.n()).filter(|&w| w != v).collect();
            for comp in graph.support_components(&rest) {
                let sub = Singularity::from_lattice(Lattice::new(graph.subgraph(&comp)?)?)
                    .with_max_nodes(self.max_nodes);
                if !sub.is_rational()? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    fn check_cycle(&self, z: &Cycle) -> Result<()> {
        if z.len() != self.n() {
            return Err(Error::Dimension { expected: self.n(), got: z.len() });
        }
        if !z.is_effective() {
            return Err(Error::InvalidArgument(format!("cycle {z} is not effective")));
        }
        Ok(())
    }

    fn check_positive(&self, z: &Cycle) -> Result<()> {
        self.check_cycle(z)?;
        if z.is_zero() {
            return Err(Error::InvalidArgument("cycle must be nonzero".into()));
        }
        Ok(())
    }

    /// `h^1(O_Z)`, summed over the connected components of `|Z|`.
    pub fn h1_oz(&self, z: &Cycle) -> Result<i64> {
        self.check_positive(z)?;
        let mut total = 0;
        for comp in self.lattice.graph().support_components(&z.support()) {
            let mut part = Cycle::zero(self.n());
            for &v in &comp {
                part.0[v] = z.0[v];
            }
            let q = MinQuery::new(RatCycle::zero(self.n()), Region::Box(part)).excluding_zero();
            total += 1 - integral(&self.min_chi(&q)?.value)?;
        }
        Ok(total)
    }

    /// `chi(-l') - min_{0 <= l <= Z} chi(-l' + l)`, the `h^1` of a generic
    /// line bundle with Chern class `l'` on `Z`.
    pub fn h1_generic_bundle(&self, z: &Cycle, l: &RatCycle) -> Result<i64> {
        self.check_positive(z)?;
        let l = self.lattice.dual_element(l.clone())?;
        let neg = -&l;
        let q = MinQuery::new(neg.clone(), Region::Box(z.clone()));
        integral(&(self.lattice.chi(&neg) - self.min_chi(&q)?.value))
    }

    pub fn computation_sequence(&self, z: &Cycle, l: &RatCycle) -> Result<ComputationSequence> {
        self.computation_sequence_with(z, l, |c| c[0])
    }

    /// As [`Singularity::computation_sequence`], with `choose` picking the
    /// vertex among the admissible ones (given in increasing order).
    pub fn computation_sequence_with(
        &self,
        z: &Cycle,
        l: &RatCycle,
        mut choose: impl FnMut(&[usize]) -> usize,
    ) -> Result<ComputationSequence> {
        self.check_cycle(z)?;
        let mut chern = self.lattice.dual_element(l.clone())?;
        let mut cycle = z.clone();
        let mut pairings: Vec<i64> = self
            .lattice
            .pairings(&chern)
            .iter()
            .map(integral)
            .collect::<Result<_>>()?;
        let graph = self.lattice.graph();
        let mut steps = Vec::new();
        loop {
            let admissible: Vec<usize> =
                (0..self.n()).filter(|&w| cycle.0[w] > 0 && pairings[w] < 0).collect();
            if admissible.is_empty() {
                break;
            }
            let w = choose(&admissible);
            if !admissible.contains(&w) {
                return Err(Error::InvalidArgument(format!("vertex {w} is not admissible")));
            }
            steps.push(SequenceStep { chern: chern.clone(), cycle: cycle.clone(), vertex: w });
            chern.add_basis(w, -1);
            cycle.0[w] -= 1;
            pairings[w] -= graph.euler(w);
            for &u in graph.neighbors(w) {
                pairings[u] -= 1;
            }
        }
        Ok(ComputationSequence { steps, terminal: (chern, cycle) })
    }

    /// `h^1(O_Z(l'))` for the natural line bundle, certified when one of
    /// the sufficient hypotheses holds.
    pub fn h1_natural_on_z(&self, z: &Cycle, l: &RatCycle) -> Result<H1Result> {
        let value = self.h1_generic_bundle(z, l)?;
        let support = z.support();
        let negative_on = |x: &RatCycle, vs: &[usize]| vs.iter().all(|&v| x.0[v].is_negative());
        let hypothesis = if negative_on(l, &support) {
            Hypothesis::CoeffsNegativeOnSupport
        } else if self.adjacency_condition(z, l) {
            Hypothesis::AdjacencyCondition
        } else {
            let (lt, zt) = self.computation_sequence(z, l)?.terminal;
            if negative_on(&lt, &zt.support()) {
                Hypothesis::ComputationSequenceTerminal
            } else {
                Hypothesis::Uncertified
            }
        };
        Ok(H1Result { value, certified: hypothesis != Hypothesis::Uncertified, hypothesis })
    }

    /// `l'_v <= 0` on `|Z|`, and every component of `|Z|` meets some `E_v`
    /// with `l'_v < 0`.
    fn adjacency_condition(&self, z: &Cycle, l: &RatCycle) -> bool {
        let support = z.support();
        if support.iter().any(|&v| l.0[v].is_positive()) {
            return false;
        }
        let graph = self.lattice.graph();
        graph.support_components(&support).iter().all(|comp| {
            comp.iter().any(|&v| {
                l.0[v].is_negative() || graph.neighbors(v).iter().any(|&u| l.0[u].is_negative())
            })
        })
    }

    fn epsilon(&self, l: &RatCycle) -> Result<i64> {
        let effective_integral = l.is_integral() && l.is_effective();
        Ok(i64::from(effective_integral && !self.is_rational()?))
    }

    /// `h^1(X~, O(l'))` of the natural line bundle.
    pub fn h1_natural_global(&self, l: &RatCycle) -> Result<i64> {
        let l = self.lattice.dual_element(l.clone())?;
        let neg = -&l;
        let value = self.lattice.chi(&neg) - self.orthant_min(&neg)?;
        Ok(integral(&value)? + self.epsilon(&l)?)
    }

    /// Sum of `h^1(O(-r_h))` over the discriminant group.
    pub fn pg_universal_abelian_cover(&self) -> Result<i64> {
        let reps: Vec<RatCycle> =
            self.lattice.discriminant_group().representatives().map(|(_, r)| r.clone()).collect();
        reps.par_iter().map(|r| self.h1_natural_global(&-r)).sum()
    }

    /// The cohomological cycle; `None` for rational graphs.
    pub fn cohomological_cycle(&self) -> Result<Option<Cycle>> {
        if self.is_rational()? {
            return Ok(None);
        }
        unique_minimal(self.positive_minimum()?).map(Some)
    }

    /// The maximal ideal cycle; `None` for rational graphs.
    pub fn maximal_ideal_cycle(&self) -> Result<Option<Cycle>> {
        if self.is_rational()? {
            return Ok(None);
        }
        let r = self.positive_minimum()?;
        if !r.join_attained {
            return Err(Error::Internal("minimizer set has no largest element".into()));
        }
        Ok(Some(r.max_minimizer.clone()))
    }

    /// The least minimizer of `chi(-l' + l)` over `l >= 0`, or over
    /// `0 <= l <= Z` when `z` is given. Requires the matching `h^1` to be
    /// nonzero.
    pub fn cohomological_cycle_of_bundle(&self, l: &RatCycle, z: Option<&Cycle>) -> Result<Cycle> {
        let l = self.lattice.dual_element(l.clone())?;
        let (h1, region) = match z {
            Some(z) => (self.h1_generic_bundle(z, &l)?, Region::Box(z.clone())),
            None => (self.h1_natural_global(&l)?, Region::NonNegOrthant),
        };
        if h1 == 0 {
            return Err(Error::Infeasible(format!("h^1 vanishes for Chern class {l}")));
        }
        let mut q = MinQuery::new(-&l, region);
        if z.is_none() && l.is_zero() && self.epsilon(&l)? == 1 {
            q = q.excluding_zero();
        }
        unique_minimal(&self.min_chi(&q)?)
    }

    /// Whether `l'` lies in the analytic semigroup of the generic structure.
    pub fn in_analytic_semigroup(&self, l: &RatCycle) -> Result<bool> {
        let l = self.lattice.dual_element(l.clone())?;
        if l.is_zero() {
            return Ok(true);
        }
        let q = MinQuery::new(l.clone(), Region::NonNegOrthant).excluding_zero();
        Ok(self.min_chi(&q)?.value > self.lattice.chi(&l))
    }

    /// `-min_{l >= 0} chi_{k_h}(l)` for the class of `r_h`.
    pub fn h1_of_representative(&self, r: &RatCycle) -> Result<i64> {
        integral(&(self.lattice.chi(r) - self.orthant_min(r)?))
    }
}

fn unique_minimal(r: &MinResult) -> Result<Cycle> {
    if r.meet_attained {
        return Ok(r.min_minimizer.clone());
    }
    let minimal = r.minimal_minimizers();
    match minimal.as_slice() {
        [only] => Ok(only.clone()),
        _ => Err(Error::Internal(format!(
            "minimizer set has {} minimal elements",
            minimal.len()
        ))),
    }
}
