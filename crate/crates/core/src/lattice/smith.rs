//! Smith normal form over the integers and the discriminant group `L'/L`.

use std::collections::{BTreeMap, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::cycle::RatCycle;
use crate::error::{Error, Result};
use crate::rational::{to_i64, Rat};

/// Diagonal `d` and unimodular `u` with `u * a * v = diag(d)`, `d_i | d_{i+1}`,
/// all `d_i >= 0`. Only the row transform is kept.
pub struct SmithForm {
    pub diagonal: Vec<BigInt>,
    pub row_transform: Vec<Vec<BigInt>>,
}

pub fn smith_normal_form(matrix: &[Vec<i64>]) -> SmithForm {
    let n = matrix.len();
    let mut a: Vec<Vec<BigInt>> = matrix
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut u: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();

    for k in 0..n {
        loop {
            // pivot: smallest nonzero magnitude in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in k..n {
                for j in k..n {
                    if !a[i][j].is_zero()
                        && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            a.swap(k, pi);
            u.swap(k, pi);
            for row in a.iter_mut() {
                row.swap(k, pj);
            }

            let mut clean = true;
            for i in k + 1..n {
                if a[i][k].is_zero() {
                    continue;
                }
                let q = a[i][k].div_floor(&a[k][k]);
                for j in k..n {
                    let t = &q * &a[k][j];
                    a[i][j] -= t;
                }
                for j in 0..n {
                    let t = &q * &u[k][j];
                    u[i][j] -= t;
                }
                clean &= a[i][k].is_zero();
            }
            for j in k + 1..n {
                if a[k][j].is_zero() {
                    continue;
                }
                let q = a[k][j].div_floor(&a[k][k]);
                for i in k..n {
                    let t = &q * &a[i][k];
                    a[i][j] -= t;
                }
                clean &= a[k][j].is_zero();
            }
            if !clean {
                continue;
            }
            // divisibility of the trailing block by the pivot
            let bad = (k + 1..n).find(|&i| (k + 1..n).any(|j| !(&a[i][j] % &a[k][k]).is_zero()));
            match bad {
                Some(i) => {
                    for j in k..n {
                        let t = a[i][j].clone();
                        a[k][j] += t;
                    }
                    for j in 0..n {
                        let t = u[i][j].clone();
                        u[k][j] += t;
                    }
                }
                None => break,
            }
        }
        if a[k][k].is_negative() {
            for j in 0..n {
                a[k][j] = -&a[k][j];
                u[k][j] = -&u[k][j];
            }
        }
    }
    SmithForm {
        diagonal: (0..n).map(|i| a[i][i].clone()).collect(),
        row_transform: u,
    }
}

/// Element of `H = L'/L` as residues modulo the invariant factors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct HClass(pub Vec<i64>);

impl HClass {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

#[derive(Clone, Debug)]
pub struct DiscriminantGroup {
    invariant_factors: Vec<i64>,
    order: i64,
    /// rows of the Smith row transform belonging to nontrivial factors
    class_rows: Vec<Vec<i64>>,
    representatives: BTreeMap<HClass, RatCycle>,
}

impl DiscriminantGroup {
    /// `duals[v]` is `E*_v`; the class of `l'` is read off the coefficient
    /// vector `c_v = -(l', E_v)` of `l'` in the `E*_v` basis.
    pub(crate) fn new(matrix: &[Vec<i64>], duals: &[RatCycle]) -> Result<Self> {
        let snf = smith_normal_form(matrix);
        let mut invariant_factors = Vec::new();
        let mut class_rows = Vec::new();
        let mut order = BigInt::one();
        for (d, row) in snf.diagonal.iter().zip(&snf.row_transform) {
            if d.is_zero() {
                return Err(Error::Internal("singular intersection form".into()));
            }
            order *= d;
            if !d.is_one() {
                invariant_factors.push(to_i64(d)?);
                let row = row.iter().map(|x| to_i64(&x.mod_floor(d))).collect::<Result<_>>()?;
                class_rows.push(row);
            }
        }
        let order = to_i64(&order)?;
        let mut group = DiscriminantGroup {
            invariant_factors,
            order,
            class_rows,
            representatives: BTreeMap::new(),
        };
        group.enumerate_representatives(duals)?;
        Ok(group)
    }

    fn enumerate_representatives(&mut self, duals: &[RatCycle]) -> Result<()> {
        let n = duals.len();
        let zero = RatCycle::zero(n);
        let mut reps = BTreeMap::new();
        reps.insert(self.class_of_coefficients(&vec![0; n]), zero.clone());
        let mut queue = VecDeque::from([(vec![0i64; n], zero)]);
        while let Some((coeffs, r)) = queue.pop_front() {
            for (v, dual) in duals.iter().enumerate() {
                let mut c = coeffs.clone();
                c[v] += 1;
                let class = self.class_of_coefficients(&c);
                if reps.contains_key(&class) {
                    continue;
                }
                let (_, frac) = (&r + dual).split_fractional();
                reps.insert(class, frac.clone());
                // |H| annihilates H, so reducing mod the order keeps the class
                for ci in c.iter_mut() {
                    *ci = ci.rem_euclid(self.order);
                }
                queue.push_back((c, frac));
            }
        }
        if reps.len() as i64 != self.order {
            return Err(Error::Internal(format!(
                "found {} classes, expected {}",
                reps.len(),
                self.order
            )));
        }
        self.representatives = reps;
        Ok(())
    }

    pub(crate) fn class_of_coefficients(&self, c: &[i64]) -> HClass {
        HClass(
            self.class_rows
                .iter()
                .zip(&self.invariant_factors)
                .map(|(row, &d)| {
                    let s: i128 = row.iter().zip(c).map(|(&a, &b)| a as i128 * b as i128).sum();
                    s.rem_euclid(d as i128) as i64
                })
                .collect(),
        )
    }

    /// Nontrivial invariant factors `d_1 | d_2 | ...`, each `> 1`.
    pub fn invariant_factors(&self) -> &[i64] {
        &self.invariant_factors
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn zero(&self) -> HClass {
        HClass(vec![0; self.invariant_factors.len()])
    }

    /// Classes in canonical (lexicographic) order; the zero class first.
    pub fn classes(&self) -> impl Iterator<Item = &HClass> {
        self.representatives.keys()
    }

    pub fn representatives(&self) -> impl Iterator<Item = (&HClass, &RatCycle)> {
        self.representatives.iter()
    }

    /// `r_h`, the representative in the semi-open unit cube.
    pub fn representative(&self, h: &HClass) -> Option<&RatCycle> {
        self.representatives.get(h)
    }

    /// The class of `l'` given its pairings `(l', E_v)`, which must be integers.
    pub(crate) fn class_from_pairings(&self, pairings: &[Rat]) -> Result<HClass> {
        let c = pairings
            .iter()
            .map(|p| {
                if p.is_integer() {
                    to_i64(&-p.numer())
                } else {
                    Err(Error::NotInDualLattice(format!("pairing {p} is not integral")))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(self.class_of_coefficients(&c))
    }
}
