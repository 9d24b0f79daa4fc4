//! Integral and rational cycles in the vertex basis `{E_v}`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use num_traits::{Signed, Zero};

use crate::rational::{format_rat, rat, Rat};

/// Componentwise partial order shared by both cycle types.
fn componentwise<T: PartialOrd>(a: &[T], b: &[T]) -> Option<Ordering> {
    if a.len() != b.len() {
        return None;
    }
    let (mut le, mut ge) = (true, true);
    for (x, y) in a.iter().zip(b) {
        match x.partial_cmp(y)? {
            Ordering::Less => ge = false,
            Ordering::Greater => le = false,
            Ordering::Equal => {}
        }
    }
    match (le, ge) {
        (true, true) => Some(Ordering::Equal),
        (true, false) => Some(Ordering::Less),
        (false, true) => Some(Ordering::Greater),
        (false, false) => None,
    }
}

/// An element of `L`: integer coefficients in vertex order.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Cycle(pub Vec<i64>);

impl Cycle {
    pub fn zero(n: usize) -> Self {
        Cycle(vec![0; n])
    }

    pub fn basis(n: usize, v: usize) -> Self {
        let mut c = Cycle::zero(n);
        c.0[v] = 1;
        c
    }

    /// `E_I`, the reduced cycle supported on `vertices`.
    pub fn reduced(n: usize, vertices: impl IntoIterator<Item = usize>) -> Self {
        let mut c = Cycle::zero(n);
        for v in vertices {
            c.0[v] = 1;
        }
        c
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn is_effective(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    /// `l > 0`: effective and nonzero.
    pub fn is_positive(&self) -> bool {
        self.is_effective() && !self.is_zero()
    }

    /// Vertices with nonzero coefficient.
    pub fn support(&self) -> Vec<usize> {
        (0..self.len()).filter(|&v| self.0[v] != 0).collect()
    }

    pub fn meet(&self, other: &Cycle) -> Cycle {
        Cycle(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    pub fn join(&self, other: &Cycle) -> Cycle {
        Cycle(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn to_rat(&self) -> RatCycle {
        RatCycle(self.0.iter().map(|&c| rat(c)).collect())
    }

    pub fn add_basis(&mut self, v: usize, k: i64) {
        self.0[v] += k;
    }
}

impl PartialOrd for Cycle {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        componentwise(&self.0, &other.0)
    }
}

impl Index<usize> for Cycle {
    type Output = i64;
    fn index(&self, v: usize) -> &i64 {
        &self.0[v]
    }
}

impl Add for &Cycle {
    type Output = Cycle;
    fn add(self, rhs: &Cycle) -> Cycle {
        Cycle(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Cycle {
    type Output = Cycle;
    fn sub(self, rhs: &Cycle) -> Cycle {
        Cycle(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Cycle {
    type Output = Cycle;
    fn neg(self) -> Cycle {
        Cycle(self.0.iter().map(|a| -a).collect())
    }
}

impl From<Vec<i64>> for Cycle {
    fn from(v: Vec<i64>) -> Self {
        Cycle(v)
    }
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// An element of `L ⊗ Q`, used for `L'` classes.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct RatCycle(pub Vec<Rat>);

impl RatCycle {
    pub fn zero(n: usize) -> Self {
        RatCycle(vec![Rat::zero(); n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coords(&self) -> &[Rat] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn is_effective(&self) -> bool {
        self.0.iter().all(|c| !c.is_negative())
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|c| c.is_integer())
    }

    /// The integral cycle, when every coordinate is an integer.
    pub fn to_cycle(&self) -> Option<Cycle> {
        self.0
            .iter()
            .map(|c| {
                if c.is_integer() {
                    num_traits::ToPrimitive::to_i64(c.numer())
                } else {
                    None
                }
            })
            .collect::<Option<Vec<_>>>()
            .map(Cycle)
    }

    pub fn scale(&self, k: &Rat) -> RatCycle {
        RatCycle(self.0.iter().map(|c| c * k).collect())
    }

    pub fn add_cycle(&self, l: &Cycle) -> RatCycle {
        RatCycle(self.0.iter().zip(&l.0).map(|(a, &b)| a + rat(b)).collect())
    }

    pub fn add_basis(&mut self, v: usize, k: i64) {
        self.0[v] += rat(k);
    }

    /// `(floor part, fractional part)` coordinatewise.
    pub fn split_fractional(&self) -> (Vec<Rat>, RatCycle) {
        let floors: Vec<Rat> = self.0.iter().map(|c| c.floor()).collect();
        let fracs = self.0.iter().zip(&floors).map(|(c, f)| c - f).collect();
        (floors, RatCycle(fracs))
    }
}

impl PartialOrd for RatCycle {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        componentwise(&self.0, &other.0)
    }
}

impl Index<usize> for RatCycle {
    type Output = Rat;
    fn index(&self, v: usize) -> &Rat {
        &self.0[v]
    }
}

impl Add for &RatCycle {
    type Output = RatCycle;
    fn add(self, rhs: &RatCycle) -> RatCycle {
        RatCycle(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &RatCycle {
    type Output = RatCycle;
    fn sub(self, rhs: &RatCycle) -> RatCycle {
        RatCycle(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &RatCycle {
    type Output = RatCycle;
    fn neg(self) -> RatCycle {
        RatCycle(self.0.iter().map(|a| -a).collect())
    }
}

impl From<&Cycle> for RatCycle {
    fn from(c: &Cycle) -> Self {
        c.to_rat()
    }
}

impl From<Vec<Rat>> for RatCycle {
    fn from(v: Vec<Rat>) -> Self {
        RatCycle(v)
    }
}

impl fmt::Display for RatCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", format_rat(c))?;
        }
        write!(f, "]")
    }
}
