//! Odd-dimensional lattice arithmetic and the phase-space grid type.
//!
//! Basis states and grid coordinates are labelled by representatives in
//! `[-s, s]` where `d = 2s + 1`. Storage always uses the offset `n + s`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{CVector, ONE};

/// Odd Hilbert-space dimension `d = 2s + 1`, `d >= 3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct LatticeDim {
    d: usize,
}

impl LatticeDim {
    pub fn new(d: usize) -> Result<Self> {
        if d < 3 || d.is_multiple_of(2) {
            return Err(Error::InvalidDimension(d));
        }
        Ok(Self { d })
    }

    pub fn d(self) -> usize {
        self.d
    }

    pub fn s(self) -> i64 {
        (self.d as i64 - 1) / 2
    }

    /// Representative of `n` modulo `d` in `[-s, s]`.
    pub fn rep(self, n: i64) -> i64 {
        let d = self.d as i64;
        (n + self.s()).rem_euclid(d) - self.s()
    }

    /// Storage offset of an arbitrary integer after modular reduction.
    pub fn index(self, n: i64) -> usize {
        (self.rep(n) + self.s()) as usize
    }

    pub fn label(self, index: usize) -> i64 {
        index as i64 - self.s()
    }

    pub fn labels(self) -> impl Iterator<Item = i64> {
        let s = self.s();
        -s..=s
    }

    pub fn check(self, n: i64) -> Result<i64> {
        let s = self.s();
        if n < -s || n > s {
            return Err(Error::OutOfRange { value: n, s });
        }
        Ok(n)
    }

    /// Multiplicative inverse of 2 modulo d, so that `2 * half(x) ≡ x`.
    pub fn half(self, n: i64) -> i64 {
        let inv2 = (self.d as i64 + 1) / 2;
        self.rep(n * inv2)
    }
}

impl TryFrom<usize> for LatticeDim {
    type Error = Error;

    fn try_from(d: usize) -> Result<Self> {
        Self::new(d)
    }
}

impl From<LatticeDim> for usize {
    fn from(dim: LatticeDim) -> usize {
        dim.d
    }
}

pub fn rep_mod(n: i64, dim: LatticeDim) -> i64 {
    dim.rep(n)
}

/// Phase-space lattice point with both coordinates in `[-s, s]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GridPoint {
    pub n: i64,
    pub k: i64,
}

impl GridPoint {
    pub fn new(n: i64, k: i64, dim: LatticeDim) -> Result<Self> {
        Ok(Self {
            n: dim.check(n)?,
            k: dim.check(k)?,
        })
    }
}

/// Canonical basis vector |m⟩.
pub fn delta_basis(m: i64, dim: LatticeDim) -> Result<CVector> {
    dim.check(m)?;
    let mut v = CVector::zeros(dim.d());
    v[dim.index(m)] = ONE;
    Ok(v)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Modes {
    One,
    Two,
}

impl Modes {
    pub fn count(self) -> usize {
        match self {
            Modes::One => 1,
            Modes::Two => 2,
        }
    }

    pub fn axes(self) -> usize {
        2 * self.count()
    }
}

/// Real function on the `d×d` (one mode) or `d×d×d×d` (two modes) lattice.
///
/// One mode is stored row-major in `(n, k)`; two modes lexicographically in
/// `(n1, n2, k1, k2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct WignerGrid {
    dim: LatticeDim,
    modes: Modes,
    values: Vec<f64>,
}

impl WignerGrid {
    pub fn from_values(dim: LatticeDim, modes: Modes, values: Vec<f64>) -> Result<Self> {
        let expected = dim.d().pow(modes.axes() as u32);
        if values.len() != expected {
            return Err(Error::ShapeMismatch {
                expected: format!("{expected} grid values"),
                found: format!("{}", values.len()),
            });
        }
        if values.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { dim, modes, values })
    }

    pub fn zeros(dim: LatticeDim, modes: Modes) -> Self {
        Self {
            dim,
            modes,
            values: vec![0.0; dim.d().pow(modes.axes() as u32)],
        }
    }

    /// Evaluates `f(n, k)` at every single-mode lattice point.
    pub fn single_from_fn(dim: LatticeDim, mut f: impl FnMut(i64, i64) -> f64) -> Self {
        let mut values = Vec::with_capacity(dim.d() * dim.d());
        for n in dim.labels() {
            for k in dim.labels() {
                values.push(f(n, k));
            }
        }
        Self {
            dim,
            modes: Modes::One,
            values,
        }
    }

    /// Evaluates `f([n1, n2, k1, k2])` at every two-mode lattice point.
    pub fn two_from_fn(dim: LatticeDim, mut f: impl FnMut([i64; 4]) -> f64) -> Self {
        let d = dim.d();
        let mut values = Vec::with_capacity(d.pow(4));
        for n1 in dim.labels() {
            for n2 in dim.labels() {
                for k1 in dim.labels() {
                    for k2 in dim.labels() {
                        values.push(f([n1, n2, k1, k2]));
                    }
                }
            }
        }
        Self {
            dim,
            modes: Modes::Two,
            values,
        }
    }

    pub fn dim(&self) -> LatticeDim {
        self.dim
    }

    pub fn modes(&self) -> Modes {
        self.modes
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn sum_of_squares(&self) -> f64 {
        self.values.iter().map(|x| x * x).sum()
    }

    /// Single-mode value at arbitrary integers (reduced modulo d).
    pub fn at(&self, n: i64, k: i64) -> f64 {
        debug_assert_eq!(self.modes, Modes::One);
        let d = self.dim.d();
        self.values[self.dim.index(n) * d + self.dim.index(k)]
    }

    /// Two-mode value at `(n1, n2, k1, k2)`, reduced modulo d.
    pub fn at4(&self, p: [i64; 4]) -> f64 {
        debug_assert_eq!(self.modes, Modes::Two);
        let d = self.dim.d();
        let flat = p.iter().fold(0usize, |acc, &x| acc * d + self.dim.index(x));
        self.values[flat]
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            dim: self.dim,
            modes: self.modes,
            values: self.values.iter().map(|x| x * c).collect(),
        }
    }

    /// Rescales so the values sum to one; returns the factor applied.
    pub fn normalize(&mut self) -> f64 {
        let c = 1.0 / self.sum();
        for x in self.values.iter_mut() {
            *x *= c;
        }
        c
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.values.len(), other.values.len());
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Every `(label, value)` pair in storage order; labels are `[n, k]` or `[n1, n2, k1, k2]`.
    pub fn entries(&self) -> Vec<(Vec<i64>, f64)> {
        let d = self.dim.d();
        let axes = self.modes.axes();
        self.values
            .iter()
            .enumerate()
            .map(|(flat, &v)| {
                let mut rem = flat;
                let mut labels = vec![0i64; axes];
                for slot in labels.iter_mut().rev() {
                    *slot = self.dim.label(rem % d);
                    rem /= d;
                }
                (labels, v)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{frobenius_norm, CMatrix};
    use proptest::prelude::*;

    #[test]
    fn rejects_even_and_small() {
        assert!(LatticeDim::new(4).is_err());
        assert!(LatticeDim::new(1).is_err());
        assert!(LatticeDim::new(0).is_err());
        assert_eq!(LatticeDim::new(7).unwrap().s(), 3);
    }

    #[test]
    fn rep_mod_examples() {
        let d7 = LatticeDim::new(7).unwrap();
        let d5 = LatticeDim::new(5).unwrap();
        assert_eq!(rep_mod(0, d7), 0);
        assert_eq!(rep_mod(4, d7), -3);
        assert_eq!(rep_mod(-8, d5), 2);
        assert_eq!(d7.half(1), 4 - 7);
        assert_eq!(d7.rep(2 * d7.half(3)), 3);
    }

    #[test]
    fn delta_basis_is_orthonormal_and_complete() {
        let dim = LatticeDim::new(5).unwrap();
        let mut sum = CMatrix::zeros(5, 5);
        for m in dim.labels() {
            let dm = delta_basis(m, dim).unwrap();
            for k in dim.labels() {
                let dk = delta_basis(k, dim).unwrap();
                let expect = if m == k { 1.0 } else { 0.0 };
                assert_eq!(dm.inner(&dk).re, expect);
            }
            sum = &sum + &dm.projector();
        }
        assert_eq!(frobenius_norm(&(&sum - &CMatrix::identity(5))), 0.0);
        assert!(delta_basis(3, dim).is_err());
    }

    #[test]
    fn grid_entries_follow_storage_order() {
        let dim = LatticeDim::new(3).unwrap();
        let g = WignerGrid::single_from_fn(dim, |n, k| (10 * n + k) as f64);
        let e = g.entries();
        assert_eq!(e[0], (vec![-1, -1], -11.0));
        assert_eq!(e[1], (vec![-1, 0], -10.0));
        assert_eq!(g.at(1, -1), 9.0);
        assert_eq!(g.at(4, 2), 9.0);
        let g4 = WignerGrid::two_from_fn(dim, |p| (p[0] * 1000 + p[1] * 100 + p[2] * 10 + p[3]) as f64);
        assert_eq!(g4.at4([1, 0, -1, 1]), 991.0);
        assert_eq!(g4.entries()[1].0, vec![-1, -1, -1, 0]);
        assert!(WignerGrid::from_values(dim, Modes::One, vec![0.0; 8]).is_err());
    }

    proptest! {
        #[test]
        fn rep_mod_properties(n in -10_000i64..10_000, s in 1usize..40) {
            let dim = LatticeDim::new(2 * s + 1).unwrap();
            let r = dim.rep(n);
            prop_assert!(r >= -dim.s() && r <= dim.s());
            prop_assert_eq!((n - r).rem_euclid(dim.d() as i64), 0);
            prop_assert_eq!(dim.rep(r), r);
            prop_assert_eq!(dim.rep(n + dim.d() as i64), r);
        }
    }
}
