//! Dense complex linear algebra for the small operators used throughout the crate.
//!
//! Everything here is sized for Hilbert spaces of a few hundred dimensions at most,
//! so the routines favour robustness over asymptotic speed. The Hermitian
//! eigensolver is a cyclic Jacobi method with unitary plane rotations.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

const MAX_SWEEPS: usize = 100;
const OFF_DIAGONAL_TOL: f64 = 1e-14;
const HERMITIAN_TOL: f64 = 1e-10;

/// Dense complex matrix stored row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from row-major entries, rejecting NaN and infinities.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch {
                expected: format!("{} entries", rows * cols),
                found: format!("{} entries", data.len()),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &x) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(x, 0.0);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> CVector {
        CVector::from((0..self.rows).map(|i| self[(i, j)]).collect::<Vec<_>>())
    }

    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, z: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| x * z).collect(),
        }
    }

    pub fn scale_real(&self, x: f64) -> Self {
        self.scale(Complex64::new(x, 0.0))
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch {
                expected: format!("{} rows", self.cols),
                found: format!("{} rows", other.rows),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &CVector) -> Result<CVector> {
        if self.cols != v.len() {
            return Err(Error::ShapeMismatch {
                expected: format!("vector of length {}", self.cols),
                found: format!("length {}", v.len()),
            });
        }
        let out = (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v.as_slice())
                    .map(|(&a, &b)| a * b)
                    .sum()
            })
            .collect::<Vec<Complex64>>();
        Ok(CVector::from(out))
    }

    /// `U · self · U†`
    pub fn conjugate_by(&self, u: &Self) -> Result<Self> {
        u.matmul(self)?.matmul(&u.dagger())
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch {
                expected: format!("{}x{}", self.rows, self.cols),
                found: format!("{}x{}", other.rows, other.cols),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    /// Relative Hermiticity residual ‖M − M†‖_F / ‖M‖_F (absolute when M = 0).
    pub fn hermitian_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += (self[(i, j)] - self[(j, i)].conj()).norm_sqr();
            }
        }
        let scale = frobenius_norm(self);
        if scale > 0.0 {
            acc.sqrt() / scale
        } else {
            acc.sqrt()
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Kronecker product with `self` as the major (slow) index.
    pub fn kron(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        Self::from_fn(rows, cols, |i, j| {
            self[(i / other.rows, j / other.cols)] * other[(i % other.rows, j % other.cols)]
        })
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

// Operator sugar for callers that already know the shapes conform.
impl Mul for &CMatrix {
    type Output = CMatrix;

    fn mul(self, rhs: &CMatrix) -> CMatrix {
        self.matmul(rhs).expect("matrix product of non-conforming shapes")
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;

    fn add(self, rhs: &CMatrix) -> CMatrix {
        self.try_add(rhs).expect("sum of matrices with different shapes")
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;

    fn sub(self, rhs: &CMatrix) -> CMatrix {
        self.try_sub(rhs).expect("difference of matrices with different shapes")
    }
}

/// Dense complex vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CVector(Vec<Complex64>);

impl CVector {
    pub fn zeros(n: usize) -> Self {
        Self(vec![ZERO; n])
    }

    pub fn from_real(values: &[f64]) -> Self {
        Self(values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = &Complex64> {
        self.0.iter()
    }

    /// ⟨self|other⟩, antilinear in `self`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        Self(self.0.iter().map(|z| z / n).collect())
    }

    /// |self⟩⟨other|
    pub fn outer(&self, other: &Self) -> CMatrix {
        CMatrix::from_fn(self.len(), other.len(), |i, j| self.0[i] * other.0[j].conj())
    }

    pub fn projector(&self) -> CMatrix {
        self.outer(self)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn kron(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.len() * other.len());
        for a in &self.0 {
            for b in &other.0 {
                out.push(a * b);
            }
        }
        Self(out)
    }
}

impl From<Vec<Complex64>> for CVector {
    fn from(v: Vec<Complex64>) -> Self {
        Self(v)
    }
}

impl Index<usize> for CVector {
    type Output = Complex64;

    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for CVector {
    fn index_mut(&mut self, i: usize) -> &mut Complex64 {
        &mut self.0[i]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EigenOrder {
    Ascending,
    Descending,
}

/// Eigenvalues with orthonormal eigenvectors stored as the columns of `vectors`.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl EigenDecomposition {
    pub fn vector(&self, j: usize) -> CVector {
        self.vectors.column(j)
    }

    /// V · diag(f(λ)) · V†
    pub fn map_spectrum(&self, f: impl Fn(f64) -> Complex64) -> CMatrix {
        let n = self.values.len();
        let fv: Vec<Complex64> = self.values.iter().map(|&l| f(l)).collect();
        let v = &self.vectors;
        CMatrix::from_fn(n, n, |i, j| (0..n).map(|k| v[(i, k)] * fv[k] * v[(j, k)].conj()).sum())
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.map_spectrum(|l| Complex64::new(l, 0.0))
    }

    fn reorder(&mut self, perm: &[usize]) {
        let n = self.values.len();
        let values = perm.iter().map(|&k| self.values[k]).collect();
        let vectors = CMatrix::from_fn(n, n, |i, j| self.vectors[(i, perm[j])]);
        self.values = values;
        self.vectors = vectors;
    }
}

/// Hermitian eigendecomposition, eigenvalues ascending.
pub fn eigh(m: &CMatrix) -> Result<EigenDecomposition> {
    eigh_ordered(m, EigenOrder::Ascending)
}

/// Cyclic complex Jacobi eigensolver.
///
/// Each eigenvector is rotated so that its largest-magnitude component is
/// real and positive (the first such component on ties).
pub fn eigh_ordered(m: &CMatrix, order: EigenOrder) -> Result<EigenDecomposition> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if m.as_slice().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    let residual = m.hermitian_residual();
    if residual > HERMITIAN_TOL {
        return Err(Error::NotHermitian { residual });
    }

    let n = m.rows();
    // Work on the exactly Hermitian part.
    let mut a = CMatrix::from_fn(n, n, |i, j| 0.5 * (m[(i, j)] + m[(j, i)].conj()));
    let mut v = CMatrix::identity(n);
    let threshold = OFF_DIAGONAL_TOL * frobenius_norm(&a);

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&a);
        if off <= threshold || n < 2 {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_norm: off,
            });
        }
        sweeps += 1;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag == 0.0 || mag < f64::MIN_POSITIVE * 1e3 {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let phase = apq / mag;
                let tau = (aqq - app) / (2.0 * mag);
                let t = if tau == 0.0 {
                    1.0
                } else {
                    tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                rotate(&mut a, &mut v, p, q, c, s, phase);
            }
        }
    }

    let values: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    // Fix phases before sorting; sorting only permutes columns.
    for j in 0..n {
        let mut best = 0;
        let mut best_mag = -1.0;
        for i in 0..n {
            let mag = v[(i, j)].norm();
            if mag > best_mag * (1.0 + 1e-12) {
                best_mag = mag;
                best = i;
            }
        }
        let z = v[(best, j)];
        let fix = z.conj() / z.norm();
        for i in 0..n {
            v[(i, j)] *= fix;
        }
        v[(best, j)] = Complex64::new(v[(best, j)].norm(), 0.0);
    }
    let mut dec = EigenDecomposition { values, vectors: v };
    let mut perm: Vec<usize> = (0..n).collect();
    perm.sort_by(|&i, &j| {
        let ord = dec.values[i].total_cmp(&dec.values[j]);
        match order {
            EigenOrder::Ascending => ord,
            EigenOrder::Descending => ord.reverse(),
        }
    });
    dec.reorder(&perm);
    Ok(dec)
}

fn off_diagonal_norm(a: &CMatrix) -> f64 {
    let n = a.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Applies A ← G†AG and V ← VG for the plane rotation
/// G_pp = G_qq = c, G_pq = s·e^{iφ}, G_qp = −s·e^{−iφ}, which annihilates A_pq.
fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize, c: f64, s: f64, phase: Complex64) {
    let n = a.rows();
    let sp = phase * s;
    let spc = phase.conj() * s;
    for i in 0..n {
        let aip = a[(i, p)];
        let aiq = a[(i, q)];
        a[(i, p)] = aip * c - aiq * spc;
        a[(i, q)] = aip * sp + aiq * c;
    }
    for j in 0..n {
        let apj = a[(p, j)];
        let aqj = a[(q, j)];
        a[(p, j)] = apj * c - aqj * sp;
        a[(q, j)] = apj * spc + aqj * c;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
    for i in 0..n {
        let vip = v[(i, p)];
        let viq = v[(i, q)];
        v[(i, p)] = vip * c - viq * spc;
        v[(i, q)] = vip * sp + viq * c;
    }
}

/// exp(scale · H) for Hermitian H, computed through its eigendecomposition.
pub fn expm_hermitian_generator(h: &CMatrix, scale: Complex64) -> Result<CMatrix> {
    let dec = eigh(h)?;
    Ok(dec.map_spectrum(|l| (scale * l).exp()))
}

/// Real 2×2 matrix, row-major.
pub type Mat2 = [[f64; 2]; 2];

pub fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn mat2_transpose(a: &Mat2) -> Mat2 {
    [[a[0][0], a[1][0]], [a[0][1], a[1][1]]]
}

pub fn mat2_det(a: &Mat2) -> f64 {
    a[0][0] * a[1][1] - a[0][1] * a[1][0]
}

/// Closed-form exponential of a real 2×2 matrix.
///
/// With M = (t/2)·I + N and N traceless, N² = δ·I where δ = −det N, so
/// exp(M) = e^{t/2} (c(δ)·I + s(δ)·N) with c = cosh √δ, s = sinh √δ / √δ
/// (trigonometric for δ < 0).
pub fn expm_real_2x2(m: &Mat2) -> Result<Mat2> {
    if m.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    let half_trace = 0.5 * (m[0][0] + m[1][1]);
    let n = [[m[0][0] - half_trace, m[0][1]], [m[1][0], m[1][1] - half_trace]];
    let delta = -mat2_det(&n);
    let (c, s) = if delta.abs() < 1e-8 {
        // Taylor terms through δ², error O(δ³).
        (
            1.0 + delta / 2.0 + delta * delta / 24.0,
            1.0 + delta / 6.0 + delta * delta / 120.0,
        )
    } else if delta > 0.0 {
        let r = delta.sqrt();
        (r.cosh(), r.sinh() / r)
    } else {
        let r = (-delta).sqrt();
        (r.cos(), r.sin() / r)
    };
    let e = half_trace.exp();
    Ok([
        [e * (c + s * n[0][0]), e * s * n[0][1]],
        [e * s * n[1][0], e * (c + s * n[1][1])],
    ])
}

pub fn frobenius_norm(m: &CMatrix) -> f64 {
    m.as_slice().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest singular value, from the top eigenvalue of M†M.
pub fn spectral_norm(m: &CMatrix) -> Result<f64> {
    let gram = m.dagger().matmul(m)?;
    let dec = eigh(&gram)?;
    Ok(dec.values.last().copied().unwrap_or(0.0).max(0.0).sqrt())
}

pub fn trace(m: &CMatrix) -> Result<Complex64> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    Ok((0..m.rows()).map(|i| m[(i, i)]).sum())
}

/// [A, B] = AB − BA
pub fn commutator(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    a.matmul(b)?.try_sub(&b.matmul(a)?)
}
