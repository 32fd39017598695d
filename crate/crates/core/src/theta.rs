//! Gaussian functions of a discrete variable: periodised Gaussians (Jacobi
//! theta lattice sums) in one and two variables, their half-period shifted
//! variants, the continuum Gaussian window, and the covariance types.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::LatticeDim;
use crate::linalg::{CVector, Mat2};
use crate::operators::dft_matrix;

/// Smallest lattice window tried by every truncated sum.
pub const INITIAL_WINDOW: i64 = 4;
/// Dropped terms must fall below this fraction of the largest retained term.
pub const TRUNCATION_TOL: f64 = 1e-18;
const MAX_WINDOW: i64 = 1 << 20;
const SINGULAR_DET: f64 = 1e-14;

/// Real symmetric positive-definite 2×2 matrix `((s11, s12), (s12, s22))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CovMat2 {
    pub s11: f64,
    pub s12: f64,
    pub s22: f64,
}

impl CovMat2 {
    pub fn new(s11: f64, s12: f64, s22: f64) -> Result<Self> {
        if ![s11, s12, s22].iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite);
        }
        if s11 <= 0.0 || s11 * s22 - s12 * s12 <= 0.0 {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(Self { s11, s12, s22 })
    }

    pub fn diagonal(a: f64, b: f64) -> Result<Self> {
        Self::new(a, 0.0, b)
    }

    pub fn from_mat2(m: &Mat2) -> Result<Self> {
        let off = 0.5 * (m[0][1] + m[1][0]);
        Self::new(m[0][0], off, m[1][1])
    }

    pub fn det(&self) -> f64 {
        self.s11 * self.s22 - self.s12 * self.s12
    }

    pub fn as_mat2(&self) -> Mat2 {
        [[self.s11, self.s12], [self.s12, self.s22]]
    }

    pub fn inverse(&self) -> Result<Self> {
        let det = self.det();
        if det.abs() < SINGULAR_DET {
            return Err(Error::SingularCovariance { det });
        }
        Self::new(self.s22 / det, -self.s12 / det, self.s11 / det)
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(c * self.s11, c * self.s12, c * self.s22)
    }

    /// Eigenvalues `(min, max)`.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let mean = 0.5 * (self.s11 + self.s22);
        let r = (0.25 * (self.s11 - self.s22).powi(2) + self.s12 * self.s12).sqrt();
        (mean - r, mean + r)
    }

    /// `vᵀ σ v`
    pub fn quadratic(&self, v: [f64; 2]) -> f64 {
        self.s11 * v[0] * v[0] + 2.0 * self.s12 * v[0] * v[1] + self.s22 * v[1] * v[1]
    }
}

/// Real symmetric positive-definite 4×4 matrix, validated by Cholesky.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CovMat4 {
    entries: [[f64; 4]; 4],
}

impl CovMat4 {
    pub fn new(entries: [[f64; 4]; 4]) -> Result<Self> {
        if entries.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        for i in 0..4 {
            for j in 0..i {
                if (entries[i][j] - entries[j][i]).abs() > 1e-12 * (1.0 + entries[i][j].abs()) {
                    return Err(Error::InvalidParameter("4x4 covariance matrix is not symmetric".into()));
                }
            }
        }
        cholesky4(&entries).ok_or(Error::NotPositiveDefinite)?;
        Ok(Self { entries })
    }

    /// Builds from the ten upper-triangle entries in row order.
    pub fn from_upper(u: &[f64]) -> Result<Self> {
        if u.len() != 10 {
            return Err(Error::InvalidParameter(format!(
                "expected 10 upper-triangle entries, got {}",
                u.len()
            )));
        }
        let mut e = [[0.0; 4]; 4];
        let mut it = u.iter();
        for i in 0..4 {
            for j in i..4 {
                let x = *it.next().expect("length checked");
                e[i][j] = x;
                e[j][i] = x;
            }
        }
        Self::new(e)
    }

    /// Block-diagonal two-mode matrix in `(q1, q2, p1, p2)` ordering from
    /// independent single-mode covariances.
    pub fn from_modes(a: &CovMat2, b: &CovMat2) -> Self {
        let e = [
            [a.s11, 0.0, a.s12, 0.0],
            [0.0, b.s11, 0.0, b.s12],
            [a.s12, 0.0, a.s22, 0.0],
            [0.0, b.s12, 0.0, b.s22],
        ];
        Self { entries: e }
    }

    /// `diag(τ⁻¹, τ)` in `(q1, q2, p1, p2)` ordering: the pure state built from `𝔤_τ`.
    pub fn from_position_form(tau: &CovMat2) -> Result<Self> {
        let ti = tau.inverse()?;
        Self::new([
            [ti.s11, ti.s12, 0.0, 0.0],
            [ti.s12, ti.s22, 0.0, 0.0],
            [0.0, 0.0, tau.s11, tau.s12],
            [0.0, 0.0, tau.s12, tau.s22],
        ])
    }

    pub fn entries(&self) -> &[[f64; 4]; 4] {
        &self.entries
    }

    pub fn upper(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(10);
        for i in 0..4 {
            for j in i..4 {
                out.push(self.entries[i][j]);
            }
        }
        out
    }

    pub fn det(&self) -> f64 {
        let l = cholesky4(&self.entries).expect("validated at construction");
        (0..4).map(|i| l[i][i] * l[i][i]).product()
    }

    pub fn inverse(&self) -> Result<[[f64; 4]; 4]> {
        let det = self.det();
        if det.abs() < SINGULAR_DET {
            return Err(Error::SingularCovariance { det });
        }
        let l = cholesky4(&self.entries).expect("validated at construction");
        // Solve L Lᵀ x = e_j column by column.
        let mut inv = [[0.0; 4]; 4];
        for j in 0..4 {
            let mut y = [0.0; 4];
            for i in 0..4 {
                let mut acc = if i == j { 1.0 } else { 0.0 };
                for k in 0..i {
                    acc -= l[i][k] * y[k];
                }
                y[i] = acc / l[i][i];
            }
            let mut x = [0.0; 4];
            for i in (0..4).rev() {
                let mut acc = y[i];
                for k in i + 1..4 {
                    acc -= l[k][i] * x[k];
                }
                x[i] = acc / l[i][i];
            }
            for i in 0..4 {
                inv[i][j] = x[i];
            }
        }
        Ok(inv)
    }

    /// Largest eigenvalue bound via the Gershgorin discs.
    pub fn max_eigenvalue_bound(&self) -> f64 {
        (0..4)
            .map(|i| {
                self.entries[i][i]
                    + (0..4)
                        .filter(|&j| j != i)
                        .map(|j| self.entries[i][j].abs())
                        .sum::<f64>()
            })
            .fold(f64::MIN, f64::max)
    }
}

fn cholesky4(a: &[[f64; 4]; 4]) -> Option<[[f64; 4]; 4]> {
    let mut l = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..=i {
            let mut acc = a[i][j];
            for k in 0..j {
                acc -= l[i][k] * l[j][k];
            }
            if i == j {
                if acc <= 0.0 {
                    return None;
                }
                l[i][i] = acc.sqrt();
            } else {
                l[i][j] = acc / l[j][j];
            }
        }
    }
    Some(l)
}

/// Whether a lattice sum uses integer periods or periods shifted by one half.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Shift {
    #[default]
    None,
    Half,
}

impl Shift {
    fn offset(self) -> f64 {
        match self {
            Shift::None => 0.0,
            Shift::Half => 0.5,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Theta1DSpec {
    pub kappa: f64,
    pub dim: LatticeDim,
    pub shift: Shift,
}

impl Theta1DSpec {
    pub fn new(kappa: f64, dim: LatticeDim, shift: Shift) -> Result<Self> {
        if !(kappa > 0.0 && kappa.is_finite()) {
            return Err(Error::InvalidParameter(format!("kappa must be positive, got {kappa}")));
        }
        Ok(Self { kappa, dim, shift })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Theta2DSpec {
    pub tau: CovMat2,
    pub dim: LatticeDim,
    pub shift: (Shift, Shift),
}

/// `𝔤_κ(n) = Σ_α exp(−(κπ/d)(n + (α + shift)d)²)`
pub fn theta_1d(spec: &Theta1DSpec, n: i64) -> f64 {
    let d = spec.dim.d() as f64;
    let a = spec.kappa * PI / d;
    let off = spec.shift.offset();
    let term = |alpha: i64| {
        let x = n as f64 + (alpha as f64 + off) * d;
        (-a * x * x).exp()
    };
    let mut window = INITIAL_WINDOW;
    loop {
        let mut sum = 0.0;
        let mut max_term = 0.0f64;
        for alpha in -window..=window {
            let t = term(alpha);
            sum += t;
            max_term = max_term.max(t);
        }
        let dropped = term(window + 1).max(term(-window - 1));
        if dropped < TRUNCATION_TOL * max_term || window >= MAX_WINDOW {
            return sum;
        }
        window *= 2;
    }
}

/// Vector of `𝔤_κ(n)` for `n = −s..s`, unnormalised.
pub fn theta_vector(kappa: f64, dim: LatticeDim, shift: Shift) -> Result<CVector> {
    let spec = Theta1DSpec::new(kappa, dim, shift)?;
    Ok(CVector::from_real(&dim.labels().map(|n| theta_1d(&spec, n)).collect::<Vec<_>>()))
}

/// `𝔤_τ(n1, n2)`, the two-variable lattice sum with optional half shifts per axis.
pub fn theta_2d(spec: &Theta2DSpec, n1: i64, n2: i64) -> f64 {
    let d = spec.dim.d() as f64;
    let (o1, o2) = (spec.shift.0.offset(), spec.shift.1.offset());
    let c = PI / d;
    let term = |a1: i64, a2: i64| {
        let v = [n1 as f64 + (a1 as f64 + o1) * d, n2 as f64 + (a2 as f64 + o2) * d];
        (-c * spec.tau.quadratic(v)).exp()
    };
    let lambda_min = spec.tau.eigenvalues().0;
    let mut window = INITIAL_WINDOW;
    loop {
        let mut sum = 0.0;
        let mut max_term = 0.0f64;
        for a1 in -window..=window {
            for a2 in -window..=window {
                let t = term(a1, a2);
                sum += t;
                max_term = max_term.max(t);
            }
        }
        // Outside the window one coordinate has magnitude at least window·d.
        let r = window as f64 * d;
        let dropped = (-c * lambda_min * r * r).exp();
        if dropped < TRUNCATION_TOL * max_term || window >= MAX_WINDOW {
            return sum;
        }
        window *= 2;
    }
}

/// `𝔤_τ` over the `d×d` lattice, flattened with `n1` major.
pub fn theta_2d_vector(tau: &CovMat2, dim: LatticeDim, shift: (Shift, Shift)) -> CVector {
    let spec = Theta2DSpec { tau: *tau, dim, shift };
    let mut out = Vec::with_capacity(dim.d() * dim.d());
    for n1 in dim.labels() {
        for n2 in dim.labels() {
            out.push(theta_2d(&spec, n1, n2));
        }
    }
    CVector::from_real(&out)
}

/// Continuum window `w_σ(x) = exp(−(2π/d)(x − x̃)ᵀ σ⁻¹ (x − x̃))` in N phase-space coordinates.
#[derive(Clone, Copy, Debug)]
pub struct GaussianWindow<const N: usize> {
    inverse: [[f64; N]; N],
    center: [f64; N],
    prefactor: f64,
    /// Smallest eigenvalue of σ⁻¹ (or a lower bound for it).
    decay: f64,
}

impl GaussianWindow<2> {
    pub fn single(sigma: &CovMat2, center: [f64; 2], dim: LatticeDim) -> Result<Self> {
        let inv = sigma.inverse()?;
        Ok(Self {
            inverse: inv.as_mat2(),
            center,
            prefactor: 2.0 * PI / dim.d() as f64,
            decay: 1.0 / sigma.eigenvalues().1,
        })
    }
}

impl GaussianWindow<4> {
    pub fn two_mode(sigma: &CovMat4, center: [f64; 4], dim: LatticeDim) -> Result<Self> {
        Ok(Self {
            inverse: sigma.inverse()?,
            center,
            prefactor: 2.0 * PI / dim.d() as f64,
            decay: 1.0 / sigma.max_eigenvalue_bound(),
        })
    }
}

impl<const N: usize> GaussianWindow<N> {
    pub fn exponent(&self, point: [f64; N]) -> f64 {
        let mut v = [0.0; N];
        for i in 0..N {
            v[i] = point[i] - self.center[i];
        }
        let mut acc = 0.0;
        for i in 0..N {
            for j in 0..N {
                acc += v[i] * self.inverse[i][j] * v[j];
            }
        }
        -self.prefactor * acc
    }

    pub fn eval(&self, point: [f64; N]) -> f64 {
        self.exponent(point).exp()
    }

    /// Upper bound on `w` at any point whose distance from the center is at least `r`.
    pub fn envelope(&self, r: f64) -> f64 {
        let r = r.max(0.0);
        (-self.prefactor * self.decay * r * r).exp()
    }

    pub fn center(&self) -> [f64; N] {
        self.center
    }
}

/// Single-mode window `w_σ(q, p)` with center `(q̃, p̃)`.
pub fn gaussian_window(sigma: &CovMat2, center: [f64; 2], point: [f64; 2], dim: LatticeDim) -> Result<f64> {
    Ok(GaussianWindow::single(sigma, center, dim)?.eval(point))
}

/// `‖𝔉[𝔤_κ] − κ^{−1/2} 𝔤_{1/κ}‖_∞`
pub fn fourier_identity_check(kappa: f64, dim: LatticeDim) -> Result<f64> {
    let g = theta_vector(kappa, dim, Shift::None)?;
    let fg = dft_matrix(dim).apply(&g)?;
    let dual = theta_vector(1.0 / kappa, dim, Shift::None)?;
    let scale = kappa.powf(-0.5);
    Ok(fg
        .iter()
        .zip(dual.iter())
        .map(|(a, b)| (a - b * scale).norm())
        .fold(0.0, f64::max))
}

/// `‖(𝔉⊗𝔉)[𝔤_τ] − (det τ)^{−1/2} 𝔤_{τ⁻¹}‖_∞`
pub fn fourier_identity_check_2d(tau: &CovMat2, dim: LatticeDim) -> Result<f64> {
    let g = theta_2d_vector(tau, dim, (Shift::None, Shift::None));
    let f = dft_matrix(dim);
    let fg = f.kron(&f).apply(&g)?;
    let dual = theta_2d_vector(&tau.inverse()?, dim, (Shift::None, Shift::None));
    let scale = tau.det().powf(-0.5);
    Ok(fg
        .iter()
        .zip(dual.iter())
        .map(|(a, b)| (a - b * scale).norm())
        .fold(0.0, f64::max))
}
