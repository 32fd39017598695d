//! Single- and two-mode discrete Gaussian states synthesised from a
//! covariance matrix by a signed lattice sum of continuum Gaussians over
//! half-period shifts.

use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::lattice::{LatticeDim, Modes, WignerGrid};
use crate::linalg::{eigh, eigh_ordered, trace, CMatrix, EigenOrder, ZERO};
use crate::operators::{dft_matrix, displacement};
use crate::theta::{theta_vector, CovMat2, CovMat4, GaussianWindow, Shift, TRUNCATION_TOL};
use crate::wigner::{reconstruct_density, wigner_of_density, wigner_of_pure};

/// Largest half-period index any synthesis sum may reach.
const MAX_WINDOW: i64 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Covariance {
    One(CovMat2),
    Two(CovMat4),
}

/// Covariance, phase-space center and dimension of a discrete Gaussian state.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianSpec {
    pub dim: LatticeDim,
    pub sigma: Covariance,
    /// `(q̃, p̃)` for one mode, `(q̃1, q̃2, p̃1, p̃2)` for two.
    pub center: Vec<f64>,
}

impl GaussianSpec {
    pub fn single(dim: LatticeDim, sigma: CovMat2) -> Self {
        Self::single_centered(dim, sigma, [0.0, 0.0])
    }

    pub fn single_centered(dim: LatticeDim, sigma: CovMat2, center: [f64; 2]) -> Self {
        Self {
            dim,
            sigma: Covariance::One(sigma),
            center: center.to_vec(),
        }
    }

    pub fn two_mode(dim: LatticeDim, sigma: CovMat4) -> Self {
        Self::two_mode_centered(dim, sigma, [0.0; 4])
    }

    pub fn two_mode_centered(dim: LatticeDim, sigma: CovMat4, center: [f64; 4]) -> Self {
        Self {
            dim,
            sigma: Covariance::Two(sigma),
            center: center.to_vec(),
        }
    }

    pub fn modes(&self) -> Modes {
        match self.sigma {
            Covariance::One(_) => Modes::One,
            Covariance::Two(_) => Modes::Two,
        }
    }

    /// Covariance and center after Fourier conjugation: `ΩσΩᵀ` and `Ω(q̃, p̃)`.
    pub fn fourier_rotated(&self) -> Result<Self> {
        match self.sigma {
            Covariance::One(s) => Ok(Self::single_centered(
                self.dim,
                CovMat2::new(s.s22, -s.s12, s.s11)?,
                [self.center[1], -self.center[0]],
            )),
            Covariance::Two(_) => Err(Error::InvalidParameter(
                "Fourier rotation is implemented for single-mode specs".into(),
            )),
        }
    }
}

/// A synthesised state: normalised grid, density operator and the factor `C`.
#[derive(Clone, Debug)]
pub struct GaussianState {
    pub spec: GaussianSpec,
    pub grid: WignerGrid,
    pub rho: CMatrix,
    pub c: f64,
}

fn sign(a: i64, b: i64) -> f64 {
    if (a * b).rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Half-period indices `α` for which `|x + αd/2 − c| ≤ radius` can hold.
fn axis_range(x: f64, c: f64, radius: f64, d: f64) -> Result<(i64, i64)> {
    let lo = ((c - x - radius) * 2.0 / d).floor() as i64;
    let hi = ((c - x + radius) * 2.0 / d).ceil() as i64;
    if lo.abs() > MAX_WINDOW || hi.abs() > MAX_WINDOW {
        return Err(Error::TruncationDiverged { window: lo.abs().max(hi.abs()) });
    }
    Ok((lo, hi))
}

/// Radius beyond which every term lies below the truncation tolerance relative
/// to the largest term on the unshifted grid.
fn cutoff_radius<const N: usize>(win: &GaussianWindow<N>, points: impl Iterator<Item = [f64; N]>) -> Result<f64> {
    let max_term = points.map(|p| win.eval(p)).fold(0.0, f64::max);
    if max_term <= 0.0 {
        return Err(Error::TruncationDiverged { window: MAX_WINDOW });
    }
    // envelope(r) = exp(−a r²); solve for envelope(r) = tol · max_term.
    let a = -win.envelope(1.0).ln();
    Ok(((-(TRUNCATION_TOL * max_term).ln()) / a).sqrt())
}

fn single_raw(dim: LatticeDim, sigma: &CovMat2, center: [f64; 2]) -> Result<WignerGrid> {
    let win = GaussianWindow::single(sigma, center, dim)?;
    let d = dim.d() as f64;
    let labels: Vec<i64> = dim.labels().collect();
    let grid_points = labels
        .iter()
        .flat_map(|&n| labels.iter().map(move |&k| [n as f64, k as f64]));
    let radius = cutoff_radius(&win, grid_points)?;
    let mut values = Vec::with_capacity(labels.len().pow(2));
    for &n in &labels {
        let (a_lo, a_hi) = axis_range(n as f64, center[0], radius, d)?;
        for &k in &labels {
            let (b_lo, b_hi) = axis_range(k as f64, center[1], radius, d)?;
            let mut acc = 0.0;
            for a in a_lo..=a_hi {
                let q = n as f64 + a as f64 * d / 2.0;
                for b in b_lo..=b_hi {
                    let p = k as f64 + b as f64 * d / 2.0;
                    acc += sign(a, b) * win.eval([q, p]);
                }
            }
            values.push(acc);
        }
    }
    WignerGrid::from_values(dim, Modes::One, values)
}

fn two_mode_raw(dim: LatticeDim, sigma: &CovMat4, center: [f64; 4]) -> Result<WignerGrid> {
    let win = GaussianWindow::two_mode(sigma, center, dim)?;
    let d = dim.d() as f64;
    let labels: Vec<i64> = dim.labels().collect();
    let base: Vec<[f64; 4]> = {
        let mut pts = Vec::with_capacity(labels.len().pow(4));
        for &a in &labels {
            for &b in &labels {
                for &c in &labels {
                    for &e in &labels {
                        pts.push([a as f64, b as f64, c as f64, e as f64]);
                    }
                }
            }
        }
        pts
    };
    let radius = cutoff_radius(&win, base.iter().copied())?;
    let mut values = Vec::with_capacity(base.len());
    for p in &base {
        let mut ranges = [(0i64, 0i64); 4];
        for i in 0..4 {
            ranges[i] = axis_range(p[i], center[i], radius, d)?;
        }
        let mut acc = 0.0;
        for a1 in ranges[0].0..=ranges[0].1 {
            for a2 in ranges[1].0..=ranges[1].1 {
                for b1 in ranges[2].0..=ranges[2].1 {
                    for b2 in ranges[3].0..=ranges[3].1 {
                        let x = [
                            p[0] + a1 as f64 * d / 2.0,
                            p[1] + a2 as f64 * d / 2.0,
                            p[2] + b1 as f64 * d / 2.0,
                            p[3] + b2 as f64 * d / 2.0,
                        ];
                        acc += sign(a1, b1) * sign(a2, b2) * win.eval(x);
                    }
                }
            }
        }
        values.push(acc);
    }
    WignerGrid::from_values(dim, Modes::Two, values)
}

/// Evaluates the signed lattice sum, normalises it to unit sum and builds `ϱ`.
pub fn synthesize(spec: &GaussianSpec) -> Result<GaussianState> {
    let mut grid = match (&spec.sigma, spec.center.len()) {
        (Covariance::One(s), 2) => single_raw(spec.dim, s, [spec.center[0], spec.center[1]])?,
        (Covariance::Two(s), 4) => {
            let c = [spec.center[0], spec.center[1], spec.center[2], spec.center[3]];
            two_mode_raw(spec.dim, s, c)?
        }
        (_, n) => {
            return Err(Error::ShapeMismatch {
                expected: format!("center with {} coordinates", spec.modes().axes()),
                found: format!("{n}"),
            })
        }
    };
    let c = grid.normalize();
    let rho = reconstruct_density(&grid, spec.dim)?;
    Ok(GaussianState {
        spec: spec.clone(),
        grid,
        rho,
        c,
    })
}

impl GaussianState {
    pub fn dim(&self) -> LatticeDim {
        self.spec.dim
    }

    pub fn modes(&self) -> Modes {
        self.spec.modes()
    }

    /// `d Σ 𝔚²` (with `d²` for two modes).
    pub fn purity(&self) -> f64 {
        let d = self.dim().d() as f64;
        d.powi(self.modes().count() as i32) * self.grid.sum_of_squares()
    }

    /// `tr ϱ²`, the operator form of the purity.
    pub fn purity_from_rho(&self) -> f64 {
        trace(&(&self.rho * &self.rho)).map(|t| t.re).unwrap_or(f64::NAN)
    }

    /// Eigenvalues of `ϱ`, descending.
    pub fn spectrum(&self) -> Result<Vec<f64>> {
        Ok(eigh_ordered(&self.rho, EigenOrder::Descending)?.values)
    }

    pub fn positivity_report(&self) -> Result<PositivityReport> {
        let min_eigenvalue = eigh(&self.rho)?.values[0];
        let uncertainty_min = uncertainty_min_eigenvalue(&self.spec.sigma)?;
        Ok(PositivityReport {
            min_eigenvalue,
            uncertainty_min_eigenvalue: uncertainty_min,
            satisfies_uncertainty: uncertainty_min >= -1e-12,
        })
    }

    /// `{d, modes, sigma, center, C, grid, rho}` with `rho` as `[[re, im], …]` row-major.
    pub fn to_json(&self) -> serde_json::Value {
        let sigma = match &self.spec.sigma {
            Covariance::One(s) => json!([[s.s11, s.s12], [s.s12, s.s22]]),
            Covariance::Two(s) => json!(s.entries()),
        };
        let rho: Vec<[f64; 2]> = self.rho.as_slice().iter().map(|z| [z.re, z.im]).collect();
        json!({
            "d": self.dim().d(),
            "modes": self.modes().count(),
            "sigma": sigma,
            "center": self.spec.center,
            "C": self.c,
            "grid": self.grid.values(),
            "rho": rho,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PositivityReport {
    pub min_eigenvalue: f64,
    /// Smallest eigenvalue of the Hermitian matrix `σ + iΩ`.
    pub uncertainty_min_eigenvalue: f64,
    pub satisfies_uncertainty: bool,
}

/// Smallest eigenvalue of `σ + iΩ`, with `Ω = ((0, I), (−I, 0))` in `(q…, p…)` ordering.
pub fn uncertainty_min_eigenvalue(sigma: &Covariance) -> Result<f64> {
    let i = num_complex::Complex64::new(0.0, 1.0);
    let m = match sigma {
        Covariance::One(s) => {
            let mut m = CMatrix::zeros(2, 2);
            m[(0, 0)] = s.s11.into();
            m[(1, 1)] = s.s22.into();
            m[(0, 1)] = s.s12 + i;
            m[(1, 0)] = s.s12 - i;
            m
        }
        Covariance::Two(s) => {
            let e = s.entries();
            let mut m = CMatrix::from_fn(4, 4, |r, c| e[r][c].into());
            for k in 0..2 {
                m[(k, k + 2)] += i;
                m[(k + 2, k)] -= i;
            }
            m
        }
    };
    Ok(eigh(&m)?.values[0])
}

/// Reduced state of one mode of a `d² × d²` operator; `keep = 0` keeps the major factor.
pub fn partial_trace(rho: &CMatrix, dim: LatticeDim, keep: usize) -> Result<CMatrix> {
    let d = dim.d();
    if rho.rows() != d * d || rho.cols() != d * d {
        return Err(Error::ShapeMismatch {
            expected: format!("{0}x{0}", d * d),
            found: format!("{}x{}", rho.rows(), rho.cols()),
        });
    }
    let f = |i: usize, j: usize| -> num_complex::Complex64 {
        (0..d)
            .map(|t| match keep {
                0 => rho[(i * d + t, j * d + t)],
                _ => rho[(t * d + i, t * d + j)],
            })
            .fold(ZERO, |a, b| a + b)
    };
    Ok(CMatrix::from_fn(d, d, f))
}

/// Named outcome of one numerical check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub passed: bool,
}

impl CheckResult {
    pub fn at_most(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            value,
            threshold,
            passed: value <= threshold,
        }
    }
}

fn frob(a: &CMatrix, b: &CMatrix) -> f64 {
    crate::linalg::frobenius_norm(&(a - b))
}

/// Synthesised `σ_κ = diag(κ⁻¹, κ)` state against `|g_κ⟩⟨g_κ|` (Frobenius distance).
pub fn vacuum_family_distance(kappa: f64, dim: LatticeDim) -> Result<f64> {
    let sigma = CovMat2::diagonal(1.0 / kappa, kappa)?;
    let state = synthesize(&GaussianSpec::single(dim, sigma))?;
    let g = theta_vector(kappa, dim, Shift::None)?.normalized();
    Ok(frob(&state.rho, &g.projector()))
}

/// Displaced `𝔇(n0,k0) g_κ` against the Gaussian state centered at `(n0, k0)` (max grid deviation).
pub fn displaced_vacuum_deviation(kappa: f64, n0: i64, k0: i64, dim: LatticeDim) -> Result<f64> {
    let psi = displacement(dim, n0, k0)?.apply(&theta_vector(kappa, dim, Shift::None)?.normalized())?;
    let direct = wigner_of_pure(&psi, dim)?;
    let sigma = CovMat2::diagonal(1.0 / kappa, kappa)?;
    let centered = synthesize(&GaussianSpec::single_centered(dim, sigma, [n0 as f64, k0 as f64]))?;
    Ok(direct.max_abs_diff(&centered.grid))
}

/// Grid of `𝔇ϱ𝔇†` against the modularly shifted grid of `ϱ`.
pub fn displacement_covariance_deviation(state: &GaussianState, n0: i64, k0: i64) -> Result<f64> {
    let dim = state.dim();
    let moved = state.rho.conjugate_by(&displacement(dim, n0, k0)?)?;
    let w = wigner_of_density(&moved, dim, Modes::One)?;
    let shifted = WignerGrid::single_from_fn(dim, |n, k| state.grid.at(n - n0, k - k0));
    Ok(w.max_abs_diff(&shifted))
}

/// Grid of `𝔉ϱ𝔉†` against the state synthesised from `ΩσΩᵀ`.
pub fn fourier_covariance_deviation(state: &GaussianState) -> Result<f64> {
    let dim = state.dim();
    let rotated = state.rho.conjugate_by(&dft_matrix(dim))?;
    let w = wigner_of_density(&rotated, dim, Modes::One)?;
    let target = synthesize(&state.spec.fourier_rotated()?)?;
    Ok(w.max_abs_diff(&target.grid))
}

/// Max-point deviation between the normalised discrete grid and the sampled,
/// normalised continuum Wigner function `𝒲(n/√d, k/√d)` with `h = 1`.
pub fn continuum_deviation(sigma: &CovMat2, dim: LatticeDim) -> Result<f64> {
    let state = synthesize(&GaussianSpec::single(dim, *sigma))?;
    // With h = 1 the sampled continuum Wigner function is w_σ at the lattice points.
    let win = GaussianWindow::single(sigma, [0.0, 0.0], dim)?;
    let mut sampled = WignerGrid::single_from_fn(dim, |n, k| win.eval([n as f64, k as f64]));
    sampled.normalize();
    Ok(state.grid.max_abs_diff(&sampled))
}

/// Vacuum, displacement, Fourier and continuum-limit checks over a set of dimensions.
pub fn covariance_checks(dims: &[LatticeDim], sigmas: &[CovMat2]) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    for &dim in dims {
        let d = dim.d();
        for &kappa in &[0.5, 1.0, 2.0] {
            out.push(CheckResult::at_most(
                format!("vacuum-family d={d} kappa={kappa}"),
                vacuum_family_distance(kappa, dim)?,
                1e-8,
            ));
            let (n0, k0) = (dim.s(), -1);
            out.push(CheckResult::at_most(
                format!("displaced-vacuum d={d} kappa={kappa}"),
                displaced_vacuum_deviation(kappa, n0, k0, dim)?,
                1e-8,
            ));
        }
        for sigma in sigmas {
            let state = synthesize(&GaussianSpec::single(dim, *sigma))?;
            let tag = format!("d={d} sigma=({},{},{})", sigma.s11, sigma.s12, sigma.s22);
            let mut worst = 0.0f64;
            for n0 in dim.labels() {
                for k0 in dim.labels() {
                    worst = worst.max(displacement_covariance_deviation(&state, n0, k0)?);
                }
            }
            out.push(CheckResult::at_most(format!("displacement-covariance {tag}"), worst, 1e-12));
            out.push(CheckResult::at_most(
                format!("fourier-covariance {tag}"),
                fourier_covariance_deviation(&state)?,
                1e-8,
            ));
            out.push(CheckResult::at_most(
                format!("purity-consistency {tag}"),
                (state.purity() - state.purity_from_rho()).abs(),
                1e-12,
            ));
        }
    }
    for sigma in sigmas {
        let tag = format!("sigma=({},{},{})", sigma.s11, sigma.s12, sigma.s22);
        let devs = (9..=31)
            .step_by(2)
            .map(|d| continuum_deviation(sigma, LatticeDim::new(d)?))
            .collect::<Result<Vec<f64>>>()?;
        let worst_increase = devs.windows(2).map(|w| w[1] - w[0]).fold(f64::MIN, f64::max);
        out.push(CheckResult::at_most(
            format!("continuum-limit monotone {tag}"),
            worst_increase,
            0.0,
        ));
    }
    Ok(out)
}

/// `|tr ϱ_σ² − 1/√det σ|` at one dimension.
pub fn purity_limit_deviation(sigma: &CovMat2, dim: LatticeDim) -> Result<f64> {
    let p = synthesize(&GaussianSpec::single(dim, *sigma))?.purity();
    Ok((p - 1.0 / sigma.det().sqrt()).abs())
}

/// Purity and second eigenvalue of a state whose covariance has unit determinant.
pub fn unit_determinant_check(sigma: &CovMat2, dim: LatticeDim) -> Result<(f64, f64)> {
    let state = synthesize(&GaussianSpec::single(dim, *sigma))?;
    let spec = state.spectrum()?;
    Ok((state.purity(), spec[1]))
}

/// `σ = Rᵀ diag(λ, 1/λ) R` for a rotation by `theta`.
pub fn unit_determinant_covariance(lambda: f64, theta: f64) -> Result<CovMat2> {
    let (c, s) = (theta.cos(), theta.sin());
    let (a, b) = (lambda, 1.0 / lambda);
    // R = ((c, −s), (s, c)); RᵀDR
    CovMat2::new(a * c * c + b * s * s, (b - a) * c * s, a * s * s + b * c * c)
}
