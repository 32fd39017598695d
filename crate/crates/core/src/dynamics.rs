//! Defect of the canonical commutation relation, the subspace where it
//! approximately holds, and approximate Gaussian unitaries generated by
//! quadratic Hamiltonians in the ladder operators.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gaussian::{synthesize, GaussianSpec};
use crate::lattice::LatticeDim;
use crate::linalg::{
    commutator, eigh, expm_hermitian_generator, expm_real_2x2, frobenius_norm, mat2_det, mat2_mul,
    mat2_transpose, spectral_norm, CMatrix, CVector, Mat2, I,
};
use crate::operators::{displacement, parity_matrix, OperatorSet};
use crate::theta::CovMat2;

pub const DEFAULT_EPSILON: f64 = 1e-6;

/// `[𝔮̂, 𝔭̂] − i d/(2π)`
pub fn commutator_defect(ops: &OperatorSet) -> Result<CMatrix> {
    let d = ops.dim().d();
    let c = commutator(ops.position(), ops.momentum())?;
    c.try_sub(&CMatrix::identity(d).scale(I * (d as f64 / (2.0 * PI))))
}

/// Eigenpairs of `K = −i([𝔮̂,𝔭̂] − i d/2π)`, sorted by `|λ|` ascending.
#[derive(Clone, Debug)]
pub struct CommutatorSpectrum {
    pub dim: LatticeDim,
    pub values: Vec<f64>,
    pub vectors: Vec<CVector>,
}

pub fn commutator_spectrum(dim: LatticeDim) -> Result<CommutatorSpectrum> {
    let ops = OperatorSet::new(dim);
    let k = commutator_defect(&ops)?.scale(-I);
    let dec = eigh(&k)?;
    let mut order: Vec<usize> = (0..dim.d()).collect();
    order.sort_by(|&a, &b| dec.values[a].abs().total_cmp(&dec.values[b].abs()));
    Ok(CommutatorSpectrum {
        dim,
        values: order.iter().map(|&j| dec.values[j]).collect(),
        vectors: order.iter().map(|&j| dec.vector(j)).collect(),
    })
}

/// `H_ε`: the span of commutator eigenvectors with `|λ| < ε`.
#[derive(Clone, Debug)]
pub struct CanonicalSubspace {
    pub epsilon: f64,
    pub basis: Vec<CVector>,
}

impl CanonicalSubspace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn projector(&self) -> CMatrix {
        let n = self.basis[0].len();
        self.basis
            .iter()
            .fold(CMatrix::zeros(n, n), |acc, v| &acc + &v.projector())
    }
}

pub fn canonical_subspace(spectrum: &CommutatorSpectrum, epsilon: f64) -> Result<CanonicalSubspace> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidParameter(format!("epsilon must be positive, got {epsilon}")));
    }
    let basis: Vec<CVector> = spectrum
        .values
        .iter()
        .zip(&spectrum.vectors)
        .filter(|(l, _)| l.abs() < epsilon)
        .map(|(_, v)| v.clone())
        .collect();
    if basis.is_empty() {
        return Err(Error::EmptySubspace { epsilon });
    }
    Ok(CanonicalSubspace { epsilon, basis })
}

/// `‖P_ε([𝔮̂,𝔭̂] − i d/2π)P_ε‖₂`
pub fn restricted_commutation_defect(dim: LatticeDim, sub: &CanonicalSubspace) -> Result<f64> {
    let p = sub.projector();
    let m = commutator_defect(&OperatorSet::new(dim))?;
    spectral_norm(&(&(&p * &m) * &p))
}

/// `|⟨φ_n|ψ⟩|`
pub fn expand_in_commutator_basis(psi: &CVector, spectrum: &CommutatorSpectrum) -> Result<Vec<f64>> {
    if psi.len() != spectrum.dim.d() {
        return Err(Error::ShapeMismatch {
            expected: format!("vector of length {}", spectrum.dim.d()),
            found: format!("{}", psi.len()),
        });
    }
    Ok(spectrum.vectors.iter().map(|phi| phi.inner(psi).norm()).collect())
}

/// `|⟨φ_n|ϱ|φ_m⟩|`
pub fn expand_operator_in_commutator_basis(rho: &CMatrix, spectrum: &CommutatorSpectrum) -> Result<Vec<Vec<f64>>> {
    let images = spectrum
        .vectors
        .iter()
        .map(|phi| rho.apply(phi))
        .collect::<Result<Vec<_>>>()?;
    Ok(spectrum
        .vectors
        .iter()
        .map(|phi| images.iter().map(|img| phi.inner(img).norm()).collect())
        .collect())
}

/// `𝔥̂ = A 𝔞̂†𝔞̂ + B 𝔞̂†𝔞̂† + B̄ 𝔞̂𝔞̂ + A 𝔞̂𝔞̂†`, `Û = e^{−i𝔥̂/2}` and its symplectic image `S`.
#[derive(Clone, Debug)]
pub struct GaussianTransform {
    pub a: f64,
    pub b: Complex64,
    pub h: CMatrix,
    pub u: CMatrix,
    pub s: Mat2,
}

/// Parameters `(A, B)` of the phase shift `S_φ`.
pub fn phase_shift(phi: f64) -> (f64, Complex64) {
    (-phi, Complex64::new(0.0, 0.0))
}

/// Parameters `(A, B)` of the squeeze `S_{s,θ}`: `B = i s e^{iθ}`.
pub fn squeeze(s: f64, theta: f64) -> (f64, Complex64) {
    (0.0, I * Complex64::from_polar(s, theta))
}

/// `S = exp(−½ ((B−B̄)i, −2A+B+B̄; 2A+B+B̄, −(B−B̄)i))`
pub fn symplectic_image(a: f64, b: Complex64) -> Result<Mat2> {
    let m = [[b.im, a - b.re], [-a - b.re, -b.im]];
    let s = expm_real_2x2(&m)?;
    let det = mat2_det(&s);
    if (det - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidParameter(format!("symplectic image has determinant {det}")));
    }
    Ok(s)
}

pub fn gaussian_transform(a: f64, b: Complex64, dim: LatticeDim) -> Result<GaussianTransform> {
    if !(a.is_finite() && b.re.is_finite() && b.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    let (lo, hi) = OperatorSet::new(dim).ladder();
    let h = &(&(&(&hi * &lo).scale_real(a) + &(&hi * &hi).scale(b)) + &(&lo * &lo).scale(b.conj()))
        + &(&lo * &hi).scale_real(a);
    let u = expm_hermitian_generator(&h, Complex64::new(0.0, -0.5))?;
    let s = symplectic_image(a, b)?;
    Ok(GaussianTransform { a, b, h, u, s })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormKind {
    Frobenius,
    Spectral,
}

impl NormKind {
    pub fn name(self) -> &'static str {
        match self {
            NormKind::Frobenius => "frobenius",
            NormKind::Spectral => "spectral",
        }
    }
}

impl std::str::FromStr for NormKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "frobenius" | "fro" => Ok(NormKind::Frobenius),
            "spectral" | "2" => Ok(NormKind::Spectral),
            other => Err(Error::InvalidParameter(format!("unknown norm '{other}'"))),
        }
    }
}

/// `S σ Sᵀ`
pub fn transform_covariance(s: &Mat2, sigma: &CovMat2) -> Result<CovMat2> {
    CovMat2::from_mat2(&mat2_mul(&mat2_mul(s, &sigma.as_mat2()), &mat2_transpose(s)))
}

/// `‖Û ϱ_σ Û† − ϱ_{SσSᵀ}‖`
pub fn transform_deviation(t: &GaussianTransform, sigma: &CovMat2, dim: LatticeDim, norm: NormKind) -> Result<f64> {
    let before = synthesize(&GaussianSpec::single(dim, *sigma))?;
    let evolved = before.rho.conjugate_by(&t.u)?;
    let after = synthesize(&GaussianSpec::single(dim, transform_covariance(&t.s, sigma)?))?;
    let diff = evolved.try_sub(&after.rho)?;
    match norm {
        NormKind::Frobenius => Ok(frobenius_norm(&diff)),
        NormKind::Spectral => spectral_norm(&diff),
    }
}

/// `(restricted, unrestricted)` Frobenius distance between `𝔇(n,k)` and
/// `e^{−(2πi/d)(n𝔭̂ − k𝔮̂)}`; the first is projected onto `H_ε`.
pub fn displacement_approximation_check(dim: LatticeDim, n: i64, k: i64, epsilon: f64) -> Result<(f64, f64)> {
    let ops = OperatorSet::new(dim);
    let g = ops
        .momentum()
        .scale_real(n as f64)
        .try_sub(&ops.position().scale_real(k as f64))?;
    let approx = expm_hermitian_generator(&g, Complex64::new(0.0, -2.0 * PI / dim.d() as f64))?;
    let diff = displacement(dim, n, k)?.try_sub(&approx)?;
    let p = canonical_subspace(&commutator_spectrum(dim)?, epsilon)?.projector();
    let restricted = frobenius_norm(&(&(&p * &diff) * &p));
    Ok((restricted, frobenius_norm(&diff)))
}

/// `‖Û†ΠÛ − Π‖_F`
pub fn parity_invariance_residual(t: &GaussianTransform, dim: LatticeDim) -> Result<f64> {
    let par = parity_matrix(dim);
    let conj = par.conjugate_by(&t.u.dagger())?;
    Ok(frobenius_norm(&conj.try_sub(&par)?))
}

/// `max |SᵀΩS − Ω|`
pub fn symplectic_residual(s: &Mat2) -> f64 {
    let omega = [[0.0, 1.0], [-1.0, 0.0]];
    let m = mat2_mul(&mat2_mul(&mat2_transpose(s), &omega), s);
    let mut worst = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            worst = worst.max((m[i][j] - omega[i][j]).abs());
        }
    }
    worst
}

/// One line of a transform deviation table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransformRow {
    pub a: f64,
    pub b: Complex64,
    pub d: usize,
    pub norm: NormKind,
    pub deviation: f64,
}

pub fn transform_table(a: f64, b: Complex64, sigma: &CovMat2, dims: &[LatticeDim], norm: NormKind) -> Result<Vec<TransformRow>> {
    dims.iter()
        .map(|&dim| {
            let t = gaussian_transform(a, b, dim)?;
            Ok(TransformRow {
                a,
                b,
                d: dim.d(),
                norm,
                deviation: transform_deviation(&t, sigma, dim, norm)?,
            })
        })
        .collect()
}
