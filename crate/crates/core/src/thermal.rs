//! Discrete thermal states `σ = ν·I`, the truncated geometric law for their
//! spectra, the shared real eigenbasis and the finite-oscillator Hamiltonian.

use crate::error::{Error, Result};
use crate::gaussian::{synthesize, GaussianSpec, GaussianState};
use crate::lattice::LatticeDim;
use crate::linalg::{commutator, eigh_ordered, frobenius_norm, CMatrix, CVector, EigenOrder};
use crate::theta::CovMat2;

/// Imaginary residue allowed after rotating eigenvectors to real form.
const REAL_TOL: f64 = 1e-10;
/// Entries below this magnitude do not start a new sign run.
const SIGN_NOISE: f64 = 1e-9;
const DEGENERACY_GAP: f64 = 1e-12;
pub const DEFAULT_PROBE_NU: f64 = 2.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThermalSpec {
    nu: f64,
    dim: LatticeDim,
}

impl ThermalSpec {
    pub fn new(nu: f64, dim: LatticeDim) -> Result<Self> {
        if !(nu > 1.0 && nu.is_finite()) {
            return Err(Error::InvalidParameter(format!("thermal parameter nu must exceed 1, got {nu}")));
        }
        Ok(Self { nu, dim })
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn dim(&self) -> LatticeDim {
        self.dim
    }
}

pub fn thermal_state(spec: &ThermalSpec) -> Result<GaussianState> {
    let sigma = CovMat2::diagonal(spec.nu, spec.nu)?;
    synthesize(&GaussianSpec::single(spec.dim, sigma))
}

/// `N_n = rⁿ / Σ_{k<d} rᵏ` with `r = (ν−1)/(ν+1)`.
pub fn geometric_reference(spec: &ThermalSpec) -> Vec<f64> {
    let r = (spec.nu - 1.0) / (spec.nu + 1.0);
    let raw: Vec<f64> = (0..spec.dim.d()).map(|n| r.powi(n as i32)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}

/// One row of the thermal spectrum report.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectrumRow {
    pub n: usize,
    pub lambda: f64,
    pub reference: f64,
    pub deviation: f64,
}

/// Descending eigenvalues of the thermal state next to the geometric law.
pub fn spectrum_report(spec: &ThermalSpec) -> Result<Vec<SpectrumRow>> {
    let lambdas = thermal_state(spec)?.spectrum()?;
    let reference = geometric_reference(spec);
    Ok(lambdas
        .iter()
        .zip(&reference)
        .enumerate()
        .map(|(n, (&lambda, &r))| SpectrumRow {
            n,
            lambda,
            reference: r,
            deviation: lambda - r,
        })
        .collect())
}

/// Number of strict sign changes between consecutive entries, skipping near-zeros.
pub fn sign_alternations(v: &[f64]) -> usize {
    let mut last: Option<bool> = None;
    let mut count = 0;
    for &x in v {
        if x.abs() < SIGN_NOISE {
            continue;
        }
        let pos = x > 0.0;
        if let Some(prev) = last {
            if prev != pos {
                count += 1;
            }
        }
        last = Some(pos);
    }
    count
}

/// Real orthonormal eigenbasis of a thermal density operator.
#[derive(Clone, Debug)]
pub struct HermiteLikeBasis {
    pub dim: LatticeDim,
    /// Real vectors, ordered by label when the labels form a permutation.
    pub vectors: Vec<Vec<f64>>,
    /// Sign-alternation count of each vector.
    pub labels: Vec<usize>,
    /// Eigenvalue of the probe state belonging to each vector.
    pub eigenvalues: Vec<f64>,
    pub labels_are_permutation: bool,
    pub degenerate: bool,
}

impl HermiteLikeBasis {
    pub fn vector(&self, n: usize) -> CVector {
        CVector::from_real(&self.vectors[n])
    }

    /// `max |⟨⟨i|j⟩⟩ − δ_ij|`
    pub fn gram_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, a) in self.vectors.iter().enumerate() {
            for (j, b) in self.vectors.iter().enumerate() {
                let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }
}

pub fn hermite_like_basis(dim: LatticeDim, nu_probe: f64) -> Result<HermiteLikeBasis> {
    let state = thermal_state(&ThermalSpec::new(nu_probe, dim)?)?;
    let dec = eigh_ordered(&state.rho, EigenOrder::Descending)?;
    let d = dim.d();
    let mut vectors = Vec::with_capacity(d);
    for j in 0..d {
        let v = dec.vector(j);
        let residue = v.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        if residue > REAL_TOL {
            return Err(Error::ImaginaryResidue { residue });
        }
        vectors.push(v.iter().map(|z| z.re).collect::<Vec<f64>>());
    }
    let labels: Vec<usize> = vectors.iter().map(|v| sign_alternations(v)).collect();
    let mut seen = vec![false; d];
    let mut labels_are_permutation = true;
    for &l in &labels {
        if l >= d || seen[l] {
            labels_are_permutation = false;
            break;
        }
        seen[l] = true;
    }
    let degenerate = dec.values.windows(2).any(|w| (w[0] - w[1]).abs() < DEGENERACY_GAP);
    let mut order: Vec<usize> = (0..d).collect();
    if labels_are_permutation {
        order.sort_by_key(|&j| labels[j]);
    }
    Ok(HermiteLikeBasis {
        dim,
        vectors: order.iter().map(|&j| vectors[j].clone()).collect(),
        labels: order.iter().map(|&j| labels[j]).collect(),
        eigenvalues: order.iter().map(|&j| dec.values[j]).collect(),
        labels_are_permutation,
        degenerate,
    })
}

/// `H = Σ_n (n + ½) |n⟩⟩⟨⟨n|`
pub fn oscillator_hamiltonian(basis: &HermiteLikeBasis) -> CMatrix {
    let d = basis.dim.d();
    let mut h = CMatrix::zeros(d, d);
    for (n, v) in basis.vectors.iter().enumerate() {
        let w = n as f64 + 0.5;
        for i in 0..d {
            for j in 0..d {
                h[(i, j)] += w * v[i] * v[j];
            }
        }
    }
    h
}

/// `‖[ϱ_{I_ν}, ϱ_{I_μ}]‖_F`
pub fn commutation_study(nu: f64, mu: f64, dim: LatticeDim) -> Result<f64> {
    let a = thermal_state(&ThermalSpec::new(nu, dim)?)?;
    let b = thermal_state(&ThermalSpec::new(mu, dim)?)?;
    Ok(frobenius_norm(&commutator(&a.rho, &b.rho)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{eigh, trace};
    use crate::operators::ground_gaussian;
    use approx::assert_abs_diff_eq;

    fn dim(d: usize) -> LatticeDim {
        LatticeDim::new(d).unwrap()
    }

    #[test]
    fn rejects_nu_at_most_one() {
        assert!(ThermalSpec::new(1.0, dim(3)).is_err());
        assert!(ThermalSpec::new(0.2, dim(3)).is_err());
    }

    #[test]
    fn geometric_law_examples() {
        let n = geometric_reference(&ThermalSpec::new(3.0, dim(3)).unwrap());
        for (a, b) in n.iter().zip([4.0 / 7.0, 2.0 / 7.0, 1.0 / 7.0]) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-15);
        }
        let n = geometric_reference(&ThermalSpec::new(2.0, dim(7)).unwrap());
        assert_abs_diff_eq!(n.iter().sum::<f64>(), 1.0, epsilon = 1e-15);
        // Reference digits are truncated, not rounded.
        for (a, b) in n.iter().zip([0.6669, 0.2223, 0.0741, 0.0247, 0.0082, 0.0027, 0.0009]) {
            assert!(*a >= b && *a < b + 1e-4, "{a} vs {b}");
        }
    }

    #[test]
    fn thermal_spectrum_nu2_d7() {
        let rows = spectrum_report(&ThermalSpec::new(2.0, dim(7)).unwrap()).unwrap();
        let printed = [0.6667, 0.2219, 0.0751, 0.0229, 0.0105, 0.0017, 0.0010];
        for (r, p) in rows.iter().zip(printed) {
            assert_abs_diff_eq!(r.lambda, p, epsilon = 5e-4);
        }
        let worst = rows.iter().map(|r| r.deviation.abs()).fold(0.0, f64::max);
        assert!(worst < 0.01);
    }

    #[test]
    fn high_temperature_is_nearly_uniform() {
        let rows = spectrum_report(&ThermalSpec::new(1e4, dim(5)).unwrap()).unwrap();
        assert!(rows.iter().all(|r| (r.lambda - 0.2).abs() < 0.01));
    }

    #[test]
    fn thermal_grid_symmetry() {
        let s = thermal_state(&ThermalSpec::new(2.0, dim(7)).unwrap()).unwrap();
        for n in -3..=3 {
            for k in -3..=3 {
                assert_abs_diff_eq!(s.grid.at(n, -k), s.grid.at(n, k), epsilon = 1e-15);
                assert_abs_diff_eq!(s.grid.at(k, n), s.grid.at(n, k), epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn sign_alternation_counting() {
        assert_eq!(sign_alternations(&[1.0, 2.0, 3.0]), 0);
        assert_eq!(sign_alternations(&[1.0, -2.0, 3.0]), 2);
        assert_eq!(sign_alternations(&[1.0, 1e-12, -1e-11, 1.0]), 0);
        assert_eq!(sign_alternations(&[-1.0, 0.0, 1.0]), 1);
    }

    #[test]
    fn hermite_like_basis_properties() {
        for &d in &[5usize, 7, 9] {
            let b = hermite_like_basis(dim(d), DEFAULT_PROBE_NU).unwrap();
            assert!(b.gram_residual() <= 1e-10);
            assert!(b.labels_are_permutation, "d={d} labels={:?}", b.labels);
            assert_eq!(b.labels[0], 0);
            if d >= 7 {
                let overlap = b.vector(0).inner(&ground_gaussian(dim(d))).norm();
                assert!(overlap > 0.99);
            }
            let other = hermite_like_basis(dim(d), 4.0).unwrap();
            for n in 0..d {
                let o: f64 = b.vectors[n].iter().zip(&other.vectors[n]).map(|(x, y)| x * y).sum();
                assert!(o.abs() > 0.99, "d={d} n={n} overlap={o}");
            }
        }
    }

    #[test]
    fn oscillator_spectrum() {
        let b = hermite_like_basis(dim(7), DEFAULT_PROBE_NU).unwrap();
        let h = oscillator_hamiltonian(&b);
        let vals = eigh(&h).unwrap().values;
        for (n, v) in vals.iter().enumerate() {
            assert_abs_diff_eq!(*v, n as f64 + 0.5, epsilon = 1e-10);
        }
        assert_abs_diff_eq!(trace(&h).unwrap().re, 49.0 / 2.0, epsilon = 1e-10);
        let g = b.vector(0);
        let hg = h.apply(&g).unwrap();
        for (a, x) in hg.iter().zip(g.iter()) {
            assert!((a - x * 0.5).norm() < 1e-10);
        }
    }

    #[test]
    fn thermal_states_commute_at_d3() {
        assert!(commutation_study(2.0, 3.0, dim(3)).unwrap() <= 1e-12);
        assert_eq!(commutation_study(2.0, 2.0, dim(7)).unwrap(), 0.0);
        let c7 = commutation_study(2.0, 3.0, dim(7)).unwrap();
        assert!(c7 < 1e-2);
    }
}
