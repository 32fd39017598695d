//! Dense operators on ℓ²(ℤ_d): DFT, position and momentum, displacements,
//! displaced parities, ladder operators and discrete coherent states.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::LatticeDim;
use crate::linalg::{CMatrix, CVector, ZERO};
use crate::theta::{theta_vector, Shift};

/// Default largest single-mode dimension accepted by the two-mode builders.
pub const TWO_MODE_CAP: usize = 15;

fn phase(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

/// `𝔉[k, n] = d^{−1/2} e^{−2πi kn/d}` with `k, n ∈ [−s, s]`.
pub fn dft_matrix(dim: LatticeDim) -> CMatrix {
    let d = dim.d();
    let norm = (d as f64).powf(-0.5);
    CMatrix::from_fn(d, d, |r, c| {
        let (k, n) = (dim.label(r), dim.label(c));
        // Reduce kn first so the phase argument stays small.
        let kn = (k * n).rem_euclid(d as i64);
        phase(-2.0 * PI * kn as f64 / d as f64) * norm
    })
}

pub fn position_operator(dim: LatticeDim) -> CMatrix {
    let labels: Vec<f64> = dim.labels().map(|n| n as f64).collect();
    CMatrix::from_real_diagonal(&labels)
}

/// `𝔭̂ = 𝔉† 𝔮̂ 𝔉`
pub fn momentum_operator(dim: LatticeDim) -> CMatrix {
    let f = dft_matrix(dim);
    &(&f.dagger() * &position_operator(dim)) * &f
}

/// `Πψ(m) = ψ(−m)`
pub fn parity_matrix(dim: LatticeDim) -> CMatrix {
    let d = dim.d();
    let mut p = CMatrix::zeros(d, d);
    for m in dim.labels() {
        p[(dim.index(m), dim.index(-m))] = Complex64::new(1.0, 0.0);
    }
    p
}

/// `ψ(m) ↦ ψ(m − n)`
fn position_shift(dim: LatticeDim, n: i64) -> CMatrix {
    let d = dim.d();
    let mut x = CMatrix::zeros(d, d);
    for m in dim.labels() {
        x[(dim.index(m), dim.index(m - n))] = Complex64::new(1.0, 0.0);
    }
    x
}

/// `ψ(m) ↦ e^{2πi km/d} ψ(m)`
fn momentum_boost(dim: LatticeDim, k: i64) -> CMatrix {
    let d = dim.d() as f64;
    let diag: Vec<Complex64> = dim.labels().map(|m| phase(2.0 * PI * (k * m) as f64 / d)).collect();
    let n = dim.d();
    CMatrix::from_fn(n, n, |i, j| if i == j { diag[i] } else { ZERO })
}

/// `𝔇(n,k)ψ(m) = e^{−πi nk/d} e^{2πi km/d} ψ(m − n)`
pub fn displacement(dim: LatticeDim, n: i64, k: i64) -> Result<CMatrix> {
    dim.check(n)?;
    dim.check(k)?;
    let d = dim.d();
    let df = d as f64;
    let global = phase(-PI * (n * k) as f64 / df);
    let mut out = CMatrix::zeros(d, d);
    for m in dim.labels() {
        out[(dim.index(m), dim.index(m - n))] = global * phase(2.0 * PI * (k * m) as f64 / df);
    }
    Ok(out)
}

/// The two orderings of translation and boost, `(e^{−πink/d} Z X, e^{πink/d} X Z)`.
pub fn displacement_factorizations(dim: LatticeDim, n: i64, k: i64) -> Result<(CMatrix, CMatrix)> {
    dim.check(n)?;
    dim.check(k)?;
    let x = position_shift(dim, n);
    let z = momentum_boost(dim, k);
    let theta = PI * (n * k) as f64 / dim.d() as f64;
    let zx = (&z * &x).scale(phase(-theta));
    let xz = (&x * &z).scale(phase(theta));
    Ok((zx, xz))
}

/// `Π(n,k)ψ(m) = e^{−(2πi/d)·2k(n−m)} ψ(2n − m)`
pub fn displaced_parity(dim: LatticeDim, n: i64, k: i64) -> Result<CMatrix> {
    dim.check(n)?;
    dim.check(k)?;
    Ok(displaced_parity_unchecked(dim, n, k))
}

/// As [`displaced_parity`], accepting any integers (the operator is d-periodic in both).
pub fn displaced_parity_unchecked(dim: LatticeDim, n: i64, k: i64) -> CMatrix {
    let d = dim.d();
    let di = d as i64;
    let mut out = CMatrix::zeros(d, d);
    for m in dim.labels() {
        let e = (2 * k * (n - m)).rem_euclid(di);
        out[(dim.index(m), dim.index(2 * n - m))] = phase(-2.0 * PI * e as f64 / d as f64);
    }
    out
}

/// `(𝔞̂, 𝔞̂†)` with `𝔞̂ = √(π/d)(𝔮̂ + i𝔭̂)`.
pub fn ladder_operators(dim: LatticeDim) -> (CMatrix, CMatrix) {
    OperatorSet::new(dim).ladder()
}

/// Normalised κ = 1 discrete Gaussian `g₁`.
pub fn ground_gaussian(dim: LatticeDim) -> CVector {
    theta_vector(1.0, dim, Shift::None)
        .expect("kappa = 1 is valid")
        .normalized()
}

/// `|n,k⟩ = 𝔇(n,k) g₁`
pub fn coherent_state(dim: LatticeDim, n: i64, k: i64) -> Result<CVector> {
    displacement(dim, n, k)?.apply(&ground_gaussian(dim))
}

/// Kronecker product with the first factor as the major index.
pub fn tensor_product(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    for m in [a, b] {
        if !m.is_square() {
            return Err(Error::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
    }
    Ok(a.kron(b))
}

/// Rejects two-mode work above `cap` (the full operator is `d² × d²`).
pub fn check_two_mode_dim(dim: LatticeDim, cap: usize) -> Result<()> {
    if dim.d() > cap {
        return Err(Error::DimensionCap { d: dim.d(), cap });
    }
    Ok(())
}

/// `Π(n1,k1) ⊗ Π(n2,k2)` for the point `[n1, n2, k1, k2]`.
pub fn two_mode_displaced_parity(dim: LatticeDim, p: [i64; 4], cap: usize) -> Result<CMatrix> {
    check_two_mode_dim(dim, cap)?;
    let a = displaced_parity(dim, p[0], p[2])?;
    let b = displaced_parity(dim, p[1], p[3])?;
    tensor_product(&a, &b)
}

/// `𝔇(n1,k1) ⊗ 𝔇(n2,k2)` for the point `[n1, n2, k1, k2]`.
pub fn two_mode_displacement(dim: LatticeDim, p: [i64; 4], cap: usize) -> Result<CMatrix> {
    check_two_mode_dim(dim, cap)?;
    let a = displacement(dim, p[0], p[2])?;
    let b = displacement(dim, p[1], p[3])?;
    tensor_product(&a, &b)
}

/// Cached `𝔉`, `𝔮̂`, `𝔭̂` for one dimension.
#[derive(Clone, Debug)]
pub struct OperatorSet {
    dim: LatticeDim,
    dft: CMatrix,
    q: CMatrix,
    p: CMatrix,
}

impl OperatorSet {
    pub fn new(dim: LatticeDim) -> Self {
        let dft = dft_matrix(dim);
        let q = position_operator(dim);
        let p = &(&dft.dagger() * &q) * &dft;
        Self { dim, dft, q, p }
    }

    pub fn dim(&self) -> LatticeDim {
        self.dim
    }

    pub fn dft(&self) -> &CMatrix {
        &self.dft
    }

    pub fn position(&self) -> &CMatrix {
        &self.q
    }

    pub fn momentum(&self) -> &CMatrix {
        &self.p
    }

    pub fn ladder(&self) -> (CMatrix, CMatrix) {
        let c = (PI / self.dim.d() as f64).sqrt();
        let i = Complex64::new(0.0, 1.0);
        let a = (&self.q + &self.p.scale(i)).scale_real(c);
        let ad = a.dagger();
        (a, ad)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{eigh, frobenius_norm, trace};
    use approx::assert_abs_diff_eq;

    fn dim(d: usize) -> LatticeDim {
        LatticeDim::new(d).unwrap()
    }

    fn dist(a: &CMatrix, b: &CMatrix) -> f64 {
        frobenius_norm(&(a - b))
    }

    #[test]
    fn dft_is_unitary_and_squares_to_parity() {
        for &d in &[3usize, 5, 7, 11, 31] {
            let f = dft_matrix(dim(d));
            assert!(dist(&(&f.dagger() * &f), &CMatrix::identity(d)) <= 1e-12);
            assert!(dist(&(&f * &f), &parity_matrix(dim(d))) <= 1e-12);
        }
        let f = dft_matrix(dim(3));
        for c in 0..3 {
            assert_abs_diff_eq!(f[(1, c)].re, 1.0 / 3f64.sqrt(), epsilon = 1e-15);
            assert_eq!(f[(1, c)].im, 0.0);
        }
    }

    #[test]
    fn position_and_momentum_spectra() {
        for &d in &[3usize, 5, 9] {
            let ops = OperatorSet::new(dim(d));
            assert!(ops.momentum().hermitian_residual() <= 1e-12);
            let expect: Vec<f64> = dim(d).labels().map(|n| n as f64).collect();
            for op in [ops.position(), ops.momentum()] {
                let vals = eigh(op).unwrap().values;
                for (v, e) in vals.iter().zip(&expect) {
                    assert_abs_diff_eq!(v, e, epsilon = 1e-10);
                }
            }
            let par = parity_matrix(dim(d));
            let lhs = &par * ops.position();
            let rhs = (ops.position() * &par).scale_real(-1.0);
            assert!(dist(&lhs, &rhs) <= 1e-12);
        }
    }

    #[test]
    fn displacement_properties() {
        for &d in &[3usize, 5, 7] {
            let dm = dim(d);
            assert!(dist(&displacement(dm, 0, 0).unwrap(), &CMatrix::identity(d)) == 0.0);
            let f = dft_matrix(dm);
            for n in dm.labels() {
                for k in dm.labels() {
                    let dnk = displacement(dm, n, k).unwrap();
                    assert!(dist(&(&dnk * &dnk.dagger()), &CMatrix::identity(d)) <= 1e-12);
                    let rotated = &(&f.dagger() * &dnk) * &f;
                    assert!(dist(&rotated, &displacement(dm, -k, n).unwrap()) <= 1e-12);
                    let (zx, xz) = displacement_factorizations(dm, n, k).unwrap();
                    assert!(dist(&zx, &dnk) <= 1e-12);
                    assert!(dist(&xz, &dnk) <= 1e-12);
                }
            }
        }
        assert!(displacement(dim(5), 3, 0).is_err());
        assert!(displaced_parity(dim(5), 0, -3).is_err());
    }

    #[test]
    fn displaced_parity_algebra() {
        for &d in &[3usize, 5, 7] {
            let dm = dim(d);
            assert!(dist(&displaced_parity(dm, 0, 0).unwrap(), &parity_matrix(dm)) == 0.0);
            let all: Vec<((i64, i64), CMatrix)> = dm
                .labels()
                .flat_map(|n| dm.labels().map(move |k| (n, k)))
                .map(|(n, k)| ((n, k), displaced_parity(dm, n, k).unwrap()))
                .collect();
            for ((n, k), p) in &all {
                assert!(p.hermitian_residual() <= 1e-14);
                assert!(dist(&(p * p), &CMatrix::identity(d)) <= 1e-12);
                let tr = trace(p).unwrap();
                assert_abs_diff_eq!(tr.re, 1.0, epsilon = 1e-12);
                assert_abs_diff_eq!(tr.im, 0.0, epsilon = 1e-12);
                // 𝔇Π𝔇† form of the displaced parity.
                let dnk = displacement(dm, *n, *k).unwrap();
                let conj = parity_matrix(dm).conjugate_by(&dnk).unwrap();
                assert!(dist(&conj, p) <= 1e-12);
            }
            for ((n, k), p) in &all {
                for ((m, l), q) in &all {
                    let t = trace(&(p * q)).unwrap();
                    let expect = if (n, k) == (m, l) { d as f64 } else { 0.0 };
                    assert_abs_diff_eq!(t.re, expect, epsilon = 1e-11);
                    assert_abs_diff_eq!(t.im, 0.0, epsilon = 1e-11);
                }
            }
        }
    }

    #[test]
    fn weyl_covariance_of_parity_points() {
        for &d in &[3usize, 5, 7] {
            let dm = dim(d);
            for n0 in dm.labels() {
                for k0 in dm.labels() {
                    let dis = displacement(dm, n0, k0).unwrap();
                    for n in dm.labels() {
                        for k in dm.labels() {
                            let lhs = displaced_parity(dm, n, k).unwrap().conjugate_by(&dis).unwrap();
                            let rhs = displaced_parity(dm, dm.rep(n + n0), dm.rep(k + k0)).unwrap();
                            assert!(lhs.as_slice().iter().zip(rhs.as_slice()).all(|(a, b)| (a - b).norm() <= 1e-12));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn ladder_operator_identities() {
        for &d in &[5usize, 11] {
            let ops = OperatorSet::new(dim(d));
            let (a, ad) = ops.ladder();
            let sum = &a + &ad;
            let expect = ops.position().scale_real(2.0 * (PI / d as f64).sqrt());
            assert!(dist(&sum, &expect) <= 1e-12);
            let par = parity_matrix(dim(d));
            assert!(dist(&(&par * &a), &(&a * &par).scale_real(-1.0)) <= 1e-12);
        }
    }

    #[test]
    fn coherent_states_resolve_identity() {
        for &d in &[3usize, 5, 7, 11] {
            let dm = dim(d);
            let mut acc = CMatrix::zeros(d, d);
            for n in dm.labels() {
                for k in dm.labels() {
                    let c = coherent_state(dm, n, k).unwrap();
                    assert_abs_diff_eq!(c.norm(), 1.0, epsilon = 1e-14);
                    acc = &acc + &c.projector();
                }
            }
            assert!(dist(&acc.scale_real(1.0 / d as f64), &CMatrix::identity(d)) <= 1e-12);
        }
        let c = coherent_state(dim(5), 0, 0).unwrap();
        assert_abs_diff_eq!(c.inner(&c).re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn tensor_products() {
        let a = OperatorSet::new(dim(3)).momentum().clone();
        let b = displacement(dim(3), 1, -1).unwrap();
        let ab = tensor_product(&a, &b).unwrap();
        let ta = trace(&a).unwrap();
        let tb = trace(&b).unwrap();
        assert!((trace(&ab).unwrap() - ta * tb).norm() <= 1e-12);
        assert!(dist(&tensor_product(&CMatrix::identity(3), &CMatrix::identity(3)).unwrap(), &CMatrix::identity(9)) == 0.0);
        assert!(tensor_product(&CMatrix::zeros(2, 3), &a).is_err());
        assert!(check_two_mode_dim(dim(17), TWO_MODE_CAP).is_err());
        assert!(check_two_mode_dim(dim(17), 17).is_ok());
        let p = two_mode_displaced_parity(dim(3), [1, 0, -1, 1], TWO_MODE_CAP).unwrap();
        assert!(dist(&(&p * &p), &CMatrix::identity(9)) <= 1e-12);
    }
}
