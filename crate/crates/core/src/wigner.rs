//! Discrete Wigner transform, its inverse, marginals and the closed forms for
//! the pure Gaussians `𝔤_κ` and `𝔤_τ`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::{LatticeDim, Modes, WignerGrid};
use crate::linalg::{CMatrix, CVector, ZERO};
use crate::theta::{theta_1d, theta_2d, CovMat2, Shift, Theta1DSpec, Theta2DSpec};

/// Largest tolerated imaginary part of a Wigner value before it is dropped.
pub const IMAGINARY_TOL: f64 = 1e-10;
const HERMITIAN_TOL: f64 = 1e-10;

/// `e^{−4πi e/d}` for integer `e`, reduced first.
fn quarter_phase(e: i64, d: usize) -> Complex64 {
    let r = (2 * e).rem_euclid(d as i64);
    Complex64::from_polar(1.0, -2.0 * PI * r as f64 / d as f64)
}

fn expected_size(dim: LatticeDim, modes: Modes) -> usize {
    dim.d().pow(modes.count() as u32)
}

fn check_density(rho: &CMatrix, dim: LatticeDim, modes: Modes) -> Result<()> {
    let n = expected_size(dim, modes);
    if rho.rows() != n || rho.cols() != n {
        return Err(Error::ShapeMismatch {
            expected: format!("{n}x{n}"),
            found: format!("{}x{}", rho.rows(), rho.cols()),
        });
    }
    let residual = rho.hermitian_residual();
    if residual > HERMITIAN_TOL {
        return Err(Error::NotHermitian { residual });
    }
    Ok(())
}

fn finish(dim: LatticeDim, modes: Modes, raw: Vec<Complex64>) -> Result<WignerGrid> {
    let residue = raw.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    if residue > IMAGINARY_TOL {
        return Err(Error::ImaginaryResidue { residue });
    }
    WignerGrid::from_values(dim, modes, raw.into_iter().map(|z| z.re).collect())
}

/// `𝔚(n,k) = (1/d) tr(ρ Π(n,k))`, evaluated as
/// `(1/d) Σ_m e^{−4πi km/d} ρ[n+m, n−m]` (and its two-mode analogue with `1/d²`).
pub fn wigner_of_density(rho: &CMatrix, dim: LatticeDim, modes: Modes) -> Result<WignerGrid> {
    check_density(rho, dim, modes)?;
    let d = dim.d();
    let labels: Vec<i64> = dim.labels().collect();
    let raw = match modes {
        Modes::One => {
            let mut raw = Vec::with_capacity(d * d);
            for &n in &labels {
                let diag: Vec<Complex64> = labels
                    .iter()
                    .map(|&m| rho[(dim.index(n + m), dim.index(n - m))])
                    .collect();
                for &k in &labels {
                    let acc: Complex64 = labels
                        .iter()
                        .zip(&diag)
                        .map(|(&m, &r)| quarter_phase(k * m, d) * r)
                        .sum();
                    raw.push(acc / d as f64);
                }
            }
            raw
        }
        Modes::Two => {
            let flat = |a: i64, b: i64| dim.index(a) * d + dim.index(b);
            let norm = 1.0 / (d * d) as f64;
            let mut raw = Vec::with_capacity(d.pow(4));
            let mut diag = vec![ZERO; d * d];
            for &n1 in &labels {
                for &n2 in &labels {
                    for (i1, &m1) in labels.iter().enumerate() {
                        for (i2, &m2) in labels.iter().enumerate() {
                            diag[i1 * d + i2] = rho[(flat(n1 + m1, n2 + m2), flat(n1 - m1, n2 - m2))];
                        }
                    }
                    for &k1 in &labels {
                        // Partial sums over m2 for each m1 are reused across k2.
                        let ph1: Vec<Complex64> = labels.iter().map(|&m1| quarter_phase(k1 * m1, d)).collect();
                        for &k2 in &labels {
                            let mut acc = ZERO;
                            for (i1, p1) in ph1.iter().enumerate() {
                                let mut inner = ZERO;
                                for (i2, &m2) in labels.iter().enumerate() {
                                    inner += quarter_phase(k2 * m2, d) * diag[i1 * d + i2];
                                }
                                acc += p1 * inner;
                            }
                            raw.push(acc * norm);
                        }
                    }
                }
            }
            raw
        }
    };
    finish(dim, modes, raw)
}

/// `𝔚_ψ(n,k) = (1/d) Σ_m e^{−4πi km/d} ψ(n+m) ψ̄(n−m)`.
///
/// The vector is used as given; it is not renormalised.
pub fn wigner_of_pure(psi: &CVector, dim: LatticeDim) -> Result<WignerGrid> {
    let d = dim.d();
    if psi.len() != d {
        return Err(Error::ShapeMismatch {
            expected: format!("vector of length {d}"),
            found: format!("{}", psi.len()),
        });
    }
    let labels: Vec<i64> = dim.labels().collect();
    let mut raw = Vec::with_capacity(d * d);
    for &n in &labels {
        let prod: Vec<Complex64> = labels
            .iter()
            .map(|&m| psi[dim.index(n + m)] * psi[dim.index(n - m)].conj())
            .collect();
        for &k in &labels {
            let acc: Complex64 = labels
                .iter()
                .zip(&prod)
                .map(|(&m, &p)| quarter_phase(k * m, d) * p)
                .sum();
            raw.push(acc / d as f64);
        }
    }
    finish(dim, Modes::One, raw)
}

/// Two-mode pure-state Wigner function; `psi` is indexed with `n1` major.
pub fn wigner_of_pure_two_mode(psi: &CVector, dim: LatticeDim) -> Result<WignerGrid> {
    let d = dim.d();
    if psi.len() != d * d {
        return Err(Error::ShapeMismatch {
            expected: format!("vector of length {}", d * d),
            found: format!("{}", psi.len()),
        });
    }
    let rho = psi.projector();
    wigner_of_density(&rho, dim, Modes::Two)
}

/// `ϱ = Σ_{n,k} 𝔚(n,k) Π(n,k)`.
///
/// Only `Π(n,k)[m, j]` with `2n ≡ m + j` is nonzero, so each matrix element
/// is a single sum over `k`.
pub fn reconstruct_density(grid: &WignerGrid, dim: LatticeDim) -> Result<CMatrix> {
    if grid.dim() != dim {
        return Err(Error::ShapeMismatch {
            expected: format!("grid with d = {}", dim.d()),
            found: format!("d = {}", grid.dim().d()),
        });
    }
    let d = dim.d();
    let labels: Vec<i64> = dim.labels().collect();
    // Π(n,k)[m, 2n−m] = e^{−4πi k(n−m)/d}
    let entry = |k: i64, n: i64, m: i64| quarter_phase(k * (n - m), d);
    match grid.modes() {
        Modes::One => Ok(CMatrix::from_fn(d, d, |r, c| {
            let (m, j) = (dim.label(r), dim.label(c));
            let n = dim.half(m + j);
            labels.iter().map(|&k| entry(k, n, m) * grid.at(n, k)).sum()
        })),
        Modes::Two => Ok(CMatrix::from_fn(d * d, d * d, |r, c| {
            let (m1, m2) = (dim.label(r / d), dim.label(r % d));
            let (j1, j2) = (dim.label(c / d), dim.label(c % d));
            let n1 = dim.half(m1 + j1);
            let n2 = dim.half(m2 + j2);
            let mut acc = ZERO;
            for &k1 in &labels {
                let p1 = entry(k1, n1, m1);
                for &k2 in &labels {
                    acc += p1 * entry(k2, n2, m2) * grid.at4([n1, n2, k1, k2]);
                }
            }
            acc
        })),
    }
}

/// Position and momentum distributions: sums over the momentum and position
/// axes respectively. Two-mode marginals are flattened with the first mode major.
pub fn marginals(grid: &WignerGrid) -> (Vec<f64>, Vec<f64>) {
    let d = grid.dim().d();
    let half = d.pow(grid.modes().count() as u32);
    let mut pos = vec![0.0; half];
    let mut mom = vec![0.0; half];
    for (flat, &w) in grid.values().iter().enumerate() {
        pos[flat / half] += w;
        mom[flat % half] += w;
    }
    (pos, mom)
}

/// Four-term closed form of `𝔚_{𝔤_κ}` for the unnormalised `𝔤_κ`.
pub fn wigner_g_kappa_closed_form(kappa: f64, dim: LatticeDim) -> Result<WignerGrid> {
    let g = |k: f64, shift: Shift| Theta1DSpec::new(k, dim, shift);
    let (a, ap) = (g(2.0 * kappa, Shift::None)?, g(2.0 * kappa, Shift::Half)?);
    let (b, bp) = (g(2.0 / kappa, Shift::None)?, g(2.0 / kappa, Shift::Half)?);
    let pre = 1.0 / (2.0 * kappa * dim.d() as f64).sqrt();
    Ok(WignerGrid::single_from_fn(dim, |n, k| {
        let (gn, gpn) = (theta_1d(&a, n), theta_1d(&ap, n));
        let (gk, gpk) = (theta_1d(&b, k), theta_1d(&bp, k));
        pre * (gn * (gk + gpk) + gpn * (gk - gpk))
    }))
}

/// Sixteen-term closed form of `𝔚_{𝔤_τ}` for the unnormalised `𝔤_τ`.
pub fn wigner_g_tau_closed_form(tau: &CovMat2, dim: LatticeDim) -> Result<WignerGrid> {
    let two_tau = tau.scaled(2.0)?;
    let two_inv = tau.inverse()?.scaled(2.0)?;
    const SHIFTS: [(Shift, Shift); 4] = [
        (Shift::None, Shift::None),
        (Shift::Half, Shift::None),
        (Shift::None, Shift::Half),
        (Shift::Half, Shift::Half),
    ];
    // Sign of the momentum factor with position shift i and momentum shift j.
    const SIGNS: [[f64; 4]; 4] = [
        [1.0, 1.0, 1.0, 1.0],
        [1.0, -1.0, 1.0, -1.0],
        [1.0, 1.0, -1.0, -1.0],
        [1.0, -1.0, -1.0, 1.0],
    ];
    let table = |t: CovMat2| -> Vec<Vec<f64>> {
        SHIFTS
            .iter()
            .map(|&shift| {
                let spec = Theta2DSpec { tau: t, dim, shift };
                dim.labels()
                    .flat_map(|a| dim.labels().map(move |b| (a, b)))
                    .map(|(a, b)| theta_2d(&spec, a, b))
                    .collect()
            })
            .collect()
    };
    let pos = table(two_tau);
    let mom = table(two_inv);
    let d = dim.d();
    let pre = 1.0 / (2.0 * d as f64 * tau.det().sqrt());
    Ok(WignerGrid::two_from_fn(dim, |p| {
        let ni = dim.index(p[0]) * d + dim.index(p[1]);
        let ki = dim.index(p[2]) * d + dim.index(p[3]);
        let mut acc = 0.0;
        for i in 0..4 {
            let mut bracket = 0.0;
            for j in 0..4 {
                bracket += SIGNS[i][j] * mom[j][ki];
            }
            acc += pos[i][ni] * bracket;
        }
        pre * acc
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{frobenius_norm, trace};
    use crate::operators::{displaced_parity, dft_matrix, displacement};
    use crate::theta::{theta_2d_vector, theta_vector};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dim(d: usize) -> LatticeDim {
        LatticeDim::new(d).unwrap()
    }

    pub(crate) fn random_density(d: usize, rng: &mut ChaCha8Rng) -> CMatrix {
        let g = CMatrix::from_fn(d, d, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let rho = &g * &g.dagger();
        let tr = trace(&rho).unwrap().re;
        rho.scale_real(1.0 / tr)
    }

    /// Trace-form oracle `(1/d) tr(ρ Π(n,k))`.
    fn trace_form(rho: &CMatrix, dm: LatticeDim) -> Vec<f64> {
        let mut out = Vec::new();
        for n in dm.labels() {
            for k in dm.labels() {
                let t = trace(&(rho * &displaced_parity(dm, n, k).unwrap())).unwrap();
                assert!(t.im.abs() < 1e-12);
                out.push(t.re / dm.d() as f64);
            }
        }
        out
    }

    #[test]
    fn sum_form_matches_trace_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &d in &[3usize, 5, 7] {
            let rho = random_density(d, &mut rng);
            let w = wigner_of_density(&rho, dim(d), Modes::One).unwrap();
            for (a, b) in w.values().iter().zip(trace_form(&rho, dim(d))) {
                assert!((a - b).abs() <= 1e-14);
            }
        }
    }

    #[test]
    fn maximally_mixed_state() {
        for &d in &[3usize, 5] {
            let rho = CMatrix::identity(d).scale_real(1.0 / d as f64);
            let w = wigner_of_density(&rho, dim(d), Modes::One).unwrap();
            assert!(w.values().iter().all(|x| (x - 1.0 / (d * d) as f64).abs() < 1e-15));
            let back = reconstruct_density(&w, dim(d)).unwrap();
            assert!(frobenius_norm(&(&back - &rho)) <= 1e-14);
            let (pos, mom) = marginals(&w);
            assert!(pos.iter().chain(&mom).all(|x| (x - 1.0 / d as f64).abs() < 1e-15));
        }
    }

    #[test]
    fn delta_grid_reconstructs_parity() {
        let dm = dim(5);
        let mut values = vec![0.0; 25];
        values[2 * 5 + 2] = 1.0;
        let g = WignerGrid::from_values(dm, Modes::One, values).unwrap();
        let rho = reconstruct_density(&g, dm).unwrap();
        assert!(frobenius_norm(&(&rho - &displaced_parity(dm, 0, 0).unwrap())) <= 1e-15);
    }

    #[test]
    fn position_eigenstate_marginal() {
        let dm = dim(3);
        let delta = crate::lattice::delta_basis(0, dm).unwrap();
        let w = wigner_of_density(&delta.projector(), dm, Modes::One).unwrap();
        let row: f64 = dm.labels().map(|k| w.at(0, k)).sum();
        assert!((row - 1.0).abs() < 1e-15);
        let (pos, _) = marginals(&w);
        assert!(pos[0].abs() < 1e-15 && pos[2].abs() < 1e-15);
    }

    #[test]
    fn round_trip_trace_and_purity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for &d in &[3usize, 5, 7, 11] {
            let rho = random_density(d, &mut rng);
            let w = wigner_of_density(&rho, dim(d), Modes::One).unwrap();
            let back = reconstruct_density(&w, dim(d)).unwrap();
            assert!(frobenius_norm(&(&back - &rho)) <= 1e-12);
            assert!((w.sum() - 1.0).abs() <= 1e-12);
            let purity = trace(&(&rho * &rho)).unwrap().re;
            assert!((d as f64 * w.sum_of_squares() - purity).abs() <= 1e-12);
        }
    }

    #[test]
    fn two_mode_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for &d in &[3usize, 5] {
            let rho = random_density(d * d, &mut rng);
            let w = wigner_of_density(&rho, dim(d), Modes::Two).unwrap();
            let back = reconstruct_density(&w, dim(d)).unwrap();
            assert!(frobenius_norm(&(&back - &rho)) <= 1e-12);
            assert!((w.sum() - 1.0).abs() <= 1e-12);
            let purity = trace(&(&rho * &rho)).unwrap().re;
            assert!(((d * d) as f64 * w.sum_of_squares() - purity).abs() <= 1e-12);
        }
    }

    #[test]
    fn pure_state_forms_agree_and_marginals_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for &d in &[3usize, 7, 9] {
            let dm = dim(d);
            let psi = CVector::from(
                (0..d)
                    .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                    .collect::<Vec<_>>(),
            )
            .normalized();
            let direct = wigner_of_pure(&psi, dm).unwrap();
            let via_rho = wigner_of_density(&psi.projector(), dm, Modes::One).unwrap();
            assert!(direct.max_abs_diff(&via_rho) <= 1e-12);
            let (pos, mom) = marginals(&direct);
            let fpsi = dft_matrix(dm).apply(&psi).unwrap();
            for i in 0..d {
                assert!((pos[i] - psi[i].norm_sqr()).abs() <= 1e-12);
                assert!((mom[i] - fpsi[i].norm_sqr()).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn ground_gaussian_symmetries() {
        let dm = dim(9);
        let g = theta_vector(1.0, dm, Shift::None).unwrap().normalized();
        let w = wigner_of_pure(&g, dm).unwrap();
        for n in dm.labels() {
            for k in dm.labels() {
                assert!((w.at(n, k) - w.at(k, n)).abs() <= 1e-12);
                assert!((w.at(n, k) - w.at(n, -k)).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn displacement_and_fourier_covariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let dm = dim(7);
        let rho = random_density(7, &mut rng);
        let w = wigner_of_density(&rho, dm, Modes::One).unwrap();
        let (n0, k0) = (2, -3);
        let moved = rho.conjugate_by(&displacement(dm, n0, k0).unwrap()).unwrap();
        let wm = wigner_of_density(&moved, dm, Modes::One).unwrap();
        let rotated = rho.conjugate_by(&dft_matrix(dm)).unwrap();
        let wr = wigner_of_density(&rotated, dm, Modes::One).unwrap();
        for n in dm.labels() {
            for k in dm.labels() {
                assert!((wm.at(n, k) - w.at(n - n0, k - k0)).abs() <= 1e-12);
                // Fourier conjugation rotates phase space by a quarter turn.
                assert!((wr.at(n, k) - w.at(-k, n)).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn single_mode_closed_form() {
        for &(kappa, d) in &[(1.0, 7usize), (2.0, 5), (0.5, 9), (1.7, 3)] {
            let dm = dim(d);
            let closed = wigner_g_kappa_closed_form(kappa, dm).unwrap();
            let g = theta_vector(kappa, dm, Shift::None).unwrap();
            let direct = wigner_of_pure(&g, dm).unwrap();
            let scale = direct.values().iter().fold(0.0f64, |m, x| m.max(x.abs()));
            assert!(closed.max_abs_diff(&direct) <= 1e-12 * scale, "kappa={kappa} d={d}");
            for n in dm.labels() {
                for k in dm.labels() {
                    assert!((closed.at(n, k) - closed.at(n, -k)).abs() <= 1e-15 * scale);
                }
            }
        }
    }

    #[test]
    fn two_mode_closed_form() {
        for (tau, d) in [
            (CovMat2::new(2.0, 1.0, 1.0).unwrap(), 3usize),
            (CovMat2::new(2.0, 1.0, 1.0).unwrap(), 5),
            (CovMat2::new(1.0, 0.0, 1.0).unwrap(), 3),
            (CovMat2::new(0.8, -0.3, 1.4).unwrap(), 5),
        ] {
            let dm = dim(d);
            let closed = wigner_g_tau_closed_form(&tau, dm).unwrap();
            let g = theta_2d_vector(&tau, dm, (Shift::None, Shift::None));
            let direct = wigner_of_pure_two_mode(&g, dm).unwrap();
            let scale = direct.values().iter().fold(0.0f64, |m, x| m.max(x.abs()));
            assert!(closed.max_abs_diff(&direct) <= 1e-12 * scale, "{tau:?} d={d}");
            let (pos, _) = marginals(&direct);
            for (p, gi) in pos.iter().zip(g.iter()) {
                assert!((p - gi.norm_sqr()).abs() <= 1e-12 * scale * d as f64);
            }
        }
    }

    #[test]
    fn diagonal_tau_factorizes() {
        let dm = dim(3);
        let tau = CovMat2::new(1.0, 0.0, 1.0).unwrap();
        let two = wigner_g_tau_closed_form(&tau, dm).unwrap();
        let one = wigner_g_kappa_closed_form(1.0, dm).unwrap();
        for (p, w) in two.entries() {
            let prod = one.at(p[0], p[2]) * one.at(p[1], p[3]);
            assert!((w - prod).abs() <= 1e-14);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let dm = dim(3);
        let mut bad = CMatrix::identity(3);
        bad[(0, 1)] = Complex64::new(1.0, 0.0);
        assert!(matches!(wigner_of_density(&bad, dm, Modes::One), Err(Error::NotHermitian { .. })));
        assert!(wigner_of_density(&CMatrix::identity(5), dm, Modes::One).is_err());
        let g = WignerGrid::zeros(dim(5), Modes::One);
        assert!(reconstruct_density(&g, dm).is_err());
    }
}
