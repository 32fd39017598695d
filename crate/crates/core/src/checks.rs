//! The invariant suite: every structural identity the library relies on,
//! evaluated numerically and reported as named pass/fail results.
//!
//! Random inputs come from a fixed-seed generator so that two runs produce
//! identical reports.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use crate::gaussian::CheckResult;

use crate::dynamics::{
    canonical_subspace, commutator_spectrum, gaussian_transform, parity_invariance_residual,
    restricted_commutation_defect, symplectic_image, symplectic_residual, DEFAULT_EPSILON,
};
use crate::error::Result;
use crate::gaussian::{purity_limit_deviation, covariance_checks, unit_determinant_check, unit_determinant_covariance};
use crate::lattice::{LatticeDim, Modes};
use crate::linalg::{frobenius_norm, trace, CMatrix, CVector};
use crate::operators::{coherent_state, dft_matrix, displaced_parity};
use crate::thermal::commutation_study;
use crate::theta::{fourier_identity_check, fourier_identity_check_2d, theta_2d_vector, CovMat2, Shift};
use crate::wigner::{
    marginals, reconstruct_density, wigner_g_tau_closed_form, wigner_of_density, wigner_of_pure,
    wigner_of_pure_two_mode,
};

pub const SEED: u64 = 0x5eed_d15c;

fn dims(ds: &[usize]) -> Vec<LatticeDim> {
    ds.iter().map(|&d| LatticeDim::new(d).expect("odd literal")).collect()
}

fn random_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// `G G† / tr(G G†)` for a matrix `G` with uniform entries.
pub fn random_density(n: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let g = CMatrix::from_fn(n, n, |_, _| random_complex(rng));
    let rho = &g * &g.dagger();
    let tr = trace(&rho).expect("square").re;
    rho.scale_real(1.0 / tr)
}

pub fn random_state(n: usize, rng: &mut ChaCha8Rng) -> CVector {
    CVector::from((0..n).map(|_| random_complex(rng)).collect::<Vec<_>>()).normalized()
}

/// Covariance matrices printed in the purity table.
pub fn purity_table_covariances() -> Vec<CovMat2> {
    vec![
        CovMat2::new(2.0, 0.0, 2.0).expect("valid"),
        CovMat2::new(1.0, 3f64.sqrt(), 6.0).expect("valid"),
        CovMat2::new(3.0, 2.0, 2.0).expect("valid"),
        CovMat2::new(7.0, -std::f64::consts::PI, 5.0).expect("valid"),
    ]
}

fn wigner_round_trip(rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst = 0.0f64;
    for dim in dims(&[3, 5, 7, 11]) {
        for _ in 0..3 {
            let rho = random_density(dim.d(), rng);
            let w = wigner_of_density(&rho, dim, Modes::One)?;
            let back = reconstruct_density(&w, dim)?;
            worst = worst.max(frobenius_norm(&(&back - &rho)));
            worst = worst.max((w.sum() - 1.0).abs());
            let purity = trace(&(&rho * &rho))?.re;
            worst = worst.max((dim.d() as f64 * w.sum_of_squares() - purity).abs());
        }
    }
    Ok(worst)
}

fn parity_orthogonality() -> Result<f64> {
    let mut worst = 0.0f64;
    for dim in dims(&[3, 5, 7]) {
        let d = dim.d() as f64;
        let mut all = Vec::new();
        for n in dim.labels() {
            for k in dim.labels() {
                all.push(((n, k), displaced_parity(dim, n, k)?));
            }
        }
        for (a, pa) in &all {
            worst = worst.max((trace(pa)? - 1.0).norm());
            for (b, pb) in &all {
                let t = trace(&(pa * pb))?;
                let target = if a == b { d } else { 0.0 };
                worst = worst.max((t - target).norm());
            }
        }
    }
    Ok(worst)
}

fn marginal_identities(rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst = 0.0f64;
    for dim in dims(&[3, 5, 9, 15]) {
        let psi = random_state(dim.d(), rng);
        let (pos, mom) = marginals(&wigner_of_pure(&psi, dim)?);
        let fpsi = dft_matrix(dim).apply(&psi)?;
        for i in 0..dim.d() {
            worst = worst.max((pos[i] - psi[i].norm_sqr()).abs());
            worst = worst.max((mom[i] - fpsi[i].norm_sqr()).abs());
        }
    }
    Ok(worst)
}

fn coherent_resolution() -> Result<f64> {
    let mut worst = 0.0f64;
    for dim in dims(&[3, 5, 7, 11]) {
        let d = dim.d();
        let mut acc = CMatrix::zeros(d, d);
        for n in dim.labels() {
            for k in dim.labels() {
                acc = &acc + &coherent_state(dim, n, k)?.projector();
            }
        }
        worst = worst.max(frobenius_norm(&(&acc.scale_real(1.0 / d as f64) - &CMatrix::identity(d))));
    }
    Ok(worst)
}

fn fourier_theta() -> Result<(f64, f64)> {
    let mut one = 0.0f64;
    for dim in dims(&[3, 5, 7, 11, 31]) {
        for kappa in [0.5, 1.0, 2.0, 3.7] {
            one = one.max(fourier_identity_check(kappa, dim)?);
        }
    }
    let mut two = 0.0f64;
    for dim in dims(&[3, 5, 7]) {
        for tau in [CovMat2::new(2.0, 1.0, 1.0)?, CovMat2::new(0.7, -0.2, 1.9)?] {
            two = two.max(fourier_identity_check_2d(&tau, dim)?);
        }
    }
    Ok((one, two))
}

fn unit_determinant_purity(rng: &mut ChaCha8Rng) -> Result<(f64, f64)> {
    let mut purity_dev = 0.0f64;
    let mut second = 0.0f64;
    for _ in 0..20 {
        let lambda = rng.gen_range(0.4..3.0);
        let theta = rng.gen_range(0.0..std::f64::consts::PI);
        let sigma = unit_determinant_covariance(lambda, theta)?;
        for dim in dims(&[3, 5, 7]) {
            let (p, l2) = unit_determinant_check(&sigma, dim)?;
            purity_dev = purity_dev.max((p - 1.0).abs());
            second = second.max(l2.abs());
        }
    }
    Ok((purity_dev, second))
}

fn symplecticity(rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let a = rng.gen_range(-2.0..2.0);
        let b = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        worst = worst.max(symplectic_residual(&symplectic_image(a, b)?));
    }
    Ok(worst)
}

fn two_mode_closed_form() -> Result<f64> {
    let dim = LatticeDim::new(3)?;
    let mut worst = 0.0f64;
    for tau in [CovMat2::new(2.0, 1.0, 1.0)?, CovMat2::new(1.0, 0.0, 1.0)?, CovMat2::new(0.8, -0.3, 1.4)?] {
        let closed = wigner_g_tau_closed_form(&tau, dim)?;
        let direct = wigner_of_pure_two_mode(&theta_2d_vector(&tau, dim, (Shift::None, Shift::None)), dim)?;
        let scale = direct.values().iter().fold(0.0f64, |m, x| m.max(x.abs()));
        worst = worst.max(closed.max_abs_diff(&direct) / scale);
    }
    Ok(worst)
}

fn canonical_structure() -> Result<(f64, f64)> {
    let dim = LatticeDim::new(11)?;
    let spec = commutator_spectrum(dim)?;
    let sub = canonical_subspace(&spec, DEFAULT_EPSILON)?;
    let defect = restricted_commutation_defect(dim, &sub)? / DEFAULT_EPSILON;
    let t = gaussian_transform(0.3, Complex64::new(0.1, 0.2), dim)?;
    Ok((defect, parity_invariance_residual(&t, dim)?))
}

/// Runs every suite.
pub fn run_invariant_suite() -> Result<Vec<CheckResult>> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut out = vec![
        CheckResult::at_most("wigner round trip, trace and purity", wigner_round_trip(&mut rng)?, 1e-12),
        CheckResult::at_most("displaced-parity orthogonality", parity_orthogonality()?, 1e-12),
        CheckResult::at_most("marginal identities", marginal_identities(&mut rng)?, 1e-12),
        CheckResult::at_most("coherent-state resolution of identity", coherent_resolution()?, 1e-12),
    ];
    let (f1, f2) = fourier_theta()?;
    out.push(CheckResult::at_most("fourier theta identity, one variable", f1, 1e-12));
    out.push(CheckResult::at_most("fourier theta identity, two variables", f2, 1e-12));
    for r in covariance_checks(&dims(&[3, 5, 7]), &purity_table_covariances())? {
        out.push(r);
    }
    let iso = CovMat2::diagonal(2.0, 2.0)?;
    let devs = [3, 5, 7, 9]
        .iter()
        .map(|&d| purity_limit_deviation(&iso, LatticeDim::new(d)?))
        .collect::<Result<Vec<f64>>>()?;
    let worst_step = devs.windows(2).map(|w| w[1] - w[0]).fold(f64::MIN, f64::max);
    out.push(CheckResult::at_most("purity limit sigma=2I, largest step d=3..9", worst_step, 0.0));
    out.push(CheckResult::at_most("purity limit sigma=2I at d=9", devs[3], 1e-4));
    let (p, l2) = unit_determinant_purity(&mut rng)?;
    out.push(CheckResult::at_most("unit-determinant purity", p, 1e-8));
    out.push(CheckResult::at_most("unit-determinant second eigenvalue", l2, 1e-8));
    out.push(CheckResult::at_most(
        "thermal commutation d=3",
        [(1.5, 2.0), (2.0, 3.0), (1.1, 10.0)]
            .iter()
            .map(|&(a, b)| commutation_study(a, b, LatticeDim::new(3).expect("odd")))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(0.0, f64::max),
        1e-12,
    ));
    out.push(CheckResult::at_most("symplecticity of S", symplecticity(&mut rng)?, 1e-12));
    out.push(CheckResult::at_most("two-mode closed form, relative", two_mode_closed_form()?, 1e-12));
    let (defect, parity) = canonical_structure()?;
    out.push(CheckResult::at_most("restricted commutation defect / epsilon", defect, 1.0));
    out.push(CheckResult::at_most("parity invariance of U", parity, 1e-10));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_is_deterministic_and_green() {
        let a = run_invariant_suite().unwrap();
        let failed: Vec<_> = a.iter().filter(|r| !r.passed).collect();
        assert!(failed.is_empty(), "{failed:#?}");
        let b = run_invariant_suite().unwrap();
        assert_eq!(a, b);
    }
}
