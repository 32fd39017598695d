use num_complex::Complex64;

use dvgauss::checks::run_invariant_suite;
use dvgauss::dynamics::{commutator_spectrum, squeeze, transform_table, NormKind};
use dvgauss::gaussian::{synthesize, GaussianSpec};
use dvgauss::io::{grid_table, grid_to_json, NumberFormat, Table};
use dvgauss::thermal::{spectrum_report, ThermalSpec};
use dvgauss::theta::{theta_vector, CovMat2, CovMat4, Shift};
use dvgauss::wigner::wigner_of_pure;
use dvgauss::LatticeDim;

use crate::output::{emit, number_format, pretty, render_table, Failure, Format, EXIT_INVARIANT};
use crate::{Command, Common, SigmaArg};

enum Sigma {
    One(CovMat2),
    Two(CovMat4),
}

impl Sigma {
    fn parse(v: &[f64]) -> Result<Self, Failure> {
        match v.len() {
            3 => Ok(Sigma::One(CovMat2::new(v[0], v[1], v[2])?)),
            10 => Ok(Sigma::Two(CovMat4::from_upper(v)?)),
            n => Err(Failure::usage(format!("--sigma takes 3 or 10 entries, got {n}"))),
        }
    }

    fn det(&self) -> f64 {
        match self {
            Sigma::One(s) => s.det(),
            Sigma::Two(s) => s.det(),
        }
    }

    fn spec(&self, dim: LatticeDim, center: Option<&[f64]>) -> Result<GaussianSpec, Failure> {
        let wrong = |n: usize| Failure::usage(format!("--center takes {n} coordinates for this --sigma"));
        Ok(match (self, center) {
            (Sigma::One(s), None) => GaussianSpec::single(dim, *s),
            (Sigma::Two(s), None) => GaussianSpec::two_mode(dim, *s),
            (Sigma::One(s), Some(c)) => {
                let c: [f64; 2] = c.try_into().map_err(|_| wrong(2))?;
                GaussianSpec::single_centered(dim, *s, c)
            }
            (Sigma::Two(s), Some(c)) => {
                let c: [f64; 4] = c.try_into().map_err(|_| wrong(4))?;
                GaussianSpec::two_mode_centered(dim, *s, c)
            }
        })
    }
}

impl SigmaArg {
    fn parse(&self) -> Result<Sigma, Failure> {
        Sigma::parse(&self.sigma)
    }
}

fn lattice(d: usize) -> Result<LatticeDim, Failure> {
    Ok(LatticeDim::new(d)?)
}

fn finish(common: &Common, table: &Table) -> Result<u8, Failure> {
    emit(&common.out, &render_table(table, common.format)?)?;
    Ok(0)
}

fn purity_table(sigma: &Sigma, dims: &[usize], fmt: NumberFormat) -> Result<Table, Failure> {
    let limit = 1.0 / sigma.det().sqrt();
    let mut t = Table::new(&["d", "purity", "limit"]);
    for &d in dims {
        let state = synthesize(&sigma.spec(lattice(d)?, None)?)?;
        t.push(vec![d.to_string(), fmt.format(state.purity()), fmt.format(limit)]);
    }
    Ok(t)
}

fn parse_norms(s: &str) -> Result<Vec<NormKind>, Failure> {
    if s == "both" {
        return Ok(vec![NormKind::Frobenius, NormKind::Spectral]);
    }
    Ok(vec![s.parse::<NormKind>()?])
}

/// `(A, B)` from either `--squeeze s,theta` or `--A` / `--B re,im`.
fn transform_params(a: Option<f64>, b: Option<&[f64]>, sq: Option<&[f64]>) -> Result<(f64, Complex64), Failure> {
    if let Some(sq) = sq {
        let [s, theta] = sq else {
            return Err(Failure::usage("--squeeze takes s,theta"));
        };
        return Ok(squeeze(*s, *theta));
    }
    let b = match b {
        None => Complex64::new(0.0, 0.0),
        Some([re, im]) => Complex64::new(*re, *im),
        Some(_) => return Err(Failure::usage("--B takes re,im")),
    };
    Ok((a.unwrap_or(0.0), b))
}

pub fn run(cmd: Command) -> Result<u8, Failure> {
    match cmd {
        Command::PurityTable { sigma, dims, common } => {
            let t = purity_table(&sigma.parse()?, &dims, number_format(common.digits))?;
            finish(&common, &t)
        }
        Command::Spectrum { sigma, dim, common } => {
            let fmt = number_format(common.digits);
            let state = synthesize(&sigma.parse()?.spec(lattice(dim)?, None)?)?;
            let mut t = Table::new(&["index", "lambda"]);
            for (i, l) in state.spectrum()?.iter().enumerate() {
                t.push(vec![(i + 1).to_string(), fmt.format(*l)]);
            }
            finish(&common, &t)
        }
        Command::Thermal { nu, dim, common } => {
            let fmt = number_format(common.digits);
            let mut t = Table::new(&["n", "lambda_n", "N_n", "deviation"]);
            for r in spectrum_report(&ThermalSpec::new(nu, lattice(dim)?)?)? {
                t.push(vec![
                    r.n.to_string(),
                    fmt.format(r.lambda),
                    fmt.format(r.reference),
                    fmt.format(r.deviation),
                ]);
            }
            finish(&common, &t)
        }
        Command::Commutator { dim, common } => {
            let fmt = number_format(common.digits);
            let mut t = Table::new(&["j", "im_lambda"]);
            for (j, v) in commutator_spectrum(lattice(dim)?)?.values.iter().enumerate() {
                t.push(vec![(j + 1).to_string(), fmt.format(*v)]);
            }
            finish(&common, &t)
        }
        Command::Wigner {
            sigma,
            kappa,
            center,
            dim,
            common,
        } => {
            let fmt = number_format(common.digits);
            let dim = lattice(dim)?;
            let text = match (sigma, kappa) {
                (Some(s), _) => {
                    let state = synthesize(&Sigma::parse(&s)?.spec(dim, center.as_deref())?)?;
                    match common.format {
                        Format::Csv => grid_table(&state.grid, fmt).to_csv()?,
                        Format::Json => pretty(&state.to_json()),
                    }
                }
                (None, Some(k)) => {
                    let grid = wigner_of_pure(&theta_vector(k, dim, Shift::None)?.normalized(), dim)?;
                    match common.format {
                        Format::Csv => grid_table(&grid, fmt).to_csv()?,
                        Format::Json => pretty(&grid_to_json(&grid)),
                    }
                }
                (None, None) => return Err(Failure::usage("wigner needs --sigma or --kappa")),
            };
            emit(&common.out, &text)?;
            Ok(0)
        }
        Command::Transform {
            a,
            b,
            squeeze,
            sigma,
            dims,
            norm,
            common,
        } => {
            let fmt = number_format(common.digits);
            let (a, b) = transform_params(a, b.as_deref(), squeeze.as_deref())?;
            let Sigma::One(sigma) = sigma.parse()? else {
                return Err(Failure::usage("transform takes a single-mode --sigma"));
            };
            let dims = dims.into_iter().map(lattice).collect::<Result<Vec<_>, _>>()?;
            let mut t = Table::new(&["A_re", "B_re", "B_im", "d", "norm_kind", "deviation"]);
            for kind in parse_norms(&norm)? {
                for r in transform_table(a, b, &sigma, &dims, kind)? {
                    t.push(vec![
                        fmt.format(r.a),
                        fmt.format(r.b.re),
                        fmt.format(r.b.im),
                        r.d.to_string(),
                        r.norm.name().to_string(),
                        fmt.format(r.deviation),
                    ]);
                }
            }
            finish(&common, &t)
        }
        Command::Check { common } => {
            let fmt = number_format(common.digits);
            let results = run_invariant_suite()?;
            let mut t = Table::new(&["name", "value", "threshold", "passed"]);
            for r in &results {
                t.push(vec![
                    r.name.clone(),
                    fmt.format(r.value),
                    fmt.format(r.threshold),
                    r.passed.to_string(),
                ]);
            }
            finish(&common, &t)?;
            let failed = results.iter().filter(|r| !r.passed).count();
            if failed > 0 {
                eprintln!("dvgauss: {failed} invariant check(s) failed");
                return Ok(EXIT_INVARIANT);
            }
            Ok(0)
        }
    }
}
