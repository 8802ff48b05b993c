use std::path::{Path, PathBuf};

use dtx_core::basis::{Basis, PsiIndex};
use dtx_core::dataspace::range_check;
use dtx_core::invert::{data_indices, recon_tt_kernel, to_itt, z_grid, IttOptions};
use dtx_core::quadrature::{AlphaRule, BoundaryGrid};
use dtx_core::xray::{forward_sino, forward_spectral_field, grid_for_indices, sino_project, SinoGrid};

use crate::io;
use crate::{CliError, Route, RunConfig, EXIT_OK, EXIT_OUT_OF_RANGE};

/// Projected coefficients at or below this fraction of `‖u‖` are written
/// as absent.
const NUMERICAL_ZERO: f64 = 1e-13;

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// Writes to `--out` when given, stdout otherwise.
fn emit(cfg: &RunConfig, text: &str) -> Result<(), CliError> {
    match &cfg.out {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn grid_for(cfg: &RunConfig, indices: &[PsiIndex]) -> Result<BoundaryGrid, CliError> {
    Ok(match cfg.quad_nodes {
        Some(n) => BoundaryGrid::new(cfg.gamma, 2 * n, n, AlphaRule::GegenbauerSin)?,
        None => grid_for_indices(cfg.gamma, indices)?,
    })
}

fn with_extension(base: &Path, ext: &str) -> PathBuf {
    base.with_extension(ext)
}

/// Forward transform of a tensor file: `<out>.csv` holds the samples,
/// `<out>.json` the projected coefficients.
pub fn sinogram(cfg: &RunConfig, input: &Path) -> Result<i32, CliError> {
    let f = io::tensor_from_json(&read(input)?)?;
    let m = f.order();
    let n = f.max_degree();
    let indices = data_indices(n, m);
    let grid = grid_for(cfg, &indices)?;
    let s = forward_sino(&f, &grid)?;
    let basis = Basis::new(cfg.gamma, n)?;
    let u = sino_project(&s, &indices, &basis)?;
    let u = u.pruned(NUMERICAL_ZERO * u.norm());
    let base = cfg.out.clone().unwrap_or_else(|| PathBuf::from("sinogram"));
    write(&with_extension(&base, "csv"), &io::sino_to_csv(&s))?;
    write(&with_extension(&base, "json"), &io::coeffs_to_json(&u))?;
    Ok(EXIT_OK)
}

pub fn rangecheck(cfg: &RunConfig, input: &Path) -> Result<i32, CliError> {
    let u = io::coeffs_from_json(&read(input)?, cfg.gamma)?;
    let report = range_check(&u, cfg.order, &cfg.tolerances());
    emit(cfg, &io::report_to_json(&report))?;
    if report.pass {
        return Ok(EXIT_OK);
    }
    let mut failed = Vec::new();
    if !report.a.pass {
        failed.push("(a)");
    }
    if report.b.iter().any(|d| !d.pass) {
        failed.push("(b)");
    }
    if !report.c.pass {
        failed.push("(c)");
    }
    eprintln!("out of range for order {}: condition {} failed", cfg.order, failed.join(", "));
    Ok(EXIT_OUT_OF_RANGE)
}

enum Data {
    Coeffs(dtx_core::dataspace::SinoCoeffs),
    Grid(SinoGrid),
}

fn read_data(cfg: &RunConfig, input: &Path) -> Result<Data, CliError> {
    let text = read(input)?;
    if input.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
        Ok(Data::Grid(io::sino_from_csv(&text, cfg.gamma)?))
    } else {
        Ok(Data::Coeffs(io::coeffs_from_json(&text, cfg.gamma)?))
    }
}

fn itt_options(cfg: &RunConfig) -> IttOptions {
    IttOptions { support_tol: cfg.tol, ..IttOptions::default() }
}

pub fn reconstruct(cfg: &RunConfig, input: &Path) -> Result<i32, CliError> {
    let m = cfg.order;
    let data = read_data(cfg, input)?;
    let (u, grid) = match data {
        Data::Coeffs(u) => (u, None),
        Data::Grid(s) => {
            let basis = Basis::new(s.gamma(), cfg.n_max)?;
            (sino_project(&s, &data_indices(cfg.n_max, m), &basis)?, Some(s))
        }
    };
    let gamma = u.gamma;
    let basis = Basis::new(gamma, u.max_degree().max(cfg.n_max))?;
    let itt = to_itt(&u, m, &basis, &itt_options(cfg))?;
    match cfg.route {
        Route::Svd => emit(cfg, &io::itt_to_json(&itt))?,
        Route::Kernel => {
            let s = grid.ok_or_else(|| CliError::Config("the kernel route needs sampled data (CSV input)".into()))?;
            let points = z_grid(cfg.kernel_radius, 6, 64)?;
            let vals = recon_tt_kernel(&s, m, &points, &basis).map_err(|e| match e {
                dtx_core::Error::Resolution(msg) => {
                    CliError::Config(format!("{msg}; resample with `sinogram --quad-nodes` or lower the kernel radius"))
                }
                e => e.into(),
            })?;
            let mut diff: f64 = 0.0;
            for v in &vals {
                if let Some(t) = itt.tt.get(&v.j) {
                    let a = t.holomorphic(&basis)?.eval(v.z);
                    let b = t.antiholomorphic(&basis)?.eval(v.z);
                    diff = diff.max((v.dz - a).norm()).max((v.dzbar - b).norm());
                } else {
                    diff = diff.max(v.dz.norm()).max(v.dzbar.norm());
                }
            }
            emit(cfg, &io::kernel_values_to_json(m, gamma, &vals, Some(diff)))?;
        }
    }
    Ok(EXIT_OK)
}

/// itt representative of a tensor file, via its exact spectral forward.
pub fn decompose(cfg: &RunConfig, input: &Path) -> Result<i32, CliError> {
    let f = io::tensor_from_json(&read(input)?)?;
    let basis = Basis::new(cfg.gamma, f.max_degree())?;
    let u = forward_spectral_field(&f, &basis)?;
    let itt = to_itt(&u, f.order(), &basis, &itt_options(cfg))?;
    emit(cfg, &io::itt_to_json(&itt))?;
    Ok(EXIT_OK)
}

pub fn svd_table(cfg: &RunConfig) -> Result<i32, CliError> {
    let basis = Basis::new(cfg.gamma, cfg.n_max)?;
    emit(cfg, &io::basis_to_json(&basis)?)?;
    Ok(EXIT_OK)
}
