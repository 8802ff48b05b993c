use alloc::string::String;
use alloc::vec::Vec;

use crate::basis::PsiIndex;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("point outside chord: t = {t} not in [0, {tau}]")]
    ChordRange { t: f64, tau: f64 },
    #[error("geometry error: {0}")]
    Geometry(String),
    #[error("quadrature construction failed: {0}")]
    Quadrature(String),
    #[error("grid resolution insufficient: {0}")]
    Resolution(String),
    #[error("normalization audit failed: relative spread {spread:e} exceeds {tol:e}")]
    Audit { spread: f64, tol: f64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parity mismatch: {0}")]
    Parity(String),
    #[error("data outside the range of the order-{order} transform at {} indices", indices.len())]
    OutOfRange { order: u32, indices: Vec<PsiIndex> },
    #[error("ill-conditioned inversion: {} singular values below threshold", indices.len())]
    IllConditioned { indices: Vec<(u32, u32)> },
    #[error("kernel singularity: {0}")]
    Singular(String),
    #[error("potential solver residual {residual:e} exceeds {tol:e}")]
    Solver { residual: f64, tol: f64 },
    #[error("basis cache covers degrees up to {n_max}, requested {requested}")]
    BasisRange { n_max: u32, requested: u32 },
}

pub type Result<T> = core::result::Result<T, Error>;
