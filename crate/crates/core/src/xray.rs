//! Forward transforms: chord quadrature of lifted mode fields, the spectral
//! forward on Zernike expansions, and projection of sampled sinograms onto
//! the fan-beam family.
//!
//! A mode `f e^{ikθ}` integrates to `e^{ikθ}` times the scalar integral of
//! `f`, because `θ` is constant along a chord. Only scalar chord integrals
//! are ever computed.

use crate::cmath;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::basis::{Basis, Parity, PsiIndex};
use crate::dataspace::SinoCoeffs;
use crate::geometry::{scatter_antipodal, FanBeamPoint};
use crate::quadrature::{chord_integrate, jacobi_rule, AlphaRule, BoundaryGrid, QuadRule};
use crate::specfun::lhat_all;
use crate::tensorfield::{ModeField, TtCoeffs};
use crate::{Error, Result};

/// Sampled sinogram on a [`BoundaryGrid`], row-major in `(β, α)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SinoGrid {
    pub grid: BoundaryGrid,
    pub values: Vec<Complex64>,
    pub parity: Option<Parity>,
}

impl SinoGrid {
    pub fn new(grid: BoundaryGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Resolution(format!("{} samples for a grid of {} nodes", values.len(), grid.len())));
        }
        Ok(Self { grid, values, parity: None })
    }

    pub fn zeros(grid: BoundaryGrid) -> Self {
        let n = grid.len();
        Self { grid, values: alloc::vec![Complex64::new(0.0, 0.0); n], parity: None }
    }

    pub fn gamma(&self) -> f64 {
        self.grid.gamma
    }

    pub fn norm(&self) -> f64 {
        self.grid.norm(&self.values)
    }

    pub fn inner(&self, other: &SinoGrid) -> Complex64 {
        self.grid.inner(&self.values, &other.values)
    }

    pub fn add(&self, other: &SinoGrid) -> Result<SinoGrid> {
        if self.grid != other.grid {
            return Err(Error::Resolution("sinograms live on different grids".into()));
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Ok(SinoGrid { grid: self.grid.clone(), values, parity: None })
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// Chord rule exact for mode polynomials of total degree `degree`.
pub fn chord_rule_for(degree: u32, gamma: f64) -> Result<QuadRule> {
    jacobi_rule(degree as usize + 4, gamma)
}

/// `I d^γ F` on one chord; `rule` fixes `γ` (use `γ = 0` for the unweighted
/// transform).
pub fn forward_chord(f: &ModeField, p: FanBeamPoint, rule: &QuadRule) -> Result<Complex64> {
    let theta = p.theta();
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, poly) in f.modes() {
        let v = chord_integrate(p, rule, |q| poly.eval(q.z))?;
        acc += v * cmath::polar(1.0, k as f64 * theta);
    }
    Ok(acc)
}

/// `I d^γ F` at every node of `grid`, with the chord weight from `rule`.
pub fn forward_sino_with(f: &ModeField, grid: &BoundaryGrid, rule: &QuadRule) -> Result<SinoGrid> {
    let values = grid.points().map(|p| forward_chord(f, p, rule)).collect::<Result<Vec<_>>>()?;
    Ok(SinoGrid { grid: grid.clone(), values, parity: Some(Parity::of_order(f.order())) })
}

/// `I d^γ F` on `grid` with `γ = grid.gamma` and an exact chord rule.
pub fn forward_sino(f: &ModeField, grid: &BoundaryGrid) -> Result<SinoGrid> {
    let rule = chord_rule_for(f.max_degree(), grid.gamma)?;
    forward_sino_with(f, grid, &rule)
}

/// Largest deviation of `I d^γ F ∘ S_A` from `±I d^γ F` over `grid`, the sign
/// being `(−1)^m`.
pub fn scattering_defect(f: &ModeField, grid: &BoundaryGrid, rule: &QuadRule) -> Result<f64> {
    let sign = if f.order().is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut worst: f64 = 0.0;
    for p in grid.points() {
        let a = forward_chord(f, p, rule)?;
        let b = forward_chord(f, scatter_antipodal(p), rule)?;
        worst = worst.max((b - sign * a).norm());
    }
    Ok(worst)
}

/// Index receiving `Ẑ_{n,k'} e^{ikθ}` under the forward map.
pub fn shifted_index(n: u32, k_prime: u32, mode: i32) -> PsiIndex {
    let kp = k_prime as i32;
    if mode.rem_euclid(2) == 0 {
        PsiIndex::plus(n, kp - mode / 2)
    } else {
        PsiIndex::minus(n, kp - (mode - 1) / 2)
    }
}

/// Exact forward of a polynomial field: every mode is expanded on `Ẑ_{n,k'}`
/// and sent to `σ_{n,k'} ψ̂` at the shifted index.
pub fn forward_spectral_field(f: &ModeField, basis: &Basis) -> Result<SinoCoeffs> {
    let mut out = SinoCoeffs::new(basis.gamma());
    for (k, poly) in f.modes() {
        for ((n, kp), c) in basis.analyze(poly)?.iter() {
            out.add(shifted_index(n, kp, k), c * basis.sigma(n, kp));
        }
    }
    Ok(out)
}

/// Forward of a tt tensor given on `Ẑ_{n,0} dz^m` and `Ẑ_{n,n} dz̄^m`.
pub fn forward_spectral(t: &TtCoeffs, basis: &Basis) -> Result<SinoCoeffs> {
    let m = t.order;
    if m == 0 {
        return Err(Error::Precondition("tt tensors have order at least 1".into()));
    }
    let mut out = SinoCoeffs::new(basis.gamma());
    for (&n, &c) in &t.plus {
        out.add(shifted_index(n, 0, m as i32), c * basis.sigma(n, 0));
    }
    for (&n, &c) in &t.minus {
        out.add(shifted_index(n, n, -(m as i32)), c * basis.sigma(n, n));
    }
    Ok(out)
}

/// Per-grid tables for evaluating `ψ̂` quickly.
struct PsiTables {
    /// `amp[j][n] = μ_j^{2γ+1} L̂_n(sin α_j) / (2π √c_γ)`.
    amp: Vec<Vec<f64>>,
}

impl PsiTables {
    fn new(grid: &BoundaryGrid, basis: &Basis, n_max: u32) -> Self {
        let g = basis.gamma();
        let s = 1.0 / (2.0 * PI * libm::sqrt(basis.norm_sq()));
        let amp = grid
            .alphas
            .iter()
            .map(|&a| {
                let w = libm::pow(libm::cos(a), 2.0 * g + 1.0) * s;
                lhat_all(n_max, g, libm::sin(a)).into_iter().map(|v| v * w).collect()
            })
            .collect();
        Self { amp }
    }
}

fn required_nodes(indices: &[PsiIndex]) -> (usize, usize) {
    let n = indices.iter().map(|i| i.n).max().unwrap_or(0) as usize;
    let q = indices.iter().map(|i| i.frequency().unsigned_abs()).max().unwrap_or(0) as usize;
    ((4 * n + 8).max(2 * q + 1), n)
}

/// Smallest Gegenbauer grid on which [`sino_project`] accepts `indices`.
pub fn grid_for_indices(gamma: f64, indices: &[PsiIndex]) -> Result<BoundaryGrid> {
    let (m_beta, n) = required_nodes(indices);
    BoundaryGrid::new(gamma, m_beta, n + 4, AlphaRule::GegenbauerSin)
}

fn check_resolution(grid: &BoundaryGrid, indices: &[PsiIndex]) -> Result<()> {
    let (need_beta, n) = required_nodes(indices);
    if grid.m_beta() < need_beta {
        return Err(Error::Resolution(format!("{} β nodes, need at least {need_beta} for degree {n}", grid.m_beta())));
    }
    if grid.alpha_rule == AlphaRule::GegenbauerSin && grid.n_alpha() < n + 1 {
        return Err(Error::Resolution(format!("{} α nodes, need at least {} for degree {n}", grid.n_alpha(), n + 1)));
    }
    Ok(())
}

/// `⟨S, ψ̂_{idx}⟩` for every requested index.
pub fn sino_project(s: &SinoGrid, indices: &[PsiIndex], basis: &Basis) -> Result<SinoCoeffs> {
    check_resolution(&s.grid, indices)?;
    let n_max = indices.iter().map(|i| i.n).max().unwrap_or(0);
    let tables = PsiTables::new(&s.grid, basis, n_max);
    let grid = &s.grid;
    let na = grid.n_alpha();
    // F_j(q) = Σ_i S_ij e^{−iqθ_ij}
    let mut fourier: BTreeMap<i64, Vec<Complex64>> = BTreeMap::new();
    for idx in indices {
        let q = idx.frequency();
        fourier.entry(q).or_insert_with(|| {
            let mut row = alloc::vec![Complex64::new(0.0, 0.0); na];
            for (flat, v) in s.values.iter().enumerate() {
                let p = grid.point(flat);
                row[flat % na] += v * cmath::polar(1.0, -(q as f64) * p.theta());
            }
            row
        });
    }
    let mut out = SinoCoeffs::new(basis.gamma());
    for idx in indices {
        let row = &fourier[&idx.frequency()];
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, v) in row.iter().enumerate() {
            acc += v * (grid.alpha_weights[j] * tables.amp[j][idx.n as usize]);
        }
        out.set(*idx, acc * grid.beta_weight);
    }
    Ok(out)
}

/// `Σ u_idx ψ̂_idx` sampled on `grid`.
pub fn synthesize(u: &SinoCoeffs, grid: &BoundaryGrid, basis: &Basis) -> SinoGrid {
    let tables = PsiTables::new(grid, basis, u.max_degree());
    let na = grid.n_alpha();
    let values = grid
        .points()
        .enumerate()
        .map(|(flat, p)| {
            let theta = p.theta();
            u.iter()
                .map(|(idx, c)| {
                    c * tables.amp[flat % na][idx.n as usize] * cmath::polar(1.0, idx.frequency() as f64 * theta)
                })
                .sum()
        })
        .collect();
    SinoGrid { grid: grid.clone(), values, parity: u.parity() }
}
