//! Self-verification suite run by `dtx selftest`.

use std::f64::consts::PI;
use std::time::Instant;

use dtx_core::basis::{index_box, Basis, Parity, PsiIndex};
use dtx_core::dataspace::{block_of, range_check, Block, RangeTolerances};
use dtx_core::invert::{
    data_indices, kernel_grid, potential_chord_rule, recon_tt_kernel, solve_potential, to_itt, to_itt_grid, z_grid,
    IttOptions,
};
use dtx_core::quadrature::{jacobi_rule, AlphaRule, BoundaryGrid};
use dtx_core::specfun::WeightParam;
use dtx_core::tensorfield::{apply_x, poincare_ratio, IttForm, ModeField, PolyZZbar, TtCoeffs};
use dtx_core::xray::{forward_chord, forward_sino, forward_sino_with, grid_for_indices, sino_project};
use dtx_core::{Complex64, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::RunConfig;

/// Decomposition suites run only for `|γ| ≤` this.
pub const SAFETY_MARGIN: f64 = 0.99;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Debug, Clone)]
pub struct SuiteResult {
    pub suite: &'static str,
    pub gamma: f64,
    pub status: Status,
    pub detail: String,
}

struct Ctx {
    gamma: f64,
    n_max: u32,
    rng: ChaCha8Rng,
}

fn rand_c(r: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0))
}

fn rand_poly(r: &mut ChaCha8Rng, deg: u32) -> PolyZZbar {
    let mut p = PolyZZbar::zero();
    for a in 0..=deg {
        for b in 0..=(deg - a) {
            p.add_term(a, b, rand_c(r));
        }
    }
    p
}

fn rand_field(r: &mut ChaCha8Rng, m: u32, deg: u32) -> Result<ModeField> {
    ModeField::from_modes(m, (0..=m).map(|i| (m as i32 - 2 * i as i32, rand_poly(r, deg))).collect::<Vec<_>>())
}

fn rand_tt(r: &mut ChaCha8Rng, order: u32, n_max: u32) -> TtCoeffs {
    let mut t = TtCoeffs::new(order);
    for n in 0..=n_max {
        t.plus.insert(n, rand_c(r));
        t.minus.insert(n, rand_c(r));
    }
    t
}

fn rand_itt(r: &mut ChaCha8Rng, m: u32, n_max: u32, gamma: f64) -> IttForm {
    let mut f = IttForm::new(m, gamma);
    let k_min = m % 2;
    for n in 0..=n_max {
        for k in k_min..=n {
            let c = rand_c(r);
            if m.is_multiple_of(2) {
                f.scalar.insert(n, k, c);
            } else {
                f.w1.insert(n, k, c);
            }
        }
    }
    if m.is_multiple_of(2) {
        for j in 1..=m / 2 {
            f.tt.insert(j, rand_tt(r, 2 * j, n_max));
        }
    } else {
        for j in 0..=m / 2 {
            f.tt.insert(j, rand_tt(r, 2 * j + 1, n_max));
        }
    }
    f
}

fn check(pass: bool, detail: String) -> Result<(bool, String)> {
    Ok((pass, detail))
}

fn orthonormality(c: &mut Ctx) -> Result<(bool, String)> {
    let n = c.n_max;
    let basis = Basis::new(c.gamma, n)?;
    let grid = BoundaryGrid::new(c.gamma, 4 * n as usize + 16, n as usize + 4, AlphaRule::GegenbauerSin)?;
    let mut idx = Vec::new();
    for parity in [Parity::Plus, Parity::Minus] {
        idx.extend(index_box(n, parity, 2));
    }
    let samples: Vec<Vec<Complex64>> = idx.iter().map(|&i| grid.sample(|p| basis.psi_hat(i, p))).collect();
    let mut worst: f64 = 0.0;
    for (a, sa) in samples.iter().enumerate() {
        for (b, sb) in samples.iter().enumerate().skip(a) {
            let want = if a == b { 1.0 } else { 0.0 };
            worst = worst.max((grid.inner(sa, sb) - want).norm());
        }
    }
    check(worst < 1e-9, format!("Gram deviation {worst:.2e}, c_γ = {:.15}", basis.norm_sq()))
}

fn svd(c: &mut Ctx) -> Result<(bool, String)> {
    let n_max = c.n_max;
    let basis = Basis::new(c.gamma, n_max)?;
    let idx = index_box(n_max, Parity::Plus, 2);
    let grid = grid_for_indices(c.gamma, &idx)?;
    let (mut on, mut off): (f64, f64) = (0.0, 0.0);
    for n in 0..=n_max {
        for k in 0..=n {
            let u = sino_project(&forward_sino(&ModeField::scalar(basis.zhat(n, k)?), &grid)?, &idx, &basis)?;
            let target = PsiIndex::plus(n, k as i32);
            let s = basis.sigma(n, k);
            on = on.max((u.get(target) - s).norm() / s);
            off = off.max(u.iter().filter(|(i, _)| *i != target).map(|(_, v)| v.norm()).fold(0.0, f64::max));
        }
    }
    check(on < 1e-6 && off < 1e-9, format!("diagonal rel err {on:.2e}, off-support {off:.2e}"))
}

fn annihilation(c: &mut Ctx) -> Result<(bool, String)> {
    let grid = BoundaryGrid::for_degree(c.gamma, 4)?;
    let rule = jacobi_rule(12, 0.0)?;
    let mut worst: f64 = 0.0;
    for m in 1..=3 {
        let p = rand_field(&mut c.rng, m - 1, c.n_max.min(4))?;
        let s = forward_sino_with(&apply_x(&p.mul_d()), &grid, &rule)?;
        worst = worst.max(s.max_abs());
    }
    check(worst < 1e-9, format!("max |I d^γ(d^{{−γ}}d^s(d p))| {worst:.2e}"))
}

fn range_geometry(c: &mut Ctx) -> Result<(bool, String)> {
    let n_max = c.n_max;
    let basis = Basis::new(c.gamma, n_max)?;
    let grid = grid_for_indices(c.gamma, &data_indices(n_max, 4))?;
    let mut worst: f64 = 0.0;
    let mut pass = true;
    for m in 1..=4u32 {
        let t = rand_tt(&mut c.rng, m, n_max);
        let u = sino_project(&forward_sino(&t.to_field(&basis)?, &grid)?, &data_indices(n_max, m), &basis)?;
        let want = if m % 2 == 0 { Block::Pi2j(m / 2) } else { Block::Pi2j1(m / 2) };
        let outside: f64 = u.iter().filter(|(i, _)| block_of(*i) != want).map(|(_, v)| v.norm_sqr()).sum();
        worst = worst.max(outside.sqrt() / u.norm());
        pass &= range_check(&u, m, &RangeTolerances::default()).pass;
    }
    check(worst < 1e-9 && pass, format!("complementary-block energy {worst:.2e}"))
}

fn round_trip(c: &mut Ctx) -> Result<(bool, String)> {
    let n_max = c.n_max;
    let basis = Basis::new(c.gamma, n_max)?;
    let grid = grid_for_indices(c.gamma, &data_indices(n_max + 2, 4))?;
    let unweighted = jacobi_rule(16, 0.0)?;
    let opts = IttOptions::default();
    let (mut rt, mut gauge): (f64, f64) = (0.0, 0.0);
    for m in 1..=4u32 {
        let f = rand_itt(&mut c.rng, m, n_max, c.gamma);
        let s = forward_sino(&f.to_field(&basis)?, &grid)?;
        let back = to_itt_grid(&s, m, n_max, &basis, &opts)?;
        rt = rt.max(back.max_abs_diff(&f) / f.max_abs());
        let p = rand_field(&mut c.rng, m - 1, n_max.min(4))?;
        let k = forward_sino_with(&apply_x(&p.mul_d()), &grid, &unweighted)?;
        let back2 = to_itt_grid(&s.add(&k)?, m, n_max, &basis, &opts)?;
        gauge = gauge.max(back2.max_abs_diff(&back) / f.max_abs());
    }
    check(rt < 1e-7 && gauge < 1e-7, format!("coefficient rel err {rt:.2e}, gauge shift {gauge:.2e}"))
}

fn kernel_cross(c: &mut Ctx) -> Result<(bool, String)> {
    let n_max = c.n_max.min(4);
    let basis = Basis::new(c.gamma, n_max)?;
    let radius = 0.5;
    let grid = kernel_grid(c.gamma, radius)?;
    let points = z_grid(radius, 3, 8)?;
    let mut worst: f64 = 0.0;
    for m in 1..=3u32 {
        let f = rand_itt(&mut c.rng, m, n_max, c.gamma);
        let s = forward_sino(&f.to_field(&basis)?, &grid)?;
        let svd = to_itt(
            &sino_project(&s, &data_indices(n_max, m), &basis)?,
            m,
            &basis,
            &IttOptions { solve_potential: false, ..IttOptions::default() },
        )?;
        for v in recon_tt_kernel(&s, m, &points, &basis)? {
            let t = &svd.tt[&v.j];
            worst = worst
                .max((v.dz - t.holomorphic(&basis)?.eval(v.z)).norm())
                .max((v.dzbar - t.antiholomorphic(&basis)?.eval(v.z)).norm());
        }
    }
    check(worst < 1e-5, format!("kernel vs coefficient route {worst:.2e} on |z| ≤ {radius}"))
}

fn potential(c: &mut Ctx) -> Result<(bool, String)> {
    let g = c.gamma;
    let w1 = PolyZZbar::from_terms([
        ((1, 1), Complex64::new(0.0, g + 2.0)),
        ((0, 2), Complex64::new(0.0, g + 1.0)),
        ((0, 0), Complex64::new(0.0, -1.0)),
    ]);
    let s = solve_potential(&w1, g)?;
    let mut manuf: f64 = 0.0;
    for i in 0..=20 {
        let r = 0.99 * i as f64 / 20.0;
        let z = Complex64::from_polar(r, 0.4 + 2.0 * PI * i as f64 / 7.0);
        manuf = manuf.max((s.eval(z) - (1.0 - r * r).powf(g + 1.0) * z.re).norm());
    }
    let mut consist: f64 = 0.0;
    let n_max = c.n_max.max(1);
    let basis = Basis::new(g, n_max)?;
    let mut series = dtx_core::basis::ZernikeSeries::new();
    for n in 1..=n_max {
        for k in 1..=n {
            series.insert(n, k, rand_c(&mut c.rng));
        }
    }
    let w1 = basis.synthesize(&series)?;
    let h = solve_potential(&w1, g)?;
    let rule = potential_chord_rule(g)?;
    let direct = ModeField::from_modes(1, [(1, w1.clone())])?;
    let wrule = jacobi_rule(n_max as usize + 6, g)?;
    for i in 0..10 {
        let p = dtx_core::geometry::FanBeamPoint::new(0.6 * i as f64, -1.4 + 0.28 * i as f64);
        let a = h.forward_star_dh(p, &rule)?;
        let b = forward_chord(&direct, p, &wrule)?;
        consist = consist.max((a - b).norm());
    }
    check(manuf < 1e-6 && consist < 1e-6, format!("manufactured h {manuf:.2e}, I₁(⋆dh) vs I₁d^γ(w₁dz) {consist:.2e}"))
}

fn poincare(c: &mut Ctx) -> Result<(bool, String)> {
    let w = WeightParam::new(c.gamma)?;
    let bound = w.poincare_c0() / (1.0 - c.gamma);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let u = PolyZZbar::d() * rand_poly(&mut c.rng, 4);
        worst = worst.max(poincare_ratio(&u, c.gamma)?);
    }
    check(worst <= bound, format!("max ratio {worst:.4} ≤ C₀/(1−γ) = {bound:.4}"))
}

type Suite = (&'static str, bool, fn(&mut Ctx) -> Result<(bool, String)>);

const SUITES: [Suite; 8] = [
    ("orthonormality", false, orthonormality),
    ("svd", false, svd),
    ("annihilation", false, annihilation),
    ("range-geometry", false, range_geometry),
    ("round-trip", true, round_trip),
    ("kernel-cross", true, kernel_cross),
    ("potential", true, potential),
    ("poincare", true, poincare),
];

/// Runs every suite for each weight exponent; decomposition suites are
/// skipped outside the safety margin.
pub fn run(cfg: &RunConfig, gammas: &[f64]) -> Vec<SuiteResult> {
    let mut out = Vec::new();
    for &gamma in gammas {
        let mut ctx = Ctx { gamma, n_max: cfg.n_max, rng: ChaCha8Rng::seed_from_u64(cfg.seed) };
        for &(suite, decomposition, f) in &SUITES {
            if decomposition && gamma.abs() > SAFETY_MARGIN {
                out.push(SuiteResult {
                    suite,
                    gamma,
                    status: Status::Skip,
                    detail: format!("γ = {gamma} is out of (−1,1) safety margin |γ| ≤ {SAFETY_MARGIN}"),
                });
                continue;
            }
            let t = Instant::now();
            let (status, detail) = match f(&mut ctx) {
                Ok((true, d)) => (Status::Pass, d),
                Ok((false, d)) => (Status::Fail, d),
                Err(e) => (Status::Fail, format!("error: {e}")),
            };
            let detail = format!("{detail} [{:.2}s]", t.elapsed().as_secs_f64());
            out.push(SuiteResult { suite, gamma, status, detail });
        }
    }
    out
}

impl std::fmt::Display for SuiteResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        };
        write!(f, "{tag} {} γ={}: {}", self.suite, self.gamma, self.detail)
    }
}
