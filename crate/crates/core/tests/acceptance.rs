mod common;

use std::f64::consts::PI;
use std::time::Instant;

use common::*;
use dtx_core::basis::{index_box, sigma, Basis, Parity, PsiIndex};
use dtx_core::dataspace::{block_of, range_check, Block, RangeTolerances};
use dtx_core::invert::{
    data_indices, kernel_g, kernel_grid, kernel_scale, kernel_series, potential_chord_rule, recon_tt_kernel,
    solve_potential, to_itt, to_itt_grid, IttOptions,
};
use dtx_core::quadrature::{chord_integrate, disk_inner_exact, jacobi_rule, AlphaRule, BoundaryGrid};
use dtx_core::specfun::WeightParam;
use dtx_core::tensorfield::{apply_x, field_inner, holo_project, poincare_ratio, HoloSide, ModeField, PolyZZbar};
use dtx_core::xray::{forward_chord, forward_sino, forward_sino_with, sino_project};
use dtx_core::{Complex64, Result};
use rand::Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { pass, detail })
}

fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// `B(γ+1, γ+1)` straight from `Γ`.
fn beta_gg(g: f64) -> f64 {
    (2.0 * ln_gamma(g + 1.0) - ln_gamma(2.0 * g + 2.0)).exp()
}

/// `σ_{n,k}²` from the Gamma-function expression.
fn sigma_sq_oracle(n: u32, k: u32, g: f64) -> f64 {
    let (n, k) = (n as f64, k as f64);
    let ln_binom = ln_gamma(n + 1.0) - ln_gamma(k + 1.0) - ln_gamma(n - k + 1.0);
    ((2.0 * g + 2.0) * 2f64.ln() + PI.ln() + ln_binom + ln_gamma(n - k + g + 1.0) + ln_gamma(k + g + 1.0)
        - ln_gamma(n + 2.0 * g + 2.0))
    .exp()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn closed_form_weight() -> Result<Outcome> {
    let mut r = rng(1);
    let mut worst: f64 = 0.0;
    for &g in &[-0.9, -0.5, 0.0, 0.5, 0.9] {
        let rule = jacobi_rule(8, g)?;
        for _ in 0..40 {
            let p = rand_chord(&mut r);
            let got = chord_integrate(p, &rule, |_| c(1.0, 0.0))?;
            let want = (2.0 * p.mu()).powf(2.0 * g + 1.0) * beta_gg(g);
            worst = worst.max((got - want).norm() / want);
        }
    }
    outcome(worst < 1e-12, format!("max rel err {worst:.2e} (tol 1e-12)"))
}

fn orthonormality() -> Result<Outcome> {
    let mut gram: f64 = 0.0;
    let mut spread: f64 = 0.0;
    let mut audit = Vec::new();
    for &g in &[-0.5, 0.0, 0.7] {
        let basis = Basis::new(g, 6)?;
        let rep = dtx_core::basis::normalization_audit(g, 8)?;
        spread = spread.max(rep.spread);
        let want = PI / (2f64.powf(4.0 * g + 2.0) * (2.0 * ln_gamma(g + 1.0)).exp());
        audit.push(format!("c({g})={:.12}/{:.12}", rep.norm_sq, want));
        let grid = BoundaryGrid::new(g, 64, 16, AlphaRule::GegenbauerSin)?;
        let idx: Vec<PsiIndex> =
            (0..=6u32).flat_map(|n| (-3..=n as i32 + 3).map(move |k| PsiIndex::plus(n, k))).collect();
        let samples: Vec<Vec<_>> = idx.iter().map(|&i| grid.sample(|p| basis.psi_hat(i, p))).collect();
        for (a, sa) in samples.iter().enumerate() {
            for (b, sb) in samples.iter().enumerate() {
                let want = if a == b { 1.0 } else { 0.0 };
                gram = gram.max((grid.inner(sa, sb) - want).norm());
            }
        }
    }
    outcome(
        gram < 1e-9 && spread < 1e-10,
        format!("Gram dev {gram:.2e} (tol 1e-9), audit spread {spread:.2e} (tol 1e-10); {}", audit.join(" ")),
    )
}

fn svd_reproduction() -> Result<Outcome> {
    let n_max = 8;
    let (mut on, mut off, mut sig, mut ratio_spread): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
    for &g in &[-0.5, 0.0, 0.7] {
        let basis = Basis::new(g, n_max)?;
        let grid = BoundaryGrid::for_degree(g, n_max)?;
        let idx = index_box(n_max, Parity::Plus, 3);
        let mut ratios = Vec::new();
        for n in 0..=n_max {
            for k in 0..=n {
                let s = basis.sigma(n, k);
                sig = sig.max(rel(s * s, sigma_sq_oracle(n, k, g)));
                let f = ModeField::scalar(basis.zhat(n, k)?);
                let u = sino_project(&forward_sino(&f, &grid)?, &idx, &basis)?;
                let target = PsiIndex::plus(n, k as i32);
                on = on.max((u.get(target) - s).norm() / s);
                let rest: f64 = u.iter().filter(|(i, _)| *i != target).map(|(_, v)| v.norm_sqr()).sum();
                off = off.max(rest.sqrt());
                let z = basis.zernike(n, k)?;
                ratios.push(disk_inner_exact(z, z, g).re.sqrt() / s);
            }
        }
        let max = ratios.iter().copied().fold(f64::MIN, f64::max);
        let min = ratios.iter().copied().fold(f64::MAX, f64::min);
        ratio_spread = ratio_spread.max((max - min) / max);
    }
    outcome(
        on < 1e-6 && off < 1e-9 && ratio_spread < 1e-8 && sig < 1e-12,
        format!(
            "diag rel err {on:.2e} (tol 1e-6), off-support {off:.2e} (tol 1e-9), ‖Z‖/σ spread {ratio_spread:.2e} (tol 1e-8), σ vs Γ-formula {sig:.2e}"
        ),
    )
}

fn kernel_annihilation() -> Result<Outcome> {
    let mut r = rng(4);
    let mut worst: f64 = 0.0;
    let unweighted = jacobi_rule(16, 0.0)?;
    for &g in &[-0.5, 0.0, 0.5] {
        let grid = BoundaryGrid::for_degree(g, 6)?;
        for i in 0..20 {
            let order = i % 3;
            let p = rand_field(&mut r, order, 4);
            // d^γ · d^{−γ} d^s(d p) is integrated without weight
            let f = apply_x(&p.mul_d());
            let s = forward_sino_with(&f, &grid, &unweighted)?;
            worst = worst.max(s.max_abs() / p.modes().map(|(_, q)| q.max_abs_coeff()).fold(0.0, f64::max));
        }
    }
    outcome(worst < 1e-9, format!("max |I d^γ(kernel)| {worst:.2e} (tol 1e-9)"))
}

fn expected_block(m: u32, j: u32) -> Block {
    if m.is_multiple_of(2) {
        Block::Pi2j(j)
    } else {
        Block::Pi2j1(j)
    }
}

fn index_geometry() -> Result<Outcome> {
    let mut r = rng(5);
    let n_max = 6;
    let mut worst: f64 = 0.0;
    let mut checks = true;
    for &g in &[-0.5, 0.0, 0.5] {
        let basis = Basis::new(g, n_max)?;
        let grid = BoundaryGrid::for_degree(g, n_max + 2)?;
        for m in 1..=4u32 {
            let t = rand_tt(&mut r, m, n_max);
            let j = m / 2;
            let u = sino_project(&forward_sino(&t.to_field(&basis)?, &grid)?, &data_indices(n_max, m), &basis)?;
            let want = expected_block(m, if m % 2 == 0 { j } else { (m - 1) / 2 });
            let outside: f64 = u.iter().filter(|(i, _)| block_of(*i) != want).map(|(_, v)| v.norm_sqr()).sum();
            worst = worst.max(outside.sqrt() / u.norm());
            for n in 0..=n_max {
                let (lo, hi) = want.diagonal_indices(n).unwrap();
                checks &= u.get(lo).norm() > 0.0 && u.get(hi).norm() > 0.0;
                checks &= lo.k <= 0 && hi.k > n as i32;
            }
            checks &= range_check(&u, m, &RangeTolerances::default()).pass;
        }
    }
    outcome(
        worst < 1e-9 && checks,
        format!(
            "complementary-block energy {worst:.2e} (tol 1e-9), diagonals occupied and range check passes: {checks}"
        ),
    )
}

fn round_trip() -> Result<Outcome> {
    let mut r = rng(6);
    let n_max = 6;
    let (mut rt, mut gauge): (f64, f64) = (0.0, 0.0);
    let opts = IttOptions::default();
    for &g in &[-0.5, 0.0, 0.5] {
        let basis = Basis::new(g, n_max)?;
        let grid = BoundaryGrid::for_degree(g, n_max + 2)?;
        let unweighted = jacobi_rule(16, 0.0)?;
        for m in 1..=4u32 {
            let f = rand_itt(&mut r, m, n_max, &basis);
            let s = forward_sino(&f.to_field(&basis)?, &grid)?;
            let back = to_itt_grid(&s, m, n_max, &basis, &opts)?;
            rt = rt.max(back.max_abs_diff(&f) / f.max_abs());
            let p = rand_field(&mut r, m - 1, 4);
            let k = forward_sino_with(&apply_x(&p.mul_d()), &grid, &unweighted)?;
            let back2 = to_itt_grid(&s.add(&k)?, m, n_max, &basis, &opts)?;
            gauge = gauge.max(back2.max_abs_diff(&back) / f.max_abs());
        }
    }
    outcome(
        rt < 1e-7 && gauge < 1e-7,
        format!("round trip rel {rt:.2e} (tol 1e-7), gauge shift {gauge:.2e} (tol 1e-7)"),
    )
}

fn kernel_vs_svd() -> Result<Outcome> {
    let mut r = rng(7);
    let n_max = 4;
    let mut diff: f64 = 0.0;
    let mut ratio = Vec::new();
    for &g in &[-0.5, 0.0, 0.5] {
        let basis = Basis::new(g, n_max)?;
        let grid = kernel_grid(g, 0.8)?;
        let points: Vec<_> = (0..12).map(|_| rand_disk_point(&mut r, 0.8)).collect();
        for m in 1..=3u32 {
            let f = rand_itt(&mut r, m, n_max, &basis);
            let s = forward_sino(&f.to_field(&basis)?, &grid)?;
            let svd = to_itt(
                &sino_project(&s, &data_indices(n_max, m), &basis)?,
                m,
                &basis,
                &IttOptions { solve_potential: false, ..IttOptions::default() },
            )?;
            for v in recon_tt_kernel(&s, m, &points, &basis)? {
                let t = &svd.tt[&v.j];
                let a = t.holomorphic(&basis)?.eval(v.z);
                let b = t.antiholomorphic(&basis)?.eval(v.z);
                diff = diff.max((v.dz - a).norm()).max((v.dzbar - b).norm());
            }
        }
        ratio.push(format!("{:.6}", 1.0 / kernel_scale(&basis)));
    }
    let mut series: f64 = 0.0;
    for _ in 0..50 {
        let g = [-0.5, 0.0, 0.5][r.random_range(0..3)];
        let j = r.random_range(0..3u32);
        let p = rand_chord(&mut r);
        let z = rand_disk_point(&mut r, 0.5);
        let a = kernel_g(j, g, p, z)?;
        let b = kernel_series(j, g, p, z, 200);
        series = series.max((a - b).norm() / a.norm());
    }
    outcome(
        diff < 1e-5 && series < 1e-8,
        format!(
            "kernel vs svd {diff:.2e} (tol 1e-5), closed form vs series rel {series:.2e} (tol 1e-8); raw ⟨D,G⟩/svd ratio per γ∈{{-0.5,0,0.5}}: {}",
            ratio.join(", ")
        ),
    )
}

fn potential() -> Result<Outcome> {
    let mut r = rng(8);
    let (mut manuf, mut consist): (f64, f64) = (0.0, 0.0);
    for &g in &[-0.5, 0.0, 0.5] {
        let w1 = PolyZZbar::from_terms([((1, 1), c(0.0, g + 2.0)), ((0, 2), c(0.0, g + 1.0)), ((0, 0), c(0.0, -1.0))]);
        let s = solve_potential(&w1, g)?;
        for i in 0..=99 {
            let rad = 0.99 * i as f64 / 99.0;
            for k in 0..8 {
                let z = Complex64::from_polar(rad, 2.0 * PI * k as f64 / 8.0 + 0.1);
                let want = (1.0 - rad * rad).powf(g + 1.0) * z.re;
                manuf = manuf.max((s.eval(z) - want).norm());
            }
        }
        let basis = Basis::new(g, 5)?;
        let w1 = basis.synthesize(&rand_series(&mut r, 5, 1))?;
        let s = solve_potential(&w1, g)?;
        let rule = potential_chord_rule(g)?;
        let direct = ModeField::from_modes(1, [(1, w1.clone())])?;
        let wrule = jacobi_rule(12, g)?;
        for _ in 0..40 {
            let p = rand_chord(&mut r);
            let a = s.forward_star_dh(p, &rule)?;
            let b = forward_chord(&direct, p, &wrule)?;
            consist = consist.max((a - b).norm() / w1.max_abs_coeff());
        }
    }
    outcome(
        manuf < 1e-6 && consist < 1e-6,
        format!("manufactured h err {manuf:.2e} (tol 1e-6), I₁(⋆dh) vs I₁d^γ(w₁dz) {consist:.2e} (tol 1e-6)"),
    )
}

fn analysis_properties() -> Result<Outcome> {
    let mut r = rng(9);
    let mut poinc: f64 = 0.0;
    for &g in &[-0.5, 0.0, 0.5, 0.9] {
        let w = WeightParam::new(g)?;
        let bound = w.poincare_c0() / (1.0 - g);
        for _ in 0..50 {
            let u = PolyZZbar::d() * rand_poly(&mut r, 6);
            poinc = poinc.max(poincare_ratio(&u, g)? / bound);
        }
    }
    let mut orth: f64 = 0.0;
    for &g in &[-0.5, 0.0, 0.5] {
        for side in [HoloSide::KerDbar, HoloSide::KerD] {
            let p = rand_poly(&mut r, 6);
            let (a, b) = holo_project(&p, g, side);
            let scale = disk_inner_exact(&p, &p, g).re;
            orth = orth.max(disk_inner_exact(&a, &b, g).norm() / scale);
        }
    }
    let mut cont: f64 = 0.0;
    for i in 0..30 {
        let g = [-0.5, 0.0, 0.5][i % 3];
        let order = (i / 3 % 3) as u32;
        let f = rand_field(&mut r, order, 4);
        let grid = BoundaryGrid::for_degree(g, 8)?;
        let s = forward_sino(&f, &grid)?;
        let bound = 2f64.powf(g + 0.5) * beta_gg(g).sqrt() * field_inner(&f, &f, g).re.sqrt();
        cont = cont.max(s.norm() / bound);
    }
    outcome(
        poinc <= 1.0 && orth < 1e-13 && cont <= 1.0,
        format!("max Poincaré ratio/bound {poinc:.4}, ⟨proj,residual⟩ {orth:.2e}, max ‖Id^γu‖/bound {cont:.4}"),
    )
}

fn asymptotics() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for &g in &[-0.5, 0.0, 0.5] {
        let v: Vec<f64> = (50..=200u32).map(|n| sigma(n, 0, g).powi(2) * ((n + 1) as f64).powf(g + 1.0)).collect();
        let max = v.iter().copied().fold(f64::MIN, f64::max);
        let min = v.iter().copied().fold(f64::MAX, f64::min);
        worst = worst.max((max - min) / max);
    }
    outcome(worst < 0.2, format!("max relative variation {worst:.4} (tol 0.2)"))
}

type Criterion = (&'static str, fn() -> Result<Outcome>);

fn main() {
    let criteria: [Criterion; 10] = [
        ("closed-form total weight", closed_form_weight),
        ("basis orthonormality", orthonormality),
        ("SVD reproduction", svd_reproduction),
        ("kernel annihilation", kernel_annihilation),
        ("range index geometry", index_geometry),
        ("round-trip reconstruction", round_trip),
        ("cross-method kernel check", kernel_vs_svd),
        ("potential solve", potential),
        ("analysis properties", analysis_properties),
        ("asymptotics", asymptotics),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let (pass, detail) = match run() {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failed += 1;
        }
        let tag = if pass { "PASS" } else { "FAIL" };
        println!("{tag} {:>2} {name}: {detail} [{:.1}s]", i + 1, t.elapsed().as_secs_f64());
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
