#![allow(dead_code)]

use std::f64::consts::PI;

use dtx_core::basis::{Basis, ZernikeSeries};
use dtx_core::geometry::FanBeamPoint;
use dtx_core::tensorfield::{IttForm, ModeField, PolyZZbar, TtCoeffs};
use dtx_core::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn rand_c(r: &mut ChaCha8Rng) -> Complex64 {
    c(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0))
}

pub fn rand_chord(r: &mut ChaCha8Rng) -> FanBeamPoint {
    FanBeamPoint::new(r.random_range(0.0..2.0 * PI), r.random_range(-1.5..1.5))
}

pub fn rand_disk_point(r: &mut ChaCha8Rng, r_max: f64) -> Complex64 {
    Complex64::from_polar(r_max * r.random_range(0.0f64..1.0).sqrt(), r.random_range(0.0..2.0 * PI))
}

/// Random polynomial with total degree at most `deg`.
pub fn rand_poly(r: &mut ChaCha8Rng, deg: u32) -> PolyZZbar {
    let mut p = PolyZZbar::zero();
    for a in 0..=deg {
        for b in 0..=(deg - a) {
            p.add_term(a, b, rand_c(r));
        }
    }
    p
}

/// Random order-`m` field with every admissible mode filled.
pub fn rand_field(r: &mut ChaCha8Rng, m: u32, deg: u32) -> ModeField {
    let modes = (0..=m).map(|i| (m as i32 - 2 * i as i32, rand_poly(r, deg))).collect::<Vec<_>>();
    ModeField::from_modes(m, modes).unwrap()
}

pub fn rand_tt(r: &mut ChaCha8Rng, order: u32, n_max: u32) -> TtCoeffs {
    let mut t = TtCoeffs::new(order);
    for n in 0..=n_max {
        t.plus.insert(n, rand_c(r));
        t.minus.insert(n, rand_c(r));
    }
    t
}

/// Random series on `Ẑ_{n,k}`, `n ≤ n_max`, `k_min ≤ k ≤ n`.
pub fn rand_series(r: &mut ChaCha8Rng, n_max: u32, k_min: u32) -> ZernikeSeries {
    let mut s = ZernikeSeries::new();
    for n in 0..=n_max {
        for k in k_min..=n {
            s.insert(n, k, rand_c(r));
        }
    }
    s
}

/// Random itt form of order `m` with all parts up to degree `n_max`.
pub fn rand_itt(r: &mut ChaCha8Rng, m: u32, n_max: u32, basis: &Basis) -> IttForm {
    let mut f = IttForm::new(m, basis.gamma());
    if m.is_multiple_of(2) {
        f.scalar = rand_series(r, n_max, 0);
        for j in 1..=m / 2 {
            f.tt.insert(j, rand_tt(r, 2 * j, n_max));
        }
    } else {
        f.w1 = rand_series(r, n_max, 1);
        for j in 0..=(m - 1) / 2 {
            f.tt.insert(j, rand_tt(r, 2 * j + 1, n_max));
        }
    }
    f
}
