//! dtx-v1 file formats.
//!
//! JSON floats are written in shortest round-trip form; CSV floats as
//! `{:.16e}` (17 significant digits). Both are byte-stable for fixed input.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use dtx_core::basis::{Basis, Parity, PsiIndex, ZernikeSeries};
use dtx_core::dataspace::{RangeReport, SinoCoeffs};
use dtx_core::invert::{PotentialSolution, TtPointValue};
use dtx_core::quadrature::{AlphaRule, BoundaryGrid};
use dtx_core::tensorfield::{IttForm, ModeField, PolyZZbar, TtCoeffs};
use dtx_core::xray::SinoGrid;
use dtx_core::Complex64;
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const FORMAT: &str = "dtx-v1";

fn format_tag() -> String {
    FORMAT.to_string()
}

fn check_format(tag: &Option<String>) -> Result<(), CliError> {
    match tag.as_deref() {
        None | Some(FORMAT) => Ok(()),
        Some(other) => Err(CliError::Parse(format!("unsupported format tag {other:?}, expected {FORMAT:?}"))),
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn from_json<'a, T: Deserialize<'a>>(text: &'a str, what: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse(format!("{what}: {e}")))
}

fn terms_of(p: &PolyZZbar) -> Vec<(u32, u32, f64, f64)> {
    p.terms().map(|(&(a, b), c)| (a, b, c.re, c.im)).collect()
}

fn poly_of(terms: &[(u32, u32, f64, f64)]) -> PolyZZbar {
    let mut p = PolyZZbar::zero();
    for &(a, b, re, im) in terms {
        p.add_term(a, b, Complex64::new(re, im));
    }
    p
}

// ---- tensors ----

#[derive(Serialize, Deserialize)]
struct ModeJson {
    k: i32,
    terms: Vec<(u32, u32, f64, f64)>,
}

#[derive(Serialize, Deserialize)]
struct TensorJson {
    #[serde(default)]
    format: Option<String>,
    m: u32,
    modes: Vec<ModeJson>,
}

pub fn tensor_to_json(f: &ModeField) -> String {
    let modes = f.modes().map(|(k, p)| ModeJson { k, terms: terms_of(p) }).collect();
    to_json(&TensorJson { format: Some(format_tag()), m: f.order(), modes })
}

pub fn tensor_from_json(text: &str) -> Result<ModeField, CliError> {
    let t: TensorJson = from_json(text, "tensor")?;
    check_format(&t.format)?;
    let mut f = ModeField::zero(t.m);
    for mode in &t.modes {
        if mode.k.unsigned_abs() > t.m {
            return Err(CliError::Parse(format!("mode {} exceeds order {}", mode.k, t.m)));
        }
        f.add_mode(mode.k, &poly_of(&mode.terms))?;
    }
    Ok(f)
}

// ---- sinogram samples ----

pub fn sino_to_csv(s: &SinoGrid) -> String {
    let mut out = String::from("beta,alpha,re,im\n");
    for (p, v) in s.grid.points().zip(&s.values) {
        writeln!(out, "{:.16e},{:.16e},{:.16e},{:.16e}", p.beta, p.alpha, v.re, v.im).unwrap();
    }
    out
}

/// Reads a sinogram CSV; the grid layout is recovered from the node
/// coordinates and must match a [`BoundaryGrid`] for `gamma`.
pub fn sino_from_csv(text: &str, gamma: f64) -> Result<SinoGrid, CliError> {
    let mut lines = text.lines();
    let header = lines.next().unwrap_or_default().trim();
    if header != "beta,alpha,re,im" {
        return Err(CliError::Parse(format!("unexpected CSV header {header:?}")));
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<f64> = line
            .split(',')
            .map(|c| c.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| CliError::Parse(format!("CSV row {}: {e}", i + 2)))?;
        if cols.len() != 4 {
            return Err(CliError::Parse(format!("CSV row {} has {} columns", i + 2, cols.len())));
        }
        rows.push(cols);
    }
    let n_alpha = rows.iter().take_while(|r| r[0] == rows[0][0]).count();
    if rows.is_empty() || rows.len() % n_alpha != 0 {
        return Err(CliError::Parse("CSV rows do not form a (β, α) product grid".into()));
    }
    let m_beta = rows.len() / n_alpha;
    for rule in [AlphaRule::GegenbauerSin, AlphaRule::LegendreAlpha] {
        let grid = BoundaryGrid::new(gamma, m_beta, n_alpha, rule)?;
        let fits =
            grid.points().zip(&rows).all(|(p, r)| (p.beta - r[0]).abs() < 1e-12 && (p.alpha - r[1]).abs() < 1e-12);
        if fits {
            let values = rows.iter().map(|r| Complex64::new(r[2], r[3])).collect();
            return Ok(SinoGrid::new(grid, values)?);
        }
    }
    Err(CliError::Parse(format!("CSV nodes match no {m_beta}×{n_alpha} boundary grid at γ = {gamma}")))
}

// ---- coefficients ----

#[derive(Serialize, Deserialize)]
struct CoeffJson {
    n: u32,
    k: i32,
    parity: String,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct CoeffsFile {
    #[serde(default)]
    format: Option<String>,
    gamma: f64,
    coeffs: Vec<CoeffJson>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CoeffsInput {
    Wrapped(CoeffsFile),
    Bare(Vec<CoeffJson>),
}

fn index_json(i: PsiIndex) -> (u32, i32, String) {
    (i.n, i.k, i.parity.symbol().to_string())
}

pub fn coeffs_to_json(u: &SinoCoeffs) -> String {
    let coeffs = u
        .iter()
        .map(|(i, c)| {
            let (n, k, parity) = index_json(i);
            CoeffJson { n, k, parity, re: c.re, im: c.im }
        })
        .collect();
    to_json(&CoeffsFile { format: Some(format_tag()), gamma: u.gamma, coeffs })
}

/// Reads coefficients; a bare array takes `gamma` from the caller.
pub fn coeffs_from_json(text: &str, gamma: f64) -> Result<SinoCoeffs, CliError> {
    let (gamma, list) = match from_json::<CoeffsInput>(text, "coefficients")? {
        CoeffsInput::Wrapped(f) => {
            check_format(&f.format)?;
            (f.gamma, f.coeffs)
        }
        CoeffsInput::Bare(v) => (gamma, v),
    };
    let mut u = SinoCoeffs::new(gamma);
    for c in list {
        let parity = Parity::parse(&c.parity).ok_or_else(|| CliError::Parse(format!("bad parity {:?}", c.parity)))?;
        u.add(PsiIndex::new(c.n, c.k, parity), Complex64::new(c.re, c.im));
    }
    Ok(u)
}

// ---- range report ----

#[derive(Serialize)]
struct IndexJson {
    n: u32,
    k: i32,
    parity: String,
}

#[derive(Serialize)]
struct ReportA {
    pass: bool,
    residual: f64,
    offending: Vec<IndexJson>,
}

#[derive(Serialize)]
struct ReportB {
    j: u32,
    lower: f64,
    upper: f64,
    norm: f64,
    pass: bool,
}

#[derive(Serialize)]
struct ReportC {
    sum: f64,
    pass: bool,
}

#[derive(Serialize)]
struct Conditions {
    a: ReportA,
    b: Vec<ReportB>,
    c: ReportC,
}

#[derive(Serialize)]
struct ReportJson {
    format: String,
    order: u32,
    gamma: f64,
    pass: bool,
    conditions: Conditions,
}

pub fn report_to_json(r: &RangeReport) -> String {
    let offending =
        r.a.offending
            .iter()
            .map(|&i| {
                let (n, k, parity) = index_json(i);
                IndexJson { n, k, parity }
            })
            .collect();
    let conditions = Conditions {
        a: ReportA { pass: r.a.pass, residual: r.a.residual, offending },
        b: r.b.iter().map(|d| ReportB { j: d.j, lower: d.lower, upper: d.upper, norm: d.norm, pass: d.pass }).collect(),
        c: ReportC { sum: r.c.sum, pass: r.c.pass },
    };
    to_json(&ReportJson { format: format_tag(), order: r.order, gamma: r.gamma, pass: r.pass, conditions })
}

// ---- itt form ----

#[derive(Serialize, Deserialize)]
struct ZCoeff {
    n: u32,
    k: u32,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct NCoeff {
    n: u32,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct TtJson {
    j: u32,
    order: u32,
    dz_coeffs: Vec<NCoeff>,
    dzbar_coeffs: Vec<NCoeff>,
}

#[derive(Serialize, Deserialize)]
struct HModeJson {
    q: i64,
    /// `(p, re, im)`: `r^q h_q = −i Σ c ∫_r^1 s^p (1−s²)^γ ds`.
    terms: Vec<(u32, f64, f64)>,
    /// `(r, re, im)` on the Clenshaw–Curtis radial grid.
    samples: Vec<(f64, f64, f64)>,
}

#[derive(Serialize, Deserialize)]
struct IttJson {
    #[serde(default)]
    format: Option<String>,
    m: u32,
    gamma: f64,
    scalar: Vec<ZCoeff>,
    w1: Vec<ZCoeff>,
    h_modes: Vec<HModeJson>,
    #[serde(default)]
    h_residual: Option<f64>,
    tt: Vec<TtJson>,
}

fn series_json(s: &ZernikeSeries) -> Vec<ZCoeff> {
    s.iter().map(|((n, k), c)| ZCoeff { n, k, re: c.re, im: c.im }).collect()
}

fn series_of(v: &[ZCoeff]) -> ZernikeSeries {
    let mut s = ZernikeSeries::new();
    for c in v {
        s.insert(c.n, c.k, Complex64::new(c.re, c.im));
    }
    s
}

fn side_json(m: &BTreeMap<u32, Complex64>) -> Vec<NCoeff> {
    m.iter().map(|(&n, c)| NCoeff { n, re: c.re, im: c.im }).collect()
}

fn side_of(v: &[NCoeff]) -> BTreeMap<u32, Complex64> {
    v.iter().map(|c| (c.n, Complex64::new(c.re, c.im))).collect()
}

fn h_modes_json(h: &PotentialSolution) -> Vec<HModeJson> {
    h.modes
        .iter()
        .map(|m| HModeJson {
            q: m.q,
            terms: m.terms.iter().map(|&(p, c)| (p, c.re, c.im)).collect(),
            samples: m.radii.iter().zip(&m.samples).map(|(&r, c)| (r, c.re, c.im)).collect(),
        })
        .collect()
}

pub fn itt_to_json(f: &IttForm) -> String {
    let tt = f
        .tt
        .iter()
        .map(|(&j, t)| TtJson { j, order: t.order, dz_coeffs: side_json(&t.plus), dzbar_coeffs: side_json(&t.minus) })
        .collect();
    to_json(&IttJson {
        format: Some(format_tag()),
        m: f.order,
        gamma: f.gamma,
        scalar: series_json(&f.scalar),
        w1: series_json(&f.w1),
        h_modes: f.potential.as_ref().map(h_modes_json).unwrap_or_default(),
        h_residual: f.potential.as_ref().map(|h| h.residual),
        tt,
    })
}

/// Reads an itt form; the potential is re-solved from `w1` when present.
pub fn itt_from_json(text: &str, basis: &Basis) -> Result<IttForm, CliError> {
    let j: IttJson = from_json(text, "itt form")?;
    check_format(&j.format)?;
    let mut f = IttForm::new(j.m, j.gamma);
    f.scalar = series_of(&j.scalar);
    f.w1 = series_of(&j.w1);
    for t in &j.tt {
        let mut c = TtCoeffs::new(t.order);
        c.plus = side_of(&t.dz_coeffs);
        c.minus = side_of(&t.dzbar_coeffs);
        f.tt.insert(t.j, c);
    }
    if !j.h_modes.is_empty() {
        f.potential = Some(dtx_core::invert::solve_potential(&basis.synthesize(&f.w1)?, j.gamma)?);
    }
    Ok(f)
}

// ---- kernel route values ----

#[derive(Serialize)]
struct PointJson {
    j: u32,
    x: f64,
    y: f64,
    dz: (f64, f64),
    dzbar: (f64, f64),
}

#[derive(Serialize)]
struct KernelJson {
    format: String,
    m: u32,
    gamma: f64,
    /// Largest pointwise difference to the coefficient route.
    svd_max_diff: Option<f64>,
    points: Vec<PointJson>,
}

pub fn kernel_values_to_json(m: u32, gamma: f64, vals: &[TtPointValue], diff: Option<f64>) -> String {
    let points = vals
        .iter()
        .map(|v| PointJson { j: v.j, x: v.z.re, y: v.z.im, dz: (v.dz.re, v.dz.im), dzbar: (v.dzbar.re, v.dzbar.im) })
        .collect();
    to_json(&KernelJson { format: format_tag(), m, gamma, svd_max_diff: diff, points })
}

// ---- basis table ----

#[derive(Serialize)]
struct BasisEntry {
    n: u32,
    k: u32,
    sigma: f64,
    /// Monomial coefficients of `Ẑ_{n,k}` as `(a, b, re, im)`.
    terms: Vec<(u32, u32, f64, f64)>,
}

#[derive(Serialize)]
struct BasisJson {
    format: String,
    gamma: f64,
    n_max: u32,
    norm_sq: f64,
    entries: Vec<BasisEntry>,
}

pub fn basis_to_json(b: &Basis) -> Result<String, CliError> {
    let mut entries = Vec::new();
    for n in 0..=b.n_max() {
        for k in 0..=n {
            entries.push(BasisEntry { n, k, sigma: b.sigma(n, k), terms: terms_of(&b.zhat(n, k)?) });
        }
    }
    Ok(to_json(&BasisJson { format: format_tag(), gamma: b.gamma(), n_max: b.n_max(), norm_sq: b.norm_sq(), entries }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tensor_round_trip() {
        let f = ModeField::from_modes(2, [(2, PolyZZbar::z()), (0, PolyZZbar::d())]).unwrap();
        let back = tensor_from_json(&tensor_to_json(&f)).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn tensor_rejects_bad_mode() {
        let text = r#"{"m": 1, "modes": [{"k": 3, "terms": [[0, 0, 1.0, 0.0]]}]}"#;
        assert!(tensor_from_json(text).is_err());
        let text = r#"{"m": 1, "modes": [{"k": 0, "terms": [[0, 0, 1.0, 0.0]]}]}"#;
        assert!(tensor_from_json(text).is_err());
    }

    #[test]
    fn coeffs_round_trip_and_bare_array() {
        let u = SinoCoeffs::from_entries(
            0.25,
            [(PsiIndex::plus(2, -1), Complex64::new(0.1, -2.0)), (PsiIndex::minus(1, 1), Complex64::new(3.0, 0.0))],
        );
        assert_eq!(coeffs_from_json(&coeffs_to_json(&u), 0.0).unwrap(), u);
        let bare = r#"[{"n": 1, "k": 1, "parity": "−", "re": 3.0, "im": 0.0}]"#;
        let v = coeffs_from_json(bare, 0.5).unwrap();
        assert_eq!(v.gamma, 0.5);
        assert_eq!(v.get(PsiIndex::minus(1, 1)), Complex64::new(3.0, 0.0));
        assert!(coeffs_from_json(r#"{"format": "dtx-v0", "gamma": 0, "coeffs": []}"#, 0.0).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let grid = BoundaryGrid::for_degree(0.3, 2).unwrap();
        let mut s = SinoGrid::zeros(grid);
        for (i, v) in s.values.iter_mut().enumerate() {
            *v = Complex64::new(i as f64 / 7.0, -1.0 / (1.0 + i as f64));
        }
        let back = sino_from_csv(&sino_to_csv(&s), 0.3).unwrap();
        assert_eq!(back.values, s.values);
        assert!(sino_from_csv(&sino_to_csv(&s), 0.0).is_err());
    }
}
