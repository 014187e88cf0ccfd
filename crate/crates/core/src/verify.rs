//! Numerical checks of the differential-geometric identities a chart must
//! satisfy, Frenet curvatures of space curves and the circle tests built on them.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::{Matrix4, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format_float;
use crate::fd::{d1, seven_point};
use crate::surfaces::{rotate_chart, Domain, Jet, SurfaceChart};
use crate::vec4::Vec4;

/// Step of the finite differences taken on the chart.
pub const FD_STEP: f64 = 1e-3;

/// Curvatures below this value end the Gram–Schmidt chain.
pub const FRENET_DEGENERACY: f64 = 1e-7;

/// Default tolerance of [`circle_test`] on κ variation and κ₂.
pub const CIRCLE_TOL: f64 = 1e-4;

/// First and second fundamental form coefficients in the frame `(l, l_u, l_v, n)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FormData {
    pub e: f64,
    pub f: f64,
    pub g: f64,
    pub n: Vec4,
    /// `⟨l_uu, n⟩`
    pub a: f64,
    /// `⟨l_uv, n⟩`
    pub b: f64,
    /// `⟨l_vv, n⟩`
    pub c: f64,
}

fn normal_of(chart: &SurfaceChart, u: f64, v: f64, jet: &Jet) -> Result<Vec4> {
    if jet.lu.wedge_norm_squared(&jet.lv).sqrt() < 1e-10 {
        return Err(Error::DegenerateFrame { u, v });
    }
    let mut n = Vec4::cross3(&jet.l, &jet.lu, &jet.lv).normalized();
    if let Some(stored) = chart.stored_normal(u, v) {
        if stored.dot(&n) < 0.0 {
            n = -n;
        }
    }
    Ok(n)
}

pub fn fundamental_forms(chart: &SurfaceChart, u: f64, v: f64) -> Result<FormData> {
    let jet = chart.jet(u, v);
    forms_from_jet(chart, u, v, &jet)
}

fn forms_from_jet(chart: &SurfaceChart, u: f64, v: f64, jet: &Jet) -> Result<FormData> {
    let n = normal_of(chart, u, v, jet)?;
    let (e, f, g) = jet.first_form();
    Ok(FormData {
        e,
        f,
        g,
        n,
        a: jet.luu.dot(&n),
        b: jet.luv.dot(&n),
        c: jet.lvv.dot(&n),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurvatureMethod {
    /// Intrinsic, from the metric coefficients and their derivatives.
    Metric,
    /// Gauss equation with the second fundamental form.
    Forms,
    /// Product of principal curvatures; needs `b = 0`.
    Principal,
}

/// `(E_u, E_v, G_u, G_v)` from the 2-jet.
fn metric_gradient(jet: &Jet) -> (f64, f64, f64, f64) {
    (
        2.0 * jet.luu.dot(&jet.lu),
        2.0 * jet.luv.dot(&jet.lu),
        2.0 * jet.luv.dot(&jet.lv),
        2.0 * jet.lvv.dot(&jet.lv),
    )
}

/// `(E, E_u, E_v, ΔE)`; the Laplacian differences the analytic gradient once.
fn conformal_derivatives(chart: &SurfaceChart, u: f64, v: f64) -> (f64, f64, f64, f64) {
    let jet = chart.jet(u, v);
    let (eu, ev, _, _) = metric_gradient(&jet);
    let euu = d1(|x| metric_gradient(&chart.jet(x, v)).0, u, FD_STEP);
    let evv = d1(|y| metric_gradient(&chart.jet(u, y)).1, v, FD_STEP);
    (jet.lu.norm_squared(), eu, ev, euu + evv)
}

pub fn gauss_curvature(chart: &SurfaceChart, u: f64, v: f64, method: CurvatureMethod) -> Result<f64> {
    let fd = fundamental_forms(chart, u, v)?;
    match method {
        CurvatureMethod::Metric => {
            if chart.is_isothermal() {
                let (e, eu, ev, lap) = conformal_derivatives(chart, u, v);
                Ok((eu * eu + ev * ev) / (2.0 * e.powi(3)) - lap / (2.0 * e * e))
            } else {
                if fd.f.abs() > 1e-10 * (fd.e * fd.g).sqrt() {
                    return Err(Error::MethodInapplicable("metric route needs an orthogonal chart"));
                }
                let phi = |x: f64, y: f64| {
                    let j = chart.jet(x, y);
                    let (_, ev, gu, _) = metric_gradient(&j);
                    let root = (j.lu.norm_squared() * j.lv.norm_squared()).sqrt();
                    (ev / root, gu / root)
                };
                let dv = d1(|y| phi(u, y).0, v, FD_STEP);
                let du = d1(|x| phi(x, v).1, u, FD_STEP);
                Ok(-(dv + du) / (2.0 * (fd.e * fd.g).sqrt()))
            }
        }
        CurvatureMethod::Forms => {
            if chart.is_isothermal() {
                Ok(1.0 - (fd.a * fd.a + fd.b * fd.b) / (fd.e * fd.e))
            } else {
                Ok(1.0 + (fd.a * fd.c - fd.b * fd.b) / (fd.e * fd.g - fd.f * fd.f))
            }
        }
        CurvatureMethod::Principal => {
            if fd.b.abs() > 1e-6 * fd.e.max(fd.g) || fd.f.abs() > 1e-10 * fd.e.max(fd.g) {
                return Err(Error::MethodInapplicable("principal route needs principal coordinates"));
            }
            if chart.is_isothermal() {
                Ok(1.0 - fd.a * fd.a / (fd.e * fd.g))
            } else {
                Ok(1.0 + fd.a * fd.c / (fd.e * fd.g))
            }
        }
    }
}

/// Cell-centred sample grid on the chart domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grid {
    pub nu: usize,
    pub nv: usize,
}

impl Grid {
    pub fn new(nu: usize, nv: usize) -> Self {
        Grid { nu, nv }
    }

    pub fn size(&self) -> usize {
        self.nu * self.nv
    }

    pub fn points(&self, chart: &SurfaceChart) -> Vec<(f64, f64)> {
        self.points_in(chart.domain())
    }

    pub fn points_in(&self, d: &Domain) -> Vec<(f64, f64)> {
        let du = (d.u_max - d.u_min) / self.nu as f64;
        let dv = (d.v_max - d.v_min) / self.nv as f64;
        let mut out = Vec::with_capacity(self.size());
        for i in 0..self.nu {
            for k in 0..self.nv {
                out.push((d.u_min + (i as f64 + 0.5) * du, d.v_min + (k as f64 + 0.5) * dv));
            }
        }
        out
    }
}

/// Maximum that turns a NaN into +∞ so it always fails a tolerance.
pub(crate) fn nan_max(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::INFINITY
    } else {
        a.max(b)
    }
}

fn grid_max<F>(chart: &SurfaceChart, grid: Grid, f: F) -> f64
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    grid.points(chart)
        .par_iter()
        .map(|&(u, v)| f(u, v))
        .reduce(|| 0.0, nan_max)
}

fn identity_residual_at(chart: &SurfaceChart, u: f64, v: f64) -> f64 {
    let Ok(fd) = fundamental_forms(chart, u, v) else {
        return f64::INFINITY;
    };
    let (e, eu, ev, lap) = conformal_derivatives(chart, u, v);
    let rhs = 0.5 * lap - (eu * eu + ev * ev) / (2.0 * e) + e * e;
    (fd.a * fd.a + fd.b * fd.b - rhs).abs()
}

/// `max |a² + b² − (½ΔE − (E_u² + E_v²)/2E + E²)|` over the grid; isothermal charts only.
pub fn curvature_identity_residual(chart: &SurfaceChart, grid: Grid) -> f64 {
    grid_max(chart, grid, |u, v| identity_residual_at(chart, u, v))
}

fn minimality_at(jet: &Jet) -> f64 {
    (jet.luu + jet.lvv + jet.l * (2.0 * jet.lu.norm_squared())).norm()
}

/// `max |l_uu + l_vv + 2E l|` over the grid; isothermal charts only.
pub fn minimality_residual(chart: &SurfaceChart, grid: Grid) -> f64 {
    grid_max(chart, grid, |u, v| minimality_at(&chart.jet(u, v)))
}

/// Frenet curvatures along a sampled curve in R⁴.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrenetProfile {
    /// Cumulative chord length at each evaluated sample.
    pub arclength: Vec<f64>,
    pub kappa1: Vec<f64>,
    pub kappa2: Vec<Option<f64>>,
    pub kappa3: Vec<Option<f64>>,
}

/// Curvatures at the samples with three neighbours on each side.
///
/// The stencils work in index units; curvature does not depend on the
/// parametrization, so the samples need only be equally spaced in some parameter.
pub fn frenet_profile(points: &[Vec4]) -> Result<FrenetProfile> {
    if points.len() < 7 {
        return Err(Error::InvalidParameter(format!(
            "frenet_profile needs at least 7 samples, got {}",
            points.len()
        )));
    }
    let mut chord = vec![0.0; points.len()];
    for i in 1..points.len() {
        chord[i] = chord[i - 1] + (points[i] - points[i - 1]).norm();
    }
    let mut prof = FrenetProfile {
        arclength: Vec::new(),
        kappa1: Vec::new(),
        kappa2: Vec::new(),
        kappa3: Vec::new(),
    };
    for i in 3..points.len() - 3 {
        let win = &points[i - 3..=i + 3];
        let d = [1, 2, 3, 4].map(|k| seven_point(win, k));
        let speed = d[0].norm();
        if !(speed >= 1e-8) {
            return Err(Error::DegenerateCurve { index: i, speed });
        }
        let t = d[0] / speed;
        let p2 = d[1].reject(&t);
        let k1 = p2.norm() / (speed * speed);
        let (mut k2, mut k3) = (None, None);
        if k1 > FRENET_DEGENERACY {
            let n1 = p2.normalized();
            let p3 = d[2].reject(&t).reject(&n1);
            let v2 = p3.norm() / (p2.norm() * speed);
            k2 = Some(v2);
            if v2 > FRENET_DEGENERACY {
                let n2 = p3.normalized();
                let p4 = d[3].reject(&t).reject(&n1).reject(&n2);
                k3 = Some(p4.norm() / (p3.norm() * speed));
            }
        }
        prof.arclength.push(chord[i]);
        prof.kappa1.push(k1);
        prof.kappa2.push(k2);
        prof.kappa3.push(k3);
    }
    Ok(prof)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CircleVerdict {
    pub is_circle: bool,
    /// Mean κ₁.
    pub kappa: f64,
    pub max_kappa_variation: f64,
    pub max_kappa2: f64,
    /// Second-smallest RMS singular value of the centred point cloud.
    pub planarity_residual: f64,
}

/// A curve is a circle iff κ₁ is constant, κ₂ vanishes and the points span an affine plane.
pub fn circle_test(points: &[Vec4], tol: f64) -> Result<CircleVerdict> {
    let prof = frenet_profile(points)?;
    let m = prof.kappa1.len() as f64;
    let kappa = prof.kappa1.iter().sum::<f64>() / m;
    let max_kappa_variation = prof.kappa1.iter().fold(0.0, |acc, k| nan_max(acc, (k - kappa).abs()));
    let max_kappa2 = prof.kappa2.iter().fold(0.0, |acc, k| nan_max(acc, k.unwrap_or(0.0)));

    let n = points.len() as f64;
    let mean = points.iter().fold(Vec4::ZERO, |acc, p| acc + *p) / n;
    let mut cov = Matrix4::<f64>::zeros();
    for p in points {
        let d = *p - mean;
        for r in 0..4 {
            for c in 0..4 {
                cov[(r, c)] += d[r] * d[c] / n;
            }
        }
    }
    let mut ev: Vec<f64> = SymmetricEigen::new(cov).eigenvalues.iter().map(|x| x.max(0.0)).collect();
    ev.sort_by(f64::total_cmp);
    let planarity_residual = ev[1].sqrt();
    let radius = cov.trace().sqrt();
    let is_circle = max_kappa_variation < tol && max_kappa2 < tol && planarity_residual < 1e-6 * radius;
    Ok(CircleVerdict {
        is_circle,
        kappa,
        max_kappa_variation,
        max_kappa2,
        planarity_residual,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanRow {
    pub theta: f64,
    pub verdicts: Vec<CircleVerdict>,
}

impl ScanRow {
    pub fn all_circles(&self) -> bool {
        self.verdicts.iter().all(|v| v.is_circle)
    }
}

/// Lines per angle and samples per line used by [`scan_circle_families`].
pub const SCAN_LINES: usize = 3;
pub const SCAN_SAMPLES: usize = 81;

/// For each θ, tests whether the x-lines of `rotate_chart(chart, θ)` through
/// the rotated domain are circles.
pub fn scan_circle_families(chart: &SurfaceChart, thetas: &[f64]) -> Result<Vec<ScanRow>> {
    thetas
        .par_iter()
        .map(|&theta| {
            let rot = rotate_chart(chart, theta);
            let d = *rot.domain();
            let verdicts = (0..SCAN_LINES)
                .map(|j| {
                    let y = d.v_min + (j as f64 + 0.5) * (d.v_max - d.v_min) / SCAN_LINES as f64;
                    line_verdict(&rot, y, d.u_min, d.u_max)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(ScanRow { theta, verdicts })
        })
        .collect()
}

fn line_verdict(chart: &SurfaceChart, y: f64, x0: f64, x1: f64) -> Result<CircleVerdict> {
    let pts: Vec<Vec4> = (0..SCAN_SAMPLES)
        .map(|i| chart.point(x0 + (x1 - x0) * i as f64 / (SCAN_SAMPLES - 1) as f64, y))
        .collect();
    circle_test(&pts, CIRCLE_TOL)
}

/// The angles `{0, π/8, π/4, 3π/8, π/2}`.
pub fn default_scan_angles() -> Vec<f64> {
    (0..5).map(|k| k as f64 * PI / 8.0).collect()
}

/// Per-check tolerances with a shared default.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub default: f64,
    pub overrides: BTreeMap<String, f64>,
}

impl Tolerances {
    pub fn uniform(default: f64) -> Self {
        Tolerances {
            default,
            overrides: BTreeMap::new(),
        }
    }

    pub fn with(mut self, name: &str, tol: f64) -> Self {
        self.overrides.insert(name.to_string(), tol);
        self
    }

    pub fn get(&self, name: &str) -> f64 {
        self.overrides.get(name).copied().unwrap_or(self.default)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub max_residual: f64,
    pub grid_size: usize,
    pub tol: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VerificationReport {
    pub checks: BTreeMap<String, CheckResult>,
}

impl VerificationReport {
    pub fn insert(&mut self, name: &str, max_residual: f64, grid_size: usize, tol: f64) {
        let pass = max_residual <= tol;
        self.checks.insert(
            name.to_string(),
            CheckResult {
                max_residual,
                grid_size,
                tol,
                pass,
            },
        );
    }

    pub fn all_pass(&self) -> bool {
        self.checks.values().all(|c| c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.get(name)
    }

    /// One `name max_residual=… grid_size=… tol=… pass=…` line per check.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (name, c) in &self.checks {
            out.push_str(&format!(
                "{name} max_residual={} grid_size={} tol={} pass={}\n",
                format_float(c.max_residual),
                c.grid_size,
                format_float(c.tol),
                c.pass
            ));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Check names reported by [`verify_chart`] for isothermal charts.
pub const ISOTHERMAL_CHECKS: [&str; 11] = [
    "unit_norm",
    "orthogonality",
    "conformality",
    "minimality",
    "normal_frame",
    "gauss_metric_vs_forms",
    "gauss_principal_vs_forms",
    "curvature_identity",
    "cauchy_riemann",
    "derivative_formulas_l",
    "derivative_formulas_n",
];

/// Residuals at one point, in the order of [`ISOTHERMAL_CHECKS`]; `None` where
/// a check does not apply.
fn isothermal_residuals(chart: &SurfaceChart, u: f64, v: f64) -> [Option<f64>; 11] {
    let jet = chart.jet(u, v);
    let Ok(fd) = forms_from_jet(chart, u, v, &jet) else {
        return [Some(f64::INFINITY); 11];
    };
    let e = fd.e;
    let (eu, ev, _, _) = metric_gradient(&jet);
    let normal_frame = [
        (fd.n.norm() - 1.0).abs(),
        fd.n.dot(&jet.l).abs(),
        fd.n.dot(&jet.lu).abs() / e.sqrt(),
        fd.n.dot(&jet.lv).abs() / e.sqrt(),
        chart.stored_normal(u, v).map_or(0.0, |s| (s - fd.n).norm()),
    ]
    .into_iter()
    .fold(0.0, nan_max);
    let k_forms = 1.0 - (fd.a * fd.a + fd.b * fd.b) / (e * e);
    let k_metric = gauss_curvature(chart, u, v, CurvatureMethod::Metric).unwrap_or(f64::INFINITY);
    let k_principal = if chart.is_principal() {
        Some((gauss_curvature(chart, u, v, CurvatureMethod::Principal).unwrap_or(f64::INFINITY) - k_forms).abs())
    } else {
        None
    };
    let ab = |x: f64, y: f64| fundamental_forms(chart, x, y).map_or((f64::NAN, f64::NAN), |f| (f.a, f.b));
    let (au, bu) = {
        let a = d1(|x| ab(x, v).0, u, FD_STEP);
        let b = d1(|x| ab(x, v).1, u, FD_STEP);
        (a, b)
    };
    let (av, bv) = (d1(|y| ab(u, y).0, v, FD_STEP), d1(|y| ab(u, y).1, v, FD_STEP));
    let cr = nan_max((bu - av).abs(), (bv + au).abs());

    let (pu, pv) = (eu / (2.0 * e), ev / (2.0 * e));
    let row_uu = jet.luu - (jet.lu * pu - jet.lv * pv - jet.l * e + fd.n * fd.a);
    let row_uv = jet.luv - (jet.lu * pv + jet.lv * pu + fd.n * fd.b);
    let row_vv = jet.lvv - (jet.lu * (-pu) + jet.lv * pv - jet.l * e - fd.n * fd.a);
    let dl = nan_max(row_uu.norm(), nan_max(row_uv.norm(), row_vv.norm()));

    let nn = |x: f64, y: f64| fundamental_forms(chart, x, y).map_or(Vec4([f64::NAN; 4]), |f| f.n);
    let nu = d1(|x| nn(x, v), u, FD_STEP);
    let nv = d1(|y| nn(u, y), v, FD_STEP);
    let row_nu = nu + jet.lu * (fd.a / e) + jet.lv * (fd.b / e);
    let row_nv = nv + jet.lu * (fd.b / e) - jet.lv * (fd.a / e);
    let dn = nan_max(row_nu.norm(), row_nv.norm());

    [
        Some((jet.l.norm() - 1.0).abs()),
        Some(fd.f.abs()),
        Some((fd.e - fd.g).abs()),
        Some(minimality_at(&jet)),
        Some(normal_frame),
        Some((k_metric - k_forms).abs()),
        k_principal,
        Some(identity_residual_at(chart, u, v)),
        Some(cr),
        Some(dl),
        Some(dn),
    ]
}

/// Check names reported by [`verify_chart`] for orthogonal, non-isothermal charts.
pub const ORTHOGONAL_CHECKS: [&str; 5] = [
    "unit_norm",
    "orthogonality",
    "mean_curvature",
    "normal_frame",
    "gauss_metric_vs_forms",
];

fn orthogonal_residuals(chart: &SurfaceChart, u: f64, v: f64) -> [Option<f64>; 5] {
    let jet = chart.jet(u, v);
    let Ok(fd) = forms_from_jet(chart, u, v, &jet) else {
        return [Some(f64::INFINITY); 5];
    };
    let det = fd.e * fd.g - fd.f * fd.f;
    let mean = (fd.g * fd.a - 2.0 * fd.f * fd.b + fd.e * fd.c) / (2.0 * det);
    let normal_frame = [
        (fd.n.norm() - 1.0).abs(),
        chart.stored_normal(u, v).map_or(0.0, |s| (s - fd.n).norm()),
    ]
    .into_iter()
    .fold(0.0, nan_max);
    let k_forms = 1.0 + (fd.a * fd.c - fd.b * fd.b) / det;
    let k_metric = gauss_curvature(chart, u, v, CurvatureMethod::Metric).unwrap_or(f64::INFINITY);
    [
        Some((jet.l.norm() - 1.0).abs()),
        Some(fd.f.abs() / (fd.e * fd.g).sqrt()),
        Some(mean.abs()),
        Some(normal_frame),
        Some((k_metric - k_forms).abs()),
    ]
}

fn collect_report<const N: usize>(
    names: [&str; N],
    rows: Vec<[Option<f64>; N]>,
    size: usize,
    tols: &Tolerances,
) -> VerificationReport {
    let mut report = VerificationReport::default();
    for (k, name) in names.iter().enumerate() {
        let vals: Vec<f64> = rows.iter().filter_map(|r| r[k]).collect();
        if vals.is_empty() {
            continue;
        }
        let max = vals.into_iter().fold(0.0, nan_max);
        report.insert(name, max, size, tols.get(name));
    }
    report
}

/// Runs every applicable identity check over the grid.
pub fn verify_chart(chart: &SurfaceChart, grid: Grid, tols: &Tolerances) -> VerificationReport {
    let pts = grid.points(chart);
    if chart.is_isothermal() {
        let rows: Vec<_> = pts.par_iter().map(|&(u, v)| isothermal_residuals(chart, u, v)).collect();
        collect_report(ISOTHERMAL_CHECKS, rows, grid.size(), tols)
    } else {
        let rows: Vec<_> = pts.par_iter().map(|&(u, v)| orthogonal_residuals(chart, u, v)).collect();
        collect_report(ORTHOGONAL_CHECKS, rows, grid.size(), tols)
    }
}

/// Samples of a closed circle of radius `r` in the plane spanned by `a`, `b` (orthonormal).
pub fn sample_circle(center: Vec4, a: Vec4, b: Vec4, r: f64, samples: usize) -> Vec<Vec4> {
    (0..samples)
        .map(|i| {
            let phi = 2.0 * PI * i as f64 / samples as f64;
            center + a * (r * phi.cos()) + b * (r * phi.sin())
        })
        .collect()
}
