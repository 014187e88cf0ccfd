//! Hypersurfaces of R⁴ enveloped by the tangent hyperplanes
//! `⟨X, l(u, v)⟩ = r(u, v)` of a minimal surface `l` in S³.
//!
//! When `Δr + 2E r = 0` the envelope
//! `X = r l + (r_u/E) l_u + (r_v/E) l_v + w n`
//! is a minimal hypersurface of type number two, ruled by the lines in `w`.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::sync::Arc;

use nalgebra::{Matrix3, SymmetricEigen};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fd::{d1, d2};
use crate::ode::{integrate, Quadrature};
use crate::surfaces::{clifford_chart, second_type_torus, sphere_chart, Domain, SurfaceChart};
use crate::verify::{fundamental_forms, nan_max, Grid};
use crate::vec4::Vec4;

type Scalar2 = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
type Point3 = Arc<dyn Fn(f64, f64, f64) -> Vec4 + Send + Sync>;

/// Finite-difference step used on `r` and on `X`.
pub const FD_STEP: f64 = 1e-3;

/// Largest `|Δr + 2E r|` on the probe grid that [`envelope_hypersurface`] accepts.
pub const ENVELOPE_RESIDUAL_TOL: f64 = 1e-5;

/// A scalar function on a chart together with its gradient.
#[derive(Clone)]
pub struct ScalarField {
    r: Scalar2,
    r_u: Scalar2,
    r_v: Scalar2,
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("ScalarField")
    }
}

impl ScalarField {
    pub fn new<R, U, V>(r: R, r_u: U, r_v: V) -> Self
    where
        R: Fn(f64, f64) -> f64 + Send + Sync + 'static,
        U: Fn(f64, f64) -> f64 + Send + Sync + 'static,
        V: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        ScalarField {
            r: Arc::new(r),
            r_u: Arc::new(r_u),
            r_v: Arc::new(r_v),
        }
    }

    pub fn zero() -> Self {
        Self::new(|_, _| 0.0, |_, _| 0.0, |_, _| 0.0)
    }

    pub fn r(&self, u: f64, v: f64) -> f64 {
        (self.r)(u, v)
    }
    pub fn r_u(&self, u: f64, v: f64) -> f64 {
        (self.r_u)(u, v)
    }
    pub fn r_v(&self, u: f64, v: f64) -> f64 {
        (self.r_v)(u, v)
    }

    /// Largest gap between the supplied gradient and a finite-difference one.
    pub fn gradient_mismatch(&self, domain: &Domain, grid: Grid) -> f64 {
        grid.points_in(domain)
            .into_iter()
            .map(|(u, v)| {
                let du = d1(|x| self.r(x, v), u, FD_STEP) - self.r_u(u, v);
                let dv = d1(|y| self.r(u, y), v, FD_STEP) - self.r_v(u, v);
                du.abs().max(dv.abs())
            })
            .fold(0.0, nan_max)
    }
}

/// `max |Δr + 2E r|` over the grid, with `Δr` by finite differences of `r`.
pub fn r_residual(chart: &SurfaceChart, field: &ScalarField, grid: Grid) -> f64 {
    grid.points(chart)
        .par_iter()
        .map(|&(u, v)| {
            let lap = d2(|x| field.r(x, v), u, FD_STEP) + d2(|y| field.r(u, y), v, FD_STEP);
            let e = chart.jet(u, v).lu.norm_squared();
            (lap + 2.0 * e * field.r(u, v)).abs()
        })
        .reduce(|| 0.0, nan_max)
}

/// A three-parameter patch `X(u, v, w)` in R⁴.
#[derive(Clone)]
pub struct HypersurfacePatch {
    name: String,
    x: Point3,
    domain: Domain,
    w_range: (f64, f64),
    chart: Option<SurfaceChart>,
    field: Option<ScalarField>,
}

impl fmt::Debug for HypersurfacePatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HypersurfacePatch")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("w_range", &self.w_range)
            .finish()
    }
}

impl HypersurfacePatch {
    pub fn from_fn<F>(name: impl Into<String>, domain: Domain, w_range: (f64, f64), x: F) -> Self
    where
        F: Fn(f64, f64, f64) -> Vec4 + Send + Sync + 'static,
    {
        HypersurfacePatch {
            name: name.into(),
            x: Arc::new(x),
            domain,
            w_range,
            chart: None,
            field: None,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn point(&self, u: f64, v: f64, w: f64) -> Vec4 {
        (self.x)(u, v, w)
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    /// Range of `w` on which the patch is regular.
    pub fn w_range(&self) -> (f64, f64) {
        self.w_range
    }

    pub fn with_w_range(mut self, w_range: (f64, f64)) -> Self {
        self.w_range = w_range;
        self
    }

    pub fn chart(&self) -> Option<&SurfaceChart> {
        self.chart.as_ref()
    }

    pub fn field(&self) -> Option<&ScalarField> {
        self.field.as_ref()
    }

    /// `count` equally spaced values spanning [`w_range`](Self::w_range).
    pub fn w_probe(&self, count: usize) -> Vec<f64> {
        let (a, b) = self.w_range;
        if count == 1 {
            return vec![0.5 * (a + b)];
        }
        (0..count).map(|k| a + (b - a) * k as f64 / (count - 1) as f64).collect()
    }
}

/// Builds the envelope of the hyperplanes `⟨X, l⟩ = r`, refusing fields that do
/// not solve `Δr + 2E r = 0` on a 9×9 probe grid.
pub fn envelope_hypersurface(chart: &SurfaceChart, field: ScalarField) -> Result<HypersurfacePatch> {
    if !chart.is_isothermal() {
        return Err(Error::MethodInapplicable("envelope construction needs an isothermal chart"));
    }
    let residual = r_residual(chart, &field, Grid::new(9, 9));
    if !(residual <= ENVELOPE_RESIDUAL_TOL) {
        return Err(Error::ResidualTooLarge {
            residual,
            tol: ENVELOPE_RESIDUAL_TOL,
        });
    }
    let c = chart.clone();
    let f = field.clone();
    let x = move |u: f64, v: f64, w: f64| {
        let jet = c.jet(u, v);
        let e = jet.lu.norm_squared();
        let n = fundamental_forms(&c, u, v).map_or(Vec4([f64::NAN; 4]), |fd| fd.n);
        jet.l * f.r(u, v) + jet.lu * (f.r_u(u, v) / e) + jet.lv * (f.r_v(u, v) / e) + n * w
    };
    Ok(HypersurfacePatch {
        name: format!("envelope of {}", chart.name()),
        x: Arc::new(x),
        domain: *chart.domain(),
        w_range: (-0.5, 0.5),
        chart: Some(chart.clone()),
        field: Some(field),
    })
}

/// First type helicoid `u¹ (cos t e₁ + sin t e₂) + t e₃ + w e₄`.
pub fn helicoid1_closed(u1: f64, t: f64, w: f64) -> Vec4 {
    let (s, c) = t.sin_cos();
    Vec4::new(u1 * c, u1 * s, t, w)
}

/// Second type helicoid `u¹ (cos t e₁ + sin t e₂) + u² (cos t e₃ + sin t e₄)`.
pub fn helicoid2_closed(u1: f64, u2: f64, t: f64) -> Vec4 {
    let (s, c) = t.sin_cos();
    Vec4::new(u1 * c, u1 * s, u2 * c, u2 * s)
}

/// `r = (v + π/2) tanh u` on the great sphere.
pub fn helicoid1_field() -> ScalarField {
    ScalarField::new(
        |u, v| (v + FRAC_PI_2) * u.tanh(),
        |u, v| (v + FRAC_PI_2) / u.cosh().powi(2),
        |u, _| u.tanh(),
    )
}

/// Envelope of the great sphere with `r = (v + π/2) tanh u`: the first type helicoid.
pub fn helicoid1_patch() -> Result<HypersurfacePatch> {
    envelope_hypersurface(&sphere_chart(), helicoid1_field())
}

/// Envelope of the Clifford torus with `r = 0`: the cone `X = w n`, which is the
/// second type helicoid. Its vertex `w = 0` is excluded from the regular range.
pub fn helicoid2_patch() -> Result<HypersurfacePatch> {
    Ok(envelope_hypersurface(&clifford_chart(), ScalarField::zero())?.with_w_range((0.5, 1.5)))
}

/// Envelope of the generalized torus of second type with `t = 0` and
/// `r = e^{z/2} √(α/(α²+1)) sin βv`, where `α = e^s`.
///
/// This `r` is `⟨l, e₃⟩`, so `X = e₃ + (w − ⟨n, e₃⟩) n`: a cone with vertex
/// `e₃`, singular where `w = ⟨n, e₃⟩ ∈ [−1, 1]`. The regular range is `[1.5, 2.5]`.
pub fn second_type_hypersurface(s: f64) -> Result<HypersurfacePatch> {
    if s == 0.0 {
        return Err(Error::DegenerateParameters);
    }
    let torus = second_type_torus(s, 0.0)?;
    let chart = torus.chart();
    let alpha = s.exp();
    let k = (alpha / (alpha * alpha + 1.0)).sqrt();
    let beta = torus.beta();
    let (t1, t2, t3) = (torus.clone(), torus.clone(), torus);
    let field = ScalarField::new(
        move |u, v| (0.5 * t1.solution().z(u)).exp() * k * (beta * v).sin(),
        move |u, v| {
            let (z, zp) = t2.solution().z_explicit(u);
            0.5 * zp * (0.5 * z).exp() * k * (beta * v).sin()
        },
        move |u, v| (0.5 * t3.solution().z(u)).exp() * k * beta * (beta * v).cos(),
    );
    let mut patch = envelope_hypersurface(&chart, field)?.with_w_range((1.5, 2.5));
    patch.name = format!("second-type hypersurface s={s}");
    Ok(patch)
}

/// Normal of the example with `t = 0`, `s = ln α > 0` in the printed closed form
/// that carries the term `−((1 − α²)/α) ∫₀ᵘ sin 2h⁻¹(σ) p(σ) / f²(σ) dσ`.
///
/// Returns the largest distance to the normal of the chart over `points`.
pub fn printed_normal_discrepancy(s: f64, points: &[(f64, f64)]) -> Result<f64> {
    if !(s > 0.0) {
        return Err(Error::MethodInapplicable("printed normal is stated for s = ln α > 0"));
    }
    let torus = second_type_torus(s, 0.0)?;
    let chart = torus.chart();
    let sol = torus.solution();
    let a = s.exp();
    let beta = torus.beta();
    let e1 = Vec4::e1();
    let e3 = Vec4::e3();
    let e4 = Vec4::e4();
    let quad = Quadrature::new(1e-13, 48)?;
    let mut worst = 0.0f64;
    for &(u, v) in points {
        let f = (0.5 * sol.z(u)).exp();
        let (p, _) = torus.p_state(u);
        let mut integral = [0.0; 4];
        for (i, slot) in integral.iter_mut().enumerate() {
            *slot = integrate(
                |sig| (2.0 * sol.lawson_x(sig)).sin() / sol.z(sig).exp() * torus.p_state(sig).0[i],
                0.0,
                u,
                &quad,
            )?;
        }
        let (sb, cb) = (beta * v).sin_cos();
        let printed = (e1 - e4 * a) * ((1.0 - a * a) / (a * (a * a + 1.0)))
            + (e1 * a.sqrt() + e4 / a.sqrt()) * (a / ((a * a + 1.0) * f) * cb)
            + e3 * ((a / (a * a + 1.0)).sqrt() / f * sb)
            - p / f
            - Vec4(integral) * ((1.0 - a * a) / a);
        let n = fundamental_forms(&chart, u, v)?.n;
        worst = worst.max((printed - n).norm());
    }
    Ok(worst)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ShapeReport {
    /// `max |ν₁ + ν₂|`.
    pub max_mean_curvature: f64,
    /// `min min(|ν₁|, |ν₂|)`; positive iff the second fundamental form has rank two everywhere.
    pub min_rank2_gap: f64,
    /// `max |ν₃|`, the eigenvalue of smallest magnitude.
    pub third_eigenvalue_max: f64,
}

/// Principal curvatures of the patch at one point, sorted by decreasing magnitude.
pub fn principal_curvatures(patch: &HypersurfacePatch, u: f64, v: f64, w: f64) -> Result<[f64; 3]> {
    let h = FD_STEP;
    let xu = d1(|a| patch.point(a, v, w), u, h);
    let xv = d1(|b| patch.point(u, b, w), v, h);
    let xw = d1(|c| patch.point(u, v, c), w, h);
    let cross = Vec4::cross3(&xu, &xv, &xw);
    let vol = cross.norm();
    if !(vol > 1e-10 * (xu.norm() * xv.norm() * xw.norm()).max(1e-300)) {
        return Err(Error::DegenerateTangent { u, v, w });
    }
    let n = cross / vol;
    let second = [
        [
            d2(|a| patch.point(a, v, w), u, h),
            d1(|a| d1(|b| patch.point(a, b, w), v, h), u, h),
            d1(|a| d1(|c| patch.point(a, v, c), w, h), u, h),
        ],
        [
            Vec4::ZERO,
            d2(|b| patch.point(u, b, w), v, h),
            d1(|b| d1(|c| patch.point(u, b, c), w, h), v, h),
        ],
        [Vec4::ZERO, Vec4::ZERO, d2(|c| patch.point(u, v, c), w, h)],
    ];
    let t = [xu, xv, xw];
    let g = Matrix3::from_fn(|i, j| t[i].dot(&t[j]));
    let b = Matrix3::from_fn(|i, j| second[i.min(j)][i.max(j)].dot(&n));
    let chol = g.cholesky().ok_or(Error::DegenerateTangent { u, v, w })?;
    let l = chol.l();
    let linv = l.try_inverse().ok_or(Error::DegenerateTangent { u, v, w })?;
    let a = linv * b * linv.transpose();
    let a = (a + a.transpose()) * 0.5;
    let mut nu: Vec<f64> = SymmetricEigen::new(a).eigenvalues.iter().copied().collect();
    nu.sort_by(|x, y| y.abs().total_cmp(&x.abs()));
    Ok([nu[0], nu[1], nu[2]])
}

/// Shape-operator statistics over `samples × w_probe`.
pub fn shape_check(patch: &HypersurfacePatch, samples: Grid, w_probe: &[f64]) -> Result<ShapeReport> {
    let pts: Vec<(f64, f64, f64)> = samples
        .points_in(patch.domain())
        .into_iter()
        .flat_map(|(u, v)| w_probe.iter().map(move |&w| (u, v, w)))
        .collect();
    let nus = pts
        .par_iter()
        .map(|&(u, v, w)| principal_curvatures(patch, u, v, w))
        .collect::<Result<Vec<_>>>()?;
    let mut rep = ShapeReport {
        max_mean_curvature: 0.0,
        min_rank2_gap: f64::INFINITY,
        third_eigenvalue_max: 0.0,
    };
    for [n1, n2, n3] in nus {
        rep.max_mean_curvature = nan_max(rep.max_mean_curvature, (n1 + n2).abs());
        rep.third_eigenvalue_max = nan_max(rep.third_eigenvalue_max, n3.abs());
        rep.min_rank2_gap = rep.min_rank2_gap.min(n2.abs());
    }
    Ok(rep)
}
