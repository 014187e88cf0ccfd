//! Charts of the minimal surfaces in S³ with their 2-jets.
//!
//! A chart maps `(u, v)` to the point `l(u, v)` of the unit sphere together with
//! its first and second partial derivatives. Closed-form families carry exact
//! jets; the generalized torus of second type assembles its jet from the
//! explicit sinh-Gordon solution and a numerically integrated vector function.

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ode::{solve_ivp_two_sided, IvpOptions, IvpSolution};
use crate::sinh_gordon::{Reparametrization, SinhGordonSolution};
use crate::vec4::Vec4;

/// `l` and its partial derivatives up to second order at one parameter point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    pub l: Vec4,
    pub lu: Vec4,
    pub lv: Vec4,
    pub luu: Vec4,
    pub luv: Vec4,
    pub lvv: Vec4,
}

impl Jet {
    /// `(E, F, G)`.
    pub fn first_form(&self) -> (f64, f64, f64) {
        (self.lu.norm_squared(), self.lu.dot(&self.lv), self.lv.norm_squared())
    }
}

/// Evaluator behind a [`SurfaceChart`].
pub trait ChartMap: Send + Sync {
    fn jet(&self, u: f64, v: f64) -> Jet;

    /// Unit normal in S³ if the family has a preferred one.
    fn normal(&self, _u: f64, _v: f64) -> Option<Vec4> {
        None
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Domain {
    pub u_min: f64,
    pub u_max: f64,
    pub v_min: f64,
    pub v_max: f64,
    pub periodic_u: bool,
    pub periodic_v: bool,
}

impl Domain {
    pub fn new(u: (f64, f64), v: (f64, f64)) -> Self {
        Domain {
            u_min: u.0,
            u_max: u.1,
            v_min: v.0,
            v_max: v.1,
            periodic_u: false,
            periodic_v: false,
        }
    }

    pub fn periodic(mut self, u: bool, v: bool) -> Self {
        self.periodic_u = u;
        self.periodic_v = v;
        self
    }

    pub fn center(&self) -> (f64, f64) {
        (0.5 * (self.u_min + self.u_max), 0.5 * (self.v_min + self.v_max))
    }

    pub fn half_widths(&self) -> (f64, f64) {
        (0.5 * (self.u_max - self.u_min), 0.5 * (self.v_max - self.v_min))
    }

    pub fn contains(&self, u: f64, v: f64) -> bool {
        u >= self.u_min && u <= self.u_max && v >= self.v_min && v <= self.v_max
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChartParams {
    None,
    Alpha { alpha: f64 },
    SinhGordon { s: f64, t: f64 },
}

/// A parametrized surface in S³. Cheap to clone; immutable.
#[derive(Clone)]
pub struct SurfaceChart {
    name: String,
    domain: Domain,
    params: ChartParams,
    isothermal: bool,
    principal: bool,
    analytic_jet: bool,
    map: Arc<dyn ChartMap>,
}

impl fmt::Debug for SurfaceChart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SurfaceChart")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("params", &self.params)
            .field("isothermal", &self.isothermal)
            .field("principal", &self.principal)
            .finish()
    }
}

impl SurfaceChart {
    pub fn new(name: impl Into<String>, domain: Domain, params: ChartParams, map: Arc<dyn ChartMap>) -> Self {
        SurfaceChart {
            name: name.into(),
            domain,
            params,
            isothermal: true,
            principal: false,
            analytic_jet: true,
            map,
        }
    }

    pub fn with_flags(mut self, isothermal: bool, principal: bool, analytic_jet: bool) -> Self {
        self.isothermal = isothermal;
        self.principal = principal;
        self.analytic_jet = analytic_jet;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn domain(&self) -> &Domain {
        &self.domain
    }
    pub fn params(&self) -> ChartParams {
        self.params
    }
    /// `E = G`, `F = 0` holds identically.
    pub fn is_isothermal(&self) -> bool {
        self.isothermal
    }
    /// The coordinate lines are principal lines (`b = 0`).
    pub fn is_principal(&self) -> bool {
        self.principal
    }
    pub fn has_analytic_jet(&self) -> bool {
        self.analytic_jet
    }

    pub fn jet(&self, u: f64, v: f64) -> Jet {
        self.map.jet(u, v)
    }

    pub fn point(&self, u: f64, v: f64) -> Vec4 {
        self.map.jet(u, v).l
    }

    pub fn stored_normal(&self, u: f64, v: f64) -> Option<Vec4> {
        self.map.normal(u, v)
    }
}

struct Sphere;

impl ChartMap for Sphere {
    fn jet(&self, u: f64, v: f64) -> Jet {
        let sech = 1.0 / u.cosh();
        let tanh = u.tanh();
        let (sv, cv) = v.sin_cos();
        let d2 = sech * (tanh * tanh - sech * sech);
        Jet {
            l: Vec4::new(sech * cv, sech * sv, tanh, 0.0),
            lu: Vec4::new(-sech * tanh * cv, -sech * tanh * sv, sech * sech, 0.0),
            lv: Vec4::new(-sech * sv, sech * cv, 0.0, 0.0),
            luu: Vec4::new(d2 * cv, d2 * sv, -2.0 * sech * sech * tanh, 0.0),
            luv: Vec4::new(sech * tanh * sv, -sech * tanh * cv, 0.0, 0.0),
            lvv: Vec4::new(-sech * cv, -sech * sv, 0.0, 0.0),
        }
    }

    fn normal(&self, _u: f64, _v: f64) -> Option<Vec4> {
        Some(Vec4::e4())
    }
}

/// Great sphere `S³ ∩ {x₄ = 0}` in isothermal coordinates,
/// `l = (cos v, sin v, sinh u, 0) / cosh u`, with `E = 1/cosh² u` and `n = e₄`.
pub fn sphere_chart() -> SurfaceChart {
    SurfaceChart::new(
        "sphere",
        Domain::new((-2.0, 2.0), (-PI, PI)),
        ChartParams::None,
        Arc::new(Sphere),
    )
    .with_flags(true, true, true)
}

/// Lawson torus `(cos x cos αy, cos x sin αy, sin x cos y, sin x sin y)`;
/// α = 1 is the Clifford torus.
struct LawsonTorus {
    alpha: f64,
}

impl LawsonTorus {
    fn jet_xy(&self, x: f64, y: f64) -> Jet {
        let a = self.alpha;
        let (sx, cx) = x.sin_cos();
        let (say, cay) = (a * y).sin_cos();
        let (sy, cy) = y.sin_cos();
        Jet {
            l: Vec4::new(cx * cay, cx * say, sx * cy, sx * sy),
            lu: Vec4::new(-sx * cay, -sx * say, cx * cy, cx * sy),
            lv: Vec4::new(-a * cx * say, a * cx * cay, -sx * sy, sx * cy),
            luu: Vec4::new(-cx * cay, -cx * say, -sx * cy, -sx * sy),
            luv: Vec4::new(a * sx * say, -a * sx * cay, -cx * sy, cx * cy),
            lvv: Vec4::new(-a * a * cx * cay, -a * a * cx * say, -sx * cy, -sx * sy),
        }
    }

    fn normal_xy(&self, x: f64, y: f64) -> Vec4 {
        let a = self.alpha;
        let (sx, cx) = x.sin_cos();
        let (say, cay) = (a * y).sin_cos();
        let (sy, cy) = y.sin_cos();
        let g = (a * a * cx * cx + sx * sx).sqrt();
        Vec4::new(sx * say, -sx * cay, -a * cx * sy, a * cx * cy) / g
    }
}

impl ChartMap for LawsonTorus {
    fn jet(&self, u: f64, v: f64) -> Jet {
        self.jet_xy(u, v)
    }

    fn normal(&self, u: f64, v: f64) -> Option<Vec4> {
        Some(self.normal_xy(u, v))
    }
}

/// Clifford torus `(cos u cos v, cos u sin v, sin u cos v, sin u sin v)`.
pub fn clifford_chart() -> SurfaceChart {
    SurfaceChart::new(
        "clifford",
        Domain::new((0.0, TAU), (0.0, TAU)).periodic(true, true),
        ChartParams::None,
        Arc::new(LawsonTorus { alpha: 1.0 }),
    )
    .with_flags(true, false, true)
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("alpha must be positive, got {alpha}")))
    }
}

/// Lawson torus in its original `(x, y)` parameters: `E = 1`, `F = 0`,
/// `G = α² cos² x + sin² x`. Orthogonal but not isothermal.
pub fn lawson_chart(alpha: f64) -> Result<SurfaceChart> {
    check_alpha(alpha)?;
    Ok(SurfaceChart::new(
        "lawson",
        Domain::new((0.0, PI), (0.0, TAU)).periodic(true, false),
        ChartParams::Alpha { alpha },
        Arc::new(LawsonTorus { alpha }),
    )
    .with_flags(alpha == 1.0, false, true))
}

/// Lawson torus in isothermal coordinates `ū = ∫₀ˣ dτ/√G(τ)`, `v̄ = y`.
struct LawsonIsothermal {
    torus: LawsonTorus,
    map: Reparametrization,
}

impl LawsonIsothermal {
    fn x_of(&self, ub: f64) -> f64 {
        self.map.inverse(self.map.alpha().sqrt() * ub)
    }
}

impl ChartMap for LawsonIsothermal {
    fn jet(&self, ub: f64, vb: f64) -> Jet {
        let x = self.x_of(ub);
        let o = self.torus.jet_xy(x, vb);
        let g = self.map.metric(x);
        let sigma = g.sqrt();
        // x' = √G, x'' = G'(x)/2
        let half_dg = 0.5 * (1.0 - self.map.alpha().powi(2)) * (2.0 * x).sin();
        Jet {
            l: o.l,
            lu: o.lu * sigma,
            lv: o.lv,
            luu: o.luu * g + o.lu * half_dg,
            luv: o.luv * sigma,
            lvv: o.lvv,
        }
    }

    fn normal(&self, ub: f64, vb: f64) -> Option<Vec4> {
        Some(self.torus.normal_xy(self.x_of(ub), vb))
    }
}

/// Isothermal Lawson chart with `Ē = Ḡ = G(x(ū))`; its second-form
/// coefficients are `(a, b) = (0, α)` and the ū-lines are great circles.
pub fn lawson_isothermal_chart(alpha: f64) -> Result<SurfaceChart> {
    check_alpha(alpha)?;
    if alpha == 1.0 {
        return Err(Error::InvalidParameter(
            "alpha = 1 is the Clifford torus; use the clifford chart".into(),
        ));
    }
    let map = Reparametrization::new(alpha)?;
    let ub_period = map.period() / alpha.sqrt();
    Ok(SurfaceChart::new(
        "lawson-iso",
        Domain::new((0.0, ub_period), (0.0, TAU)).periodic(true, false),
        ChartParams::Alpha { alpha },
        Arc::new(LawsonIsothermal {
            torus: LawsonTorus { alpha },
            map,
        }),
    )
    .with_flags(true, false, true))
}

/// `(u_old, v_old) = M (x, y)` for a constant matrix `M`.
struct LinearReparam {
    inner: SurfaceChart,
    m: [[f64; 2]; 2],
}

impl ChartMap for LinearReparam {
    fn jet(&self, x: f64, y: f64) -> Jet {
        let [[m00, m01], [m10, m11]] = self.m;
        let u = m00 * x + m01 * y;
        let v = m10 * x + m11 * y;
        let j = self.inner.jet(u, v);
        Jet {
            l: j.l,
            lu: j.lu * m00 + j.lv * m10,
            lv: j.lu * m01 + j.lv * m11,
            luu: j.luu * (m00 * m00) + j.luv * (2.0 * m00 * m10) + j.lvv * (m10 * m10),
            luv: j.luu * (m00 * m01) + j.luv * (m00 * m11 + m10 * m01) + j.lvv * (m10 * m11),
            lvv: j.luu * (m01 * m01) + j.luv * (2.0 * m01 * m11) + j.lvv * (m11 * m11),
        }
    }

    fn normal(&self, x: f64, y: f64) -> Option<Vec4> {
        let [[m00, m01], [m10, m11]] = self.m;
        self.inner.stored_normal(m00 * x + m01 * y, m10 * x + m11 * y)
    }
}

/// Reparametrizes `chart` by an orthogonal matrix; the new domain is the
/// largest centered square whose image stays inside the old one.
fn orthogonal_reparam(chart: &SurfaceChart, m: [[f64; 2]; 2], name: String, principal: bool) -> SurfaceChart {
    let d = chart.domain();
    let (cu, cv) = d.center();
    // M is orthogonal, so M⁻¹ = Mᵀ.
    let cx = m[0][0] * cu + m[1][0] * cv;
    let cy = m[0][1] * cu + m[1][1] * cv;
    let (hu, hv) = d.half_widths();
    let r = hu.min(hv) * FRAC_1_SQRT_2;
    SurfaceChart {
        name,
        domain: Domain::new((cx - r, cx + r), (cy - r, cy + r)),
        params: chart.params,
        isothermal: chart.isothermal,
        principal,
        analytic_jet: chart.analytic_jet,
        map: Arc::new(LinearReparam {
            inner: chart.clone(),
            m,
        }),
    }
}

/// Principal isothermal chart of the Lawson torus,
/// `ū = (u + v)/√2`, `v̄ = (u − v)/√2`, with `(a, b) = (α, 0)`. The ū-line
/// circles become the bisectrices at angle π/4.
pub fn lawson_principal_chart(alpha: f64) -> Result<SurfaceChart> {
    let iso = lawson_isothermal_chart(alpha)?;
    let k = FRAC_1_SQRT_2;
    Ok(orthogonal_reparam(&iso, [[k, k], [k, -k]], "lawson-principal".into(), true))
}

/// New parameters `x = cos θ u + sin θ v`, `y = −sin θ u + cos θ v`.
///
/// A principal chart with `(a, b) = (1, 0)` acquires `(cos 2θ, −sin 2θ)`.
pub fn rotate_chart(chart: &SurfaceChart, theta: f64) -> SurfaceChart {
    let (s, c) = theta.sin_cos();
    let quarter_turns = theta / (0.5 * PI);
    let principal = chart.principal && (quarter_turns - quarter_turns.round()).abs() < 1e-12;
    orthogonal_reparam(
        chart,
        [[c, -s], [s, c]],
        format!("{} rotated by {theta}", chart.name),
        principal,
    )
}

/// Data of a generalized torus of second type:
/// `l(u, v) = e^{z/2} (p(u) + q(v))` with
/// `q(v) = β⁻² [cos βv (e^{s/2} e₁ + t e₂ + e^{−s/2} e₄) + β sin βv e₃]`,
/// `β² = t² + 2 cosh s`, and `p'' + z' p' + β² p = 0`.
#[derive(Debug)]
pub struct SecondTypeTorus {
    sol: SinhGordonSolution,
    beta: f64,
    axis: Vec4,
    p_traj: IvpSolution,
}

/// Tight tolerances: identity checks difference the jet, so the dense output
/// has to be smooth well below the verification tolerances.
const P_OPTIONS: IvpOptions = IvpOptions {
    rel_tol: 1e-12,
    abs_tol: 1e-14,
    max_step: Some(0.05),
};

impl SecondTypeTorus {
    pub fn new(s: f64, t: f64) -> Result<Self> {
        let sol = SinhGordonSolution::new(s, t)?;
        let beta2 = t * t + 2.0 * s.cosh();
        let beta = beta2.sqrt();
        let hs = (0.5 * s).exp();
        let axis = Vec4::new(hs, t, 0.0, 1.0 / hs);
        let p0 = Vec4::new((t * t + (-s).exp()) / hs, -t, 0.0, -1.0 / hs) / beta2;
        let dp0 = Vec4::new(-t / hs, 1.0, 0.0, 0.0);
        let mut y0 = [0.0; 8];
        y0[..4].copy_from_slice(&p0.0);
        y0[4..].copy_from_slice(&dp0.0);
        let w = sol.period();
        let reach = 1.5 * w;
        let p_traj = solve_ivp_two_sided(
            |u, y, dy| {
                let zp = sol.z_prime(u);
                for i in 0..4 {
                    dy[i] = y[4 + i];
                    dy[4 + i] = -zp * y[4 + i] - beta2 * y[i];
                }
            },
            &y0,
            0.0,
            -reach,
            reach,
            &P_OPTIONS,
        )?;
        Ok(SecondTypeTorus { sol, beta, axis, p_traj })
    }

    pub fn solution(&self) -> &SinhGordonSolution {
        &self.sol
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `e^{s/2} e₁ + t e₂ + e^{−s/2} e₄`.
    pub fn axis(&self) -> Vec4 {
        self.axis
    }

    pub fn p_trajectory(&self) -> &IvpSolution {
        &self.p_traj
    }

    /// `(p(u), p'(u))` from the dense output.
    pub fn p_state(&self, u: f64) -> (Vec4, Vec4) {
        let mut y = [0.0; 8];
        self.p_traj.eval_extrapolated_into(u, &mut y);
        (
            Vec4([y[0], y[1], y[2], y[3]]),
            Vec4([y[4], y[5], y[6], y[7]]),
        )
    }

    pub fn q(&self, v: f64) -> Vec4 {
        let (sb, cb) = (self.beta * v).sin_cos();
        (self.axis * cb + Vec4::e3() * (self.beta * sb)) / (self.beta * self.beta)
    }

    pub fn q_prime(&self, v: f64) -> Vec4 {
        let (sb, cb) = (self.beta * v).sin_cos();
        (self.axis * (-sb) + Vec4::e3() * (self.beta * cb)) / self.beta
    }

    /// Normal from the derivative formula `n = l_uu − (E_u/2E) l_u + E l`.
    fn normal_from_jet(&self, u: f64, jet: &Jet) -> Vec4 {
        let (z, zp) = self.sol.z_explicit(u);
        jet.luu - jet.lu * (0.5 * zp) + jet.l * z.exp()
    }

    pub fn chart(self: &Arc<Self>) -> SurfaceChart {
        let w = self.sol.period();
        SurfaceChart::new(
            "second-type",
            Domain::new((-0.5 * w, 0.5 * w), (0.0, TAU / self.beta)).periodic(false, true),
            ChartParams::SinhGordon {
                s: self.sol.s(),
                t: self.sol.t(),
            },
            self.clone(),
        )
        .with_flags(true, true, false)
    }
}

impl ChartMap for SecondTypeTorus {
    fn jet(&self, u: f64, v: f64) -> Jet {
        let (z, zp) = self.sol.z_explicit(u);
        let zpp = -4.0 * z.sinh();
        let f = (0.5 * z).exp();
        let (p, dp) = self.p_state(u);
        let q = self.q(v);
        let dq = self.q_prime(v);
        let b2 = self.beta * self.beta;
        let ddp = dp * (-zp) - p * b2;
        let l = (p + q) * f;
        let lu = l * (0.5 * zp) + dp * f;
        let lv = dq * f;
        Jet {
            l,
            lu,
            lv,
            luu: l * (0.5 * zpp) + lu * (0.5 * zp) + (dp * (0.5 * zp) + ddp) * f,
            luv: lv * (0.5 * zp),
            lvv: q * (-b2 * f),
        }
    }

    fn normal(&self, u: f64, v: f64) -> Option<Vec4> {
        let jet = self.jet(u, v);
        Some(self.normal_from_jet(u, &jet))
    }
}

pub fn second_type_torus(s: f64, t: f64) -> Result<Arc<SecondTypeTorus>> {
    Ok(Arc::new(SecondTypeTorus::new(s, t)?))
}

/// Generalized torus of second type on `[−ω, ω] × [0, 2π/β]`.
pub fn second_type_torus_chart(s: f64, t: f64) -> Result<SurfaceChart> {
    Ok(second_type_torus(s, t)?.chart())
}

/// `g(v) = β⁻² (cos βv − 1)(e^{s/2} e₁ + t e₂ + e^{−s/2} e₄) + β⁻¹ sin βv e₃`,
/// the solution of `g'' + β² g = −(e^{s/2} e₁ + t e₂ + e^{−s/2} e₄)`, `g(0) = 0`, `g'(0) = e₃`.
pub fn g_of_v(s: f64, t: f64, v: f64) -> Vec4 {
    let (axis, beta) = g_parts(s, t);
    let (sb, cb) = (beta * v).sin_cos();
    axis * ((cb - 1.0) / (beta * beta)) + Vec4::e3() * (sb / beta)
}

/// `(g'(v), g''(v))`.
pub fn g_derivatives(s: f64, t: f64, v: f64) -> (Vec4, Vec4) {
    let (axis, beta) = g_parts(s, t);
    let (sb, cb) = (beta * v).sin_cos();
    (
        axis * (-sb / beta) + Vec4::e3() * cb,
        axis * (-cb) + Vec4::e3() * (-beta * sb),
    )
}

fn g_parts(s: f64, t: f64) -> (Vec4, f64) {
    let hs = (0.5 * s).exp();
    (Vec4::new(hs, t, 0.0, 1.0 / hs), (t * t + 2.0 * s.cosh()).sqrt())
}
