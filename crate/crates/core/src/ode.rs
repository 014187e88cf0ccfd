//! Numerical kernel: adaptive quadrature, explicit Runge–Kutta integration with
//! dense output, and inversion of monotone scalar functions.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Adaptive Simpson quadrature with a Richardson-corrected error estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrature {
    pub abs_tol: f64,
    pub max_depth: u32,
}

impl Default for Quadrature {
    fn default() -> Self {
        Quadrature {
            abs_tol: 1e-12,
            max_depth: 40,
        }
    }
}

impl Quadrature {
    pub fn new(abs_tol: f64, max_depth: u32) -> Result<Self> {
        if !(abs_tol > 0.0) {
            return Err(Error::InvalidParameter(format!("abs_tol must be positive, got {abs_tol}")));
        }
        if max_depth == 0 {
            return Err(Error::InvalidParameter("max_depth must be at least 1".into()));
        }
        Ok(Quadrature { abs_tol, max_depth })
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> Result<f64> {
        integrate(f, a, b, self)
    }
}

/// Integrates `f` over `[a, b]`; a reversed interval flips the sign.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, q: &Quadrature) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    if a > b {
        return integrate(f, b, a, q).map(|x| -x);
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(&f, a, b, fa, fm, fb, whole, q.abs_tol, q.max_depth, q)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    q: &Quadrature,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::ToleranceNotReached {
            tol: q.abs_tol,
            max_depth: q.max_depth,
        });
    }
    let l = simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, q)?;
    let r = simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, q)?;
    Ok(l + r)
}

const GL_ORDER: usize = 16;

fn gauss_legendre_rule() -> &'static ([f64; GL_ORDER], [f64; GL_ORDER]) {
    static RULE: OnceLock<([f64; GL_ORDER], [f64; GL_ORDER])> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GL_ORDER;
        let mut nodes = [0.0; GL_ORDER];
        let mut weights = [0.0; GL_ORDER];
        for i in 0..n {
            // Newton on P_n starting from the Chebyshev-like guess.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        (nodes, weights)
    })
}

/// Composite 16-point Gauss–Legendre rule on `panels` equal subintervals.
///
/// The node layout scales continuously with the endpoints, so the result is a
/// smooth function of `a` and `b`; adaptive rules are only piecewise smooth.
pub fn gauss_legendre<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    let (nodes, weights) = gauss_legendre_rule();
    let width = (b - a) / panels as f64;
    let half = 0.5 * width;
    let mut sum = 0.0;
    for k in 0..panels {
        let mid = a + (k as f64 + 0.5) * width;
        let mut panel = 0.0;
        for (x, w) in nodes.iter().zip(weights.iter()) {
            panel += w * f(mid + half * x);
        }
        sum += panel * half;
    }
    sum
}

/// Tolerances and limits for [`solve_ivp_with`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IvpOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Largest step magnitude; `None` means the whole span.
    pub max_step: Option<f64>,
}

impl Default for IvpOptions {
    fn default() -> Self {
        IvpOptions {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_step: None,
        }
    }
}

/// One accepted step with its continuous extension.
#[derive(Clone, Debug)]
struct DenseStep {
    u0: f64,
    h: f64,
    // y(θ) = r0 + θ (r1 + (1-θ) (r2 + θ (r3 + (1-θ) r4)))
    coeffs: [Vec<f64>; 5],
}

impl DenseStep {
    fn eval_into(&self, u: f64, out: &mut [f64]) {
        let theta = (u - self.u0) / self.h;
        let theta1 = 1.0 - theta;
        let [r0, r1, r2, r3, r4] = &self.coeffs;
        for i in 0..out.len() {
            out[i] = r0[i] + theta * (r1[i] + theta1 * (r2[i] + theta * (r3[i] + theta1 * r4[i])));
        }
    }
}

/// Dense solution of an initial-value problem. Immutable after construction.
#[derive(Clone, Debug)]
pub struct IvpSolution {
    grid: Vec<f64>,
    states: Vec<Vec<f64>>,
    steps: Vec<DenseStep>,
}

impl IvpSolution {
    /// Accepted step boundaries, strictly increasing.
    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn states(&self) -> &[Vec<f64>] {
        &self.states
    }

    pub fn span(&self) -> (f64, f64) {
        (self.grid[0], *self.grid.last().unwrap())
    }

    pub fn dim(&self) -> usize {
        self.states[0].len()
    }

    pub fn eval(&self, u: f64) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.dim()];
        self.eval_into(u, &mut out)?;
        Ok(out)
    }

    pub fn eval_into(&self, u: f64, out: &mut [f64]) -> Result<()> {
        let (lo, hi) = self.span();
        if !(u >= lo && u <= hi) {
            return Err(Error::OutOfSpan(u));
        }
        self.eval_extrapolated_into(u, out);
        Ok(())
    }

    /// Like [`eval_into`](Self::eval_into) but continues the first or last step
    /// polynomial beyond the span instead of failing.
    pub fn eval_extrapolated_into(&self, u: f64, out: &mut [f64]) {
        if self.steps.is_empty() {
            out.copy_from_slice(&self.states[0]);
            return;
        }
        let idx = match self.grid.partition_point(|&g| g <= u) {
            0 => 0,
            k => (k - 1).min(self.steps.len() - 1),
        };
        self.steps[idx].eval_into(u, out);
    }
}

// Dormand–Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

/// Solves `y' = field(u, y)` from `span.0` to `span.1` (either direction).
pub fn solve_ivp<F>(field: F, y0: &[f64], span: (f64, f64), rel_tol: f64, abs_tol: f64) -> Result<IvpSolution>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    solve_ivp_with(
        field,
        y0,
        span,
        &IvpOptions {
            rel_tol,
            abs_tol,
            max_step: None,
        },
    )
}

pub fn solve_ivp_with<F>(field: F, y0: &[f64], span: (f64, f64), opts: &IvpOptions) -> Result<IvpSolution>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    let raw = integrate_dopri(&field, y0, span, opts)?;
    Ok(assemble(raw, span.1 < span.0))
}

/// Integrates forward and backward from `u_init` and joins the two halves into
/// one solution covering `[lo, hi]`.
pub fn solve_ivp_two_sided<F>(field: F, y0: &[f64], u_init: f64, lo: f64, hi: f64, opts: &IvpOptions) -> Result<IvpSolution>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    if !(lo <= u_init && u_init <= hi) {
        return Err(Error::InvalidParameter(format!(
            "initial point {u_init} outside [{lo}, {hi}]"
        )));
    }
    let back = assemble(integrate_dopri(&field, y0, (u_init, lo), opts)?, true);
    let fwd = assemble(integrate_dopri(&field, y0, (u_init, hi), opts)?, false);
    let mut grid = back.grid;
    let mut states = back.states;
    let mut steps = back.steps;
    grid.pop();
    states.pop();
    grid.extend(fwd.grid);
    states.extend(fwd.states);
    steps.extend(fwd.steps);
    Ok(IvpSolution { grid, states, steps })
}

struct RawSolution {
    grid: Vec<f64>,
    states: Vec<Vec<f64>>,
    steps: Vec<DenseStep>,
}

fn assemble(mut raw: RawSolution, backward: bool) -> IvpSolution {
    if backward {
        raw.grid.reverse();
        raw.states.reverse();
        raw.steps.reverse();
    }
    IvpSolution {
        grid: raw.grid,
        states: raw.states,
        steps: raw.steps,
    }
}

fn integrate_dopri<F>(field: &F, y0: &[f64], span: (f64, f64), opts: &IvpOptions) -> Result<RawSolution>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    if !(opts.rel_tol > 0.0 && opts.abs_tol > 0.0) {
        return Err(Error::InvalidParameter("tolerances must be positive".into()));
    }
    let n = y0.len();
    let (start, end) = span;
    let length = (end - start).abs();
    let mut raw = RawSolution {
        grid: vec![start],
        states: vec![y0.to_vec()],
        steps: Vec::new(),
    };
    if length == 0.0 {
        return Ok(raw);
    }
    let dir = (end - start).signum();
    let max_step = opts.max_step.unwrap_or(length).min(length);
    let min_step = 1e-14 * length;

    let mut k: Vec<Vec<f64>> = vec![vec![0.0; n]; 7];
    let mut y = y0.to_vec();
    let mut u = start;
    field(u, &y, &mut k[0]);

    let norm = |v: &[f64], w: &[f64]| -> f64 {
        let s: f64 = v
            .iter()
            .zip(w)
            .map(|(a, b)| a * a / (b * b))
            .sum();
        (s / n as f64).sqrt()
    };
    let scale0: Vec<f64> = y.iter().map(|x| opts.abs_tol + opts.rel_tol * x.abs()).collect();
    let d0 = norm(&y, &scale0);
    let d1 = norm(&k[0], &scale0);
    let mut h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    h = h.min(max_step).max(min_step);

    let mut ytmp = vec![0.0; n];
    let mut ynew = vec![0.0; n];
    let mut err = vec![0.0; n];
    let mut scale = vec![0.0; n];
    let mut last_rejected = false;
    loop {
        let remaining = (end - u) * dir;
        if remaining <= 0.0 {
            break;
        }
        let mut last = false;
        if h >= remaining {
            h = remaining;
            last = true;
        }
        let hs = h * dir;
        for s in 1..7 {
            for i in 0..n {
                let mut acc = y[i];
                for j in 0..s {
                    acc += hs * A[s][j] * k[j][i];
                }
                ytmp[i] = acc;
            }
            field(u + C[s] * hs, &ytmp, &mut k[s]);
            if s == 6 {
                ynew.copy_from_slice(&ytmp);
            }
        }
        for i in 0..n {
            let mut e = 0.0;
            for j in 0..7 {
                e += E[j] * k[j][i];
            }
            err[i] = hs * e;
            scale[i] = opts.abs_tol + opts.rel_tol * y[i].abs().max(ynew[i].abs());
        }
        let err_norm = norm(&err, &scale);
        if !err_norm.is_finite() {
            h *= 0.2;
            if h < min_step {
                return Err(Error::StepUnderflow { at: u, step: h });
            }
            last_rejected = true;
            continue;
        }
        if err_norm <= 1.0 {
            let mut r: [Vec<f64>; 5] = std::array::from_fn(|_| vec![0.0; n]);
            for i in 0..n {
                let ydiff = ynew[i] - y[i];
                let bspl = hs * k[0][i] - ydiff;
                r[0][i] = y[i];
                r[1][i] = ydiff;
                r[2][i] = bspl;
                r[3][i] = ydiff - hs * k[6][i] - bspl;
                let mut d = 0.0;
                for j in 0..7 {
                    d += D[j] * k[j][i];
                }
                r[4][i] = hs * d;
            }
            raw.steps.push(DenseStep { u0: u, h: hs, coeffs: r });
            u = if last { end } else { u + hs };
            y.copy_from_slice(&ynew);
            k.swap(0, 6);
            raw.grid.push(u);
            raw.states.push(y.clone());
            if last {
                break;
            }
            let mut fac = 0.9 * err_norm.max(1e-10).powf(-0.2);
            fac = fac.clamp(0.2, 5.0);
            if last_rejected {
                fac = fac.min(1.0);
            }
            h = (h * fac).min(max_step);
            last_rejected = false;
        } else {
            let fac = (0.9 * err_norm.powf(-0.2)).max(0.2);
            h *= fac;
            last_rejected = true;
            if h < min_step {
                return Err(Error::StepUnderflow { at: u, step: h });
            }
        }
    }
    Ok(raw)
}

/// Inverts a strictly monotone function by bisection on `bracket`.
pub fn invert_monotone<F: Fn(f64) -> f64>(f: F, target: f64, bracket: (f64, f64), tol: f64) -> Result<f64> {
    invert_impl(&f, None::<&fn(f64) -> f64>, target, bracket, tol)
}

/// Safeguarded Newton iteration: Newton steps when they stay inside the
/// current bracket, bisection otherwise.
pub fn invert_monotone_newton<F, D>(f: F, df: D, target: f64, bracket: (f64, f64), tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    invert_impl(&f, Some(&df), target, bracket, tol)
}

fn invert_impl<F, D>(f: &F, df: Option<&D>, target: f64, bracket: (f64, f64), tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let (mut lo, mut hi) = if bracket.0 <= bracket.1 { bracket } else { (bracket.1, bracket.0) };
    let g = |x: f64| f(x) - target;
    let mut g_lo = g(lo);
    let g_hi = g(hi);
    if g_lo == 0.0 {
        return Ok(lo);
    }
    if g_hi == 0.0 {
        return Ok(hi);
    }
    if g_lo.signum() == g_hi.signum() || !g_lo.is_finite() || !g_hi.is_finite() {
        return Err(Error::NoBracket {
            target,
            lo,
            hi,
            f_lo: g_lo + target,
            f_hi: g_hi + target,
        });
    }
    let mut x = match df {
        // Secant guess as Newton starting point.
        Some(_) => lo - g_lo * (hi - lo) / (g_hi - g_lo),
        None => 0.5 * (lo + hi),
    };
    let mut best = (f64::INFINITY, x);
    for _ in 0..400 {
        let gx = g(x);
        if gx.abs() < best.0 {
            best = (gx.abs(), x);
        }
        if gx == 0.0 {
            return Ok(x);
        }
        if gx.signum() == g_lo.signum() {
            lo = x;
            g_lo = gx;
        } else {
            hi = x;
        }
        let mut next = 0.5 * (lo + hi);
        if let Some(d) = df {
            let slope = d(x);
            if slope != 0.0 && slope.is_finite() {
                let cand = x - gx / slope;
                if cand > lo && cand < hi {
                    next = cand;
                }
            }
            // Newton has converged once the correction is at rounding level.
            if gx.abs() <= tol && (next - x).abs() <= 4.0 * f64::EPSILON * x.abs().max(1.0) {
                return Ok(next);
            }
        } else if gx.abs() <= tol {
            return Ok(x);
        }
        if hi - lo <= 2.0 * f64::EPSILON * lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE) {
            break;
        }
        x = next;
    }
    if best.0 <= tol {
        Ok(best.1)
    } else {
        Err(Error::ToleranceNotReached { tol, max_depth: 400 })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E as EULER, FRAC_PI_2, PI};

    /// Fixed-step Romberg on 2^k panels, independent of the adaptive path.
    fn romberg(f: impl Fn(f64) -> f64, a: f64, b: f64, levels: usize) -> f64 {
        let mut r = vec![vec![0.0; levels + 1]; levels + 1];
        r[0][0] = 0.5 * (b - a) * (f(a) + f(b));
        for i in 1..=levels {
            let n = 1usize << i;
            let h = (b - a) / n as f64;
            let mut s = 0.0;
            for k in (1..n).step_by(2) {
                s += f(a + k as f64 * h);
            }
            r[i][0] = 0.5 * r[i - 1][0] + h * s;
            for j in 1..=i {
                let p = 4f64.powi(j as i32);
                r[i][j] = (p * r[i][j - 1] - r[i - 1][j - 1]) / (p - 1.0);
            }
        }
        r[levels][levels.min(6)]
    }

    #[test]
    fn integrates_constant_and_cosine() {
        let q = Quadrature::default();
        assert!((integrate(|_| 1.0, 0.0, PI, &q).unwrap() - PI).abs() < 1e-14);
        assert!((integrate(f64::cos, 0.0, FRAC_PI_2, &q).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reversed_interval_flips_sign() {
        let q = Quadrature::default();
        let fwd = integrate(f64::sin, 0.0, 1.0, &q).unwrap();
        let back = integrate(f64::sin, 1.0, 0.0, &q).unwrap();
        assert_eq!(fwd, -back);
    }

    #[test]
    fn elliptic_type_integrand_matches_romberg() {
        let f = |t: f64| 1.0 / (4.0 * t.cos().powi(2) + t.sin().powi(2)).sqrt();
        let oracle = romberg(f, 0.0, FRAC_PI_2, 20);
        let got = integrate(f, 0.0, FRAC_PI_2, &Quadrature::default()).unwrap();
        assert!((got - oracle).abs() < 1e-10, "{got} vs {oracle}");
        let gl = gauss_legendre(f, 0.0, FRAC_PI_2, 8);
        assert!((gl - oracle).abs() < 1e-13);
    }

    #[test]
    fn depth_exhaustion_is_reported() {
        let q = Quadrature::new(1e-15, 2).unwrap();
        let r = integrate(|x: f64| (50.0 * x).sin(), 0.0, 3.0, &q);
        assert!(matches!(r, Err(Error::ToleranceNotReached { .. })));
    }

    #[test]
    fn invalid_quadrature_settings_are_rejected() {
        assert!(Quadrature::new(0.0, 10).is_err());
        assert!(Quadrature::new(1e-8, 0).is_err());
    }

    #[test]
    fn splitting_agrees_with_whole_interval() {
        let q = Quadrature::default();
        let f = |x: f64| (x * x).exp() / (1.0 + x);
        let whole = integrate(f, 0.0, 1.5, &q).unwrap();
        for split in [0.1, 0.77, 1.2] {
            let parts = integrate(f, 0.0, split, &q).unwrap() + integrate(f, split, 1.5, &q).unwrap();
            assert!((parts - whole).abs() <= 2.0 * q.abs_tol);
        }
    }

    #[test]
    fn constant_field_gives_constant_trajectory() {
        let sol = solve_ivp(|_, _, dy| dy.fill(0.0), &[3.5, -1.0], (0.0, 2.0), 1e-10, 1e-12).unwrap();
        for u in [0.0, 0.3, 1.7, 2.0] {
            assert_eq!(sol.eval(u).unwrap(), vec![3.5, -1.0]);
        }
    }

    #[test]
    fn exponential_growth_reaches_e() {
        let sol = solve_ivp(|_, y, dy| dy[0] = y[0], &[1.0], (0.0, 1.0), 1e-10, 1e-12).unwrap();
        let y1 = sol.eval(1.0).unwrap()[0];
        assert!((y1 - EULER).abs() < 1e-9);
        for u in [0.13, 0.5, 0.91] {
            assert!((sol.eval(u).unwrap()[0] - u.exp()).abs() < 1e-9);
        }
    }

    #[test]
    fn backward_integration_and_two_sided_join() {
        let opts = IvpOptions::default();
        let back = solve_ivp_with(|_, y, dy| dy[0] = y[0], &[1.0], (0.0, -1.0), &opts).unwrap();
        assert!(back.grid().windows(2).all(|w| w[0] < w[1]));
        assert!((back.eval(-1.0).unwrap()[0] - (-1f64).exp()).abs() < 1e-9);
        let both = solve_ivp_two_sided(|_, y, dy| dy[0] = y[0], &[1.0], 0.0, -1.0, 2.0, &opts).unwrap();
        assert!(both.grid().windows(2).all(|w| w[0] < w[1]));
        for u in [-0.9, -0.2, 0.0, 0.4, 1.9] {
            assert!((both.eval(u).unwrap()[0] - u.exp()).abs() < 1e-8 * u.exp());
        }
        assert!(matches!(both.eval(2.5), Err(Error::OutOfSpan(_))));
    }

    #[test]
    fn dense_output_reproduces_grid_states() {
        let sol = solve_ivp(
            |_, y, dy| {
                dy[0] = y[1];
                dy[1] = -y[0];
            },
            &[1.0, 0.0],
            (0.0, 10.0),
            1e-10,
            1e-12,
        )
        .unwrap();
        for (u, s) in sol.grid().iter().zip(sol.states()) {
            let d = sol.eval(*u).unwrap();
            assert!((d[0] - s[0]).abs() < 1e-14 && (d[1] - s[1]).abs() < 1e-14);
        }
    }

    #[test]
    fn step_underflow_on_blowup() {
        // y' = y², y(0) = 1 blows up at u = 1.
        let r = solve_ivp(|_, y, dy| dy[0] = y[0] * y[0], &[1.0], (0.0, 2.0), 1e-10, 1e-12);
        assert!(matches!(r, Err(Error::StepUnderflow { .. })));
    }

    #[test]
    fn inverts_identity_and_cube() {
        let x = invert_monotone(|x| x, 0.3, (0.0, 1.0), 1e-14).unwrap();
        assert!((x - 0.3).abs() < 1e-14);
        let x = invert_monotone_newton(|x| x * x * x, |x| 3.0 * x * x, 8.0, (0.0, 3.0), 1e-13).unwrap();
        assert!((x - 2.0).abs() < 1e-14);
    }

    #[test]
    fn missing_bracket_is_reported() {
        let r = invert_monotone(|x| x, 5.0, (0.0, 1.0), 1e-12);
        assert!(matches!(r, Err(Error::NoBracket { .. })));
    }

    proptest::proptest! {
        #[test]
        fn inversion_round_trips(target in -0.99f64..7.99) {
            let f = |x: f64| x * x * x - x.cos();
            let x = invert_monotone(f, target, (0.0, 2.5), 1e-12).unwrap();
            proptest::prop_assert!((f(x) - target).abs() <= 1e-12);
        }
    }
}
