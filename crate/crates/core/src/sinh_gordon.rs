//! The scalar equation `z'' + 4 sinh z = 0` and its explicit periodic solutions.
//!
//! Every solution is a shift of `z(u) = ln((α² cos² x + sin² x) / α)` with
//! `x = h⁻¹(u)`, where `h(x) = √α ∫₀ˣ dτ / √(α² cos² τ + sin² τ)` is the
//! isothermal reparametrization of the Lawson torus with parameter α.
//!
//! With `m = 1 − 1/α²` the integral is an incomplete elliptic integral of the
//! first kind, `h(x) = sin x · R_F(cos² x, 1 − m sin² x, 1) / √α` on `[−π/2, π/2]`,
//! which is how it is evaluated.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::ode::invert_monotone_newton;

/// The map `h` for a fixed α, with its period `ω = h(π)` cached.
///
/// `h` is odd and quasi-periodic, `h(x + π) = h(x) + ω`, so only the integral
/// over `[0, π/2]` is ever evaluated by quadrature.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Reparametrization {
    alpha: f64,
    sqrt_alpha: f64,
    omega: f64,
}

impl Reparametrization {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidParameter(format!("alpha must be positive, got {alpha}")));
        }
        let mut map = Reparametrization {
            alpha,
            sqrt_alpha: alpha.sqrt(),
            omega: 0.0,
        };
        map.omega = 2.0 * map.quarter(FRAC_PI_2);
        Ok(map)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `ω = h(π)`.
    pub fn period(&self) -> f64 {
        self.omega
    }

    /// `α² cos² x + sin² x`.
    pub fn metric(&self, x: f64) -> f64 {
        let (s, c) = x.sin_cos();
        self.alpha * self.alpha * c * c + s * s
    }

    // y in [0, π/2]
    fn quarter(&self, y: f64) -> f64 {
        let m = 1.0 - 1.0 / (self.alpha * self.alpha);
        let (s, c) = y.sin_cos();
        s * carlson_rf(c * c, 1.0 - m * s * s, 1.0) / self.sqrt_alpha
    }

    pub fn h(&self, x: f64) -> f64 {
        let k = (x / PI).round();
        let r = x - k * PI;
        k * self.omega + r.signum() * self.quarter(r.abs().min(FRAC_PI_2))
    }

    /// `h'(x) = √α / √(α² cos² x + sin² x)`.
    pub fn dh(&self, x: f64) -> f64 {
        self.sqrt_alpha / self.metric(x).sqrt()
    }

    /// `h⁻¹(u)`: reduce `u` modulo ω, invert on `[0, π]`, shift back.
    pub fn inverse(&self, u: f64) -> f64 {
        let k = (u / self.omega).floor();
        let r = u - k * self.omega;
        if r == 0.0 {
            return k * PI;
        }
        let x = invert_monotone_newton(
            |x| self.h(x),
            |x| self.dh(x),
            r,
            (0.0, PI),
            1e-13 * self.omega.max(1.0),
        )
        .expect("h is strictly increasing with h(0) = 0 <= r < omega = h(pi)");
        k * PI + x
    }
}

/// Carlson's symmetric elliptic integral
/// `R_F(x, y, z) = ½ ∫₀^∞ dt / √((t + x)(t + y)(t + z))` by duplication;
/// at most one argument may vanish.
pub fn carlson_rf(mut x: f64, mut y: f64, mut z: f64) -> f64 {
    const ERRTOL: f64 = 1e-3;
    loop {
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * (sy + sz) + sy * sz;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
        let mean = (x + y + z) / 3.0;
        let (dx, dy) = (1.0 - x / mean, 1.0 - y / mean);
        let dz = -(dx + dy);
        if dx.abs().max(dy.abs()).max(dz.abs()) < ERRTOL {
            let e2 = dx * dy - dz * dz;
            let e3 = dx * dy * dz;
            return (1.0 + (e2 / 24.0 - 0.1 - 3.0 * e3 / 44.0) * e2 + e3 / 14.0) / mean.sqrt();
        }
    }
}

/// `h(α, x)`.
pub fn h_map(alpha: f64, x: f64) -> Result<f64> {
    Ok(Reparametrization::new(alpha)?.h(x))
}

/// `h⁻¹(α, u)`.
pub fn h_inverse(alpha: f64, u: f64) -> Result<f64> {
    Ok(Reparametrization::new(alpha)?.inverse(u))
}

/// The solution with `z(0) = s`, `z'(0) = 2t`, written as `z(u) = z_α(u + u₀)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SinhGordonSolution {
    s: f64,
    t: f64,
    x0: f64,
    u0: f64,
    map: Reparametrization,
}

/// Builds the explicit solution for initial data `(s, t)`.
///
/// α is the larger root of `e^s α² − (1 + e^{2s} + t² e^s) α + e^s = 0`;
/// the other root is `1/α` and yields the same family.
pub fn params_from_st(s: f64, t: f64) -> Result<SinhGordonSolution> {
    SinhGordonSolution::new(s, t)
}

impl SinhGordonSolution {
    pub fn new(s: f64, t: f64) -> Result<Self> {
        if !(s.is_finite() && t.is_finite()) {
            return Err(Error::InvalidParameter(format!("non-finite (s, t) = ({s}, {t})")));
        }
        if s == 0.0 && t == 0.0 {
            return Err(Error::DegenerateParameters);
        }
        let es = s.exp();
        let b = 1.0 + es * es + t * t * es;
        let disc = b * b - 4.0 * es * es;
        if disc <= 0.0 {
            return Err(Error::DegenerateParameters);
        }
        let alpha = (b + disc.sqrt()) / (2.0 * es);
        if (alpha - 1.0).abs() < 1e-9 {
            return Err(Error::DegenerateParameters);
        }
        let one_minus = 1.0 - alpha * alpha;
        let sin2 = 2.0 * alpha * t * (0.5 * s).exp() / one_minus;
        let cos2 = (1.0 + alpha * alpha - 2.0 * alpha * es) / one_minus;
        let x0 = 0.5 * sin2.atan2(cos2);
        let map = Reparametrization::new(alpha)?;
        Ok(SinhGordonSolution {
            s,
            t,
            x0,
            u0: map.h(x0),
            map,
        })
    }

    pub fn s(&self) -> f64 {
        self.s
    }
    pub fn t(&self) -> f64 {
        self.t
    }
    pub fn alpha(&self) -> f64 {
        self.map.alpha
    }
    pub fn x0(&self) -> f64 {
        self.x0
    }
    pub fn u0(&self) -> f64 {
        self.u0
    }
    pub fn reparametrization(&self) -> &Reparametrization {
        &self.map
    }

    /// Period `ω = h(π)`.
    pub fn period(&self) -> f64 {
        self.map.omega
    }

    /// `e^s α² − (1 + e^{2s} + t² e^s) α + e^s` at the chosen α.
    pub fn alpha_quadratic_residual(&self) -> f64 {
        let es = self.s.exp();
        let a = self.alpha();
        es * a * a - (1.0 + es * es + self.t * self.t * es) * a + es
    }

    /// Lawson parameter `x = h⁻¹(u + u₀)` at which the shifted solution is read off.
    pub fn lawson_x(&self, u: f64) -> f64 {
        self.map.inverse(u + self.u0)
    }

    /// `(z(u), z'(u))`.
    pub fn z_explicit(&self, u: f64) -> (f64, f64) {
        let a = self.alpha();
        let x = self.lawson_x(u);
        let g = self.map.metric(x);
        let z = (g / a).ln();
        let zp = (1.0 - a * a) * (2.0 * x).sin() / (self.map.sqrt_alpha * g.sqrt());
        (z, zp)
    }

    pub fn z(&self, u: f64) -> f64 {
        self.z_explicit(u).0
    }

    pub fn z_prime(&self, u: f64) -> f64 {
        self.z_explicit(u).1
    }

    /// `z''(u) = −4 sinh z(u)`, read from the equation itself.
    pub fn z_second(&self, u: f64) -> f64 {
        -4.0 * self.z(u).sinh()
    }

    /// Conformal factor `E(u) = e^{z(u)}`.
    pub fn conformal_factor(&self, u: f64) -> f64 {
        self.z(u).exp()
    }

    /// `(z')² + 8 cosh z − 4t² − 8 cosh s`, zero along any exact solution.
    pub fn energy_residual(&self, u: f64) -> f64 {
        let (z, zp) = self.z_explicit(u);
        energy(z, zp) - self.initial_energy()
    }

    pub fn initial_energy(&self) -> f64 {
        4.0 * self.t * self.t + 8.0 * self.s.cosh()
    }
}

/// Conserved quantity `(z')² + 8 cosh z`.
pub fn energy(z: f64, z_prime: f64) -> f64 {
    z_prime * z_prime + 8.0 * z.cosh()
}

/// Right-hand side of `z'' = −4 sinh z` as a first-order system in `(z, z')`.
pub fn sinh_gordon_field(_u: f64, y: &[f64], dy: &mut [f64]) {
    dy[0] = y[1];
    dy[1] = -4.0 * y[0].sinh();
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ode::{integrate, solve_ivp, Quadrature};
    use rand::{rngs::StdRng, Rng, SeedableRng};

    fn romberg(f: impl Fn(f64) -> f64, a: f64, b: f64, levels: usize) -> f64 {
        let mut prev = vec![0.5 * (b - a) * (f(a) + f(b))];
        for i in 1..=levels {
            let n = 1usize << i;
            let h = (b - a) / n as f64;
            let odd: f64 = (1..n).step_by(2).map(|k| f(a + k as f64 * h)).sum();
            let mut row = vec![0.5 * prev[0] + h * odd];
            for j in 1..=i.min(6) {
                let p = 4f64.powi(j as i32);
                row.push((p * row[j - 1] - prev[j - 1]) / (p - 1.0));
            }
            prev = row;
        }
        *prev.last().unwrap()
    }

    #[test]
    fn carlson_reference_values() {
        assert!((carlson_rf(1.0, 2.0, 0.0) - 1.311_028_777_146_1).abs() < 1e-12);
        assert!((carlson_rf(2.0, 3.0, 4.0) - 0.584_082_841_677_15).abs() < 1e-12);
        assert!((carlson_rf(4.0, 4.0, 4.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn h_agrees_with_gauss_legendre() {
        for alpha in [0.08f64, 0.5, 2.0, 3.7, 12.0] {
            let a2 = alpha * alpha;
            let f = |t: f64| alpha.sqrt() / (a2 * t.cos().powi(2) + t.sin().powi(2)).sqrt();
            for x in [0.1, 0.9, FRAC_PI_2, 2.4, PI] {
                let gl = crate::ode::gauss_legendre(f, 0.0, x, 64);
                let h = h_map(alpha, x).unwrap();
                assert!((h - gl).abs() < 1e-13 * gl.max(1.0), "alpha {alpha} x {x}: {h} vs {gl}");
            }
        }
    }

    #[test]
    fn h_is_identity_for_alpha_one() {
        for x in [0.0, 0.7, PI, -2.3, 7.5] {
            assert!((h_map(1.0, x).unwrap() - x).abs() < 1e-13);
        }
    }

    #[test]
    fn h_matches_romberg_at_quarter_period() {
        let f = |t: f64| 2f64.sqrt() / (4.0 * t.cos().powi(2) + t.sin().powi(2)).sqrt();
        let oracle = romberg(f, 0.0, FRAC_PI_2, 20);
        assert!((h_map(2.0, FRAC_PI_2).unwrap() - oracle).abs() < 1e-10);
    }

    #[test]
    fn h_agrees_with_adaptive_simpson() {
        let alpha = 3.7f64;
        let q = Quadrature::default();
        for x in [0.3, 1.4, 2.9, 5.1] {
            let direct = alpha.sqrt()
                * integrate(
                    |t: f64| 1.0 / (alpha * alpha * t.cos().powi(2) + t.sin().powi(2)).sqrt(),
                    0.0,
                    x,
                    &q,
                )
                .unwrap();
            assert!((h_map(alpha, x).unwrap() - direct).abs() < 1e-11);
        }
    }

    #[test]
    fn h_is_odd_and_quasi_periodic() {
        let map = Reparametrization::new(2.5).unwrap();
        for x in [0.2, 1.1, 2.4] {
            assert!((map.h(-x) + map.h(x)).abs() < 1e-15);
            assert!((map.h(x + PI) - map.h(x) - map.period()).abs() < 1e-13);
        }
    }

    #[test]
    fn h_inverse_round_trips() {
        assert!((h_inverse(1.0, 0.3).unwrap() - 0.3).abs() < 1e-14);
        assert_eq!(h_inverse(2.0, 0.0).unwrap(), 0.0);
        let u = h_map(2.0, 1.2).unwrap();
        assert!((h_inverse(2.0, u).unwrap() - 1.2).abs() < 1e-10);
        let map = Reparametrization::new(0.4).unwrap();
        for u in [-7.0, -0.1, 0.9, 3.3, 12.0] {
            assert!((map.h(map.inverse(u)) - u).abs() < 1e-10);
        }
    }

    #[test]
    fn rejects_nonpositive_alpha() {
        assert!(h_map(0.0, 1.0).is_err());
        assert!(h_inverse(-1.0, 1.0).is_err());
    }

    #[test]
    fn alpha_two_branch_for_ln2() {
        let sol = params_from_st(2f64.ln(), 0.0).unwrap();
        assert!((sol.alpha() - 2.0).abs() < 1e-14);
        assert!(sol.x0().abs() < 1e-15);
        assert!(sol.u0().abs() < 1e-15);
    }

    #[test]
    fn quadratic_residual_for_s0_t1() {
        let sol = params_from_st(0.0, 1.0).unwrap();
        assert!(sol.alpha_quadratic_residual().abs() < 1e-12);
        // the two roots are reciprocal
        let es = 1.0f64;
        let b = 1.0 + es * es + es;
        assert!(((sol.alpha() * (b - es * sol.alpha()) / es) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_initial_data_is_rejected() {
        assert!(matches!(params_from_st(0.0, 0.0), Err(Error::DegenerateParameters)));
    }

    #[test]
    fn special_values_of_the_explicit_solution() {
        let a0 = 3.0f64;
        let sol = params_from_st(a0.ln(), 0.0).unwrap();
        assert!((sol.z(0.0) - a0.ln()).abs() < 1e-14);
        let quarter = sol.reparametrization().h(FRAC_PI_2);
        assert!((sol.z(quarter) + a0.ln()).abs() < 1e-12);
    }

    #[test]
    fn energy_vanishes_at_origin_and_third_period() {
        let sol = params_from_st(2f64.ln(), 0.0).unwrap();
        assert!(sol.energy_residual(0.0).abs() < 1e-13);
        assert!(sol.energy_residual(sol.period() / 3.0).abs() < 1e-8);
    }

    #[test]
    fn period_is_reciprocal_symmetric() {
        for a in [2.0, 3.5, 0.2] {
            let w = Reparametrization::new(a).unwrap().period();
            let w_inv = Reparametrization::new(1.0 / a).unwrap().period();
            assert!((w - w_inv).abs() < 1e-10);
        }
    }

    #[test]
    fn periodicity_of_z() {
        let sol = params_from_st(2f64.ln(), 0.0).unwrap();
        let w = sol.period();
        assert!((sol.z(0.37 + w) - sol.z(0.37)).abs() < 1e-8);
    }

    #[test]
    fn explicit_solution_matches_numerical_integration() {
        let sol = params_from_st(2f64.ln(), 0.0).unwrap();
        let w = sol.period();
        let num = solve_ivp(sinh_gordon_field, &[sol.s(), 2.0 * sol.t()], (0.0, w), 1e-11, 1e-13).unwrap();
        for k in 0..=40 {
            let u = w * k as f64 / 40.0;
            let y = num.eval(u).unwrap();
            let (z, zp) = sol.z_explicit(u);
            assert!((y[0] - z).abs() < 1e-8 && (y[1] - zp).abs() < 1e-8, "u = {u}");
        }
    }

    #[test]
    fn numerical_energy_drift_over_five_periods() {
        let sol = params_from_st(0.4, -0.7).unwrap();
        let span = 5.0 * sol.period();
        let num = solve_ivp(sinh_gordon_field, &[sol.s(), 2.0 * sol.t()], (0.0, span), 1e-10, 1e-12).unwrap();
        let e0 = sol.initial_energy();
        for y in num.states() {
            assert!((energy(y[0], y[1]) - e0).abs() < 1e-7);
        }
    }

    #[test]
    fn ode_residual_by_central_differences() {
        let sol = params_from_st(0.8, 0.3).unwrap();
        let w = sol.period();
        let h = 1e-4;
        for k in 0..=60 {
            let u = -3.0 * w + 6.0 * w * k as f64 / 60.0;
            let zpp = (sol.z(u + h) - 2.0 * sol.z(u) + sol.z(u - h)) / (h * h);
            assert!((zpp + 4.0 * sol.z(u).sinh()).abs() < 1e-6, "u = {u}");
        }
    }

    #[test]
    fn random_initial_data_is_recovered() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..50 {
            let s: f64 = rng.gen_range(-2.0..2.0);
            let t: f64 = rng.gen_range(-2.0..2.0);
            let sol = params_from_st(s, t).unwrap();
            let (z, zp) = sol.z_explicit(0.0);
            assert!((z - s).abs() < 1e-8 && (zp - 2.0 * t).abs() < 1e-8, "(s, t) = ({s}, {t})");
            assert!(sol.alpha_quadratic_residual().abs() < 1e-12 * (1.0 + s.exp() * sol.alpha().powi(2)));
            let w = sol.period();
            for _ in 0..20 {
                let u: f64 = rng.gen_range(-w..w);
                let (a, ap) = sol.z_explicit(u);
                let (b, bp) = sol.z_explicit(u + w);
                assert!((a - b).abs() < 1e-8 && (ap - bp).abs() < 1e-8);
            }
        }
    }
}
