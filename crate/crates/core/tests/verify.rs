use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, LN_2, PI};

use proptest::prelude::*;
use s3tori::surfaces::*;
use s3tori::verify::*;
use s3tori::Vec4;

fn v_line(chart: &SurfaceChart, u0: f64, samples: usize) -> Vec<Vec4> {
    let d = *chart.domain();
    (0..samples)
        .map(|i| chart.point(u0, d.v_min + (d.v_max - d.v_min) * i as f64 / samples as f64))
        .collect()
}

fn radius_law(chart: &SurfaceChart, u0: f64) -> f64 {
    let j = chart.jet(u0, 0.0);
    let e = j.lu.norm_squared();
    let eu = 2.0 * j.luu.dot(&j.lu);
    (1.0 + eu * eu / (4.0 * e.powi(3)) + 1.0 / (e * e)).sqrt()
}

#[test]
fn curvature_routes_agree() {
    let charts = [
        sphere_chart(),
        clifford_chart(),
        lawson_chart(2.0).unwrap(),
        lawson_isothermal_chart(2.0).unwrap(),
        second_type_torus_chart(LN_2, 0.0).unwrap(),
        second_type_torus_chart(1.0, 0.5).unwrap(),
    ];
    for c in &charts {
        for (u, v) in Grid::new(6, 6).points(c) {
            let km = gauss_curvature(c, u, v, CurvatureMethod::Metric).unwrap();
            let kf = gauss_curvature(c, u, v, CurvatureMethod::Forms).unwrap();
            assert!((km - kf).abs() < 1e-5, "{}: {km} vs {kf}", c.name());
            if let Ok(kp) = gauss_curvature(c, u, v, CurvatureMethod::Principal) {
                assert!((kp - kf).abs() < 1e-5, "{}: {kp} vs {kf}", c.name());
            }
            if c.is_isothermal() {
                let fd = fundamental_forms(c, u, v).unwrap();
                assert_eq!(kf, 1.0 - (fd.a * fd.a + fd.b * fd.b) / (fd.e * fd.e));
            }
        }
    }
}

#[test]
fn curvature_examples() {
    let s = sphere_chart();
    assert!((gauss_curvature(&s, 0.4, 1.0, CurvatureMethod::Forms).unwrap() - 1.0).abs() < 1e-14);
    let c = clifford_chart();
    assert!(gauss_curvature(&c, 0.4, 1.0, CurvatureMethod::Metric).unwrap().abs() < 1e-12);
    let l = lawson_chart(2.0).unwrap();
    for m in [CurvatureMethod::Metric, CurvatureMethod::Forms] {
        assert!((gauss_curvature(&l, 0.0, 1.0, m).unwrap() - 0.75).abs() < 1e-6);
    }
    let p = second_type_torus_chart(LN_2, 0.0).unwrap();
    assert!(p.is_principal());
    assert!(gauss_curvature(&p, 0.2, 0.3, CurvatureMethod::Principal).is_ok());
}

#[test]
fn identity_residual_examples() {
    let g = Grid::new(17, 17);
    assert!(curvature_identity_residual(&sphere_chart(), g) < 1e-8);
    assert!(curvature_identity_residual(&lawson_isothermal_chart(2.0).unwrap(), g) < 1e-6);
    assert!(curvature_identity_residual(&second_type_torus_chart(LN_2, 0.0).unwrap(), g) < 1e-5);
}

#[test]
fn minimality_examples() {
    let g = Grid::new(17, 17);
    assert!(minimality_residual(&sphere_chart(), g) < 1e-10);
    assert!(minimality_residual(&clifford_chart(), g) < 1e-12);
    assert!(minimality_residual(&second_type_torus_chart(1.0, 0.5).unwrap(), g) < 1e-6);
}

#[test]
fn frenet_on_circles() {
    let pts = sample_circle(Vec4::ZERO, Vec4::e1(), Vec4::e2(), 1.0, 200);
    let p = frenet_profile(&pts).unwrap();
    for (k1, k2) in p.kappa1.iter().zip(&p.kappa2) {
        assert!((k1 - 1.0).abs() < 1e-10);
        assert!(k2.unwrap_or(0.0) < 1e-8);
    }
    let n = (Vec4::e3() + Vec4::e4()).normalized();
    let pts = sample_circle(Vec4::new(1.0, 2.0, 3.0, 4.0), Vec4::e1(), n, 0.25, 200);
    let p = frenet_profile(&pts).unwrap();
    assert!(p.kappa1.iter().all(|k| (k - 4.0).abs() < 1e-8));
    assert!(frenet_profile(&pts[..6]).is_err());
    assert!(matches!(frenet_profile(&[Vec4::e1(); 9]), Err(s3tori::Error::DegenerateCurve { .. })));
}

#[test]
fn frenet_converges_under_refinement() {
    let sample = |n: usize| -> Vec<Vec4> {
        (0..n)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / n as f64;
                let phi = t + 0.3 * t.sin();
                Vec4::new(phi.cos(), phi.sin(), 0.0, 0.0)
            })
            .collect()
    };
    let err = |n: usize| {
        frenet_profile(&sample(n)).unwrap().kappa1.iter().fold(0.0f64, |m, k| m.max((k - 1.0).abs()))
    };
    let (coarse, fine) = (err(24), err(48));
    assert!(coarse > 0.0 && fine * 3.0 <= coarse, "{coarse} -> {fine}");
}

#[test]
fn second_type_v_line_at_zero() {
    let c = second_type_torus_chart(LN_2, 0.0).unwrap();
    let v = circle_test(&v_line(&c, 0.0, 200), CIRCLE_TOL).unwrap();
    assert!(v.is_circle);
    assert!((v.kappa - 5f64.sqrt() / 2.0).abs() < 1e-6, "{}", v.kappa);
}

#[test]
fn circle_radius_law() {
    let c = second_type_torus_chart(1.0, 0.5).unwrap();
    let d = *c.domain();
    let mut seen = Vec::new();
    for i in 0..10 {
        let u0 = d.u_min + (d.u_max - d.u_min) * (i as f64 + 0.5) / 10.0;
        let v = circle_test(&v_line(&c, u0, 200), CIRCLE_TOL).unwrap();
        assert!(v.is_circle);
        assert!((v.kappa - radius_law(&c, u0)).abs() < 1e-5, "u0 = {u0}");
        assert!(v.kappa > 1.0);
        seen.push(v.kappa);
    }
    // Distinct levels of the even profile z give distinct radii.
    for i in 0..5 {
        for j in i + 1..5 {
            assert!((seen[i] - seen[j]).abs() > 1e-4);
        }
    }
}

#[test]
fn second_type_u_line_is_not_a_circle() {
    let c = second_type_torus_chart(LN_2, 0.0).unwrap();
    let d = *c.domain();
    let pts: Vec<Vec4> = (0..200)
        .map(|i| c.point(d.u_min + (d.u_max - d.u_min) * i as f64 / 200.0, 0.4))
        .collect();
    assert!(!circle_test(&pts, CIRCLE_TOL).unwrap().is_circle);
}

fn circle_angles(chart: &SurfaceChart) -> Vec<f64> {
    scan_circle_families(chart, &default_scan_angles())
        .unwrap()
        .into_iter()
        .filter(|r| r.all_circles())
        .map(|r| r.theta)
        .collect()
}

fn same(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12)
}

#[test]
fn scan_examples() {
    let angles = default_scan_angles();
    assert_eq!(angles.len(), 5);
    assert!((angles[4] - FRAC_PI_2).abs() < 1e-15);
    let lawson = circle_angles(&lawson_principal_chart(2.0).unwrap());
    assert!(same(&lawson, &[FRAC_PI_4]), "{lawson:?}");
    let second = circle_angles(&second_type_torus_chart(LN_2, 0.0).unwrap());
    assert!(same(&second, &[FRAC_PI_2]), "{second:?}");
    let second = circle_angles(&second_type_torus_chart(1.0, 0.5).unwrap());
    assert!(same(&second, &[FRAC_PI_2]), "{second:?}");
    let clifford = circle_angles(&clifford_chart());
    assert!(same(&clifford, &[0.0, FRAC_PI_4, FRAC_PI_2]), "{clifford:?}");
}

#[test]
fn verify_chart_examples() {
    let g = Grid::new(17, 17);
    let cases = [
        (sphere_chart(), 1e-8),
        (lawson_isothermal_chart(3.0).unwrap(), 1e-6),
        (second_type_torus_chart(1.0, 0.5).unwrap(), 1e-5),
        (clifford_chart(), 1e-8),
        (lawson_chart(2.5).unwrap(), 1e-6),
    ];
    for (c, tol) in &cases {
        let r = verify_chart(c, g, &Tolerances::uniform(*tol));
        assert!(r.all_pass(), "{}:\n{}", c.name(), r.to_text());
        assert_eq!(r.get("unit_norm").unwrap().grid_size, g.size());
    }
}

#[test]
fn verify_report_flags_failures_and_round_trips() {
    let c = second_type_torus_chart(1.0, 0.5).unwrap();
    let r = verify_chart(&c, Grid::new(9, 9), &Tolerances::uniform(1e-5).with("minimality", 1e-30));
    assert!(!r.all_pass());
    assert!(!r.get("minimality").unwrap().pass);
    assert!(r.get("unit_norm").unwrap().pass);
    let back = VerificationReport::from_json(&r.to_json()).unwrap();
    assert_eq!(back, r);
    assert_eq!(back.to_text(), r.to_text());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn circles_of_any_radius(r in 0.05f64..20.0, phase in 0.0f64..1.0) {
        let a = Vec4::new(phase.cos(), phase.sin(), 0.0, 0.0);
        let b = Vec4::new(0.0, 0.0, phase.cos(), phase.sin());
        let v = circle_test(&sample_circle(Vec4::e1(), a, b, r, 120), CIRCLE_TOL).unwrap();
        prop_assert!(v.is_circle);
        prop_assert!((v.kappa * r - 1.0).abs() < 1e-8);
    }

    #[test]
    fn radius_law_at_random_levels(s in 0.2f64..1.5, t in -1.0f64..1.0, frac in 0.0f64..1.0) {
        let c = second_type_torus_chart(s, t).unwrap();
        let d = *c.domain();
        let u0 = d.u_min + (d.u_max - d.u_min) * frac;
        let v = circle_test(&v_line(&c, u0, 200), CIRCLE_TOL).unwrap();
        prop_assert!(v.is_circle);
        prop_assert!((v.kappa - radius_law(&c, u0)).abs() < 1e-5);
    }
}
