use std::f64::consts::PI;

use kvnlab::quantum::QuantumParams;
use kvnlab::twoslit::{
    analyze_minima, classical_two_slit, linspace, quantum_two_slit, SlitGeometry, SlitsOpen,
};
use kvnlab::{Error, GaussianParams, Warning};
use statrs::function::erf::erf;

/// `∫_lo^hi F²(x − pτ, p) dp` for the double Gaussian, by completing the
/// square and integrating to error functions.
fn slit_integral(params: &GaussianParams, tau: f64, x: f64, lo: f64, hi: f64) -> f64 {
    let (a, b, p_i) = (params.a, params.b, params.p_i);
    let alpha = tau * tau / (a * a) + 1.0 / (b * b);
    let beta = x * tau / (a * a) + p_i / (b * b);
    let gamma = x * x / (a * a) + p_i * p_i / (b * b);
    let mu = beta / alpha;
    let s = alpha.sqrt();
    let gauss = (beta * beta / alpha - gamma).exp() * (PI / alpha).sqrt() / 2.0;
    gauss * (erf(s * (hi - mu)) - erf(s * (lo - mu))) / (PI * a * b)
}

fn erf_oracle(params: &GaussianParams, geom: &SlitGeometry, x: f64) -> f64 {
    let (_, t_s) = geom.times();
    let a_bar = geom.a_bar();
    [1, 2]
        .iter()
        .map(|&k| {
            let (lo, hi) = geom.slit(k);
            slit_integral(params, t_s / geom.m, x, (x - hi) / a_bar, (x - lo) / a_bar)
        })
        .sum()
}

#[test]
fn classical_density_matches_error_function_form() {
    let params = GaussianParams::new(0.9, 1.2, 0.3, 1.0).unwrap();
    for geom in [SlitGeometry::unit(1.0, 0.1).unwrap(), SlitGeometry::new(0.6, 0.2, 1.5, 4.0, 2.0, 1.0).unwrap()] {
        let xs = linspace(-6.0, 6.0, 121);
        let curve = classical_two_slit(&params, &geom, None, SlitsOpen::Both, &xs).unwrap();
        for (x, got) in xs.iter().zip(&curve.raw) {
            let want = erf_oracle(&params, &geom, *x);
            assert!((got - want).abs() <= 1e-9 * want.max(1e-3), "x = {x}: {got} vs {want}");
        }
    }
}

#[test]
fn symmetric_beams_give_symmetric_screens() {
    let params = GaussianParams::new(1.0, 1.0, 0.0, 1.0).unwrap();
    let geom = SlitGeometry::unit(0.5, 0.1).unwrap();
    let xs = linspace(-6.0, 6.0, 241);
    let classical = classical_two_slit(&params, &geom, None, SlitsOpen::Both, &xs).unwrap();
    let quantum = quantum_two_slit(1.0, &geom, &QuantumParams::default(), SlitsOpen::Both, &xs).unwrap();
    let n = xs.len();
    for i in 0..n {
        assert!((classical.raw[i] - classical.raw[n - 1 - i]).abs() < 1e-12);
        assert!((quantum.curve.raw[i] - quantum.curve.raw[n - 1 - i]).abs() < 1e-10);
    }
    let area: f64 = classical.p.windows(2).map(|w| 0.5 * (w[0] + w[1]) * 0.05).sum();
    assert!((area - 1.0).abs() < 1e-12);
}

#[test]
fn quantum_pattern_is_the_coherent_sum_of_single_slits() {
    let geom = SlitGeometry::unit(1.0, 0.1).unwrap();
    let qp = QuantumParams::default();
    let xs = linspace(-10.0, 10.0, 201);
    let both = quantum_two_slit(1.0, &geom, &qp, SlitsOpen::Both, &xs).unwrap();
    let one = quantum_two_slit(1.0, &geom, &qp, SlitsOpen::OnlyFirst, &xs).unwrap();
    let two = quantum_two_slit(1.0, &geom, &qp, SlitsOpen::OnlySecond, &xs).unwrap();
    for i in 0..xs.len() {
        let sum = one.curve.raw[i] + two.curve.raw[i] + both.cross[i];
        assert!((both.curve.raw[i] - sum).abs() < 1e-12);
    }
}

#[test]
fn minima_of_a_cosine_squared_are_found() {
    let x = linspace(-10.0, 10.0, 2001);
    let y: Vec<f64> = x.iter().map(|v| v.cos().powi(2)).collect();
    let report = analyze_minima(&x, &y, (-10.0, 10.0)).unwrap();
    assert_eq!(report.count, 6);
    assert!((report.mean_spacing.unwrap() - PI).abs() < 1e-2);
    for p in report.positions {
        let k = (p / PI - 0.5).round();
        assert!((p - (k + 0.5) * PI).abs() < 1e-2);
    }
    // A monotone ramp with tiny ripples below the prominence floor.
    let ramp: Vec<f64> = x.iter().map(|v| v + 1e-9 * (50.0 * v).sin()).collect();
    assert_eq!(analyze_minima(&x, &ramp, (-5.0, 5.0)).unwrap().count, 0);
    assert!(analyze_minima(&x, &y, (-20.0, 5.0)).is_err());
}

#[test]
fn invalid_geometry_is_rejected() {
    assert!(matches!(SlitGeometry::unit(0.1, 0.1), Err(Error::Geometry(_))));
    assert!(matches!(SlitGeometry::new(1.0, 0.1, 2.0, 1.0, 1.0, 1.0), Err(Error::Geometry(_))));
    assert!(matches!(SlitGeometry::new(1.0, 0.1, 1.0, 2.0, 0.0, 1.0), Err(Error::Geometry(_))));
    let params = GaussianParams::new(1.0, 1.0, 0.0, 2.0).unwrap();
    let geom = SlitGeometry::unit(1.0, 0.1).unwrap();
    assert!(matches!(
        classical_two_slit(&params, &geom, None, SlitsOpen::Both, &[0.0]),
        Err(Error::Geometry(_))
    ));
}

#[test]
fn dark_slits_raise_a_flux_warning() {
    let params = GaussianParams::new(1.0, 1.0, 0.0, 1.0).unwrap();
    let geom = SlitGeometry::unit(12.0, 0.1).unwrap();
    let curve = classical_two_slit(&params, &geom, None, SlitsOpen::Both, &linspace(-1.0, 1.0, 5)).unwrap();
    assert!(curve.warnings.iter().any(|w| matches!(w, Warning::FluxFloor { .. })));
}

#[test]
fn golden_screen_agrees_with_error_function_form() {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/two_slit_classical.csv");
    let table = kvnlab::cli::Table::read(&path).unwrap();
    let params = GaussianParams::new(1.0, 1.0, 0.0, 1.0).unwrap();
    let geom = SlitGeometry::unit(1.0, 0.1).unwrap();
    let x = table.column("x").unwrap();
    let raw = table.column("P_raw").unwrap();
    for (x, got) in x.iter().zip(raw) {
        let want = erf_oracle(&params, &geom, *x);
        assert!((got - want).abs() <= 1e-9 * want.max(1e-3), "x = {x}");
    }
}
