use std::f64::consts::PI;

use super::grid::{LineGrid, PhaseSpaceGrid};
use super::state::{WaveFunction1D, WaveFunction2D};
use crate::{AxisKind, Error, Result, C64};

/// Coverage demanded of a grid around a Gaussian's centre, in widths.
pub const SUPPORT_WIDTHS: f64 = 6.0;

/// Parameters of the double Gaussian
/// `(πab)^{-1/2} exp(−q²/2a² − (p−p_i)²/2b²)`.
///
/// `(Δq)² = a²/2`, `(Δp)² = b²/2`. Classical `a` and `b` are independent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianParams {
    pub a: f64,
    pub b: f64,
    pub p_i: f64,
    pub m: f64,
}

impl GaussianParams {
    pub fn new(a: f64, b: f64, p_i: f64, m: f64) -> Result<Self> {
        for (name, v) in [("a", a), ("b", b), ("m", m)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!("{name} must be > 0, got {v}")));
            }
        }
        if !p_i.is_finite() {
            return Err(Error::InvalidParameter(format!("p_i must be finite, got {p_i}")));
        }
        Ok(Self { a, b, p_i, m })
    }

    /// Continuum amplitude at `(q, p)`.
    pub fn amplitude(&self, q: f64, p: f64) -> f64 {
        let dp = p - self.p_i;
        (-(q * q) / (2.0 * self.a * self.a) - dp * dp / (2.0 * self.b * self.b)).exp()
            / (PI * self.a * self.b).sqrt()
    }

    /// Closed-form amplitude after free Liouvillian evolution for time `t`:
    /// the initial profile evaluated at `(q − p t/m, p)`.
    pub fn evolved_amplitude(&self, q: f64, p: f64, t: f64) -> f64 {
        self.amplitude(q - p * t / self.m, p)
    }
}

fn covers(lo: f64, hi: f64, centre: f64, width: f64) -> bool {
    lo <= centre - SUPPORT_WIDTHS * width && hi >= centre + SUPPORT_WIDTHS * width
}

/// Double Gaussian sampled on a `(q, p)` grid and renormalized on it.
pub fn make_gaussian_qp(params: &GaussianParams, grid: &PhaseSpaceGrid) -> Result<WaveFunction2D> {
    if grid.axis() != AxisKind::Momentum {
        return Err(Error::Representation {
            expected: "(q,p)",
            found: "(q,lambda_p)",
        });
    }
    if !covers(grid.q_min(), grid.q_max(), 0.0, params.a) {
        return Err(Error::DomainCoverage(format!(
            "q range [{}, {}] does not hold ±{}a with a = {}",
            grid.q_min(),
            grid.q_max(),
            SUPPORT_WIDTHS,
            params.a
        )));
    }
    if !covers(grid.s_min(), grid.s_max(), params.p_i, params.b) {
        return Err(Error::DomainCoverage(format!(
            "p range [{}, {}] does not hold p_i ± {}b with p_i = {}, b = {}",
            grid.s_min(),
            grid.s_max(),
            SUPPORT_WIDTHS,
            params.p_i,
            params.b
        )));
    }
    let params = *params;
    Ok(WaveFunction2D::from_fn(*grid, move |q, p| C64::new(params.amplitude(q, p), 0.0)).normalized())
}

/// `(√π a)^{-1/2} exp(−x²/2a² + i p_i x/ħ)` sampled and renormalized.
pub fn make_gaussian_x(a: f64, p_i: f64, hbar: f64, grid: &LineGrid) -> Result<WaveFunction1D> {
    if !(a > 0.0) {
        return Err(Error::InvalidParameter(format!("a must be > 0, got {a}")));
    }
    if !(hbar > 0.0) {
        return Err(Error::InvalidParameter(format!("hbar must be > 0, got {hbar}")));
    }
    if !covers(grid.x_min(), grid.x_max(), 0.0, a) {
        return Err(Error::DomainCoverage(format!(
            "x range [{}, {}] does not hold ±{}a with a = {}",
            grid.x_min(),
            grid.x_max(),
            SUPPORT_WIDTHS,
            a
        )));
    }
    let norm = 1.0 / (PI.sqrt() * a).sqrt();
    Ok(WaveFunction1D::from_fn(*grid, |x| {
        C64::from_polar(norm * (-(x * x) / (2.0 * a * a)).exp(), p_i * x / hbar)
    })
    .normalized())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> PhaseSpaceGrid {
        PhaseSpaceGrid::standard()
    }

    #[test]
    fn double_gaussian_is_normalized() {
        let psi = make_gaussian_qp(&GaussianParams::new(1.0, 1.0, 0.0, 1.0).unwrap(), &grid()).unwrap();
        assert!((psi.norm_squared() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn means_at_time_zero() {
        let psi = make_gaussian_qp(&GaussianParams::new(1.0, 1.0, 0.5, 1.0).unwrap(), &grid()).unwrap();
        assert!((psi.mean_s().unwrap() - 0.5).abs() < 1e-9);
        assert!(psi.mean_q().unwrap().abs() < 1e-8);
    }

    #[test]
    fn variances_are_half_the_squared_widths() {
        let psi = make_gaussian_qp(&GaussianParams::new(2.0, 0.5, 0.0, 1.0).unwrap(), &grid()).unwrap();
        assert!((psi.variance_q().unwrap() - 2.0).abs() < 1e-6);
        assert!((psi.variance_s().unwrap() - 0.125).abs() < 1e-6);
        let centred = psi.moment(|_, p| p * p).unwrap();
        assert!((centred - 0.125).abs() < 1e-6);
    }

    #[test]
    fn grid_quadrature_matches_closed_form_integral() {
        // Unnormalized e^{-q²/2 - p²/2}: ∫|ψ|² = π exactly in the continuum.
        let psi = WaveFunction2D::from_fn(grid(), |q, p| C64::new((-(q * q + p * p) / 2.0).exp(), 0.0));
        assert!((psi.norm_squared() - PI).abs() < 1e-6);
    }

    #[test]
    fn too_small_grid_is_a_coverage_error() {
        let g = PhaseSpaceGrid::momentum((-3.0, 3.0), (-8.0, 8.0), 64, 64).unwrap();
        let err = make_gaussian_qp(&GaussianParams::new(1.0, 1.0, 0.0, 1.0).unwrap(), &g).unwrap_err();
        assert!(matches!(err, Error::DomainCoverage(_)));
        let l = LineGrid::new(-2.0, 2.0, 64).unwrap();
        assert!(matches!(make_gaussian_x(1.0, 0.0, 1.0, &l), Err(Error::DomainCoverage(_))));
    }

    #[test]
    fn line_gaussian_is_real_even_and_centred() {
        let psi = make_gaussian_x(1.0, 0.0, 1.0, &LineGrid::standard()).unwrap();
        let amps = psi.amplitudes();
        let n = amps.len();
        for i in 0..n {
            assert_eq!(amps[i].im, 0.0);
            assert!((amps[i].re - amps[n - 1 - i].re).abs() < 1e-12);
        }
        assert!(psi.mean_x().unwrap().abs() < 1e-12);
        assert!((psi.variance_x().unwrap() - 0.5).abs() < 1e-9);
        assert!((psi.norm_squared() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn plane_wave_phase_reads_off_the_exponent() {
        // x = 1 is a node of this grid.
        let l = LineGrid::new(-10.0, 10.0, 201).unwrap();
        let psi = make_gaussian_x(1.0, 2.0, 1.0, &l).unwrap();
        let i = 110;
        assert!((l.x(i) - 1.0).abs() < 1e-12);
        let phase = psi.amplitudes()[i].arg().rem_euclid(2.0 * PI);
        assert!((phase - 2.0).abs() < 1e-12);
    }
}
