//! Free-particle quantum mechanics for the comparison experiments: the
//! closed-form Gaussian packet, the Feynman free kernel, kernel quadrature
//! and the Madelung residual.

use std::f64::consts::PI;

use ndarray::Array1;
use rayon::prelude::*;

use crate::field::unwrap_lane;
use crate::interp::sample_line;
use crate::quadrature::gl8;
use crate::{Error, LineGrid, Result, WaveFunction1D, C64};

/// Quadrature panels per local wavelength of the kernel phase (8 nodes each).
pub const PANELS_PER_WAVELENGTH: f64 = 4.0;

/// Oscillation-driven quadrature nodes above which a kernel integral is
/// refused as under-resolved.
pub const MAX_OSCILLATION_NODES: usize = 10_000;

/// Relative amplitude below which the input of [`propagate_kernel`] is
/// treated as zero.
pub const SUPPORT_FLOOR: f64 = 1e-12;

/// Fraction of `max |ψ|` that bounds the Madelung evaluation window.
pub const MADELUNG_WINDOW: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantumParams {
    hbar: f64,
    m: f64,
}

impl QuantumParams {
    pub fn new(hbar: f64, m: f64) -> Result<Self> {
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(Error::InvalidParameter(format!("hbar must be > 0, got {hbar}")));
        }
        if !(m > 0.0 && m.is_finite()) {
            return Err(Error::InvalidParameter(format!("mass must be > 0, got {m}")));
        }
        Ok(Self { hbar, m })
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn m(&self) -> f64 {
        self.m
    }
}

impl Default for QuantumParams {
    fn default() -> Self {
        Self { hbar: 1.0, m: 1.0 }
    }
}

/// The free Gaussian packet at time `t` with its exact continuum
/// normalization.
pub fn gaussian_closed_form(a: f64, p_i: f64, t: f64, qp: &QuantumParams, x: f64) -> C64 {
    let (m, hbar) = (qp.m, qp.hbar);
    let width = C64::new(m * a * a, hbar * t);
    let norm = PI.powf(-0.25) / a.sqrt() * (C64::new(m * a * a, 0.0) / width).sqrt();
    let d = x - p_i * t / m;
    let exponent = -m * d * d / (2.0 * width) + C64::new(0.0, (p_i * x - p_i * p_i * t / (2.0 * m)) / hbar);
    norm * exponent.exp()
}

/// Closed-form free Gaussian sampled on `grid` and renormalized.
pub fn evolve_gaussian_free(a: f64, p_i: f64, t: f64, qp: &QuantumParams, grid: &LineGrid) -> Result<WaveFunction1D> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::InvalidParameter(format!("a must be > 0, got {a}")));
    }
    Ok(WaveFunction1D::from_fn(*grid, |x| gaussian_closed_form(a, p_i, t, qp, x)).normalized())
}

/// `(Δx)²(t) = (a²/2)(1 + t²ħ²/m²a⁴)`.
pub fn gaussian_variance(a: f64, t: f64, qp: &QuantumParams) -> f64 {
    0.5 * a * a * (1.0 + (t * qp.hbar / (qp.m * a * a)).powi(2))
}

/// `K(x_b, t_b | x_a, t_a) = [2πiħΔt/m]^{−1/2} exp(i m (x_b − x_a)² / 2ħΔt)`,
/// principal branch.
pub fn free_kernel(x_b: f64, t_b: f64, x_a: f64, t_a: f64, qp: &QuantumParams) -> Result<C64> {
    let dt = t_b - t_a;
    if !(dt > 0.0) {
        return Err(Error::Domain(format!("kernel needs t_b > t_a, got {t_b} <= {t_a}")));
    }
    Ok(kernel(x_b - x_a, dt, qp))
}

fn kernel(dx: f64, dt: f64, qp: &QuantumParams) -> C64 {
    let prefactor = C64::new(0.0, 2.0 * PI * qp.hbar * dt / qp.m).sqrt().inv();
    prefactor * C64::from_polar(1.0, qp.m * dx * dx / (2.0 * qp.hbar * dt))
}

fn split_at_stationary_point(x: f64, lo: f64, hi: f64) -> Vec<f64> {
    if x > lo && x < hi {
        vec![lo, x, hi]
    } else {
        vec![lo, hi]
    }
}

/// Kernel oscillations across `[w0, w1]`, in cycles.
fn cycles(x: f64, scale: f64, w0: f64, w1: f64) -> f64 {
    scale * (x - w0).abs().max((x - w1).abs()) * (w1 - w0) / (2.0 * PI)
}

/// Quadrature nodes the kernel oscillation alone requires on `[lo, hi]`
/// (fractional). Cheap, so callers can check the budget before integrating.
pub(crate) fn oscillation_nodes(x: f64, dt: f64, qp: &QuantumParams, lo: f64, hi: f64) -> f64 {
    let scale = qp.m / (qp.hbar * dt);
    split_at_stationary_point(x, lo, hi)
        .windows(2)
        .map(|w| cycles(x, scale, w[0], w[1]) * PANELS_PER_WAVELENGTH * gl8().order() as f64)
        .sum()
}

pub(crate) fn check_budget(nodes: f64) -> Result<()> {
    let nodes = nodes.ceil() as usize;
    if nodes > MAX_OSCILLATION_NODES {
        return Err(Error::Resolution {
            required: nodes,
            limit: MAX_OSCILLATION_NODES,
        });
    }
    Ok(())
}

/// `∫_lo^hi K(x, Δt | x') f(x') dx'` by 8-point Gauss–Legendre panels sized
/// from the kernel's local wavenumber.
pub(crate) fn kernel_integral<F>(x: f64, dt: f64, qp: &QuantumParams, lo: f64, hi: f64, f: F) -> C64
where
    F: Fn(f64) -> C64,
{
    let scale = qp.m / (qp.hbar * dt);
    let rule = gl8();
    let mut total = C64::new(0.0, 0.0);
    for w in split_at_stationary_point(x, lo, hi).windows(2) {
        let (a, b) = (w[0], w[1]);
        let panels = (PANELS_PER_WAVELENGTH * cycles(x, scale, a, b)).ceil().max(1.0) as usize;
        total += rule.integrate_panels(a, b, panels, |y| kernel(x - y, dt, qp) * f(y));
    }
    total
}

/// Propagates `ψ₀` from `t0` to `t1` by direct quadrature of the free kernel
/// against cubic interpolation of `ψ₀`. Output lives on the input grid and is
/// renormalized to the input norm.
pub fn propagate_kernel(psi0: &WaveFunction1D, t0: f64, t1: f64, qp: &QuantumParams) -> Result<WaveFunction1D> {
    if t1 < t0 {
        return Err(Error::Domain(format!("cannot propagate backwards from {t0} to {t1}")));
    }
    if t1 == t0 {
        return Ok(psi0.clone());
    }
    let dt = t1 - t0;
    let grid = *psi0.grid();
    let values: Vec<C64> = psi0.amplitudes().to_vec();
    let floor = SUPPORT_FLOOR * values.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    let support = support_cells(&values, floor);
    let Some((first, last)) = support else {
        return Ok(psi0.clone());
    };
    let h = grid.dx();

    for i in 0..grid.len() {
        let x = grid.x(i);
        check_budget((first..last).map(|c| oscillation_nodes(x, dt, qp, grid.x(c), grid.x(c + 1))).sum())?;
    }
    let amps: Vec<C64> = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let x = grid.x(i);
            (first..last)
                .map(|c| {
                    kernel_integral(x, dt, qp, grid.x(c), grid.x(c + 1), |y| {
                        sample_line(&values, grid.x_min(), h, y)
                    })
                })
                .sum()
        })
        .collect();
    let out = WaveFunction1D::new(grid, Array1::from(amps))?;
    let scale = (psi0.norm_squared() / out.norm_squared()).sqrt();
    Ok(out.scaled(C64::new(scale, 0.0)))
}

/// Range of node indices `[first, last]` covering every amplitude above
/// `floor`, widened by one node each side for the interpolation stencil.
fn support_cells(values: &[C64], floor: f64) -> Option<(usize, usize)> {
    let first = values.iter().position(|z| z.norm() > floor)?;
    let last = values.iter().rposition(|z| z.norm() > floor)?;
    let first = first.saturating_sub(1);
    let last = (last + 1).min(values.len() - 1);
    (last > first).then_some((first, last))
}

/// Sup-norm residuals of the two real Madelung equations
/// `S_t + S'²/2m + V − ħ²A''/2mA = 0` and `m A_t + A'S' + A S''/2 = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MadelungResidual {
    pub r_s: f64,
    pub r_a: f64,
    /// `max |ħ²A''/2mA|` over the window: the quantum-potential coupling.
    pub coupling: f64,
    /// Interior nodes used.
    pub nodes: usize,
}

/// Madelung residuals from three snapshots `ψ(t − Δt)`, `ψ(t)`, `ψ(t + Δt)`
/// sharing one grid, using second-order centered differences in x and t.
pub fn madelung_residual<V>(
    snapshots: [&WaveFunction1D; 3],
    dt: f64,
    potential: V,
    qp: &QuantumParams,
) -> Result<MadelungResidual>
where
    V: Fn(f64) -> f64,
{
    let [prev, cur, next] = snapshots;
    if prev.grid() != cur.grid() || next.grid() != cur.grid() {
        return Err(Error::InvalidGrid("snapshots must share one grid".into()));
    }
    if !(dt > 0.0) {
        return Err(Error::InvalidParameter(format!("dt must be > 0, got {dt}")));
    }
    let grid = *cur.grid();
    let psi = cur.amplitudes();
    let amp: Vec<f64> = psi.iter().map(|z| z.norm()).collect();
    let max = amp.iter().cloned().fold(0.0, f64::max);
    let peak = amp.iter().position(|&a| a == max).unwrap_or(0);
    let inside = |i: usize| amp[i] > MADELUNG_WINDOW * max;
    if max == 0.0 || !inside(peak) {
        return Err(Error::Domain("Madelung window is empty".into()));
    }
    let mut lo = peak;
    while lo > 0 && inside(lo - 1) {
        lo -= 1;
    }
    let mut hi = peak;
    while hi + 1 < amp.len() && inside(hi + 1) {
        hi += 1;
    }
    if hi < lo + 2 {
        return Err(Error::Domain("Madelung window has no interior nodes".into()));
    }

    // S = ħ arg ψ, unwrapped over the window (which contains the peak).
    let mut phase = Array1::from_iter(psi.iter().map(|z| z.arg()));
    let valid: Vec<bool> = (0..amp.len()).map(|i| i >= lo && i <= hi).collect();
    unwrap_lane(phase.view_mut(), &valid);
    let s: Vec<f64> = phase.iter().map(|g| qp.hbar * g).collect();

    let (m, hbar, h) = (qp.m, qp.hbar, grid.dx());
    let mut out = MadelungResidual {
        r_s: 0.0,
        r_a: 0.0,
        coupling: 0.0,
        nodes: 0,
    };
    for i in lo + 1..hi {
        let a = amp[i];
        let a_x = (amp[i + 1] - amp[i - 1]) / (2.0 * h);
        let a_xx = (amp[i + 1] - 2.0 * a + amp[i - 1]) / (h * h);
        let s_x = (s[i + 1] - s[i - 1]) / (2.0 * h);
        let s_xx = (s[i + 1] - 2.0 * s[i] + s[i - 1]) / (h * h);
        let fwd = next.amplitudes()[i];
        let bwd = prev.amplitudes()[i];
        let a_t = (fwd.norm() - bwd.norm()) / (2.0 * dt);
        let s_t = hbar * (fwd * bwd.conj()).arg() / (2.0 * dt);
        let quantum_potential = hbar * hbar * a_xx / (2.0 * m * a);
        let r_s = s_t + s_x * s_x / (2.0 * m) + potential(grid.x(i)) - quantum_potential;
        let r_a = m * a_t + a_x * s_x + 0.5 * a * s_xx;
        out.r_s = out.r_s.max(r_s.abs());
        out.r_a = out.r_a.max(r_a.abs());
        out.coupling = out.coupling.max(quantum_potential.abs());
        out.nodes += 1;
    }
    Ok(out)
}
