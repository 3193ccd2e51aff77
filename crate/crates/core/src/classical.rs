//! Classical evolution of KvN wave functions.
//!
//! The Liouvillian is first order, so every solution is the initial wave
//! function carried along the Hamiltonian flow: `ψ(z, t) = ψ₀(Φ₋ₜ(z))`.
//! Three routes realize this:
//!
//! * [`evolve_free`]: exact free-particle remap `q → q − p t/m` with
//!   interpolation along q (the action of the delta kernel).
//! * [`evolve_characteristics`]: backward RK4 characteristics for any
//!   `H = p²/2m + V(q)`, followed by 2-D interpolation of grid data.
//! * [`transport_initial_data`]: the same characteristics applied to an
//!   analytic initial state, with no interpolation at all.
//!
//! None of them renormalize unless asked, so mass leaving the grid shows up
//! as a [`Warning::MassLoss`].

use std::fmt;
use std::sync::Arc;

use ndarray::{Array2, Axis};
use rayon::prelude::*;

use crate::field::{wrap_angle, MODULUS_FLOOR};
use crate::interp::{sample, sample_along_q, Interpolation};
use crate::spectral::{derivative, map_lanes, wavenumbers};
use crate::{Error, PhaseSpaceGrid, Result, Warning, WaveFunction2D, C64};

/// Fraction of `|ψ|²` that may leave the grid before a warning is raised.
pub const MASS_LOSS_WARNING: f64 = 0.01;

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum Potential {
    Free,
    /// `V = k q²/2`.
    Quadratic { k: f64 },
    /// User potential with its derivative.
    Custom { v: ScalarFn, dv: ScalarFn },
}

impl fmt::Debug for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Potential::Free => write!(f, "Free"),
            Potential::Quadratic { k } => write!(f, "Quadratic {{ k: {k} }}"),
            Potential::Custom { .. } => write!(f, "Custom"),
        }
    }
}

/// `H(q, p) = p²/2m + V(q)`.
#[derive(Debug, Clone)]
pub struct HamiltonianSpec {
    m: f64,
    potential: Potential,
}

impl HamiltonianSpec {
    pub fn new(m: f64, potential: Potential) -> Result<Self> {
        if !(m > 0.0 && m.is_finite()) {
            return Err(Error::InvalidParameter(format!("mass must be > 0, got {m}")));
        }
        Ok(Self { m, potential })
    }

    pub fn free(m: f64) -> Result<Self> {
        Self::new(m, Potential::Free)
    }

    pub fn quadratic(m: f64, k: f64) -> Result<Self> {
        Self::new(m, Potential::Quadratic { k })
    }

    pub fn custom<V, D>(m: f64, v: V, dv: D) -> Result<Self>
    where
        V: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::new(m, Potential::Custom { v: Arc::new(v), dv: Arc::new(dv) })
    }

    pub fn mass(&self) -> f64 {
        self.m
    }

    pub fn potential(&self) -> &Potential {
        &self.potential
    }

    pub fn v(&self, q: f64) -> f64 {
        match &self.potential {
            Potential::Free => 0.0,
            Potential::Quadratic { k } => 0.5 * k * q * q,
            Potential::Custom { v, .. } => v(q),
        }
    }

    /// `∂H/∂q = V'(q)`.
    pub fn dh_dq(&self, q: f64) -> f64 {
        match &self.potential {
            Potential::Free => 0.0,
            Potential::Quadratic { k } => k * q,
            Potential::Custom { dv, .. } => dv(q),
        }
    }

    /// `∂H/∂p = p/m`.
    pub fn dh_dp(&self, p: f64) -> f64 {
        p / self.m
    }

    pub fn energy(&self, q: f64, p: f64) -> f64 {
        p * p / (2.0 * self.m) + self.v(q)
    }
}

/// Discretization of the backward characteristics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacteristicsConfig {
    /// Upper bound on the RK4 step. At least 10 steps are always taken.
    pub max_step: f64,
    pub interpolation: Interpolation,
}

impl Default for CharacteristicsConfig {
    fn default() -> Self {
        Self {
            max_step: 0.01,
            interpolation: Interpolation::Bicubic,
        }
    }
}

impl CharacteristicsConfig {
    pub fn steps(&self, t: f64) -> usize {
        ((t.abs() / self.max_step).ceil() as usize).max(10)
    }
}

/// Options for the free remap.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RemapOptions {
    pub interpolation: Interpolation,
    pub renormalize: bool,
}

/// An evolved state with its bookkeeping.
#[derive(Debug, Clone)]
pub struct Evolved {
    pub state: WaveFunction2D,
    /// `1 − ‖ψ(t)‖²/‖ψ₀‖²` before any renormalization.
    pub lost_fraction: f64,
    pub warnings: Vec<Warning>,
}

impl Evolved {
    fn finish(initial_norm: f64, state: WaveFunction2D, renormalize: bool) -> Self {
        let final_norm = state.norm_squared();
        let lost_fraction = if initial_norm > 0.0 { 1.0 - final_norm / initial_norm } else { 0.0 };
        let warnings = if lost_fraction > MASS_LOSS_WARNING {
            vec![Warning::MassLoss { fraction: lost_fraction }]
        } else {
            Vec::new()
        };
        let state = if renormalize {
            state.scaled(C64::new((initial_norm / final_norm).sqrt(), 0.0))
        } else {
            state
        };
        Self { state, lost_fraction, warnings }
    }
}

fn require_momentum(psi: &WaveFunction2D) -> Result<()> {
    if psi.is_momentum() {
        Ok(())
    } else {
        Err(Error::Representation {
            expected: "(q,p)",
            found: "(q,lambda_p)",
        })
    }
}

fn require_mass(m: f64) -> Result<()> {
    if m > 0.0 && m.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("mass must be > 0, got {m}")))
    }
}

/// Free Liouvillian evolution `ψ(q, p, t) = ψ(q − p t/m, p, 0)`.
pub fn evolve_free(psi0: &WaveFunction2D, t: f64, m: f64) -> Result<Evolved> {
    evolve_free_with(psi0, t, m, &RemapOptions::default())
}

pub fn evolve_free_with(psi0: &WaveFunction2D, t: f64, m: f64, opts: &RemapOptions) -> Result<Evolved> {
    require_momentum(psi0)?;
    require_mass(m)?;
    let grid = *psi0.grid();
    let src = psi0.amplitudes().view();
    let p = grid.s_nodes();
    let mut out = Array2::<C64>::zeros(grid.shape());
    out.axis_iter_mut(Axis(0))
        .into_par_iter()
        .enumerate()
        .for_each(|(i, mut row)| {
            let q = grid.q(i);
            for (j, z) in row.iter_mut().enumerate() {
                *z = sample_along_q(src, &grid, j, q - p[j] * t / m, opts.interpolation);
            }
        });
    let state = WaveFunction2D::new(grid, out)?;
    Ok(Evolved::finish(psi0.norm_squared(), state, opts.renormalize))
}

/// Action of the free kernel `δ(q − q_i − p_i t/m) δ(p − p_i)`. This is the
/// coordinate remap of [`evolve_free`], exposed separately so it can be
/// applied to `|ψ|²` as well as to `ψ`.
pub fn apply_free_kernel(field: &WaveFunction2D, t: f64, m: f64) -> Result<Evolved> {
    evolve_free(field, t, m)
}

/// `sup | |K∘ψ|² − K∘|ψ|² |`: zero when the kernel propagating `ψ` also
/// propagates the density.
pub fn kvn_postulate_defect(psi: &WaveFunction2D, t: f64, m: f64) -> Result<f64> {
    let moved = apply_free_kernel(psi, t, m)?.state;
    let rho = WaveFunction2D::new(*psi.grid(), psi.density().mapv(|r| C64::new(r, 0.0)))?;
    let moved_rho = apply_free_kernel(&rho, t, m)?.state;
    Ok(moved
        .amplitudes()
        .iter()
        .zip(moved_rho.amplitudes().iter())
        .fold(0.0f64, |acc, (z, r)| acc.max((z.norm_sqr() - r.re).abs())))
}

/// Free evolution through the Liouvillian eigenbasis: each momentum column
/// is Fourier transformed in q and multiplied by `exp(−i λ_q p t/m)`.
/// Periodic in q, so mass crossing one edge re-enters at the other.
pub fn evolve_free_spectral(psi0: &WaveFunction2D, t: f64, m: f64) -> Result<WaveFunction2D> {
    require_momentum(psi0)?;
    require_mass(m)?;
    let grid = *psi0.grid();
    let n = grid.n_q();
    let kappa = wavenumbers(n, grid.dq());
    let planner_fwd = rustfft::FftPlanner::new().plan_fft_forward(n);
    let planner_inv = rustfft::FftPlanner::new().plan_fft_inverse(n);
    let mut out = psi0.amplitudes().clone();
    map_lanes(&mut out, Axis(0), |j, buf| {
        let shift = grid.s(j) * t / m;
        planner_fwd.process(buf);
        for (z, &k) in buf.iter_mut().zip(&kappa) {
            *z *= C64::from_polar(1.0 / n as f64, -k * shift);
        }
        planner_inv.process(buf);
    });
    WaveFunction2D::new(grid, out)
}

/// Foot of the characteristic through `(q, p)`: integrates
/// `q̄' = −∂H/∂p̄`, `p̄' = ∂H/∂q̄` from `(q, p)` for time `t` with RK4.
pub fn characteristic_foot(h: &HamiltonianSpec, q: f64, p: f64, t: f64, cfg: &CharacteristicsConfig) -> (f64, f64) {
    let n = cfg.steps(t);
    let dt = t / n as f64;
    let rhs = |q: f64, p: f64| (-h.dh_dp(p), h.dh_dq(q));
    let (mut q, mut p) = (q, p);
    for _ in 0..n {
        let k1 = rhs(q, p);
        let k2 = rhs(q + 0.5 * dt * k1.0, p + 0.5 * dt * k1.1);
        let k3 = rhs(q + 0.5 * dt * k2.0, p + 0.5 * dt * k2.1);
        let k4 = rhs(q + dt * k3.0, p + dt * k3.1);
        q += dt / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
        p += dt / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
    }
    (q, p)
}

/// Characteristic feet for every node, row-major.
pub fn characteristic_feet(
    grid: &PhaseSpaceGrid,
    h: &HamiltonianSpec,
    t: f64,
    cfg: &CharacteristicsConfig,
) -> Array2<(f64, f64)> {
    let s = grid.s_nodes();
    let rows: Vec<Vec<(f64, f64)>> = (0..grid.n_q())
        .into_par_iter()
        .map(|i| {
            let q = grid.q(i);
            s.iter().map(|&p| characteristic_foot(h, q, p, t, cfg)).collect()
        })
        .collect();
    Array2::from_shape_vec(grid.shape(), rows.into_iter().flatten().collect()).expect("grid shape")
}

/// General Liouvillian evolution of grid data by backward characteristics.
pub fn evolve_characteristics(
    psi0: &WaveFunction2D,
    h: &HamiltonianSpec,
    t: f64,
    cfg: &CharacteristicsConfig,
) -> Result<Evolved> {
    require_momentum(psi0)?;
    let grid = *psi0.grid();
    let feet = characteristic_feet(&grid, h, t, cfg);
    let src = psi0.amplitudes().view();
    let mut out = Array2::<C64>::zeros(grid.shape());
    out.axis_iter_mut(Axis(0))
        .into_par_iter()
        .enumerate()
        .for_each(|(i, mut row)| {
            for (j, z) in row.iter_mut().enumerate() {
                let (q, p) = feet[[i, j]];
                *z = sample(src, &grid, q, p, cfg.interpolation);
            }
        });
    let state = WaveFunction2D::new(grid, out)?;
    Ok(Evolved::finish(psi0.norm_squared(), state, false))
}

/// `ψ(q, p, t) = ψ₀(q̄, p̄)` for an analytic initial state: the characteristic
/// solution evaluated without any interpolation.
pub fn transport_initial_data<F>(
    init: F,
    grid: &PhaseSpaceGrid,
    h: &HamiltonianSpec,
    t: f64,
    cfg: &CharacteristicsConfig,
) -> WaveFunction2D
where
    F: Fn(f64, f64) -> C64 + Sync,
{
    let feet = characteristic_feet(grid, h, t, cfg);
    pull_back(&feet, *grid, init)
}

fn pull_back<F>(feet: &Array2<(f64, f64)>, grid: PhaseSpaceGrid, f: F) -> WaveFunction2D
where
    F: Fn(f64, f64) -> C64 + Sync,
{
    let mut out = Array2::<C64>::zeros(grid.shape());
    out.axis_iter_mut(Axis(0))
        .into_par_iter()
        .enumerate()
        .for_each(|(i, mut row)| {
            for (j, z) in row.iter_mut().enumerate() {
                let (q, p) = feet[[i, j]];
                *z = f(q, p);
            }
        });
    WaveFunction2D::new(grid, out).expect("grid shape")
}

/// `Ĥψ = −i ∂ₚH ∂_qψ + i ∂_qH ∂ₚψ` with spectral derivatives.
pub fn apply_liouvillian(psi: &WaveFunction2D, h: &HamiltonianSpec) -> Result<WaveFunction2D> {
    require_momentum(psi)?;
    let grid = *psi.grid();
    let dq = derivative(psi.amplitudes(), Axis(0), grid.dq());
    let dp = derivative(psi.amplitudes(), Axis(1), grid.ds());
    let i = C64::new(0.0, 1.0);
    let out = Array2::from_shape_fn(grid.shape(), |(a, b)| {
        let (q, p) = (grid.q(a), grid.s(b));
        -i * h.dh_dp(p) * dq[[a, b]] + i * h.dh_dq(q) * dp[[a, b]]
    });
    WaveFunction2D::new(grid, out)
}

/// Result of [`decoupling_check`]. All differences are suprema over nodes
/// where the evolved modulus exceeds the relative floor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecouplingReport {
    /// `sup |F(t) − |ψ(t)||`.
    pub modulus_diff: f64,
    /// `sup |G(t) − arg ψ(t)|`, compared modulo 2π.
    pub phase_diff: f64,
    /// `sup |arg ψ(t)|`; zero when no phase is present or generated.
    pub max_phase: f64,
}

/// Evolves `ψ = F₀ e^{iG₀}` as one field and `F₀`, `G₀` as separate scalar
/// fields along the same flow, and reports how far `|ψ|`, `arg ψ` are from
/// the separately transported `F`, `G`.
pub fn decoupling_check<F, G>(
    modulus: F,
    phase: G,
    grid: &PhaseSpaceGrid,
    h: &HamiltonianSpec,
    t: f64,
    cfg: &CharacteristicsConfig,
) -> DecouplingReport
where
    F: Fn(f64, f64) -> f64 + Sync,
    G: Fn(f64, f64) -> f64 + Sync,
{
    let feet = characteristic_feet(grid, h, t, cfg);
    let psi = pull_back(&feet, *grid, |q, p| C64::from_polar(modulus(q, p), phase(q, p)));
    let f_t = pull_back(&feet, *grid, |q, p| C64::new(modulus(q, p), 0.0));
    let g_t = pull_back(&feet, *grid, |q, p| C64::new(phase(q, p), 0.0));

    let amps = psi.amplitudes();
    let max_mod = amps.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    let floor = MODULUS_FLOOR * max_mod;
    let mut report = DecouplingReport {
        modulus_diff: 0.0,
        phase_diff: 0.0,
        max_phase: 0.0,
    };
    for ((z, f), g) in amps.iter().zip(f_t.amplitudes().iter()).zip(g_t.amplitudes().iter()) {
        report.modulus_diff = report.modulus_diff.max((f.re - z.norm()).abs());
        if z.norm() > floor {
            report.phase_diff = report.phase_diff.max(wrap_angle(g.re - z.arg()).abs());
            report.max_phase = report.max_phase.max(z.arg().abs());
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{make_gaussian_qp, GaussianParams};

    fn small_grid() -> PhaseSpaceGrid {
        PhaseSpaceGrid::momentum((-10.0, 10.0), (-8.0, 10.0), 200, 180).unwrap()
    }

    #[test]
    fn zero_time_is_identity() {
        let psi = make_gaussian_qp(&GaussianParams::new(1.0, 1.0, 0.5, 1.0).unwrap(), &small_grid()).unwrap();
        let out = evolve_free(&psi, 0.0, 1.0).unwrap();
        assert!(out.state.max_abs_diff(&psi) < 1e-12);
        let k = apply_free_kernel(&psi, 0.0, 1.0).unwrap();
        assert!(k.state.max_abs_diff(&psi) < 1e-12);
    }

    #[test]
    fn rk4_steps_rule() {
        let cfg = CharacteristicsConfig::default();
        assert_eq!(cfg.steps(0.05), 10);
        assert_eq!(cfg.steps(1.0), 100);
        assert_eq!(cfg.steps(2.0 * std::f64::consts::PI), 629);
    }

    #[test]
    fn mass_loss_is_flagged() {
        let psi = make_gaussian_qp(&GaussianParams::new(1.0, 1.0, 3.0, 1.0).unwrap(), &small_grid()).unwrap();
        let out = evolve_free(&psi, 5.0, 1.0).unwrap();
        assert!(out.lost_fraction > 0.5);
        assert!(matches!(out.warnings[0], Warning::MassLoss { .. }));
        let renorm = evolve_free_with(&psi, 5.0, 1.0, &RemapOptions { renormalize: true, ..Default::default() }).unwrap();
        assert!((renorm.state.norm_squared() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn lambda_state_is_rejected() {
        let psi = make_gaussian_qp(&GaussianParams::new(1.0, 1.0, 0.0, 1.0).unwrap(), &small_grid()).unwrap();
        let lam = crate::representation::to_lambda_p(&psi).unwrap();
        assert!(matches!(evolve_free(&lam, 1.0, 1.0), Err(Error::Representation { .. })));
        assert!(apply_liouvillian(&lam, &HamiltonianSpec::free(1.0).unwrap()).is_err());
    }

    #[test]
    fn liouvillian_of_real_state_is_imaginary() {
        let psi = make_gaussian_qp(&GaussianParams::new(1.0, 0.8, 0.3, 1.0).unwrap(), &small_grid()).unwrap();
        let h = HamiltonianSpec::quadratic(1.3, 0.7).unwrap();
        let out = apply_liouvillian(&psi, &h).unwrap();
        let max_re = out.amplitudes().iter().fold(0.0f64, |m, z| m.max(z.re.abs()));
        let max_im = out.amplitudes().iter().fold(0.0f64, |m, z| m.max(z.im.abs()));
        assert!(max_re < 1e-12 * max_im.max(1.0));
        assert!(max_im > 1e-3);
    }

    #[test]
    fn decoupling_at_time_zero_is_exact() {
        let h = HamiltonianSpec::free(1.0).unwrap();
        let r = decoupling_check(
            |q, p| (-(q * q + p * p) / 2.0).exp(),
            |q, p| 0.3 * q * p,
            &small_grid(),
            &h,
            0.0,
            &CharacteristicsConfig::default(),
        );
        assert!(r.modulus_diff < 1e-15);
        assert!(r.phase_diff < 1e-12);
    }

    #[test]
    fn custom_potential_matches_quadratic() {
        let a = HamiltonianSpec::quadratic(1.0, 2.0).unwrap();
        let b = HamiltonianSpec::custom(1.0, |q| q * q, |q| 2.0 * q).unwrap();
        let cfg = CharacteristicsConfig::default();
        let fa = characteristic_foot(&a, 0.4, -1.1, 0.9, &cfg);
        let fb = characteristic_foot(&b, 0.4, -1.1, 0.9, &cfg);
        assert!((fa.0 - fb.0).abs() < 1e-15 && (fa.1 - fb.1).abs() < 1e-15);
        assert!((a.energy(1.0, 2.0) - 3.0).abs() < 1e-15);
    }
}
