//! The `(q, λ_p)` representation.
//!
//! `ψ(q, λ_p) = (1/√2π) ∫dp e^{−ipλ_p} ψ(q, p)`, realized row by row as a
//! discrete Fourier sum on the lattice conjugate to the momentum lattice.
//! In this basis `p̂ = i∂/∂λ_p` and the free Liouvillian is `(1/m)∂²/∂q∂λ_p`.
//! Inner products here use plain lattice sums, for which the discrete
//! transform is exactly unitary and the spectral `∂/∂λ_p` exactly
//! anti-Hermitian.

use std::f64::consts::PI;

use ndarray::{Array2, Axis};

use crate::classical::{evolve_free, Evolved};
use crate::field::GaussianParams;
use crate::spectral::{derivative, mixed_derivative, offset_dft_rows, Lattice};
use crate::{AxisKind, Error, PhaseSpaceGrid, Result, WaveFunction2D, C64};

/// Imaginary part of `⟨p⟩` above which the derivative operator is declared
/// non-self-adjoint on the given state.
pub const SELF_ADJOINT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Representation {
    QP,
    QLambdaP,
}

impl Representation {
    pub fn of(psi: &WaveFunction2D) -> Self {
        match psi.grid().axis() {
            AxisKind::Momentum => Representation::QP,
            AxisKind::LambdaP { .. } => Representation::QLambdaP,
        }
    }

    fn label(self) -> &'static str {
        match self {
            Representation::QP => "(q,p)",
            Representation::QLambdaP => "(q,lambda_p)",
        }
    }
}

fn require(psi: &WaveFunction2D, rep: Representation) -> Result<()> {
    let found = Representation::of(psi);
    if found == rep {
        Ok(())
    } else {
        Err(Error::Representation {
            expected: rep.label(),
            found: found.label(),
        })
    }
}

fn lattice(grid: &PhaseSpaceGrid) -> Lattice {
    Lattice {
        origin: grid.s_min(),
        step: grid.ds(),
    }
}

pub fn to_lambda_p(psi: &WaveFunction2D) -> Result<WaveFunction2D> {
    require(psi, Representation::QP)?;
    let from = *psi.grid();
    let to = from.lambda_dual()?;
    let scale = from.ds() / (2.0 * PI).sqrt();
    let out = offset_dft_rows(psi.amplitudes(), lattice(&from), lattice(&to), -1.0, scale);
    WaveFunction2D::new(to, out)
}

pub fn from_lambda_p(psi: &WaveFunction2D) -> Result<WaveFunction2D> {
    require(psi, Representation::QLambdaP)?;
    let from = *psi.grid();
    let to = from.momentum_dual()?;
    let scale = from.ds() / (2.0 * PI).sqrt();
    let out = offset_dft_rows(psi.amplitudes(), lattice(&from), lattice(&to), 1.0, scale);
    WaveFunction2D::new(to, out)
}

/// `Σ conj(u)·v` over the lattice times the cell measure.
fn inner(grid: &PhaseSpaceGrid, u: &Array2<C64>, v: &Array2<C64>) -> C64 {
    let rows: Vec<C64> = u
        .axis_iter(Axis(0))
        .zip(v.axis_iter(Axis(0)))
        .map(|(a, b)| a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum())
        .collect();
    rows.into_iter().sum::<C64>() * grid.cell_measure()
}

fn p_expectation(psi: &WaveFunction2D) -> (C64, f64, f64) {
    let grid = psi.grid();
    let amps = psi.amplitudes();
    let d = derivative(amps, Axis(1), grid.ds());
    let norm = inner(grid, amps, amps).re;
    let i = C64::new(0.0, 1.0);
    let p1 = inner(grid, amps, &d) * i / norm;
    let p2 = inner(grid, &d, &d).re / norm;
    (p1, p2, norm)
}

/// `⟨ψ| i∂/∂λ_p |ψ⟩ / ⟨ψ|ψ⟩`.
pub fn mean_p_in_lambda(psi: &WaveFunction2D) -> Result<f64> {
    require(psi, Representation::QLambdaP)?;
    let (p1, _, _) = p_expectation(psi);
    if p1.im.abs() > SELF_ADJOINT_TOL {
        return Err(Error::SelfAdjointness(p1.im));
    }
    Ok(p1.re)
}

/// `Δp · Δλ_p`, with `⟨p²⟩ = ‖∂ψ/∂λ_p‖²/‖ψ‖²` and `Δλ_p` from the density.
pub fn uncertainty_product(psi: &WaveFunction2D) -> Result<f64> {
    require(psi, Representation::QLambdaP)?;
    let (p1, p2, norm) = p_expectation(psi);
    if p1.im.abs() > SELF_ADJOINT_TOL {
        return Err(Error::SelfAdjointness(p1.im));
    }
    let var_p = p2 - p1.re * p1.re;
    let grid = psi.grid();
    let rho = psi.density();
    let (mut l1, mut l2) = (0.0, 0.0);
    for row in rho.axis_iter(Axis(0)) {
        for (j, r) in row.iter().enumerate() {
            let l = grid.s(j);
            l1 += l * r;
            l2 += l * l * r;
        }
    }
    let cell = grid.cell_measure();
    let mean_l = l1 * cell / norm;
    let var_l = l2 * cell / norm - mean_l * mean_l;
    Ok((var_p * var_l).sqrt())
}

/// Free evolution in the `(q, λ_p)` basis by way of the `(q, p)` remap.
pub fn evolve_free_lambda(psi: &WaveFunction2D, t: f64, m: f64) -> Result<Evolved> {
    require(psi, Representation::QLambdaP)?;
    let moved = evolve_free(&from_lambda_p(psi)?, t, m)?;
    Ok(Evolved {
        state: to_lambda_p(&moved.state)?,
        lost_fraction: moved.lost_fraction,
        warnings: moved.warnings,
    })
}

/// `J = (i/m)(ψ*∂q∂λψ − ψ∂q∂λψ*) = −(2/m) Im(ψ* ∂q∂λ ψ)`.
pub fn current_lambda(psi: &WaveFunction2D, m: f64) -> Result<Array2<f64>> {
    require(psi, Representation::QLambdaP)?;
    let grid = psi.grid();
    let mixed = mixed_derivative(psi.amplitudes(), grid.dq(), grid.ds());
    let mut out = Array2::<f64>::zeros(grid.shape());
    ndarray::Zip::from(&mut out)
        .and(psi.amplitudes())
        .and(&mixed)
        .for_each(|j, z, d| *j = -2.0 / m * (z.conj() * d).im);
    Ok(out)
}

/// `sup |∂ρ/∂t + J|` at the middle of three snapshots spaced `dt` apart,
/// with a centered time difference. The potential never enters `J`, so no
/// potential is needed here.
pub fn continuity_residual_lambda(snapshots: [&WaveFunction2D; 3], dt: f64, m: f64) -> Result<f64> {
    let [prev, cur, next] = snapshots;
    for s in snapshots {
        require(s, Representation::QLambdaP)?;
    }
    if prev.grid() != cur.grid() || next.grid() != cur.grid() {
        return Err(Error::InvalidGrid("snapshots must share one grid".into()));
    }
    if !(dt > 0.0) {
        return Err(Error::InvalidParameter(format!("dt must be > 0, got {dt}")));
    }
    let j = current_lambda(cur, m)?;
    let rho_next = next.density();
    let rho_prev = prev.density();
    let mut worst = 0.0f64;
    for ((jn, rn), rp) in j.iter().zip(rho_next.iter()).zip(rho_prev.iter()) {
        worst = worst.max(((rn - rp) / (2.0 * dt) + jn).abs());
    }
    Ok(worst)
}

/// `√(b/πa) e^{−q²/2a²} e^{−λ²b²/2 − i p_i λ}`: the double Gaussian in the
/// `(q, λ_p)` basis.
pub fn gaussian_lambda(params: &GaussianParams, q: f64, lambda: f64) -> C64 {
    let (a, b) = (params.a, params.b);
    let modulus = (b / (PI * a)).sqrt() * (-q * q / (2.0 * a * a) - lambda * lambda * b * b / 2.0).exp();
    C64::from_polar(modulus, -params.p_i * lambda)
}

/// The freely evolved double Gaussian in the `(q, λ_p)` basis.
pub fn evolved_gaussian_lambda(params: &GaussianParams, q: f64, lambda: f64, t: f64) -> C64 {
    let GaussianParams { a, b, p_i, m } = *params;
    let d = m * m * a * a + t * t * b * b;
    let norm = m * (a * b / (PI * d)).sqrt();
    let inner = C64::new(lambda * m * a * a * b * b, q * t * b * b + p_i * m * a * a);
    let exponent = -q * q / (2.0 * a * a) - p_i * p_i / (2.0 * b * b) - inner * inner / (2.0 * a * a * b * b * d);
    norm * exponent.exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_gaussian_qp;

    fn gaussian(p_i: f64) -> WaveFunction2D {
        let g = PhaseSpaceGrid::momentum((-8.0, 8.0), (-8.0, 8.0), 128, 128).unwrap();
        make_gaussian_qp(&GaussianParams::new(1.0, 1.0, p_i, 1.0).unwrap(), &g).unwrap()
    }

    #[test]
    fn tags_are_enforced() {
        let psi = gaussian(0.0);
        assert!(from_lambda_p(&psi).is_err());
        assert!(mean_p_in_lambda(&psi).is_err());
        let lam = to_lambda_p(&psi).unwrap();
        assert_eq!(Representation::of(&lam), Representation::QLambdaP);
        assert!(to_lambda_p(&lam).is_err());
        assert!(current_lambda(&psi, 1.0).is_err());
    }

    #[test]
    fn round_trip_restores_grid_and_values() {
        let psi = gaussian(0.5).with_phase(|q, p| 0.2 * q * p);
        let back = from_lambda_p(&to_lambda_p(&psi).unwrap()).unwrap();
        assert_eq!(back.grid(), psi.grid());
        assert!(back.max_abs_diff(&psi) < 1e-12);
    }

    #[test]
    fn evolved_closed_form_reduces_at_time_zero() {
        let params = GaussianParams::new(1.3, 0.7, 0.4, 2.0).unwrap();
        for &(q, l) in &[(0.0, 0.0), (0.5, -1.2), (-1.0, 2.0)] {
            let a = evolved_gaussian_lambda(&params, q, l, 0.0);
            let b = gaussian_lambda(&params, q, l);
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn static_real_field_has_no_current() {
        let lam = to_lambda_p(&gaussian(0.0)).unwrap();
        let r = continuity_residual_lambda([&lam, &lam, &lam], 1e-4, 1.0).unwrap();
        assert!(r < 1e-12);
    }
}
