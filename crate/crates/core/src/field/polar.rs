use std::f64::consts::PI;

use ndarray::{Array, Array1, Array2, ArrayViewMut1, Axis, Dimension, Zip};

use super::state::{WaveFunction1D, WaveFunction2D};
use crate::{Result, C64};

/// Relative modulus floor below which the phase is undefined.
pub const MODULUS_FLOOR: f64 = 1e-12;

/// `ψ = F e^{iG}` stored as separate real fields.
///
/// `phase` is unwrapped along the first axis wherever `modulus` exceeds the
/// floor and is 0 elsewhere.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseModulusPair<D: Dimension> {
    pub modulus: Array<f64, D>,
    pub phase: Array<f64, D>,
    /// Absolute modulus floor used for the split.
    pub floor: f64,
}

impl<D: Dimension> PhaseModulusPair<D> {
    /// `F e^{iG}`.
    pub fn join(&self) -> Array<C64, D> {
        Zip::from(&self.modulus)
            .and(&self.phase)
            .map_collect(|&f, &g| C64::from_polar(f, g))
    }
}

/// Wraps an angle into `(−π, π]`.
pub fn wrap_angle(x: f64) -> f64 {
    let y = (x + PI).rem_euclid(2.0 * PI) - PI;
    if y <= -PI {
        y + 2.0 * PI
    } else {
        y
    }
}

/// Removes 2π jumps between consecutive entries. Entries flagged `false` in
/// `valid` are set to 0 and break the unwrapping chain.
pub(crate) fn unwrap_lane(mut phase: ArrayViewMut1<f64>, valid: &[bool]) {
    let mut prev: Option<f64> = None;
    for (k, g) in phase.iter_mut().enumerate() {
        if !valid[k] {
            *g = 0.0;
            prev = None;
            continue;
        }
        if let Some(p) = prev {
            *g = p + wrap_angle(*g - p);
        }
        prev = Some(*g);
    }
}

fn floor_of<'a, I: Iterator<Item = &'a C64>>(amps: I) -> f64 {
    let max = amps.fold(0.0f64, |m, z| m.max(z.norm()));
    MODULUS_FLOOR * max
}

pub fn split_phase_modulus(psi: &WaveFunction2D) -> PhaseModulusPair<ndarray::Ix2> {
    let amps = psi.amplitudes();
    let floor = floor_of(amps.iter());
    let modulus: Array2<f64> = amps.mapv(|z| z.norm());
    let mut phase: Array2<f64> = amps.mapv(|z| z.arg());
    // Unwrap along q: lanes of axis 0, one per second-axis node.
    for (j, lane) in phase.axis_iter_mut(Axis(1)).enumerate() {
        let valid: Vec<bool> = modulus.column(j).iter().map(|&f| f > floor).collect();
        unwrap_lane(lane, &valid);
    }
    PhaseModulusPair { modulus, phase, floor }
}

pub fn split_phase_modulus_1d(psi: &WaveFunction1D) -> PhaseModulusPair<ndarray::Ix1> {
    let amps = psi.amplitudes();
    let floor = floor_of(amps.iter());
    let modulus: Array1<f64> = amps.mapv(|z| z.norm());
    let mut phase: Array1<f64> = amps.mapv(|z| z.arg());
    let valid: Vec<bool> = modulus.iter().map(|&f| f > floor).collect();
    unwrap_lane(phase.view_mut(), &valid);
    PhaseModulusPair { modulus, phase, floor }
}

pub fn join_phase_modulus(
    pair: &PhaseModulusPair<ndarray::Ix2>,
    grid: crate::PhaseSpaceGrid,
) -> Result<WaveFunction2D> {
    WaveFunction2D::new(grid, pair.join())
}
