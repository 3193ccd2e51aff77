//! Shared substrate: lattices, wave-function containers, the Gaussian
//! families used as analytic references, observables, and `ψ = F e^{iG}`.

mod gaussian;
mod grid;
mod polar;
mod state;

pub use gaussian::{make_gaussian_qp, make_gaussian_x, GaussianParams, SUPPORT_WIDTHS};
pub use grid::{AxisKind, LineGrid, PhaseSpaceGrid};
pub use polar::{
    join_phase_modulus, split_phase_modulus, split_phase_modulus_1d, wrap_angle, PhaseModulusPair,
    MODULUS_FLOOR,
};
pub(crate) use polar::unwrap_lane;
pub use state::{norm_squared, Normed, WaveFunction1D, WaveFunction2D};
