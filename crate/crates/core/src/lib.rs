//! Koopman–von Neumann (KvN) wave mechanics on phase-space grids.
//!
//! Classical states are complex wave functions `ψ(q, p)` whose modulus squared
//! is the Liouville density; they evolve under the Liouvillian
//! `Ĥ = −i ∂ₚH ∂_q + i ∂_qH ∂ₚ`. The crate evolves such states on uniform
//! grids, changes basis to the `(q, λ_p)` representation, and runs the
//! matching quantum computations (free Gaussian packets, Feynman kernel,
//! Madelung equations) so the two theories can be compared side by side,
//! up to and including a two-slit experiment.
//!
//! Module map:
//!
//! * [`field`]: grids, wave-function containers, Gaussian constructors,
//!   observables and the phase/modulus split.
//! * [`classical`]: Liouvillian evolution (exact free remap, method of
//!   characteristics, spectral operator application, decoupling check).
//! * [`quantum`]: free Schrödinger evolution and the Madelung residual.
//! * [`representation`]: the `(q, λ_p)` basis.
//! * [`twoslit`]: classical and quantum two-slit pipelines.
//! * [`cli`]: the experiment runner behind the `kvnlab` binary.

pub mod classical;
pub mod cli;
mod error;
pub mod field;
pub mod interp;
pub mod quadrature;
pub mod quantum;
pub mod representation;
pub mod spectral;
pub mod twoslit;

pub use error::{Error, Result, Warning};
pub use field::{
    AxisKind, GaussianParams, LineGrid, PhaseModulusPair, PhaseSpaceGrid, WaveFunction1D,
    WaveFunction2D,
};

/// Complex amplitude type used throughout.
pub type C64 = num_complex::Complex64;
