//! Classically the modulus and phase equations decouple; quantum
//! mechanically the quantum potential ties them together. Prints both sides.

use kvnlab::classical::{decoupling_check, CharacteristicsConfig, HamiltonianSpec};
use kvnlab::quantum::{evolve_gaussian_free, madelung_residual, QuantumParams};
use kvnlab::{GaussianParams, LineGrid, PhaseSpaceGrid};

fn main() -> kvnlab::Result<()> {
    let params = GaussianParams::new(1.0, 1.0, 0.0, 1.0)?;
    let h = HamiltonianSpec::free(1.0)?;
    let report = decoupling_check(
        |q, p| params.amplitude(q, p),
        |q, p| 0.3 * q * p,
        &PhaseSpaceGrid::standard(),
        &h,
        1.0,
        &CharacteristicsConfig::default(),
    );
    println!("classical: modulus diff {:.2e}, phase diff {:.2e}", report.modulus_diff, report.phase_diff);

    let qp = QuantumParams::default();
    let line = LineGrid::standard();
    let dt = 1e-4;
    let snap = |t: f64| evolve_gaussian_free(1.0, 1.0, t, &qp, &line);
    let (a, b, c) = (snap(1.0 - dt)?, snap(1.0)?, snap(1.0 + dt)?);
    let m = madelung_residual([&a, &b, &c], dt, |_| 0.0, &qp)?;
    println!(
        "quantum: r_S {:.2e}, r_A {:.2e}, quantum potential up to {:.3} over {} nodes",
        m.r_s, m.r_a, m.coupling, m.nodes
    );
    Ok(())
}
