//! Width of a free Schrödinger Gaussian against the classical packet with
//! the same initial spreads. Narrow quantum packets spread faster; narrow
//! classical ones do not.

use kvnlab::classical::evolve_free;
use kvnlab::field::make_gaussian_qp;
use kvnlab::quantum::{evolve_gaussian_free, gaussian_variance, QuantumParams};
use kvnlab::{GaussianParams, LineGrid, PhaseSpaceGrid};

fn main() -> kvnlab::Result<()> {
    let qp = QuantumParams::default();
    let line = LineGrid::new(-80.0, 80.0, 8001)?;
    println!("{:>6} {:>12} {:>12} {:>12}", "a", "quantum", "formula", "classical");
    for a in [1.0, 0.5, 0.25, 0.125] {
        let quantum = evolve_gaussian_free(a, 0.0, 1.0, &qp, &line)?.variance_x()?;
        // Classical packet with Δp fixed by the same a, not by ħ/a.
        let params = GaussianParams::new(a, a, 0.0, 1.0)?;
        let half = 8.0 * a;
        let grid = PhaseSpaceGrid::momentum((-half, half), (-half, half), 257, 257)?;
        let classical = evolve_free(&make_gaussian_qp(&params, &grid)?, 1.0, 1.0)?.state.variance_q()?;
        println!("{a:>6.3} {quantum:>12.5} {:>12.5} {classical:>12.5}", gaussian_variance(a, 1.0, &qp));
    }
    Ok(())
}
