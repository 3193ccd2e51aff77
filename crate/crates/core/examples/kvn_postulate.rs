//! Evolving ψ and then squaring equals evolving |ψ|² with the same kernel.
//! On a node-aligned lattice the free shear is exact, so the defect is 0.

use kvnlab::classical::kvn_postulate_defect;
use kvnlab::field::make_gaussian_qp;
use kvnlab::{GaussianParams, PhaseSpaceGrid};

fn main() -> kvnlab::Result<()> {
    let grid = PhaseSpaceGrid::lattice(0.025, 12.0, 0.05, 8.0)?;
    let psi = make_gaussian_qp(&GaussianParams::new(1.0, 1.0, 0.5, 1.0)?, &grid)?
        .with_phase(|q, p| 0.3 * q * p + q.sin());
    for t in [0.5, 1.0, 2.0] {
        println!("t = {t}: defect {:.3e}", kvn_postulate_defect(&psi, t, 1.0)?);
    }
    let off = PhaseSpaceGrid::momentum((-12.0, 12.0), (-8.0, 8.0), 301, 181)?;
    let psi = make_gaussian_qp(&GaussianParams::new(1.0, 1.0, 0.5, 1.0)?, &off)?.with_phase(|q, p| 0.3 * q * p);
    println!("unaligned grid, t = 1: defect {:.3e}", kvn_postulate_defect(&psi, 1.0, 1.0)?);
    Ok(())
}
