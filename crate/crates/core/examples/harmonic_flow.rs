//! A packet in a harmonic well turns rigidly in phase space: after a quarter
//! period position and momentum have traded places.

use std::f64::consts::FRAC_PI_2;

use kvnlab::classical::{evolve_characteristics, CharacteristicsConfig, HamiltonianSpec};
use kvnlab::field::make_gaussian_qp;
use kvnlab::{GaussianParams, PhaseSpaceGrid};

fn main() -> kvnlab::Result<()> {
    let params = GaussianParams::new(1.0, 0.6, 2.0, 1.0)?;
    let grid = PhaseSpaceGrid::momentum((-10.0, 10.0), (-10.0, 10.0), 256, 256)?;
    let psi0 = make_gaussian_qp(&params, &grid)?;
    let h = HamiltonianSpec::quadratic(1.0, 1.0)?;
    let cfg = CharacteristicsConfig::default();
    for k in 0..=4 {
        let t = k as f64 * FRAC_PI_2 / 2.0;
        let psi = evolve_characteristics(&psi0, &h, t, &cfg)?.state;
        println!("t = {t:.3}: <q> = {:+.4}, <p> = {:+.4}", psi.mean_q()?, psi.mean_s()?);
    }
    Ok(())
}
