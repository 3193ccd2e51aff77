//! The phase of a KvN wave function rides along the flow without touching
//! the density. Three initial phases give one density.

use kvnlab::classical::{transport_initial_data, CharacteristicsConfig, HamiltonianSpec};
use kvnlab::{GaussianParams, PhaseSpaceGrid, C64};

fn main() -> kvnlab::Result<()> {
    let params = GaussianParams::new(1.0, 1.0, 0.5, 1.0)?;
    let grid = PhaseSpaceGrid::standard();
    let h = HamiltonianSpec::quadratic(1.0, 0.5)?;
    let cfg = CharacteristicsConfig::default();
    let phases: [(&str, fn(f64, f64) -> f64); 3] = [
        ("none", |_, _| 0.0),
        ("linear", |q, p| 0.7 * q - 1.3 * p),
        ("q*p", |q, p| 0.3 * q * p),
    ];
    let densities: Vec<_> = phases
        .iter()
        .map(|(_, g)| {
            transport_initial_data(|q, p| C64::from_polar(params.amplitude(q, p), g(q, p)), &grid, &h, 1.0, &cfg)
                .density()
        })
        .collect();
    for (k, (name, _)) in phases.iter().enumerate().skip(1) {
        let diff = densities[0]
            .iter()
            .zip(densities[k].iter())
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        println!("max |rho_none - rho_{name}| = {diff:.2e}");
    }
    Ok(())
}
