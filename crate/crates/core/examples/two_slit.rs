//! Classical and quantum two-slit screens side by side. The classical
//! pattern is the sum of the single-slit patterns; the quantum one carries
//! an interference term and a comb of minima.

use kvnlab::quantum::QuantumParams;
use kvnlab::twoslit::{
    analyze_minima, classical_two_slit, linspace, quantum_two_slit, SlitGeometry, SlitsOpen, FRINGE_WINDOW,
};
use kvnlab::GaussianParams;

fn main() -> kvnlab::Result<()> {
    let params = GaussianParams::new(1.0, 1.0, 0.0, 1.0)?;
    let geom = SlitGeometry::unit(1.0, 0.1)?;
    let xs = linspace(-8.0, 8.0, 1601);
    let classical = classical_two_slit(&params, &geom, None, SlitsOpen::Both, &xs)?;
    let c = analyze_minima(&classical.x, &classical.p, (-4.0, 4.0))?;
    println!("classical: {} minima in [-4, 4]", c.count);

    let qp = QuantumParams::default();
    let xs = linspace(-24.0, 24.0, 4801);
    for x_a in [0.5, 1.0] {
        let geom = SlitGeometry::unit(x_a, 0.1)?;
        let q = quantum_two_slit(1.0, &geom, &qp, SlitsOpen::Both, &xs)?;
        let m = analyze_minima(&q.curve.x, &q.curve.p, FRINGE_WINDOW)?;
        println!(
            "quantum, slit separation {}: {} minima, spacing {:.3}",
            2.0 * x_a,
            m.count,
            m.mean_spacing.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
