//! Free KvN evolution of a double Gaussian: the density shears, the marginal
//! in q spreads, and the momentum distribution stays put.

use kvnlab::classical::evolve_free;
use kvnlab::field::make_gaussian_qp;
use kvnlab::{GaussianParams, PhaseSpaceGrid};

fn main() -> kvnlab::Result<()> {
    let params = GaussianParams::new(1.0, 1.0, 0.5, 1.0)?;
    let psi0 = make_gaussian_qp(&params, &PhaseSpaceGrid::standard())?;
    println!("{:>4} {:>9} {:>9} {:>9} {:>9}", "t", "<q>", "<p>", "var q", "var p");
    for t in [0.0, 0.5, 1.0, 1.5, 2.0] {
        let psi = evolve_free(&psi0, t, params.m)?.state;
        println!(
            "{t:>4.1} {:>9.5} {:>9.5} {:>9.5} {:>9.5}",
            psi.mean_q()?,
            psi.mean_s()?,
            psi.variance_q()?,
            psi.variance_s()?
        );
    }
    Ok(())
}
