//! The (q, λ_p) basis: transform, momentum as i∂/∂λ_p, the uncertainty
//! product, and free evolution compared with its closed form.

use kvnlab::field::make_gaussian_qp;
use kvnlab::representation::{
    evolve_free_lambda, evolved_gaussian_lambda, mean_p_in_lambda, to_lambda_p, uncertainty_product,
};
use kvnlab::{GaussianParams, PhaseSpaceGrid};

fn main() -> kvnlab::Result<()> {
    let params = GaussianParams::new(1.0, 1.0, 0.5, 1.0)?;
    let psi = make_gaussian_qp(&params, &PhaseSpaceGrid::standard())?;
    let lam = to_lambda_p(&psi)?;
    println!("<p> = {:.10}", mean_p_in_lambda(&lam)?);
    println!("dp * dlambda = {:.10}", uncertainty_product(&lam)?);

    let moved = evolve_free_lambda(&lam, 1.0, params.m)?.state;
    let g = *moved.grid();
    let worst = moved
        .amplitudes()
        .indexed_iter()
        .map(|((i, j), z)| (z - evolved_gaussian_lambda(&params, g.q(i), g.s(j), 1.0)).norm())
        .fold(0.0, f64::max);
    println!("t = 1 closed-form deviation: {worst:.2e}");
    Ok(())
}
