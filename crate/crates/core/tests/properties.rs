use kvnlab::classical::{characteristic_foot, evolve_free, CharacteristicsConfig, HamiltonianSpec};
use kvnlab::field::make_gaussian_qp;
use kvnlab::quantum::{gaussian_closed_form, QuantumParams};
use kvnlab::representation::{from_lambda_p, to_lambda_p, uncertainty_product};
use kvnlab::twoslit::{classical_two_slit, linspace, SlitGeometry, SlitsOpen};
use kvnlab::{GaussianParams, LineGrid, PhaseSpaceGrid, WaveFunction1D};
use proptest::prelude::*;

fn small_grid() -> PhaseSpaceGrid {
    PhaseSpaceGrid::momentum((-10.0, 10.0), (-10.0, 10.0), 64, 128).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn lambda_round_trip_is_lossless(a in 0.8..1.5f64, b in 0.5..1.5f64, p_i in -1.0..1.0f64, c in -0.5..0.5f64) {
        let params = GaussianParams::new(a, b, p_i, 1.0).unwrap();
        let psi = make_gaussian_qp(&params, &small_grid()).unwrap().with_phase(move |q, p| c * q * p);
        let lam = to_lambda_p(&psi).unwrap();
        prop_assert!(from_lambda_p(&lam).unwrap().max_abs_diff(&psi) < 1e-12);
        prop_assert!((lam.norm_squared() - psi.norm_squared()).abs() < 1e-12);
    }

    #[test]
    fn uncertainty_bound_holds_for_chirped_gaussians(a in 0.8..1.5f64, b in 0.6..1.5f64, c in -0.4..0.4f64) {
        let params = GaussianParams::new(a, b, 0.0, 1.0).unwrap();
        let psi = make_gaussian_qp(&params, &small_grid()).unwrap().with_phase(move |_, p| c * p * p);
        let u = uncertainty_product(&to_lambda_p(&psi).unwrap()).unwrap();
        prop_assert!(u >= 0.5 - 1e-9, "{}", u);
    }

    #[test]
    fn node_aligned_free_flow_is_a_permutation(k in 1usize..4, p_i in -1.0..1.0f64) {
        // t·dp/(m·dq) = k, so every node lands on a node.
        let grid = PhaseSpaceGrid::lattice(0.05, 12.0, 0.1, 6.0).unwrap();
        let params = GaussianParams::new(1.0, 0.8, p_i, 1.0).unwrap();
        let psi = make_gaussian_qp(&params, &grid).unwrap();
        let t = k as f64 * 0.5;
        let moved = evolve_free(&psi, t, 1.0).unwrap();
        let g = *moved.state.grid();
        for ((i, j), z) in moved.state.amplitudes().indexed_iter() {
            let (q, p) = (g.q(i), g.s(j));
            let src = ((q - p * t - g.q_min()) / g.dq()).round();
            if src >= 0.0 && (src as usize) < g.n_q() {
                prop_assert_eq!(*z, psi.amplitudes()[[src as usize, j]]);
            }
        }
    }

    #[test]
    fn harmonic_flow_keeps_energy(q in -4.0..4.0f64, p in -4.0..4.0f64, k in 0.2..3.0f64, t in 0.0..5.0f64) {
        let h = HamiltonianSpec::quadratic(1.3, k).unwrap();
        let (q1, p1) = characteristic_foot(&h, q, p, t, &CharacteristicsConfig::default());
        prop_assert!((h.energy(q1, p1) - h.energy(q, p)).abs() < 1e-8 * (1.0 + h.energy(q, p)));
    }

    #[test]
    fn free_quantum_packet_keeps_unit_norm(a in 0.5..2.0f64, p_i in -1.0..1.0f64, t in 0.0..3.0f64) {
        let qp = QuantumParams::default();
        let grid = LineGrid::new(-40.0, 40.0, 4001).unwrap();
        let psi = WaveFunction1D::from_fn(grid, |x| gaussian_closed_form(a, p_i, t, &qp, x));
        prop_assert!((psi.norm_squared() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn classical_screen_ignores_initial_phase(w in 0.5..5.0f64, c in -2.0..2.0f64) {
        let params = GaussianParams::new(1.0, 1.0, 0.0, 1.0).unwrap();
        let geom = SlitGeometry::unit(1.0, 0.1).unwrap();
        let xs = linspace(-4.0, 4.0, 41);
        let g = move |x: f64, p: f64| c * (w * x).sin() * p + x * x;
        let plain = classical_two_slit(&params, &geom, None, SlitsOpen::Both, &xs).unwrap();
        let phased = classical_two_slit(&params, &geom, Some(&g), SlitsOpen::Both, &xs).unwrap();
        for (u, v) in plain.raw.iter().zip(&phased.raw) {
            prop_assert!((u - v).abs() < 1e-12);
        }
    }
}
