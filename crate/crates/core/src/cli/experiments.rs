use serde_json::{json, Map, Value};

use super::config::{Experiment, ExperimentConfig};
use super::output::Table;
use super::CliError;
use crate::classical::{
    decoupling_check, evolve_characteristics, evolve_free, kvn_postulate_defect, CharacteristicsConfig,
    HamiltonianSpec,
};
use crate::field::make_gaussian_qp;
use crate::quantum::{evolve_gaussian_free, gaussian_variance, madelung_residual, QuantumParams};
use crate::representation::{
    evolve_free_lambda, evolved_gaussian_lambda, gaussian_lambda, mean_p_in_lambda, to_lambda_p,
    uncertainty_product,
};
use crate::twoslit::{analyze_minima, classical_two_slit, linspace, quantum_two_slit, SlitGeometry};
use crate::{GaussianParams, LineGrid, PhaseSpaceGrid, Warning, WaveFunction2D};

/// Everything a run produces besides the files' names.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub table: Table,
    pub grid: Value,
    pub tolerances: Value,
    pub results: Map<String, Value>,
    pub warnings: Vec<String>,
}

impl Outcome {
    fn new(table: Table) -> Self {
        Self {
            table,
            grid: Value::Null,
            tolerances: json!({}),
            results: Map::new(),
            warnings: Vec::new(),
        }
    }

    fn warn(&mut self, w: &[Warning]) {
        for w in w {
            let s = w.to_string();
            if !self.warnings.contains(&s) {
                self.warnings.push(s);
            }
        }
    }

    fn put(&mut self, key: &str, v: impl Into<Value>) {
        self.results.insert(key.to_string(), v.into());
    }
}

pub fn execute(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    match cfg.experiment {
        Experiment::ClassicalGaussian => classical_gaussian(cfg),
        Experiment::QuantumGaussian => quantum_gaussian(cfg),
        Experiment::LambdaRep => lambda_rep(cfg),
        Experiment::Decoupling => decoupling(cfg),
        Experiment::TwoSlitClassical => two_slit_classical(cfg),
        Experiment::TwoSlitQuantum => two_slit_quantum(cfg),
        Experiment::KvnPostulateCheck => kvn_postulate(cfg),
    }
}

fn phase_grid(cfg: &ExperimentConfig) -> Result<PhaseSpaceGrid, CliError> {
    Ok(PhaseSpaceGrid::momentum(
        (cfg.get("q_min"), cfg.get("q_max")),
        (cfg.get("p_min"), cfg.get("p_max")),
        cfg.count("n_q", 2)?,
        cfg.count("n_p", 2)?,
    )?)
}

fn grid_json(g: &PhaseSpaceGrid) -> Value {
    json!({
        "q": [g.q_min(), g.q_max()],
        "s": [g.s_min(), g.s_max()],
        "n_q": g.n_q(),
        "n_s": g.n_s(),
    })
}

fn gaussian(cfg: &ExperimentConfig) -> Result<GaussianParams, CliError> {
    Ok(GaussianParams::new(cfg.get("a"), cfg.get("b"), cfg.get("p_i"), cfg.get("m"))?)
}

fn moments(psi: &WaveFunction2D) -> Result<[f64; 4], CliError> {
    Ok([psi.mean_q()?, psi.mean_s()?, psi.variance_q()?, psi.variance_s()?])
}

fn classical_gaussian(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let params = gaussian(cfg)?;
    let grid = phase_grid(cfg)?;
    let t = cfg.get("t");
    let frames = cfg.count("frames", 2)?;
    let psi0 = make_gaussian_qp(&params, &grid)?;

    let mut out = Outcome::new(Table::new(&["t", "mean_q", "mean_p", "var_q", "var_p", "var_q_exact"]));
    for tk in linspace(0.0, t, frames) {
        let evolved = evolve_free(&psi0, tk, params.m)?;
        out.warn(&evolved.warnings);
        let [mq, mp, vq, vp] = moments(&evolved.state)?;
        let exact = 0.5 * params.a * params.a + 0.5 * (params.b * tk / params.m).powi(2);
        out.table.push(vec![tk, mq, mp, vq, vp, exact]);
    }

    let h = HamiltonianSpec::free(params.m)?;
    let chars = evolve_characteristics(&psi0, &h, t, &CharacteristicsConfig::default())?;
    out.warn(&chars.warnings);
    let [mq, mp, vq, vp] = moments(&chars.state)?;
    out.put(
        "characteristics",
        json!({"t": t, "mean_q": mq, "mean_p": mp, "var_q": vq, "var_p": vp}),
    );
    out.put("mean_q_exact", params.p_i * t / params.m);
    out.put("var_p_exact", 0.5 * params.b * params.b);
    out.grid = grid_json(&grid);
    out.tolerances = json!({"moments": 1e-3});
    Ok(out)
}

fn quantum_gaussian(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let qp = QuantumParams::new(cfg.get("hbar"), cfg.get("m"))?;
    let grid = LineGrid::new(cfg.get("x_min"), cfg.get("x_max"), cfg.count("n_x", 2)?)?;
    let (a, t) = (cfg.get("a"), cfg.get("t"));
    let psi = evolve_gaussian_free(a, cfg.get("p_i"), t, &qp, &grid)?;

    let mut out = Outcome::new(Table::new(&["x", "re", "im", "density"]));
    for (i, z) in psi.amplitudes().iter().enumerate() {
        out.table.push(vec![grid.x(i), z.re, z.im, z.norm_sqr()]);
    }
    out.put("mean_x", psi.mean_x()?);
    out.put("var_x", psi.variance_x()?);
    out.put("var_x_exact", gaussian_variance(a, t, &qp));
    out.grid = json!({"x": [grid.x_min(), grid.x_max()], "n_x": grid.len()});
    out.tolerances = json!({"variance": 1e-4});
    Ok(out)
}

fn lambda_rep(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let params = gaussian(cfg)?;
    let grid = phase_grid(cfg)?;
    let t = cfg.get("t");
    let psi0 = make_gaussian_qp(&params, &grid)?;
    let lam0 = to_lambda_p(&psi0)?;
    let evolved = evolve_free_lambda(&lam0, t, params.m)?;
    let lam_grid = *lam0.grid();

    let mut err0 = 0.0f64;
    let mut err_t = 0.0f64;
    for ((i, j), z) in lam0.amplitudes().indexed_iter() {
        let (q, l) = (lam_grid.q(i), lam_grid.s(j));
        err0 = err0.max((z - gaussian_lambda(&params, q, l)).norm());
        let zt = evolved.state.amplitudes()[[i, j]];
        err_t = err_t.max((zt - evolved_gaussian_lambda(&params, q, l, t)).norm());
    }

    let mut out = Outcome::new(Table::new(&["lambda", "density", "density_exact"]));
    let dq = lam_grid.dq();
    for j in 0..lam_grid.n_s() {
        let l = lam_grid.s(j);
        let (mut num, mut exact) = (0.0, 0.0);
        for i in 0..lam_grid.n_q() {
            let w = if i == 0 || i + 1 == lam_grid.n_q() { 0.5 * dq } else { dq };
            num += w * evolved.state.amplitudes()[[i, j]].norm_sqr();
            exact += w * evolved_gaussian_lambda(&params, lam_grid.q(i), l, t).norm_sqr();
        }
        out.table.push(vec![l, num, exact]);
    }
    out.warn(&evolved.warnings);
    out.put("mean_p_lambda", mean_p_in_lambda(&lam0)?);
    out.put("uncertainty_product", uncertainty_product(&lam0)?);
    out.put("max_error_initial", err0);
    out.put("max_error_evolved", err_t);
    out.put("mean_q_t", evolved.state.mean_q()?);
    out.put("var_q_t", evolved.state.variance_q()?);
    out.grid = grid_json(&lam_grid);
    out.tolerances = json!({"initial": 1e-6, "evolved": 1e-4, "mean_p": 1e-6});
    Ok(out)
}

fn decoupling(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let params = gaussian(cfg)?;
    let grid = phase_grid(cfg)?;
    let (t, g, k) = (cfg.get("t"), cfg.get("g"), cfg.get("k"));
    let h = if k == 0.0 {
        HamiltonianSpec::free(params.m)?
    } else {
        HamiltonianSpec::quadratic(params.m, k)?
    };
    let report = decoupling_check(
        |q, p| params.amplitude(q, p),
        |q, p| g * q * p,
        &grid,
        &h,
        t,
        &CharacteristicsConfig::default(),
    );

    let qp = QuantumParams::new(cfg.get("hbar"), params.m)?;
    let line = LineGrid::new(grid.q_min(), grid.q_max(), grid.n_q())?;
    let dt = cfg.get("dt");
    let snap = |s: f64| evolve_gaussian_free(params.a, params.p_i, s, &qp, &line);
    let (prev, cur, next) = (snap(t - dt)?, snap(t)?, snap(t + dt)?);
    let mad = madelung_residual([&prev, &cur, &next], dt, |_| 0.0, &qp)?;

    let mut out = Outcome::new(Table::new(&[
        "t",
        "modulus_diff",
        "phase_diff",
        "max_phase",
        "r_s",
        "r_a",
        "coupling",
    ]));
    out.table.push(vec![
        t,
        report.modulus_diff,
        report.phase_diff,
        report.max_phase,
        mad.r_s,
        mad.r_a,
        mad.coupling,
    ]);
    out.grid = grid_json(&grid);
    out.tolerances = json!({"decoupling": 1e-8, "madelung": 1e-2});
    Ok(out)
}

fn geometry(cfg: &ExperimentConfig) -> Result<SlitGeometry, CliError> {
    Ok(SlitGeometry::new(
        cfg.get("x_A"),
        cfg.get("delta"),
        cfg.get("y_F"),
        cfg.get("y_S"),
        cfg.get("p_y0"),
        cfg.get("m"),
    )?)
}

fn samples(cfg: &ExperimentConfig) -> Result<Vec<f64>, CliError> {
    let (lo, hi) = (cfg.get("x_min"), cfg.get("x_max"));
    if !(lo < hi) {
        return Err(CliError::Validation(format!("x_min ({lo}) must be < x_max ({hi})")));
    }
    Ok(linspace(lo, hi, cfg.count("n_x", 2)?))
}

fn minima_json(out: &mut Outcome, cfg: &ExperimentConfig, x: &[f64], p: &[f64]) -> Result<(), CliError> {
    let window = (cfg.get("window_lo"), cfg.get("window_hi"));
    let m = analyze_minima(x, p, window)?;
    out.put(
        "minima",
        json!({
            "window": [window.0, window.1],
            "count": m.count,
            "positions": m.positions,
            "mean_spacing": m.mean_spacing,
        }),
    );
    Ok(())
}

fn two_slit_classical(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let params = gaussian(cfg)?;
    let geom = geometry(cfg)?;
    let xs = samples(cfg)?;
    let curve = classical_two_slit(&params, &geom, None, cfg.open, &xs)?;
    let mut out = Outcome::new(Table::new(&["x", "P", "P_raw"]));
    for i in 0..xs.len() {
        out.table.push(vec![curve.x[i], curve.p[i], curve.raw[i]]);
    }
    out.warn(&curve.warnings);
    minima_json(&mut out, cfg, &curve.x, &curve.p)?;
    out.put("normalized", curve.normalized);
    out.put("times", json!(geom.times()));
    out.grid = json!({"x": [xs[0], xs[xs.len() - 1]], "n_x": xs.len()});
    out.tolerances = json!({"slit_integral_rel": crate::twoslit::SLIT_INTEGRAL_TOL});
    Ok(out)
}

fn two_slit_quantum(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let geom = geometry(cfg)?;
    let qp = QuantumParams::new(cfg.get("hbar"), cfg.get("m"))?;
    let xs = samples(cfg)?;
    let res = quantum_two_slit(cfg.get("a"), &geom, &qp, cfg.open, &xs)?;
    let curve = &res.curve;
    let mut out = Outcome::new(Table::new(&["x", "P", "P_raw", "cross"]));
    for i in 0..xs.len() {
        out.table.push(vec![curve.x[i], curve.p[i], curve.raw[i], res.cross[i]]);
    }
    out.warn(&curve.warnings);
    minima_json(&mut out, cfg, &curve.x, &curve.p)?;
    let max_p = curve.p.iter().cloned().fold(0.0, f64::max);
    let max_cross = res.cross.iter().map(|c| c.abs()).fold(0.0, f64::max);
    out.put("max_cross_raw", max_cross);
    out.put("max_p", max_p);
    out.put("times", json!(geom.times()));
    out.grid = json!({"x": [xs[0], xs[xs.len() - 1]], "n_x": xs.len()});
    out.tolerances = json!({
        "panels_per_wavelength": crate::quantum::PANELS_PER_WAVELENGTH,
        "max_oscillation_nodes": crate::quantum::MAX_OSCILLATION_NODES,
    });
    Ok(out)
}

fn kvn_postulate(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let params = gaussian(cfg)?;
    let grid = PhaseSpaceGrid::lattice(cfg.get("dq"), cfg.get("q_half"), cfg.get("dp"), cfg.get("p_half"))?;
    let psi = make_gaussian_qp(&params, &grid)?;
    let mut out = Outcome::new(Table::new(&["t", "defect"]));
    let mut worst = 0.0f64;
    for &t in &cfg.times {
        let d = kvn_postulate_defect(&psi, t, params.m)?;
        worst = worst.max(d);
        out.table.push(vec![t, d]);
    }
    out.put("max_defect", worst);
    out.put("pass", worst < 1e-10);
    out.grid = grid_json(&grid);
    out.tolerances = json!({"defect": 1e-10});
    Ok(out)
}
