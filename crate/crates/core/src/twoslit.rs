//! Two-slit experiments.
//!
//! A beam moves along y with sharp momentum `p_y⁰`, so the y-motion is a
//! clock: it crosses the slit plate at `t_F = y_F m/p_y⁰` and the screen at
//! `t_S = y_S m/p_y⁰`. Along x the classical state is a KvN double Gaussian
//! and the quantum state a Schrödinger Gaussian. Slits are windows on x at
//! `t_F`; both pipelines then evolve freely to `t_S` and report the
//! x-density on the screen.
//!
//! Classically the screen density is `Σ_k ∫_{D_k} F²(x − p τ_S, p) dp`, with
//! `D_k` the momenta whose free path from slit k reaches x. Quantum
//! mechanically it is `|ψ₁ + ψ₂|²` where `ψ_k` is the free-kernel integral
//! over slit k.

use ndarray::Axis;
use rayon::prelude::*;

use crate::classical::evolve_free;
use crate::field::make_gaussian_qp;
use crate::quadrature::adaptive_gauss_legendre;
use crate::quantum::{check_budget, gaussian_closed_form, kernel_integral, oscillation_nodes, QuantumParams};
use crate::{Error, GaussianParams, PhaseSpaceGrid, Result, Warning, WaveFunction2D, C64};

/// Analysis window for counting quantum minima. Fixed once against the
/// fringe pattern for `2x_A ∈ {1, 2}`: it holds 6 and 12 minima.
pub const FRINGE_WINDOW: (f64, f64) = (-19.0, 19.0);

/// Relative tolerance of the classical slit integrals.
pub const SLIT_INTEGRAL_TOL: f64 = 1e-10;

/// Relative amplitude below which a slit counts as unlit.
pub const FLUX_FLOOR: f64 = 1e-6;

/// Prominence, relative to the window maximum, a dip needs to count as a
/// minimum.
pub const MINIMUM_PROMINENCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlitGeometry {
    /// Slit centres sit at `±x_a`.
    pub x_a: f64,
    /// Slit half-width.
    pub delta: f64,
    pub y_f: f64,
    pub y_s: f64,
    pub p_y0: f64,
    pub m: f64,
}

impl SlitGeometry {
    pub fn new(x_a: f64, delta: f64, y_f: f64, y_s: f64, p_y0: f64, m: f64) -> Result<Self> {
        let all = [("x_A", x_a), ("delta", delta), ("y_F", y_f), ("y_S", y_s), ("p_y0", p_y0), ("m", m)];
        for (name, v) in all {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Geometry(format!("{name} must be > 0, got {v}")));
            }
        }
        if delta >= x_a {
            return Err(Error::Geometry(format!(
                "slits overlap: delta ({delta}) must be < x_A ({x_a})"
            )));
        }
        if y_f >= y_s {
            return Err(Error::Geometry(format!("plate must precede screen: y_F ({y_f}) < y_S ({y_s})")));
        }
        Ok(Self { x_a, delta, y_f, y_s, p_y0, m })
    }

    /// `y_F = 1, y_S = 2, p_y⁰ = 1, m = 1` with the given slits.
    pub fn unit(x_a: f64, delta: f64) -> Result<Self> {
        Self::new(x_a, delta, 1.0, 2.0, 1.0, 1.0)
    }

    /// `(t_F, t_S)`.
    pub fn times(&self) -> (f64, f64) {
        longitudinal_clock(self)
    }

    /// `ā = (y_S − y_F)/p_y⁰`: x-displacement per unit x-momentum between
    /// plate and screen.
    pub fn a_bar(&self) -> f64 {
        (self.y_s - self.y_f) / self.p_y0
    }

    /// Half-open x-interval `[lo, hi)` of slit `k` (1 at `+x_A`, 2 at `−x_A`).
    pub fn slit(&self, k: usize) -> (f64, f64) {
        let c = if k == 1 { self.x_a } else { -self.x_a };
        (c - self.delta, c + self.delta)
    }

    /// Indicator of slit `k`.
    pub fn window(&self, k: usize, x: f64) -> f64 {
        let (lo, hi) = self.slit(k);
        if x >= lo && x < hi {
            1.0
        } else {
            0.0
        }
    }
}

/// Plate and screen crossing times of the longitudinal motion.
pub fn longitudinal_clock(geom: &SlitGeometry) -> (f64, f64) {
    (geom.y_f * geom.m / geom.p_y0, geom.y_s * geom.m / geom.p_y0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlitsOpen {
    Both,
    OnlyFirst,
    OnlySecond,
}

impl SlitsOpen {
    fn slits(self) -> &'static [usize] {
        match self {
            SlitsOpen::Both => &[1, 2],
            SlitsOpen::OnlyFirst => &[1],
            SlitsOpen::OnlySecond => &[2],
        }
    }
}

/// Screen density at sample points.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityCurve {
    pub x: Vec<f64>,
    /// Unit-area curve when `normalized`, else equal to `raw`.
    pub p: Vec<f64>,
    /// Values before normalization; additivity holds on these.
    pub raw: Vec<f64>,
    pub normalized: bool,
    pub warnings: Vec<Warning>,
}

impl ProbabilityCurve {
    fn from_raw(x: Vec<f64>, raw: Vec<f64>, warnings: Vec<Warning>) -> Self {
        let area = trapezoid(&x, &raw);
        let (p, normalized) = if area > 0.0 && area.is_finite() {
            (raw.iter().map(|v| v / area).collect(), true)
        } else {
            (raw.clone(), false)
        };
        Self { x, p, raw, normalized, warnings }
    }
}

fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2)
        .zip(y.windows(2))
        .map(|(xs, ys)| 0.5 * (xs[1] - xs[0]) * (ys[0] + ys[1]))
        .sum()
}

/// `sup_p |ψ(x, p, t_F)| / max |ψ|` for the free double Gaussian.
fn classical_flux_ratio(params: &GaussianParams, tau_f: f64, x: f64) -> f64 {
    let (a, b) = (params.a, params.b);
    let d = x - params.p_i * tau_f;
    (-(d * d) / (2.0 * (a * a + b * b * tau_f * tau_f))).exp()
}

fn check_mass(params: &GaussianParams, geom: &SlitGeometry) -> Result<()> {
    if params.m != geom.m {
        return Err(Error::Geometry(format!(
            "particle mass {} differs from the geometry mass {}",
            params.m, geom.m
        )));
    }
    Ok(())
}

/// Classical screen density by direct integration over the momentum
/// intervals `D_k`. `phase`, if given, is attached to the initial state as
/// `e^{iG(x, p)}`; it is carried into the integrand and drops out of `|ψ|²`.
pub fn classical_two_slit(
    params: &GaussianParams,
    geom: &SlitGeometry,
    phase: Option<&(dyn Fn(f64, f64) -> f64 + Sync)>,
    open: SlitsOpen,
    xs: &[f64],
) -> Result<ProbabilityCurve> {
    check_mass(params, geom)?;
    let a_bar = geom.a_bar();
    if !(a_bar > 0.0 && a_bar.is_finite()) {
        return Err(Error::Domain(format!("degenerate slit-to-screen interval a_bar = {a_bar}")));
    }
    let (t_f, t_s) = geom.times();
    let tau_s = t_s / geom.m;

    let mut warnings = Vec::new();
    for &k in open.slits() {
        let centre = if k == 1 { geom.x_a } else { -geom.x_a };
        let ratio = classical_flux_ratio(params, t_f / geom.m, centre);
        if ratio < FLUX_FLOOR {
            warnings.push(Warning::FluxFloor { slit: k, ratio });
        }
    }

    let density = |x: f64, p: f64| -> f64 {
        let x0 = x - p * tau_s;
        let f = params.amplitude(x0, p);
        match phase {
            Some(g) => C64::from_polar(f, g(x0, p)).norm_sqr(),
            None => f * f,
        }
    };

    let raw: Vec<f64> = xs
        .par_iter()
        .map(|&x| {
            open.slits()
                .iter()
                .map(|&k| {
                    let (lo, hi) = geom.slit(k);
                    let (p_lo, p_hi) = ((x - hi) / a_bar, (x - lo) / a_bar);
                    adaptive_gauss_legendre(|p| density(x, p), p_lo, p_hi, SLIT_INTEGRAL_TOL)
                })
                .sum()
        })
        .collect();
    Ok(ProbabilityCurve::from_raw(xs.to_vec(), raw, warnings))
}

/// Phase-space grid for [`classical_two_slit_grid`]: q nodes at half-cell
/// offsets `(k + ½)Δx` so slit edges fall between nodes, and `Δp = Δx/ā`
/// so the plate-to-screen shear maps nodes onto nodes.
pub fn slit_grid(geom: &SlitGeometry, dx: f64, x_half: f64, p_half: f64) -> Result<PhaseSpaceGrid> {
    if !(dx > 0.0 && x_half > dx && p_half > 0.0) {
        return Err(Error::InvalidGrid("slit grid needs dx > 0 and extents larger than dx".into()));
    }
    let nx = (x_half / dx).ceil() as usize;
    let dp = dx / geom.a_bar();
    let np = (p_half / dp).ceil() as usize;
    PhaseSpaceGrid::momentum(
        (-(nx as f64 - 0.5) * dx, (nx as f64 - 0.5) * dx),
        (-(np as f64) * dp, np as f64 * dp),
        2 * nx,
        2 * np + 1,
    )
}

/// The classical experiment run through the grid pipeline: build the
/// Gaussian on `grid`, evolve to `t_F`, apply the slit windows, evolve to
/// `t_S`, and integrate `|ψ|²` over p at each q node.
pub fn classical_two_slit_grid(
    params: &GaussianParams,
    geom: &SlitGeometry,
    open: SlitsOpen,
    grid: &PhaseSpaceGrid,
) -> Result<ProbabilityCurve> {
    check_mass(params, geom)?;
    let (t_f, t_s) = geom.times();
    let psi0 = make_gaussian_qp(params, grid)?;
    let at_plate = evolve_free(&psi0, t_f, geom.m)?;
    let mut windowed = at_plate.state.into_amplitudes();
    for (i, mut row) in windowed.axis_iter_mut(Axis(0)).enumerate() {
        let x = grid.q(i);
        let c: f64 = open.slits().iter().map(|&k| geom.window(k, x)).sum();
        row.mapv_inplace(|z| z * c);
    }
    let windowed = WaveFunction2D::new(*grid, windowed)?;
    let at_screen = evolve_free(&windowed, t_s - t_f, geom.m)?;
    let rho = at_screen.state.density();
    let dp = grid.ds();
    let raw: Vec<f64> = rho
        .axis_iter(Axis(0))
        .map(|row| {
            let n = row.len();
            row.iter()
                .enumerate()
                .map(|(j, r)| if j == 0 || j + 1 == n { 0.5 * r } else { *r })
                .sum::<f64>()
                * dp
        })
        .collect();
    let mut warnings = at_plate.warnings;
    warnings.extend(at_screen.warnings);
    Ok(ProbabilityCurve::from_raw(grid.q_nodes(), raw, warnings))
}

/// Quantum screen amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumTwoSlit {
    pub curve: ProbabilityCurve,
    /// Amplitude through slit 1 (zero when closed).
    pub psi1: Vec<C64>,
    pub psi2: Vec<C64>,
    /// `ψ₁*ψ₂ + c.c.`, computed from the amplitudes of the open slits.
    pub cross: Vec<f64>,
}

/// Quantum screen density from kernel integrals of the free Gaussian (width
/// `a`, zero mean momentum) over each open slit.
pub fn quantum_two_slit(
    a: f64,
    geom: &SlitGeometry,
    qp: &QuantumParams,
    open: SlitsOpen,
    xs: &[f64],
) -> Result<QuantumTwoSlit> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::InvalidParameter(format!("a must be > 0, got {a}")));
    }
    if qp.m() != geom.m {
        return Err(Error::Geometry(format!(
            "particle mass {} differs from the geometry mass {}",
            qp.m(),
            geom.m
        )));
    }
    let (t_f, t_s) = geom.times();
    let dt = t_s - t_f;
    let at_plate = |x: f64| gaussian_closed_form(a, 0.0, t_f, qp, x);

    let mut warnings = Vec::new();
    let peak = at_plate(0.0).norm();
    for &k in open.slits() {
        let centre = if k == 1 { geom.x_a } else { -geom.x_a };
        let ratio = at_plate(centre).norm() / peak;
        if ratio < FLUX_FLOOR {
            warnings.push(Warning::FluxFloor { slit: k, ratio });
        }
    }

    for &x in xs {
        for &k in open.slits() {
            let (lo, hi) = geom.slit(k);
            check_budget(oscillation_nodes(x, dt, qp, lo, hi))?;
        }
    }
    let amps: Vec<(C64, C64)> = xs
        .par_iter()
        .map(|&x| {
            let mut out = [C64::new(0.0, 0.0); 2];
            for &k in open.slits() {
                let (lo, hi) = geom.slit(k);
                out[k - 1] = kernel_integral(x, dt, qp, lo, hi, at_plate);
            }
            (out[0], out[1])
        })
        .collect();
    let psi1: Vec<C64> = amps.iter().map(|a| a.0).collect();
    let psi2: Vec<C64> = amps.iter().map(|a| a.1).collect();
    let raw: Vec<f64> = amps.iter().map(|(u, v)| (u + v).norm_sqr()).collect();
    let cross: Vec<f64> = amps.iter().map(|(u, v)| 2.0 * (u.conj() * v).re).collect();
    Ok(QuantumTwoSlit {
        curve: ProbabilityCurve::from_raw(xs.to_vec(), raw, warnings),
        psi1,
        psi2,
        cross,
    })
}

/// Local minima of a sampled curve inside a window.
#[derive(Debug, Clone, PartialEq)]
pub struct MinimaReport {
    pub count: usize,
    pub positions: Vec<f64>,
    /// Mean gap between consecutive minima; `None` with fewer than two.
    pub mean_spacing: Option<f64>,
}

/// Strict local minima of `values` over samples with `x` in `window`, kept
/// when their prominence (the smaller rise to the higher ground on either
/// side before the curve drops below the minimum again) exceeds
/// [`MINIMUM_PROMINENCE`] times the window maximum.
pub fn analyze_minima(x: &[f64], values: &[f64], window: (f64, f64)) -> Result<MinimaReport> {
    if x.len() != values.len() {
        return Err(Error::Domain("sample and value lengths differ".into()));
    }
    let (lo, hi) = window;
    let (Some(&first), Some(&last)) = (x.first(), x.last()) else {
        return Err(Error::Domain("empty curve".into()));
    };
    if !(lo < hi) || lo < first.min(last) || hi > first.max(last) {
        return Err(Error::Domain(format!(
            "window [{lo}, {hi}] outside the sampled range [{first}, {last}]"
        )));
    }
    let idx: Vec<usize> = (0..x.len()).filter(|&i| x[i] >= lo && x[i] <= hi).collect();
    if idx.len() < 5 {
        return Err(Error::Domain(format!("window holds {} samples, need at least 5", idx.len())));
    }
    let v: Vec<f64> = idx.iter().map(|&i| values[i]).collect();
    let floor = MINIMUM_PROMINENCE * v.iter().cloned().fold(f64::MIN, f64::max);

    let rise = |i: usize, step: isize| -> f64 {
        let mut top = v[i];
        let mut j = i as isize + step;
        while j >= 0 && (j as usize) < v.len() {
            let y = v[j as usize];
            if y < v[i] {
                break;
            }
            top = top.max(y);
            j += step;
        }
        top - v[i]
    };

    let positions: Vec<f64> = (1..v.len() - 1)
        .filter(|&i| v[i] < v[i - 1] && v[i] < v[i + 1])
        .filter(|&i| rise(i, -1).min(rise(i, 1)) > floor)
        .map(|i| x[idx[i]])
        .collect();
    let mean_spacing = (positions.len() >= 2)
        .then(|| (positions[positions.len() - 1] - positions[0]) / (positions.len() - 1) as f64);
    Ok(MinimaReport {
        count: positions.len(),
        positions,
        mean_spacing,
    })
}

/// `n` evenly spaced samples over `[lo, hi]`.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometry_validation() {
        assert!(SlitGeometry::unit(1.0, 0.1).is_ok());
        assert!(matches!(SlitGeometry::unit(0.1, 0.1), Err(Error::Geometry(_))));
        assert!(SlitGeometry::new(1.0, 0.1, 2.0, 2.0, 1.0, 1.0).is_err());
        assert!(SlitGeometry::new(1.0, 0.1, 1.0, 2.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn clock_times() {
        let g = SlitGeometry::unit(1.0, 0.1).unwrap();
        assert_eq!(longitudinal_clock(&g), (1.0, 2.0));
        let fast = SlitGeometry::new(1.0, 0.1, 1.0, 2.0, 2.0, 1.0).unwrap();
        assert_eq!(fast.times(), (0.5, 1.0));
        assert_eq!(g.a_bar(), 1.0);
    }

    #[test]
    fn windows_are_idempotent_and_disjoint() {
        let g = SlitGeometry::unit(1.0, 0.1).unwrap();
        for x in linspace(-2.0, 2.0, 4001) {
            let (c1, c2) = (g.window(1, x), g.window(2, x));
            assert_eq!(c1 * c1, c1);
            assert_eq!(c2 * c2, c2);
            assert_eq!(c1 * c2, 0.0);
            assert_eq!((c1 + c2) * (c1 + c2), c1 + c2);
        }
        assert_eq!(g.window(1, 0.9), 1.0);
        assert_eq!(g.window(1, 1.1), 0.0);
    }

    #[test]
    fn minima_of_monotone_and_cosine() {
        let x = linspace(0.0, 10.0, 101);
        let mono: Vec<f64> = x.iter().map(|v| v * v).collect();
        assert_eq!(analyze_minima(&x, &mono, (0.0, 10.0)).unwrap().count, 0);
        assert!(analyze_minima(&x, &mono, (-1.0, 5.0)).is_err());
        assert!(analyze_minima(&x, &mono, (1.0, 1.2)).is_err());
    }

    #[test]
    fn mass_mismatch_is_rejected() {
        let g = SlitGeometry::unit(1.0, 0.1).unwrap();
        let p = GaussianParams::new(1.0, 1.0, 0.0, 2.0).unwrap();
        assert!(classical_two_slit(&p, &g, None, SlitsOpen::Both, &[0.0]).is_err());
        let qp = QuantumParams::new(1.0, 2.0).unwrap();
        assert!(quantum_two_slit(1.0, &g, &qp, SlitsOpen::Both, &[0.0]).is_err());
    }
}
