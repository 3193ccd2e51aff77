use ndarray::{Array1, Array2, Axis, Zip};
use rayon::prelude::*;

use super::grid::{LineGrid, PhaseSpaceGrid};
use crate::{AxisKind, Error, Result, C64};

/// Complex amplitude field on a phase-space grid. The grid's [`AxisKind`]
/// tags which representation the amplitudes live in.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFunction2D {
    grid: PhaseSpaceGrid,
    amplitudes: Array2<C64>,
}

impl WaveFunction2D {
    pub fn new(grid: PhaseSpaceGrid, amplitudes: Array2<C64>) -> Result<Self> {
        if amplitudes.dim() != grid.shape() {
            return Err(Error::InvalidGrid(format!(
                "amplitude shape {:?} does not match grid {:?}",
                amplitudes.dim(),
                grid.shape()
            )));
        }
        Ok(Self { grid, amplitudes })
    }

    /// Samples `f(q, s)` at every node. Rows are evaluated in parallel.
    pub fn from_fn<F>(grid: PhaseSpaceGrid, f: F) -> Self
    where
        F: Fn(f64, f64) -> C64 + Sync,
    {
        let s = grid.s_nodes();
        let rows: Vec<Vec<C64>> = (0..grid.n_q())
            .into_par_iter()
            .map(|i| {
                let q = grid.q(i);
                s.iter().map(|&sj| f(q, sj)).collect()
            })
            .collect();
        let flat: Vec<C64> = rows.into_iter().flatten().collect();
        let amplitudes = Array2::from_shape_vec(grid.shape(), flat).expect("shape from grid");
        Self { grid, amplitudes }
    }

    pub fn grid(&self) -> &PhaseSpaceGrid {
        &self.grid
    }
    pub fn amplitudes(&self) -> &Array2<C64> {
        &self.amplitudes
    }
    pub fn amplitudes_mut(&mut self) -> &mut Array2<C64> {
        &mut self.amplitudes
    }
    pub fn into_amplitudes(self) -> Array2<C64> {
        self.amplitudes
    }

    pub fn is_momentum(&self) -> bool {
        self.grid.axis() == AxisKind::Momentum
    }

    /// `∫|ψ|² dq ds` by the trapezoid rule.
    pub fn norm_squared(&self) -> f64 {
        weighted_sum(&self.grid, |i, j| self.amplitudes[[i, j]].norm_sqr())
    }

    pub fn scaled(&self, factor: C64) -> Self {
        Self {
            grid: self.grid,
            amplitudes: self.amplitudes.mapv(|z| z * factor),
        }
    }

    /// Rescales to unit norm. A zero field is returned unchanged.
    pub fn normalized(mut self) -> Self {
        let n = self.norm_squared();
        if n > 0.0 {
            let k = 1.0 / n.sqrt();
            self.amplitudes.mapv_inplace(|z| z * k);
        }
        self
    }

    /// Pointwise product with `e^{i G(q, s)}`.
    pub fn with_phase<G>(&self, phase: G) -> Self
    where
        G: Fn(f64, f64) -> f64 + Sync,
    {
        let mut out = self.clone();
        let grid = self.grid;
        out.amplitudes
            .axis_iter_mut(Axis(0))
            .into_par_iter()
            .enumerate()
            .for_each(|(i, mut row)| {
                let q = grid.q(i);
                for (j, z) in row.iter_mut().enumerate() {
                    *z *= C64::from_polar(1.0, phase(q, grid.s(j)));
                }
            });
        out
    }

    /// `|ψ|²` as a real field.
    pub fn density(&self) -> Array2<f64> {
        self.amplitudes.mapv(|z| z.norm_sqr())
    }

    /// `∫ f |ψ|² / ∫ |ψ|²` for a multiplicative observable `f(q, s)`.
    pub fn moment<F>(&self, f: F) -> Result<f64>
    where
        F: Fn(f64, f64) -> f64 + Sync,
    {
        let grid = self.grid;
        // Per-row partial sums are collected in order so the result does not
        // depend on the thread count.
        let rows: Vec<Result<(f64, f64)>> = (0..grid.n_q())
            .into_par_iter()
            .map(|i| {
                let q = grid.q(i);
                let mut num = 0.0;
                let mut den = 0.0;
                for j in 0..grid.n_s() {
                    let s = grid.s(j);
                    let v = f(q, s);
                    if !v.is_finite() {
                        return Err(Error::NonFinite { q, s });
                    }
                    let w = grid.weight(i, j) * self.amplitudes[[i, j]].norm_sqr();
                    num += w * v;
                    den += w;
                }
                Ok((num, den))
            })
            .collect();
        let mut num = 0.0;
        let mut den = 0.0;
        for r in rows {
            let (n, d) = r?;
            num += n;
            den += d;
        }
        if den <= 0.0 {
            return Err(Error::Domain("moment of a zero field".into()));
        }
        Ok(num / den)
    }

    pub fn mean_q(&self) -> Result<f64> {
        self.moment(|q, _| q)
    }
    pub fn mean_s(&self) -> Result<f64> {
        self.moment(|_, s| s)
    }
    pub fn variance_q(&self) -> Result<f64> {
        let m = self.mean_q()?;
        self.moment(|q, _| (q - m) * (q - m))
    }
    pub fn variance_s(&self) -> Result<f64> {
        let m = self.mean_s()?;
        self.moment(|_, s| (s - m) * (s - m))
    }

    /// Supremum of `|ψ − other|` over nodes. Grids must match.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        debug_assert_eq!(self.grid, other.grid);
        Zip::from(&self.amplitudes)
            .and(&other.amplitudes)
            .fold(0.0f64, |m, a, b| m.max((a - b).norm()))
    }
}

pub(crate) fn weighted_sum<F>(grid: &PhaseSpaceGrid, f: F) -> f64
where
    F: Fn(usize, usize) -> f64 + Sync,
{
    let rows: Vec<f64> = (0..grid.n_q())
        .into_par_iter()
        .map(|i| (0..grid.n_s()).map(|j| grid.weight(i, j) * f(i, j)).sum())
        .collect();
    rows.iter().sum()
}

/// Complex amplitude on a 1-D position lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFunction1D {
    grid: LineGrid,
    amplitudes: Array1<C64>,
}

impl WaveFunction1D {
    pub fn new(grid: LineGrid, amplitudes: Array1<C64>) -> Result<Self> {
        if amplitudes.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "{} amplitudes for a {}-node grid",
                amplitudes.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, amplitudes })
    }

    pub fn from_fn<F: Fn(f64) -> C64>(grid: LineGrid, f: F) -> Self {
        let amplitudes = (0..grid.len()).map(|i| f(grid.x(i))).collect();
        Self { grid, amplitudes }
    }

    pub fn grid(&self) -> &LineGrid {
        &self.grid
    }
    pub fn amplitudes(&self) -> &Array1<C64> {
        &self.amplitudes
    }
    pub fn x_min(&self) -> f64 {
        self.grid.x_min()
    }
    pub fn x_max(&self) -> f64 {
        self.grid.x_max()
    }
    pub fn n_x(&self) -> usize {
        self.grid.len()
    }

    pub fn norm_squared(&self) -> f64 {
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(i, z)| self.grid.weight(i) * z.norm_sqr())
            .sum()
    }

    pub fn scaled(&self, factor: C64) -> Self {
        Self {
            grid: self.grid,
            amplitudes: self.amplitudes.mapv(|z| z * factor),
        }
    }

    pub fn normalized(mut self) -> Self {
        let n = self.norm_squared();
        if n > 0.0 {
            let k = 1.0 / n.sqrt();
            self.amplitudes.mapv_inplace(|z| z * k);
        }
        self
    }

    pub fn moment<F: Fn(f64) -> f64>(&self, f: F) -> Result<f64> {
        let mut num = 0.0;
        let mut den = 0.0;
        for (i, z) in self.amplitudes.iter().enumerate() {
            let x = self.grid.x(i);
            let v = f(x);
            if !v.is_finite() {
                return Err(Error::NonFinite { q: x, s: 0.0 });
            }
            let w = self.grid.weight(i) * z.norm_sqr();
            num += w * v;
            den += w;
        }
        if den <= 0.0 {
            return Err(Error::Domain("moment of a zero field".into()));
        }
        Ok(num / den)
    }

    pub fn mean_x(&self) -> Result<f64> {
        self.moment(|x| x)
    }

    pub fn variance_x(&self) -> Result<f64> {
        let m = self.mean_x()?;
        self.moment(|x| (x - m) * (x - m))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .fold(0.0f64, |m, (a, b)| m.max((a - b).norm()))
    }
}

/// Anything with a trapezoid norm.
pub trait Normed {
    fn norm_squared(&self) -> f64;
}

impl Normed for WaveFunction2D {
    fn norm_squared(&self) -> f64 {
        WaveFunction2D::norm_squared(self)
    }
}

impl Normed for WaveFunction1D {
    fn norm_squared(&self) -> f64 {
        WaveFunction1D::norm_squared(self)
    }
}

/// `∫|ψ|²` over the grid domain.
pub fn norm_squared<W: Normed>(psi: &W) -> f64 {
    psi.norm_squared()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{make_gaussian_qp, GaussianParams};

    #[test]
    fn scaling_by_two_quadruples_the_norm() {
        let g = PhaseSpaceGrid::momentum((-6.0, 6.0), (-6.0, 6.0), 96, 96).unwrap();
        let psi = make_gaussian_qp(&GaussianParams::new(1.0, 1.0, 0.0, 1.0).unwrap(), &g).unwrap();
        let n = psi.norm_squared();
        assert!((psi.scaled(C64::new(2.0, 0.0)).norm_squared() - 4.0 * n).abs() < 1e-12);
    }

    #[test]
    fn moment_of_one_is_one() {
        let g = PhaseSpaceGrid::momentum((-6.0, 6.0), (-6.0, 6.0), 64, 64).unwrap();
        let psi = WaveFunction2D::from_fn(g, |q, p| C64::new((-(q * q + p * p)).exp(), 0.0));
        assert!((psi.moment(|_, _| 1.0).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn non_finite_observable_is_an_error() {
        let g = PhaseSpaceGrid::momentum((-1.0, 1.0), (-1.0, 1.0), 5, 5).unwrap();
        let psi = WaveFunction2D::from_fn(g, |_, _| C64::new(1.0, 0.0));
        let err = psi.moment(|q, _| 1.0 / q).unwrap_err();
        assert!(matches!(err, Error::NonFinite { .. }));
    }

    #[test]
    fn shape_mismatch_rejected() {
        let g = PhaseSpaceGrid::momentum((-1.0, 1.0), (-1.0, 1.0), 5, 5).unwrap();
        assert!(WaveFunction2D::new(g, Array2::zeros((5, 4))).is_err());
        let l = LineGrid::new(-1.0, 1.0, 5).unwrap();
        assert!(WaveFunction1D::new(l, Array1::zeros(3)).is_err());
    }
}
