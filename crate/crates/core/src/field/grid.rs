use std::f64::consts::PI;

use crate::{Error, Result};

/// What the second phase-space axis measures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AxisKind {
    /// Momentum `p`: the `(q, p)` Schrödinger representation.
    Momentum,
    /// The conjugate variable `λ_p`. `p_min` is the first node of the momentum
    /// lattice this axis is dual to, needed to transform back.
    LambdaP { p_min: f64 },
}

/// Uniform tensor lattice over `(q, s)` where `s` is `p` or `λ_p`.
///
/// Nodes include both endpoints: `q_j = q_min + j Δq`, `Δq = (q_max − q_min)/(n_q − 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSpaceGrid {
    q_min: f64,
    q_max: f64,
    s_min: f64,
    s_max: f64,
    n_q: usize,
    n_s: usize,
    axis: AxisKind,
}

fn check_axis(name: &str, lo: f64, hi: f64, n: usize) -> Result<()> {
    if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
        return Err(Error::InvalidGrid(format!(
            "{name} axis needs finite min < max, got [{lo}, {hi}]"
        )));
    }
    if n < 2 {
        return Err(Error::InvalidGrid(format!(
            "{name} axis needs at least 2 nodes, got {n}"
        )));
    }
    Ok(())
}

impl PhaseSpaceGrid {
    /// A `(q, p)` grid.
    pub fn momentum(q: (f64, f64), p: (f64, f64), n_q: usize, n_s: usize) -> Result<Self> {
        Self::new(q, p, n_q, n_s, AxisKind::Momentum)
    }

    pub fn new(q: (f64, f64), s: (f64, f64), n_q: usize, n_s: usize, axis: AxisKind) -> Result<Self> {
        check_axis("q", q.0, q.1, n_q)?;
        check_axis("second", s.0, s.1, n_s)?;
        Ok(Self {
            q_min: q.0,
            q_max: q.1,
            s_min: s.0,
            s_max: s.1,
            n_q,
            n_s,
            axis,
        })
    }

    /// q, x ∈ [−12, 12], p ∈ [−8, 8], 512 × 512 nodes.
    pub fn standard() -> Self {
        Self::momentum((-12.0, 12.0), (-8.0, 8.0), 512, 512).expect("valid constant grid")
    }

    /// Grid with given spacings whose nodes sit on the integer lattices
    /// `q = i·dq`, `p = j·dp`, covering at least `q_half` and `p_half` on
    /// either side of zero. Free shears `q → q − p t/m` map nodes onto nodes
    /// whenever `t·dp/(m·dq)` is an integer.
    pub fn lattice(dq: f64, q_half: f64, dp: f64, p_half: f64) -> Result<Self> {
        if !(dq > 0.0 && dp > 0.0 && q_half > 0.0 && p_half > 0.0) {
            return Err(Error::InvalidGrid("lattice spacings and extents must be positive".into()));
        }
        let nq = (q_half / dq).ceil() as usize;
        let np = (p_half / dp).ceil() as usize;
        Self::momentum(
            (-(nq as f64) * dq, nq as f64 * dq),
            (-(np as f64) * dp, np as f64 * dp),
            2 * nq + 1,
            2 * np + 1,
        )
    }

    pub fn q_min(&self) -> f64 {
        self.q_min
    }
    pub fn q_max(&self) -> f64 {
        self.q_max
    }
    pub fn s_min(&self) -> f64 {
        self.s_min
    }
    pub fn s_max(&self) -> f64 {
        self.s_max
    }
    pub fn n_q(&self) -> usize {
        self.n_q
    }
    pub fn n_s(&self) -> usize {
        self.n_s
    }
    pub fn axis(&self) -> AxisKind {
        self.axis
    }
    pub fn shape(&self) -> (usize, usize) {
        (self.n_q, self.n_s)
    }

    pub fn dq(&self) -> f64 {
        (self.q_max - self.q_min) / (self.n_q - 1) as f64
    }
    pub fn ds(&self) -> f64 {
        (self.s_max - self.s_min) / (self.n_s - 1) as f64
    }
    pub fn q(&self, i: usize) -> f64 {
        self.q_min + i as f64 * self.dq()
    }
    pub fn s(&self, j: usize) -> f64 {
        self.s_min + j as f64 * self.ds()
    }
    pub fn q_nodes(&self) -> Vec<f64> {
        (0..self.n_q).map(|i| self.q(i)).collect()
    }
    pub fn s_nodes(&self) -> Vec<f64> {
        (0..self.n_s).map(|j| self.s(j)).collect()
    }
    pub fn cell_measure(&self) -> f64 {
        self.dq() * self.ds()
    }

    /// Trapezoid weight of node `(i, j)`, including the cell measure.
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        trapezoid_factor(i, self.n_q) * trapezoid_factor(j, self.n_s) * self.cell_measure()
    }

    /// The `λ_p` lattice conjugate to this momentum lattice:
    /// `λ_k = −(n_s/2)Δλ + kΔλ` with `Δλ = 2π/(n_s Δp)`.
    pub fn lambda_dual(&self) -> Result<Self> {
        match self.axis {
            AxisKind::Momentum => {
                let dl = 2.0 * PI / (self.n_s as f64 * self.ds());
                let l_min = -((self.n_s / 2) as f64) * dl;
                Self::new(
                    (self.q_min, self.q_max),
                    (l_min, l_min + (self.n_s - 1) as f64 * dl),
                    self.n_q,
                    self.n_s,
                    AxisKind::LambdaP { p_min: self.s_min },
                )
            }
            AxisKind::LambdaP { .. } => Err(Error::Representation {
                expected: "(q,p)",
                found: "(q,lambda_p)",
            }),
        }
    }

    /// The momentum lattice this `λ_p` lattice is dual to.
    pub fn momentum_dual(&self) -> Result<Self> {
        match self.axis {
            AxisKind::LambdaP { p_min } => {
                let dp = 2.0 * PI / (self.n_s as f64 * self.ds());
                Self::new(
                    (self.q_min, self.q_max),
                    (p_min, p_min + (self.n_s - 1) as f64 * dp),
                    self.n_q,
                    self.n_s,
                    AxisKind::Momentum,
                )
            }
            AxisKind::Momentum => Err(Error::Representation {
                expected: "(q,lambda_p)",
                found: "(q,p)",
            }),
        }
    }
}

pub(crate) fn trapezoid_factor(i: usize, n: usize) -> f64 {
    if i == 0 || i + 1 == n {
        0.5
    } else {
        1.0
    }
}

/// Uniform 1-D lattice for the quantum position axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineGrid {
    x_min: f64,
    x_max: f64,
    n: usize,
}

impl LineGrid {
    pub fn new(x_min: f64, x_max: f64, n: usize) -> Result<Self> {
        check_axis("x", x_min, x_max, n)?;
        Ok(Self { x_min, x_max, n })
    }

    pub fn standard() -> Self {
        Self::new(-12.0, 12.0, 512).expect("valid constant grid")
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }
    pub fn x_max(&self) -> f64 {
        self.x_max
    }
    pub fn len(&self) -> usize {
        self.n
    }
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }
    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n - 1) as f64
    }
    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx()
    }
    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.x(i)).collect()
    }
    pub fn weight(&self, i: usize) -> f64 {
        trapezoid_factor(i, self.n) * self.dx()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_degenerate_axes() {
        assert!(PhaseSpaceGrid::momentum((1.0, 1.0), (-1.0, 1.0), 8, 8).is_err());
        assert!(PhaseSpaceGrid::momentum((-1.0, 1.0), (-1.0, 1.0), 1, 8).is_err());
        assert!(LineGrid::new(0.0, -1.0, 10).is_err());
    }

    #[test]
    fn nodes_are_uniform_and_hit_both_ends() {
        let g = PhaseSpaceGrid::standard();
        assert_eq!(g.q(0), -12.0);
        assert!((g.q(511) - 12.0).abs() < 1e-12);
        assert!((g.s(511) - 8.0).abs() < 1e-12);
        assert!((g.dq() - 24.0 / 511.0).abs() < 1e-15);
    }

    #[test]
    fn dual_lattices_round_trip() {
        let g = PhaseSpaceGrid::momentum((-4.0, 4.0), (-3.0, 5.0), 16, 64).unwrap();
        let l = g.lambda_dual().unwrap();
        assert!((g.ds() * l.ds() * 64.0 - 2.0 * PI).abs() < 1e-12);
        let back = l.momentum_dual().unwrap();
        assert!((back.s_min() - g.s_min()).abs() < 1e-12);
        assert!((back.s_max() - g.s_max()).abs() < 1e-12);
        assert!(l.lambda_dual().is_err());
    }

    #[test]
    fn lattice_grid_contains_origin() {
        let g = PhaseSpaceGrid::lattice(0.025, 1.0, 0.05, 1.0).unwrap();
        assert_eq!(g.n_q(), 81);
        assert!(g.q(40).abs() < 1e-15);
        assert!(g.s(20).abs() < 1e-15);
    }
}
