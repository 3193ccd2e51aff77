//! Local polynomial interpolation on uniform lattices.
//!
//! Values outside the lattice are zero, both for query points beyond the
//! domain and for stencil nodes that fall off the edge. Query points within
//! `SNAP` cells of a node return that node's value exactly, so shears that
//! map nodes onto nodes are reproduced bit for bit.

use ndarray::ArrayView2;

use crate::{PhaseSpaceGrid, C64};

const SNAP: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Interpolation {
    /// Tensor-product 4-point Lagrange (fourth-order accurate).
    #[default]
    Bicubic,
    Bilinear,
}

/// Position of `x` on the lattice `origin + k·step` (k in `0..n`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Locus {
    Outside,
    Node(usize),
    Between(usize, f64),
}

pub(crate) fn locate(x: f64, origin: f64, step: f64, n: usize) -> Locus {
    let u = (x - origin) / step;
    let last = (n - 1) as f64;
    if !(u > -SNAP && u < last + SNAP) {
        return Locus::Outside;
    }
    let r = u.round();
    if (u - r).abs() < SNAP {
        return Locus::Node(r.clamp(0.0, last) as usize);
    }
    let i = u.floor();
    Locus::Between(i as usize, u - i)
}

/// Lagrange weights for nodes at offsets −1, 0, 1, 2 evaluated at `f ∈ (0,1)`.
fn cubic_weights(f: f64) -> [f64; 4] {
    [
        -f * (f - 1.0) * (f - 2.0) / 6.0,
        (f + 1.0) * (f - 1.0) * (f - 2.0) / 2.0,
        -(f + 1.0) * f * (f - 2.0) / 2.0,
        (f + 1.0) * f * (f - 1.0) / 6.0,
    ]
}

/// Stencil of (index, weight) pairs for a located point.
fn stencil(locus: Locus, n: usize, method: Interpolation) -> Vec<(usize, f64)> {
    match locus {
        Locus::Outside => Vec::new(),
        Locus::Node(i) => vec![(i, 1.0)],
        Locus::Between(i, f) => match method {
            Interpolation::Bilinear => {
                let mut v = vec![(i, 1.0 - f)];
                if i + 1 < n {
                    v.push((i + 1, f));
                }
                v
            }
            Interpolation::Bicubic => cubic_weights(f)
                .iter()
                .enumerate()
                .filter_map(|(k, &w)| {
                    let idx = i as isize + k as isize - 1;
                    (idx >= 0 && (idx as usize) < n).then_some((idx as usize, w))
                })
                .collect(),
        },
    }
}

/// Interpolates column `j` of `field` (which varies along q) at position `q`.
pub(crate) fn sample_along_q(
    field: ArrayView2<C64>,
    grid: &PhaseSpaceGrid,
    j: usize,
    q: f64,
    method: Interpolation,
) -> C64 {
    let locus = locate(q, grid.q_min(), grid.dq(), grid.n_q());
    stencil(locus, grid.n_q(), method)
        .into_iter()
        .map(|(i, w)| field[[i, j]] * w)
        .sum()
}

/// Tensor-product interpolation of `field` at `(q, s)`.
pub fn sample(field: ArrayView2<C64>, grid: &PhaseSpaceGrid, q: f64, s: f64, method: Interpolation) -> C64 {
    let sq = stencil(locate(q, grid.q_min(), grid.dq(), grid.n_q()), grid.n_q(), method);
    if sq.is_empty() {
        return C64::new(0.0, 0.0);
    }
    let ss = stencil(locate(s, grid.s_min(), grid.ds(), grid.n_s()), grid.n_s(), method);
    let mut acc = C64::new(0.0, 0.0);
    for &(i, wi) in &sq {
        for &(j, wj) in &ss {
            acc += field[[i, j]] * (wi * wj);
        }
    }
    acc
}

/// Real-valued 4-point Lagrange interpolation on a 1-D lattice.
pub(crate) fn sample_line(values: &[C64], origin: f64, step: f64, x: f64) -> C64 {
    let n = values.len();
    stencil(locate(x, origin, step, n), n, Interpolation::Bicubic)
        .into_iter()
        .map(|(i, w)| values[i] * w)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array2;

    #[test]
    fn cubic_reproduces_cubics() {
        let g = PhaseSpaceGrid::momentum((0.0, 10.0), (0.0, 10.0), 11, 11).unwrap();
        let f = |q: f64, s: f64| C64::new(q * q * q - 2.0 * q + s * s * s, s * q);
        let field = Array2::from_shape_fn((11, 11), |(i, j)| f(g.q(i), g.s(j)));
        for &(q, s) in &[(3.3, 4.7), (5.5, 2.25), (7.01, 6.99)] {
            let v = sample(field.view(), &g, q, s, Interpolation::Bicubic);
            assert!((v - f(q, s)).norm() < 1e-10, "{q} {s}");
        }
    }

    #[test]
    fn nodes_snap_exactly_and_outside_is_zero() {
        let g = PhaseSpaceGrid::momentum((0.0, 1.0), (0.0, 1.0), 11, 11).unwrap();
        let field = Array2::from_shape_fn((11, 11), |(i, j)| C64::new((i * 11 + j) as f64, 0.3));
        let v = sample(field.view(), &g, 0.3 + 1e-13, 0.7, Interpolation::Bicubic);
        assert_eq!(v, field[[3, 7]]);
        assert_eq!(sample(field.view(), &g, 1.2, 0.5, Interpolation::Bicubic), C64::new(0.0, 0.0));
        assert_eq!(sample(field.view(), &g, 0.5, -0.2, Interpolation::Bilinear), C64::new(0.0, 0.0));
    }

    #[test]
    fn bilinear_is_exact_for_bilinear_functions() {
        let g = PhaseSpaceGrid::momentum((-1.0, 1.0), (-1.0, 1.0), 9, 9).unwrap();
        let f = |q: f64, s: f64| C64::new(1.0 + q - 2.0 * s + 0.5 * q * s, 0.0);
        let field = Array2::from_shape_fn((9, 9), |(i, j)| f(g.q(i), g.s(j)));
        let v = sample(field.view(), &g, 0.13, -0.61, Interpolation::Bilinear);
        assert!((v - f(0.13, -0.61)).norm() < 1e-13);
    }
}
