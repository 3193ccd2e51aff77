//! FFT-backed operations on grid fields: spectral derivatives and the
//! continuum-normalized Fourier map between conjugate lattices.

use std::f64::consts::PI;
use std::sync::Arc;

use ndarray::{Array2, Axis};
use rayon::prelude::*;
use rustfft::{Fft, FftDirection, FftPlanner};

use crate::C64;

fn plan(n: usize, direction: FftDirection) -> Arc<dyn Fft<f64>> {
    FftPlanner::new().plan_fft(n, direction)
}

/// Angular wavenumbers `2πk/(n·step)` in FFT storage order.
pub fn wavenumbers(n: usize, step: f64) -> Vec<f64> {
    let scale = 2.0 * PI / (n as f64 * step);
    (0..n)
        .map(|k| {
            let k = if k < n.div_ceil(2) { k as isize } else { k as isize - n as isize };
            k as f64 * scale
        })
        .collect()
}

/// Applies `op` to every 1-D lane of `field` running along `axis`.
pub(crate) fn map_lanes<F>(field: &mut Array2<C64>, axis: Axis, op: F)
where
    F: Fn(usize, &mut [C64]) + Sync,
{
    let other = Axis(1 - axis.index());
    field
        .axis_iter_mut(other)
        .into_par_iter()
        .enumerate()
        .for_each(|(idx, mut lane)| {
            let mut buf: Vec<C64> = lane.iter().copied().collect();
            op(idx, &mut buf);
            for (dst, src) in lane.iter_mut().zip(buf) {
                *dst = src;
            }
        });
}

/// Multiplies each lane's spectrum by `symbol(κ)` where κ are the lane's
/// angular wavenumbers.
pub fn spectral_multiply<S>(field: &Array2<C64>, axis: Axis, step: f64, symbol: S) -> Array2<C64>
where
    S: Fn(f64, bool) -> C64 + Sync,
{
    let n = field.len_of(axis);
    let fwd = plan(n, FftDirection::Forward);
    let inv = plan(n, FftDirection::Inverse);
    let kappa = wavenumbers(n, step);
    let nyquist = if n % 2 == 0 { Some(n / 2) } else { None };
    let factors: Vec<C64> = kappa
        .iter()
        .enumerate()
        .map(|(k, &kk)| symbol(kk, Some(k) == nyquist) / n as f64)
        .collect();
    let mut out = field.clone();
    map_lanes(&mut out, axis, |_, buf| {
        fwd.process(buf);
        for (z, f) in buf.iter_mut().zip(&factors) {
            *z *= f;
        }
        inv.process(buf);
    });
    out
}

/// First derivative along `axis` by spectral differentiation. The Nyquist
/// mode is dropped so that real input gives real output.
pub fn derivative(field: &Array2<C64>, axis: Axis, step: f64) -> Array2<C64> {
    spectral_multiply(field, axis, step, |k, nyquist| {
        if nyquist {
            C64::new(0.0, 0.0)
        } else {
            C64::new(0.0, k)
        }
    })
}

/// `∂²/∂q∂s` by successive spectral derivatives.
pub fn mixed_derivative(field: &Array2<C64>, dq: f64, ds: f64) -> Array2<C64> {
    derivative(&derivative(field, Axis(0), dq), Axis(1), ds)
}

/// Lattice description for one side of [`offset_dft_rows`].
#[derive(Debug, Clone, Copy)]
pub struct Lattice {
    pub origin: f64,
    pub step: f64,
}

/// Continuum-normalized Fourier sum along each row (axis 1):
///
/// `out_k = scale · Σ_j exp(sign·i·x_j·y_k) · f_j`, with `x_j = x0 + j dx`,
/// `y_k = y0 + k dy` and `dx·dy = 2π/n`. Offsets are folded into pre- and
/// post-twiddles around a single FFT, so any origins are exact.
pub fn offset_dft_rows(field: &Array2<C64>, from: Lattice, to: Lattice, sign: f64, scale: f64) -> Array2<C64> {
    let n = field.len_of(Axis(1));
    debug_assert!((from.step * to.step * n as f64 - 2.0 * PI).abs() < 1e-9 * 2.0 * PI);
    let fft = plan(n, if sign < 0.0 { FftDirection::Forward } else { FftDirection::Inverse });
    let pre: Vec<C64> = (0..n)
        .map(|j| C64::from_polar(1.0, sign * j as f64 * from.step * to.origin))
        .collect();
    let post: Vec<C64> = (0..n)
        .map(|k| C64::from_polar(scale, sign * from.origin * (to.origin + k as f64 * to.step)))
        .collect();
    let mut out = field.clone();
    map_lanes(&mut out, Axis(1), |_, buf| {
        for (z, w) in buf.iter_mut().zip(&pre) {
            *z *= w;
        }
        fft.process(buf);
        for (z, w) in buf.iter_mut().zip(&post) {
            *z *= w;
        }
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wavenumber_layout() {
        let k = wavenumbers(4, 0.5);
        let s = 2.0 * PI / 2.0;
        assert_eq!(k, vec![0.0, s, -2.0 * s, -s]);
    }

    #[test]
    fn derivative_of_periodic_mode_is_exact() {
        let n = 32;
        let l = 2.0 * PI;
        let h = l / n as f64;
        let f = Array2::from_shape_fn((n, 3), |(i, _)| C64::new((3.0 * i as f64 * h).sin(), 0.0));
        let d = derivative(&f, Axis(0), h);
        for i in 0..n {
            let expect = 3.0 * (3.0 * i as f64 * h).cos();
            assert!((d[[i, 1]].re - expect).abs() < 1e-12);
            assert!(d[[i, 1]].im.abs() < 1e-12);
        }
    }

    #[test]
    fn offset_dft_matches_direct_sum() {
        let n = 16;
        let dx = 0.3;
        let dy = 2.0 * PI / (n as f64 * dx);
        let from = Lattice { origin: -2.1, step: dx };
        let to = Lattice { origin: -(n as f64 / 2.0) * dy, step: dy };
        let f = Array2::from_shape_fn((2, n), |(r, j)| C64::new(j as f64 * 0.1 + r as f64, (j as f64).cos()));
        let out = offset_dft_rows(&f, from, to, -1.0, 0.7);
        for r in 0..2 {
            for k in 0..n {
                let y = to.origin + k as f64 * dy;
                let direct: C64 = (0..n)
                    .map(|j| f[[r, j]] * C64::from_polar(0.7, -(from.origin + j as f64 * dx) * y))
                    .sum();
                assert!((out[[r, k]] - direct).norm() < 1e-11);
            }
        }
    }
}
