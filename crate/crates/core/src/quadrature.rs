//! Gauss–Legendre quadrature drivers: an adaptive bisection scheme for
//! smooth real integrands and fixed-panel rules for oscillatory complex ones.

use std::num::NonZeroUsize;
use std::sync::OnceLock;

use gauss_quad::legendre::GaussLegendre;

use crate::C64;

/// Nodes and weights on [−1, 1].
#[derive(Debug, Clone)]
pub struct Rule {
    pairs: Vec<(f64, f64)>,
}

impl Rule {
    pub fn new(order: usize) -> Self {
        let order = NonZeroUsize::new(order).expect("rule order must be positive");
        let pairs = GaussLegendre::new(order).as_node_weight_pairs().to_vec();
        Self { pairs }
    }

    pub fn order(&self) -> usize {
        self.pairs.len()
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let h = 0.5 * (b - a);
        let c = 0.5 * (b + a);
        h * self.pairs.iter().map(|&(x, w)| w * f(c + h * x)).sum::<f64>()
    }

    pub fn integrate_complex<F: FnMut(f64) -> C64>(&self, a: f64, b: f64, mut f: F) -> C64 {
        let h = 0.5 * (b - a);
        let c = 0.5 * (b + a);
        self.pairs.iter().map(|&(x, w)| f(c + h * x) * w).sum::<C64>() * h
    }

    /// Sum over `panels` equal sub-intervals of `[a, b]`.
    pub fn integrate_panels<F: FnMut(f64) -> C64>(&self, a: f64, b: f64, panels: usize, mut f: F) -> C64 {
        let w = (b - a) / panels as f64;
        (0..panels)
            .map(|k| {
                let lo = a + k as f64 * w;
                self.integrate_complex(lo, lo + w, &mut f)
            })
            .sum()
    }
}

pub(crate) fn gl8() -> &'static Rule {
    static RULE: OnceLock<Rule> = OnceLock::new();
    RULE.get_or_init(|| Rule::new(8))
}

fn gl15() -> &'static Rule {
    static RULE: OnceLock<Rule> = OnceLock::new();
    RULE.get_or_init(|| Rule::new(15))
}

const MAX_DEPTH: usize = 48;

/// Adaptive 15-point Gauss–Legendre: an interval is accepted when the rule
/// on the whole and on its two halves agree to `rel_tol` relative.
pub fn adaptive_gauss_legendre<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let rule = gl15();
    let whole = rule.integrate(a, b, &f);
    refine(&f, rule, a, b, whole, rel_tol, 0)
}

fn refine<F: Fn(f64) -> f64>(f: &F, rule: &Rule, a: f64, b: f64, whole: f64, tol: f64, depth: usize) -> f64 {
    let mid = 0.5 * (a + b);
    let left = rule.integrate(a, mid, f);
    let right = rule.integrate(mid, b, f);
    let halves = left + right;
    if (halves - whole).abs() <= tol * halves.abs() || depth >= MAX_DEPTH {
        return halves;
    }
    refine(f, rule, a, mid, left, tol, depth + 1) + refine(f, rule, mid, b, right, tol, depth + 1)
}
