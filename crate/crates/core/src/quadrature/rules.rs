//! One-dimensional node/weight sets and fixed-order summation.

use std::collections::HashMap;
use std::f64::consts::{PI, TAU};
use std::num::NonZeroUsize;
use std::sync::{Arc, Mutex, OnceLock};

use gauss_quad::GaussLegendre;
use num_complex::Complex64;

type NodeTable = Arc<Vec<(f64, f64)>>;

/// Gauss–Legendre nodes and weights on `[-1, 1]`, cached per order.
fn reference(n: usize) -> NodeTable {
    static CACHE: OnceLock<Mutex<HashMap<usize, NodeTable>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    guard
        .entry(n)
        .or_insert_with(|| {
            let n = NonZeroUsize::new(n).expect("order must be positive");
            Arc::new(GaussLegendre::new(n).as_node_weight_pairs().to_vec())
        })
        .clone()
}

#[derive(Debug, Clone, Default)]
pub(crate) struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    pub fn push_gauss(&mut self, a: f64, b: f64, n: usize) {
        if b <= a {
            return;
        }
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        for &(x, w) in reference(n).iter() {
            self.nodes.push(mid + half * x);
            self.weights.push(half * w);
        }
    }

    pub fn gauss(a: f64, b: f64, n: usize) -> Self {
        let mut r = Self::default();
        r.push_gauss(a, b, n);
        r
    }

    /// Composite Gauss rule over consecutive breakpoints.
    pub fn composite(breaks: &[f64], n: usize) -> Self {
        let mut r = Self::default();
        for w in breaks.windows(2) {
            r.push_gauss(w[0], w[1], n);
        }
        r
    }

    /// Composite rule on `[lo, hi]` with panels shrinking geometrically
    /// (ratio 2) toward `lo`, which is typically `0` or close to it.
    pub fn geometric_toward_lo(lo: f64, hi: f64, n: usize) -> Self {
        let mut breaks = vec![hi];
        let mut x = hi;
        if lo > 0.0 {
            while x * 0.5 > lo {
                x *= 0.5;
                breaks.push(x);
            }
        } else {
            // no finite panel set reaches 0; stop 60 halvings down
            for _ in 0..60 {
                x *= 0.5;
                breaks.push(x);
            }
        }
        breaks.push(lo);
        breaks.reverse();
        Self::composite(&breaks, n)
    }

    /// Periodic trapezoid rule on `[0, 2π)`.
    pub fn trapezoid(n: usize) -> Self {
        let h = TAU / n as f64;
        Self {
            nodes: (0..n).map(|i| i as f64 * h).collect(),
            weights: vec![h; n],
        }
    }

    /// Rule on `(-π, π]` for a periodic integrand with a peak of the given
    /// width at `0`: panels halve from `π` down to about `width / 4`.
    pub fn graded_periodic(width: f64, n: usize) -> Self {
        let target = (width / 4.0).max(1e-300);
        let mut edges = vec![PI];
        let mut x = PI;
        while x * 0.5 > target {
            x *= 0.5;
            edges.push(x);
        }
        let mut breaks: Vec<f64> = edges.iter().map(|e| -e).collect();
        breaks.extend(edges.iter().rev());
        Self::composite(&breaks, n)
    }
}

/// Pairwise summation in a fixed order.
pub(crate) fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 16 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

pub(crate) fn pairwise_sum_complex(xs: &[Complex64]) -> Complex64 {
    if xs.len() <= 16 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum_complex(&xs[..mid]) + pairwise_sum_complex(&xs[mid..])
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gauss_is_exact_for_polynomials() {
        let r = Rule::gauss(0.0, 2.0, 5);
        let v: f64 = r.iter().map(|(x, w)| w * x.powi(9)).sum();
        assert_relative_eq!(v, 2f64.powi(10) / 10.0, max_relative = 1e-13);
    }

    #[test]
    fn geometric_rule_handles_algebraic_endpoint() {
        let r = Rule::geometric_toward_lo(0.0, 1.0, 8);
        let v: f64 = r.iter().map(|(x, w)| w * x.powf(-0.7)).sum();
        assert_relative_eq!(v, 1.0 / 0.3, max_relative = 1e-6);
    }

    #[test]
    fn graded_periodic_resolves_a_poisson_peak() {
        let a: f64 = 1.0 - 1e-6;
        let r = Rule::graded_periodic(1.0 - a, 10);
        let v: f64 = r.iter().map(|(t, w)| w / ((1.0 - a).powi(2) + 4.0 * a * (0.5 * t).sin().powi(2))).sum();
        assert_relative_eq!(v, TAU / (1.0 - a * a), max_relative = 1e-9);
    }

    #[test]
    fn trapezoid_integrates_trig_polynomials() {
        let r = Rule::trapezoid(8);
        let v: f64 = r.iter().map(|(t, w)| w * (3.0 * t).cos().powi(2)).sum();
        assert_relative_eq!(v, PI, max_relative = 1e-14);
    }

    #[test]
    fn pairwise_matches_naive() {
        let xs: Vec<f64> = (0..1000).map(|i| 1.0 / (i as f64 + 1.0)).collect();
        assert_relative_eq!(pairwise_sum(&xs), xs.iter().sum::<f64>(), max_relative = 1e-13);
    }
}
