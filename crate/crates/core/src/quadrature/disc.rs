//! Weighted Poisson-type integrals over the unit disc,
//! `∫_D ω(w) |w|^{−β} / |1 − z w̄|² dV(w)`.
//!
//! The angular integral is exact, `∫ dθ / |1 − a e^{iθ}|² = 2π / (1 − a²)`,
//! which leaves a one-dimensional integral in `u = |w|²`:
//!
//! `π ∫₀¹ ω(u) u^{−β/2} / ((1 − u) + u c) du`, with `c = 1 − |z|²`.
//!
//! It is split at `u = δ₀²` and `u = 1/2`. The inner shell takes the
//! substitution `u = δ₀² y^m`, `m = 1/(1 − β/2)`, which absorbs `u^{−β/2}`.
//! The middle piece uses unit panels in `ln u`. Near `u = 1` panels halve
//! in `v = 1 − u` down to `v ≈ 10⁻⁸c`, below which the integrand is
//! `ω(1) v^{−ε}/c` to that relative accuracy and is integrated in closed form.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::rules::{pairwise_sum, Rule};
use super::QuadratureSpec;
use crate::error::{Error, Result};

/// Boundary weight in the disc integrand.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiscWeight {
    /// `(1 − |w|²)^{−ε}`
    Gauge,
    /// `(1 − |w|)^{−ε}`
    Distance,
}

const TAIL_FRACTION: f64 = 1e-8;

/// `I_{ε,β}(z) = ∫_D (1 − |w|²)^{−ε} |w|^{−β} / |1 − z w̄|² dV(w)` for
/// `0 < ε < 1`, `0 ≤ β < 2`, `|z| < 1`. The inner shell radius is
/// `spec.boundary_offset`.
pub fn disc_integral_i(eps: f64, beta: f64, z: Complex64, spec: &QuadratureSpec) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::invalid(format!("epsilon must lie in (0, 1), got {eps}")));
    }
    let r = z.norm();
    if !(r < 1.0) {
        return Err(Error::invalid(format!("|z| must be < 1, got {r}")));
    }
    disc_kernel_integral(eps, beta, 1.0 - r, DiscWeight::Gauge, spec)
}

/// Same integral parametrised by the gap `1 − |z| ∈ (0, 1]`, with `ε = 0`
/// allowed and a choice of boundary weight. Passing the gap directly keeps
/// full relative precision for `|z|` close to 1.
pub fn disc_kernel_integral(
    eps: f64,
    beta: f64,
    gap: f64,
    weight: DiscWeight,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::invalid(format!("epsilon must lie in [0, 1), got {eps}")));
    }
    if !(0.0..2.0).contains(&beta) {
        return Err(Error::invalid(format!("beta must lie in [0, 2), got {beta}")));
    }
    if !(gap > 0.0 && gap <= 1.0) {
        return Err(Error::invalid(format!("1 - |z| must lie in (0, 1], got {gap}")));
    }
    spec.validate()?;
    let n = spec.radial_nodes;
    let c = gap * (2.0 - gap);
    let omega = |u: f64| match weight {
        DiscWeight::Gauge => 1.0,
        DiscWeight::Distance => (1.0 + u.sqrt()).powf(eps),
    };
    // integrand without the u^{-β/2} factor, given u and v = 1 - u
    let body = |u: f64, v: f64| omega(u) * v.powf(-eps) / (v + u * c);

    let mut parts = Vec::new();

    // inner shell u ∈ [0, δ₀²]
    let d0sq = spec.boundary_offset * spec.boundary_offset;
    let m = 1.0 / (1.0 - 0.5 * beta);
    let scale = spec.boundary_offset.powf(2.0 - beta) * m;
    for (y, w) in Rule::gauss(0.0, 1.0, n).iter() {
        let u = d0sq * y.powf(m);
        parts.push(w * scale * body(u, 1.0 - u));
    }

    // middle u ∈ [δ₀², 1/2], unit panels in ln u
    let (lo, hi) = (d0sq.ln(), 0.5f64.ln());
    let panels = (hi - lo).ceil().max(1.0) as usize;
    let breaks: Vec<f64> = (0..=panels).map(|i| lo + (hi - lo) * i as f64 / panels as f64).collect();
    for (t, w) in Rule::composite(&breaks, n).iter() {
        let u = t.exp();
        parts.push(w * u.powf(1.0 - 0.5 * beta) * body(u, 1.0 - u));
    }

    // upper v = 1 - u ∈ [V, 1/2], halving panels toward v = 0
    let v_min = (TAIL_FRACTION * c).min(0.25);
    for (v, w) in Rule::geometric_toward_lo(v_min, 0.5, n).iter() {
        let u = 1.0 - v;
        parts.push(w * u.powf(-0.5 * beta) * body(u, v));
    }

    // v ∈ [0, V]
    parts.push(omega(1.0) / c * v_min.powf(1.0 - eps) / (1.0 - eps));

    Ok(PI * pairwise_sum(&parts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default().with_nodes(16, 16)
    }

    /// Two-dimensional quadrature in `(r, θ)` with no angular shortcut.
    /// Endpoint powers are removed by `r = ρ^{1/(2−β)}` near 0 and
    /// `1 − r = σ^{1/(1−ε)}` near 1.
    fn brute_force(eps: f64, beta: f64, z: f64, weight: DiscWeight) -> f64 {
        let (a0, a1) = (2.0 - beta, 1.0 - eps);
        let mut radial: Vec<(f64, f64, f64)> = Vec::new();
        // (r, weight, singular factor already absorbed)
        for (rho, w) in Rule::geometric_toward_lo(0.0, 0.5f64.powf(a0), 12).iter() {
            let r = rho.powf(1.0 / a0);
            radial.push((r, w / a0, (1.0 - r).powf(-eps)));
        }
        for (sig, w) in Rule::geometric_toward_lo(0.0, 0.5f64.powf(a1), 12).iter() {
            let s = sig.powf(1.0 / a1);
            let r = 1.0 - s;
            radial.push((r, w / a1, r.powf(1.0 - beta)));
        }
        radial
            .iter()
            .map(|&(r, wr, rest)| {
                let a = z * r;
                let ang = Rule::graded_periodic(1.0 - a, 12);
                let poisson: f64 = ang.iter().map(|(t, w)| w / ((1.0 - a).powi(2) + 4.0 * a * (0.5 * t).sin().powi(2))).sum();
                let bw = match weight {
                    DiscWeight::Gauge => (1.0 + r).powf(-eps),
                    DiscWeight::Distance => 1.0,
                };
                wr * rest * bw * poisson
            })
            .sum()
    }

    #[test]
    fn closed_forms_at_origin() {
        let z = Complex64::new(0.0, 0.0);
        assert_relative_eq!(disc_integral_i(0.5, 0.0, z, &spec()).unwrap(), 2.0 * PI, max_relative = 1e-9);
        assert_relative_eq!(disc_integral_i(0.5, 1.0, z, &spec()).unwrap(), PI * PI, max_relative = 1e-9);
    }

    #[test]
    fn unweighted_log_law() {
        for r in [0.3f64, 0.9, 1.0 - 1e-6] {
            let exact = -PI * (1.0 - r * r).ln() / (r * r);
            let v = disc_kernel_integral(0.0, 0.0, 1.0 - r, DiscWeight::Gauge, &spec()).unwrap();
            assert_relative_eq!(v, exact, max_relative = 1e-9);
        }
        let v = disc_kernel_integral(0.0, 0.0, 1.0, DiscWeight::Gauge, &spec()).unwrap();
        assert_relative_eq!(v, PI, max_relative = 1e-9);
    }

    #[test]
    fn agrees_with_two_dimensional_quadrature() {
        for &(eps, beta, z, weight) in &[
            (0.3, 0.0, 0.5, DiscWeight::Gauge),
            (0.5, 1.0, 0.9, DiscWeight::Gauge),
            (0.9, 1.9, 0.7, DiscWeight::Gauge),
            (0.5, 0.0, 0.95, DiscWeight::Distance),
        ] {
            let fast = disc_kernel_integral(eps, beta, 1.0 - z, weight, &spec()).unwrap();
            let slow = brute_force(eps, beta, z, weight);
            assert_relative_eq!(fast, slow, max_relative = 1e-6);
        }
    }

    #[test]
    fn rotation_invariant() {
        let a = disc_integral_i(0.4, 0.5, Complex64::new(0.6, 0.0), &spec()).unwrap();
        let b = disc_integral_i(0.4, 0.5, Complex64::from_polar(0.6, 2.0), &spec()).unwrap();
        assert_relative_eq!(a, b, max_relative = 1e-14);
    }

    #[test]
    fn rejects_out_of_range_parameters() {
        let z = Complex64::new(0.1, 0.0);
        assert!(disc_integral_i(0.0, 0.0, z, &spec()).is_err());
        assert!(disc_integral_i(1.0, 0.0, z, &spec()).is_err());
        assert!(disc_integral_i(0.5, 2.0, z, &spec()).is_err());
        assert!(disc_integral_i(0.5, 0.0, Complex64::new(1.0, 0.0), &spec()).is_err());
    }
}
