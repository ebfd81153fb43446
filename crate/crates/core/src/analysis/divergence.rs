//! Divergence scan for `‖z₂^{−1}‖_p`, the function that certifies
//! unboundedness of the projection above the critical exponent.
//!
//! `N(p, δ) = ∫_{Ω_k ∩ {|z₂| > δ}} |z₂|^{−p} dV` is integrated on the
//! δ-grid. Growth exponents are fitted to the increments of `N` between
//! successive grid values, which on a geometric grid are exact powers of
//! `δ` with no additive constant. The empirical critical `p` comes from
//! bisection on the sign of the decay exponent of dyadic shell integrals.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::fit::{linear_fit, loglog_slope, saturates, tail_growth};
use super::report::{Sample, Verdict, VerificationReport};
use crate::error::{Error, Result};
use crate::geometry::{DomainSpec, Point2};
use crate::quadrature::{integrate_box, radial_moment, CoreBox, Estimate, QuadratureSpec, RadialGrading};

/// Relative tolerance on the located critical exponent.
pub const CRITICAL_TOLERANCE: f64 = 0.02;
/// Relative tolerance on fitted growth exponents.
pub const EXPONENT_TOLERANCE: f64 = 0.05;
/// Saturation tolerance for convergent `p`.
pub const SATURATION_TOLERANCE: f64 = 0.02;
/// Fitted exponents closer to zero than this are read as logarithmic.
pub const LOG_BAND: f64 = 0.05;

const SHELLS: usize = 30;
const FIT_FROM: usize = 11;
const BRACKET: (f64, f64) = (1.0, 12.0);
const BISECTION_WIDTH: f64 = 1e-6;

/// What the δ-ladder of one `p` does.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Growth {
    /// Converges; the last three levels agree within tolerance.
    Saturates,
    /// Converges, but too slowly to saturate on the grid.
    Converging,
    /// Grows like `−ln δ`.
    Logarithmic,
    /// Grows like a negative power of `δ`.
    Power,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PFit {
    pub p: f64,
    /// `2 − p + 2/k`
    pub predicted_exponent: f64,
    pub fitted_exponent: f64,
    pub growth: Growth,
    /// `2π²/(2 − p + 2/k)` when finite.
    pub exact_limit: Option<f64>,
}

/// Quadrature defaults for the scan: graded toward `|z₂| = δ`, two angular
/// nodes (the integrand has no angular dependence).
pub fn scan_quadrature() -> QuadratureSpec {
    QuadratureSpec::default()
        .with_nodes(8, 2)
        .with_grading(RadialGrading::Geometric)
}

fn z2_power(d: &DomainSpec, p: f64, v: (f64, f64), quad: &QuadratureSpec) -> Result<Estimate<Complex64>> {
    integrate_box(
        d,
        |w: &Point2| Ok(Complex64::new(w.z2.norm().powf(-p), 0.0)),
        &CoreBox { u: (0.0, 1.0), v },
        quad,
    )
}

/// Decay exponent `γ` of the shell integrals over `|z₂| ∈ [2^{−i}, 2^{1−i}]`,
/// `S_i ∝ 2^{−γ i}`; the integral converges at `|z₂| → 0` iff `γ > 0`.
pub fn shell_exponent(d: &DomainSpec, p: f64, quad: &QuadratureSpec) -> Result<f64> {
    let shell_quad = quad.with_grading(RadialGrading::Uniform);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for i in FIT_FROM..=SHELLS {
        let lo = 2f64.powi(-(i as i32));
        let s = z2_power(d, p, (lo, 2.0 * lo), &shell_quad)?.value.re;
        xs.push(i as f64);
        ys.push(s.log2());
    }
    Ok(-linear_fit(&xs, &ys)?.0)
}

/// Smallest `p` in the bracket whose shell integrals stop decaying.
pub fn bisect_critical(d: &DomainSpec, quad: &QuadratureSpec) -> Result<Option<f64>> {
    let (mut lo, mut hi) = BRACKET;
    if shell_exponent(d, lo, quad)? <= 0.0 || shell_exponent(d, hi, quad)? > 0.0 {
        return Ok(None);
    }
    while hi - lo > BISECTION_WIDTH {
        let mid = 0.5 * (lo + hi);
        if shell_exponent(d, mid, quad)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}

pub fn divergence_scan(
    d: &DomainSpec,
    p_grid: &[f64],
    delta_grid: &[f64],
    quad: &QuadratureSpec,
) -> Result<VerificationReport> {
    if p_grid.is_empty() {
        return Err(Error::invalid("empty p grid"));
    }
    if p_grid.iter().any(|p| !(*p > 0.0 && p.is_finite())) {
        return Err(Error::invalid("p values must be positive and finite"));
    }
    let mut deltas = delta_grid.to_vec();
    deltas.sort_by(|a, b| b.total_cmp(a));
    deltas.dedup();
    if deltas.len() < 4 {
        return Err(Error::invalid("the delta grid needs at least four distinct values"));
    }
    if deltas.iter().any(|x| !(*x > 0.0 && *x < 1.0)) {
        return Err(Error::invalid("delta values must lie in (0, 1)"));
    }
    quad.validate()?;

    let k = d.exponent();
    let predicted_critical = 2.0 + 2.0 / k;
    let mut rep = VerificationReport::new("divergence", CRITICAL_TOLERANCE);
    rep.param("k", k)
        .param("p_grid", p_grid)
        .param("delta_grid", &deltas)
        .param("quadrature", quad)
        .param("shells", (FIT_FROM, SHELLS))
        .param("bracket", BRACKET);
    rep.expected = Some(Verdict::Consistent);

    let mut fits = Vec::new();
    let mut all_ok = true;
    for &p in p_grid {
        let e = 2.0 - p + 2.0 / k;
        let series = format!("p={p}");
        let mut values = Vec::new();
        for &delta in &deltas {
            let est = z2_power(d, p, (delta, 1.0), quad)?;
            rep.samples.push(Sample::quadrature(&series, delta, est.value.re, est.error));
            values.push(est.value.re);
        }
        let increments: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).collect();
        let fitted = loglog_slope(&deltas[1..], &increments, 2.min(increments.len() - 2))?;
        let exact_limit = radial_moment(d, 0.0, -p).ok();
        let growth = if fitted > LOG_BAND {
            if saturates(&values, SATURATION_TOLERANCE) {
                Growth::Saturates
            } else {
                Growth::Converging
            }
        } else if fitted >= -LOG_BAND {
            Growth::Logarithmic
        } else {
            Growth::Power
        };
        let mut line = format!("p = {p}: {growth:?}, fitted exponent {fitted:.5}, predicted {e:.5}");
        match growth {
            Growth::Saturates => {
                if let Some(exact) = exact_limit {
                    let last = *values.last().unwrap();
                    line += &format!(", last value {last:.10} vs exact limit {exact:.10}");
                }
            }
            Growth::Logarithmic => {
                let logs: Vec<f64> = deltas.iter().map(|x| -x.ln()).collect();
                let slope = linear_fit(&logs[2..], &values[2..])?.0;
                line += &format!(", slope against -ln delta {slope:.6}");
            }
            Growth::Converging | Growth::Power => {
                line += &format!(", relative growth over last three levels {:.4}", tail_growth(&values).unwrap_or(f64::NAN));
            }
        }
        rep.note(line);

        let sign_ok = (fitted > 0.0) == (e > 0.0) || (e.abs() < LOG_BAND && growth == Growth::Logarithmic);
        let exponent_ok = e.abs() < LOG_BAND || (fitted / e - 1.0).abs() <= EXPONENT_TOLERANCE;
        all_ok &= sign_ok && (e > 0.0 || exponent_ok);
        fits.push(PFit {
            p,
            predicted_exponent: e,
            fitted_exponent: fitted,
            growth,
            exact_limit,
        });
    }
    if fits.len() == 1 {
        rep.fitted_exponent = Some(fits[0].fitted_exponent);
    }

    let critical = bisect_critical(d, quad)?;
    rep.derive("predicted_critical_p", predicted_critical);
    rep.derive("critical_p", critical);
    let by_p: BTreeMap<String, PFit> = fits.iter().map(|f| (format!("{}", f.p), *f)).collect();
    rep.derive("fits", by_p);
    rep.verdict = match critical {
        None => {
            rep.note("shell exponents do not change sign on the bisection bracket");
            Verdict::Inconclusive
        }
        Some(c) => {
            let rel = (c / predicted_critical - 1.0).abs();
            rep.note(format!(
                "bisected critical p {c:.6} vs (2k+2)/k = {predicted_critical:.6}, relative difference {rel:.2e}"
            ));
            if rel <= CRITICAL_TOLERANCE && all_ok {
                Verdict::Consistent
            } else {
                Verdict::Violated
            }
        }
    };
    Ok(rep)
}
