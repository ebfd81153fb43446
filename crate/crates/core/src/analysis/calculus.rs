//! Disc experiments: the plateau of `I_{ε,β}(z)(1 − |z|²)^ε` and the
//! logarithmic growth of `∫_D |1 − z w̄|^{−2} dV(w)`.

use std::f64::consts::PI;

use super::fit::{linear_fit, loglog_slope, saturates, tail_growth};
use super::report::{Sample, Verdict, VerificationReport};
use crate::error::{Error, Result};
use crate::quadrature::{disc_kernel_integral, DiscWeight, QuadratureSpec};

/// Saturation tolerance for the calculus plateau.
pub const PLATEAU_TOLERANCE: f64 = 0.02;
/// Relative tolerance on fitted slopes and exponents.
pub const FIT_TOLERANCE: f64 = 0.10;

/// Value with the half-node difference as its error.
fn disc(eps: f64, beta: f64, gap: f64, weight: DiscWeight, quad: &QuadratureSpec) -> Result<(f64, f64)> {
    let v = disc_kernel_integral(eps, beta, gap, weight, quad)?;
    let coarse = quad.with_nodes((quad.radial_nodes / 2).max(2), quad.angular_nodes);
    let c = disc_kernel_integral(eps, beta, gap, weight, &coarse)?;
    Ok((v, (v - c).abs()))
}

fn ladder(levels: usize) -> Vec<f64> {
    (1..=levels).map(|j| 2f64.powi(-(j as i32))).collect()
}

/// `I_{ε,β}(z)` and `I_{ε,β}(z)(1 − |z|²)^ε` along `|z| = 1 − 2^{−j}`,
/// `j = 1..=levels`, plus the value at `z = 0`.
pub fn verify_calculus1(eps: f64, beta: f64, levels: usize, quad: &QuadratureSpec) -> Result<VerificationReport> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::invalid(format!("epsilon must lie in (0, 1), got {eps}")));
    }
    if levels < 4 {
        return Err(Error::invalid("the calculus ladder needs at least four levels"));
    }
    let mut rep = VerificationReport::new("calculus1", PLATEAU_TOLERANCE);
    rep.param("eps", eps)
        .param("beta", beta)
        .param("levels", levels)
        .param("quadrature", quad);
    rep.expected = Some(Verdict::Consistent);

    let (origin, err) = disc(eps, beta, 1.0, DiscWeight::Gauge, quad)?;
    rep.samples.push(Sample::quadrature("origin", 1.0, origin, err));

    let gaps = ladder(levels);
    let mut values = Vec::new();
    let mut products = Vec::new();
    for &g in &gaps {
        let c = g * (2.0 - g);
        let (v, err) = disc(eps, beta, g, DiscWeight::Gauge, quad)?;
        values.push(v);
        products.push(v * c.powf(eps));
        rep.samples.push(Sample::quadrature("integral", g, v, err));
        rep.samples.push(Sample::quadrature("plateau", g, v * c.powf(eps), err * c.powf(eps)));
    }
    // increments between levels drop the additive constant in I
    let cs: Vec<f64> = gaps.iter().map(|g| g * (2.0 - g)).collect();
    let increments: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).collect();
    let growth = -loglog_slope(&cs[1..], &increments, 2)?;
    rep.fitted_exponent = Some(growth);
    rep.derive("plateau_tail_growth", tail_growth(&products));
    rep.note(format!("fitted growth exponent of I against 1 - |z|^2: {growth:.5} (eps = {eps})"));
    if saturates(&products, PLATEAU_TOLERANCE) {
        rep.bound_constant = Some(products.iter().cloned().fold(0.0, f64::max));
        rep.verdict = Verdict::Consistent;
    } else {
        rep.verdict = Verdict::Violated;
        rep.note("I(z)(1 - |z|^2)^eps keeps growing along the ladder");
    }
    Ok(rep)
}

/// The log law for the unweighted disc integral, its `δ^{−1/2}` counterpart
/// under the weight `(1 − |w|)^{−1/2}`, and the value at `z = 0`.
///
/// The unweighted integral equals `−π ln(1 − |z|²)/|z|²`, so the fitted
/// slope against `−ln(1 − |z|)` is compared to `π`.
pub fn verify_disc_log(levels: usize, quad: &QuadratureSpec) -> Result<VerificationReport> {
    if levels < 4 {
        return Err(Error::invalid("the log ladder needs at least four levels"));
    }
    const WEIGHT_EPS: f64 = 0.5;
    let mut rep = VerificationReport::new("disc-log", FIT_TOLERANCE);
    rep.param("levels", levels)
        .param("weighted_eps", WEIGHT_EPS)
        .param("quadrature", quad);
    rep.expected = Some(Verdict::Consistent);

    let (origin, err) = disc(0.0, 0.0, 1.0, DiscWeight::Gauge, quad)?;
    rep.samples.push(Sample::quadrature("origin", 1.0, origin, err));

    let gaps = ladder(levels);
    let mut plain = Vec::new();
    let mut weighted = Vec::new();
    for &g in &gaps {
        let (v, ev) = disc(0.0, 0.0, g, DiscWeight::Gauge, quad)?;
        let (w, ew) = disc(WEIGHT_EPS, 0.0, g, DiscWeight::Distance, quad)?;
        rep.samples.push(Sample::quadrature("log", g, v, ev));
        rep.samples.push(Sample::quadrature("weighted", g, w, ew));
        plain.push(v);
        weighted.push(w);
    }

    let logs: Vec<f64> = gaps[2..].iter().map(|g| -g.ln()).collect();
    let slope = linear_fit(&logs, &plain[2..])?.0;
    let increments: Vec<f64> = weighted.windows(2).map(|w| w[1] - w[0]).collect();
    let exponent = -loglog_slope(&gaps[1..], &increments, 2)?;
    rep.fitted_exponent = Some(exponent);
    rep.derive("log_slope", slope)
        .derive("log_slope_per_level", slope * std::f64::consts::LN_2)
        .derive("weighted_exponent", exponent);

    let slope_ok = (slope / PI - 1.0).abs() <= FIT_TOLERANCE;
    let exponent_ok = (exponent / WEIGHT_EPS - 1.0).abs() <= FIT_TOLERANCE;
    rep.note(format!("slope against -ln(1 - |z|): {slope:.6}, predicted pi"));
    rep.note(format!("weighted growth exponent: {exponent:.6}, predicted {WEIGHT_EPS}"));
    rep.verdict = if slope_ok && exponent_ok {
        Verdict::Consistent
    } else {
        Verdict::Violated
    };
    Ok(rep)
}
