//! Exact and two-path checks: range algebra and closed form vs series.

use std::f64::consts::TAU;

use rayon::prelude::*;

use super::range::{
    canonical_schur_exponents_exact, critical_range, critical_range_exact, schur_range, schur_range_exact,
    canonical_schur_exponents,
};
use super::report::{Sample, Verdict, VerificationReport};
use crate::error::{Error, Result};
use crate::geometry::{DomainSpec, Point2};
use crate::kernel::{BergmanKernel, SeriesEvaluator, SeriesSpec};

/// Relative tolerance for the closed-vs-series kernel check.
pub const KERNEL_TOLERANCE: f64 = 1e-6;

/// Pairs `(z, w)` with `|t| ≤ 0.8` and `|s|^k ≤ 0.8|t|`, `t = z₂w̄₂`,
/// `s = z₁w̄₁`: a `grid × grid` table of radii times `angular²` relative
/// phases of `w`.
pub fn kernel_check_pairs(d: &DomainSpec, grid: usize, angular: usize) -> Vec<(Point2, Point2)> {
    let k = d.exponent();
    let top = 0.8f64.sqrt();
    let level = |i: usize| top * (i as f64 + 0.5) / grid as f64;
    let mut out = Vec::with_capacity(grid * grid * angular * angular);
    for i in 0..grid {
        for j in 0..grid {
            // |z₁|^k = c_z|z₂|, |w₁|^k = c_w|w₂| with c_z c_w ≤ 0.8
            let (rz2, rw2) = (level(i), level(j));
            let rz1 = (level(j) * rz2).powf(1.0 / k);
            let rw1 = (level(grid - 1 - i) * rw2).powf(1.0 / k);
            let z = Point2::real(rz1, rz2);
            for a in 0..angular {
                for b in 0..angular {
                    let th1 = TAU * a as f64 / angular as f64 + 0.3;
                    let th2 = TAU * b as f64 / angular as f64 + 0.1;
                    out.push((z, Point2::polar(rw1, th1, rw2, th2)));
                }
            }
        }
    }
    out
}

/// Largest relative difference between the closed form and the series over
/// [`kernel_check_pairs`].
pub fn kernel_check(d: &DomainSpec, grid: usize, angular: usize, series: SeriesSpec) -> Result<VerificationReport> {
    if grid < 1 || angular < 1 {
        return Err(Error::invalid("grid sizes must be positive"));
    }
    let kern = BergmanKernel::new(d)?;
    let eval = SeriesEvaluator::new(d, series)?;
    let pairs = kernel_check_pairs(d, grid, angular);
    let errors: Vec<(f64, u32)> = pairs
        .par_iter()
        .map(|(z, w)| {
            let closed = kern.closed(z, w)?;
            let s = eval.evaluate(z, w)?;
            Ok(((closed - s.value).norm() / closed.norm(), s.degree))
        })
        .collect::<Result<_>>()?;

    let mut rep = VerificationReport::new("kernel-check", KERNEL_TOLERANCE);
    rep.param("k", d.exponent())
        .param("grid", grid)
        .param("angular", angular)
        .param("series", series);
    rep.expected = Some(Verdict::Consistent);
    let mut worst: f64 = 0.0;
    let mut max_degree = 0;
    for (i, &(e, deg)) in errors.iter().enumerate() {
        rep.samples.push(Sample::exact("relative_error", i as f64, e));
        worst = worst.max(e);
        max_degree = max_degree.max(deg);
    }
    rep.derive("max_relative_error", worst)
        .derive("pairs", pairs.len())
        .derive("max_series_degree", max_degree);
    rep.note(format!("max relative error {worst:.3e} over {} pairs", pairs.len()));
    rep.verdict = if worst < KERNEL_TOLERANCE {
        Verdict::Consistent
    } else {
        Verdict::Violated
    };
    Ok(rep)
}

/// The critical range and the Schur range from the canonical exponents,
/// in exact rational arithmetic for integer `k`.
pub fn range_check(d: &DomainSpec) -> Result<VerificationReport> {
    let crit = critical_range(d);
    let (a, b) = canonical_schur_exponents(d);
    let schur = schur_range(a, b)?;
    let mut rep = VerificationReport::new("range", 0.0);
    rep.param("k", d.exponent());
    rep.expected = Some(Verdict::Consistent);
    rep.samples.push(Sample::exact("critical", 0.0, crit.p_low));
    rep.samples.push(Sample::exact("critical", 1.0, crit.p_high));
    rep.samples.push(Sample::exact("schur", 0.0, schur.p_low));
    rep.samples.push(Sample::exact("schur", 1.0, schur.p_high));
    rep.derive("p_low", crit.p_low)
        .derive("p_high", crit.p_high)
        .derive("schur_a", a)
        .derive("schur_b", b)
        .derive("conjugacy_defect", crit.conjugacy_defect());

    rep.verdict = if d.is_integer() {
        let k = d.integer_exponent()?;
        let (lo, hi) = critical_range_exact(k)?;
        let (ea, eb) = canonical_schur_exponents_exact(k)?;
        let (slo, shi) = schur_range_exact(ea, eb)?;
        let conj = lo.recip() + hi.recip() == 1.into();
        rep.derive("p_low_exact", lo.to_string())
            .derive("p_high_exact", hi.to_string())
            .derive("schur_exact", (slo.to_string(), shi.to_string()))
            .derive("conjugate_exact", conj);
        if conj && (lo, hi) == (slo, shi) {
            Verdict::Consistent
        } else {
            Verdict::Violated
        }
    } else {
        rep.note("non-integer k: floating-point ranges only");
        let agree = (crit.p_low - schur.p_low).abs() <= 1e-14 * crit.p_low
            && (crit.p_high - schur.p_high).abs() <= 1e-14 * crit.p_high;
        if agree && crit.conjugacy_defect().abs() < 1e-14 {
            Verdict::Consistent
        } else {
            Verdict::Violated
        }
    };
    Ok(rep)
}
