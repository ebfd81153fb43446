//! Finite-family lower bounds on `‖B_k‖_{L^p → L^p}`.
//!
//! For `f = w^a w̄^b` both `|f|` and `|B_k f| = |c| |z^γ|` are products of
//! powers of `|z₁|`, `|z₂|`, so both `L^p` norms are radial moments and
//! exact. A member whose projection has no finite `L^p` norm while `f` does
//! is a certificate that `B_k` is unbounded on `L^p`.

use super::range::critical_range;
use super::report::{Sample, Verdict, VerificationReport};
use crate::error::{Error, Result};
use crate::geometry::DomainSpec;
use crate::kernel::MultiIndex;
use crate::projection::{project_monomial, MonomialInput, MonomialProjection};
use crate::quadrature::radial_moment;

/// `‖|z₁|^{m₁}|z₂|^{m₂}‖_p`, or `None` when the moment diverges.
fn modulus_norm(d: &DomainSpec, m1: f64, m2: f64, p: f64) -> Result<Option<f64>> {
    match radial_moment(d, p * m1, p * m2) {
        Ok(v) => Ok(Some(v.powf(1.0 / p))),
        Err(Error::DivergentMoment { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Holomorphic monomials of weight at most 4, `z̄₂`, and a few mixed terms.
pub fn default_family(k: u32) -> Vec<MonomialInput> {
    let mut out: Vec<MonomialInput> = MultiIndex::enumerate(k, 4)
        .into_iter()
        .filter(|a| a.a1 >= 0 && a.a2 >= 0)
        .map(MonomialInput::holomorphic)
        .collect();
    out.push(MonomialInput::conj_z2());
    out.push(MonomialInput::new(MultiIndex::new(1, 0), MultiIndex::new(0, 1)));
    out.push(MonomialInput::new(MultiIndex::new(0, 1), MultiIndex::new(1, 0)));
    out.push(MonomialInput::new(MultiIndex::new(1, 1), MultiIndex::new(1, 0)));
    out
}

fn label(m: &MonomialInput) -> String {
    format!(
        "w^({},{}) conj(w)^({},{})",
        m.hol.a1, m.hol.a2, m.antihol.a1, m.antihol.a2
    )
}

/// `‖B_k f‖_p / ‖f‖_p` over the family. The samples' input is the member's
/// index in `family`.
pub fn norm_ratio_probe(d: &DomainSpec, p: f64, family: &[MonomialInput]) -> Result<VerificationReport> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::invalid(format!("p must be a finite value >= 1, got {p}")));
    }
    if family.is_empty() {
        return Err(Error::invalid("empty probe family"));
    }
    let range = critical_range(d);
    let inside = range.contains(p);
    let mut rep = VerificationReport::new("probe", 0.0);
    rep.param("k", d.exponent())
        .param("p", p)
        .param("family", family.iter().map(label).collect::<Vec<_>>());
    rep.expected = Some(if inside { Verdict::Consistent } else { Verdict::Violated });

    let mut best: f64 = 0.0;
    let mut certificates = Vec::new();
    for (i, m) in family.iter().enumerate() {
        let (m1, m2) = m.modulus_exponents();
        let Some(f_norm) = modulus_norm(d, m1, m2, p)? else {
            rep.note(format!("{}: not in L^{p}, skipped", label(m)));
            continue;
        };
        let proj = project_monomial(d, m)?;
        let bf_norm = match proj {
            MonomialProjection::Zero => Some(0.0),
            MonomialProjection::Monomial { gamma, coeff } => {
                modulus_norm(d, gamma.a1 as f64, gamma.a2 as f64, p)?.map(|n| coeff.abs() * n)
            }
        };
        match bf_norm {
            Some(n) => {
                let ratio = n / f_norm;
                best = best.max(ratio);
                rep.samples.push(Sample::exact("ratio", i as f64, ratio));
            }
            None => {
                rep.samples
                    .push(Sample::exact("ratio", i as f64, f64::INFINITY).mark_divergent());
                rep.note(format!(
                    "{}: certificate, the projection {proj:?} has no finite L^{p} norm",
                    label(m)
                ));
                certificates.push(label(m));
            }
        }
    }
    rep.bound_constant = Some(best);
    rep.derive("norm_lower_bound", best)
        .derive("certificates", &certificates)
        .derive("critical_range", (range.p_low, range.p_high));
    rep.note("ratios are lower bounds on the operator norm over the tested family");
    rep.verdict = if !certificates.is_empty() {
        Verdict::Violated
    } else if inside {
        Verdict::Consistent
    } else {
        Verdict::Inconclusive
    };
    Ok(rep)
}
