//! Schur-test check on `Ω_k`: the ratio
//!
//! `R(z) = h(z)^ε ∫_{Ω_k} |B_k(z, w)| h(w)^{−ε} dV(w)`
//!
//! along the three boundary ladders.
//!
//! With `w = (u v^{1/k} e^{iθ₁}, v e^{iθ₂})` the gauge is
//! `h = v² (1 − u^{2k}) (1 − v²)` and `dV = u v^{2/k+1} du dv dθ₁ dθ₂`.
//! After rotating `z` to real coordinates, `|t − s^k|` depends on the angles
//! only through `φ = θ₂ − kθ₁` and `|1 − t|` only through `θ₂`, so the
//! angular integral runs over `(φ, θ₂)` with rules graded toward the two
//! peaks. The angular integral does not depend on `ε` and is computed once
//! per ladder point.
//!
//! The `(u, v)` square is cut into a bulk and dyadic shells toward each face:
//! inner (`u → 1`), corner (`v → 0`) and outer (`v → 1`). Shell `i` has
//! width `2^{−i}`. Each face's strip sums give an empirical decay exponent,
//! and a face whose exponent does not stay positive is reported divergent.
//! Beyond the deepest shell the integrand is replaced by its leading
//! behaviour on the face (a measured profile times the explicit power of
//! the gauge), which is integrated in closed form.

use std::f64::consts::{LN_2, PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fit::{linear_fit, loglog_slope, saturates, tail_growth};
use super::range::canonical_schur_exponents;
use super::report::{Sample, Verdict, VerificationReport};
use crate::error::{Error, Result};
use crate::geometry::{DomainSpec, Point2, Stratum};
use crate::kernel::BergmanKernel;
use crate::quadrature::rules::{pairwise_sum, Rule};
use crate::quadrature::QuadratureSpec;

/// Parameters of a Schur-test run.
///
/// The quadrature fields are read as: `radial_nodes` Gauss–Legendre nodes
/// per dyadic radial panel, `angular_nodes` per angular panel, and
/// `boundary_offset` the width of the deepest shell relative to the
/// point's distance to the boundary, `min(1 − |z₂|, |z₂| − |z₁|^k, |z₂|)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchurConfig {
    pub eps: f64,
    pub a: f64,
    pub b: f64,
    pub ladder_levels: usize,
    pub quad: QuadratureSpec,
    /// Largest relative growth over the last three ladder levels still read
    /// as bounded.
    pub tolerance: f64,
    /// A face whose fitted shell-decay exponent is at or below this value
    /// is reported divergent.
    pub divergence_threshold: f64,
}

impl SchurConfig {
    /// `a = 1/2`, `b = (k+2)/(2k)`, twelve ladder levels and shells twelve
    /// dyadic levels below the point's own scale.
    pub fn canonical(d: &DomainSpec, eps: f64) -> Self {
        let (a, b) = canonical_schur_exponents(d);
        let levels = 12;
        Self {
            eps,
            a,
            b,
            ladder_levels: levels,
            quad: QuadratureSpec {
                radial_nodes: 4,
                angular_nodes: 6,
                boundary_offset: 2f64.powi(-12),
                ..QuadratureSpec::default()
            },
            tolerance: 0.02,
            divergence_threshold: 0.02,
        }
    }

    /// Dyadic shells computed beyond the point's own scale.
    pub fn shell_margin(&self) -> usize {
        (-self.quad.boundary_offset.log2()).round().max(0.0) as usize
    }

    fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0 && self.eps.is_finite()) {
            return Err(Error::invalid(format!("epsilon must be positive, got {}", self.eps)));
        }
        if !(self.a > 0.0 && self.a < self.b) {
            return Err(Error::invalid(format!("need 0 < a < b, got a = {}, b = {}", self.a, self.b)));
        }
        if self.ladder_levels < 3 {
            return Err(Error::invalid("Schur ladders need at least three levels"));
        }
        if self.shell_margin() < 8 {
            return Err(Error::invalid("shell margin below 2^-8; decrease boundary_offset"));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::invalid("growth tolerance must be positive"));
        }
        self.quad.validate()
    }
}

/// Contribution `base · h^{−ε}`, stored as `(base, ln h)`.
#[derive(Debug, Clone, Copy)]
struct Node {
    base: f64,
    ln_h: f64,
}

impl Node {
    fn at(&self, eps: f64) -> f64 {
        self.base * (-eps * self.ln_h).exp()
    }
}

fn sum_at(nodes: &[Node], eps: f64) -> f64 {
    let v: Vec<f64> = nodes.iter().map(|n| n.at(eps)).collect();
    pairwise_sum(&v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum VBand {
    Bulk,
    Corner(usize),
    Outer(usize),
}

/// Level 2 is the bulk.
const BULK: usize = 2;

#[derive(Debug, Clone)]
struct Cell {
    u_level: usize,
    v_band: VBand,
    nodes: Vec<Node>,
}

/// A radial node with its distance `gap = 1 − x` to the far end, carried
/// separately so that it keeps full relative precision.
#[derive(Debug, Clone, Copy)]
struct Radial {
    x: f64,
    gap: f64,
    w: f64,
}

fn toward_one(lo_gap: f64, hi_gap: f64, n: usize) -> Vec<Radial> {
    Rule::gauss(lo_gap, hi_gap, n)
        .iter()
        .map(|(g, w)| Radial { x: 1.0 - g, gap: g, w })
        .collect()
}

fn plain(breaks: &[f64], n: usize) -> Vec<Radial> {
    Rule::composite(breaks, n)
        .iter()
        .map(|(x, w)| Radial { x, gap: 1.0 - x, w })
        .collect()
}

fn u_panels(depth: usize, n: usize) -> Vec<(usize, Vec<Radial>)> {
    let mut out = vec![(BULK, plain(&[0.0, 0.25, 0.5, 0.75], n))];
    for i in 3..=depth {
        out.push((i, toward_one(2f64.powi(-(i as i32)), 2f64.powi(1 - i as i32), n)));
    }
    out
}

fn v_panels(depth: usize, n: usize) -> Vec<(VBand, Vec<Radial>)> {
    let mut out = Vec::new();
    for i in (3..=depth).rev() {
        out.push((VBand::Corner(i), plain(&[2f64.powi(-(i as i32)), 2f64.powi(1 - i as i32)], n)));
    }
    out.push((VBand::Bulk, plain(&[0.25, 0.5, 0.75], n)));
    for i in 3..=depth {
        out.push((VBand::Outer(i), toward_one(2f64.powi(-(i as i32)), 2f64.powi(1 - i as i32), n)));
    }
    out
}

/// `1 − (1 − g)^m` without cancellation.
fn one_minus_pow(g: f64, m: f64) -> f64 {
    -(m * (-g).ln_1p()).exp_m1()
}

/// Angular integrals of `|B_k(z, ·)|` for one real `z`.
struct Angular<'a> {
    kern: &'a BergmanKernel,
    k: f64,
    z1: f64,
    z2: f64,
    z1k: f64,
    /// `1 − z₂`
    g_out: f64,
    /// `z₂ − z₁^k`
    g_in: f64,
    panel_nodes: usize,
    p0: Complex64,
    q0: Complex64,
}

impl<'a> Angular<'a> {
    fn new(kern: &'a BergmanKernel, z: &Point2, panel_nodes: usize) -> Result<Self> {
        let k = kern.exponent() as f64;
        let (z1, z2) = (z.z1.norm(), z.z2.norm());
        let z1k = z1.powf(k);
        let (g_out, g_in) = (1.0 - z2, z2 - z1k);
        if !(g_out > 0.0 && g_in > 0.0) {
            return Err(Error::NotInterior { z1: z.z1, z2: z.z2 });
        }
        let (p0, q0) = kern.polys(Complex64::new(0.0, 0.0));
        Ok(Self {
            kern,
            k,
            z1,
            z2,
            z1k,
            g_out,
            g_in,
            panel_nodes,
            p0,
            q0,
        })
    }

    fn rule(&self, width: f64) -> Rule {
        Rule::graded_periodic(width.min(PI), self.panel_nodes)
    }

    /// `v · ∫∫ |B_k(z, w)| dθ₁ dθ₂` at `(u, v)`; finite at `v = 0`.
    fn va(&self, u: f64, gu: f64, v: f64, gv: f64) -> f64 {
        let a = self.z2 * v;
        let one_minus_a = self.g_out + self.z2 * gv;
        let th = self.rule(one_minus_a);
        // per θ₂ node: weight, z₂e^{−iθ₂}, |1 − t|²
        let theta: Vec<(f64, f64, Complex64, f64)> = th
            .iter()
            .map(|(t, w)| {
                let sn = (0.5 * t).sin();
                (t, w, Complex64::from_polar(self.z2, -t), one_minus_a * one_minus_a + 4.0 * a * sn * sn)
            })
            .collect();
        let kpi2 = self.k * PI * PI;

        if self.z1 == 0.0 {
            let acc: f64 = theta
                .iter()
                .map(|&(_, w, tau, den)| w * (self.p0 * v * tau * tau + self.q0 * tau).norm() / den)
                .sum();
            return TAU * acc / (kpi2 * self.z2 * self.z2);
        }

        // The integrand is invariant under (θ₁, θ₂) → (−θ₁, −θ₂), so only
        // φ > 0 is summed and doubled; the graded rules are symmetric.
        let kk = self.kern.exponent() as usize;
        let rho = self.z1k * u.powf(self.k);
        let d0 = self.g_in + self.z1k * one_minus_pow(gu, self.k);
        let s_mod = self.z1 * u * v.powf(1.0 / self.k);
        let roots: Vec<Complex64> = (0..kk).map(|m| Complex64::from_polar(s_mod, -TAU * m as f64 / self.k)).collect();
        // e^{−iθ₂/k} per θ₂ node
        let half: Vec<Complex64> = theta.iter().map(|&(t, ..)| Complex64::from_polar(1.0, -t / self.k)).collect();
        let mut acc = 0.0;
        for (phi, w) in self.rule(d0 / self.z2).iter().filter(|(phi, _)| *phi >= 0.0) {
            let wphi = if phi == 0.0 { 0.5 * w } else { w };
            let sn = (0.5 * phi).sin();
            let dphi = d0 * d0 + 4.0 * self.z2 * rho * sn * sn;
            let rot = Complex64::from_polar(1.0, phi / self.k);
            let eiphi = Complex64::from_polar(rho / self.z2, phi);
            let mut inner = 0.0;
            for (&(_, wt, tau, den), &h) in theta.iter().zip(&half) {
                // s = z₁ u v^{1/k} e^{−iθ₁} and s^k-part ρ e^{−ikθ₁} = ρ e^{−i(θ₂ − φ)}
                let e = h * rot;
                let sigma = tau * eiphi;
                let mut branch = 0.0;
                for r in &roots {
                    let (p, q) = self.kern.polys(r * e);
                    branch += (p * (v * tau * tau + sigma) + q * tau).norm();
                }
                inner += wt * branch / den;
            }
            acc += wphi * inner / dphi;
        }
        2.0 * acc / (self.k * kpi2)
    }
}

/// Everything about one ladder point that does not depend on `ε`.
struct PointData {
    depth: usize,
    k: f64,
    ln_hz: f64,
    /// smallest of the point's gaps to the three faces, in the ladder sense
    min_gap: f64,
    cells: Vec<Cell>,
    outer_profile: Vec<Node>,
    corner_profile: Vec<Node>,
    inner_profile: Vec<Node>,
    /// `A(1, 1)`
    a11: f64,
    /// `lim_{v→0} v A(1, v)`
    lc1: f64,
}

impl PointData {
    fn compute(kern: &BergmanKernel, z: &Point2, cfg: &SchurConfig) -> Result<Self> {
        let n = cfg.quad.radial_nodes;
        let ang = Angular::new(kern, z, cfg.quad.angular_nodes)?;
        let min_gap = ang.g_out.min(ang.g_in).min(ang.z2);
        let depth = (-min_gap.log2()).ceil().max(0.0) as usize + cfg.shell_margin();
        let k = ang.k;
        let us = u_panels(depth, n);
        let vs = v_panels(depth, n);
        let ln_1m_u2k = |r: &Radial| one_minus_pow(r.gap, 2.0 * k).ln();
        let ln_hv = |r: &Radial| 2.0 * r.x.ln() + (r.gap * (1.0 + r.x)).ln();

        // v·A is independent of u when z₁ = 0
        let u_free: Option<Vec<Vec<f64>>> = (ang.z1 == 0.0).then(|| {
            vs.iter()
                .map(|(_, pts)| pts.iter().map(|r| ang.va(0.5, 0.5, r.x, r.gap)).collect())
                .collect()
        });

        let pairs: Vec<(usize, usize)> = (0..us.len()).flat_map(|i| (0..vs.len()).map(move |j| (i, j))).collect();
        let cells: Vec<Cell> = pairs
            .par_iter()
            .map(|&(iu, iv)| {
                let (u_level, upts) = &us[iu];
                let (v_band, vpts) = &vs[iv];
                let mut nodes = Vec::with_capacity(upts.len() * vpts.len());
                for ru in upts {
                    for (jv, rv) in vpts.iter().enumerate() {
                        let va = match &u_free {
                            Some(t) => t[iv][jv],
                            None => ang.va(ru.x, ru.gap, rv.x, rv.gap),
                        };
                        nodes.push(Node {
                            base: ru.w * rv.w * ru.x * rv.x.powf(2.0 / k) * va,
                            ln_h: ln_hv(rv) + ln_1m_u2k(ru),
                        });
                    }
                }
                Cell {
                    u_level: *u_level,
                    v_band: *v_band,
                    nodes,
                }
            })
            .collect();

        let all_u: Vec<Radial> = us.iter().flat_map(|(_, p)| p.iter().copied()).collect();
        let all_v: Vec<Radial> = vs.iter().flat_map(|(_, p)| p.iter().copied()).collect();
        let outer_profile = all_u
            .par_iter()
            .map(|r| Node {
                base: r.w * r.x * ang.va(r.x, r.gap, 1.0, 0.0),
                ln_h: ln_1m_u2k(r) + LN_2,
            })
            .collect();
        let corner_profile = all_u
            .par_iter()
            .map(|r| Node {
                base: r.w * r.x * ang.va(r.x, r.gap, 0.0, 1.0),
                ln_h: ln_1m_u2k(r),
            })
            .collect();
        let inner_profile = all_v
            .par_iter()
            .map(|r| Node {
                base: r.w * r.x.powf(2.0 / k) * ang.va(1.0, 0.0, r.x, r.gap),
                ln_h: ln_hv(r) + (2.0 * k).ln(),
            })
            .collect();

        let z2 = ang.z2;
        let ln_hz = (ang.g_in * (z2 + ang.z1k)).ln() + (ang.g_out * (1.0 + z2)).ln();
        Ok(Self {
            depth,
            k,
            ln_hz,
            min_gap,
            cells,
            outer_profile,
            corner_profile,
            inner_profile,
            a11: ang.va(1.0, 0.0, 1.0, 0.0),
            lc1: ang.va(1.0, 0.0, 0.0, 1.0),
        })
    }
}

/// Fitted decay of one face's strip sums.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FaceFit {
    pub face: Stratum,
    /// `γ̂` in `S(i) ∝ 2^{−γ̂ i}` over the deepest shells.
    pub decay_exponent: f64,
    /// Exponent of `∫₀^δ` near the face implied by the gauge: `1 − ε`
    /// (inner, outer) or `2/k − 2ε + 1` (corner).
    pub gauge_exponent: f64,
    pub divergent: bool,
}

/// `R(z)` and its ingredients at one `ε`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchurPoint {
    pub ratio: f64,
    /// Integral over the computed shells plus the closed-form tails; the
    /// truncated shell sum alone when a face diverges.
    pub integral: f64,
    /// Share of `integral` that comes from the closed-form tails.
    pub tail_share: f64,
    pub error: f64,
    pub faces: Vec<FaceFit>,
    pub divergent: bool,
}

const FIT_LEVELS: usize = 6;

fn assemble(data: &PointData, eps: f64, threshold: f64) -> Result<SchurPoint> {
    let depth = data.depth;
    let cells_total = pairwise_sum(&data.cells.iter().map(|c| sum_at(&c.nodes, eps)).collect::<Vec<_>>());

    let mut strips = [vec![0.0; depth + 1], vec![0.0; depth + 1], vec![0.0; depth + 1]];
    for c in &data.cells {
        let s = sum_at(&c.nodes, eps);
        if c.u_level != BULK {
            strips[0][c.u_level] += s;
        }
        match c.v_band {
            VBand::Corner(i) => strips[1][i] += s,
            VBand::Outer(i) => strips[2][i] += s,
            VBand::Bulk => {}
        }
    }
    let e_side = 1.0 - eps;
    let e_corner = 2.0 / data.k - 2.0 * eps + 1.0;
    let faces: Vec<FaceFit> = [Stratum::Inner, Stratum::Corner, Stratum::Outer]
        .iter()
        .zip(&strips)
        .map(|(&face, s)| {
            let lo = depth + 1 - FIT_LEVELS;
            let xs: Vec<f64> = (lo..=depth).map(|i| i as f64).collect();
            let ys: Vec<f64> = (lo..=depth).map(|i| s[i].log2()).collect();
            let gamma = -linear_fit(&xs, &ys)?.0;
            let gauge_exponent = if face == Stratum::Corner { e_corner } else { e_side };
            Ok(FaceFit {
                face,
                decay_exponent: gamma,
                gauge_exponent,
                divergent: !(gamma > threshold) || gauge_exponent <= 0.0,
            })
        })
        .collect::<Result<_>>()?;

    let divergent = faces.iter().any(|f| f.divergent);
    let (integral, tails) = if divergent {
        (cells_total, 0.0)
    } else {
        let delta = 2f64.powi(-(depth as i32));
        let t_side = delta.powf(e_side) / e_side;
        let t_corner = delta.powf(e_corner) / e_corner;
        let po = sum_at(&data.outer_profile, eps);
        let pc = sum_at(&data.corner_profile, eps);
        let pi = sum_at(&data.inner_profile, eps);
        let ln2k = (2.0 * data.k).ln();
        let qio = data.a11 * (-eps * (ln2k + LN_2)).exp();
        let qic = data.lc1 * (-eps * ln2k).exp();
        let tails = (po + pi) * t_side + pc * t_corner + qio * t_side * t_side + qic * t_side * t_corner;
        (cells_total + tails, tails)
    };
    let ratio = integral * (eps * data.ln_hz).exp();
    // leading-order tails are off by O(shell width / distance of z to the face)
    let rel = (2f64.powi(-(data.depth as i32)) / data.min_gap).min(1.0);
    Ok(SchurPoint {
        ratio,
        integral,
        tail_share: tails / integral,
        error: ratio * (tails / integral) * rel,
        faces,
        divergent,
    })
}

/// `∫ |B_k(z, w)| h(w)^{−ε} dV(w)` and `R(z)` at a single point.
pub fn schur_point(d: &DomainSpec, z: &Point2, cfg: &SchurConfig) -> Result<SchurPoint> {
    cfg.validate()?;
    let kern = BergmanKernel::new(d)?;
    d.require_interior(z)?;
    let data = PointData::compute(&kern, z, cfg)?;
    assemble(&data, cfg.eps, cfg.divergence_threshold)
}

pub fn verify_schur(d: &DomainSpec, cfg: &SchurConfig) -> Result<VerificationReport> {
    Ok(schur_sweep(d, &[cfg.eps], cfg)?.remove(0))
}

/// [`verify_schur`] for several `ε` at once, sharing the angular integrals;
/// `cfg.eps` is ignored.
pub fn schur_sweep(d: &DomainSpec, eps_values: &[f64], cfg: &SchurConfig) -> Result<Vec<VerificationReport>> {
    let kern = BergmanKernel::new(d)?;
    for &eps in eps_values {
        SchurConfig { eps, ..*cfg }.validate()?;
    }
    let mut points = Vec::new();
    for stratum in Stratum::ALL {
        for z in d.boundary_ladder(stratum, cfg.ladder_levels)? {
            let data = PointData::compute(&kern, &z, cfg).map_err(|e| Error::Integrand {
                z1: z.z1,
                z2: z.z2,
                source: Box::new(e),
            })?;
            points.push((stratum, d.stratum_gap(&z, stratum), data));
        }
    }

    eps_values
        .iter()
        .map(|&eps| {
            let mut rep = VerificationReport::new("schur", cfg.tolerance);
            rep.param("k", d.exponent())
                .param("eps", eps)
                .param("a", cfg.a)
                .param("b", cfg.b)
                .param("ladder_levels", cfg.ladder_levels)
                .param("shell_margin", cfg.shell_margin())
                .param("quadrature", cfg.quad)
                .param("divergence_threshold", cfg.divergence_threshold);
            rep.expected = Some(if cfg.a <= eps && eps < cfg.b {
                Verdict::Consistent
            } else {
                Verdict::Violated
            });

            let mut any_divergent = false;
            let mut any_growth = false;
            let mut worst_growth_exp = f64::NEG_INFINITY;
            let mut bound: f64 = 0.0;
            for stratum in Stratum::ALL {
                let mut gaps = Vec::new();
                let mut ratios = Vec::new();
                let mut last_faces = Vec::new();
                for (s, gap, data) in points.iter().filter(|(s, _, _)| *s == stratum) {
                    let pt = assemble(data, eps, cfg.divergence_threshold)?;
                    let mut sample = Sample::quadrature(s.name(), *gap, pt.ratio, pt.error);
                    if pt.divergent {
                        sample = sample.mark_divergent();
                        any_divergent = true;
                    }
                    rep.samples.push(sample);
                    gaps.push(*gap);
                    ratios.push(pt.ratio);
                    last_faces = pt.faces;
                }
                let faces_txt: Vec<String> = last_faces
                    .iter()
                    .map(|f| {
                        format!(
                            "{} {:.4}{}",
                            f.face.name(),
                            f.decay_exponent,
                            if f.divergent { " (divergent)" } else { "" }
                        )
                    })
                    .collect();
                rep.note(format!(
                    "{} ladder, deepest point: face decay exponents {}",
                    stratum.name(),
                    faces_txt.join(", ")
                ));
                if ratios.iter().all(|r| r.is_finite() && *r > 0.0) {
                    let growth = -loglog_slope(&gaps, &ratios, 2)?;
                    worst_growth_exp = worst_growth_exp.max(growth);
                    let bounded = saturates(&ratios, cfg.tolerance);
                    any_growth |= !bounded;
                    bound = bound.max(ratios.iter().cloned().fold(0.0, f64::max));
                    rep.note(format!(
                        "{} ladder: relative growth over last three levels {:.4}, fitted growth exponent {:.4}, {}",
                        stratum.name(),
                        tail_growth(&ratios).unwrap_or(f64::NAN),
                        growth,
                        if bounded { "bounded" } else { "growing" }
                    ));
                }
            }
            rep.fitted_exponent = worst_growth_exp.is_finite().then_some(worst_growth_exp);
            rep.verdict = if any_divergent || any_growth {
                Verdict::Violated
            } else {
                rep.bound_constant = Some(bound);
                Verdict::Consistent
            };
            if any_divergent {
                rep.note("at least one face integral diverges: |B|(h^-eps) is infinite");
            }
            Ok(rep)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn cfg(d: &DomainSpec, eps: f64, margin: i32) -> SchurConfig {
        let mut c = SchurConfig::canonical(d, eps);
        c.quad.boundary_offset = 2f64.powi(-margin);
        c
    }

    /// `₂F₁(1, b; c; x)` by its power series.
    fn hyp2f1_one(b: f64, c: f64, x: f64) -> f64 {
        let (mut term, mut sum) = (1.0, 1.0);
        for n in 0..2000 {
            term *= (b + n as f64) / (c + n as f64) * x;
            sum += term;
            if term.abs() < 1e-17 * sum {
                break;
            }
        }
        sum
    }

    fn beta(a: f64, b: f64) -> f64 {
        libm::tgamma(a) * libm::tgamma(b) / libm::tgamma(a + b)
    }

    /// For `k = 1` and `z = (0, r)` the integral separates:
    /// `(4/r) · 1/(2(1−ε)) · ½ B(3/2−ε, 1−ε) ₂F₁(1, 3/2−ε; 5/2−2ε; r²)`.
    fn k1_axis_integral(r: f64, eps: f64) -> f64 {
        let b = 1.5 - eps;
        let c = 2.5 - 2.0 * eps;
        4.0 / r / (2.0 * (1.0 - eps)) * 0.5 * beta(b, 1.0 - eps) * hyp2f1_one(b, c, r * r)
    }

    #[test]
    fn angular_integral_closed_form_on_axis() {
        let d = DomainSpec::integer(1).unwrap();
        let kern = BergmanKernel::new(&d).unwrap();
        let z = Point2::real(0.0, 0.7);
        let ang = Angular::new(&kern, &z, 6).unwrap();
        for v in [0.0, 0.3, 0.9, 1.0] {
            let a = 0.7 * v;
            assert_relative_eq!(ang.va(0.4, 0.6, v, 1.0 - v), 4.0 / (0.7 * (1.0 - a * a)), max_relative = 1e-9);
        }
    }

    #[test]
    fn angular_integral_matches_brute_force() {
        for k in 1..=3u32 {
            let d = DomainSpec::integer(k).unwrap();
            let kern = BergmanKernel::new(&d).unwrap();
            let z = Point2::real(0.55, 0.6f64.max(0.55f64.powi(k as i32) + 0.05));
            let ang = Angular::new(&kern, &z, 16).unwrap();
            for &(u, v) in &[(0.3, 0.5), (0.9, 0.8), (0.97, 0.2)] {
                let fast = ang.va(u, 1.0 - u, v, 1.0 - v);
                let n = 720;
                let h = TAU / n as f64;
                let mut acc = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        let w = Point2::polar(u * f64::powf(v, 1.0 / k as f64), i as f64 * h, v, j as f64 * h);
                        acc += kern.closed(&z, &w).unwrap().norm() * h * h;
                    }
                }
                assert_relative_eq!(fast, v * acc, max_relative = 1e-5);
            }
        }
    }

    #[test]
    fn integral_matches_separable_oracle() {
        let d = DomainSpec::integer(1).unwrap();
        for &(r, eps) in &[(0.5, 0.5), (0.9, 0.3), (0.99, 0.8), (0.05, 0.6)] {
            let c = cfg(&d, eps, 20);
            let pt = schur_point(&d, &Point2::real(0.0, r), &c).unwrap();
            assert!(!pt.divergent);
            assert_relative_eq!(pt.integral, k1_axis_integral(r, eps), max_relative = 1e-5);
        }
    }

    #[test]
    fn tails_make_the_result_depth_independent() {
        let d = DomainSpec::integer(2).unwrap();
        let z = Point2::real(0.5, 0.3);
        let shallow = schur_point(&d, &z, &cfg(&d, 0.9, 10)).unwrap();
        let deep = schur_point(&d, &z, &cfg(&d, 0.9, 18)).unwrap();
        assert!(shallow.tail_share > 0.1);
        assert_relative_eq!(shallow.integral, deep.integral, max_relative = 1e-4);
    }

    #[test]
    fn divergent_faces_are_detected() {
        let d = DomainSpec::integer(2).unwrap();
        let z = Point2::real(0.3, 0.4);
        let pt = schur_point(&d, &z, &cfg(&d, 1.1, 14)).unwrap();
        assert!(pt.divergent);
        let corner = pt.faces.iter().find(|f| f.face == Stratum::Corner).unwrap();
        assert!(corner.divergent);
        assert_relative_eq!(corner.decay_exponent, 2.0 * (1.0 - 1.1), epsilon = 0.02);
        let ok = schur_point(&d, &z, &cfg(&d, 0.75, 14)).unwrap();
        assert!(!ok.divergent);
        for f in &ok.faces {
            assert_relative_eq!(f.decay_exponent, f.gauge_exponent, epsilon = 0.02);
        }
    }
}
