//! Integration over `Ω_k` and the unit disc.
//!
//! Three paths are available: exact radial moments of `|z₁|^{m₁}|z₂|^{m₂}`,
//! a tensor-product polar rule on a box in `(u, v)` coordinates, and plain or
//! stratified Monte Carlo. Here `v = |z₂|` and `u = |z₁| / v^{1/k}`, so `Ω_k`
//! is the box `(0, 1) × (0, 1)` times two angles. The tensor rule runs its
//! radial nodes in `x = v^{1/k}`, where `dV = k u x^{2k+1} du dx dθ₁ dθ₂`
//! and the cusp at the origin carries no fractional powers.

mod disc;
mod mc;
pub(crate) mod rules;

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{DomainSpec, Point2};
use rules::{pairwise_sum_complex, Rule};

pub use disc::{disc_integral_i, disc_kernel_integral, DiscWeight};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    TensorPolar,
    MonteCarlo,
    StratifiedMc,
}

/// Placement of the radial tensor nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RadialGrading {
    /// One Gauss–Legendre panel per radial axis.
    Uniform,
    /// Panels halving toward `u = 0` and `|z₂| = 0`, for integrands with
    /// algebraic singularities there.
    Geometric,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub radial_nodes: usize,
    pub angular_nodes: usize,
    pub boundary_offset: f64,
    pub strategy: Strategy,
    pub mc_samples: usize,
    pub seed: u64,
    pub grading: RadialGrading,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            radial_nodes: 24,
            angular_nodes: 32,
            boundary_offset: 1e-10,
            strategy: Strategy::TensorPolar,
            mc_samples: 200_000,
            seed: 0,
            grading: RadialGrading::Uniform,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.boundary_offset > 0.0 && self.boundary_offset < 0.5) {
            return Err(Error::invalid(format!(
                "boundary offset must lie in (0, 0.5), got {}",
                self.boundary_offset
            )));
        }
        if self.radial_nodes < 2 || self.angular_nodes < 2 {
            return Err(Error::invalid("node counts must be at least 2"));
        }
        if self.strategy != Strategy::TensorPolar && self.mc_samples < 1 {
            return Err(Error::invalid("Monte Carlo strategies need at least one sample"));
        }
        Ok(())
    }

    pub fn with_offset(mut self, delta: f64) -> Self {
        self.boundary_offset = delta;
        self
    }

    pub fn with_nodes(mut self, radial: usize, angular: usize) -> Self {
        self.radial_nodes = radial;
        self.angular_nodes = angular;
        self
    }

    pub fn with_strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = strategy;
        self
    }

    pub fn with_grading(mut self, grading: RadialGrading) -> Self {
        self.grading = grading;
        self
    }
}

/// A value with an error estimate: node-count comparison for tensor rules,
/// the standard error for Monte Carlo.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate<T> {
    pub value: T,
    pub error: f64,
}

/// Axis-aligned region in `(u, v) = (|z₁|/|z₂|^{1/k}, |z₂|)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoreBox {
    pub u: (f64, f64),
    pub v: (f64, f64),
}

impl CoreBox {
    /// The δ-core `u ∈ (0, 1−δ)`, `v ∈ (δ, 1−δ)`.
    pub fn delta_core(delta: f64) -> Self {
        Self {
            u: (0.0, 1.0 - delta),
            v: (delta, 1.0 - delta),
        }
    }

    pub fn contains(&self, d: &DomainSpec, p: &Point2) -> bool {
        let v = p.z2.norm();
        if v <= 0.0 {
            return false;
        }
        let u = p.z1.norm() / v.powf(1.0 / d.exponent());
        u > self.u.0 && u < self.u.1 && v > self.v.0 && v < self.v.1
    }

    fn validate(&self) -> Result<()> {
        let ok = 0.0 <= self.u.0 && self.u.0 < self.u.1 && self.u.1 <= 1.0;
        let ok = ok && 0.0 <= self.v.0 && self.v.0 < self.v.1 && self.v.1 <= 1.0;
        if ok {
            Ok(())
        } else {
            Err(Error::invalid(format!("malformed integration box {self:?}")))
        }
    }
}

/// Exact `∫_{Ω_k} |z₁|^{m₁} |z₂|^{m₂} dV = 4π² / [(m₁+2)(m₂ + 2 + (m₁+2)/k)]`.
pub fn radial_moment(d: &DomainSpec, m1: f64, m2: f64) -> Result<f64> {
    let a = m1 + 2.0;
    if !(a > 0.0) {
        return Err(Error::DivergentMoment {
            m1,
            m2,
            condition: "m1 > -2",
        });
    }
    let b = m2 + 2.0 + a / d.exponent();
    if !(b > 0.0) {
        return Err(Error::DivergentMoment {
            m1,
            m2,
            condition: "m2 + 2 + (m1 + 2)/k > 0",
        });
    }
    Ok(4.0 * PI * PI / (a * b))
}

/// `∫ f dV` over the δ-core of `Ω_k`, `δ = spec.boundary_offset`.
pub fn integrate<F>(d: &DomainSpec, f: F, spec: &QuadratureSpec) -> Result<Estimate<Complex64>>
where
    F: Fn(&Point2) -> Result<Complex64> + Sync,
{
    integrate_box(d, f, &CoreBox::delta_core(spec.boundary_offset), spec)
}

/// Real-valued convenience wrapper around [`integrate`].
pub fn integrate_real<F>(d: &DomainSpec, f: F, spec: &QuadratureSpec) -> Result<Estimate<f64>>
where
    F: Fn(&Point2) -> Result<f64> + Sync,
{
    let e = integrate(d, |p| f(p).map(|x| Complex64::new(x, 0.0)), spec)?;
    Ok(Estimate {
        value: e.value.re,
        error: e.error,
    })
}

pub fn integrate_box<F>(
    d: &DomainSpec,
    f: F,
    region: &CoreBox,
    spec: &QuadratureSpec,
) -> Result<Estimate<Complex64>>
where
    F: Fn(&Point2) -> Result<Complex64> + Sync,
{
    let mut out = integrate_many(
        d,
        1,
        |p, acc: &mut [Complex64]| {
            acc[0] = f(p)?;
            Ok(())
        },
        region,
        spec,
    )?;
    Ok(out.remove(0))
}

/// Integrates `n_out` integrands at once; `f` writes their values at a
/// point into the slice it is given.
pub fn integrate_many<F>(
    d: &DomainSpec,
    n_out: usize,
    f: F,
    region: &CoreBox,
    spec: &QuadratureSpec,
) -> Result<Vec<Estimate<Complex64>>>
where
    F: Fn(&Point2, &mut [Complex64]) -> Result<()> + Sync,
{
    spec.validate()?;
    region.validate()?;
    match spec.strategy {
        Strategy::TensorPolar => {
            let fine = tensor_sum(d, n_out, &f, region, spec.radial_nodes, spec.angular_nodes, spec.grading)?;
            let coarse = tensor_sum(
                d,
                n_out,
                &f,
                region,
                (spec.radial_nodes / 2).max(2),
                (spec.angular_nodes / 2).max(2),
                spec.grading,
            )?;
            Ok(fine
                .into_iter()
                .zip(coarse)
                .map(|(a, b)| Estimate {
                    value: a,
                    error: (a - b).norm(),
                })
                .collect())
        }
        Strategy::MonteCarlo => mc::plain(d, n_out, &f, region, spec),
        Strategy::StratifiedMc => mc::stratified(d, n_out, &f, region, spec),
    }
}

fn radial_rule(lo: f64, hi: f64, n: usize, grading: RadialGrading) -> Rule {
    match grading {
        RadialGrading::Uniform => Rule::gauss(lo, hi, n),
        RadialGrading::Geometric => Rule::geometric_toward_lo(lo, hi, n),
    }
}

/// Tensor rule without an error estimate. Gauss–Legendre in `u` and
/// `x = v^{1/k}`, trapezoid in both angles.
pub(crate) fn tensor_sum<F>(
    d: &DomainSpec,
    n_out: usize,
    f: &F,
    region: &CoreBox,
    radial: usize,
    angular: usize,
    grading: RadialGrading,
) -> Result<Vec<Complex64>>
where
    F: Fn(&Point2, &mut [Complex64]) -> Result<()> + Sync,
{
    let k = d.exponent();
    let u_rule = radial_rule(region.u.0, region.u.1, radial, grading);
    let x_rule = radial_rule(region.v.0.powf(1.0 / k), region.v.1.powf(1.0 / k), radial, grading);
    let angles = Rule::trapezoid(angular);
    let phases: Vec<(Complex64, f64)> = angles
        .iter()
        .map(|(t, w)| (Complex64::from_polar(1.0, t), w))
        .collect();

    let cells: Vec<(f64, f64, f64, f64)> = u_rule
        .iter()
        .flat_map(|(u, wu)| x_rule.iter().map(move |(x, wx)| (u, wu, x, wx)))
        .collect();

    let partial: Vec<Result<Vec<Complex64>>> = cells
        .par_iter()
        .map(|&(u, wu, x, wx)| {
            let r1 = u * x;
            let r2 = x.powf(k);
            let jac = k * u * x.powf(2.0 * k + 1.0) * wu * wx;
            let mut acc = vec![Complex64::new(0.0, 0.0); n_out];
            let mut vals = vec![Complex64::new(0.0, 0.0); n_out];
            for &(e1, w1) in &phases {
                for &(e2, w2) in &phases {
                    let p = Point2::new(e1 * r1, e2 * r2);
                    f(&p, &mut vals).map_err(|e| Error::Integrand {
                        z1: p.z1,
                        z2: p.z2,
                        source: Box::new(e),
                    })?;
                    let w = w1 * w2;
                    for (a, v) in acc.iter_mut().zip(&vals) {
                        *a += v * w;
                    }
                }
            }
            for a in acc.iter_mut() {
                *a *= jac;
            }
            Ok(acc)
        })
        .collect();

    let mut columns = vec![Vec::with_capacity(cells.len()); n_out];
    for cell in partial {
        for (col, v) in columns.iter_mut().zip(cell?) {
            col.push(v);
        }
    }
    Ok(columns.iter().map(|c| pairwise_sum_complex(c)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn dom(k: f64) -> DomainSpec {
        DomainSpec::new(k).unwrap()
    }

    /// One-dimensional route to the same moment: the `r₁` integral is done
    /// by hand, the `r₂` integral by a fine composite rule.
    fn moment_by_radial_quadrature(k: f64, m1: f64, m2: f64) -> f64 {
        let r = Rule::geometric_toward_lo(0.0, 1.0, 20);
        let inner = |r2: f64| r2.powf((m1 + 2.0) / k) / (m1 + 2.0);
        4.0 * PI * PI * r.iter().map(|(r2, w)| w * r2.powf(m2 + 1.0) * inner(r2)).sum::<f64>()
    }

    #[test]
    fn moment_examples() {
        assert_relative_eq!(radial_moment(&dom(1.0), 0.0, -2.0).unwrap(), PI * PI, max_relative = 1e-15);
        assert_relative_eq!(radial_moment(&dom(2.0), 0.0, -2.0).unwrap(), 2.0 * PI * PI, max_relative = 1e-15);
        for k in [1.0, 2.0, 3.0, 1.5] {
            assert_relative_eq!(radial_moment(&dom(k), 0.0, 0.0).unwrap(), dom(k).volume(), max_relative = 1e-15);
        }
    }

    #[test]
    fn moment_matches_one_dimensional_quadrature() {
        for &(k, m1, m2) in &[(1.0, 0.0, -2.0), (2.0, 0.0, -2.0), (3.0, 1.5, -1.0), (1.5, -1.2, 0.7), (2.0, 4.0, -3.5)] {
            let exact = radial_moment(&dom(k), m1, m2).unwrap();
            assert_relative_eq!(exact, moment_by_radial_quadrature(k, m1, m2), max_relative = 1e-9);
        }
    }

    #[test]
    fn divergent_moments_name_the_condition() {
        match radial_moment(&dom(1.0), -2.0, 0.0) {
            Err(Error::DivergentMoment { condition, .. }) => assert_eq!(condition, "m1 > -2"),
            other => panic!("unexpected {other:?}"),
        }
        match radial_moment(&dom(1.0), 0.0, -4.0) {
            Err(Error::DivergentMoment { condition, .. }) => assert!(condition.starts_with("m2")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn moment_decreases_in_each_exponent() {
        let d = dom(2.0);
        let m = |a, b| radial_moment(&d, a, b).unwrap();
        for i in 0..10 {
            let a = -1.5 + 0.4 * i as f64;
            assert!(m(a + 0.1, 0.3) < m(a, 0.3));
            assert!(m(0.3, a + 0.1) < m(0.3, a));
        }
    }

    #[test]
    fn constant_integrand_converges_to_volume() {
        let d = dom(2.0);
        let mut prev_gap = f64::INFINITY;
        for delta in [1e-2, 1e-4, 1e-6] {
            let spec = QuadratureSpec::default().with_nodes(12, 2).with_offset(delta);
            let e = integrate_real(&d, |_| Ok(1.0), &spec).unwrap();
            let gap = (e.value - d.volume()).abs();
            assert!(gap < 10.0 * delta * d.volume() + e.error);
            assert!(gap < prev_gap);
            prev_gap = gap;
        }
    }

    #[test]
    fn monomial_against_moment() {
        // |z₁|²/|z₂| for k = 1
        let d = dom(1.0);
        let spec = QuadratureSpec::default().with_nodes(16, 2).with_offset(1e-12);
        let e = integrate_real(&d, |p| Ok(p.z1.norm_sqr() / p.z2.norm()), &spec).unwrap();
        let exact = radial_moment(&d, 2.0, -1.0).unwrap();
        assert_relative_eq!(e.value, exact, max_relative = 1e-4);
    }

    #[test]
    fn tensor_rule_is_exact_on_separable_monomials() {
        let spec = QuadratureSpec::default()
            .with_nodes(16, 2)
            .with_offset(1e-14)
            .with_grading(RadialGrading::Geometric);
        for &(k, m1, m2) in &[(1.0, 0.5, -1.5), (2.0, 3.0, -2.5), (3.0, 1.0, 2.0), (2.5, 0.0, -1.0)] {
            let d = dom(k);
            let e = integrate_real(&d, |p| Ok(p.z1.norm().powf(m1) * p.z2.norm().powf(m2)), &spec).unwrap();
            let exact = radial_moment(&d, m1, m2).unwrap();
            assert_relative_eq!(e.value, exact, max_relative = 1e-8);
        }
    }

    #[test]
    fn integrand_failures_carry_their_location() {
        let d = dom(1.0);
        let spec = QuadratureSpec::default().with_nodes(4, 2);
        let err = integrate(&d, |_| Err(Error::invalid("boom")), &spec).unwrap_err();
        assert!(matches!(err, Error::Integrand { .. }));
    }

    #[test]
    fn rejects_bad_specs() {
        let d = dom(1.0);
        let f = |_: &Point2| Ok(Complex64::new(1.0, 0.0));
        assert!(integrate(&d, f, &QuadratureSpec::default().with_offset(0.0)).is_err());
        assert!(integrate(&d, f, &QuadratureSpec::default().with_nodes(1, 4)).is_err());
    }
}
