//! Monte Carlo over a [`CoreBox`]: inverse-CDF sampling in `(u, x = v^{1/k})`,
//! where the volume density factors as `u · x^{2k+1}`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::rules::pairwise_sum_complex;
use super::{CoreBox, Estimate, QuadratureSpec};
use crate::error::{Error, Result};
use crate::geometry::{DomainSpec, Point2};

#[derive(Clone, Copy)]
struct BoxSampler {
    k: f64,
    u2: (f64, f64),
    // x^{2k+2} = v^{2+2/k}
    y: (f64, f64),
    measure: f64,
}

impl BoxSampler {
    fn new(d: &DomainSpec, b: &CoreBox) -> Self {
        let k = d.exponent();
        let e = 2.0 + 2.0 / k;
        let u2 = (b.u.0 * b.u.0, b.u.1 * b.u.1);
        let y = (b.v.0.powf(e), b.v.1.powf(e));
        let measure = TAU * TAU * 0.5 * (u2.1 - u2.0) * k / (2.0 * k + 2.0) * (y.1 - y.0);
        Self { k, u2, y, measure }
    }

    fn point(&self, a: f64, b: f64, c: f64, d: f64) -> Point2 {
        let u = (self.u2.0 + a * (self.u2.1 - self.u2.0)).sqrt();
        let v = (self.y.0 + b * (self.y.1 - self.y.0)).powf(1.0 / (2.0 + 2.0 / self.k));
        Point2::polar(u * v.powf(1.0 / self.k), TAU * c, v, TAU * d)
    }
}

/// Points per block: each block is reduced with a two-pass mean and sum of
/// squares, and blocks are merged with the parallel-variance update, so memory
/// stays bounded for long runs.
const BLOCK: usize = 1 << 16;

/// Sample mean and variance of the mean, per output.
struct Moments {
    mean: Vec<Complex64>,
    var_of_mean: Vec<f64>,
}

#[derive(Clone, Copy)]
struct Acc {
    n: f64,
    mean: Complex64,
    m2: f64,
}

impl Acc {
    fn merge(self, o: Acc) -> Acc {
        if self.n == 0.0 {
            return o;
        }
        let n = self.n + o.n;
        let delta = o.mean - self.mean;
        Acc {
            n,
            mean: self.mean + delta * (o.n / n),
            m2: self.m2 + o.m2 + delta.norm_sqr() * self.n * o.n / n,
        }
    }
}

fn block_acc(c: &[Complex64]) -> Acc {
    let n = c.len() as f64;
    let mean = pairwise_sum_complex(c) / n;
    let m2 = c.iter().map(|v| (v - mean).norm_sqr()).sum();
    Acc { n, mean, m2 }
}

fn moments<F>(
    n_out: usize,
    f: &F,
    points: impl Iterator<Item = Point2>,
    n: usize,
) -> Result<Moments>
where
    F: Fn(&Point2, &mut [Complex64]) -> Result<()>,
{
    let mut vals = vec![Complex64::new(0.0, 0.0); n_out];
    let mut cols: Vec<Vec<Complex64>> = vec![Vec::with_capacity(n.min(BLOCK)); n_out];
    let empty = Acc {
        n: 0.0,
        mean: Complex64::new(0.0, 0.0),
        m2: 0.0,
    };
    let mut acc = vec![empty; n_out];
    let flush = |cols: &mut Vec<Vec<Complex64>>, acc: &mut Vec<Acc>| {
        for (c, a) in cols.iter_mut().zip(acc.iter_mut()) {
            if !c.is_empty() {
                *a = a.merge(block_acc(c));
                c.clear();
            }
        }
    };
    for p in points {
        f(&p, &mut vals).map_err(|e| Error::Integrand {
            z1: p.z1,
            z2: p.z2,
            source: Box::new(e),
        })?;
        for (c, v) in cols.iter_mut().zip(&vals) {
            c.push(*v);
        }
        if cols.first().is_some_and(|c| c.len() == BLOCK) {
            flush(&mut cols, &mut acc);
        }
    }
    flush(&mut cols, &mut acc);
    let nf = n as f64;
    let mean = acc.iter().map(|a| a.mean).collect();
    let var_of_mean = acc
        .iter()
        .map(|a| if n < 2 { f64::INFINITY } else { a.m2 / (nf - 1.0) / nf })
        .collect();
    Ok(Moments { mean, var_of_mean })
}

pub(super) fn plain<F>(
    d: &DomainSpec,
    n_out: usize,
    f: &F,
    region: &CoreBox,
    spec: &QuadratureSpec,
) -> Result<Vec<Estimate<Complex64>>>
where
    F: Fn(&Point2, &mut [Complex64]) -> Result<()> + Sync,
{
    let s = BoxSampler::new(d, region);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = spec.mc_samples;
    let pts = (0..n).map(|_| s.point(rng.gen(), rng.gen(), rng.gen(), rng.gen()));
    let m = moments(n_out, f, pts, n)?;
    Ok(m
        .mean
        .iter()
        .zip(&m.var_of_mean)
        .map(|(mu, var)| Estimate {
            value: mu * s.measure,
            error: var.sqrt() * s.measure,
        })
        .collect())
}

/// `G × G` equal-measure strata in the two radial uniforms; each stratum
/// draws from its own ChaCha stream so the result does not depend on the
/// number of worker threads.
pub(super) fn stratified<F>(
    d: &DomainSpec,
    n_out: usize,
    f: &F,
    region: &CoreBox,
    spec: &QuadratureSpec,
) -> Result<Vec<Estimate<Complex64>>>
where
    F: Fn(&Point2, &mut [Complex64]) -> Result<()> + Sync,
{
    let s = BoxSampler::new(d, region);
    let g = ((spec.mc_samples as f64 / 4.0).sqrt().floor() as usize).max(1);
    let per = (spec.mc_samples / (g * g)).max(2);
    let cells: Vec<(usize, usize)> = (0..g).flat_map(|i| (0..g).map(move |j| (i, j))).collect();
    let gf = g as f64;
    let parts: Vec<Result<Moments>> = cells
        .par_iter()
        .enumerate()
        .map(|(idx, &(i, j))| {
            let s = &s;
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            rng.set_stream(idx as u64 + 1);
            let pts = (0..per).map(move |_| {
                let a = (i as f64 + rng.gen::<f64>()) / gf;
                let b = (j as f64 + rng.gen::<f64>()) / gf;
                s.point(a, b, rng.gen(), rng.gen())
            });
            moments(n_out, f, pts, per)
        })
        .collect();
    let parts = parts.into_iter().collect::<Result<Vec<_>>>()?;
    let w = s.measure / (gf * gf);
    Ok((0..n_out)
        .map(|o| {
            let vals: Vec<Complex64> = parts.iter().map(|m| m.mean[o] * w).collect();
            let var: f64 = parts.iter().map(|m| m.var_of_mean[o] * w * w).sum();
            Estimate {
                value: pairwise_sum_complex(&vals),
                error: var.sqrt(),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate_real, radial_moment, Strategy};

    #[test]
    fn box_measure_matches_volume() {
        for k in [1.0, 2.0, 3.5] {
            let d = DomainSpec::new(k).unwrap();
            let s = BoxSampler::new(&d, &CoreBox { u: (0.0, 1.0), v: (0.0, 1.0) });
            approx::assert_relative_eq!(s.measure, d.volume(), max_relative = 1e-14);
        }
    }

    #[test]
    fn samples_stay_in_box() {
        let d = DomainSpec::integer(2).unwrap();
        let b = CoreBox { u: (0.2, 0.6), v: (0.3, 0.5) };
        let s = BoxSampler::new(&d, &b);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let p = s.point(rng.gen(), rng.gen(), rng.gen(), rng.gen());
            assert!(d.contains(&p));
            let v = p.z2.norm();
            let u = p.z1.norm() / v.sqrt();
            assert!((0.2..=0.6).contains(&(u + 1e-12)) && (0.3 - 1e-12..=0.5 + 1e-12).contains(&v));
        }
    }

    #[test]
    fn mc_strategies_bracket_a_moment() {
        let d = DomainSpec::integer(2).unwrap();
        let exact = radial_moment(&d, 2.0, 1.0).unwrap();
        for strategy in [Strategy::MonteCarlo, Strategy::StratifiedMc] {
            let spec = QuadratureSpec {
                strategy,
                mc_samples: 40_000,
                seed: 3,
                ..QuadratureSpec::default()
            };
            let e = integrate_real(&d, |p| Ok(p.z1.norm_sqr() * p.z2.norm()), &spec).unwrap();
            assert!((e.value - exact).abs() < 4.0 * e.error, "{strategy:?}: {} vs {exact} ± {}", e.value, e.error);
            let again = integrate_real(&d, |p| Ok(p.z1.norm_sqr() * p.z2.norm()), &spec).unwrap();
            assert_eq!(e, again);
        }
    }
}
