//! The Bergman kernel of `Ω_k` for integer `k`:
//!
//! `B_k(z, w) = [p_k(s) t² + q_k(s) t + s^k p_k(s)] / [kπ² (1−t)² (t − s^k)²]`
//!
//! with `s = z₁ w̄₁`, `t = z₂ w̄₂`, evaluated in closed form, as a truncated
//! sum over the monomial basis, and through the dominating bound
//! `|t| / (|1−t|² |t − s^k|²)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{DomainSpec, Point2};
use crate::quadrature::radial_moment;

/// Default floor on `|1 − t|` and `|t − s^k|`.
pub const NEAR_SINGULAR_FLOOR: f64 = 1e-12;

/// Coefficients of `p_k`, lowest degree first.
pub fn p_coefficients(k: u32) -> Vec<i64> {
    let k = k as i64;
    (1..k).map(|n| n * (k - n)).collect()
}

/// Coefficients of `q_k` (degree `2k − 1`), lowest degree first. The term
/// `n² s^{n−1}` sits at index `n − 1` and `(k−n)² s^{k+n−1}` at `k + n − 1`.
pub fn q_coefficients(k: u32) -> Vec<i64> {
    let k = k as i64;
    let mut c = vec![0i64; 2 * k as usize];
    for n in 1..=k {
        c[(n - 1) as usize] += n * n;
        c[(k + n - 1) as usize] += (k - n) * (k - n);
    }
    c
}

fn horner(coeffs: &[i64], s: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * s + c as f64)
}

/// `p_k(s) = Σ_{n=1}^{k−1} n(k−n) s^{n−1}`; zero for `k = 1`.
pub fn poly_p(k: u32, s: Complex64) -> Complex64 {
    horner(&p_coefficients(k), s)
}

/// `q_k(s) = Σ_{n=1}^{k} (n² + (k−n)² s^k) s^{n−1}`.
pub fn poly_q(k: u32, s: Complex64) -> Complex64 {
    horner(&q_coefficients(k), s)
}

/// The pair `(s, t) = (z₁ w̄₁, z₂ w̄₂)` on which the kernel depends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelArgs {
    pub s: Complex64,
    pub t: Complex64,
}

impl KernelArgs {
    pub fn new(z: &Point2, w: &Point2) -> Self {
        Self {
            s: z.z1 * w.z1.conj(),
            t: z.z2 * w.z2.conj(),
        }
    }
}

/// Exponent pair `α = (α₁, α₂)` of the monomial `z₁^{α₁} z₂^{α₂}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiIndex {
    pub a1: i64,
    pub a2: i64,
}

impl MultiIndex {
    pub const fn new(a1: i64, a2: i64) -> Self {
        Self { a1, a2 }
    }

    /// Membership in `A_k = {α₁ ≥ 0, α₁ + k(α₂ + 1) > −1}`.
    pub fn in_index_set(&self, k: u32) -> bool {
        self.a1 >= 0 && self.a1 + k as i64 * (self.a2 + 1) > -1
    }

    /// Shell weight `α₁ + k|α₂ + 1|` used to order the series.
    pub fn weight(&self, k: u32) -> i64 {
        self.a1.abs() + k as i64 * (self.a2 + 1).abs()
    }

    /// Every member of `A_k` with weight at most `max_weight`, ordered by
    /// weight, then `α₁`, then `α₂`.
    pub fn enumerate(k: u32, max_weight: i64) -> Vec<MultiIndex> {
        let kk = k as i64;
        let mut out = Vec::new();
        for a1 in 0..=max_weight {
            let spread = (max_weight - a1) / kk;
            for m in -spread..=spread {
                let a = MultiIndex::new(a1, m - 1);
                if a.in_index_set(k) {
                    out.push(a);
                }
            }
        }
        out.sort_by_key(|a| (a.weight(k), a.a1, a.a2));
        out
    }

    /// `z^α` at a point.
    pub fn monomial(&self, p: &Point2) -> Complex64 {
        p.z1.powi(self.a1 as i32) * p.z2.powi(self.a2 as i32)
    }
}

/// Squared norm `c²_{k,α} = ‖z^α‖²_{L²(Ω_k)} = ∫ |z₁|^{2α₁} |z₂|^{2α₂} dV`.
pub fn basis_norm_sq(d: &DomainSpec, alpha: MultiIndex) -> Result<f64> {
    radial_moment(d, 2.0 * alpha.a1 as f64, 2.0 * alpha.a2 as f64)
}

/// Truncation control for [`kernel_series`]: summation stops once the last
/// `k` weight shells together contribute at most `tolerance` relative to
/// the running sum, and fails if that has not happened by `max_degree`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesSpec {
    pub max_degree: u32,
    pub tolerance: f64,
}

impl Default for SeriesSpec {
    fn default() -> Self {
        Self {
            max_degree: 1000,
            tolerance: 1e-13,
        }
    }
}

impl SeriesSpec {
    pub fn validate(&self) -> Result<()> {
        if self.tolerance > 0.0 {
            Ok(())
        } else {
            Err(Error::invalid(format!("series tolerance must be positive, got {}", self.tolerance)))
        }
    }
}

/// Result of a series evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesValue {
    pub value: Complex64,
    /// Sum of term magnitudes over the last `k` shells.
    pub last_shell: f64,
    /// Highest weight included.
    pub degree: u32,
}

/// One basis term, written through `α₁ = kj + r`, `n = j + α₂ + 1`: its
/// contribution is `s^r x^j t^n / t / c²` with `x = s^k / t`.
#[derive(Debug, Clone, Copy)]
struct Term {
    j: u32,
    n: u32,
    inv_norm: f64,
}

/// The orthonormal-series evaluator for one exponent, with `1/c²` tabulated
/// up to `max_degree`.
#[derive(Debug, Clone)]
pub struct SeriesEvaluator {
    k: u32,
    spec: SeriesSpec,
    /// `shells[W]` holds the terms of weight `W`; `r = W mod k`.
    shells: Vec<Vec<Term>>,
}

impl SeriesEvaluator {
    pub fn new(d: &DomainSpec, spec: SeriesSpec) -> Result<Self> {
        let k = d.integer_exponent()?;
        spec.validate()?;
        let kk = k as i64;
        let mut shells = Vec::with_capacity(spec.max_degree as usize + 1);
        for w in 0..=spec.max_degree as i64 {
            let (l, r) = (w / kk, w % kk);
            let mut terms = Vec::new();
            for j in 0..=l {
                let mut ns = vec![l];
                if 2 * j - l >= 0 && j < l {
                    ns.push(2 * j - l);
                }
                for n in ns {
                    let alpha = MultiIndex::new(kk * j + r, n - j - 1);
                    debug_assert!(alpha.in_index_set(k) && alpha.weight(k) == w);
                    terms.push(Term {
                        j: j as u32,
                        n: n as u32,
                        inv_norm: 1.0 / basis_norm_sq(d, alpha)?,
                    });
                }
            }
            shells.push(terms);
        }
        Ok(Self { k, spec, shells })
    }

    pub fn spec(&self) -> &SeriesSpec {
        &self.spec
    }

    pub fn evaluate(&self, z: &Point2, w: &Point2) -> Result<SeriesValue> {
        let d = DomainSpec::integer(self.k)?;
        d.require_interior(z)?;
        d.require_interior(w)?;
        self.evaluate_args(KernelArgs::new(z, w))
    }

    /// Sums the series at `(s, t)`, assuming `|s|^k < |t| < 1`.
    pub fn evaluate_args(&self, a: KernelArgs) -> Result<SeriesValue> {
        let k = self.k as usize;
        let x = a.s.powu(self.k) / a.t;
        let inv_t = 1.0 / a.t;
        let s_pow: Vec<Complex64> = (0..k).map(|r| a.s.powu(r as u32)).collect();
        let max_l = self.spec.max_degree as usize / k + 1;
        let mut x_pow = Vec::with_capacity(max_l + 1);
        let mut t_pow = Vec::with_capacity(max_l + 1);
        let (mut xp, mut tp) = (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0));
        for _ in 0..=max_l {
            x_pow.push(xp);
            t_pow.push(tp);
            xp *= x;
            tp *= a.t;
        }

        let mut sum = Complex64::new(0.0, 0.0);
        let mut band = std::collections::VecDeque::with_capacity(k);
        for (w, terms) in self.shells.iter().enumerate() {
            let r = w % k;
            let mut shell = Complex64::new(0.0, 0.0);
            let mut mag = 0.0;
            for term in terms {
                let v = x_pow[term.j as usize] * t_pow[term.n as usize] * term.inv_norm;
                shell += v;
                mag += v.norm();
            }
            let scale = (s_pow[r] * inv_t).norm();
            sum += shell * s_pow[r] * inv_t;
            if band.len() == k {
                band.pop_front();
            }
            band.push_back(mag * scale);
            if band.len() == k && w >= 2 * k {
                let last: f64 = band.iter().sum();
                if last <= self.spec.tolerance * sum.norm() {
                    return Ok(SeriesValue {
                        value: sum,
                        last_shell: last,
                        degree: w as u32,
                    });
                }
            }
        }
        Err(Error::SeriesNotConverged {
            degree: self.spec.max_degree,
            last_shell: band.iter().sum(),
            tolerance: self.spec.tolerance,
        })
    }
}

/// Closed-form kernel evaluator for one integer exponent.
#[derive(Debug, Clone)]
pub struct BergmanKernel {
    domain: DomainSpec,
    k: u32,
    p: Vec<i64>,
    q: Vec<i64>,
    floor: f64,
}

impl BergmanKernel {
    pub fn new(d: &DomainSpec) -> Result<Self> {
        let k = d.integer_exponent()?;
        Ok(Self {
            domain: *d,
            k,
            p: p_coefficients(k),
            q: q_coefficients(k),
            floor: NEAR_SINGULAR_FLOOR,
        })
    }

    pub fn with_floor(mut self, floor: f64) -> Self {
        self.floor = floor;
        self
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    pub fn exponent(&self) -> u32 {
        self.k
    }

    /// `p_k(s)` and `q_k(s)` from the cached coefficient tables.
    pub(crate) fn polys(&self, s: Complex64) -> (Complex64, Complex64) {
        (horner(&self.p, s), horner(&self.q, s))
    }

    fn denominators(&self, a: &KernelArgs) -> Result<(Complex64, Complex64, Complex64)> {
        let sk = a.s.powu(self.k);
        let one_minus_t = 1.0 - a.t;
        let t_minus_sk = a.t - sk;
        if one_minus_t.norm() < self.floor {
            return Err(Error::NearSingular {
                factor: "1 - t",
                magnitude: one_minus_t.norm(),
                floor: self.floor,
            });
        }
        if t_minus_sk.norm() < self.floor {
            return Err(Error::NearSingular {
                factor: "t - s^k",
                magnitude: t_minus_sk.norm(),
                floor: self.floor,
            });
        }
        Ok((sk, one_minus_t, t_minus_sk))
    }

    /// Closed form at `(s, t)` without an interior check.
    pub fn closed_args(&self, a: KernelArgs) -> Result<Complex64> {
        let (sk, u, v) = self.denominators(&a)?;
        let p = horner(&self.p, a.s);
        let q = horner(&self.q, a.s);
        let num = p * a.t * a.t + q * a.t + sk * p;
        let den = self.k as f64 * PI * PI * (u * u) * (v * v);
        Ok(num / den)
    }

    pub fn closed(&self, z: &Point2, w: &Point2) -> Result<Complex64> {
        self.domain.require_interior(z)?;
        self.domain.require_interior(w)?;
        self.closed_args(KernelArgs::new(z, w))
    }

    /// `|t| / (|1−t|² |t − s^k|²)` without an interior check.
    pub fn bound_args(&self, a: KernelArgs) -> Result<f64> {
        let (_, u, v) = self.denominators(&a)?;
        Ok(a.t.norm() / (u.norm_sqr() * v.norm_sqr()))
    }

    pub fn bound(&self, z: &Point2, w: &Point2) -> Result<f64> {
        self.domain.require_interior(z)?;
        self.domain.require_interior(w)?;
        self.bound_args(KernelArgs::new(z, w))
    }
}

pub fn kernel_closed(d: &DomainSpec, z: &Point2, w: &Point2) -> Result<Complex64> {
    BergmanKernel::new(d)?.closed(z, w)
}

/// Single evaluation of the truncated series. Builds the coefficient
/// table on every call; use [`SeriesEvaluator`] for repeated evaluation.
pub fn kernel_series(d: &DomainSpec, z: &Point2, w: &Point2, spec: SeriesSpec) -> Result<SeriesValue> {
    SeriesEvaluator::new(d, spec)?.evaluate(z, w)
}

pub fn kernel_bound(d: &DomainSpec, z: &Point2, w: &Point2) -> Result<f64> {
    BergmanKernel::new(d)?.bound(z, w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Direct evaluation of the defining sums.
    fn p_by_sum(k: u32, s: Complex64) -> Complex64 {
        (1..k).map(|n| (n * (k - n)) as f64 * s.powu(n - 1)).sum()
    }

    fn q_by_sum(k: u32, s: Complex64) -> Complex64 {
        (1..=k)
            .map(|n| ((n * n) as f64 + ((k - n) * (k - n)) as f64 * s.powu(k)) * s.powu(n - 1))
            .sum()
    }

    #[test]
    fn polynomial_examples() {
        let s = c(0.3, -0.7);
        assert_eq!(poly_p(1, s), c(0.0, 0.0));
        assert_eq!(poly_p(2, s), c(1.0, 0.0));
        assert_relative_eq!((poly_p(3, s) - (2.0 + 2.0 * s)).norm(), 0.0, epsilon = 1e-15);
        assert_eq!(poly_q(1, s), c(1.0, 0.0));
        assert_relative_eq!((poly_q(2, s) - (1.0 + 4.0 * s + s * s)).norm(), 0.0, epsilon = 1e-15);
        assert_eq!(poly_q(2, c(0.0, 0.0)), c(1.0, 0.0));
    }

    #[test]
    fn horner_matches_defining_sums() {
        for k in 1..=8 {
            for s in [c(0.5, 0.1), c(-0.9, 0.3), c(0.0, 1.0)] {
                assert_relative_eq!((poly_p(k, s) - p_by_sum(k, s)).norm(), 0.0, epsilon = 1e-11);
                assert_relative_eq!((poly_q(k, s) - q_by_sum(k, s)).norm(), 0.0, epsilon = 1e-11);
            }
        }
    }

    #[test]
    fn closed_form_examples() {
        let z = Point2::real(0.0, 0.5);
        let d1 = DomainSpec::integer(1).unwrap();
        let d2 = DomainSpec::integer(2).unwrap();
        assert_relative_eq!(kernel_closed(&d1, &z, &z).unwrap().re, 64.0 / (9.0 * PI * PI), max_relative = 1e-14);
        // s = 0, t = 1/4: (t² + t) / (2π² (1−t)² t²)
        assert_relative_eq!(kernel_closed(&d2, &z, &z).unwrap().re, 40.0 / (9.0 * PI * PI), max_relative = 1e-14);
        assert_relative_eq!(kernel_bound(&d1, &z, &z).unwrap(), 64.0 / 9.0, max_relative = 1e-14);
    }

    #[test]
    fn series_example() {
        let d1 = DomainSpec::integer(1).unwrap();
        let z = Point2::real(0.0, 0.5);
        let spec = SeriesSpec { max_degree: 60, tolerance: 1e-14 };
        let v = kernel_series(&d1, &z, &z, spec).unwrap();
        assert_relative_eq!(v.value.re, 64.0 / (9.0 * PI * PI), max_relative = 1e-6);
        assert!(v.last_shell < 1e-12);
    }

    #[test]
    fn series_matches_closed_form_off_diagonal() {
        for k in 1..=4 {
            let d = DomainSpec::integer(k).unwrap();
            let kern = BergmanKernel::new(&d).unwrap();
            let ev = SeriesEvaluator::new(&d, SeriesSpec::default()).unwrap();
            let z = Point2::new(c(0.3, 0.2), c(0.4, 0.5));
            let w = Point2::new(c(-0.2, 0.5), c(0.1, -0.7));
            let a = kern.closed(&z, &w).unwrap();
            let b = ev.evaluate(&z, &w).unwrap().value;
            assert_relative_eq!((a - b).norm() / a.norm(), 0.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn series_reports_non_convergence() {
        let d = DomainSpec::integer(1).unwrap();
        let z = Point2::real(0.0, 0.99);
        let err = kernel_series(&d, &z, &z, SeriesSpec { max_degree: 10, tolerance: 1e-12 }).unwrap_err();
        assert!(matches!(err, Error::SeriesNotConverged { degree: 10, .. }));
    }

    #[test]
    fn basis_norm_closed_form() {
        for k in 1..=4u32 {
            let d = DomainSpec::integer(k).unwrap();
            for a in MultiIndex::enumerate(k, 8) {
                let kf = k as f64;
                let (a1, a2) = (a.a1 as f64, a.a2 as f64);
                let expect = PI * PI * kf / ((a1 + 1.0) * (a1 + 1.0 + kf * (a2 + 1.0)));
                assert_relative_eq!(basis_norm_sq(&d, a).unwrap(), expect, max_relative = 1e-14);
            }
        }
    }

    #[test]
    fn index_set_membership() {
        for k in 1..=5 {
            assert!(MultiIndex::new(0, -1).in_index_set(k));
            assert!(!MultiIndex::new(-1, 3).in_index_set(k));
        }
        assert!(!MultiIndex::new(0, -2).in_index_set(1));
        assert!(MultiIndex::new(3, -2).in_index_set(3));
        assert!(!MultiIndex::new(2, -2).in_index_set(3));
    }

    #[test]
    fn enumeration_is_complete_and_ordered() {
        let k = 2;
        let all = MultiIndex::enumerate(k, 6);
        let mut brute = Vec::new();
        for a1 in 0..=10 {
            for a2 in -10..=10 {
                let a = MultiIndex::new(a1, a2);
                if a.in_index_set(k) && a.weight(k) <= 6 {
                    brute.push(a);
                }
            }
        }
        assert_eq!(all.len(), brute.len());
        assert!(all.windows(2).all(|w| w[0].weight(k) <= w[1].weight(k)));
    }

    #[test]
    fn near_singular_floor() {
        let d = DomainSpec::integer(1).unwrap();
        let kern = BergmanKernel::new(&d).unwrap();
        let err = kern.closed_args(KernelArgs { s: c(0.1, 0.0), t: c(1.0, 0.0) }).unwrap_err();
        assert!(matches!(err, Error::NearSingular { factor: "1 - t", .. }));
        let err = kern.bound_args(KernelArgs { s: c(0.5, 0.0), t: c(0.5, 0.0) }).unwrap_err();
        assert!(matches!(err, Error::NearSingular { factor: "t - s^k", .. }));
    }

    #[test]
    fn rejects_exterior_points_and_fractional_exponents() {
        let d = DomainSpec::integer(2).unwrap();
        let inside = Point2::real(0.1, 0.5);
        let outside = Point2::real(0.9, 0.5);
        assert!(matches!(kernel_closed(&d, &outside, &inside), Err(Error::NotInterior { .. })));
        let frac = DomainSpec::new(1.5).unwrap();
        assert!(matches!(kernel_closed(&frac, &inside, &inside), Err(Error::NonIntegerExponent(_))));
    }
}
