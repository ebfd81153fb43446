//! The fat Hartogs triangle `Ω_k = {|z₁|^k < |z₂| < 1}` as a computable set.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponent `k` of the domain. Kernel formulas need an integer exponent;
/// geometry and the divergence scans accept any real `k >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DomainSpec {
    exponent: f64,
}

/// A point `(z₁, z₂)` of `ℂ²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub z1: Complex64,
    pub z2: Complex64,
}

impl Point2 {
    pub fn new(z1: Complex64, z2: Complex64) -> Self {
        Self { z1, z2 }
    }

    pub fn real(x1: f64, x2: f64) -> Self {
        Self::new(Complex64::new(x1, 0.0), Complex64::new(x2, 0.0))
    }

    /// Builds a point from polar data `(r₁, θ₁, r₂, θ₂)`.
    pub fn polar(r1: f64, theta1: f64, r2: f64, theta2: f64) -> Self {
        Self::new(Complex64::from_polar(r1, theta1), Complex64::from_polar(r2, theta2))
    }

    /// Applies the torus action `(z₁, z₂) ↦ (e^{iθ₁}z₁, e^{iθ₂}z₂)`.
    pub fn rotate(&self, theta1: f64, theta2: f64) -> Self {
        Self::new(
            self.z1 * Complex64::from_polar(1.0, theta1),
            self.z2 * Complex64::from_polar(1.0, theta2),
        )
    }
}

/// Which part of the boundary a [`DomainSpec::boundary_ladder`] approaches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stratum {
    /// `|z₂| → 1`.
    Outer,
    /// `|z₂| → |z₁|^k`.
    Inner,
    /// The singular point `(0, 0)`.
    Corner,
}

impl Stratum {
    pub const ALL: [Stratum; 3] = [Stratum::Outer, Stratum::Inner, Stratum::Corner];

    pub fn name(&self) -> &'static str {
        match self {
            Stratum::Outer => "outer",
            Stratum::Inner => "inner",
            Stratum::Corner => "corner",
        }
    }
}

impl DomainSpec {
    pub fn new(exponent: f64) -> Result<Self> {
        if !exponent.is_finite() || exponent < 1.0 {
            return Err(Error::InvalidExponent(exponent));
        }
        Ok(Self { exponent })
    }

    pub fn integer(k: u32) -> Result<Self> {
        Self::new(k as f64)
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn is_integer(&self) -> bool {
        self.exponent.fract() == 0.0
    }

    /// The exponent as an integer, or an error for non-integer `k`.
    pub fn integer_exponent(&self) -> Result<u32> {
        if self.is_integer() && self.exponent <= u32::MAX as f64 {
            Ok(self.exponent as u32)
        } else {
            Err(Error::NonIntegerExponent(self.exponent))
        }
    }

    /// Strict membership `|z₁|^k < |z₂| < 1`.
    pub fn contains(&self, p: &Point2) -> bool {
        let r2 = p.z2.norm();
        p.z1.norm().powf(self.exponent) < r2 && r2 < 1.0
    }

    /// Membership in the closure `|z₁|^k ≤ |z₂| ≤ 1`.
    pub fn contains_closed(&self, p: &Point2) -> bool {
        let r2 = p.z2.norm();
        p.z1.norm().powf(self.exponent) <= r2 && r2 <= 1.0
    }

    pub(crate) fn require_interior(&self, p: &Point2) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::NotInterior { z1: p.z1, z2: p.z2 })
        }
    }

    /// Lebesgue volume `π²k/(k+1)`.
    pub fn volume(&self) -> f64 {
        PI * PI * self.exponent / (self.exponent + 1.0)
    }

    /// Boundary gauge `h(z) = (|z₂|² − |z₁|^{2k})(1 − |z₂|²)`.
    ///
    /// Vanishes on the boundary and is positive inside; points outside the
    /// closed domain are rejected.
    pub fn aux_h(&self, p: &Point2) -> Result<f64> {
        if !self.contains_closed(p) {
            return Err(Error::OutsideDomain { z1: p.z1, z2: p.z2 });
        }
        let a = p.z2.norm_sqr();
        let b = p.z1.norm_sqr().powf(self.exponent);
        Ok(((a - b) * (1.0 - a)).max(0.0))
    }

    /// `n` i.i.d. uniform points, drawn by inverse-CDF sampling of the polar
    /// coordinates: `r₂` has density `∝ r₂^{1+2/k}`, `r₁²` is uniform on
    /// `[0, r₂^{2/k})`, angles are uniform.
    pub fn sample_uniform(&self, n: usize, seed: u64) -> Vec<Point2> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(n);
        while out.len() < n {
            let p = self.inverse_cdf_point(rng.gen(), rng.gen(), rng.gen(), rng.gen());
            if self.contains(&p) {
                out.push(p);
            }
        }
        out
    }

    /// Maps four uniforms in `[0, 1)` to a point of `Ω_k`; a uniform input
    /// yields a uniform output.
    pub(crate) fn inverse_cdf_point(&self, a: f64, b: f64, c: f64, d: f64) -> Point2 {
        let k = self.exponent;
        let r2 = a.powf(1.0 / (2.0 + 2.0 / k));
        let r1 = (b * r2.powf(2.0 / k)).sqrt();
        Point2::polar(r1, TAU * c, r2, TAU * d)
    }

    /// Uniform points by rejection from the bounding polydisc `D × D`.
    /// Slower than [`sample_uniform`](Self::sample_uniform); kept as an
    /// independent cross-check.
    pub fn sample_rejection(&self, n: usize, seed: u64) -> Vec<Point2> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(n);
        while out.len() < n {
            let p = Point2::new(unit_disc_point(&mut rng), unit_disc_point(&mut rng));
            if self.contains(&p) {
                out.push(p);
            }
        }
        out
    }

    /// Deterministic interior points approaching one boundary stratum; each
    /// level halves the relevant gap. Levels are numbered `j = 1..=levels`.
    ///
    /// * outer: `(0, 1 − 2^{−j})`
    /// * inner: `(1/2, 2^{−k} + 2^{−j−2})`, gap `|z₂| − |z₁|^k = 2^{−j−2}`
    /// * corner: `(0, 2^{−j})`
    pub fn boundary_ladder(&self, stratum: Stratum, levels: usize) -> Result<Vec<Point2>> {
        if levels < 2 {
            return Err(Error::invalid(format!("ladder needs at least 2 levels, got {levels}")));
        }
        let k = self.exponent;
        let pts = (1..=levels as i32)
            .map(|j| {
                let g = 2f64.powi(-j);
                match stratum {
                    Stratum::Outer => Point2::real(0.0, 1.0 - g),
                    Stratum::Inner => Point2::real(0.5, 0.5f64.powf(k) + g / 4.0),
                    Stratum::Corner => Point2::real(0.0, g),
                }
            })
            .collect();
        Ok(pts)
    }

    /// Gap of `p` to the given boundary stratum, as halved by the ladders.
    pub fn stratum_gap(&self, p: &Point2, stratum: Stratum) -> f64 {
        match stratum {
            Stratum::Outer => 1.0 - p.z2.norm(),
            Stratum::Inner => p.z2.norm() - p.z1.norm().powf(self.exponent),
            Stratum::Corner => p.z2.norm(),
        }
    }
}

fn unit_disc_point<R: Rng>(rng: &mut R) -> Complex64 {
    loop {
        let x: f64 = rng.gen_range(-1.0..1.0);
        let y: f64 = rng.gen_range(-1.0..1.0);
        if x * x + y * y < 1.0 {
            return Complex64::new(x, y);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn membership_examples() {
        let d2 = DomainSpec::integer(2).unwrap();
        assert!(d2.contains(&Point2::real(0.0, 0.5)));
        assert!(!d2.contains(&Point2::real(0.8, 0.5)));
        let d1 = DomainSpec::integer(1).unwrap();
        assert!(!d1.contains(&Point2::new(c(0.3, 0.0), c(0.0, 0.3))));
        assert!(d1.contains_closed(&Point2::new(c(0.3, 0.0), c(0.0, 0.3))));
    }

    #[test]
    fn exponent_validation() {
        assert!(DomainSpec::new(0.5).is_err());
        assert!(DomainSpec::new(f64::NAN).is_err());
        let d = DomainSpec::new(1.5).unwrap();
        assert!(!d.is_integer());
        assert_eq!(d.integer_exponent(), Err(Error::NonIntegerExponent(1.5)));
        assert_eq!(DomainSpec::integer(3).unwrap().integer_exponent(), Ok(3));
    }

    #[test]
    fn volume_closed_form() {
        assert_relative_eq!(DomainSpec::integer(1).unwrap().volume(), PI * PI / 2.0);
        assert_relative_eq!(DomainSpec::integer(2).unwrap().volume(), 2.0 * PI * PI / 3.0);
        // k → ∞ fills out D × D*
        let big = DomainSpec::new(1e9).unwrap().volume();
        assert_relative_eq!(big, PI * PI, max_relative = 1e-8);
    }

    #[test]
    fn aux_h_examples() {
        let d1 = DomainSpec::integer(1).unwrap();
        let d2 = DomainSpec::integer(2).unwrap();
        assert_eq!(d1.aux_h(&Point2::real(0.0, 1.0)).unwrap(), 0.0);
        assert_relative_eq!(d1.aux_h(&Point2::real(0.0, 0.5f64.sqrt())).unwrap(), 0.25, epsilon = 1e-15);
        assert_relative_eq!(d2.aux_h(&Point2::real(0.5, 0.5)).unwrap(), 9.0 / 64.0, epsilon = 1e-15);
        assert!(matches!(
            d2.aux_h(&Point2::real(0.9, 0.5)),
            Err(Error::OutsideDomain { .. })
        ));
        assert_eq!(d1.aux_h(&Point2::real(0.5, 0.5)).unwrap(), 0.0);
    }

    #[test]
    fn aux_h_on_the_slice_z1_zero_peaks_at_inverse_sqrt_two() {
        let d = DomainSpec::integer(3).unwrap();
        let peak = d.aux_h(&Point2::real(0.0, 0.5f64.sqrt())).unwrap();
        for i in 1..100 {
            let r = i as f64 / 100.0;
            assert!(d.aux_h(&Point2::real(0.0, r)).unwrap() <= peak + 1e-15);
        }
    }

    #[test]
    fn samplers_are_deterministic_and_interior() {
        for k in [1.0, 2.0, 2.5] {
            let d = DomainSpec::new(k).unwrap();
            let a = d.sample_uniform(500, 7);
            assert_eq!(a, d.sample_uniform(500, 7));
            assert_ne!(a, d.sample_uniform(500, 8));
            assert!(a.iter().all(|p| d.contains(p)));
            let b = d.sample_rejection(200, 7);
            assert!(b.iter().all(|p| d.contains(p)));
        }
    }

    #[test]
    fn ladders() {
        let d1 = DomainSpec::integer(1).unwrap();
        let outer = d1.boundary_ladder(Stratum::Outer, 5).unwrap();
        for (j, p) in outer.iter().enumerate() {
            assert_eq!(1.0 - p.z2.norm(), 2f64.powi(-(j as i32 + 1)));
        }
        let inner = d1.boundary_ladder(Stratum::Inner, 6).unwrap();
        assert!(inner.iter().all(|p| d1.contains(p)));
        let gaps: Vec<f64> = inner.iter().map(|p| d1.stratum_gap(p, Stratum::Inner)).collect();
        for w in gaps.windows(2) {
            assert_relative_eq!(w[1], w[0] / 2.0, max_relative = 1e-12);
        }
        let d2 = DomainSpec::integer(2).unwrap();
        let corner = d2.boundary_ladder(Stratum::Corner, 10).unwrap();
        let hs: Vec<f64> = corner.iter().map(|p| d2.aux_h(p).unwrap()).collect();
        assert!(hs.windows(2).all(|w| w[1] < w[0]));
        assert!(hs.last().unwrap() < &1e-5);
        assert!(d2.boundary_ladder(Stratum::Corner, 1).is_err());
    }
}
