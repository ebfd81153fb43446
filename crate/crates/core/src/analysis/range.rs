//! The `L^p` range of the projection and the Schur-test algebra behind it.

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::DomainSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RangeSource {
    TheoremFormula,
    SchurAlgebra,
    EmpiricalScan,
}

/// Open interval `(p_low, p_high)` of exponents.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RangeReport {
    pub p_low: f64,
    pub p_high: f64,
    pub source: RangeSource,
}

impl RangeReport {
    pub fn contains(&self, p: f64) -> bool {
        self.p_low < p && p < self.p_high
    }

    /// `1/p_low + 1/p_high − 1`, zero up to rounding.
    pub fn conjugacy_defect(&self) -> f64 {
        1.0 / self.p_low + 1.0 / self.p_high - 1.0
    }
}

/// `((2k+2)/(k+2), (2k+2)/k)`.
pub fn critical_range(d: &DomainSpec) -> RangeReport {
    let k = d.exponent();
    RangeReport {
        p_low: (2.0 * k + 2.0) / (k + 2.0),
        p_high: (2.0 * k + 2.0) / k,
        source: RangeSource::TheoremFormula,
    }
}

/// `((a+b)/b, (a+b)/a)` for `0 < a < b`.
pub fn schur_range(a: f64, b: f64) -> Result<RangeReport> {
    if !(a > 0.0 && a < b && b.is_finite()) {
        return Err(Error::invalid(format!("Schur exponents need 0 < a < b, got a = {a}, b = {b}")));
    }
    Ok(RangeReport {
        p_low: (a + b) / b,
        p_high: (a + b) / a,
        source: RangeSource::SchurAlgebra,
    })
}

/// Canonical Schur exponents `a = 1/2`, `b = (k+2)/(2k)`.
pub fn canonical_schur_exponents(d: &DomainSpec) -> (f64, f64) {
    let k = d.exponent();
    (0.5, (k + 2.0) / (2.0 * k))
}

/// [`critical_range`] in exact rational arithmetic.
pub fn critical_range_exact(k: u32) -> Result<(Rational64, Rational64)> {
    if k == 0 {
        return Err(Error::InvalidExponent(0.0));
    }
    let k = Rational64::from_integer(k as i64);
    let two = Rational64::from_integer(2);
    Ok(((two * k + two) / (k + two), (two * k + two) / k))
}

/// [`schur_range`] in exact rational arithmetic.
pub fn schur_range_exact(a: Rational64, b: Rational64) -> Result<(Rational64, Rational64)> {
    if !(a > Rational64::from_integer(0) && a < b) {
        return Err(Error::invalid(format!("Schur exponents need 0 < a < b, got a = {a}, b = {b}")));
    }
    Ok(((a + b) / b, (a + b) / a))
}

/// `(1/2, (k+2)/(2k))` exactly.
pub fn canonical_schur_exponents_exact(k: u32) -> Result<(Rational64, Rational64)> {
    if k == 0 {
        return Err(Error::InvalidExponent(0.0));
    }
    let k = k as i64;
    Ok((Rational64::new(1, 2), Rational64::new(k + 2, 2 * k)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn examples() {
        let r1 = critical_range(&DomainSpec::integer(1).unwrap());
        assert_relative_eq!(r1.p_low, 4.0 / 3.0);
        assert_relative_eq!(r1.p_high, 4.0);
        let r2 = critical_range(&DomainSpec::integer(2).unwrap());
        assert_relative_eq!(r2.p_low, 1.5);
        assert_relative_eq!(r2.p_high, 3.0);
        let big = critical_range(&DomainSpec::new(1e12).unwrap());
        assert_relative_eq!(big.p_low, 2.0, epsilon = 1e-11);
        assert_relative_eq!(big.p_high, 2.0, epsilon = 1e-11);
        let s = schur_range(1.0, 2.0).unwrap();
        assert_relative_eq!(s.p_low, 1.5);
        assert_relative_eq!(s.p_high, 3.0);
        assert!(schur_range(2.0, 2.0).is_err());
        assert!(schur_range(0.0, 1.0).is_err());
    }

    #[test]
    fn collapse_as_a_approaches_b() {
        let s = schur_range(1.0 - 1e-9, 1.0).unwrap();
        assert_relative_eq!(s.p_low, 2.0, epsilon = 1e-8);
        assert_relative_eq!(s.p_high, 2.0, epsilon = 1e-8);
    }

    #[test]
    fn exact_identity_and_conjugacy() {
        for k in 1..=20 {
            let (lo, hi) = critical_range_exact(k).unwrap();
            let (a, b) = canonical_schur_exponents_exact(k).unwrap();
            assert_eq!(schur_range_exact(a, b).unwrap(), (lo, hi));
            assert_eq!(lo.recip() + hi.recip(), Rational64::from_integer(1));
        }
        assert_eq!(
            critical_range_exact(1).unwrap(),
            (Rational64::new(4, 3), Rational64::from_integer(4))
        );
    }
}
