//! The Bergman projection `B_k f(z) = ∫ B_k(z, w) f(w) dV(w)`, by quadrature
//! and, for `f = w^a w̄^b`, exactly through the angular selection rule.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{DomainSpec, Point2};
use crate::kernel::{basis_norm_sq, BergmanKernel, MultiIndex};
use crate::quadrature::{integrate_many, integrate_real, radial_moment, CoreBox, Estimate, QuadratureSpec};

/// The function `w^a w̄^b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialInput {
    pub hol: MultiIndex,
    pub antihol: MultiIndex,
}

impl MonomialInput {
    pub const fn new(hol: MultiIndex, antihol: MultiIndex) -> Self {
        Self { hol, antihol }
    }

    pub const fn holomorphic(a: MultiIndex) -> Self {
        Self::new(a, MultiIndex::new(0, 0))
    }

    /// `z̄₂`
    pub const fn conj_z2() -> Self {
        Self::new(MultiIndex::new(0, 0), MultiIndex::new(0, 1))
    }

    pub fn eval(&self, p: &Point2) -> Complex64 {
        self.hol.monomial(p) * self.antihol.monomial(p).conj()
    }

    /// Exponents of `|w₁|`, `|w₂|` in `|f|`.
    pub fn modulus_exponents(&self) -> (f64, f64) {
        (
            (self.hol.a1 + self.antihol.a1) as f64,
            (self.hol.a2 + self.antihol.a2) as f64,
        )
    }

    /// `γ = a − b`
    pub fn gamma(&self) -> MultiIndex {
        MultiIndex::new(self.hol.a1 - self.antihol.a1, self.hol.a2 - self.antihol.a2)
    }

    /// `f ∈ L¹(Ω_k)`.
    pub fn check_integrable(&self, d: &DomainSpec) -> Result<()> {
        let (m1, m2) = self.modulus_exponents();
        radial_moment(d, m1, m2).map(|_| ())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum MonomialProjection {
    /// `B_k f = 0`.
    Zero,
    /// `B_k f = coeff · z^γ`.
    Monomial { gamma: MultiIndex, coeff: f64 },
}

impl MonomialProjection {
    pub fn eval(&self, z: &Point2) -> Complex64 {
        match self {
            MonomialProjection::Zero => Complex64::new(0.0, 0.0),
            MonomialProjection::Monomial { gamma, coeff } => gamma.monomial(z) * *coeff,
        }
    }
}

/// Exact projection of `w^a w̄^b`. Only the basis element `z^γ`, `γ = a − b`,
/// survives the angular integration, with coefficient
/// `⟨f, w^γ⟩ / c²_γ = ∫|w₁|^{2a₁}|w₂|^{2a₂} dV / c²_γ`.
pub fn project_monomial(d: &DomainSpec, m: &MonomialInput) -> Result<MonomialProjection> {
    let k = d.integer_exponent()?;
    m.check_integrable(d)?;
    let gamma = m.gamma();
    if !gamma.in_index_set(k) {
        return Ok(MonomialProjection::Zero);
    }
    let inner = radial_moment(
        d,
        (gamma.a1 + m.hol.a1 + m.antihol.a1) as f64,
        (gamma.a2 + m.hol.a2 + m.antihol.a2) as f64,
    )?;
    Ok(MonomialProjection::Monomial {
        gamma,
        coeff: inner / basis_norm_sq(d, gamma)?,
    })
}

/// Which expression supplies `B_k(z, w)` inside the projection integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelOrientation {
    /// `B_k(z, w)`
    #[default]
    Direct,
    /// `conj(B_k(w, z))`
    Conjugate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProjectedValue {
    pub value: Complex64,
    pub error: f64,
    /// `z` lies within `2δ` of the boundary in `(u, |z₂|)` coordinates,
    /// where the δ-core quadrature loses accuracy.
    pub near_boundary: bool,
}

fn near_boundary(d: &DomainSpec, z: &Point2, delta: f64) -> bool {
    let v = z.z2.norm();
    let u = z.z1.norm() / v.powf(1.0 / d.exponent());
    v < 2.0 * delta || v > 1.0 - 2.0 * delta || u > 1.0 - 2.0 * delta
}

/// `B_k f(z)` over the δ-core, `δ = spec.boundary_offset`.
pub fn project_numeric<F>(d: &DomainSpec, f: F, z: &Point2, spec: &QuadratureSpec) -> Result<ProjectedValue>
where
    F: Fn(&Point2) -> Result<Complex64> + Sync,
{
    let mut out = project_numeric_many(
        d,
        1,
        |w, acc: &mut [Complex64]| {
            acc[0] = f(w)?;
            Ok(())
        },
        z,
        spec,
        KernelOrientation::Direct,
    )?;
    Ok(out.remove(0))
}

/// Projects `n` integrands at `z` with one kernel evaluation per node; `f`
/// writes the integrand values at `w` into its slice.
pub fn project_numeric_many<F>(
    d: &DomainSpec,
    n: usize,
    f: F,
    z: &Point2,
    spec: &QuadratureSpec,
    orientation: KernelOrientation,
) -> Result<Vec<ProjectedValue>>
where
    F: Fn(&Point2, &mut [Complex64]) -> Result<()> + Sync,
{
    let kernel = BergmanKernel::new(d)?;
    d.require_interior(z)?;
    let warn = near_boundary(d, z, spec.boundary_offset);
    let integrand = |w: &Point2, acc: &mut [Complex64]| -> Result<()> {
        let b = match orientation {
            KernelOrientation::Direct => kernel.closed(z, w)?,
            KernelOrientation::Conjugate => kernel.closed(w, z)?.conj(),
        };
        f(w, acc)?;
        for a in acc.iter_mut() {
            *a *= b;
        }
        Ok(())
    };
    let est = integrate_many(d, n, integrand, &CoreBox::delta_core(spec.boundary_offset), spec)?;
    Ok(est
        .into_iter()
        .map(|e| ProjectedValue {
            value: e.value,
            error: e.error,
            near_boundary: warn,
        })
        .collect())
}

/// `‖f‖_p` over the δ-core.
pub fn lp_norm<F>(d: &DomainSpec, f: F, p: f64, spec: &QuadratureSpec) -> Result<Estimate<f64>>
where
    F: Fn(&Point2) -> Result<Complex64> + Sync,
{
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::invalid(format!("p must be a finite real >= 1, got {p}")));
    }
    let e = integrate_real(d, |w| Ok(f(w)?.norm().powf(p)), spec)?;
    let value = e.value.max(0.0).powf(1.0 / p);
    let error = if e.value > 0.0 {
        value / (p * e.value) * e.error
    } else {
        e.error.powf(1.0 / p)
    };
    Ok(Estimate { value, error })
}

/// `‖f‖_p` along a sequence of offsets, flagged for suspected divergence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormLadder {
    pub deltas: Vec<f64>,
    pub norms: Vec<Estimate<f64>>,
    /// The last three values differ by more than the tolerance.
    pub suspected_divergence: bool,
}

pub fn lp_norm_ladder<F>(
    d: &DomainSpec,
    f: F,
    p: f64,
    deltas: &[f64],
    tolerance: f64,
    spec: &QuadratureSpec,
) -> Result<NormLadder>
where
    F: Fn(&Point2) -> Result<Complex64> + Sync,
{
    if deltas.len() < 3 {
        return Err(Error::invalid("a norm ladder needs at least three offsets"));
    }
    let norms = deltas
        .iter()
        .map(|&delta| lp_norm(d, &f, p, &spec.with_offset(delta)))
        .collect::<Result<Vec<_>>>()?;
    let tail = &norms[norms.len() - 3..];
    let last = tail[2].value;
    let suspected_divergence = tail.iter().any(|e| (e.value - last).abs() > tolerance * last.abs());
    Ok(NormLadder {
        deltas: deltas.to_vec(),
        norms,
        suspected_divergence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::RadialGrading;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn quad() -> QuadratureSpec {
        QuadratureSpec::default().with_nodes(16, 48).with_offset(1e-12)
    }

    #[test]
    fn conj_z2_coefficient() {
        for k in 1..=5 {
            let d = DomainSpec::integer(k).unwrap();
            match project_monomial(&d, &MonomialInput::conj_z2()).unwrap() {
                MonomialProjection::Monomial { gamma, coeff } => {
                    assert_eq!(gamma, MultiIndex::new(0, -1));
                    assert_relative_eq!(coeff, 1.0 / (k as f64 + 1.0), max_relative = 1e-14);
                }
                other => panic!("unexpected {other:?}"),
            }
        }
    }

    #[test]
    fn selection_rule_zero() {
        let d = DomainSpec::integer(1).unwrap();
        let f = MonomialInput::new(MultiIndex::new(0, 0), MultiIndex::new(1, 0));
        assert_eq!(project_monomial(&d, &f).unwrap(), MonomialProjection::Zero);
    }

    #[test]
    fn holomorphic_inputs_are_reproduced() {
        for k in 1..=3 {
            let d = DomainSpec::integer(k).unwrap();
            for a in MultiIndex::enumerate(k, 6) {
                match project_monomial(&d, &MonomialInput::holomorphic(a)).unwrap() {
                    MonomialProjection::Monomial { gamma, coeff } => {
                        assert_eq!(gamma, a);
                        assert_relative_eq!(coeff, 1.0, max_relative = 1e-14);
                    }
                    other => panic!("unexpected {other:?}"),
                }
            }
        }
    }

    #[test]
    fn non_integrable_inputs_are_rejected() {
        let d = DomainSpec::integer(1).unwrap();
        let f = MonomialInput::new(MultiIndex::new(0, -2), MultiIndex::new(0, -2));
        assert!(matches!(project_monomial(&d, &f), Err(Error::DivergentMoment { .. })));
    }

    #[test]
    fn numeric_projection_of_conj_z2() {
        let d = DomainSpec::integer(1).unwrap();
        let z = Point2::real(0.0, 0.5);
        let v = project_numeric(&d, |w| Ok(w.z2.conj()), &z, &quad()).unwrap();
        assert!((v.value - Complex64::new(1.0, 0.0)).norm() < 1e-4, "{v:?}");
        assert!(!v.near_boundary);
    }

    #[test]
    fn numeric_reproduces_z1() {
        let d = DomainSpec::integer(1).unwrap();
        let z = Point2::real(0.2, 0.5);
        let v = project_numeric(&d, |w| Ok(w.z1), &z, &quad()).unwrap();
        assert!((v.value - Complex64::new(0.2, 0.0)).norm() < 1e-4 * 0.2, "{v:?}");
    }

    #[test]
    fn zero_input_projects_to_zero() {
        let d = DomainSpec::integer(2).unwrap();
        let z = Point2::real(0.1, 0.4);
        let v = project_numeric(&d, |_| Ok(Complex64::new(0.0, 0.0)), &z, &quad()).unwrap();
        assert_eq!(v.value, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn orientations_agree() {
        let d = DomainSpec::integer(2).unwrap();
        let z = Point2::new(Complex64::new(0.2, 0.1), Complex64::new(0.1, -0.4));
        let spec = QuadratureSpec::default().with_nodes(8, 16);
        let f = |w: &Point2, acc: &mut [Complex64]| {
            acc[0] = w.z1 * w.z2.conj();
            Ok(())
        };
        let a = project_numeric_many(&d, 1, f, &z, &spec, KernelOrientation::Direct).unwrap();
        let b = project_numeric_many(&d, 1, f, &z, &spec, KernelOrientation::Conjugate).unwrap();
        assert_relative_eq!((a[0].value - b[0].value).norm(), 0.0, epsilon = 1e-12 * a[0].value.norm().max(1e-3));
    }

    #[test]
    fn warns_near_the_boundary() {
        let d = DomainSpec::integer(1).unwrap();
        let spec = QuadratureSpec::default().with_nodes(4, 4).with_offset(1e-2);
        let z = Point2::real(0.0, 0.985);
        let v = project_numeric(&d, |w| Ok(w.z2), &z, &spec).unwrap();
        assert!(v.near_boundary);
    }

    #[test]
    fn norm_examples() {
        let d1 = DomainSpec::integer(1).unwrap();
        let e = lp_norm(&d1, |_| Ok(Complex64::new(1.0, 0.0)), 2.0, &quad()).unwrap();
        assert_relative_eq!(e.value, (PI * PI / 2.0).sqrt(), max_relative = 1e-8);
        let d2 = DomainSpec::integer(2).unwrap();
        let e = lp_norm(&d2, |w| Ok(1.0 / w.z2), 2.0, &quad()).unwrap();
        assert_relative_eq!(e.value, (2.0 * PI * PI).sqrt(), max_relative = 1e-8);
        let f = |w: &Point2| Ok(w.z1 * w.z2 + 0.5);
        let a = lp_norm(&d2, f, 3.0, &quad()).unwrap().value;
        let b = lp_norm(&d2, |w| Ok(f(w)? * -2.5), 3.0, &quad()).unwrap().value;
        assert_relative_eq!(b, 2.5 * a, max_relative = 1e-12);
    }

    #[test]
    fn ladder_flags_divergent_norm() {
        let d = DomainSpec::integer(1).unwrap();
        let spec = quad().with_grading(RadialGrading::Geometric).with_nodes(8, 2);
        let deltas = [1e-2, 1e-3, 1e-4, 1e-5];
        let div = lp_norm_ladder(&d, |w| Ok(1.0 / w.z2), 5.0, &deltas, 0.02, &spec).unwrap();
        assert!(div.suspected_divergence);
        let conv = lp_norm_ladder(&d, |w| Ok(1.0 / w.z2), 3.0, &deltas, 0.02, &spec).unwrap();
        assert!(!conv.suspected_divergence);
    }
}
