//! C ABI over the `hartogs` crate.
//!
//! Every function returns a [`HartogsStatus`] and writes its result through
//! an out-pointer. On failure the message is kept per thread and can be
//! read with [`hartogs_last_error_message`]. Domains are opaque handles
//! created by [`hartogs_domain_new`] and released by [`hartogs_domain_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hartogs::analysis::{critical_range, schur_range};
use hartogs::kernel::{BergmanKernel, MultiIndex, SeriesEvaluator, SeriesSpec};
use hartogs::projection::{project_monomial, MonomialInput, MonomialProjection};
use hartogs::quadrature::radial_moment;
use hartogs::{DomainSpec, Error, Point2};
use num_complex::Complex64;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HartogsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NonIntegerExponent = 3,
    OutsideDomain = 4,
    NearSingular = 5,
    NotConverged = 6,
    DivergentIntegral = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HartogsComplex {
    pub re: f64,
    pub im: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HartogsPoint {
    pub z1: HartogsComplex,
    pub z2: HartogsComplex,
}

/// Opaque domain handle.
pub struct HartogsDomain {
    spec: DomainSpec,
    kernel: Option<BergmanKernel>,
    series: Option<SeriesEvaluator>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> HartogsStatus {
    match e {
        Error::InvalidExponent(_) | Error::InvalidParameter(_) => HartogsStatus::InvalidArgument,
        Error::NonIntegerExponent(_) => HartogsStatus::NonIntegerExponent,
        Error::OutsideDomain { .. } | Error::NotInterior { .. } => HartogsStatus::OutsideDomain,
        Error::NearSingular { .. } => HartogsStatus::NearSingular,
        Error::SeriesNotConverged { .. } => HartogsStatus::NotConverged,
        Error::DivergentMoment { .. } => HartogsStatus::DivergentIntegral,
        Error::Integrand { source, .. } => status_of(source),
    }
}

/// Runs `f`, recording errors and converting panics.
fn guard<F: FnOnce() -> Result<(), HartogsStatus>>(f: F) -> HartogsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HartogsStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic".into());
            HartogsStatus::Panic
        }
    }
}

fn fail(e: Error) -> HartogsStatus {
    let s = status_of(&e);
    set_error(e.to_string());
    s
}

fn null(name: &str) -> HartogsStatus {
    set_error(format!("null pointer: {name}"));
    HartogsStatus::NullPointer
}

unsafe fn domain<'a>(d: *const HartogsDomain) -> Result<&'a HartogsDomain, HartogsStatus> {
    d.as_ref().ok_or_else(|| null("domain"))
}

unsafe fn write<T>(out: *mut T, v: T, name: &str) -> Result<(), HartogsStatus> {
    if out.is_null() {
        return Err(null(name));
    }
    out.write(v);
    Ok(())
}

fn point(p: HartogsPoint) -> Point2 {
    Point2::new(Complex64::new(p.z1.re, p.z1.im), Complex64::new(p.z2.re, p.z2.im))
}

fn complex(c: Complex64) -> HartogsComplex {
    HartogsComplex { re: c.re, im: c.im }
}

impl HartogsDomain {
    fn kernel(&self) -> Result<&BergmanKernel, HartogsStatus> {
        self.kernel
            .as_ref()
            .ok_or_else(|| fail(Error::NonIntegerExponent(self.spec.exponent())))
    }
}

/// Creates a domain `Ω_k`. Kernel functions need an integer `k`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hartogs_domain_new(k: f64, out: *mut *mut HartogsDomain) -> HartogsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let spec = DomainSpec::new(k).map_err(fail)?;
        let kernel = BergmanKernel::new(&spec).ok();
        let series = SeriesEvaluator::new(&spec, SeriesSpec::default()).ok();
        let h = Box::new(HartogsDomain { spec, kernel, series });
        out.write(Box::into_raw(h));
        Ok(())
    })
}

/// Releases a handle from [`hartogs_domain_new`]; null is ignored.
///
/// # Safety
/// `d` must come from [`hartogs_domain_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hartogs_domain_free(d: *mut HartogsDomain) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hartogs_domain_contains(d: *const HartogsDomain, p: HartogsPoint, out: *mut bool) -> HartogsStatus {
    guard(|| {
        let d = domain(d)?;
        write(out, d.spec.contains(&point(p)), "out")
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hartogs_domain_volume(d: *const HartogsDomain, out: *mut f64) -> HartogsStatus {
    guard(|| {
        let d = domain(d)?;
        write(out, d.spec.volume(), "out")
    })
}

/// `h(z) = (|z₂|² − |z₁|^{2k})(1 − |z₂|²)`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hartogs_aux_h(d: *const HartogsDomain, p: HartogsPoint, out: *mut f64) -> HartogsStatus {
    guard(|| {
        let d = domain(d)?;
        let v = d.spec.aux_h(&point(p)).map_err(fail)?;
        write(out, v, "out")
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hartogs_kernel_closed(
    d: *const HartogsDomain,
    z: HartogsPoint,
    w: HartogsPoint,
    out: *mut HartogsComplex,
) -> HartogsStatus {
    guard(|| {
        let d = domain(d)?;
        let v = d.kernel()?.closed(&point(z), &point(w)).map_err(fail)?;
        write(out, complex(v), "out")
    })
}

/// Series evaluation with the default truncation (relative 1e-13, degree
/// at most 1000). `degree` may be null.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hartogs_kernel_series(
    d: *const HartogsDomain,
    z: HartogsPoint,
    w: HartogsPoint,
    out: *mut HartogsComplex,
    degree: *mut u32,
) -> HartogsStatus {
    guard(|| {
        let d = domain(d)?;
        let eval = d
            .series
            .as_ref()
            .ok_or_else(|| fail(Error::NonIntegerExponent(d.spec.exponent())))?;
        let v = eval.evaluate(&point(z), &point(w)).map_err(fail)?;
        if !degree.is_null() {
            degree.write(v.degree);
        }
        write(out, complex(v.value), "out")
    })
}

/// `|t| / (|1 − t|² |t − s^k|²)`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hartogs_kernel_bound(
    d: *const HartogsDomain,
    z: HartogsPoint,
    w: HartogsPoint,
    out: *mut f64,
) -> HartogsStatus {
    guard(|| {
        let d = domain(d)?;
        let v = d.kernel()?.bound(&point(z), &point(w)).map_err(fail)?;
        write(out, v, "out")
    })
}

/// `∫ |z₁|^{m₁} |z₂|^{m₂} dV`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hartogs_radial_moment(d: *const HartogsDomain, m1: f64, m2: f64, out: *mut f64) -> HartogsStatus {
    guard(|| {
        let d = domain(d)?;
        let v = radial_moment(&d.spec, m1, m2).map_err(fail)?;
        write(out, v, "out")
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hartogs_critical_range(d: *const HartogsDomain, p_low: *mut f64, p_high: *mut f64) -> HartogsStatus {
    guard(|| {
        let d = domain(d)?;
        let r = critical_range(&d.spec);
        write(p_low, r.p_low, "p_low")?;
        write(p_high, r.p_high, "p_high")
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hartogs_schur_range(a: f64, b: f64, p_low: *mut f64, p_high: *mut f64) -> HartogsStatus {
    guard(|| {
        let r = schur_range(a, b).map_err(fail)?;
        write(p_low, r.p_low, "p_low")?;
        write(p_high, r.p_high, "p_high")
    })
}

/// Exact projection of `w^a w̄^b`: `coeff · z^γ`. When the projection is
/// zero, `coeff` is 0 and `γ = a − b`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hartogs_project_monomial(
    d: *const HartogsDomain,
    a1: i64,
    a2: i64,
    b1: i64,
    b2: i64,
    gamma1: *mut i64,
    gamma2: *mut i64,
    coeff: *mut f64,
) -> HartogsStatus {
    guard(|| {
        let d = domain(d)?;
        let m = MonomialInput::new(MultiIndex::new(a1, a2), MultiIndex::new(b1, b2));
        let (g, c) = match project_monomial(&d.spec, &m).map_err(fail)? {
            MonomialProjection::Zero => (m.gamma(), 0.0),
            MonomialProjection::Monomial { gamma, coeff } => (gamma, coeff),
        };
        write(gamma1, g.a1, "gamma1")?;
        write(gamma2, g.a2, "gamma2")?;
        write(coeff, c, "coeff")
    })
}

/// Copies the calling thread's last error message into `buf` (NUL
/// terminated) and returns its length without the terminator. With a null
/// or short buffer nothing is copied and the required length is returned.
///
/// # Safety
/// `buf` must be valid for `len` bytes or null.
#[no_mangle]
pub unsafe extern "C" fn hartogs_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let Some(msg) = e.as_ref() else {
            if !buf.is_null() && len > 0 {
                *buf = 0;
            }
            return 0;
        };
        let bytes = msg.as_bytes_with_nul();
        if !buf.is_null() && len >= bytes.len() {
            ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, bytes.len());
        }
        bytes.len() - 1
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(a: f64, b: f64) -> HartogsPoint {
        HartogsPoint {
            z1: HartogsComplex { re: a, im: 0.0 },
            z2: HartogsComplex { re: b, im: 0.0 },
        }
    }

    #[test]
    fn handle_roundtrip() {
        unsafe {
            let mut d = ptr::null_mut();
            assert_eq!(hartogs_domain_new(2.0, &mut d), HartogsStatus::Ok);
            let mut inside = false;
            assert_eq!(hartogs_domain_contains(d, pt(0.5, 0.5), &mut inside), HartogsStatus::Ok);
            assert!(inside);
            let mut v = 0.0;
            assert_eq!(hartogs_domain_volume(d, &mut v), HartogsStatus::Ok);
            assert!((v - std::f64::consts::PI.powi(2) * 2.0 / 3.0).abs() < 1e-14);
            hartogs_domain_free(d);
        }
    }

    #[test]
    fn errors_carry_messages() {
        unsafe {
            let mut d = ptr::null_mut();
            assert_eq!(hartogs_domain_new(-1.0, &mut d), HartogsStatus::InvalidArgument);
            let n = hartogs_last_error_message(ptr::null_mut(), 0);
            assert!(n > 0);
            let mut buf = vec![0 as c_char; n + 1];
            assert_eq!(hartogs_last_error_message(buf.as_mut_ptr(), buf.len()), n);
            assert_eq!(hartogs_domain_volume(ptr::null(), ptr::null_mut()), HartogsStatus::NullPointer);
        }
    }
}
