//! Numerical experiments on the `L^p` mapping properties of the Bergman
//! projection, and the report format they share.

pub mod calculus;
pub mod checks;
pub mod divergence;
pub mod fit;
pub mod probe;
pub mod range;
pub mod report;
pub mod schur;

pub use checks::{kernel_check, range_check};
pub use calculus::{verify_calculus1, verify_disc_log};
pub use divergence::{divergence_scan, scan_quadrature, Growth, PFit};
pub use probe::{default_family, norm_ratio_probe};
pub use range::{critical_range, schur_range, RangeReport, RangeSource};
pub use report::{Provenance, Sample, Verdict, VerificationReport, SCHEMA_VERSION};
pub use schur::{schur_point, schur_sweep, verify_schur, SchurConfig, SchurPoint};
