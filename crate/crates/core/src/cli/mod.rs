//! Command-line front end: argument parsing, experiment dispatch and exit
//! codes. Output files are handled in [`output`].

mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use crate::analysis::{
    default_family, divergence_scan, kernel_check, norm_ratio_probe, range_check, scan_quadrature, verify_calculus1,
    verify_disc_log, verify_schur, SchurConfig, Sample, Verdict, VerificationReport,
};
use crate::error::{Error, Result};
use crate::geometry::{DomainSpec, Point2};
use crate::kernel::{MultiIndex, SeriesSpec};
use crate::projection::{project_monomial, project_numeric, MonomialInput, MonomialProjection};
use crate::quadrature::{QuadratureSpec, RadialGrading, Strategy};

pub use output::{write_error, write_report, OUTPUT_DIR_ENV};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;
pub const EXIT_UNEXPECTED_VIOLATION: i32 = 4;

#[derive(Parser, Debug, Clone, Serialize)]
#[command(name = "hartogs", version, about = "Bergman kernel and projection experiments on fat Hartogs triangles")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Common {
    /// Domain exponent k.
    #[arg(long, global = true, default_value_t = 1.0)]
    pub k: f64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true)]
    pub radial_nodes: Option<usize>,
    #[arg(long, global = true)]
    pub angular_nodes: Option<usize>,
    /// Boundary offset δ.
    #[arg(long, global = true)]
    pub offset: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub strategy: Option<StrategyArg>,
    #[arg(long, global = true)]
    pub mc_samples: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub grading: Option<GradingArg>,
    /// Output file; defaults to $HARTOGS_OUTPUT_DIR/<experiment>.<format>,
    /// or stdout when that is unset.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StrategyArg {
    TensorPolar,
    MonteCarlo,
    StratifiedMc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GradingArg {
    Uniform,
    Geometric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case", tag = "command")]
pub enum Command {
    /// Closed-form kernel against its orthonormal series.
    KernelCheck {
        #[arg(long, default_value_t = 16)]
        grid: usize,
        #[arg(long, default_value_t = 8)]
        angular: usize,
    },
    /// Critical range and Schur range.
    Range,
    /// Schur test for h = (|z2|^2 - |z1|^2k)(1 - |z2|^2) along boundary ladders.
    Schur {
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 12)]
        levels: usize,
        #[arg(long, default_value_t = 0.02)]
        tolerance: f64,
    },
    /// Plateau of I(z)(1 - |z|^2)^eps on the unit disc.
    Calculus1 {
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 0.0)]
        beta: f64,
        #[arg(long, default_value_t = 30)]
        levels: usize,
    },
    /// Logarithmic growth of the unweighted disc kernel integral.
    DiscLog {
        #[arg(long, default_value_t = 30)]
        levels: usize,
    },
    /// Growth of the L^p norm of 1/z2 on |z2| > delta.
    Divergence {
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<f64>,
        /// `a..b` for a geometric grid, or a comma-separated list.
        #[arg(long, default_value = "1e-2..1e-5")]
        deltas: String,
        #[arg(long, default_value_t = 4)]
        per_decade: usize,
    },
    /// Lower bounds on the L^p operator norm from monomial inputs.
    Probe {
        #[arg(long)]
        p: f64,
    },
    /// Projection of w^a conj(w)^b, exactly and optionally by quadrature.
    Project {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_values_t = [0, 0])]
        hol: Vec<i64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_values_t = [0, 0])]
        antihol: Vec<i64>,
        /// Evaluation point `re1,im1,re2,im2`; may be repeated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        at: Vec<f64>,
        #[arg(long, default_value_t = 1e-4)]
        tolerance: f64,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::KernelCheck { .. } => "kernel-check",
            Command::Range => "range",
            Command::Schur { .. } => "schur",
            Command::Calculus1 { .. } => "calculus1",
            Command::DiscLog { .. } => "disc-log",
            Command::Divergence { .. } => "divergence",
            Command::Probe { .. } => "probe",
            Command::Project { .. } => "project",
        }
    }
}

impl Common {
    fn quadrature(&self, base: QuadratureSpec) -> QuadratureSpec {
        let mut q = base;
        q.seed = self.seed;
        if let Some(n) = self.radial_nodes {
            q.radial_nodes = n;
        }
        if let Some(n) = self.angular_nodes {
            q.angular_nodes = n;
        }
        if let Some(o) = self.offset {
            q.boundary_offset = o;
        }
        if let Some(s) = self.strategy {
            q.strategy = match s {
                StrategyArg::TensorPolar => Strategy::TensorPolar,
                StrategyArg::MonteCarlo => Strategy::MonteCarlo,
                StrategyArg::StratifiedMc => Strategy::StratifiedMc,
            };
        }
        if let Some(n) = self.mc_samples {
            q.mc_samples = n;
        }
        if let Some(g) = self.grading {
            q.grading = match g {
                GradingArg::Uniform => RadialGrading::Uniform,
                GradingArg::Geometric => RadialGrading::Geometric,
            };
        }
        q
    }
}

/// Parses `a..b` into a geometric grid with `per_decade` points per decade,
/// both ends included, or a comma-separated list.
pub fn parse_deltas(s: &str, per_decade: usize) -> Result<Vec<f64>> {
    let bad = || Error::invalid(format!("cannot parse delta grid '{s}'"));
    if let Some((a, b)) = s.split_once("..") {
        let a: f64 = a.trim().parse().map_err(|_| bad())?;
        let b: f64 = b.trim().parse().map_err(|_| bad())?;
        if !(a > 0.0 && b > 0.0 && a != b) || per_decade == 0 {
            return Err(bad());
        }
        let decades = (a.log10() - b.log10()).abs();
        let n = (decades * per_decade as f64).round().max(1.0) as usize;
        Ok((0..=n)
            .map(|i| 10f64.powf(a.log10() + (b.log10() - a.log10()) * i as f64 / n as f64))
            .collect())
    } else {
        s.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect()
    }
}

fn multi_index(v: &[i64]) -> Result<MultiIndex> {
    match v {
        [a, b] => Ok(MultiIndex::new(*a, *b)),
        _ => Err(Error::invalid("multi-indices take two comma-separated integers")),
    }
}

/// Runs the experiment the arguments describe.
pub fn run(cli: &Cli) -> Result<VerificationReport> {
    let c = &cli.common;
    let d = DomainSpec::new(c.k)?;
    let mut rep = match &cli.command {
        Command::KernelCheck { grid, angular } => kernel_check(&d, *grid, *angular, SeriesSpec::default())?,
        Command::Range => range_check(&d)?,
        Command::Schur { eps, levels, tolerance } => {
            let mut cfg = SchurConfig::canonical(&d, *eps);
            cfg.ladder_levels = *levels;
            cfg.tolerance = *tolerance;
            cfg.quad = c.quadrature(cfg.quad);
            verify_schur(&d, &cfg)?
        }
        Command::Calculus1 { eps, beta, levels } => {
            verify_calculus1(*eps, *beta, *levels, &c.quadrature(QuadratureSpec::default().with_nodes(16, 16)))?
        }
        Command::DiscLog { levels } => verify_disc_log(*levels, &c.quadrature(QuadratureSpec::default().with_nodes(16, 16)))?,
        Command::Divergence { p, deltas, per_decade } => {
            let grid = parse_deltas(deltas, *per_decade)?;
            divergence_scan(&d, p, &grid, &c.quadrature(scan_quadrature()))?
        }
        Command::Probe { p } => norm_ratio_probe(&d, *p, &default_family(d.integer_exponent()?))?,
        Command::Project {
            hol,
            antihol,
            at,
            tolerance,
        } => project_report(
            &d,
            MonomialInput::new(multi_index(hol)?, multi_index(antihol)?),
            at,
            *tolerance,
            &c.quadrature(QuadratureSpec::default()),
        )?,
    };
    rep.param("config", cli);
    Ok(rep)
}

fn project_report(
    d: &DomainSpec,
    m: MonomialInput,
    at: &[f64],
    tolerance: f64,
    quad: &QuadratureSpec,
) -> Result<VerificationReport> {
    if !at.len().is_multiple_of(4) {
        return Err(Error::invalid("evaluation points take four comma-separated reals"));
    }
    let exact = project_monomial(d, &m)?;
    let mut rep = VerificationReport::new("project", tolerance);
    rep.param("input", m).param("quadrature", quad);
    rep.derive("projection", exact);
    rep.expected = Some(Verdict::Consistent);
    if let MonomialProjection::Monomial { gamma, coeff } = exact {
        rep.note(format!("B(f) = {coeff:.17e} z^({}, {})", gamma.a1, gamma.a2));
    }
    let mut ok = true;
    for (i, c) in at.chunks(4).enumerate() {
        let z = Point2::new(Complex64::new(c[0], c[1]), Complex64::new(c[2], c[3]));
        let e = exact.eval(&z);
        let n = project_numeric(d, |w| Ok(m.eval(w)), &z, quad)?;
        let rel = (n.value - e).norm() / e.norm().max(f64::MIN_POSITIVE);
        ok &= rel <= tolerance;
        rep.samples.push(Sample::exact("exact_re", i as f64, e.re));
        rep.samples.push(Sample::exact("exact_im", i as f64, e.im));
        rep.samples.push(Sample::quadrature("numeric_re", i as f64, n.value.re, n.error));
        rep.samples.push(Sample::quadrature("numeric_im", i as f64, n.value.im, n.error));
        rep.samples.push(Sample::exact("relative_difference", i as f64, rel));
        if n.near_boundary {
            rep.note(format!("point {i} lies within 2 delta of the integration box edge"));
        }
    }
    rep.verdict = if ok { Verdict::Consistent } else { Verdict::Violated };
    Ok(rep)
}

/// 0 when the verdict is consistent or a predicted violation, 3 when
/// inconclusive, 4 for a violation the theory does not predict.
pub fn exit_code(rep: &VerificationReport) -> i32 {
    match rep.verdict {
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
        _ if rep.matches_expectation() => EXIT_OK,
        _ => EXIT_UNEXPECTED_VIOLATION,
    }
}

fn is_usage(e: &Error) -> bool {
    matches!(
        e,
        Error::InvalidParameter(_) | Error::InvalidExponent(_) | Error::NonIntegerExponent(_)
    )
}

/// Entry point for the binary: parses `args`, runs, writes output and
/// returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let argv: Vec<String> = std::env::args().collect();
    match run(&cli) {
        Ok(rep) => match write_report(&rep, &cli.common, &argv) {
            Ok(()) => {
                eprintln!("{}: {:?}", rep.experiment, rep.verdict);
                exit_code(&rep)
            }
            Err(e) => {
                eprintln!("error: cannot write output: {e}");
                EXIT_NUMERICAL
            }
        },
        Err(e) if is_usage(&e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
        Err(e) => {
            eprintln!("error: {e}");
            if let Err(w) = write_error(cli.command.name(), &e, &cli.common, &argv) {
                eprintln!("error: cannot write output: {w}");
            }
            EXIT_NUMERICAL
        }
    }
}
