//! Report files: JSON or CSV, written atomically, with the wall-clock
//! timestamp kept in a `.meta.json` sidecar so reports stay byte-identical
//! across runs.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::json;

use super::{Common, Format};
use crate::analysis::{VerificationReport, SCHEMA_VERSION};
use crate::error::Error;

pub const OUTPUT_DIR_ENV: &str = "HARTOGS_OUTPUT_DIR";

fn extension(f: Format) -> &'static str {
    match f {
        Format::Json => "json",
        Format::Csv => "csv",
    }
}

fn target(stem: &str, common: &Common) -> Option<PathBuf> {
    common.output.clone().or_else(|| {
        std::env::var_os(OUTPUT_DIR_ENV).map(|dir| Path::new(&dir).join(format!("{stem}.{}", extension(common.format))))
    })
}

/// Temp file in the destination directory, then rename.
fn write_atomic(path: &Path, contents: &str) -> io::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(format!(".tmp{}", std::process::id()));
    let tmp = path.with_file_name(name);
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)
}

fn sidecar(path: &Path) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".meta.json");
    path.with_file_name(name)
}

fn meta(argv: &[String]) -> String {
    let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs_f64()).unwrap_or(0.0);
    let m = json!({
        "schema_version": SCHEMA_VERSION,
        "created_unix": secs,
        "tool_version": env!("CARGO_PKG_VERSION"),
        "argv": argv,
    });
    serde_json::to_string_pretty(&m).unwrap_or_default() + "\n"
}

pub fn to_json(rep: &VerificationReport) -> String {
    serde_json::to_string_pretty(rep).unwrap_or_default() + "\n"
}

/// One row per sample, 17 significant digits.
pub fn to_csv(rep: &VerificationReport) -> String {
    let mut s = String::from("experiment,series,input,value,error,provenance,divergent\n");
    for x in &rep.samples {
        let err = x.error.map(|e| format!("{e:.16e}")).unwrap_or_default();
        let _ = writeln!(
            s,
            "{},{},{:.16e},{:.16e},{},{},{}",
            rep.experiment,
            x.series,
            x.input,
            x.value,
            err,
            x.provenance.label(),
            x.divergent
        );
    }
    s
}

/// Writes the report where `common` says; a CSV file always gets the full
/// JSON report next to it.
pub fn write_report(rep: &VerificationReport, common: &Common, argv: &[String]) -> io::Result<()> {
    let primary = match common.format {
        Format::Json => to_json(rep),
        Format::Csv => to_csv(rep),
    };
    match target(&rep.experiment, common) {
        None => {
            io::stdout().write_all(primary.as_bytes())?;
            Ok(())
        }
        Some(path) => {
            write_atomic(&path, &primary)?;
            if common.format == Format::Csv {
                write_atomic(&path.with_extension("json"), &to_json(rep))?;
            }
            write_atomic(&sidecar(&path), &meta(argv))
        }
    }
}

/// Structured record of a failed run.
pub fn write_error(experiment: &str, err: &Error, common: &Common, argv: &[String]) -> io::Result<()> {
    let body = json!({
        "schema_version": SCHEMA_VERSION,
        "experiment": experiment,
        "error": { "message": err.to_string(), "detail": format!("{err:?}") },
    });
    let text = serde_json::to_string_pretty(&body).unwrap_or_default() + "\n";
    match target(experiment, common) {
        None => io::stdout().write_all(text.as_bytes()),
        Some(path) => {
            let path = path.with_extension("json");
            write_atomic(&path, &text)?;
            write_atomic(&sidecar(&path), &meta(argv))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::Sample;

    #[test]
    fn csv_has_full_precision_and_provenance() {
        let mut rep = VerificationReport::new("t", 0.0);
        rep.samples.push(Sample::exact("a", 0.1, 1.0 / 3.0));
        let csv = to_csv(&rep);
        let row = csv.lines().nth(1).unwrap();
        assert!(row.contains("3.3333333333333331e-1"));
        assert!(row.contains("exact-formula"));
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = std::env::temp_dir().join(format!("hartogs-out-{}", std::process::id()));
        let path = dir.join("r.json");
        write_atomic(&path, "one").unwrap();
        write_atomic(&path, "two").unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), "two");
        assert_eq!(fs::read_dir(&dir).unwrap().count(), 1);
        fs::remove_dir_all(&dir).unwrap();
    }
}
