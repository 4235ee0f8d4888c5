use std::fs;
use std::io::Write;
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;
use wiretap_core::ExponentCurve;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Self::Csv => "csv",
            Self::Json => "json",
        }
    }
}

/// A curve together with the file stem it is written under.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Named {
    pub name: String,
    pub curve: ExponentCurve,
}

impl Named {
    pub fn new(name: impl Into<String>, mut curve: ExponentCurve) -> Self {
        curve
            .meta
            .insert("version".into(), wiretap_core::VERSION.into());
        Self {
            name: name.into(),
            curve,
        }
    }
}

pub fn render(curve: &ExponentCurve, format: Format) -> String {
    match format {
        Format::Csv => curve.to_csv(),
        Format::Json => curve.to_json() + "\n",
    }
}

/// One curve goes to `out` as a file; several go into `out` as a directory.
/// Without `out` everything is printed.
pub fn emit_curves(curves: &[Named], out: Option<&Path>, format: Format) -> Result<(), CliError> {
    match out {
        None => {
            let text = match format {
                Format::Csv => curves
                    .iter()
                    .map(|c| render(&c.curve, format))
                    .collect::<Vec<_>>()
                    .join("\n"),
                Format::Json => serde_json::to_string_pretty(curves).expect("curves serialize") + "\n",
            };
            print_stdout(&text);
            Ok(())
        }
        Some(path) if curves.len() == 1 => write_file(path, &render(&curves[0].curve, format)),
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
            for c in curves {
                let p = dir.join(format!("{}.{}", c.name, format.extension()));
                write_file(&p, &render(&c.curve, format))?;
            }
            Ok(())
        }
    }
}

/// JSON document to `out`, or stdout.
pub fn emit_report<T: Serialize>(report: &T, out: Option<&Path>) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(report).expect("report serializes") + "\n";
    match out {
        Some(p) => write_file(p, &text),
        None => {
            print_stdout(&text);
            Ok(())
        }
    }
}

pub fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
    }
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn print_stdout(text: &str) {
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    // a closed pipe is not worth a panic
    let _ = lock.write_all(text.as_bytes());
}
