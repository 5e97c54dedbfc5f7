use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use buildings_core::treefold::TreeFoldError;
use serde_json::{json, Value};

pub const EXIT_VALIDATION: u8 = 1;
pub const EXIT_VIOLATION: u8 = 2;
pub const EXIT_INPUT: u8 = 3;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub kind: String,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_INPUT,
            kind: "InputError".into(),
            message: message.into(),
        }
    }

    pub fn validation(e: &TreeFoldError) -> Self {
        CliError {
            code: EXIT_VALIDATION,
            kind: e.kind().into(),
            message: e.to_string(),
        }
    }
}

/// A finished command: the JSON report for stdout and the process status.
pub struct Exit {
    pub code: u8,
    pub report: Value,
}

impl Exit {
    pub fn ok(report: Value) -> Self {
        Exit { code: 0, report }
    }

    pub fn violation(report: Value) -> Self {
        Exit {
            code: EXIT_VIOLATION,
            report,
        }
    }

    pub fn emit(self) -> ExitCode {
        let text = serde_json::to_string_pretty(&self.report).expect("report serializes");
        // a closed pipe on stdout is not worth a panic
        let _ = writeln!(std::io::stdout().lock(), "{text}");
        ExitCode::from(self.code)
    }
}

impl From<CliError> for Exit {
    fn from(e: CliError) -> Self {
        eprintln!("error: {}: {}", e.kind, e.message);
        Exit {
            code: e.code,
            report: json!({
                "status": "error",
                "exit_code": e.code,
                "error": { "kind": e.kind, "message": e.message },
            }),
        }
    }
}

/// Floating-point values only ever appear wrapped like this.
pub fn approx(x: f64) -> Value {
    json!({ "approx": x })
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let fail = |e: std::io::Error| CliError::input(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(fail)?;
    tmp.write_all(contents.as_bytes()).map_err(fail)?;
    tmp.as_file().sync_all().map_err(fail)?;
    tmp.persist(path).map_err(|e| fail(e.error))?;
    Ok(())
}
