pub mod asm;
pub mod bench;
pub mod metric;
pub mod run;
pub mod table;

use std::path::Path;

use crate::error::{CliError, Result};
use crate::report::RunReport;

/// What a command produced: a report, its human rendering, and a failure
/// message when the command ran but did not succeed.
#[derive(Debug, Clone)]
pub struct Output {
    pub report: RunReport,
    pub text: String,
    pub failure: Option<String>,
}

impl Output {
    pub fn ok(report: RunReport, text: String) -> Self {
        Output {
            report,
            text,
            failure: None,
        }
    }
}

pub(crate) fn read_file(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| CliError::input(path, e))
}

pub(crate) fn read_text(path: &Path) -> Result<String> {
    String::from_utf8(read_file(path)?).map_err(|_| CliError::input(path, "not valid UTF-8"))
}
