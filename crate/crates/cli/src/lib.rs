//! Command-line surface for `sextic-lattice`: JSON documents, the per-ADE
//! result cache, and the subcommands.

pub mod cache;
pub mod commands;
pub mod dto;

use std::fmt;
use std::str::FromStr;

use sextic_lattice::Error;

/// Process exit codes.
pub mod exit {
    pub const OK: u8 = 0;
    /// A complete search found nothing.
    pub const NOT_FOUND: u8 = 1;
    pub const PARSE: u8 = 2;
    pub const CONSISTENCY: u8 = 3;
    pub const BUDGET: u8 = 4;
}

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Schema(String),
    Json(serde_json::Error),
    Io(std::io::Error),
    NotFound(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::Consistency(_)) => exit::CONSISTENCY,
            CliError::Core(Error::Budget) => exit::BUDGET,
            CliError::Core(_) | CliError::Schema(_) | CliError::Json(_) => exit::PARSE,
            CliError::NotFound(_) => exit::NOT_FOUND,
            // Unreadable input files are reported like malformed ones.
            CliError::Io(_) => exit::PARSE,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Schema(m) => write!(f, "schema error: {m}"),
            CliError::Json(e) => write!(f, "json error: {e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
            CliError::NotFound(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Json(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    #[default]
    Text,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            _ => Err(format!("unknown format {s:?} (expected json, csv or text)")),
        }
    }
}

/// Options shared by every subcommand.
#[derive(Clone, Debug, Default)]
pub struct RunConfig {
    pub format: Format,
    /// No caching when `None`.
    pub cache: Option<cache::Cache>,
    /// Node limit for embedding searches.
    pub budget: Option<u64>,
}

/// Rendered output and the exit code to finish with.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub body: String,
    pub code: u8,
}

impl Report {
    pub fn ok(body: String) -> Self {
        Report { body, code: exit::OK }
    }
}

pub fn parse_ade(s: &str) -> Result<sextic_lattice::ADEType, CliError> {
    Ok(sextic_lattice::ADEType::parse(s)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ade_strings() {
        assert_eq!(parse_ade("A3+2A7").unwrap().to_string(), "A3+2A7");
        assert_eq!(parse_ade("3A5").unwrap().mu(), 15);
        let e = parse_ade("D3").unwrap_err();
        assert_eq!(e.exit_code(), exit::PARSE);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::from(Error::Budget).exit_code(), exit::BUDGET);
        assert_eq!(CliError::from(Error::Consistency("x".into())).exit_code(), exit::CONSISTENCY);
        assert_eq!(CliError::Schema("x".into()).exit_code(), exit::PARSE);
    }
}
