use std::fmt;
use std::path::PathBuf;

use crate::svg::FigKind;

/// One rejected configuration value.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldError {
    pub field: String,
    pub reason: String,
}

impl FieldError {
    pub fn new(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.reason)
    }
}

fn list(errors: &[FieldError]) -> String {
    errors.iter().map(|e| format!("\n  {e}")).collect()
}

fn at_time(t: &Option<f64>) -> String {
    t.map(|t| format!(", t = {t}")).unwrap_or_default()
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration:{}", list(.0))]
    ConfigInvalid(Vec<FieldError>),

    #[error("numeric failure at N = {n_spins}, g = {g}{}: {source}", at_time(.t))]
    Numeric {
        n_spins: usize,
        g: f64,
        t: Option<f64>,
        source: dephasing_core::Error,
    },

    #[error("cannot draw {kind}: {reason}")]
    MissingSeries { kind: FigKind, reason: &'static str },

    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },

    #[error("{}: {source}", path.display())]
    Csv { path: PathBuf, source: csv::Error },
}

impl CliError {
    pub fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        CliError::ConfigInvalid(vec![FieldError::new(field, reason)])
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::ConfigInvalid(_) => 2,
            CliError::Numeric { .. } => 3,
            _ => 1,
        }
    }
}
