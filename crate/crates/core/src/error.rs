//! Crate-wide error type.

use thiserror::Error;

use crate::robot::ValidationReport;

/// Errors returned by the analysis, kinematics, design, and file-loading
/// operations. Values are reported as `f64` regardless of the working scalar.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid robot spec: {0}")]
    InvalidSpec(ValidationReport),

    #[error("{joint} = {value} outside joint limits [{min}, {max}]")]
    JointLimit {
        joint: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("{axis} = {value} m exceeds {bound_name} = {max} m")]
    PoseAboveMax {
        axis: &'static str,
        value: f64,
        max: f64,
        bound_name: &'static str,
    },

    #[error("{axis} = {value} m below minimum {min} m")]
    PoseBelowMin {
        axis: &'static str,
        value: f64,
        min: f64,
    },

    #[error("{what} = {value} m outside workspace (max {max} m)")]
    OutsideWorkspace {
        what: &'static str,
        value: f64,
        max: f64,
    },

    #[error("{what} must be finite")]
    NonFinite { what: &'static str },

    #[error("invalid {what}: {detail}")]
    InvalidArgument { what: &'static str, detail: String },

    #[error("invalid grid: {detail}")]
    Grid { detail: String },

    #[error("invalid support polygon: {detail}")]
    Polygon { detail: String },

    #[error("unsupported design problem: {0}")]
    Unsupported(String),

    #[error("infeasible design problem: binding constraint {constraint}")]
    Infeasible { constraint: String },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: parse error: {detail}")]
    Parse { path: String, detail: String },

    #[error("{path}: schema is {found:?}, expected {expected:?}")]
    Schema {
        path: String,
        expected: &'static str,
        found: String,
    },
}

impl Error {
    /// True for file-level failures (I/O, parse, schema), as opposed to
    /// domain failures. The CLI maps these to exit code 2.
    pub fn is_file_error(&self) -> bool {
        matches!(
            self,
            Error::Io { .. } | Error::Parse { .. } | Error::Schema { .. }
        )
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
