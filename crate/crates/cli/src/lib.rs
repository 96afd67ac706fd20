//! Library behind the `circgeo` binary: instance files, analysis reports,
//! Q-basis tables and the verification suites.

pub mod analyze;
pub mod format;
pub mod instance;
pub mod sectional;
pub mod suites;

use circulant_geometry::GeometryError;
use thiserror::Error;

/// Success.
pub const EXIT_OK: i32 = 0;
/// A verification check failed.
pub const EXIT_CHECK_FAILED: i32 = 1;
/// Unreadable or invalid input.
pub const EXIT_INPUT: i32 = 2;
/// The input is valid but a requested quantity is undefined or singular.
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown suite `{0}` (expected one of: {list})", list = suites::SUITES.join(", "))]
    UnknownSuite(String),

    #[error("{0} check(s) failed")]
    ChecksFailed(usize),

    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Parse(_) | CliError::UnknownSuite(_) => EXIT_INPUT,
            CliError::ChecksFailed(_) => EXIT_CHECK_FAILED,
            CliError::Geometry(err) => geometry_exit_code(err),
        }
    }
}

/// Input errors map to [`EXIT_INPUT`], everything else to [`EXIT_NUMERIC`].
pub fn geometry_exit_code(err: &GeometryError) -> i32 {
    use GeometryError::*;
    match err {
        PositivityViolation { .. }
        | NotAQBasis { .. }
        | DegenerateAssociated
        | AsymmetricHessian { .. }
        | NotAntisymmetric { .. }
        | JacobiViolation { .. }
        | WrongFamily { .. }
        | InvalidTolerance => EXIT_INPUT,
        SingularMatrix { .. }
        | DegeneratePlane { .. }
        | IsotropicDirection { .. }
        | NotEinstein { .. }
        | SearchFailed(_)
        | NotCirculantRicci { .. }
        | NotInL2 { .. }
        | NotDegeneratePlane { .. } => EXIT_NUMERIC,
    }
}
