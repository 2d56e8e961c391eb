//! Command-line front end: analysis records, sampling and the example corpus.

pub mod corpus;
pub mod record;

use qfedder::frob::FrobError;
use qfedder::poly::ParseError;
use qfedder::qfp::QfpError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Frob(#[from] FrobError),
    #[error(transparent)]
    Qfp(#[from] QfpError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
