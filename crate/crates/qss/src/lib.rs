//! Std companion of `qss-core`: the access structure text formats, preset
//! strings, Deal files, the `qss` command line front end and the acceptance
//! suite.

pub mod acceptance;
pub mod cli;
pub mod deal;
pub mod grammar;
pub mod preset;

use qss_core::access::AccessError;
use qss_core::compiler::CompilerError;
use qss_core::gf::GfError;
use qss_core::qecc::QeccError;
use qss_core::qotp::OtpError;
use qss_core::qsim::QsimError;

pub use cli::{run, Output};
pub use deal::{deal_from_json, deal_to_json, parse_secret};
pub use grammar::{parse_expression, parse_file, ParseError, ParsedStructure};
pub use preset::{load_structure, preset};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("usage: {0}")]
    Usage(String),
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("{path}:{source}")]
    File { path: String, source: ParseError },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("preset: {0}")]
    Preset(String),
    #[error("deal file: {0}")]
    DealFormat(String),
    #[error(transparent)]
    Compiler(#[from] CompilerError),
    #[error(transparent)]
    Access(#[from] AccessError),
    #[error(transparent)]
    Qecc(#[from] QeccError),
    #[error(transparent)]
    Sim(#[from] QsimError),
    #[error(transparent)]
    Otp(#[from] OtpError),
    #[error(transparent)]
    Gf(#[from] GfError),
}
