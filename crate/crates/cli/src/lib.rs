//! Command-line front end for `digitop`: JSON space documents in, text or
//! JSON reports out.

mod app;
pub mod document;
pub mod error;
pub mod report;

pub use app::{run, Cli, Command, Format, RunOutput, Theorem};
