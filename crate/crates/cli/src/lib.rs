//! Command-line front end: the text grammar and command dispatch.

pub mod parse;
pub mod run;

pub use run::{run, run_args, Cli, Output, ERROR_EXIT};
