//! Command-line front end: surface spec files in, JSON/CSV reports and OBJ meshes out.
//!
//! Exit codes: 0 success, 1 usage or schema error, 2 cylindrical surface,
//! 3 I/O failure.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod error;
pub mod mesh;
pub mod report;
pub mod run;
pub mod spec_file;

pub use args::{parse_cli, Command};
pub use error::{CliError, CliResult};
pub use run::{main_with_args, run};
