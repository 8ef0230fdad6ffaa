//! Command-line companion to [`weier4_core`]: expression parsing, file
//! formats (PLY/OBJ/CSV/JSON, scalar-field text), the explicit
//! deformation family, and the `weier4` binary's subcommands.

pub mod cli;
pub mod config;
pub mod error;
pub mod export;
pub mod expr;
pub mod family;
pub mod field_file;
pub mod pipeline;

pub use cli::cli_run;
pub use error::{AppError, AppResult};
pub use expr::{parse_holo, ParseError};
