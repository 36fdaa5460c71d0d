//! Command-line front end for `hahn-core`: an expression language for
//! generalised power series, a family-descriptor language, and the `hahn`
//! subcommands built on them.

pub mod app;
pub mod descriptor;
pub mod semantics;
pub mod syntax;

pub use app::{run, Outcome};
