//! Front end for `cartdec`: instance files, bundled demos and the
//! subcommands behind the `cartdec` binary.

pub mod commands;
pub mod demos;
pub mod format;

pub use commands::{CheckLevel, Options, Outcome};
