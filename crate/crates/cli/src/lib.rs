//! Model files, command dispatch and emitters for the `jetvar` tool.

pub mod command;
pub mod model;
pub mod output;

pub use command::{execute, run, Command, Failure, LepageMethod};
pub use model::{ModelFile, ParseError, Warning};
pub use output::{Document, Format, Node};
