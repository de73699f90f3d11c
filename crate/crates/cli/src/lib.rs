//! Batch frontend for `rigidcoh`: task documents in, result documents out.

pub mod document;
pub mod env;
pub mod ops;
pub mod payload;
pub mod runner;

pub use document::{parse, InputError, InputErrorKind, TaskDocument};
pub use runner::{prepare, run, Prepared, ResultDocument, Status, TaskResult};

/// The bundled worked examples, printed by `rigidcoh examples`.
pub const CORPUS: &str = include_str!("../corpus/worked_examples.json");
