//! Toolchain for the ASF+ modular algebraic specification language.
//!
//! The library parses hierarchical specifications, expands
//! macro-equations, and flattens module hierarchies into a single
//! import-free module, tracking the origin and the dependencies of every
//! name.  Imports come in two flavors: use-imports keep names in their
//! namespace so repeated imports unify, while copying imports (explicit
//! renaming or parameter binding plus an instance name) instanciate the
//! affected namespaces, keeping manipulated structures apart from their
//! originals.  Parameter tuples may carry semantic conditions which are
//! only discharged against goals recorded as proven in a prove-db ledger.

pub mod core;
pub mod diagram;
pub mod error;
pub mod expand;
pub mod norm;
pub mod provedb;
pub mod syntax;
pub mod typecheck;

pub mod canonical;
pub mod cli;

pub use error::{NormError, NormResult};
