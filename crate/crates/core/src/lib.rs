//! Finite loops as Cayley tables, with tooling for conjugacy-closed loops.

pub mod elemset;
pub mod error;
pub mod extension;
pub mod fixtures;
pub mod io;
pub mod iso;
pub mod perm;
pub mod search;
pub mod structure;
pub mod audit;
pub mod classes;
pub mod classify;
pub mod table;

pub use elemset::ElemSet;
pub use error::{LoopError, Result};
pub use perm::Perm;
pub use table::LoopTable;
