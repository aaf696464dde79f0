#![allow(clippy::needless_range_loop)]

pub mod corpus;
pub mod diagram;
pub mod embedding;
pub mod error;
pub mod graph;
pub mod invariants;
pub mod io;
pub mod trisection;
pub mod validation;

pub use error::{Error, Result};
