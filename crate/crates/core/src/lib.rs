//! Separability analysis for bipartite quantum states.

pub mod criteria;
pub mod decomposition;
pub mod error;
pub mod harness;
pub mod io;
pub mod linalg;
pub mod pauli;
pub mod states;

pub use error::{Error, Result};
