//! Fermionic monogamy and de Finetti bounds on graphs, with numerical checks.

pub mod bounds;
pub mod cli;
pub mod definetti;
pub mod error;
pub mod fock;
pub mod graph;
pub mod hamiltonian;
pub mod linalg;
pub mod par;
pub mod state;

pub use error::{Error, Result};
