//! Unitarily invariant norms, symmetric anti-norms and unified entropies of
//! matrices under partial trace and quantum channels, with a seeded audit
//! that checks the dimension-dependent bounds relating them.
//!
//! Bipartite operators use the `H_A ⊗ H_B` Kronecker layout: `W` is an
//! `m × m` grid of `n × n` blocks and `Tr_B W` replaces each block by its
//! trace.

pub mod antinorms;
pub mod audit;
pub mod bipartite;
pub mod channels;
pub mod cli;
pub mod entropy;
pub mod error;
pub mod format;
pub mod linalg;
pub mod norms;

pub use error::{Error, Result};
pub use linalg::{kron, ComplexMatrix};
