//! Exact computations around the ring `R(n)`, graph foldings and Springer-type flag varieties.

pub mod combinatorics;
pub mod exterior;
pub mod flag_lab;
pub mod graph_rings;
pub mod graphs;
pub mod linalg;
pub mod mvss;
pub mod springer;
pub mod error;
pub mod subset;
pub mod topology;

pub use error::{KrlError, Result};
pub use subset::Subset;
