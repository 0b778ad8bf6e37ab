//! Hypercube Q_n under structure faults: vertex-disjoint subcube fault
//! families, brute-force connectivity and fault-diameter oracles,
//! worst-case fault constructions, and a fault-avoiding router whose path
//! lengths stay within the known fault-diameter bounds.

pub mod cli;
pub mod cube;
pub mod error;
pub mod fault;
pub mod metrics;
pub mod oracle;
pub mod router;

pub use cube::{Path, Subcube, Vertex};
pub use error::{Error, Result};
pub use fault::{FaultFamily, FaultMode};
pub use metrics::{Diameter, SurvivalGraph};
