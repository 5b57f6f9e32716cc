//! Combinatorics of Arthur packets for symplectic and even orthogonal groups and their
//! similitude groups: parameters, component groups, packet labels, the recursive packet
//! formula as a rewrite system, endoscopic decompositions and exponent orders.

pub mod cli;
pub mod component_group;
pub mod endoscopy;
pub mod error;
pub mod exponents;
pub mod groth_engine;
pub mod packet_enum;
pub mod param_core;

pub use error::{Error, Result};
