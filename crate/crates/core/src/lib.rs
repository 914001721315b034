//! Exact computation of rational preperiodic points of morphisms of projective space.

pub mod algebra;
pub mod closure;
pub mod dynatomic;
pub mod error;
pub mod global;
pub mod modp;
pub mod pipeline;
pub mod poly;
pub mod sweep;

pub use error::{Error, Result};
