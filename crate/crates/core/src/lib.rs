//! Exact and interval-certified tools for packing numbers of function
//! classes with bounded VC dimension and near-orthogonal structure.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod bounds;
pub mod cli;
pub mod constructions;
pub mod entropy;
pub mod error;
pub mod experiments;
pub mod families;
pub mod interval;
pub mod rng;

pub use error::{Error, Result};
pub use families::FunctionClass;
pub use interval::{Dyadic, RigorInterval};
