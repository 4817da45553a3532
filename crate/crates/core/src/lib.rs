//! Least-squares finite elements for the eigenvalue problem of linear
//! elasticity in two dimensions.
//!
//! The crate discretizes the stress/displacement (two-field) and the
//! stress/displacement/vorticity (three-field) least-squares formulations
//! with RT1 stress rows, continuous P2 displacements and discontinuous P1
//! vorticity, assembles the resulting pencils `A x = omega B x` (with `A`
//! symmetric and `B` singular) and solves them by swapping the roles of the
//! two matrices.

#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod assembly;
pub mod error;
pub mod fespace;
pub mod gevp;
pub mod mesh;
pub mod sparse;
pub mod study;

pub use error::{Error, Result};
