//! Exact Ehrhart theory for hyperplane slices of rectangular prisms.
//!
//! The crate computes Ehrhart polynomials, h*-polynomials, volumes and flag
//! Eulerian numbers of the polytopes
//! `R_{k,c} = { x ∈ [0,c_1] × ⋯ × [0,c_n] : Σ x_i = k }`,
//! and checks every closed formula against brute-force enumeration.

pub mod cli;
pub mod counting;
pub mod ehrhart;
pub mod enumerate;
pub mod error;
pub mod flag;
pub mod hstar;
pub mod polyarith;
pub mod weighted_perms;

pub use counting::{CapVector, NumberCache};
pub use ehrhart::{FatSliceSpec, SliceSpec};
pub use error::{Error, Result};
pub use polyarith::{IntPoly, LinearForm, RatPoly};
