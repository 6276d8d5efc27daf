//! Computational workbench for Q-homology quadrics: minimal surfaces of
//! general type with q = p_g = 0 and b_2 = 2 (equivalently K^2 = 8, chi = 1).
//!
//! The crate provides, roughly bottom-up:
//!
//! - concrete finite groups as multiplication tables built from permutation
//!   generators, with canonical element indexing ([`group`]);
//! - exact arithmetic on the rank-2 numerical lattice of such a surface:
//!   intersection numbers, adjunction, Riemann-Roch, negative-curve and
//!   fibration classification, nef/effective cones ([`lattice`]);
//! - enumeration of spherical generating systems and admissible free pairs
//!   defining surfaces isogenous to a product of curves ([`enumerate`]);
//! - the parity classifier for the intersection form of such a surface
//!   ([`parity`]);
//! - integral first homology of the quotient surface via coset rewriting and
//!   Smith normal form ([`homology`], [`snf`]);
//! - Mori-dream-space verdicts with rule traces ([`mds`]);
//! - an embedded reference table of the twelve unmixed-type product surfaces
//!   with p_g = q = 0, and a verifier that recomputes every column of it
//!   from the group data ([`table1`]).

pub mod data;
pub mod enumerate;
pub mod group;
pub mod homology;
pub mod lattice;
pub mod mds;
pub mod parity;
pub mod snf;
pub mod table1;

mod error;
pub use error::{Error, Result};
