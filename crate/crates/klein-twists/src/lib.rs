//! The 168 quartic twists of the Klein curve over F2.
//!
//! Every invertible 3x3 matrix P over F2 determines a smooth plane quartic
//! by a determinantal quotient; the quartic is a form of the Klein curve,
//! and its arithmetic (point counts, zeta function, bitangents, Frobenius
//! action) is controlled by the conjugacy class of P. This crate constructs
//! all 168 twists, classifies them, and verifies the geometry and arithmetic
//! behind the classification.

pub mod algebra;
pub mod geometry;
pub mod group;
pub mod identities;
pub mod report;
pub mod verify;
pub mod twist;
pub mod zeta;
