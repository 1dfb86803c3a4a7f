//! Exact algebra: binary field towers and sparse multivariate polynomials.

pub mod field;
pub mod poly;

pub use field::{
    additive_kernel, embed, is_irreducible, least_irreducible, nullspace, AlgebraError,
    Embedding, FieldContext, FieldElement, MAX_DEGREE,
};
pub use poly::{det3, reduce_mod2, Coeff, GfPoly, IntPoly, MultiPoly};
