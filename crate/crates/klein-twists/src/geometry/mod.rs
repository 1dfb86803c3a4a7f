//! Projective geometry of the twisted quartics: points, tangents,
//! bitangents, and the Fano structure carried by the seven bitangents.

mod bitangent;
mod fano;
mod points;
mod tangent;

pub use bitangent::{
    bitangents, frobenius_matrix_r, normalize_additive, Bitangent, BitangentSet,
    NormalizedBitangents,
};
pub use fano::{additive_defines_fano, fano_witness, FanoWitness};
pub use points::{
    canonicalize, count_points, enumerate_lines, enumerate_points, is_smooth_to_degree_six,
    points_on_curve, singular_points, Line, ProjPoint,
};
pub use tangent::{restrict_to_line, tangent_divisor, tangent_line, BinQuartic};

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeometryError {
    #[error("point does not lie on the curve")]
    PointNotOnCurve,
    #[error("curve is singular at the point; no tangent line")]
    SingularPoint,
    #[error("curve {equation} has a singular point {point}")]
    SingularCurve { equation: String, point: String },
    #[error("expected exactly 7 bitangents, found {0}")]
    WrongBitangentCount(usize),
    #[error("bitangent representatives admit no additively closed scaling")]
    NotAdditivelyClosable,
    #[error("no scaling makes the squaring matrix binary")]
    NoBinaryFrobeniusMatrix,
    #[error("tangent intersection divisor does not match the predicted multiset")]
    DivisorMismatch,
    #[error("quartic is not in the twist catalog")]
    NotATwist,
    #[error("field arithmetic failed: {0}")]
    Algebra(#[from] crate::algebra::AlgebraError),
}
