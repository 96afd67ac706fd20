//! Pointwise curvature of 3-dimensional manifolds with a circulant structure
//! `Q` (`Q³ = id`), for the metric `g` and its associated indefinite metric
//! `g~(x, y) = g(x, Qy) + g(Qx, y)`.
//!
//! Everything is generic over [`Scalar`]: `f64`, or [`Rational`] for exact
//! results. The guide in `book/` walks through the modules in order.

// index loops mirror the tensor notation
#![allow(clippy::needless_range_loop)]

pub mod classify;
pub mod error;
pub mod jet;
pub mod lie;
pub mod qgeom;
pub mod sample;
pub mod scalar;
pub mod tensor;
pub mod tolerance;

pub use error::GeometryError;
pub use scalar::{ArithmeticMode, Rational, Scalar};
pub use tensor::{apply_q, circulant_sym, invert_sym3, QStructure, Rank4Tensor3, SymMatrix3, Vector3};
pub use tolerance::{Check, Tolerance, Verdict};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/structure.md")]
    mod structure {}
    #[doc = include_str!("../../../book/src/curvature.md")]
    mod curvature {}
    #[doc = include_str!("../../../book/src/classes.md")]
    mod classes {}
    #[doc = include_str!("../../../book/src/q-geometry.md")]
    mod q_geometry {}
    #[doc = include_str!("../../../book/src/lie-groups.md")]
    mod lie_groups {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
}
