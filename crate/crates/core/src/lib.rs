//! Numerical verification of mean-curvature, sphere-area and volume
//! comparison estimates under integral Bakry-Émery Ricci bounds.
//!
//! Spaces are rotationally symmetric, `dr² + φ(r)² g_{S^{n-1}}` with a
//! radial weight `f(r)`, and every quantity is evaluated at the pole.
//! The [`theorems`] module computes both sides of each inequality and
//! reports the margin.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod expr;
pub mod mmspace;
pub mod modelspace;
pub mod norms;
pub mod numerics;
pub mod report;
pub mod scenarios;
pub mod special;
pub mod sweep;
pub mod theorems;

pub use error::{Error, Result};
pub use expr::{parse, Expr, Jet2};
pub use mmspace::{CurvatureProfile, MeanCurvatures, RotSymSpace};
pub use modelspace::{ModelParams, RangePolicy};
pub use norms::NormSpec;
pub use numerics::QuadratureSpec;
pub use theorems::{CheckReport, CheckStatus};
