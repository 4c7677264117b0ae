//! Exact decision procedure for local rules of canonical projection tilings.
//!
//! The crate digitizes a d-plane of R^n (a slope) into a canonical
//! projection tiling, computes pattern regions in the window, derives the
//! coincidence equations on Grassmann coordinates and decides whether they
//! pin the slope down to finitely many candidates.

pub mod charcheck;
pub mod coincidence;
pub mod error;
pub mod geometry;
pub mod groebner;
pub mod linalg;
pub mod numfield;
pub mod patterns;
pub mod poly;
pub mod rational;
pub mod slope;
pub mod tiling;
pub mod upoly;

pub use error::{Error, Result};
pub use numfield::{FieldElem, FieldOp, NumberField};
pub use rational::Q;
