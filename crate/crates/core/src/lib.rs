//! Shift-invariance of polynomials and varieties over prime fields, cylinder
//! normalization, exhaustive measurement of discrete neighborhoods
//! `X(F_p) + U`, and the reduction from equal subset sum to non-shift-freeness.

pub mod enumeration;
pub mod error;
pub mod families;
pub mod field;
pub mod hardness;
pub mod poly;
pub mod shift;

pub use enumeration::{PointSet, VarietyInstance};
pub use error::{Error, Result};
pub use field::{FieldElement, MatrixFp, PrimeField};
pub use poly::{parse_poly, MPoly, MultiIndex, Point};
