//! Left ideal classes of Eichler orders in totally definite quaternion
//! algebras over Q and real quadratic fields of narrow class number one,
//! their Hom-modules with the O_L-valued degree form, theta series,
//! Brandt matrices, and the rank of the span of theta differences.

#![allow(clippy::needless_range_loop)]

pub mod basis;
pub mod brandt;
pub mod enumerate;
pub mod error;
pub mod field;
pub mod hilbert;
pub mod linalg;
pub mod orders;
pub mod poly;
pub mod quadratic;
pub mod quaternion;
pub mod report;
pub mod theta;

pub use error::{Error, Result};
