//! Finite-field combinatorial geometry at desk scale.
//!
//! The crate provides exact arithmetic in F_q (odd q), character-sum Fourier
//! analysis on F_q^d, incidence / dot-product / distance counting, generators
//! for the explicit extremal constructions, and a small experiment harness
//! that turns each inequality into a machine-checkable [`BoundReport`].

pub mod cli;
pub mod constructions;
pub mod error;
pub mod field;
pub mod geometry;
pub mod harness;
pub mod incidence;
pub mod report;
pub mod spectral;

pub use error::{Error, Result};
pub use field::{field_arithmetic, make_field, ArithOp, Elem, Field, FieldSpec, Scalar};
pub use geometry::{PointSet, Space};
pub use report::{BoundReport, Measurement, Mode, Quantity};
