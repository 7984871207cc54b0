//! Steel grade catalog and stress-strain curve models.
//!
//! Every grade shares E = 203,500 MPa and ν = 0.3. Only `fy` enters the
//! strength calculation; curves are for exporting material data to
//! external shell models.

mod catalog;
mod curve;

pub use catalog::{catalog, catalog_csv, parse_catalog, Family, Grade};
pub use curve::{engineering_curve, to_true, Measure, StressStrainCurve};

use thiserror::Error;

/// Elastic modulus shared by all grades [MPa].
pub const E_STEEL: f64 = 203_500.0;
/// Poisson's ratio shared by all grades.
pub const NU_STEEL: f64 = 0.3;

#[derive(Debug, Error, PartialEq)]
pub enum MaterialError {
    #[error("grade configuration: {0}")]
    Config(String),
    #[error("curve model for {grade}: {reason}")]
    Model { grade: String, reason: String },
    #[error("expected an engineering curve, got a true curve")]
    InvalidMeasure,
    #[error("strain {0} is not greater than -1")]
    StrainOutOfRange(f64),
}
