//! Elastic buckling and Direct Strength Method capacities for cold-formed
//! steel lipped channels.
//!
//! The pipeline runs from an SFIA stud designation to a member capacity:
//!
//! - [`geometry`] builds the centerline cross-section and its properties,
//! - [`fsm`] computes the finite strip signature curve and its minima,
//! - [`dsm`] evaluates global buckling and the column strength curves,
//! - [`imperfection`] synthesizes buckling-mode imperfection fields for
//!   external shell models,
//! - [`study`] drives the full section × grade × bracing matrix.
//!
//! Internal units are N, mm and MPa throughout.

pub mod dsm;
pub mod fsm;
pub mod geometry;
pub mod imperfection;
pub mod material;
pub mod study;
pub mod units;

pub use dsm::{BracingModel, ElasticBucklingSet, StrengthResult};
pub use fsm::{SignatureCurve, StripMesh};
pub use geometry::{Designation, GeometryConfig, SectionGeometry, SectionProperties};
pub use material::Grade;
