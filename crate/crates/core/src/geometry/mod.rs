//! Lipped channel cross-sections: SFIA designations, centerline geometry with
//! round corners, strip discretization and gross section properties.

mod config;
mod designation;
mod mesh;
mod properties;
mod section;

pub use config::GeometryConfig;
pub use designation::{parse_designation, Designation};
pub use mesh::{discretize, MeshConfig};
pub use properties::{section_properties, SectionProperties};
pub use section::{build_section, ElementRole, SectionGeometry, Segment, SegmentKind};

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum GeometryError {
    #[error("cannot parse designation {text:?}: bad token {token:?}")]
    Parse { text: String, token: String },
    #[error("unsupported member type {marker:?} in {text:?} (only S studs are supported)")]
    UnsupportedProfile { text: String, marker: String },
    #[error("geometry configuration: {0}")]
    Config(String),
    #[error("invalid geometry: {0}")]
    Invalid(String),
}
