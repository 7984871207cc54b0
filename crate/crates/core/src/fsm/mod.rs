//! Semi-analytical finite strip method for simply-supported members.
//!
//! Each strip carries linear membrane and cubic bending shape functions
//! across its width and a single sine half-wave of length `a` along the
//! member. For a uniform compression reference stress the lowest positive
//! eigenvalue of `K φ = λ Kg φ` is the critical load factor at `a`; sweeping
//! `a` gives the signature curve whose minima identify local and
//! distortional buckling.

mod analysis;
mod assemble;
mod curve;
mod distortional;
mod eigen;
mod mesh;
mod minima;
mod strip;

pub use analysis::{analyze_section, DistortionalSource, ElasticAnalysis, FsmSettings};
pub use assemble::assemble;
pub use curve::{evaluate_half_wavelength, mode_csv, signature_curve, SignatureCurve, WavelengthSweep};
pub use distortional::closed_form_distortional_length;
pub use eigen::{solve_buckling, BucklingMode};
pub use mesh::{Dof, Strip, StripMesh, DOF_PER_NODE};
pub use minima::{
    find_discrete_minima, find_minima, golden_section_min, CriticalPoint, MinimaReport,
    MinimumKind, MinimaSettings,
};
pub use strip::{strip_elastic_stiffness, strip_geometric_stiffness, StripSection};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FsmError {
    #[error("invalid strip geometry: {0}")]
    Geometry(String),
    #[error("mesh is disconnected: {0}")]
    Disconnected(String),
    #[error("no positive load factor: reference state never buckles")]
    UnstableReference,
    #[error("singular pencil: {0}")]
    Numerical(String),
    #[error("at half-wavelength {half_wavelength} mm: {source}")]
    AtHalfWavelength {
        half_wavelength: f64,
        #[source]
        source: Box<FsmError>,
    },
    #[error("invalid sweep: {0}")]
    Sweep(String),
    #[error(transparent)]
    Section(#[from] crate::geometry::GeometryError),
}
