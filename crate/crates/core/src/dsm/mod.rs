//! Closed-form global buckling, Direct Strength Method column curves and
//! controlling-mode classification.

mod classify;
mod curves;
mod global;

pub use classify::{
    classify, classify_with, BracingModel, Controlling, ElasticBucklingSet, Flag, StrengthResult,
};
pub use curves::{
    pne, pnd, pnl, pnlo, reduced_global_curve, BranchSwitch, DsmConstants, StrengthCurves,
};
pub use global::{global_elastic, global_elastic_with, GlobalBuckling, GlobalMode, GlobalSettings};

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum DsmError {
    #[error("{name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("incomplete elastic buckling set: {0} is required")]
    Incomplete(&'static str),
    #[error("section property error: {0}")]
    Property(String),
    #[error("constants table: {0}")]
    Constants(String),
}

pub(crate) fn positive(name: &'static str, value: f64) -> Result<f64, DsmError> {
    if value > 0.0 && !value.is_nan() {
        Ok(value)
    } else {
        Err(DsmError::NonPositive { name, value })
    }
}
