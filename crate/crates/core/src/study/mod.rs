//! Parametric study driver: section matrix × grades × bracing models,
//! result tables, aggregate statistics, figures and the command line.

pub mod cli;
mod matrix;
mod member;
mod plot;
mod report;
mod run;

pub use matrix::{cases, load_matrix, parse_matrix, select_grades, CaseSpec, LengthRule, DEFAULT_MATRIX};
pub use member::{member_imperfection, MemberImperfection};
pub use plot::{
    distortional_chart, global_chart, histogram_chart, local_chart, plot_report, Chart, Series, PLOT_FILES,
    WATERMARK,
};
pub use report::{
    histogram, lambda_histogram, lg_lambdas, parse_results_csv, ratio_stats, report_csv, results_csv, CaseResult,
    Histogram, RatioStats, StudyReport, Tally, RESULT_COLUMNS,
};
pub use run::{run_case, run_matrix, ElasticCache, PcreSource, SectionElastic, StudyContext};

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum StudyError {
    #[error("configuration: {0}")]
    Config(String),
    #[error("{0}")]
    Case(String),
    #[error("every case failed; first diagnostics: {0}")]
    AllFailed(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("results table: {0}")]
    Parse(String),
    #[error(transparent)]
    Geometry(#[from] crate::geometry::GeometryError),
    #[error(transparent)]
    Fsm(#[from] crate::fsm::FsmError),
    #[error(transparent)]
    Dsm(#[from] crate::dsm::DsmError),
    #[error(transparent)]
    Material(#[from] MaterialMessage),
    #[error("imperfection: {0}")]
    Imperfection(String),
}

/// Material errors carried by message so the study error stays `Clone`.
#[derive(Debug, Clone, Error, PartialEq)]
#[error("{0}")]
pub struct MaterialMessage(pub String);

impl From<crate::material::MaterialError> for StudyError {
    fn from(e: crate::material::MaterialError) -> Self {
        StudyError::Material(MaterialMessage(e.to_string()))
    }
}

impl From<crate::imperfection::ImperfectionError> for StudyError {
    fn from(e: crate::imperfection::ImperfectionError) -> Self {
        StudyError::Imperfection(e.to_string())
    }
}
