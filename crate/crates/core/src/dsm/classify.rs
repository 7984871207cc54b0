use std::fmt;
use std::str::FromStr;

use super::{positive, DsmConstants, DsmError, StrengthCurves};

/// Cross-section restraint applied in the strength model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BracingModel {
    /// Only local buckling is possible.
    Local,
    /// Local and distortional buckling.
    Distortional,
    /// Local, distortional and global buckling.
    Global,
}

impl BracingModel {
    pub const ALL: [BracingModel; 3] = [BracingModel::Local, BracingModel::Distortional, BracingModel::Global];
}

impl fmt::Display for BracingModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BracingModel::Local => "local_model",
            BracingModel::Distortional => "distortional_model",
            BracingModel::Global => "global_model",
        })
    }
}

impl FromStr for BracingModel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "local" | "local_model" => Ok(BracingModel::Local),
            "distortional" | "distortional_model" => Ok(BracingModel::Distortional),
            "global" | "global_model" => Ok(BracingModel::Global),
            other => Err(format!("unknown bracing model {other:?} (local, distortional, global)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Controlling {
    L,
    D,
    LG,
}

impl fmt::Display for Controlling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Controlling::L => "L",
            Controlling::D => "D",
            Controlling::LG => "LG",
        })
    }
}

impl FromStr for Controlling {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "L" => Ok(Controlling::L),
            "D" => Ok(Controlling::D),
            "LG" => Ok(Controlling::LG),
            other => Err(format!("unknown controlling mode {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Flag {
    /// No distortional critical load, so the distortional check was skipped.
    DNotEvaluated,
    /// Distortional controls while global buckling reduces Pne; the
    /// distortional-global interaction is not part of the strength model.
    DgNotModeled,
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flag::DNotEvaluated => "D_not_evaluated",
            Flag::DgNotModeled => "DG_not_modeled",
        })
    }
}

impl FromStr for Flag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "D_not_evaluated" => Ok(Flag::DNotEvaluated),
            "DG_not_modeled" => Ok(Flag::DgNotModeled),
            other => Err(format!("unknown flag {other:?}")),
        }
    }
}

/// Squash load and elastic critical loads of one member [N].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElasticBucklingSet {
    pub py: f64,
    pub pcr_l: Option<f64>,
    /// `None` when the section has no distortional critical load.
    pub pcr_d: Option<f64>,
    pub pcre: Option<f64>,
}

impl ElasticBucklingSet {
    pub fn new(area: f64, fy: f64, pcr_l: f64, pcr_d: Option<f64>, pcre: Option<f64>) -> Self {
        Self { py: area * fy, pcr_l: Some(pcr_l), pcr_d, pcre }
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        Self {
            py: self.py * alpha,
            pcr_l: self.pcr_l.map(|v| v * alpha),
            pcr_d: self.pcr_d.map(|v| v * alpha),
            pcre: self.pcre.map(|v| v * alpha),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StrengthResult {
    pub bracing: BracingModel,
    /// Global strength; equals Py when global buckling is restrained.
    pub pne: f64,
    pub pnl: f64,
    pub pnd: Option<f64>,
    pub pnlo: f64,
    pub pn: f64,
    pub lambda_c: Option<f64>,
    pub lambda_l: f64,
    pub lambda_d: Option<f64>,
    pub controlling: Controlling,
    pub flags: Vec<Flag>,
}

pub fn classify(bracing: BracingModel, set: &ElasticBucklingSet) -> Result<StrengthResult, DsmError> {
    classify_with(&DsmConstants::default(), bracing, set)
}

/// Nominal axial strength under the given restraint. Ties go to the local
/// (or local-global) mode.
pub fn classify_with(
    curves: &dyn StrengthCurves,
    bracing: BracingModel,
    set: &ElasticBucklingSet,
) -> Result<StrengthResult, DsmError> {
    let py = positive("Py", set.py)?;
    let pcr_l = positive("PcrL", set.pcr_l.ok_or(DsmError::Incomplete("PcrL"))?)?;
    let (pnlo, lambda_lo) = curves.local(py, pcr_l);
    let dist = match set.pcr_d {
        Some(p) => Some(curves.distortional(py, positive("PcrD", p)?)),
        None => None,
    };
    let mut flags = Vec::new();

    let result = match bracing {
        BracingModel::Local => StrengthResult {
            bracing,
            pne: py,
            pnl: pnlo,
            pnd: None,
            pnlo,
            pn: pnlo,
            lambda_c: None,
            lambda_l: lambda_lo,
            lambda_d: None,
            controlling: Controlling::L,
            flags,
        },
        BracingModel::Distortional => {
            let (pn, controlling) = match dist {
                Some((pnd, _)) if pnd < pnlo => (pnd, Controlling::D),
                Some(_) => (pnlo, Controlling::L),
                None => {
                    flags.push(Flag::DNotEvaluated);
                    (pnlo, Controlling::L)
                }
            };
            StrengthResult {
                bracing,
                pne: py,
                pnl: pnlo,
                pnd: dist.map(|d| d.0),
                pnlo,
                pn,
                lambda_c: None,
                lambda_l: lambda_lo,
                lambda_d: dist.map(|d| d.1),
                controlling,
                flags,
            }
        }
        BracingModel::Global => {
            let pcre = positive("Pcre", set.pcre.ok_or(DsmError::Incomplete("Pcre"))?)?;
            let (pne, lambda_c) = curves.global(py, pcre);
            let (pnl, lambda_l) = curves.local(pne, pcr_l);
            let (pn, controlling) = match dist {
                Some((pnd, _)) if pnd < pnl => {
                    if pne < py {
                        flags.push(Flag::DgNotModeled);
                    }
                    (pnd, Controlling::D)
                }
                Some(_) => (pnl, Controlling::LG),
                None => {
                    flags.push(Flag::DNotEvaluated);
                    (pnl, Controlling::LG)
                }
            };
            StrengthResult {
                bracing,
                pne,
                pnl,
                pnd: dist.map(|d| d.0),
                pnlo,
                pn,
                lambda_c: Some(lambda_c),
                lambda_l,
                lambda_d: dist.map(|d| d.1),
                controlling,
                flags,
            }
        }
    };
    Ok(result)
}
