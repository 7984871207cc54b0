use std::fmt;
use std::str::FromStr;

use super::GeometryError;
use crate::units::in_to_mm;

/// Decoded SFIA member designation, e.g. `250S162-33`.
///
/// Dimensions are kept in inches as encoded; the integer codes are retained
/// so that formatting reproduces the canonical text.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Designation {
    depth_code: u32,
    flange_code: u32,
    mils: u32,
    raw_text: String,
}

impl Designation {
    /// Nominal out-to-out web depth [in].
    pub fn web_depth(&self) -> f64 {
        self.depth_code as f64 / 100.0
    }

    /// Nominal out-to-out flange width [in].
    pub fn flange_width(&self) -> f64 {
        self.flange_code as f64 / 100.0
    }

    /// Designation (not design) thickness [in].
    pub fn designation_thickness(&self) -> f64 {
        self.mils as f64 / 1000.0
    }

    pub fn web_depth_mm(&self) -> f64 {
        in_to_mm(self.web_depth())
    }

    pub fn flange_width_mm(&self) -> f64 {
        in_to_mm(self.flange_width())
    }

    pub fn depth_code(&self) -> u32 {
        self.depth_code
    }

    pub fn flange_code(&self) -> u32 {
        self.flange_code
    }

    pub fn mils(&self) -> u32 {
        self.mils
    }

    pub fn raw_text(&self) -> &str {
        &self.raw_text
    }

    /// The section family without thickness, e.g. `250S162`.
    pub fn family(&self) -> String {
        format!("{}S{}", self.depth_code, self.flange_code)
    }
}

impl fmt::Display for Designation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}S{}-{}", self.depth_code, self.flange_code, self.mils)
    }
}

impl FromStr for Designation {
    type Err = GeometryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_designation(s)
    }
}

fn code(text: &str, token: &str) -> Result<u32, GeometryError> {
    let bad = || GeometryError::Parse {
        text: text.to_string(),
        token: token.to_string(),
    };
    if token.is_empty() || !token.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    match token.parse::<u32>() {
        Ok(v) if v > 0 => Ok(v),
        _ => Err(bad()),
    }
}

/// Parses `<depth>S<flange>-<mils>`.
pub fn parse_designation(text: &str) -> Result<Designation, GeometryError> {
    let trimmed = text.trim();
    let (shape, mils) = trimmed.split_once('-').ok_or_else(|| GeometryError::Parse {
        text: trimmed.to_string(),
        token: trimmed.to_string(),
    })?;

    let split = shape
        .find(|c: char| !c.is_ascii_digit())
        .ok_or_else(|| GeometryError::Parse {
            text: trimmed.to_string(),
            token: shape.to_string(),
        })?;
    let depth = &shape[..split];
    let rest = &shape[split..];
    let marker_len = rest
        .find(|c: char| c.is_ascii_digit())
        .unwrap_or(rest.len());
    let marker = &rest[..marker_len];
    let flange = &rest[marker_len..];

    let depth_code = code(trimmed, depth)?;
    if marker != "S" {
        if marker.chars().all(|c| c.is_ascii_alphabetic()) && !marker.is_empty() {
            return Err(GeometryError::UnsupportedProfile {
                text: trimmed.to_string(),
                marker: marker.to_string(),
            });
        }
        return Err(GeometryError::Parse {
            text: trimmed.to_string(),
            token: marker.to_string(),
        });
    }
    let flange_code = code(trimmed, flange)?;
    let mils = code(trimmed, mils)?;

    Ok(Designation {
        depth_code,
        flange_code,
        mils,
        raw_text: trimmed.to_string(),
    })
}
