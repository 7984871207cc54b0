use std::path::Path;

use super::StudyError;
use crate::dsm::BracingModel;
use crate::geometry::{parse_designation, Designation};
use crate::material::{Family, Grade};

/// The forty sections of the default study, as `designation,thickness_mils` rows.
pub const DEFAULT_MATRIX: &str = "\
designation,thickness_mils
250S162,33
250S162,43
250S162,54
250S162,68
250S137,54
350S162,33
350S162,43
350S162,54
362S137,68
362S162,68
362S200,54
400S137,54
400S162,68
400S200,33
400S200,43
400S200,54
550S162,33
550S162,43
550S162,54
600S137,43
600S137,54
600S137,68
600S162,68
600S162,97
600S200,33
600S200,43
600S200,54
600S200,97
800S137,54
800S137,68
800S162,68
800S200,33
800S250,43
800S250,54
1000S162,43
1000S200,97
1200S162,54
1200S200,97
1200S250,54
1200S162,68
";

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LengthRule {
    /// Three times the distortional critical half-wavelength.
    ThreeTimesLcrD,
    Explicit(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseSpec {
    pub designation: Designation,
    pub grade: Grade,
    pub bracing: BracingModel,
    pub length_rule: LengthRule,
}

/// Parses a matrix file of `designation,thickness_mils` rows.
pub fn parse_matrix(text: &str) -> Result<Vec<Designation>, StudyError> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let headers = rdr.headers().map_err(|e| StudyError::Config(e.to_string()))?.clone();
    if headers.iter().collect::<Vec<_>>() != ["designation", "thickness_mils"] {
        return Err(StudyError::Config(format!(
            "matrix header must be `designation,thickness_mils`, got `{}`",
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let row = i + 1;
        let rec = rec.map_err(|e| StudyError::Config(format!("row {row}: {e}")))?;
        let mils: u32 = rec[1].parse().map_err(|_| {
            StudyError::Config(format!("row {row}, column thickness_mils: {:?} is not an integer", &rec[1]))
        })?;
        let text = format!("{}-{mils}", &rec[0]);
        let d = parse_designation(&text)
            .map_err(|e| StudyError::Config(format!("row {row}, column designation: {e}")))?;
        if out.contains(&d) {
            return Err(StudyError::Config(format!("row {row}: {text} is listed twice")));
        }
        out.push(d);
    }
    if out.is_empty() {
        return Err(StudyError::Config("matrix lists no sections".into()));
    }
    Ok(out)
}

/// `default` selects the built-in matrix; anything else is a file path.
pub fn load_matrix(source: &str) -> Result<Vec<Designation>, StudyError> {
    if source == "default" {
        return parse_matrix(DEFAULT_MATRIX);
    }
    let path = Path::new(source);
    let text = std::fs::read_to_string(path).map_err(|e| StudyError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_matrix(&text)
}

/// Selects grades by name, in the order given.
pub fn select_grades(catalog: &[Grade], names: &[String]) -> Result<Vec<Grade>, StudyError> {
    names
        .iter()
        .enumerate()
        .map(|(i, n)| {
            catalog
                .iter()
                .find(|g| g.name == *n || (n == "mild" && g.family == Family::Mild))
                .cloned()
                .ok_or_else(|| StudyError::Config(format!("grade {} ({n:?}) is not in the catalog", i + 1)))
        })
        .collect()
}

/// Sections × grades × bracings in that nesting order. With
/// `ahss_max_thickness`, AHSS cases thicker than the limit [mm] are dropped.
pub fn cases(
    sections: &[Designation],
    grades: &[Grade],
    bracings: &[BracingModel],
    length_rule: LengthRule,
    thickness_mm: impl Fn(&Designation) -> f64,
    ahss_max_thickness: Option<f64>,
) -> Result<Vec<CaseSpec>, StudyError> {
    if let LengthRule::Explicit(l) = length_rule {
        if !(l > 0.0) {
            return Err(StudyError::Config(format!("explicit member length must be positive, got {l}")));
        }
    }
    let mut out = Vec::with_capacity(sections.len() * grades.len() * bracings.len());
    for d in sections {
        for g in grades {
            if let Some(limit) = ahss_max_thickness {
                if g.family != Family::Mild && thickness_mm(d) > limit {
                    continue;
                }
            }
            for &b in bracings {
                out.push(CaseSpec { designation: d.clone(), grade: g.clone(), bracing: b, length_rule });
            }
        }
    }
    Ok(out)
}
