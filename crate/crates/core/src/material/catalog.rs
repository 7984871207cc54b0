use std::fmt;
use std::str::FromStr;

use super::{MaterialError, E_STEEL, NU_STEEL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Mild,
    DualPhase,
    Martensitic,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Mild => "mild",
            Family::DualPhase => "dual_phase",
            Family::Martensitic => "martensitic",
        })
    }
}

impl FromStr for Family {
    type Err = MaterialError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "mild" => Ok(Family::Mild),
            "dual_phase" => Ok(Family::DualPhase),
            "martensitic" => Ok(Family::Martensitic),
            other => Err(MaterialError::Config(format!("unknown family {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Grade {
    pub name: String,
    pub family: Family,
    /// Yield stress [MPa].
    pub fy: f64,
    /// Ultimate tensile stress [MPa].
    pub fu: f64,
    /// Engineering strain at Fu.
    pub uniform_elongation: f64,
    /// Hollomon exponent of the hardening branch; `None` derives it from the
    /// (proportional limit, Fu at uniform elongation) anchors.
    pub hardening_exponent: Option<f64>,
    /// Proportional limit as a fraction of Fy; 1.0 is a sharp yield point.
    pub knee_ratio: f64,
    pub e: f64,
    pub nu: f64,
}

impl Grade {
    pub fn new(name: &str, family: Family, fy: f64, fu: f64, uniform_elongation: f64, knee_ratio: f64) -> Self {
        Self {
            name: name.to_string(),
            family,
            fy,
            fu,
            uniform_elongation,
            hardening_exponent: None,
            knee_ratio,
            e: E_STEEL,
            nu: NU_STEEL,
        }
    }

    pub fn validate(&self) -> Result<(), MaterialError> {
        let bad = |reason: String| {
            Err(MaterialError::Config(format!("grade {}: {reason}", self.name)))
        };
        if self.name.trim().is_empty() {
            return bad("empty name".into());
        }
        if !(self.fy > 0.0 && self.fy <= self.fu) {
            return bad(format!("need 0 < Fy <= Fu, got Fy={} Fu={}", self.fy, self.fu));
        }
        if !(self.uniform_elongation > 0.0) {
            return bad("uniform elongation must be positive".into());
        }
        if !(self.knee_ratio > 0.0 && self.knee_ratio <= 1.0) {
            return bad(format!("knee ratio must be in (0, 1], got {}", self.knee_ratio));
        }
        if self.e != E_STEEL || self.nu != NU_STEEL {
            return bad("E and nu are fixed at 203500 MPa and 0.3".into());
        }
        Ok(())
    }
}

/// Default grades ordered by Fy: the mild baseline and five AHSS grades.
pub fn catalog() -> Vec<Grade> {
    vec![
        Grade::new("mild207", Family::Mild, 207.0, 330.0, 0.20, 1.0),
        Grade::new("DP350", Family::DualPhase, 350.0, 600.0, 0.14, 0.7),
        Grade::new("DP500", Family::DualPhase, 500.0, 800.0, 0.10, 0.7),
        Grade::new("DP700", Family::DualPhase, 700.0, 1000.0, 0.08, 0.7),
        Grade::new("MS950", Family::Martensitic, 950.0, 1200.0, 0.04, 0.8),
        Grade::new("MS1250", Family::Martensitic, 1250.0, 1500.0, 0.035, 0.8),
    ]
}

/// Parses a grade catalog CSV with header
/// `name,family,fy_mpa,fu_mpa,uniform_elongation,hardening_exponent,knee_ratio`.
/// An empty `hardening_exponent` derives the exponent from the anchors.
pub fn parse_catalog(text: &str) -> Result<Vec<Grade>, MaterialError> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let expected = [
        "name",
        "family",
        "fy_mpa",
        "fu_mpa",
        "uniform_elongation",
        "hardening_exponent",
        "knee_ratio",
    ];
    let headers = rdr.headers().map_err(|e| MaterialError::Config(e.to_string()))?.clone();
    if headers.iter().collect::<Vec<_>>() != expected {
        return Err(MaterialError::Config(format!(
            "header must be {}, got {}",
            expected.join(","),
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut grades = Vec::new();
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| MaterialError::Config(format!("row {}: {e}", row + 1)))?;
        let num = |i: usize| -> Result<f64, MaterialError> {
            rec[i].parse::<f64>().map_err(|_| {
                MaterialError::Config(format!("row {}, column {}: {:?} is not a number", row + 1, expected[i], &rec[i]))
            })
        };
        let mut g = Grade::new(&rec[0], rec[1].parse()?, num(2)?, num(3)?, num(4)?, num(6)?);
        if !rec[5].is_empty() {
            g.hardening_exponent = Some(num(5)?);
        }
        g.validate()?;
        grades.push(g);
    }
    if grades.is_empty() {
        return Err(MaterialError::Config("catalog has no grades".into()));
    }
    let mild = grades.iter().filter(|g| g.family == Family::Mild).count();
    if mild != 1 {
        return Err(MaterialError::Config(format!(
            "catalog needs exactly one mild baseline grade, found {mild}"
        )));
    }
    Ok(grades)
}

/// Serializes grades in the [`parse_catalog`] format.
pub fn catalog_csv(grades: &[Grade]) -> String {
    let mut out = String::from("name,family,fy_mpa,fu_mpa,uniform_elongation,hardening_exponent,knee_ratio\n");
    for g in grades {
        let n = g.hardening_exponent.map(|v| v.to_string()).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            g.name, g.family, g.fy, g.fu, g.uniform_elongation, n, g.knee_ratio
        ));
    }
    out
}
