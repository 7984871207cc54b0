use std::fmt::Write as _;

use super::StudyError;
use crate::dsm::{BracingModel, Controlling, Flag, StrengthResult};

/// Column order of `results.csv`.
pub const RESULT_COLUMNS: [&str; 20] = [
    "designation",
    "grade",
    "bracing",
    "L_mm",
    "PcrL_N",
    "PcrD_N",
    "Pcre_N",
    "Py_N",
    "Pne_N",
    "PnL_N",
    "PnD_N",
    "PnLo_N",
    "Pn_N",
    "lambda_c",
    "lambda_L",
    "lambda_d",
    "controlling",
    "flags",
    "LcrL_mm",
    "LcrD_mm",
];

#[derive(Debug, Clone, PartialEq)]
pub struct CaseResult {
    pub designation: String,
    pub grade: String,
    pub bracing: BracingModel,
    pub length: f64,
    pub lcr_l: f64,
    pub lcr_d: Option<f64>,
    pub py: f64,
    pub pcr_l: f64,
    pub pcr_d: Option<f64>,
    pub pcre: Option<f64>,
    pub strength: StrengthResult,
    /// Study-level flags, written after the strength flags.
    pub notes: Vec<String>,
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl CaseResult {
    pub fn ratio(&self) -> Option<f64> {
        self.pcr_d.map(|d| self.pcr_l / d)
    }

    pub fn pn_over_py(&self) -> f64 {
        self.strength.pn / self.py
    }

    pub fn pn_over_pne(&self) -> f64 {
        self.strength.pn / self.strength.pne
    }

    pub fn flags(&self) -> Vec<String> {
        self.strength.flags.iter().map(|f| f.to_string()).chain(self.notes.iter().cloned()).collect()
    }

    pub fn csv_fields(&self) -> Vec<String> {
        let s = &self.strength;
        vec![
            self.designation.clone(),
            self.grade.clone(),
            self.bracing.to_string(),
            self.length.to_string(),
            self.pcr_l.to_string(),
            opt(self.pcr_d),
            opt(self.pcre),
            self.py.to_string(),
            s.pne.to_string(),
            s.pnl.to_string(),
            opt(s.pnd),
            s.pnlo.to_string(),
            s.pn.to_string(),
            opt(s.lambda_c),
            s.lambda_l.to_string(),
            opt(s.lambda_d),
            s.controlling.to_string(),
            self.flags().join(";"),
            self.lcr_l.to_string(),
            opt(self.lcr_d),
        ]
    }

    pub fn from_csv_fields(f: &[&str]) -> Result<Self, StudyError> {
        if f.len() != RESULT_COLUMNS.len() {
            return Err(StudyError::Parse(format!("expected {} columns, got {}", RESULT_COLUMNS.len(), f.len())));
        }
        let num = |i: usize| -> Result<f64, StudyError> {
            f[i].parse::<f64>()
                .map_err(|_| StudyError::Parse(format!("column {}: {:?} is not a number", RESULT_COLUMNS[i], f[i])))
        };
        let opt_num = |i: usize| -> Result<Option<f64>, StudyError> {
            if f[i].is_empty() {
                Ok(None)
            } else {
                num(i).map(Some)
            }
        };
        let bracing: BracingModel = f[2].parse().map_err(StudyError::Parse)?;
        let controlling: Controlling = f[16].parse().map_err(StudyError::Parse)?;
        let mut flags = Vec::new();
        let mut notes = Vec::new();
        for tok in f[17].split(';').filter(|t| !t.is_empty()) {
            match tok.parse::<Flag>() {
                Ok(flag) => flags.push(flag),
                Err(_) => notes.push(tok.to_string()),
            }
        }
        Ok(Self {
            designation: f[0].to_string(),
            grade: f[1].to_string(),
            bracing,
            length: num(3)?,
            pcr_l: num(4)?,
            pcr_d: opt_num(5)?,
            pcre: opt_num(6)?,
            py: num(7)?,
            strength: StrengthResult {
                bracing,
                pne: num(8)?,
                pnl: num(9)?,
                pnd: opt_num(10)?,
                pnlo: num(11)?,
                pn: num(12)?,
                lambda_c: opt_num(13)?,
                lambda_l: num(14)?,
                lambda_d: opt_num(15)?,
                controlling,
                flags,
            },
            notes,
            lcr_l: num(18)?,
            lcr_d: opt_num(19)?,
        })
    }
}

pub fn results_csv(rows: &[CaseResult]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(RESULT_COLUMNS).expect("in-memory write");
    for r in rows {
        w.write_record(r.csv_fields()).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

pub fn parse_results_csv(text: &str) -> Result<Vec<CaseResult>, StudyError> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let headers = rdr.headers().map_err(|e| StudyError::Parse(e.to_string()))?;
    if headers.iter().collect::<Vec<_>>() != RESULT_COLUMNS {
        return Err(StudyError::Parse("unexpected results header".into()));
    }
    rdr.records()
        .enumerate()
        .map(|(i, rec)| {
            let rec = rec.map_err(|e| StudyError::Parse(format!("row {}: {e}", i + 1)))?;
            let fields: Vec<&str> = rec.iter().collect();
            CaseResult::from_csv_fields(&fields).map_err(|e| StudyError::Parse(format!("row {}: {e}", i + 1)))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    /// `counts.len() + 1` bin edges.
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
    pub mean: f64,
    /// Sample standard deviation; zero for a single value.
    pub std: f64,
}

impl Histogram {
    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }
}

/// Equal-width histogram over the observed range. All-equal input puts
/// everything in the first bin.
pub fn histogram(values: &[f64], n_bins: usize) -> Option<Histogram> {
    if values.is_empty() || n_bins == 0 {
        return None;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let std = if values.len() > 1 {
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let width = (hi - lo) / n_bins as f64;
    let edges = (0..=n_bins)
        .map(|i| if i == n_bins { hi } else { lo + width * i as f64 })
        .collect();
    let mut counts = vec![0; n_bins];
    for v in values {
        let i = if width > 0.0 { (((v - lo) / width) as usize).min(n_bins - 1) } else { 0 };
        counts[i] += 1;
    }
    Some(Histogram { edges, counts, mean, std })
}

/// λL of global-model rows controlled by local-global interaction.
pub fn lg_lambdas(rows: &[CaseResult]) -> Vec<f64> {
    rows.iter()
        .filter(|r| r.bracing == BracingModel::Global && r.strength.controlling == Controlling::LG)
        .map(|r| r.strength.lambda_l)
        .collect()
}

pub fn lambda_histogram(rows: &[CaseResult], n_bins: usize) -> Option<Histogram> {
    histogram(&lg_lambdas(rows), n_bins)
}

/// PcrL/PcrD over distinct sections.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioStats {
    pub sections: usize,
    pub without_distortional: usize,
    pub min: f64,
    pub max: f64,
    /// Sections with 0.9 < PcrL/PcrD < 1.1.
    pub near_one: usize,
}

pub fn ratio_stats(rows: &[CaseResult]) -> RatioStats {
    let mut seen: Vec<&str> = Vec::new();
    let mut ratios = Vec::new();
    let mut without = 0;
    for r in rows {
        if seen.contains(&r.designation.as_str()) {
            continue;
        }
        seen.push(&r.designation);
        match r.ratio() {
            Some(x) => ratios.push(x),
            None => without += 1,
        }
    }
    RatioStats {
        sections: seen.len(),
        without_distortional: without,
        min: ratios.iter().copied().fold(f64::INFINITY, f64::min),
        max: ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        near_one: ratios.iter().filter(|&&x| x > 0.9 && x < 1.1).count(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tally {
    pub grade: String,
    pub bracing: BracingModel,
    pub local: usize,
    pub distortional: usize,
    pub local_global: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyReport {
    pub rows: Vec<CaseResult>,
    /// (case, message) for cases that could not be evaluated.
    pub failures: Vec<(String, String)>,
    pub histogram: Option<Histogram>,
    pub ratios: RatioStats,
    /// Ordered by grade yield stress, then bracing model.
    pub tallies: Vec<Tally>,
}

impl StudyReport {
    pub fn tally(&self, grade: &str, bracing: BracingModel) -> Option<&Tally> {
        self.tallies.iter().find(|t| t.grade == grade && t.bracing == bracing)
    }
}

pub(crate) fn build_report(
    rows: Vec<CaseResult>,
    failures: Vec<(String, String)>,
    grade_order: &[String],
    bins: usize,
) -> StudyReport {
    let mut tallies = Vec::new();
    for g in grade_order {
        for b in BracingModel::ALL {
            let sel: Vec<_> = rows.iter().filter(|r| &r.grade == g && r.bracing == b).collect();
            if sel.is_empty() {
                continue;
            }
            let count = |c: Controlling| sel.iter().filter(|r| r.strength.controlling == c).count();
            tallies.push(Tally {
                grade: g.clone(),
                bracing: b,
                local: count(Controlling::L),
                distortional: count(Controlling::D),
                local_global: count(Controlling::LG),
            });
        }
    }
    StudyReport {
        histogram: lambda_histogram(&rows, bins),
        ratios: ratio_stats(&rows),
        rows,
        failures,
        tallies,
    }
}

/// Aggregates as `group,key,value` rows.
pub fn report_csv(r: &StudyReport) -> String {
    let mut out = String::from("group,key,value\n");
    let s = &r.ratios;
    let _ = writeln!(out, "cases,rows,{}", r.rows.len());
    let _ = writeln!(out, "cases,failures,{}", r.failures.len());
    let _ = writeln!(out, "ratio_PcrL_PcrD,sections,{}", s.sections);
    let _ = writeln!(out, "ratio_PcrL_PcrD,without_distortional,{}", s.without_distortional);
    let _ = writeln!(out, "ratio_PcrL_PcrD,min,{}", s.min);
    let _ = writeln!(out, "ratio_PcrL_PcrD,max,{}", s.max);
    let _ = writeln!(out, "ratio_PcrL_PcrD,count_0.9_to_1.1,{}", s.near_one);
    match &r.histogram {
        Some(h) => {
            let _ = writeln!(out, "lambda_L_LG,count,{}", h.total());
            let _ = writeln!(out, "lambda_L_LG,mean,{}", h.mean);
            let _ = writeln!(out, "lambda_L_LG,std,{}", h.std);
            for (i, c) in h.counts.iter().enumerate() {
                let _ = writeln!(out, "lambda_L_LG,bin_{}_{},{c}", h.edges[i], h.edges[i + 1]);
            }
        }
        None => {
            let _ = writeln!(out, "lambda_L_LG,count,0");
        }
    }
    for t in &r.tallies {
        for (c, n) in [("L", t.local), ("D", t.distortional), ("LG", t.local_global)] {
            let _ = writeln!(out, "controlling,{}/{}/{c},{n}", t.grade, t.bracing);
        }
    }
    for (case, msg) in &r.failures {
        let _ = writeln!(out, "failure,{case},\"{}\"", msg.replace('"', "'"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn row(lambda_l: f64, ctrl: Controlling, b: BracingModel) -> CaseResult {
        CaseResult {
            designation: "250S162-33".into(),
            grade: "DP500".into(),
            bracing: b,
            length: 1234.5678901234,
            lcr_l: 55.5,
            lcr_d: Some(411.52263004113334),
            py: 1.0 / 3.0 * 1e5,
            pcr_l: 12345.678,
            pcr_d: Some(23456.789),
            pcre: Some(9.87e4),
            strength: StrengthResult {
                bracing: b,
                pne: 2e4,
                pnl: 1.5e4,
                pnd: Some(1.9e4),
                pnlo: 1.7e4,
                pn: 1.5e4,
                lambda_c: Some(0.1 + 0.2),
                lambda_l,
                lambda_d: None,
                controlling: ctrl,
                flags: vec![Flag::DgNotModeled],
            },
            notes: vec!["D_at_closed_form_length".into()],
        }
    }

    #[test]
    fn csv_round_trip() {
        let rows = vec![
            row(1.1, Controlling::LG, BracingModel::Global),
            row(0.7, Controlling::L, BracingModel::Local),
        ];
        let text = results_csv(&rows);
        assert!(text.starts_with("designation,grade,bracing,L_mm,PcrL_N,PcrD_N,Pcre_N,Py_N,Pne_N,PnL_N,PnD_N,PnLo_N,Pn_N,lambda_c,lambda_L,lambda_d,controlling,flags"));
        assert_eq!(parse_results_csv(&text).unwrap(), rows);
        assert!(parse_results_csv("a,b\n1,2\n").is_err());
    }

    #[test]
    fn histogram_partition_and_moments() {
        let rows: Vec<_> = [0.8, 1.2, 1.9, 2.5, 3.1]
            .iter()
            .map(|&l| row(l, Controlling::LG, BracingModel::Global))
            .chain([row(9.0, Controlling::D, BracingModel::Global), row(9.0, Controlling::LG, BracingModel::Local)])
            .collect();
        let h = lambda_histogram(&rows, 12).unwrap();
        assert_eq!(h.total(), 5);
        assert_eq!(h.edges.len(), 13);
        assert_eq!(h.edges[0], 0.8);
        assert_eq!(h.edges[12], 3.1);
        assert!((h.mean - 1.9).abs() < 1e-12);

        let single = histogram(&[1.3, 1.3, 1.3], 12).unwrap();
        assert_eq!(single.std, 0.0);
        assert_eq!(single.counts.iter().filter(|&&c| c > 0).count(), 1);
        assert!(lambda_histogram(&[row(1.0, Controlling::D, BracingModel::Global)], 12).is_none());
    }

    #[test]
    fn ratio_statistics_count_distinct_sections() {
        let mut rows = vec![row(1.0, Controlling::L, BracingModel::Local); 3];
        rows[2].designation = "600S200-97".into();
        rows[2].pcr_d = None;
        let s = ratio_stats(&rows);
        assert_eq!(s.sections, 2);
        assert_eq!(s.without_distortional, 1);
        assert_eq!(s.min, 12345.678 / 23456.789);
    }

    proptest! {
        #[test]
        fn moments_match_two_pass(values in proptest::collection::vec(0.1f64..5.0, 2..200)) {
            let h = histogram(&values, 12).unwrap();
            prop_assert_eq!(h.total(), values.len());
            // two-pass oracle with a compensated first pass
            let n = values.len() as f64;
            let mut sum = 0.0f64;
            let mut c = 0.0f64;
            for v in &values {
                let y = v - c;
                let t = sum + y;
                c = (t - sum) - y;
                sum = t;
            }
            let mean = sum / n;
            let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
            prop_assert!((h.mean - mean).abs() <= 1e-12 * mean);
            prop_assert!((h.std - var.sqrt()).abs() <= 1e-12 * var.sqrt().max(1e-300) + 1e-15);
        }

        #[test]
        fn any_finite_row_round_trips(len in 1.0f64..1e5, pn in 1.0f64..1e6, lam in 0.01f64..10.0) {
            let mut r = row(lam, Controlling::D, BracingModel::Distortional);
            r.length = len;
            r.strength.pn = pn;
            r.strength.lambda_c = None;
            r.pcre = None;
            let text = results_csv(std::slice::from_ref(&r));
            prop_assert_eq!(parse_results_csv(&text).unwrap(), vec![r]);
        }
    }
}
