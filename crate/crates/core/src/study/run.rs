use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;

use super::report::{build_report, CaseResult, StudyReport};
use super::{CaseSpec, LengthRule, StudyError};
use crate::dsm::{classify_with, global_elastic_with, DsmConstants, ElasticBucklingSet, GlobalSettings, StrengthCurves};
use crate::fsm::{analyze_section, evaluate_half_wavelength, DistortionalSource, ElasticAnalysis, FsmSettings};
use crate::geometry::{
    build_section, section_properties, Designation, GeometryConfig, SectionGeometry, SectionProperties,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PcreSource {
    ClosedForm,
    /// Finite strip load factor at half-wavelength L.
    FiniteStrip,
}

/// Grade-independent results for one section.
#[derive(Debug, Clone)]
pub struct SectionElastic {
    pub geometry: SectionGeometry,
    pub props: SectionProperties,
    pub analysis: ElasticAnalysis,
    pub lcr_l: f64,
    pub pcr_l: f64,
    pub lcr_d: Option<f64>,
    pub pcr_d: Option<f64>,
    pub distortional_source: Option<DistortionalSource>,
}

type Slot = Arc<OnceLock<Result<Arc<SectionElastic>, StudyError>>>;

/// Per-section elastic results; each section is computed at most once even
/// under concurrent lookups.
#[derive(Default)]
pub struct ElasticCache {
    slots: Mutex<HashMap<Designation, Slot>>,
    computed: AtomicUsize,
}

impl ElasticCache {
    pub fn computations(&self) -> usize {
        self.computed.load(Ordering::SeqCst)
    }

    fn get<F>(&self, d: &Designation, compute: F) -> Result<Arc<SectionElastic>, StudyError>
    where
        F: FnOnce() -> Result<SectionElastic, StudyError>,
    {
        let slot = {
            let mut map = self.slots.lock().expect("cache lock");
            map.entry(d.clone()).or_default().clone()
        };
        slot.get_or_init(|| {
            self.computed.fetch_add(1, Ordering::SeqCst);
            compute().map(Arc::new)
        })
        .clone()
    }
}

pub struct StudyContext {
    pub geometry: GeometryConfig,
    pub fsm: FsmSettings,
    pub curves: Box<dyn StrengthCurves>,
    pub global: GlobalSettings,
    pub pcre_source: PcreSource,
    pub histogram_bins: usize,
    pub cache: ElasticCache,
}

impl Default for StudyContext {
    fn default() -> Self {
        Self {
            geometry: GeometryConfig::default(),
            fsm: FsmSettings::default(),
            curves: Box::new(DsmConstants::default()),
            global: GlobalSettings::default(),
            pcre_source: PcreSource::ClosedForm,
            histogram_bins: 12,
            cache: ElasticCache::default(),
        }
    }
}

impl StudyContext {
    pub fn section(&self, d: &Designation) -> Result<Arc<SectionElastic>, StudyError> {
        self.cache.get(d, || {
            let geometry = build_section(d, &self.geometry)?;
            let props = section_properties(&geometry)?;
            let analysis = analyze_section(&geometry, &self.fsm)?;
            let local = analysis.local().ok_or_else(|| {
                StudyError::Case(format!("{d}: no local minimum ({})", analysis.diagnostics.join("; ")))
            })?;
            let (lcr_l, pcr_l) = (local.half_wavelength, local.pcr);
            let dist = analysis.distortional().map(|p| (p.half_wavelength, p.pcr));
            Ok(SectionElastic {
                lcr_l,
                pcr_l,
                lcr_d: dist.map(|p| p.0),
                pcr_d: dist.map(|p| p.1),
                distortional_source: analysis.distortional_source,
                geometry,
                props,
                analysis,
            })
        })
    }
}

/// Geometry, elastic buckling, member length, global buckling and strength
/// for one case.
pub fn run_case(spec: &CaseSpec, ctx: &StudyContext) -> Result<CaseResult, StudyError> {
    let d = &spec.designation;
    let el = ctx.section(d)?;
    let length = match spec.length_rule {
        LengthRule::Explicit(l) if l > 0.0 => l,
        LengthRule::Explicit(l) => {
            return Err(StudyError::Config(format!("explicit member length must be positive, got {l}")))
        }
        LengthRule::ThreeTimesLcrD => match el.lcr_d {
            Some(l) => 3.0 * l,
            None => {
                return Err(StudyError::Case(format!(
                    "{d}: no distortional critical length; an explicit member length is required"
                )))
            }
        },
    };
    let pcre = match ctx.pcre_source {
        PcreSource::ClosedForm => {
            global_elastic_with(&el.props, length, ctx.fsm.mesh.e, ctx.fsm.mesh.nu, &ctx.global)?.pcre
        }
        PcreSource::FiniteStrip => {
            let (lf, _) = evaluate_half_wavelength(&el.analysis.mesh, length)?;
            lf * el.analysis.curve.reference_load
        }
    };
    let set = ElasticBucklingSet {
        py: el.props.area * spec.grade.fy,
        pcr_l: Some(el.pcr_l),
        pcr_d: el.pcr_d,
        pcre: Some(pcre),
    };
    let strength = classify_with(ctx.curves.as_ref(), spec.bracing, &set)?;
    let mut notes = Vec::new();
    if el.distortional_source == Some(DistortionalSource::ClosedFormLength) {
        notes.push("D_at_closed_form_length".to_string());
    }
    Ok(CaseResult {
        designation: d.to_string(),
        grade: spec.grade.name.clone(),
        bracing: spec.bracing,
        length,
        lcr_l: el.lcr_l,
        lcr_d: el.lcr_d,
        py: set.py,
        pcr_l: el.pcr_l,
        pcr_d: el.pcr_d,
        pcre: Some(pcre),
        strength,
        notes,
    })
}

fn label(s: &CaseSpec) -> String {
    format!("{}/{}/{}", s.designation, s.grade.name, s.bracing)
}

/// Evaluates every case in parallel. Rows come back in `specs` order, so
/// the report does not depend on scheduling or worker count.
pub fn run_matrix(specs: &[CaseSpec], ctx: &StudyContext) -> Result<StudyReport, StudyError> {
    if specs.is_empty() {
        return Err(StudyError::Config("the study matrix is empty".into()));
    }
    let results: Vec<Result<CaseResult, StudyError>> = specs.par_iter().map(|s| run_case(s, ctx)).collect();
    let mut rows = Vec::with_capacity(specs.len());
    let mut failures = Vec::new();
    for (s, r) in specs.iter().zip(results) {
        match r {
            Ok(row) => rows.push(row),
            Err(e) => failures.push((label(s), e.to_string())),
        }
    }
    if rows.is_empty() {
        let first: Vec<String> = failures.iter().take(3).map(|(c, m)| format!("{c}: {m}")).collect();
        return Err(StudyError::AllFailed(first.join("; ")));
    }
    let grade_order: Vec<String> = {
        let mut g: Vec<&CaseSpec> = specs.iter().collect();
        g.sort_by(|a, b| a.grade.fy.total_cmp(&b.grade.fy));
        let mut names: Vec<String> = Vec::new();
        for s in g {
            if !names.contains(&s.grade.name) {
                names.push(s.grade.name.clone());
            }
        }
        names
    };
    Ok(build_report(rows, failures, &grade_order, ctx.histogram_bins))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsm::{BracingModel, Controlling};
    use crate::geometry::parse_designation;
    use crate::material::catalog;

    fn spec(d: &str, grade: usize, bracing: BracingModel) -> CaseSpec {
        CaseSpec {
            designation: parse_designation(d).unwrap(),
            grade: catalog()[grade].clone(),
            bracing,
            length_rule: LengthRule::ThreeTimesLcrD,
        }
    }

    #[test]
    fn local_model_case() {
        let ctx = StudyContext::default();
        let r = run_case(&spec("250S162-33", 0, BracingModel::Local), &ctx).unwrap();
        assert_eq!(r.strength.pne, r.py);
        assert_eq!(r.strength.pn, r.strength.pnlo);
        assert_eq!(r.strength.controlling, Controlling::L);
        assert_eq!(r.length, 3.0 * r.lcr_d.unwrap());
        assert!(r.lcr_l < r.lcr_d.unwrap());
        assert!(r.pcr_l > 0.0 && r.pcr_d.unwrap() > 0.0);
    }

    #[test]
    fn cached_sections_are_computed_once_and_reused() {
        let ctx = StudyContext::default();
        let specs: Vec<CaseSpec> = (0..6)
            .flat_map(|g| BracingModel::ALL.map(|b| spec("362S162-68", g, b)))
            .collect();
        let a = run_matrix(&specs, &ctx).unwrap();
        assert_eq!(ctx.cache.computations(), 1);
        let b = run_matrix(&specs, &ctx).unwrap();
        assert_eq!(ctx.cache.computations(), 1);
        assert_eq!(a.rows, b.rows);
        // a fresh context gives the same numbers
        let fresh = run_case(&specs[4], &StudyContext::default()).unwrap();
        assert_eq!(fresh, a.rows[4]);
    }

    #[test]
    fn explicit_lengths_and_failures() {
        let ctx = StudyContext::default();
        let mut s = spec("250S162-33", 2, BracingModel::Global);
        s.length_rule = LengthRule::Explicit(2000.0);
        let r = run_case(&s, &ctx).unwrap();
        assert_eq!(r.length, 2000.0);
        s.length_rule = LengthRule::Explicit(0.0);
        assert!(matches!(run_case(&s, &ctx), Err(StudyError::Config(_))));
        assert!(run_matrix(&[], &ctx).is_err());
        assert!(matches!(run_matrix(&[s], &ctx), Err(StudyError::AllFailed(_))));
    }

    #[test]
    fn finite_strip_pcre_is_close_to_closed_form_for_long_members() {
        let s = CaseSpec {
            length_rule: LengthRule::Explicit(4000.0),
            ..spec("600S162-68", 0, BracingModel::Global)
        };
        let closed = run_case(&s, &StudyContext::default()).unwrap();
        let ctx = StudyContext { pcre_source: PcreSource::FiniteStrip, ..Default::default() };
        let strip = run_case(&s, &ctx).unwrap();
        let (a, b) = (closed.pcre.unwrap(), strip.pcre.unwrap());
        assert!((a - b).abs() / a < 0.02, "{a} vs {b}");
    }
}
