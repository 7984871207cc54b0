use super::{
    closed_form_distortional_length, evaluate_half_wavelength, find_minima, signature_curve,
    CriticalPoint, FsmError, MinimaReport, MinimaSettings, MinimumKind, SignatureCurve, StripMesh,
    WavelengthSweep,
};
use crate::geometry::{discretize, MeshConfig, SectionGeometry};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FsmSettings {
    pub mesh: MeshConfig,
    /// `None` uses [`WavelengthSweep::for_section`].
    pub sweep: Option<WavelengthSweep>,
    pub minima: MinimaSettings,
    /// When the curve has no distortional minimum, read it at the
    /// closed-form distortional half-wavelength instead.
    pub closed_form_fallback: bool,
}

impl Default for FsmSettings {
    fn default() -> Self {
        Self {
            mesh: MeshConfig::default(),
            sweep: None,
            minima: MinimaSettings::default(),
            closed_form_fallback: true,
        }
    }
}

/// Where the distortional critical point came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistortionalSource {
    /// Second minimum of the signature curve.
    Minimum,
    /// Curve value at the closed-form distortional half-wavelength.
    ClosedFormLength,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ElasticAnalysis {
    pub mesh: StripMesh,
    pub curve: SignatureCurve,
    pub minima: MinimaReport,
    pub distortional_source: Option<DistortionalSource>,
    pub diagnostics: Vec<String>,
}

impl ElasticAnalysis {
    pub fn local(&self) -> Option<&CriticalPoint> {
        self.minima.local.as_ref()
    }

    pub fn distortional(&self) -> Option<&CriticalPoint> {
        self.minima.distortional.as_ref()
    }
}

/// Discretizes the section, computes its signature curve and extracts the
/// local and distortional critical points.
pub fn analyze_section(g: &SectionGeometry, settings: &FsmSettings) -> Result<ElasticAnalysis, FsmError> {
    let mesh = discretize(g, &settings.mesh)?;
    let sweep = settings.sweep.unwrap_or_else(|| WavelengthSweep::for_section(g));
    let curve = signature_curve(&mesh, &sweep)?;
    let mut minima = find_minima(&mesh, &curve, &settings.minima)?;
    let mut diagnostics = minima.diagnostics.clone();
    let mut source = minima.distortional.as_ref().map(|_| DistortionalSource::Minimum);

    if minima.distortional.is_none() && settings.closed_form_fallback {
        if let (Some(local), Some(length)) = (
            minima.local.as_ref(),
            closed_form_distortional_length(g, settings.mesh.nu),
        ) {
            if length > local.half_wavelength {
                let (lf, mode) = evaluate_half_wavelength(&mesh, length)?;
                minima.distortional = Some(CriticalPoint {
                    kind: MinimumKind::Distortional,
                    half_wavelength: length,
                    load_factor: lf,
                    pcr: lf * curve.reference_load,
                    mode,
                });
                source = Some(DistortionalSource::ClosedFormLength);
                diagnostics.push(format!(
                    "distortional point read at closed-form half-wavelength {length:.1} mm"
                ));
            } else {
                diagnostics.push(format!(
                    "closed-form distortional half-wavelength {length:.1} mm is not beyond the local minimum"
                ));
            }
        }
    }

    Ok(ElasticAnalysis {
        mesh,
        curve,
        minima,
        distortional_source: source,
        diagnostics,
    })
}
