use nalgebra::DVector;

use super::{evaluate_half_wavelength, FsmError, SignatureCurve, StripMesh, DOF_PER_NODE};
use crate::geometry::ElementRole;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MinimumKind {
    Local,
    Distortional,
    /// A minimum that failed the distortional plausibility checks.
    Indeterminate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriticalPoint {
    pub kind: MinimumKind,
    /// Half-wavelength at the minimum [mm].
    pub half_wavelength: f64,
    pub load_factor: f64,
    /// Critical axial load [N].
    pub pcr: f64,
    pub mode: DVector<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimaSettings {
    /// Golden-section stopping width relative to the half-wavelength.
    pub rel_tol: f64,
    /// A distortional minimum must lie beyond this multiple of the local one.
    pub distortional_length_ratio: f64,
    /// Minimum lip translation as a fraction of the largest web translation.
    pub lip_participation: f64,
}

impl Default for MinimaSettings {
    fn default() -> Self {
        Self {
            rel_tol: 1e-3,
            distortional_length_ratio: 2.0,
            lip_participation: 0.2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct MinimaReport {
    pub local: Option<CriticalPoint>,
    pub distortional: Option<CriticalPoint>,
    pub indeterminate: Vec<CriticalPoint>,
    pub diagnostics: Vec<String>,
}

impl MinimaReport {
    /// All minima in order of half-wavelength.
    pub fn points(&self) -> Vec<&CriticalPoint> {
        let mut v: Vec<&CriticalPoint> = self
            .local
            .iter()
            .chain(self.distortional.iter())
            .chain(self.indeterminate.iter())
            .collect();
        v.sort_by(|a, b| a.half_wavelength.total_cmp(&b.half_wavelength));
        v
    }
}

/// Indices of strict interior minima of the sampled curve.
pub fn find_discrete_minima(curve: &SignatureCurve) -> Vec<usize> {
    let f = &curve.load_factors;
    (1..f.len().saturating_sub(1))
        .filter(|&i| f[i] < f[i - 1] && f[i] <= f[i + 1])
        .collect()
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for a minimum of `f` on `[lo, hi]`, in log space,
/// until the bracket is narrower than `rel_tol` relative to its center.
pub fn golden_section_min<F>(mut f: F, lo: f64, hi: f64, rel_tol: f64) -> Result<(f64, f64), FsmError>
where
    F: FnMut(f64) -> Result<f64, FsmError>,
{
    let (mut a, mut b) = (lo.ln(), hi.ln());
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c.exp())?;
    let mut fd = f(d.exp())?;
    // ln-width below rel_tol means (hi - lo)/center < rel_tol to first order.
    while b - a > rel_tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c.exp())?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d.exp())?;
        }
    }
    Ok(if fc <= fd { (c.exp(), fc) } else { (d.exp(), fd) })
}

fn max_translation(mesh: &StripMesh, mode: &DVector<f64>, role: ElementRole) -> Option<f64> {
    let mut nodes: Vec<usize> = mesh
        .strips
        .iter()
        .filter(|s| s.role == role)
        .flat_map(|s| [s.a, s.b])
        .collect();
    if nodes.is_empty() {
        return None;
    }
    nodes.sort_unstable();
    nodes.dedup();
    Some(
        nodes
            .into_iter()
            .map(|n| mode[n * DOF_PER_NODE].hypot(mode[n * DOF_PER_NODE + 2]))
            .fold(0.0, f64::max),
    )
}

/// Detects interior minima, refines each by golden-section search on the
/// solver and labels them: the first is local; the second is distortional
/// when it lies beyond `distortional_length_ratio × Lcr,local` and its lip
/// translation exceeds `lip_participation` of the largest web translation.
/// Nothing is reported for a missing minimum; a diagnostic explains why.
pub fn find_minima(
    mesh: &StripMesh,
    curve: &SignatureCurve,
    settings: &MinimaSettings,
) -> Result<MinimaReport, FsmError> {
    let mut report = MinimaReport::default();
    if curve.len() < 3 {
        report
            .diagnostics
            .push(format!("curve has {} points; need at least 3", curve.len()));
        return Ok(report);
    }
    let idx = find_discrete_minima(curve);
    let mut refined = Vec::with_capacity(idx.len());
    for &i in &idx {
        let (lo, hi) = (curve.half_wavelengths[i - 1], curve.half_wavelengths[i + 1]);
        let (a, lf) = golden_section_min(
            |a| evaluate_half_wavelength(mesh, a).map(|r| r.0),
            lo,
            hi,
            settings.rel_tol,
        )?;
        // The sample itself may be lower than the refined point on a flat bottom.
        let a = if curve.load_factors[i] < lf { curve.half_wavelengths[i] } else { a };
        let (lf, mode) = evaluate_half_wavelength(mesh, a)?;
        refined.push(CriticalPoint {
            kind: MinimumKind::Indeterminate,
            half_wavelength: a,
            load_factor: lf,
            pcr: lf * curve.reference_load,
            mode,
        });
    }

    let mut it = refined.into_iter();
    match it.next() {
        Some(mut p) => {
            p.kind = MinimumKind::Local;
            report.local = Some(p);
        }
        None => {
            report
                .diagnostics
                .push("plateau: no interior minimum on the signature curve".into());
            return Ok(report);
        }
    }
    let local_length = report.local.as_ref().map(|p| p.half_wavelength).unwrap_or(0.0);
    match it.next() {
        Some(mut p) => {
            let far_enough = p.half_wavelength > settings.distortional_length_ratio * local_length;
            let lip = max_translation(mesh, &p.mode, ElementRole::Lip);
            let web = max_translation(mesh, &p.mode, ElementRole::Web);
            let participates = match (lip, web) {
                (Some(l), Some(w)) => l > settings.lip_participation * w,
                _ => {
                    report
                        .diagnostics
                        .push("mesh has no lip/web roles; distortional participation not checked".into());
                    true
                }
            };
            if far_enough && participates {
                p.kind = MinimumKind::Distortional;
                report.distortional = Some(p);
            } else {
                report.diagnostics.push(format!(
                    "second minimum at {:.1} mm rejected as distortional (beyond {}×Lcr,local: {far_enough}, lip participation: {participates})",
                    p.half_wavelength, settings.distortional_length_ratio
                ));
                report.indeterminate.push(p);
            }
        }
        None => report
            .diagnostics
            .push("plateau: no distortional minimum after the local minimum".into()),
    }
    for p in it {
        report
            .diagnostics
            .push(format!("additional minimum at {:.1} mm not classified", p.half_wavelength));
        report.indeterminate.push(p);
    }
    Ok(report)
}
