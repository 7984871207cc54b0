use std::f64::consts::PI;

use crate::geometry::SectionGeometry;

/// Closed-form distortional half-wavelength of a lipped channel [mm].
///
/// Uses the flange-lip assembly with square corners (flange centerline
/// width `b`, lip centerline length `d`) rotating about the web-flange
/// junction against the web's rotational stiffness:
///
/// ```text
/// Lcr = [ 6π⁴ ho (1 − ν²) / t³ · (Ixf b² − Ixyf² b² / Iyf) ]^(1/4)
/// ```
///
/// where `ho` is the out-to-out web depth. Returns `None` for sections that
/// are not lipped channels.
pub fn closed_form_distortional_length(g: &SectionGeometry, nu: f64) -> Option<f64> {
    let dims = g.channel?;
    let t = g.thickness;
    let b = dims.flange - t;
    let d = dims.lip - t / 2.0;
    let ho = dims.depth;
    let sum = b + d;
    let ixf = t * (t * t * b * b + 4.0 * b * d.powi(3) + t * t * b * d + d.powi(4)) / (12.0 * sum);
    let iyf = t * (b.powi(4) + 4.0 * d * b.powi(3)) / (12.0 * sum);
    let ixyf = t * b * b * d * d / (4.0 * sum);
    let inner = ixf * b * b - ixyf * ixyf / iyf * b * b;
    if !(inner > 0.0) {
        return None;
    }
    Some((6.0 * PI.powi(4) * ho * (1.0 - nu * nu) / t.powi(3) * inner).powf(0.25))
}
