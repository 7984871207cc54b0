use super::{GeometryError, SectionGeometry};
use crate::geometry::section::dist;

/// Gross properties of an open thin-walled section, integrated along the
/// centerline polyline with uniform thickness.
///
/// Second moments are centroidal: `ixx = ∫z² dA` (about the x-axis),
/// `izz = ∫x² dA`, `ixz = ∫xz dA`. The shear-center offsets `x0`, `z0` are
/// measured from the centroid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectionProperties {
    pub area: f64,
    pub cx: f64,
    pub cz: f64,
    pub ixx: f64,
    pub izz: f64,
    pub ixz: f64,
    pub rx: f64,
    pub rz: f64,
    pub j: f64,
    pub cw: f64,
    pub x0: f64,
    pub z0: f64,
    pub r0: f64,
}

/// Line-integral section properties; shear center and warping constant by
/// the sectorial-coordinate method.
pub fn section_properties(g: &SectionGeometry) -> Result<SectionProperties, GeometryError> {
    let t = g.thickness;
    let pts = &g.points;
    let lens: Vec<f64> = pts.windows(2).map(|w| dist(w[0], w[1])).collect();
    let total: f64 = lens.iter().sum();
    if !(total > 0.0) || !(t > 0.0) {
        return Err(GeometryError::Invalid("degenerate section: zero length or thickness".into()));
    }

    let area = total * t;
    let (mut sx, mut sz) = (0.0, 0.0);
    for (w, l) in pts.windows(2).zip(&lens) {
        sx += l * t * (w[0][0] + w[1][0]) / 2.0;
        sz += l * t * (w[0][1] + w[1][1]) / 2.0;
    }
    let (cx, cz) = (sx / area, sz / area);
    let rel: Vec<[f64; 2]> = pts.iter().map(|p| [p[0] - cx, p[1] - cz]).collect();

    // Exact integral of a product of two linear functions over an edge.
    let prod = |l: f64, fi: f64, fj: f64, gi: f64, gj: f64| {
        l * t / 6.0 * (2.0 * fi * gi + fi * gj + fj * gi + 2.0 * fj * gj)
    };

    let (mut ixx, mut izz, mut ixz) = (0.0, 0.0, 0.0);
    for (i, l) in lens.iter().enumerate() {
        let (a, b) = (rel[i], rel[i + 1]);
        ixx += prod(*l, a[1], b[1], a[1], b[1]);
        izz += prod(*l, a[0], b[0], a[0], b[0]);
        ixz += prod(*l, a[0], b[0], a[1], b[1]);
    }

    // Sectorial coordinate with the pole at the centroid.
    let mut omega = vec![0.0; pts.len()];
    for i in 0..pts.len() - 1 {
        let (a, b) = (rel[i], rel[i + 1]);
        omega[i + 1] = omega[i] + (a[0] * b[1] - b[0] * a[1]);
    }
    let (mut iwx, mut iwz) = (0.0, 0.0);
    for (i, l) in lens.iter().enumerate() {
        let (a, b) = (rel[i], rel[i + 1]);
        iwx += prod(*l, omega[i], omega[i + 1], a[0], b[0]);
        iwz += prod(*l, omega[i], omega[i + 1], a[1], b[1]);
    }

    // Pole P = (px, pz) relative to the centroid with ∫ω_P x dA = ∫ω_P z dA = 0,
    // where ω_P = ω_C − px·z + pz·x + const.
    let scale = ixx.max(izz);
    let det = ixz * ixz - ixx * izz;
    let (px, pz) = if det.abs() > 1e-12 * scale * scale {
        // iwx − px·ixz + pz·izz = 0 ; iwz − px·ixx + pz·ixz = 0
        let px = (iwx * ixz - iwz * izz) / det;
        let pz = (iwx * ixx - iwz * ixz) / det;
        (px, pz)
    } else {
        // Straight-line section: sectorial coordinate vanishes identically.
        (0.0, 0.0)
    };

    let mut omega_p: Vec<f64> = rel
        .iter()
        .zip(&omega)
        .map(|(r, w)| w - px * r[1] + pz * r[0])
        .collect();
    let mut mean = 0.0;
    for (i, l) in lens.iter().enumerate() {
        mean += l * t * (omega_p[i] + omega_p[i + 1]) / 2.0;
    }
    mean /= area;
    for w in &mut omega_p {
        *w -= mean;
    }
    let mut cw = 0.0;
    for (i, l) in lens.iter().enumerate() {
        cw += prod(*l, omega_p[i], omega_p[i + 1], omega_p[i], omega_p[i + 1]);
    }

    let j = lens.iter().map(|l| l * t.powi(3) / 3.0).sum();
    let rx = (ixx / area).sqrt();
    let rz = (izz / area).sqrt();
    let r0 = (rx * rx + rz * rz + px * px + pz * pz).sqrt();

    Ok(SectionProperties {
        area,
        cx,
        cz,
        ixx,
        izz,
        ixz,
        rx,
        rz,
        j,
        cw,
        x0: px,
        z0: pz,
        r0,
    })
}
