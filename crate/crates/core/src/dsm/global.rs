use std::f64::consts::PI;

use nalgebra::{Matrix3, SymmetricEigen};

use super::{positive, DsmError};
use crate::geometry::SectionProperties;

/// Effective length factors for flexure about x, flexure about z and torsion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlobalSettings {
    pub kx: f64,
    pub kz: f64,
    pub kt: f64,
}

impl Default for GlobalSettings {
    fn default() -> Self {
        Self { kx: 1.0, kz: 1.0, kt: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GlobalMode {
    Flexural,
    Torsional,
    FlexuralTorsional,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlobalBuckling {
    pub pcre: f64,
    /// Flexural stress for bending about x (uses rx).
    pub sigma_x: f64,
    /// Flexural stress for bending about z (uses rz).
    pub sigma_z: f64,
    pub sigma_t: f64,
    pub mode: GlobalMode,
}

pub fn global_elastic(props: &SectionProperties, length: f64, e: f64, nu: f64) -> Result<GlobalBuckling, DsmError> {
    global_elastic_with(props, length, e, nu, &GlobalSettings::default())
}

/// Lowest root of the coupled flexural-torsional problem of an open
/// section with pinned, torsion-restrained ends. Singly symmetric sections
/// reduce to the usual quadratic in σex and σt with β = 1 − (x0/r0)².
pub fn global_elastic_with(
    props: &SectionProperties,
    length: f64,
    e: f64,
    nu: f64,
    k: &GlobalSettings,
) -> Result<GlobalBuckling, DsmError> {
    positive("length", length)?;
    positive("elastic modulus", e)?;
    if !(props.area > 0.0) {
        return Err(DsmError::Property(format!("area must be positive, got {}", props.area)));
    }
    if !(props.r0 > 0.0) {
        return Err(DsmError::Property(format!("polar radius r0 must be positive, got {}", props.r0)));
    }
    let g = e / (2.0 * (1.0 + nu));
    let euler = |kl: f64, r: f64| PI * PI * e / (kl / r).powi(2);
    let sigma_x = euler(k.kx * length, props.rx);
    let sigma_z = euler(k.kz * length, props.rz);
    let r02 = props.r0 * props.r0;
    let sigma_t = (g * props.j + PI * PI * e * props.cw / (k.kt * length).powi(2)) / (props.area * r02);

    // Unknowns: translation along x, translation along z, twist.
    let a = Matrix3::from_diagonal(&nalgebra::Vector3::new(sigma_z, sigma_x, r02 * sigma_t));
    let b = Matrix3::new(1.0, 0.0, -props.z0, 0.0, 1.0, props.x0, -props.z0, props.x0, r02);
    let chol = b
        .cholesky()
        .ok_or_else(|| DsmError::Property("shear-center offset exceeds polar radius".into()))?;
    let linv = chol
        .l()
        .try_inverse()
        .ok_or_else(|| DsmError::Property("singular polar inertia".into()))?;
    let c = linv * a * linv.transpose();
    let eig = SymmetricEigen::new((c + c.transpose()) * 0.5);
    let (i, sigma) = eig
        .eigenvalues
        .iter()
        .copied()
        .enumerate()
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .expect("3x3");
    let v = linv.transpose() * eig.eigenvectors.column(i);
    let trans = v[0].hypot(v[1]);
    let rot = (v[2] * props.r0).abs();
    let scale = trans.max(rot);
    let mode = if rot <= 1e-8 * scale {
        GlobalMode::Flexural
    } else if trans <= 1e-8 * scale {
        GlobalMode::Torsional
    } else {
        GlobalMode::FlexuralTorsional
    };
    Ok(GlobalBuckling { pcre: props.area * sigma, sigma_x, sigma_z, sigma_t, mode })
}
