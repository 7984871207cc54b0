//! Local strip matrices.
//!
//! Local DOF order is `[u1, u2, v1, v2, w1, θ1, w2, θ2]`, with x across the
//! strip (0 ≤ x ≤ b), y along the member and w normal to the strip. Over a
//! half-wavelength `a` the displacement fields are
//!
//! ```text
//! u = Nl(x)·[u1 u2] sin(πy/a)      v = Nl(x)·[v1 v2] cos(πy/a)
//! w = Nh(x)·[w1 θ1 w2 θ2] sin(πy/a)
//! ```
//!
//! with linear `Nl` and cubic Hermite `Nh`; θ = ∂w/∂x.

use nalgebra::{Matrix2, Matrix4, SMatrix};
use std::f64::consts::PI;

use super::FsmError;

pub type Matrix8 = SMatrix<f64, 8, 8>;

/// Geometric and material data of one strip.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StripSection {
    pub width: f64,
    pub t: f64,
    pub e: f64,
    pub nu: f64,
    /// Uniform longitudinal compression at unit load factor [MPa].
    pub stress: f64,
}

fn check(s: &StripSection, a: f64) -> Result<(), FsmError> {
    if !(s.width > 0.0 && s.t > 0.0 && a > 0.0 && s.e > 0.0) {
        return Err(FsmError::Geometry(format!(
            "strip width {}, t {}, half-wavelength {a} must be positive",
            s.width, s.t
        )));
    }
    Ok(())
}

// ∫ Nl Nlᵀ, ∫ Nl' Nl'ᵀ, ∫ Nl' Nlᵀ over [0, b].
fn linear_integrals(b: f64) -> (Matrix2<f64>, Matrix2<f64>, Matrix2<f64>) {
    let nn = Matrix2::new(2.0, 1.0, 1.0, 2.0) * (b / 6.0);
    let dd = Matrix2::new(1.0, -1.0, -1.0, 1.0) / b;
    let dn = Matrix2::new(-0.5, -0.5, 0.5, 0.5);
    (nn, dd, dn)
}

// ∫ Nh Nhᵀ, ∫ Nh' Nh'ᵀ, ∫ Nh'' Nh''ᵀ, ∫ Nh'' Nhᵀ over [0, b].
fn hermite_integrals(b: f64) -> (Matrix4<f64>, Matrix4<f64>, Matrix4<f64>, Matrix4<f64>) {
    let b2 = b * b;
    let h0 = Matrix4::new(
        156.0, 22.0 * b, 54.0, -13.0 * b,
        22.0 * b, 4.0 * b2, 13.0 * b, -3.0 * b2,
        54.0, 13.0 * b, 156.0, -22.0 * b,
        -13.0 * b, -3.0 * b2, -22.0 * b, 4.0 * b2,
    ) * (b / 420.0);
    let h1 = Matrix4::new(
        36.0, 3.0 * b, -36.0, 3.0 * b,
        3.0 * b, 4.0 * b2, -3.0 * b, -b2,
        -36.0, -3.0 * b, 36.0, -3.0 * b,
        3.0 * b, -b2, -3.0 * b, 4.0 * b2,
    ) / (30.0 * b);
    let h2 = Matrix4::new(
        12.0, 6.0 * b, -12.0, 6.0 * b,
        6.0 * b, 4.0 * b2, -6.0 * b, 2.0 * b2,
        -12.0, -6.0 * b, 12.0, -6.0 * b,
        6.0 * b, 2.0 * b2, -6.0 * b, 4.0 * b2,
    ) / (b2 * b);
    // Integration by parts: ∫N''Nᵀ = [N'Nᵀ]₀ᵇ − ∫N'N'ᵀ, with N'(0) = e₂,
    // N'(b) = e₄, N(0) = e₁, N(b) = e₃.
    let mut boundary = Matrix4::zeros();
    boundary[(3, 2)] = 1.0;
    boundary[(1, 0)] = -1.0;
    let h20 = boundary - h1;
    (h0, h1, h2, h20)
}

/// Elastic stiffness: plane-stress membrane plus Kirchhoff plate bending,
/// integrated in closed form.
pub fn strip_elastic_stiffness(s: &StripSection, a: f64) -> Result<Matrix8, FsmError> {
    check(s, a)?;
    let (b, t, e, nu) = (s.width, s.t, s.e, s.nu);
    let k = PI / a;
    let half = a / 2.0;
    let dm = e * t / (1.0 - nu * nu);
    let g = dm * (1.0 - nu) / 2.0;
    let db = e * t.powi(3) / (12.0 * (1.0 - nu * nu));

    let (nn, dd, dn) = linear_integrals(b);
    let kuu = (dd * dm + nn * (g * k * k)) * half;
    let kuv = (dn * (-dm * nu * k) + dn.transpose() * (g * k)) * half;
    let kvv = (nn * (dm * k * k) + dd * g) * half;

    let (h0, h1, h2, h20) = hermite_integrals(b);
    let kb = (h2 * db + h0 * (db * k.powi(4)) - (h20 + h20.transpose()) * (db * nu * k * k)
        + h1 * (2.0 * db * (1.0 - nu) * k * k))
        * half;

    let mut m = Matrix8::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(&kuu);
    m.fixed_view_mut::<2, 2>(0, 2).copy_from(&kuv);
    m.fixed_view_mut::<2, 2>(2, 0).copy_from(&kuv.transpose());
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(&kvv);
    m.fixed_view_mut::<4, 4>(4, 4).copy_from(&kb);
    Ok(m)
}

/// Geometric stiffness from the work of the longitudinal stress through
/// `(u,y² + v,y² + w,y²)/2`.
pub fn strip_geometric_stiffness(s: &StripSection, a: f64) -> Result<Matrix8, FsmError> {
    check(s, a)?;
    let k = PI / a;
    let c = s.stress * s.t * k * k * a / 2.0;
    let (nn, _, _) = linear_integrals(s.width);
    let (h0, _, _, _) = hermite_integrals(s.width);
    let mut m = Matrix8::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(&(nn * c));
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(&(nn * c));
    m.fixed_view_mut::<4, 4>(4, 4).copy_from(&(h0 * c));
    Ok(m)
}
