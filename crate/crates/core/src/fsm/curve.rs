use std::fmt::Write as _;

use nalgebra::DVector;
use rayon::prelude::*;

use super::{assemble, solve_buckling, FsmError, StripMesh, DOF_PER_NODE};
use crate::geometry::{SectionGeometry, SegmentKind};

/// Log-spaced half-wavelengths [mm].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavelengthSweep {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl WavelengthSweep {
    pub fn log(min: f64, max: f64, points: usize) -> Self {
        Self { min, max, points }
    }

    /// Default range for a section: from half the shortest flat to 200× the
    /// largest cross-section extent, 120 points.
    pub fn for_section(g: &SectionGeometry) -> Self {
        let shortest_flat = g
            .segments
            .iter()
            .filter(|s| s.kind == SegmentKind::Flat)
            .map(|s| {
                let (p, q) = (g.points[s.start], g.points[s.end]);
                (q[0] - p[0]).hypot(q[1] - p[1])
            })
            .fold(f64::INFINITY, f64::min);
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for p in &g.points {
            for k in 0..2 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        let depth = (hi[0] - lo[0]).max(hi[1] - lo[1]);
        Self::log(0.5 * shortest_flat, 200.0 * depth, 120)
    }

    pub fn values(&self) -> Result<Vec<f64>, FsmError> {
        if !(self.min > 0.0 && self.max > self.min && self.points >= 2) {
            return Err(FsmError::Sweep(format!(
                "need 0 < min < max and >= 2 points, got {self:?}"
            )));
        }
        let (l0, l1) = (self.min.ln(), self.max.ln());
        let n = self.points - 1;
        Ok((0..=n)
            .map(|i| match i {
                0 => self.min,
                i if i == n => self.max,
                i => (l0 + (l1 - l0) * i as f64 / n as f64).exp(),
            })
            .collect())
    }
}

/// Lowest load factor versus half-wavelength.
#[derive(Debug, Clone, PartialEq)]
pub struct SignatureCurve {
    pub half_wavelengths: Vec<f64>,
    pub load_factors: Vec<f64>,
    /// Full nodal vectors (`4 × nodes`, zeros at fixed DOFs).
    pub mode_shapes: Vec<DVector<f64>>,
    /// Axial load at unit load factor [N].
    pub reference_load: f64,
}

impl SignatureCurve {
    pub fn len(&self) -> usize {
        self.half_wavelengths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.half_wavelengths.is_empty()
    }

    /// Critical axial load at point `i` [N].
    pub fn pcr(&self, i: usize) -> f64 {
        self.load_factors[i] * self.reference_load
    }

    /// `half_wavelength_mm,load_factor,Pcr_N`
    pub fn to_csv(&self) -> String {
        let mut out = String::from("half_wavelength_mm,load_factor,Pcr_N\n");
        for i in 0..self.len() {
            let _ = writeln!(out, "{},{},{}", self.half_wavelengths[i], self.load_factors[i], self.pcr(i));
        }
        out
    }
}

/// Nodal `(u, v, w, θ)` amplitudes of a mode as CSV.
pub fn mode_csv(mesh: &StripMesh, mode: &DVector<f64>) -> String {
    let mut out = String::from("node,x_mm,z_mm,u,v,w,theta\n");
    for (i, p) in mesh.nodes.iter().enumerate() {
        let o = i * DOF_PER_NODE;
        let _ = writeln!(
            out,
            "{i},{},{},{},{},{},{}",
            p[0],
            p[1],
            mode[o],
            mode[o + 1],
            mode[o + 2],
            mode[o + 3]
        );
    }
    out
}

/// Scales a full mode vector to unit maximum in-plane translation, with the
/// largest translation component positive.
pub(crate) fn normalize_mode(mut v: DVector<f64>) -> DVector<f64> {
    let mut best = (0usize, 0.0f64);
    for node in 0..v.len() / DOF_PER_NODE {
        for d in [0, 2] {
            let i = node * DOF_PER_NODE + d;
            if v[i].abs() > best.1 * (1.0 + 1e-9) {
                best = (i, v[i].abs());
            }
        }
    }
    if best.1 > 0.0 {
        let s = v[best.0].signum() / best.1;
        v *= s;
    }
    v
}

/// Lowest mode at one half-wavelength: (load factor, normalized full vector).
pub fn evaluate_half_wavelength(mesh: &StripMesh, a: f64) -> Result<(f64, DVector<f64>), FsmError> {
    let wrap = |e: FsmError| FsmError::AtHalfWavelength {
        half_wavelength: a,
        source: Box::new(e),
    };
    let (k, kg) = assemble(mesh, a).map_err(wrap)?;
    let free = mesh.free_dofs();
    let (k, kg) = if free.len() == mesh.dof_count() {
        (k, kg)
    } else {
        (
            k.select_rows(&free).select_columns(&free),
            kg.select_rows(&free).select_columns(&free),
        )
    };
    let mode = solve_buckling(&k, &kg, 1).map_err(wrap)?.remove(0);
    let mut full = DVector::zeros(mesh.dof_count());
    for (r, &g) in free.iter().enumerate() {
        full[g] = mode.vector[r];
    }
    Ok((mode.load_factor, normalize_mode(full)))
}

/// Evaluates every half-wavelength of the sweep in parallel. The result is
/// independent of the evaluation order.
pub fn signature_curve(mesh: &StripMesh, sweep: &WavelengthSweep) -> Result<SignatureCurve, FsmError> {
    mesh.validate()?;
    let lengths = sweep.values()?;
    let points: Vec<(f64, DVector<f64>)> = lengths
        .par_iter()
        .map(|&a| evaluate_half_wavelength(mesh, a))
        .collect::<Result<_, _>>()?;
    let (load_factors, mode_shapes) = points.into_iter().unzip();
    Ok(SignatureCurve {
        half_wavelengths: lengths,
        load_factors,
        mode_shapes,
        reference_load: mesh.reference_load(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const E: f64 = 203_500.0;
    const NU: f64 = 0.3;

    fn k_factor(lambda: f64, b: f64, t: f64) -> f64 {
        lambda * 12.0 * (1.0 - NU * NU) * b * b / (PI * PI * E * t * t)
    }

    #[test]
    fn plate_coefficients() {
        let (b, t) = (100.0, 1.0);
        let mesh = StripMesh::plate(b, t, 10, E, NU).with_simple_supports(&[0, 10]);
        let (l1, _) = evaluate_half_wavelength(&mesh, b).unwrap();
        assert!((k_factor(l1, b, t) - 4.0).abs() / 4.0 < 5e-3);
        let (l2, _) = evaluate_half_wavelength(&mesh, 2.0 * b).unwrap();
        assert!((k_factor(l2, b, t) - 6.25).abs() / 6.25 < 5e-3);
    }

    #[test]
    fn thickness_scaling_is_quadratic() {
        let b = 100.0;
        let lam = |t: f64| {
            let mesh = StripMesh::plate(b, t, 10, E, NU).with_simple_supports(&[0, 10]);
            evaluate_half_wavelength(&mesh, b).unwrap().0
        };
        let ratio = lam(2.0) / lam(1.0);
        assert!((ratio - 4.0).abs() / 4.0 < 0.01);
    }

    #[test]
    fn mode_is_normalized() {
        let mesh = StripMesh::plate(100.0, 1.0, 10, E, NU).with_simple_supports(&[0, 10]);
        let (_, v) = evaluate_half_wavelength(&mesh, 100.0).unwrap();
        let max = (0..11)
            .flat_map(|n| [v[4 * n].abs(), v[4 * n + 2].abs()])
            .fold(0.0, f64::max);
        assert!((max - 1.0).abs() < 1e-12);
        // Fixed DOFs stay zero.
        assert_eq!(v[2], 0.0);
        assert_eq!(v[42], 0.0);
    }

    #[test]
    fn sweep_validation_and_endpoints() {
        assert!(WavelengthSweep::log(10.0, 5.0, 10).values().is_err());
        assert!(WavelengthSweep::log(1.0, 5.0, 1).values().is_err());
        let v = WavelengthSweep::log(10.0, 1000.0, 3).values().unwrap();
        assert_eq!(v[0], 10.0);
        assert_eq!(v[2], 1000.0);
        assert!((v[1] - 100.0).abs() < 1e-9);
    }

    #[test]
    fn csv_has_one_row_per_point() {
        let mesh = StripMesh::plate(100.0, 1.0, 4, E, NU).with_simple_supports(&[0, 4]);
        let c = signature_curve(&mesh, &WavelengthSweep::log(20.0, 500.0, 7)).unwrap();
        let csv = c.to_csv();
        assert_eq!(csv.lines().count(), 8);
        assert!((c.pcr(3) - c.load_factors[3] * 100.0).abs() < 1e-9 * c.pcr(3));
        assert_eq!(mode_csv(&mesh, &c.mode_shapes[0]).lines().count(), 6);
    }
}
