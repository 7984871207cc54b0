use nalgebra::DMatrix;

use super::strip::{strip_elastic_stiffness, strip_geometric_stiffness, Matrix8, StripSection};
use super::{FsmError, StripMesh, DOF_PER_NODE};

/// Local-from-global transformation for a strip inclined at `(c, s)`.
///
/// Global DOFs are `[U1 V1 W1 Θ1 U2 V2 W2 Θ2]`; local `u = cU + sW`,
/// `w = −sU + cW`, `v = V`, `θ = Θ`.
fn transformation(c: f64, s: f64) -> Matrix8 {
    let mut t = Matrix8::zeros();
    // (local u, v, w, θ) rows for node 1 then node 2.
    for (node, [iu, iv, iw, it]) in [[0, 2, 4, 5], [1, 3, 6, 7]].into_iter().enumerate() {
        let o = DOF_PER_NODE * node;
        t[(iu, o)] = c;
        t[(iu, o + 2)] = s;
        t[(iv, o + 1)] = 1.0;
        t[(iw, o)] = -s;
        t[(iw, o + 2)] = c;
        t[(it, o + 3)] = 1.0;
    }
    t
}

/// Global elastic and geometric stiffness at half-wavelength `a`, with
/// `4 × nodes` rows. Constraints are not applied.
pub fn assemble(mesh: &StripMesh, a: f64) -> Result<(DMatrix<f64>, DMatrix<f64>), FsmError> {
    mesh.validate()?;
    let n = mesh.dof_count();
    let mut k = DMatrix::zeros(n, n);
    let mut kg = DMatrix::zeros(n, n);
    for strip in &mesh.strips {
        let (p, q) = (mesh.nodes[strip.a], mesh.nodes[strip.b]);
        let width = (q[0] - p[0]).hypot(q[1] - p[1]);
        let section = StripSection {
            width,
            t: strip.t,
            e: strip.e,
            nu: strip.nu,
            stress: strip.stress,
        };
        let tr = transformation((q[0] - p[0]) / width, (q[1] - p[1]) / width);
        let ke = tr.transpose() * strip_elastic_stiffness(&section, a)? * tr;
        let ge = tr.transpose() * strip_geometric_stiffness(&section, a)? * tr;
        let idx: Vec<usize> = (0..DOF_PER_NODE)
            .map(|d| strip.a * DOF_PER_NODE + d)
            .chain((0..DOF_PER_NODE).map(|d| strip.b * DOF_PER_NODE + d))
            .collect();
        for (i, &gi) in idx.iter().enumerate() {
            for (j, &gj) in idx.iter().enumerate() {
                k[(gi, gj)] += ke[(i, j)];
                kg[(gi, gj)] += ge[(i, j)];
            }
        }
    }
    // Exact symmetry regardless of rounding in the triple products.
    let k = (&k + k.transpose()) * 0.5;
    let kg = (&kg + kg.transpose()) * 0.5;
    Ok((k, kg))
}
