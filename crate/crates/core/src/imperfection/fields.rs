use std::f64::consts::PI;

use nalgebra::DVector;

use super::member::{norm, sub};
use super::{ImperfectionError, ImperfectionSpec, MemberMesh};
use crate::fsm::{StripMesh, DOF_PER_NODE};
use crate::geometry::{ElementRole, SectionProperties};

/// Per-node displacement fields on one member mesh, each at unit amplitude:
/// unit maximum translation for the cross-section modes, unit midspan
/// translation for bow and camber, one radian midspan rotation for twist.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Components {
    pub local: Option<Vec<[f64; 3]>>,
    pub distortional: Option<Vec<[f64; 3]>>,
    pub bow: Option<Vec<[f64; 3]>>,
    pub camber: Option<Vec<[f64; 3]>>,
    pub twist: Option<Vec<[f64; 3]>>,
    /// Shear center in section coordinates, used to measure twist.
    pub twist_center: [f64; 2],
}

/// Component magnitudes [mm, mm, mm, mm, deg].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Amplitudes {
    pub local: f64,
    pub distortional: f64,
    pub bow: f64,
    pub camber: f64,
    pub twist_deg: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImperfectionField {
    pub displacements: Vec<[f64; 3]>,
    /// Magnitudes measured on the mesh after scaling.
    pub achieved: Amplitudes,
}

fn half_sine(y: f64, length: f64) -> f64 {
    if y <= 0.0 || y >= length {
        0.0
    } else {
        (PI * y / length).sin()
    }
}

/// First node of a lip strip that also belongs to a non-lip strip.
fn lip_junction(section: &StripMesh) -> Option<usize> {
    let lip: Vec<_> = section.strips.iter().filter(|s| s.role == ElementRole::Lip).collect();
    let other: Vec<_> = section.strips.iter().filter(|s| s.role != ElementRole::Lip).collect();
    lip.iter()
        .flat_map(|s| [s.a, s.b])
        .find(|&n| other.iter().any(|s| s.a == n || s.b == n))
}

/// Cross-section mode modulated by sin(πy/Lcr) along the member, scaled to
/// unit maximum nodal translation. The sign is chosen so the first
/// lip-flange junction moves away from the section center at the first
/// crest.
pub fn mode_field(
    section: &StripMesh,
    mode: &DVector<f64>,
    lcr: f64,
    member: &MemberMesh,
) -> Result<Vec<[f64; 3]>, ImperfectionError> {
    if !(lcr > 0.0) || member.length < lcr {
        return Err(ImperfectionError::Invalid(format!(
            "need 0 < Lcr <= L, got Lcr={lcr} L={}",
            member.length
        )));
    }
    let ns = section.nodes.len();
    if mode.len() != ns * DOF_PER_NODE || member.section_nodes() != ns {
        return Err(ImperfectionError::Dimension(format!(
            "mode has {} entries, section {} nodes, member section {} nodes",
            mode.len(),
            ns,
            member.section_nodes()
        )));
    }
    let shape: Vec<[f64; 2]> = (0..ns)
        .map(|k| [mode[k * DOF_PER_NODE], mode[k * DOF_PER_NODE + 2]])
        .collect();

    let mut sign = 1.0;
    if let Some(j) = lip_junction(section) {
        let (lo, hi) = section.nodes.iter().fold(
            ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]),
            |(lo, hi), p| ([lo[0].min(p[0]), lo[1].min(p[1])], [hi[0].max(p[0]), hi[1].max(p[1])]),
        );
        let c = [(lo[0] + hi[0]) / 2.0, (lo[1] + hi[1]) / 2.0];
        let out = [section.nodes[j][0] - c[0], section.nodes[j][1] - c[1]];
        let d = shape[j][0] * out[0] + shape[j][1] * out[1];
        if d < 0.0 {
            sign = -1.0;
        }
    }

    let mut field = Vec::with_capacity(member.nodes.len());
    for &y in &member.stations {
        let s = sign * (PI * y / lcr).sin();
        field.extend(shape.iter().map(|u| [u[0] * s, 0.0, u[1] * s]));
    }
    let max = field.iter().map(|d| norm(*d)).fold(0.0, f64::max);
    if !(max > 0.0) {
        return Err(ImperfectionError::Invalid("mode has no in-plane translation on this mesh".into()));
    }
    for d in &mut field {
        *d = d.map(|v| v / max);
    }
    Ok(field)
}

/// Unit bow, camber and twist fields. Bow translates along the weak
/// principal direction, camber along the strong one, both as half-sines
/// with unit midspan value; twist is a linearized rotation about the shear
/// center with one radian at midspan. Ends are unperturbed.
pub fn global_fields(props: &SectionProperties, member: &MemberMesh) -> Components {
    // Weak axis has the smaller second moment; bending about it moves
    // the section perpendicular to it.
    let (weak_dir, strong_dir) = if props.izz <= props.ixx {
        ([1.0, 0.0], [0.0, 1.0])
    } else {
        ([0.0, 1.0], [1.0, 0.0])
    };
    let sc = [props.cx + props.x0, props.cz + props.z0];
    let ns = member.section_nodes();
    let (mut bow, mut camber, mut twist) = (Vec::new(), Vec::new(), Vec::new());
    for &y in &member.stations {
        let s = half_sine(y, member.length);
        for k in 0..ns {
            let p = member.section[k];
            bow.push([weak_dir[0] * s, 0.0, weak_dir[1] * s]);
            camber.push([strong_dir[0] * s, 0.0, strong_dir[1] * s]);
            // ŷ × r: right-handed about the member axis
            twist.push([(p[1] - sc[1]) * s, 0.0, -(p[0] - sc[0]) * s]);
        }
    }
    Components {
        bow: Some(bow),
        camber: Some(camber),
        twist: Some(twist),
        twist_center: sc,
        ..Default::default()
    }
}

fn max_translation(f: &[[f64; 3]]) -> f64 {
    f.iter().map(|d| norm(*d)).fold(0.0, f64::max)
}

/// Largest rotation (radians) implied by a linearized twist field.
fn max_rotation(f: &[[f64; 3]], member: &MemberMesh, center: [f64; 2]) -> f64 {
    let mut best = 0.0f64;
    for (i, d) in f.iter().enumerate() {
        let p = member.nodes[i];
        let r = norm(sub(p, [center[0], p[1], center[1]]));
        if r > 1e-9 {
            best = best.max(norm(*d) / r);
        }
    }
    best
}

/// Σ amplitudeᵢ · componentᵢ with the amplitudes taken from `spec`.
/// Missing components contribute nothing and report zero.
pub fn combine(
    spec: &ImperfectionSpec,
    member: &MemberMesh,
    components: &Components,
) -> Result<ImperfectionField, ImperfectionError> {
    spec.validate()?;
    let n = member.nodes.len();
    let target = spec.amplitudes(member.thickness(), member.length);
    let twist_rad = target.twist_deg.to_radians();
    let parts: [(&Option<Vec<[f64; 3]>>, f64, &str); 5] = [
        (&components.local, target.local, "local"),
        (&components.distortional, target.distortional, "distortional"),
        (&components.bow, target.bow, "bow"),
        (&components.camber, target.camber, "camber"),
        (&components.twist, twist_rad, "twist"),
    ];
    let mut out = vec![[0.0; 3]; n];
    let mut achieved = [0.0; 5];
    for (slot, (field, amp, name)) in parts.iter().enumerate() {
        let Some(f) = field else { continue };
        if f.len() != n {
            return Err(ImperfectionError::Dimension(format!(
                "{name} field has {} nodes, member has {n}",
                f.len()
            )));
        }
        if *amp == 0.0 {
            continue;
        }
        let scaled: Vec<[f64; 3]> = f.iter().map(|d| d.map(|v| amp * v)).collect();
        achieved[slot] = if *name == "twist" {
            max_rotation(&scaled, member, components.twist_center).to_degrees()
        } else {
            max_translation(&scaled)
        };
        for (o, d) in out.iter_mut().zip(&scaled) {
            for c in 0..3 {
                o[c] += d[c];
            }
        }
    }
    Ok(ImperfectionField {
        displacements: out,
        achieved: Amplitudes {
            local: achieved[0],
            distortional: achieved[1],
            bow: achieved[2],
            camber: achieved[3],
            twist_deg: achieved[4],
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fsm::{evaluate_half_wavelength, StripMesh};
    use crate::geometry::{build_section, discretize, parse_designation, section_properties, GeometryConfig, MeshConfig};
    use crate::imperfection::extrude;

    fn setup(length: f64, n: usize) -> (StripMesh, SectionProperties, MemberMesh) {
        let d = parse_designation("250S162-33").unwrap();
        let g = build_section(&d, &GeometryConfig::default()).unwrap();
        let mesh = discretize(&g, &MeshConfig::coarsest()).unwrap();
        let props = section_properties(&g).unwrap();
        let member = extrude(&mesh, length, n).unwrap();
        (mesh, props, member)
    }

    #[test]
    fn mode_field_shape() {
        let (mesh, _, member) = setup(900.0, 60);
        let (_, mode) = evaluate_half_wavelength(&mesh, 300.0).unwrap();
        let f = mode_field(&mesh, &mode, 300.0, &member).unwrap();
        let ns = mesh.nodes.len();
        assert!(f[..ns].iter().all(|d| norm(*d) == 0.0));
        assert!((max_translation(&f) - 1.0).abs() < 1e-15);
        // three half-waves: the modulation at the largest node changes sign twice
        let k = (0..ns).max_by(|&a, &b| norm(f[member.node(10, a)]).total_cmp(&norm(f[member.node(10, b)]))).unwrap();
        let comp = |r: usize| f[member.node(r, k)][0] + f[member.node(r, k)][2];
        let signs: Vec<f64> = (1..60).map(comp).filter(|v| v.abs() > 1e-12).map(f64::signum).collect();
        assert_eq!(signs.windows(2).filter(|w| w[0] != w[1]).count(), 2);
        assert!(mode_field(&mesh, &mode, 1000.0, &member).is_err());
        assert!(mode_field(&mesh, &DVector::zeros(8), 300.0, &member).is_err());
    }

    #[test]
    fn global_amplitudes() {
        let (_, props, member) = setup(2909.0, 20);
        let comps = global_fields(&props, &member);
        let spec = ImperfectionSpec { bow_l_over_delta: 2909.0, ..ImperfectionSpec::zero() };
        let f = combine(&spec, &member, &comps).unwrap();
        assert!((f.achieved.bow - 1.0).abs() < 1e-12);
        let ns = member.section_nodes();
        let last = member.nodes.len() - ns;
        assert!(f.displacements[..ns].iter().chain(&f.displacements[last..]).all(|d| *d == [0.0; 3]));

        let (_, props, member) = setup(2000.0, 20);
        let comps = global_fields(&props, &member);
        let spec = ImperfectionSpec { twist_rate: 0.30, ..ImperfectionSpec::zero() };
        let f = combine(&spec, &member, &comps).unwrap();
        assert!((f.achieved.twist_deg - 0.60).abs() < 1e-12);
    }

    #[test]
    fn bow_and_camber_are_rigid_in_plane() {
        let (_, props, member) = setup(1500.0, 10);
        let comps = global_fields(&props, &member);
        let spec = ImperfectionSpec { twist_rate: 0.0, ..ImperfectionSpec::default() };
        let f = combine(&spec, &member, &comps).unwrap();
        let ns = member.section_nodes();
        for r in 0..member.stations.len() {
            let d0 = f.displacements[member.node(r, 0)];
            for k in 1..ns {
                let d = f.displacements[member.node(r, k)];
                assert!((d[0] - d0[0]).abs() < 1e-10 && (d[2] - d0[2]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn combination_rules() {
        let (mesh, props, member) = setup(1200.0, 40);
        let (_, lm) = evaluate_half_wavelength(&mesh, 60.0).unwrap();
        let (_, dm) = evaluate_half_wavelength(&mesh, 400.0).unwrap();
        let mut comps = global_fields(&props, &member);
        comps.local = Some(mode_field(&mesh, &lm, 60.0, &member).unwrap());
        comps.distortional = Some(mode_field(&mesh, &dm, 400.0, &member).unwrap());

        let zero = combine(&ImperfectionSpec::zero(), &member, &comps).unwrap();
        assert!(zero.displacements.iter().all(|d| *d == [0.0; 3]));

        let spec = ImperfectionSpec::default();
        let f = combine(&spec, &member, &comps).unwrap();
        let t = member.thickness();
        assert!((f.achieved.local - 0.31 * t).abs() <= 1e-9 * 0.31 * t);
        assert!((f.achieved.distortional - 0.75 * t).abs() <= 1e-9 * 0.75 * t);
        let a = f.achieved;
        let sum = a.local + a.distortional + a.bow + a.camber
            + a.twist_deg.to_radians() * member.section.iter().map(|p| (p[0] - comps.twist_center[0]).hypot(p[1] - comps.twist_center[1])).fold(0.0, f64::max);
        assert!(max_translation(&f.displacements) <= sum * (1.0 + 1e-12));

        for k in [-3, 1, 4] {
            let alpha = 2f64.powi(k);
            let g = combine(&spec.scaled(alpha), &member, &comps).unwrap();
            for (x, y) in g.displacements.iter().zip(&f.displacements) {
                assert_eq!(*x, y.map(|v| v * alpha));
            }
        }

        let mut bad = comps.clone();
        bad.local = Some(vec![[0.0; 3]; 3]);
        assert!(matches!(combine(&spec, &member, &bad), Err(ImperfectionError::Dimension(_))));
    }

    #[test]
    fn local_only_on_unit_thickness() {
        let s = StripMesh::plate(100.0, 1.0, 10, 203_500.0, 0.3).with_simple_supports(&[0, 10]);
        let member = extrude(&s, 400.0, 40).unwrap();
        let (_, m) = evaluate_half_wavelength(&s, 100.0).unwrap();
        let comps = Components { local: Some(mode_field(&s, &m, 100.0, &member).unwrap()), ..Default::default() };
        let spec = ImperfectionSpec { delta_local_over_t: 0.31, ..ImperfectionSpec::zero() };
        let f = combine(&spec, &member, &comps).unwrap();
        assert!((max_translation(&f.displacements) - 0.31).abs() < 1e-12);
    }
}
