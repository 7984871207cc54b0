use super::{ElementRole, GeometryError, SectionGeometry, SegmentKind};
use crate::fsm::{Strip, StripMesh};
use crate::material::{E_STEEL, NU_STEEL};

/// Strip counts per plate type.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeshConfig {
    pub web: usize,
    pub flange: usize,
    pub lip: usize,
    /// Strips per edge of a generic polyline.
    pub plate: usize,
    /// Strips per corner-arc chord.
    pub arc_chord: usize,
    pub e: f64,
    pub nu: f64,
}

impl Default for MeshConfig {
    fn default() -> Self {
        Self {
            web: 4,
            flange: 4,
            lip: 2,
            plate: 4,
            arc_chord: 1,
            e: E_STEEL,
            nu: NU_STEEL,
        }
    }
}

impl MeshConfig {
    /// Same material with every strip count multiplied by `factor`.
    pub fn refined(&self, factor: usize) -> Self {
        Self {
            web: self.web * factor,
            flange: self.flange * factor,
            lip: self.lip * factor,
            plate: self.plate * factor,
            arc_chord: self.arc_chord * factor,
            ..*self
        }
    }

    /// One strip per flat, one per arc chord.
    pub fn coarsest() -> Self {
        Self {
            web: 1,
            flange: 1,
            lip: 1,
            plate: 1,
            arc_chord: 1,
            ..Self::default()
        }
    }

    fn count(&self, kind: SegmentKind, role: ElementRole) -> usize {
        match (kind, role) {
            (SegmentKind::Arc, _) | (_, ElementRole::Corner) => self.arc_chord,
            (_, ElementRole::Web) => self.web,
            (_, ElementRole::Flange) => self.flange,
            (_, ElementRole::Lip) => self.lip,
            (_, ElementRole::Plate) => self.plate,
        }
    }
}

/// Subdivides each centerline edge into strips. Reference stress is a
/// uniform 1 MPa compression.
pub fn discretize(g: &SectionGeometry, mesh: &MeshConfig) -> Result<StripMesh, GeometryError> {
    g.validate()?;
    let mut nodes = vec![g.points[0]];
    let mut strips = Vec::new();
    for seg in &g.segments {
        let n = mesh.count(seg.kind, seg.role);
        if n == 0 {
            return Err(GeometryError::Config(format!(
                "zero strips requested for {:?} segment",
                seg.role
            )));
        }
        for e in seg.start..seg.end {
            let (a, b) = (g.points[e], g.points[e + 1]);
            for k in 1..=n {
                let s = k as f64 / n as f64;
                let p = if k == n {
                    b
                } else {
                    [a[0] + (b[0] - a[0]) * s, a[1] + (b[1] - a[1]) * s]
                };
                nodes.push(p);
                strips.push(Strip {
                    a: nodes.len() - 2,
                    b: nodes.len() - 1,
                    t: g.thickness,
                    e: mesh.e,
                    nu: mesh.nu,
                    stress: 1.0,
                    role: seg.role,
                });
            }
        }
    }
    Ok(StripMesh::new(nodes, strips))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_section, parse_designation, GeometryConfig};

    #[test]
    fn sharp_channel_one_strip_per_flat() {
        let cfg = GeometryConfig {
            corner_radius_factor: 0.0,
            ..Default::default()
        };
        let g = build_section(&parse_designation("250S162-33").unwrap(), &cfg).unwrap();
        let m = discretize(&g, &MeshConfig::coarsest()).unwrap();
        assert_eq!(m.strips.len(), 5);
        assert_eq!(m.nodes.len(), 6);
    }

    #[test]
    fn strip_widths_sum_to_centerline() {
        let g = build_section(&parse_designation("250S162-33").unwrap(), &GeometryConfig::default()).unwrap();
        let m = discretize(&g, &MeshConfig::default()).unwrap();
        assert_eq!(m.nodes.len(), m.strips.len() + 1);
        // 2 + 4 + 4 + 4 + 2 flats plus 4 arcs of 4 chords.
        assert_eq!(m.strips.len(), 16 + 16);
        let total: f64 = m.strips.iter().map(|s| m.width(s)).sum();
        let len = g.centerline_length();
        assert!((total - len).abs() <= 1e-9 * len);
    }

    #[test]
    fn zero_strips_is_a_config_error() {
        let g = build_section(&parse_designation("250S162-33").unwrap(), &GeometryConfig::default()).unwrap();
        let cfg = MeshConfig {
            lip: 0,
            ..Default::default()
        };
        assert!(matches!(discretize(&g, &cfg), Err(GeometryError::Config(_))));
    }
}
