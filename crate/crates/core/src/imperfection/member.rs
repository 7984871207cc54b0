use super::ImperfectionError;
use crate::fsm::StripMesh;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShellElement {
    pub nodes: [usize; 4],
    pub thickness: f64,
}

/// Shell mesh of a prismatic member. Node `r·n + k` is section node `k` at
/// station `r`; y is the member axis.
#[derive(Debug, Clone, PartialEq)]
pub struct MemberMesh {
    pub nodes: Vec<[f64; 3]>,
    pub elements: Vec<ShellElement>,
    pub length: f64,
    pub section: Vec<[f64; 2]>,
    pub stations: Vec<f64>,
}

impl MemberMesh {
    pub fn section_nodes(&self) -> usize {
        self.section.len()
    }

    pub fn node(&self, station: usize, k: usize) -> usize {
        station * self.section.len() + k
    }

    pub fn element_area(&self, e: &ShellElement) -> f64 {
        let p = e.nodes.map(|i| self.nodes[i]);
        let d1 = sub(p[2], p[0]);
        let d2 = sub(p[3], p[1]);
        0.5 * norm(cross(d1, d2))
    }

    pub fn total_area(&self) -> f64 {
        self.elements.iter().map(|e| self.element_area(e)).sum()
    }

    /// Thickest element; members from [`extrude`] have one thickness.
    pub fn thickness(&self) -> f64 {
        self.elements.iter().map(|e| e.thickness).fold(0.0, f64::max)
    }

    pub fn validate(&self) -> Result<(), ImperfectionError> {
        for (i, e) in self.elements.iter().enumerate() {
            if e.nodes.iter().any(|&n| n >= self.nodes.len()) {
                return Err(ImperfectionError::Invalid(format!("element {i} references a missing node")));
            }
            // Bilinear Jacobian at each corner: both edge vectors non-parallel
            // and the corner normals agree with the element normal.
            let p = e.nodes.map(|n| self.nodes[n]);
            let n0 = cross(sub(p[2], p[0]), sub(p[3], p[1]));
            for c in 0..4 {
                let a = sub(p[(c + 1) % 4], p[c]);
                let b = sub(p[(c + 3) % 4], p[c]);
                if dot(cross(a, b), n0) <= 0.0 {
                    return Err(ImperfectionError::Invalid(format!("element {i} has a non-positive Jacobian")));
                }
            }
        }
        Ok(())
    }
}

pub(crate) fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn norm(a: [f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

/// Divisions along the member: at least 10 per local half-wavelength,
/// rounded up to an even count so a station sits at midspan.
pub fn longitudinal_divisions(length: f64, local_half_wavelength: f64) -> usize {
    let n = (10.0 * length / local_half_wavelength).ceil().max(2.0) as usize;
    n + n % 2
}

/// Sweeps the section along y ∈ [0, L] in `n` equal divisions.
pub fn extrude(section: &StripMesh, length: f64, n: usize) -> Result<MemberMesh, ImperfectionError> {
    if !(length > 0.0) {
        return Err(ImperfectionError::Invalid(format!("member length must be positive, got {length}")));
    }
    if n < 2 {
        return Err(ImperfectionError::Invalid(format!("need at least 2 longitudinal divisions, got {n}")));
    }
    let stations: Vec<f64> = (0..=n)
        .map(|r| if r == n { length } else { length * r as f64 / n as f64 })
        .collect();
    let ns = section.nodes.len();
    let mut nodes = Vec::with_capacity(ns * (n + 1));
    for &y in &stations {
        nodes.extend(section.nodes.iter().map(|p| [p[0], y, p[1]]));
    }
    let mut elements = Vec::with_capacity(section.strips.len() * n);
    for r in 0..n {
        for s in &section.strips {
            elements.push(ShellElement {
                nodes: [r * ns + s.a, r * ns + s.b, (r + 1) * ns + s.b, (r + 1) * ns + s.a],
                thickness: s.t,
            });
        }
    }
    let m = MemberMesh {
        nodes,
        elements,
        length,
        section: section.nodes.clone(),
        stations,
    };
    m.validate()?;
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fsm::StripMesh;

    #[test]
    fn counts_and_area() {
        let s = StripMesh::plate(50.0, 1.2, 5, 203_500.0, 0.3);
        let m = extrude(&s, 300.0, 2).unwrap();
        assert_eq!(m.nodes.len(), 18);
        assert_eq!(m.elements.len(), 10);
        assert_eq!(m.stations, vec![0.0, 150.0, 300.0]);
        assert!((m.total_area() - 50.0 * 300.0).abs() <= 1e-9 * 15000.0);
        assert_eq!(m.thickness(), 1.2);
        assert!(extrude(&s, 300.0, 1).is_err());
        assert!(extrude(&s, 0.0, 4).is_err());
    }

    #[test]
    fn division_rule() {
        assert_eq!(longitudinal_divisions(1000.0, 100.0), 100);
        assert_eq!(longitudinal_divisions(1000.0, 130.0), 78);
        assert_eq!(longitudinal_divisions(1.0, 100.0), 2);
        assert_eq!(longitudinal_divisions(1234.5, 67.8) % 2, 0);
    }

    #[test]
    fn collapsed_element_is_rejected() {
        let s = StripMesh::plate(50.0, 1.0, 2, 203_500.0, 0.3);
        let mut m = extrude(&s, 100.0, 2).unwrap();
        m.nodes[1] = m.nodes[0];
        assert!(m.validate().is_err());
    }
}
