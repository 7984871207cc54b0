use std::fmt::Write as _;
use std::path::Path;

use super::{ImperfectionError, ImperfectionField, MemberMesh, ShellElement};

pub const FORMAT_HEADER: &str = "THINWALL-MEMBER-MESH 1";

/// Contents of a member mesh file. Coordinates are the perturbed
/// (nominal + imperfection) positions in mm.
#[derive(Debug, Clone, PartialEq)]
pub struct MemberFile {
    pub meta: Vec<(String, String)>,
    pub nodes: Vec<[f64; 3]>,
    pub elements: Vec<ShellElement>,
}

/// Shortest form that parses back to the same `f64`.
fn num(v: f64) -> String {
    format!("{v:e}")
}

impl MemberFile {
    /// Perturbed mesh with `meta` appended after the standard keys.
    pub fn new(
        member: &MemberMesh,
        field: &ImperfectionField,
        meta: &[(String, String)],
    ) -> Result<Self, ImperfectionError> {
        if field.displacements.len() != member.nodes.len() {
            return Err(ImperfectionError::Dimension(format!(
                "field has {} nodes, member has {}",
                field.displacements.len(),
                member.nodes.len()
            )));
        }
        let a = field.achieved;
        let mut all = vec![
            ("length_mm".to_string(), num(member.length)),
            ("thickness_mm".to_string(), num(member.thickness())),
            ("section_nodes".to_string(), member.section_nodes().to_string()),
            ("longitudinal_divisions".to_string(), (member.stations.len() - 1).to_string()),
            ("amplitude_local_mm".to_string(), num(a.local)),
            ("amplitude_distortional_mm".to_string(), num(a.distortional)),
            ("amplitude_bow_mm".to_string(), num(a.bow)),
            ("amplitude_camber_mm".to_string(), num(a.camber)),
            ("amplitude_twist_deg".to_string(), num(a.twist_deg)),
            ("twist_distribution".to_string(), "half_sine".to_string()),
            ("seed".to_string(), "none".to_string()),
        ];
        all.extend(meta.iter().cloned());
        let nodes = member
            .nodes
            .iter()
            .zip(&field.displacements)
            .map(|(p, d)| [p[0] + d[0], p[1] + d[1], p[2] + d[2]])
            .collect();
        Ok(Self { meta: all, nodes, elements: member.elements.clone() })
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.meta.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn write(&self, path: &Path) -> Result<(), ImperfectionError> {
        std::fs::write(path, write_member(self)).map_err(|source| ImperfectionError::Io {
            path: path.display().to_string(),
            source,
        })
    }

    pub fn read(path: &Path) -> Result<Self, ImperfectionError> {
        let text = std::fs::read_to_string(path).map_err(|source| ImperfectionError::Io {
            path: path.display().to_string(),
            source,
        })?;
        read_member(&text)
    }
}

pub fn write_member(f: &MemberFile) -> String {
    let mut out = String::with_capacity(64 * (f.nodes.len() + f.elements.len()));
    out.push_str(FORMAT_HEADER);
    out.push('\n');
    for (k, v) in &f.meta {
        let _ = writeln!(out, "META {k} {v}");
    }
    for (i, p) in f.nodes.iter().enumerate() {
        let _ = writeln!(out, "NODE {} {} {} {}", i + 1, num(p[0]), num(p[1]), num(p[2]));
    }
    for (i, e) in f.elements.iter().enumerate() {
        let n = e.nodes.map(|v| v + 1);
        let _ = writeln!(out, "ELEM {} {} {} {} {} {}", i + 1, n[0], n[1], n[2], n[3], num(e.thickness));
    }
    out
}

/// Parses the format written by [`write_member`]. Ids must run 1, 2, …
/// in file order.
pub fn read_member(text: &str) -> Result<MemberFile, ImperfectionError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == FORMAT_HEADER => {}
        _ => {
            return Err(ImperfectionError::Format {
                line: 1,
                reason: format!("expected header {FORMAT_HEADER:?}"),
            })
        }
    }
    let mut f = MemberFile { meta: Vec::new(), nodes: Vec::new(), elements: Vec::new() };
    for (i, line) in lines {
        let line_no = i + 1;
        let err = |reason: String| ImperfectionError::Format { line: line_no, reason };
        let mut tok = line.split(' ');
        let kind = tok.next().unwrap_or("");
        let rest: Vec<&str> = tok.collect();
        let float = |s: &str| s.parse::<f64>().map_err(|_| err(format!("bad number {s:?}")));
        let id = |s: &str, expect: usize| match s.parse::<usize>() {
            Ok(v) if v == expect => Ok(()),
            _ => Err(err(format!("expected id {expect}, got {s:?}"))),
        };
        match kind {
            "META" => {
                if rest.len() < 2 {
                    return Err(err("META needs a key and a value".into()));
                }
                f.meta.push((rest[0].to_string(), rest[1..].join(" ")));
            }
            "NODE" => {
                if rest.len() != 4 {
                    return Err(err("NODE needs id x y z".into()));
                }
                id(rest[0], f.nodes.len() + 1)?;
                f.nodes.push([float(rest[1])?, float(rest[2])?, float(rest[3])?]);
            }
            "ELEM" => {
                if rest.len() != 6 {
                    return Err(err("ELEM needs id n1 n2 n3 n4 thickness".into()));
                }
                id(rest[0], f.elements.len() + 1)?;
                let mut nodes = [0usize; 4];
                for (k, s) in rest[1..5].iter().enumerate() {
                    let n: usize = s.parse().map_err(|_| err(format!("bad node id {s:?}")))?;
                    if n == 0 || n > f.nodes.len() {
                        return Err(err(format!("node {n} is not defined")));
                    }
                    nodes[k] = n - 1;
                }
                f.elements.push(ShellElement { nodes, thickness: float(rest[5])? });
            }
            "" => {}
            other => return Err(err(format!("unknown record {other:?}"))),
        }
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fsm::StripMesh;
    use crate::imperfection::{extrude, Amplitudes};

    fn sample() -> (MemberMesh, ImperfectionField) {
        let s = StripMesh::plate(37.3, 0.8382, 4, 203_500.0, 0.3);
        let m = extrude(&s, 123.4, 4).unwrap();
        let field = ImperfectionField {
            displacements: (0..m.nodes.len()).map(|i| [0.001 * i as f64, 0.0, -1.0 / 3.0]).collect(),
            achieved: Amplitudes::default(),
        };
        (m, field)
    }

    #[test]
    fn text_round_trip_is_byte_exact() {
        let (m, field) = sample();
        let f = MemberFile::new(&m, &field, &[("LcrD_mm".into(), num(41.0))]).unwrap();
        let text = write_member(&f);
        let back = read_member(&text).unwrap();
        assert_eq!(write_member(&back), text);
        assert_eq!(read_member(&write_member(&back)).unwrap(), back);
        assert_eq!(back.meta("LcrD_mm"), Some("4.1e1"));
        assert_eq!(back.nodes, f.nodes);
        assert_eq!(back.elements, m.elements);
    }

    #[test]
    fn zero_field_keeps_nominal_coordinates() {
        let (m, mut field) = sample();
        field.displacements.iter_mut().for_each(|d| *d = [0.0; 3]);
        let back = read_member(&write_member(&MemberFile::new(&m, &field, &[]).unwrap())).unwrap();
        for (a, b) in back.nodes.iter().zip(&m.nodes) {
            for c in 0..3 {
                assert_eq!(a[c], b[c]);
            }
        }
    }

    #[test]
    fn file_round_trip_and_errors() {
        let (m, field) = sample();
        let f = MemberFile::new(&m, &field, &[]).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("m.txt");
        f.write(&p).unwrap();
        let back = MemberFile::read(&p).unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), write_member(&back));
        assert!(matches!(MemberFile::read(&dir.path().join("missing")), Err(ImperfectionError::Io { .. })));
        assert!(read_member("NODE 1 0 0 0\n").is_err());
        assert!(read_member(&format!("{FORMAT_HEADER}\nNODE 2 0 0 0\n")).is_err());
        assert!(read_member(&format!("{FORMAT_HEADER}\nNODE 1 0 0 0\nELEM 1 1 1 1 9 1\n")).is_err());
        assert!(read_member(&format!("{FORMAT_HEADER}\nFOO 1\n")).is_err());
    }
}
