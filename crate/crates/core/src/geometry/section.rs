use std::f64::consts::PI;
use std::fmt::Write as _;

use super::{Designation, GeometryConfig, GeometryError};
use crate::units::in_to_mm;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SegmentKind {
    Flat,
    Arc,
}

/// Which plate of the cross-section a segment belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ElementRole {
    Lip,
    Flange,
    Web,
    Corner,
    /// Generic plate of a user-supplied polyline.
    Plate,
}

/// A run of the centerline: `points[start..=end]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub kind: SegmentKind,
    pub role: ElementRole,
    pub start: usize,
    pub end: usize,
}

/// Nominal out-to-out dimensions of a lipped channel [mm].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelDims {
    pub depth: f64,
    pub flange: f64,
    pub lip: f64,
    pub corner_radius: f64,
}

/// Open centerline polyline of a thin-walled cross-section [mm].
///
/// For lipped channels the web lies along z at x = 0 and the section is
/// symmetric about the x-axis.
#[derive(Debug, Clone, PartialEq)]
pub struct SectionGeometry {
    pub points: Vec<[f64; 2]>,
    pub segments: Vec<Segment>,
    pub thickness: f64,
    pub symmetric_about_x: bool,
    pub channel: Option<ChannelDims>,
}

impl SectionGeometry {
    /// Builds a section from an arbitrary open polyline; every edge is a flat plate.
    pub fn from_polyline(points: Vec<[f64; 2]>, thickness: f64) -> Result<Self, GeometryError> {
        if points.len() < 2 {
            return Err(GeometryError::Invalid("polyline needs at least two points".into()));
        }
        let segments = (0..points.len() - 1)
            .map(|i| Segment {
                kind: SegmentKind::Flat,
                role: ElementRole::Plate,
                start: i,
                end: i + 1,
            })
            .collect();
        let symmetric_about_x = is_symmetric_about_x(&points);
        let g = Self {
            points,
            segments,
            thickness,
            symmetric_about_x,
            channel: None,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn centerline_length(&self) -> f64 {
        self.points.windows(2).map(|w| dist(w[0], w[1])).sum()
    }

    /// Applies a rigid rotation (radians, about the origin) and translation.
    pub fn transformed(&self, angle: f64, shift: [f64; 2]) -> Self {
        let (s, c) = angle.sin_cos();
        let mut g = self.clone();
        for p in &mut g.points {
            let [x, z] = *p;
            *p = [c * x - s * z + shift[0], s * x + c * z + shift[1]];
        }
        g.symmetric_about_x = is_symmetric_about_x(&g.points);
        g
    }

    /// Checks positive thickness, non-degenerate edges and that no two
    /// non-adjacent edges intersect.
    pub fn validate(&self) -> Result<(), GeometryError> {
        if !(self.thickness.is_finite() && self.thickness > 0.0) {
            return Err(GeometryError::Invalid(format!(
                "thickness must be positive, got {}",
                self.thickness
            )));
        }
        let scale = self.centerline_length();
        if !(scale > 0.0) {
            return Err(GeometryError::Invalid("zero-length centerline".into()));
        }
        let n = self.points.len();
        for (i, w) in self.points.windows(2).enumerate() {
            if dist(w[0], w[1]) <= 1e-12 * scale {
                return Err(GeometryError::Invalid(format!("edge {i} has zero length")));
            }
        }
        for i in 0..n - 1 {
            for j in i + 2..n - 1 {
                let (a, b) = (self.points[i], self.points[i + 1]);
                let (c, d) = (self.points[j], self.points[j + 1]);
                if segments_intersect(a, b, c, d) {
                    return Err(GeometryError::Invalid(format!(
                        "edges {i} and {j} intersect"
                    )));
                }
            }
        }
        Ok(())
    }

    /// CSV of centerline points: `x_mm,z_mm,segment` where `segment` is the
    /// kind of the edge ending at the point (`start` for the first point).
    pub fn to_csv(&self) -> String {
        let mut kinds = vec!["start"; self.points.len()];
        for seg in &self.segments {
            for k in kinds.iter_mut().take(seg.end + 1).skip(seg.start + 1) {
                *k = match seg.kind {
                    SegmentKind::Flat => "flat",
                    SegmentKind::Arc => "arc",
                };
            }
        }
        let mut out = String::from("x_mm,z_mm,segment\n");
        for (p, k) in self.points.iter().zip(kinds) {
            let _ = writeln!(out, "{},{},{}", p[0], p[1], k);
        }
        out
    }
}

pub(crate) fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (b[0] - a[0]).hypot(b[1] - a[1])
}

fn is_symmetric_about_x(points: &[[f64; 2]]) -> bool {
    let n = points.len();
    let scale = points
        .iter()
        .map(|p| p[0].abs().max(p[1].abs()))
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    (0..n).all(|i| {
        let (p, q) = (points[i], points[n - 1 - i]);
        (p[0] - q[0]).abs() <= 1e-9 * scale && (p[1] + q[1]).abs() <= 1e-9 * scale
    })
}

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn segments_intersect(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2]) -> bool {
    let d1 = cross(c, d, a);
    let d2 = cross(c, d, b);
    let d3 = cross(a, b, c);
    let d4 = cross(a, b, d);
    ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
}

/// Builds the centerline of a lipped channel from its designation.
///
/// Out-to-out depth D, flange B and lip d give centerline lengths D − t,
/// B − t and d − t/2. Each of the four corners is replaced by a circular arc
/// of centerline radius `corner_radius_factor · t` tangent to both plates and
/// represented by `corner_arc_segments` chords.
pub fn build_section(d: &Designation, cfg: &GeometryConfig) -> Result<SectionGeometry, GeometryError> {
    cfg.validate()?;
    let t = in_to_mm(cfg.thickness_in(d.mils())?);
    let lip = in_to_mm(cfg.lip_in(d.flange_code())?);
    let depth = d.web_depth_mm();
    let flange = d.flange_width_mm();
    channel(depth, flange, lip, t, cfg.corner_radius_factor * t, cfg.corner_arc_segments)
}

/// Lipped channel from out-to-out dimensions [mm] and centerline corner radius.
pub fn channel(
    depth: f64,
    flange: f64,
    lip: f64,
    t: f64,
    radius: f64,
    arc_segments: usize,
) -> Result<SectionGeometry, GeometryError> {
    if !(t > 0.0 && depth > t && flange > t && lip > t / 2.0) {
        return Err(GeometryError::Invalid(format!(
            "dimensions D={depth}, B={flange}, d={lip} too small for t={t}"
        )));
    }
    if arc_segments == 0 {
        return Err(GeometryError::Config("corner_arc_segments must be >= 1".into()));
    }
    let h = depth - t;
    let b = flange - t;
    let dl = lip - t / 2.0;
    // Flat lengths left after the fillets.
    let flats = [
        ("lip", dl - radius),
        ("flange", b - 2.0 * radius),
        ("web", h - 2.0 * radius),
    ];
    for (name, len) in flats {
        if len <= 1e-9 * depth {
            return Err(GeometryError::Invalid(format!(
                "corner radius {radius:.4} mm leaves no flat {name} (length {len:.4} mm)"
            )));
        }
    }

    let corners = [
        [b, h / 2.0 - dl],
        [b, h / 2.0],
        [0.0, h / 2.0],
        [0.0, -h / 2.0],
        [b, -h / 2.0],
        [b, -h / 2.0 + dl],
    ];
    let roles = [
        ElementRole::Lip,
        ElementRole::Flange,
        ElementRole::Web,
        ElementRole::Flange,
        ElementRole::Lip,
    ];

    let mut points = vec![corners[0]];
    let mut segments = Vec::new();
    for (k, role) in roles.iter().enumerate() {
        let end_of_flat = match k {
            4 => corners[5],
            _ if radius == 0.0 => corners[k + 1],
            _ => fillet_start(corners[k], corners[k + 1], corners[k + 2], radius),
        };
        points.push(end_of_flat);
        segments.push(Segment {
            kind: SegmentKind::Flat,
            role: *role,
            start: points.len() - 2,
            end: points.len() - 1,
        });
        if k < 4 && radius > 0.0 {
            let start = points.len() - 1;
            points.extend(fillet_points(corners[k], corners[k + 1], corners[k + 2], radius, arc_segments));
            segments.push(Segment {
                kind: SegmentKind::Arc,
                role: ElementRole::Corner,
                start,
                end: points.len() - 1,
            });
        }
    }

    let g = SectionGeometry {
        points,
        segments,
        thickness: t,
        symmetric_about_x: true,
        channel: Some(ChannelDims {
            depth,
            flange,
            lip,
            corner_radius: radius,
        }),
    };
    g.validate()?;
    debug_assert!(is_symmetric_about_x(&g.points));
    Ok(g)
}

fn unit(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    let l = dist(a, b);
    [(b[0] - a[0]) / l, (b[1] - a[1]) / l]
}

/// Tangent offset of a fillet of `radius` at vertex `p` between edges a→p→c.
fn tangent_offset(a: [f64; 2], p: [f64; 2], c: [f64; 2], radius: f64) -> f64 {
    let d1 = unit(a, p);
    let d2 = unit(p, c);
    let turn = (d1[0] * d2[1] - d1[1] * d2[0]).atan2(d1[0] * d2[0] + d1[1] * d2[1]);
    radius * (turn.abs() / 2.0).tan()
}

fn fillet_start(a: [f64; 2], p: [f64; 2], c: [f64; 2], radius: f64) -> [f64; 2] {
    let d1 = unit(a, p);
    let e = tangent_offset(a, p, c, radius);
    [p[0] - e * d1[0], p[1] - e * d1[1]]
}

/// Arc chords after the first tangent point, ending at the second tangent point.
fn fillet_points(a: [f64; 2], p: [f64; 2], c: [f64; 2], radius: f64, n: usize) -> Vec<[f64; 2]> {
    let d1 = unit(a, p);
    let d2 = unit(p, c);
    let turn = (d1[0] * d2[1] - d1[1] * d2[0]).atan2(d1[0] * d2[0] + d1[1] * d2[1]);
    let e = radius * (turn.abs() / 2.0).tan();
    let t1 = [p[0] - e * d1[0], p[1] - e * d1[1]];
    let t2 = [p[0] + e * d2[0], p[1] + e * d2[1]];
    // Normal of d1 pointing to the inside of the turn.
    let sign = turn.signum();
    let n1 = [-d1[1] * sign, d1[0] * sign];
    let center = [t1[0] + radius * n1[0], t1[1] + radius * n1[1]];
    let a0 = (t1[1] - center[1]).atan2(t1[0] - center[0]);
    let mut sweep = (t2[1] - center[1]).atan2(t2[0] - center[0]) - a0;
    while sweep > PI {
        sweep -= 2.0 * PI;
    }
    while sweep < -PI {
        sweep += 2.0 * PI;
    }
    (1..=n)
        .map(|i| {
            if i == n {
                t2
            } else {
                let ang = a0 + sweep * i as f64 / n as f64;
                [center[0] + radius * ang.cos(), center[1] + radius * ang.sin()]
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::parse_designation;

    fn built(text: &str) -> SectionGeometry {
        build_section(&parse_designation(text).unwrap(), &GeometryConfig::default()).unwrap()
    }

    #[test]
    fn corner_arcs_have_radius_two_t() {
        let g = built("250S162-33");
        let t = 0.0346 * 25.4;
        assert!((g.thickness - t).abs() < 1e-12);
        assert!((g.thickness - 0.879).abs() < 5e-4);
        let arcs: Vec<_> = g.segments.iter().filter(|s| s.kind == SegmentKind::Arc).collect();
        assert_eq!(arcs.len(), 4);
        let r = 2.0 * t;
        assert!((r - 1.758).abs() < 1e-3);
        for arc in arcs {
            assert_eq!(arc.end - arc.start, 4);
            // All arc points are equidistant from a common center: check via
            // the circumcircle of the first three points.
            let pts = &g.points[arc.start..=arc.end];
            let chord = dist(pts[0], pts[1]);
            let expected = 2.0 * r * (PI / 16.0).sin();
            assert!((chord - expected).abs() < 1e-9, "{chord} vs {expected}");
        }
    }

    #[test]
    fn arcs_are_tangent_to_flats() {
        let g = built("600S162-54");
        for (i, seg) in g.segments.iter().enumerate() {
            if seg.kind != SegmentKind::Arc {
                continue;
            }
            let before = &g.segments[i - 1];
            let after = &g.segments[i + 1];
            let flat_in = unit(g.points[before.start], g.points[before.end]);
            let flat_out = unit(g.points[after.start], g.points[after.end]);
            // Tangent of the arc at its ends is perpendicular to the radius;
            // chord directions converge to it as segments increase, so check
            // the half-angle relation instead: first chord deviates from the
            // incoming flat by exactly sweep / (2n).
            let first = unit(g.points[seg.start], g.points[seg.start + 1]);
            let last = unit(g.points[seg.end - 1], g.points[seg.end]);
            let ang = |a: [f64; 2], b: [f64; 2]| (a[0] * b[1] - a[1] * b[0]).atan2(a[0] * b[0] + a[1] * b[1]);
            let step = PI / 2.0 / 4.0;
            assert!((ang(flat_in, first).abs() - step / 2.0).abs() < 1e-9);
            assert!((ang(last, flat_out).abs() - step / 2.0).abs() < 1e-9);
        }
    }

    #[test]
    fn sharp_corners_give_summed_centerline_dims() {
        let cfg = GeometryConfig {
            corner_radius_factor: 0.0,
            ..Default::default()
        };
        let d = parse_designation("250S162-33").unwrap();
        let g = build_section(&d, &cfg).unwrap();
        assert_eq!(g.points.len(), 6);
        let t = g.thickness;
        let lip = 0.5 * 25.4;
        let expected = (63.5 - t) + 2.0 * (1.62 * 25.4 - t) + 2.0 * (lip - t / 2.0);
        assert!((g.centerline_length() - expected).abs() < 1e-9 * expected);
    }

    #[test]
    fn deep_section_is_valid_and_symmetric() {
        let g = built("1200S250-54");
        g.validate().unwrap();
        assert!(g.symmetric_about_x);
        assert!(is_symmetric_about_x(&g.points));
        // Mirror z → −z and reverse order: identical point set.
        let n = g.points.len();
        for i in 0..n {
            let p = g.points[i];
            let q = g.points[n - 1 - i];
            assert!((p[0] - q[0]).abs() < 1e-9 && (p[1] + q[1]).abs() < 1e-9);
        }
    }

    #[test]
    fn missing_config_entries_are_reported() {
        let d = parse_designation("250S175-33").unwrap();
        let err = build_section(&d, &GeometryConfig::default()).unwrap_err();
        assert!(matches!(err, GeometryError::Config(ref m) if m.contains("175")));
        let d = parse_designation("250S162-44").unwrap();
        let err = build_section(&d, &GeometryConfig::default()).unwrap_err();
        assert!(matches!(err, GeometryError::Config(ref m) if m.contains("44")));
    }

    #[test]
    fn oversized_radius_is_rejected() {
        let cfg = GeometryConfig {
            corner_radius_factor: 20.0,
            ..Default::default()
        };
        let d = parse_designation("250S162-97").unwrap();
        assert!(matches!(build_section(&d, &cfg), Err(GeometryError::Invalid(_))));
    }

    #[test]
    fn self_intersection_is_detected() {
        let pts = vec![[0.0, 0.0], [10.0, 0.0], [10.0, 10.0], [5.0, -5.0]];
        assert!(SectionGeometry::from_polyline(pts, 1.0).is_err());
    }

    #[test]
    fn csv_lists_every_point() {
        let g = built("250S162-33");
        let csv = g.to_csv();
        assert_eq!(csv.lines().count(), g.points.len() + 1);
        assert!(csv.lines().nth(1).unwrap().ends_with(",start"));
        assert!(csv.contains(",arc"));
    }
}
