use super::{LengthRule, StudyContext, StudyError};
use crate::geometry::Designation;
use crate::imperfection::{
    combine, extrude, global_fields, longitudinal_divisions, mode_field, ImperfectionField, ImperfectionSpec,
    MemberFile, MemberMesh,
};

pub struct MemberImperfection {
    pub member: MemberMesh,
    pub field: ImperfectionField,
    pub file: MemberFile,
    pub lcr_l: f64,
    pub lcr_d: Option<f64>,
}

/// Extrudes the section to the member length and applies the first local,
/// distortional and global modes at the magnitudes of `spec`.
pub fn member_imperfection(
    d: &Designation,
    ctx: &StudyContext,
    spec: &ImperfectionSpec,
    length_rule: LengthRule,
    divisions: Option<usize>,
) -> Result<MemberImperfection, StudyError> {
    let el = ctx.section(d)?;
    let length = match (length_rule, el.lcr_d) {
        (LengthRule::Explicit(l), _) => l,
        (LengthRule::ThreeTimesLcrD, Some(l)) => 3.0 * l,
        (LengthRule::ThreeTimesLcrD, None) => {
            return Err(StudyError::Case(format!(
                "{d}: no distortional critical length; an explicit member length is required"
            )))
        }
    };
    let n = divisions.unwrap_or_else(|| longitudinal_divisions(length, el.lcr_l));
    let section = &el.analysis.mesh;
    let member = extrude(section, length, n)?;

    let mut comps = global_fields(&el.props, &member);
    if let Some(p) = el.analysis.local() {
        comps.local = Some(mode_field(section, &p.mode, p.half_wavelength, &member)?);
    }
    if let Some(p) = el.analysis.distortional() {
        if p.half_wavelength <= length {
            comps.distortional = Some(mode_field(section, &p.mode, p.half_wavelength, &member)?);
        }
    }
    let field = combine(spec, &member, &comps)?;
    let num = |v: f64| format!("{v:e}");
    let mut meta = vec![
        ("designation".to_string(), d.to_string()),
        ("LcrL_mm".to_string(), num(el.lcr_l)),
        ("LcrD_mm".to_string(), el.lcr_d.map(num).unwrap_or_else(|| "none".into())),
        ("length_rule".to_string(), match length_rule {
            LengthRule::ThreeTimesLcrD => "three_times_LcrD".to_string(),
            LengthRule::Explicit(_) => "explicit".to_string(),
        }),
        ("division_rule".to_string(), match divisions {
            Some(_) => "explicit".to_string(),
            None => "ceil(10*L/LcrL) rounded up to even".to_string(),
        }),
        ("spec_delta_local_over_t".to_string(), spec.delta_local_over_t.to_string()),
        ("spec_delta_dist_over_t".to_string(), spec.delta_dist_over_t.to_string()),
        ("spec_bow_L_over_delta".to_string(), spec.bow_l_over_delta.to_string()),
        ("spec_camber_L_over_delta".to_string(), spec.camber_l_over_delta.to_string()),
        ("spec_twist_deg_per_m".to_string(), spec.twist_rate.to_string()),
        ("sign_convention".to_string(), "lip-flange junction outward; bow/camber positive axes; twist right-handed about y".to_string()),
    ];
    meta.push(("shear_center_mm".to_string(), format!("{} {}", num(comps.twist_center[0]), num(comps.twist_center[1]))));
    let file = MemberFile::new(&member, &field, &meta)?;
    Ok(MemberImperfection { member, field, file, lcr_l: el.lcr_l, lcr_d: el.lcr_d })
}
