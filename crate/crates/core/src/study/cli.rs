//! Command line front end. `run` returns the process exit code: 0 on
//! success, 1 on usage errors, 2 on computation errors.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use super::{
    cases, load_matrix, member_imperfection, plot_report, report_csv, results_csv, run_case, run_matrix, select_grades,
    CaseResult, CaseSpec, LengthRule, PcreSource, StudyContext, StudyError, RESULT_COLUMNS,
};
use crate::dsm::{BracingModel, DsmConstants};
use crate::geometry::{build_section, parse_designation, section_properties, GeometryConfig};
use crate::imperfection::ImperfectionSpec;
use crate::material::{catalog, parse_catalog, Grade};
use crate::units::UnitSystem;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Units {
    #[value(name = "SI", alias = "si")]
    Si,
    #[value(name = "US", alias = "us")]
    Us,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PcreArg {
    ClosedForm,
    FiniteStrip,
}

#[derive(Debug, Parser)]
#[command(name = "thinwall", version, about = "Elastic buckling and DSM capacities of cold-formed steel lipped channels")]
struct Cli {
    /// Display units for standard output; files are always N and mm.
    #[arg(long, value_enum, default_value = "SI", global = true)]
    units: Units,
    /// Worker threads for parallel evaluation.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Geometry configuration file (design thickness and lip tables).
    #[arg(long, global = true)]
    geometry: Option<PathBuf>,
    /// Grade catalog CSV.
    #[arg(long, global = true)]
    catalog: Option<PathBuf>,
    /// Strength curve constants table.
    #[arg(long, global = true)]
    constants: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Gross section properties of one designation.
    Section { designation: String },
    /// Signature curve as CSV.
    Curve {
        designation: String,
        #[arg(long)]
        points: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Capacities of a single case.
    Dsm {
        designation: String,
        #[arg(long, default_value = "mild")]
        grade: String,
        #[arg(long, default_value = "global")]
        bracing: String,
        /// `auto` (three times LcrD) or a length in mm.
        #[arg(long, default_value = "auto")]
        length: String,
        #[arg(long, value_enum, default_value = "closed-form")]
        pcre: PcreArg,
    },
    /// Full matrix with tables and figures.
    Study {
        /// `default` or a matrix CSV path.
        #[arg(long, default_value = "default")]
        matrix: String,
        #[arg(long)]
        out: PathBuf,
        /// Comma-separated grade names; all catalog grades when omitted.
        #[arg(long, value_delimiter = ',')]
        grades: Vec<String>,
        #[arg(long, default_value = "auto")]
        length: String,
        /// Drop AHSS cases thicker than this design thickness [mm].
        #[arg(long)]
        ahss_max_thickness: Option<f64>,
        #[arg(long, default_value_t = 12)]
        bins: usize,
        #[arg(long, value_enum, default_value = "closed-form")]
        pcre: PcreArg,
    },
    /// Member mesh with an imperfection field.
    Imperfect {
        designation: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "auto")]
        length: String,
        #[arg(long)]
        divisions: Option<usize>,
        #[arg(long, default_value_t = 0.31)]
        delta_local: f64,
        #[arg(long, default_value_t = 0.75)]
        delta_dist: f64,
        #[arg(long, default_value_t = 2909.0)]
        bow: f64,
        #[arg(long, default_value_t = 4010.0)]
        camber: f64,
        #[arg(long, default_value_t = 0.30)]
        twist: f64,
    },
}

enum Failure {
    Usage(String),
    Compute(String),
}

impl From<StudyError> for Failure {
    fn from(e: StudyError) -> Self {
        match e {
            StudyError::Config(m) => Failure::Usage(m),
            other => Failure::Compute(other.to_string()),
        }
    }
}

fn io(e: std::io::Error) -> Failure {
    Failure::Compute(e.to_string())
}

fn length_rule(s: &str) -> Result<LengthRule, Failure> {
    if s == "auto" {
        return Ok(LengthRule::ThreeTimesLcrD);
    }
    match s.parse::<f64>() {
        Ok(l) if l > 0.0 => Ok(LengthRule::Explicit(l)),
        _ => Err(Failure::Usage(format!("--length must be `auto` or a positive length in mm, got {s:?}"))),
    }
}

fn grades(cli: &Cli) -> Result<Vec<Grade>, Failure> {
    match &cli.catalog {
        None => Ok(catalog()),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
            parse_catalog(&text).map_err(|e| Failure::Usage(e.to_string()))
        }
    }
}

fn context(cli: &Cli, pcre: PcreArg) -> Result<StudyContext, Failure> {
    let mut ctx = StudyContext::default();
    if let Some(p) = &cli.geometry {
        ctx.geometry = GeometryConfig::from_file(p).map_err(|e| Failure::Usage(e.to_string()))?;
    }
    if let Some(p) = &cli.constants {
        ctx.curves = Box::new(DsmConstants::from_file(p).map_err(|e| Failure::Usage(e.to_string()))?);
    }
    ctx.pcre_source = match pcre {
        PcreArg::ClosedForm => PcreSource::ClosedForm,
        PcreArg::FiniteStrip => PcreSource::FiniteStrip,
    };
    Ok(ctx)
}

/// One results row converted for display.
fn display_row(r: &CaseResult, u: UnitSystem) -> (Vec<String>, Vec<String>) {
    let mut header: Vec<String> = RESULT_COLUMNS.iter().map(|s| s.to_string()).collect();
    let mut fields = r.csv_fields();
    if u == UnitSystem::Us {
        for (h, f) in header.iter_mut().zip(fields.iter_mut()) {
            let conv = if h.ends_with("_N") {
                Some((h.trim_end_matches("_N").to_string() + "_kip", u.force(1.0)))
            } else if h.ends_with("_mm") {
                Some((h.trim_end_matches("_mm").to_string() + "_in", u.length(1.0)))
            } else {
                None
            };
            if let Some((name, scale)) = conv {
                *h = name;
                if let Ok(v) = f.parse::<f64>() {
                    *f = (v * scale).to_string();
                }
            }
        }
    }
    (header, fields)
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<(), Failure> {
    let units = match cli.units {
        Units::Si => UnitSystem::Si,
        Units::Us => UnitSystem::Us,
    };
    let designation = |s: &str| parse_designation(s).map_err(|e| Failure::Usage(e.to_string()));
    match &cli.command {
        Command::Section { designation: d } => {
            let d = designation(d)?;
            let ctx = context(cli, PcreArg::ClosedForm)?;
            let g = build_section(&d, &ctx.geometry).map_err(|e| Failure::Compute(e.to_string()))?;
            let p = section_properties(&g).map_err(|e| Failure::Compute(e.to_string()))?;
            let lu = units.length_unit();
            let rows = [
                ("A", units.length_pow(p.area, 2), 2),
                ("Ixx", units.length_pow(p.ixx, 4), 4),
                ("Izz", units.length_pow(p.izz, 4), 4),
                ("J", units.length_pow(p.j, 4), 4),
                ("Cw", units.length_pow(p.cw, 6), 6),
                ("x0", units.length(p.x0), 1),
                ("r0", units.length(p.r0), 1),
            ];
            writeln!(out, "section {d} t={} {lu}", units.length(g.thickness)).map_err(io)?;
            for (name, v, pow) in rows {
                let unit = if pow == 1 { lu.to_string() } else { format!("{lu}^{pow}") };
                writeln!(out, "{name} = {v} {unit}").map_err(io)?;
            }
        }
        Command::Curve { designation: d, points, out: path } => {
            let d = designation(d)?;
            let mut ctx = context(cli, PcreArg::ClosedForm)?;
            let g = build_section(&d, &ctx.geometry).map_err(|e| Failure::Compute(e.to_string()))?;
            if let Some(n) = points {
                let mut s = crate::fsm::WavelengthSweep::for_section(&g);
                s.points = *n;
                ctx.fsm.sweep = Some(s);
            }
            let el = ctx.section(&d)?;
            let c = &el.analysis.curve;
            let text = match units {
                UnitSystem::Si => c.to_csv(),
                UnitSystem::Us => {
                    let mut s = String::from("half_wavelength_in,load_factor,Pcr_kip\n");
                    for i in 0..c.len() {
                        s.push_str(&format!(
                            "{},{},{}\n",
                            units.length(c.half_wavelengths[i]),
                            c.load_factors[i],
                            units.force(c.pcr(i))
                        ));
                    }
                    s
                }
            };
            match path {
                Some(p) => std::fs::write(p, c.to_csv()).map_err(|e| Failure::Compute(format!("{}: {e}", p.display())))?,
                None => out.write_all(text.as_bytes()).map_err(io)?,
            }
        }
        Command::Dsm { designation: d, grade, bracing, length, pcre } => {
            let d = designation(d)?;
            let bracing: BracingModel = bracing.parse().map_err(Failure::Usage)?;
            let grade = select_grades(&grades(cli)?, std::slice::from_ref(grade))?.remove(0);
            let ctx = context(cli, *pcre)?;
            let spec = CaseSpec { designation: d, grade, bracing, length_rule: length_rule(length)? };
            let r = run_case(&spec, &ctx)?;
            let (h, f) = display_row(&r, units);
            writeln!(out, "{}", h.join(",")).map_err(io)?;
            writeln!(out, "{}", f.join(",")).map_err(io)?;
        }
        Command::Study { matrix, out: dir, grades: names, length, ahss_max_thickness, bins, pcre } => {
            let sections = load_matrix(matrix).map_err(|e| Failure::Usage(e.to_string()))?;
            let catalog = grades(cli)?;
            let selected = if names.is_empty() { catalog } else { select_grades(&catalog, names)? };
            let mut ctx = context(cli, *pcre)?;
            ctx.histogram_bins = *bins;
            let geometry = ctx.geometry.clone();
            let specs = cases(
                &sections,
                &selected,
                &BracingModel::ALL,
                length_rule(length)?,
                |d| geometry.thickness_in(d.mils()).map(crate::units::in_to_mm).unwrap_or(f64::INFINITY),
                *ahss_max_thickness,
            )?;
            let report = match cli.workers {
                Some(n) => rayon::ThreadPoolBuilder::new()
                    .num_threads(n.max(1))
                    .build()
                    .map_err(|e| Failure::Compute(e.to_string()))?
                    .install(|| run_matrix(&specs, &ctx))?,
                None => run_matrix(&specs, &ctx)?,
            };
            std::fs::create_dir_all(dir).map_err(|e| Failure::Compute(format!("{}: {e}", dir.display())))?;
            let write = |name: &str, text: String| {
                let p = dir.join(name);
                std::fs::write(&p, text).map_err(|e| Failure::Compute(format!("{}: {e}", p.display())))
            };
            write("results.csv", results_csv(&report.rows))?;
            write("report.csv", report_csv(&report))?;
            let c = DsmConstants::default();
            plot_report(&report, ctx.curves.as_ref(), c.local_limit, c.distortional_limit, dir)?;
            let s = &report.ratios;
            writeln!(out, "cases: {} evaluated, {} failed", report.rows.len(), report.failures.len()).map_err(io)?;
            writeln!(
                out,
                "PcrL/PcrD over {} sections: min {:.3}, max {:.3}, {} in (0.9, 1.1)",
                s.sections, s.min, s.max, s.near_one
            )
            .map_err(io)?;
            if let Some(h) = &report.histogram {
                writeln!(out, "lambda_L of LG cases: n={} mean={:.4} std={:.4}", h.total(), h.mean, h.std).map_err(io)?;
            }
            writeln!(out, "wrote {}", dir.display()).map_err(io)?;
        }
        Command::Imperfect { designation: d, out: path, length, divisions, delta_local, delta_dist, bow, camber, twist } => {
            let d = designation(d)?;
            let spec = ImperfectionSpec {
                delta_local_over_t: *delta_local,
                delta_dist_over_t: *delta_dist,
                bow_l_over_delta: *bow,
                camber_l_over_delta: *camber,
                twist_rate: *twist,
            };
            spec.validate().map_err(|e| Failure::Usage(e.to_string()))?;
            if let Some(n) = divisions {
                if *n < 2 {
                    return Err(Failure::Usage("--divisions must be at least 2".into()));
                }
            }
            let ctx = context(cli, PcreArg::ClosedForm)?;
            let m = member_imperfection(&d, &ctx, &spec, length_rule(length)?, *divisions)?;
            m.file.write(path).map_err(|e| Failure::Compute(e.to_string()))?;
            let a = m.field.achieved;
            writeln!(
                out,
                "wrote {} nodes, {} elements, L={} {}",
                m.file.nodes.len(),
                m.file.elements.len(),
                units.length(m.member.length),
                units.length_unit()
            )
            .map_err(io)?;
            writeln!(
                out,
                "amplitudes: local {} distortional {} bow {} camber {} ({}) twist {} deg",
                units.length(a.local),
                units.length(a.distortional),
                units.length(a.bow),
                units.length(a.camber),
                units.length_unit(),
                a.twist_deg
            )
            .map_err(io)?;
        }
    }
    Ok(())
}

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    1
                }
            };
        }
    };
    match execute(&cli, out) {
        Ok(()) => 0,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            1
        }
        Err(Failure::Compute(m)) => {
            let _ = writeln!(err, "error: {m}");
            2
        }
    }
}
