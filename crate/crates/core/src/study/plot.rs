use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::report::{CaseResult, StudyReport};
use super::StudyError;
use crate::dsm::{reduced_global_curve, BracingModel, Controlling, StrengthCurves};

pub const WATERMARK: &str = "DSM predictions \u{2013} no FE collapse data";

const W: f64 = 640.0;
const H: f64 = 480.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 160.0;
const TOP: f64 = 56.0;
const BOTTOM: f64 = 56.0;

const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"];

#[derive(Debug, Clone)]
pub enum Series {
    Points { name: String, color: &'static str, data: Vec<(f64, f64)> },
    Line { name: String, color: &'static str, dashed: bool, data: Vec<(f64, f64)> },
    Bars { name: String, color: &'static str, edges: Vec<f64>, counts: Vec<usize> },
}

#[derive(Debug, Clone)]
pub struct Chart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn nice_step(range: f64) -> f64 {
    let raw = range / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let f = raw / mag;
    let m = if f < 1.5 {
        1.0
    } else if f < 3.5 {
        2.0
    } else if f < 7.5 {
        5.0
    } else {
        10.0
    };
    m * mag
}

fn ticks(lo: f64, hi: f64) -> (f64, f64, Vec<f64>) {
    let step = nice_step(hi - lo);
    let a = (lo / step).floor() * step;
    let b = (hi / step).ceil() * step;
    let n = ((b - a) / step).round() as usize;
    (a, b, (0..=n).map(|i| a + step * i as f64).collect())
}

impl Chart {
    fn bounds(&self) -> (f64, f64, f64, f64) {
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, 0.0f64, f64::NEG_INFINITY);
        let mut add = |x: f64, y: f64| {
            if x.is_finite() && y.is_finite() {
                x0 = x0.min(x);
                x1 = x1.max(x);
                y0 = y0.min(y);
                y1 = y1.max(y);
            }
        };
        for s in &self.series {
            match s {
                Series::Points { data, .. } | Series::Line { data, .. } => data.iter().for_each(|&(x, y)| add(x, y)),
                Series::Bars { edges, counts, .. } => {
                    for (i, &c) in counts.iter().enumerate() {
                        add(edges[i], c as f64);
                        add(edges[i + 1], 0.0);
                    }
                }
            }
        }
        if !x0.is_finite() {
            return (0.0, 1.0, 0.0, 1.0);
        }
        if x1 - x0 < 1e-9 {
            x0 -= 0.5;
            x1 += 0.5;
        }
        if y1 - y0 < 1e-9 {
            y1 = y0 + 1.0;
        }
        (x0.min(0.0), x1, y0, y1)
    }

    /// Deterministic SVG text.
    pub fn render(&self) -> String {
        let (x0, x1, y0, y1) = self.bounds();
        let (x0, x1, xt) = ticks(x0, x1);
        let (y0, y1, yt) = ticks(y0, y1 * 1.05);
        let pw = W - LEFT - RIGHT;
        let ph = H - TOP - BOTTOM;
        let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
        let sy = |y: f64| TOP + ph - (y - y0) / (y1 - y0) * ph;

        let mut o = String::new();
        let _ = writeln!(
            o,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\" font-family=\"sans-serif\">"
        );
        let _ = writeln!(o, "<rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>");
        let _ = writeln!(o, "<text x=\"{:.2}\" y=\"22\" font-size=\"15\" text-anchor=\"middle\">{}</text>", W / 2.0, esc(&self.title));
        let _ = writeln!(
            o,
            "<text x=\"{:.2}\" y=\"40\" font-size=\"11\" fill=\"#888\" text-anchor=\"middle\">{}</text>",
            W / 2.0,
            esc(WATERMARK)
        );
        let _ = writeln!(o, "<g stroke=\"#ddd\" stroke-width=\"1\">");
        for &t in &xt {
            let _ = writeln!(o, "<line x1=\"{:.2}\" y1=\"{TOP:.2}\" x2=\"{:.2}\" y2=\"{:.2}\"/>", sx(t), sx(t), TOP + ph);
        }
        for &t in &yt {
            let _ = writeln!(o, "<line x1=\"{LEFT:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\"/>", sy(t), LEFT + pw, sy(t));
        }
        let _ = writeln!(o, "</g>");
        let _ = writeln!(o, "<rect x=\"{LEFT:.2}\" y=\"{TOP:.2}\" width=\"{pw:.2}\" height=\"{ph:.2}\" fill=\"none\" stroke=\"black\"/>");
        for &t in &xt {
            let _ = writeln!(o, "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\" text-anchor=\"middle\">{}</text>", sx(t), TOP + ph + 16.0, fmt_tick(t));
        }
        for &t in &yt {
            let _ = writeln!(o, "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\" text-anchor=\"end\">{}</text>", LEFT - 6.0, sy(t) + 4.0, fmt_tick(t));
        }
        let _ = writeln!(o, "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"13\" text-anchor=\"middle\">{}</text>", LEFT + pw / 2.0, H - 14.0, esc(&self.x_label));
        let _ = writeln!(
            o,
            "<text x=\"18\" y=\"{:.2}\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 {:.2})\">{}</text>",
            TOP + ph / 2.0,
            TOP + ph / 2.0,
            esc(&self.y_label)
        );

        let mut legend = Vec::new();
        for s in &self.series {
            match s {
                Series::Points { name, color, data } => {
                    let _ = writeln!(o, "<g fill=\"{color}\" fill-opacity=\"0.75\">");
                    for &(x, y) in data {
                        let _ = writeln!(o, "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\"/>", sx(x), sy(y));
                    }
                    let _ = writeln!(o, "</g>");
                    legend.push((name, *color, "point", data.len()));
                }
                Series::Line { name, color, dashed, data } => {
                    let pts: Vec<String> = data.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
                    let dash = if *dashed { " stroke-dasharray=\"6 4\"" } else { "" };
                    let _ = writeln!(
                        o,
                        "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.8\"{dash} points=\"{}\"/>",
                        pts.join(" ")
                    );
                    legend.push((name, *color, "line", data.len()));
                }
                Series::Bars { name, color, edges, counts } => {
                    let _ = writeln!(o, "<g fill=\"{color}\" stroke=\"white\">");
                    for (i, &c) in counts.iter().enumerate() {
                        let (a, b) = (sx(edges[i]), sx(edges[i + 1]).max(sx(edges[i]) + 2.0));
                        let _ = writeln!(
                            o,
                            "<rect x=\"{a:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\"/>",
                            sy(c as f64),
                            b - a,
                            sy(0.0) - sy(c as f64)
                        );
                    }
                    let _ = writeln!(o, "</g>");
                    legend.push((name, *color, "bar", counts.iter().sum()));
                }
            }
        }
        let lx = LEFT + pw + 12.0;
        for (i, (name, color, kind, _)) in legend.iter().enumerate() {
            let y = TOP + 14.0 + 18.0 * i as f64;
            match *kind {
                "line" => {
                    let _ = writeln!(o, "<line x1=\"{lx:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"{color}\" stroke-width=\"2\"/>", y - 4.0, lx + 18.0, y - 4.0);
                }
                _ => {
                    let _ = writeln!(o, "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"4\" fill=\"{color}\"/>", lx + 9.0, y - 4.0);
                }
            }
            let _ = writeln!(o, "<text x=\"{:.2}\" y=\"{y:.2}\" font-size=\"11\">{}</text>", lx + 24.0, esc(name));
        }
        o.push_str("</svg>\n");
        o
    }
}

fn fmt_tick(v: f64) -> String {
    let s = format!("{:.3}", v);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

/// Samples `f` on [lo, hi] with `extra` abscissae merged in.
fn sample(lo: f64, hi: f64, n: usize, extra: &[f64], f: impl Fn(f64) -> f64) -> Vec<(f64, f64)> {
    let mut xs: Vec<f64> = (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect();
    xs.extend(extra.iter().copied().filter(|x| *x > lo && *x < hi));
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    xs.into_iter().map(|x| (x, f(x))).collect()
}

fn by_bracing<'a>(
    rows: impl Iterator<Item = &'a CaseResult> + Clone,
    point: impl Fn(&CaseResult) -> Option<(f64, f64)>,
) -> Vec<Series> {
    BracingModel::ALL
        .iter()
        .enumerate()
        .filter_map(|(i, b)| {
            let data: Vec<_> = rows.clone().filter(|r| r.bracing == *b).filter_map(&point).collect();
            (!data.is_empty()).then(|| Series::Points { name: b.to_string(), color: COLORS[i], data })
        })
        .collect()
}

/// Normalized strength against λL for L and LG rows, with the local curve.
pub fn local_chart(rows: &[CaseResult], curves: &dyn StrengthCurves, tabulated_limit: f64) -> Chart {
    let sel = rows.iter().filter(|r| matches!(r.strength.controlling, Controlling::L | Controlling::LG));
    let mut series = by_bracing(sel.clone(), |r| Some((r.strength.lambda_l, r.pn_over_pne())));
    let hi = sel.map(|r| r.strength.lambda_l).fold(3.0, f64::max) * 1.05;
    series.push(Series::Line {
        name: "DSM local curve".into(),
        color: "black",
        dashed: false,
        data: sample(0.0, hi, 300, &[tabulated_limit], |l| {
            if l <= 0.0 { 1.0 } else { curves.local(1.0, 1.0 / (l * l)).0 }
        }),
    });
    Chart {
        title: "Local / local-global controlled cases".into(),
        x_label: "\u{3bb}L = (Pne/PcrL)^0.5".into(),
        y_label: "Pn/Pne".into(),
        series,
    }
}

/// Normalized strength against λd for D rows, with the distortional curve.
pub fn distortional_chart(rows: &[CaseResult], curves: &dyn StrengthCurves, tabulated_limit: f64) -> Chart {
    let sel = rows.iter().filter(|r| r.strength.controlling == Controlling::D);
    let mut series = by_bracing(sel.clone(), |r| r.strength.lambda_d.map(|l| (l, r.pn_over_py())));
    let hi = sel.filter_map(|r| r.strength.lambda_d).fold(3.0, f64::max) * 1.05;
    series.push(Series::Line {
        name: "DSM distortional curve".into(),
        color: "black",
        dashed: false,
        data: sample(0.0, hi, 300, &[tabulated_limit], |l| {
            if l <= 0.0 { 1.0 } else { curves.distortional(1.0, 1.0 / (l * l)).0 }
        }),
    });
    Chart {
        title: "Distortional controlled cases".into(),
        x_label: "\u{3bb}d = (Py/PcrD)^0.5".into(),
        y_label: "Pn/Py".into(),
        series,
    }
}

/// Global-model LG rows against λc with the column curve and curves reduced
/// at mean − std, mean and mean + std of λL.
pub fn global_chart(report: &StudyReport, curves: &dyn StrengthCurves) -> Option<Chart> {
    let h = report.histogram.as_ref()?;
    let sel: Vec<(f64, f64)> = report
        .rows
        .iter()
        .filter(|r| r.bracing == BracingModel::Global && r.strength.controlling == Controlling::LG)
        .filter_map(|r| r.strength.lambda_c.map(|l| (l, r.pn_over_py())))
        .collect();
    let hi = sel.iter().map(|p| p.0).fold(2.0, f64::max) * 1.05;
    let grid: Vec<f64> = (1..=300).map(|i| hi * i as f64 / 300.0).collect();
    let mut series = vec![Series::Points { name: "global_model LG".into(), color: COLORS[2], data: sel }];
    series.push(Series::Line {
        name: "DSM global curve".into(),
        color: "black",
        dashed: false,
        data: grid.iter().map(|&l| (l, curves.global(1.0, 1.0 / (l * l)).0)).collect(),
    });
    for (i, (label, ll)) in [("mean-std", h.mean - h.std), ("mean", h.mean), ("mean+std", h.mean + h.std)]
        .into_iter()
        .enumerate()
    {
        if ll > 0.0 {
            if let Ok(data) = reduced_global_curve(curves, ll, &grid) {
                series.push(Series::Line {
                    name: format!("\u{3bb}L {label} = {ll:.2}"),
                    color: COLORS[3 + i],
                    dashed: true,
                    data,
                });
            }
        }
    }
    Some(Chart {
        title: "Local-global controlled cases, global model".into(),
        x_label: "\u{3bb}c = (Py/Pcre)^0.5".into(),
        y_label: "Pn/Py".into(),
        series,
    })
}

pub fn histogram_chart(report: &StudyReport) -> Chart {
    let series = match &report.histogram {
        Some(h) => vec![Series::Bars {
            name: format!("n={} mean={:.3} std={:.3}", h.total(), h.mean, h.std),
            color: COLORS[0],
            edges: h.edges.clone(),
            counts: h.counts.clone(),
        }],
        None => Vec::new(),
    };
    Chart {
        title: "Local slenderness of LG controlled cases".into(),
        x_label: "\u{3bb}L".into(),
        y_label: "count".into(),
        series,
    }
}

pub const PLOT_FILES: [&str; 4] = [
    "figure_local.svg",
    "figure_distortional.svg",
    "figure_global.svg",
    "figure_lambda_histogram.svg",
];

/// Writes the four figures into `dir`. Without LG rows the global figure is
/// replaced by a short note file.
pub fn plot_report(
    report: &StudyReport,
    curves: &dyn StrengthCurves,
    local_limit: f64,
    distortional_limit: f64,
    dir: &Path,
) -> Result<Vec<PathBuf>, StudyError> {
    let write = |name: &str, text: String| -> Result<PathBuf, StudyError> {
        let p = dir.join(name);
        std::fs::write(&p, text).map_err(|e| StudyError::Io { path: p.display().to_string(), message: e.to_string() })?;
        Ok(p)
    };
    let mut out = vec![
        write(PLOT_FILES[0], local_chart(&report.rows, curves, local_limit).render())?,
        write(PLOT_FILES[1], distortional_chart(&report.rows, curves, distortional_limit).render())?,
    ];
    match global_chart(report, curves) {
        Some(c) => out.push(write(PLOT_FILES[2], c.render())?),
        None => out.push(write(
            "figure_global_omitted.txt",
            "No global-model case is controlled by local-global interaction; the strength versus global slenderness figure was not drawn.\n".into(),
        )?),
    }
    out.push(write(PLOT_FILES[3], histogram_chart(report).render())?);
    Ok(out)
}
