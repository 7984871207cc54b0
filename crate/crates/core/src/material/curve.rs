use std::fmt;

use super::{Grade, MaterialError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    Engineering,
    True,
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Measure::Engineering => "engineering",
            Measure::True => "true",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StressStrainCurve {
    /// (strain, stress [MPa]) pairs with strictly increasing strain.
    pub points: Vec<(f64, f64)>,
    pub measure: Measure,
}

impl StressStrainCurve {
    /// Two-column CSV preceded by a `# measure=...` line.
    pub fn to_csv(&self) -> String {
        let mut out = format!("# measure={}\nstrain,stress_mpa\n", self.measure);
        for (e, s) in &self.points {
            out.push_str(&format!("{e},{s}\n"));
        }
        out
    }

    /// Linear interpolation; clamps beyond the last point.
    pub fn stress_at(&self, strain: f64) -> f64 {
        let p = &self.points;
        if strain <= p[0].0 {
            return p[0].1;
        }
        for w in p.windows(2) {
            if strain <= w[1].0 {
                let t = (strain - w[0].0) / (w[1].0 - w[0].0);
                return w[0].1 + t * (w[1].1 - w[0].1);
            }
        }
        p[p.len() - 1].1
    }

    /// Inverse of [`to_true`]; used for round-trip checks.
    pub fn to_engineering(&self) -> Result<StressStrainCurve, MaterialError> {
        if self.measure != Measure::True {
            return Err(MaterialError::InvalidMeasure);
        }
        let points = self
            .points
            .iter()
            .map(|&(et, st)| {
                let ee = et.exp_m1();
                (ee, st / (1.0 + ee))
            })
            .collect();
        Ok(StressStrainCurve { points, measure: Measure::Engineering })
    }
}

struct Hardening {
    eps_p: f64,
    sig_p: f64,
    n: f64,
}

impl Hardening {
    fn stress(&self, eps: f64) -> f64 {
        self.sig_p * (eps / self.eps_p).powf(self.n)
    }
}

fn hardening(g: &Grade) -> Result<Hardening, MaterialError> {
    let model = |reason: String| MaterialError::Model { grade: g.name.clone(), reason };
    g.validate()?;
    let sig_p = g.knee_ratio * g.fy;
    let eps_p = sig_p / g.e;
    let eps_u = g.uniform_elongation;
    if eps_u <= eps_p {
        return Err(model(format!(
            "uniform elongation {eps_u} is inside the elastic range (limit strain {eps_p})"
        )));
    }
    let derived = (g.fu / sig_p).ln() / (eps_u / eps_p).ln();
    let n = match g.hardening_exponent {
        None => derived,
        Some(n) => {
            if !(n >= 0.0 && n.is_finite()) {
                return Err(model(format!("hardening exponent {n} must be non-negative")));
            }
            let end = sig_p * (eps_u / eps_p).powf(n);
            if end > g.fu * 1.001 {
                return Err(model(format!(
                    "hardening exponent {n} exceeds Fu={} before uniform elongation (reaches {end:.1})",
                    g.fu
                )));
            }
            if end < g.fu * 0.999 {
                return Err(model(format!(
                    "hardening exponent {n} reaches only {end:.1} MPa at uniform elongation, Fu={}",
                    g.fu
                )));
            }
            n
        }
    };
    Ok(Hardening { eps_p, sig_p, n })
}

/// Elastic line to the proportional limit, then Hollomon hardening through
/// (uniform elongation, Fu). The first point is the origin, the second the
/// proportional limit; the rest are evenly spaced in strain up to uniform
/// elongation.
pub fn engineering_curve(g: &Grade, n_points: usize) -> Result<StressStrainCurve, MaterialError> {
    if n_points < 3 {
        return Err(MaterialError::Model {
            grade: g.name.clone(),
            reason: format!("need at least 3 points, got {n_points}"),
        });
    }
    let h = hardening(g)?;
    let eps_u = g.uniform_elongation;
    let mut points = vec![(0.0, 0.0), (h.eps_p, h.sig_p)];
    let m = n_points - 2;
    for i in 1..=m {
        let eps = if i == m { eps_u } else { h.eps_p + (eps_u - h.eps_p) * i as f64 / m as f64 };
        let sig = if i == m && g.hardening_exponent.is_none() { g.fu } else { h.stress(eps) };
        points.push((eps, sig));
    }
    Ok(StressStrainCurve { points, measure: Measure::Engineering })
}

/// σ_true = σ(1+ε), ε_true = ln(1+ε), pointwise.
pub fn to_true(c: &StressStrainCurve) -> Result<StressStrainCurve, MaterialError> {
    if c.measure != Measure::Engineering {
        return Err(MaterialError::InvalidMeasure);
    }
    let points = c
        .points
        .iter()
        .map(|&(e, s)| {
            if e <= -1.0 {
                Err(MaterialError::StrainOutOfRange(e))
            } else {
                Ok((e.ln_1p(), s * (1.0 + e)))
            }
        })
        .collect::<Result<_, _>>()?;
    Ok(StressStrainCurve { points, measure: Measure::True })
}
