use std::path::Path;

use super::{positive, DsmError};

/// Where each curve leaves its plateau.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchSwitch {
    /// At the slenderness where the two branch expressions meet, computed
    /// from the coefficients. Curves are continuous.
    Crossover,
    /// At the rounded limits printed in the constants table.
    Tabulated,
}

/// Column strength coefficients. The default is the AISI S100-12 set.
#[derive(Debug, Clone, PartialEq)]
pub struct DsmConstants {
    pub edition: String,
    pub global_base: f64,
    pub global_elastic: f64,
    pub global_limit: f64,
    pub local_limit: f64,
    pub local_coeff: f64,
    pub local_exp: f64,
    pub distortional_limit: f64,
    pub distortional_coeff: f64,
    pub distortional_exp: f64,
    pub switch: BranchSwitch,
}

impl Default for DsmConstants {
    fn default() -> Self {
        Self {
            edition: "S100-12".into(),
            global_base: 0.658,
            global_elastic: 0.877,
            global_limit: 1.5,
            local_limit: 0.776,
            local_coeff: 0.15,
            local_exp: 0.4,
            distortional_limit: 0.561,
            distortional_coeff: 0.25,
            distortional_exp: 0.6,
            switch: BranchSwitch::Crossover,
        }
    }
}

/// Plug-in seam for alternative strength curves. Each method returns the
/// nominal load and its slenderness.
pub trait StrengthCurves: Send + Sync {
    fn edition(&self) -> &str;
    fn global(&self, py: f64, pcre: f64) -> (f64, f64);
    fn local(&self, pne: f64, pcrl: f64) -> (f64, f64);
    fn distortional(&self, py: f64, pcrd: f64) -> (f64, f64);
}

/// Smaller root of c·x² − x + 1 = 0, i.e. where (1 − c·x)·x = 1, mapped
/// back to slenderness through x = λ^(−2·exp).
fn winter_crossover(coeff: f64, exp: f64) -> Option<f64> {
    let disc = 1.0 - 4.0 * coeff;
    if !(coeff > 0.0) || disc < 0.0 {
        return None;
    }
    let x = 2.0 / (1.0 + disc.sqrt());
    Some(x.powf(-1.0 / (2.0 * exp)))
}

impl DsmConstants {
    pub fn from_text(text: &str) -> Result<Self, DsmError> {
        let err = |m: String| DsmError::Constants(m);
        let table: toml::Table = text.parse().map_err(|e: toml::de::Error| err(e.message().to_string()))?;
        let edition = table
            .get("edition")
            .and_then(|v| v.as_str())
            .ok_or_else(|| err("missing string key `edition`".into()))?
            .to_string();
        let num = |section: &str, key: &str| -> Result<f64, DsmError> {
            let v = table
                .get(section)
                .and_then(|s| s.get(key))
                .ok_or_else(|| err(format!("missing `{section}.{key}`")))?;
            v.as_float()
                .or_else(|| v.as_integer().map(|i| i as f64))
                .filter(|x| *x > 0.0)
                .ok_or_else(|| err(format!("`{section}.{key}` must be a positive number")))
        };
        let switch = match table.get("branch_switch").map(|v| v.as_str()) {
            None => BranchSwitch::Crossover,
            Some(Some("crossover")) => BranchSwitch::Crossover,
            Some(Some("tabulated")) => BranchSwitch::Tabulated,
            Some(other) => return Err(err(format!("unknown branch_switch {other:?}"))),
        };
        Ok(Self {
            edition,
            global_base: num("global", "base")?,
            global_elastic: num("global", "elastic")?,
            global_limit: num("global", "limit")?,
            local_limit: num("local", "limit")?,
            local_coeff: num("local", "coeff")?,
            local_exp: num("local", "exp")?,
            distortional_limit: num("distortional", "limit")?,
            distortional_coeff: num("distortional", "coeff")?,
            distortional_exp: num("distortional", "exp")?,
            switch,
        })
    }

    pub fn from_file(path: &Path) -> Result<Self, DsmError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| DsmError::Constants(format!("{}: {e}", path.display())))?;
        Self::from_text(&text)
    }

    pub fn to_text(&self) -> String {
        let switch = match self.switch {
            BranchSwitch::Crossover => "crossover",
            BranchSwitch::Tabulated => "tabulated",
        };
        format!(
            "edition = \"{}\"\nbranch_switch = \"{switch}\"\n\n[global]\nbase = {:?}\nelastic = {:?}\nlimit = {:?}\n\n\
             [local]\nlimit = {:?}\ncoeff = {:?}\nexp = {:?}\n\n[distortional]\nlimit = {:?}\ncoeff = {:?}\nexp = {:?}\n",
            self.edition,
            self.global_base,
            self.global_elastic,
            self.global_limit,
            self.local_limit,
            self.local_coeff,
            self.local_exp,
            self.distortional_limit,
            self.distortional_coeff,
            self.distortional_exp,
        )
    }

    /// λc at which the inelastic branch hands over to the elastic one.
    pub fn global_switch(&self) -> f64 {
        if self.switch == BranchSwitch::Tabulated {
            return self.global_limit;
        }
        // ln(inelastic) − ln(elastic) peaks at λm = sqrt(−1/ln base); when the
        // peak is positive the branches cross once on each side of it.
        let ln_base = self.global_base.ln();
        let f = |l: f64| l * l * ln_base - (self.global_elastic / (l * l)).ln();
        if !(ln_base < 0.0) {
            return self.global_limit;
        }
        let peak = (-1.0 / ln_base).sqrt();
        if !(f(peak) > 0.0) {
            return self.global_limit;
        }
        let bisect = |mut lo: f64, mut hi: f64| {
            let rising = f(lo) < f(hi);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if (f(mid) < 0.0) == rising {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            0.5 * (lo + hi)
        };
        let mut far = peak;
        while f(far) > 0.0 {
            far *= 2.0;
        }
        let mut near = peak;
        while f(near) > 0.0 {
            near *= 0.5;
        }
        let (a, b) = (bisect(near, peak), bisect(peak, far));
        if (a - self.global_limit).abs() <= (b - self.global_limit).abs() {
            a
        } else {
            b
        }
    }

    pub fn local_switch(&self) -> f64 {
        match self.switch {
            BranchSwitch::Tabulated => self.local_limit,
            BranchSwitch::Crossover => {
                winter_crossover(self.local_coeff, self.local_exp).unwrap_or(self.local_limit)
            }
        }
    }

    pub fn distortional_switch(&self) -> f64 {
        match self.switch {
            BranchSwitch::Tabulated => self.distortional_limit,
            BranchSwitch::Crossover => winter_crossover(self.distortional_coeff, self.distortional_exp)
                .unwrap_or(self.distortional_limit),
        }
    }

    /// Inelastic column branch as a fraction of Py.
    pub fn column_inelastic(&self, lambda_c: f64) -> f64 {
        self.global_base.powf(lambda_c * lambda_c)
    }

    pub fn column_elastic(&self, lambda_c: f64) -> f64 {
        self.global_elastic / (lambda_c * lambda_c)
    }

    /// Slender local branch as a fraction of Pne, in terms of PcrL/Pne.
    pub fn local_slender(&self, ratio: f64) -> f64 {
        let x = ratio.powf(self.local_exp);
        (1.0 - self.local_coeff * x) * x
    }

    pub fn distortional_slender(&self, ratio: f64) -> f64 {
        let x = ratio.powf(self.distortional_exp);
        (1.0 - self.distortional_coeff * x) * x
    }
}

impl StrengthCurves for DsmConstants {
    fn edition(&self) -> &str {
        &self.edition
    }

    fn global(&self, py: f64, pcre: f64) -> (f64, f64) {
        let lambda = (py / pcre).sqrt();
        let frac = if lambda <= self.global_switch() {
            self.column_inelastic(lambda)
        } else {
            self.column_elastic(lambda)
        };
        (frac * py, lambda)
    }

    fn local(&self, pne: f64, pcrl: f64) -> (f64, f64) {
        let lambda = (pne / pcrl).sqrt();
        if lambda <= self.local_switch() {
            (pne, lambda)
        } else {
            (self.local_slender(pcrl / pne) * pne, lambda)
        }
    }

    fn distortional(&self, py: f64, pcrd: f64) -> (f64, f64) {
        let lambda = (py / pcrd).sqrt();
        if lambda <= self.distortional_switch() {
            (py, lambda)
        } else {
            (self.distortional_slender(pcrd / py) * py, lambda)
        }
    }
}

/// Global nominal strength Pne and λc. An infinite Pcre gives Pne = Py.
pub fn pne(c: &dyn StrengthCurves, py: f64, pcre: f64) -> Result<(f64, f64), DsmError> {
    positive("Py", py)?;
    positive("Pcre", pcre)?;
    Ok(c.global(py, pcre))
}

pub fn pnl(c: &dyn StrengthCurves, pne: f64, pcrl: f64) -> Result<(f64, f64), DsmError> {
    positive("Pne", pne)?;
    positive("PcrL", pcrl)?;
    Ok(c.local(pne, pcrl))
}

/// `None` when no distortional critical load exists.
pub fn pnd(c: &dyn StrengthCurves, py: f64, pcrd: Option<f64>) -> Result<Option<(f64, f64)>, DsmError> {
    positive("Py", py)?;
    match pcrd {
        None => Ok(None),
        Some(p) => {
            positive("PcrD", p)?;
            Ok(Some(c.distortional(py, p)))
        }
    }
}

/// Local strength with the global strength taken as the squash load.
pub fn pnlo(c: &dyn StrengthCurves, py: f64, pcrl: f64) -> Result<f64, DsmError> {
    pnl(c, py, pcrl).map(|(p, _)| p)
}

/// (λc, PnL/Py) pairs with the local slenderness held at `lambda_l`.
pub fn reduced_global_curve(
    c: &dyn StrengthCurves,
    lambda_l: f64,
    lambda_c_grid: &[f64],
) -> Result<Vec<(f64, f64)>, DsmError> {
    positive("lambda_L", lambda_l)?;
    if lambda_c_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(DsmError::Constants("slenderness grid must be ascending".into()));
    }
    lambda_c_grid
        .iter()
        .map(|&lc| {
            positive("lambda_c", lc)?;
            let (pne, _) = c.global(1.0, 1.0 / (lc * lc));
            let (pnl, _) = c.local(pne, pne / (lambda_l * lambda_l));
            Ok((lc, pnl))
        })
        .collect()
}
