use std::collections::BTreeMap;
use std::path::Path;

use super::GeometryError;

/// Tabulated SFIA data that the designation does not carry.
///
/// Design thickness differs from the designation thickness encoded in the
/// mil code, and lip length depends on the flange width. Both are editable.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometryConfig {
    /// mil code → design thickness [in]
    pub design_thickness: BTreeMap<u32, f64>,
    /// flange code → lip length, outside-to-tip [in]
    pub lip_length: BTreeMap<u32, f64>,
    /// Centerline corner radius as a multiple of t.
    pub corner_radius_factor: f64,
    /// Straight chords used to represent each corner arc.
    pub corner_arc_segments: usize,
}

impl Default for GeometryConfig {
    fn default() -> Self {
        let design_thickness = [
            (18, 0.0188),
            (27, 0.0283),
            (30, 0.0312),
            (33, 0.0346),
            (43, 0.0451),
            (54, 0.0566),
            (68, 0.0713),
            (97, 0.1017),
            (118, 0.1242),
        ]
        .into_iter()
        .collect();
        let lip_length = [(137, 0.375), (162, 0.5), (200, 0.625), (250, 0.625)]
            .into_iter()
            .collect();
        Self {
            design_thickness,
            lip_length,
            corner_radius_factor: 2.0,
            corner_arc_segments: 4,
        }
    }
}

impl GeometryConfig {
    pub fn validate(&self) -> Result<(), GeometryError> {
        for (code, t) in &self.design_thickness {
            if !(t.is_finite() && *t > 0.0) {
                return Err(GeometryError::Config(format!(
                    "thickness.{code} must be positive, got {t}"
                )));
            }
        }
        for (code, d) in &self.lip_length {
            if !(d.is_finite() && *d > 0.0) {
                return Err(GeometryError::Config(format!(
                    "lip.{code} must be positive, got {d}"
                )));
            }
        }
        if !(self.corner_radius_factor.is_finite() && self.corner_radius_factor >= 0.0) {
            return Err(GeometryError::Config(format!(
                "corner_radius_factor must be >= 0, got {}",
                self.corner_radius_factor
            )));
        }
        if self.corner_arc_segments == 0 {
            return Err(GeometryError::Config(
                "corner_arc_segments must be >= 1".into(),
            ));
        }
        Ok(())
    }

    pub fn thickness_in(&self, mils: u32) -> Result<f64, GeometryError> {
        self.design_thickness
            .get(&mils)
            .copied()
            .ok_or_else(|| GeometryError::Config(format!("no design thickness for mil code {mils}")))
    }

    pub fn lip_in(&self, flange_code: u32) -> Result<f64, GeometryError> {
        self.lip_length
            .get(&flange_code)
            .copied()
            .ok_or_else(|| GeometryError::Config(format!("no lip length for flange code {flange_code}")))
    }

    /// Parses the key/value format:
    ///
    /// ```text
    /// # design thickness [in] per mil code
    /// thickness.33 = 0.0346
    /// # lip length [in] per flange code
    /// lip.162 = 0.5
    /// corner_radius_factor = 2.0
    /// corner_arc_segments = 4
    /// ```
    ///
    /// Keys absent from the text keep their default values; table entries
    /// are merged over the defaults.
    pub fn from_text(text: &str) -> Result<Self, GeometryError> {
        let table: toml::Table = text
            .parse()
            .map_err(|e: toml::de::Error| GeometryError::Config(e.message().to_string()))?;
        let mut cfg = Self::default();
        for (key, value) in &table {
            match key.as_str() {
                "thickness" | "lip" => {
                    let sub = value.as_table().ok_or_else(|| {
                        GeometryError::Config(format!("{key} must be a table of code = value"))
                    })?;
                    for (code, v) in sub {
                        let code: u32 = code.parse().map_err(|_| {
                            GeometryError::Config(format!("{key}.{code}: code is not an integer"))
                        })?;
                        let v = number(v)
                            .ok_or_else(|| GeometryError::Config(format!("{key}.{code}: not a number")))?;
                        if key == "thickness" {
                            cfg.design_thickness.insert(code, v);
                        } else {
                            cfg.lip_length.insert(code, v);
                        }
                    }
                }
                "corner_radius_factor" => {
                    cfg.corner_radius_factor = number(value).ok_or_else(|| {
                        GeometryError::Config("corner_radius_factor: not a number".into())
                    })?;
                }
                "corner_arc_segments" => {
                    let n = value.as_integer().filter(|n| *n >= 0).ok_or_else(|| {
                        GeometryError::Config("corner_arc_segments: not a non-negative integer".into())
                    })?;
                    cfg.corner_arc_segments = n as usize;
                }
                other => return Err(GeometryError::Config(format!("unknown key {other:?}"))),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self, GeometryError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| GeometryError::Config(format!("{}: {e}", path.display())))?;
        Self::from_text(&text)
    }

    /// Serializes in the same key/value format accepted by [`Self::from_text`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (code, t) in &self.design_thickness {
            out.push_str(&format!("thickness.{code} = {t}\n"));
        }
        for (code, d) in &self.lip_length {
            out.push_str(&format!("lip.{code} = {d}\n"));
        }
        out.push_str(&format!("corner_radius_factor = {:?}\n", self.corner_radius_factor));
        out.push_str(&format!("corner_arc_segments = {}\n", self.corner_arc_segments));
        out
    }
}

fn number(v: &toml::Value) -> Option<f64> {
    v.as_float().or_else(|| v.as_integer().map(|i| i as f64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_key_value_text() {
        let cfg = GeometryConfig::from_text(
            "# comment\nthickness.33 = 0.0350\nlip.300 = 0.625\ncorner_radius_factor = 0\ncorner_arc_segments = 6\n",
        )
        .unwrap();
        assert_eq!(cfg.thickness_in(33).unwrap(), 0.035);
        assert_eq!(cfg.lip_in(300).unwrap(), 0.625);
        assert_eq!(cfg.lip_in(162).unwrap(), 0.5);
        assert_eq!(cfg.corner_radius_factor, 0.0);
        assert_eq!(cfg.corner_arc_segments, 6);
    }

    #[test]
    fn text_round_trip() {
        let cfg = GeometryConfig::default();
        assert_eq!(GeometryConfig::from_text(&cfg.to_text()).unwrap(), cfg);
    }

    #[test]
    fn rejects_bad_values() {
        assert!(GeometryConfig::from_text("thickness.33 = -1.0").is_err());
        assert!(GeometryConfig::from_text("corner_arc_segments = 0").is_err());
        assert!(GeometryConfig::from_text("corner_radius_factor = -0.5").is_err());
        assert!(GeometryConfig::from_text("colour = 3").is_err());
        assert!(GeometryConfig::from_text("thickness.abc = 0.03").is_err());
    }

    #[test]
    fn missing_codes_are_named() {
        let cfg = GeometryConfig::default();
        let err = cfg.thickness_in(44).unwrap_err();
        assert!(err.to_string().contains("44"));
        let err = cfg.lip_in(175).unwrap_err();
        assert!(err.to_string().contains("175"));
    }
}
