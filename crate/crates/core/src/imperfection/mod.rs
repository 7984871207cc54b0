//! Geometric imperfection fields for shell models of a member: scaled first
//! local, distortional and global modes over an extruded mesh, and a plain
//! text mesh format for external solvers.

mod export;
mod fields;
mod member;

pub use export::{read_member, write_member, MemberFile, FORMAT_HEADER};
pub use fields::{combine, global_fields, mode_field, Amplitudes, Components, ImperfectionField};
pub use member::{extrude, longitudinal_divisions, MemberMesh, ShellElement};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ImperfectionError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("line {line}: {reason}")]
    Format { line: usize, reason: String },
}

/// Imperfection magnitudes at 50% exceedance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImperfectionSpec {
    pub delta_local_over_t: f64,
    pub delta_dist_over_t: f64,
    /// L/δ for weak-axis bow; 0 disables the component.
    pub bow_l_over_delta: f64,
    /// L/δ for strong-axis camber; 0 disables the component.
    pub camber_l_over_delta: f64,
    /// Midspan twist per unit length [deg/m].
    pub twist_rate: f64,
}

impl Default for ImperfectionSpec {
    fn default() -> Self {
        Self {
            delta_local_over_t: 0.31,
            delta_dist_over_t: 0.75,
            bow_l_over_delta: 2909.0,
            camber_l_over_delta: 4010.0,
            twist_rate: 0.30,
        }
    }
}

impl ImperfectionSpec {
    pub fn zero() -> Self {
        Self {
            delta_local_over_t: 0.0,
            delta_dist_over_t: 0.0,
            bow_l_over_delta: 0.0,
            camber_l_over_delta: 0.0,
            twist_rate: 0.0,
        }
    }

    pub fn validate(&self) -> Result<(), ImperfectionError> {
        let v = [
            self.delta_local_over_t,
            self.delta_dist_over_t,
            self.bow_l_over_delta,
            self.camber_l_over_delta,
            self.twist_rate,
        ];
        if v.iter().all(|x| *x >= 0.0 && x.is_finite()) {
            Ok(())
        } else {
            Err(ImperfectionError::Invalid(format!("imperfection magnitudes must be finite and >= 0: {v:?}")))
        }
    }

    /// Every component amplitude multiplied by `alpha`.
    pub fn scaled(&self, alpha: f64) -> Self {
        let inv = |r: f64| if r > 0.0 { r / alpha } else { 0.0 };
        Self {
            delta_local_over_t: self.delta_local_over_t * alpha,
            delta_dist_over_t: self.delta_dist_over_t * alpha,
            bow_l_over_delta: inv(self.bow_l_over_delta),
            camber_l_over_delta: inv(self.camber_l_over_delta),
            twist_rate: self.twist_rate * alpha,
        }
    }

    /// Target amplitudes for a member of thickness `t` and length `length` [mm].
    pub fn amplitudes(&self, t: f64, length: f64) -> Amplitudes {
        let over = |r: f64| if r > 0.0 { length / r } else { 0.0 };
        Amplitudes {
            local: self.delta_local_over_t * t,
            distortional: self.delta_dist_over_t * t,
            bow: over(self.bow_l_over_delta),
            camber: over(self.camber_l_over_delta),
            twist_deg: self.twist_rate * length / 1000.0,
        }
    }
}
