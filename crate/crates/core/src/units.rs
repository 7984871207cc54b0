//! Unit conversions at the US-customary boundary.

/// Millimetres per inch.
pub const MM_PER_IN: f64 = 25.4;
/// Newtons per kip.
pub const N_PER_KIP: f64 = 4_448.221_615_260_5;
/// MPa per ksi.
pub const MPA_PER_KSI: f64 = 6.894_757_293_168_361;

pub fn in_to_mm(v: f64) -> f64 {
    v * MM_PER_IN
}

pub fn mm_to_in(v: f64) -> f64 {
    v / MM_PER_IN
}

/// Display unit system. Computation is always N-mm-MPa.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UnitSystem {
    #[default]
    Si,
    Us,
}

impl UnitSystem {
    pub fn length(self, mm: f64) -> f64 {
        match self {
            UnitSystem::Si => mm,
            UnitSystem::Us => mm / MM_PER_IN,
        }
    }

    /// Converts a section property of dimension length^`power`.
    pub fn length_pow(self, value: f64, power: i32) -> f64 {
        match self {
            UnitSystem::Si => value,
            UnitSystem::Us => value / MM_PER_IN.powi(power),
        }
    }

    pub fn force(self, n: f64) -> f64 {
        match self {
            UnitSystem::Si => n,
            UnitSystem::Us => n / N_PER_KIP,
        }
    }

    pub fn length_unit(self) -> &'static str {
        match self {
            UnitSystem::Si => "mm",
            UnitSystem::Us => "in",
        }
    }

    pub fn force_unit(self) -> &'static str {
        match self {
            UnitSystem::Si => "N",
            UnitSystem::Us => "kip",
        }
    }
}
