use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Detected resistance of a logical-0 cell while a sneak path is open.
///
/// The sneak path appears as a parasitic resistance `rs` in parallel with the
/// cell, so the reading is the parallel combination of `r0` and `rs`. An
/// infinite `rs` (no parasitic path) returns `r0`.
pub fn r0_prime(r0: f64, rs: f64) -> f64 {
    if rs.is_infinite() {
        return r0;
    }
    // Same value as (1/r0 + 1/rs)^-1, but exact whenever the product and sum are.
    r0 * rs / (r0 + rs)
}

/// Physical constants of the crossbar read channel, in ohms.
///
/// Construction validates `r0 > r1 > 0`, `rs > 0` and `sigma > 0`; the derived
/// quantities are cached so that every consumer sees the same bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResistiveParams {
    r0: f64,
    r1: f64,
    rs: f64,
    sigma: f64,
    #[serde(skip)]
    r0_prime: f64,
}

impl ResistiveParams {
    pub fn new(r0: f64, r1: f64, rs: f64, sigma: f64) -> Result<Self> {
        for (name, v) in [("r0", r0), ("r1", r1), ("rs", rs), ("sigma", sigma)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(invalid(name, format!("{v} must be finite and positive")));
            }
        }
        if r0 <= r1 {
            return Err(invalid("r0", format!("HRS {r0} must exceed LRS {r1}")));
        }
        let r0p = r0_prime(r0, rs);
        if !(r1 < r0p && r0p < r0) {
            return Err(invalid(
                "rs",
                format!("sneak reading {r0p} must lie strictly between r1 and r0"),
            ));
        }
        Ok(Self {
            r0,
            r1,
            rs,
            sigma,
            r0_prime: r0p,
        })
    }

    /// Default device constants (R1 = 100, R0 = 1000, Rs = 250) at the given noise level.
    pub fn reference(sigma: f64) -> Result<Self> {
        Self::new(1000.0, 100.0, 250.0, sigma)
    }

    pub fn r0(&self) -> f64 {
        self.r0
    }

    pub fn r1(&self) -> f64 {
        self.r1
    }

    pub fn rs(&self) -> f64 {
        self.rs
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn r0_prime(&self) -> f64 {
        self.r0_prime
    }

    /// Half the HRS/LRS gap in noise units.
    pub fn gamma(&self) -> f64 {
        (self.r0 - self.r1) / (2.0 * self.sigma)
    }

    /// Half the sneak-path-degraded gap in noise units.
    pub fn gamma_prime(&self) -> f64 {
        (self.r0_prime - self.r1) / (2.0 * self.sigma)
    }

    /// Same device, different noise level.
    pub fn with_sigma(&self, sigma: f64) -> Result<Self> {
        Self::new(self.r0, self.r1, self.rs, sigma)
    }

    /// Noise-free reading `R_x(v)` of a cell storing `bit` with sneak status `sneak`.
    #[inline]
    pub fn level(&self, bit: u8, sneak: bool) -> f64 {
        match (bit, sneak) {
            (0, false) => self.r0,
            (0, true) => self.r0_prime,
            _ => self.r1,
        }
    }
}

#[derive(Deserialize)]
struct RawParams {
    r0: f64,
    r1: f64,
    rs: f64,
    sigma: f64,
}

impl<'de> Deserialize<'de> for ResistiveParams {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawParams::deserialize(d)?;
        ResistiveParams::new(raw.r0, raw.r1, raw.rs, raw.sigma).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_combination() {
        assert_eq!(r0_prime(1000.0, 250.0), 200.0);
        assert_eq!(r0_prime(300.0, 600.0), 200.0);
        assert_eq!(r0_prime(470.0, f64::INFINITY), 470.0);
        let far = r0_prime(470.0, 1e15);
        assert!(far < 470.0 && 470.0 - far < 1e-9);
    }

    #[test]
    fn derived_constants() {
        let p = ResistiveParams::reference(50.0).unwrap();
        assert_eq!(p.r0_prime(), 200.0);
        assert_eq!(p.gamma(), 9.0);
        assert_eq!(p.gamma_prime(), 1.0);
        assert!(0.0 < p.gamma_prime() && p.gamma_prime() < p.gamma());
        assert_eq!(p.level(1, true), 100.0);
        assert_eq!(p.level(0, true), 200.0);
        assert_eq!(p.level(0, false), 1000.0);
    }

    #[test]
    fn rejects_bad_constants() {
        assert!(ResistiveParams::new(100.0, 1000.0, 250.0, 1.0).is_err());
        assert!(ResistiveParams::new(1000.0, 100.0, 0.0, 1.0).is_err());
        assert!(ResistiveParams::new(1000.0, 100.0, 250.0, -1.0).is_err());
        assert!(ResistiveParams::new(1000.0, 100.0, 250.0, f64::NAN).is_err());
        // rs so small that the sneak reading falls below r1
        assert!(ResistiveParams::new(1000.0, 100.0, 50.0, 1.0).is_err());
    }

    #[test]
    fn json_validates() {
        let ok: ResistiveParams =
            serde_json::from_str(r#"{"r0":1000,"r1":100,"rs":250,"sigma":100}"#).unwrap();
        assert_eq!(ok.gamma(), 4.5);
        let bad =
            serde_json::from_str::<ResistiveParams>(r#"{"r0":10,"r1":100,"rs":250,"sigma":1}"#);
        assert!(bad.is_err());
    }
}
