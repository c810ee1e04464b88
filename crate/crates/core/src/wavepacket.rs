// SPDX-License-Identifier: Apache-2.0

//! Free spreading of a Gaussian wave packet, in SI units.
//!
//! A packet of initial width s₀ has width s(t) = √((s₀⁴ + (ħt/m)²)/s₀²)
//! after time t. Minimizing over s₀ gives s_min(t) = √(2ħt/m), reached at
//! s₀ = √(ħt/m).

use crate::error::{Error, Result};
use crate::units::{gev_mass_kg, HBAR};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpreadQuery {
    mass_kg: f64,
    initial_spread_m: Option<f64>,
    elapsed_s: f64,
}

impl SpreadQuery {
    pub fn new(mass_kg: f64, initial_spread_m: Option<f64>, elapsed_s: f64) -> Result<Self> {
        if !(mass_kg > 0.0 && mass_kg.is_finite()) {
            return Err(Error::domain(format!("mass must be positive, got {mass_kg}")));
        }
        if !(elapsed_s >= 0.0 && elapsed_s.is_finite()) {
            return Err(Error::domain(format!(
                "elapsed time must be >= 0, got {elapsed_s}"
            )));
        }
        if let Some(s0) = initial_spread_m {
            if !(s0 > 0.0 && s0.is_finite()) {
                return Err(Error::domain(format!(
                    "initial spread must be positive, got {s0}"
                )));
            }
        }
        Ok(SpreadQuery {
            mass_kg,
            initial_spread_m,
            elapsed_s,
        })
    }

    /// Same query with the mass given in GeV/c².
    pub fn from_gev(mass_gev: f64, initial_spread_m: Option<f64>, elapsed_s: f64) -> Result<Self> {
        Self::new(mass_gev * gev_mass_kg(), initial_spread_m, elapsed_s)
    }

    pub fn mass_kg(&self) -> f64 {
        self.mass_kg
    }

    pub fn initial_spread(&self) -> Option<f64> {
        self.initial_spread_m
    }

    pub fn elapsed(&self) -> f64 {
        self.elapsed_s
    }

    /// ħt/m, the squared width scale set by free evolution (m²).
    fn diffusion(&self) -> f64 {
        HBAR * self.elapsed_s / self.mass_kg
    }
}

/// s(t) in metres.
pub fn spread_at(q: &SpreadQuery) -> Result<f64> {
    let s0 = q.initial_spread_m.ok_or(Error::MissingInitialSpread)?;
    let d = q.diffusion();
    // s0·√(1 + (d/s0²)²) avoids overflowing s0⁴
    Ok(s0 * (d / (s0 * s0)).hypot(1.0))
}

/// s_min(t) = √(2ħt/m) in metres.
pub fn minimal_spread(mass_kg: f64, elapsed_s: f64) -> Result<f64> {
    if !(elapsed_s > 0.0) {
        return Err(Error::domain(format!(
            "elapsed time must be positive, got {elapsed_s}"
        )));
    }
    let q = SpreadQuery::new(mass_kg, None, elapsed_s)?;
    Ok((2.0 * q.diffusion()).sqrt())
}

/// Initial width that minimizes s(t): √(ħt/m).
pub fn optimal_initial_spread(mass_kg: f64, elapsed_s: f64) -> Result<f64> {
    Ok(minimal_spread(mass_kg, elapsed_s)? / std::f64::consts::SQRT_2)
}
