// SPDX-License-Identifier: Apache-2.0

//! Bohr-model spectrum of two equal masses bound by Newtonian gravity.
//!
//! ```text
//! E_n = −G²M⁵/(4ħ²n²)    r_n = ħ²n²/(GM³)    v_n = GM²/(2nħ)
//! ν_mn = (|E₁|/ħ)(1/m² − 1/n²)
//! ```
//!
//! All values are SI. ν_mn is |E₁|/ħ times the bracket, which is an angular
//! frequency; `FrequencyUnit::Cycles` divides by 2π.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::units::{Mass, C, G, HBAR};

/// Orbits faster than this fraction of c are rejected.
pub const MAX_VELOCITY_FRACTION: f64 = 0.1;

pub const LEVELS_CSV_HEADER: &str = "n,E_J,r_m,v_mps";
pub const LINES_CSV_HEADER_ANGULAR: &str = "m,n,omega_rad_per_s";
pub const LINES_CSV_HEADER_CYCLES: &str = "m,n,nu_Hz";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FrequencyUnit {
    /// |E|/ħ as written, rad/s.
    #[default]
    Angular,
    /// |E|/(2πħ), cycles per second.
    Cycles,
}

impl FrequencyUnit {
    fn divisor(self) -> f64 {
        match self {
            FrequencyUnit::Angular => 1.0,
            FrequencyUnit::Cycles => 2.0 * std::f64::consts::PI,
        }
    }
}

fn check(mass: Mass, n: u32) -> Result<f64> {
    let m = mass.kg();
    if !(m > 0.0 && m.is_finite()) {
        return Err(Error::domain(format!("mass must be positive, got {m} kg")));
    }
    if n == 0 {
        return Err(Error::domain("principal quantum number starts at 1"));
    }
    Ok(m)
}

/// E_n in J.
pub fn energy_level(mass: Mass, n: u32) -> Result<f64> {
    let m = check(mass, n)?;
    let nf = n as f64;
    Ok(-G * G * m.powi(5) / (4.0 * HBAR * HBAR * nf * nf))
}

/// r_n in m.
pub fn orbit_radius(mass: Mass, n: u32) -> Result<f64> {
    let m = check(mass, n)?;
    let nf = n as f64;
    Ok(HBAR * HBAR * nf * nf / (G * m.powi(3)))
}

/// v_n in m/s, rejected above 0.1 c.
pub fn orbit_velocity(mass: Mass, n: u32) -> Result<f64> {
    let m = check(mass, n)?;
    let v = G * m * m / (2.0 * n as f64 * HBAR);
    if v > MAX_VELOCITY_FRACTION * C {
        return Err(Error::RelativisticRegime { velocity_mps: v });
    }
    Ok(v)
}

/// ν for the m → n line.
pub fn transition_frequency(mass: Mass, m_level: u32, n_level: u32, unit: FrequencyUnit) -> Result<f64> {
    if m_level == 0 || m_level >= n_level {
        return Err(Error::domain(format!(
            "need 1 <= m < n, got m = {m_level}, n = {n_level}"
        )));
    }
    let (m, n) = (m_level as f64, n_level as f64);
    Ok(series_limit(mass, unit)? * (1.0 / (m * m) - 1.0 / (n * n)))
}

/// |E₁|/ħ, the prefactor of every line and the m = 1, n → ∞ limit.
pub fn series_limit(mass: Mass, unit: FrequencyUnit) -> Result<f64> {
    Ok(-energy_level(mass, 1)? / HBAR / unit.divisor())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Level {
    pub n: u32,
    pub energy_j: f64,
    pub radius_m: f64,
    pub velocity_mps: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Line {
    pub m: u32,
    pub n: u32,
    pub frequency: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundStateSpectrum {
    pub mass_gev: f64,
    pub unit: FrequencyUnit,
    pub levels: Vec<Level>,
    /// Sorted by frequency, ascending.
    pub lines: Vec<Line>,
}

/// Levels 1..=n_max and every line between them.
pub fn spectrum(mass: Mass, n_max: u32, unit: FrequencyUnit) -> Result<BoundStateSpectrum> {
    if n_max < 2 {
        return Err(Error::domain(format!("n_max must be at least 2, got {n_max}")));
    }
    let levels = (1..=n_max)
        .map(|n| {
            Ok(Level {
                n,
                energy_j: energy_level(mass, n)?,
                radius_m: orbit_radius(mass, n)?,
                velocity_mps: orbit_velocity(mass, n)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut lines = Vec::new();
    for m in 1..n_max {
        for n in m + 1..=n_max {
            lines.push(Line {
                m,
                n,
                frequency: transition_frequency(mass, m, n, unit)?,
            });
        }
    }
    lines.sort_by(|a, b| a.frequency.total_cmp(&b.frequency));
    Ok(BoundStateSpectrum {
        mass_gev: mass.gev(),
        unit,
        levels,
        lines,
    })
}

impl BoundStateSpectrum {
    pub fn levels_csv(&self) -> String {
        let mut s = format!("{LEVELS_CSV_HEADER}\n");
        for l in &self.levels {
            let _ = writeln!(
                s,
                "{},{:e},{:e},{:e}",
                l.n, l.energy_j, l.radius_m, l.velocity_mps
            );
        }
        s
    }

    /// Header names the frequency column after `unit`.
    pub fn lines_csv(&self) -> String {
        let header = match self.unit {
            FrequencyUnit::Angular => LINES_CSV_HEADER_ANGULAR,
            FrequencyUnit::Cycles => LINES_CSV_HEADER_CYCLES,
        };
        let mut s = format!("{header}\n");
        for l in &self.lines {
            let _ = writeln!(s, "{},{},{:e}", l.m, l.n, l.frequency);
        }
        s
    }
}
