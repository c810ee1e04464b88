// SPDX-License-Identifier: Apache-2.0

//! SI <-> natural (Planck) unit conversion.
//!
//! Natural units here mean ħ = c = G = 1 with k_B = 1 for temperatures, so a
//! mass, an energy and a temperature are all measured in Planck energies, a
//! time and a length in Planck times, and a rate or frequency in inverse
//! Planck times. All constants are CODATA 2018 (see `docs/constants.md`).

use std::fmt;

use crate::error::{Error, Result};

/// Reduced Planck constant (J s).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Speed of light in vacuum (m/s), exact.
pub const C: f64 = 299_792_458.0;
/// Newtonian constant of gravitation (m^3 kg^-1 s^-2).
pub const G: f64 = 6.674_30e-11;
/// Boltzmann constant (J/K), exact.
pub const K_B: f64 = 1.380_649e-23;
/// Elementary charge (C), exact; also J per eV.
pub const ELECTRON_VOLT: f64 = 1.602_176_634e-19;

/// Seconds in a Julian year.
pub const SECONDS_PER_YEAR: f64 = 365.25 * 86_400.0;
/// Seconds in a gigayear (10^9 Julian years).
pub const SECONDS_PER_GYR: f64 = 1e9 * SECONDS_PER_YEAR;
/// Age of the universe used for comparisons (s).
pub const AGE_OF_UNIVERSE_S: f64 = 13.8 * SECONDS_PER_GYR;

/// Planck mass sqrt(ħc/G) in kg.
pub fn planck_mass() -> f64 {
    (HBAR * C / G).sqrt()
}

/// Planck length sqrt(ħG/c^3) in m.
pub fn planck_length() -> f64 {
    (HBAR * G / (C * C * C)).sqrt()
}

/// Planck time l_P / c in s.
pub fn planck_time() -> f64 {
    planck_length() / C
}

/// Planck energy m_P c^2 in J.
pub fn planck_energy() -> f64 {
    planck_mass() * C * C
}

/// Planck temperature E_P / k_B in K.
pub fn planck_temperature() -> f64 {
    planck_energy() / K_B
}

/// Mass of 1 GeV/c^2 in kg.
pub fn gev_mass_kg() -> f64 {
    1e9 * ELECTRON_VOLT / (C * C)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dimension {
    Mass,
    Energy,
    Temperature,
    Time,
    Length,
    Rate,
    Frequency,
    Velocity,
}

impl Dimension {
    pub const ALL: [Dimension; 8] = [
        Dimension::Mass,
        Dimension::Energy,
        Dimension::Temperature,
        Dimension::Time,
        Dimension::Length,
        Dimension::Rate,
        Dimension::Frequency,
        Dimension::Velocity,
    ];

    /// SI value of one natural unit of this dimension.
    fn si_per_natural(self) -> f64 {
        match self {
            Dimension::Mass => planck_mass(),
            Dimension::Energy => planck_energy(),
            Dimension::Temperature => planck_temperature(),
            Dimension::Time => planck_time(),
            Dimension::Length => planck_length(),
            Dimension::Rate | Dimension::Frequency => 1.0 / planck_time(),
            Dimension::Velocity => C,
        }
    }

    /// Dimensions that coincide once ħ = c = G = k_B = 1.
    fn natural_class(self) -> u8 {
        match self {
            Dimension::Mass | Dimension::Energy | Dimension::Temperature => 0,
            Dimension::Time | Dimension::Length => 1,
            Dimension::Rate | Dimension::Frequency => 2,
            Dimension::Velocity => 3,
        }
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnitSystem {
    Si,
    Natural,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalQuantity {
    pub value: f64,
    pub dimension: Dimension,
    pub system: UnitSystem,
}

impl PhysicalQuantity {
    pub fn si(value: f64, dimension: Dimension) -> Self {
        Self {
            value,
            dimension,
            system: UnitSystem::Si,
        }
    }

    pub fn natural(value: f64, dimension: Dimension) -> Self {
        Self {
            value,
            dimension,
            system: UnitSystem::Natural,
        }
    }

    /// Adds two quantities of the same dimension and unit system.
    pub fn checked_add(self, other: Self) -> Result<Self> {
        self.ensure_comparable(&other)?;
        Ok(Self {
            value: self.value + other.value,
            ..self
        })
    }

    /// Orders two quantities of the same dimension and unit system.
    pub fn checked_cmp(&self, other: &Self) -> Result<Option<std::cmp::Ordering>> {
        self.ensure_comparable(other)?;
        Ok(self.value.partial_cmp(&other.value))
    }

    fn ensure_comparable(&self, other: &Self) -> Result<()> {
        if self.dimension != other.dimension || self.system != other.system {
            return Err(Error::UnsupportedDimension(format!(
                "cannot combine {} ({:?}) with {} ({:?})",
                self.dimension, self.system, other.dimension, other.system
            )));
        }
        Ok(())
    }
}

/// Converts an SI quantity to Planck units.
pub fn to_natural(q: PhysicalQuantity) -> Result<PhysicalQuantity> {
    if q.system != UnitSystem::Si {
        return Err(Error::UnsupportedDimension(format!(
            "{} quantity is already in natural units",
            q.dimension
        )));
    }
    Ok(PhysicalQuantity::natural(
        q.value / q.dimension.si_per_natural(),
        q.dimension,
    ))
}

/// Converts a Planck-unit quantity to SI, reading it as `target`.
///
/// `target` may differ from the quantity's own dimension only where the two
/// coincide in natural units (mass/energy/temperature, time/length,
/// rate/frequency).
pub fn from_natural(q: PhysicalQuantity, target: Dimension) -> Result<PhysicalQuantity> {
    if q.system != UnitSystem::Natural {
        return Err(Error::UnsupportedDimension(format!(
            "{} quantity is not in natural units",
            q.dimension
        )));
    }
    if q.dimension.natural_class() != target.natural_class() {
        return Err(Error::UnsupportedDimension(format!(
            "cannot read a natural {} as {}",
            q.dimension, target
        )));
    }
    Ok(PhysicalQuantity::si(q.value * target.si_per_natural(), target))
}

/// A mass, stored in Planck masses.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Mass(f64);

impl Mass {
    pub fn from_kg(kg: f64) -> Self {
        Mass(kg / planck_mass())
    }

    pub fn from_gev(gev: f64) -> Self {
        Self::from_kg(gev * gev_mass_kg())
    }

    pub fn from_planck(m: f64) -> Self {
        Mass(m)
    }

    pub fn planck(self) -> f64 {
        self.0
    }

    pub fn kg(self) -> f64 {
        self.0 * planck_mass()
    }

    pub fn gev(self) -> f64 {
        self.kg() / gev_mass_kg()
    }
}

/// A bath temperature, stored as the natural-unit inverse temperature β.
///
/// Public entry points take kelvin; `from_beta` exists for working directly
/// in Planck units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Temperature {
    beta: f64,
}

impl Temperature {
    pub fn from_kelvin(kelvin: f64) -> Self {
        Temperature {
            beta: planck_temperature() / kelvin,
        }
    }

    pub fn from_beta(beta: f64) -> Self {
        Temperature { beta }
    }

    pub fn beta(self) -> f64 {
        self.beta
    }

    pub fn kelvin(self) -> f64 {
        planck_temperature() / self.beta
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn derived_planck_units_match_codata() {
        assert!(rel(planck_mass(), 2.176_434e-8) < 1e-6);
        assert!(rel(planck_time(), 5.391_247e-44) < 1e-6);
        assert!(rel(planck_length(), 1.616_255e-35) < 1e-6);
        assert!(rel(planck_temperature(), 1.416_784e32) < 1e-6);
    }

    #[test]
    fn one_kilogram_in_planck_masses() {
        let q = to_natural(PhysicalQuantity::si(1.0, Dimension::Mass)).unwrap();
        assert!(rel(q.value, 1.0 / 2.176_434e-8) < 1e-6);
        assert!(rel(q.value, 4.595e7) < 1e-3);
    }

    #[test]
    fn zero_maps_to_zero() {
        for d in Dimension::ALL {
            assert_eq!(to_natural(PhysicalQuantity::si(0.0, d)).unwrap().value, 0.0);
        }
    }

    #[test]
    fn temperature_in_planck_energies() {
        let q = to_natural(PhysicalQuantity::si(3000.0, Dimension::Temperature)).unwrap();
        let expected = K_B * 3000.0 / 1.956_082e9;
        assert!(rel(q.value, expected) < 1e-6);
        assert!(rel(Temperature::from_kelvin(3000.0).beta(), 1.0 / expected) < 1e-6);
    }

    #[test]
    fn planck_time_and_rate_back_to_si() {
        let t = from_natural(PhysicalQuantity::natural(1.0, Dimension::Time), Dimension::Time).unwrap();
        assert!(rel(t.value, 5.391e-44) < 1e-3);
        let r = from_natural(PhysicalQuantity::natural(1.0, Dimension::Rate), Dimension::Rate).unwrap();
        assert!(rel(r.value, 1.0 / 5.391_247e-44) < 1e-6);
        assert!((t.value * r.value - 1.0).abs() < 4.0 * f64::EPSILON);
    }

    #[test]
    fn cross_class_reads_are_rejected() {
        let q = PhysicalQuantity::natural(1.0, Dimension::Mass);
        assert!(matches!(
            from_natural(q, Dimension::Time),
            Err(Error::UnsupportedDimension(_))
        ));
        let e = from_natural(q, Dimension::Energy).unwrap();
        assert!(rel(e.value, planck_energy()) < 1e-15);
        assert!(to_natural(q).is_err());
    }

    #[test]
    fn mixed_dimensions_never_combine() {
        let a = PhysicalQuantity::natural(1.0, Dimension::Mass);
        let b = PhysicalQuantity::natural(1.0, Dimension::Time);
        assert!(a.checked_add(b).is_err());
        assert!(a.checked_cmp(&b).is_err());
        assert_eq!(a.checked_add(a).unwrap().value, 2.0);
    }

    #[test]
    fn gev_mass() {
        assert!(rel(gev_mass_kg(), 1.782_661_92e-27) < 1e-8);
        let m = Mass::from_gev(1e11);
        assert!(rel(m.gev(), 1e11) < 1e-14);
    }

    proptest! {
        #[test]
        fn round_trip_across_decades(exp in -6.0f64..6.0, mant in 1.0f64..10.0, idx in 0usize..8) {
            let d = Dimension::ALL[idx];
            let x = mant * 10f64.powf(exp);
            let back = from_natural(to_natural(PhysicalQuantity::si(x, d)).unwrap(), d).unwrap();
            prop_assert!(((back.value - x) / x).abs() < 1e-12);
        }

        #[test]
        fn natural_round_trip(exp in -6.0f64..6.0, idx in 0usize..8) {
            let d = Dimension::ALL[idx];
            let x = 10f64.powf(exp);
            let si = from_natural(PhysicalQuantity::natural(x, d), d).unwrap();
            let back = to_natural(si).unwrap();
            prop_assert!(((back.value - x) / x).abs() < 1e-12);
        }
    }
}
