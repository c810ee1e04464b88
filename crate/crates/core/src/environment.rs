// SPDX-License-Identifier: Apache-2.0

//! Thermal bath and gravitational coupling.
//!
//! The bath supplies an occupation n_q and a single-particle energy ε_q; the
//! coupling supplies the Fourier-space Newtonian potential ν(k). Together
//! they give the radial spectral weight
//!
//! ```text
//! w(q) = (4 M² / π²) · ε_q² / q² · n_q (n_q + 1)
//! ```
//!
//! whose integral over q > 0 is the purity-decay bound Γ₀. All quantities are
//! in natural units.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quadrature::{integrate_interval, Tolerance};
use crate::units::{Mass, Temperature};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Species {
    Photon,
    /// Non-relativistic fermions of the given mass (natural units).
    Fermion {
        mass: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalEnvironment {
    species: Species,
    beta: f64,
}

impl ThermalEnvironment {
    pub fn photon(temperature: Temperature) -> Result<Self> {
        Self::new(Species::Photon, temperature.beta())
    }

    pub fn fermion(temperature: Temperature, mass: Mass) -> Result<Self> {
        Self::new(Species::Fermion { mass: mass.planck() }, temperature.beta())
    }

    pub fn new(species: Species, beta: f64) -> Result<Self> {
        if !(beta > 0.0) {
            return Err(Error::domain(format!("beta must be positive, got {beta}")));
        }
        if let Species::Fermion { mass } = species {
            if !(mass > 0.0 && mass.is_finite()) {
                return Err(Error::domain(format!(
                    "fermion mass must be positive, got {mass}"
                )));
            }
        }
        Ok(ThermalEnvironment { species, beta })
    }

    pub fn species(&self) -> Species {
        self.species
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Occupation n_q. Photons: q²/(π²(e^{βq} − 1)); fermions:
    /// (1 + e^{βq²/2m})⁻¹.
    pub fn occupation(&self, q: f64) -> Result<f64> {
        check_momentum(q)?;
        Ok(self.occupation_unchecked(q))
    }

    pub(crate) fn occupation_unchecked(&self, q: f64) -> f64 {
        match self.species {
            Species::Photon => q * q / (PI * PI * (self.beta * q).exp_m1()),
            Species::Fermion { mass } => 1.0 / (1.0 + (self.beta * q * q / (2.0 * mass)).exp()),
        }
    }

    /// Single-particle energy ε_q: q for photons, the rest mass m for
    /// non-relativistic fermions.
    pub fn energy(&self, q: f64) -> f64 {
        match self.species {
            Species::Photon => q,
            Species::Fermion { mass } => mass,
        }
    }

    /// ε_q² / q², exact 1 for photons.
    fn energy_sq_over_q_sq(&self, q: f64) -> f64 {
        match self.species {
            Species::Photon => 1.0,
            Species::Fermion { mass } => mass * mass / (q * q),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingKernel {
    system_mass: f64,
    yukawa_lambda: f64,
}

impl CouplingKernel {
    /// Pure Newtonian coupling (λ = 0), used for every rate calculation.
    pub fn newtonian(system_mass: Mass) -> Result<Self> {
        Self::with_yukawa(system_mass, 0.0)
    }

    pub fn with_yukawa(system_mass: Mass, yukawa_lambda: f64) -> Result<Self> {
        let m = system_mass.planck();
        if !(m > 0.0 && m.is_finite()) {
            return Err(Error::domain(format!("system mass must be positive, got {m}")));
        }
        if !(yukawa_lambda >= 0.0 && yukawa_lambda.is_finite()) {
            return Err(Error::domain(format!(
                "Yukawa lambda must be non-negative, got {yukawa_lambda}"
            )));
        }
        Ok(CouplingKernel {
            system_mass: m,
            yukawa_lambda,
        })
    }

    pub fn system_mass(&self) -> f64 {
        self.system_mass
    }

    pub fn yukawa_lambda(&self) -> f64 {
        self.yukawa_lambda
    }

    /// ν(k) = M / (π (k² + λ²)).
    pub fn potential_fourier(&self, k: f64) -> Result<f64> {
        check_momentum(k)?;
        let l = self.yukawa_lambda;
        Ok(self.system_mass / (PI * (k * k + l * l)))
    }

    /// ν(k) by direct quadrature of the damped radial transform
    /// (M/πk) ∫₀^∞ sin(kx) e^{−λx} dx. Needs λ > 0 for convergence.
    ///
    /// The range is cut into blocks of whole periods and summed until the
    /// damping factor drops below 1e−20.
    pub fn potential_fourier_quadrature(&self, k: f64, rel_tol: f64) -> Result<f64> {
        check_momentum(k)?;
        let l = self.yukawa_lambda;
        if !(l > 0.0) {
            return Err(Error::domain(
                "the radial transform only converges for lambda > 0",
            ));
        }
        let tol = Tolerance::relative(rel_tol);
        let block = 8.0 * 2.0 * PI / k;
        let x_max = 46.0 / l;
        let blocks = (x_max / block).ceil();
        if blocks > 1e6 {
            return Err(Error::domain(format!(
                "k = {k:e}, lambda = {l:e} needs {blocks:e} oscillation blocks"
            )));
        }
        let mut sum = 0.0;
        for i in 0..blocks as usize {
            let a = i as f64 * block;
            let r = integrate_interval(|x| (k * x).sin() * (-l * x).exp(), a, a + block, tol)?;
            sum += r.value;
        }
        Ok(self.system_mass / (PI * k) * sum)
    }
}

/// w(q) = (4M²/π²) · (ε_q²/q²) · n_q(n_q + 1).
pub fn radial_weight(env: &ThermalEnvironment, kernel: &CouplingKernel, q: f64) -> Result<f64> {
    check_momentum(q)?;
    Ok(radial_weight_unchecked(env, kernel, q))
}

pub(crate) fn radial_weight_unchecked(env: &ThermalEnvironment, kernel: &CouplingKernel, q: f64) -> f64 {
    let m = kernel.system_mass;
    let n = env.occupation_unchecked(q);
    4.0 * m * m / (PI * PI) * env.energy_sq_over_q_sq(q) * n * (n + 1.0)
}

fn check_momentum(q: f64) -> Result<()> {
    if q > 0.0 && q.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "momentum must be positive and finite, got {q}"
        )))
    }
}
