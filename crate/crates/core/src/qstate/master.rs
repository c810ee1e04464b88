// SPDX-License-Identifier: Apache-2.0

//! One-particle master equation on the periodic momentum grid.
//!
//! The generator is
//!
//! ```text
//! dρ/dt = −i[k²/2M, ρ] + Σ_{m=1}^{N/2} ½w(m·dk)·dk · ½(S_m ρ S_m† + S_m† ρ S_m − 2ρ)
//! ```
//!
//! with S_m the periodic shift by m grid steps, so that
//! d tr ρ²/dt = −Σ_m w(m·dk)·dk·Λ(m·dk). Each step applies the free
//! phase exactly and then the collision part exactly: the shifts are
//! diagonal in the position basis, where the collision term only damps the
//! element ρ(xₙ, xₙ′) by exp(−D(n − n′)·dt). Both factors are CPTP, so
//! Hermiticity, trace and positivity hold to rounding for any dt.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::{hermitize, DensityMatrixGrid, MomentumGrid};
use crate::environment::{radial_weight_unchecked, CouplingKernel, ThermalEnvironment};
use crate::error::{Error, Result};

/// Largest allowed dt·Γ₀ᵈ.
pub const STABILITY_LIMIT: f64 = 0.1;

pub struct MasterEquation {
    grid: MomentumGrid,
    mass: f64,
    /// w(m·dk)·dk for m = 1..=N/2.
    rates: Vec<f64>,
    /// D(d) for position-index differences d = 0..N.
    damping: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for MasterEquation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MasterEquation")
            .field("grid", &self.grid)
            .field("mass", &self.mass)
            .field("rates", &self.rates)
            .finish()
    }
}

impl MasterEquation {
    pub fn new(grid: MomentumGrid, env: &ThermalEnvironment, kernel: &CouplingKernel) -> Self {
        let n = grid.len();
        let dk = grid.dk();
        let rates: Vec<f64> = (1..=n / 2)
            .map(|m| radial_weight_unchecked(env, kernel, m as f64 * dk) * dk)
            .collect();
        let damping = (0..n)
            .map(|d| {
                rates
                    .iter()
                    .enumerate()
                    .map(|(i, &r)| {
                        let m = (i + 1) as f64;
                        0.5 * r * (1.0 - (2.0 * PI * m * d as f64 / n as f64).cos())
                    })
                    .sum()
            })
            .collect();
        let mut planner = FftPlanner::new();
        MasterEquation {
            grid,
            mass: kernel.system_mass(),
            rates,
            damping,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }

    pub fn grid(&self) -> &MomentumGrid {
        &self.grid
    }

    /// Γ₀ᵈ = Σ_m w(m·dk)·dk over the shift set used by the generator.
    pub fn discrete_bound(&self) -> f64 {
        self.rates.iter().sum()
    }

    /// Advances ρ by dt.
    pub fn step(&self, rho: &DensityMatrixGrid, dt: f64) -> Result<DensityMatrixGrid> {
        if rho.grid() != &self.grid {
            return Err(Error::domain("state and generator use different grids"));
        }
        let mut p = rho.unit_trace_matrix();
        self.step_in_place(&mut p, dt)?;
        DensityMatrixGrid::from_unit_trace(self.grid, p)
    }

    fn check_dt(&self, dt: f64) -> Result<()> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::domain(format!("time step must be positive, got {dt}")));
        }
        let product = dt * self.discrete_bound();
        if !(product < STABILITY_LIMIT) {
            return Err(Error::Stability {
                product,
                limit: STABILITY_LIMIT,
            });
        }
        Ok(())
    }

    fn step_in_place(&self, p: &mut DMatrix<Complex64>, dt: f64) -> Result<()> {
        self.check_dt(dt)?;
        let n = self.grid.len();
        let k = self.grid.k_values();
        let c = dt / (2.0 * self.mass);
        for j in 0..n {
            for i in 0..n {
                p[(i, j)] *= Complex64::from_polar(1.0, -(k[i] * k[i] - k[j] * k[j]) * c);
            }
        }
        if self.discrete_bound() > 0.0 {
            // W P W† with W the unitary inverse DFT, then damp, then back
            self.transform_columns(p, &self.inverse);
            self.transform_rows(p, &self.forward);
            let decay: Vec<f64> = self.damping.iter().map(|d| (-d * dt).exp()).collect();
            for j in 0..n {
                for i in 0..n {
                    p[(i, j)] *= decay[(i + n - j) % n];
                }
            }
            self.transform_columns(p, &self.forward);
            self.transform_rows(p, &self.inverse);
            *p /= Complex64::from((n * n) as f64);
        }
        hermitize(p);
        Ok(())
    }

    fn transform_columns(&self, p: &mut DMatrix<Complex64>, fft: &Arc<dyn Fft<f64>>) {
        // nalgebra storage is column-major, so each column is contiguous
        for col in p.as_mut_slice().chunks_exact_mut(self.grid.len()) {
            fft.process(col);
        }
    }

    fn transform_rows(&self, p: &mut DMatrix<Complex64>, fft: &Arc<dyn Fft<f64>>) {
        p.transpose_mut();
        self.transform_columns(p, fft);
        p.transpose_mut();
    }

    /// Runs `steps` steps, recording (t, tr ρ²) every `record_every` steps
    /// and at t = 0.
    pub fn evolve(
        &self,
        rho: &DensityMatrixGrid,
        dt: f64,
        steps: usize,
        record_every: usize,
    ) -> Result<(DensityMatrixGrid, Trajectory)> {
        self.check_dt(dt)?;
        if rho.grid() != &self.grid {
            return Err(Error::domain("state and generator use different grids"));
        }
        let every = record_every.max(1);
        let mut p = rho.unit_trace_matrix();
        let mut traj = Trajectory::default();
        traj.push(0.0, rho.purity());
        for s in 1..=steps {
            self.step_in_place(&mut p, dt)?;
            if s % every == 0 || s == steps {
                let purity = super::trace_product(&p, &p);
                traj.push(s as f64 * dt, purity);
            }
        }
        Ok((DensityMatrixGrid::from_unit_trace(self.grid, p)?, traj))
    }
}

/// One step of the master equation.
pub fn evolve_step(
    rho: &DensityMatrixGrid,
    env: &ThermalEnvironment,
    kernel: &CouplingKernel,
    dt: f64,
) -> Result<DensityMatrixGrid> {
    MasterEquation::new(*rho.grid(), env, kernel).step(rho, dt)
}

/// Sampled (t, tr ρ²) pairs.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub purities: Vec<f64>,
}

impl Trajectory {
    pub fn push(&mut self, t: f64, purity: f64) {
        self.times.push(t);
        self.purities.push(purity);
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Γ from the least-squares slope of ln tr ρ² against t, negated.
pub fn measured_decay_rate(trajectory: &Trajectory) -> Result<f64> {
    let n = trajectory.len();
    if n < 3 || trajectory.purities.len() != n {
        return Err(Error::InsufficientData(format!(
            "need at least 3 samples, got {n}"
        )));
    }
    if trajectory.purities.iter().any(|&p| !(p > 0.0 && p.is_finite())) {
        return Err(Error::InsufficientData("purities must be positive".into()));
    }
    let t = &trajectory.times;
    let y: Vec<f64> = trajectory.purities.iter().map(|p| p.ln()).collect();
    let tm = t.iter().sum::<f64>() / n as f64;
    let ym = y.iter().sum::<f64>() / n as f64;
    let sxx: f64 = t.iter().map(|ti| (ti - tm).powi(2)).sum();
    if !(sxx > 0.0) {
        return Err(Error::InsufficientData("sample times are all equal".into()));
    }
    let sxy: f64 = t.iter().zip(&y).map(|(ti, yi)| (ti - tm) * (yi - ym)).sum();
    Ok(-sxy / sxx)
}
