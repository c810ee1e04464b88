// SPDX-License-Identifier: Apache-2.0

//! Purity-decay bound Γ₀ and decoherence times.
//!
//! For any bath, the purity of the particle obeys d(tr ρ²)/dt = −Γ tr ρ² with
//! 0 ≤ Γ ≤ Γ₀ = ∫₀^∞ w(q) dq (see [`crate::environment::radial_weight`]).
//! For a photon bath the integral has the closed form
//!
//! ```text
//! Γ₀ = [ (16/(15π²) − 96 ζ(5)/π⁶) / β⁵ + 8 ζ(3)/(π⁴ β³) ] M²
//! ```
//!
//! For a non-relativistic fermion bath the integral diverges as q → 0; the
//! small-q behaviour Λ(q) ≲ q² D of the purity deficit (D = ⟨x²⟩ tr ρ²) cures
//! it below the cut q = 1/√D.

use std::f64::consts::PI;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::environment::{radial_weight_unchecked, CouplingKernel, Species, ThermalEnvironment};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_from, integrate_interval, Tolerance};
use crate::units::{self, Dimension, Mass, PhysicalQuantity, Temperature};

/// Purity drop used for the headline decoherence time t_0.01.
pub const DEFAULT_PURITY_DROP: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ClosedForm,
    Quadrature,
    FermionCutoff,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecoherenceSummary {
    /// Γ₀ in inverse Planck times.
    pub gamma0: f64,
    /// Γ₀ in s⁻¹.
    pub gamma0_si: f64,
    /// Time (s) for the purity to drop by `purity_drop`; infinite when Γ₀ = 0.
    pub t_fraction: f64,
    pub purity_drop: f64,
    pub method: Method,
}

impl DecoherenceSummary {
    fn new(gamma0: f64, method: Method) -> Result<Self> {
        let gamma0_si = rate_to_si(gamma0)?;
        let mut summary = DecoherenceSummary {
            gamma0,
            gamma0_si,
            t_fraction: f64::INFINITY,
            purity_drop: DEFAULT_PURITY_DROP,
            method,
        };
        summary.set_drop(DEFAULT_PURITY_DROP)?;
        Ok(summary)
    }

    /// Same rate, decoherence time recomputed for another purity drop.
    pub fn with_purity_drop(mut self, purity_drop: f64) -> Result<Self> {
        self.set_drop(purity_drop)?;
        Ok(self)
    }

    fn set_drop(&mut self, purity_drop: f64) -> Result<()> {
        self.t_fraction = if self.gamma0_si > 0.0 {
            decoherence_time(self.gamma0_si, purity_drop)?
        } else {
            check_drop(purity_drop)?;
            f64::INFINITY
        };
        self.purity_drop = purity_drop;
        Ok(())
    }
}

/// D = ⟨x²⟩_ρ tr ρ², natural units (length²).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpreadBound(f64);

impl SpreadBound {
    pub fn new(d: f64) -> Result<Self> {
        if d > 0.0 && d.is_finite() {
            Ok(SpreadBound(d))
        } else {
            Err(Error::domain(format!("spread bound D must be positive, got {d}")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Momentum q = 1/√D separating the two branches of the fermion bound.
    pub fn cutoff(self) -> f64 {
        1.0 / self.0.sqrt()
    }
}

fn rate_to_si(rate: f64) -> Result<f64> {
    Ok(units::from_natural(PhysicalQuantity::natural(rate, Dimension::Rate), Dimension::Rate)?.value)
}

fn check_inputs(mass: Mass, temperature: Temperature) -> Result<()> {
    let m = mass.planck();
    if !(m > 0.0 && m.is_finite()) {
        return Err(Error::domain(format!("mass must be positive, got {m} m_P")));
    }
    let beta = temperature.beta();
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::domain(format!(
            "temperature must be positive (beta = {beta})"
        )));
    }
    Ok(())
}

fn check_drop(purity_drop: f64) -> Result<()> {
    if purity_drop > 0.0 && purity_drop < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "purity drop must lie in (0, 1), got {purity_drop}"
        )))
    }
}

/// Γ₀ for a photon bath from the closed form.
pub fn gamma0_photon_closed(mass: Mass, temperature: Temperature) -> Result<DecoherenceSummary> {
    check_inputs(mass, temperature)?;
    DecoherenceSummary::new(
        photon_closed_form(mass.planck(), temperature.beta())?,
        Method::ClosedForm,
    )
}

pub(crate) fn photon_closed_form(m: f64, beta: f64) -> Result<f64> {
    let zeta3 = crate::quadrature::riemann_zeta(3.0)?;
    let zeta5 = crate::quadrature::riemann_zeta(5.0)?;
    let quintic = 16.0 / (15.0 * PI * PI) - 96.0 * zeta5 / PI.powi(6);
    let cubic = 8.0 * zeta3 / PI.powi(4);
    Ok((quintic / beta.powi(5) + cubic / beta.powi(3)) * m * m)
}

/// Γ₀ for a photon bath by integrating the radial weight.
pub fn gamma0_photon_quadrature(
    mass: Mass,
    temperature: Temperature,
    rel_tol: f64,
) -> Result<DecoherenceSummary> {
    check_inputs(mass, temperature)?;
    let env = ThermalEnvironment::photon(temperature)?;
    let kernel = CouplingKernel::newtonian(mass)?;
    let beta = env.beta();
    // integrate in x = βq so the thermal peak sits at x ~ 1 for every β
    let r = integrate_from(
        |x| radial_weight_unchecked(&env, &kernel, x / beta) / beta,
        0.0,
        Tolerance::relative(rel_tol),
    )?;
    DecoherenceSummary::new(r.value, Method::Quadrature)
}

/// Γ₀ for a bath of non-relativistic fermions of mass `fermion_mass`, with the
/// small-momentum bound below q = 1/√D:
///
/// ```text
/// Γ₀ = (4M²m²/π²) [ ∫₀^{1/√D} D n(n+1) dq + ∫_{1/√D}^∞ n(n+1)/q² dq ]
/// ```
pub fn gamma0_fermion(
    mass: Mass,
    fermion_mass: Mass,
    temperature: Temperature,
    bound: SpreadBound,
    rel_tol: f64,
) -> Result<DecoherenceSummary> {
    check_inputs(mass, temperature)?;
    let env = ThermalEnvironment::fermion(temperature, fermion_mass)?;
    let kernel = CouplingKernel::newtonian(mass)?;
    let gamma0 = fermion_bound(&env, &kernel, bound, rel_tol)?;
    DecoherenceSummary::new(gamma0, Method::FermionCutoff)
}

/// The two integrands of the fermion bound, below and above the cut.
pub fn fermion_integrands<'a>(
    env: &'a ThermalEnvironment,
    kernel: &'a CouplingKernel,
    bound: SpreadBound,
) -> Result<(impl Fn(f64) -> f64 + 'a, impl Fn(f64) -> f64 + 'a)> {
    let m = match env.species() {
        Species::Fermion { mass } => mass,
        Species::Photon => return Err(Error::domain("fermion bound requires a fermion bath")),
    };
    let d = bound.value();
    let big_m = kernel.system_mass();
    let prefactor = 4.0 * big_m * big_m * m * m / (PI * PI);
    let below = move |q: f64| {
        let n = env.occupation_unchecked(q);
        prefactor * d * n * (n + 1.0)
    };
    let above = move |q: f64| radial_weight_unchecked(env, kernel, q);
    Ok((below, above))
}

fn fermion_bound(
    env: &ThermalEnvironment,
    kernel: &CouplingKernel,
    bound: SpreadBound,
    rel_tol: f64,
) -> Result<f64> {
    let (below, above) = fermion_integrands(env, kernel, bound)?;
    let cut = bound.cutoff();
    let tol = Tolerance::relative(rel_tol);
    let low = integrate_interval(below, 0.0, cut, tol)?;
    let high = integrate_from(above, cut, tol)?;
    Ok(low.value + high.value)
}

/// Time for the purity to fall by the fraction `purity_drop` at a constant
/// decay rate: −ln(1 − drop) / rate.
pub fn decoherence_time(rate_per_s: f64, purity_drop: f64) -> Result<f64> {
    if !(rate_per_s > 0.0 && rate_per_s.is_finite()) {
        return Err(Error::domain(format!("rate must be positive, got {rate_per_s}")));
    }
    check_drop(purity_drop)?;
    Ok(-(-purity_drop).ln_1p() / rate_per_s)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub temperature_k: f64,
    pub gamma0_per_s: f64,
    pub t001_s: f64,
}

pub const SWEEP_CSV_HEADER: &str = "temperature_K,gamma0_per_s,t001_s";

/// Log-spaced temperature sweep of Γ₀ (closed form) and t_0.01. Rows are in
/// increasing temperature order.
pub fn figure1_sweep(mass: Mass, t_min_k: f64, t_max_k: f64, points: usize) -> Result<Vec<SweepRow>> {
    if !(t_min_k > 0.0 && t_max_k > t_min_k && t_max_k.is_finite()) {
        return Err(Error::domain(format!(
            "need 0 < T_min < T_max, got [{t_min_k}, {t_max_k}]"
        )));
    }
    if points < 2 {
        return Err(Error::domain(format!("need at least 2 points, got {points}")));
    }
    let temps = log_space(t_min_k, t_max_k, points);
    temps
        .par_iter()
        .map(|&t| {
            let s = gamma0_photon_closed(mass, Temperature::from_kelvin(t))?;
            Ok(SweepRow {
                temperature_k: t,
                gamma0_per_s: s.gamma0_si,
                t001_s: decoherence_time(s.gamma0_si, DEFAULT_PURITY_DROP)?,
            })
        })
        .collect()
}

fn log_space(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let (l, h) = (lo.ln(), hi.ln());
    let last = points - 1;
    (0..points)
        .map(|i| match i {
            0 => lo,
            i if i == last => hi,
            i => (l + (h - l) * i as f64 / last as f64).exp(),
        })
        .collect()
}

/// CSV (comma, `.` decimal, LF) with header `temperature_K,gamma0_per_s,t001_s`.
pub fn sweep_to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(SWEEP_CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(out, "{:e},{:e},{:e}", r.temperature_k, r.gamma0_per_s, r.t001_s);
    }
    out
}
