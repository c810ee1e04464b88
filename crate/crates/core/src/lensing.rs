// SPDX-License-Identifier: Apache-2.0

//! Wave-optics lensing by a lens whose centre is in a superposition.
//!
//! Lengths are in Einstein-radius units and the frequency enters through the
//! wave parameter w = 4GMω. A lens centred at x adds the phase −wΦ(u − x) at
//! lens-plane position u, with the softened logarithmic potential
//! Φ(s) = ½ ln(s² + a²). The amplitude at observation angle θ is the 1-D
//! Kirchhoff integral
//!
//! ```text
//! α(θ) = 1 + √(w/2πi) ∫ du g(u) e^{iw(u−θ)²/2} (e^{−iwΦ(u)} − 1)
//! ```
//!
//! where the unlensed integral (exactly 1) has been subtracted analytically
//! and g is a cos² taper over the outer edge of the finite lens plane.
//!
//! The classical intensity uses one amplitude with Φ convolved against |ψ|².
//! The quantum intensity is |Σᵢ cᵢ αᵢ(θ)|² over lens positions xᵢ with
//! cᵢ = ψᵢ√dx, so that Σ|cᵢ|² = 1 and a single-point ψ gives exactly the
//! classical result.

use std::f64::consts::PI;
use std::fmt::Write;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

pub const PROFILE_CSV_HEADER: &str = "theta,I_cl,I_qg";

/// Fewest points `fringe_contrast` accepts.
pub const MIN_PROFILE_POINTS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AmplitudeModel {
    #[default]
    Kirchhoff1D,
}

/// Discretization of the lens plane: u ∈ [−half_width, half_width] with
/// spacing `step`, tapered to zero over the outer `taper`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LensPlane {
    pub half_width: f64,
    pub step: f64,
    pub taper: f64,
}

impl Default for LensPlane {
    fn default() -> Self {
        LensPlane {
            half_width: 16.0,
            step: 0.002,
            taper: 3.0,
        }
    }
}

impl LensPlane {
    fn validate(&self) -> Result<()> {
        let ok = self.step > 0.0
            && self.taper > 0.0
            && self.half_width > self.taper
            && self.half_width / self.step <= 1e7;
        if !ok {
            return Err(Error::GridResolution(format!("invalid lens plane {self:?}")));
        }
        Ok(())
    }

    fn samples(&self) -> (Vec<f64>, Vec<f64>) {
        let k = (self.half_width / self.step).round() as i64;
        let inner = self.half_width - self.taper;
        (-k..=k)
            .map(|i| {
                let u = i as f64 * self.step;
                let a = u.abs();
                let g = if a <= inner {
                    1.0
                } else {
                    (0.5 * PI * (a - inner) / self.taper).cos().powi(2)
                };
                (u, g)
            })
            .unzip()
    }
}

/// Sampled lens-centre wavefunction ψ(xᵢ), xᵢ = x_min + i·dx, Σ|ψ|²·dx = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct LensWavefunction {
    x_min: f64,
    dx: f64,
    amplitudes: Vec<Complex64>,
}

impl LensWavefunction {
    /// Normalizes the given amplitudes.
    pub fn new(x_min: f64, dx: f64, amplitudes: Vec<Complex64>) -> Result<Self> {
        if !(dx > 0.0 && dx.is_finite()) || !x_min.is_finite() || amplitudes.is_empty() {
            return Err(Error::domain("wavefunction needs dx > 0 and at least one sample"));
        }
        let norm2: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>() * dx;
        if !(norm2 > 0.0 && norm2.is_finite()) {
            return Err(Error::domain("wavefunction has zero or non-finite norm"));
        }
        let s = Complex64::from(norm2.sqrt());
        Ok(LensWavefunction {
            x_min,
            dx,
            amplitudes: amplitudes.into_iter().map(|z| z / s).collect(),
        })
    }

    /// All weight on the single sample at `x`.
    pub fn point(x: f64, dx: f64) -> Result<Self> {
        Self::new(x, dx, vec![Complex64::from(1.0)])
    }

    /// Point branches (xⱼ, cⱼ) placed on a grid of spacing dx; every xⱼ must
    /// be a multiple of dx.
    pub fn branches(branches: &[(f64, Complex64)], dx: f64) -> Result<Self> {
        if branches.is_empty() {
            return Err(Error::domain("need at least one branch"));
        }
        let idx: Vec<i64> = branches
            .iter()
            .map(|(x, _)| {
                let i = (x / dx).round();
                if (x - i * dx).abs() > 1e-9 * dx.max(x.abs()) {
                    Err(Error::domain(format!(
                        "branch at {x} is not on the dx = {dx} grid"
                    )))
                } else {
                    Ok(i as i64)
                }
            })
            .collect::<Result<_>>()?;
        let lo = *idx.iter().min().unwrap();
        let hi = *idx.iter().max().unwrap();
        let mut amps = vec![Complex64::new(0.0, 0.0); (hi - lo + 1) as usize];
        for (i, (_, c)) in idx.iter().zip(branches) {
            amps[(i - lo) as usize] += c;
        }
        Self::new(lo as f64 * dx, dx, amps)
    }

    /// Gaussian |ψ|² of standard deviation `width` centred on `center`,
    /// sampled over ±6 widths.
    pub fn gaussian(center: f64, width: f64, dx: f64) -> Result<Self> {
        if !(width > 0.0) {
            return Err(Error::domain(format!("width must be positive, got {width}")));
        }
        let k = (6.0 * width / dx).ceil() as i64;
        let amps = (-k..=k)
            .map(|i| {
                let s = i as f64 * dx;
                Complex64::from((-s * s / (4.0 * width * width)).exp())
            })
            .collect();
        Self::new(center - k as f64 * dx, dx, amps)
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn positions(&self) -> Vec<f64> {
        (0..self.amplitudes.len())
            .map(|i| self.x_min + i as f64 * self.dx)
            .collect()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// ψ(−x).
    pub fn reflected(&self) -> Self {
        let n = self.amplitudes.len();
        LensWavefunction {
            x_min: -(self.x_min + (n - 1) as f64 * self.dx),
            dx: self.dx,
            amplitudes: self.amplitudes.iter().rev().copied().collect(),
        }
    }

    /// e^{iφ}ψ.
    pub fn with_global_phase(&self, phi: f64) -> Self {
        let p = Complex64::from_polar(1.0, phi);
        LensWavefunction {
            amplitudes: self.amplitudes.iter().map(|z| z * p).collect(),
            ..self.clone()
        }
    }

    /// Nonzero (xᵢ, |ψᵢ|²·dx, ψᵢ·√dx) triples.
    fn weights(&self) -> Vec<(f64, f64, Complex64)> {
        let sq = self.dx.sqrt();
        self.positions()
            .into_iter()
            .zip(&self.amplitudes)
            .filter(|(_, z)| z.norm_sqr() > 0.0)
            .map(|(x, z)| (x, z.norm_sqr() * self.dx, z * sq))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LensingScene {
    /// Lens mass, natural units.
    pub lens_mass: f64,
    /// Source angular frequency, natural units.
    pub omega: f64,
    pub psi: LensWavefunction,
    pub theta_grid: Vec<f64>,
    /// (source–lens, lens–observer) distances, natural units. Only
    /// `einstein_angle` uses them; everything else is in Einstein units.
    pub distances: (f64, f64),
    /// Core radius a of the softened potential.
    pub core_radius: f64,
    pub plane: LensPlane,
    pub model: AmplitudeModel,
}

impl LensingScene {
    pub fn validate(&self) -> Result<()> {
        if !(self.lens_mass >= 0.0 && self.lens_mass.is_finite()) {
            return Err(Error::domain(format!(
                "lens mass must be >= 0, got {}",
                self.lens_mass
            )));
        }
        if !(self.omega > 0.0 && self.omega.is_finite()) {
            return Err(Error::domain(format!(
                "omega must be positive, got {}",
                self.omega
            )));
        }
        let (a, b) = self.distances;
        if !(a > 0.0 && b > 0.0) {
            return Err(Error::domain("distances must be positive"));
        }
        if !(self.core_radius > 0.0) {
            return Err(Error::domain("core radius must be positive"));
        }
        if self.theta_grid.iter().any(|t| !t.is_finite()) {
            return Err(Error::domain("theta grid must be finite"));
        }
        self.plane.validate()
    }

    /// w = 4GMω.
    pub fn wave_parameter(&self) -> f64 {
        4.0 * self.lens_mass * self.omega
    }

    /// θ_E = √(4GM·D_ls/(D_l·D_s)) with D_s = D_ls + D_l, radians.
    pub fn einstein_angle(&self) -> f64 {
        let (d_ls, d_l) = self.distances;
        (4.0 * self.lens_mass * d_ls / (d_l * (d_ls + d_l))).sqrt()
    }

    /// Two equal point branches at ±1 Einstein radius, w = 40, core 1.5,
    /// θ ∈ [−8, 8] in 801 steps.
    pub fn default_coherence_scene() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = LensWavefunction::branches(&[(-1.0, Complex64::from(s)), (1.0, Complex64::from(s))], 0.05)
            .expect("valid branches");
        LensingScene {
            lens_mass: 1.0,
            omega: 10.0,
            psi,
            theta_grid: linspace(-8.0, 8.0, 801),
            distances: (1.0, 1.0),
            core_radius: 1.5,
            plane: LensPlane::default(),
            model: AmplitudeModel::Kirchhoff1D,
        }
    }

    fn potential(&self, s: f64) -> f64 {
        0.5 * (s * s + self.core_radius * self.core_radius).ln()
    }

    /// Worst-case phase change between adjacent lens-plane samples.
    fn check_resolution(&self, u_max: f64) -> Result<()> {
        let w = self.wave_parameter();
        let du = self.plane.step;
        let reach = self
            .theta_grid
            .iter()
            .map(|t| u_max + t.abs())
            .fold(u_max, f64::max);
        let step = w * (du * reach + 0.5 * du * du + du / (2.0 * self.core_radius));
        if step > PI {
            return Err(Error::GridResolution(format!(
                "phase changes by up to {step:.3} rad between lens-plane samples (limit π)"
            )));
        }
        Ok(())
    }
}

/// Evenly spaced points from a to b inclusive.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n)
            .map(|i| {
                if i == n - 1 {
                    b
                } else {
                    a + (b - a) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

/// Kirchhoff integral with a precomputed lens-plane factor b(u) and the
/// analytic free-space term `base`.
struct Kernel {
    u: Vec<f64>,
    /// g(u)·b(u)·du
    weighted: Vec<Complex64>,
    base: Complex64,
    w: f64,
}

impl Kernel {
    fn new(scene: &LensingScene, base: Complex64, lens: impl Fn(f64) -> Complex64) -> Result<Self> {
        scene.validate()?;
        let (u, g) = scene.plane.samples();
        scene.check_resolution(*u.last().unwrap())?;
        let du = scene.plane.step;
        let weighted = u.iter().zip(&g).map(|(&x, &gx)| lens(x) * (gx * du)).collect();
        Ok(Kernel {
            u,
            weighted,
            base,
            w: scene.wave_parameter(),
        })
    }

    fn amplitude(&self, theta: f64) -> Complex64 {
        if self.w == 0.0 {
            return self.base;
        }
        let mut s = Complex64::new(0.0, 0.0);
        for (&u, b) in self.u.iter().zip(&self.weighted) {
            let d = u - theta;
            s += b * Complex64::from_polar(1.0, 0.5 * self.w * d * d);
        }
        // √(w/(2πi))
        let pref = Complex64::from_polar((self.w / (2.0 * PI)).sqrt(), -0.25 * PI);
        self.base + pref * s
    }

    fn profile(&self, theta: &[f64]) -> Vec<Complex64> {
        theta.par_iter().map(|&t| self.amplitude(t)).collect()
    }
}

/// α(θ) for the whole lens mass sitting at `lens_center_offset`.
pub fn amplitude(scene: &LensingScene, theta: f64, lens_center_offset: f64) -> Result<Complex64> {
    let w = scene.wave_parameter();
    let k = Kernel::new(scene, Complex64::from(1.0), |u| {
        Complex64::from_polar(1.0, -w * scene.potential(u - lens_center_offset)) - 1.0
    })?;
    Ok(k.amplitude(theta))
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntensityProfile {
    pub theta_grid: Vec<f64>,
    pub values: Vec<f64>,
}

/// |α|² for the lens potential smeared by |ψ|².
pub fn intensity_classical(scene: &LensingScene) -> Result<IntensityProfile> {
    let w = scene.wave_parameter();
    let weights = scene.psi.weights();
    let k = Kernel::new(scene, Complex64::from(1.0), |u| {
        let phi: f64 = weights.iter().map(|(x, p, _)| p * scene.potential(u - x)).sum();
        Complex64::from_polar(1.0, -w * phi) - 1.0
    })?;
    Ok(IntensityProfile {
        theta_grid: scene.theta_grid.clone(),
        values: k
            .profile(&scene.theta_grid)
            .iter()
            .map(|a| a.norm_sqr())
            .collect(),
    })
}

/// |Σᵢ cᵢ α(θ; xᵢ)|².
pub fn intensity_quantum(scene: &LensingScene) -> Result<IntensityProfile> {
    let w = scene.wave_parameter();
    let weights = scene.psi.weights();
    let base: Complex64 = weights.iter().map(|(_, _, c)| c).sum();
    let k = Kernel::new(scene, base, |u| {
        weights
            .iter()
            .map(|(x, _, c)| c * (Complex64::from_polar(1.0, -w * scene.potential(u - x)) - 1.0))
            .sum()
    })?;
    Ok(IntensityProfile {
        theta_grid: scene.theta_grid.clone(),
        values: k
            .profile(&scene.theta_grid)
            .iter()
            .map(|a| a.norm_sqr())
            .collect(),
    })
}

/// (max − min)/(max + min) over the central half of the profile.
pub fn fringe_contrast(profile: &IntensityProfile) -> Result<f64> {
    let n = profile.values.len();
    if n < MIN_PROFILE_POINTS {
        return Err(Error::InsufficientGrid(n));
    }
    let mid = &profile.values[n / 4..n - n / 4];
    let max = mid.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = mid.iter().copied().fold(f64::INFINITY, f64::min);
    if max + min == 0.0 {
        return Ok(0.0);
    }
    Ok((max - min) / (max + min))
}

/// `theta,I_cl,I_qg` rows.
pub fn profiles_to_csv(classical: &IntensityProfile, quantum: &IntensityProfile) -> Result<String> {
    if classical.theta_grid != quantum.theta_grid {
        return Err(Error::domain("profiles use different theta grids"));
    }
    let mut s = format!("{PROFILE_CSV_HEADER}\n");
    for ((t, a), b) in classical
        .theta_grid
        .iter()
        .zip(&classical.values)
        .zip(&quantum.values)
    {
        let _ = writeln!(s, "{t:e},{a:e},{b:e}");
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_scene(psi: LensWavefunction) -> LensingScene {
        LensingScene {
            psi,
            theta_grid: linspace(-3.0, 3.0, 61),
            plane: LensPlane {
                half_width: 12.0,
                step: 0.004,
                taper: 3.0,
            },
            ..LensingScene::default_coherence_scene()
        }
    }

    #[test]
    fn massless_lens_is_free_propagation() {
        let mut s = small_scene(LensWavefunction::point(0.0, 0.1).unwrap());
        s.lens_mass = 0.0;
        for t in [-2.0, 0.0, 1.3] {
            assert_eq!(amplitude(&s, t, 0.0).unwrap(), Complex64::from(1.0));
        }
        let p = intensity_quantum(&s).unwrap();
        assert!(p.values.iter().all(|&v| v == 1.0));
    }

    #[test]
    fn centred_lens_is_mirror_symmetric() {
        let s = small_scene(LensWavefunction::point(0.0, 0.1).unwrap());
        for t in [0.4, 1.7, 2.9] {
            let a = amplitude(&s, t, 0.0).unwrap();
            let b = amplitude(&s, -t, 0.0).unwrap();
            assert!((a - b).norm() < 1e-10 * a.norm());
        }
    }

    #[test]
    fn single_point_gives_identical_profiles() {
        let s = small_scene(LensWavefunction::point(0.7, 0.05).unwrap());
        let cl = intensity_classical(&s).unwrap();
        let qg = intensity_quantum(&s).unwrap();
        for (a, b) in cl.values.iter().zip(&qg.values) {
            assert!((a - b).abs() < 1e-10 * a.max(1e-300));
        }
    }

    #[test]
    fn global_phase_is_invisible() {
        let s = small_scene(LensingScene::default_coherence_scene().psi);
        let mut t = s.clone();
        t.psi = s.psi.with_global_phase(1.234);
        let a = intensity_quantum(&s).unwrap();
        let b = intensity_quantum(&t).unwrap();
        for (x, y) in a.values.iter().zip(&b.values) {
            assert!((x - y).abs() < 1e-12 * x);
        }
    }

    #[test]
    fn reflection_invariance() {
        let psi = LensWavefunction::branches(
            &[(-0.5, Complex64::new(0.6, 0.0)), (1.0, Complex64::new(0.0, 0.8))],
            0.05,
        )
        .unwrap();
        let s = small_scene(psi);
        let mut r = s.clone();
        r.psi = s.psi.reflected();
        r.theta_grid = s.theta_grid.iter().rev().map(|t| -t).collect();
        for f in [intensity_classical, intensity_quantum] {
            let a = f(&s).unwrap();
            let b = f(&r).unwrap();
            for (x, y) in a.values.iter().zip(b.values.iter().rev()) {
                assert!((x - y).abs() < 1e-9 * x, "{x} vs {y}");
            }
        }
    }

    #[test]
    fn symmetric_psi_gives_symmetric_classical_profile() {
        let s = small_scene(LensWavefunction::gaussian(0.0, 0.5, 0.05).unwrap());
        let p = intensity_classical(&s).unwrap();
        let n = p.values.len();
        for i in 0..n / 2 {
            let (a, b) = (p.values[i], p.values[n - 1 - i]);
            assert!((a - b).abs() < 1e-9 * a);
        }
    }

    #[test]
    fn contrast_definition() {
        let theta = linspace(-1.0, 1.0, 101);
        let flat = IntensityProfile {
            values: vec![2.5; theta.len()],
            theta_grid: theta.clone(),
        };
        assert_eq!(fringe_contrast(&flat).unwrap(), 0.0);
        let fringes = IntensityProfile {
            values: theta.iter().map(|t| (5.0 * PI * t).cos().powi(2)).collect(),
            theta_grid: theta,
        };
        assert!((fringe_contrast(&fringes).unwrap() - 1.0).abs() < 1e-12);
        let short = IntensityProfile {
            theta_grid: vec![0.0; 7],
            values: vec![1.0; 7],
        };
        assert_eq!(fringe_contrast(&short), Err(Error::InsufficientGrid(7)));
    }

    #[test]
    fn coarse_plane_is_rejected() {
        let mut s = small_scene(LensWavefunction::point(0.0, 0.1).unwrap());
        s.plane.step = 0.05;
        assert!(matches!(intensity_quantum(&s), Err(Error::GridResolution(_))));
    }

    #[test]
    fn invalid_scenes() {
        let mut s = small_scene(LensWavefunction::point(0.0, 0.1).unwrap());
        s.omega = 0.0;
        assert!(s.validate().is_err());
        let mut s = small_scene(LensWavefunction::point(0.0, 0.1).unwrap());
        s.distances = (1.0, -1.0);
        assert!(s.validate().is_err());
        assert!(LensWavefunction::branches(&[(0.013, Complex64::from(1.0))], 0.05).is_err());
        assert!(LensWavefunction::new(0.0, 0.1, vec![Complex64::from(0.0)]).is_err());
    }

    #[test]
    fn wavefunctions_are_normalized() {
        for psi in [
            LensWavefunction::gaussian(0.3, 1.2, 0.1).unwrap(),
            LensingScene::default_coherence_scene().psi,
        ] {
            let n: f64 = psi.amplitudes().iter().map(|z| z.norm_sqr()).sum::<f64>() * psi.dx();
            assert!((n - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn einstein_angle_scaling() {
        let mut s = LensingScene::default_coherence_scene();
        s.distances = (2.0, 2.0);
        let a = s.einstein_angle();
        s.lens_mass *= 4.0;
        assert!((s.einstein_angle() / a - 2.0).abs() < 1e-15);
        assert!((a - 1.0).abs() < 1e-15);
    }
}
