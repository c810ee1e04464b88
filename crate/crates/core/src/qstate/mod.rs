// SPDX-License-Identifier: Apache-2.0

//! One-particle reduced density matrix on a periodic 1-D momentum grid.
//!
//! `rho` holds the continuum matrix element ρ(k, k′), so that Σᵢ ρᵢᵢ·dk = 1
//! and tr ρ² = Σᵢⱼ ρᵢⱼ ρⱼᵢ·dk². Momentum shifts wrap around the grid, which
//! makes the displacement a unitary conjugation.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::decoherence::SpreadBound;
use crate::error::{Error, Result};

mod master;
mod small_q;
mod snapshot;
mod witness;

pub use master::{evolve_step, measured_decay_rate, MasterEquation, Trajectory, STABILITY_LIMIT};
pub use small_q::{lambda_small_q_paper, SmallQComparison};
pub use snapshot::{read_snapshot, write_snapshot, Snapshot, SNAPSHOT_CSV_HEADER};
pub use witness::{reduced_purity, TwoParticleState};

pub(crate) const HERMITIAN_TOL: f64 = 1e-12;
pub(crate) const TRACE_TOL: f64 = 1e-10;
pub(crate) const PSD_TOL: f64 = 1e-10;

/// Uniform momentum grid k_i = k_min + i·dk, i = 0..N, treated as periodic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumGrid {
    n: usize,
    k_min: f64,
    dk: f64,
}

impl MomentumGrid {
    pub fn new(n: usize, k_min: f64, dk: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::GridResolution(format!(
                "grid needs at least 2 points, got {n}"
            )));
        }
        if !(dk > 0.0 && dk.is_finite()) || !k_min.is_finite() {
            return Err(Error::GridResolution(format!(
                "invalid grid origin {k_min} or spacing {dk}"
            )));
        }
        Ok(MomentumGrid { n, k_min, dk })
    }

    /// Grid of N points centred on `k0`: k_i = k0 + (i − N/2)·dk.
    pub fn centered(n: usize, k0: f64, dk: f64) -> Result<Self> {
        Self::new(n, k0 - (n / 2) as f64 * dk, dk)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dk(&self) -> f64 {
        self.dk
    }

    pub fn k_min(&self) -> f64 {
        self.k_min
    }

    /// Centre of the grid, k_{N/2}.
    pub fn k0(&self) -> f64 {
        self.k(self.n / 2)
    }

    pub fn k(&self, i: usize) -> f64 {
        self.k_min + i as f64 * self.dk
    }

    pub fn k_values(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.k(i)).collect()
    }

    pub fn span(&self) -> f64 {
        self.n as f64 * self.dk
    }

    /// Position eigenvalues conjugate to the grid, x_n = 2πn/(N·dk) with
    /// n = −N/2 .. N/2 − 1 (ceil/floor for odd N).
    pub fn positions(&self) -> Vec<f64> {
        let n = self.n as i64;
        let lo = -(n / 2);
        (0..n)
            .map(|i| 2.0 * PI * (lo + i) as f64 / (n as f64 * self.dk))
            .collect()
    }

    /// Integer number of grid steps in `q`, or `NonCommensurateShift`.
    pub fn shift_index(&self, q: f64) -> Result<i64> {
        let m = (q / self.dk).round();
        if !q.is_finite() || (q - m * self.dk).abs() > 1e-9 * self.dk.max(q.abs()) {
            return Err(Error::NonCommensurateShift {
                shift: q,
                dk: self.dk,
            });
        }
        Ok(m as i64)
    }

    /// Shifts q = m·dk for m = −N/2 .. N/2, i.e. every distinct periodic shift.
    pub fn commensurate_shifts(&self) -> Vec<f64> {
        let h = (self.n / 2) as i64;
        (-h..=h).map(|m| m as f64 * self.dk).collect()
    }
}

/// Hermitian, unit-trace, positive semidefinite ρ(k, k′) on a momentum grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrixGrid {
    grid: MomentumGrid,
    rho: DMatrix<Complex64>,
}

impl DensityMatrixGrid {
    /// Validates and wraps a continuum-normalized matrix.
    pub fn from_density(grid: MomentumGrid, rho: DMatrix<Complex64>) -> Result<Self> {
        let n = grid.len();
        if rho.nrows() != n || rho.ncols() != n {
            return Err(Error::domain(format!(
                "matrix is {}x{}, grid has {n} points",
                rho.nrows(),
                rho.ncols()
            )));
        }
        let state = DensityMatrixGrid { grid, rho };
        let scale = state.rho.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let herm = state.hermiticity_error();
        if herm > HERMITIAN_TOL * scale {
            return Err(Error::domain(format!("matrix is not Hermitian (error {herm:e})")));
        }
        let tr = state.trace();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::domain(format!("trace is {tr}, expected 1")));
        }
        let min = state.min_eigenvalue();
        if min < -PSD_TOL {
            return Err(Error::domain(format!("matrix has eigenvalue {min:e} < 0")));
        }
        Ok(state)
    }

    /// Wraps a matrix with ordinary unit trace Σᵢ Pᵢᵢ = 1.
    pub fn from_unit_trace(grid: MomentumGrid, p: DMatrix<Complex64>) -> Result<Self> {
        let dk = grid.dk();
        Self::from_density(grid, p / Complex64::from(dk))
    }

    /// |ψ⟩⟨ψ| for amplitudes ψ(kᵢ), normalized so that Σ|ψ|²·dk = 1.
    pub fn pure(grid: MomentumGrid, psi: &[Complex64]) -> Result<Self> {
        Self::mixture(grid, &[(1.0, psi.to_vec())])
    }

    /// Σ pᵢ |ψᵢ⟩⟨ψᵢ| with each ψᵢ normalized and weights rescaled to sum to 1.
    pub fn mixture(grid: MomentumGrid, terms: &[(f64, Vec<Complex64>)]) -> Result<Self> {
        let n = grid.len();
        let total: f64 = terms.iter().map(|t| t.0).sum();
        if terms.is_empty() || !(total > 0.0) || terms.iter().any(|t| t.0 < 0.0) {
            return Err(Error::domain(
                "mixture weights must be non-negative with positive sum",
            ));
        }
        let mut rho = DMatrix::<Complex64>::zeros(n, n);
        for (p, psi) in terms {
            if psi.len() != n {
                return Err(Error::domain(format!(
                    "state has {} amplitudes, grid has {n}",
                    psi.len()
                )));
            }
            let norm2: f64 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>() * grid.dk();
            if !(norm2 > 0.0 && norm2.is_finite()) {
                return Err(Error::domain("state has zero or non-finite norm"));
            }
            let v = nalgebra::DVector::from_column_slice(psi);
            rho += (&v * v.adjoint()) * Complex64::from(p / total / norm2);
        }
        Self::from_density(grid, rho)
    }

    /// Pure Gaussian ψ(k) ∝ exp(−(k − k₀)²/(4σ_k²)), position variance
    /// 1/(4σ_k²).
    pub fn gaussian(grid: MomentumGrid, k0: f64, sigma_k: f64) -> Result<Self> {
        if !(sigma_k > 3.0 * grid.dk() && sigma_k < grid.span() / 6.0) {
            return Err(Error::GridResolution(format!(
                "sigma_k = {sigma_k} must lie in (3 dk, span/6) = ({}, {})",
                3.0 * grid.dk(),
                grid.span() / 6.0
            )));
        }
        let psi: Vec<Complex64> = grid
            .k_values()
            .iter()
            .map(|&k| Complex64::from((-(k - k0).powi(2) / (4.0 * sigma_k * sigma_k)).exp()))
            .collect();
        Self::pure(grid, &psi)
    }

    /// Random state of the given rank from a complex Ginibre matrix.
    pub fn random<R: Rng + ?Sized>(grid: MomentumGrid, rank: usize, rng: &mut R) -> Result<Self> {
        let n = grid.len();
        if rank == 0 || rank > n {
            return Err(Error::domain(format!("rank must be in 1..={n}, got {rank}")));
        }
        let g = DMatrix::<Complex64>::from_fn(n, rank, |_, _| {
            Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        let mut p = &g * g.adjoint();
        let tr: f64 = p.diagonal().iter().map(|z| z.re).sum();
        p /= Complex64::from(tr);
        hermitize(&mut p);
        Self::from_unit_trace(grid, p)
    }

    pub fn grid(&self) -> &MomentumGrid {
        &self.grid
    }

    pub fn dk(&self) -> f64 {
        self.grid.dk()
    }

    /// Continuum matrix elements ρ(kᵢ, kⱼ).
    pub fn rho(&self) -> &DMatrix<Complex64> {
        &self.rho
    }

    /// ρ·dk, the same operator as an ordinary unit-trace matrix.
    pub fn unit_trace_matrix(&self) -> DMatrix<Complex64> {
        &self.rho * Complex64::from(self.dk())
    }

    /// Σᵢ ρᵢᵢ·dk.
    pub fn trace(&self) -> f64 {
        self.rho.diagonal().iter().map(|z| z.re).sum::<f64>() * self.dk()
    }

    /// max |ρᵢⱼ − conj ρⱼᵢ|.
    pub fn hermiticity_error(&self) -> f64 {
        let n = self.rho.nrows();
        let mut err: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                err = err.max((self.rho[(i, j)] - self.rho[(j, i)].conj()).norm());
            }
        }
        err
    }

    /// Eigenvalues of the unit-trace operator, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut p = self.unit_trace_matrix();
        hermitize(&mut p);
        let mut ev: Vec<f64> = p.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    /// Eigenpairs (λᵢ, ψᵢ) of the unit-trace operator.
    pub(crate) fn eigen(&self) -> SymmetricEigen<Complex64, nalgebra::Dyn> {
        let mut p = self.unit_trace_matrix();
        hermitize(&mut p);
        SymmetricEigen::new(p)
    }

    /// tr ρ² = Σᵢⱼ ρᵢⱼ ρⱼᵢ·dk².
    pub fn purity(&self) -> f64 {
        trace_product(&self.rho, &self.rho) * self.dk() * self.dk()
    }

    /// ρ̃_q(k, k′) = ρ(k − q, k′ − q) with periodic wraparound.
    pub fn displaced(&self, q: f64) -> Result<Self> {
        let m = self.grid.shift_index(q)?;
        let n = self.grid.len() as i64;
        let src = |i: usize| (i as i64 - m).rem_euclid(n) as usize;
        let rho = DMatrix::from_fn(self.grid.len(), self.grid.len(), |i, j| {
            self.rho[(src(i), src(j))]
        });
        Ok(DensityMatrixGrid { grid: self.grid, rho })
    }

    /// α(q) = Re tr(ρ ρ̃_q)·dk².
    pub fn overlap_with_displaced(&self, q: f64) -> Result<f64> {
        let d = self.displaced(q)?;
        Ok(trace_product(&self.rho, &d.rho) * self.dk() * self.dk())
    }

    /// ⟨x²⟩ = tr(ρ Z²) for the grid position operator.
    pub fn position_second_moment(&self) -> f64 {
        let z = position_operator(&self.grid);
        let z2 = &z * &z;
        trace_product(&self.unit_trace_matrix(), &z2)
    }

    /// Spread parameter D = ⟨x²⟩·tr ρ² used by the fermion rate bound.
    pub fn spread_bound(&self) -> Result<SpreadBound> {
        SpreadBound::new(self.position_second_moment() * self.purity())
    }
}

/// Λ(q) = tr ρ² − α(q).
pub fn lambda_of_q(rho: &DensityMatrixGrid, q: f64) -> Result<f64> {
    Ok(rho.purity() - rho.overlap_with_displaced(q)?)
}

/// Position operator Z = Σₙ xₙ |xₙ⟩⟨xₙ| in the momentum basis, with
/// ⟨kⱼ|xₙ⟩ = e^{−i kⱼ xₙ}/√N, so that e^{i q Z} is the periodic shift by q.
pub fn position_operator(grid: &MomentumGrid) -> DMatrix<Complex64> {
    let n = grid.len();
    let x = grid.positions();
    let lo = -((n / 2) as i64);
    DMatrix::from_fn(n, n, |j, jp| {
        let d = j as f64 - jp as f64;
        let mut s = Complex64::new(0.0, 0.0);
        for (i, &xn) in x.iter().enumerate() {
            let ph = -2.0 * PI * d * (lo + i as i64) as f64 / n as f64;
            s += Complex64::from_polar(xn, ph);
        }
        s / n as f64
    })
}

/// Re tr(AB).
pub(crate) fn trace_product(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            s += (a[(i, j)] * b[(j, i)]).re;
        }
    }
    s
}

pub(crate) fn hermitize(p: &mut DMatrix<Complex64>) {
    let n = p.nrows();
    for i in 0..n {
        p[(i, i)].im = 0.0;
        for j in i + 1..n {
            let avg = (p[(i, j)] + p[(j, i)].conj()) * 0.5;
            p[(i, j)] = avg;
            p[(j, i)] = avg.conj();
        }
    }
}
