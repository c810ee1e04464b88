// SPDX-License-Identifier: Apache-2.0

//! Two-particle pure states and the reduced purity tr ρ₁².

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{DensityMatrixGrid, MomentumGrid};
use crate::error::{Error, Result};

/// ψ(k₁, k₂) on a shared grid, Σ|ψ|²·dk² = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoParticleState {
    grid: MomentumGrid,
    psi: DMatrix<Complex64>,
}

impl TwoParticleState {
    /// Normalizes the amplitudes; rows index k₁, columns k₂.
    pub fn new(grid: MomentumGrid, psi: DMatrix<Complex64>) -> Result<Self> {
        let n = grid.len();
        if psi.nrows() != n || psi.ncols() != n {
            return Err(Error::domain(format!(
                "amplitudes are {}x{}, grid has {n} points",
                psi.nrows(),
                psi.ncols()
            )));
        }
        let norm2 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>() * grid.dk() * grid.dk();
        if !(norm2 > 0.0 && norm2.is_finite()) {
            return Err(Error::domain("state has zero or non-finite norm"));
        }
        Ok(TwoParticleState {
            grid,
            psi: psi / Complex64::from(norm2.sqrt()),
        })
    }

    /// ψ(k₁)φ(k₂).
    pub fn product(grid: MomentumGrid, psi: &[Complex64], phi: &[Complex64]) -> Result<Self> {
        let a = DVector::from_column_slice(psi);
        let b = DVector::from_column_slice(phi);
        Self::new(grid, &a * b.transpose())
    }

    /// Σᵢ √pᵢ aᵢ(k₁)bᵢ(k₂); the aᵢ and bᵢ should be orthonormal families.
    pub fn schmidt(grid: MomentumGrid, terms: &[(f64, Vec<Complex64>, Vec<Complex64>)]) -> Result<Self> {
        let n = grid.len();
        let mut psi = DMatrix::<Complex64>::zeros(n, n);
        for (p, a, b) in terms {
            if *p < 0.0 || a.len() != n || b.len() != n {
                return Err(Error::domain("invalid Schmidt term"));
            }
            let a = DVector::from_column_slice(a);
            let b = DVector::from_column_slice(b);
            psi += (&a * b.transpose()) * Complex64::from(p.sqrt());
        }
        Self::new(grid, psi)
    }

    /// Bivariate Gaussian |ψ|² with marginal width σ and correlation r.
    pub fn correlated_gaussian(grid: MomentumGrid, sigma: f64, r: f64) -> Result<Self> {
        if !(sigma > 0.0) || !(r.abs() < 1.0) {
            return Err(Error::domain(format!(
                "need sigma > 0 and |r| < 1, got {sigma}, {r}"
            )));
        }
        let k = grid.k_values();
        let k0 = grid.k0();
        let scale = 4.0 * sigma * sigma * (1.0 - r * r);
        let psi = DMatrix::from_fn(grid.len(), grid.len(), |i, j| {
            let (a, b) = (k[i] - k0, k[j] - k0);
            Complex64::from((-(a * a - 2.0 * r * a * b + b * b) / scale).exp())
        });
        Self::new(grid, psi)
    }

    /// Haar-like random pure state from i.i.d. complex Gaussians.
    pub fn random<R: Rng + ?Sized>(grid: MomentumGrid, rng: &mut R) -> Result<Self> {
        let n = grid.len();
        let psi = DMatrix::from_fn(n, n, |_, _| {
            Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        Self::new(grid, psi)
    }

    pub fn grid(&self) -> &MomentumGrid {
        &self.grid
    }

    pub fn amplitudes(&self) -> &DMatrix<Complex64> {
        &self.psi
    }

    /// ρ₁(k, k′) = Σ_{k₂} ψ(k, k₂) ψ*(k′, k₂)·dk.
    pub fn reduced_density(&self) -> Result<DensityMatrixGrid> {
        let rho = (&self.psi * self.psi.adjoint()) * Complex64::from(self.grid.dk());
        let mut rho = rho;
        super::hermitize(&mut rho);
        DensityMatrixGrid::from_density(self.grid, rho)
    }
}

/// tr ρ₁² = Σ σᵢ⁴ over the singular values of ψ·dk.
pub fn reduced_purity(state: &TwoParticleState) -> f64 {
    let a = &state.psi * Complex64::from(state.grid.dk());
    a.singular_values().iter().map(|s| s.powi(4)).sum()
}
