// SPDX-License-Identifier: Apache-2.0

//! Small-q expansion of Λ(q).
//!
//! The expansion ½q² Σ_{i≠j} λᵢλⱼ |⟨ψᵢ|Z|ψⱼ⟩|² drops the diagonal
//! variance terms, so it vanishes on every pure state even though Λ(q) does
//! not. Both values are reported side by side and neither is corrected.

use super::{lambda_of_q, position_operator, DensityMatrixGrid};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmallQComparison {
    pub q: f64,
    /// ½q² Σ_{i≠j} λᵢλⱼ |⟨ψᵢ|Z|ψⱼ⟩|², evaluated as written.
    pub expansion: f64,
    /// ½q²·Λ″(0) with Λ″(0) from a central second difference of Λ at ±dk.
    pub direct: f64,
    /// ½q²⟨x²⟩_ρ.
    pub second_moment_bound: f64,
}

pub fn lambda_small_q_paper(rho: &DensityMatrixGrid, q: f64) -> Result<SmallQComparison> {
    let z = position_operator(rho.grid());
    let eig = rho.eigen();
    let v = &eig.eigenvectors;
    let zv = v.adjoint() * &z * v;
    let lam = &eig.eigenvalues;
    let n = lam.len();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += lam[i] * lam[j] * zv[(i, j)].norm_sqr();
            }
        }
    }
    let h = rho.dk();
    let curvature = (lambda_of_q(rho, h)? + lambda_of_q(rho, -h)?) / (h * h);
    Ok(SmallQComparison {
        q,
        expansion: 0.5 * q * q * sum,
        direct: 0.5 * q * q * curvature,
        second_moment_bound: 0.5 * q * q * rho.position_second_moment(),
    })
}
