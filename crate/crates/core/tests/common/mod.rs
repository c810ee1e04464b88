// SPDX-License-Identifier: Apache-2.0

//! Independent reference computations shared by the integration tests.
//! None of these call into the code paths they check.

#![allow(dead_code, clippy::needless_range_loop)]

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Minimizes f on [a, b] by golden-section search; returns (x, f(x)).
pub fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, iters: usize) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..iters {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// s(t) = √((s₀⁴ + (ħt/m)²)/s₀²) written out directly.
pub fn spread_formula(hbar: f64, mass: f64, s0: f64, t: f64) -> f64 {
    let d = hbar * t / mass;
    ((s0.powi(4) + d * d) / (s0 * s0)).sqrt()
}

/// Λ″(0) = 2(tr P²Z² − tr PZPZ) for a unit-trace P.
pub fn lambda_curvature(p: &DMatrix<Complex64>, z: &DMatrix<Complex64>) -> f64 {
    let pz = p * z;
    let a = (p * p * z * z).trace().re;
    let b = (&pz * &pz).trace().re;
    2.0 * (a - b)
}

/// tr ρ₁² for ψ(k₁, k₂) by an explicit partial trace over k₂.
pub fn partial_trace_purity(psi: &DMatrix<Complex64>, dk: f64) -> f64 {
    let n = psi.nrows();
    let mut rho = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut s = Complex64::new(0.0, 0.0);
            for b in 0..psi.ncols() {
                s += psi[(i, b)] * psi[(j, b)].conj();
            }
            rho[i][j] = s * dk;
        }
    }
    let mut p = 0.0;
    for i in 0..n {
        for j in 0..n {
            p += (rho[i][j] * rho[j][i]).re;
        }
    }
    p * dk * dk
}

/// Time delay T(u) = ½(u − θ)² − ½ln((u − x)² + a²) and its derivatives.
pub struct LensDelay {
    pub theta: f64,
    pub x: f64,
    pub a: f64,
}

impl LensDelay {
    pub fn t(&self, u: f64) -> f64 {
        let s = u - self.x;
        0.5 * (u - self.theta).powi(2) - 0.5 * (s * s + self.a * self.a).ln()
    }

    pub fn dt(&self, u: f64) -> f64 {
        let s = u - self.x;
        (u - self.theta) - s / (s * s + self.a * self.a)
    }

    pub fn d2t(&self, u: f64) -> f64 {
        let s = u - self.x;
        let q = s * s + self.a * self.a;
        1.0 - (self.a * self.a - s * s) / (q * q)
    }

    /// All roots of T′ (images), by scanning and bisection.
    pub fn images(&self) -> Vec<f64> {
        let lo = self.theta.min(self.x) - 5.0;
        let hi = self.theta.max(self.x) + 5.0;
        let n = ((hi - lo) / 1e-3) as usize;
        let mut roots = Vec::new();
        let mut prev = self.dt(lo);
        for i in 1..=n {
            let u = lo + (hi - lo) * i as f64 / n as f64;
            let cur = self.dt(u);
            if cur == 0.0 {
                roots.push(u);
            } else if prev != 0.0 && prev.signum() != cur.signum() {
                let (mut a, mut b) = (u - (hi - lo) / n as f64, u);
                for _ in 0..100 {
                    let m = 0.5 * (a + b);
                    if self.dt(a).signum() == self.dt(m).signum() {
                        a = m;
                    } else {
                        b = m;
                    }
                }
                roots.push(0.5 * (a + b));
            }
            prev = cur;
        }
        roots
    }

    /// Geometric-optics amplitude Σ |T″|^{−1/2} e^{iwT}, with −π/2 for
    /// images at maxima of T.
    pub fn stationary_amplitude(&self, w: f64) -> Complex64 {
        self.images()
            .into_iter()
            .map(|u| {
                let h = self.d2t(u);
                let morse = if h < 0.0 { -0.5 * std::f64::consts::PI } else { 0.0 };
                Complex64::from_polar(h.abs().powf(-0.5), w * self.t(u) + morse)
            })
            .sum()
    }

    /// Delay at the image, for a lens with a single image.
    pub fn image_delay(&self) -> f64 {
        let im = self.images();
        assert_eq!(im.len(), 1, "expected a single image");
        self.t(im[0])
    }
}

/// Local maxima of a sampled profile, refined by a parabola through the
/// three samples around each maximum.
pub fn peaks(x: &[f64], y: &[f64]) -> Vec<f64> {
    let mut out = Vec::new();
    for i in 1..y.len() - 1 {
        if y[i] > y[i - 1] && y[i] >= y[i + 1] {
            let h = x[i + 1] - x[i];
            let den = y[i - 1] - 2.0 * y[i] + y[i + 1];
            let off = if den != 0.0 {
                0.5 * (y[i - 1] - y[i + 1]) / den
            } else {
                0.0
            };
            out.push(x[i] + off * h);
        }
    }
    out
}

/// Largest interval [lo, hi] ∋ c, within ±reach, on which f is strictly
/// monotone, located on a grid of spacing h.
pub fn monotone_interval(f: impl Fn(f64) -> f64, c: f64, reach: f64, h: f64) -> (f64, f64) {
    let dir = (f(c + h) - f(c - h)).signum();
    let walk = |sign: f64| {
        let mut x = c;
        while (x - c).abs() < reach {
            let next = x + sign * h;
            if ((f(next) - f(x)) * sign).signum() != dir {
                break;
            }
            x = next;
        }
        x
    };
    (walk(-1.0), walk(1.0))
}
