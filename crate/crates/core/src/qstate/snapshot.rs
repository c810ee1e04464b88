// SPDX-License-Identifier: Apache-2.0

//! Text snapshot of a density matrix: a CSV of `i,j,re,im` rows holding the
//! continuum elements ρ(kᵢ, kⱼ), plus a `key=value` header with N, dk and
//! the grid centre k0. Floats use the shortest round-trip form, so reading a
//! snapshot back reproduces the matrix bit for bit.

use std::fmt::Write;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{DensityMatrixGrid, MomentumGrid};
use crate::error::{Error, Result};

pub const SNAPSHOT_CSV_HEADER: &str = "i,j,re,im";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snapshot {
    pub csv: String,
    pub header: String,
}

pub fn write_snapshot(rho: &DensityMatrixGrid) -> Snapshot {
    let g = rho.grid();
    let n = g.len();
    let mut csv = String::with_capacity(n * n * 48);
    csv.push_str(SNAPSHOT_CSV_HEADER);
    csv.push('\n');
    for i in 0..n {
        for j in 0..n {
            let z = rho.rho()[(i, j)];
            let _ = writeln!(csv, "{i},{j},{:e},{:e}", z.re, z.im);
        }
    }
    let header = format!("N={n}\ndk={:e}\nk0={:e}\n", g.dk(), g.k0());
    Snapshot { csv, header }
}

pub fn read_snapshot(csv: &str, header: &str) -> Result<DensityMatrixGrid> {
    let (mut n, mut dk, mut k0) = (None, None, None);
    for line in header.lines().map(str::trim).filter(|l| !l.is_empty()) {
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::domain(format!("bad header line {line:?}")))?;
        match key.trim() {
            "N" => n = Some(parse::<usize>(value)?),
            "dk" => dk = Some(parse::<f64>(value)?),
            "k0" => k0 = Some(parse::<f64>(value)?),
            other => return Err(Error::domain(format!("unknown header key {other:?}"))),
        }
    }
    let (n, dk, k0) = match (n, dk, k0) {
        (Some(n), Some(dk), Some(k0)) => (n, dk, k0),
        _ => return Err(Error::domain("header needs N, dk and k0")),
    };
    let grid = MomentumGrid::centered(n, k0, dk)?;
    let mut rho = DMatrix::<Complex64>::zeros(n, n);
    let mut seen = vec![false; n * n];
    let mut lines = csv.lines();
    if lines.next().map(str::trim) != Some(SNAPSHOT_CSV_HEADER) {
        return Err(Error::domain(format!(
            "snapshot must start with {SNAPSHOT_CSV_HEADER:?}"
        )));
    }
    for line in lines.filter(|l| !l.trim().is_empty()) {
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 4 {
            return Err(Error::domain(format!("bad snapshot row {line:?}")));
        }
        let (i, j) = (parse::<usize>(f[0])?, parse::<usize>(f[1])?);
        if i >= n || j >= n {
            return Err(Error::domain(format!("index ({i}, {j}) outside {n}x{n}")));
        }
        rho[(i, j)] = Complex64::new(parse(f[2])?, parse(f[3])?);
        seen[i * n + j] = true;
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::domain("snapshot is missing matrix elements"));
    }
    DensityMatrixGrid::from_density(grid, rho)
}

fn parse<T: std::str::FromStr>(s: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| Error::domain(format!("cannot parse {s:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn round_trip_is_exact() {
        let g = MomentumGrid::centered(8, 0.3, 0.2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let r = DensityMatrixGrid::random(g, 3, &mut rng).unwrap();
        let s = write_snapshot(&r);
        assert!(s.header.contains("N=8"));
        assert_eq!(s.csv.lines().count(), 65);
        let back = read_snapshot(&s.csv, &s.header).unwrap();
        assert_eq!(back.rho(), r.rho());
        assert!((back.grid().k0() - g.k0()).abs() < 1e-15);
    }

    #[test]
    fn truncated_snapshot_is_rejected() {
        let g = MomentumGrid::centered(4, 0.0, 1.0).unwrap();
        let r =
            DensityMatrixGrid::gaussian(MomentumGrid::centered(64, 0.0, 0.25).unwrap(), 0.0, 1.0).unwrap();
        let s = write_snapshot(&r);
        let cut: String = s.csv.lines().take(10).map(|l| format!("{l}\n")).collect();
        assert!(read_snapshot(&cut, &s.header).is_err());
        assert!(read_snapshot(&s.csv, "N=64\n").is_err());
        let _ = g;
    }
}
