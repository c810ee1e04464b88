// SPDX-License-Identifier: Apache-2.0

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use primordial_qg::decoherence::{
    self, gamma0_fermion, gamma0_photon_closed, gamma0_photon_quadrature, SpreadBound, DEFAULT_PURITY_DROP,
};
use primordial_qg::environment::{CouplingKernel, ThermalEnvironment};
use primordial_qg::gravatom::{self, FrequencyUnit};
use primordial_qg::lensing::{self, LensWavefunction, LensingScene};
use primordial_qg::qstate::{
    measured_decay_rate, reduced_purity, write_snapshot, DensityMatrixGrid, MasterEquation, MomentumGrid,
    TwoParticleState,
};
use primordial_qg::units::{Mass, Temperature, SECONDS_PER_GYR};
use primordial_qg::wavepacket::{self, SpreadQuery};

use crate::args::*;
use crate::svg::{Plot, Series};
use crate::CliError;

const QUADRATURE_TOL: f64 = 1e-10;

/// One output file. `suffix` names a companion file next to `--out`.
pub struct Artifact {
    pub suffix: Option<&'static str>,
    pub body: String,
}

impl Artifact {
    fn main(body: String) -> Self {
        Artifact { suffix: None, body }
    }
}

pub struct Outcome {
    pub artifacts: Vec<Artifact>,
    /// Human-readable summary lines for standard error.
    pub notes: Vec<String>,
}

impl Outcome {
    fn single(body: String) -> Self {
        Outcome {
            artifacts: vec![Artifact::main(body)],
            notes: Vec::new(),
        }
    }
}

fn required<T>(v: Option<T>, flag: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("missing required --{flag}")))
}

fn positive(v: f64, flag: &str) -> Result<f64, CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Usage(format!(
            "--{flag} must be positive and finite, got {v}"
        )))
    }
}

fn at_least(v: usize, min: usize, flag: &str) -> Result<usize, CliError> {
    if v >= min {
        Ok(v)
    } else {
        Err(CliError::Usage(format!(
            "--{flag} must be at least {min}, got {v}"
        )))
    }
}

fn csv_only(format: Format, cmd: &str) -> Result<(), CliError> {
    match format {
        Format::Csv => Ok(()),
        Format::Svg => Err(CliError::Usage(format!("{cmd} has no plot; use --format csv"))),
    }
}

fn render(plot: Plot) -> Result<String, CliError> {
    plot.render().map_err(CliError::Numerical)
}

pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    match &cfg.command {
        Command::Gamma(a) => gamma(a, cfg.format),
        Command::Sweep(a) => sweep(a, cfg.format),
        Command::Evolve(a) => evolve(a, cfg.format, cfg.seed),
        Command::Spread(a) => spread(a, cfg.format),
        Command::Spectrum(a) => spectrum(a, cfg.format),
        Command::Lensing(a) => lensing(a, cfg.format),
        Command::Witness(a) => witness(a, cfg.format, cfg.seed),
    }
}

fn gamma(a: &GammaArgs, format: Format) -> Result<Outcome, CliError> {
    csv_only(format, "gamma")?;
    let mass_kg = positive(required(a.mass_kg, "mass-kg")?, "mass-kg")?;
    let temp_k = positive(required(a.temp_k, "temp-k")?, "temp-k")?;
    let (mass, temp) = (Mass::from_kg(mass_kg), Temperature::from_kelvin(temp_k));
    let summary = match a.bath.unwrap_or(Bath::Photon) {
        Bath::Photon => {
            if a.fermion_mass_gev.is_some() || a.spread_planck.is_some() {
                return Err(CliError::Usage(
                    "--fermion-mass-gev and --spread-planck need --bath fermion".into(),
                ));
            }
            match a.method.unwrap_or(GammaMethod::Closed) {
                GammaMethod::Closed => gamma0_photon_closed(mass, temp)?,
                GammaMethod::Quadrature => gamma0_photon_quadrature(mass, temp, QUADRATURE_TOL)?,
            }
        }
        Bath::Fermion => {
            if a.method.is_some() {
                return Err(CliError::Usage("--method applies to the photon bath only".into()));
            }
            let m = positive(
                required(a.fermion_mass_gev, "fermion-mass-gev")?,
                "fermion-mass-gev",
            )?;
            let d = positive(required(a.spread_planck, "spread-planck")?, "spread-planck")?;
            gamma0_fermion(
                mass,
                Mass::from_gev(m),
                temp,
                SpreadBound::new(d)?,
                QUADRATURE_TOL,
            )?
        }
    };
    let t001 = decoherence::decoherence_time(summary.gamma0_si, DEFAULT_PURITY_DROP)?;
    Ok(Outcome::single(format!(
        "mass_kg,temperature_K,gamma0_per_s,t001_s\n{mass_kg:e},{temp_k:e},{:e},{t001:e}\n",
        summary.gamma0_si
    )))
}

fn sweep(a: &SweepArgs, format: Format) -> Result<Outcome, CliError> {
    let mass_kg = positive(required(a.mass_kg, "mass-kg")?, "mass-kg")?;
    let lo = positive(a.tmin_k.unwrap_or(2.7), "tmin-k")?;
    let hi = positive(a.tmax_k.unwrap_or(3000.0), "tmax-k")?;
    if hi <= lo {
        return Err(CliError::Usage(format!(
            "--tmax-k ({hi}) must exceed --tmin-k ({lo})"
        )));
    }
    let points = at_least(a.points.unwrap_or(50), 2, "points")?;
    let rows = decoherence::figure1_sweep(Mass::from_kg(mass_kg), lo, hi, points)?;
    let body = match format {
        Format::Csv => decoherence::sweep_to_csv(&rows),
        Format::Svg => {
            let t: Vec<f64> = rows.iter().map(|r| r.temperature_k).collect();
            render(Plot {
                title: format!("t_0.01 for M = {mass_kg:e} kg"),
                x_label: "T (K)".into(),
                y_label: "t (s)".into(),
                log_x: true,
                log_y: true,
                series: vec![
                    Series {
                        label: "t_0.01".into(),
                        x: t.clone(),
                        y: rows.iter().map(|r| r.t001_s).collect(),
                    },
                    Series {
                        label: "age of universe".into(),
                        y: vec![primordial_qg::units::AGE_OF_UNIVERSE_S; t.len()],
                        x: t,
                    },
                ],
            })?
        }
    };
    Ok(Outcome::single(body))
}

fn evolve(a: &EvolveArgs, format: Format, seed: u64) -> Result<Outcome, CliError> {
    let mass = positive(a.mass_planck.unwrap_or(1.0), "mass-planck")?;
    let beta = positive(a.beta_planck.unwrap_or(1.0), "beta-planck")?;
    let n = at_least(a.n.unwrap_or(64), 4, "n")?;
    let dk = positive(a.dk_planck.unwrap_or(0.1), "dk-planck")?;
    let k0 = a.k0_planck.unwrap_or(0.0);
    if !k0.is_finite() {
        return Err(CliError::Usage("--k0-planck must be finite".into()));
    }
    let dt = positive(a.dt_planck.unwrap_or(0.05), "dt-planck")?;
    let steps = at_least(a.steps.unwrap_or(500), 1, "steps")?;
    let every = at_least(a.record_every.unwrap_or(10), 1, "record-every")?;

    let grid = MomentumGrid::centered(n, k0, dk)?;
    let rho = match a.rank.unwrap_or(0) {
        0 => {
            let sigma = positive(a.sigma_k_planck.unwrap_or(0.5), "sigma-k-planck")?;
            DensityMatrixGrid::gaussian(grid, k0, sigma)?
        }
        r => {
            if a.sigma_k_planck.is_some() {
                return Err(CliError::Usage(
                    "--sigma-k-planck applies only with --rank 0".into(),
                ));
            }
            DensityMatrixGrid::random(grid, r, &mut ChaCha8Rng::seed_from_u64(seed))?
        }
    };
    let env = ThermalEnvironment::photon(Temperature::from_beta(beta))?;
    let kernel = CouplingKernel::newtonian(Mass::from_planck(mass))?;
    let eq = MasterEquation::new(grid, &env, &kernel);
    let (end, traj) = eq.evolve(&rho, dt, steps, every)?;

    let mut notes = vec![format!(
        "discrete bound Gamma0 = {:e} per Planck time",
        eq.discrete_bound()
    )];
    if let Ok(rate) = measured_decay_rate(&traj) {
        notes.push(format!("measured decay rate = {rate:e} per Planck time"));
    }
    if let Some(path) = &a.dump {
        let snap = write_snapshot(&end);
        std::fs::write(path, snap.csv).map_err(|e| CliError::io(path, e))?;
        let header = sidecar(path);
        std::fs::write(&header, snap.header).map_err(|e| CliError::io(&header, e))?;
        notes.push(format!("snapshot written to {}", path.display()));
    }
    let body = match format {
        Format::Csv => {
            let mut s = String::from("t_planck,purity\n");
            for (t, p) in traj.times.iter().zip(&traj.purities) {
                let _ = writeln!(s, "{t:e},{p:e}");
            }
            s
        }
        Format::Svg => render(Plot {
            title: format!("purity, M = {mass} m_P, beta = {beta}"),
            x_label: "t (Planck times)".into(),
            y_label: "tr rho^2".into(),
            log_x: false,
            log_y: false,
            series: vec![Series {
                label: "tr rho^2".into(),
                x: traj.times.clone(),
                y: traj.purities.clone(),
            }],
        })?,
    };
    Ok(Outcome {
        artifacts: vec![Artifact::main(body)],
        notes,
    })
}

fn sidecar(path: &Path) -> std::path::PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".header");
    s.into()
}

fn spread(a: &SpreadArgs, format: Format) -> Result<Outcome, CliError> {
    csv_only(format, "spread")?;
    let mass_kg = match (a.mass_kg, a.mass_gev) {
        (Some(kg), None) => positive(kg, "mass-kg")?,
        (None, Some(gev)) => Mass::from_gev(positive(gev, "mass-gev")?).kg(),
        (Some(_), Some(_)) => {
            return Err(CliError::Usage(
                "give only one of --mass-kg and --mass-gev".into(),
            ))
        }
        (None, None) => return Err(CliError::Usage("missing required --mass-kg or --mass-gev".into())),
    };
    let t = positive(required(a.time_gyr, "time-gyr")?, "time-gyr")? * SECONDS_PER_GYR;
    let (s0, s) = match a.s0_m {
        Some(s0) => {
            let s0 = positive(s0, "s0-m")?;
            (
                s0,
                wavepacket::spread_at(&SpreadQuery::new(mass_kg, Some(s0), t)?)?,
            )
        }
        None => (
            wavepacket::optimal_initial_spread(mass_kg, t)?,
            wavepacket::minimal_spread(mass_kg, t)?,
        ),
    };
    Ok(Outcome::single(format!(
        "mass_kg,time_s,s0_m,s_m\n{mass_kg:e},{t:e},{s0:e},{s:e}\n"
    )))
}

fn spectrum(a: &SpectrumArgs, format: Format) -> Result<Outcome, CliError> {
    csv_only(format, "spectrum")?;
    let m = positive(required(a.mass_gev, "mass-gev")?, "mass-gev")?;
    let n_max = a.nmax.unwrap_or(5);
    if n_max < 2 {
        return Err(CliError::Usage(format!("--nmax must be at least 2, got {n_max}")));
    }
    let unit = match a.frequency_unit.unwrap_or(FrequencyArg::Angular) {
        FrequencyArg::Angular => FrequencyUnit::Angular,
        FrequencyArg::Cycles => FrequencyUnit::Cycles,
    };
    let spec = gravatom::spectrum(Mass::from_gev(m), n_max, unit)?;
    Ok(Outcome {
        artifacts: vec![
            Artifact::main(spec.levels_csv()),
            Artifact {
                suffix: Some("lines"),
                body: spec.lines_csv(),
            },
        ],
        notes: Vec::new(),
    })
}

/// ψ = Σⱼ cⱼ gⱼ with equal real weights, gⱼ a Gaussian (or a point) at xⱼ.
fn branch_wavefunction(centres: &[f64], width: f64, dx: f64) -> Result<LensWavefunction, CliError> {
    let c = Complex64::from(1.0 / (centres.len() as f64).sqrt());
    if width == 0.0 {
        let b: Vec<(f64, Complex64)> = centres.iter().map(|&x| (x, c)).collect();
        return Ok(LensWavefunction::branches(&b, dx)?);
    }
    let reach = 6.0 * width;
    let lo = centres.iter().copied().fold(f64::INFINITY, f64::min) - reach;
    let hi = centres.iter().copied().fold(f64::NEG_INFINITY, f64::max) + reach;
    let i0 = (lo / dx).floor() as i64;
    let i1 = (hi / dx).ceil() as i64;
    let amps = (i0..=i1)
        .map(|i| {
            let u = i as f64 * dx;
            centres
                .iter()
                .map(|&x| c * (-(u - x).powi(2) / (4.0 * width * width)).exp())
                .sum()
        })
        .collect();
    Ok(LensWavefunction::new(i0 as f64 * dx, dx, amps)?)
}

fn lensing(a: &LensingArgs, format: Format) -> Result<Outcome, CliError> {
    let mut scene = LensingScene::default_coherence_scene();
    scene.lens_mass = positive(a.lens_mass_planck.unwrap_or(scene.lens_mass), "lens-mass-planck")?;
    scene.omega = positive(a.omega_planck.unwrap_or(scene.omega), "omega-planck")?;
    scene.core_radius = positive(a.core_radius.unwrap_or(scene.core_radius), "core-radius")?;
    let dx = positive(a.dx.unwrap_or(0.05), "dx")?;
    let width = a.branch_width.unwrap_or(0.0);
    if !(width >= 0.0 && width.is_finite()) {
        return Err(CliError::Usage(format!(
            "--branch-width must be >= 0, got {width}"
        )));
    }
    let centres = a.branches.clone().unwrap_or_else(|| vec![-1.0, 1.0]);
    if centres.is_empty() || centres.iter().any(|x| !x.is_finite()) {
        return Err(CliError::Usage("--branches needs finite positions".into()));
    }
    scene.psi = branch_wavefunction(&centres, width, dx)?;
    let lo = a.theta_min.unwrap_or(-8.0);
    let hi = a.theta_max.unwrap_or(8.0);
    if !(lo.is_finite() && hi.is_finite() && hi > lo) {
        return Err(CliError::Usage(format!(
            "need --theta-min < --theta-max, got {lo}, {hi}"
        )));
    }
    let points = at_least(a.points.unwrap_or(801), lensing::MIN_PROFILE_POINTS, "points")?;
    scene.theta_grid = lensing::linspace(lo, hi, points);
    scene.validate()?;

    let cl = lensing::intensity_classical(&scene)?;
    let qg = lensing::intensity_quantum(&scene)?;
    let notes = vec![format!(
        "fringe contrast: classical {:.6}, quantum {:.6}",
        lensing::fringe_contrast(&cl)?,
        lensing::fringe_contrast(&qg)?
    )];
    let body = match format {
        Format::Csv => lensing::profiles_to_csv(&cl, &qg)?,
        Format::Svg => render(Plot {
            title: format!("lens intensity, w = {}", scene.wave_parameter()),
            x_label: "theta (Einstein radii)".into(),
            y_label: "I".into(),
            log_x: false,
            log_y: false,
            series: vec![
                Series {
                    label: "I_cl".into(),
                    x: cl.theta_grid.clone(),
                    y: cl.values,
                },
                Series {
                    label: "I_qg".into(),
                    x: qg.theta_grid,
                    y: qg.values,
                },
            ],
        })?,
    };
    Ok(Outcome {
        artifacts: vec![Artifact::main(body)],
        notes,
    })
}

fn witness(a: &WitnessArgs, format: Format, seed: u64) -> Result<Outcome, CliError> {
    csv_only(format, "witness")?;
    let n = at_least(a.n.unwrap_or(32), 2, "n")?;
    let dk = positive(a.dk_planck.unwrap_or(0.5), "dk-planck")?;
    let sigma = positive(a.sigma_planck.unwrap_or(2.0), "sigma-planck")?;
    let r = a.correlation.unwrap_or(0.8);
    if !(r > -1.0 && r < 1.0) {
        return Err(CliError::Usage(format!(
            "--correlation must lie in (-1, 1), got {r}"
        )));
    }
    let grid = MomentumGrid::centered(n, 0.0, dk)?;
    let kind = a.kind.unwrap_or(WitnessKind::Correlated);
    let state = match kind {
        WitnessKind::Product => {
            let g: Vec<Complex64> = grid
                .k_values()
                .iter()
                .map(|k| Complex64::from((-k * k / (4.0 * sigma * sigma)).exp()))
                .collect();
            TwoParticleState::product(grid, &g, &g)?
        }
        WitnessKind::Correlated => TwoParticleState::correlated_gaussian(grid, sigma, r)?,
        WitnessKind::Random => TwoParticleState::random(grid, &mut ChaCha8Rng::seed_from_u64(seed))?,
    };
    let name = match kind {
        WitnessKind::Product => "product",
        WitnessKind::Correlated => "correlated",
        WitnessKind::Random => "random",
    };
    Ok(Outcome::single(format!(
        "kind,n,dk,reduced_purity\n{name},{n},{dk:e},{:e}\n",
        reduced_purity(&state)
    )))
}
