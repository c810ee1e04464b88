// SPDX-License-Identifier: Apache-2.0

use std::path::Path;
use std::process::{Command, Output};

use primordial_qg::gravatom::{energy_level, orbit_radius, orbit_velocity};
use primordial_qg::qstate::read_snapshot;
use primordial_qg::units::Mass;

const BIN: &str = env!("CARGO_BIN_EXE_primordial-qg");

fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("PRIMORDIAL_QG_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let o = run(args);
    assert!(
        o.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    String::from_utf8(o.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn fields(line: &str) -> Vec<f64> {
    line.split(',').map(|v| v.parse().unwrap()).collect()
}

#[test]
fn gamma_single_row() {
    let out = stdout(&["gamma", "--mass-kg", "1", "--temp-k", "2.7"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "mass_kg,temperature_K,gamma0_per_s,t001_s");
    assert_eq!(lines.len(), 2);
    let row = fields(lines[1]);
    assert!(row[2] > 0.0);
    // t_0.01 = −ln(0.99)/Γ₀
    assert!((row[3] * row[2] / -(0.99f64).ln() - 1.0).abs() < 1e-12);
}

#[test]
fn gamma_methods_agree() {
    let closed = stdout(&["gamma", "--mass-kg", "1", "--temp-k", "300"]);
    let quad = stdout(&[
        "gamma",
        "--mass-kg",
        "1",
        "--temp-k",
        "300",
        "--method",
        "quadrature",
    ]);
    let (a, b) = (
        fields(closed.lines().nth(1).unwrap()),
        fields(quad.lines().nth(1).unwrap()),
    );
    assert!((a[2] / b[2] - 1.0).abs() < 1e-8);
}

#[test]
fn invalid_input_is_usage_error() {
    let o = run(&["gamma", "--mass-kg", "-1", "--temp-k", "2.7"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--mass-kg"));
    assert_eq!(code(&["gamma", "--temp-k", "2.7"]), 2);
    assert_eq!(code(&["gamma", "--mass-kg", "1", "--temp-k", "0"]), 2);
    assert_eq!(
        code(&["gamma", "--mass-kg", "1", "--temp-k", "3", "--format", "svg"]),
        2
    );
    assert_eq!(
        code(&[
            "gamma",
            "--mass-kg",
            "1",
            "--temp-k",
            "3",
            "--method",
            "quadrature",
            "--bath",
            "fermion"
        ]),
        2
    );
    assert_eq!(
        code(&["spread", "--mass-kg", "1", "--mass-gev", "1", "--time-gyr", "1"]),
        2
    );
    assert_eq!(code(&["witness", "--correlation", "1"]), 2);
    assert_eq!(code(&["nonsense"]), 2);
}

#[test]
fn stability_violation_is_numerical_failure() {
    assert_eq!(code(&["evolve", "--dt-planck", "5", "--steps", "2"]), 3);
}

#[test]
fn unwritable_output_is_io_failure() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("missing").join("g.csv");
    assert_eq!(
        code(&["gamma", "--mass-kg", "1", "--temp-k", "3", "--out", p(&out)]),
        4
    );
    assert_eq!(code(&["gamma", "--config", p(&dir.path().join("none.toml"))]), 4);
}

#[test]
fn spectrum_writes_levels_and_lines() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("spec.csv");
    stdout(&["spectrum", "--mass-gev", "1e11", "--nmax", "5", "--out", p(&out)]);
    let levels = std::fs::read_to_string(&out).unwrap();
    let lines = std::fs::read_to_string(dir.path().join("spec_lines.csv")).unwrap();
    assert_eq!(levels.lines().next(), Some("n,E_J,r_m,v_mps"));
    assert_eq!(levels.lines().count(), 6);
    assert_eq!(lines.lines().next(), Some("m,n,omega_rad_per_s"));
    assert_eq!(lines.lines().count(), 11);

    let m = Mass::from_gev(1e11);
    let row = fields(levels.lines().nth(1).unwrap());
    assert_eq!(row[0], 1.0);
    assert_eq!(row[1], energy_level(m, 1).unwrap());
    assert_eq!(row[2], orbit_radius(m, 1).unwrap());
    assert_eq!(row[3], orbit_velocity(m, 1).unwrap());

    let hz = stdout(&[
        "spectrum",
        "--mass-gev",
        "1e11",
        "--nmax",
        "3",
        "--frequency-unit",
        "cycles",
    ]);
    assert!(hz.contains("m,n,nu_Hz\n"));
}

#[test]
fn spread_defaults_to_optimal_start() {
    let out = stdout(&["spread", "--mass-gev", "1e11", "--time-gyr", "14"]);
    let row = fields(out.lines().nth(1).unwrap());
    assert!((row[3] - 0.72).abs() / 0.72 < 0.02);
    assert!((row[3] / row[2] - 2f64.sqrt()).abs() < 1e-12);
    let fixed = stdout(&[
        "spread",
        "--mass-gev",
        "1e11",
        "--time-gyr",
        "14",
        "--s0-m",
        "0.1",
    ]);
    assert!(fields(fixed.lines().nth(1).unwrap())[3] > row[3]);
}

#[test]
fn sweep_csv_and_svg() {
    let csv = stdout(&["sweep", "--mass-kg", "1", "--points", "7"]);
    assert_eq!(csv.lines().next(), Some("temperature_K,gamma0_per_s,t001_s"));
    assert_eq!(csv.lines().count(), 8);
    let svg = stdout(&["sweep", "--mass-kg", "1", "--points", "7", "--format", "svg"]);
    assert!(svg.starts_with("<?xml") && svg.contains("<svg") && svg.trim_end().ends_with("</svg>"));
    assert_eq!(svg.matches("<polyline").count(), 2);
}

#[test]
fn config_merges_under_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "[gamma]\nmass-kg = 10.0\ntemp-k = 2.7\n").unwrap();
    let from_file = stdout(&["gamma", "--config", p(&cfg)]);
    assert!(from_file.lines().nth(1).unwrap().starts_with("1e1,2.7e0,"));
    let overridden = stdout(&["gamma", "--config", p(&cfg), "--mass-kg", "1"]);
    assert_eq!(
        overridden,
        stdout(&["gamma", "--mass-kg", "1", "--temp-k", "2.7"])
    );

    std::fs::write(&cfg, "[gamma]\nmass = 1.0\n").unwrap();
    assert_eq!(code(&["gamma", "--config", p(&cfg)]), 2);
}

#[test]
fn identical_invocations_give_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let files: Vec<_> = (0..2)
        .map(|i| {
            let out = dir.path().join(format!("evolve{i}.csv"));
            let dump = dir.path().join(format!("rho{i}.csv"));
            stdout(&[
                "evolve",
                "--rank",
                "3",
                "--seed",
                "11",
                "--n",
                "16",
                "--steps",
                "40",
                "--out",
                p(&out),
                "--dump",
                p(&dump),
            ]);
            (std::fs::read(out).unwrap(), std::fs::read(dump).unwrap())
        })
        .collect();
    assert_eq!(files[0], files[1]);

    let args = ["lensing", "--points", "41", "--format", "svg"];
    assert_eq!(stdout(&args), stdout(&args));
    let threads = Command::new(BIN)
        .args(args)
        .env("PRIMORDIAL_QG_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(threads.stdout).unwrap(), stdout(&args));

    assert_ne!(
        stdout(&["witness", "--kind", "random", "--seed", "1"]),
        stdout(&["witness", "--kind", "random", "--seed", "2"])
    );
}

#[test]
fn bad_thread_count_is_usage_error() {
    let o = Command::new(BIN)
        .args(["witness"])
        .env("PRIMORDIAL_QG_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn evolve_dump_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("rho.csv");
    let traj = stdout(&[
        "evolve",
        "--n",
        "32",
        "--dk-planck",
        "0.2",
        "--sigma-k-planck",
        "0.8",
        "--steps",
        "30",
        "--record-every",
        "5",
        "--dump",
        p(&dump),
    ]);
    assert_eq!(traj.lines().next(), Some("t_planck,purity"));
    let csv = std::fs::read_to_string(&dump).unwrap();
    let header = std::fs::read_to_string(dir.path().join("rho.csv.header")).unwrap();
    let rho = read_snapshot(&csv, &header).unwrap();
    let last = fields(traj.lines().last().unwrap());
    assert!((rho.purity() - last[1]).abs() < 1e-12);
    let purities: Vec<f64> = traj.lines().skip(1).map(|l| fields(l)[1]).collect();
    assert!(purities.windows(2).all(|w| w[1] <= w[0] + 1e-15));
}

#[test]
fn lensing_profiles() {
    let out = stdout(&["lensing", "--points", "81"]);
    assert_eq!(out.lines().next(), Some("theta,I_cl,I_qg"));
    assert_eq!(out.lines().count(), 82);
    let single = stdout(&["lensing", "--points", "41", "--branches", "0"]);
    for l in single.lines().skip(1) {
        let r = fields(l);
        assert!((r[1] - r[2]).abs() < 1e-10);
    }
    stdout(&[
        "lensing",
        "--points",
        "41",
        "--branches",
        "-1.5,1.5",
        "--branch-width",
        "0.2",
    ]);
}

#[test]
fn witness_kinds() {
    let product = fields(
        stdout(&["witness", "--kind", "product"])
            .lines()
            .nth(1)
            .unwrap()
            .split_once(',')
            .unwrap()
            .1,
    );
    assert!((product[2] - 1.0).abs() < 1e-8);
    let corr = fields(
        stdout(&["witness"])
            .lines()
            .nth(1)
            .unwrap()
            .split_once(',')
            .unwrap()
            .1,
    );
    assert!(corr[2] > 0.0 && corr[2] < 1.0);
}

#[test]
fn help_lists_units() {
    for (sub, flags) in [
        ("gamma", &["--mass-kg", "--temp-k"][..]),
        ("sweep", &["--mass-kg", "--tmin-k", "--tmax-k"]),
        ("evolve", &["--mass-planck", "--dt-planck", "--dump"]),
        ("spread", &["--mass-gev", "--time-gyr", "--s0-m"]),
        ("spectrum", &["--mass-gev", "--nmax"]),
        ("lensing", &["--omega-planck", "--branches"]),
        ("witness", &["--kind", "--correlation"]),
    ] {
        let help = stdout(&[sub, "--help"]);
        for f in flags {
            assert!(help.contains(f), "{sub} --help lacks {f}");
        }
        assert!(help.contains("--out") && help.contains("--seed"));
    }
    let gamma = stdout(&["gamma", "--help"]);
    assert!(gamma.contains("kg") && gamma.contains(", K"));
}
