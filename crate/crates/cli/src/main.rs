// SPDX-License-Identifier: Apache-2.0

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod commands;
mod svg;

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Format, RunConfig};
use commands::Artifact;

const THREADS_ENV: &str = "PRIMORDIAL_QG_THREADS";

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numerical(String),
    Io(String),
}

impl CliError {
    pub fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Io(format!("{}: {e}", path.display()))
    }

    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<primordial_qg::Error> for CliError {
    fn from(e: primordial_qg::Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Usage(e.to_string())
        }
    }
}

fn init_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("{THREADS_ENV}: {e}")))
}

/// `dir/stem.ext` becomes `dir/stem_suffix.ext`.
fn companion(out: &Path, suffix: &str) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = match out.extension() {
        Some(ext) => format!("{stem}_{suffix}.{}", ext.to_string_lossy()),
        None => format!("{stem}_{suffix}"),
    };
    out.with_file_name(name)
}

fn emit(artifacts: &[Artifact], out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => {
            for a in artifacts {
                let p = match a.suffix {
                    Some(s) => companion(path, s),
                    None => path.to_path_buf(),
                };
                std::fs::write(&p, &a.body).map_err(|e| CliError::io(&p, e))?;
            }
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            for (i, a) in artifacts.iter().enumerate() {
                if i > 0 {
                    writeln!(stdout).map_err(|e| CliError::io(Path::new("<stdout>"), e))?;
                }
                stdout
                    .write_all(a.body.as_bytes())
                    .map_err(|e| CliError::io(Path::new("<stdout>"), e))?;
            }
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    init_threads()?;
    let cfg = RunConfig::resolve(cli)?;
    if cfg.format == Format::Svg && cfg.out.is_none() {
        eprintln!("note: writing SVG to standard output");
    }
    let outcome = commands::run(&cfg)?;
    emit(&outcome.artifacts, cfg.out.as_deref())?;
    for n in &outcome.notes {
        eprintln!("{}: {n}", cfg.command.name());
    }
    Ok(())
}

fn main() -> ExitCode {
    // clap exits with 2 on usage errors and 0 for --help/--version
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("primordial-qg: {e}");
            ExitCode::from(e.code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn companion_names() {
        assert_eq!(
            companion(Path::new("out/spec.csv"), "lines"),
            Path::new("out/spec_lines.csv")
        );
        assert_eq!(companion(Path::new("spec"), "lines"), Path::new("spec_lines"));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Usage(String::new()).code(), 2);
        assert_eq!(CliError::Numerical(String::new()).code(), 3);
        assert_eq!(CliError::Io(String::new()).code(), 4);
        let stab = primordial_qg::Error::Stability {
            product: 1.0,
            limit: 0.1,
        };
        assert_eq!(CliError::from(stab).code(), 3);
        assert_eq!(
            CliError::from(primordial_qg::Error::MissingInitialSpread).code(),
            2
        );
    }
}
