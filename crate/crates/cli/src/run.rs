//! Execution of a resolved [`RunConfig`]: solve, render, write, hash.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use deformed_spectra::bands::{detect_bands, GapThreshold};
use deformed_spectra::builders::energy_level;
use deformed_spectra::eigen::eigenvalues;
use deformed_spectra::output::{
    butterfly_points, format_value, write_butterfly_csv, write_energy_csv, write_spectrum_csv,
    write_svg_scatter, SvgStyle,
};
use deformed_spectra::params::reduce_angle;
use deformed_spectra::unitary::{conjugate_to_harper, fit_diagonal, verify_translation_relations};
use deformed_spectra::{
    butterfly_sweep, edge_state_scan, BandSet, BoundaryKind, EdgeScanConfig, EdgeStateReport,
    Omega, OperatorKind, Truncation,
};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::{Command, Format, RunConfig};
use crate::error::CliError;

/// Environment variable that overrides the configured thread count.
pub const THREADS_ENV: &str = "DEFORMED_SPECTRA_THREADS";

pub const MANIFEST_NAME: &str = "manifest.json";

/// One rendered output file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Artifact {
    pub name: String,
    pub bytes: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FileEntry {
    pub name: String,
    pub bytes: usize,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Manifest {
    pub command: &'static str,
    pub library_version: &'static str,
    pub cli_version: &'static str,
    pub config: RunConfig,
    pub threads: usize,
    pub wall_time_seconds: f64,
    pub files: Vec<FileEntry>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunSummary {
    pub files: Vec<PathBuf>,
    pub manifest_path: PathBuf,
    pub manifest: Manifest,
}

fn solver(command: Command) -> impl Fn(deformed_spectra::Error) -> CliError {
    move |e| match e {
        deformed_spectra::Error::InvalidParameter(_)
        | deformed_spectra::Error::InvalidTruncation(_) => {
            CliError::Usage(format!("{}: {e}", command.name()))
        }
        source => CliError::Solver {
            command: command.name(),
            source,
        },
    }
}

fn thread_count(configured: usize) -> Result<usize, CliError> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| {
            CliError::Usage(format!(
                "{THREADS_ENV} must be a non-negative integer, got {v:?}"
            ))
        }),
        Err(_) => Ok(configured),
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn io_error(path: &Path) -> impl Fn(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Resolve `config`, compute every requested artifact on a dedicated thread
/// pool, write the files and a manifest into the output directory.
pub fn run(config: RunConfig) -> Result<RunSummary, CliError> {
    let config = config.resolved()?;
    let threads = thread_count(config.threads)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {threads} threads: {e}")))?;
    let start = Instant::now();
    let artifacts = pool.install(|| render(&config))?;
    let threads = pool.current_num_threads();

    let dir = &config.output_dir;
    std::fs::create_dir_all(dir).map_err(io_error(dir))?;
    let mut files = Vec::with_capacity(artifacts.len());
    let mut entries = Vec::with_capacity(artifacts.len());
    for a in &artifacts {
        let path = dir.join(&a.name);
        std::fs::write(&path, &a.bytes).map_err(io_error(&path))?;
        entries.push(FileEntry {
            name: a.name.clone(),
            bytes: a.bytes.len(),
            sha256: sha256_hex(&a.bytes),
        });
        files.push(path);
    }
    let manifest = Manifest {
        command: config.command.name(),
        library_version: deformed_spectra::VERSION,
        cli_version: env!("CARGO_PKG_VERSION"),
        config: config.clone(),
        threads,
        wall_time_seconds: start.elapsed().as_secs_f64(),
        files: entries,
    };
    let manifest_path = dir.join(MANIFEST_NAME);
    let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    text.push('\n');
    std::fs::write(&manifest_path, text).map_err(io_error(&manifest_path))?;
    Ok(RunSummary {
        files,
        manifest_path,
        manifest,
    })
}

/// Compute the artifacts of `config` in memory, in a fixed format order.
pub fn render(config: &RunConfig) -> Result<Vec<Artifact>, CliError> {
    let out = Outputs {
        stem: config.command.stem(),
        formats: config.effective_formats(),
        artifacts: Vec::new(),
    };
    match config.command {
        Command::Spectrum => spectrum(config, out),
        Command::Butterfly => butterfly(config, out),
        Command::Bands => bands(config, out),
        Command::EdgeStates => edge_states(config, out),
        Command::VerifyMap => verify_map(config, out),
        Command::EnergyLevels => energy_levels(config, out),
    }
}

struct Outputs {
    stem: &'static str,
    formats: BTreeSet<Format>,
    artifacts: Vec<Artifact>,
}

impl Outputs {
    fn wants(&self, f: Format) -> bool {
        self.formats.contains(&f)
    }

    fn push(&mut self, f: Format, bytes: Vec<u8>) {
        self.artifacts.push(Artifact {
            name: format!("{}.{}", self.stem, f.extension()),
            bytes,
        });
    }

    fn push_json<T: Serialize>(&mut self, value: &T) {
        let mut bytes = serde_json::to_vec_pretty(value).expect("report serializes");
        bytes.push(b'\n');
        self.push(Format::Json, bytes);
    }

    fn push_with(
        &mut self,
        f: Format,
        write: impl FnOnce(&mut Vec<u8>) -> deformed_spectra::Result<()>,
    ) -> Result<(), CliError> {
        let mut bytes = Vec::new();
        write(&mut bytes).map_err(|e| CliError::Io {
            path: format!("{}.{}", self.stem, f.extension()),
            source: std::io::Error::other(e.to_string()),
        })?;
        self.push(f, bytes);
        Ok(())
    }
}

#[derive(Serialize)]
struct SpectrumReport<'a> {
    operator: OperatorKind,
    omega: Omega,
    n_max: usize,
    boundary: BoundaryKind,
    solver: &'a str,
    tolerance: f64,
    eigenvalues: &'a [f64],
}

fn spectrum(config: &RunConfig, mut out: Outputs) -> Result<Vec<Artifact>, CliError> {
    let err = solver(config.command);
    let omega = config.omega_spec.to_omega()?;
    let kind = config.operator_kind();
    let op = kind
        .build(omega, config.n_max(), config.boundary)
        .map_err(&err)?;
    let spec = eigenvalues(&op).map_err(&err)?;
    let values = spec.eigenvalues();
    if out.wants(Format::Csv) {
        out.push_with(Format::Csv, |b| write_spectrum_csv(values, b))?;
    }
    if out.wants(Format::Json) {
        out.push_json(&SpectrumReport {
            operator: kind,
            omega,
            n_max: config.n_max(),
            boundary: config.boundary,
            solver: spec.source_label(),
            tolerance: spec.tolerance(),
            eigenvalues: values,
        });
    }
    if out.wants(Format::Svg) {
        let points: Vec<(f64, f64)> = values.iter().map(|&e| (omega.over_pi(), e)).collect();
        out.push_with(Format::Svg, |b| {
            write_svg_scatter(&points, &SvgStyle::default(), b)
        })?;
    }
    Ok(out.artifacts)
}

fn butterfly(config: &RunConfig, mut out: Outputs) -> Result<Vec<Artifact>, CliError> {
    let err = solver(config.command);
    let trunc = Truncation::with_dimension(config.n_max()).map_err(&err)?;
    let result = butterfly_sweep(
        config.q_grid,
        config.operator_kind(),
        &trunc,
        config.boundary,
    )
    .map_err(&err)?;
    if out.wants(Format::Csv) {
        out.push_with(Format::Csv, |b| write_butterfly_csv(&result, b))?;
    }
    if out.wants(Format::Json) {
        out.push_json(&result);
    }
    if out.wants(Format::Svg) {
        let points = butterfly_points(&result);
        out.push_with(Format::Svg, |b| {
            write_svg_scatter(&points, &SvgStyle::default(), b)
        })?;
    }
    Ok(out.artifacts)
}

#[derive(Serialize)]
struct BandsReport<'a> {
    operator: OperatorKind,
    omega: Omega,
    n_max: usize,
    boundary: BoundaryKind,
    band_count: usize,
    total_bandwidth: f64,
    bands: &'a BandSet,
}

fn bands(config: &RunConfig, mut out: Outputs) -> Result<Vec<Artifact>, CliError> {
    let err = solver(config.command);
    let omega = config.omega_spec.to_omega()?;
    let kind = config.operator_kind();
    let op = kind
        .build(omega, config.n_max(), config.boundary)
        .map_err(&err)?;
    let spec = eigenvalues(&op).map_err(&err)?;
    let q_hint = omega.reduced().map(|(_, q)| q as u64);
    let set = detect_bands(&spec, GapThreshold::Auto, q_hint).map_err(&err)?;
    if out.wants(Format::Csv) {
        let mut s = String::from("kind,lo,hi,count\n");
        for b in &set.bands {
            let _ = writeln!(
                s,
                "band,{},{},{}",
                format_value(b.lo),
                format_value(b.hi),
                b.count
            );
        }
        for g in &set.in_gap {
            let v = format_value(g.value);
            let _ = writeln!(s, "in_gap,{v},{v},{}", g.multiplicity);
        }
        out.push(Format::Csv, s.into_bytes());
    }
    if out.wants(Format::Json) {
        out.push_json(&BandsReport {
            operator: kind,
            omega,
            n_max: config.n_max(),
            boundary: config.boundary,
            band_count: set.band_count(),
            total_bandwidth: set.total_bandwidth(),
            bands: &set,
        });
    }
    Ok(out.artifacts)
}

#[derive(Serialize)]
struct EdgeReport<'a> {
    suspect_count: usize,
    mean_suspect_displacement: Option<f64>,
    bulk_median_displacement: Option<f64>,
    report: &'a EdgeStateReport,
}

fn edge_states(config: &RunConfig, mut out: Outputs) -> Result<Vec<Artifact>, CliError> {
    let scan = EdgeScanConfig {
        operator: config.operator_kind(),
        n_max_a: config.n_max(),
        n_max_b: config.n_max_b(),
        q_grid: config.q_grid,
        ..EdgeScanConfig::default()
    };
    let report = edge_state_scan(&scan).map_err(solver(config.command))?;
    if out.wants(Format::Csv) {
        let mut s = String::from(
            "p,n_max,eigenvalue,resize_distance,bulk_drift,localization_weight,moved_under_periodic,periodic_displacement\n",
        );
        for e in &report.suspects {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{}",
                e.p,
                e.n_max,
                format_value(e.eigenvalue),
                format_value(e.resize_distance),
                format_value(e.bulk_drift),
                format_value(e.localization_weight),
                e.moved_under_periodic,
                format_value(e.periodic_displacement)
            );
        }
        out.push(Format::Csv, s.into_bytes());
    }
    if out.wants(Format::Json) {
        out.push_json(&EdgeReport {
            suspect_count: report.suspects.len(),
            mean_suspect_displacement: report.mean_suspect_displacement(),
            bulk_median_displacement: report.bulk_median_displacement(),
            report: &report,
        });
    }
    Ok(out.artifacts)
}

/// Window size K when none is configured: 4q at rational ω, else 16,
/// never more than n_max/2.
pub fn default_k_window(omega: Omega, n_max: usize) -> usize {
    let k = match omega.reduced() {
        Some((_, q)) => 4 * q as usize,
        None => 16,
    };
    k.min(n_max / 2).max(2)
}

fn verify_map(config: &RunConfig, mut out: Outputs) -> Result<Vec<Artifact>, CliError> {
    let err = solver(config.command);
    let omega = config.omega_spec.to_omega()?;
    let n_max = config.n_max();
    let k = config
        .k_window
        .unwrap_or_else(|| default_k_window(omega, n_max));
    let trunc = Truncation::new(n_max, 0, k as i64 - 1).map_err(&err)?;
    let translation = verify_translation_relations(omega, config.nu, &trunc).map_err(&err)?;
    let conjugation = conjugate_to_harper(omega, config.nu, &trunc).map_err(&err)?;
    let harper_omega = omega.doubled();
    let fit =
        fit_diagonal(&conjugation.diagonal, &conjugation.k_labels, harper_omega).map_err(&err)?;
    out.push_json(&serde_json::json!({
        "omega": omega,
        "nu": config.nu,
        "n_max": n_max,
        "k_window": k,
        "harper_omega": harper_omega,
        "harper_nu": 2.0 * config.nu,
        "translation": translation,
        "conjugation": conjugation,
        "diagonal_fit": fit,
        "expected_amplitude": 2.0,
        "expected_phase": reduce_angle(2.0 * config.nu),
    }));
    Ok(out.artifacts)
}

fn energy_levels(config: &RunConfig, mut out: Outputs) -> Result<Vec<Artifact>, CliError> {
    let err = solver(config.command);
    let omega = config.omega_spec.to_omega()?;
    let params = config.operator_kind().params(omega).map_err(&err)?;
    let energies: Vec<f64> = (0..config.count as u64)
        .map(|n| energy_level(&params, n))
        .collect();
    if out.wants(Format::Csv) {
        out.push_with(Format::Csv, |b| write_energy_csv(&energies, b))?;
    }
    if out.wants(Format::Json) {
        out.push_json(&serde_json::json!({ "omega": omega, "energies": energies }));
    }
    Ok(out.artifacts)
}
