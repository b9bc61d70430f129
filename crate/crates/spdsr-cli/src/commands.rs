//! The four subcommands: argument validation, parallel batch execution
//! with reports in input order, and emission to stdout or a directory.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Subcommand, ValueEnum};
use rayon::prelude::*;
use spdsr::group::enumerate_versions;
use spdsr::interp::make_trajectory;
use spdsr::matcore::sym_eig;
use spdsr::srdist::sr_distance;
use spdsr::{tol, Scheme, SrConfig, SrError, SymMat};

use crate::input;
use crate::report::{
    self, DistanceOut, FrameOut, KsweepOut, TrajectoryOut, VersionsOut,
};
use crate::CliError;

#[derive(Subcommand)]
pub enum Command {
    /// Minimal scaling-rotation distance for every input pair
    Distance(DistanceArgs),
    /// Sampled interpolation paths, one file per scheme per pair
    Interpolate(InterpolateArgs),
    /// All eigen-decomposition versions of every input matrix
    Versions(VersionsArgs),
    /// Distance per pair across a grid of rotation weights
    Ksweep(KsweepArgs),
}

impl Command {
    pub fn run(&self) -> Result<(), CliError> {
        match self {
            Command::Distance(a) => distance(a),
            Command::Interpolate(a) => interpolate(a),
            Command::Versions(a) => versions(a),
            Command::Ksweep(a) => ksweep(a),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

impl Format {
    fn ext(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

#[derive(Args)]
struct IoArgs {
    /// Input file, JSON or CSV
    #[arg(long)]
    input: PathBuf,

    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct TolArgs {
    /// Relative tolerance for treating two eigenvalues as equal
    #[arg(long, default_value_t = tol::TOL_EQ_DEFAULT)]
    tol_eq: f64,

    /// Absolute tolerance for reporting tied minimal pairs
    #[arg(long, default_value_t = tol::TOL_TIE_DEFAULT)]
    tol_tie: f64,

    /// Convergence threshold of the rotation-alignment ascent
    #[arg(long, default_value_t = tol::TOL_G_DEFAULT)]
    tol_g: f64,
}

impl TolArgs {
    fn check(&self) -> Result<(), CliError> {
        positive("tol-eq", self.tol_eq)?;
        positive("tol-tie", self.tol_tie)?;
        positive("tol-g", self.tol_g)
    }

    fn config(&self, k: f64) -> SrConfig {
        SrConfig {
            k,
            tol_eq: self.tol_eq,
            tol_tie: self.tol_tie,
            tol_g: self.tol_g,
            ..SrConfig::default()
        }
    }
}

#[derive(Args)]
pub struct DistanceArgs {
    #[command(flatten)]
    io: IoArgs,

    /// Rotation weight of the metric
    #[arg(long, default_value_t = 1.0)]
    k: f64,

    /// Directory for the report file; stdout when omitted
    #[arg(long)]
    output: Option<PathBuf>,

    #[command(flatten)]
    tols: TolArgs,
}

#[derive(Args)]
pub struct InterpolateArgs {
    #[command(flatten)]
    io: IoArgs,

    /// Rotation weight of the metric
    #[arg(long, default_value_t = 1.0)]
    k: f64,

    /// Number of uniform samples per trajectory
    #[arg(long, default_value_t = 101)]
    samples: usize,

    /// Comma-separated interpolation schemes (SR, E, LE, AI)
    #[arg(long, default_value = "SR,E,LE,AI")]
    schemes: String,

    /// Directory that receives one trajectory file per scheme per pair
    #[arg(long)]
    output: PathBuf,

    #[command(flatten)]
    tols: TolArgs,
}

#[derive(Args)]
pub struct VersionsArgs {
    #[command(flatten)]
    io: IoArgs,

    /// Directory for the report file; stdout when omitted
    #[arg(long)]
    output: Option<PathBuf>,

    #[command(flatten)]
    tols: TolArgs,
}

#[derive(Args)]
pub struct KsweepArgs {
    #[command(flatten)]
    io: IoArgs,

    /// Sweep grid: START:STOP:STEP or comma-separated values
    #[arg(long)]
    k_grid: String,

    /// Directory for the report file; stdout when omitted
    #[arg(long)]
    output: Option<PathBuf>,

    #[command(flatten)]
    tols: TolArgs,
}

fn distance(args: &DistanceArgs) -> Result<(), CliError> {
    args.tols.check()?;
    positive("k", args.k)?;
    let cfg = args.tols.config(args.k);
    let pairs = input::read_pairs(&args.io.input)?;
    ensure_pairs_spd(&pairs)?;

    let computed: Vec<_> = pairs
        .par_iter()
        .map(|(x, y)| sr_distance(x, y, &cfg))
        .collect();
    let mut records = Vec::with_capacity(computed.len());
    for (i, r) in computed.into_iter().enumerate() {
        records.push(DistanceOut::of(i, &r.map_err(|e| lib_err(i, e))?));
    }

    let text = match args.io.format {
        Format::Json => report::json_doc(&records)?,
        Format::Csv => report::distance_csv(&records),
    };
    emit(args.output.as_deref(), "distance", args.io.format, &text)
}

fn interpolate(args: &InterpolateArgs) -> Result<(), CliError> {
    args.tols.check()?;
    positive("k", args.k)?;
    if args.samples < 2 {
        return Err(CliError::Parse(format!(
            "--samples must be at least 2, got {}",
            args.samples
        )));
    }
    let schemes = parse_schemes(&args.schemes)?;
    let cfg = args.tols.config(args.k);
    let pairs = input::read_pairs(&args.io.input)?;
    ensure_pairs_spd(&pairs)?;

    let jobs: Vec<(usize, Scheme)> = (0..pairs.len())
        .flat_map(|i| schemes.iter().map(move |&s| (i, s)))
        .collect();
    let computed: Vec<_> = jobs
        .par_iter()
        .map(|&(i, scheme)| {
            let (x, y) = &pairs[i];
            make_trajectory(x, y, scheme, args.samples, &cfg)
        })
        .collect();
    let mut files = Vec::with_capacity(jobs.len());
    for (&(i, scheme), traj) in jobs.iter().zip(computed) {
        files.push((i, scheme, traj.map_err(|e| lib_err(i, e))?));
    }

    fs::create_dir_all(&args.output)
        .map_err(|e| CliError::Io(format!("{}: {e}", args.output.display())))?;
    for (i, scheme, traj) in &files {
        let name = format!(
            "pair{i:03}_{}.{}",
            scheme.token().to_ascii_lowercase(),
            args.io.format.ext()
        );
        let text = match args.io.format {
            Format::Json => report::json_doc(&TrajectoryOut::of(*i, traj))?,
            Format::Csv => report::trajectory_csv(traj),
        };
        let path = args.output.join(name);
        fs::write(&path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn versions(args: &VersionsArgs) -> Result<(), CliError> {
    args.tols.check()?;
    let mats = input::read_singles(&args.io.input)?;
    for (i, m) in mats.iter().enumerate() {
        ensure_spd(m, &format!("record {i}: matrix"))?;
    }

    let computed: Vec<_> = mats
        .par_iter()
        .map(|m| {
            let (u, d) = sym_eig(m);
            enumerate_versions(&u, &d, args.tols.tol_eq)
        })
        .collect();
    let mut records = Vec::with_capacity(computed.len());
    for (i, (m, r)) in mats.iter().zip(computed).enumerate() {
        records.push(match r {
            Ok(frames) => VersionsOut {
                record: i,
                p: m.p(),
                infinite_fiber: false,
                count: Some(frames.len()),
                versions: Some(frames.iter().map(FrameOut::of).collect()),
                partition: None,
            },
            Err(SrError::Multiplicity { partition, .. }) => VersionsOut {
                record: i,
                p: m.p(),
                infinite_fiber: true,
                count: None,
                versions: None,
                partition: Some(report::one_based(partition.blocks())),
            },
            Err(e) => return Err(lib_err(i, e)),
        });
    }

    let text = match args.io.format {
        Format::Json => report::json_doc(&records)?,
        Format::Csv => report::versions_csv(&records),
    };
    emit(args.output.as_deref(), "versions", args.io.format, &text)
}

fn ksweep(args: &KsweepArgs) -> Result<(), CliError> {
    args.tols.check()?;
    let grid = parse_k_grid(&args.k_grid)?;
    let pairs = input::read_pairs(&args.io.input)?;
    ensure_pairs_spd(&pairs)?;

    let jobs: Vec<(usize, f64)> = (0..pairs.len())
        .flat_map(|i| grid.iter().map(move |&k| (i, k)))
        .collect();
    let computed: Vec<_> = jobs
        .par_iter()
        .map(|&(i, k)| {
            let (x, y) = &pairs[i];
            sr_distance(x, y, &args.tols.config(k))
        })
        .collect();
    let mut rows = Vec::with_capacity(jobs.len());
    for (&(i, k), r) in jobs.iter().zip(computed) {
        let r = r.map_err(|e| lib_err(i, e))?;
        rows.push(KsweepOut {
            record: i,
            k,
            distance: r.distance,
            character: r.curve.character().to_string(),
        });
    }

    let text = match args.io.format {
        Format::Json => report::json_doc(&rows)?,
        Format::Csv => report::ksweep_csv(&rows),
    };
    emit(args.output.as_deref(), "ksweep", args.io.format, &text)
}

fn positive(name: &str, v: f64) -> Result<(), CliError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(CliError::Parse(format!("--{name} must be positive, got {v}")))
    }
}

/// The same positivity test the library applies, run up front so the
/// diagnostic can name the offending record and side.
fn ensure_spd(m: &SymMat, what: &str) -> Result<(), CliError> {
    let (_, d) = sym_eig(m);
    let max = d.entries().iter().cloned().fold(f64::MIN, f64::max);
    if max <= 0.0 || d.entries().iter().any(|&v| v <= tol::TOL_PD * max) {
        return Err(CliError::Domain(format!(
            "{what} is not positive-definite (eigenvalues {:?})",
            d.entries()
        )));
    }
    Ok(())
}

fn ensure_pairs_spd(pairs: &[(SymMat, SymMat)]) -> Result<(), CliError> {
    for (i, (x, y)) in pairs.iter().enumerate() {
        ensure_spd(x, &format!("record {i}: matrix x"))?;
        ensure_spd(y, &format!("record {i}: matrix y"))?;
    }
    Ok(())
}

/// Maps a library failure on one record onto the exit taxonomy:
/// convergence failures keep their own exit code, everything else that
/// escapes a validated input is a domain failure.
fn lib_err(record: usize, e: SrError) -> CliError {
    let msg = format!("record {record}: {e}");
    match e {
        SrError::Convergence { .. } => CliError::Convergence(msg),
        _ => CliError::Domain(msg),
    }
}

/// Writes `text` to `<dir>/<stem>.<ext>` when an output directory is
/// given, otherwise to stdout.
fn emit(output: Option<&Path>, stem: &str, format: Format, text: &str) -> Result<(), CliError> {
    let Some(dir) = output else {
        print!("{text}");
        return Ok(());
    };
    fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let path = dir.join(format!("{stem}.{}", format.ext()));
    fs::write(&path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Parses a comma-separated scheme list, dropping duplicates while
/// keeping first-occurrence order so each output file is written once.
fn parse_schemes(s: &str) -> Result<Vec<Scheme>, CliError> {
    let mut out: Vec<Scheme> = Vec::new();
    for token in s.split(',') {
        let token = token.trim();
        if token.is_empty() {
            return Err(CliError::Parse(format!(
                "--schemes has an empty entry in {s:?}"
            )));
        }
        let scheme: Scheme = token
            .parse()
            .map_err(|e| CliError::Parse(format!("--schemes: {e}")))?;
        if !out.contains(&scheme) {
            out.push(scheme);
        }
    }
    Ok(out)
}

/// Parses the sweep grid: either `START:STOP:STEP` (stop included up to
/// a `1e-9` step slack) or an explicit comma-separated list. Entries
/// must be positive, finite, and strictly increasing.
fn parse_k_grid(s: &str) -> Result<Vec<f64>, CliError> {
    let grid = if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(CliError::Parse(format!(
                "--k-grid range is START:STOP:STEP, got {s:?}"
            )));
        }
        let start = grid_value(parts[0])?;
        let stop = grid_value(parts[1])?;
        let step = grid_value(parts[2])?;
        if step <= 0.0 {
            return Err(CliError::Parse(format!(
                "--k-grid step must be positive, got {step}"
            )));
        }
        let span = (stop - start) / step;
        if span >= MAX_GRID_VALUES as f64 {
            return Err(CliError::Parse(format!(
                "--k-grid range produces more than {MAX_GRID_VALUES} values"
            )));
        }
        let mut out = Vec::new();
        for i in 0.. {
            let k = start + i as f64 * step;
            if k > stop + step * 1e-9 {
                break;
            }
            out.push(k);
        }
        out
    } else {
        s.split(',')
            .map(grid_value)
            .collect::<Result<Vec<_>, _>>()?
    };

    if grid.is_empty() {
        return Err(CliError::Parse(format!("--k-grid {s:?} produced no values")));
    }
    for &k in &grid {
        if !k.is_finite() || k <= 0.0 {
            return Err(CliError::Parse(format!(
                "--k-grid entries must be positive, got {k}"
            )));
        }
    }
    for w in grid.windows(2) {
        if w[1] <= w[0] {
            return Err(CliError::Parse(format!(
                "--k-grid must be strictly increasing, got {} after {}",
                w[1], w[0]
            )));
        }
    }
    Ok(grid)
}

const MAX_GRID_VALUES: usize = 10_000_000;

fn grid_value(s: &str) -> Result<f64, CliError> {
    let v: f64 = s.trim().parse().map_err(|_| {
        CliError::Parse(format!("--k-grid: expected a number, got {:?}", s.trim()))
    })?;
    if !v.is_finite() {
        return Err(CliError::Parse(format!(
            "--k-grid: expected a finite number, got {:?}",
            s.trim()
        )));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_grids_include_the_stop() {
        let grid = parse_k_grid("0.05:1.0:0.005").unwrap();
        assert_eq!(grid.len(), 191);
        assert_eq!(grid[0], 0.05);
        assert!((grid[190] - 1.0).abs() < 1e-12);
        assert_eq!(parse_k_grid("1.0:1.0:0.5").unwrap(), vec![1.0]);
    }

    #[test]
    fn list_grids_are_validated() {
        assert_eq!(parse_k_grid("0.25,0.5,1").unwrap(), vec![0.25, 0.5, 1.0]);
        assert!(parse_k_grid("0.5,0.25").is_err());
        assert!(parse_k_grid("0.5,0.5").is_err());
        assert!(parse_k_grid("-1,0.5").is_err());
        assert!(parse_k_grid("0,0.5").is_err());
        assert!(parse_k_grid("nope").is_err());
    }

    #[test]
    fn range_grids_reject_bad_shapes() {
        assert!(parse_k_grid("0:1:0.1").is_err());
        assert!(parse_k_grid("1:0.5:0.1").is_err());
        assert!(parse_k_grid("0.1:1:-0.1").is_err());
        assert!(parse_k_grid("0.1:1").is_err());
        assert!(parse_k_grid("0.1:1:nan").is_err());
        assert!(parse_k_grid("0.1:inf:0.1").is_err());
        assert!(parse_k_grid("1e-9:1e9:1e-9").is_err());
    }

    #[test]
    fn schemes_parse_case_insensitively_and_dedup() {
        let schemes = parse_schemes("sr, E, le, SR").unwrap();
        assert_eq!(
            schemes,
            vec![Scheme::Sr, Scheme::Euclid, Scheme::LogEuclid]
        );
        assert!(parse_schemes("SR,,E").is_err());
        assert!(parse_schemes("XX").is_err());
    }
}
