//! Command-line front end: `field`, `fringe`, `chsh` and `sample`.
//!
//! CSV output has a header row, 17 significant digits per value and LF line
//! endings. JSON output keeps a fixed key order. Exit codes: 0 success,
//! 1 I/O failure, 2 invalid arguments, 3 numeric failure.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

use crate::bell::{
    chsh_s, fringe_fit, fringe_scan, optimize_chsh, ArmConfig, BellError, ChshSettings,
    DEFAULT_RESOLUTION,
};
use crate::hilbert::BiphotonState;
use crate::source::{hyper_state, make_spectrum, SpectrumShape};
use crate::stochastic::{estimate_s, CountTable};
use crate::vectorfield::{sample_field, write_csv};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

/// Points used to fit the fringe when reporting visibility and offset.
const FIT_STEPS: usize = 360;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Numeric(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Numeric(_) => EXIT_NUMERIC,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

macro_rules! numeric_from {
    ($($t:ty),*) => {
        $(impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Numeric(e.to_string())
            }
        })*
    };
}

numeric_from!(
    BellError,
    crate::stochastic::StochasticError,
    crate::source::SourceError,
    crate::vectorfield::FieldError
);

/// Formats a double with 17 significant digits.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Parses a q-plate charge written as an integer (`1`, `-2`) or a half
/// integer (`1/2`, `-3/2`) and returns `2q`.
pub fn parse_charge(s: &str) -> Result<i32, String> {
    let s = s.trim();
    let two_q = if let Some(num) = s.strip_suffix("/2") {
        num.trim()
            .parse::<i32>()
            .map_err(|_| format!("invalid charge `{s}`"))?
    } else {
        s.parse::<i32>()
            .ok()
            .and_then(|k| k.checked_mul(2))
            .ok_or_else(|| format!("invalid charge `{s}`; use an integer or n/2"))?
    };
    if two_q == 0 {
        return Err("q must be nonzero".to_string());
    }
    Ok(two_q)
}

/// Parses an angle in radians: a float, or `[k*]pi[/n]` with optional sign.
pub fn parse_angle(s: &str) -> Result<f64, String> {
    let t = s.trim();
    if let Ok(v) = t.parse::<f64>() {
        return if v.is_finite() {
            Ok(v)
        } else {
            Err(format!("angle `{s}` is not finite"))
        };
    }
    let bad = || format!("invalid angle `{s}`; use radians or k*pi/n");
    let (sign, body) = match t.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, t.strip_prefix('+').unwrap_or(t)),
    };
    let (numer, denom) = match body.split_once('/') {
        Some((a, b)) => (a, b.trim().parse::<f64>().map_err(|_| bad())?),
        None => (body, 1.0),
    };
    let factor = match numer.trim().strip_suffix("pi").map(str::trim) {
        Some("") => 1.0,
        Some(k) => k
            .strip_suffix('*')
            .unwrap_or(k)
            .trim()
            .parse::<f64>()
            .map_err(|_| bad())?,
        None => return Err(bad()),
    };
    if denom == 0.0 {
        return Err(bad());
    }
    Ok(sign * factor * std::f64::consts::PI / denom)
}

fn parse_settings(s: &str) -> Result<SettingsChoice, String> {
    if s.trim() == "auto" {
        return Ok(SettingsChoice::Auto);
    }
    let parts: Vec<f64> = s.split(',').map(parse_angle).collect::<Result<_, _>>()?;
    let betas: [f64; 4] = parts
        .try_into()
        .map_err(|_| format!("expected `auto` or four comma-separated angles, got `{s}`"))?;
    Ok(SettingsChoice::Explicit(betas))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SettingsChoice {
    Auto,
    Explicit([f64; 4]),
}

#[derive(Debug, Parser)]
#[command(
    name = "spinorbit",
    version,
    about = "Spin-orbit photon states, coincidence fringes and CHSH tests"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// q-plate charge: integer or half integer written n/2
    #[arg(long = "q", value_parser = parse_charge, allow_hyphen_values = true)]
    pub two_q: i32,
    /// Waveplate-derived polarization angle θ (radians, or k*pi/n)
    #[arg(long, default_value = "0", value_parser = parse_angle, allow_hyphen_values = true)]
    pub theta: f64,
    #[arg(long, default_value = "flat", value_parser = parse_shape)]
    pub spectrum: SpectrumShape,
    /// OAM truncation
    #[arg(long, default_value_t = crate::hilbert::DEFAULT_M_MAX)]
    pub mmax: u32,
    /// Width of the gaussian spectrum
    #[arg(long, default_value_t = 2.0)]
    pub sigma: f64,
    /// Output file; standard output when omitted
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_shape(s: &str) -> Result<SpectrumShape, String> {
    s.parse()
        .map_err(|e: crate::source::SourceError| e.to_string())
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Polarization direction field of the q-plate output (CSV)
    Field {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = 8)]
        rings: usize,
        #[arg(long, default_value_t = 64)]
        points: usize,
    },
    /// Coincidence rate against β_t − β_r over two fringe periods (CSV)
    Fringe {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = 360)]
        steps: usize,
    },
    /// Exact CHSH parameter (JSON)
    Chsh {
        #[command(flatten)]
        common: CommonArgs,
        /// Search settings instead of using the calibrated standard pattern
        #[arg(long)]
        optimize: bool,
        #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
        resolution: f64,
    },
    /// Monte Carlo CHSH estimate from sampled counts (JSON)
    Sample {
        #[command(flatten)]
        common: CommonArgs,
        /// Detected pairs per setting pair
        #[arg(long, default_value_t = 100_000)]
        pairs: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// `auto` or four angles β_t,β_r,β′_t,β′_r
        #[arg(long, default_value = "auto", value_parser = parse_settings, allow_hyphen_values = true)]
        settings: SettingsChoice,
    },
}

impl Command {
    fn common(&self) -> &CommonArgs {
        match self {
            Command::Field { common, .. }
            | Command::Fringe { common, .. }
            | Command::Chsh { common, .. }
            | Command::Sample { common, .. } => common,
        }
    }
}

fn validate(cfg: &RunConfig) -> Result<(), CliError> {
    let c = cfg.command.common();
    if c.mmax < 1 {
        return Err(CliError::Usage("--mmax must be >= 1".into()));
    }
    if !(c.sigma > 0.0 && c.sigma.is_finite()) {
        return Err(CliError::Usage("--sigma must be positive".into()));
    }
    match &cfg.command {
        Command::Field { rings, points, .. } => {
            if *rings < 1 || *points < 4 {
                return Err(CliError::Usage(
                    "--rings must be >= 1 and --points >= 4".into(),
                ));
            }
        }
        Command::Fringe { steps, .. } => {
            if *steps < 8 {
                return Err(CliError::Usage("--steps must be >= 8".into()));
            }
        }
        Command::Chsh { resolution, .. } => {
            if !(*resolution > 0.0 && resolution.is_finite()) {
                return Err(CliError::Usage("--resolution must be positive".into()));
            }
        }
        Command::Sample { pairs, .. } => {
            if *pairs < 4 {
                return Err(CliError::Usage("--pairs must be >= 4".into()));
            }
        }
    }
    Ok(())
}

fn joint_state(c: &CommonArgs) -> Result<BiphotonState, CliError> {
    if c.two_q.unsigned_abs() > c.mmax {
        return Err(CliError::Numeric(format!(
            "|2q| = {} exceeds the OAM truncation m_max = {}",
            c.two_q.abs(),
            c.mmax
        )));
    }
    Ok(hyper_state(&make_spectrum(c.spectrum, c.mmax, c.sigma)?))
}

fn charge_label(two_q: i32) -> String {
    if two_q % 2 == 0 {
        (two_q / 2).to_string()
    } else {
        format!("{two_q}/2")
    }
}

#[derive(Debug, Serialize)]
struct SettingsOut {
    beta_t: f64,
    beta_r: f64,
    beta_t_prime: f64,
    beta_r_prime: f64,
}

impl From<&ChshSettings> for SettingsOut {
    fn from(s: &ChshSettings) -> Self {
        Self {
            beta_t: s.beta_t,
            beta_r: s.beta_r,
            beta_t_prime: s.beta_t_prime,
            beta_r_prime: s.beta_r_prime,
        }
    }
}

#[derive(Debug, Serialize)]
struct ChshReport {
    q: String,
    theta: f64,
    #[serde(rename = "S")]
    s: f64,
    settings: SettingsOut,
    optimized: bool,
    visibility: f64,
    offset_delta0: f64,
    spectrum: String,
}

#[derive(Debug, Serialize)]
struct SampleReport {
    q: String,
    theta: f64,
    #[serde(rename = "S")]
    s: f64,
    settings: SettingsOut,
    visibility: f64,
    offset_delta0: f64,
    spectrum: String,
    s_hat: f64,
    stderr: f64,
    pairs: u64,
    seed: u64,
    correlators: [f64; 4],
    counts: [[u64; 4]; 4],
}

/// Visibility and offset from a fit of the sampled fringe. A flat fringe
/// reports visibility 0 and offset 0.
fn fringe_summary(joint: &BiphotonState, cfg: ArmConfig) -> Result<(f64, f64), CliError> {
    let samples = fringe_scan(joint, cfg, FIT_STEPS, 2.0 * cfg.fringe_period())?;
    match fringe_fit(&samples) {
        Ok(fit) => Ok((fit.visibility, fit.offset_delta0)),
        Err(BellError::IllConditionedFit { visibility }) => Ok((visibility, 0.0)),
        Err(e) => Err(e.into()),
    }
}

fn write_json<W: Write, T: Serialize>(value: &T, mut w: W) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut w, value).map_err(io::Error::from)?;
    writeln!(w)?;
    Ok(())
}

fn execute<W: Write>(cfg: &RunConfig, mut out: W) -> Result<(), CliError> {
    validate(cfg)?;
    let common = cfg.command.common();
    let arm = ArmConfig::new(common.two_q, common.theta);
    match &cfg.command {
        Command::Field { rings, points, .. } => {
            let samples = sample_field(common.two_q, common.theta, *rings, *points)?;
            write_csv(&samples, &mut out)?;
        }
        Command::Fringe { steps, .. } => {
            let joint = joint_state(common)?;
            let rows = fringe_scan(&joint, arm, *steps, 2.0 * arm.fringe_period())?;
            writeln!(out, "delta,coincidence")?;
            for (d, c) in rows {
                writeln!(out, "{},{}", format_f64(d), format_f64(c))?;
            }
        }
        Command::Chsh {
            optimize,
            resolution,
            ..
        } => {
            let joint = joint_state(common)?;
            let (visibility, delta0) = fringe_summary(&joint, arm)?;
            let (settings, s) = if *optimize {
                optimize_chsh(&joint, common.two_q, *resolution)?
            } else {
                let st = ChshSettings::calibrated(common.two_q, delta0)?;
                let v = chsh_s(&joint, &st)?;
                (st, v)
            };
            let settings = settings.with_theta(common.theta);
            let report = ChshReport {
                q: charge_label(common.two_q),
                theta: common.theta,
                s,
                settings: (&settings).into(),
                optimized: *optimize,
                visibility,
                offset_delta0: delta0,
                spectrum: spectrum_label(common),
            };
            write_json(&report, &mut out)?;
        }
        Command::Sample {
            pairs,
            seed,
            settings,
            ..
        } => {
            let joint = joint_state(common)?;
            let (visibility, delta0) = fringe_summary(&joint, arm)?;
            let st = match settings {
                SettingsChoice::Auto => optimize_chsh(&joint, common.two_q, DEFAULT_RESOLUTION)?.0,
                SettingsChoice::Explicit(b) => ChshSettings::new(common.two_q, *b)?,
            }
            .with_theta(common.theta);
            let exact = chsh_s(&joint, &st)?;
            let est = estimate_s(&joint, &st, *pairs, *seed)?;
            let CountTable { counts, .. } = est.table;
            let report = SampleReport {
                q: charge_label(common.two_q),
                theta: common.theta,
                s: exact,
                settings: (&st).into(),
                visibility,
                offset_delta0: delta0,
                spectrum: spectrum_label(common),
                s_hat: est.s_hat,
                stderr: est.stderr,
                pairs: *pairs,
                seed: *seed,
                correlators: est.correlators,
                counts,
            };
            write_json(&report, &mut out)?;
        }
    }
    out.flush()?;
    Ok(())
}

fn spectrum_label(c: &CommonArgs) -> String {
    make_spectrum(c.spectrum, c.mmax, c.sigma)
        .map(|s| s.description().to_string())
        .unwrap_or_default()
}

/// Parses `args` (including the program name) and runs the subcommand,
/// writing results to `--out` or `stdout` and diagnostics to `stderr`.
pub fn run_with<I, T, O, E>(args: I, stdout: &mut O, stderr: &mut E) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
    O: Write,
    E: Write,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(cfg) => cfg,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(stderr, "{}", e.render())
            } else {
                write!(stdout, "{}", e.render())
            };
            return code;
        }
    };
    let result = match &cfg.command.common().out {
        Some(path) => File::create(path)
            .map_err(CliError::from)
            .and_then(|f| execute(&cfg, BufWriter::new(f))),
        None => execute(&cfg, &mut *stdout),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, &mut io::stdout().lock(), &mut io::stderr().lock())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn charges() {
        assert_eq!(parse_charge("1/2"), Ok(1));
        assert_eq!(parse_charge("-3/2"), Ok(-3));
        assert_eq!(parse_charge("1"), Ok(2));
        assert_eq!(parse_charge("-1"), Ok(-2));
        assert_eq!(parse_charge("4/2"), Ok(4));
        assert!(parse_charge("0").is_err());
        assert!(parse_charge("0/2").is_err());
        assert!(parse_charge("0.5").is_err());
        assert!(parse_charge("1/3").is_err());
    }

    #[test]
    fn angles() {
        assert_eq!(parse_angle("0.25"), Ok(0.25));
        assert_eq!(parse_angle("pi"), Ok(PI));
        assert_eq!(parse_angle("pi/4"), Ok(PI / 4.0));
        assert_eq!(parse_angle("-pi/2"), Ok(-PI / 2.0));
        assert_eq!(parse_angle("3*pi/16"), Ok(3.0 * PI / 16.0));
        assert_eq!(parse_angle("3pi/8"), Ok(3.0 * PI / 8.0));
        assert!(parse_angle("pie").is_err());
        assert!(parse_angle("pi/0").is_err());
        assert!(parse_angle("inf").is_err());
    }

    #[test]
    fn settings_flag() {
        assert_eq!(parse_settings("auto"), Ok(SettingsChoice::Auto));
        assert_eq!(
            parse_settings("0,pi/16,pi/8,3*pi/16"),
            Ok(SettingsChoice::Explicit([
                0.0,
                PI / 16.0,
                PI / 8.0,
                3.0 * PI / 16.0
            ]))
        );
        assert!(parse_settings("0,1,2").is_err());
    }

    #[test]
    fn labels_and_format() {
        assert_eq!(charge_label(1), "1/2");
        assert_eq!(charge_label(-3), "-3/2");
        assert_eq!(charge_label(4), "2");
        assert_eq!(format_f64(0.5), "5.0000000000000000e-1");
        assert_eq!(format_f64(-2.0), "-2.0000000000000000e0");
    }
}
