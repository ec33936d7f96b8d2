//! The `kaehler-sl2c` command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 invalid input or
//! inadmissible profile, 3 numeric failure.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::curvature::{classify_ricci, curvature_curve, write_curvature_csv, CurvatureSample, RicciClass};
use crate::error::Error;
use crate::global_geom::{geometry_report, integrate_invariant, volume_mr, write_geometry_csv, GeometryReport};
use crate::numerics::Extended;
use crate::profiles::{
    parse_profile, resolve_profile, validate_kahler, MetricProfile, ValidationReport, BUILTIN_SPECS,
};
use crate::quantization::{k_of, quantization_report, Count, Cutoff, KValue, QuantizationReport};
use crate::verify::{run_suite, CriterionResult, Suite, VerifyConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

const CURVE_POINTS: usize = 100;
const VALIDATION_GRID: usize = 400;

#[derive(Debug, Parser)]
#[command(name = "kaehler-sl2c", version, about = "Invariant Kähler metrics on SL(2,C)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub config: RunConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Curvature, volume and completeness of a profile.
    Analyze,
    /// Degree cutoff, dim H_poly and semiclassical ratio for each ħ.
    Quantize,
    /// Run the verification suites.
    Verify,
    /// List the built-in profile names.
    Profiles,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, clap::Args)]
pub struct RunConfig {
    /// Built-in name (lump, quadratic, cosh, stenzel:c=3, logcosh:a=1, gaussian-tail) or an expression in y.
    #[arg(long, global = true, default_value = "lump")]
    pub profile: String,
    /// Planck constant; accepts constant expressions such as pi/200. Repeatable.
    #[arg(long, global = true, value_parser = parse_constant)]
    pub hbar: Vec<f64>,
    /// Largest radius for curves and the admissibility scan.
    #[arg(long, global = true, default_value = "10", value_parser = parse_constant)]
    pub rmax: f64,
    /// Relative tolerance of the quadrature volume cross-check.
    #[arg(long, global = true, default_value = "1e-6", value_parser = parse_constant)]
    pub tol: f64,
    #[arg(long, global = true, default_value_t = 7)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Directory receiving report files.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Report volumes of the quotient PGL(2,C) = SL(2,C)/{±1}.
    #[arg(long, global = true)]
    pub quotient: bool,
    #[arg(long, global = true, default_value = "all")]
    pub suite: Suite,
    /// Reduced sample sizes in the verification suites.
    #[arg(long, global = true)]
    pub fast: bool,
}

fn parse_constant(s: &str) -> Result<f64, String> {
    parse_profile(s).and_then(|e| e.eval_constant()).map_err(|e| e.to_string())
}

/// Failure carrying an exit code and a message for stderr.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NonFinite { .. }
            | Error::NoConvergence { .. }
            | Error::StepTooSmall { .. }
            | Error::JetDomain(_)
            | Error::DerivativeUnavailable(_)
            | Error::LimitUndetermined(_)
            | Error::Undetermined(_) => EXIT_NUMERIC,
            _ => EXIT_INPUT,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { code: EXIT_INPUT, message: format!("i/o: {e}") }
    }
}

fn input(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_INPUT, message: message.into() }
}

#[derive(Debug, Clone, Serialize)]
pub struct VolumeCheck {
    pub r: f64,
    pub closed_form: f64,
    pub quadrature: f64,
    pub rel_error: f64,
    pub tol: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalyzeReport {
    pub space: &'static str,
    pub profile: String,
    pub validation: ValidationReport,
    pub total_volume: Extended,
    pub complete: crate::global_geom::Completeness,
    #[serde(rename = "D_0_inf")]
    pub d_0_inf: Option<Extended>,
    pub ricci_class: RicciClass,
    pub volume_check: VolumeCheck,
    pub volume_curve: Vec<(f64, f64)>,
    pub curvature_integral_curve: Vec<(f64, f64)>,
    pub curvature_curve: Vec<CurvatureSample>,
}

#[derive(Debug, Clone, Serialize)]
pub struct QuantizeReport {
    pub space: &'static str,
    pub profile: String,
    pub k: KValue,
    pub omega: Extended,
    pub rows: Vec<QuantizationReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub suite: Suite,
    pub seed: u64,
    pub fast: bool,
    pub passed: bool,
    pub criteria: Vec<CriterionResult>,
}

fn space(cfg: &RunConfig) -> &'static str {
    if cfg.quotient {
        "PGL(2,C)"
    } else {
        "SL(2,C)"
    }
}

fn volume_factor(cfg: &RunConfig) -> f64 {
    if cfg.quotient {
        0.5
    } else {
        1.0
    }
}

fn admissible_profile(cfg: &RunConfig) -> Result<(MetricProfile, ValidationReport), Failure> {
    if !(cfg.rmax > 0.0) || !cfg.rmax.is_finite() {
        return Err(input(format!("--rmax must be positive, got {}", cfg.rmax)));
    }
    let p = resolve_profile(&cfg.profile)?;
    let v = validate_kahler(&p, cfg.rmax, VALIDATION_GRID);
    if !v.usable() {
        return Err(Failure {
            code: EXIT_INPUT,
            message: format!("profile {:?} is not an admissible even profile: {}", cfg.profile, v.failures.join("; ")),
        });
    }
    Ok((p, v))
}

pub fn analyze(cfg: &RunConfig) -> Result<AnalyzeReport, Failure> {
    if !(cfg.tol > 0.0) {
        return Err(input(format!("--tol must be positive, got {}", cfg.tol)));
    }
    let (p, validation) = admissible_profile(cfg)?;
    let GeometryReport { label, total_volume, complete, d_0_inf, volume_curve, curvature_integral_curve } =
        geometry_report(&p, cfg.rmax, CURVE_POINTS)?;
    let s = volume_factor(cfg);
    let closed = volume_mr(&p, cfg.rmax)?;
    let quad = integrate_invariant(&p, |_| 1.0, cfg.rmax)?;
    let rel_error = (quad - closed).abs() / closed.abs().max(f64::MIN_POSITIVE);
    Ok(AnalyzeReport {
        space: space(cfg),
        profile: label,
        validation,
        total_volume: match total_volume {
            Extended::Finite(v) => Extended::Finite(s * v),
            inf => inf,
        },
        complete,
        d_0_inf,
        ricci_class: classify_ricci(&p, cfg.rmax),
        volume_check: VolumeCheck {
            r: cfg.rmax,
            closed_form: s * closed,
            quadrature: s * quad,
            rel_error,
            tol: cfg.tol,
            passed: rel_error <= cfg.tol,
        },
        volume_curve: volume_curve.into_iter().map(|(r, v)| (r, s * v)).collect(),
        curvature_integral_curve: curvature_integral_curve.into_iter().map(|(r, v)| (r, s * v)).collect(),
        curvature_curve: curvature_curve(&p, cfg.rmax, CURVE_POINTS)?,
    })
}

pub fn quantize(cfg: &RunConfig) -> Result<QuantizeReport, Failure> {
    let (p, _) = admissible_profile(cfg)?;
    let hbars = if cfg.hbar.is_empty() { vec![std::f64::consts::FRAC_PI_4] } else { cfg.hbar.clone() };
    if let Some(h) = hbars.iter().find(|h| !(**h > 0.0) || !h.is_finite()) {
        return Err(input(format!("--hbar must be positive and finite, got {h}")));
    }
    let s = volume_factor(cfg);
    let mut rows = Vec::with_capacity(hbars.len());
    for h in hbars {
        let mut r = quantization_report(&p, h)?;
        if let Extended::Finite(v) = r.omega {
            r.omega = Extended::Finite(s * v);
        }
        rows.push(r);
    }
    let omega = rows.first().map(|r| r.omega).unwrap_or(Extended::Infinite);
    Ok(QuantizeReport { space: space(cfg), profile: p.label().to_string(), k: k_of(&p)?, omega, rows })
}

pub fn verify(cfg: &RunConfig) -> VerifyReport {
    let vc = VerifyConfig { seed: cfg.seed, fast: cfg.fast };
    let criteria = run_suite(cfg.suite, &vc);
    VerifyReport {
        suite: cfg.suite,
        seed: cfg.seed,
        fast: cfg.fast,
        passed: criteria.iter().all(|c| c.passed),
        criteria,
    }
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

fn csv_with<F: FnOnce(&mut Vec<u8>) -> std::io::Result<()>>(f: F) -> String {
    let mut buf = Vec::new();
    f(&mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("utf-8 csv")
}

fn geometry_csv(r: &AnalyzeReport) -> String {
    let g = GeometryReport {
        label: r.profile.clone(),
        total_volume: r.total_volume,
        complete: r.complete,
        d_0_inf: r.d_0_inf,
        volume_curve: r.volume_curve.clone(),
        curvature_integral_curve: r.curvature_integral_curve.clone(),
    };
    csv_with(|b| write_geometry_csv(b, &g))
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn quantize_csv(r: &QuantizeReport) -> String {
    let mut s = String::from("hbar,m,dim,ratio,lower,upper\n");
    for row in &r.rows {
        let m = match row.m {
            Cutoff::Finite(m) => m.to_string(),
            Cutoff::Infinite => "inf".into(),
            Cutoff::Undetermined => "undetermined".into(),
            Cutoff::Empty => "empty".into(),
        };
        let dim = match row.dim_h_poly {
            Some(Count::Finite(d)) => d.to_string(),
            Some(Count::Infinite) => "inf".into(),
            None => String::new(),
        };
        s.push_str(&format!(
            "{},{m},{dim},{},{},{}\n",
            row.hbar,
            fmt_opt(row.semiclassical_ratio),
            fmt_opt(row.bounds.map(|b| b.0)),
            fmt_opt(row.bounds.map(|b| b.1))
        ));
    }
    s
}

fn write_files(dir: &Path, files: &[(&str, &str)]) -> Result<(), Failure> {
    std::fs::create_dir_all(dir)?;
    for (name, body) in files {
        std::fs::write(dir.join(name), body)?;
    }
    Ok(())
}

/// Run one parsed invocation, writing the report to `stdout`.
pub fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let cfg = &cli.config;
    match cli.command {
        Command::Profiles => {
            for s in BUILTIN_SPECS {
                writeln!(stdout, "{s}")?;
            }
            writeln!(stdout, "<expression in y>, e.g. \"y^2\" or \"y + exp(-3*y)/3\"")?;
            Ok(EXIT_OK)
        }
        Command::Analyze => {
            let r = analyze(cfg)?;
            let (j, g) = (json(&r), geometry_csv(&r));
            let c = csv_with(|b| write_curvature_csv(b, &r.curvature_curve));
            match cfg.format {
                Format::Json => stdout.write_all(j.as_bytes())?,
                Format::Csv => write!(stdout, "{g}\n{c}")?,
            }
            if let Some(dir) = &cfg.out {
                write_files(dir, &[("report.json", &j), ("geometry.csv", &g), ("curvature.csv", &c)])?;
            }
            Ok(EXIT_OK)
        }
        Command::Quantize => {
            let r = quantize(cfg)?;
            let (j, c) = (json(&r), quantize_csv(&r));
            stdout.write_all(if cfg.format == Format::Json { j.as_bytes() } else { c.as_bytes() })?;
            if let Some(dir) = &cfg.out {
                write_files(dir, &[("quantization.json", &j), ("quantization.csv", &c)])?;
            }
            Ok(EXIT_OK)
        }
        Command::Verify => {
            let r = verify(cfg);
            match cfg.format {
                Format::Json => stdout.write_all(json(&r).as_bytes())?,
                Format::Csv => {
                    for c in &r.criteria {
                        writeln!(stdout, "{c}")?;
                    }
                    let n = r.criteria.iter().filter(|c| c.passed).count();
                    writeln!(stdout, "{n}/{} criteria passed", r.criteria.len())?;
                }
            }
            if let Some(dir) = &cfg.out {
                write_files(dir, &[("verify.json", &json(&r))])?;
            }
            Ok(if r.passed { EXIT_OK } else { EXIT_VERIFY })
        }
    }
}

/// Parse arguments and run; returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = if code == EXIT_OK { write!(stdout, "{e}") } else { write!(stderr, "{e}") };
            return code;
        }
    };
    match execute(&cli, stdout) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}
