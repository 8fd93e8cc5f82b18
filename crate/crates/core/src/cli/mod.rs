//! Command-line front end: `sum`, `reproduce` and `study`.
//!
//! Exit codes: 0 when everything ran and every check passed, 2 when a
//! tolerance check failed, 1 for any operational error (bad flags, bad
//! files, solver failures).

pub mod run;
pub mod series_file;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::odm::{ComplexPolicy, Ranking, SelectionMode};
use crate::reproduce::TableId;
use crate::series::{Precision, PRECISION_ENV};
use run::{execute, Family, Method, OdmConfig, Oracle, RunConfig, RunReport};
use series_file::SeriesFile;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_TOLERANCE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "resum", version, about = "Summation of divergent power series")]
struct Cli {
    /// Working precision in decimal digits.
    #[arg(long, global = true, env = PRECISION_ENV)]
    precision: Option<u32>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sum a series at one coupling and one order.
    Sum(SumArgs),
    /// Regenerate a reference table and compare it with the stored values.
    Reproduce(ReproduceArgs),
    /// ODM over a range of orders, with fits of ρ_k and of the error.
    Study(StudyArgs),
}

#[derive(Debug, Args)]
struct Output {
    /// Write the JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the CSV here instead of standard output.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Record wall time in the JSON report (makes reruns differ).
    #[arg(long)]
    timing: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Odm,
    BorelMap,
    BorelPade,
    Pade,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Root,
    Stationary,
    Mixed,
    StationaryFirst,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ComplexArg {
    Real,
    Project,
    Full,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RankingArg {
    Largest,
    Smallest,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FamilyArg {
    PowerCut,
    Shifted,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OracleArg {
    Quadrature,
    Diagonalization,
    None,
}

#[derive(Debug, Args)]
struct OdmArgs {
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,
    /// Mapping exponent α.
    #[arg(long)]
    alpha: Option<String>,
    /// Prefactor exponent p.
    #[arg(long = "prefactor-p", allow_hyphen_values = true)]
    prefactor_p: Option<String>,
    /// Candidates for ρ_k.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Smallness factor τ, or `inf`.
    #[arg(long)]
    tau: Option<String>,
    #[arg(long, value_enum)]
    complex: Option<ComplexArg>,
    /// Largest |arg ρ| in degrees for `--complex project`.
    #[arg(long = "max-arg")]
    max_arg: Option<f64>,
    #[arg(long, value_enum)]
    ranking: Option<RankingArg>,
}

impl OdmArgs {
    fn any(&self) -> bool {
        self.family.is_some()
            || self.alpha.is_some()
            || self.prefactor_p.is_some()
            || self.mode.is_some()
            || self.tau.is_some()
            || self.complex.is_some()
            || self.max_arg.is_some()
            || self.ranking.is_some()
    }

    fn config(&self) -> Result<OdmConfig> {
        let alpha = self
            .alpha
            .clone()
            .ok_or_else(|| Error::Usage("odm needs --alpha".into()))?;
        let complex = match (self.complex.unwrap_or(ComplexArg::Real), self.max_arg) {
            (ComplexArg::Project, arg) => ComplexPolicy::Project {
                max_arg_deg: arg.unwrap_or(20.0),
            },
            (_, Some(_)) => return Err(Error::Usage("--max-arg goes with --complex project".into())),
            (ComplexArg::Real, None) => ComplexPolicy::RealOnly,
            (ComplexArg::Full, None) => ComplexPolicy::Full,
        };
        Ok(OdmConfig {
            family: match self.family.unwrap_or(FamilyArg::PowerCut) {
                FamilyArg::PowerCut => Family::PowerCut,
                FamilyArg::Shifted => Family::Shifted,
            },
            alpha,
            prefactor_p: self.prefactor_p.clone().unwrap_or_else(|| "0".into()),
            mode: match self.mode.unwrap_or(ModeArg::Mixed) {
                ModeArg::Root => SelectionMode::Root,
                ModeArg::Stationary => SelectionMode::Stationary,
                ModeArg::Mixed => SelectionMode::Mixed,
                ModeArg::StationaryFirst => SelectionMode::StationaryFirst,
            },
            tau: self.tau.clone().unwrap_or_else(|| "0.5".into()),
            complex,
            ranking: match self.ranking.unwrap_or(RankingArg::Largest) {
                RankingArg::Largest => Ranking::Largest,
                RankingArg::Smallest => Ranking::Smallest,
            },
        })
    }
}

#[derive(Debug, Args)]
struct SumArgs {
    /// Series file (TOML).
    file: PathBuf,
    #[arg(long, value_enum)]
    method: MethodArg,
    /// Coupling, or `inf` (ODM only).
    #[arg(long)]
    g: String,
    /// Order k (ODM), or truncation of the mapped series (borel-map).
    #[arg(long)]
    order: Option<usize>,
    #[command(flatten)]
    odm: OdmArgs,
    /// Leroy parameter σ.
    #[arg(long)]
    sigma: Option<String>,
    /// Borel-plane singularity parameter a; defaults to 1/A from the file.
    #[arg(long)]
    a: Option<String>,
    /// Padé numerator degree.
    #[arg(long = "L")]
    l: Option<usize>,
    /// Padé denominator degree.
    #[arg(long = "M")]
    m: Option<usize>,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct ReproduceArgs {
    /// saddle-table, odm-d0-strong, odm-d0-g5, phi4-fixed-point,
    /// phi4-exponents or borel-map-exponents
    table: String,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct StudyArgs {
    /// Series file (TOML).
    file: PathBuf,
    #[command(flatten)]
    odm: OdmArgs,
    /// Highest order k; the series must reach k+1.
    #[arg(long = "max-order")]
    max_order: usize,
    #[arg(long = "min-order", default_value_t = 1)]
    min_order: usize,
    /// Coupling, or `inf`.
    #[arg(long, default_value = "inf")]
    g: String,
    /// Exact values to measure δ_k against.
    #[arg(long, value_enum, default_value = "none")]
    oracle: OracleArg,
    /// Fit ln|δ_k| against k^s instead of k (e.g. `1/3`).
    #[arg(long = "rate-power")]
    rate_power: Option<String>,
    #[command(flatten)]
    output: Output,
}

fn usage(msg: &str) -> Error {
    Error::Usage(msg.to_string())
}

fn sum_method(a: &SumArgs) -> Result<(Method, usize)> {
    let borel_flags = a.sigma.is_some() || a.a.is_some();
    let pade_flags = a.l.is_some() || a.m.is_some();
    let need_lm = || -> Result<(usize, usize)> {
        match (a.l, a.m) {
            (Some(l), Some(m)) => Ok((l, m)),
            _ => Err(usage("this method needs --L and --M")),
        }
    };
    Ok(match a.method {
        MethodArg::Odm => {
            if borel_flags || pade_flags {
                return Err(usage("--sigma, --a, --L, --M do not apply to odm"));
            }
            let k = a.order.ok_or_else(|| usage("odm needs --order"))?;
            (Method::Odm(a.odm.config()?), k)
        }
        MethodArg::BorelMap => {
            if a.odm.any() || pade_flags {
                return Err(usage("only --sigma, --a and --order apply to borel-map"));
            }
            let k = a.order.ok_or_else(|| usage("borel-map needs --order"))?;
            (
                Method::BorelMap {
                    sigma: a.sigma.clone().unwrap_or_else(|| "0".into()),
                    a: a.a.clone(),
                },
                k,
            )
        }
        MethodArg::BorelPade => {
            if a.odm.any() || a.a.is_some() || a.order.is_some() {
                return Err(usage("only --sigma, --L and --M apply to borel-pade"));
            }
            let (l, m) = need_lm()?;
            (
                Method::BorelPade {
                    sigma: a.sigma.clone().unwrap_or_else(|| "0".into()),
                    l,
                    m,
                },
                l + m,
            )
        }
        MethodArg::Pade => {
            if a.odm.any() || borel_flags || a.order.is_some() {
                return Err(usage("only --L and --M apply to pade"));
            }
            let (l, m) = need_lm()?;
            (Method::Pade { l, m }, l + m)
        }
    })
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text)?;
    Ok(())
}

/// Writes the report and returns the exit code it calls for.
fn emit(report: &RunReport, output: &Output, started: Instant, csv_to_stdout: bool) -> Result<i32> {
    let mut report = report.clone();
    let elapsed = started.elapsed().as_secs_f64();
    if output.timing {
        report.wall_time_s = Some(elapsed);
    }
    if let Some(path) = &output.out {
        write_file(path, &(report.to_json()? + "\n"))?;
    }
    match &output.csv {
        Some(path) => report.write_csv(std::fs::File::create(path)?)?,
        None if csv_to_stdout => report.write_csv(std::io::stdout().lock())?,
        None => {}
    }
    let mut err = std::io::stderr().lock();
    for note in &report.notes {
        writeln!(err, "note: {note}")?;
    }
    for c in &report.checks {
        writeln!(
            err,
            "{} {}: {} (target {})",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            crate::reproduce::num(c.value),
            c.target
        )?;
    }
    writeln!(err, "wall time {elapsed:.2} s")?;
    Ok(if report.passed() { EXIT_OK } else { EXIT_TOLERANCE })
}

fn print_sum(report: &RunReport) -> Result<()> {
    let mut out = std::io::stdout().lock();
    for r in &report.records {
        writeln!(out, "value = {}", r.value.as_deref().unwrap_or("-"))?;
        if let Some(im) = &r.value_im {
            writeln!(out, "value_im = {im}")?;
        }
        writeln!(out, "error_estimate = {}", r.error_estimate.as_deref().unwrap_or("-"))?;
        if let Some(rho) = &r.rho {
            let im = r.rho_im.as_deref().map(|i| format!(" + ({i})i")).unwrap_or_default();
            writeln!(out, "rho = {rho}{im} ({})", r.rho_kind.as_deref().unwrap_or(""))?;
        }
        if let Some(d) = &r.diagnostic {
            writeln!(out, "diagnostic = {d}")?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<i32> {
    let started = Instant::now();
    let precision = match cli.precision {
        Some(d) => Precision::new(d)?,
        None => Precision::default(),
    };
    match cli.command {
        Command::Sum(a) => {
            let (method, order) = sum_method(&a)?;
            let config = RunConfig::Sum {
                series: SeriesFile::read(&a.file)?,
                method,
                g: a.g.clone(),
                order,
                precision,
            };
            let report = execute(&config)?;
            print_sum(&report)?;
            emit(&report, &a.output, started, false)
        }
        Command::Reproduce(a) => {
            let table: TableId = a.table.parse()?;
            let report = execute(&RunConfig::Reproduce { table, precision })?;
            emit(&report, &a.output, started, true)
        }
        Command::Study(a) => {
            let config = RunConfig::Study {
                series: SeriesFile::read(&a.file)?,
                odm: a.odm.config()?,
                min_order: a.min_order,
                max_order: a.max_order,
                g: a.g.clone(),
                oracle: match a.oracle {
                    OracleArg::Quadrature => Oracle::Quadrature,
                    OracleArg::Diagonalization => Oracle::Diagonalization,
                    OracleArg::None => Oracle::None,
                },
                rate_power: a.rate_power.clone(),
                precision,
            };
            let report = execute(&config)?;
            let code = emit(&report, &a.output, started, true)?;
            if let Some(f) = &report.fits {
                eprintln!("R_fit = {:.6}, R from 1/rho slope = {:.6}", f.r_fit, f.r_linear);
                if let Some(rate) = &f.rate {
                    eprintln!(
                        "rate slope all/even/odd = {:.6}/{}/{}",
                        rate.all.slope,
                        rate.even.map_or("-".into(), |x| format!("{:.6}", x.slope)),
                        rate.odd.map_or("-".into(), |x| format!("{:.6}", x.slope)),
                    );
                }
            }
            Ok(code)
        }
    }
}

/// Parses `args` (program name first), runs, and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(args).unwrap()
    }

    #[test]
    fn pade_rejects_odm_flags() {
        let cli = parse(&["resum", "sum", "f.toml", "--method", "pade", "--L", "0", "--M", "1", "--g", "1", "--alpha", "2"]);
        let Command::Sum(a) = cli.command else { panic!() };
        assert!(matches!(sum_method(&a), Err(Error::Usage(_))));
    }

    #[test]
    fn odm_defaults() {
        let cli = parse(&["resum", "sum", "f.toml", "--method", "odm", "--alpha", "2", "--g", "inf", "--order", "3"]);
        let Command::Sum(a) = cli.command else { panic!() };
        let (Method::Odm(c), 3) = sum_method(&a).unwrap() else { panic!() };
        assert_eq!(c.tau, "0.5");
        assert_eq!(c.prefactor_p, "0");
        assert_eq!(c.complex, ComplexPolicy::RealOnly);
    }

    #[test]
    fn negative_prefactor_is_a_value() {
        let cli = parse(&["resum", "study", "f.toml", "--alpha", "3/2", "--prefactor-p", "-1/2", "--max-order", "9"]);
        let Command::Study(a) = cli.command else { panic!() };
        assert_eq!(a.odm.config().unwrap().prefactor_p, "-1/2");
    }

    #[test]
    fn unknown_flag_is_an_operational_error() {
        assert_eq!(main_with_args(["resum", "sum", "--bogus"]), EXIT_ERROR);
        assert_eq!(main_with_args(["resum", "reproduce", "table-9"]), EXIT_ERROR);
    }
}
