//! Run configurations and reports.
//!
//! A [`RunConfig`] holds everything a run depends on, numbers included as
//! decimal strings, so the echo stored in a [`RunReport`] replays the run
//! exactly.

use rug::float::Special;
use rug::Float;
use serde::{Deserialize, Serialize};

use super::series_file::{GeneratorKind, SeriesFile};
use crate::borel::{borel_pade_sum, borel_sum, BorelConfig, QuadratureConfig};
use crate::coupling::Coupling;
use crate::error::{Error, Result};
use crate::mapping::{build_rho_table, MappingFamily, MappingSpec};
use crate::models::{anharmonic_ground_value, d0_partition_value};
use crate::odm::{
    convergence_study, odm_value, ComplexPolicy, OdmReport, ParityFits, RateAbscissa, Ranking,
    RhoSelectionCriterion, SelectionMode,
};
use crate::pade::{pade_eval, pade_fit};
use crate::reproduce::{csv_error, reproduce, Check, TableId, TableOutput};
use crate::series::{to_decimal, PowerSeries, Precision};

pub const SCHEMA: u32 = 1;
/// Significant digits of reported values.
const REPORT_DIGITS: usize = 25;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    PowerCut,
    Shifted,
}

impl From<Family> for MappingFamily {
    fn from(f: Family) -> Self {
        match f {
            Family::PowerCut => MappingFamily::PowerCut,
            Family::Shifted => MappingFamily::ShiftedPower,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OdmConfig {
    pub family: Family,
    pub alpha: String,
    pub prefactor_p: String,
    pub mode: SelectionMode,
    /// Smallness factor τ; `inf` disables the test.
    pub tau: String,
    pub complex: ComplexPolicy,
    pub ranking: Ranking,
}

impl OdmConfig {
    pub fn mapping(&self, prec: Precision) -> Result<MappingSpec> {
        MappingSpec::new(
            self.family.into(),
            prec.parse(&self.alpha)?,
            prec.parse(&self.prefactor_p)?,
            false,
        )
    }

    pub fn criterion(&self, prec: Precision) -> Result<RhoSelectionCriterion> {
        let tau = match self.tau.trim() {
            "inf" | "infinity" => Float::with_val(prec.bits(), Special::Infinity),
            t => prec.parse(t)?,
        };
        Ok(RhoSelectionCriterion::new(self.mode, tau)?
            .with_complex(self.complex)
            .with_ranking(self.ranking))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "kebab-case")]
pub enum Method {
    Odm(OdmConfig),
    BorelMap {
        sigma: String,
        /// `None` takes `1/A` from the series file.
        a: Option<String>,
    },
    BorelPade { sigma: String, l: usize, m: usize },
    Pade { l: usize, m: usize },
}

impl Method {
    pub fn id(&self) -> &'static str {
        match self {
            Method::Odm(_) => "odm",
            Method::BorelMap { .. } => "borel-map",
            Method::BorelPade { .. } => "borel-pade",
            Method::Pade { .. } => "pade",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Oracle {
    Quadrature,
    Diagonalization,
    None,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum RunConfig {
    Sum {
        series: SeriesFile,
        #[serde(flatten)]
        method: Method,
        g: String,
        order: usize,
        precision: Precision,
    },
    Study {
        series: SeriesFile,
        odm: OdmConfig,
        min_order: usize,
        max_order: usize,
        g: String,
        oracle: Oracle,
        /// Error-rate abscissa `k^s`; linear in `k` when absent.
        rate_power: Option<String>,
        precision: Precision,
    },
    Reproduce {
        table: TableId,
        precision: Precision,
    },
}

/// One order (or one evaluation) of a run. Numbers are decimal strings.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub k: usize,
    pub g: String,
    pub value: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value_im: Option<String>,
    pub error_estimate: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho_im: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho_kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
}

const RECORD_COLUMNS: [&str; 12] = [
    "k",
    "g",
    "value",
    "value_im",
    "error_estimate",
    "rho",
    "rho_im",
    "rho_kind",
    "reference",
    "delta",
    "ln_abs_rel_delta",
    "diagnostic",
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StudyFits {
    /// `R` from the corrected fit when the rate abscissa is a power of `k`.
    pub r_fit: f64,
    /// `1/slope` of `1/ρ_k` against `k`.
    pub r_linear: f64,
    pub rho: ParityFits,
    pub rho_extrapolation: Option<ParityFits>,
    /// `ln|δ_k|` (relative when there is a reference) against the abscissa.
    pub rate: Option<ParityFits>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: u32,
    pub config: RunConfig,
    pub records: Vec<Record>,
    pub fits: Option<StudyFits>,
    pub table: Option<TableOutput>,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    /// Seconds; only recorded on request, since it breaks byte-identical reruns.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
}

impl RunReport {
    fn new(config: RunConfig) -> Self {
        RunReport {
            schema: SCHEMA,
            config,
            records: Vec::new(),
            fits: None,
            table: None,
            checks: Vec::new(),
            notes: Vec::new(),
            wall_time_s: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Diagnostic(format!("json: {e}")))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let report: RunReport = serde_json::from_str(text).map_err(|e| Error::Parse {
            location: format!("line {}", e.line()),
            message: e.to_string(),
        })?;
        if report.schema != SCHEMA {
            return Err(Error::Parse {
                location: "schema".into(),
                message: format!("unsupported schema {}", report.schema),
            });
        }
        Ok(report)
    }

    /// The reproduced table for `reproduce`, one row per record otherwise.
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        if let Some(table) = &self.table {
            return table.write_csv(out);
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(RECORD_COLUMNS).map_err(csv_error)?;
        let opt = |x: &Option<String>| x.clone().unwrap_or_default();
        for r in &self.records {
            let ln_rel = match (&r.delta, &r.reference) {
                (Some(d), Some(reference)) => {
                    let (d, reference) = (d.parse::<f64>(), reference.parse::<f64>());
                    match (d, reference) {
                        (Ok(d), Ok(reference)) if reference != 0.0 => {
                            format!("{:.6}", (d / reference).abs().ln())
                        }
                        _ => String::new(),
                    }
                }
                _ => String::new(),
            };
            w.write_record([
                r.k.to_string(),
                r.g.clone(),
                opt(&r.value),
                opt(&r.value_im),
                opt(&r.error_estimate),
                opt(&r.rho),
                opt(&r.rho_im),
                opt(&r.rho_kind),
                opt(&r.reference),
                opt(&r.delta),
                ln_rel,
                opt(&r.diagnostic),
            ])
            .map_err(csv_error)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn dec(x: &Float) -> String {
    to_decimal(x, REPORT_DIGITS)
}

fn odm_record(report: &OdmReport, g: &str) -> Record {
    let sel = &report.selection;
    Record {
        k: report.k(),
        g: g.to_string(),
        value: Some(dec(&report.value)),
        value_im: (!report.value_im.is_zero()).then(|| dec(&report.value_im)),
        error_estimate: report.error_estimate.as_ref().map(dec),
        rho: Some(dec(&sel.rho.re)),
        rho_im: sel.is_complex().then(|| dec(&sel.rho.im)),
        rho_kind: Some(
            match sel.kind {
                crate::odm::CandidateKind::Root => "root",
                crate::odm::CandidateKind::Stationary => "stationary",
            }
            .into(),
        ),
        diagnostic: sel.diagnostic.clone(),
        ..Record::default()
    }
}

fn finite_g(g: &Coupling, method: &str) -> Result<Float> {
    g.as_finite()
        .cloned()
        .ok_or_else(|| Error::Usage(format!("{method} needs a finite coupling")))
}

fn check_order(s: &PowerSeries, needed: usize, what: &str) -> Result<()> {
    if needed > s.order() {
        return Err(Error::Usage(format!(
            "{what} needs coefficients through order {needed}, the series has {}",
            s.order()
        )));
    }
    Ok(())
}

/// Executes a configuration. Wall time is not recorded here.
pub fn execute(config: &RunConfig) -> Result<RunReport> {
    match config {
        RunConfig::Sum {
            series,
            method,
            g,
            order,
            precision,
        } => run_sum(config, series, method, g, *order, *precision),
        RunConfig::Study { .. } => run_study(config),
        RunConfig::Reproduce { table, precision } => {
            let out = reproduce(*table, *precision)?;
            let mut report = RunReport::new(config.clone());
            report.checks = out.checks.clone();
            report.notes = out.notes.clone();
            report.table = Some(out);
            Ok(report)
        }
    }
}

fn run_sum(
    config: &RunConfig,
    file: &SeriesFile,
    method: &Method,
    g_text: &str,
    k: usize,
    prec: Precision,
) -> Result<RunReport> {
    let s = file.series(prec)?;
    let g = Coupling::parse(g_text, prec)?;
    g.check_non_negative()?;
    let mut report = RunReport::new(config.clone());
    let record = match method {
        Method::Odm(odm) => {
            check_order(&s, k, "odm")?;
            let table = build_rho_table(&s, &odm.mapping(prec)?)?;
            let r = odm_value(&table, k, &odm.criterion(prec)?, &g, prec)?;
            if r.error_estimate.is_none() {
                report
                    .notes
                    .push(format!("no error estimate: the series ends at order {k}"));
            }
            odm_record(&r, g_text)
        }
        Method::BorelMap { sigma, a } => {
            let gf = finite_g(&g, "borel-map")?;
            let a = match a {
                Some(a) => prec.parse(a)?,
                None => file.singularity_a(prec)?.ok_or_else(|| {
                    Error::usage("borel-map needs --a or large_order.A in the series file")
                })?,
            };
            let cfg = BorelConfig::new(prec.parse(sigma)?, a, k, prec)?;
            if k > s.order() {
                report.notes.push(format!(
                    "truncation {k} is above the series order {}; missing coefficients are zero",
                    s.order()
                ));
            }
            let b = borel_sum(&s, &cfg, &gf, prec)?;
            report
                .notes
                .push(format!("quadrature error estimate {}", to_decimal(&b.quadrature_error, 6)));
            Record {
                k,
                g: g_text.to_string(),
                value: Some(dec(&b.value)),
                error_estimate: Some(dec(&b.truncation_error)),
                ..Record::default()
            }
        }
        Method::BorelPade { sigma, l, m } => {
            let gf = finite_g(&g, "borel-pade")?;
            check_order(&s, l + m, "borel-pade")?;
            let (v, _) = borel_pade_sum(&s, &prec.parse(sigma)?, *l, *m, &gf, &QuadratureConfig::new(prec), prec)?;
            Record {
                k: l + m,
                g: g_text.to_string(),
                value: Some(dec(&v)),
                ..Record::default()
            }
        }
        Method::Pade { l, m } => {
            let gf = finite_g(&g, "pade")?;
            check_order(&s, l + m, "pade")?;
            let p = pade_fit(&s, *l, *m, prec)?;
            Record {
                k: l + m,
                g: g_text.to_string(),
                value: Some(dec(&pade_eval(&p, &gf, prec)?)),
                ..Record::default()
            }
        }
    };
    report.records.push(record);
    Ok(report)
}

/// Reference value for a study, or the reason there is none.
fn oracle_value(
    oracle: Oracle,
    file: &SeriesFile,
    g: &Coupling,
    prec: Precision,
) -> Result<std::result::Result<Float, String>> {
    let kind = file.generator.as_ref().map(|gen| gen.kind);
    Ok(match (oracle, kind) {
        (Oracle::None, _) => Err("no oracle requested; deltas use the error estimate".into()),
        (Oracle::Quadrature, Some(GeneratorKind::D0)) => Ok(d0_partition_value(g, prec)?),
        (Oracle::Diagonalization, Some(GeneratorKind::Anharmonic)) => {
            Ok(anharmonic_ground_value(g, prec)?)
        }
        (o, _) => Err(format!(
            "oracle {o:?} is not available for this series; falling back to the error estimate"
        )),
    })
}

fn run_study(config: &RunConfig) -> Result<RunReport> {
    let RunConfig::Study {
        series: file,
        odm,
        min_order,
        max_order,
        g: g_text,
        oracle,
        rate_power,
        precision: prec,
    } = config
    else {
        unreachable!("dispatched on the variant")
    };
    let prec = *prec;
    if min_order > max_order || *min_order < 1 {
        return Err(Error::Usage(format!(
            "orders {min_order}..={max_order} are empty or start below 1"
        )));
    }
    let s = file.series(prec)?;
    check_order(&s, max_order + 1, "study (error estimate at the last order)")?;
    let g = Coupling::parse(g_text, prec)?;
    g.check_non_negative()?;
    let table = build_rho_table(&s, &odm.mapping(prec)?)?;
    let crit = odm.criterion(prec)?;
    let mut report = RunReport::new(config.clone());
    let reference = match oracle_value(*oracle, file, &g, prec)? {
        Ok(r) => Some(r),
        Err(why) => {
            report.notes.push(why);
            None
        }
    };
    let abscissa = match rate_power {
        Some(p) => RateAbscissa::Power(prec.parse(p)?.to_f64()),
        None => RateAbscissa::Linear,
    };
    let orders: Vec<usize> = (*min_order..=*max_order).collect();
    let study = convergence_study(&table, &crit, &orders, &g, reference.as_ref(), abscissa, prec)?;
    let mut records: Vec<Record> = study
        .orders
        .iter()
        .map(|o| {
            let mut r = odm_record(&o.report, g_text);
            r.reference = reference.as_ref().map(dec);
            r.delta = o.delta.as_ref().map(dec);
            r
        })
        .collect();
    for (k, why) in &study.failures {
        records.push(Record {
            k: *k,
            g: g_text.clone(),
            diagnostic: Some(why.clone()),
            ..Record::default()
        });
    }
    records.sort_by_key(|r| r.k);
    report.records = records;
    report.fits = Some(StudyFits {
        r_fit: study.r_fit(),
        r_linear: study.r_linear(),
        rho: study.rho_fit,
        rho_extrapolation: study.rho_extrapolation,
        rate: study.rate_fit,
    });
    Ok(report)
}
