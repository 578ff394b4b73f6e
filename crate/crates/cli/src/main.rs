//! `vlike`: verification runs over the Virasoro-like operator library.
//!
//! Exit codes: 0 all checks pass, 1 a check failed, 2 input error,
//! 3 inconclusive because a window or cap was too small.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use vlike_core::genus_zero::{self, FrobeniusPotential, GenusZeroData};
use vlike_core::hodge;
use vlike_core::lie::{self, Family, UniversalBracket};
use vlike_core::report::{summarize, CheckRecord, Status, Verified};
use vlike_core::spectrum::{catalog, SpectrumData, CATALOG_NAMES};
use vlike_core::stress_tensor;

#[derive(Parser)]
#[command(name = "vlike", version, about = "Exact checks of Virasoro-like operator identities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Spectrum data utilities.
    Spectrum {
        #[command(subcommand)]
        command: SpectrumCommand,
    },
    /// Run a verification suite.
    Verify {
        #[command(subcommand)]
        suite: Suite,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Export computed data.
    Export {
        #[command(subcommand)]
        what: ExportCommand,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Floating-point oracles.
    Oracle {
        #[command(subcommand)]
        what: OracleCommand,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Subcommand)]
enum SpectrumCommand {
    /// Check the spectrum axioms and print a witness for each failure.
    Validate {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Suite {
    /// [L_(m,0), L_(n,0)] = (m-n) L_(m+n,0) and evenness of L_m(nu).
    Virasoro,
    /// Fitted structure-constant table against the generating formula and closed forms.
    StructureConstants,
    /// Half-twist Virasoro relations with central terms.
    HalfTwist,
    /// The commuting operators L_(2k-1,2k).
    CommutingFamily,
    /// Brackets with L_(1,0) and L_(1,2).
    Prop33,
    /// Structure constants agree across the catalog spectra.
    Independence,
    /// Genus-zero constraints for a Frobenius potential.
    Genus0,
    /// Hodge Virasoro operators.
    Hodge,
    /// One-dimensional closed form of the Hodge operators.
    Dim1ClosedForm,
}

#[derive(Subcommand)]
enum ExportCommand {
    /// Structure-constant table as CSV with exact rational strings.
    Constants,
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Closed-form N-matrices against direct Gamma/cosine evaluation.
    GammaCheck {
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
    },
}

#[derive(Args, Clone, Debug, Default)]
struct SourceArgs {
    /// Catalog spectrum: dim1, a2 or p1.
    #[arg(long, global = true, conflicts_with = "file")]
    catalog: Option<String>,
    /// Spectrum data as JSON.
    #[arg(long, global = true)]
    file: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Args, Clone, Debug)]
struct RunArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Frobenius potential: a builtin name (dim1, a2) or a JSON file.
    #[arg(long, global = true)]
    potential: Option<String>,
    /// Operator window W.
    #[arg(long, global = true, env = "VLIKE_DEFAULT_WINDOW", default_value_t = 12)]
    window: u32,
    /// Truncation degree D of the genus-zero free energy.
    #[arg(long, global = true, default_value_t = 8)]
    degree: u32,
    /// Time-index cap K for genus zero; defaults to the degree.
    #[arg(long, global = true)]
    index_cap: Option<u32>,
    #[arg(long, global = true)]
    m_max: Option<i64>,
    #[arg(long, global = true)]
    n_max: Option<i64>,
    /// Largest k for the commuting family.
    #[arg(long, global = true, default_value_t = 3)]
    k_max: usize,
    /// σ-degree S of the Hodge operators.
    #[arg(long, global = true)]
    sigma_degree: Option<u32>,
    /// Largest k among the σ_(2k-1).
    #[arg(long, global = true, default_value_t = 2)]
    sigma_k: u32,
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

/// Input errors map to exit code 2.
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

#[derive(Serialize)]
struct RunConfig {
    suite: String,
    source: String,
    window: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    degree: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    index_cap: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    m_max: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    n_max: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sigma_degree: Option<u32>,
}

#[derive(Serialize)]
struct Report {
    config: RunConfig,
    status: Status,
    passed: usize,
    failed: usize,
    inconclusive: usize,
    records: Vec<CheckRecord>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<u8, InputError> {
    match cli.command {
        Command::Spectrum {
            command: SpectrumCommand::Validate { source, out },
        } => validate(&source, out.as_deref()),
        Command::Verify { suite, run } => {
            configure_jobs(run.jobs)?;
            let (config, records) = verify(suite, &run)?;
            emit(config, records, &run)
        }
        Command::Export {
            what: ExportCommand::Constants,
            run,
        } => {
            configure_jobs(run.jobs)?;
            export_constants(&run)
        }
        Command::Oracle {
            what: OracleCommand::GammaCheck { samples, seed, tolerance },
            run,
        } => {
            let sources = match (&run.source.catalog, &run.source.file) {
                (None, None) => CATALOG_NAMES
                    .iter()
                    .map(|n| Ok((n.to_string(), catalog(n)?)))
                    .collect::<Result<Vec<_>, InputError>>()?
                    .into_iter()
                    .filter(|(_, s)| !s.has_r())
                    .collect(),
                _ => vec![load_spectrum(&run.source)?],
            };
            let records = sources
                .iter()
                .map(|(name, s)| {
                    let mut r = stress_tensor::check_gamma_oracle(s, samples, seed, tolerance);
                    r.indices = format!("{name}: {}", r.indices);
                    r
                })
                .collect();
            let config = RunConfig {
                suite: "gamma-check".into(),
                source: sources.iter().map(|(n, _)| n.as_str()).collect::<Vec<_>>().join(","),
                window: run.window,
                degree: None,
                index_cap: None,
                m_max: None,
                n_max: None,
                sigma_degree: None,
            };
            emit(config, records, &run)
        }
    }
}

fn configure_jobs(jobs: Option<usize>) -> Result<(), InputError> {
    if let Some(n) = jobs {
        if n == 0 {
            return Err(InputError("--jobs must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn load_spectrum(source: &SourceArgs) -> Result<(String, Arc<SpectrumData>), InputError> {
    match (&source.catalog, &source.file) {
        (Some(name), _) => Ok((name.clone(), catalog(name)?)),
        (None, Some(path)) => {
            let text = fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
            Ok((path.display().to_string(), Arc::new(SpectrumData::from_json(&text)?)))
        }
        (None, None) => Err(InputError("one of --catalog or --file is required".into())),
    }
}

fn load_valid_spectrum(source: &SourceArgs) -> Result<(String, Arc<SpectrumData>), InputError> {
    let (name, s) = load_spectrum(source)?;
    s.require_valid()?;
    Ok((name, s))
}

fn load_potential(arg: Option<&str>) -> Result<(String, FrobeniusPotential), InputError> {
    let arg = arg.ok_or_else(|| InputError("--potential is required".into()))?;
    let path = Path::new(arg);
    if path.is_file() {
        let text = fs::read_to_string(path)?;
        Ok((arg.to_string(), FrobeniusPotential::from_json(&text)?))
    } else {
        Ok((arg.to_string(), FrobeniusPotential::builtin(arg)?))
    }
}

fn validate(source: &SourceArgs, out: Option<&Path>) -> Result<u8, InputError> {
    let (_, s) = load_spectrum(source)?;
    let report = s.validate();
    let text = serde_json::to_string_pretty(&report)?;
    write_output(out, &text)?;
    for f in report.failures() {
        eprintln!("{}: {}", f.property, f.witness.as_deref().unwrap_or("failed"));
    }
    Ok(if report.passed() { 0 } else { 1 })
}

fn positive(name: &str, v: i64) -> Result<(), InputError> {
    if v <= 0 {
        Err(InputError(format!("{name} must be positive")))
    } else {
        Ok(())
    }
}

fn verify(suite: Suite, run: &RunArgs) -> Result<(RunConfig, Vec<CheckRecord>), InputError> {
    positive("--window", i64::from(run.window))?;
    let mut config = RunConfig {
        suite: serde_json::to_value(suite)?.as_str().unwrap_or_default().to_string(),
        source: String::new(),
        window: run.window,
        degree: None,
        index_cap: None,
        m_max: None,
        n_max: None,
        sigma_degree: None,
    };
    let records = match suite {
        Suite::Virasoro => {
            let (name, s) = load_valid_spectrum(&run.source)?;
            let m_max = run.m_max.unwrap_or(4);
            config.source = name;
            config.m_max = Some(m_max);
            let family = Family::new(s.clone(), run.window);
            let pairs: Vec<(i64, i64)> = (-1..=m_max)
                .flat_map(|m| (-1..=m_max).map(move |n| (m, n)))
                .filter(|(m, n)| m + n >= -1)
                .collect();
            let mut records: Vec<CheckRecord> =
                pairs.par_iter().map(|&(m, n)| lie::verify_virasoro(&family, m, n)).collect();
            records.extend((-1..=m_max).map(|m| stress_tensor::check_evenness(&s, m, run.window)));
            records
        }
        Suite::StructureConstants => {
            let (name, s) = load_valid_spectrum(&run.source)?;
            let m_max = run.m_max.unwrap_or(4);
            config.source = name;
            config.m_max = Some(m_max);
            lie::verify_structure_table(&Family::new(s, run.window), m_max).1
        }
        Suite::HalfTwist => {
            let (name, s) = load_valid_spectrum(&run.source)?;
            let n_max = run.n_max.or(run.m_max).unwrap_or(3);
            config.source = name;
            config.m_max = Some(n_max);
            let family = Family::new(s, run.window);
            let pairs: Vec<(i64, i64)> = (-1..=n_max).flat_map(|m| (-1..=n_max).map(move |n| (m, n))).collect();
            pairs.par_iter().map(|&(m, n)| lie::verify_half_twist(&family, m, n)).collect()
        }
        Suite::CommutingFamily => {
            let (name, s) = load_valid_spectrum(&run.source)?;
            positive("--k-max", run.k_max as i64)?;
            config.source = name;
            config.m_max = Some(2 * run.k_max as i64 - 1);
            let family = Family::new(s.clone(), run.window);
            let pairs: Vec<(usize, usize)> =
                (1..=run.k_max).flat_map(|k| (1..=run.k_max).map(move |j| (k, j))).collect();
            let mut records: Vec<CheckRecord> =
                pairs.par_iter().map(|&(k, j)| lie::verify_commutative_family(&family, k, j)).collect();
            records.extend(
                (1..=run.k_max.min(2) as u32).map(|k| stress_tensor::check_commuting_generator_form(&s, k, run.window)),
            );
            records
        }
        Suite::Prop33 => {
            let (name, s) = load_valid_spectrum(&run.source)?;
            let m_max = run.m_max.unwrap_or(4);
            config.source = name;
            config.m_max = Some(m_max);
            let family = Family::new(s, run.window);
            let cases: Vec<((i64, usize), UniversalBracket)> = lie::admissible(m_max)
                .into_iter()
                .flat_map(|mk| [(mk, UniversalBracket::L10), (mk, UniversalBracket::L12)])
                .collect();
            cases.par_iter().map(|&((m, k), w)| lie::verify_prop_univ(&family, m, k, w)).collect()
        }
        Suite::Independence => {
            let m_max = run.m_max.unwrap_or(3);
            config.source = CATALOG_NAMES.join(",");
            config.m_max = Some(m_max);
            let spectra = CATALOG_NAMES
                .iter()
                .map(|n| Ok((n.to_string(), catalog(n)?)))
                .collect::<Result<Vec<_>, InputError>>()?;
            let adm = lie::admissible(m_max);
            let cases: Vec<(i64, usize, i64, usize)> = adm
                .iter()
                .flat_map(|&(m, k)| adm.iter().map(move |&(n, l)| (m, k, n, l)))
                .collect();
            cases
                .par_iter()
                .map(|&(m, k, n, l)| lie::verify_independence(&spectra, run.window, m, k, n, l))
                .collect()
        }
        Suite::Genus0 => {
            let (name, p) = load_potential(run.potential.as_deref())?;
            positive("--degree", i64::from(run.degree))?;
            let cap = run.index_cap.unwrap_or(run.degree);
            positive("--index-cap", i64::from(cap))?;
            let m_max = run.m_max.unwrap_or(3);
            config.source = name;
            config.window = cap;
            config.degree = Some(run.degree);
            config.index_cap = Some(cap);
            config.m_max = Some(m_max);
            let mut records = vec![p.check_wdvv(), p.check_quasi_homogeneity()];
            match GenusZeroData::build(p, cap, run.degree) {
                Ok(data) => {
                    records.push(genus_zero::check_orthogonality(
                        &data.potential,
                        &data.calibration,
                        data.calibration.k_max(),
                    ));
                    records.push(genus_zero::check_principal_hierarchy(
                        &data.potential,
                        &data.calibration,
                        &data.v_top,
                        cap,
                        run.degree,
                    ));
                    records.extend(genus_zero::check_all_constraints(&data, m_max));
                }
                Err(e) => records.push(CheckRecord::new("genus-zero data", "", Some(cap)).from_outcome(Err(e))),
            }
            records
        }
        Suite::Hodge => {
            let (name, s) = load_valid_spectrum(&run.source)?;
            let n_max = run.n_max.unwrap_or(2);
            let sd = run.sigma_degree.unwrap_or(2);
            config.source = name;
            config.n_max = Some(n_max);
            config.sigma_degree = Some(sd);
            let family = Family::new(s.clone(), run.window);
            let mut records = vec![hodge::verify_minus_one_shift(&family, sd, run.sigma_k)];
            let paths: Vec<Vec<CheckRecord>> = (-1..=n_max)
                .into_par_iter()
                .map(|n| hodge::verify_two_paths(&family, n, sd, run.sigma_k))
                .collect();
            records.extend(paths.into_iter().flatten());
            let pairs: Vec<(i64, i64)> = (-1..=n_max).flat_map(|m| (m + 1..=n_max).map(move |n| (m, n))).collect();
            let brackets: Vec<Vec<CheckRecord>> = pairs
                .par_iter()
                .map(|&(m, n)| hodge::verify_hodge_virasoro(&family, m, n, sd, run.sigma_k))
                .collect();
            records.extend(brackets.into_iter().flatten());
            records
        }
        Suite::Dim1ClosedForm => {
            let source = if run.source.catalog.is_none() && run.source.file.is_none() {
                SourceArgs {
                    catalog: Some("dim1".into()),
                    file: None,
                }
            } else {
                run.source.clone()
            };
            let (name, s) = load_valid_spectrum(&source)?;
            let n_max = run.n_max.unwrap_or(1);
            let sd = run.sigma_degree.unwrap_or(1);
            config.source = name;
            config.n_max = Some(n_max);
            config.sigma_degree = Some(sd);
            let family = Family::new(s, run.window);
            (0..=n_max)
                .flat_map(|n| hodge::verify_dim1_closed_form(&family, n, sd, run.sigma_k))
                .collect()
        }
    };
    Ok((config, records))
}

fn export_constants(run: &RunArgs) -> Result<u8, InputError> {
    let (_, s) = load_valid_spectrum(&run.source)?;
    let m_max = run.m_max.unwrap_or(2);
    match lie::fit_table(&Family::new(s, run.window), m_max) {
        Ok(table) => {
            write_output(run.out.as_deref(), &table.to_csv())?;
            Ok(0)
        }
        Err(e) => {
            eprintln!("error: {e}");
            Ok(if vlike_core::report::is_truncation(&e) { 3 } else { 1 })
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn verified_text(v: &Verified) -> String {
    match v {
        Verified::Radius(r) => format!("radius {r}"),
        Verified::Degree(d) => format!("degree {d}"),
        Verified::Exact => "exact".into(),
        Verified::None => String::new(),
    }
}

fn emit(config: RunConfig, records: Vec<CheckRecord>, run: &RunArgs) -> Result<u8, InputError> {
    let status = summarize(&records);
    let count = |s: Status| records.iter().filter(|r| r.status == s).count();
    let report = Report {
        config,
        status,
        passed: count(Status::Pass),
        failed: count(Status::Fail),
        inconclusive: count(Status::Inconclusive),
        records,
    };
    let text = match run.format {
        Format::Json => serde_json::to_string_pretty(&report)?,
        Format::Csv => {
            let mut out = String::from("identity,indices,window,verified,status,detail\n");
            for r in &report.records {
                let status = serde_json::to_value(r.status)?;
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    csv_field(&r.identity),
                    csv_field(&r.indices),
                    r.window.map(|w| w.to_string()).unwrap_or_default(),
                    verified_text(&r.verified),
                    status.as_str().unwrap_or_default(),
                    csv_field(r.detail.as_deref().unwrap_or(""))
                ));
            }
            out
        }
    };
    write_output(run.out.as_deref(), &text)?;
    eprintln!(
        "{}: {} passed, {} failed, {} inconclusive",
        report.config.suite, report.passed, report.failed, report.inconclusive
    );
    Ok(match status {
        Status::Pass => 0,
        Status::Fail => 1,
        Status::Inconclusive => 3,
    })
}

fn write_output(out: Option<&Path>, text: &str) -> Result<(), InputError> {
    match out {
        Some(path) => fs::write(path, format!("{text}\n")).map_err(|e| InputError(format!("{}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}
