//! Command-line surface.

use std::borrow::Cow;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use fpnfr_core::json::{decimal_to_value, DecimalStyle};
use fpnfr_core::rubric::{is_tabled, MappingOrigin};
use fpnfr_core::{
    calibrate_with, compute_ufp, estimate_with, fp_bounds, mapping_table, one_way_sensitivity,
    tornado, CalibrationResult, DegreeOfInfluence, EffortModel, EstimateError, EstimateOptions,
    EstimateReport, Factor, FitSummary, Guideline, ModelParams, NfrId, Project, RubricTable,
    SensitivityResult, Vary, WeightProfile, DEFAULT_PROFILE,
};
use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use crate::document::{parse_project_file, render_project, ParseOptions, ProjectFileError};
use crate::profiles::{resolve_profile, ProfileResolveError, PROFILE_PATH_ENV};
use crate::records::{parse_records, RecordsError};
use crate::report::{render_reports, OutputFormat, RenderOptions};
use crate::table::Table;
use crate::wizard::{run_wizard, WizardError, WizardOptions};

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const VALIDATION: i32 = 1;
    pub const PARSE: i32 = 2;
    pub const WIZARD_ABORT: i32 = 3;
    pub const INTERNAL: i32 = 4;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    WizardAbort(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => exit::VALIDATION,
            CliError::Parse(_) => exit::PARSE,
            CliError::WizardAbort(_) => exit::WIZARD_ABORT,
            CliError::Internal(_) => exit::INTERNAL,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "fpnfr",
    version,
    about = "Function point sizing with an NFR-extended value adjustment factor",
    after_help = "Exit codes: 0 success, 1 validation failure, 2 parse failure, 3 wizard abort, 4 internal error"
)]
pub struct Cli {
    /// Weight profile name or file (overrides the project's own profile).
    #[arg(long, global = true, value_name = "NAME|FILE")]
    pub profile: Option<String>,

    /// Output format (text by default; csv for `estimate --dir`).
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,

    /// Reject unknown fields in project documents.
    #[arg(long, global = true)]
    pub strict: bool,

    /// DI divergence at which an NFR is flagged against its mapped GSCs.
    #[arg(long, global = true, default_value_t = fpnfr_core::DEFAULT_THRESHOLD)]
    pub threshold: u8,

    /// Write output to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,

    /// Emit decimal fields as JSON strings.
    #[arg(long, global = true)]
    pub decimal_strings: bool,

    /// Add a generation timestamp to text output.
    #[arg(long, global = true)]
    pub timestamp: bool,

    /// Rubric override file.
    #[arg(long, global = true, value_name = "FILE")]
    pub rubrics: Option<PathBuf>,

    /// Extra directory searched for `<NAME>.json` weight profiles.
    #[arg(long, global = true, env = PROFILE_PATH_ENV, value_name = "DIR")]
    pub profile_path: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Unadjusted function points only.
    Count { project: PathBuf },
    /// Full estimate report for one project, or a CSV over a directory.
    Estimate {
        #[arg(required_unless_present = "dir")]
        project: Option<PathBuf>,
        #[arg(long, conflicts_with = "project")]
        dir: Option<PathBuf>,
    },
    /// Build a project document interactively.
    Wizard {
        #[arg(long, default_value = "untitled")]
        name: String,
        /// Re-prompts allowed per question.
        #[arg(long, default_value_t = 3)]
        retries: u32,
    },
    /// Print the DI guideline table for an NFR.
    Rubric { nfr: NfrId },
    /// Print the NFR → GSC mapping.
    Mapping,
    /// One-way sensitivity of the extended FP count.
    Sensitivity {
        project: PathBuf,
        /// Sweep a single factor (`security`, `gsc.performance`, `nfr.performance`, ...).
        #[arg(long, conflicts_with = "tornado")]
        factor: Option<Factor>,
        /// Sweep all 21 factors, largest swing first (default).
        #[arg(long)]
        tornado: bool,
    },
    /// Extended FP with a rating group forced to all-0 and all-5.
    Bounds {
        project: PathBuf,
        #[arg(long, default_value = "all", value_parser = ["gsc", "nfr", "all"])]
        vary: String,
    },
    /// Fit an effort model to historical records.
    Calibrate {
        #[arg(long, value_name = "FILE")]
        records: PathBuf,
        #[arg(long, value_parser = ["linear", "power"])]
        model: String,
        /// PRED quantile.
        #[arg(long, default_value_t = fpnfr_core::analysis::calibration::DEFAULT_PRED_LEVEL)]
        pred: f64,
    },
}

impl Cli {
    fn decimal_style(&self) -> DecimalStyle {
        if self.decimal_strings {
            DecimalStyle::String
        } else {
            DecimalStyle::Number
        }
    }

    fn parse_options(&self) -> ParseOptions {
        ParseOptions { strict: self.strict }
    }

    fn format_or(&self, default: OutputFormat) -> OutputFormat {
        self.format.unwrap_or(default)
    }
}

pub fn run<R: BufRead>(cli: &Cli, stdin: R, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Count { project } => {
            let (project, profile) = load_with_profile(cli, project, stderr)?;
            let ufp = compute_ufp(&project.inventory, &profile);
            let mut table = Table::new(
                "Unadjusted function points",
                &["project", "weight_profile", "ufp"],
                json!({
                    "project": project.name,
                    "weight_profile": profile.name(),
                    "ufp": decimal_to_value(ufp, cli.decimal_style()),
                }),
            );
            table.row([project.name.as_str(), profile.name(), &ufp.to_string()]);
            emit(cli, stdout, table.render(cli.format_or(OutputFormat::Text)).as_bytes())
        }
        Command::Estimate { project: Some(path), .. } => {
            let report = estimate_file(cli, path, stderr)?;
            let out = render_reports(&[report], cli.format_or(OutputFormat::Text), &render_options(cli));
            emit(cli, stdout, &out.content)
        }
        Command::Estimate { dir: Some(dir), .. } => estimate_dir(cli, dir, stdout, stderr),
        Command::Estimate { .. } => Err(CliError::Parse("estimate needs a project file or --dir".into())),
        Command::Wizard { name, retries } => {
            let rubrics = load_rubrics(cli)?;
            let options = WizardOptions {
                name: name.clone(),
                weight_profile: cli.profile.clone().unwrap_or_else(|| DEFAULT_PROFILE.to_owned()),
                max_retries: *retries,
            };
            let project = run_wizard(stdin, &mut *stderr, &rubrics, &options).map_err(|e| match e {
                WizardError::Io(io) => CliError::Internal(format!("wizard I/O error: {io}")),
                other => CliError::WizardAbort(format!("{other}; nothing written")),
            })?;
            emit(cli, stdout, render_project(&project).as_bytes())
        }
        Command::Rubric { nfr } => {
            let rubrics = load_rubrics(cli)?;
            emit(cli, stdout, rubric_table(&rubrics, *nfr).render(cli.format_or(OutputFormat::Text)).as_bytes())
        }
        Command::Mapping => emit(cli, stdout, mapping_listing().render(cli.format_or(OutputFormat::Text)).as_bytes()),
        Command::Sensitivity { project, factor, .. } => {
            let (project, profile) = load_with_profile(cli, project, stderr)?;
            let results = match factor {
                Some(f) => vec![one_way_sensitivity(&project, &profile, *f).map_err(estimate_error)?],
                None => tornado(&project, &profile).map_err(estimate_error)?,
            };
            let table = sensitivity_table(&project.name, &results, cli.decimal_style());
            emit(cli, stdout, table.render(cli.format_or(OutputFormat::Text)).as_bytes())
        }
        Command::Bounds { project, vary } => {
            let (project, profile) = load_with_profile(cli, project, stderr)?;
            let mode: Vary = vary.parse().map_err(|e| CliError::Parse(format!("{e}")))?;
            let (min, max) = fp_bounds(&project, &profile, mode).map_err(estimate_error)?;
            let style = cli.decimal_style();
            let mut table = Table::new(
                "Extended FP bounds",
                &["project", "vary", "min_fp", "max_fp"],
                json!({
                    "project": project.name,
                    "vary": vary,
                    "min_fp": decimal_to_value(min, style),
                    "max_fp": decimal_to_value(max, style),
                }),
            );
            table.row([project.name.clone(), vary.clone(), min.to_string(), max.to_string()]);
            emit(cli, stdout, table.render(cli.format_or(OutputFormat::Text)).as_bytes())
        }
        Command::Calibrate { records, model, pred } => {
            let model: EffortModel = model.parse().map_err(|e| CliError::Parse(format!("{e}")))?;
            let bytes = read(records)?;
            let base = records.parent().unwrap_or(Path::new("."));
            let records = parse_records(&bytes, base, cli.parse_options()).map_err(|e| match e {
                RecordsError::Project {
                    source: ProjectFileError::Invalid(_),
                    ..
                } => CliError::Validation(e.to_string()),
                RecordsError::Io { .. } => CliError::Internal(e.to_string()),
                _ => CliError::Parse(e.to_string()),
            })?;
            let spec = cli.profile.as_deref().unwrap_or(DEFAULT_PROFILE);
            let profile = resolve(cli, spec)?;
            let result = calibrate_with(&records, &profile, model, *pred)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            emit(cli, stdout, calibration_table(&result).render(cli.format_or(OutputFormat::Text)).as_bytes())
        }
    }
}

fn render_options(cli: &Cli) -> RenderOptions {
    RenderOptions {
        decimal_style: cli.decimal_style(),
        timestamp: cli.timestamp.then(|| chrono::Utc::now().to_rfc3339()),
    }
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| CliError::Internal(format!("cannot read {}: {e}", path.display())))
}

fn load_project(cli: &Cli, path: &Path, stderr: &mut dyn Write) -> Result<Project, CliError> {
    let bytes = read(path)?;
    let parsed = parse_project_file(&bytes, cli.parse_options()).map_err(|e| match e {
        ProjectFileError::Parse(p) => CliError::Parse(format!("{}: {p}", path.display())),
        ProjectFileError::Invalid(v) => CliError::Validation(
            v.iter()
                .map(|v| format!("{}: {v}", path.display()))
                .collect::<Vec<_>>()
                .join("\n"),
        ),
    })?;
    for w in &parsed.warnings {
        let _ = writeln!(stderr, "warning: {}: {w}", path.display());
    }
    Ok(parsed.project)
}

fn resolve(cli: &Cli, spec: &str) -> Result<WeightProfile, CliError> {
    resolve_profile(spec, cli.profile_path.as_deref()).map_err(|e| match e {
        ProfileResolveError::NotFound { .. } => CliError::Validation(e.to_string()),
        ProfileResolveError::Invalid { .. } => CliError::Parse(e.to_string()),
        ProfileResolveError::Io { .. } => CliError::Internal(e.to_string()),
    })
}

/// Loads a project and the profile it is counted against. `--profile`
/// overrides the project's own profile name.
fn load_with_profile(cli: &Cli, path: &Path, stderr: &mut dyn Write) -> Result<(Project, WeightProfile), CliError> {
    let mut project = load_project(cli, path, stderr)?;
    let spec: Cow<'_, str> = match &cli.profile {
        Some(p) => Cow::Borrowed(p),
        None => Cow::Owned(project.weight_profile.clone()),
    };
    let profile = resolve(cli, &spec)?;
    project.weight_profile = profile.name().to_owned();
    Ok((project, profile))
}

fn estimate_error(e: EstimateError) -> CliError {
    match e {
        EstimateError::Invalid(_) | EstimateError::Range(_) => CliError::Validation(e.to_string()),
    }
}

fn estimate_file(cli: &Cli, path: &Path, stderr: &mut dyn Write) -> Result<EstimateReport, CliError> {
    let (project, profile) = load_with_profile(cli, path, stderr)?;
    estimate_with(
        &project,
        &profile,
        EstimateOptions {
            warning_threshold: cli.threshold,
        },
    )
    .map_err(estimate_error)
}

fn estimate_dir(cli: &Cli, dir: &Path, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| CliError::Internal(format!("cannot list {}: {e}", dir.display())))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();

    let results: Vec<(Result<EstimateReport, CliError>, Vec<u8>)> = files
        .par_iter()
        .map(|path| {
            let mut diagnostics = Vec::new();
            let result = estimate_file(cli, path, &mut diagnostics);
            (result, diagnostics)
        })
        .collect();

    let mut reports = Vec::new();
    let mut worst: Option<CliError> = None;
    for (path, (result, diagnostics)) in files.iter().zip(results) {
        let _ = stderr.write_all(&diagnostics);
        match result {
            Ok(r) => reports.push(r),
            Err(e) => {
                let _ = writeln!(stderr, "skipped {}: {e}", path.display());
                if worst.as_ref().is_none_or(|w| e.exit_code() > w.exit_code()) {
                    worst = Some(e);
                }
            }
        }
    }
    let out = render_reports(&reports, cli.format_or(OutputFormat::Csv), &render_options(cli));
    emit(cli, stdout, &out.content)?;
    match worst {
        None => Ok(()),
        Some(e) => Err(match e {
            CliError::Validation(_) => CliError::Validation("one or more projects failed validation".into()),
            CliError::Parse(_) => CliError::Parse("one or more project files failed to parse".into()),
            other => other,
        }),
    }
}

fn load_rubrics(cli: &Cli) -> Result<RubricTable, CliError> {
    let base = RubricTable::embedded();
    match &cli.rubrics {
        None => Ok(base.clone()),
        Some(path) => {
            let text = String::from_utf8(read(path)?)
                .map_err(|_| CliError::Parse(format!("{}: not UTF-8", path.display())))?;
            base.with_overrides(&text)
                .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
        }
    }
}

pub fn rubric_table(rubrics: &RubricTable, nfr: NfrId) -> Table {
    let rows: Vec<(DegreeOfInfluence, Guideline<'_>)> = DegreeOfInfluence::levels()
        .map(|d| (d, rubrics.guideline(nfr, d)))
        .collect();
    let guidelines: Vec<Value> = rows
        .iter()
        .filter_map(|(d, g)| match g {
            Guideline::Text { text, completeness } => Some(json!({
                "di": d.value(),
                "text": text,
                "completeness": completeness,
            })),
            Guideline::NoRubric => None,
        })
        .collect();
    let title = rubrics
        .title(nfr)
        .map(str::to_owned)
        .unwrap_or_else(|| format!("DI guidelines for {nfr}"));
    let mut table = Table::new(
        title.clone(),
        &["di", "guideline"],
        json!({
            "nfr": nfr.name(),
            "title": title,
            "has_rubric": is_tabled(nfr),
            "guidelines": guidelines,
        }),
    );
    for (d, g) in rows {
        table.row([d.to_string(), g.to_string()]);
    }
    table
}

pub fn mapping_listing() -> Table {
    let entries: Vec<Value> = mapping_table()
        .iter()
        .map(|e| {
            json!({
                "nfr": e.nfr.name(),
                "gscs": e.gscs.iter().map(|g| g.name()).collect::<Vec<_>>(),
                "origin": e.origin,
            })
        })
        .collect();
    let mut table = Table::new("NFR to GSC mapping", &["nfr", "gscs", "origin"], Value::Array(entries));
    for e in mapping_table() {
        let gscs: Vec<&str> = e.gscs.iter().map(|g| g.name()).collect();
        let origin = match e.origin {
            MappingOrigin::Existing => "existing",
            MappingOrigin::Extended => "extended",
        };
        table.row([e.nfr.name().to_owned(), gscs.join(", "), origin.to_owned()]);
    }
    table
}

pub fn sensitivity_table(project: &str, results: &[SensitivityResult], style: DecimalStyle) -> Table {
    let json_rows: Vec<Value> = results
        .iter()
        .map(|r| {
            json!({
                "factor": r.factor.to_string(),
                "baseline_fp": decimal_to_value(r.baseline_fp, style),
                "fp_at_di": r.fp_at_di.iter().map(|d| decimal_to_value(*d, style)).collect::<Vec<_>>(),
                "swing": decimal_to_value(r.swing, style),
            })
        })
        .collect();
    let mut table = Table::new(
        format!("One-way sensitivity of extended FP: {project}"),
        &["rank", "factor", "di_0", "di_1", "di_2", "di_3", "di_4", "di_5", "baseline", "swing"],
        json!({ "project": project, "results": json_rows }),
    );
    for (i, r) in results.iter().enumerate() {
        let mut cells = vec![(i + 1).to_string(), r.factor.to_string()];
        cells.extend(r.fp_at_di.iter().map(ToString::to_string));
        cells.push(r.baseline_fp.to_string());
        cells.push(r.swing.to_string());
        table.row(cells);
    }
    table
}

fn params_json(p: ModelParams) -> Value {
    match p {
        ModelParams::Linear { a } => json!({ "a": a }),
        ModelParams::Power { c, b } => json!({ "c": c, "b": b }),
    }
}

fn params_text(p: ModelParams) -> String {
    match p {
        ModelParams::Linear { a } => format!("a={a}"),
        ModelParams::Power { c, b } => format!("c={c} b={b}"),
    }
}

pub fn calibration_table(result: &CalibrationResult) -> Table {
    let fit = |f: &FitSummary| json!({ "params": params_json(f.params), "mmre": f.mmre, "pred": f.pred });
    let pred_col = format!("pred({})", result.pred_level);
    let mut table = Table::new(
        format!("Effort model calibration ({})", result.model),
        &["measure", "model", "params", "mmre", &pred_col],
        json!({
            "model": result.model.name(),
            "pred_level": result.pred_level,
            "classic": fit(&result.classic),
            "extended": fit(&result.extended),
        }),
    );
    for (measure, f) in [("fp_classic", &result.classic), ("fp_extended", &result.extended)] {
        table.row([
            measure.to_owned(),
            result.model.name().to_owned(),
            params_text(f.params),
            f.mmre.to_string(),
            f.pred.to_string(),
        ]);
    }
    table
}

/// Writes to `--out` (atomically, via a temp file in the same directory)
/// or to stdout.
fn emit(cli: &Cli, stdout: &mut dyn Write, content: &[u8]) -> Result<(), CliError> {
    let internal = |e: std::io::Error| CliError::Internal(format!("write failed: {e}"));
    match &cli.out {
        None => stdout.write_all(content).map_err(internal),
        Some(path) => {
            let dir = match path.parent() {
                Some(p) if !p.as_os_str().is_empty() => p,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(internal)?;
            tmp.write_all(content).map_err(internal)?;
            tmp.persist(path).map_err(|e| internal(e.error))?;
            Ok(())
        }
    }
}
