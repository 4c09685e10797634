use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gpd_core::commands::{
    cmd_eval, cmd_lorenz, cmd_sample, cmd_table1, fit_dataset, fit_report, gini_series_from_inputs,
    gini_series_table1, Table1Tolerances,
};
use gpd_core::io::{ingest, write_csv, write_json, write_lorenz_csv, InputFormat, OutputFormat};
use gpd_core::reference::table1_row;
use gpd_core::{FitConfig, GpdError, GpdParams, Normalization, QuadratureConfig, SampleSpec};
use serde_json::json;

#[derive(Debug, Parser)]
#[command(
    name = "gpd",
    version,
    about = "Gompertz-Pareto income distribution: fitting, Lorenz curves and Gini coefficients"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fit (B, x_t, alpha) to an income sample or binned CCDF and report inequality measures.
    Fit(FitArgs),
    /// Emit Lorenz curve plot data.
    Lorenz(LorenzArgs),
    /// Compare original and model-implied Gini and Gompertzian share year by year.
    GiniSeries(GiniSeriesArgs),
    /// Recompute beta, Gini* and u* for the embedded reference table.
    Table1(Table1Args),
    /// Draw a synthetic income sample.
    Sample(SampleArgs),
    /// Evaluate the distribution functions at given incomes.
    Eval(EvalArgs),
}

#[derive(Debug, Args)]
struct InputArgs {
    /// Input file.
    #[arg(long)]
    input: PathBuf,
    /// Input layout: one income per line, or `x,F` pairs.
    #[arg(long, default_value = "raw")]
    format: InputFormat,
    /// Income normalization for raw input: mean, none or const=<v>.
    #[arg(long = "normalize", default_value = "mean")]
    normalization: Normalization,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Write to this file instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Output encoding.
    #[arg(long = "output-format")]
    output_format: Option<OutputFormat>,
}

#[derive(Debug, Args)]
struct ParamArgs {
    /// Distribution parameters as B,XT,ALPHA.
    #[arg(long, value_parser = parse_params, conflicts_with = "year")]
    params: Option<GpdParams>,
    /// Take the parameters from this year of the reference table.
    #[arg(long)]
    year: Option<i32>,
}

#[derive(Debug, Args)]
struct FitArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Year to record in the report.
    #[arg(long)]
    year: Option<i32>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct LorenzArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Fit this file instead of giving parameters.
    #[arg(long, conflicts_with_all = ["params", "year"])]
    input: Option<PathBuf>,
    #[arg(long, default_value = "raw")]
    format: InputFormat,
    #[arg(long = "normalize", default_value = "mean")]
    normalization: Normalization,
    /// Number of evenly spaced population shares.
    #[arg(long, default_value_t = 512)]
    points: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct GiniSeriesArgs {
    /// Per-year raw sample as YEAR=PATH; repeat for each year. Without any,
    /// the reference table is used.
    #[arg(long, value_parser = parse_year_input)]
    input: Vec<(i32, PathBuf)>,
    #[arg(long = "normalize", default_value = "mean")]
    normalization: Normalization,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct Table1Args {
    /// Relative tolerance on beta.
    #[arg(long, default_value_t = 0.02)]
    tol_beta: f64,
    /// Absolute tolerance on Gini*.
    #[arg(long, default_value_t = 0.01)]
    tol_gini: f64,
    /// Absolute tolerance on u*.
    #[arg(long, default_value_t = 0.5)]
    tol_u: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct SampleArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Number of draws.
    #[arg(long, visible_alias = "n")]
    points: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Destination file (one income per line).
    #[arg(long)]
    output: PathBuf,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Comma-separated incomes.
    #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
    x: Vec<f64>,
    #[command(flatten)]
    output: OutputArgs,
}

fn parse_params(s: &str) -> Result<GpdParams, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| format!("expected B,XT,ALPHA: {e}"))?;
    let [b, x_t, alpha] = v[..] else {
        return Err(format!("expected three values B,XT,ALPHA, got {}", v.len()));
    };
    GpdParams::new(b, x_t, alpha).map_err(|e| e.to_string())
}

fn parse_year_input(s: &str) -> Result<(i32, PathBuf), String> {
    let (y, p) = s
        .split_once('=')
        .ok_or_else(|| format!("expected YEAR=PATH, got `{s}`"))?;
    let year = y.trim().parse().map_err(|e| format!("bad year `{y}`: {e}"))?;
    Ok((year, PathBuf::from(p)))
}

impl ParamArgs {
    fn resolve(&self) -> Result<GpdParams, GpdError> {
        match (&self.params, self.year) {
            (Some(p), _) => Ok(*p),
            (None, Some(y)) => table1_row(y)?.params(),
            (None, None) => Err(GpdError::InvalidParameter {
                name: "params",
                value: f64::NAN,
                reason: "give --params B,XT,ALPHA or --year",
            }),
        }
    }
}

impl OutputArgs {
    fn writer(&self) -> Result<Box<dyn Write>, GpdError> {
        Ok(match &self.output {
            Some(path) => Box::new(BufWriter::new(File::create(path)?)),
            None => Box::new(io::stdout().lock()),
        })
    }

    fn format_or(&self, default: OutputFormat) -> OutputFormat {
        self.output_format.unwrap_or(default)
    }
}

/// Runs a subcommand; `Ok(false)` means it completed but its checks failed.
fn run(cli: Cli) -> Result<bool, GpdError> {
    let quad = QuadratureConfig::default();
    match cli.command {
        Command::Fit(a) => {
            let data = ingest(&a.input.input, a.input.format, a.input.normalization)?;
            let result = fit_dataset(&data, &FitConfig::default())?;
            let report = fit_report(&result, a.year, &quad)?;
            let w = a.output.writer()?;
            match a.output.format_or(OutputFormat::Json) {
                OutputFormat::Json => write_json(w, &report)?,
                OutputFormat::Csv => write_csv(w, &[report])?,
            }
        }
        Command::Lorenz(a) => {
            let params = match &a.input {
                Some(path) => {
                    let data = ingest(path, a.format, a.normalization)?;
                    fit_dataset(&data, &FitConfig::default())?.params
                }
                None => a.params.resolve()?,
            };
            let curve = cmd_lorenz(&params, a.points, &quad)?;
            let w = a.output.writer()?;
            match a.output.format_or(OutputFormat::Csv) {
                OutputFormat::Csv => write_lorenz_csv(w, &curve)?,
                OutputFormat::Json => {
                    let rows: Vec<_> = curve
                        .points()
                        .iter()
                        .enumerate()
                        .map(|(i, &(f, f1))| {
                            json!({
                                "F": f,
                                "F1": f1,
                                "transition": u8::from(curve.transition_index() == Some(i)),
                            })
                        })
                        .collect();
                    write_json(w, &rows)?;
                }
            }
        }
        Command::GiniSeries(a) => {
            let series = if a.input.is_empty() {
                gini_series_table1(&quad)?
            } else {
                gini_series_from_inputs(&a.input, a.normalization, &FitConfig::default(), &quad)?
            };
            let w = a.output.writer()?;
            match a.output.format_or(OutputFormat::Csv) {
                OutputFormat::Csv => write_csv(w, &series.rows)?,
                OutputFormat::Json => write_json(w, &series)?,
            }
        }
        Command::Table1(a) => {
            let tol = Table1Tolerances {
                beta_rel: a.tol_beta,
                gini: a.tol_gini,
                u: a.tol_u,
            };
            let report = cmd_table1(&tol, &quad)?;
            let w = a.output.writer()?;
            match a.output.format_or(OutputFormat::Json) {
                OutputFormat::Json => write_json(w, &report)?,
                OutputFormat::Csv => write_csv(w, &report.rows)?,
            }
            return Ok(report.all_pass);
        }
        Command::Sample(a) => {
            let params = a.params.resolve()?;
            let spec = SampleSpec::new(a.points, a.seed)?;
            cmd_sample(&params, &spec, &a.output)?;
        }
        Command::Eval(a) => {
            let params = a.params.resolve()?;
            let rows = cmd_eval(&params, &a.x, &quad)?;
            let w = a.output.writer()?;
            match a.output.format_or(OutputFormat::Csv) {
                OutputFormat::Csv => write_csv(w, &rows)?,
                OutputFormat::Json => write_json(w, &rows)?,
            }
        }
    }
    Ok(true)
}

fn report_error(code: &str, message: &str) {
    eprintln!("{}", json!({ "error": code, "message": message }));
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            report_error("usage", e.to_string().trim_end());
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            report_error(e.code(), &e.to_string());
            ExitCode::FAILURE
        }
    }
}
