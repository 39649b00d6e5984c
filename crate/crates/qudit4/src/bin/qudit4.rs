//! Command-line surface: analyze state files, run sweeps, drive the Werner
//! pipeline, probe pure-state columns, and emit the errata report.
//!
//! Exit codes: 0 success, 1 internal error, 2 invalid input.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use qudit4::linalg::LinalgError;
use qudit4::measures::{self, EntanglementReport, MeasureError};
use qudit4::scan::{self, Family, ScanError, ScanSpec};
use qudit4::states::{self, StateError};
use qudit4::unitaries::{self, UnitaryParams};

/// Schema tag for machine-readable output.
const CLI_SCHEMA: &str = "qudit4-cli/1";

#[derive(Parser)]
#[command(
    name = "qudit4",
    about = "Separability analysis of four-level states",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a density-matrix JSON file.
    Analyze(AnalyzeArgs),
    /// Sweep a rotation family and emit CSV.
    Scan(ScanArgs),
    /// Run the two-stage Werner pipeline.
    Werner(WernerArgs),
    /// Analyze the pure state built from first-column parameters.
    Pure(PureArgs),
    /// Emit the errata report as JSON.
    Errata,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Path to a density-matrix JSON file.
    file: String,
    /// Machine-readable output with a schema field.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ScanArgs {
    /// Preset: pure-state one-angle rotation, phi over [0, pi], 401 nodes.
    #[arg(long, conflicts_with_all = ["fig2", "family", "spectrum", "sweep"])]
    fig1: bool,
    /// Preset: pure-state first-column sweep, a over [0, 1], 401 nodes.
    #[arg(long, conflicts_with_all = ["family", "spectrum", "sweep"])]
    fig2: bool,
    /// Pinned d for --fig2.
    #[arg(long, requires = "fig2")]
    d: Option<f64>,
    /// Pinned f for --fig2.
    #[arg(long, requires = "fig2")]
    f: Option<f64>,
    /// Rotation family: rotation14, first-column, xtype, cellular, block, generic.
    #[arg(long)]
    family: Option<String>,
    /// Diagonal spectrum as four comma-separated values.
    #[arg(long)]
    spectrum: Option<String>,
    /// Swept parameter as name=start:stop:steps; repeat for a second axis.
    /// `pi` literals are accepted, e.g. phi=0:pi:401.
    #[arg(long)]
    sweep: Vec<String>,
    /// Pinned parameter as name=value; repeatable.
    #[arg(long)]
    fixed: Vec<String>,
    /// Random sampling instead of a grid: number of draws over the sweep ranges.
    #[arg(long)]
    samples: Option<usize>,
    /// RNG seed for --samples.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write CSV here instead of stdout.
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct WernerArgs {
    /// Werner parameter, in [-1/3, 1].
    #[arg(long)]
    p: f64,
    /// Second-stage rotation angle.
    #[arg(long, default_value_t = 0.0)]
    phi: f64,
    /// Also search for the separable window over phi in [0, pi/2].
    #[arg(long)]
    boundaries: bool,
    /// Machine-readable output with a schema field.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct PureArgs {
    /// Parameters as key=value: a, d, f required; phi11..phi41 default to 0.
    params: Vec<String>,
    /// Machine-readable output with a schema field.
    #[arg(long)]
    json: bool,
}

enum CliError {
    Invalid(String),
    Internal(String),
}

impl From<StateError> for CliError {
    fn from(e: StateError) -> Self {
        match e {
            StateError::Linalg(inner) => CliError::from(inner),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

impl From<LinalgError> for CliError {
    fn from(e: LinalgError) -> Self {
        match e {
            LinalgError::NotConverged { .. } => CliError::Internal(e.to_string()),
            LinalgError::NotHermitian { .. } => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<MeasureError> for CliError {
    fn from(e: MeasureError) -> Self {
        match e {
            MeasureError::Linalg(inner) => CliError::from(inner),
            MeasureError::State(inner) => CliError::from(inner),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

impl From<ScanError> for CliError {
    fn from(e: ScanError) -> Self {
        match e {
            ScanError::Eval(message) => CliError::Internal(message),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze(args) => cmd_analyze(&args),
        Command::Scan(args) => cmd_scan(&args),
        Command::Werner(args) => cmd_werner(&args),
        Command::Pure(args) => cmd_pure(&args),
        Command::Errata => cmd_errata(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Internal(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
        Err(CliError::Invalid(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

#[derive(Serialize)]
struct AnalyzeOutput<'a> {
    schema: &'a str,
    #[serde(flatten)]
    report: &'a EntanglementReport,
}

fn print_report(report: &EntanglementReport, json: bool) {
    if json {
        let out = AnalyzeOutput {
            schema: CLI_SCHEMA,
            report,
        };
        println!("{}", serde_json::to_string_pretty(&out).unwrap());
    } else {
        println!("ppt spectrum  {:?}", report.ppt_spectrum);
        println!("negativity    {}", report.negativity);
        println!("concurrence   {}", report.concurrence);
        println!("min ppt eig   {}", report.min_ppt_eig);
        println!(
            "verdict       {}{}",
            if report.separable {
                "separable"
            } else {
                "entangled"
            },
            if report.boundary {
                " (at boundary)"
            } else {
                ""
            }
        );
    }
}

fn cmd_analyze(args: &AnalyzeArgs) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&args.file)
        .map_err(|e| CliError::Invalid(format!("cannot read {}: {e}", args.file)))?;
    let rho = states::from_json(&text)?;
    let report = measures::analyze(&rho)?;
    print_report(&report, args.json);
    Ok(())
}

fn parse_spectrum(text: &str) -> Result<states::Spectrum4, CliError> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|t| {
            scan::parse_number(t).ok_or_else(|| CliError::Invalid(format!("bad number `{t}`")))
        })
        .collect::<Result<_, _>>()?;
    let values: [f64; 4] = parts
        .try_into()
        .map_err(|_| CliError::Invalid("spectrum needs exactly 4 values".to_string()))?;
    states::Spectrum4::new(values).map_err(CliError::from)
}

fn split_kv(text: &str) -> Result<(&str, &str), CliError> {
    text.split_once('=')
        .ok_or_else(|| CliError::Invalid(format!("expected key=value, got `{text}`")))
}

fn cmd_scan(args: &ScanArgs) -> Result<(), CliError> {
    let spec = if args.fig1 {
        ScanSpec {
            family: Family::Rotation14,
            spectrum: states::Spectrum4::new([1.0, 0.0, 0.0, 0.0]).unwrap(),
            axes: vec![scan::parse_range("phi", "0:pi:401")?],
            fixed: BTreeMap::new(),
        }
    } else if args.fig2 {
        let d = args
            .d
            .ok_or_else(|| CliError::Invalid("--fig2 requires --d".to_string()))?;
        let f = args
            .f
            .ok_or_else(|| CliError::Invalid("--fig2 requires --f".to_string()))?;
        let mut fixed = BTreeMap::new();
        fixed.insert("d".to_string(), d);
        fixed.insert("f".to_string(), f);
        ScanSpec {
            family: Family::FirstColumn,
            spectrum: states::Spectrum4::new([1.0, 0.0, 0.0, 0.0]).unwrap(),
            axes: vec![scan::parse_range("a", "0:1:401")?],
            fixed,
        }
    } else {
        let family_name = args
            .family
            .as_deref()
            .ok_or_else(|| CliError::Invalid("--family is required".to_string()))?;
        let family = Family::parse(family_name)
            .ok_or_else(|| CliError::Invalid(format!("unknown family `{family_name}`")))?;
        let spectrum_text = args
            .spectrum
            .as_deref()
            .ok_or_else(|| CliError::Invalid("--spectrum is required".to_string()))?;
        let mut axes = Vec::new();
        for sweep in &args.sweep {
            let (name, range) = split_kv(sweep)?;
            axes.push(scan::parse_range(name, range)?);
        }
        let mut fixed = BTreeMap::new();
        for pin in &args.fixed {
            let (name, value) = split_kv(pin)?;
            let value = scan::parse_number(value)
                .ok_or_else(|| CliError::Invalid(format!("bad number `{value}`")))?;
            fixed.insert(name.to_string(), value);
        }
        ScanSpec {
            family,
            spectrum: parse_spectrum(spectrum_text)?,
            axes,
            fixed,
        }
    };

    let rows = match args.samples {
        Some(samples) => scan::sweep_random(
            spec.family,
            &spec.spectrum,
            &spec.axes,
            &spec.fixed,
            samples,
            args.seed,
        ),
        None => scan::sweep(&spec)?,
    };
    let names: Vec<String> = spec.axes.iter().map(|a| a.name.clone()).collect();
    let csv = scan::write_csv(&names, &rows);
    match &args.out {
        Some(path) => std::fs::write(path, csv)
            .map_err(|e| CliError::Internal(format!("cannot write {path}: {e}")))?,
        None => print!("{csv}"),
    }
    Ok(())
}

#[derive(Serialize)]
struct WernerOutput<'a> {
    schema: &'a str,
    p: f64,
    phi: f64,
    #[serde(flatten)]
    report: &'a EntanglementReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    computed_window: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    published_window_see_errata: Option<[f64; 2]>,
}

fn cmd_werner(args: &WernerArgs) -> Result<(), CliError> {
    let pipe = scan::werner_pipeline(args.p, args.phi)?;
    let mut computed_window = None;
    if args.boundaries {
        match scan::rotated_werner_boundaries(args.p, 501) {
            Ok(points) => computed_window = Some(points),
            Err(ScanError::NoBoundary) => computed_window = Some(Vec::new()),
            Err(other) => return Err(other.into()),
        }
    }
    let published = (args.boundaries && args.p >= 0.5)
        .then(|| qudit4::errata::published_window_from_formula(args.p));
    if args.json {
        let out = WernerOutput {
            schema: CLI_SCHEMA,
            p: args.p,
            phi: args.phi,
            report: &pipe.report,
            computed_window: computed_window.clone(),
            published_window_see_errata: published,
        };
        println!("{}", serde_json::to_string_pretty(&out).unwrap());
        return Ok(());
    }
    println!("p = {}, phi = {}", args.p, args.phi);
    print_report(&pipe.report, false);
    if let Some(points) = computed_window {
        if points.is_empty() {
            println!("separable for all phi");
        } else {
            let mut line = String::from("computed window ");
            for (i, x) in points.iter().enumerate() {
                if i > 0 {
                    line.push_str(", ");
                }
                let _ = write!(line, "{x:.5}");
            }
            println!("{line}");
        }
        if let Some([lo, hi]) = published {
            println!("published window (see errata)  {lo:.5}, {hi:.5}");
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct PureOutput<'a> {
    schema: &'a str,
    column: [[f64; 2]; 4],
    schmidt_determinant: [f64; 2],
    separable: bool,
    #[serde(flatten)]
    report: &'a EntanglementReport,
}

fn cmd_pure(args: &PureArgs) -> Result<(), CliError> {
    // Only the first column matters here, so b, c, h are pinned to zero and
    // just a, d, f plus the first-column phases are accepted.
    let mut map: BTreeMap<String, f64> = BTreeMap::new();
    for pair in &args.params {
        let (key, value) = split_kv(pair)?;
        match key {
            "a" | "d" | "f" | "phi11" | "phi21" | "phi31" | "phi41" => {}
            other => return Err(CliError::Invalid(format!("unknown parameter `{other}`"))),
        }
        let value = scan::parse_number(value)
            .ok_or_else(|| CliError::Invalid(format!("bad number `{value}`")))?;
        map.insert(key.to_string(), value);
    }
    for required in ["a", "d", "f"] {
        if !map.contains_key(required) {
            return Err(CliError::Invalid(format!("missing parameter `{required}`")));
        }
    }
    map.insert("b".to_string(), 0.0);
    map.insert("c".to_string(), 0.0);
    map.insert("h".to_string(), 0.0);
    let params = UnitaryParams::from_map(&map).map_err(|e| CliError::Invalid(e.to_string()))?;
    let col = unitaries::first_column(&params);
    let det = measures::schmidt_determinant(&col);
    let rho = measures::pure_transform(&col)?;
    let report = measures::analyze(&rho)?;
    let separable = measures::pure_separable(&col)?;
    if args.json {
        let out = PureOutput {
            schema: CLI_SCHEMA,
            column: col.map(|z| [z.re, z.im]),
            schmidt_determinant: [det.re, det.im],
            separable,
            report: &report,
        };
        println!("{}", serde_json::to_string_pretty(&out).unwrap());
    } else {
        println!("column        {col:?}");
        println!("schmidt det   {det}");
        print_report(&report, false);
    }
    Ok(())
}

fn cmd_errata() -> Result<(), CliError> {
    let report = qudit4::errata::report();
    println!("{}", serde_json::to_string_pretty(&report).unwrap());
    Ok(())
}
