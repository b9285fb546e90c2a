//! The `impact` command line.
//!
//! [`run`] parses arguments, computes every requested artifact, and only then
//! writes files, so a failing invocation leaves no partial outputs behind.
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use impact_core::io::{
    format_number, read_dataset_csv, write_curve_json, write_report_json, write_sensitivity_csv,
    Axis, Context, CurveMetadata, OutputTargets, RunConfig,
};
use impact_core::{
    best_threshold, compare, impact_curve, improvement_curve, render_svg, sensitivity_curve,
    trivial_switch_point, CostModel, Dataset, Domain, Error, PlotSpec, Series, ValueFamily,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "impact", version, about = "Impact curves for thresholded real-valued predictions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Impact of every candidate threshold at one fixed context.
    Sensitivity(SensitivityArgs),
    /// Best achievable impact as a function of θ.
    Curve(CurveArgs),
    /// Impact curve minus the better trivial policy.
    Improve(CurveArgs),
    /// The impact-maximizing threshold at one fixed context.
    Best(BestArgs),
    /// Dominance report for two models on the same family and domain.
    Compare(CompareArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FamilyKind {
    Ratio,
    Cutoff,
    Affine,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum AxisArg {
    Theta,
    Beta,
}

#[derive(Args, Debug)]
struct FamilyArgs {
    #[arg(long, value_enum)]
    family: FamilyKind,
    /// Affine only: slope = slope_coeff·target + slope_offset
    #[arg(long, allow_negative_numbers = true)]
    slope_coeff: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    slope_offset: Option<f64>,
    /// Affine only: intercept = intercept_coeff·target + intercept_offset
    #[arg(long, allow_negative_numbers = true)]
    intercept_coeff: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    intercept_offset: Option<f64>,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct ContextArgs {
    #[arg(long, allow_negative_numbers = true)]
    theta: Option<f64>,
    /// Ratio family only; impacts are reported in reduced units
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,
    /// Ratio family only: alpha,cost_accept,cost_reject; impacts are
    /// reported in full-cost units
    #[arg(long, value_name = "A,CA,CR", allow_hyphen_values = true)]
    costs: Option<String>,
}

#[derive(Args, Debug)]
struct DomainArgs {
    #[arg(long, allow_negative_numbers = true, requires = "theta_max")]
    theta_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true, requires = "theta_min")]
    theta_max: Option<f64>,
    /// Name of the x-axis in JSON and SVG output (beta requires the ratio family)
    #[arg(long, value_enum, default_value_t = AxisArg::Theta)]
    axis: AxisArg,
}

#[derive(Args, Debug)]
struct SensitivityArgs {
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    family: FamilyArgs,
    #[command(flatten)]
    context: ContextArgs,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CurveArgs {
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    family: FamilyArgs,
    #[command(flatten)]
    domain: DomainArgs,
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BestArgs {
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    family: FamilyArgs,
    #[command(flatten)]
    context: ContextArgs,
}

#[derive(Args, Debug)]
struct CompareArgs {
    #[arg(long)]
    input_a: PathBuf,
    #[arg(long)]
    input_b: PathBuf,
    #[arg(long)]
    label_a: String,
    #[arg(long)]
    label_b: String,
    #[command(flatten)]
    family: FamilyArgs,
    #[command(flatten)]
    domain: DomainArgs,
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Data(String),
}

type Outcome<T> = std::result::Result<T, Failure>;

/// Text destined for standard output or a file.
struct Artifacts {
    stdout: String,
    files: Vec<(PathBuf, String)>,
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };

    let result = panic::catch_unwind(AssertUnwindSafe(|| execute(cli)));
    match result {
        Ok(Ok(artifacts)) => match emit(artifacts, out) {
            Ok(()) => EXIT_OK,
            Err(msg) => {
                let _ = writeln!(err, "error: {msg}");
                EXIT_DATA
            }
        },
        Ok(Err(Failure::Usage(msg))) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Ok(Err(Failure::Data(msg))) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_DATA
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<String>()
                .map(String::as_str)
                .or_else(|| payload.downcast_ref::<&str>().copied())
                .unwrap_or("unknown panic");
            let _ = writeln!(err, "internal error: {msg}");
            EXIT_INTERNAL
        }
    }
}

fn emit(artifacts: Artifacts, out: &mut dyn Write) -> std::result::Result<(), String> {
    for (path, text) in &artifacts.files {
        fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    out.write_all(artifacts.stdout.as_bytes())
        .map_err(|e| format!("standard output: {e}"))
}

fn execute(cli: Cli) -> Outcome<Artifacts> {
    match cli.command {
        Command::Sensitivity(a) => sensitivity(a),
        Command::Curve(a) => curve(a, false),
        Command::Improve(a) => curve(a, true),
        Command::Best(a) => best(a),
        Command::Compare(a) => compare_cmd(a),
    }
}

fn family(args: &FamilyArgs) -> Outcome<ValueFamily> {
    let coeffs = [
        ("--slope-coeff", args.slope_coeff),
        ("--slope-offset", args.slope_offset),
        ("--intercept-coeff", args.intercept_coeff),
        ("--intercept-offset", args.intercept_offset),
    ];
    match args.family {
        FamilyKind::Affine => {
            let missing: Vec<&str> = coeffs.iter().filter(|c| c.1.is_none()).map(|c| c.0).collect();
            if !missing.is_empty() {
                return Err(Failure::Usage(format!(
                    "--family affine requires {}",
                    missing.join(", ")
                )));
            }
            if let Some((flag, v)) = coeffs.iter().find(|c| !c.1.unwrap().is_finite()) {
                return Err(Failure::Usage(format!("{flag} must be finite, got {}", v.unwrap())));
            }
            Ok(ValueFamily::Affine {
                slope_coeff: args.slope_coeff.unwrap(),
                slope_offset: args.slope_offset.unwrap(),
                intercept_coeff: args.intercept_coeff.unwrap(),
                intercept_offset: args.intercept_offset.unwrap(),
            })
        }
        kind => {
            if let Some((flag, _)) = coeffs.iter().find(|c| c.1.is_some()) {
                return Err(Failure::Usage(format!("{flag} only applies to --family affine")));
            }
            Ok(if kind == FamilyKind::Ratio {
                ValueFamily::Ratio
            } else {
                ValueFamily::Cutoff
            })
        }
    }
}

fn parse_costs(text: &str) -> Outcome<CostModel> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let bad = || Failure::Usage(format!("--costs expects alpha,cost_accept,cost_reject, got `{text}`"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let mut v = [0.0; 3];
    for (slot, p) in v.iter_mut().zip(&parts) {
        *slot = p.parse().map_err(|_| bad())?;
    }
    let costs = CostModel::new(v[0], v[1], v[2]).map_err(|e| Failure::Usage(format!("--costs: {e}")))?;
    costs.beta().map_err(|e| Failure::Usage(format!("--costs: {e}")))?;
    Ok(costs)
}

fn context(args: &ContextArgs, family: ValueFamily) -> Outcome<Context> {
    let ratio_only = |flag: &str| {
        if family == ValueFamily::Ratio {
            Ok(())
        } else {
            Err(Failure::Usage(format!("{flag} requires --family ratio")))
        }
    };
    if let Some(t) = args.theta {
        if !t.is_finite() {
            return Err(Failure::Usage(format!("--theta must be finite, got {t}")));
        }
        return Ok(Context::Theta(t));
    }
    if let Some(b) = args.beta {
        ratio_only("--beta")?;
        if !(b.is_finite() && b >= 0.0) {
            return Err(Failure::Usage(format!("--beta must be finite and >= 0, got {b}")));
        }
        return Ok(Context::Beta(b));
    }
    let text = args.costs.as_deref().expect("clap enforces one context flag");
    ratio_only("--costs")?;
    Ok(Context::Costs(parse_costs(text)?))
}

fn domain_config(args: &DomainArgs, family: ValueFamily) -> Outcome<(Option<Domain>, Axis)> {
    let domain = match (args.theta_min, args.theta_max) {
        (Some(lo), Some(hi)) => Some(Domain::new(lo, hi).map_err(|_| {
            Failure::Usage(format!(
                "--theta-min ({lo}) must be below --theta-max ({hi}) and both finite"
            ))
        })?),
        _ => None,
    };
    if domain.is_none() && matches!(family, ValueFamily::Affine { .. }) {
        return Err(Failure::Usage(
            "--family affine requires --theta-min and --theta-max".into(),
        ));
    }
    let axis = match args.axis {
        AxisArg::Theta => Axis::Theta,
        AxisArg::Beta if family == ValueFamily::Ratio => Axis::Beta,
        AxisArg::Beta => return Err(Failure::Usage("--axis beta requires --family ratio".into())),
    };
    Ok((domain, axis))
}

fn load(path: &Path) -> Outcome<Dataset> {
    let file = fs::File::open(path).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))?;
    read_dataset_csv(file).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn data(e: Error) -> Failure {
    Failure::Data(e.to_string())
}

fn resolve_domain(config: &RunConfig, datasets: &[&Dataset]) -> Outcome<Domain> {
    config.resolve_domain(datasets).map_err(|e| {
        Failure::Data(format!("{e}; pass --theta-min and --theta-max"))
    })
}

fn axis_name(axis: Axis) -> &'static str {
    match axis {
        Axis::Theta => "θ",
        Axis::Beta => "β",
    }
}

fn sensitivity(args: SensitivityArgs) -> Outcome<Artifacts> {
    let family = family(&args.family)?;
    let ctx = context(&args.context, family)?;
    let mut config = RunConfig::new(family);
    config.context = Some(ctx);
    config.outputs = OutputTargets {
        csv: args.out,
        json: None,
        svg: args.svg,
    };
    let ds = load(&args.input)?;

    let theta = ctx.theta().map_err(data)?;
    let mut points = sensitivity_curve(&ds, family, theta);
    for p in &mut points {
        p.impact = ctx.report_impact(p.impact, ds.n());
    }
    let csv = write_sensitivity_csv(&points);

    let mut files = Vec::new();
    if let Some(path) = &config.outputs.svg {
        let finite: Vec<(f64, f64)> = points
            .iter()
            .filter(|p| !p.threshold.is_reject_all())
            .map(|p| (p.threshold.value(), p.impact))
            .collect();
        let spec = PlotSpec::new(
            format!("Sensitivity ({family})"),
            "decision threshold",
            "impact",
        )
        .with_series(Series::new("impact", finite));
        files.push((path.clone(), render_svg(&spec).map_err(data)?));
    }
    let stdout = match &config.outputs.csv {
        Some(path) => {
            files.push((path.clone(), csv));
            String::new()
        }
        None if config.outputs.svg.is_some() => String::new(),
        None => csv,
    };
    Ok(Artifacts { stdout, files })
}

fn curve(args: CurveArgs, improvement: bool) -> Outcome<Artifacts> {
    let family = family(&args.family)?;
    let (domain, axis) = domain_config(&args.domain, family)?;
    let mut config = RunConfig::new(family);
    config.domain = domain;
    config.axis = axis;
    config.outputs = OutputTargets {
        csv: None,
        json: args.json,
        svg: args.svg,
    };
    let ds = load(&args.input)?;
    let domain = resolve_domain(&config, &[&ds])?;

    let curve = if improvement {
        improvement_curve(&ds, family, domain)
    } else {
        impact_curve(&ds, family, domain)
    }
    .map_err(data)?;
    let json = write_curve_json(&curve, &CurveMetadata { axis, family });

    let mut files = Vec::new();
    if let Some(path) = &config.outputs.svg {
        let (title, series) = if improvement {
            ("Improvement over trivial policies", "improvement")
        } else {
            ("Impact curve", "impact")
        };
        let mut spec = PlotSpec::new(format!("{title} ({family})"), axis_name(axis), series)
            .with_series(Series::from_curve(series, &curve));
        if improvement && family == ValueFamily::Ratio {
            if let Some(x) = trivial_switch_point(&ds, family).filter(|&x| domain.contains(x)) {
                spec = spec.with_marker(x, format!("trivial switch {}", format_number(x)));
            }
        }
        files.push((path.clone(), render_svg(&spec).map_err(data)?));
    }
    let stdout = match &config.outputs.json {
        Some(path) => {
            files.push((path.clone(), json));
            String::new()
        }
        None if config.outputs.svg.is_some() => String::new(),
        None => json,
    };
    Ok(Artifacts { stdout, files })
}

fn best(args: BestArgs) -> Outcome<Artifacts> {
    let family = family(&args.family)?;
    let ctx = context(&args.context, family)?;
    let ds = load(&args.input)?;
    let theta = ctx.theta().map_err(data)?;
    let (threshold, impact) = best_threshold(&ds, family, theta);
    let threshold = if threshold.is_reject_all() {
        "inf".to_owned()
    } else {
        format_number(threshold.value())
    };
    Ok(Artifacts {
        stdout: format!(
            "threshold={threshold} impact={}\n",
            format_number(ctx.report_impact(impact, ds.n()))
        ),
        files: Vec::new(),
    })
}

fn compare_cmd(args: CompareArgs) -> Outcome<Artifacts> {
    let family = family(&args.family)?;
    let (domain, axis) = domain_config(&args.domain, family)?;
    if args.label_a == args.label_b {
        return Err(Failure::Usage(format!(
            "--label-a and --label-b must differ, both are `{}`",
            args.label_a
        )));
    }
    let mut config = RunConfig::new(family);
    config.domain = domain;
    config.axis = axis;
    let a = load(&args.input_a)?;
    let b = load(&args.input_b)?;
    let domain = resolve_domain(&config, &[&a, &b])?;

    let ca = impact_curve(&a, family, domain).map_err(data)?;
    let cb = impact_curve(&b, family, domain).map_err(data)?;
    let report = compare(&ca, &args.label_a, &cb, &args.label_b).map_err(data)?;
    let json = write_report_json(&report);

    let mut files = Vec::new();
    if let Some(path) = &args.svg {
        let mut spec = PlotSpec::new(
            format!("{} vs {} ({family})", args.label_a, args.label_b),
            axis_name(axis),
            "impact",
        )
        .with_series(Series::from_curve(args.label_a.clone(), &ca))
        .with_series(Series::from_curve(args.label_b.clone(), &cb));
        for &x in &report.crossovers {
            spec = spec.with_marker(x, format!("crossover {}", format_number(x)));
        }
        files.push((path.clone(), render_svg(&spec).map_err(data)?));
    }
    let stdout = match &args.report {
        Some(path) => {
            files.push((path.clone(), json));
            String::new()
        }
        None if args.svg.is_some() => String::new(),
        None => json,
    };
    Ok(Artifacts { stdout, files })
}
