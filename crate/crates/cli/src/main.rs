mod angle;
mod plot;
mod run;
mod scenario;
mod sweep;
mod table;
mod verify;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use entangler::{check_example, CheckTolerances, Detector, TruncationConfig};

use crate::angle::parse_angle;
use crate::scenario::{resolve, Family, FamilyParams, Point};
use crate::sweep::{run_sweep, Output, Parameter, SweepSpec};
use crate::table::{num, Table};
use crate::verify::{run_verify, Profile};

const EXAMPLE_SCHEMA: &str = "entangler-example/1";

/// Heralded entanglement of two light fields from weak beam splitters and a
/// single detector click.
#[derive(Debug, Parser)]
#[command(name = "entangler", version)]
struct Cli {
    /// Reflection amplitude R of the weak splitters
    #[arg(long = "R", global = true, default_value_t = 0.05)]
    reflectivity: f64,
    /// Reflection phase of the weak splitters (radians or e.g. pi/2)
    #[arg(long, global = true, default_value = "0", value_parser = parse_angle, allow_negative_numbers = true)]
    phi: f64,
    /// Wave-plate phase between the arms (radians or e.g. 3pi/2)
    #[arg(long, global = true, default_value = "3pi/2", value_parser = parse_angle, allow_negative_numbers = true)]
    gamma: f64,
    /// Heralding detector
    #[arg(long, global = true, default_value = "D1", value_parser = parse_detector)]
    detector: Detector,
    /// Probability mass allowed beyond the Fock cutoff
    #[arg(long, global = true, default_value_t = 1e-12)]
    epsilon_tail: f64,
    /// Largest Fock cutoff
    #[arg(long, global = true, default_value_t = 200)]
    n_max_cap: usize,
    /// CSV output file
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Also write an SVG plot next to the CSV file (sweep only)
    #[arg(long, global = true)]
    svg: bool,
    /// Seed of the randomized suite
    #[arg(long, global = true, default_value_t = 2024)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one named input scenario and check it against its closed form
    Example {
        #[command(subcommand)]
        which: ExampleCmd,
    },
    /// Sweep one parameter and tabulate the results
    Sweep(SweepArgs),
    /// Run the randomized invariant suite
    Verify(VerifyArgs),
}

#[derive(Debug, Subcommand)]
enum ExampleCmd {
    /// Number states |n⟩ and |m⟩
    Fock {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
    },
    /// Even cat on both arms
    EvenCat {
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
    },
    /// Odd cat on both arms
    OddCat {
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
    },
    /// Squeezed vacuum on both arms
    SqueezedVacuum {
        #[arg(long)]
        r: f64,
        #[arg(long, value_parser = parse_angle, allow_negative_numbers = true)]
        theta: Option<f64>,
    },
    /// Number state |n⟩ with an even cat
    Hybrid {
        #[arg(long)]
        n: usize,
        /// Transmitted amplitude |Tα|
        #[arg(
            long = "t-alpha",
            required_unless_present = "alpha",
            conflicts_with = "alpha"
        )]
        t_alpha: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        alpha: Option<f64>,
    },
}

impl ExampleCmd {
    fn family(&self) -> (Family, FamilyParams) {
        let mut p = FamilyParams::default();
        let family = match *self {
            ExampleCmd::Fock { n, m } => {
                (p.n, p.m) = (Some(n), Some(m));
                Family::Fock
            }
            ExampleCmd::EvenCat { alpha } => {
                p.alpha = Some(alpha);
                Family::EvenCat
            }
            ExampleCmd::OddCat { alpha } => {
                p.alpha = Some(alpha);
                Family::OddCat
            }
            ExampleCmd::SqueezedVacuum { r, theta } => {
                (p.r, p.theta) = (Some(r), theta);
                Family::SqueezedVacuum
            }
            ExampleCmd::Hybrid { n, t_alpha, alpha } => {
                (p.n, p.t_alpha, p.alpha) = (Some(n), t_alpha, alpha);
                Family::Hybrid
            }
        };
        (family, p)
    }
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Swept parameter
    #[arg(long)]
    param: Parameter,
    #[arg(long, value_parser = parse_angle, allow_negative_numbers = true)]
    start: f64,
    #[arg(long, value_parser = parse_angle, allow_negative_numbers = true)]
    stop: f64,
    #[arg(long, default_value_t = 21)]
    steps: usize,
    /// Input family
    #[arg(long)]
    family: Family,
    #[command(flatten)]
    params: FamilyParams,
    /// Output columns
    #[arg(long, value_delimiter = ',', default_values_t = Output::ALL.to_vec())]
    outputs: Vec<Output>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Number of random cases
    #[arg(long, default_value_t = 200)]
    corpus_size: usize,
    #[arg(long, value_enum, default_value_t = Profile::Default)]
    tolerance_profile: Profile,
}

fn parse_detector(s: &str) -> Result<Detector, String> {
    s.parse().map_err(|e: entangler::Error| e.to_string())
}

#[derive(Debug)]
enum Failure {
    Check,
    Usage(String),
    Io(String),
}

impl From<entangler::Error> for Failure {
    fn from(e: entangler::Error) -> Self {
        match e {
            entangler::Error::Domain(_) | entangler::Error::Capacity { .. } => {
                Failure::Usage(e.to_string())
            }
            other => {
                eprintln!("error: {other}");
                Failure::Check
            }
        }
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    fs::write(path, bytes).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))
}

fn emit_table(t: &Table, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => write_file(path, &t.to_bytes()),
        None => t
            .write_to(&mut io::stdout().lock())
            .map_err(|e| Failure::Io(format!("cannot write to stdout: {e}"))),
    }
}

fn point(cli: &Cli, family: Family, params: &FamilyParams) -> Result<Point, Failure> {
    resolve(
        family,
        params,
        cli.reflectivity,
        cli.phi,
        cli.gamma,
        cli.detector,
    )
    .map_err(Failure::Usage)
}

fn cmd_example(cli: &Cli, which: &ExampleCmd, cfg: &TruncationConfig) -> Result<bool, Failure> {
    let (family, params) = which.family();
    let p = point(cli, family, &params)?;
    if cli.svg {
        eprintln!("warning: --svg only applies to sweep");
    }
    let report = check_example(
        &p.example(),
        &run::splitter(&p)?,
        cfg,
        &CheckTolerances::default(),
    )?;
    println!("{report}");
    if let Some(out) = &cli.out {
        let header = [
            "family",
            "n",
            "m",
            "alpha",
            "t_alpha",
            "r",
            "theta",
            "R",
            "phi",
            "gamma",
            "detector",
            "success_probability_analytic",
            "success_probability_exact",
            "concurrence_expected",
            "concurrence_analytic",
            "concurrence_exact",
            "passed",
        ];
        let mut t = Table::new(
            EXAMPLE_SCHEMA,
            header.iter().map(|h| h.to_string()).collect(),
        );
        let opt = |x: Option<f64>| num(x.unwrap_or(f64::NAN));
        t.push(vec![
            family.to_string(),
            p.n.to_string(),
            p.m.to_string(),
            num(p.alpha),
            num(p.t_alpha()),
            num(p.r),
            num(p.theta),
            num(p.reflectivity),
            num(p.phi),
            num(p.gamma),
            p.detector.to_string(),
            num(report.success_probability_analytic),
            num(report.success_probability_exact),
            opt(report.concurrence_expected),
            opt(report.concurrence_analytic),
            opt(report.concurrence_exact),
            report.passed().to_string(),
        ]);
        emit_table(&t, Some(out))?;
    }
    Ok(report.passed())
}

fn cmd_sweep(cli: &Cli, args: &SweepArgs, cfg: &TruncationConfig) -> Result<bool, Failure> {
    if cli.svg && cli.out.is_none() {
        return Err(Failure::Usage("--svg needs --out".into()));
    }
    // the swept flag does not have to be given
    let mut params = args.params.clone();
    match args.param {
        Parameter::Alpha => params.alpha = params.alpha.or(Some(args.start)),
        Parameter::R => params.r = params.r.or(Some(args.start)),
        Parameter::N => params.n = params.n.or(Some(args.start.max(0.0) as usize)),
        Parameter::TAlpha => params.t_alpha = params.t_alpha.or(Some(args.start)),
        Parameter::Reflectivity | Parameter::Gamma => {}
    }
    let spec = SweepSpec {
        parameter: args.param,
        start: args.start,
        stop: args.stop,
        steps: args.steps,
        fixed: point(cli, args.family, &params)?,
        outputs: args.outputs.clone(),
    };
    spec.validate().map_err(Failure::Usage)?;
    let table = run_sweep(&spec, cfg)?;
    emit_table(&table, cli.out.as_deref())?;
    if let (true, Some(out)) = (cli.svg, &cli.out) {
        let x = table.column(spec.parameter.name()).expect("swept column");
        let columns: Vec<Vec<f64>> = spec
            .outputs
            .iter()
            .map(|o| table.column(o.name()).expect("output column"))
            .collect();
        let series: Vec<plot::Series<'_>> = spec
            .outputs
            .iter()
            .zip(&columns)
            .map(|(o, y)| plot::Series { label: o.name(), y })
            .collect();
        let title = format!(
            "{} inputs, sweep over {}",
            args.family,
            spec.parameter.name()
        );
        let svg = plot::line_plot(&title, spec.parameter.name(), &x, &series);
        write_file(&out.with_extension("svg"), svg.as_bytes())?;
    }
    Ok(true)
}

fn cmd_verify(cli: &Cli, args: &VerifyArgs, cfg: &TruncationConfig) -> Result<bool, Failure> {
    let report = run_verify(args.corpus_size, cli.seed, args.tolerance_profile, cfg)?;
    println!("{}", report.render());
    if let Some(out) = &cli.out {
        emit_table(&report.table(), Some(out))?;
    }
    Ok(report.passed())
}

fn run(cli: &Cli) -> Result<bool, Failure> {
    let cfg = TruncationConfig::new(cli.epsilon_tail, cli.n_max_cap)?;
    match &cli.command {
        Command::Example { which } => cmd_example(cli, which, &cfg),
        Command::Sweep(args) => cmd_sweep(cli, args, &cfg),
        Command::Verify(args) => cmd_verify(cli, args, &cfg),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let code = match run(&cli) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(Failure::Check) => 1,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            3
        }
    };
    let _ = io::stdout().flush();
    ExitCode::from(code)
}
