use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use skewinfo::bounds::VALIDITY_TOL;
use skewinfo::fuzz::{fuzz, FuzzSpec};
use skewinfo::scenarios::{
    render, run, Family, MetricSpec, OutputFormat, RenMode, Scenario, SweepAxis, SweepConfig, SweepSpec,
};
use skewinfo::Error;

#[derive(Parser)]
#[command(name = "skewinfo", version, about = "Skew information sum uncertainty bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Pauli observables: THM1, REN_OBS and the variance bounds over θ.
    Example1(SweepArgs),
    /// Damping and bit flip channels: LB1-LB3, REN_CH_1 and REN_CH_2.
    Example2(SweepArgs),
    /// Pauli rotations by π/8: Lb1-Lb3 over θ.
    Example3(SweepArgs),
    /// Any family with a chosen metric, radius and grid.
    Custom(SweepArgs),
    /// Random invariant checks.
    Fuzz(FuzzArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MetricKind {
    Wyd,
    Fisher,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Observables,
    Channels,
    Unitaries,
}

#[derive(Clone, Copy, ValueEnum)]
enum AxisArg {
    Theta,
    Q,
}

#[derive(Clone, Copy, ValueEnum)]
enum RenArg {
    PerIndex,
    Pooled,
}

#[derive(Args)]
struct Common {
    /// TOML file; command-line flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Upper limit on permutation assignments searched for channel bounds.
    #[arg(long)]
    perm_limit: Option<u64>,
    /// RNG seed; sweeps are deterministic and ignore it.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: Common,
    /// WYD parameter; implies --metric wyd.
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, value_enum)]
    metric: Option<MetricKind>,
    /// Channel strength.
    #[arg(long)]
    q: Option<f64>,
    /// Number of θ grid points, endpoints included.
    #[arg(long)]
    theta_steps: Option<usize>,
    /// Fixed θ for q sweeps.
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,
    #[arg(long, value_enum)]
    axis: Option<AxisArg>,
    /// Number of q grid points for q sweeps.
    #[arg(long)]
    q_steps: Option<usize>,
    #[arg(long, value_enum)]
    ren: Option<RenArg>,
}

#[derive(Args)]
struct FuzzArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    trials: Option<usize>,
    /// Comma-separated dimensions to draw from.
    #[arg(long, value_delimiter = ',')]
    dims: Option<Vec<usize>>,
    /// Draw pure states only.
    #[arg(long)]
    pure: bool,
}

enum Failure {
    Config(String),
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_config() {
            Failure::Config(e.to_string())
        } else {
            Failure::Numerical(e.to_string())
        }
    }
}

fn read_config(path: &Option<PathBuf>) -> Result<Option<String>, Failure> {
    path.as_ref()
        .map(|p| std::fs::read_to_string(p).map_err(|e| Failure::Config(format!("{}: {e}", p.display()))))
        .transpose()
}

fn write_output(path: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Config(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn sweep_spec(scenario: Scenario, args: &SweepArgs) -> Result<SweepSpec, Failure> {
    let cfg = match read_config(&args.common.config)? {
        Some(text) => SweepConfig::parse(&text)?,
        None => SweepConfig::default(),
    };
    let mut spec = SweepSpec::resolve(scenario, &cfg)?;
    match (args.metric, args.alpha) {
        (Some(MetricKind::Fisher), Some(_)) => {
            return Err(Failure::Config("--alpha cannot be combined with --metric fisher".into()))
        }
        (Some(MetricKind::Fisher), None) => spec.metric = MetricSpec::Fisher,
        (_, Some(alpha)) => spec.metric = MetricSpec::Wyd { alpha },
        (Some(MetricKind::Wyd), None) => {
            if spec.metric == MetricSpec::Fisher {
                return Err(Failure::Config("--metric wyd needs --alpha".into()));
            }
        }
        (None, None) => {}
    }
    if let Some(f) = args.family {
        let f = match f {
            FamilyArg::Observables => Family::Observables,
            FamilyArg::Channels => Family::Channels,
            FamilyArg::Unitaries => Family::Unitaries,
        };
        if scenario != Scenario::Custom && f != spec.family {
            return Err(Failure::Config(format!("--family is only accepted by custom, not {}", scenario.name())));
        }
        spec.family = f;
    }
    if let Some(a) = args.axis {
        spec.axis = match a {
            AxisArg::Theta => SweepAxis::Theta,
            AxisArg::Q => SweepAxis::Q,
        };
    }
    if let Some(r) = args.ren {
        spec.ren_aggregation = match r {
            RenArg::PerIndex => RenMode::PerIndex,
            RenArg::Pooled => RenMode::Pooled,
        };
    }
    if let Some(q) = args.q {
        spec.q = q;
    }
    if let Some(n) = args.theta_steps {
        spec.theta_grid.steps = n;
    }
    if let Some(n) = args.q_steps {
        spec.q_grid.steps = n;
    }
    if let Some(t) = args.theta {
        spec.theta = t;
    }
    if let Some(r) = args.radius {
        spec.bloch_radius = r;
    }
    if let Some(f) = args.common.format {
        spec.format = f.into();
    }
    if let Some(p) = args.common.perm_limit {
        spec.perm_limit = p;
    }
    if let Some(p) = &args.common.out {
        spec.output_path = Some(p.display().to_string());
    }
    spec.validate()?;
    Ok(spec)
}

fn run_sweep(scenario: Scenario, args: &SweepArgs) -> Result<(), Failure> {
    let spec = sweep_spec(scenario, args)?;
    let rows = run(&spec)?;
    let text = render(&rows, spec.format)?;
    write_output(spec.output_path.as_ref().map(PathBuf::from).as_ref(), &text)?;
    let bad: Vec<String> = rows
        .iter()
        .flat_map(|row| {
            row.violations(VALIDITY_TOL)
                .into_iter()
                .map(move |(b, v)| format!("theta={} {b}={v:e} exceeds {:e}", row.theta, row.lhs_for(b)))
        })
        .collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Failure::Numerical(format!("{} bound violation(s):\n{}", bad.len(), bad.join("\n"))))
    }
}

fn run_fuzz(args: &FuzzArgs) -> Result<(), Failure> {
    let mut spec = match read_config(&args.common.config)? {
        Some(text) => FuzzSpec::parse(&text)?,
        None => FuzzSpec::default(),
    };
    if let Some(t) = args.trials {
        spec.trials = t;
    }
    if let Some(d) = &args.dims {
        spec.dims = d.clone();
    }
    if let Some(s) = args.common.seed {
        spec.seed = s;
    }
    if let Some(p) = args.common.perm_limit {
        spec.perm_limit = p;
    }
    spec.pure_only |= args.pure;
    let report = fuzz(&spec)?;
    let text = match args.common.format.map(OutputFormat::from).unwrap_or_default() {
        OutputFormat::Csv => report.to_csv()?,
        OutputFormat::Json => report.to_json()?,
    };
    write_output(args.common.out.as_ref(), &text)?;
    if report.is_clean() {
        Ok(())
    } else {
        Err(Failure::Numerical(format!("{} violation(s) in {} checks", report.violations.len(), report.checks)))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match &cli.command {
        Command::Example1(a) => run_sweep(Scenario::Example1, a),
        Command::Example2(a) => run_sweep(Scenario::Example2, a),
        Command::Example3(a) => run_sweep(Scenario::Example3, a),
        Command::Custom(a) => run_sweep(Scenario::Custom, a),
        Command::Fuzz(a) => run_fuzz(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
