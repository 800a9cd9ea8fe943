use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use shockreg_cli::spec::{parse_number, parse_schedule};
use shockreg_cli::{run, CliError, Command, Format, Kind, Overrides, RunSpec};

/// Self-similar shock configurations and vorticity diagnostics.
#[derive(Parser)]
#[command(name = "shockreg", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Shock polar of state (1) at the reflection point.
    Polar(Opts),
    /// Build and check a configuration; write its geometry.
    Reflect(Opts),
    /// Detachment and sonic angles and a wedge-angle sweep.
    Angles(Opts),
    /// Closed-form shock vorticity against the direct 3×3 solve.
    Vorticity(Opts),
    /// Commutator norms over a schedule of kernel radii.
    Commutator(Opts),
    /// Weak-identity refinement and truncation tables.
    Identity(Opts),
    /// Boundary functional on the curved shock.
    Contradict(Opts),
}

#[derive(Args)]
struct Opts {
    /// Settings file of `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// regular, prandtl, lighthill or four-shock.
    #[arg(long)]
    kind: Option<String>,
    #[arg(long, value_parser = parse_number)]
    gamma: Option<f64>,
    #[arg(long, value_parser = parse_number)]
    rho0: Option<f64>,
    #[arg(long, value_parser = parse_number)]
    rho1: Option<f64>,
    #[arg(long, value_parser = parse_number)]
    rho2: Option<f64>,
    /// Oncoming speed of the Prandtl problem.
    #[arg(long, value_parser = parse_number)]
    u_inf: Option<f64>,
    /// Wedge angle in degrees.
    #[arg(long, value_parser = parse_number)]
    theta_w: Option<f64>,
    /// Lower half-wedge angle in degrees.
    #[arg(long, value_parser = parse_number)]
    theta_w1: Option<f64>,
    /// Upper half-wedge angle in degrees.
    #[arg(long, value_parser = parse_number)]
    theta_w2: Option<f64>,
    /// Grid nodes per kernel radius.
    #[arg(long)]
    grid_n: Option<usize>,
    /// Comma-separated kernel radii, fractions allowed.
    #[arg(long)]
    eps_schedule: Option<String>,
    /// Comma-separated truncation levels.
    #[arg(long)]
    m_schedule: Option<String>,
    /// Number of samples of sweeps, polars and random draws.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// csv or json.
    #[arg(long)]
    format: Option<String>,
    /// Replace the curved shock by its chord.
    #[arg(long)]
    straight: bool,
}

impl Opts {
    fn overrides(self) -> Result<(Option<PathBuf>, Overrides), CliError> {
        let kind: Option<Kind> = self.kind.as_deref().map(str::parse).transpose()?;
        let format: Option<Format> = self.format.as_deref().map(str::parse).transpose()?;
        Ok((
            self.config,
            Overrides {
                kind,
                gamma: self.gamma,
                rho0: self.rho0,
                rho1: self.rho1,
                rho2: self.rho2,
                u_inf: self.u_inf,
                theta_w: self.theta_w,
                theta_w1: self.theta_w1,
                theta_w2: self.theta_w2,
                grid_n: self.grid_n,
                eps_schedule: self.eps_schedule.as_deref().map(parse_schedule).transpose()?,
                m_schedule: self.m_schedule.as_deref().map(parse_schedule).transpose()?,
                samples: self.samples,
                out: self.out,
                seed: self.seed,
                format,
                straight: self.straight.then_some(true),
            },
        ))
    }
}

fn resolve(cli: Cli) -> Result<RunSpec, CliError> {
    let (command, opts) = match cli.command {
        Cmd::Polar(o) => (Command::Polar, o),
        Cmd::Reflect(o) => (Command::Reflect, o),
        Cmd::Angles(o) => (Command::Angles, o),
        Cmd::Vorticity(o) => (Command::Vorticity, o),
        Cmd::Commutator(o) => (Command::Commutator, o),
        Cmd::Identity(o) => (Command::Identity, o),
        Cmd::Contradict(o) => (Command::Contradict, o),
    };
    let (file, flags) = opts.overrides()?;
    let base = match file {
        Some(p) => {
            let text = std::fs::read_to_string(&p)
                .map_err(|e| CliError::Core(shockreg::Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", p.display())))))?;
            Overrides::from_kv(&text)?
        }
        None => Overrides::default(),
    };
    RunSpec::resolve(command, base.layered(flags))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = resolve(cli).and_then(|spec| run(&spec));
    match result {
        Ok(out) => {
            // a closed stdout (e.g. piped into `head`) is not an error of the run
            let mut stdout = std::io::stdout().lock();
            for line in &out.summary {
                let _ = writeln!(stdout, "{line}");
            }
            for f in &out.files {
                let _ = writeln!(stdout, "wrote {}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
