mod manifest;
mod output;
mod simulate;
mod trace;

use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use replica_core::bounds::BoundRegistry;
use replica_core::placement::PolicyRegistry;
use replica_core::sim::{write_csv, CurveRow};
use replica_core::{build_zipf_mandelbrot, SystemConfig};

use crate::output::emit;
use crate::simulate::{cmd_simulate, SimulateArgs};
use crate::trace::{cmd_trace, TraceArgs};

#[derive(Parser)]
#[command(name = "replica", version, about = "Replica placement and delivery-rate tools for cache clusters")]
struct Cli {
    /// More log output (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a placement and write it in the plan text format.
    Place(PlaceArgs),
    /// Evaluate analytic bounds as CSV rows.
    Bound(BoundArgs),
    /// Monte Carlo experiments.
    Simulate(Box<SimulateArgs>),
    /// Show one slot's matching step by step.
    Trace(TraceArgs),
    /// List registered placement policies and bounds.
    List,
}

#[derive(Args)]
struct SystemArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    beta: f64,
    #[arg(long, default_value_t = 0.0)]
    shift: f64,
    /// Requests per slot [default: m].
    #[arg(long)]
    m_tilde: Option<usize>,
    #[arg(long, default_value_t = 1.0)]
    b: f64,
}

impl SystemArgs {
    fn config(&self) -> SystemConfig {
        SystemConfig::new(self.n, self.m, self.k)
            .with_m_tilde(self.m_tilde.unwrap_or(self.m))
            .with_b(self.b)
    }
}

#[derive(Args)]
struct PlaceArgs {
    #[arg(long, default_value = "knapsack")]
    policy: String,
    #[command(flatten)]
    system: SystemArgs,
    /// Output file [default: stdout].
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BoundArgs {
    /// Bound name(s), comma-separated.
    #[arg(long, value_delimiter = ',', required = true)]
    bound: Vec<String>,
    #[command(flatten)]
    system: SystemArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn cmd_place(args: &PlaceArgs) -> Result<()> {
    let cfg = args.system.config();
    cfg.validate()?;
    let model = build_zipf_mandelbrot(cfg.n, args.system.beta, args.system.shift)?;
    let plan = PolicyRegistry::with_builtin().get(&args.policy)?.place(&model, &cfg)?;
    emit(args.out.as_deref(), plan.to_text().as_bytes())
}

fn cmd_bound(args: &BoundArgs) -> Result<()> {
    let cfg = args.system.config();
    cfg.validate()?;
    let model = build_zipf_mandelbrot(cfg.n, args.system.beta, args.system.shift)?;
    let reg = BoundRegistry::with_builtin();
    let mut rows = Vec::new();
    for name in &args.bound {
        let r = reg.get(name)?.compute(&model, &cfg)?;
        rows.push(CurveRow {
            policy: r.name.to_string(),
            setting: r.setting,
            n: cfg.n,
            m: cfg.m,
            m_tilde: cfg.m_tilde,
            k_tilde: cfg.k_tilde,
            beta: args.system.beta,
            iterations: 0,
            mean_rate: None,
            std_error: None,
            lower_bound: Some(r.bound_value),
            seed: None,
        });
    }
    let mut csv = Vec::new();
    write_csv(&rows, &mut csv)?;
    emit(args.out.as_deref(), &csv)
}

fn cmd_list() -> String {
    let mut s = String::from("policies:\n");
    for p in PolicyRegistry::with_builtin().iter() {
        s += &format!("  {:<14} {}\n", p.name(), p.summary());
    }
    s += "bounds:\n";
    for b in BoundRegistry::with_builtin().iter() {
        s += &format!("  {:<18} {}\n", b.name(), b.summary());
    }
    s
}

fn main() {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    if let Err(e) = run(&cli.command) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

fn run(command: &Command) -> Result<()> {
    match command {
        Command::Place(a) => cmd_place(a),
        Command::Bound(a) => cmd_bound(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Trace(a) => {
            print!("{}", cmd_trace(a)?);
            Ok(())
        }
        Command::List => {
            print!("{}", cmd_list());
            Ok(())
        }
    }
}
