use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use replica_core::matching::MatchOptions;
use replica_core::placement::PolicyRegistry;
use replica_core::sim::{
    lower_bound_for, real_grid, run_curve, simulate_plan, write_csv, CurveRow, ExperimentSpec,
    Metric, SimParams, SweepPoint, VaryBeta, VaryN, VaryStorage,
};
use replica_core::{PlacementPlan, SystemConfig};

use crate::manifest::Manifest;
use crate::output::Staged;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Experiment {
    VaryN,
    VaryStorage,
    VaryBeta,
    Point,
}

impl Experiment {
    fn flag(self) -> &'static str {
        match self {
            Experiment::VaryN => "vary-n",
            Experiment::VaryStorage => "vary-storage",
            Experiment::VaryBeta => "vary-beta",
            Experiment::Point => "point",
        }
    }
}

#[derive(Args, Debug, Clone, Default)]
pub struct SimulateArgs {
    /// Replay the run recorded in a manifest; other flags override it.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub experiment: Option<Experiment>,
    /// Placement policy [default: knapsack].
    #[arg(long)]
    pub policy: Option<String>,
    /// A (multicast per distinct content) or C (unicast per request) [default: A].
    #[arg(long)]
    pub metric: Option<Metric>,
    /// Slots per sweep point [default: 10000].
    #[arg(long)]
    pub iterations: Option<usize>,
    /// Master seed [default: 1].
    #[arg(long)]
    pub seed: Option<u64>,
    /// CSV output; a manifest is written next to it.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads [default: all cores].
    #[arg(long)]
    pub threads: Option<usize>,
    /// Also write a gnuplot script plotting the CSV.
    #[arg(long)]
    pub gnuplot: Option<PathBuf>,
    /// Serve overflowing contents partially instead of skipping them.
    #[arg(long)]
    pub partial_matching: bool,
    /// Simulate a saved placement instead of computing one (point only).
    #[arg(long)]
    pub plan: Option<PathBuf>,

    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    /// Contents per cache; a comma-separated list for vary-beta.
    #[arg(long, value_delimiter = ',')]
    pub k: Vec<usize>,
    /// Requests per slot (point only) [default: m].
    #[arg(long)]
    pub m_tilde: Option<usize>,
    /// Units per content (point only) [default: 1].
    #[arg(long)]
    pub b: Option<f64>,
    /// Zipf exponent(s), comma-separated.
    #[arg(long, value_delimiter = ',')]
    pub beta: Vec<f64>,
    /// Zipf-Mandelbrot shift [default: 0].
    #[arg(long)]
    pub shift: Option<f64>,

    #[arg(long)]
    pub n_from: Option<usize>,
    #[arg(long)]
    pub n_to: Option<usize>,
    #[arg(long)]
    pub n_step: Option<usize>,
    /// n / m for vary-n [default: 5].
    #[arg(long)]
    pub ratio: Option<usize>,
    #[arg(long)]
    pub k_from: Option<usize>,
    #[arg(long)]
    pub k_to: Option<usize>,
    #[arg(long)]
    pub beta_from: Option<f64>,
    #[arg(long)]
    pub beta_to: Option<f64>,
    #[arg(long)]
    pub beta_step: Option<f64>,
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn single_k(args: &SimulateArgs, default: Option<usize>) -> Result<usize> {
    match (args.k.as_slice(), default) {
        ([k], _) => Ok(*k),
        ([], Some(d)) => Ok(d),
        ([], None) => bail!("--k is required"),
        _ => bail!("this experiment takes a single --k value"),
    }
}

enum Sweep {
    VaryN(VaryN),
    VaryStorage(VaryStorage),
    VaryBeta(VaryBeta),
    Point(SweepPoint),
    Plan(PathBuf, SweepPoint),
}

/// Fully resolved run: every default filled in.
struct Resolved {
    experiment: Experiment,
    policy: String,
    sim: SimParams,
    sweep: Sweep,
    out: PathBuf,
    gnuplot: Option<PathBuf>,
    params: Vec<(String, String)>,
}

fn resolve(args: &SimulateArgs) -> Result<Resolved> {
    let experiment = args.experiment.context("--experiment is required")?;
    let policy = args.policy.clone().unwrap_or_else(|| "knapsack".into());
    let metric = args.metric.unwrap_or(Metric::SettingA);
    let iterations = args.iterations.unwrap_or(10_000);
    let seed = args.seed.unwrap_or(1);
    let shift = args.shift.unwrap_or(0.0);
    let out = args.out.clone().context("--out is required")?;
    if iterations == 0 {
        bail!("--iterations must be at least 1");
    }
    if experiment != Experiment::Point
        && (args.m_tilde.is_some() || args.b.is_some() || args.plan.is_some())
    {
        bail!("--m-tilde, --b and --plan apply to --experiment point only");
    }

    let mut params: Vec<(String, String)> = vec![
        ("experiment".into(), experiment.flag().into()),
        ("policy".into(), policy.clone()),
        ("metric".into(), metric.to_string()),
        ("iterations".into(), iterations.to_string()),
        ("seed".into(), seed.to_string()),
        ("partial-matching".into(), args.partial_matching.to_string()),
        ("shift".into(), shift.to_string()),
    ];
    let mut p = |k: &str, v: String| params.push((k.to_string(), v));

    let betas = |default: &[f64]| -> Vec<f64> {
        if args.beta.is_empty() {
            default.to_vec()
        } else {
            args.beta.clone()
        }
    };

    let sweep = match experiment {
        Experiment::VaryN => {
            let from = args.n_from.unwrap_or(1000);
            let to = args.n_to.unwrap_or(10_000);
            let step = args.n_step.unwrap_or(1000);
            if step == 0 || from > to {
                bail!("empty --n-from/--n-to/--n-step grid");
            }
            let v = VaryN {
                ns: (from..=to).step_by(step).collect(),
                ratio: args.ratio.unwrap_or(5),
                k_tilde: single_k(args, Some(3))?,
                betas: betas(&[1.2, 1.5, 1.8]),
            };
            p("n-from", from.to_string());
            p("n-to", to.to_string());
            p("n-step", step.to_string());
            p("ratio", v.ratio.to_string());
            p("k", v.k_tilde.to_string());
            p("beta", join(&v.betas));
            Sweep::VaryN(v)
        }
        Experiment::VaryStorage => {
            let from = args.k_from.unwrap_or(1);
            let to = args.k_to.unwrap_or(12);
            if from == 0 || from > to {
                bail!("empty --k-from/--k-to grid");
            }
            let v = VaryStorage {
                n: args.n.unwrap_or(1000),
                m: args.m.unwrap_or(100),
                ks: (from..=to).collect(),
                betas: betas(&[0.8, 1.2]),
            };
            p("n", v.n.to_string());
            p("m", v.m.to_string());
            p("k-from", from.to_string());
            p("k-to", to.to_string());
            p("beta", join(&v.betas));
            Sweep::VaryStorage(v)
        }
        Experiment::VaryBeta => {
            let from = args.beta_from.unwrap_or(0.6);
            let to = args.beta_to.unwrap_or(2.0);
            let step = args.beta_step.unwrap_or(0.1);
            let v = VaryBeta {
                n: args.n.unwrap_or(1000),
                m: args.m.unwrap_or(200),
                ks: if args.k.is_empty() { vec![2, 4] } else { args.k.clone() },
                betas: real_grid(from, to, step)?,
            };
            p("n", v.n.to_string());
            p("m", v.m.to_string());
            p("k", join(&v.ks));
            p("beta-from", from.to_string());
            p("beta-to", to.to_string());
            p("beta-step", step.to_string());
            Sweep::VaryBeta(v)
        }
        Experiment::Point => {
            let beta = match args.beta.as_slice() {
                [b] => *b,
                [] => bail!("--beta is required"),
                _ => bail!("--experiment point takes a single --beta"),
            };
            let (n, m, k) = match &args.plan {
                Some(path) => {
                    let plan = read_plan(path)?;
                    for (flag, given, actual) in [
                        ("n", args.n, plan.n()),
                        ("m", args.m, plan.m()),
                        ("k", args.k.first().copied(), plan.k_tilde()),
                    ] {
                        if given.is_some_and(|g| g != actual) {
                            bail!("--{flag} disagrees with the plan file ({actual})");
                        }
                    }
                    (plan.n(), plan.m(), plan.k_tilde())
                }
                None => (
                    args.n.context("--n is required")?,
                    args.m.context("--m is required")?,
                    single_k(args, None)?,
                ),
            };
            let cfg = SystemConfig::new(n, m, k)
                .with_m_tilde(args.m_tilde.unwrap_or(m))
                .with_b(args.b.unwrap_or(1.0));
            cfg.validate()?;
            p("n", n.to_string());
            p("m", m.to_string());
            p("k", k.to_string());
            p("m-tilde", cfg.m_tilde.to_string());
            p("b", cfg.b.to_string());
            p("beta", beta.to_string());
            let mut pt = SweepPoint::new(cfg, beta);
            pt.shift = shift;
            match &args.plan {
                Some(path) => {
                    p("plan", path.display().to_string());
                    Sweep::Plan(path.clone(), pt)
                }
                None => Sweep::Point(pt),
            }
        }
    };
    if let Some(g) = &args.gnuplot {
        params.push(("gnuplot".into(), g.display().to_string()));
    }

    let mut sim = SimParams::new(iterations, seed, metric);
    sim.matching = MatchOptions {
        partial: args.partial_matching,
    };
    Ok(Resolved {
        experiment,
        policy,
        sim,
        sweep,
        out,
        gnuplot: args.gnuplot.clone(),
        params,
    })
}

fn read_plan(path: &Path) -> Result<PlacementPlan> {
    let f = File::open(path).with_context(|| format!("cannot open plan {}", path.display()))?;
    PlacementPlan::read_text(BufReader::new(f))
        .with_context(|| format!("malformed plan {}", path.display()))
}

fn run(r: &Resolved, shift: f64) -> Result<Vec<CurveRow>> {
    let points = match &r.sweep {
        Sweep::VaryN(v) => v.points()?,
        Sweep::VaryStorage(v) => v.points()?,
        Sweep::VaryBeta(v) => v.points()?,
        Sweep::Point(pt) => vec![*pt],
        Sweep::Plan(path, pt) => {
            let plan = read_plan(path)?;
            let model = pt.model()?;
            let s = simulate_plan(&plan, &model, &pt.config, &r.sim, 0)?;
            let lb = lower_bound_for(&model, &pt.config, r.sim.metric);
            return Ok(vec![CurveRow::from_summary("plan", pt, r.sim.metric, &s, lb)]);
        }
    };
    let spec = ExperimentSpec {
        policy: r.policy.clone(),
        points: points
            .into_iter()
            .map(|mut p| {
                p.shift = shift;
                p
            })
            .collect(),
        sim: r.sim,
    };
    Ok(run_curve(&spec, &PolicyRegistry::with_builtin())?)
}

fn gnuplot_script(experiment: Experiment, csv: &Path) -> String {
    let (col, label) = match experiment {
        Experiment::VaryN => (3, "number of contents n"),
        Experiment::VaryStorage | Experiment::Point => (6, "contents per cache"),
        Experiment::VaryBeta => (7, "Zipf exponent"),
    };
    let name = csv.display();
    format!(
        "set datafile separator ','\n\
         set key autotitle columnhead top right\n\
         set xlabel '{label}'\n\
         set ylabel 'mean transmission rate'\n\
         plot '{name}' using {col}:9:10 with yerrorbars title 'simulated', \\\n     \
         '{name}' using {col}:11 with points title 'lower bound'\n"
    )
}

/// Overlays `args` on the manifest's parameters.
fn merge_manifest(args: &SimulateArgs) -> Result<SimulateArgs> {
    let Some(path) = &args.manifest else {
        return Ok(args.clone());
    };
    let m = Manifest::read(path)?;
    if m.subcommand != "simulate" {
        bail!("manifest records a `{}` run, not simulate", m.subcommand);
    }
    let mut argv = vec!["simulate".to_string()];
    argv.extend(m.to_args());
    argv.push("--out".into());
    argv.push(m.output.display().to_string());
    #[derive(clap::Parser)]
    struct Replay {
        #[command(flatten)]
        args: SimulateArgs,
    }
    let base = <Replay as clap::Parser>::try_parse_from(&argv)
        .context("manifest parameters do not parse")?
        .args;
    Ok(overlay(base, args))
}

fn overlay(mut base: SimulateArgs, top: &SimulateArgs) -> SimulateArgs {
    macro_rules! take {
        ($($f:ident),*) => { $( if top.$f.is_some() { base.$f = top.$f.clone(); } )* };
    }
    take!(experiment, policy, metric, iterations, seed, out, threads, gnuplot, plan, n, m, m_tilde, b, shift,
          n_from, n_to, n_step, ratio, k_from, k_to, beta_from, beta_to, beta_step);
    if !top.k.is_empty() {
        base.k = top.k.clone();
    }
    if !top.beta.is_empty() {
        base.beta = top.beta.clone();
    }
    base.partial_matching |= top.partial_matching;
    base.manifest = None;
    base
}

pub fn cmd_simulate(args: &SimulateArgs) -> Result<()> {
    let args = merge_manifest(args)?;
    if let Some(t) = args.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .context("cannot configure the worker pool")?;
    }
    let r = resolve(&args)?;
    let shift = args.shift.unwrap_or(0.0);
    log::info!("running {} with policy {}", r.experiment.flag(), r.policy);
    let rows = run(&r, shift)?;

    let mut csv = Vec::new();
    write_csv(&rows, &mut csv)?;
    let manifest = Manifest {
        subcommand: "simulate".into(),
        master_seed: r.sim.master_seed,
        output: r.out.clone(),
        params: r.params.clone(),
    };
    let mut staged = Staged::default();
    staged.add(&r.out, &csv)?;
    staged.add(&Manifest::path_for(&r.out), manifest.to_text().as_bytes())?;
    if let Some(g) = &r.gnuplot {
        staged.add(g, gnuplot_script(r.experiment, &r.out).as_bytes())?;
    }
    staged.commit()
}
