use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;
use replica_core::matching::{
    match_least_popular_with, rate_setting_a, rate_setting_c, MatchOptions,
};
use replica_core::placement::PolicyRegistry;
use replica_core::rng::derive_seed;
use replica_core::{build_zipf_mandelbrot, sample_batch, PlacementPlan, SystemConfig};

#[derive(Args, Debug)]
pub struct TraceArgs {
    /// Placement file; otherwise the plan is computed with --policy.
    #[arg(long)]
    pub plan: Option<PathBuf>,
    #[arg(long, default_value = "knapsack")]
    pub policy: String,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub m_tilde: Option<usize>,
    #[arg(long, default_value_t = 1.0)]
    pub b: f64,
    #[arg(long)]
    pub beta: f64,
    #[arg(long, default_value_t = 0.0)]
    pub shift: f64,
    /// Master seed, as given to `simulate`.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Which slot of a `simulate --experiment point` run to replay.
    #[arg(long, default_value_t = 0)]
    pub iteration: u64,
    #[arg(long)]
    pub partial_matching: bool,
}

pub fn cmd_trace(args: &TraceArgs) -> Result<String> {
    let plan = match &args.plan {
        Some(path) => {
            let f = std::fs::File::open(path)
                .with_context(|| format!("cannot open plan {}", path.display()))?;
            PlacementPlan::read_text(std::io::BufReader::new(f))?
        }
        None => {
            let (Some(n), Some(m), Some(k)) = (args.n, args.m, args.k) else {
                bail!("--n, --m and --k are required without --plan");
            };
            let cfg = SystemConfig::new(n, m, k).with_m_tilde(args.m_tilde.unwrap_or(m));
            let model = build_zipf_mandelbrot(n, args.beta, args.shift)?;
            PolicyRegistry::with_builtin().get(&args.policy)?.place(&model, &cfg)?
        }
    };
    let model = build_zipf_mandelbrot(plan.n(), args.beta, args.shift)?;
    let m_tilde = args.m_tilde.unwrap_or(plan.m());
    let slot = derive_seed(args.seed, &[0, args.iteration]);
    let batch = sample_batch(&model, m_tilde, derive_seed(slot, &[0]))?;
    let opts = MatchOptions {
        partial: args.partial_matching,
    };
    let out = match_least_popular_with(&plan, &batch, derive_seed(slot, &[1]), opts)?;

    let mut t = String::new();
    writeln!(t, "slot seed {slot}").unwrap();
    let reqs: Vec<String> = batch.requests().iter().map(|r| (r + 1).to_string()).collect();
    writeln!(t, "requests ({m_tilde}): {}", reqs.join(" ")).unwrap();
    for d in &out.decisions {
        let verdict = if d.served == d.demand {
            "matched".to_string()
        } else if d.served == 0 {
            "skipped".to_string()
        } else {
            format!("{} served", d.served)
        };
        writeln!(
            t,
            "content {}: demand {}, idle holders {}, {verdict}",
            d.content + 1,
            d.demand,
            d.idle_holders
        )
        .unwrap();
    }
    for (cache, slot) in out.assignment.iter().enumerate() {
        if let Some(r) = slot {
            writeln!(
                t,
                "cache {} <- request {} (content {})",
                cache + 1,
                r + 1,
                batch.requests()[*r] + 1
            )
            .unwrap();
        }
    }
    writeln!(
        t,
        "unserved requests {}, distinct contents {}",
        out.unserved.len(),
        out.unserved_distinct
    )
    .unwrap();
    writeln!(t, "rate A {}", rate_setting_a(&out, args.b)).unwrap();
    writeln!(t, "rate C {}", rate_setting_c(&out, args.b)).unwrap();
    Ok(t)
}
