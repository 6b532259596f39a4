//! Monte Carlo delivery simulation.
//!
//! Slot `t` of sweep point `s` under master seed `M` uses the seed
//! `derive_seed(M, &[s, t])`; its request batch is drawn from
//! `derive_seed(slot, &[0])` and the matcher's random choices from
//! `derive_seed(slot, &[1])`. Per-slot rates are integer multiples of `b`,
//! so means and standard errors are aggregated from exact integer sums and
//! do not depend on execution order.

mod experiments;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

pub use experiments::{
    experiment_point, experiment_vary_beta, experiment_vary_n, experiment_vary_storage,
    lower_bound_for, real_grid, run_curve, write_csv, CurveRow, VaryBeta, VaryN, VaryStorage,
    CSV_HEADER,
};

use crate::error::{Error, Result};
use crate::matching::{match_least_popular_with, MatchOptions};
use crate::placement::{PlacementPlan, PolicyRegistry, SystemConfig};
use crate::popularity::{build_zipf_mandelbrot, sample_batch, PopularityModel};
use crate::rng::derive_seed;

/// How unserved requests are charged.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    /// One multicast per distinct unserved content.
    SettingA,
    /// One unicast per unserved request.
    SettingC,
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::SettingA => "A",
            Metric::SettingC => "C",
        })
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Metric::SettingA),
            "C" => Ok(Metric::SettingC),
            other => Err(Error::InvalidParameter(format!(
                "unknown metric `{other}` (expected A or C)"
            ))),
        }
    }
}

/// One configuration of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub config: SystemConfig,
    pub beta: f64,
    pub shift: f64,
}

impl SweepPoint {
    pub fn new(config: SystemConfig, beta: f64) -> Self {
        SweepPoint {
            config,
            beta,
            shift: 0.0,
        }
    }

    pub fn model(&self) -> Result<PopularityModel> {
        build_zipf_mandelbrot(self.config.n, self.beta, self.shift)
    }
}

/// Per-run simulation knobs shared by every sweep point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimParams {
    pub iterations: usize,
    pub master_seed: u64,
    pub metric: Metric,
    pub matching: MatchOptions,
    pub keep_histogram: bool,
}

impl SimParams {
    pub fn new(iterations: usize, master_seed: u64, metric: Metric) -> Self {
        SimParams {
            iterations,
            master_seed,
            metric,
            matching: MatchOptions::default(),
            keep_histogram: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    /// Placement policy name, looked up in a [`PolicyRegistry`].
    pub policy: String,
    pub points: Vec<SweepPoint>,
    pub sim: SimParams,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimSummary {
    pub mean_rate: f64,
    /// Standard error of the mean; 0 for a single iteration.
    pub std_error: f64,
    pub iterations: usize,
    pub master_seed: u64,
    /// Slot counts indexed by the number of server transmissions.
    pub rate_histogram: Option<Vec<u64>>,
}

fn slot_transmissions(
    plan: &PlacementPlan,
    model: &PopularityModel,
    config: &SystemConfig,
    metric: Metric,
    matching: MatchOptions,
    slot_seed: u64,
) -> Result<usize> {
    let batch = sample_batch(model, config.m_tilde, derive_seed(slot_seed, &[0]))?;
    let out = match_least_popular_with(plan, &batch, derive_seed(slot_seed, &[1]), matching)?;
    Ok(match metric {
        Metric::SettingA => out.unserved_distinct,
        Metric::SettingC => out.unserved.len(),
    })
}

/// Rate of one simulated slot.
pub fn run_slot(
    plan: &PlacementPlan,
    model: &PopularityModel,
    config: &SystemConfig,
    metric: Metric,
    matching: MatchOptions,
    slot_seed: u64,
) -> Result<f64> {
    let count = slot_transmissions(plan, model, config, metric, matching, slot_seed)?;
    Ok(config.b * count as f64)
}

/// Runs `sim.iterations` slots of a fixed plan; `sweep_index` selects the
/// seed stream.
pub fn simulate_plan(
    plan: &PlacementPlan,
    model: &PopularityModel,
    config: &SystemConfig,
    sim: &SimParams,
    sweep_index: usize,
) -> Result<SimSummary> {
    if sim.iterations == 0 {
        return Err(Error::InvalidParameter("iterations must be at least 1".into()));
    }
    config.validate()?;
    if plan.n() != config.n || model.n() != config.n {
        return Err(Error::InvalidConfiguration(format!(
            "plan ({}), model ({}) and configuration ({}) disagree on n",
            plan.n(),
            model.n(),
            config.n
        )));
    }
    let counts: Vec<usize> = (0..sim.iterations)
        .into_par_iter()
        .map(|t| {
            let seed = derive_seed(sim.master_seed, &[sweep_index as u64, t as u64]);
            slot_transmissions(plan, model, config, sim.metric, sim.matching, seed)
        })
        .collect::<Result<_>>()?;

    let iters = sim.iterations as f64;
    let sum: u128 = counts.iter().map(|&c| c as u128).sum();
    let sum_sq: u128 = counts.iter().map(|&c| (c as u128) * (c as u128)).sum();
    let mean = sum as f64 / iters;
    let std_error = if sim.iterations > 1 {
        // n·Σx² − (Σx)² is exact in integers.
        let spread = (sim.iterations as u128 * sum_sq - sum * sum) as f64;
        let var = spread / (iters * (iters - 1.0));
        (var / iters).sqrt()
    } else {
        0.0
    };
    let rate_histogram = sim.keep_histogram.then(|| {
        let top = counts.iter().copied().max().unwrap_or(0);
        let mut h = vec![0u64; top + 1];
        for &c in &counts {
            h[c] += 1;
        }
        h
    });
    Ok(SimSummary {
        mean_rate: config.b * mean,
        std_error: config.b * std_error,
        iterations: sim.iterations,
        master_seed: sim.master_seed,
        rate_histogram,
    })
}

/// One summary per sweep point; the placement is computed once per point.
pub fn monte_carlo(spec: &ExperimentSpec, policies: &PolicyRegistry) -> Result<Vec<SimSummary>> {
    if spec.points.is_empty() {
        return Err(Error::InvalidParameter("experiment has no sweep points".into()));
    }
    let policy = policies.get(&spec.policy)?;
    spec.points
        .iter()
        .enumerate()
        .map(|(s, point)| {
            let model = point.model()?;
            let plan = policy.place(&model, &point.config)?;
            simulate_plan(&plan, &model, &point.config, &spec.sim, s)
        })
        .collect()
}
