//! Parameter sweeps and their CSV rows.

use std::io::{self, Write};

use super::{monte_carlo, ExperimentSpec, Metric, SimParams, SimSummary, SweepPoint};
use crate::bounds::{converse_no_coding, setting_c_bound};
use crate::error::{Error, Result};
use crate::placement::{PolicyRegistry, Setting, SystemConfig};
use crate::popularity::PopularityModel;

pub const CSV_HEADER: &str =
    "policy,setting,n,m,m_tilde,k_tilde,beta,iterations,mean_rate,std_error,lower_bound,seed";

/// One CSV row. Bound-only rows leave the simulation columns empty.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveRow {
    pub policy: String,
    pub setting: Setting,
    pub n: usize,
    pub m: usize,
    pub m_tilde: usize,
    pub k_tilde: usize,
    pub beta: f64,
    pub iterations: usize,
    pub mean_rate: Option<f64>,
    pub std_error: Option<f64>,
    pub lower_bound: Option<f64>,
    pub seed: Option<u64>,
}

fn real(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.11e}")).unwrap_or_default()
}

impl CurveRow {
    pub fn from_summary(policy: &str, point: &SweepPoint, metric: Metric, s: &SimSummary, lower_bound: Option<f64>) -> Self {
        let c = &point.config;
        CurveRow {
            policy: policy.to_string(),
            setting: match metric {
                Metric::SettingA => Setting::A,
                Metric::SettingC => Setting::C,
            },
            n: c.n,
            m: c.m,
            m_tilde: c.m_tilde,
            k_tilde: c.k_tilde,
            beta: point.beta,
            iterations: s.iterations,
            mean_rate: Some(s.mean_rate),
            std_error: Some(s.std_error),
            lower_bound,
            seed: Some(s.master_seed),
        }
    }

    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.policy,
            self.setting,
            self.n,
            self.m,
            self.m_tilde,
            self.k_tilde,
            real(Some(self.beta)),
            self.iterations,
            real(self.mean_rate),
            real(self.std_error),
            real(self.lower_bound),
            self.seed.map(|s| s.to_string()).unwrap_or_default(),
        )
    }
}

pub fn write_csv<W: Write>(rows: &[CurveRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(out, "{}", r.csv_line())?;
    }
    Ok(())
}

/// The analytic companion of a simulated curve: the knapsack converse for
/// the multicast metric, the exact one-content-per-cache optimum for the
/// unicast metric. `None` where no bound applies.
pub fn lower_bound_for(model: &PopularityModel, config: &SystemConfig, metric: Metric) -> Option<f64> {
    let report = match metric {
        Metric::SettingA => converse_no_coding(model, config),
        Metric::SettingC => setting_c_bound(model, config),
    };
    report.ok().map(|r| r.bound_value)
}

pub fn run_curve(spec: &ExperimentSpec, policies: &PolicyRegistry) -> Result<Vec<CurveRow>> {
    let summaries = monte_carlo(spec, policies)?;
    spec.points
        .iter()
        .zip(&summaries)
        .map(|(p, s)| {
            let model = p.model()?;
            let lb = lower_bound_for(&model, &p.config, spec.sim.metric);
            Ok(CurveRow::from_summary(&spec.policy, p, spec.sim.metric, s, lb))
        })
        .collect()
}

/// Real-valued grid `from, from + step, ..., ≤ to`, computed by index so
/// that endpoints do not drift.
pub fn real_grid(from: f64, to: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !(from <= to) {
        return Err(Error::InvalidParameter(format!(
            "grid {from}..{to} step {step} is empty"
        )));
    }
    let steps = ((to - from) / step + 1e-9).floor() as usize;
    Ok((0..=steps)
        .map(|t| ((from + t as f64 * step) * 1e12).round() / 1e12)
        .collect())
}

/// Catalog size sweep with `m = n / ratio`.
#[derive(Debug, Clone, PartialEq)]
pub struct VaryN {
    pub ns: Vec<usize>,
    pub ratio: usize,
    pub k_tilde: usize,
    pub betas: Vec<f64>,
}

impl VaryN {
    /// `n = 5m`, three contents per cache.
    pub fn size_1() -> Self {
        VaryN {
            ns: (1..=10).map(|t| 1000 * t).collect(),
            ratio: 5,
            k_tilde: 3,
            betas: vec![1.2, 1.5, 1.8],
        }
    }

    /// `n = 15m`, sixteen contents per cache.
    pub fn size_2() -> Self {
        VaryN {
            ns: (1..=10).map(|t| 1500 * t).collect(),
            ratio: 15,
            k_tilde: 16,
            betas: vec![1.2, 1.5, 1.8],
        }
    }

    pub fn points(&self) -> Result<Vec<SweepPoint>> {
        if self.ratio == 0 {
            return Err(Error::InvalidParameter("n/m ratio must be at least 1".into()));
        }
        let mut pts = Vec::new();
        for &beta in &self.betas {
            for &n in &self.ns {
                let m = n / self.ratio;
                let cfg = SystemConfig::new(n, m, self.k_tilde);
                cfg.validate()?;
                pts.push(SweepPoint::new(cfg, beta));
            }
        }
        Ok(pts)
    }
}

/// Storage sweep at fixed `n`, `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct VaryStorage {
    pub n: usize,
    pub m: usize,
    pub ks: Vec<usize>,
    pub betas: Vec<f64>,
}

impl VaryStorage {
    /// 1000 contents, 100 caches, one to twelve contents per cache.
    pub fn standard() -> Self {
        VaryStorage {
            n: 1000,
            m: 100,
            ks: (1..=12).collect(),
            betas: vec![0.8, 1.2],
        }
    }

    pub fn points(&self) -> Result<Vec<SweepPoint>> {
        let mut pts = Vec::new();
        for &beta in &self.betas {
            for &k in &self.ks {
                let cfg = SystemConfig::new(self.n, self.m, k);
                cfg.validate()?;
                pts.push(SweepPoint::new(cfg, beta));
            }
        }
        Ok(pts)
    }
}

/// Zipf exponent sweep at fixed `n`, `m`, one curve per storage size.
#[derive(Debug, Clone, PartialEq)]
pub struct VaryBeta {
    pub n: usize,
    pub m: usize,
    pub ks: Vec<usize>,
    pub betas: Vec<f64>,
}

impl VaryBeta {
    /// 1000 contents, 200 caches, `β = 0.6, 0.7, ..., 2.0`, two and four
    /// contents per cache.
    pub fn standard() -> Self {
        VaryBeta {
            n: 1000,
            m: 200,
            ks: vec![2, 4],
            betas: (6..=20).map(|t| t as f64 / 10.0).collect(),
        }
    }

    pub fn points(&self) -> Result<Vec<SweepPoint>> {
        let mut pts = Vec::new();
        for &k in &self.ks {
            for &beta in &self.betas {
                let cfg = SystemConfig::new(self.n, self.m, k);
                cfg.validate()?;
                pts.push(SweepPoint::new(cfg, beta));
            }
        }
        Ok(pts)
    }
}

fn run_points(
    points: Vec<SweepPoint>,
    policy: &str,
    sim: &SimParams,
    policies: &PolicyRegistry,
) -> Result<Vec<CurveRow>> {
    let spec = ExperimentSpec {
        policy: policy.to_string(),
        points,
        sim: *sim,
    };
    run_curve(&spec, policies)
}

pub fn experiment_vary_n(
    params: &VaryN,
    policy: &str,
    sim: &SimParams,
    policies: &PolicyRegistry,
) -> Result<Vec<CurveRow>> {
    run_points(params.points()?, policy, sim, policies)
}

pub fn experiment_vary_storage(
    params: &VaryStorage,
    policy: &str,
    sim: &SimParams,
    policies: &PolicyRegistry,
) -> Result<Vec<CurveRow>> {
    run_points(params.points()?, policy, sim, policies)
}

pub fn experiment_vary_beta(
    params: &VaryBeta,
    policy: &str,
    sim: &SimParams,
    policies: &PolicyRegistry,
) -> Result<Vec<CurveRow>> {
    run_points(params.points()?, policy, sim, policies)
}

pub fn experiment_point(
    point: SweepPoint,
    policy: &str,
    sim: &SimParams,
    policies: &PolicyRegistry,
) -> Result<Vec<CurveRow>> {
    run_points(vec![point], policy, sim, policies)
}
