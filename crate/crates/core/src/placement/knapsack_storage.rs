//! Knapsack Storage: replica counts from a fractional knapsack over
//! contents, then a round-robin layout.

use super::{PlacementPlan, SystemConfig};
use crate::bounds::at_least_once;
use crate::error::{Error, Result};
use crate::knapsack::{solve_fractional, KnapsackItem, KnapsackSolution};
use crate::popularity::PopularityModel;

/// Popularity tier that decides a content's knapsack weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightTier {
    /// `p_i = p*`: stored on every cache if at all.
    Top,
    /// `p* > p_i ≥ (log m)²/m̃`: weight `⌈(1 + p*/2)·m̃·p_i⌉`.
    Proportional,
    /// `(log m)²/m̃ > p_i ≥ 1/(m̃ (log m)²)`: weight `⌈4 p* (log m)²⌉`.
    Flat,
    /// Anything rarer: a single copy.
    Single,
}

fn log_m_squared(config: &SystemConfig) -> Result<f64> {
    config.validate()?;
    if config.m < 3 {
        return Err(Error::InvalidConfiguration(format!(
            "knapsack weights need m >= 3 for the (log m)^2 thresholds, got m = {}",
            config.m
        )));
    }
    Ok((config.m as f64).ln().powi(2))
}

pub fn weight_tiers(model: &PopularityModel, config: &SystemConfig) -> Result<Vec<WeightTier>> {
    let l2 = log_m_squared(config)?;
    let mt = config.m_tilde as f64;
    let p_star = model.probs().iter().copied().fold(0.0, f64::max);
    Ok(model
        .probs()
        .iter()
        .map(|&p| {
            if p == p_star {
                WeightTier::Top
            } else if p >= l2 / mt {
                WeightTier::Proportional
            } else if p >= 1.0 / (mt * l2) {
                WeightTier::Flat
            } else {
                WeightTier::Single
            }
        })
        .collect())
}

/// Copies each content needs if selected, capped at `m`. Natural log.
pub fn knapsack_weights(model: &PopularityModel, config: &SystemConfig) -> Result<Vec<usize>> {
    let tiers = weight_tiers(model, config)?;
    let l2 = log_m_squared(config)?;
    let mt = config.m_tilde as f64;
    let m = config.m;
    let p_star = model.probs().iter().copied().fold(0.0, f64::max);
    let flat = (4.0 * p_star * l2).ceil() as usize;
    Ok(tiers
        .iter()
        .zip(model.probs())
        .map(|(tier, &p)| {
            let w = match tier {
                WeightTier::Top => m,
                WeightTier::Proportional => ((1.0 + p_star / 2.0) * mt * p).ceil() as usize,
                WeightTier::Flat => flat,
                WeightTier::Single => 1,
            };
            w.clamp(1, m)
        })
        .collect())
}

/// Where the threshold tiers end, as 1-based index counts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TierEdges {
    /// Contents with `p_i ≥ (log m)²/m̃` (the top content included).
    pub proportional_end: usize,
    /// Contents with `p_i ≥ 1/(m̃ (log m)²)`.
    pub flat_end: usize,
    /// For pure Zipf, the same edges in closed form:
    /// `(p₁ m̃)^{1/β} / (log m)^{2/β}` and `(p₁ m̃)^{1/β} (log m)^{2/β}`.
    pub closed_form: Option<(f64, f64)>,
}

pub fn tier_edges(model: &PopularityModel, config: &SystemConfig) -> Result<TierEdges> {
    let l2 = log_m_squared(config)?;
    let mt = config.m_tilde as f64;
    let count = |th: f64| model.probs().iter().filter(|&&p| p >= th).count();
    let closed_form = model.is_pure_zipf().then(|| {
        let base = (model.max_prob() * mt).powf(1.0 / model.beta());
        let spread = l2.powf(1.0 / model.beta());
        (base / spread, base * spread)
    });
    Ok(TierEdges {
        proportional_end: count(l2 / mt),
        flat_end: count(1.0 / (mt * l2)),
        closed_form,
    })
}

/// Knapsack over contents with the given values and integer weights;
/// contents taken whole get `weight` copies, the fractional one gets none.
pub fn select_copies(
    values: &[f64],
    weights: &[usize],
    capacity: usize,
) -> Result<(Vec<usize>, KnapsackSolution)> {
    if values.len() != weights.len() {
        return Err(Error::InvalidParameter(format!(
            "{} values but {} weights",
            values.len(),
            weights.len()
        )));
    }
    let items: Vec<KnapsackItem> = values
        .iter()
        .zip(weights)
        .enumerate()
        .map(|(i, (&v, &w))| KnapsackItem::new(i, v, w as f64))
        .collect();
    let sol = solve_fractional(&items, capacity as f64)?;
    let copies = sol
        .x
        .iter()
        .zip(weights)
        .map(|(&x, &w)| if x >= 1.0 { w } else { 0 })
        .collect();
    Ok((copies, sol))
}

/// Part 1: how many caches each content goes on.
///
/// Values are `P(requested at least once)`, weights from
/// [`knapsack_weights`], capacity `m·k̃` content slots.
pub fn knapsack_storage_part1(
    model: &PopularityModel,
    config: &SystemConfig,
) -> Result<(Vec<usize>, KnapsackSolution)> {
    if model.n() != config.n {
        return Err(Error::InvalidConfiguration(format!(
            "popularity model has {} contents but n = {}",
            model.n(),
            config.n
        )));
    }
    let weights = knapsack_weights(model, config)?;
    let values: Vec<f64> = model
        .probs()
        .iter()
        .map(|&p| at_least_once(config.m_tilde, p))
        .collect();
    select_copies(&values, &weights, config.total_slots())
}

/// Part 2: round-robin layout of the selected copies.
pub fn knapsack_storage_part2(replicas: &[usize], config: &SystemConfig) -> Result<PlacementPlan> {
    config.validate()?;
    PlacementPlan::round_robin(config.n, config.m, config.k_tilde, replicas)
}

pub fn knapsack_storage(model: &PopularityModel, config: &SystemConfig) -> Result<PlacementPlan> {
    let (replicas, _) = knapsack_storage_part1(model, config)?;
    knapsack_storage_part2(&replicas, config)
}
