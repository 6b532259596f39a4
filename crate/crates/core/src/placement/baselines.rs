//! Comparison policies: Proportional, Most Popular and the exact
//! setting-C optimum.

use super::{PlacementPlan, SystemConfig};
use crate::bounds::setting_c_selection;
use crate::error::{Error, Result};
use crate::popularity::PopularityModel;

fn check(model: &PopularityModel, config: &SystemConfig) -> Result<()> {
    config.validate()?;
    if model.n() != config.n {
        return Err(Error::InvalidConfiguration(format!(
            "popularity model has {} contents but n = {}",
            model.n(),
            config.n
        )));
    }
    Ok(())
}

fn require_unit_storage(policy: &str, config: &SystemConfig) -> Result<()> {
    if config.k_tilde != 1 {
        return Err(Error::InvalidConfiguration(format!(
            "{policy} stores one content per cache, got k_tilde = {}",
            config.k_tilde
        )));
    }
    Ok(())
}

/// Number of contents Proportional Storage considers: `⌊(m / ln m)^{1/β}⌋`,
/// or the whole catalog when `m = 1`.
pub fn proportional_cutoff(n: usize, m: usize, beta: f64) -> usize {
    if m < 2 {
        return n;
    }
    let m = m as f64;
    ((m / m.ln()).powf(1.0 / beta).floor() as usize).min(n)
}

/// `⌈m p_i⌉` copies of each content up to the cutoff, trimmed from the least
/// popular end when the total exceeds `m`.
pub fn proportional_storage(model: &PopularityModel, config: &SystemConfig) -> Result<PlacementPlan> {
    check(model, config)?;
    require_unit_storage("proportional storage", config)?;
    let m = config.m;
    let cutoff = proportional_cutoff(config.n, m, model.beta());
    let mut copies = vec![0usize; config.n];
    for (c, &p) in copies.iter_mut().zip(model.probs()).take(cutoff) {
        *c = ((m as f64 * p).ceil() as usize).clamp(1, m);
    }
    let total: usize = copies.iter().sum();
    if total > m {
        let mut excess = total - m;
        for c in copies[..cutoff].iter_mut().rev() {
            let cut = excess.min(*c);
            *c -= cut;
            excess -= cut;
            if excess == 0 {
                break;
            }
        }
    }
    PlacementPlan::round_robin(config.n, m, 1, &copies)
}

/// Every cache stores the `k̃` most popular contents.
pub fn most_popular_storage(model: &PopularityModel, config: &SystemConfig) -> Result<PlacementPlan> {
    check(model, config)?;
    let k = if config.k_tilde > config.n {
        log::warn!(
            "k_tilde = {} exceeds the catalog size {}; storing every content",
            config.k_tilde,
            config.n
        );
        config.n
    } else {
        config.k_tilde
    };
    let caches = vec![(0..k).collect::<Vec<_>>(); config.m];
    PlacementPlan::from_cache_contents(config.n, config.k_tilde, caches)
}

/// Copies from the greedy setting-C selection, laid out round robin.
pub fn setting_c_optimal_storage(
    model: &PopularityModel,
    config: &SystemConfig,
) -> Result<PlacementPlan> {
    check(model, config)?;
    require_unit_storage("setting-C optimal storage", config)?;
    let sel = setting_c_selection(model.probs(), config.m, config.m_tilde);
    PlacementPlan::round_robin(config.n, config.m, 1, &sel.copies)
}
