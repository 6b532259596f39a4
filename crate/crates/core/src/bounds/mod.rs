//! Analytic rate bounds and achievable-rate formulas.
//!
//! Order-level (Ω/Θ) expressions are evaluated with constant 1 and flagged
//! as such in the resulting [`BoundReport`].

mod binomial;
mod regime;
mod registry;

use std::cmp::Ordering;
use std::collections::BinaryHeap;

pub use binomial::{at_least_once, binomial_tail, binomial_tails};
pub use regime::{epsilon_tilde, regime_classify, GapDescriptor, RateOrder, Regime};
pub use registry::{BoundCalculator, BoundRegistry};

use crate::error::{Error, Result};
use crate::knapsack::{solve_fractional, KnapsackItem};
use crate::placement::{Setting, SystemConfig};
use crate::popularity::PopularityModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    /// Holds for every policy in the stated class.
    Lower,
    /// Rate achieved by a concrete scheme.
    Achievable,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub name: &'static str,
    pub setting: Setting,
    pub kind: BoundKind,
    pub bound_value: f64,
    pub knapsack_objective: Option<f64>,
    /// First and last selected content index (0-based), when a knapsack
    /// selection is involved.
    pub window: Option<(usize, usize)>,
    /// True when `bound_value` is an order expression with unit constant.
    pub order_level: bool,
    pub detail: Vec<(String, f64)>,
}

impl BoundReport {
    fn new(name: &'static str, setting: Setting, kind: BoundKind, bound_value: f64) -> Self {
        BoundReport {
            name,
            setting,
            kind,
            bound_value,
            knapsack_objective: None,
            window: None,
            order_level: false,
            detail: Vec::new(),
        }
    }

    pub fn detail(&self, key: &str) -> Option<f64> {
        self.detail.iter().find(|(k, _)| k == key).map(|&(_, v)| v)
    }
}

/// Lower bound on the expected Setting-A rate of any uncoded policy.
///
/// One knapsack item per content: value `b·P(requested at least once)`,
/// weight `b·max{m̃ p_i, 1}`, capacity `m·k̃·b`. The bound is the expected
/// value of everything the knapsack leaves out.
pub fn converse_no_coding(model: &PopularityModel, config: &SystemConfig) -> Result<BoundReport> {
    config.validate()?;
    check_catalog(model, config)?;
    let b = config.b;
    let mt = config.m_tilde as f64;
    let items: Vec<KnapsackItem> = model
        .probs()
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            KnapsackItem::new(i, b * at_least_once(config.m_tilde, p), b * (mt * p).max(1.0))
        })
        .collect();
    let capacity = config.m as f64 * config.k_tilde as f64 * b;
    let sol = solve_fractional(&items, capacity)?;

    let bound: f64 = items
        .iter()
        .zip(&sol.x)
        .map(|(it, x)| (1.0 - x) * it.value)
        .sum();
    let mut selected = sol.selected();
    let window = selected.next().map(|first| (first, sol.selected().last().unwrap_or(first)));

    let mut report = BoundReport::new("no-coding", Setting::A, BoundKind::Lower, bound.max(0.0));
    report.knapsack_objective = Some(sol.objective);
    report.window = window;
    report.detail = vec![
        ("total_value".into(), items.iter().map(|it| it.value).sum()),
        ("total_weight".into(), items.iter().map(|it| it.weight).sum()),
        ("capacity".into(), capacity),
        (
            "heavy_contents".into(),
            model.probs().iter().filter(|&&p| mt * p >= 1.0).count() as f64,
        ),
    ];
    if model.is_pure_zipf() {
        let i_tilde = (mt * model.max_prob()).powf(1.0 / model.beta());
        report.detail.push(("i_tilde".into(), i_tilde));
        report.detail.push(("i_tilde_floor".into(), i_tilde.floor()));
        report.detail.push(("i_tilde_ceil".into(), i_tilde.ceil()));
    }
    Ok(report)
}

/// Value-to-weight ratio of each content in the uncoded converse.
pub fn ratio_profile(model: &PopularityModel, config: &SystemConfig) -> Vec<f64> {
    let mt = config.m_tilde as f64;
    model
        .probs()
        .iter()
        .map(|&p| {
            let v = at_least_once(config.m_tilde, p);
            if mt * p >= 1.0 {
                v / (mt * p)
            } else {
                v
            }
        })
        .collect()
}

/// `max(0, (n − m·k̃·b)·m / n^β)`: the information-theoretic order bound
/// for Zipf popularity with `β > 1`, evaluated with unit constant.
pub fn info_theoretic_bound(model: &PopularityModel, config: &SystemConfig) -> Result<f64> {
    config.validate()?;
    check_catalog(model, config)?;
    require_pure_zipf(model)?;
    if model.beta() <= 1.0 {
        return Err(Error::Unsupported(format!(
            "information-theoretic bound needs beta > 1, got {}",
            model.beta()
        )));
    }
    let n = config.n as f64;
    let m = config.m as f64;
    let storage = m * config.k_tilde as f64 * config.b;
    Ok(((n - storage) * m / n.powf(model.beta())).max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CodedRate {
    pub rate: f64,
    /// Number of contents with `m·k̃·p_i ≥ 1`.
    pub n3: usize,
}

/// Achievable broadcast rate of coded caching with fixed user-to-cache
/// matching.
///
/// `[n₃/k̃ − 1]⁺ + min{Σ_{i>n₃} m p_i, (n − n₃)/[k̃ − n₃]⁺ − 1}`, where a zero
/// denominator makes the second branch infinite. The second branch is
/// clamped at zero so caches that hold the whole catalog give rate zero.
pub fn setting_b_coded_rate(model: &PopularityModel, config: &SystemConfig) -> Result<CodedRate> {
    config.validate()?;
    check_catalog(model, config)?;
    let m = config.m as f64;
    let k = config.k_tilde as f64;
    let n3 = model.probs().iter().take_while(|&&p| m * k * p >= 1.0).count();
    let head = (n3 as f64 / k - 1.0).max(0.0);
    let tail_mass: f64 = model.probs()[n3..].iter().rev().map(|p| m * p).sum();
    let spread = if config.k_tilde > n3 {
        ((config.n - n3) as f64 / (config.k_tilde - n3) as f64 - 1.0).max(0.0)
    } else {
        f64::INFINITY
    };
    Ok(CodedRate {
        rate: head + tail_mass.min(spread),
        n3,
    })
}

/// Broadcast rate of storing the `k̃` most popular contents everywhere:
/// `Σ_{i>k̃} m p_i`.
pub fn setting_b_uncoded_rate(model: &PopularityModel, config: &SystemConfig) -> Result<f64> {
    config.validate()?;
    check_catalog(model, config)?;
    let m = config.m as f64;
    let from = config.k_tilde.min(config.n);
    Ok(model.probs()[from..].iter().rev().map(|p| m * p).sum())
}

/// Result of choosing the `m` largest `P(requested ≥ j times)` values.
#[derive(Debug, Clone, PartialEq)]
pub struct SettingCSelection {
    /// Copies per content (`c_i`).
    pub copies: Vec<usize>,
    /// Sum of the selected values (`O_c`), accumulated largest first.
    pub objective: f64,
}

#[derive(PartialEq)]
struct Candidate {
    value: f64,
    content: usize,
    j: usize,
}

impl Eq for Candidate {}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value
            .total_cmp(&other.value)
            .then(other.content.cmp(&self.content))
            .then(other.j.cmp(&self.j))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Greedy selection of `m` pairs `(i, j)`, `1 ≤ j ≤ m_tilde`, maximizing
/// `Σ P(Binomial(m_tilde, p_i) ≥ j)`; ties go to lower `i`, then lower `j`.
///
/// Each content's values are non-increasing in `j`, so a heap over the
/// next unselected `j` of every content yields pairs in global order and the
/// selected `j`s of a content are always `1..=c_i`. Accepts `m = 0`.
pub fn setting_c_selection(probs: &[f64], m: usize, m_tilde: usize) -> SettingCSelection {
    let tails: Vec<Vec<f64>> = probs.iter().map(|&p| binomial_tails(m_tilde, p)).collect();
    let value = |i: usize, j: usize| tails[i].get(j).copied().unwrap_or(0.0);

    let mut heap: BinaryHeap<Candidate> = (0..probs.len())
        .filter(|_| m_tilde >= 1)
        .map(|i| Candidate {
            value: value(i, 1),
            content: i,
            j: 1,
        })
        .collect();
    let mut copies = vec![0usize; probs.len()];
    let mut objective = 0.0;
    for _ in 0..m {
        let Some(top) = heap.pop() else { break };
        objective += top.value;
        copies[top.content] = top.j;
        if top.j < m_tilde {
            heap.push(Candidate {
                value: value(top.content, top.j + 1),
                content: top.content,
                j: top.j + 1,
            });
        }
    }
    SettingCSelection { copies, objective }
}

/// Exact expected unicast rate lower bound with one content per cache:
/// `m̃ − O_c`.
pub fn setting_c_bound(model: &PopularityModel, config: &SystemConfig) -> Result<BoundReport> {
    config.validate()?;
    check_catalog(model, config)?;
    if config.k_tilde != 1 {
        return Err(Error::Unsupported(format!(
            "setting-C bound is defined for one content per cache, got k_tilde = {}",
            config.k_tilde
        )));
    }
    let sel = setting_c_selection(model.probs(), config.m, config.m_tilde);
    let mut report = BoundReport::new(
        "setting-c",
        Setting::C,
        BoundKind::Lower,
        (config.m_tilde as f64 - sel.objective).max(0.0) * config.b,
    );
    report.knapsack_objective = Some(sel.objective);
    let stored: Vec<usize> = (0..sel.copies.len()).filter(|&i| sel.copies[i] > 0).collect();
    report.window = stored.first().map(|&a| (a, *stored.last().unwrap()));
    report.detail = vec![("contents_stored".into(), stored.len() as f64)];
    Ok(report)
}

fn check_catalog(model: &PopularityModel, config: &SystemConfig) -> Result<()> {
    if model.n() != config.n {
        return Err(Error::InvalidConfiguration(format!(
            "popularity model has {} contents but configuration says n = {}",
            model.n(),
            config.n
        )));
    }
    Ok(())
}

fn require_pure_zipf(model: &PopularityModel) -> Result<()> {
    if !model.is_pure_zipf() {
        return Err(Error::Unsupported(
            "bound calculators accept pure Zipf popularity only (shift = 0)".into(),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests;
