//! Match Least Popular: routes a slot's requests to caches, least popular
//! content first.

use crate::error::{Error, Result};
use crate::placement::PlacementPlan;
use crate::popularity::RequestBatch;
use crate::rng::SlotRng;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MatchOptions {
    /// Serve as many requests as there are idle holders instead of skipping
    /// an overflowing content entirely. Off by default.
    pub partial: bool,
}

/// What happened to one requested content.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ContentDecision {
    pub content: usize,
    pub demand: usize,
    pub idle_holders: usize,
    pub served: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchOutcome {
    /// Request index served by each cache, if any.
    pub assignment: Vec<Option<usize>>,
    /// Unserved request indices, ascending.
    pub unserved: Vec<usize>,
    /// Distinct contents with at least one unserved request.
    pub unserved_distinct: usize,
    pub served_count: usize,
    /// Requested contents in processing order (descending index).
    pub decisions: Vec<ContentDecision>,
}

pub fn match_least_popular(
    plan: &PlacementPlan,
    batch: &RequestBatch,
    seed: u64,
) -> Result<MatchOutcome> {
    match_least_popular_with(plan, batch, seed, MatchOptions::default())
}

pub fn match_least_popular_with(
    plan: &PlacementPlan,
    batch: &RequestBatch,
    seed: u64,
    opts: MatchOptions,
) -> Result<MatchOutcome> {
    if plan.n() != batch.n() {
        return Err(Error::InvalidConfiguration(format!(
            "plan covers {} contents but the batch was drawn from {}",
            plan.n(),
            batch.n()
        )));
    }
    let n = plan.n();
    let hist = batch.histogram();

    // Bucket request indices by content: offsets from the histogram, then
    // a second pass over the requests.
    let mut start = vec![0usize; n + 1];
    for i in 0..n {
        start[i + 1] = start[i] + hist[i] as usize;
    }
    let mut fill = start.clone();
    let mut by_content = vec![0usize; batch.len()];
    for (r, &c) in batch.requests().iter().enumerate() {
        by_content[fill[c]] = r;
        fill[c] += 1;
    }

    let mut rng = SlotRng::new(seed);
    let mut assignment = vec![None; plan.m()];
    let mut unserved = Vec::new();
    let mut unserved_distinct = 0;
    let mut decisions = Vec::new();
    let mut idle = Vec::new();

    for i in (0..n).rev() {
        let demand = hist[i] as usize;
        if demand == 0 {
            continue;
        }
        let reqs = &by_content[start[i]..start[i + 1]];
        idle.clear();
        idle.extend(
            plan.holders(i)
                .iter()
                .map(|&c| c as usize)
                .filter(|&c| assignment[c].is_none()),
        );
        let served = if demand <= idle.len() {
            demand
        } else if opts.partial {
            idle.len()
        } else {
            0
        };
        // Partial Fisher-Yates: the first `served` entries become a uniform
        // random subset of the idle holders.
        for t in 0..served {
            let j = t + rng.below((idle.len() - t) as u64) as usize;
            idle.swap(t, j);
            assignment[idle[t]] = Some(reqs[t]);
        }
        if served < demand {
            unserved.extend_from_slice(&reqs[served..]);
            unserved_distinct += 1;
        }
        decisions.push(ContentDecision {
            content: i,
            demand,
            idle_holders: idle.len(),
            served,
        });
    }
    unserved.sort_unstable();
    Ok(MatchOutcome {
        assignment,
        served_count: batch.len() - unserved.len(),
        unserved,
        unserved_distinct,
        decisions,
    })
}

/// Shared multicast link: one transmission of `b` units per distinct
/// unserved content.
pub fn rate_setting_a(outcome: &MatchOutcome, b: f64) -> f64 {
    b * outcome.unserved_distinct as f64
}

/// Unicast links: one transmission of `b` units per unserved request.
pub fn rate_setting_c(outcome: &MatchOutcome, b: f64) -> f64 {
    b * outcome.unserved.len() as f64
}
