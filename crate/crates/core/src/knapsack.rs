//! Greedy fractional knapsack.

use std::cmp::Ordering;

use crate::error::{invalid, Result};

/// Numerical slack shared by the solver and its validity checks.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    /// Absolute slack allowed on the capacity constraint.
    pub capacity_slack: f64,
}

pub const TOLERANCES: Tolerances = Tolerances {
    capacity_slack: 1e-9,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KnapsackItem {
    pub id: usize,
    pub value: f64,
    pub weight: f64,
}

impl KnapsackItem {
    pub fn new(id: usize, value: f64, weight: f64) -> Self {
        KnapsackItem { id, value, weight }
    }

    fn ratio(&self) -> f64 {
        self.value / self.weight
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KnapsackSolution {
    /// Fraction taken of each item, aligned with the input slice.
    pub x: Vec<f64>,
    pub objective: f64,
    /// Id of the single partially taken item, if any.
    pub split_id: Option<usize>,
}

impl KnapsackSolution {
    pub fn used_capacity(&self, items: &[KnapsackItem]) -> f64 {
        self.x.iter().zip(items).map(|(x, it)| x * it.weight).sum()
    }

    /// Indices (into the item slice) with `x > 0`.
    pub fn selected(&self) -> impl Iterator<Item = usize> + '_ {
        self.x
            .iter()
            .enumerate()
            .filter(|(_, &x)| x > 0.0)
            .map(|(j, _)| j)
    }
}

/// Order in which the greedy considers items: non-increasing value/weight,
/// lower id first on ties.
pub fn greedy_order(items: &[KnapsackItem]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..items.len()).collect();
    order.sort_by(|&a, &b| {
        let (ia, ib) = (&items[a], &items[b]);
        ib.ratio()
            .partial_cmp(&ia.ratio())
            .unwrap_or(Ordering::Equal)
            .then(ia.id.cmp(&ib.id))
    });
    order
}

/// Solves `max Σ x_j v_j  s.t.  Σ x_j w_j ≤ capacity, 0 ≤ x_j ≤ 1`.
///
/// Items are taken whole in [`greedy_order`] until the next one no longer
/// fits; that item is taken fractionally and the rest are left out.
/// Runs in `O(J log J)`.
pub fn solve_fractional(items: &[KnapsackItem], capacity: f64) -> Result<KnapsackSolution> {
    if !(capacity >= 0.0) {
        return invalid(format!("knapsack capacity must be non-negative, got {capacity}"));
    }
    for it in items {
        if !(it.weight > 0.0 && it.weight.is_finite()) {
            return invalid(format!("item {} has non-positive weight {}", it.id, it.weight));
        }
        if !(it.value >= 0.0 && it.value.is_finite()) {
            return invalid(format!("item {} has negative value {}", it.id, it.value));
        }
    }

    let mut x = vec![0.0; items.len()];
    let mut objective = 0.0;
    let mut used = 0.0;
    let mut split_id = None;
    for j in greedy_order(items) {
        let it = &items[j];
        if used + it.weight <= capacity + TOLERANCES.capacity_slack {
            x[j] = 1.0;
            used += it.weight;
            objective += it.value;
        } else {
            let frac = ((capacity - used) / it.weight).clamp(0.0, 1.0);
            if frac > 0.0 {
                x[j] = frac;
                objective += frac * it.value;
                split_id = Some(it.id);
            }
            break;
        }
    }
    Ok(KnapsackSolution {
        x,
        objective,
        split_id,
    })
}
