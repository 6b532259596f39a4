//! Storage policies: which contents each cache holds.

mod baselines;
mod knapsack_storage;
mod plan;
mod registry;

use std::fmt;
use std::str::FromStr;

pub use baselines::{
    most_popular_storage, proportional_cutoff, proportional_storage, setting_c_optimal_storage,
};
pub use knapsack_storage::{
    knapsack_storage, knapsack_storage_part1, knapsack_storage_part2, knapsack_weights,
    select_copies, tier_edges, weight_tiers, TierEdges, WeightTier,
};
pub use plan::PlacementPlan;
pub use registry::{PlacementPolicy, PolicyRegistry};

use crate::error::{Error, Result};

/// Network setting: how users reach caches and how the server delivers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Setting {
    /// Flexible matching, shared multicast link through the root node.
    A,
    /// Fixed matching, broadcast link.
    B,
    /// Flexible matching, unicast server links.
    C,
    /// Fixed matching, unicast server links.
    D,
}

impl fmt::Display for Setting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Setting::A => "A",
            Setting::B => "B",
            Setting::C => "C",
            Setting::D => "D",
        };
        f.write_str(s)
    }
}

impl FromStr for Setting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Setting::A),
            "B" => Ok(Setting::B),
            "C" => Ok(Setting::C),
            "D" => Ok(Setting::D),
            other => Err(Error::InvalidParameter(format!("unknown setting `{other}`"))),
        }
    }
}

/// System dimensions shared by every policy and bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemConfig {
    /// Catalog size.
    pub n: usize,
    /// Number of caches.
    pub m: usize,
    /// Requests per time slot.
    pub m_tilde: usize,
    /// Whole contents each cache can hold.
    pub k_tilde: usize,
    /// Storage units per content.
    pub b: f64,
    pub setting: Setting,
}

impl SystemConfig {
    /// `m_tilde = m`, unit-size contents, setting A.
    pub fn new(n: usize, m: usize, k_tilde: usize) -> Self {
        SystemConfig {
            n,
            m,
            m_tilde: m,
            k_tilde,
            b: 1.0,
            setting: Setting::A,
        }
    }

    pub fn with_m_tilde(mut self, m_tilde: usize) -> Self {
        self.m_tilde = m_tilde;
        self
    }

    pub fn with_b(mut self, b: f64) -> Self {
        self.b = b;
        self
    }

    pub fn with_setting(mut self, setting: Setting) -> Self {
        self.setting = setting;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("n", self.n),
            ("m", self.m),
            ("m_tilde", self.m_tilde),
            ("k_tilde", self.k_tilde),
        ];
        for (name, v) in positive {
            if v == 0 {
                return Err(Error::InvalidConfiguration(format!("{name} must be at least 1")));
            }
        }
        if !(self.b.is_finite() && self.b > 0.0) {
            return Err(Error::InvalidConfiguration(format!(
                "content size b must be positive, got {}",
                self.b
            )));
        }
        Ok(())
    }

    /// `c = n / m`.
    pub fn ratio(&self) -> f64 {
        self.n as f64 / self.m as f64
    }

    /// Storage per cache in units, `k = k̃·b`.
    pub fn storage_units(&self) -> f64 {
        self.k_tilde as f64 * self.b
    }

    /// Total content slots across all caches, `m·k̃`.
    pub fn total_slots(&self) -> usize {
        self.m * self.k_tilde
    }
}
