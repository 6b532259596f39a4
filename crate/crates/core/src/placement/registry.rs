use super::*;
use crate::popularity::PopularityModel;
use crate::registry::{Named, Registry};

/// A storage policy selectable by name.
pub trait PlacementPolicy: Named + Send + Sync {
    fn place(&self, model: &PopularityModel, config: &SystemConfig) -> Result<PlacementPlan>;
}

pub type PolicyRegistry = Registry<dyn PlacementPolicy>;

impl Registry<dyn PlacementPolicy> {
    /// Registry holding every built-in policy.
    pub fn with_builtin() -> Self {
        let mut r: Self = Registry::new("policy");
        r.register(Box::new(Knapsack));
        r.register(Box::new(Proportional));
        r.register(Box::new(MostPopular));
        r.register(Box::new(SettingCOptimal));
        r
    }
}

struct Knapsack;
struct Proportional;
struct MostPopular;
struct SettingCOptimal;

impl Named for Knapsack {
    fn name(&self) -> &'static str {
        "knapsack"
    }
    fn summary(&self) -> &'static str {
        "Knapsack Storage: knapsack replica counts, round-robin layout"
    }
}

impl PlacementPolicy for Knapsack {
    fn place(&self, model: &PopularityModel, config: &SystemConfig) -> Result<PlacementPlan> {
        knapsack_storage(model, config)
    }
}

impl Named for Proportional {
    fn name(&self) -> &'static str {
        "proportional"
    }
    fn summary(&self) -> &'static str {
        "ceil(m p_i) copies of the most popular contents, one content per cache"
    }
}

impl PlacementPolicy for Proportional {
    fn place(&self, model: &PopularityModel, config: &SystemConfig) -> Result<PlacementPlan> {
        proportional_storage(model, config)
    }
}

impl Named for MostPopular {
    fn name(&self) -> &'static str {
        "most-popular"
    }
    fn summary(&self) -> &'static str {
        "every cache stores the k most popular contents"
    }
}

impl PlacementPolicy for MostPopular {
    fn place(&self, model: &PopularityModel, config: &SystemConfig) -> Result<PlacementPlan> {
        most_popular_storage(model, config)
    }
}

impl Named for SettingCOptimal {
    fn name(&self) -> &'static str {
        "setting-c"
    }
    fn summary(&self) -> &'static str {
        "exact unicast-optimal copies, one content per cache"
    }
}

impl PlacementPolicy for SettingCOptimal {
    fn place(&self, model: &PopularityModel, config: &SystemConfig) -> Result<PlacementPlan> {
        setting_c_optimal_storage(model, config)
    }
}
