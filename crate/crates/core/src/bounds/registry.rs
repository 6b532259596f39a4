use super::*;
use crate::registry::{Named, Registry};

/// A rate bound or achievable-rate formula selectable by name.
pub trait BoundCalculator: Named + Send + Sync {
    fn compute(&self, model: &PopularityModel, config: &SystemConfig) -> Result<BoundReport>;
}

pub type BoundRegistry = Registry<dyn BoundCalculator>;

impl Registry<dyn BoundCalculator> {
    /// Registry holding every built-in calculator.
    pub fn with_builtin() -> Self {
        let mut r: Self = Registry::new("bound");
        r.register(Box::new(NoCoding));
        r.register(Box::new(InfoTheoretic));
        r.register(Box::new(SettingBCoded));
        r.register(Box::new(SettingBUncoded));
        r.register(Box::new(SettingC));
        r
    }
}

struct NoCoding;
struct InfoTheoretic;
struct SettingBCoded;
struct SettingBUncoded;
struct SettingC;

impl Named for NoCoding {
    fn name(&self) -> &'static str {
        "no-coding"
    }
    fn summary(&self) -> &'static str {
        "knapsack converse for uncoded policies (setting A)"
    }
}

impl BoundCalculator for NoCoding {
    fn compute(&self, model: &PopularityModel, config: &SystemConfig) -> Result<BoundReport> {
        converse_no_coding(model, config)
    }
}

impl Named for InfoTheoretic {
    fn name(&self) -> &'static str {
        "info"
    }
    fn summary(&self) -> &'static str {
        "information-theoretic order bound, Zipf beta > 1 (setting A)"
    }
}

impl BoundCalculator for InfoTheoretic {
    fn compute(&self, model: &PopularityModel, config: &SystemConfig) -> Result<BoundReport> {
        let value = info_theoretic_bound(model, config)?;
        let mut r = BoundReport::new("info", Setting::A, BoundKind::Lower, value);
        r.order_level = true;
        Ok(r)
    }
}

impl Named for SettingBCoded {
    fn name(&self) -> &'static str {
        "setting-b-coded"
    }
    fn summary(&self) -> &'static str {
        "achievable coded-caching broadcast rate (setting B)"
    }
}

impl BoundCalculator for SettingBCoded {
    fn compute(&self, model: &PopularityModel, config: &SystemConfig) -> Result<BoundReport> {
        let c = setting_b_coded_rate(model, config)?;
        let mut r = BoundReport::new("setting-b-coded", Setting::B, BoundKind::Achievable, c.rate);
        r.detail.push(("n3".into(), c.n3 as f64));
        Ok(r)
    }
}

impl Named for SettingBUncoded {
    fn name(&self) -> &'static str {
        "setting-b-uncoded"
    }
    fn summary(&self) -> &'static str {
        "most-popular uncoded broadcast rate (setting B)"
    }
}

impl BoundCalculator for SettingBUncoded {
    fn compute(&self, model: &PopularityModel, config: &SystemConfig) -> Result<BoundReport> {
        let v = setting_b_uncoded_rate(model, config)?;
        Ok(BoundReport::new("setting-b-uncoded", Setting::B, BoundKind::Achievable, v))
    }
}

impl Named for SettingC {
    fn name(&self) -> &'static str {
        "setting-c"
    }
    fn summary(&self) -> &'static str {
        "exact unicast converse with one content per cache (setting C)"
    }
}

impl BoundCalculator for SettingC {
    fn compute(&self, model: &PopularityModel, config: &SystemConfig) -> Result<BoundReport> {
        setting_c_bound(model, config)
    }
}
