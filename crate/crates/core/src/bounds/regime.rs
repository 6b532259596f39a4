//! Asymptotic regimes for Zipf popularity with `1 < β < 2`.

use crate::error::{Error, Result};

/// How per-cache storage `k̃` compares with the catalog ratio `c = n/m`,
/// stated asymptotically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GapDescriptor {
    /// `c − k̃ = Ω(1)`.
    ShortByConstant,
    /// `c − k̃ = Θ(n^{−ε})`.
    ShortVanishing { epsilon: f64 },
    /// `|k̃ − c| = O(n^{−ε̃})`.
    Balanced,
    /// `k̃ − c = Θ(n^{−ε})`.
    SurplusVanishing { epsilon: f64 },
    /// `k̃ − c ≥ 1 − o(n^{1/β})`.
    SurplusAtLeastOne,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RateOrder {
    Zero,
    Constant,
    /// `n^exponent`.
    Power(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Regime {
    /// 1..=5.
    pub case: u8,
    /// Order of the uncoded converse.
    pub converse: RateOrder,
    /// Order achieved by Knapsack Storage + Match Least Popular.
    pub achievable: RateOrder,
}

/// `ε̃ = (2 − β)(β − 1)/β`.
pub fn epsilon_tilde(beta: f64) -> f64 {
    (2.0 - beta) * (beta - 1.0) / beta
}

pub fn regime_classify(gap: GapDescriptor, beta: f64) -> Result<Regime> {
    if !(beta > 1.0 && beta < 2.0) {
        return Err(Error::Unsupported(format!(
            "regimes are tabulated for 1 < beta < 2 only, got {beta}"
        )));
    }
    let eps_max = epsilon_tilde(beta);
    let check_eps = |e: f64| {
        if e > 0.0 && e <= eps_max {
            Ok(e)
        } else {
            Err(Error::InvalidParameter(format!(
                "epsilon must lie in (0, {eps_max}], got {e}"
            )))
        }
    };
    let same = |case, order| Regime {
        case,
        converse: order,
        achievable: order,
    };
    Ok(match gap {
        GapDescriptor::ShortByConstant => same(1, RateOrder::Power(2.0 - beta)),
        GapDescriptor::ShortVanishing { epsilon } => {
            same(2, RateOrder::Power(2.0 - beta - check_eps(epsilon)?))
        }
        GapDescriptor::Balanced => same(3, RateOrder::Power((2.0 - beta) / beta)),
        GapDescriptor::SurplusVanishing { epsilon } => {
            same(4, RateOrder::Power(check_eps(epsilon)? / (beta - 1.0)))
        }
        GapDescriptor::SurplusAtLeastOne => Regime {
            case: 5,
            converse: RateOrder::Zero,
            achievable: RateOrder::Constant,
        },
    })
}
