//! Content popularity laws and i.i.d. request batches.
//!
//! Contents are indexed from 0 in non-increasing order of popularity, so
//! content `0` is the most popular one.

use crate::error::{invalid, Result};
use crate::rng::SlotRng;

/// A normalized popularity law over `n` contents together with a sampler.
#[derive(Debug, Clone)]
pub struct PopularityModel {
    beta: f64,
    shift: f64,
    probs: Vec<f64>,
    alias: AliasTable,
}

impl PopularityModel {
    pub fn n(&self) -> usize {
        self.probs.len()
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Mandelbrot shift `q`; zero for pure Zipf.
    pub fn shift(&self) -> f64 {
        self.shift
    }

    pub fn is_pure_zipf(&self) -> bool {
        self.shift == 0.0
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, content: usize) -> f64 {
        self.probs[content]
    }

    /// The largest probability, `p*` (equal to `probs[0]`).
    pub fn max_prob(&self) -> f64 {
        self.probs[0]
    }

    pub fn sampler(&self) -> &AliasTable {
        &self.alias
    }
}

/// `p_i ∝ i^{-beta}` for `i = 1..=n`.
pub fn build_zipf(n: usize, beta: f64) -> Result<PopularityModel> {
    build_zipf_mandelbrot(n, beta, 0.0)
}

/// `p_i ∝ (i + shift)^{-beta}` for `i = 1..=n`.
pub fn build_zipf_mandelbrot(n: usize, beta: f64, shift: f64) -> Result<PopularityModel> {
    if n == 0 {
        return invalid("content count n must be at least 1");
    }
    if !(beta.is_finite() && beta > 0.0) {
        return invalid(format!("Zipf exponent beta must be positive, got {beta}"));
    }
    if !(shift.is_finite() && shift >= 0.0) {
        return invalid(format!("Mandelbrot shift must be non-negative, got {shift}"));
    }

    let weights: Vec<f64> = (1..=n).map(|i| (i as f64 + shift).powf(-beta)).collect();
    // Smallest terms first.
    let total: f64 = weights.iter().rev().sum();
    let probs: Vec<f64> = weights.iter().map(|w| w / total).collect();
    let alias = AliasTable::new(&probs);
    Ok(PopularityModel {
        beta,
        shift,
        probs,
        alias,
    })
}

/// Walker/Vose alias table: constant-time draws from a discrete law.
#[derive(Debug, Clone)]
pub struct AliasTable {
    threshold: Vec<f64>,
    alias: Vec<u32>,
}

impl AliasTable {
    pub fn new(probs: &[f64]) -> Self {
        let n = probs.len();
        let total: f64 = probs.iter().sum();
        let mut threshold: Vec<f64> = probs.iter().map(|p| p * n as f64 / total).collect();
        let mut alias: Vec<u32> = (0..n as u32).collect();

        let mut small = Vec::new();
        let mut large = Vec::new();
        for (i, &t) in threshold.iter().enumerate() {
            if t < 1.0 {
                small.push(i);
            } else {
                large.push(i);
            }
        }
        while let (Some(&s), Some(&l)) = (small.last(), large.last()) {
            small.pop();
            alias[s] = l as u32;
            threshold[l] -= 1.0 - threshold[s];
            if threshold[l] < 1.0 {
                large.pop();
                small.push(l);
            }
        }
        // Leftovers are 1 up to rounding.
        for i in small.into_iter().chain(large) {
            threshold[i] = 1.0;
        }
        AliasTable { threshold, alias }
    }

    pub fn len(&self) -> usize {
        self.threshold.len()
    }

    pub fn is_empty(&self) -> bool {
        self.threshold.is_empty()
    }

    pub fn sample(&self, rng: &mut SlotRng) -> usize {
        let column = rng.below(self.threshold.len() as u64) as usize;
        if rng.next_f64() < self.threshold[column] {
            column
        } else {
            self.alias[column] as usize
        }
    }
}

/// One time slot's requests.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RequestBatch {
    requests: Vec<usize>,
    histogram: Vec<u32>,
}

impl RequestBatch {
    /// Builds a batch from explicit content indices over a catalog of `n`.
    pub fn from_requests(n: usize, requests: Vec<usize>) -> Result<Self> {
        let mut histogram = vec![0u32; n];
        for &r in &requests {
            match histogram.get_mut(r) {
                Some(slot) => *slot += 1,
                None => return invalid(format!("request for content {r} outside catalog of {n}")),
            }
        }
        Ok(RequestBatch {
            requests,
            histogram,
        })
    }

    pub fn requests(&self) -> &[usize] {
        &self.requests
    }

    /// Demand `d_i` per content.
    pub fn histogram(&self) -> &[u32] {
        &self.histogram
    }

    pub fn len(&self) -> usize {
        self.requests.len()
    }

    pub fn is_empty(&self) -> bool {
        self.requests.is_empty()
    }

    pub fn n(&self) -> usize {
        self.histogram.len()
    }
}

/// Draws `m_tilde` i.i.d. requests from `model`, reproducibly from `seed`.
pub fn sample_batch(model: &PopularityModel, m_tilde: usize, seed: u64) -> Result<RequestBatch> {
    if m_tilde == 0 {
        return invalid("batch size m_tilde must be at least 1");
    }
    let mut rng = SlotRng::new(seed);
    let table = model.sampler();
    let mut requests = Vec::with_capacity(m_tilde);
    let mut histogram = vec![0u32; model.n()];
    for _ in 0..m_tilde {
        let c = table.sample(&mut rng);
        histogram[c] += 1;
        requests.push(c);
    }
    Ok(RequestBatch {
        requests,
        histogram,
    })
}
