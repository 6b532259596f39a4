//! Binomial tail probabilities.
//!
//! Mass terms are generated outward from the mode by their term ratios and
//! normalized by their sum, so no factorials or gamma functions appear and
//! nothing overflows for large `m_tilde`. Terms below `1e-20` of the modal
//! term are dropped.

const CUTOFF: f64 = 1e-20;

/// Unnormalized probability mass over the support window `[lo, hi]`.
struct MassWindow {
    lo: usize,
    mode: usize,
    terms: Vec<f64>,
    total: f64,
}

impl MassWindow {
    fn new(trials: usize, p: f64) -> Self {
        debug_assert!(p > 0.0 && p < 1.0);
        let q = 1.0 - p;
        let odds = p / q;
        let mode = (((trials + 1) as f64 * p).floor() as usize).min(trials);

        let mut below = Vec::new();
        let mut t = 1.0;
        let mut k = mode;
        while k > 0 {
            t *= k as f64 / ((trials - k + 1) as f64 * odds);
            if t < CUTOFF {
                break;
            }
            below.push(t);
            k -= 1;
        }
        let lo = mode - below.len();

        let mut terms: Vec<f64> = below.into_iter().rev().collect();
        terms.push(1.0);
        let mut t = 1.0;
        let mut k = mode;
        while k < trials {
            t *= (trials - k) as f64 / (k + 1) as f64 * odds;
            if t < CUTOFF {
                break;
            }
            terms.push(t);
            k += 1;
        }

        let pivot = mode - lo;
        let lower: f64 = terms[..pivot].iter().sum();
        let upper: f64 = terms[pivot + 1..].iter().rev().sum();
        let total = lower + upper + 1.0;
        MassWindow {
            lo,
            mode,
            terms,
            total,
        }
    }

    fn hi(&self) -> usize {
        self.lo + self.terms.len() - 1
    }
}

/// `P(X ≥ 1)` for `X ~ Binomial(trials, p)`: the chance a content with
/// popularity `p` is requested at least once in a batch of `trials`.
pub fn at_least_once(trials: usize, p: f64) -> f64 {
    if p <= 0.0 {
        return 0.0;
    }
    if p >= 1.0 {
        return if trials > 0 { 1.0 } else { 0.0 };
    }
    -(trials as f64 * (-p).ln_1p()).exp_m1()
}

/// `P(X ≥ j)` for `X ~ Binomial(trials, p)`.
pub fn binomial_tail(trials: usize, p: f64, j: usize) -> f64 {
    if j == 0 {
        return 1.0;
    }
    if j > trials || p <= 0.0 {
        return 0.0;
    }
    if p >= 1.0 {
        return 1.0;
    }
    if j == 1 {
        return at_least_once(trials, p);
    }
    let w = MassWindow::new(trials, p);
    if j <= w.lo {
        return 1.0;
    }
    if j > w.hi() {
        return 0.0;
    }
    let idx = j - w.lo;
    let tail = if j <= w.mode {
        // Complement of the (small) lower mass; terms ascend toward the mode.
        1.0 - w.terms[..idx].iter().sum::<f64>() / w.total
    } else {
        w.terms[idx..].iter().rev().sum::<f64>() / w.total
    };
    tail.clamp(0.0, 1.0)
}

/// All tails at once: `tails[j] = P(X ≥ j)` for `j < tails.len()`, and the
/// tail is zero (below the cutoff) for every larger `j`. Non-increasing in
/// `j` by construction.
pub fn binomial_tails(trials: usize, p: f64) -> Vec<f64> {
    if p <= 0.0 || trials == 0 {
        return vec![1.0];
    }
    if p >= 1.0 {
        return vec![1.0; trials + 1];
    }
    let w = MassWindow::new(trials, p);
    let hi = w.hi();
    let mut tails = vec![1.0; hi + 1];
    let mut acc = 0.0;
    for j in (w.lo + 1..=hi).rev() {
        acc += w.terms[j - w.lo];
        tails[j] = (acc / w.total).min(1.0);
    }
    tails
}
