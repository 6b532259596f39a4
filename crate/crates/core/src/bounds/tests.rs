use super::*;
use crate::popularity::{build_zipf, build_zipf_mandelbrot};
use proptest::prelude::*;

fn zipf(n: usize, beta: f64) -> PopularityModel {
    build_zipf(n, beta).unwrap()
}

fn is_unimodal(r: &[f64]) -> Option<usize> {
    let peak = (0..r.len()).max_by(|&a, &b| r[a].total_cmp(&r[b]).then(b.cmp(&a)))?;
    let rising = r[..=peak].windows(2).all(|w| w[0] <= w[1]);
    let falling = r[peak..].windows(2).all(|w| w[0] >= w[1]);
    (rising && falling).then_some(peak)
}

#[test]
fn converse_zero_when_everything_fits() {
    let model = zipf(20, 1.1);
    let cfg = SystemConfig::new(20, 10, 20);
    let r = converse_no_coding(&model, &cfg).unwrap();
    assert!(r.detail("capacity").unwrap() >= r.detail("total_weight").unwrap());
    assert_eq!(r.bound_value, 0.0);
}

#[test]
fn converse_single_content() {
    let model = zipf(1, 1.0);
    let r = converse_no_coding(&model, &SystemConfig::new(1, 4, 1)).unwrap();
    assert_eq!(r.bound_value, 0.0);
    // m̃ above m·k̃: x_1 = m k / m̃.
    let cfg = SystemConfig::new(1, 4, 1).with_m_tilde(10).with_b(2.0);
    let r = converse_no_coding(&model, &cfg).unwrap();
    let x1 = (4.0 * 2.0) / (2.0 * 10.0);
    assert!((r.bound_value - 2.0 * (1.0 - x1)).abs() < 1e-12);
}

#[test]
fn fig2_ratio_and_window() {
    let model = zipf(100, 1.2);
    let cfg = SystemConfig::new(100, 100, 1);
    let r = ratio_profile(&model, &cfg);
    let peak = is_unimodal(&r).expect("ratio profile not unimodal");
    let i_tilde = (100.0 * model.prob(0)).powf(1.0 / 1.2);
    // 1-based peak is ⌊ĩ⌋ or ⌊ĩ⌋ + 1.
    let p1 = peak + 1;
    assert!(p1 == i_tilde.floor() as usize || p1 == i_tilde.floor() as usize + 1, "{p1} vs {i_tilde}");

    let rep = converse_no_coding(&model, &cfg).unwrap();
    assert!((rep.detail("i_tilde").unwrap() - i_tilde).abs() < 1e-12);
    let (lo, hi) = rep.window.unwrap();
    let ceil0 = i_tilde.ceil() as usize - 1;
    assert!(lo <= ceil0 && ceil0 <= hi, "window {lo}..{hi}, ceil(ĩ) - 1 = {ceil0}");
}

#[test]
fn ratio_branches_meet() {
    // n = 1 and m̃ = 1 puts m̃ p_1 = 1 exactly.
    let model = zipf(1, 1.0);
    let r = ratio_profile(&model, &SystemConfig::new(1, 1, 1));
    assert_eq!(r, vec![1.0]);
    let p = 0.01;
    let v = at_least_once(100, p);
    assert!((v / (100.0 * p) - v).abs() < 1e-12);
}

#[test]
fn ratio_profile_formula() {
    let model = zipf(300, 1.4);
    let cfg = SystemConfig::new(300, 80, 2);
    let r = ratio_profile(&model, &cfg);
    for (i, &p) in model.probs().iter().enumerate() {
        let v = 1.0 - (1.0 - p).powi(80);
        let want = if 80.0 * p >= 1.0 { v / (80.0 * p) } else { v };
        assert!((r[i] - want).abs() < 1e-12);
    }
}

#[test]
fn info_bound_values() {
    let model = zipf(1000, 1.5);
    let v = info_theoretic_bound(&model, &SystemConfig::new(1000, 100, 3)).unwrap();
    assert!((v - 700.0 * 100.0 / 1000f64.powf(1.5)).abs() < 1e-12);
    assert!((v - 2.2136).abs() < 1e-4);
    let v2 = info_theoretic_bound(&model, &SystemConfig::new(1000, 200, 1)).unwrap();
    assert!((v2 - (1000.0 - 200.0) * 200.0 / 1000f64.powf(1.5)).abs() < 1e-12);
    assert_eq!(info_theoretic_bound(&model, &SystemConfig::new(1000, 100, 10)).unwrap(), 0.0);
}

#[test]
fn info_bound_preconditions() {
    let cfg = SystemConfig::new(100, 10, 1);
    let shifted = build_zipf_mandelbrot(100, 1.5, 2.0).unwrap();
    assert!(matches!(info_theoretic_bound(&shifted, &cfg), Err(Error::Unsupported(_))));
    assert!(matches!(info_theoretic_bound(&zipf(100, 0.9), &cfg), Err(Error::Unsupported(_))));
}

fn coded_oracle(probs: &[f64], m: usize, k: usize) -> (f64, usize) {
    let n = probs.len();
    let mut n3 = 0;
    for i in 1..=n {
        if (m * k) as f64 * probs[i - 1] >= 1.0 {
            n3 = i;
        }
    }
    let head = (n3 as f64 / k as f64 - 1.0).max(0.0);
    let tail: f64 = (n3..n).map(|i| m as f64 * probs[i]).sum();
    let second = if k > n3 {
        tail.min(((n - n3) as f64 / (k - n3) as f64 - 1.0).max(0.0))
    } else {
        tail
    };
    (head + second, n3)
}

#[test]
fn coded_rate_matches_scan() {
    let model = zipf(100, 1.5);
    let got = setting_b_coded_rate(&model, &SystemConfig::new(100, 50, 4)).unwrap();
    let (rate, n3) = coded_oracle(model.probs(), 50, 4);
    assert_eq!(got.n3, n3);
    assert!((got.rate - rate).abs() < 1e-9);
}

#[test]
fn coded_rate_edge_cases() {
    let model = zipf(5, 0.5);
    let got = setting_b_coded_rate(&model, &SystemConfig::new(5, 100, 8)).unwrap();
    assert_eq!(got.n3, 5);
    assert_eq!(got.rate, 0.0);
    // k̃ = n₃: second branch is infinite.
    let model = zipf(50, 1.2);
    for k in 1..10 {
        let cfg = SystemConfig::new(50, 20, k);
        let got = setting_b_coded_rate(&model, &cfg).unwrap();
        if got.n3 == k {
            let tail: f64 = model.probs()[k..].iter().map(|p| 20.0 * p).sum();
            assert!((got.rate - tail).abs() < 1e-9);
        }
    }
}

#[test]
fn uncoded_rate_values() {
    let model = zipf(2, 1.0);
    let v = setting_b_uncoded_rate(&model, &SystemConfig::new(2, 7, 1)).unwrap();
    assert!((v - 7.0 / 3.0).abs() < 1e-12);
    assert_eq!(setting_b_uncoded_rate(&model, &SystemConfig::new(2, 7, 3)).unwrap(), 0.0);
    let model = zipf(100, 1.5);
    let v = setting_b_uncoded_rate(&model, &SystemConfig::new(100, 50, 4)).unwrap();
    let want: f64 = (4..100).map(|i| 50.0 * model.prob(i)).sum();
    assert!((v - want).abs() < 1e-9);
}

#[test]
fn coded_beats_uncoded_at_root_storage() {
    for &m in &[1000usize, 10_000] {
        for &beta in &[1.2, 1.5, 1.8] {
            let model = zipf(m, beta);
            let k = (m as f64).powf(1.0 / beta).ceil() as usize;
            let cfg = SystemConfig::new(m, m, k);
            let coded = setting_b_coded_rate(&model, &cfg).unwrap().rate;
            let uncoded = setting_b_uncoded_rate(&model, &cfg).unwrap();
            assert!(coded <= uncoded, "m={m} beta={beta}: {coded} > {uncoded}");
        }
    }
}

/// Exhaustive maximum of Σ_i Σ_{j ≤ y_i} P(Bin(m̃, p_i) ≥ j) over y with
/// Σ y = min(m, n m̃).
fn setting_c_oracle(probs: &[f64], m: usize, mt: usize) -> f64 {
    let tails: Vec<Vec<f64>> = probs
        .iter()
        .map(|&p| {
            (0..=mt)
                .map(|j| {
                    (j..=mt)
                        .map(|s| binom(mt, s) * p.powi(s as i32) * (1.0 - p).powi((mt - s) as i32))
                        .sum()
                })
                .collect()
        })
        .collect();
    let budget = m.min(probs.len() * mt);
    let mut best = f64::NEG_INFINITY;
    let mut y = vec![0usize; probs.len()];
    fn rec(i: usize, left: usize, y: &mut Vec<usize>, tails: &[Vec<f64>], mt: usize, best: &mut f64) {
        if i == y.len() {
            if left == 0 {
                let v: f64 = y.iter().enumerate().map(|(c, &k)| tails[c][1..=k].iter().sum::<f64>()).sum();
                *best = best.max(v);
            }
            return;
        }
        for k in 0..=left.min(mt) {
            y[i] = k;
            rec(i + 1, left - k, y, tails, mt, best);
        }
    }
    rec(0, budget, &mut y, &tails, mt, &mut best);
    best
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, t| acc * (n - t) as f64 / (t + 1) as f64)
}

#[test]
fn setting_c_examples() {
    let one = setting_c_bound(&zipf(1, 1.0), &SystemConfig::new(1, 3, 1).with_m_tilde(5)).unwrap();
    assert!((one.bound_value - 2.0).abs() < 1e-12);
    assert!((one.knapsack_objective.unwrap() - 3.0).abs() < 1e-12);
    let none = setting_c_selection(&[0.6, 0.4], 0, 4);
    assert_eq!(none.objective, 0.0);
    assert_eq!(none.copies, vec![0, 0]);
    assert!(matches!(
        setting_c_bound(&zipf(4, 1.0), &SystemConfig::new(4, 3, 2)),
        Err(Error::Unsupported(_))
    ));
}

#[test]
fn setting_c_small_instance() {
    let probs = [0.5, 0.3, 0.2];
    let sel = setting_c_selection(&probs, 4, 4);
    let best = setting_c_oracle(&probs, 4, 4);
    assert!((sel.objective - best).abs() < 1e-12, "{} vs {best}", sel.objective);
    assert_eq!(sel.copies.iter().sum::<usize>(), 4);
}

proptest! {
    #[test]
    fn setting_c_greedy_is_optimal(
        raw in proptest::collection::vec(0.01f64..1.0, 1..=4),
        m in 0usize..=5,
        mt in 1usize..=4,
    ) {
        let total: f64 = raw.iter().sum();
        let mut probs: Vec<f64> = raw.iter().map(|r| r / total).collect();
        probs.sort_by(|a, b| b.total_cmp(a));
        let sel = setting_c_selection(&probs, m, mt);
        let best = setting_c_oracle(&probs, m, mt);
        prop_assert!((sel.objective - best).abs() < 1e-9);
    }

    #[test]
    fn converse_window_is_contiguous(beta in 1.05f64..1.95, n_idx in 0usize..3, k in 1usize..4) {
        let n = [50, 100, 200][n_idx];
        let model = zipf(n, beta);
        let cfg = SystemConfig::new(n, n, k);
        let rep = converse_no_coding(&model, &cfg).unwrap();
        let items: Vec<KnapsackItem> = model.probs().iter().enumerate()
            .map(|(i, &p)| KnapsackItem::new(i, at_least_once(n, p), (n as f64 * p).max(1.0)))
            .collect();
        let sol = solve_fractional(&items, (n * k) as f64).unwrap();
        let sel: Vec<usize> = sol.selected().collect();
        if let Some((lo, hi)) = rep.window {
            prop_assert_eq!(sel.len(), hi - lo + 1);
            prop_assert_eq!(sel.first().copied(), Some(lo));
        }
        prop_assert!(is_unimodal(&ratio_profile(&model, &cfg)).is_some());
        prop_assert!(rep.bound_value >= 0.0);
    }
}
