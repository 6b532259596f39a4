//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use replica_core::bounds::{binomial_tails, converse_no_coding, ratio_profile, setting_c_selection};
use replica_core::knapsack::{solve_fractional, KnapsackItem};
use replica_core::matching::{match_least_popular_with, MatchOptions};
use replica_core::placement::{knapsack_storage, knapsack_weights, PolicyRegistry};
use replica_core::rng::SlotRng;
use replica_core::sim::{
    monte_carlo, run_curve, write_csv, CurveRow, ExperimentSpec, Metric, SimParams, SweepPoint,
    VaryBeta, VaryN, VaryStorage,
};
use replica_core::{build_zipf, PlacementPlan, RequestBatch, SystemConfig};

const MASTER_SEED: u64 = 20_240_601;
const SIM_ITERATIONS: usize = 1000;

type Outcome = Result<String, String>;

fn check(cond: bool, pass: String, fail: String) -> Outcome {
    if cond {
        Ok(pass)
    } else {
        Err(fail)
    }
}

// 1 ------------------------------------------------------------------------

/// LP optimum of a fractional knapsack: some subset taken whole plus at most
/// one further item taken partially.
fn lp_brute_force(items: &[(f64, f64)], cap: f64) -> f64 {
    let j = items.len();
    let mut best = 0.0f64;
    for mask in 0u32..(1 << j) {
        let (mut v, mut w) = (0.0, 0.0);
        for (t, &(vi, wi)) in items.iter().enumerate() {
            if mask & (1 << t) != 0 {
                v += vi;
                w += wi;
            }
        }
        if w > cap {
            continue;
        }
        best = best.max(v);
        for (t, &(vi, wi)) in items.iter().enumerate() {
            if mask & (1 << t) == 0 {
                best = best.max(v + vi * ((cap - w) / wi).min(1.0));
            }
        }
    }
    best
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut rng = SlotRng::new(MASTER_SEED ^ 1);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let j = rng.below(11) as usize;
        let items: Vec<(f64, f64)> = (0..j)
            .map(|_| (rng.below(21) as f64, 1.0 + rng.below(8) as f64))
            .collect();
        let cap = rng.below(21) as f64;
        let ks: Vec<KnapsackItem> =
            items.iter().enumerate().map(|(i, &(v, w))| KnapsackItem::new(i, v, w)).collect();
        let greedy = solve_fractional(&ks, cap).map_err(|e| e.to_string())?.objective;
        worst = worst.max((greedy - lp_brute_force(&items, cap)).abs());
    }
    let secs = start.elapsed().as_secs_f64();
    let msg = format!("100 instances, max |greedy - LP| = {worst:.1e}, {secs:.3} s");
    check(worst <= 1e-9 && secs < 1.0, msg.clone(), msg)
}

// 2 ------------------------------------------------------------------------

fn window_check(n: usize, beta: f64, k: usize) -> Result<(), String> {
    let model = build_zipf(n, beta).unwrap();
    let cfg = SystemConfig::new(n, n, k);
    let p1 = model.prob(0);
    let m = n as f64;
    // Ratios recomputed directly.
    let r: Vec<f64> = model
        .probs()
        .iter()
        .map(|&p| {
            let v = 1.0 - (1.0 - p).powf(m);
            if m * p >= 1.0 {
                v / (m * p)
            } else {
                v
            }
        })
        .collect();
    let lib = ratio_profile(&model, &cfg);
    if r.iter().zip(&lib).any(|(a, b)| (a - b).abs() > 1e-12) {
        return Err(format!("ratio profile mismatch at n={n} beta={beta}"));
    }
    let peak = (0..n).max_by(|&a, &b| r[a].total_cmp(&r[b]).then(b.cmp(&a))).unwrap();
    let unimodal = r[..=peak].windows(2).all(|w| w[0] <= w[1]) && r[peak..].windows(2).all(|w| w[0] >= w[1]);
    if !unimodal {
        return Err(format!("ratio not unimodal at n={n} beta={beta}"));
    }
    let i_tilde = (m * p1).powf(1.0 / beta);
    let peak1 = (peak + 1) as f64;
    if (peak1 - i_tilde).abs() > 1.0 {
        return Err(format!("peak {peak1} vs i~ {i_tilde:.3} at n={n} beta={beta}"));
    }
    let rep = converse_no_coding(&model, &cfg).map_err(|e| e.to_string())?;
    let items: Vec<KnapsackItem> = model
        .probs()
        .iter()
        .enumerate()
        .map(|(i, &p)| KnapsackItem::new(i, 1.0 - (1.0 - p).powf(m), (m * p).max(1.0)))
        .collect();
    let sol = solve_fractional(&items, (n * k) as f64).unwrap();
    let sel: Vec<usize> = sol.selected().collect();
    let contiguous = sel.windows(2).all(|w| w[1] == w[0] + 1);
    let (lo, hi) = rep.window.ok_or("empty window")?;
    if !contiguous || sel.first() != Some(&lo) || sel.last() != Some(&hi) {
        return Err(format!("selection not one block at n={n} beta={beta} k={k}"));
    }
    if !(lo <= peak && peak <= hi) {
        return Err(format!("window {lo}..{hi} misses peak {peak} at n={n} beta={beta}"));
    }
    Ok(())
}

fn criterion_2() -> Outcome {
    let mut points = vec![(100usize, 1.2f64, 1usize)];
    let mut rng = SlotRng::new(MASTER_SEED ^ 2);
    for _ in 0..20 {
        let n = 20 + rng.below(481) as usize;
        let beta = 1.05 + 0.9 * rng.next_f64();
        let k = 1 + rng.below(3) as usize;
        points.push((n, beta, k));
    }
    for &(n, beta, k) in &points {
        window_check(n, beta, k)?;
    }
    Ok(format!("{} points unimodal, peak within 1 of i~, contiguous window holds the peak", points.len()))
}

// 3, 4 -------------------------------------------------------------------

fn all_sweeps() -> Vec<(&'static str, Vec<SweepPoint>)> {
    vec![
        ("vary-n (n = 5m, k = 3)", VaryN::size_1().points().unwrap()),
        ("vary-n (n = 15m, k = 16)", VaryN::size_2().points().unwrap()),
        ("vary-storage", VaryStorage::standard().points().unwrap()),
        ("vary-beta", VaryBeta::standard().points().unwrap()),
    ]
}

fn sweep_rows() -> Vec<(&'static str, Vec<CurveRow>)> {
    let reg = PolicyRegistry::with_builtin();
    all_sweeps()
        .into_iter()
        .map(|(name, points)| {
            let spec = ExperimentSpec {
                policy: "knapsack".into(),
                points,
                sim: SimParams::new(SIM_ITERATIONS, MASTER_SEED, Metric::SettingA),
            };
            (name, run_curve(&spec, &reg).unwrap())
        })
        .collect()
}

fn criterion_3(rows: &[(&str, Vec<CurveRow>)], secs: f64) -> Outcome {
    let mut total = 0;
    let mut violations = Vec::new();
    for (name, rs) in rows {
        for r in rs {
            total += 1;
            let (mean, se, lb) = (r.mean_rate.unwrap(), r.std_error.unwrap(), r.lower_bound.unwrap());
            if mean < lb - 3.0 * se {
                violations.push(format!("{name} n={} k={} beta={}: {mean} < {lb}", r.n, r.k_tilde, r.beta));
            }
        }
    }
    let msg = format!("{total} sweep points, {} violations, {secs:.1} s", violations.len());
    check(violations.is_empty() && secs < 600.0, msg.clone(), format!("{msg}: {violations:?}"))
}

fn criterion_4(rows: &[(&str, Vec<CurveRow>)]) -> Outcome {
    let storage = &rows.iter().find(|(n, _)| *n == "vary-storage").unwrap().1;
    let mut notes = Vec::new();
    let mut ok = true;
    for beta in [0.8, 1.2] {
        let curve: Vec<&CurveRow> = storage.iter().filter(|r| r.beta == beta).collect();
        let ks: Vec<usize> = curve.iter().map(|r| r.k_tilde).collect();
        if ks != (1..=12).collect::<Vec<_>>() {
            return Err(format!("unexpected grid {ks:?}"));
        }
        let bound_up = curve
            .windows(2)
            .filter(|w| w[1].lower_bound.unwrap() > w[0].lower_bound.unwrap() + 1e-12)
            .count();
        let sim_up = curve
            .windows(2)
            .filter(|w| w[1].mean_rate.unwrap() > w[0].mean_rate.unwrap())
            .count();
        ok &= bound_up == 0 && sim_up <= 1;
        notes.push(format!("beta {beta}: bound increases {bound_up}, simulated increases {sim_up}"));
    }
    let msg = notes.join("; ");
    check(ok, msg.clone(), msg)
}

// 5 ------------------------------------------------------------------------

fn criterion_5() -> Outcome {
    let reg = PolicyRegistry::with_builtin();
    let mut ok = true;
    let mut notes = Vec::new();
    for m in [300usize, 600] {
        let cfg = SystemConfig::new(15 * m, m, 16);
        let model = build_zipf(15 * m, 1.5).unwrap();
        let bound = converse_no_coding(&model, &cfg).unwrap().bound_value;
        let mut sim = SimParams::new(SIM_ITERATIONS, MASTER_SEED, Metric::SettingA);
        sim.keep_histogram = true;
        let spec = ExperimentSpec {
            policy: "knapsack".into(),
            points: vec![SweepPoint::new(cfg, 1.5)],
            sim,
        };
        let s = &monte_carlo(&spec, &reg).unwrap()[0];
        let h = s.rate_histogram.as_ref().unwrap();
        // b = 1, so a rate of at most 1 means at most one transmission.
        let low: u64 = h.iter().take(2).sum();
        let frac = low as f64 / SIM_ITERATIONS as f64;
        ok &= frac >= 0.99 && bound == 0.0;
        notes.push(format!("m={m}: slots with rate <= 1: {frac:.3}, mean {:.2}, converse {bound}", s.mean_rate));
    }
    let msg = notes.join("; ");
    check(ok, msg.clone(), msg)
}

// 6 ------------------------------------------------------------------------

fn criterion_6() -> Outcome {
    let n = 1000;
    let model = build_zipf(n, 1.5).unwrap();
    let cfg = SystemConfig::new(n, n, 1);
    let w = knapsack_weights(&model, &cfg).unwrap();
    let v: Vec<f64> = model.probs().iter().map(|&p| 1.0 - (1.0 - p).powf(n as f64)).collect();
    let r1 = v[0] / w[0] as f64;
    // Weight of contents whose ratio strictly beats content 1.
    let ahead: usize = (1..n).filter(|&i| v[i] / w[i] as f64 > r1).map(|i| w[i]).sum();
    let excluded_by_ratio = w[0] == n && ahead >= n;
    let plan = knapsack_storage(&model, &cfg).unwrap();
    let cached = plan.cached_set();
    let msg = format!(
        "w_1 = {}, v_1/w_1 = {r1:.2e}, weight ranked ahead {ahead} >= capacity {n}: {excluded_by_ratio}; content 1 cached: {}",
        w[0],
        cached.contains(&0)
    );
    check(excluded_by_ratio && !cached.contains(&0), msg.clone(), msg)
}

// 7 ------------------------------------------------------------------------

fn criterion_7() -> Outcome {
    let reg = PolicyRegistry::with_builtin();
    let sizes = [500usize, 1000, 2000];
    let mut ks_ok = true;
    let mut prop = Vec::new();
    let mut notes = Vec::new();
    for &m in &sizes {
        let p1 = build_zipf(m, 1.5).unwrap().prob(0);
        let point = SweepPoint::new(SystemConfig::new(m, m, 1), 1.5);
        let run = |policy: &str, partial: bool| {
            let mut sim = SimParams::new(SIM_ITERATIONS, MASTER_SEED, Metric::SettingC);
            sim.matching = MatchOptions { partial };
            let spec = ExperimentSpec { policy: policy.into(), points: vec![point], sim };
            monte_carlo(&spec, &reg).unwrap()[0].mean_rate / m as f64
        };
        let ks = run("knapsack", false);
        // Each of a content's dedicated caches serves one of its requests,
        // so proportional storage is charged max(d_i - c_i, 0) per content.
        let pr = run("proportional", true);
        ks_ok &= ks >= p1 / 2.0;
        prop.push(pr);
        notes.push(format!("m={m}: KS {ks:.4} (p1/2 {:.4}), proportional {pr:.4}", p1 / 2.0));
    }
    let decreasing = prop.windows(2).all(|w| w[1] < w[0]);
    let msg = notes.join("; ");
    check(ks_ok && decreasing, msg.clone(), msg)
}

// 8 ------------------------------------------------------------------------

fn binom_pmf(trials: usize, p: f64, k: usize) -> f64 {
    let c = (0..k).fold(1.0, |acc, t| acc * (trials - t) as f64 / (t + 1) as f64);
    c * p.powi(k as i32) * (1.0 - p).powi((trials - k) as i32)
}

/// Best objective over every copy vector y with Σ y = min(m, n m̃), for a
/// table of per-pair values; selected values are summed largest first.
fn exhaustive(values: &[Vec<f64>], m: usize, mt: usize) -> f64 {
    let n = values.len();
    let budget = m.min(n * mt);
    let mut best = f64::NEG_INFINITY;
    let mut y = vec![0usize; n];
    loop {
        if y.iter().sum::<usize>() == budget {
            let mut picked: Vec<f64> =
                y.iter().enumerate().flat_map(|(i, &c)| values[i][..c].iter().copied()).collect();
            picked.sort_by(|a, b| b.total_cmp(a));
            best = best.max(picked.iter().sum());
        }
        let mut t = 0;
        while t < n && y[t] == mt {
            y[t] = 0;
            t += 1;
        }
        if t == n {
            break;
        }
        y[t] += 1;
    }
    best
}

fn criterion_8() -> Outcome {
    let mut rng = SlotRng::new(MASTER_SEED ^ 8);
    let mut instances = 0;
    let mut worst_indep = 0.0f64;
    for n in 1..=4usize {
        for _ in 0..50 {
            let raw: Vec<f64> = (0..n).map(|_| 0.01 + rng.next_f64()).collect();
            let total: f64 = raw.iter().sum();
            let mut probs: Vec<f64> = raw.iter().map(|r| r / total).collect();
            probs.sort_by(|a, b| b.total_cmp(a));
            for mt in 1..=4usize {
                let lib_vals: Vec<Vec<f64>> =
                    probs.iter().map(|&p| binomial_tails(mt, p)[1..=mt].to_vec()).collect();
                let ind_vals: Vec<Vec<f64>> = probs
                    .iter()
                    .map(|&p| (1..=mt).map(|j| (j..=mt).map(|s| binom_pmf(mt, p, s)).sum()).collect())
                    .collect();
                for m in 0..=5usize {
                    instances += 1;
                    let greedy = setting_c_selection(&probs, m, mt).objective;
                    let exact = exhaustive(&lib_vals, m, mt);
                    if greedy != exact {
                        return Err(format!("p={probs:?} m={m} mt={mt}: greedy {greedy} vs {exact}"));
                    }
                    worst_indep = worst_indep.max((greedy - exhaustive(&ind_vals, m, mt)).abs());
                }
            }
        }
    }
    let msg = format!("{instances} instances equal to enumeration; independent tails within {worst_indep:.1e}");
    check(worst_indep <= 1e-12, msg.clone(), msg)
}

// 9 ------------------------------------------------------------------------

fn criterion_9() -> Outcome {
    let mut rng = SlotRng::new(MASTER_SEED ^ 9);
    let mut violations = 0;
    for t in 0..10_000u64 {
        let n = 1 + rng.below(12) as usize;
        let m = 1 + rng.below(10) as usize;
        let k = 1 + rng.below(4) as usize;
        let caches: Vec<Vec<usize>> = (0..m)
            .map(|_| {
                let mut ids: Vec<usize> = (0..n).collect();
                let take = rng.below((k.min(n) + 1) as u64) as usize;
                for s in 0..take {
                    let j = s + rng.below((n - s) as u64) as usize;
                    ids.swap(s, j);
                }
                ids.truncate(take);
                ids
            })
            .collect();
        let plan = PlacementPlan::from_cache_contents(n, k, caches.clone()).unwrap();
        let mt = 1 + rng.below(15) as usize;
        let reqs: Vec<usize> = (0..mt).map(|_| rng.below(n as u64) as usize).collect();
        let batch = RequestBatch::from_requests(n, reqs.clone()).unwrap();
        let opts = MatchOptions { partial: t % 2 == 1 };
        let out = match_least_popular_with(&plan, &batch, rng.next_u64(), opts).unwrap();

        let mut used = vec![false; mt];
        let mut bad = out.assignment.len() != m;
        for (cache, slot) in out.assignment.iter().enumerate() {
            if let Some(r) = *slot {
                bad |= r >= mt || used[r] || !caches[cache].contains(&reqs[r]);
                if r < mt {
                    used[r] = true;
                }
            }
        }
        bad |= out.unserved.iter().any(|&r| used[r]);
        bad |= out.served_count + out.unserved.len() != mt;
        bad |= out.assignment.iter().flatten().count() != out.served_count;
        if bad {
            violations += 1;
        }
    }
    let msg = format!("10000 fuzzed pairs, {violations} violations");
    check(violations == 0, msg.clone(), msg)
}

// 10 -----------------------------------------------------------------------

fn csv_bytes(threads: usize) -> Vec<u8> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
    let spec = ExperimentSpec {
        policy: "knapsack".into(),
        points: VaryStorage { n: 1000, m: 100, ks: vec![1, 4, 8], betas: vec![1.2] }.points().unwrap(),
        sim: SimParams::new(SIM_ITERATIONS, MASTER_SEED, Metric::SettingA),
    };
    let rows = pool.install(|| run_curve(&spec, &PolicyRegistry::with_builtin()).unwrap());
    let mut buf = Vec::new();
    write_csv(&rows, &mut buf).unwrap();
    buf
}

fn criterion_10() -> Outcome {
    let a = csv_bytes(1);
    let b = csv_bytes(4);
    let c = csv_bytes(4);
    let msg = format!("{} bytes; 1-thread vs 4-thread and repeated runs identical", a.len());
    check(a == b && b == c, msg.clone(), "CSV bytes differ between reruns".into())
}

// --------------------------------------------------------------------------

fn run(id: u32, title: &str, f: impl FnOnce() -> Outcome) -> bool {
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
        let msg = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panicked".into());
        Err(msg)
    });
    match outcome {
        Ok(msg) => {
            println!("PASS  criterion {id:>2}  {title}: {msg}");
            true
        }
        Err(msg) => {
            println!("FAIL  criterion {id:>2}  {title}: {msg}");
            false
        }
    }
}

fn main() {
    let mut passed = Vec::new();
    passed.push(run(1, "fractional knapsack equals brute-force LP", criterion_1));
    passed.push(run(2, "ratio unimodality and converse window", criterion_2));

    let start = Instant::now();
    let rows = sweep_rows();
    let secs = start.elapsed().as_secs_f64();
    passed.push(run(3, "simulated rate respects the converse", || criterion_3(&rows, secs)));
    passed.push(run(4, "storage sweep curves non-increasing", || criterion_4(&rows)));

    passed.push(run(5, "rate at most one with sixteen contents per cache", criterion_5));
    passed.push(run(6, "most popular content left uncached", criterion_6));
    passed.push(run(7, "unicast contrast with proportional storage", criterion_7));
    passed.push(run(8, "setting-C greedy equals enumeration", criterion_8));
    passed.push(run(9, "matching invariants under fuzzing", criterion_9));
    passed.push(run(10, "byte-identical reruns", criterion_10));

    let failed = passed.iter().filter(|&&p| !p).count();
    println!("acceptance: {} passed, {failed} failed", passed.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
