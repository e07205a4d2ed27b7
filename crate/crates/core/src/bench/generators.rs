use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dagmodel::{DagObjective, EvalMode, HKind, PreferenceDag};
use crate::objectives::{
    InfoGainInstance, Pattern, RecommenderInstance, SearchTrackInstance, TaskInstance,
};
use crate::{Error, Result};

fn positive(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    loop {
        let x = rng.gen_range(lo..hi);
        if x > 0.0 {
            return x;
        }
    }
}

/// `m` tasks, `n` actions and `2k` stages; every probability uniform in `[0, 0.2]`.
pub fn gen_tasks(n: usize, k: usize, m: usize, seed: u64) -> Result<TaskInstance> {
    if n == 0 || k == 0 || m == 0 {
        return Err(Error::invalid("tasks generator needs n, k, m >= 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let probs: Vec<f64> = (0..m * 2 * k * n)
        .map(|_| rng.gen_range(0.0..=0.2))
        .collect();
    TaskInstance::new(m, n, 2 * k, &probs)
}

/// The first `n` of the 1000 matrices `a = j/1000`, ordered by decreasing `|√a − √(1−a)|` (larger
/// `a` first on ties), with a random prior diagonal in `(0, 1)` and `σ_i ∈ [i−1, i)` for
/// `i = 1..2k`.
pub fn gen_infogain(n: usize, k: usize, seed: u64) -> Result<InfoGainInstance> {
    if n == 0 || n > 1000 || k == 0 {
        return Err(Error::invalid(
            "info-gain generator needs 1 <= n <= 1000 and k >= 1",
        ));
    }
    // Keyed on the integer numerator so that `a` and `1 − a` tie exactly.
    let key = |j: u32| ((j as f64 / 1000.0).sqrt() - ((1000 - j) as f64 / 1000.0).sqrt()).abs();
    let mut order: Vec<u32> = (1..=1000).collect();
    order.sort_by(|&a, &b| key(b).total_cmp(&key(a)).then(b.cmp(&a)));
    let cands: Vec<f64> = order[..n].iter().map(|&j| j as f64 / 1000.0).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let prior = [positive(&mut rng, 0.0, 1.0), positive(&mut rng, 0.0, 1.0)];
    let sigma: Vec<f64> = (1..=2 * k)
        .map(|i| positive(&mut rng, (i - 1) as f64, i as f64))
        .collect();
    InfoGainInstance::new(cands, prior, sigma)
}

/// Patterns `σ_0..σ_{n−1}`: each path joins `Γ_σ` with probability ½, detection probability
/// `clamp(m·i/(n−1) + ½ − m/2, 0.001, 0.999)`, time stamps `1 + r` then cumulative `+ r` with
/// `r ∈ (0, n)`, and `K` equal to the last stamp. Repeats are not allowed.
pub fn gen_searchtrack(
    n: usize,
    num_paths: usize,
    m_slope: f64,
    seed: u64,
) -> Result<SearchTrackInstance> {
    if n < 2 || num_paths == 0 {
        return Err(Error::invalid(
            "search-and-tracking generator needs n >= 2 and paths >= 1",
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut time = 1.0;
    let mut patterns = Vec::with_capacity(n);
    for i in 0..n {
        let paths: Vec<usize> = (0..num_paths).filter(|_| rng.gen_bool(0.5)).collect();
        time += positive(&mut rng, 0.0, n as f64);
        let detect =
            (m_slope * i as f64 / (n - 1) as f64 + 0.5 - m_slope / 2.0).clamp(0.001, 0.999);
        patterns.push(Pattern {
            paths,
            time,
            detect,
        });
    }
    SearchTrackInstance::new(num_paths, patterns, time, false)
}

/// `g` and every coverage entry uniform in `[0, 1)`. Repeats are not allowed.
pub fn gen_recommender(n: usize, topics: usize, seed: u64) -> Result<RecommenderInstance> {
    if n == 0 || topics == 0 {
        return Err(Error::invalid("recommender generator needs n, topics >= 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
    let p: Vec<f64> = (0..n * topics).map(|_| rng.gen::<f64>()).collect();
    RecommenderInstance::new(topics, g, p, false)
}

/// Synthetic DAG objective: self-loop weights in `[0, 1]` for modular `h` and `[0, 0.1]` for
/// coverage `h`.
pub fn gen_dag(n: usize, d: usize, kind: HKind, seed: u64) -> Result<DagObjective> {
    let loops = match kind {
        HKind::Modular => (0.0, 1.0),
        HKind::Coverage => (0.0, 0.1),
    };
    Ok(DagObjective::new(
        PreferenceDag::synthetic(n, d, loops, seed)?,
        kind,
        EvalMode::Raw,
    ))
}
