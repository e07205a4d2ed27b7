//! Exact optima by enumeration.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dagmodel::DagObjective;
use crate::objectives::{Pattern, SearchTrackInstance};
use crate::seqcore::{count_sequences, Oracle, Sequence, SequenceFunction};
use crate::{Error, Result};

pub const DEFAULT_GUARD: u128 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OptMethod {
    FullSequence,
    SubsetReorder,
    SubsetTimesort,
}

impl fmt::Display for OptMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OptMethod::FullSequence => "full_sequence",
            OptMethod::SubsetReorder => "subset_reorder",
            OptMethod::SubsetTimesort => "subset_timesort",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OptResult {
    pub value: f64,
    pub witness: Sequence,
    pub enumerated: u128,
    pub method: OptMethod,
}

/// `Σ_{j ≤ k} C(n, j)`, saturating.
pub fn count_subsets(n: usize, k: usize) -> u128 {
    let mut total: u128 = 0;
    let mut c: u128 = 1;
    for j in 0..=k.min(n) {
        total = total.saturating_add(c);
        c = c.saturating_mul((n - j) as u128) / (j as u128 + 1);
    }
    total
}

fn guard_check(count: u128, guard: u128) -> Result<()> {
    if count > guard {
        return Err(Error::TooLarge { count, guard });
    }
    Ok(())
}

/// Maximizes `f` over every sequence of length at most `k`, in lexicographic order so ties go to
/// the smallest sequence.
pub fn opt_full<F: SequenceFunction>(
    oracle: &Oracle<F>,
    k: usize,
    guard: u128,
) -> Result<OptResult> {
    let n = oracle.n();
    let repeats = oracle.allows_repeats();
    let count = count_sequences(n, k, repeats);
    guard_check(count, guard)?;
    oracle.ensure_len(k)?;

    struct Search<'a, F> {
        oracle: &'a Oracle<F>,
        n: usize,
        k: usize,
        repeats: bool,
        used: Vec<bool>,
        cur: Vec<usize>,
        best: (f64, Vec<usize>),
    }
    impl<F: SequenceFunction> Search<'_, F> {
        fn visit(&mut self) {
            let f = self.oracle.evaluate(&self.cur);
            if f > self.best.0 {
                self.best = (f, self.cur.clone());
            }
            if self.cur.len() == self.k {
                return;
            }
            for v in 0..self.n {
                if !self.repeats && self.used[v] {
                    continue;
                }
                self.used[v] = true;
                self.cur.push(v);
                self.visit();
                self.cur.pop();
                self.used[v] = false;
            }
        }
    }
    let mut s = Search {
        oracle,
        n,
        k,
        repeats,
        used: vec![false; n],
        cur: Vec::with_capacity(k),
        best: (f64::NEG_INFINITY, Vec::new()),
    };
    s.visit();
    Ok(OptResult {
        value: s.best.0,
        witness: Sequence::from(s.best.1),
        enumerated: count,
        method: OptMethod::FullSequence,
    })
}

/// Visits every subset of `0..n` with at most `k` elements as an increasing list, in
/// lexicographic order.
fn for_each_subset(n: usize, k: usize, mut visit: impl FnMut(&[usize])) {
    fn rec(
        start: usize,
        n: usize,
        k: usize,
        cur: &mut Vec<usize>,
        visit: &mut impl FnMut(&[usize]),
    ) {
        visit(cur);
        if cur.len() == k {
            return;
        }
        for v in start..n {
            cur.push(v);
            rec(v + 1, n, k, cur, visit);
            cur.pop();
        }
    }
    rec(0, n, k, &mut Vec::with_capacity(k), &mut visit);
}

fn best_over_subsets(
    n: usize,
    k: usize,
    mut arrange: impl FnMut(&[usize]) -> Sequence,
    mut eval: impl FnMut(&[usize]) -> f64,
) -> (f64, Sequence) {
    let mut best = (f64::NEG_INFINITY, Sequence::empty());
    for_each_subset(n, k, |set| {
        let seq = arrange(set);
        let f = eval(&seq);
        if f > best.0 {
            best = (f, seq);
        }
    });
    best
}

/// Maximizes `f(Reorder(S))` over item sets with `|S| ≤ k`.
pub fn opt_subset_reorder<F>(oracle: &Oracle<F>, k: usize, guard: u128) -> Result<OptResult>
where
    F: SequenceFunction + AsRef<DagObjective>,
{
    let n = oracle.n();
    let count = count_subsets(n, k);
    guard_check(count, guard)?;
    let dag = oracle.func().as_ref().dag();
    let (value, witness) = best_over_subsets(n, k, |set| dag.reorder(set), |s| oracle.evaluate(s));
    Ok(OptResult {
        value,
        witness,
        enumerated: count,
        method: OptMethod::SubsetReorder,
    })
}

/// Proof that the time-sorted optimum matched full enumeration on the cross-check suite.
#[derive(Clone, Debug)]
pub struct TimesortCertificate {
    trials: usize,
}

impl TimesortCertificate {
    pub fn trials(&self) -> usize {
        self.trials
    }
}

/// Cross-checks [`opt_subset_timesort`] against [`opt_full`] on `trials` random repeat-free
/// instances with at most 4 patterns, 3 paths and `k ≤ 3`.
pub fn validate_timesort(trials: usize, seed: u64) -> Result<TimesortCertificate> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..trials {
        let n = rng.gen_range(1..=4);
        let paths = rng.gen_range(1..=3);
        let k = rng.gen_range(1..=3);
        let mut time = 0.0;
        let patterns: Vec<Pattern> = (0..n)
            .map(|_| {
                time += rng.gen_range(0.01..4.0);
                Pattern {
                    paths: (0..paths).filter(|_| rng.gen_bool(0.5)).collect(),
                    time,
                    detect: rng.gen_range(0.001..=0.999),
                }
            })
            .collect();
        let penalty = time + rng.gen_range(0.0..4.0);
        let inst = SearchTrackInstance::new(paths, patterns, penalty, false)?;
        let oracle = Oracle::new(inst);
        let full = opt_full(&oracle, k, u128::MAX)?;
        let fast = timesort_unchecked(&oracle, k);
        if (full.value - fast.1).abs() > crate::seqcore::slack(&[full.value, fast.1]) {
            return Err(Error::CrossCheckFailed(format!(
                "trial {trial}: full enumeration gives {} at {}, time-sorted subsets give {} at {}",
                full.value, full.witness, fast.1, fast.0
            )));
        }
    }
    Ok(TimesortCertificate { trials })
}

fn timesort_unchecked<F>(oracle: &Oracle<F>, k: usize) -> (Sequence, f64)
where
    F: SequenceFunction + AsRef<SearchTrackInstance>,
{
    timesort_search(oracle.func().as_ref(), k)
}

/// Depth-first search over time-sorted pattern sets. Each child extends its parent's sequence by
/// one later pattern, so the miss probabilities and `f` are updated in place with exactly the
/// arithmetic of a full evaluation.
fn timesort_search(inst: &SearchTrackInstance, k: usize) -> (Sequence, f64) {
    let pats = inst.patterns();
    let mut order: Vec<usize> = (0..pats.len()).collect();
    order.sort_by(|&a, &b| pats[a].time.total_cmp(&pats[b].time).then(a.cmp(&b)));

    struct Dfs<'a> {
        pats: &'a [Pattern],
        order: Vec<usize>,
        penalty: f64,
        paths: f64,
        k: usize,
        cur: Vec<usize>,
        /// Per depth: survival probability of each path and their sum.
        survive: Vec<Vec<f64>>,
        total: Vec<f64>,
        best: (f64, Vec<usize>),
    }
    impl Dfs<'_> {
        fn visit(&mut self, start: usize, f: f64) {
            if f > self.best.0 {
                self.best = (f, self.cur.clone());
            }
            let depth = self.cur.len();
            if depth == self.k {
                return;
            }
            for idx in start..self.order.len() {
                let v = self.order[idx];
                let pat = &self.pats[v];
                let (lo, hi) = self.survive.split_at_mut(depth + 1);
                hi[0].copy_from_slice(&lo[depth]);
                let before = self.total[depth];
                let mut total = before;
                for &g in &pat.paths {
                    let caught = hi[0][g] * pat.detect;
                    hi[0][g] -= caught;
                    total -= caught;
                }
                self.total[depth + 1] = total;
                let child = f + (self.penalty - pat.time) * (before - total) / self.paths;
                self.cur.push(v);
                self.visit(idx + 1, child);
                self.cur.pop();
            }
        }
    }
    let paths = inst.num_paths();
    let mut dfs = Dfs {
        pats,
        order,
        penalty: inst.penalty(),
        paths: paths as f64,
        k,
        cur: Vec::with_capacity(k),
        survive: vec![vec![1.0; paths]; k + 1],
        total: vec![paths as f64; k + 1],
        best: (f64::NEG_INFINITY, Vec::new()),
    };
    dfs.visit(0, 0.0);
    (Sequence::from(dfs.best.1), dfs.best.0)
}

/// Maximizes `f` over pattern sets of size at most `k`, each executed in time-stamp order.
pub fn opt_subset_timesort<F>(
    oracle: &Oracle<F>,
    k: usize,
    guard: u128,
    certificate: Option<&TimesortCertificate>,
) -> Result<OptResult>
where
    F: SequenceFunction + AsRef<SearchTrackInstance>,
{
    if certificate.is_none() {
        return Err(Error::OracleUnvalidated);
    }
    if oracle.allows_repeats() {
        return Err(Error::invalid(
            "time-sorted subsets cannot represent repeated patterns",
        ));
    }
    let count = count_subsets(oracle.n(), k);
    guard_check(count, guard)?;
    let (witness, value) = timesort_unchecked(oracle, k);
    Ok(OptResult {
        value,
        witness,
        enumerated: count,
        method: OptMethod::SubsetTimesort,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dagmodel::{Edge, EvalMode, HKind, PreferenceDag};
    use crate::seqcore::FnObjective;

    fn two_vertex() -> Oracle<DagObjective> {
        let g = PreferenceDag::new(
            2,
            vec![
                Edge {
                    src: 0,
                    dst: 0,
                    weight: 0.3,
                },
                Edge {
                    src: 1,
                    dst: 1,
                    weight: 0.4,
                },
                Edge {
                    src: 0,
                    dst: 1,
                    weight: 0.5,
                },
            ],
        )
        .unwrap();
        Oracle::new(DagObjective::new(g, HKind::Modular, EvalMode::Reordered))
    }

    #[test]
    fn subset_counts() {
        assert_eq!(count_subsets(30, 5), 174_437);
        assert_eq!(count_subsets(20, 10), 616_666);
        assert_eq!(count_subsets(3, 10), 8);
    }

    #[test]
    fn full_examples() {
        let o = two_vertex();
        let r = opt_full(&o, 0, DEFAULT_GUARD).unwrap();
        assert_eq!((r.value, r.witness.clone()), (0.0, Sequence::empty()));
        let r = opt_full(&o, 2, DEFAULT_GUARD).unwrap();
        assert!((r.value - 1.2).abs() < 1e-12);
        assert_eq!(r.witness, Sequence::from([0, 1]));
        assert_eq!(r.enumerated, 5);
        let s = opt_subset_reorder(&o, 2, DEFAULT_GUARD).unwrap();
        assert_eq!((s.value, s.witness), (r.value, r.witness));
    }

    #[test]
    fn guard_trips() {
        let o = Oracle::new(FnObjective::new(10, true, |s: &[usize]| s.len() as f64));
        match opt_full(&o, 4, 100) {
            Err(Error::TooLarge { count, guard }) => assert_eq!((count, guard), (11_111, 100)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn lexicographic_tie_break() {
        let o = Oracle::new(FnObjective::new(3, true, |s: &[usize]| {
            s.len().min(1) as f64
        }));
        assert_eq!(
            opt_full(&o, 2, DEFAULT_GUARD).unwrap().witness,
            Sequence::from([0])
        );
    }

    #[test]
    fn timesort_requires_certificate() {
        let inst = SearchTrackInstance::new(
            1,
            vec![Pattern {
                paths: vec![0],
                time: 1.0,
                detect: 0.5,
            }],
            2.0,
            false,
        )
        .unwrap();
        let o = Oracle::new(inst);
        assert!(matches!(
            opt_subset_timesort(&o, 1, DEFAULT_GUARD, None),
            Err(Error::OracleUnvalidated)
        ));
        let cert = validate_timesort(200, 5).unwrap();
        let r = opt_subset_timesort(&o, 1, DEFAULT_GUARD, Some(&cert)).unwrap();
        assert_eq!(r.witness, Sequence::from([0]));
        assert!((r.value - 0.5).abs() < 1e-12);
    }

    #[test]
    fn incremental_search_matches_direct_evaluation() {
        for seed in 0..20 {
            let inst = crate::bench::gen_searchtrack(9, 7, 0.6 - seed as f64 * 0.06, seed).unwrap();
            let o = Oracle::new(&inst);
            let direct = best_over_subsets(9, 4, |set| Sequence::from(set), |s| o.evaluate(s));
            let (witness, value) = timesort_search(&inst, 4);
            assert_eq!(value.to_bits(), direct.0.to_bits());
            assert_eq!(witness, direct.1);
            assert_eq!(inst.evaluate(&witness).unwrap().to_bits(), value.to_bits());
        }
    }
}
