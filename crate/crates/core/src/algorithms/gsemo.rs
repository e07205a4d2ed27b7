use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{mutate, BiValue, Fitness};
use crate::seqcore::{Oracle, Sequence, SequenceFunction};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Sequences of length `2k` or more get `f1 = −∞`.
    Standard,
    /// Sequences longer than `k` get `f1 = −∞`.
    KVariant,
}

impl Variant {
    pub fn cap(self, k: usize) -> usize {
        match self {
            Variant::Standard => 2 * k,
            Variant::KVariant => k + 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GsemoConfig {
    pub k: usize,
    pub iterations: u64,
    pub variant: Variant,
    pub seed: u64,
    /// Checkpoint interval for the trace; `None` means every `k·n` iterations.
    pub trace_every: Option<u64>,
}

impl GsemoConfig {
    pub fn new(k: usize, iterations: u64, variant: Variant, seed: u64) -> Self {
        GsemoConfig {
            k,
            iterations,
            variant,
            seed,
            trace_every: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Member {
    pub seq: Sequence,
    pub value: BiValue,
}

/// The GSEMO population: mutually incomparable `(sequence, (f1, f2))` pairs.
#[derive(Clone, Debug, Default)]
pub struct Archive {
    members: Vec<Member>,
}

impl Archive {
    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Inserts `seq` unless a member strictly dominates it; evicts every member it weakly
    /// dominates. Returns whether `seq` was added.
    pub fn offer(&mut self, seq: Sequence, value: BiValue) -> bool {
        let rejected = self
            .members
            .iter()
            .any(|m| m.value.weakly_dominates(&value) && !value.weakly_dominates(&m.value));
        if rejected {
            return false;
        }
        self.members.retain(|m| !value.weakly_dominates(&m.value));
        self.members.push(Member { seq, value });
        true
    }

    /// Best `f1` over members of length at most `k`, earliest member on ties.
    pub fn best_feasible(&self, k: usize) -> Option<&Member> {
        let mut best: Option<&Member> = None;
        for m in self.members.iter().filter(|m| m.seq.len() <= k) {
            if best.map_or(true, |b| m.value.f1 > b.value.f1) {
                best = Some(m);
            }
        }
        best
    }

    /// Checks incomparability, the size bound, the absence of `−∞` members and that some member
    /// is feasible.
    pub fn check_invariants(&self, k: usize, variant: Variant) -> Result<(), String> {
        let limit = match variant {
            Variant::Standard => 2 * k,
            Variant::KVariant => k + 1,
        };
        if self.members.len() > limit {
            return Err(format!(
                "archive has {} members, bound is {limit}",
                self.members.len()
            ));
        }
        for (i, a) in self.members.iter().enumerate() {
            if a.value.f1 == Fitness::NegInf {
                return Err(format!("member {} has f1 = -inf", a.seq));
            }
            if a.value.f2 != -(a.seq.len() as i64) {
                return Err(format!("member {} has f2 = {}", a.seq, a.value.f2));
            }
            for b in &self.members[i + 1..] {
                if a.value.weakly_dominates(&b.value) || b.value.weakly_dominates(&a.value) {
                    return Err(format!("members {} and {} are comparable", a.seq, b.seq));
                }
            }
        }
        if self.best_feasible(k).is_none() {
            return Err("no member of length <= k".into());
        }
        Ok(())
    }
}

/// Hook called after every GSEMO iteration.
pub trait GsemoObserver {
    fn after_iteration(&mut self, iteration: u64, archive: &Archive);
}

impl GsemoObserver for () {
    fn after_iteration(&mut self, _: u64, _: &Archive) {}
}

impl<F: FnMut(u64, &Archive)> GsemoObserver for F {
    fn after_iteration(&mut self, iteration: u64, archive: &Archive) {
        self(iteration, archive)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunRecord {
    pub seed: u64,
    pub budget: u64,
    pub best: Sequence,
    pub best_value: f64,
    /// Iterations run; each one evaluates one offspring.
    pub evaluations_used: u64,
    /// Actual oracle calls, which skips offspring already beyond the length cap.
    pub oracle_calls: u64,
    /// `(iterations, best feasible f)` checkpoints.
    pub trace: Vec<(u64, f64)>,
}

impl RunRecord {
    /// CSV: header `eval_count,best_f`, one row per checkpoint, then `best,<items>`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::WriterBuilder::new().flexible(true).from_writer(w);
        let io = |e: csv::Error| Error::IoPlain(e.into());
        out.write_record(["eval_count", "best_f"]).map_err(io)?;
        for (evals, f) in &self.trace {
            out.write_record([evals.to_string(), format!("{f:?}")])
                .map_err(io)?;
        }
        let items: Vec<String> = self.best.iter().map(|v| v.to_string()).collect();
        out.write_record(["best".to_string(), items.join(" ")])
            .map_err(io)?;
        out.flush()?;
        Ok(())
    }
}

pub fn gsemo<F: SequenceFunction>(oracle: &Oracle<F>, cfg: &GsemoConfig) -> Result<RunRecord> {
    gsemo_observed(oracle, cfg, &mut ())
}

/// Runs GSEMO for `cfg.iterations` iterations from `P = {∅}` and returns the best member of
/// length at most `k`, mapped through [`SequenceFunction::canonical`] when the objective has one.
pub fn gsemo_observed<F, O>(
    oracle: &Oracle<F>,
    cfg: &GsemoConfig,
    observer: &mut O,
) -> Result<RunRecord>
where
    F: SequenceFunction,
    O: GsemoObserver + ?Sized,
{
    if cfg.k == 0 {
        return Err(Error::invalid("GSEMO needs k >= 1"));
    }
    let cap = cfg.variant.cap(cfg.k);
    oracle.ensure_len(cap - 1)?;
    let n = oracle.n();
    let repeats = oracle.allows_repeats();
    let every = cfg.trace_every.unwrap_or((cfg.k * n) as u64).max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let calls_before = oracle.evaluations();

    let mut archive = Archive::default();
    let empty = Sequence::empty();
    let f0 = oracle.evaluate(&empty);
    archive.offer(empty, BiValue::new(Fitness::Value(f0), 0));
    let mut best = f0;
    let mut trace = vec![(0, best)];

    for it in 1..=cfg.iterations {
        let parent = &archive.members[rng.gen_range(0..archive.members.len())].seq;
        let child = mutate(parent, n, repeats, &mut rng);
        let f1 = if child.len() >= cap {
            Fitness::NegInf
        } else {
            Fitness::Value(oracle.evaluate(&child))
        };
        let len = child.len();
        if archive.offer(child, BiValue::new(f1, len)) && len <= cfg.k {
            if let Fitness::Value(v) = f1 {
                best = best.max(v);
            }
        }
        observer.after_iteration(it, &archive);
        if it % every == 0 {
            trace.push((it, best));
        }
    }
    if trace.last().map(|t| t.0) != Some(cfg.iterations) {
        trace.push((cfg.iterations, best));
    }

    let winner = archive
        .best_feasible(cfg.k)
        .expect("archive keeps a feasible member");
    let best_value = winner
        .value
        .f1
        .value()
        .expect("feasible members are finite");
    let best_seq = oracle
        .func()
        .canonical(&winner.seq)
        .unwrap_or_else(|| winner.seq.clone());
    Ok(RunRecord {
        seed: cfg.seed,
        budget: cfg.iterations,
        best: best_seq,
        best_value,
        evaluations_used: cfg.iterations,
        oracle_calls: oracle.evaluations() - calls_before,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqcore::FnObjective;

    fn weighted(n: usize) -> Oracle<FnObjective<impl Fn(&[usize]) -> f64 + Sync>> {
        Oracle::new(FnObjective::new(n, false, move |s: &[usize]| {
            s.iter().map(|&v| (v + 1) as f64).sum::<f64>()
        }))
    }

    #[test]
    fn zero_iterations_returns_empty() {
        let o = weighted(4);
        let rec = gsemo(&o, &GsemoConfig::new(2, 0, Variant::Standard, 1)).unwrap();
        assert!(rec.best.is_empty());
        assert_eq!(rec.best_value, 0.0);
        assert_eq!(rec.trace, vec![(0, 0.0)]);
    }

    #[test]
    fn finds_top_items_and_keeps_invariants() {
        let o = weighted(6);
        let cfg = GsemoConfig::new(3, 5000, Variant::Standard, 7);
        let mut prev = f64::NEG_INFINITY;
        let mut check = |_: u64, a: &Archive| {
            a.check_invariants(3, Variant::Standard).unwrap();
            let b = a.best_feasible(3).unwrap().value.f1.value().unwrap();
            assert!(b >= prev);
            prev = b;
        };
        let rec = gsemo_observed(&o, &cfg, &mut check).unwrap();
        assert_eq!(rec.best_value, 15.0);
        let mut items = rec.best.to_vec();
        items.sort();
        assert_eq!(items, vec![3, 4, 5]);
        assert!(rec
            .trace
            .windows(2)
            .all(|w| w[0].0 < w[1].0 && w[0].1 <= w[1].1));
        assert_eq!(rec.trace.last().unwrap().1, 15.0);
    }

    #[test]
    fn deterministic_given_seed() {
        let o = weighted(8);
        let cfg = GsemoConfig::new(3, 2000, Variant::KVariant, 99);
        let a = gsemo(&o, &cfg).unwrap();
        let b = gsemo(&o, &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn equal_offspring_replaces_member() {
        let mut a = Archive::default();
        let v = BiValue::new(Fitness::Value(1.0), 1);
        assert!(a.offer(Sequence::from([0]), v));
        assert!(a.offer(Sequence::from([1]), v));
        assert_eq!(a.members().len(), 1);
        assert_eq!(a.members()[0].seq, Sequence::from([1]));
        assert!(!a.offer(Sequence::from([2]), BiValue::new(Fitness::Value(0.5), 1)));
    }

    #[test]
    fn csv_layout() {
        let rec = RunRecord {
            seed: 0,
            budget: 10,
            best: Sequence::from([2, 0]),
            best_value: 1.5,
            evaluations_used: 10,
            oracle_calls: 9,
            trace: vec![(0, 0.0), (10, 1.5)],
        };
        let mut buf = Vec::new();
        rec.write_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "eval_count,best_f\n0,0.0\n10,1.5\nbest,2 0\n"
        );
    }
}
