//! Sequences over a finite ground set and the objective-oracle abstraction.
//!
//! Items are plain indices in `0..n`. A [`Sequence`] is an ordered list of them; whether an item
//! may appear twice is a property of the objective, not of the sequence type.

mod checks;
mod curvature;

use std::fmt;
use std::ops::Deref;
use std::sync::atomic::{AtomicU64, Ordering};

pub use checks::{
    check_monotonicity, check_submodularity, common_supersequences, CheckBounds, MonotonicityKind,
    PropertyReport, SubmodularityKind, Witness,
};
pub use curvature::curvature;

use crate::{Error, Result};

/// Absolute slack used by every inequality test, applied to values scaled by `max(1, |f|)`.
pub const EPS: f64 = 1e-9;

/// Slack for comparing quantities built from the given function values.
pub fn slack(values: &[f64]) -> f64 {
    EPS * values.iter().fold(1.0_f64, |acc, v| acc.max(v.abs()))
}

/// `a <= b` up to [`slack`].
pub fn approx_le(a: f64, b: f64) -> bool {
    a <= b + slack(&[a, b])
}

/// An ordered list of ground-set item indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sequence(Vec<usize>);

impl Sequence {
    pub fn empty() -> Self {
        Sequence(Vec::new())
    }

    pub fn items(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn push(&mut self, item: usize) {
        self.0.push(item);
    }

    pub fn insert(&mut self, pos: usize, item: usize) {
        self.0.insert(pos, item);
    }

    pub fn remove(&mut self, pos: usize) -> usize {
        self.0.remove(pos)
    }

    /// `self ⊕ item` without repeat checking.
    pub fn appended(&self, item: usize) -> Sequence {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.extend_from_slice(&self.0);
        v.push(item);
        Sequence(v)
    }

    pub fn has_repeats(&self) -> bool {
        first_repeat(&self.0).is_some()
    }

    /// Distinct items, sorted ascending.
    pub fn item_set(&self) -> Vec<usize> {
        let mut v = self.0.clone();
        v.sort_unstable();
        v.dedup();
        v
    }
}

impl Deref for Sequence {
    type Target = [usize];

    fn deref(&self) -> &[usize] {
        &self.0
    }
}

impl From<Vec<usize>> for Sequence {
    fn from(v: Vec<usize>) -> Self {
        Sequence(v)
    }
}

impl From<&[usize]> for Sequence {
    fn from(v: &[usize]) -> Self {
        Sequence(v.to_vec())
    }
}

impl<const N: usize> From<[usize; N]> for Sequence {
    fn from(v: [usize; N]) -> Self {
        Sequence(v.to_vec())
    }
}

impl FromIterator<usize> for Sequence {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Sequence(iter.into_iter().collect())
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("∅");
        }
        f.write_str("(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}

pub(crate) fn first_repeat(items: &[usize]) -> Option<usize> {
    for (i, a) in items.iter().enumerate() {
        if items[..i].contains(a) {
            return Some(*a);
        }
    }
    None
}

/// How `s` sits inside `t`. Prefix and suffix both imply subsequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Relation {
    pub subsequence: bool,
    pub prefix: bool,
    pub suffix: bool,
}

impl Relation {
    pub fn is_none(&self) -> bool {
        !self.subsequence
    }
}

pub fn relation(s: &[usize], t: &[usize]) -> Relation {
    Relation {
        subsequence: is_subsequence(s, t),
        prefix: t.starts_with(s),
        suffix: t.ends_with(s),
    }
}

pub fn is_subsequence(s: &[usize], t: &[usize]) -> bool {
    let mut it = t.iter();
    s.iter().all(|x| it.any(|y| y == x))
}

/// `s ⊕ t`. Fails with [`Error::RepeatViolation`] when repeats are forbidden and the operands
/// share an item.
pub fn concat(s: &[usize], t: &[usize], allows_repeats: bool) -> Result<Sequence> {
    let mut out = Vec::with_capacity(s.len() + t.len());
    out.extend_from_slice(s);
    out.extend_from_slice(t);
    if !allows_repeats {
        if let Some(item) = first_repeat(&out) {
            return Err(Error::RepeatViolation { item });
        }
    }
    Ok(Sequence(out))
}

/// Every sequence of length `<= max_len` over `0..n`, in lexicographic (depth-first) order,
/// starting with the empty sequence.
pub fn all_sequences(n: usize, max_len: usize, allows_repeats: bool) -> Vec<Sequence> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(max_len);
    let mut used = vec![false; n];
    fn rec(
        n: usize,
        max_len: usize,
        repeats: bool,
        cur: &mut Vec<usize>,
        used: &mut [bool],
        out: &mut Vec<Sequence>,
    ) {
        out.push(Sequence(cur.clone()));
        if cur.len() == max_len {
            return;
        }
        for v in 0..n {
            if !repeats && used[v] {
                continue;
            }
            cur.push(v);
            used[v] = true;
            rec(n, max_len, repeats, cur, used, out);
            used[v] = false;
            cur.pop();
        }
    }
    rec(n, max_len, allows_repeats, &mut cur, &mut used, &mut out);
    out
}

/// Number of sequences of length `<= max_len` over `n` items.
pub fn count_sequences(n: usize, max_len: usize, allows_repeats: bool) -> u128 {
    let mut total: u128 = 1;
    let mut layer: u128 = 1;
    for l in 0..max_len {
        let choices = if allows_repeats {
            n as u128
        } else {
            (n as u128).saturating_sub(l as u128)
        };
        layer = layer.saturating_mul(choices);
        if layer == 0 {
            break;
        }
        total = total.saturating_add(layer);
    }
    total
}

/// All distinct subsequences of `t` (including `∅` and `t`).
pub fn subsequences(t: &[usize]) -> Vec<Sequence> {
    let mut out: Vec<Sequence> = (0u32..(1u32 << t.len()))
        .map(|mask| {
            t.iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, v)| *v)
                .collect()
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

/// A real-valued function over sequences of a finite ground set.
pub trait SequenceFunction: Sync {
    /// Ground-set size `n`; items are `0..n`.
    fn ground_size(&self) -> usize;

    fn allows_repeats(&self) -> bool;

    /// Longest sequence the function is defined on, if bounded.
    fn max_len(&self) -> Option<usize> {
        None
    }

    /// `f(seq)`. Callers guarantee that `seq` respects the repeat policy and `max_len`.
    fn value(&self, seq: &[usize]) -> f64;

    /// Canonical representative reported for `seq`, when the function only depends on an
    /// equivalence class of sequences (DAG objectives in reordered mode).
    fn canonical(&self, _seq: &[usize]) -> Option<Sequence> {
        None
    }
}

impl<F: SequenceFunction + ?Sized> SequenceFunction for &F {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }

    fn allows_repeats(&self) -> bool {
        (**self).allows_repeats()
    }

    fn max_len(&self) -> Option<usize> {
        (**self).max_len()
    }

    fn value(&self, seq: &[usize]) -> f64 {
        (**self).value(seq)
    }

    fn canonical(&self, seq: &[usize]) -> Option<Sequence> {
        (**self).canonical(seq)
    }
}

impl<F: SequenceFunction + ?Sized> SequenceFunction for Box<F> {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }

    fn allows_repeats(&self) -> bool {
        (**self).allows_repeats()
    }

    fn max_len(&self) -> Option<usize> {
        (**self).max_len()
    }

    fn value(&self, seq: &[usize]) -> f64 {
        (**self).value(seq)
    }

    fn canonical(&self, seq: &[usize]) -> Option<Sequence> {
        (**self).canonical(seq)
    }
}

/// A [`SequenceFunction`] together with a thread-safe evaluation counter.
#[derive(Debug)]
pub struct Oracle<F> {
    func: F,
    evals: AtomicU64,
}

impl<F: SequenceFunction> Oracle<F> {
    pub fn new(func: F) -> Self {
        Oracle {
            func,
            evals: AtomicU64::new(0),
        }
    }

    pub fn evaluate(&self, seq: &[usize]) -> f64 {
        self.evals.fetch_add(1, Ordering::Relaxed);
        self.func.value(seq)
    }

    pub fn evaluations(&self) -> u64 {
        self.evals.load(Ordering::Relaxed)
    }

    pub fn reset_evaluations(&self) {
        self.evals.store(0, Ordering::Relaxed);
    }

    pub fn n(&self) -> usize {
        self.func.ground_size()
    }

    pub fn allows_repeats(&self) -> bool {
        self.func.allows_repeats()
    }

    pub fn max_len(&self) -> Option<usize> {
        self.func.max_len()
    }

    pub fn func(&self) -> &F {
        &self.func
    }

    pub fn into_inner(self) -> F {
        self.func
    }

    /// Rejects `len` when the function is not defined that far.
    pub fn ensure_len(&self, len: usize) -> Result<()> {
        match self.func.max_len() {
            Some(max) if len > max => Err(Error::StageOutOfRange { len, max }),
            _ => Ok(()),
        }
    }

    /// Validates `seq` against the ground set, the repeat policy and the length bound.
    pub fn validate(&self, seq: &[usize]) -> Result<()> {
        let n = self.n();
        if let Some(&item) = seq.iter().find(|&&v| v >= n) {
            return Err(Error::ItemOutOfRange { item, n });
        }
        if !self.allows_repeats() {
            if let Some(item) = first_repeat(seq) {
                return Err(Error::RepeatViolation { item });
            }
        }
        self.ensure_len(seq.len())
    }
}

/// Closure-backed function, handy for ad-hoc and adversarial oracles.
pub struct FnObjective<G> {
    n: usize,
    repeats: bool,
    f: G,
}

impl<G: Fn(&[usize]) -> f64 + Sync> FnObjective<G> {
    pub fn new(n: usize, allows_repeats: bool, f: G) -> Self {
        FnObjective {
            n,
            repeats: allows_repeats,
            f,
        }
    }
}

impl<G: Fn(&[usize]) -> f64 + Sync> SequenceFunction for FnObjective<G> {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn allows_repeats(&self) -> bool {
        self.repeats
    }

    fn value(&self, seq: &[usize]) -> f64 {
        (self.f)(seq)
    }
}
