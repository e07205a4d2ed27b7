//! Bounded exhaustive checkers for the monotonicity and submodularity notions over sequences.
//!
//! Every checker enumerates all sequences up to `max_len` items and tests the defining inequality
//! on every tuple in range, memoizing function values. A failing check carries a [`Witness`] that
//! can be re-evaluated independently with [`Witness::violates`].

use std::collections::{HashMap, HashSet};
use std::fmt;

use super::{all_sequences, first_repeat, slack, subsequences, Oracle, Sequence, SequenceFunction};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MonotonicityKind {
    Subsequence,
    Prefix,
    Suffix,
    Weak,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SubmodularityKind {
    Strong,
    Subsequence,
    Prefix,
}

impl fmt::Display for MonotonicityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MonotonicityKind::Subsequence => "subsequence-monotone",
            MonotonicityKind::Prefix => "prefix-monotone",
            MonotonicityKind::Suffix => "suffix-monotone",
            MonotonicityKind::Weak => "weakly-monotone",
        })
    }
}

impl fmt::Display for SubmodularityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SubmodularityKind::Strong => "strongly-submodular",
            SubmodularityKind::Subsequence => "subsequence-submodular",
            SubmodularityKind::Prefix => "prefix-submodular",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CheckBounds {
    pub max_len: usize,
    /// Hard cap on distinct oracle evaluations per checker call.
    pub eval_budget: u64,
}

impl Default for CheckBounds {
    fn default() -> Self {
        CheckBounds {
            max_len: 3,
            eval_budget: 1_000_000,
        }
    }
}

impl CheckBounds {
    pub fn with_max_len(max_len: usize) -> Self {
        CheckBounds {
            max_len,
            ..Default::default()
        }
    }
}

/// A counterexample to one of the defining inequalities.
#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    /// `s` is related to `t` (prefix, suffix or subsequence) but `f(s) > f(t)`.
    Monotone { s: Sequence, t: Sequence },
    /// No common supersequence `w` of `s` and `t` in the interleaving search space has
    /// `f(w) >= f(s)`.
    Weak {
        s: Sequence,
        t: Sequence,
        candidates: usize,
    },
    /// `f(s⊕v⊕o) − f(s⊕o) < f(t⊕v⊕o) − f(t⊕o)` with `s ⊑ t` (`o = ∅` for the non-strong kinds).
    Submodular {
        s: Sequence,
        t: Sequence,
        o: Sequence,
        v: usize,
    },
}

impl Witness {
    /// Re-evaluates the witness from scratch and reports whether it still violates its inequality.
    pub fn violates<F: SequenceFunction + ?Sized>(&self, f: &F) -> bool {
        match self {
            Witness::Monotone { s, t } => {
                let (fs, ft) = (f.value(s), f.value(t));
                fs > ft + slack(&[fs, ft])
            }
            Witness::Weak { s, t, .. } => {
                let fs = f.value(s);
                common_supersequences(s, t, f.allows_repeats())
                    .iter()
                    .all(|w| {
                        let fw = f.value(w);
                        fw < fs - slack(&[fs, fw])
                    })
            }
            Witness::Submodular { s, t, o, v } => {
                let join = |a: &[usize], with_v: bool| -> Vec<usize> {
                    let mut out = a.to_vec();
                    if with_v {
                        out.push(*v);
                    }
                    out.extend_from_slice(o);
                    out
                };
                let vals = [
                    f.value(&join(s, true)),
                    f.value(&join(s, false)),
                    f.value(&join(t, true)),
                    f.value(&join(t, false)),
                ];
                vals[0] - vals[1] < vals[2] - vals[3] - slack(&vals)
            }
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Monotone { s, t } => write!(f, "s={s} t={t}"),
            Witness::Weak { s, t, candidates } => {
                write!(f, "s={s} t={t} ({candidates} candidate supersequences)")
            }
            Witness::Submodular { s, t, o, v } => write!(f, "s={s} t={t} o={o} v={v}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct PropertyReport {
    pub property: String,
    pub holds: bool,
    pub witness: Option<Witness>,
    pub max_len: usize,
    pub ground_size: usize,
    /// Distinct oracle evaluations spent by this check.
    pub evaluations: u64,
    /// Inequality instances tested.
    pub tuples_checked: u64,
    /// Pairs skipped because no sequence in the repeat-free space can contain both operands.
    pub vacuous: u64,
    pub search_space: String,
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} (n={}, max_len={}, {} tuples, {} evals)",
            self.property,
            if self.holds { "holds" } else { "violated" },
            self.ground_size,
            self.max_len,
            self.tuples_checked,
            self.evaluations
        )?;
        if let Some(w) = &self.witness {
            write!(f, " witness: {w}")?;
        }
        Ok(())
    }
}

struct Memo<'a, F> {
    oracle: &'a Oracle<F>,
    cache: HashMap<Vec<usize>, f64>,
    budget: u64,
    used: u64,
}

impl<'a, F: SequenceFunction> Memo<'a, F> {
    fn new(oracle: &'a Oracle<F>, budget: u64) -> Self {
        Memo {
            oracle,
            cache: HashMap::new(),
            budget,
            used: 0,
        }
    }

    fn get(&mut self, s: &[usize]) -> Result<f64> {
        if let Some(v) = self.cache.get(s) {
            return Ok(*v);
        }
        if self.used >= self.budget {
            return Err(Error::BudgetExceeded {
                budget: self.budget,
            });
        }
        self.used += 1;
        let v = self.oracle.evaluate(s);
        self.cache.insert(s.to_vec(), v);
        Ok(v)
    }
}

/// All common supersequences of `s` and `t` obtained by interleaving them, where equal items at a
/// merge point may be shared. Lengths range from `max(|s|,|t|)` to `|s|+|t|`. With repeats
/// forbidden, candidates containing an item twice are dropped. `s⊕t` and `t⊕s` come first.
pub fn common_supersequences(s: &[usize], t: &[usize], allows_repeats: bool) -> Vec<Sequence> {
    fn rec(s: &[usize], t: &[usize], cur: &mut Vec<usize>, out: &mut HashSet<Vec<usize>>) {
        if s.is_empty() || t.is_empty() {
            let mark = cur.len();
            cur.extend_from_slice(s);
            cur.extend_from_slice(t);
            out.insert(cur.clone());
            cur.truncate(mark);
            return;
        }
        cur.push(s[0]);
        rec(&s[1..], t, cur, out);
        cur.pop();
        cur.push(t[0]);
        rec(s, &t[1..], cur, out);
        cur.pop();
        if s[0] == t[0] {
            cur.push(s[0]);
            rec(&s[1..], &t[1..], cur, out);
            cur.pop();
        }
    }
    let mut set = HashSet::new();
    rec(s, t, &mut Vec::with_capacity(s.len() + t.len()), &mut set);
    let st: Vec<usize> = s.iter().chain(t).copied().collect();
    let ts: Vec<usize> = t.iter().chain(s).copied().collect();
    let mut rest: Vec<Vec<usize>> = set.into_iter().filter(|w| *w != st && *w != ts).collect();
    rest.sort();
    let mut out = vec![st];
    if ts != out[0] {
        out.push(ts);
    }
    out.extend(rest);
    out.retain(|w| allows_repeats || first_repeat(w).is_none());
    out.into_iter().map(Sequence::from).collect()
}

fn report(
    property: String,
    oracle_n: usize,
    bounds: &CheckBounds,
    witness: Option<Witness>,
    evaluations: u64,
    tuples_checked: u64,
    vacuous: u64,
    search_space: String,
) -> PropertyReport {
    PropertyReport {
        property,
        holds: witness.is_none(),
        witness,
        max_len: bounds.max_len,
        ground_size: oracle_n,
        evaluations,
        tuples_checked,
        vacuous,
        search_space,
    }
}

/// Exhaustively tests one monotonicity notion over all sequences of length `<= bounds.max_len`.
///
/// For [`MonotonicityKind::Weak`], every pair `(s, t)` is tested against the candidate set built by
/// [`common_supersequences`], so `w` has length at most `2 * max_len`.
pub fn check_monotonicity<F: SequenceFunction>(
    oracle: &Oracle<F>,
    kind: MonotonicityKind,
    bounds: CheckBounds,
) -> Result<PropertyReport> {
    let n = oracle.n();
    let repeats = oracle.allows_repeats();
    let longest = match kind {
        MonotonicityKind::Weak => 2 * bounds.max_len,
        _ => bounds.max_len,
    };
    oracle.ensure_len(longest)?;
    let seqs = all_sequences(n, bounds.max_len, repeats);
    let mut memo = Memo::new(oracle, bounds.eval_budget);
    let mut tuples = 0u64;
    let mut vacuous = 0u64;
    let mut witness = None;

    let space = match kind {
        MonotonicityKind::Subsequence => "all (s ⊑subseq t), |t| <= max_len".to_string(),
        MonotonicityKind::Prefix => "all (s ⊑prefix t), |t| <= max_len".to_string(),
        MonotonicityKind::Suffix => "all (s ⊑suffix t), |t| <= max_len".to_string(),
        MonotonicityKind::Weak => {
            "all (s, t) with |s|,|t| <= max_len; w over interleavings of s and t with shared \
             equal items, max(|s|,|t|) <= |w| <= |s|+|t|"
                .to_string()
        }
    };

    'outer: for t in &seqs {
        match kind {
            MonotonicityKind::Weak => {
                let s = t;
                for t in &seqs {
                    let cands = common_supersequences(s, t, repeats);
                    if cands.is_empty() {
                        vacuous += 1;
                        continue;
                    }
                    tuples += 1;
                    let fs = memo.get(s)?;
                    let mut found = false;
                    for w in &cands {
                        let fw = memo.get(w)?;
                        if fw >= fs - slack(&[fs, fw]) {
                            found = true;
                            break;
                        }
                    }
                    if !found {
                        witness = Some(Witness::Weak {
                            s: s.clone(),
                            t: t.clone(),
                            candidates: cands.len(),
                        });
                        break 'outer;
                    }
                }
            }
            _ => {
                let smaller: Vec<Sequence> = match kind {
                    MonotonicityKind::Prefix => {
                        (0..t.len()).map(|i| Sequence::from(&t[..i])).collect()
                    }
                    MonotonicityKind::Suffix => {
                        (1..=t.len()).map(|i| Sequence::from(&t[i..])).collect()
                    }
                    _ => subsequences(t).into_iter().filter(|s| s != t).collect(),
                };
                let ft = memo.get(t)?;
                for s in smaller {
                    tuples += 1;
                    let fs = memo.get(&s)?;
                    if fs > ft + slack(&[fs, ft]) {
                        witness = Some(Witness::Monotone { s, t: t.clone() });
                        break 'outer;
                    }
                }
            }
        }
    }
    Ok(report(
        kind.to_string(),
        n,
        &bounds,
        witness,
        memo.used,
        tuples,
        vacuous,
        space,
    ))
}

/// Exhaustively tests one submodularity notion.
///
/// `t` ranges over sequences of length `<= bounds.max_len`, `s` over its prefixes or
/// subsequences, `v` over the ground set and, for the strong kind, `o` over sequences of length
/// `<= bounds.max_len`. Tuples whose concatenations would repeat an item are skipped when the
/// oracle forbids repeats.
pub fn check_submodularity<F: SequenceFunction>(
    oracle: &Oracle<F>,
    kind: SubmodularityKind,
    bounds: CheckBounds,
) -> Result<PropertyReport> {
    let n = oracle.n();
    let repeats = oracle.allows_repeats();
    let longest = match kind {
        SubmodularityKind::Strong => 2 * bounds.max_len + 1,
        _ => bounds.max_len + 1,
    };
    oracle.ensure_len(longest)?;
    let seqs = all_sequences(n, bounds.max_len, repeats);
    let empty = vec![Sequence::empty()];
    let suffixes: &[Sequence] = match kind {
        SubmodularityKind::Strong => &seqs,
        _ => &empty,
    };
    let mut memo = Memo::new(oracle, bounds.eval_budget);
    let mut tuples = 0u64;
    let mut witness = None;
    let mut buf = Vec::with_capacity(longest);

    let space = match kind {
        SubmodularityKind::Strong => "s ⊑subseq t, |t| <= max_len, |o| <= max_len, v ∈ V",
        SubmodularityKind::Subsequence => "s ⊑subseq t, |t| <= max_len, v ∈ V",
        SubmodularityKind::Prefix => "s ⊑prefix t, |t| <= max_len, v ∈ V",
    }
    .to_string();

    let valid = |parts: &[&[usize]]| -> bool {
        if repeats {
            return true;
        }
        let mut seen = vec![false; n];
        for p in parts {
            for &x in *p {
                if seen[x] {
                    return false;
                }
                seen[x] = true;
            }
        }
        true
    };

    'outer: for t in &seqs {
        let smaller: Vec<Sequence> = match kind {
            SubmodularityKind::Prefix => (0..=t.len()).map(|i| Sequence::from(&t[..i])).collect(),
            _ => subsequences(t),
        };
        for s in &smaller {
            for o in suffixes {
                for v in 0..n {
                    let vv = [v];
                    if !valid(&[t, &vv, o]) {
                        continue;
                    }
                    tuples += 1;
                    let mut eval = |a: &[usize], with_v: bool| -> Result<f64> {
                        buf.clear();
                        buf.extend_from_slice(a);
                        if with_v {
                            buf.push(v);
                        }
                        buf.extend_from_slice(o);
                        memo.get(&buf)
                    };
                    let vals = [
                        eval(s, true)?,
                        eval(s, false)?,
                        eval(t, true)?,
                        eval(t, false)?,
                    ];
                    if vals[0] - vals[1] < vals[2] - vals[3] - slack(&vals) {
                        witness = Some(Witness::Submodular {
                            s: s.clone(),
                            t: t.clone(),
                            o: o.clone(),
                            v,
                        });
                        break 'outer;
                    }
                }
            }
        }
    }
    Ok(report(
        kind.to_string(),
        n,
        &bounds,
        witness,
        memo.used,
        tuples,
        0,
        space,
    ))
}
