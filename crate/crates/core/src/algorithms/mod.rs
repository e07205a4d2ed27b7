//! GSEMO and the greedy-style baselines.

mod budget;
mod greedy;
mod gsemo;
mod mutation;

pub use budget::{budget_for, ProblemClass};
pub use greedy::{generalized_greedy, greedy, omega};
pub use gsemo::{
    gsemo, gsemo_observed, Archive, GsemoConfig, GsemoObserver, Member, RunRecord, Variant,
};
pub use mutation::{mutate, mutate_observed, poisson_one, MutationStep, POISSON_CUTOFF};

use std::cmp::Ordering;
use std::fmt;

/// First objective of the bi-objective reformulation; `NegInf` sits below every real.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Fitness {
    NegInf,
    Value(f64),
}

impl Fitness {
    pub fn value(self) -> Option<f64> {
        match self {
            Fitness::NegInf => None,
            Fitness::Value(v) => Some(v),
        }
    }
}

impl PartialOrd for Fitness {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Fitness::NegInf, Fitness::NegInf) => Some(Ordering::Equal),
            (Fitness::NegInf, Fitness::Value(_)) => Some(Ordering::Less),
            (Fitness::Value(_), Fitness::NegInf) => Some(Ordering::Greater),
            (Fitness::Value(a), Fitness::Value(b)) => a.partial_cmp(b),
        }
    }
}

impl fmt::Display for Fitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fitness::NegInf => f.write_str("-inf"),
            Fitness::Value(v) => write!(f, "{v}"),
        }
    }
}

/// `(f1, f2)` with `f2 = −|s|`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BiValue {
    pub f1: Fitness,
    pub f2: i64,
}

impl BiValue {
    pub fn new(f1: Fitness, len: usize) -> Self {
        BiValue {
            f1,
            f2: -(len as i64),
        }
    }

    /// `self ⪰ other`.
    pub fn weakly_dominates(&self, other: &BiValue) -> bool {
        self.f1 >= other.f1 && self.f2 >= other.f2
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dominance {
    AStrict,
    BStrict,
    Equal,
    Incomparable,
}

pub fn dominate_relation(a: &BiValue, b: &BiValue) -> Dominance {
    match (a.weakly_dominates(b), b.weakly_dominates(a)) {
        (true, true) => Dominance::Equal,
        (true, false) => Dominance::AStrict,
        (false, true) => Dominance::BStrict,
        (false, false) => Dominance::Incomparable,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(f1: f64, f2: i64) -> BiValue {
        BiValue {
            f1: Fitness::Value(f1),
            f2,
        }
    }

    #[test]
    fn domination_examples() {
        assert_eq!(
            dominate_relation(&bv(2.0, -1), &bv(1.0, -2)),
            Dominance::AStrict
        );
        assert_eq!(
            dominate_relation(&bv(1.0, -2), &bv(1.0, -2)),
            Dominance::Equal
        );
        assert_eq!(
            dominate_relation(&bv(2.0, -3), &bv(1.0, -2)),
            Dominance::Incomparable
        );
        assert_eq!(
            dominate_relation(&bv(1.0, -2), &bv(2.0, -2)),
            Dominance::BStrict
        );
    }

    #[test]
    fn neg_inf_is_below_everything() {
        let low = BiValue {
            f1: Fitness::NegInf,
            f2: -1,
        };
        assert_eq!(dominate_relation(&low, &bv(-1e300, -1)), Dominance::BStrict);
        assert_eq!(dominate_relation(&low, &low), Dominance::Equal);
        assert!(Fitness::NegInf < Fitness::Value(f64::MIN));
    }
}
