use super::check_items;
use crate::seqcore::SequenceFunction;
use crate::{Error, Result};

/// A search pattern: executing it at `time` detects a target travelling along one of `paths`
/// with probability `detect`.
#[derive(Clone, Debug, PartialEq)]
pub struct Pattern {
    /// Sorted, distinct path indices.
    pub paths: Vec<usize>,
    pub time: f64,
    pub detect: f64,
}

/// Search-and-tracking: maximize `K − E[τ_s]` where `τ_s` is the first detection time (or `K` if
/// the target is never detected) and the target path is uniform over all paths.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchTrackInstance {
    num_paths: usize,
    patterns: Vec<Pattern>,
    penalty: f64,
    allows_repeats: bool,
}

impl SearchTrackInstance {
    pub fn new(
        num_paths: usize,
        patterns: Vec<Pattern>,
        penalty: f64,
        allows_repeats: bool,
    ) -> Result<Self> {
        if num_paths == 0 || patterns.is_empty() {
            return Err(Error::invalid(
                "search-and-tracking needs paths and patterns",
            ));
        }
        let mut max_time = f64::NEG_INFINITY;
        for (i, p) in patterns.iter().enumerate() {
            if p.paths.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::invalid(format!(
                    "pattern {i}: paths must be sorted and distinct"
                )));
            }
            if p.paths.last().is_some_and(|&g| g >= num_paths) {
                return Err(Error::invalid(format!(
                    "pattern {i}: path index out of range"
                )));
            }
            if !(0.0..=1.0).contains(&p.detect) {
                return Err(Error::invalid(format!(
                    "pattern {i}: detection probability"
                )));
            }
            if !(p.time > 0.0) {
                return Err(Error::invalid(format!(
                    "pattern {i}: time stamp must be positive"
                )));
            }
            max_time = max_time.max(p.time);
        }
        if penalty < max_time {
            return Err(Error::invalid(format!(
                "penalty {penalty} is below the latest time stamp {max_time}"
            )));
        }
        Ok(SearchTrackInstance {
            num_paths,
            patterns,
            penalty,
            allows_repeats,
        })
    }

    pub fn num_paths(&self) -> usize {
        self.num_paths
    }

    pub fn patterns(&self) -> &[Pattern] {
        &self.patterns
    }

    pub fn penalty(&self) -> f64 {
        self.penalty
    }

    pub fn with_repeats(mut self, allows_repeats: bool) -> Self {
        self.allows_repeats = allows_repeats;
        self
    }

    pub fn evaluate(&self, seq: &[usize]) -> Result<f64> {
        check_items(seq, self.patterns.len())?;
        if !self.allows_repeats {
            if let Some(item) = crate::seqcore::first_repeat(seq) {
                return Err(Error::RepeatViolation { item });
            }
        }
        Ok(self.eval_unchecked(seq))
    }

    /// Telescoped form `Σ_k (K − t_{s_k}) (P(no detection in 1..k−1) − P(no detection in 1..k))`.
    fn eval_unchecked(&self, seq: &[usize]) -> f64 {
        let paths = self.num_paths as f64;
        let mut survive = vec![1.0_f64; self.num_paths];
        let mut total = paths;
        let mut f = 0.0;
        for &v in seq {
            let pat = &self.patterns[v];
            let before = total;
            for &g in &pat.paths {
                let caught = survive[g] * pat.detect;
                survive[g] -= caught;
                total -= caught;
            }
            f += (self.penalty - pat.time) * (before - total) / paths;
        }
        f
    }

    /// Probability that none of the patterns in `seq` detects the target.
    pub fn miss_probability(&self, seq: &[usize]) -> f64 {
        let mut survive = vec![1.0_f64; self.num_paths];
        for &v in seq {
            let pat = &self.patterns[v];
            for &g in &pat.paths {
                survive[g] *= 1.0 - pat.detect;
            }
        }
        survive.iter().sum::<f64>() / self.num_paths as f64
    }
}

impl AsRef<SearchTrackInstance> for SearchTrackInstance {
    fn as_ref(&self) -> &SearchTrackInstance {
        self
    }
}

impl SequenceFunction for SearchTrackInstance {
    fn ground_size(&self) -> usize {
        self.patterns.len()
    }

    fn allows_repeats(&self) -> bool {
        self.allows_repeats
    }

    fn value(&self, seq: &[usize]) -> f64 {
        self.eval_unchecked(seq)
    }
}
