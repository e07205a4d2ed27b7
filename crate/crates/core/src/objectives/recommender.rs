use super::{check_items, check_unit};
use crate::seqcore::SequenceFunction;
use crate::{Error, Result};

/// Sequential recommendation: a user picks a topic uniformly at random and walks down the list,
/// accepting movie `s_i` with probability `p[s_i][topic]`; the reward is the accepted movie's
/// satisfaction `g`.
#[derive(Clone, Debug, PartialEq)]
pub struct RecommenderInstance {
    topics: usize,
    satisfaction: Vec<f64>,
    /// `coverage[movie * topics + topic]`.
    coverage: Vec<f64>,
    allows_repeats: bool,
}

impl RecommenderInstance {
    pub fn new(
        topics: usize,
        satisfaction: Vec<f64>,
        coverage: Vec<f64>,
        allows_repeats: bool,
    ) -> Result<Self> {
        if topics == 0 || satisfaction.is_empty() {
            return Err(Error::invalid("recommender needs topics and movies"));
        }
        if coverage.len() != topics * satisfaction.len() {
            return Err(Error::invalid("coverage matrix has the wrong size"));
        }
        check_unit("g", &satisfaction, true)?;
        check_unit("p", &coverage, true)?;
        Ok(RecommenderInstance {
            topics,
            satisfaction,
            coverage,
            allows_repeats,
        })
    }

    pub fn topics(&self) -> usize {
        self.topics
    }

    pub fn satisfaction(&self) -> &[f64] {
        &self.satisfaction
    }

    pub fn coverage(&self, movie: usize, topic: usize) -> f64 {
        self.coverage[movie * self.topics + topic]
    }

    pub fn coverage_matrix(&self) -> &[f64] {
        &self.coverage
    }

    pub fn with_repeats(mut self, allows_repeats: bool) -> Self {
        self.allows_repeats = allows_repeats;
        self
    }

    pub fn evaluate(&self, seq: &[usize]) -> Result<f64> {
        check_items(seq, self.satisfaction.len())?;
        if !self.allows_repeats {
            if let Some(item) = crate::seqcore::first_repeat(seq) {
                return Err(Error::RepeatViolation { item });
            }
        }
        Ok(self.eval_unchecked(seq))
    }

    fn eval_unchecked(&self, seq: &[usize]) -> f64 {
        let t = self.topics;
        let mut unpicked = vec![1.0_f64; t];
        let mut total = 0.0;
        for &v in seq {
            let g = self.satisfaction[v];
            let row = &self.coverage[v * t..][..t];
            for (q, p) in unpicked.iter_mut().zip(row) {
                total += g * *q * p;
                *q *= 1.0 - p;
            }
        }
        total / t as f64
    }
}

impl SequenceFunction for RecommenderInstance {
    fn ground_size(&self) -> usize {
        self.satisfaction.len()
    }

    fn allows_repeats(&self) -> bool {
        self.allows_repeats
    }

    fn value(&self, seq: &[usize]) -> f64 {
        self.eval_unchecked(seq)
    }
}
