use super::check_items;
use crate::seqcore::SequenceFunction;
use crate::{Error, Result};

/// Information gain of a sequence of diagonal 2×2 measurement matrices `Diag(√a, √(1−a))` under a
/// Gaussian prior with diagonal covariance `P0`. Stage `i` observes with noise variance `σ_i²`.
///
/// Everything is diagonal, so `log det` is a sum of logs:
/// `f(s) = ½ Σ_q ln(1 + P0_q · Σ_i e_q(s_i) / σ_i²)` with `e(a) = (a, 1 − a)`, which equals
/// `½ (log det P0 − log det P_l)` and is exactly zero on `∅`.
#[derive(Clone, Debug, PartialEq)]
pub struct InfoGainInstance {
    weights: Vec<f64>,
    prior: [f64; 2],
    sigma: Vec<f64>,
}

impl InfoGainInstance {
    /// `weights[v]` is the `a` of candidate `v`, `prior` the diagonal of `P0` and `sigma[i]` the
    /// noise standard deviation at zero-based stage `i`.
    pub fn new(weights: Vec<f64>, prior: [f64; 2], sigma: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::invalid(
                "info-gain instance needs at least one candidate",
            ));
        }
        super::check_unit("a", &weights, true)?;
        if prior.iter().any(|&p| !(p > 0.0 && p.is_finite())) {
            return Err(Error::invalid("prior covariance entries must be positive"));
        }
        if sigma.iter().any(|&s| !(s > 0.0 && s.is_finite())) {
            return Err(Error::invalid("noise standard deviations must be positive"));
        }
        Ok(InfoGainInstance {
            weights,
            prior,
            sigma,
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn prior(&self) -> [f64; 2] {
        self.prior
    }

    pub fn sigma(&self) -> &[f64] {
        &self.sigma
    }

    /// Diagonal of `AᵀA` for candidate `v`.
    pub fn entries(&self, v: usize) -> [f64; 2] {
        let a = self.weights[v];
        [a, 1.0 - a]
    }

    pub fn evaluate(&self, seq: &[usize]) -> Result<f64> {
        if seq.len() > self.sigma.len() {
            return Err(Error::StageOutOfRange {
                len: seq.len(),
                max: self.sigma.len(),
            });
        }
        check_items(seq, self.weights.len())?;
        Ok(self.eval_unchecked(seq))
    }

    fn eval_unchecked(&self, seq: &[usize]) -> f64 {
        let mut acc = [0.0_f64; 2];
        for (i, &v) in seq.iter().enumerate() {
            let var = self.sigma[i] * self.sigma[i];
            let e = self.entries(v);
            acc[0] += e[0] / var;
            acc[1] += e[1] / var;
        }
        0.5 * ((self.prior[0] * acc[0]).ln_1p() + (self.prior[1] * acc[1]).ln_1p())
    }
}

impl SequenceFunction for InfoGainInstance {
    fn ground_size(&self) -> usize {
        self.weights.len()
    }

    fn allows_repeats(&self) -> bool {
        true
    }

    fn max_len(&self) -> Option<usize> {
        Some(self.sigma.len())
    }

    fn value(&self, seq: &[usize]) -> f64 {
        assert!(
            seq.len() <= self.sigma.len(),
            "sequence longer than the defined stages"
        );
        self.eval_unchecked(seq)
    }
}
