use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SignTestResult {
    pub wins: u64,
    pub ties: u64,
    pub losses: u64,
    pub p_value: f64,
    pub significant_at_05: bool,
}

/// Two-sided exact sign test: ties are dropped and `p = 2·P(X ≤ min(wins, losses))` with
/// `X ~ Binomial(wins + losses, ½)`, capped at 1.
pub fn sign_test(wins: u64, ties: u64, losses: u64) -> Result<SignTestResult> {
    let n = wins + losses;
    if n == 0 {
        return Err(Error::DegenerateSignTest);
    }
    let lo = wins.min(losses);
    // log C(n, i) − n·ln 2, accumulated term by term and summed with log-sum-exp.
    let ln2 = std::f64::consts::LN_2;
    let mut log_c = 0.0;
    let mut terms = Vec::with_capacity(lo as usize + 1);
    for i in 0..=lo {
        if i > 0 {
            log_c += ((n - i + 1) as f64).ln() - (i as f64).ln();
        }
        terms.push(log_c - n as f64 * ln2);
    }
    let peak = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let tail = peak + terms.iter().map(|t| (t - peak).exp()).sum::<f64>().ln();
    let p_value = (2.0 * tail.exp()).min(1.0);
    Ok(SignTestResult {
        wins,
        ties,
        losses,
        p_value,
        significant_at_05: p_value < 0.05,
    })
}
