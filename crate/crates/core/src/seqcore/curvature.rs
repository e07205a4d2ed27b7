use super::{all_sequences, first_repeat, Oracle, Sequence, SequenceFunction};
use crate::{Error, Result};

/// Curvature of `f` with respect to `s`: the maximum over all `t` with `0 < |t| <= m` of
/// `1 − (f(t⊕s) − f(s)) / f(t)`.
///
/// `s` must be nonempty. When the oracle forbids repeats, probes `t` that share an item with `s`
/// are skipped since `t⊕s` is not a valid sequence.
pub fn curvature<F: SequenceFunction>(oracle: &Oracle<F>, s: &[usize], m: usize) -> Result<f64> {
    if s.is_empty() {
        return Err(Error::invalid("curvature is only defined for nonempty s"));
    }
    if m == 0 {
        return Err(Error::invalid("curvature needs m >= 1"));
    }
    oracle.validate(s)?;
    oracle.ensure_len(m + s.len())?;
    let repeats = oracle.allows_repeats();
    let fs = oracle.evaluate(s);
    let mut best = f64::NEG_INFINITY;
    let mut joined = Vec::with_capacity(m + s.len());
    for t in all_sequences(oracle.n(), m, repeats).into_iter().skip(1) {
        joined.clear();
        joined.extend_from_slice(&t);
        joined.extend_from_slice(s);
        if !repeats && first_repeat(&joined).is_some() {
            continue;
        }
        let ft = oracle.evaluate(&t);
        if ft == 0.0 {
            return Err(Error::DegenerateInstance { t });
        }
        let sigma = 1.0 - (oracle.evaluate(&joined) - fs) / ft;
        if sigma > best {
            best = sigma;
        }
    }
    if best == f64::NEG_INFINITY {
        return Err(Error::invalid(format!(
            "no probe sequence of length <= {m} can precede {}",
            Sequence::from(s)
        )));
    }
    Ok(best)
}
