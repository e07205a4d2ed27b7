//! Objective functions for the four non-DAG applications.
//!
//! | instance | class | repeats by default |
//! |---|---|---|
//! | [`TaskInstance`] | prefix monotone submodular | yes |
//! | [`InfoGainInstance`] | prefix monotone submodular | yes |
//! | [`SearchTrackInstance`] | weakly monotone, strongly submodular | no |
//! | [`RecommenderInstance`] | weakly monotone, strongly submodular | no |

mod infogain;
mod recommender;
mod searchtrack;
mod tasks;

pub use infogain::InfoGainInstance;
pub use recommender::RecommenderInstance;
pub use searchtrack::{Pattern, SearchTrackInstance};
pub use tasks::TaskInstance;

use crate::{Error, Result};

pub(crate) fn check_items(seq: &[usize], n: usize) -> Result<()> {
    match seq.iter().find(|&&v| v >= n) {
        Some(&item) => Err(Error::ItemOutOfRange { item, n }),
        None => Ok(()),
    }
}

pub(crate) fn check_unit(name: &str, values: &[f64], hi_inclusive: bool) -> Result<()> {
    for (i, &v) in values.iter().enumerate() {
        let ok = v >= 0.0 && if hi_inclusive { v <= 1.0 } else { v < 1.0 };
        if !ok {
            return Err(Error::invalid(format!(
                "{name}[{i}] = {v} is outside the unit interval"
            )));
        }
    }
    Ok(())
}
