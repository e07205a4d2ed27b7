//! Maximizing monotone submodular functions over sequences.
//!
//! The crate is organised around a single abstraction, [`SequenceFunction`], an objective that
//! maps ordered item lists to reals. Around it sit:
//!
//! * [`seqcore`]: sequences, sequence relations, exhaustive property checkers and curvature.
//! * [`objectives`]: accomplishing tasks, information gain, search-and-tracking, recommender.
//! * [`dagmodel`]: DAG-structured preference objectives, `Reorder`, graph construction.
//! * [`algorithms`]: GSEMO, greedy, generalized greedy and OMegA, plus iteration budgets.
//! * [`opt`]: exact optima by enumeration.
//! * [`bench`]: instance generators, the sign test, instance files and the experiment runner.

pub mod algorithms;
pub mod bench;
pub mod dagmodel;
mod error;
pub mod objectives;
pub mod opt;
pub mod seqcore;

pub use error::{Error, Result};
pub use seqcore::{Oracle, Sequence, SequenceFunction};
