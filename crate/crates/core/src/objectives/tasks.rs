use super::{check_items, check_unit};
use crate::seqcore::SequenceFunction;
use crate::{Error, Result};

/// Accomplishing tasks: performing action `s_j` at stage `j` completes task `i` with probability
/// `p[i][j][s_j]`; the objective is the expected fraction of completed tasks.
#[derive(Clone, Debug, PartialEq)]
pub struct TaskInstance {
    tasks: usize,
    actions: usize,
    stages: usize,
    /// Stored as `[stage][action][task]` so one stage/action pair is a contiguous row.
    probs: Vec<f64>,
}

impl TaskInstance {
    /// `probs` is indexed `(task, stage, action)` in row-major order.
    pub fn new(tasks: usize, actions: usize, stages: usize, probs: &[f64]) -> Result<Self> {
        if tasks == 0 || actions == 0 {
            return Err(Error::invalid(
                "task instance needs at least one task and one action",
            ));
        }
        if probs.len() != tasks * stages * actions {
            return Err(Error::invalid(format!(
                "expected {} probabilities, got {}",
                tasks * stages * actions,
                probs.len()
            )));
        }
        check_unit("p", probs, true)?;
        let mut stored = vec![0.0; probs.len()];
        for i in 0..tasks {
            for j in 0..stages {
                for a in 0..actions {
                    stored[(j * actions + a) * tasks + i] = probs[(i * stages + j) * actions + a];
                }
            }
        }
        Ok(TaskInstance {
            tasks,
            actions,
            stages,
            probs: stored,
        })
    }

    pub fn tasks(&self) -> usize {
        self.tasks
    }

    pub fn actions(&self) -> usize {
        self.actions
    }

    /// Number of stages with defined probabilities (`L`).
    pub fn stages(&self) -> usize {
        self.stages
    }

    /// Probability that `action` at zero-based `stage` completes `task`.
    pub fn prob(&self, task: usize, stage: usize, action: usize) -> f64 {
        self.probs[(stage * self.actions + action) * self.tasks + task]
    }

    /// Probabilities in `(task, stage, action)` row-major order, as accepted by [`Self::new`].
    pub fn probs_row_major(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.probs.len());
        for i in 0..self.tasks {
            for j in 0..self.stages {
                for a in 0..self.actions {
                    out.push(self.prob(i, j, a));
                }
            }
        }
        out
    }

    /// `(1/m) Σ_i (1 − Π_j (1 − p[i][j][s_j]))`.
    pub fn evaluate(&self, seq: &[usize]) -> Result<f64> {
        if seq.len() > self.stages {
            return Err(Error::StageOutOfRange {
                len: seq.len(),
                max: self.stages,
            });
        }
        check_items(seq, self.actions)?;
        Ok(self.eval_unchecked(seq))
    }

    fn eval_unchecked(&self, seq: &[usize]) -> f64 {
        if seq.is_empty() {
            return 0.0;
        }
        let m = self.tasks;
        let mut miss = vec![1.0_f64; m];
        for (j, &a) in seq.iter().enumerate() {
            let row = &self.probs[(j * self.actions + a) * m..][..m];
            for (q, p) in miss.iter_mut().zip(row) {
                *q *= 1.0 - p;
            }
        }
        miss.iter().map(|q| 1.0 - q).sum::<f64>() / m as f64
    }
}

impl SequenceFunction for TaskInstance {
    fn ground_size(&self) -> usize {
        self.actions
    }

    fn allows_repeats(&self) -> bool {
        true
    }

    fn max_len(&self) -> Option<usize> {
        Some(self.stages)
    }

    fn value(&self, seq: &[usize]) -> f64 {
        assert!(
            seq.len() <= self.stages,
            "sequence longer than the {} defined stages",
            self.stages
        );
        self.eval_unchecked(seq)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_evaluated_two_stage_example() {
        // m = 1, n = 1, p at stage 1 = 0.1, stage 2 = 0.2.
        let inst = TaskInstance::new(1, 1, 2, &[0.1, 0.2]).unwrap();
        assert_eq!(inst.evaluate(&[]).unwrap(), 0.0);
        let v = inst.evaluate(&[0, 0]).unwrap();
        assert!((v - 0.28).abs() < 1e-12, "{v}");
    }

    #[test]
    fn stage_out_of_range() {
        let inst = TaskInstance::new(1, 1, 2, &[0.1, 0.2]).unwrap();
        assert!(matches!(
            inst.evaluate(&[0, 0, 0]),
            Err(Error::StageOutOfRange { len: 3, max: 2 })
        ));
        assert!(matches!(
            inst.evaluate(&[1]),
            Err(Error::ItemOutOfRange { .. })
        ));
    }

    #[test]
    fn layout_round_trips() {
        let probs: Vec<f64> = (0..2 * 3 * 4).map(|i| i as f64 / 100.0).collect();
        let inst = TaskInstance::new(2, 4, 3, &probs).unwrap();
        assert_eq!(inst.probs_row_major(), probs);
        assert_eq!(inst.prob(1, 2, 3), probs[(3 + 2) * 4 + 3]);
    }

    #[test]
    fn averages_over_tasks() {
        // Two tasks, one action, one stage: p = 0.5 and 0.1.
        let inst = TaskInstance::new(2, 1, 1, &[0.5, 0.1]).unwrap();
        assert!((inst.evaluate(&[0]).unwrap() - 0.3).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_probabilities() {
        assert!(TaskInstance::new(1, 1, 1, &[1.5]).is_err());
        assert!(TaskInstance::new(1, 1, 2, &[0.5]).is_err());
    }
}
