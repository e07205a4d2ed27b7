use rand::Rng;

use crate::seqcore::Sequence;

/// Largest number of operations drawn per mutation; the Poisson(1) tail beyond it is below 1e-18.
pub const POISSON_CUTOFF: u32 = 20;

/// Draws `r ~ Poisson(1)` by inversion, truncated at [`POISSON_CUTOFF`].
pub fn poisson_one<R: Rng + ?Sized>(rng: &mut R) -> u32 {
    let u: f64 = rng.gen();
    let mut p = (-1.0f64).exp();
    let mut cdf = p;
    let mut r = 0;
    while u >= cdf && r < POISSON_CUTOFF {
        r += 1;
        p /= r as f64;
        cdf += p;
    }
    r
}

/// One step of a mutation, reported to observers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MutationStep {
    /// Number of operations drawn.
    Count(u32),
    Insert {
        pos: usize,
        item: usize,
    },
    Delete {
        pos: usize,
    },
    /// Deletion on the empty sequence.
    SkippedDelete,
    /// Insertion with every item already used and repeats forbidden.
    SkippedInsert,
}

/// Applies `r ~ Poisson(1)` random insertions or deletions, each chosen with probability ½.
pub fn mutate<R: Rng + ?Sized>(
    s: &Sequence,
    n: usize,
    allows_repeats: bool,
    rng: &mut R,
) -> Sequence {
    mutate_observed(s, n, allows_repeats, rng, |_| {})
}

pub fn mutate_observed<R, O>(
    s: &Sequence,
    n: usize,
    allows_repeats: bool,
    rng: &mut R,
    mut observe: O,
) -> Sequence
where
    R: Rng + ?Sized,
    O: FnMut(MutationStep),
{
    let r = poisson_one(rng);
    observe(MutationStep::Count(r));
    let mut out = s.clone();
    let mut used = if allows_repeats {
        Vec::new()
    } else {
        mark(&out, n)
    };
    for _ in 0..r {
        if rng.gen_bool(0.5) {
            let item = if allows_repeats {
                rng.gen_range(0..n)
            } else {
                let free = n - out.len();
                if free == 0 {
                    observe(MutationStep::SkippedInsert);
                    continue;
                }
                let pick = rng.gen_range(0..free);
                let item = (0..n).filter(|&v| !used[v]).nth(pick).expect("free item");
                used[item] = true;
                item
            };
            let pos = rng.gen_range(0..=out.len());
            out.insert(pos, item);
            observe(MutationStep::Insert { pos, item });
        } else if out.is_empty() {
            observe(MutationStep::SkippedDelete);
        } else {
            let pos = rng.gen_range(0..out.len());
            let item = out.remove(pos);
            if !allows_repeats {
                used[item] = false;
            }
            observe(MutationStep::Delete { pos });
        }
    }
    out
}

fn mark(s: &[usize], n: usize) -> Vec<bool> {
    let mut used = vec![false; n];
    for &v in s {
        used[v] = true;
    }
    used
}
