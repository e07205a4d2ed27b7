use crate::dagmodel::DagObjective;
use crate::seqcore::{Oracle, Sequence, SequenceFunction};
use crate::{Error, Result};

fn check_k(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    Ok(())
}

/// Appends the item with the largest `f(s ⊕ v)` `k` times; ties go to the lowest item. Stops
/// early when repeats are forbidden and every item is used.
pub fn greedy<F: SequenceFunction>(oracle: &Oracle<F>, k: usize) -> Result<Sequence> {
    check_k(k)?;
    oracle.ensure_len(k)?;
    let n = oracle.n();
    let repeats = oracle.allows_repeats();
    let mut used = vec![false; n];
    let mut s: Vec<usize> = Vec::with_capacity(k);
    for _ in 0..k {
        let mut best: Option<(f64, usize)> = None;
        for v in 0..n {
            if !repeats && used[v] {
                continue;
            }
            s.push(v);
            let f = oracle.evaluate(&s);
            s.pop();
            if best.map_or(true, |(b, _)| f > b) {
                best = Some((f, v));
            }
        }
        let Some((_, v)) = best else { break };
        used[v] = true;
        s.push(v);
    }
    Ok(Sequence::from(s))
}

/// Inserts the best item at the best position `k` times; ties go to the lowest position, then the
/// lowest item.
pub fn generalized_greedy<F: SequenceFunction>(oracle: &Oracle<F>, k: usize) -> Result<Sequence> {
    check_k(k)?;
    oracle.ensure_len(k)?;
    let n = oracle.n();
    let repeats = oracle.allows_repeats();
    let mut used = vec![false; n];
    let mut s: Vec<usize> = Vec::with_capacity(k);
    for _ in 0..k {
        let mut best: Option<(f64, usize, usize)> = None;
        for pos in 0..=s.len() {
            for v in 0..n {
                if !repeats && used[v] {
                    continue;
                }
                s.insert(pos, v);
                let f = oracle.evaluate(&s);
                s.remove(pos);
                if best.map_or(true, |(b, _, _)| f > b) {
                    best = Some((f, pos, v));
                }
            }
        }
        let Some((_, pos, v)) = best else { break };
        used[v] = true;
        s.insert(pos, v);
    }
    Ok(Sequence::from(s))
}

/// Edge-greedy for DAG objectives: repeatedly adds the edge whose endpoints, together with the
/// items already covered, give the best reordered value while covering at most `k` items. Ties go
/// to the smallest `(src, dst)`. Returns the reordered covered items.
pub fn omega<F>(oracle: &Oracle<F>, k: usize) -> Result<Sequence>
where
    F: SequenceFunction + AsRef<DagObjective>,
{
    check_k(k)?;
    let dag = oracle.func().as_ref().dag();
    let mut order: Vec<(usize, usize)> = dag.edges().iter().map(|e| (e.src, e.dst)).collect();
    order.sort_unstable();
    let mut taken = vec![false; order.len()];
    let mut covered = vec![false; dag.n()];
    let mut items: Vec<usize> = Vec::new();
    loop {
        let mut best: Option<(f64, usize)> = None;
        for (id, &(a, b)) in order.iter().enumerate() {
            if taken[id] {
                continue;
            }
            let mut cand = items.clone();
            for v in [a, b] {
                if !covered[v] && !cand.contains(&v) {
                    cand.push(v);
                }
            }
            if cand.len() > k {
                continue;
            }
            let f = oracle.evaluate(&dag.reorder(&cand));
            if best.map_or(true, |(bf, _)| f > bf) {
                best = Some((f, id));
            }
        }
        let Some((_, id)) = best else { break };
        taken[id] = true;
        let (a, b) = order[id];
        for v in [a, b] {
            if !covered[v] {
                covered[v] = true;
                items.push(v);
            }
        }
    }
    Ok(dag.reorder(&items))
}
