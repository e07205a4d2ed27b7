//! DAG-structured preference objectives.
//!
//! A sequence `s` induces the edge set `E(s) = {(s_i, s_j) ∈ E : i ≤ j}` (self-loops included) and
//! is scored by a monotone submodular set function `h` on edges.

mod movielens;

pub use movielens::{load_movielens, load_movielens_path, MovielensData, MovielensFilter};

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::io::{BufRead, Write};
use std::path::Path;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::seqcore::{first_repeat, Sequence, SequenceFunction};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub weight: f64,
}

const NO_EDGE: u32 = u32::MAX;

/// Weighted DAG with self-loops and a fixed topological order.
#[derive(Clone, Debug)]
pub struct PreferenceDag {
    n: usize,
    edges: Vec<Edge>,
    /// Dense `n × n` lookup into `edges`.
    index: Vec<u32>,
    weight: Vec<f64>,
    order: Vec<usize>,
    rank: Vec<usize>,
}

impl PartialEq for PreferenceDag {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.edges == other.edges
    }
}

impl PreferenceDag {
    /// Builds the graph and its topological order (Kahn's algorithm, smallest ready vertex first).
    pub fn new(n: usize, edges: Vec<Edge>) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("graph needs at least one vertex"));
        }
        if edges.len() >= NO_EDGE as usize {
            return Err(Error::invalid("too many edges"));
        }
        let mut index = vec![NO_EDGE; n * n];
        let mut weight = vec![0.0; n * n];
        let mut indeg = vec![0usize; n];
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (id, e) in edges.iter().enumerate() {
            if e.src >= n || e.dst >= n {
                return Err(Error::invalid(format!(
                    "edge ({}, {}) leaves the graph",
                    e.src, e.dst
                )));
            }
            if !(0.0..=1.0).contains(&e.weight) {
                return Err(Error::invalid(format!(
                    "edge ({}, {}) has weight {} outside [0, 1]",
                    e.src, e.dst, e.weight
                )));
            }
            let slot = e.src * n + e.dst;
            if index[slot] != NO_EDGE {
                return Err(Error::invalid(format!(
                    "duplicate edge ({}, {})",
                    e.src, e.dst
                )));
            }
            index[slot] = id as u32;
            weight[slot] = e.weight;
            if e.src != e.dst {
                indeg[e.dst] += 1;
                out[e.src].push(e.dst);
            }
        }
        let mut ready: BinaryHeap<Reverse<usize>> =
            (0..n).filter(|&v| indeg[v] == 0).map(Reverse).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(Reverse(v)) = ready.pop() {
            order.push(v);
            for &w in &out[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    ready.push(Reverse(w));
                }
            }
        }
        if order.len() < n {
            let vertex = (0..n).find(|&v| indeg[v] > 0).unwrap_or(0);
            return Err(Error::Cyclic { vertex });
        }
        let mut rank = vec![0; n];
        for (r, &v) in order.iter().enumerate() {
            rank[v] = r;
        }
        Ok(PreferenceDag {
            n,
            edges,
            index,
            weight,
            order,
            rank,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn topological_order(&self) -> &[usize] {
        &self.order
    }

    pub fn edge(&self, src: usize, dst: usize) -> Option<&Edge> {
        match self.index[src * self.n + dst] {
            NO_EDGE => None,
            id => Some(&self.edges[id as usize]),
        }
    }

    /// Weight of `(src, dst)`, zero when absent.
    #[inline]
    pub fn weight(&self, src: usize, dst: usize) -> f64 {
        self.weight[src * self.n + dst]
    }

    fn check_seq(&self, s: &[usize]) -> Result<()> {
        if let Some(&item) = s.iter().find(|&&v| v >= self.n) {
            return Err(Error::ItemOutOfRange { item, n: self.n });
        }
        match first_repeat(s) {
            Some(item) => Err(Error::RepeatViolation { item }),
            None => Ok(()),
        }
    }

    /// `E(s)`, sorted by `(src, dst)`.
    pub fn induced_edges(&self, s: &[usize]) -> Result<Vec<(usize, usize)>> {
        self.check_seq(s)?;
        let mut out = Vec::new();
        for (i, &a) in s.iter().enumerate() {
            for &b in &s[i..] {
                if self.index[a * self.n + b] != NO_EDGE {
                    out.push((a, b));
                }
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    /// The items sorted along the topological order; duplicates are dropped.
    pub fn reorder(&self, items: &[usize]) -> Sequence {
        let mut v = items.to_vec();
        v.sort_unstable_by_key(|&x| self.rank[x]);
        v.dedup();
        Sequence::from(v)
    }

    /// Draws a random graph: each `v_i` gets edges to a uniform `min(d, n−i−1)`-subset of the later
    /// vertices with weights in `[0, 1]`, plus a self-loop with weight in `self_loop`.
    pub fn synthetic(n: usize, d: usize, self_loop: (f64, f64), seed: u64) -> Result<Self> {
        if n == 0 || d == 0 {
            return Err(Error::invalid("synthetic graph needs n >= 1 and d >= 1"));
        }
        let (lo, hi) = self_loop;
        if !(0.0 <= lo && lo <= hi && hi <= 1.0) {
            return Err(Error::invalid("self-loop weight range must lie in [0, 1]"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut edges = Vec::new();
        for i in 0..n {
            edges.push(Edge {
                src: i,
                dst: i,
                weight: lo + (hi - lo) * rng.gen::<f64>(),
            });
            let later = n - i - 1;
            let mut picks = index::sample(&mut rng, later, d.min(later)).into_vec();
            picks.sort_unstable();
            for p in picks {
                edges.push(Edge {
                    src: i,
                    dst: i + 1 + p,
                    weight: rng.gen::<f64>(),
                });
            }
        }
        PreferenceDag::new(n, edges)
    }

    /// Writes `n m` followed by one `src dst weight` line per edge.
    pub fn write_to<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{} {}", self.n, self.edges.len())?;
        for e in &self.edges {
            writeln!(w, "{} {} {}", e.src, e.dst, format_weight(e.weight))?;
        }
        w.flush()
    }

    pub fn read_from<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines().enumerate();
        let header = loop {
            match lines.next() {
                Some((i, line)) => {
                    let line = line?;
                    if !line.trim().is_empty() {
                        break (i + 1, line);
                    }
                }
                None => {
                    return Err(Error::MalformedRecord {
                        line: 0,
                        reason: "empty file".into(),
                    })
                }
            }
        };
        let mut head = header.1.split_whitespace().map(str::parse::<usize>);
        let (n, m) = match (head.next(), head.next(), head.next()) {
            (Some(Ok(n)), Some(Ok(m)), None) => (n, m),
            _ => {
                return Err(Error::MalformedRecord {
                    line: header.0,
                    reason: "expected header `n m`".into(),
                })
            }
        };
        let mut edges = Vec::with_capacity(m);
        for (i, line) in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let bad = |reason: &str| Error::MalformedRecord {
                line: i + 1,
                reason: reason.into(),
            };
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 3 {
                return Err(bad("expected `src dst weight`"));
            }
            let src = f[0].parse().map_err(|_| bad("bad source vertex"))?;
            let dst = f[1].parse().map_err(|_| bad("bad target vertex"))?;
            let weight = f[2].parse().map_err(|_| bad("bad weight"))?;
            edges.push(Edge { src, dst, weight });
        }
        if edges.len() != m {
            return Err(Error::MalformedRecord {
                line: header.0,
                reason: format!("header announces {m} edges, found {}", edges.len()),
            });
        }
        PreferenceDag::new(n, edges)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_to(std::io::BufWriter::new(file))
            .map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        PreferenceDag::read_from(std::io::BufReader::new(file))
    }
}

/// Plain decimal with 17 significant digits, enough to round-trip any `f64` in `[0, 1]`.
fn format_weight(w: f64) -> String {
    if w == 0.0 {
        return "0".into();
    }
    let digits = (16 - w.abs().log10().floor() as i64).max(0) as usize;
    format!("{w:.digits$}")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HKind {
    /// `h(X) = Σ w`.
    Modular,
    /// `h(X) = Σ_j (1 − Π_{(i,j) ∈ X} (1 − w_ij))`, a noisy-or per target vertex.
    Coverage,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EvalMode {
    /// `f(s) = h(E(s))`.
    Raw,
    /// `f(s) = h(E(Reorder(V(s))))`.
    Reordered,
}

#[derive(Clone, Debug)]
pub struct DagObjective {
    dag: PreferenceDag,
    kind: HKind,
    mode: EvalMode,
}

impl AsRef<DagObjective> for DagObjective {
    fn as_ref(&self) -> &DagObjective {
        self
    }
}

impl DagObjective {
    pub fn new(dag: PreferenceDag, kind: HKind, mode: EvalMode) -> Self {
        DagObjective { dag, kind, mode }
    }

    pub fn dag(&self) -> &PreferenceDag {
        &self.dag
    }

    pub fn kind(&self) -> HKind {
        self.kind
    }

    pub fn mode(&self) -> EvalMode {
        self.mode
    }

    pub fn with_mode(&self, mode: EvalMode) -> Self {
        DagObjective {
            dag: self.dag.clone(),
            kind: self.kind,
            mode,
        }
    }

    /// `h` on an explicit edge set. Edges must belong to the graph; duplicates are ignored.
    pub fn h_value(&self, edges: &[(usize, usize)]) -> Result<f64> {
        let mut set = edges.to_vec();
        set.sort_unstable();
        set.dedup();
        let n = self.dag.n;
        for &(a, b) in &set {
            if a >= n || b >= n || self.dag.edge(a, b).is_none() {
                return Err(Error::invalid(format!(
                    "({a}, {b}) is not an edge of the graph"
                )));
            }
        }
        Ok(match self.kind {
            HKind::Modular => set.iter().map(|&(a, b)| self.dag.weight(a, b)).sum(),
            HKind::Coverage => {
                let mut miss = vec![1.0_f64; n];
                for &(a, b) in &set {
                    miss[b] *= 1.0 - self.dag.weight(a, b);
                }
                miss.iter().map(|m| 1.0 - m).sum()
            }
        })
    }

    /// Evaluates `s` in the given mode.
    pub fn eval_dag(&self, s: &[usize], mode: EvalMode) -> Result<f64> {
        self.dag.check_seq(s)?;
        Ok(match mode {
            EvalMode::Raw => self.eval_raw(s),
            EvalMode::Reordered => self.eval_raw(&self.dag.reorder(s)),
        })
    }

    /// `h(E(s))` without materialising the edge set; `s` must be repeat-free.
    fn eval_raw(&self, s: &[usize]) -> f64 {
        let dag = &self.dag;
        let mut total = 0.0;
        match self.kind {
            HKind::Modular => {
                for (i, &a) in s.iter().enumerate() {
                    for &b in &s[i..] {
                        total += dag.weight(a, b);
                    }
                }
            }
            HKind::Coverage => {
                for (j, &b) in s.iter().enumerate() {
                    let mut miss = 1.0;
                    for &a in &s[..=j] {
                        miss *= 1.0 - dag.weight(a, b);
                    }
                    total += 1.0 - miss;
                }
            }
        }
        total
    }
}

impl SequenceFunction for DagObjective {
    fn ground_size(&self) -> usize {
        self.dag.n
    }

    fn allows_repeats(&self) -> bool {
        false
    }

    fn value(&self, seq: &[usize]) -> f64 {
        match self.mode {
            EvalMode::Raw => self.eval_raw(seq),
            EvalMode::Reordered => self.eval_raw(&self.dag.reorder(seq)),
        }
    }

    fn canonical(&self, seq: &[usize]) -> Option<Sequence> {
        match self.mode {
            EvalMode::Raw => None,
            EvalMode::Reordered => Some(self.dag.reorder(seq)),
        }
    }
}
