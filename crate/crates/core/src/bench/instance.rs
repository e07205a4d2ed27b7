use std::collections::HashMap;
use std::io::{BufRead, Write};
use std::path::Path;

use crate::dagmodel::{DagObjective, EvalMode, HKind, PreferenceDag};
use crate::objectives::{
    InfoGainInstance, Pattern, RecommenderInstance, SearchTrackInstance, TaskInstance,
};
use crate::seqcore::SequenceFunction;
use crate::{Error, Result};

/// Any instance the benchmark can generate, with a line-oriented text form.
///
/// Each line is `key value…`; `#` starts a comment line. Floats are written in shortest
/// round-trip form so a reloaded instance evaluates bit-identically. Search-and-tracking files
/// carry one `pattern <time> <detect> <paths…>` line per pattern; DAG files end with `graph`
/// followed by the graph in its own edge-list format.
#[derive(Clone, Debug)]
pub enum Instance {
    Tasks(TaskInstance),
    InfoGain(InfoGainInstance),
    SearchTrack(SearchTrackInstance),
    Recommender(RecommenderInstance),
    Dag(DagObjective),
}

fn join<T: std::fmt::Debug>(xs: &[T]) -> String {
    xs.iter()
        .map(|x| format!("{x:?}"))
        .collect::<Vec<_>>()
        .join(" ")
}

impl Instance {
    pub fn family(&self) -> &'static str {
        match self {
            Instance::Tasks(_) => "tasks",
            Instance::InfoGain(_) => "infogain",
            Instance::SearchTrack(_) => "searchtrack",
            Instance::Recommender(_) => "recommender",
            Instance::Dag(_) => "dag",
        }
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "family {}", self.family())?;
        match self {
            Instance::Tasks(t) => {
                writeln!(w, "tasks {}", t.tasks())?;
                writeln!(w, "actions {}", t.actions())?;
                writeln!(w, "stages {}", t.stages())?;
                writeln!(
                    w,
                    "# probabilities in (task, stage, action) row-major order"
                )?;
                writeln!(w, "p {}", join(&t.probs_row_major()))?;
            }
            Instance::InfoGain(g) => {
                writeln!(w, "a {}", join(g.weights()))?;
                writeln!(w, "prior {}", join(&g.prior()))?;
                writeln!(w, "sigma {}", join(g.sigma()))?;
            }
            Instance::SearchTrack(s) => {
                writeln!(w, "paths {}", s.num_paths())?;
                writeln!(w, "penalty {:?}", s.penalty())?;
                writeln!(w, "repeats {}", s.allows_repeats())?;
                writeln!(
                    w,
                    "# path subsets drawn with inclusion probability 0.5 per path"
                )?;
                for p in s.patterns() {
                    let paths = join(&p.paths);
                    writeln!(w, "pattern {:?} {:?} {paths}", p.time, p.detect)?;
                }
            }
            Instance::Recommender(r) => {
                writeln!(w, "topics {}", r.topics())?;
                writeln!(w, "repeats {}", r.allows_repeats())?;
                writeln!(w, "g {}", join(r.satisfaction()))?;
                writeln!(w, "# coverage in (movie, topic) row-major order")?;
                writeln!(w, "p {}", join(r.coverage_matrix()))?;
            }
            Instance::Dag(d) => {
                let h = match d.kind() {
                    HKind::Modular => "modular",
                    HKind::Coverage => "coverage",
                };
                writeln!(w, "h {h}")?;
                writeln!(w, "graph")?;
                d.dag().write_to(&mut w)?;
            }
        }
        w.flush()
    }

    pub fn read_from<R: BufRead>(r: R) -> Result<Self> {
        let mut fields: HashMap<String, (usize, String)> = HashMap::new();
        let mut patterns: Vec<(usize, String)> = Vec::new();
        let mut graph = String::new();
        let mut in_graph = false;
        for (i, line) in r.lines().enumerate() {
            let line = line?;
            if in_graph {
                graph.push_str(&line);
                graph.push('\n');
                continue;
            }
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (key, rest) = trimmed.split_once(' ').unwrap_or((trimmed, ""));
            match key {
                "graph" => in_graph = true,
                "pattern" => patterns.push((i + 1, rest.to_string())),
                _ => {
                    if fields
                        .insert(key.to_string(), (i + 1, rest.to_string()))
                        .is_some()
                    {
                        return Err(Error::MalformedRecord {
                            line: i + 1,
                            reason: format!("duplicate field `{key}`"),
                        });
                    }
                }
            }
        }
        let get = |key: &str| -> Result<&(usize, String)> {
            fields.get(key).ok_or_else(|| Error::MalformedRecord {
                line: 0,
                reason: format!("missing field `{key}`"),
            })
        };
        fn parse_list<T: std::str::FromStr>(entry: &(usize, String)) -> Result<Vec<T>> {
            entry
                .1
                .split_whitespace()
                .map(|x| {
                    x.parse().map_err(|_| Error::MalformedRecord {
                        line: entry.0,
                        reason: format!("cannot parse `{x}`"),
                    })
                })
                .collect()
        }
        fn parse_one<T: std::str::FromStr>(entry: &(usize, String)) -> Result<T> {
            let mut v = parse_list::<T>(entry)?;
            if v.len() != 1 {
                return Err(Error::MalformedRecord {
                    line: entry.0,
                    reason: "expected one value".into(),
                });
            }
            Ok(v.remove(0))
        }

        match get("family")?.1.as_str() {
            "tasks" => {
                let probs: Vec<f64> = parse_list(get("p")?)?;
                Ok(Instance::Tasks(TaskInstance::new(
                    parse_one(get("tasks")?)?,
                    parse_one(get("actions")?)?,
                    parse_one(get("stages")?)?,
                    &probs,
                )?))
            }
            "infogain" => {
                let prior: Vec<f64> = parse_list(get("prior")?)?;
                if prior.len() != 2 {
                    return Err(Error::MalformedRecord {
                        line: get("prior")?.0,
                        reason: "prior needs two entries".into(),
                    });
                }
                Ok(Instance::InfoGain(InfoGainInstance::new(
                    parse_list(get("a")?)?,
                    [prior[0], prior[1]],
                    parse_list(get("sigma")?)?,
                )?))
            }
            "searchtrack" => {
                let mut pats = Vec::with_capacity(patterns.len());
                for (line, rest) in &patterns {
                    let nums: Vec<&str> = rest.split_whitespace().collect();
                    let bad = || Error::MalformedRecord {
                        line: *line,
                        reason: "bad pattern".into(),
                    };
                    if nums.len() < 2 {
                        return Err(bad());
                    }
                    let time = nums[0].parse().map_err(|_| bad())?;
                    let detect = nums[1].parse().map_err(|_| bad())?;
                    let paths = nums[2..]
                        .iter()
                        .map(|x| x.parse())
                        .collect::<Result<_, _>>()
                        .map_err(|_| bad())?;
                    pats.push(Pattern {
                        paths,
                        time,
                        detect,
                    });
                }
                Ok(Instance::SearchTrack(SearchTrackInstance::new(
                    parse_one(get("paths")?)?,
                    pats,
                    parse_one(get("penalty")?)?,
                    parse_one(get("repeats")?)?,
                )?))
            }
            "recommender" => Ok(Instance::Recommender(RecommenderInstance::new(
                parse_one(get("topics")?)?,
                parse_list(get("g")?)?,
                parse_list(get("p")?)?,
                parse_one(get("repeats")?)?,
            )?)),
            "dag" => {
                let kind = match get("h")?.1.as_str() {
                    "modular" => HKind::Modular,
                    "coverage" => HKind::Coverage,
                    other => {
                        return Err(Error::MalformedRecord {
                            line: get("h")?.0,
                            reason: format!("unknown h `{other}`"),
                        })
                    }
                };
                let dag = PreferenceDag::read_from(graph.as_bytes())?;
                Ok(Instance::Dag(DagObjective::new(dag, kind, EvalMode::Raw)))
            }
            other => Err(Error::MalformedRecord {
                line: get("family")?.0,
                reason: format!("unknown family `{other}`"),
            }),
        }
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_to(std::io::BufWriter::new(file))
            .map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Instance::read_from(std::io::BufReader::new(file))
    }

    /// Evaluates `seq` (raw mode for DAG objectives).
    pub fn evaluate(&self, seq: &[usize]) -> Result<f64> {
        match self {
            Instance::Tasks(t) => t.evaluate(seq),
            Instance::InfoGain(g) => g.evaluate(seq),
            Instance::SearchTrack(s) => s.evaluate(seq),
            Instance::Recommender(r) => r.evaluate(seq),
            Instance::Dag(d) => d.eval_dag(seq, EvalMode::Raw),
        }
    }
}
