use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::{
    derive_seed, gen_dag, gen_infogain, gen_recommender, gen_searchtrack, gen_tasks, sign_test,
    Instance,
};
use crate::algorithms::{
    budget_for, generalized_greedy, greedy, gsemo_observed, omega, Archive, GsemoConfig,
    ProblemClass, RunRecord, Variant,
};
use crate::dagmodel::{load_movielens_path, DagObjective, EvalMode, HKind, MovielensFilter};
use crate::opt::{
    opt_full, opt_subset_reorder, opt_subset_timesort, validate_timesort, TimesortCertificate,
};
use crate::seqcore::{slack, Oracle, Sequence, SequenceFunction};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Tasks,
    InfoGain,
    SearchTrack,
    Recommender,
    DagMod,
    DagSub,
    MovielensMod,
    MovielensSub,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::Tasks,
        Family::InfoGain,
        Family::SearchTrack,
        Family::Recommender,
        Family::DagMod,
        Family::DagSub,
        Family::MovielensMod,
        Family::MovielensSub,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Tasks => "tasks",
            Family::InfoGain => "infogain",
            Family::SearchTrack => "searchtrack",
            Family::Recommender => "recommender",
            Family::DagMod => "dag-mod",
            Family::DagSub => "dag-sub",
            Family::MovielensMod => "movielens-mod",
            Family::MovielensSub => "movielens-sub",
        }
    }

    pub fn class(self) -> ProblemClass {
        match self {
            Family::Tasks | Family::InfoGain => ProblemClass::PrefixMonotone,
            Family::SearchTrack | Family::Recommender => ProblemClass::WeaklyMonotone,
            _ => ProblemClass::Dag,
        }
    }

    pub fn is_dag(self) -> bool {
        self.class() == ProblemClass::Dag
    }

    /// The strongest earlier algorithm for the family, used for win/tie/loss counts.
    pub fn default_baseline(self) -> Algo {
        match self.class() {
            ProblemClass::PrefixMonotone => Algo::Greedy,
            ProblemClass::WeaklyMonotone => Algo::GGreedy,
            ProblemClass::Dag => Algo::Omega,
        }
    }

    fn h_kind(self) -> HKind {
        match self {
            Family::DagSub | Family::MovielensSub => HKind::Coverage,
            _ => HKind::Modular,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown family `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algo {
    Gsemo,
    GsemoK,
    Greedy,
    GGreedy,
    Omega,
}

impl Algo {
    pub const ALL: [Algo; 5] = [
        Algo::Gsemo,
        Algo::GsemoK,
        Algo::Greedy,
        Algo::GGreedy,
        Algo::Omega,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algo::Gsemo => "gsemo",
            Algo::GsemoK => "gsemo_k",
            Algo::Greedy => "greedy",
            Algo::GGreedy => "ggreedy",
            Algo::Omega => "omega",
        }
    }

    fn variant(self) -> Option<Variant> {
        match self {
            Algo::Gsemo => Some(Variant::Standard),
            Algo::GsemoK => Some(Variant::KVariant),
            _ => None,
        }
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algo {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algo::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown algorithm `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OptMode {
    Full,
    Subset,
    Timesort,
    Off,
}

impl FromStr for OptMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(OptMode::Full),
            "subset" => Ok(OptMode::Subset),
            "timesort" => Ok(OptMode::Timesort),
            "off" => Ok(OptMode::Off),
            _ => Err(Error::invalid(format!("unknown OPT mode `{s}`"))),
        }
    }
}

/// One grid point. `param` is the out-degree `d` for synthetic DAGs, the slope `m` for
/// search-and-tracking and the topic count for the recommender; other families ignore it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cell {
    pub n: usize,
    pub k: usize,
    pub param: f64,
}

#[derive(Clone, Debug)]
pub struct ExperimentSpec {
    pub family: Family,
    pub cells: Vec<Cell>,
    pub instances: usize,
    pub algos: Vec<Algo>,
    /// Defaults to [`Family::default_baseline`].
    pub baseline: Option<Algo>,
    pub seed: u64,
    pub opt: OptMode,
    pub opt_guard: u128,
    /// Overrides the GSEMO iteration budget.
    pub iterations: Option<u64>,
    pub num_tasks: usize,
    pub num_paths: usize,
    pub movielens: Option<PathBuf>,
    pub movielens_filter: MovielensFilter,
    /// Checks the archive invariants after every GSEMO iteration.
    pub check_invariants: bool,
    pub trace: bool,
    pub out_dir: Option<PathBuf>,
}

impl ExperimentSpec {
    pub fn new(family: Family) -> Self {
        ExperimentSpec {
            family,
            cells: Vec::new(),
            instances: 1,
            algos: vec![Algo::Gsemo, family.default_baseline()],
            baseline: None,
            seed: 0,
            opt: OptMode::Off,
            opt_guard: crate::opt::DEFAULT_GUARD,
            iterations: None,
            num_tasks: 50,
            num_paths: 40,
            movielens: None,
            movielens_filter: MovielensFilter::default(),
            check_invariants: false,
            trace: false,
            out_dir: None,
        }
    }

    fn baseline(&self) -> Algo {
        self.baseline.unwrap_or(self.family.default_baseline())
    }

    fn validate(&self) -> Result<()> {
        let fam = self.family;
        if self.algos.contains(&Algo::Omega) && !fam.is_dag() {
            return Err(Error::invalid("omega only applies to DAG families"));
        }
        match self.opt {
            OptMode::Subset if !fam.is_dag() => {
                return Err(Error::invalid("subset OPT only applies to DAG families"))
            }
            OptMode::Timesort if fam != Family::SearchTrack => {
                return Err(Error::invalid("timesort OPT only applies to searchtrack"))
            }
            _ => {}
        }
        if matches!(fam, Family::MovielensMod | Family::MovielensSub) && self.movielens.is_none() {
            return Err(Error::invalid("Movielens families need a ratings file"));
        }
        for c in &self.cells {
            if c.k == 0 || (c.n == 0 && !matches!(fam, Family::MovielensMod | Family::MovielensSub))
            {
                return Err(Error::invalid("every cell needs n >= 1 and k >= 1"));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResultRow {
    pub family: Family,
    pub cell: usize,
    pub n: usize,
    pub k: usize,
    pub param: f64,
    pub instance: usize,
    pub instance_seed: u64,
    pub algorithm: Algo,
    pub value: f64,
    pub evals: u64,
    pub opt: Option<f64>,
    pub ratio: Option<f64>,
    pub best: Sequence,
    pub record: Option<RunRecord>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SummaryRow {
    pub family: Family,
    pub n: usize,
    pub k: usize,
    pub param: f64,
    pub algorithm: Algo,
    pub instances: usize,
    pub mean_value: f64,
    pub mean_ratio: Option<f64>,
    pub min_ratio: Option<f64>,
    pub wins: u64,
    pub ties: u64,
    pub losses: u64,
    pub p_value: Option<f64>,
    pub significant: Option<bool>,
}

#[derive(Clone, Debug, Default)]
pub struct ExperimentOutput {
    pub rows: Vec<ResultRow>,
    pub summary: Vec<SummaryRow>,
}

impl ExperimentOutput {
    pub fn rows_for(&self, cell: usize, algo: Algo) -> impl Iterator<Item = &ResultRow> {
        self.rows
            .iter()
            .filter(move |r| r.cell == cell && r.algorithm == algo)
    }
}

/// Runs every `(cell, instance, algorithm)` combination and, when `out_dir` is set, writes
/// `results.csv`, `summary.csv` and (with `trace`) one GSEMO trace per run under `traces/`.
/// On failure the rows gathered so far are still written, together with a `FAILED` manifest.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentOutput> {
    spec.validate()?;
    let mut out = ExperimentOutput::default();
    let result = run_cells(spec, &mut out);
    out.summary = summarize(spec, &out.rows);
    if let Some(dir) = &spec.out_dir {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        write_results(&dir.join("results.csv"), &out.rows)?;
        write_summary(&dir.join("summary.csv"), &out.summary)?;
        if spec.trace {
            write_traces(&dir.join("traces"), &out.rows)?;
        }
        let manifest = dir.join("FAILED");
        match &result {
            Err(e) => {
                fs::write(&manifest, format!("{e}\n")).map_err(|e| Error::io(&manifest, e))?
            }
            Ok(()) if manifest.exists() => {
                fs::remove_file(&manifest).map_err(|e| Error::io(&manifest, e))?
            }
            Ok(()) => {}
        }
    }
    result.map(|()| out)
}

fn run_cells(spec: &ExperimentSpec, out: &mut ExperimentOutput) -> Result<()> {
    let certificate = match spec.opt {
        OptMode::Timesort => Some(validate_timesort(200, 0x7135)?),
        _ => None,
    };
    let movielens = match (&spec.movielens, spec.family) {
        (Some(path), Family::MovielensMod | Family::MovielensSub) => {
            Some(load_movielens_path(path, &spec.movielens_filter)?.dag)
        }
        _ => None,
    };
    for (ci, cell) in spec.cells.iter().enumerate() {
        for i in 0..spec.instances {
            let seed = derive_seed(spec.seed, ci as u64, i as u64);
            let inst = build_instance(spec, cell, seed, movielens.as_ref())?;
            let ctx = RunContext {
                spec,
                cell,
                cell_index: ci,
                instance: i,
                seed,
            };
            let rows = match &inst {
                Instance::Tasks(t) => ctx.run_plain(t, certificate.as_ref())?,
                Instance::InfoGain(t) => ctx.run_plain(t, certificate.as_ref())?,
                Instance::SearchTrack(t) => ctx.run_plain(t, certificate.as_ref())?,
                Instance::Recommender(t) => ctx.run_plain(t, certificate.as_ref())?,
                Instance::Dag(d) => ctx.run_dag(d)?,
            };
            out.rows.extend(rows);
        }
    }
    Ok(())
}

fn build_instance(
    spec: &ExperimentSpec,
    cell: &Cell,
    seed: u64,
    movielens: Option<&crate::dagmodel::PreferenceDag>,
) -> Result<Instance> {
    let param_usize = || -> Result<usize> {
        if cell.param >= 1.0 && cell.param.fract() == 0.0 {
            Ok(cell.param as usize)
        } else {
            Err(Error::invalid(format!(
                "{} needs a positive integer parameter",
                spec.family
            )))
        }
    };
    Ok(match spec.family {
        Family::Tasks => Instance::Tasks(gen_tasks(cell.n, cell.k, spec.num_tasks, seed)?),
        Family::InfoGain => Instance::InfoGain(gen_infogain(cell.n, cell.k, seed)?),
        Family::SearchTrack => {
            Instance::SearchTrack(gen_searchtrack(cell.n, spec.num_paths, cell.param, seed)?)
        }
        Family::Recommender => {
            Instance::Recommender(gen_recommender(cell.n, param_usize()?, seed)?)
        }
        Family::DagMod | Family::DagSub => {
            Instance::Dag(gen_dag(cell.n, param_usize()?, spec.family.h_kind(), seed)?)
        }
        Family::MovielensMod | Family::MovielensSub => {
            let dag = movielens.expect("loaded before the grid").clone();
            Instance::Dag(DagObjective::new(dag, spec.family.h_kind(), EvalMode::Raw))
        }
    })
}

struct RunContext<'a> {
    spec: &'a ExperimentSpec,
    cell: &'a Cell,
    cell_index: usize,
    instance: usize,
    seed: u64,
}

impl RunContext<'_> {
    fn row(
        &self,
        n: usize,
        algo: Algo,
        value: f64,
        evals: u64,
        opt: Option<f64>,
        best: Sequence,
    ) -> ResultRow {
        ResultRow {
            family: self.spec.family,
            cell: self.cell_index,
            n,
            k: self.cell.k,
            param: self.cell.param,
            instance: self.instance,
            instance_seed: self.seed,
            algorithm: algo,
            value,
            evals,
            opt,
            ratio: opt.filter(|&o| o > 0.0).map(|o| value / o),
            best,
            record: None,
        }
    }

    fn gsemo<F: SequenceFunction>(
        &self,
        oracle: &Oracle<F>,
        variant: Variant,
        algo: Algo,
    ) -> Result<RunRecord> {
        let n = oracle.n();
        let k = self.cell.k;
        let iterations = self
            .spec
            .iterations
            .unwrap_or_else(|| budget_for(self.spec.family.class(), n, k, variant));
        let cfg = GsemoConfig::new(
            k,
            iterations,
            variant,
            derive_seed(self.seed, 0xa1, algo as u64),
        );
        if !self.spec.check_invariants {
            return gsemo_observed(oracle, &cfg, &mut ());
        }
        let mut violation: Option<(u64, String)> = None;
        let mut prev = f64::NEG_INFINITY;
        let mut check = |it: u64, archive: &Archive| {
            if violation.is_some() {
                return;
            }
            if let Err(reason) = archive.check_invariants(k, variant) {
                violation = Some((it, reason));
                return;
            }
            let best = archive
                .best_feasible(k)
                .and_then(|m| m.value.f1.value())
                .unwrap_or(f64::NEG_INFINITY);
            if best < prev {
                violation = Some((
                    it,
                    format!("best feasible value fell from {prev} to {best}"),
                ));
            }
            prev = best;
        };
        let record = gsemo_observed(oracle, &cfg, &mut check)?;
        match violation {
            Some((iteration, reason)) => Err(Error::InvariantViolation { iteration, reason }),
            None => Ok(record),
        }
    }

    fn run_plain<F: SequenceFunction + MaybeSearchTrack>(
        &self,
        func: &F,
        cert: Option<&TimesortCertificate>,
    ) -> Result<Vec<ResultRow>> {
        let oracle = Oracle::new(func);
        let n = oracle.n();
        let k = self.cell.k;
        let opt = match self.spec.opt {
            OptMode::Off => None,
            OptMode::Full => Some(opt_full(&oracle, k, self.spec.opt_guard)?.value),
            OptMode::Timesort => Some(func.timesort_opt(k, self.spec.opt_guard, cert)?),
            OptMode::Subset => unreachable!("rejected by validation"),
        };
        let mut rows = Vec::new();
        for &algo in &self.spec.algos {
            oracle.reset_evaluations();
            let row = match algo.variant() {
                Some(variant) => {
                    let rec = self.gsemo(&oracle, variant, algo)?;
                    let mut row = self.row(
                        n,
                        algo,
                        rec.best_value,
                        rec.evaluations_used,
                        opt,
                        rec.best.clone(),
                    );
                    row.record = Some(rec);
                    row
                }
                None => {
                    let best = match algo {
                        Algo::Greedy => greedy(&oracle, k)?,
                        Algo::GGreedy => generalized_greedy(&oracle, k)?,
                        _ => unreachable!("rejected by validation"),
                    };
                    let evals = oracle.evaluations();
                    self.row(n, algo, func.value(&best), evals, opt, best)
                }
            };
            rows.push(row);
        }
        Ok(rows)
    }

    fn run_dag(&self, obj: &DagObjective) -> Result<Vec<ResultRow>> {
        let raw = Oracle::new(obj.with_mode(EvalMode::Raw));
        let reordered = Oracle::new(obj.with_mode(EvalMode::Reordered));
        let n = raw.n();
        let k = self.cell.k;
        let opt = match self.spec.opt {
            OptMode::Off => None,
            OptMode::Full => Some(opt_full(&reordered, k, self.spec.opt_guard)?.value),
            OptMode::Subset => Some(opt_subset_reorder(&reordered, k, self.spec.opt_guard)?.value),
            OptMode::Timesort => unreachable!("rejected by validation"),
        };
        let mut rows = Vec::new();
        for &algo in &self.spec.algos {
            raw.reset_evaluations();
            reordered.reset_evaluations();
            let row = match algo.variant() {
                Some(variant) => {
                    let rec = self.gsemo(&reordered, variant, algo)?;
                    let value = raw.func().value(&rec.best);
                    let mut row =
                        self.row(n, algo, value, rec.evaluations_used, opt, rec.best.clone());
                    row.record = Some(rec);
                    row
                }
                None => {
                    let best = match algo {
                        Algo::Greedy => greedy(&raw, k)?,
                        Algo::GGreedy => generalized_greedy(&raw, k)?,
                        Algo::Omega => omega(&raw, k)?,
                        _ => unreachable!(),
                    };
                    let evals = raw.evaluations();
                    self.row(n, algo, raw.func().value(&best), evals, opt, best)
                }
            };
            rows.push(row);
        }
        Ok(rows)
    }
}

/// Lets the generic runner reach the time-sorted optimum for search-and-tracking only.
trait MaybeSearchTrack {
    fn timesort_opt(
        &self,
        _k: usize,
        _guard: u128,
        _cert: Option<&TimesortCertificate>,
    ) -> Result<f64> {
        Err(Error::invalid("timesort OPT only applies to searchtrack"))
    }
}

impl MaybeSearchTrack for crate::objectives::TaskInstance {}
impl MaybeSearchTrack for crate::objectives::InfoGainInstance {}
impl MaybeSearchTrack for crate::objectives::RecommenderInstance {}

impl MaybeSearchTrack for crate::objectives::SearchTrackInstance {
    fn timesort_opt(
        &self,
        k: usize,
        guard: u128,
        cert: Option<&TimesortCertificate>,
    ) -> Result<f64> {
        Ok(opt_subset_timesort(&Oracle::new(self.clone()), k, guard, cert)?.value)
    }
}

fn summarize(spec: &ExperimentSpec, rows: &[ResultRow]) -> Vec<SummaryRow> {
    let baseline = spec.baseline();
    let mut out = Vec::new();
    for (ci, cell) in spec.cells.iter().enumerate() {
        let base: Vec<&ResultRow> = rows
            .iter()
            .filter(|r| r.cell == ci && r.algorithm == baseline)
            .collect();
        for &algo in &spec.algos {
            let mine: Vec<&ResultRow> = rows
                .iter()
                .filter(|r| r.cell == ci && r.algorithm == algo)
                .collect();
            if mine.is_empty() {
                continue;
            }
            let count = mine.len();
            let mean = |xs: &[f64]| xs.iter().sum::<f64>() / xs.len() as f64;
            let values: Vec<f64> = mine.iter().map(|r| r.value).collect();
            let ratios: Option<Vec<f64>> = mine.iter().map(|r| r.ratio).collect();
            let (mut wins, mut ties, mut losses) = (0, 0, 0);
            let mut p_value = None;
            let mut significant = None;
            if algo != baseline && base.len() == count {
                for (a, b) in mine.iter().zip(&base) {
                    let d = a.value - b.value;
                    if d.abs() <= slack(&[a.value, b.value]) {
                        ties += 1;
                    } else if d > 0.0 {
                        wins += 1;
                    } else {
                        losses += 1;
                    }
                }
                if let Ok(t) = sign_test(wins, ties, losses) {
                    p_value = Some(t.p_value);
                    significant = Some(t.significant_at_05);
                }
            }
            out.push(SummaryRow {
                family: spec.family,
                n: mine[0].n,
                k: cell.k,
                param: cell.param,
                algorithm: algo,
                instances: count,
                mean_value: mean(&values),
                mean_ratio: ratios.as_deref().map(mean),
                min_ratio: ratios
                    .as_deref()
                    .map(|r| r.iter().copied().fold(f64::INFINITY, f64::min)),
                wins,
                ties,
                losses,
                p_value,
                significant,
            });
        }
    }
    out
}

fn opt_str(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> Error + '_ {
    move |e| Error::io(path, e.into())
}

fn write_results(path: &Path, rows: &[ResultRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
    w.write_record([
        "family",
        "n",
        "k",
        "param",
        "instance_seed",
        "algorithm",
        "value",
        "evals",
        "opt",
        "ratio",
    ])
    .map_err(csv_err(path))?;
    for r in rows {
        w.write_record([
            r.family.to_string(),
            r.n.to_string(),
            r.k.to_string(),
            r.param.to_string(),
            r.instance_seed.to_string(),
            r.algorithm.to_string(),
            r.value.to_string(),
            r.evals.to_string(),
            opt_str(r.opt),
            opt_str(r.ratio),
        ])
        .map_err(csv_err(path))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn write_summary(path: &Path, rows: &[SummaryRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
    w.write_record([
        "family",
        "n",
        "k",
        "param",
        "algorithm",
        "instances",
        "mean_value",
        "mean_ratio",
        "min_ratio",
        "wins",
        "ties",
        "losses",
        "p_value",
        "significant",
    ])
    .map_err(csv_err(path))?;
    for r in rows {
        w.write_record([
            r.family.to_string(),
            r.n.to_string(),
            r.k.to_string(),
            r.param.to_string(),
            r.algorithm.to_string(),
            r.instances.to_string(),
            r.mean_value.to_string(),
            opt_str(r.mean_ratio),
            opt_str(r.min_ratio),
            r.wins.to_string(),
            r.ties.to_string(),
            r.losses.to_string(),
            opt_str(r.p_value),
            r.significant.map(|s| s.to_string()).unwrap_or_default(),
        ])
        .map_err(csv_err(path))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn write_traces(dir: &Path, rows: &[ResultRow]) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    for r in rows {
        if let Some(rec) = &r.record {
            let name = format!(
                "{}_n{}_k{}_p{}_i{}_{}.csv",
                r.family, r.n, r.k, r.param, r.instance, r.algorithm
            );
            let path = dir.join(name);
            let file = fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
            rec.write_csv(std::io::BufWriter::new(file))?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(family: Family, param: f64) -> ExperimentSpec {
        let mut spec = ExperimentSpec::new(family);
        spec.cells = vec![Cell { n: 6, k: 2, param }];
        spec.instances = 3;
        spec.seed = 5;
        spec.iterations = Some(300);
        spec
    }

    #[test]
    fn empty_grid_writes_headers_only() {
        let dir = tempfile::tempdir().unwrap();
        let mut spec = ExperimentSpec::new(Family::Tasks);
        spec.out_dir = Some(dir.path().to_path_buf());
        let out = run_experiment(&spec).unwrap();
        assert!(out.rows.is_empty());
        let text = fs::read_to_string(dir.path().join("results.csv")).unwrap();
        assert_eq!(
            text,
            "family,n,k,param,instance_seed,algorithm,value,evals,opt,ratio\n"
        );
    }

    #[test]
    fn reruns_are_byte_identical() {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        let mut spec = small(Family::DagMod, 2.0);
        spec.algos = vec![Algo::Gsemo, Algo::GsemoK, Algo::Greedy, Algo::Omega];
        spec.opt = OptMode::Subset;
        spec.trace = true;
        spec.out_dir = Some(a.path().to_path_buf());
        run_experiment(&spec).unwrap();
        spec.out_dir = Some(b.path().to_path_buf());
        let out = run_experiment(&spec).unwrap();
        for f in ["results.csv", "summary.csv"] {
            assert_eq!(
                fs::read(a.path().join(f)).unwrap(),
                fs::read(b.path().join(f)).unwrap()
            );
        }
        assert_eq!(fs::read_dir(a.path().join("traces")).unwrap().count(), 6);
        for r in &out.rows {
            assert!(r.value <= r.opt.unwrap() + 1e-9);
        }
    }

    #[test]
    fn opt_modes_are_checked_against_family() {
        let mut spec = small(Family::Tasks, 0.0);
        spec.opt = OptMode::Subset;
        assert!(run_experiment(&spec).is_err());
        spec.opt = OptMode::Off;
        spec.algos = vec![Algo::Omega];
        assert!(run_experiment(&spec).is_err());
    }

    #[test]
    fn every_family_runs() {
        for (family, param) in [
            (Family::Tasks, 0.0),
            (Family::InfoGain, 0.0),
            (Family::SearchTrack, -0.5),
            (Family::Recommender, 3.0),
            (Family::DagSub, 2.0),
        ] {
            let mut spec = small(family, param);
            spec.num_tasks = 4;
            spec.num_paths = 5;
            spec.check_invariants = true;
            spec.opt = if family == Family::SearchTrack {
                OptMode::Timesort
            } else {
                OptMode::Full
            };
            let out = run_experiment(&spec).unwrap();
            assert_eq!(out.rows.len(), 6, "{family}");
            assert_eq!(out.summary.len(), 2);
            for r in &out.rows {
                assert!(r.value <= r.opt.unwrap() + 1e-9, "{family}: {r:?}");
            }
        }
    }

    #[test]
    fn failure_writes_manifest() {
        let dir = tempfile::tempdir().unwrap();
        let mut spec = small(Family::Tasks, 0.0);
        spec.opt = OptMode::Full;
        spec.opt_guard = 10;
        spec.out_dir = Some(dir.path().to_path_buf());
        assert!(matches!(run_experiment(&spec), Err(Error::TooLarge { .. })));
        assert!(dir.path().join("FAILED").exists());
    }
}
