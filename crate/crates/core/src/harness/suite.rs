use std::collections::hash_map::DefaultHasher;
use std::fs::{self, File};
use std::hash::{Hash, Hasher};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;
use std::thread;
use std::time::Duration;

use super::algo::{AlgoArgs, AlgoConfig};
use super::record::{write_records, CellOutcome, RunRecord, CSV_HEADER};
use super::HarnessError;
use crate::domains::{default_ladder, Domain, InstanceSpec};
use crate::dsl::{has_errors, parse_problem};
use crate::model::Problem;
use crate::search::Outcome;

pub const DEFAULT_TIME_LIMIT: Duration = Duration::from_secs(600);

#[derive(Debug, Clone, PartialEq)]
pub enum InstanceSource {
    Generated(InstanceSpec),
    File(PathBuf),
}

impl InstanceSource {
    pub fn id(&self) -> String {
        match self {
            InstanceSource::Generated(s) => s.id(),
            InstanceSource::File(p) => p.display().to_string(),
        }
    }

    pub fn load(&self) -> Result<Problem, String> {
        match self {
            InstanceSource::Generated(s) => s.generate().map_err(|e| e.to_string()),
            InstanceSource::File(p) => {
                let text = fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
                parse_problem(&text).map_err(|diags| {
                    let first = diags.iter().find(|d| d.is_error()).or(diags.first());
                    first.map_or_else(|| "parse failed".to_string(), |d| d.to_string())
                })
            }
        }
    }
}

/// How cell time is measured. The work clock charges `1 / work_rate`
/// seconds per expansion, which makes every CSV field reproducible.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Clock {
    Wall,
    Work,
}

impl FromStr for Clock {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "wall" => Ok(Clock::Wall),
            "work" => Ok(Clock::Work),
            other => Err(format!("unknown clock `{other}` (expected wall or work)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlgorithmEntry {
    pub id: String,
    pub flags: String,
    pub config: AlgoConfig,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub instances: Vec<InstanceSource>,
    pub algorithms: Vec<AlgorithmEntry>,
    pub seeds: Vec<u64>,
    pub time_limit: Duration,
    /// Recorded in the metadata only.
    pub memory_limit: Option<String>,
    pub expansion_limit: Option<u64>,
    pub workers: usize,
    pub clock: Clock,
    /// Expansions per second of the work clock.
    pub work_rate: f64,
    pub output: Option<PathBuf>,
    source_hash: u64,
}

impl SuiteConfig {
    pub fn new(instances: Vec<InstanceSource>, algorithms: Vec<AlgorithmEntry>, seeds: Vec<u64>) -> Self {
        SuiteConfig {
            instances,
            algorithms,
            seeds,
            time_limit: DEFAULT_TIME_LIMIT,
            memory_limit: None,
            expansion_limit: None,
            workers: 1,
            clock: Clock::Wall,
            work_rate: 100_000.0,
            output: None,
            source_hash: 0,
        }
    }

    /// Parses the line-oriented `key = value` format. Relative file paths
    /// resolve against `base`.
    ///
    /// ```text
    /// # comment
    /// instance  = counters n=3
    /// file      = problems/p1.problem
    /// ladder    = sailing
    /// algorithm = sg-log --algo sg --rect log --sampler uniform
    /// seeds     = 0, 1, 2
    /// time_limit = 60
    /// ```
    pub fn parse(text: &str, base: &Path) -> Result<Self, HarnessError> {
        let mut cfg = SuiteConfig::new(Vec::new(), Vec::new(), Vec::new());
        let mut h = DefaultHasher::new();
        text.hash(&mut h);
        cfg.source_hash = h.finish();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let err = |msg: String| HarnessError::Config { line: line_no, msg };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| err(format!("expected key = value, got `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "instance" => {
                    let spec = InstanceSpec::from_str(value).map_err(|e| err(e.to_string()))?;
                    cfg.instances.push(InstanceSource::Generated(spec));
                }
                "file" => cfg.instances.push(InstanceSource::File(base.join(value))),
                "ladder" => {
                    let d: Domain = value.parse().map_err(|e: crate::domains::DomainError| err(e.to_string()))?;
                    cfg.instances.extend(default_ladder(d).into_iter().map(InstanceSource::Generated));
                }
                "algorithm" => {
                    let (id, flags) = value.split_once(char::is_whitespace).unwrap_or((value, ""));
                    let config = AlgoArgs::parse_line(flags)
                        .and_then(|a| a.to_config())
                        .map_err(|e| err(format!("algorithm `{id}`: {e}")))?;
                    if cfg.algorithms.iter().any(|a| a.id == id) {
                        return Err(err(format!("duplicate algorithm id `{id}`")));
                    }
                    cfg.algorithms.push(AlgorithmEntry { id: id.to_string(), flags: flags.trim().to_string(), config });
                }
                "seeds" => {
                    cfg.seeds = value
                        .split(|c: char| c == ',' || c.is_whitespace())
                        .filter(|s| !s.is_empty())
                        .map(|s| s.parse().map_err(|_| err(format!("bad seed `{s}`"))))
                        .collect::<Result<_, _>>()?;
                }
                "time_limit" => {
                    let t: f64 = value.parse().map_err(|_| err(format!("bad time limit `{value}`")))?;
                    if !(t > 0.0 && t.is_finite()) {
                        return Err(err("time limit must be positive".into()));
                    }
                    cfg.time_limit = Duration::from_secs_f64(t);
                }
                "expansion_limit" => {
                    let n: u64 = value.parse().map_err(|_| err(format!("bad expansion limit `{value}`")))?;
                    if n == 0 {
                        return Err(err("expansion limit must be positive".into()));
                    }
                    cfg.expansion_limit = Some(n);
                }
                "memory_limit" => cfg.memory_limit = Some(value.to_string()),
                "workers" => {
                    cfg.workers = value.parse().ok().filter(|&w| w > 0).ok_or_else(|| err(format!("bad worker count `{value}`")))?;
                }
                "clock" => cfg.clock = value.parse().map_err(err)?,
                "work_rate" => {
                    cfg.work_rate = value
                        .parse()
                        .ok()
                        .filter(|&r: &f64| r > 0.0 && r.is_finite())
                        .ok_or_else(|| err(format!("bad work rate `{value}`")))?;
                }
                "output" => cfg.output = Some(base.join(value)),
                other => return Err(err(format!("unknown key `{other}`"))),
            }
        }
        if cfg.seeds.is_empty() {
            cfg.seeds.push(0);
        }
        cfg.check()?;
        Ok(cfg)
    }

    pub fn check(&self) -> Result<(), HarnessError> {
        if self.instances.is_empty() {
            return Err(HarnessError::Config { line: 0, msg: "suite has no instances".into() });
        }
        if self.algorithms.is_empty() {
            return Err(HarnessError::Config { line: 0, msg: "suite has no algorithms".into() });
        }
        Ok(())
    }

    pub fn cell_count(&self) -> usize {
        self.instances.len() * self.algorithms.len() * self.seeds.len()
    }

    fn metadata(&self) -> String {
        let mut m = String::new();
        let mut line = |k: &str, v: String| m.push_str(&format!("{k}={v}\n"));
        line("config_hash", format!("{:016x}", self.source_hash));
        line("version", env!("CARGO_PKG_VERSION").to_string());
        line("instances", self.instances.len().to_string());
        line("algorithms", self.algorithms.iter().map(|a| a.id.as_str()).collect::<Vec<_>>().join(","));
        line("seeds", self.seeds.iter().map(u64::to_string).collect::<Vec<_>>().join(","));
        line("cells", self.cell_count().to_string());
        line("time_limit_s", self.time_limit.as_secs_f64().to_string());
        line("expansion_limit", self.expansion_limit.map_or("none".into(), |n| n.to_string()));
        line("memory_limit", self.memory_limit.clone().unwrap_or_else(|| "none".into()) + " (advisory)");
        line("clock", format!("{:?}", self.clock).to_lowercase());
        line("work_rate", self.work_rate.to_string());
        line("workers", self.workers.to_string());
        for a in &self.algorithms {
            line(&format!("algorithm.{}", a.id), a.flags.clone());
        }
        m
    }
}

/// Runs a single cell. The suite limits override the algorithm's own.
pub fn run_cell(problem: &Problem, instance: &str, algo: &AlgorithmEntry, seed: u64, cfg: &SuiteConfig) -> RunRecord {
    let mut ac = algo.config.clone();
    ac.set_seed(seed);
    let explicit = match (ac.expansion_limit(), cfg.expansion_limit) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    };
    let time_cap = (cfg.time_limit.as_secs_f64() * cfg.work_rate).ceil() as u64;
    match cfg.clock {
        Clock::Wall => {
            ac.set_time_limit(Some(ac.time_limit().map_or(cfg.time_limit, |t| t.min(cfg.time_limit))));
            ac.set_expansion_limit(explicit);
        }
        Clock::Work => {
            ac.set_time_limit(None);
            ac.set_expansion_limit(Some(explicit.map_or(time_cap, |e| e.min(time_cap))));
        }
    }
    let result = match ac.run(problem) {
        Ok(r) => r,
        Err(_) => return RunRecord::error(instance, &algo.id, seed),
    };
    let mut outcome = result.outcome;
    if cfg.clock == Clock::Work && outcome == Outcome::Budget && explicit.is_none_or(|e| e > time_cap) {
        outcome = Outcome::Timeout;
    }
    let time_s = match cfg.clock {
        Clock::Wall => result.stats.wall_time.as_secs_f64(),
        Clock::Work => result.stats.expansions as f64 / cfg.work_rate,
    };
    RunRecord {
        instance: instance.to_string(),
        algorithm: algo.id.clone(),
        seed,
        outcome: CellOutcome::Search(outcome),
        plan_len: result.plan_len(),
        expansions: result.stats.expansions,
        reexp_rate: result.stats.reexp_rate(),
        time_s,
    }
}

/// Runs every (instance, algorithm, seed) cell. With an output directory,
/// rows are appended to `partial.csv` as cells finish, and `results.csv`
/// (cell order) plus `meta.txt` are written at the end.
pub fn run_suite(cfg: &SuiteConfig, out_dir: Option<&Path>) -> Result<Vec<RunRecord>, HarnessError> {
    cfg.check()?;
    let problems: Vec<(String, Result<Problem, String>)> = cfg
        .instances
        .iter()
        .map(|src| {
            let loaded = src.load().and_then(|p| {
                let diags = crate::dsl::validate(&p);
                if has_errors(&diags) {
                    Err(diags.iter().find(|d| d.is_error()).map(|d| d.message.clone()).unwrap_or_default())
                } else {
                    Ok(p)
                }
            });
            (src.id(), loaded)
        })
        .collect();
    let cells: Vec<(usize, usize, u64)> = (0..cfg.instances.len())
        .flat_map(|i| (0..cfg.algorithms.len()).flat_map(move |a| cfg.seeds.iter().map(move |&s| (i, a, s))))
        .collect();

    let mut partial = match out_dir {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            let mut w = BufWriter::new(File::create(dir.join("partial.csv"))?);
            writeln!(w, "{}", CSV_HEADER.join(","))?;
            w.flush()?;
            Some(csv::WriterBuilder::new().has_headers(false).from_writer(w))
        }
        None => None,
    };

    let next = AtomicUsize::new(0);
    let mut done: Vec<Option<RunRecord>> = vec![None; cells.len()];
    let workers = cfg.workers.clamp(1, cells.len().max(1));
    thread::scope(|scope| -> Result<(), HarnessError> {
        let (tx, rx) = mpsc::channel::<(usize, RunRecord)>();
        for _ in 0..workers {
            let tx = tx.clone();
            let (next, cells, problems) = (&next, &cells, &problems);
            scope.spawn(move || loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(i, a, seed)) = cells.get(k) else { break };
                let (id, loaded) = &problems[i];
                let algo = &cfg.algorithms[a];
                let rec = match loaded {
                    Ok(p) => run_cell(p, id, algo, seed, cfg),
                    Err(_) => RunRecord::error(id, &algo.id, seed),
                };
                if tx.send((k, rec)).is_err() {
                    break;
                }
            });
        }
        drop(tx);
        // single writer: the only place partial results touch the disk
        for (k, rec) in rx {
            if let Some(w) = partial.as_mut() {
                w.write_record(rec.csv_fields())?;
                w.flush()?;
            }
            done[k] = Some(rec);
        }
        Ok(())
    })?;

    let records: Vec<RunRecord> = done.into_iter().map(|r| r.expect("every cell reports once")).collect();
    if let Some(dir) = out_dir {
        write_records(BufWriter::new(File::create(dir.join("results.csv"))?), &records)?;
        let mut meta = cfg.metadata();
        for (id, loaded) in &problems {
            if let Err(e) = loaded {
                meta.push_str(&format!("error.{id}={e}\n"));
            }
        }
        fs::write(dir.join("meta.txt"), meta)?;
    }
    Ok(records)
}
