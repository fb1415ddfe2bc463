use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::str::FromStr;

use super::record::{domain_of, RunRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    PlanLen,
    Expansions,
    Time,
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "plan_len" | "actions" => Ok(Metric::PlanLen),
            "expansions" => Ok(Metric::Expansions),
            "time" | "time_s" => Ok(Metric::Time),
            other => Err(format!("unknown metric `{other}` (expected plan_len, expansions or time)")),
        }
    }
}

impl Metric {
    pub fn of(self, r: &RunRecord) -> f64 {
        match self {
            Metric::PlanLen => r.plan_len.unwrap_or(0) as f64,
            Metric::Expansions => r.expansions as f64,
            Metric::Time => r.time_s,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageCell {
    pub solved: usize,
    pub runs: usize,
    /// Mean re-expansion rate over solved runs.
    pub mean_rate: Option<f64>,
}

impl CoverageCell {
    pub fn render(&self) -> String {
        match self.mean_rate {
            Some(r) if self.solved > 0 => format!("{} ({r:.2})", self.solved),
            _ => format!("{} (—)", self.solved),
        }
    }
}

fn cell_of<'a>(records: impl Iterator<Item = &'a RunRecord>) -> CoverageCell {
    let (mut solved, mut runs, mut rate_sum) = (0usize, 0usize, 0.0);
    for r in records {
        runs += 1;
        if r.is_solved() {
            solved += 1;
            rate_sum += r.reexp_rate;
        }
    }
    CoverageCell { solved, runs, mean_rate: (solved > 0).then(|| rate_sum / solved as f64) }
}

/// Solved counts and mean re-expansion rates per domain (rows) and
/// algorithm (columns), with a final `total` row.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageTable {
    pub rows: Vec<String>,
    pub columns: Vec<String>,
    pub cells: BTreeMap<(String, String), CoverageCell>,
}

impl CoverageTable {
    pub fn cell(&self, row: &str, column: &str) -> CoverageCell {
        self.cells
            .get(&(row.to_string(), column.to_string()))
            .copied()
            .unwrap_or(CoverageCell { solved: 0, runs: 0, mean_rate: None })
    }

    pub fn render_csv(&self) -> String {
        let mut out = String::from("domain");
        for c in &self.columns {
            out.push(',');
            out.push_str(c);
        }
        out.push('\n');
        for r in &self.rows {
            out.push_str(r);
            for c in &self.columns {
                let _ = write!(out, ",{}", self.cell(r, c).render());
            }
            out.push('\n');
        }
        out
    }
}

fn first_seen<'a>(items: impl Iterator<Item = &'a str>) -> Vec<String> {
    let mut seen = BTreeSet::new();
    items.filter(|s| seen.insert(*s)).map(str::to_string).collect()
}

pub fn coverage_table(records: &[RunRecord]) -> CoverageTable {
    let columns = first_seen(records.iter().map(|r| r.algorithm.as_str()));
    let mut rows: Vec<String> = records.iter().map(|r| domain_of(&r.instance).to_string()).collect::<BTreeSet<_>>().into_iter().collect();
    let mut cells = BTreeMap::new();
    for c in &columns {
        for d in &rows {
            let cell = cell_of(records.iter().filter(|r| &r.algorithm == c && domain_of(&r.instance) == d));
            cells.insert((d.clone(), c.clone()), cell);
        }
        cells.insert(("total".to_string(), c.clone()), cell_of(records.iter().filter(|r| &r.algorithm == c)));
    }
    rows.push("total".to_string());
    CoverageTable { rows, columns, cells }
}

/// Per algorithm, the step points `(time, solved so far)` of the solved
/// runs, one point per distinct time.
pub fn survival_data(records: &[RunRecord]) -> Vec<(String, Vec<(f64, usize)>)> {
    first_seen(records.iter().map(|r| r.algorithm.as_str()))
        .into_iter()
        .map(|algo| {
            let mut times: Vec<f64> = records.iter().filter(|r| r.algorithm == algo && r.is_solved()).map(|r| r.time_s).collect();
            times.sort_by(f64::total_cmp);
            let mut points: Vec<(f64, usize)> = Vec::new();
            for (i, t) in times.into_iter().enumerate() {
                match points.last_mut() {
                    Some(last) if last.0 == t => last.1 = i + 1,
                    _ => points.push((t, i + 1)),
                }
            }
            (algo, points)
        })
        .collect()
}

/// Mean metric per instance over the solved runs.
fn solved_means(records: &[RunRecord], metric: Metric) -> BTreeMap<&str, f64> {
    let mut acc: BTreeMap<&str, (f64, usize)> = BTreeMap::new();
    for r in records.iter().filter(|r| r.is_solved()) {
        let e = acc.entry(r.instance.as_str()).or_default();
        e.0 += metric.of(r);
        e.1 += 1;
    }
    acc.into_iter().map(|(k, (s, n))| (k, s / n as f64)).collect()
}

/// `(instance, metric_a, metric_b)` for every instance solved by both
/// record sets; seeds are averaged over solved runs.
pub fn pairwise_compare(a: &[RunRecord], b: &[RunRecord], metric: Metric) -> Vec<(String, f64, f64)> {
    let ma = solved_means(a, metric);
    let mb = solved_means(b, metric);
    ma.iter().filter_map(|(k, va)| mb.get(k).map(|vb| (k.to_string(), *va, *vb))).collect()
}

/// Merges the algorithms in `ids` into one pseudo-algorithm `label`: for
/// each (instance, seed) it keeps the solved run with the fewest actions,
/// or the first run when none solved.
pub fn best_of(records: &[RunRecord], ids: &[&str], label: &str) -> Vec<RunRecord> {
    let mut best: BTreeMap<(&str, u64), &RunRecord> = BTreeMap::new();
    let rank = |r: &RunRecord| (!r.is_solved(), r.plan_len.unwrap_or(usize::MAX), r.expansions);
    for r in records.iter().filter(|r| ids.contains(&r.algorithm.as_str())) {
        best.entry((r.instance.as_str(), r.seed))
            .and_modify(|cur| {
                if rank(r) < rank(cur) {
                    *cur = r;
                }
            })
            .or_insert(r);
    }
    best.into_values()
        .map(|r| RunRecord { algorithm: label.to_string(), ..r.clone() })
        .collect()
}

pub fn select(records: &[RunRecord], algorithm: &str) -> Vec<RunRecord> {
    records.iter().filter(|r| r.algorithm == algorithm).cloned().collect()
}
