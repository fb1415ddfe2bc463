use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use sbfs::domains::InstanceSpec;
use sbfs::dsl::{has_errors, parse_problem_bytes, serialize_plan, serialize_problem, validate_with_spans};
use sbfs::harness::{
    best_of, coverage_table, pairwise_compare, read_records, run_suite, select, survival_data, AlgoArgs, Metric,
    RunRecord, SuiteConfig,
};
use sbfs::model::Problem;

#[derive(Parser)]
#[command(name = "plan", version, about = "Sampling best-first search for numeric planning with control variables")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve one problem file and print the plan.
    Solve {
        file: PathBuf,
        #[command(flatten)]
        algo: AlgoArgs,
    },
    /// Generate a benchmark instance, e.g. `plan gen counters n=3 -o c3.problem`.
    Gen {
        domain: String,
        /// Size parameters as key=value.
        params: Vec<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run a suite file and write CSV results into a directory.
    Suite {
        config: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Summarize a results directory (or CSV file).
    Report {
        dir: PathBuf,
        #[arg(long, group = "kind")]
        table: bool,
        #[arg(long, group = "kind")]
        survival: bool,
        #[arg(long, group = "kind", num_args = 2, value_names = ["A", "B"])]
        compare: Option<Vec<String>>,
        #[arg(long, default_value = "plan_len")]
        metric: String,
        /// Merge algorithms before reporting: LABEL=ID1,ID2,...
        #[arg(long = "best-of")]
        best_of: Vec<String>,
    },
    /// Parse and validate a problem file, printing all diagnostics.
    Validate { file: PathBuf },
}

fn load_problem(path: &Path) -> Result<Problem, String> {
    let bytes = fs::read(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_problem_bytes(&bytes).map_err(|diags| {
        diags.iter().map(|d| format!("{}:{d}", path.display())).collect::<Vec<_>>().join("\n")
    })
}

fn results_path(dir: &Path) -> PathBuf {
    if dir.is_dir() {
        dir.join("results.csv")
    } else {
        dir.to_path_buf()
    }
}

fn apply_best_of(mut records: Vec<RunRecord>, specs: &[String]) -> Result<Vec<RunRecord>, String> {
    for spec in specs {
        let (label, ids) = spec.split_once('=').ok_or_else(|| format!("--best-of expects LABEL=ID1,ID2, got `{spec}`"))?;
        let ids: Vec<&str> = ids.split(',').filter(|s| !s.is_empty()).collect();
        let merged = best_of(&records, &ids, label);
        records.retain(|r| !ids.contains(&r.algorithm.as_str()));
        records.extend(merged);
    }
    Ok(records)
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.cmd {
        Cmd::Solve { file, algo } => {
            let p = load_problem(&file)?;
            let cfg = algo.to_config().map_err(|e| e.to_string())?;
            let r = cfg.run(&p).map_err(|e| e.to_string())?;
            eprintln!(
                "outcome={} expansions={} reexp_rate={:.2} generated={} time_s={:.3}",
                r.outcome,
                r.stats.expansions,
                r.stats.reexp_rate(),
                r.stats.generated,
                r.stats.wall_time.as_secs_f64()
            );
            match &r.plan {
                Some(plan) => {
                    print!("{}", serialize_plan(plan, &p));
                    Ok(ExitCode::SUCCESS)
                }
                None => Ok(ExitCode::from(2)),
            }
        }
        Cmd::Gen { domain, params, output } => {
            let text = std::iter::once(domain).chain(params).collect::<Vec<_>>().join(" ");
            let spec = InstanceSpec::parse(&text).map_err(|e| e.to_string())?;
            let p = spec.generate().map_err(|e| e.to_string())?;
            let body = format!("; {}\n{}", spec.id(), serialize_problem(&p));
            match output {
                Some(path) => fs::write(&path, body).map_err(|e| format!("{}: {e}", path.display()))?,
                None => print!("{body}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Suite { config, output, workers } => {
            let text = fs::read_to_string(&config).map_err(|e| format!("{}: {e}", config.display()))?;
            let base = config.parent().unwrap_or(Path::new("."));
            let mut cfg = SuiteConfig::parse(&text, base).map_err(|e| e.to_string())?;
            if let Some(w) = workers {
                cfg.workers = w.max(1);
            }
            let out = output.or_else(|| cfg.output.clone()).ok_or("no output directory (use -o or `output =`)")?;
            let records = run_suite(&cfg, Some(&out)).map_err(|e| e.to_string())?;
            let solved = records.iter().filter(|r| r.is_solved()).count();
            eprintln!("{} cells, {solved} solved, results in {}", records.len(), out.display());
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Report { dir, table, survival, compare, metric, best_of } => {
            let path = results_path(&dir);
            let file = fs::File::open(&path).map_err(|e| format!("{}: {e}", path.display()))?;
            let records = read_records(file).map_err(|e| e.to_string())?;
            let records = apply_best_of(records, &best_of)?;
            if let Some(pair) = compare {
                let metric: Metric = metric.parse()?;
                println!("instance,{},{}", pair[0], pair[1]);
                for (inst, a, b) in pairwise_compare(&select(&records, &pair[0]), &select(&records, &pair[1]), metric) {
                    println!("\"{inst}\",{a},{b}");
                }
            } else if survival {
                println!("algorithm,time_s,solved");
                for (algo, points) in survival_data(&records) {
                    for (t, n) in points {
                        println!("{algo},{t},{n}");
                    }
                }
            } else {
                let _ = table;
                print!("{}", coverage_table(&records).render_csv());
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Validate { file } => {
            let bytes = fs::read(&file).map_err(|e| format!("{}: {e}", file.display()))?;
            let diags = match parse_problem_bytes(&bytes) {
                Ok(p) => validate_with_spans(&p, None),
                Err(d) => d,
            };
            for d in &diags {
                println!("{}:{d}", file.display());
            }
            Ok(if has_errors(&diags) { ExitCode::FAILURE } else { ExitCode::SUCCESS })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
