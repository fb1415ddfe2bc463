use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn plan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plan")).args(args).output().expect("run plan")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_validate_solve() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("c3.problem");
    let o = plan(&["gen", "counters", "n=3", "-o", path(&file)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(&file).unwrap();
    assert!(text.starts_with("; counters[n=3;max_val=10;u_max=1]\n(problem counters-3"));

    let o = plan(&["validate", path(&file)]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "");

    let o = plan(&["solve", path(&file), "--algo", "sa", "--rect", "lin", "--sampler", "systematic", "--assert", "on"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stderr(&o).starts_with("outcome=solved expansions="));
    let out = stdout(&o);
    let steps: usize = out.lines().next().unwrap().strip_prefix("; plan steps=").unwrap().parse().unwrap();
    assert_eq!(out.lines().count(), steps + 1);
    assert!(out.lines().skip(1).all(|l| l.contains(": inc-c") || l.contains(": dec-c")));

    // identical flags give an identical plan
    let again = plan(&["solve", path(&file), "--algo", "sa", "--rect", "lin", "--sampler", "systematic", "--assert", "on"]);
    assert_eq!(stdout(&again), out);
}

#[test]
fn gen_to_stdout() {
    let o = plan(&["gen", "drone", "grid=2", "points=2", "seed=4"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("(action visit-p1"));
    let o = plan(&["gen", "warp", "n=2"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("unknown domain"));
    let o = plan(&["gen", "counters", "n=1"]);
    assert!(!o.status.success());
}

#[test]
fn solve_reports_unsolved_and_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let stuck = dir.path().join("stuck.problem");
    fs::write(
        &stuck,
        "(problem stuck (bools) (nums (x 0)) (controls (u 0 1))
           (action a (pre (>= (- x 5) 0)) (eff (assign x (+ x u))))
           (goal (and (>= (- x 1) 0))))",
    )
    .unwrap();
    let o = plan(&["solve", path(&stuck), "--expansion-limit", "30"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("outcome=budget expansions=30"));
    assert_eq!(stdout(&o), "");

    let o = plan(&["solve", path(&stuck), "--rect", "cubic"]);
    assert!(!o.status.success());

    let bad = dir.path().join("bad.problem");
    fs::write(&bad, "(problem bad (bools) (nums (x 0)) (controls)\n  (goal (> y 1)))").unwrap();
    let o = plan(&["validate", path(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("bad.problem:2:"), "{}", stdout(&o));
    let o = plan(&["solve", path(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("bad.problem:"));
}

#[test]
fn suite_and_reports() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("s.cfg");
    fs::write(
        &cfg,
        "instance = counters n=2\ninstance = sailing boats=1 persons=2 spread=40\n\
         algorithm = a --algo sg --rect log\nalgorithm = b --algo sa --rect lin --sampler systematic\n\
         algorithm = c --algo sa --rect log\n\
         seeds = 0, 1\nclock = work\nwork_rate = 1000\ntime_limit = 5\nmemory_limit = 4G\n",
    )
    .unwrap();
    let out = dir.path().join("out");
    let o = plan(&["suite", path(&cfg), "-o", path(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(out.join("results.csv")).unwrap();
    assert!(csv.starts_with("instance,algorithm,seed,outcome,plan_len,expansions,reexp_rate,time_s\n"));
    assert_eq!(csv.lines().count(), 1 + 2 * 3 * 2);
    assert_eq!(fs::read_to_string(out.join("partial.csv")).unwrap().lines().count(), 13);
    let meta = fs::read_to_string(out.join("meta.txt")).unwrap();
    assert!(meta.contains("memory_limit=4G (advisory)"));
    assert!(meta.contains("clock=work"));

    let o = plan(&["report", path(&out), "--table"]);
    assert!(o.status.success());
    let table = stdout(&o);
    assert!(table.starts_with("domain,a,b,c\n"));
    assert!(table.lines().last().unwrap().starts_with("total,4 ("));

    let o = plan(&["report", path(&out), "--survival"]);
    assert!(stdout(&o).starts_with("algorithm,time_s,solved\n"));

    let o = plan(&["report", path(&out.join("results.csv")), "--compare", "a", "b", "--metric", "expansions"]);
    assert!(o.status.success());
    let cmp = stdout(&o);
    assert!(cmp.starts_with("instance,a,b\n"));
    assert_eq!(cmp.lines().count(), 3);

    let o = plan(&["report", path(&out), "--best-of", "sa=b,c", "--table"]);
    assert!(stdout(&o).starts_with("domain,a,sa\n"), "{}", stdout(&o));
    let o = plan(&["report", path(&out), "--best-of", "oops"]);
    assert!(!o.status.success());
    let o = plan(&["report", path(&out), "--compare", "a", "b", "--metric", "joules"]);
    assert!(!o.status.success());
}

#[test]
fn suite_config_errors_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("s.cfg");
    fs::write(&cfg, "instance = counters n=2\nalgorithm = a --algo zz\n").unwrap();
    let o = plan(&["suite", path(&cfg), "-o", path(&dir.path().join("o"))]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
}
