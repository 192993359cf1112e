use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn nestnet(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nestnet"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = nestnet(dir, args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn value<'a>(stdout: &'a str, key: &str) -> &'a str {
    stdout
        .split_whitespace()
        .find_map(|kv| kv.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
        .unwrap_or_else(|| panic!("no {key} in {stdout}"))
}

#[test]
fn petersen_metrics() {
    let d = tempfile::tempdir().unwrap();
    ok(d.path(), &["gen", "--name", "petersen", "--out", "p.g"]);
    let m = ok(d.path(), &["metrics", "p.g"]);
    assert_eq!(value(&m, "D"), "2");
    assert_eq!(value(&m, "MPL"), "1.67");
    assert_eq!(value(&m, "BW"), "5");
    assert_eq!(value(&m, "MPL_exact"), "5/3");
}

#[test]
fn search_sixteen_cubic() {
    let d = tempfile::tempdir().unwrap();
    let s = ok(d.path(), &["search", "--n", "16", "--k", "3", "--seed", "1", "--out", "g.g"]);
    assert_eq!(value(&s, "hit_lower_bound"), "true");
    assert_eq!(value(&s, "mpl"), "11/5");
    assert_eq!(value(&s, "diameter"), "3");
    let text = fs::read_to_string(d.path().join("g.g")).unwrap();
    assert!(text.contains("# seed 1\n"));
    assert!(text.contains("# hit_lower_bound=true\n"));
    let m = ok(d.path(), &["metrics", "g.g", "--bisection", "heuristic"]);
    assert_eq!(value(&m, "MPL"), "2.20");
}

#[test]
fn balanced_and_floyd_tie_on_petersen() {
    let d = tempfile::tempdir().unwrap();
    ok(d.path(), &["gen", "--name", "petersen", "--out", "p.g"]);
    ok(d.path(), &["route", "--in", "p.g", "--mode", "unordered", "--out", "p.rt"]);
    ok(d.path(), &["route", "--in", "p.g", "--algo", "floyd", "--out", "p.floyd.rt"]);
    let c = ok(d.path(), &["compare", "p.rt", "p.floyd.rt"]);
    let deltas: Vec<&str> = c.lines().filter(|l| l.starts_with("delta.")).collect();
    assert_eq!(deltas.len(), 8);
    for l in deltas {
        assert!(l.ends_with("=0"), "{l}");
    }
    assert!(c.lines().filter(|l| l.starts_with("winner.")).all(|l| l.ends_with("=tie")));
}

#[test]
fn artifacts_carry_command_and_seed() {
    let d = tempfile::tempdir().unwrap();
    ok(d.path(), &["--seed", "5", "gen", "--n", "12", "--k", "3", "--out", "r.g"]);
    let text = fs::read_to_string(d.path().join("r.g")).unwrap();
    let head: Vec<&str> = text.lines().take(3).collect();
    assert_eq!(head[0], "# nestnet --seed 5 gen --n 12 --k 3 --out r.g");
    assert_eq!(head[1], "# seed 5");
    assert!(head[2].starts_with("# created unix:"));
    ok(d.path(), &["--no-header", "--threads", "2", "gen", "--n", "12", "--k", "3", "--out", "s.g"]);
    let text = fs::read_to_string(d.path().join("s.g")).unwrap();
    assert!(text.starts_with("# nestnet --no-header gen --n 12 --k 3 --out s.g\n# seed 1\n"));
    assert!(!text.contains("created"));
}

#[test]
fn product_writes_labels_and_laws() {
    let d = tempfile::tempdir().unwrap();
    ok(d.path(), &["gen", "--name", "complete(3)", "--out", "k3.g"]);
    ok(d.path(), &["gen", "--name", "cycle(4)", "--out", "c4.g"]);
    let out = ok(
        d.path(),
        &["product", "--factor", "k3.g", "--factor", "c4.g", "--out", "kc.g", "--labels", "kc.labels"],
    );
    assert_eq!(value(&out, "n"), "12");
    assert_eq!(value(&out, "edges"), "24");
    let m = ok(d.path(), &["metrics", "kc.g"]);
    assert_eq!(value(&m, "D"), "3");
    assert_eq!(value(&m, "K"), "4");
    let labels = fs::read_to_string(d.path().join("kc.labels")).unwrap();
    assert!(labels.lines().any(|l| l.starts_with('#')));
    let out = ok(d.path(), &["product", "--factor", "k3.g", "--power", "3", "--out", "k27.g"]);
    assert_eq!(value(&out, "n"), "27");
}

#[test]
fn exit_codes() {
    let d = tempfile::tempdir().unwrap();
    ok(d.path(), &["gen", "--name", "hypercube(3)", "--out", "q.g"]);
    let code = |args: &[&str]| nestnet(d.path(), args).status.code().unwrap();
    assert_eq!(code(&["bogus"]), 1);
    assert_eq!(code(&["metrics", "q.g", "--frobnicate"]), 1);
    assert_eq!(code(&["route", "--in", "q.g", "--mode", "sideways", "--out", "x.rt"]), 1);
    assert_eq!(code(&["gen", "--name", "nonsense", "--out", "x.g"]), 1);
    assert_eq!(code(&["--threads", "0", "metrics", "q.g"]), 1);
    assert_eq!(code(&["metrics", "missing.g"]), 2);
    // three shortest paths between antipodal corners exceed a cap of one
    let out = nestnet(d.path(), &["route", "--in", "q.g", "--cap", "1", "--out", "x.rt"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());
    fs::write(d.path().join("bad.g"), "3 2\n0 1\n0 1\n").unwrap();
    assert_eq!(code(&["metrics", "bad.g"]), 2);
    assert_eq!(code(&["--help"]), 0);
}

#[test]
fn compose_matches_route_counts() {
    let d = tempfile::tempdir().unwrap();
    ok(d.path(), &["gen", "--name", "complete(3)", "--out", "k3.g"]);
    ok(d.path(), &["route", "--in", "k3.g", "--mode", "ordered", "--algo", "floyd", "--out", "k3.rt"]);
    let out = ok(
        d.path(),
        &[
            "compose", "--factor", "k3.g", "--factor", "k3.g", "--r1", "k3.rt", "--r2", "k3.rt", "--out", "k9.rt",
            "--loads", "k9.loads",
        ],
    );
    assert_eq!(value(&out, "objective"), "0/1");
    assert_eq!(value(&out, "max_load"), "4");
    assert_eq!(value(&out, "min_load"), "4");
    assert_eq!(value(&out, "demands"), "72");
    // unordered factor tables are refused
    ok(d.path(), &["route", "--in", "k3.g", "--algo", "floyd", "--out", "k3u.rt"]);
    let bad = nestnet(
        d.path(),
        &["compose", "--factor", "k3.g", "--factor", "k3.g", "--r1", "k3u.rt", "--r2", "k3.rt", "--out", "x.rt"],
    );
    assert_eq!(bad.status.code(), Some(2));
}

/// Runs a whole pipeline in a fresh directory and returns every file it
/// wrote, by name.
fn pipeline(threads: &str) -> Vec<(String, Vec<u8>)> {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    let run = |args: &[&str]| {
        let mut full = vec!["--no-header", "--threads", threads, "--seed", "7"];
        full.extend_from_slice(args);
        ok(p, &full)
    };
    run(&["gen", "--n", "12", "--k", "3", "--out", "r.g"]);
    run(&["search", "--n", "12", "--k", "3", "--budget", "20000", "--restarts", "4", "--out", "s.g"]);
    run(&["route", "--in", "s.g", "--mode", "ordered", "--out", "s.rt", "--loads", "s.loads"]);
    run(&["route", "--in", "s.g", "--mode", "ordered", "--solver", "local", "--out", "l.rt"]);
    run(&["route", "--in", "r.g", "--mode", "unordered", "--algo", "floyd", "--out", "f.rt"]);
    run(&["product", "--factor", "s.g", "--factor", "s.g", "--out", "ss.g", "--labels", "ss.labels"]);
    run(&["compose", "--factor", "s.g", "--factor", "s.g", "--r1", "s.rt", "--r2", "l.rt", "--out", "ss.rt"]);
    run(&["route", "--in", "ss.g", "--mode", "unordered", "--solver", "local", "--restarts", "3", "--out", "ssl.rt"]);
    run(&["simulate", "ss.rt", "--graph", "ss.g", "--node-csv", "n.csv", "--link-csv", "l.csv"]);
    let c = run(&["compare", "ss.rt", "ssl.rt"]);
    fs::write(p.join("compare.txt"), c).unwrap();
    let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(p)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().into_string().unwrap(), fs::read(e.path()).unwrap())
        })
        .collect();
    files.sort();
    files
}

#[test]
fn thread_count_does_not_change_artifacts() {
    let one = pipeline("1");
    let eight = pipeline("8");
    assert_eq!(one.len(), 13);
    for ((na, a), (nb, b)) in one.iter().zip(&eight) {
        assert_eq!(na, nb);
        assert!(a == b, "{na} differs between thread counts");
    }
}
