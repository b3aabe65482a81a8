use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn crosslayer(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crosslayer"))
        .args(args)
        .arg("--out")
        .arg(dir)
        .output()
        .unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.display().to_string()
}

/// A five-leaf star with certain influence, on a radio path.
fn star_config(dir: &Path) -> String {
    let social: String = (1..=5).map(|v| format!("0 {v} 1\n{v} 0 1\n")).collect();
    let adhoc: String = (1..=5).map(|v| format!("{} {v}\n", v - 1)).collect();
    let social = write(dir, "social.txt", &social);
    let adhoc = write(dir, "adhoc.txt", &adhoc);
    write(
        dir,
        "star.conf",
        &format!("social_file = {social}\nadhoc_file = {adhoc}\nmapping = identity\nk = 1\ntrials = 20\n"),
    )
}

#[test]
fn seeds_on_a_star_pick_the_center() {
    let dir = tempfile::tempdir().unwrap();
    let conf = star_config(dir.path());
    let out = crosslayer(dir.path(), &["seeds", "--config", &conf]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("seeds.csv")).unwrap();
    assert_eq!(csv, "rank,node,marginal_gain,lookups_so_far\n1,0,6,6\n");
}

#[test]
fn greedy_and_celf_write_the_same_seeds() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    let common = ["--set", "n=150", "--set", "k=5", "--set", "trials=100", "--seed", "3"];
    let celf = [&["seeds"][..], &common].concat();
    let greedy = [&["seeds", "--greedy"][..], &common].concat();
    assert!(crosslayer(&a, &celf).status.success());
    assert!(crosslayer(&b, &greedy).status.success());
    let seeds = |d: &Path| -> Vec<String> {
        fs::read_to_string(d.join("seeds.csv"))
            .unwrap()
            .lines()
            .map(|l| l.split(',').take(3).collect::<Vec<_>>().join(","))
            .collect()
    };
    assert_eq!(seeds(&a), seeds(&b));
}

#[test]
fn agents_on_an_empty_graph_are_all_self() {
    let dir = tempfile::tempdir().unwrap();
    let social = write(dir.path(), "social.txt", "0\n1\n2\n3\n");
    let adhoc = write(dir.path(), "adhoc.txt", "0 1\n1 2\n2 3\n");
    let conf = write(
        dir.path(),
        "empty.conf",
        &format!("social_file = {social}\nadhoc_file = {adhoc}\nmapping = identity\n"),
    );
    let out = crosslayer(dir.path(), &["agents", "--config", &conf]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("agents.csv")).unwrap();
    assert_eq!(csv, "node,agent\n0,0\n1,1\n2,2\n3,3\n");
}

#[test]
fn gen_creates_the_directory_and_repeats_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("nested/a");
    let b = dir.path().join("b");
    for d in [&a, &b] {
        let out = crosslayer(d, &["gen", "--seed", "5"]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    for name in ["manet.txt", "social.txt", "mapping.txt", "diagnostics.txt"] {
        assert_eq!(fs::read(a.join(name)).unwrap(), fs::read(b.join(name)).unwrap(), "{name}");
    }
    let diag = fs::read_to_string(a.join("diagnostics.txt")).unwrap();
    let mean: f64 = diag
        .lines()
        .find_map(|l| l.strip_prefix("manet_mean_degree = "))
        .unwrap()
        .parse()
        .unwrap();
    assert!((9.0..=11.0).contains(&mean));
}

#[test]
fn worker_count_does_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    let args = ["experiment", "fig3", "--set", "n=120", "--set", "trials=50", "--set", "fig3_k=1,3"];
    assert!(crosslayer(&a, &[&args[..], &["--workers", "1"]].concat()).status.success());
    assert!(crosslayer(&b, &[&args[..], &["--workers", "3"]].concat()).status.success());
    let fig = fs::read_to_string(a.join("fig3.csv")).unwrap();
    assert_eq!(fig, fs::read_to_string(b.join("fig3.csv")).unwrap());
    for line in fig.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols[1], cols[2]);
    }
}

#[test]
fn fig5_starts_at_the_baseline() {
    let dir = tempfile::tempdir().unwrap();
    let out = crosslayer(
        dir.path(),
        &["experiment", "fig5", "--set", "n=150", "--set", "trials=40", "--set", "k=3"],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let fig = fs::read_to_string(dir.path().join("fig5.csv")).unwrap();
    let mut lines = fig.lines();
    assert_eq!(lines.next(), Some("num_delegated_allowed,deployment_overhead"));
    assert!(lines.next().unwrap().starts_with("0,"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(crosslayer(dir.path(), &["experiment", "fig7"]).status.code(), Some(1));
    assert_eq!(crosslayer(dir.path(), &["frobnicate"]).status.code(), Some(1));
    assert_eq!(crosslayer(dir.path(), &["seeds", "--set", "k=0"]).status.code(), Some(2));
    let missing = dir.path().join("nope.txt").display().to_string();
    let out = crosslayer(dir.path(), &["agents", "--set", &format!("social_file={missing}")]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(crosslayer(dir.path(), &["gen", "--set", "colour=blue"]).status.code(), Some(2));
}
