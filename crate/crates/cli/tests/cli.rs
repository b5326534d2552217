use std::path::Path;
use std::process::{Command, Output};

fn acdaa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_acdaa"))
        .args(args)
        .env("RUST_LOG", "warn")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = acdaa(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn gen(dir: &Path, shape: &str, seed: &str) -> String {
    let path = dir.join("data.csv");
    ok(&["gen", shape, "--seed", seed, "--out", path.to_str().unwrap()]);
    path.to_str().unwrap().to_owned()
}

#[test]
fn gen_writes_data_and_labels_reproducibly() {
    let dir = tempfile::tempdir().unwrap();
    let path = gen(dir.path(), "two-blobs:10,15", "3");
    let data = std::fs::read_to_string(&path).unwrap();
    let labels = std::fs::read_to_string(dir.path().join("data.labels.csv")).unwrap();
    assert_eq!(data.lines().count(), 25);
    assert!(data.lines().all(|l| l.split(',').count() == 2));
    assert_eq!(labels.lines().filter(|l| *l == "1").count(), 15);

    let again = gen(dir.path(), "two-blobs:10,15", "3");
    assert_eq!(std::fs::read_to_string(again).unwrap(), data);
}

#[test]
fn gen_planted_votes_shape() {
    let dir = tempfile::tempdir().unwrap();
    let path = gen(dir.path(), "planted-votes:450,250", "1");
    let data = std::fs::read_to_string(path).unwrap();
    assert_eq!(data.lines().count(), 450);
    assert!(data.lines().all(|l| l.split(',').count() == 250));
}

#[test]
fn classify_single_dichotomy_and_schema() {
    let dir = tempfile::tempdir().unwrap();
    let path = gen(dir.path(), "two-blobs:20,20,30", "0");
    let json = ok(&["classify", "--input", &path, "--format", "points", "-k", "1", "-r", "1", "-T", "300", "--seed", "1", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    let mut keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    keys.sort_unstable();
    assert_eq!(keys, ["T", "complexity", "distinct", "k", "r", "seed"]);
    assert_eq!(v["complexity"], 1.0);
    let distinct = v["distinct"].as_array().unwrap();
    assert_eq!(distinct.len(), 1);
    let mut keys: Vec<&str> = distinct[0].as_object().unwrap().keys().map(String::as_str).collect();
    keys.sort_unstable();
    assert_eq!(keys, ["classes", "degenerate", "multiplicity", "num_classes", "stability", "uniformity"]);
    assert_eq!(distinct[0]["num_classes"], 2);
    assert_eq!(distinct[0]["classes"][0].as_array().unwrap().len(), 20);
}

#[test]
fn classify_is_byte_identical_across_runs_and_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let path = gen(dir.path(), "two-rings-plus-blob", "2");
    let args = ["classify", "--input", &path, "--format", "points", "-k", "3", "-r", "4", "-T", "500", "--seed", "9", "--json"];
    let first = ok(&args);
    assert_eq!(ok(&args), first);
    let mut with_threads = vec!["--threads", "1"];
    with_threads.extend(args);
    assert_eq!(ok(&with_threads), first);

    let out = dir.path().join("set.json");
    let table = ok(&[&args[..13], &["--out", out.to_str().unwrap()]].concat());
    assert!(table.starts_with("k=3 r=4 T=500 seed=9"));
    assert_eq!(std::fs::read_to_string(out).unwrap(), first);
}

#[test]
fn classify_reads_votes_and_dissimilarities() {
    let dir = tempfile::tempdir().unwrap();
    let votes = dir.path().join("votes.csv");
    // Two blocs of eight; each deputy abstains on one of eight votes.
    let mut text = String::from("v1,v2,v3,v4,v5,v6,v7,v8\n");
    for side in ["1", "-1"] {
        for d in 0..8 {
            let row: Vec<&str> = (0..8).map(|v| if v == d { "0" } else { side }).collect();
            text.push_str(&row.join(","));
            text.push('\n');
        }
    }
    std::fs::write(&votes, text).unwrap();
    let table = ok(&["classify", "--input", votes.to_str().unwrap(), "--format", "votes", "--header", "-k", "1", "-r", "2", "-T", "100", "--seed", "0"]);
    assert!(table.contains("distinct=1"), "{table}");
    assert!(table.contains("8 8"), "{table}");

    let d = dir.path().join("d.csv");
    std::fs::write(&d, "0,1,5\n1,0,5\n5,5,0\n").unwrap();
    let table = ok(&["classify", "--input", d.to_str().unwrap(), "-k", "1", "-r", "1", "-T", "100", "--seed", "0"]);
    assert!(table.contains("2 1"), "{table}");
}

#[test]
fn classify_filters_the_summary() {
    let dir = tempfile::tempdir().unwrap();
    let path = gen(dir.path(), "two-blobs:30,30", "4");
    let base = ["classify", "--input", &path, "--format", "points", "-k", "3", "-r", "2", "-T", "300", "--seed", "2"];
    let rows = |extra: &[&str]| ok(&[&base[..], extra].concat()).lines().count() - 2;
    let all = rows(&[]);
    assert!(rows(&["--num-classes", "2"]) <= all);
    assert_eq!(rows(&["--num-classes", "9"]), 0);
    assert!(rows(&["--exclude-degenerate"]) <= all);
    assert!(rows(&["--max-uniformity", "1.0"]) <= all);
}

#[test]
fn sweep_grid_layout() {
    let dir = tempfile::tempdir().unwrap();
    let path = gen(dir.path(), "two-blobs:15,15", "1");
    let csv = ok(&["sweep", "--input", &path, "--format", "points", "--ks", "1", "--rs", "1", "-T", "200", "--seed", "0"]);
    assert_eq!(csv, "r\\k,1\n1,1.000000\n");
    let csv = ok(&["sweep", "--input", &path, "--format", "points", "--ks", "1-3", "--rs", "2-4", "-T", "200", "--seed", "0"]);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "r\\k,1,2,3");
    assert_eq!(lines.len(), 4);
    // Every run finds the same blob split, so only the denominator grows.
    let col: Vec<f64> = lines[1..].iter().map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(col, [0.5, 1.0 / 3.0, 0.25].map(|x: f64| (x * 1e6).round() / 1e6));
}

#[test]
fn compare_kmeans_trivial_cases() {
    let dir = tempfile::tempdir().unwrap();
    let path = gen(dir.path(), "planted-votes:40,30", "5");
    let report = ok(&["compare-kmeans", "--input", &path, "--format", "votes", "-K", "1", "--restarts", "3", "-T", "200", "--seed", "1", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&report).unwrap();
    for m in v["methods"].as_array().unwrap() {
        assert_eq!(m["concordance"], 1.0);
        assert_eq!(m["profiles"][0], serde_json::json!([40]));
    }
    let report = ok(&["compare-kmeans", "--input", &path, "--format", "votes", "--restarts", "1", "-T", "200", "--seed", "1"]);
    assert!(report.contains("kmeans: concordance 1.000000"), "{report}");
}

#[test]
fn compare_kmeans_on_planted_factions() {
    let dir = tempfile::tempdir().unwrap();
    let path = gen(dir.path(), "planted-votes:200,120", "6");
    let report = ok(&["compare-kmeans", "--input", &path, "--format", "votes", "--restarts", "5", "-T", "1000", "--seed", "2", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&report).unwrap();
    let conc = |i: usize| v["methods"][i]["concordance"].as_f64().unwrap();
    assert_eq!(v["methods"][0]["method"], "daa");
    assert!(conc(0) > conc(1), "daa {} vs kmeans {}", conc(0), conc(1));
    for profile in v["methods"][1]["profiles"].as_array().unwrap() {
        let sizes: Vec<u64> = profile.as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
        assert!(sizes.windows(2).all(|w| w[0] >= w[1]));
    }
}

#[test]
fn errors_exit_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(acdaa(&["classify", "--input", "/no/such/file.csv"]).status.code(), Some(1));

    let path = gen(dir.path(), "two-blobs:5,5", "0");
    let out = acdaa(&["classify", "--input", &path, "--format", "xml"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("xml"));
    // Points parsed as a dissimilarity matrix are not square.
    assert_eq!(acdaa(&["classify", "--input", &path]).status.code(), Some(1));
    assert_eq!(acdaa(&["compare-kmeans", "--input", &path, "--format", "points", "--restarts", "0"]).status.code(), Some(1));
    assert_eq!(acdaa(&["gen", "two-blobs", "--out", "/no/such/dir/x.csv"]).status.code(), Some(1));
    assert_eq!(acdaa(&["gen", "spiral", "--out", dir.path().join("s.csv").to_str().unwrap()]).status.code(), Some(1));
    assert_ne!(acdaa(&["sweep", "--input", &path, "--ks", "3-1"]).status.code(), Some(0));
}
