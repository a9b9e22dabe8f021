use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_domain-sieve");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn fixtures(dir: &Path) -> PathBuf {
    let fx = dir.join("fx");
    let o = run(&["gen-fixtures", "--small", "--dir", fx.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    fx.join("pipeline.conf")
}

fn stage(conf: &Path, out: &Path, cmd: &str) -> Output {
    run(&["--config", conf.to_str().unwrap(), "--out", out.to_str().unwrap(), cmd])
}

const ARTIFACTS: &[&str] = &[
    "dataset.tsv",
    "vocab.tsv",
    "model.txt",
    "scores.tsv",
    "selection.tsv",
    "selection.manifest.tsv",
    "buckets.tsv",
    "eval/methods.csv",
    "eval/sweep.csv",
    "eval/sweep.svg",
    "eval/manifest.tsv",
];

fn snapshot(out: &Path) -> Vec<Vec<u8>> {
    ARTIFACTS.iter().map(|a| fs::read(out.join(a)).unwrap()).collect()
}

#[test]
fn run_all_produces_every_artifact_and_is_idempotent() {
    let dir = tempfile::tempdir().unwrap();
    let conf = fixtures(dir.path());
    let out = dir.path().join("run");
    let o = stage(&conf, &out, "run-all");
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let first = snapshot(&out);
    for s in [
        "make-dataset",
        "build-vocab",
        "train",
        "score",
        "rank-select",
        "evaluate",
        "run-all",
    ] {
        let m = out.join(format!("manifest.{s}.json"));
        let v: serde_json::Value = serde_json::from_slice(&fs::read(&m).unwrap()).unwrap();
        assert_eq!(v["subcommand"], s);
        assert_eq!(v["config_hash"].as_str().unwrap().len(), 64);
    }
    let hash = {
        let v: serde_json::Value = serde_json::from_slice(&fs::read(out.join("manifest.train.json")).unwrap()).unwrap();
        v["config_hash"].as_str().unwrap().to_string()
    };
    for a in [
        "vocab.tsv",
        "model.txt",
        "scores.tsv",
        "selection.manifest.tsv",
        "buckets.tsv",
        "eval/methods.csv",
    ] {
        let body = fs::read_to_string(out.join(a)).unwrap();
        assert!(body.contains(&hash), "{a} lacks the config hash");
    }

    for s in [
        "make-dataset",
        "build-vocab",
        "train",
        "score",
        "rank-select",
        "evaluate",
    ] {
        let o = stage(&conf, &out, s);
        assert_eq!(o.status.code(), Some(0), "{s}: {}", String::from_utf8_lossy(&o.stderr));
    }
    assert_eq!(first, snapshot(&out));
}

#[test]
fn single_class_training_set_fails_in_classifier_stage() {
    let dir = tempfile::tempdir().unwrap();
    let conf = fixtures(dir.path());
    let out = dir.path().join("run");
    for s in ["make-dataset", "build-vocab"] {
        assert!(stage(&conf, &out, s).status.success());
    }
    let ds = out.join("dataset.tsv");
    let kept: String = fs::read_to_string(&ds)
        .unwrap()
        .lines()
        .filter(|l| !l.contains("\tnegative\t"))
        .map(|l| format!("{l}\n"))
        .collect();
    fs::write(&ds, kept).unwrap();
    let o = stage(&conf, &out, "train");
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("classifier"), "{err}");
    assert!(!out.join("manifest.train.json").exists());
}

#[test]
fn vocabulary_mismatch_at_scoring_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let conf = fixtures(dir.path());
    let out = dir.path().join("run");
    for s in ["make-dataset", "build-vocab", "train"] {
        assert!(stage(&conf, &out, s).status.success());
    }
    // A vocabulary built under a different cap has a different fingerprint.
    let other_conf = dir.path().join("other.conf");
    let text = fs::read_to_string(&conf)
        .unwrap()
        .replace("news.txt", "fx/news.txt")
        .replace("web.tsv", "fx/web.tsv");
    fs::write(&other_conf, text + "vocab_max_size = 50\n").unwrap();
    let other = dir.path().join("other");
    for s in ["make-dataset", "build-vocab"] {
        let o = stage(&other_conf, &other, s);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    fs::copy(other.join("vocab.tsv"), out.join("vocab.tsv")).unwrap();
    let model_before = fs::read(out.join("model.txt")).unwrap();
    let o = stage(&conf, &out, "score");
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stderr).contains("fingerprint"));
    assert_eq!(model_before, fs::read(out.join("model.txt")).unwrap());
}

#[test]
fn config_errors_exit_2_and_help_config_lists_keys() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.conf");
    fs::write(&bad, "n = 0\n").unwrap();
    let o = run(&["--config", bad.to_str().unwrap(), "make-dataset"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("`n`"));

    let o = run(&["--help-config"]);
    assert!(o.status.success());
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("k_pairs") && text.contains("neg_pos_ratio"));
}

#[test]
fn jsonl_progress_lines_parse() {
    let dir = tempfile::tempdir().unwrap();
    let conf = fixtures(dir.path());
    let out = dir.path().join("run");
    let o = run(&[
        "--log-jsonl",
        "--config",
        conf.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "make-dataset",
    ]);
    assert!(o.status.success());
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.lines().count() > 0);
    for line in err.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["stage"], "make-dataset");
    }
}
