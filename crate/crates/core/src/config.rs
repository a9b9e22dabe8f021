//! The single `key = value` configuration shared by every stage.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::classifier::Hyperparams;
use crate::corpus_io::{CorpusFormat, CorpusHandle, LanguageSide};
use crate::error::{Error, Result};
use crate::evaluation::ExperimentConfig;
use crate::pipeline::{DatasetParams, TfKind, TrainParams};
use crate::textproc::{hex_digest, StopWords};

/// How the parallel corpus is cut into documents for scoring.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Grouping {
    /// Runs of `n` consecutive pairs in file order.
    Consecutive,
    /// `n` pairs drawn at random (seeded) without replacement.
    Random,
}

impl Grouping {
    pub fn as_str(self) -> &'static str {
        match self {
            Grouping::Consecutive => "consecutive",
            Grouping::Random => "random",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub target_path: Option<PathBuf>,
    pub parallel_format: CorpusFormat,
    pub parallel_path: Option<PathBuf>,
    pub parallel_source_path: Option<PathBuf>,
    pub parallel_target_path: Option<PathBuf>,
    pub scoring_side: LanguageSide,
    pub background_path: Option<PathBuf>,
    pub out_dir: PathBuf,
    pub n: usize,
    pub neg_pos_ratio: f64,
    pub train_fraction: f64,
    pub calibration_fraction: f64,
    pub vocab_max_size: usize,
    pub stopwords_id: String,
    pub tf_mode: TfKind,
    pub svm_c: f64,
    pub svm_tol: f64,
    pub svm_max_iter: usize,
    pub k_pairs: u64,
    pub num_buckets: usize,
    pub grouping: Grouping,
    pub seed: u64,
    pub sweep_n_values: Vec<usize>,
    pub sweep_seeds: Vec<u64>,
    pub workers: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            target_path: None,
            parallel_format: CorpusFormat::Tsv,
            parallel_path: None,
            parallel_source_path: None,
            parallel_target_path: None,
            scoring_side: LanguageSide::Target,
            background_path: None,
            out_dir: PathBuf::from("out"),
            n: 100,
            neg_pos_ratio: 2.0,
            train_fraction: 0.3,
            calibration_fraction: 0.2,
            vocab_max_size: 70_000,
            stopwords_id: "en-v1".into(),
            tf_mode: TfKind::DocMax,
            svm_c: 1.0,
            svm_tol: 1e-4,
            svm_max_iter: 1000,
            k_pairs: 6_000_000,
            num_buckets: 4,
            grouping: Grouping::Consecutive,
            seed: 1,
            sweep_n_values: vec![1, 2, 5, 10, 20, 50],
            sweep_seeds: vec![1, 2, 3, 4, 5],
            workers: 4,
        }
    }
}

/// Every recognized key with its default and a one-line description.
pub const KEYS: &[(&str, &str, &str)] = &[
    ("target_path", "", "monolingual in-domain sample, one sentence per line"),
    (
        "parallel_format",
        "tsv",
        "tsv (source<TAB>target per line) or paired-files",
    ),
    ("parallel_path", "", "parallel corpus when parallel_format = tsv"),
    (
        "parallel_source_path",
        "",
        "source side when parallel_format = paired-files",
    ),
    (
        "parallel_target_path",
        "",
        "target side when parallel_format = paired-files",
    ),
    (
        "scoring_side",
        "target",
        "side of the parallel corpus that is classified: source or target",
    ),
    (
        "background_path",
        "",
        "monolingual negative pool; defaults to the scoring side of the parallel corpus",
    ),
    ("out_dir", "out", "run directory for all stage outputs"),
    ("n", "100", "sentences per batch (>= 1)"),
    ("neg_pos_ratio", "2", "negative batches per positive batch (> 0)"),
    (
        "train_fraction",
        "0.3",
        "share of the labeled batches used for training (0 < f < 1)",
    ),
    (
        "calibration_fraction",
        "0.2",
        "share of the training split held out for Platt scaling (0 disables)",
    ),
    ("vocab_max_size", "70000", "vocabulary cap (>= 1)"),
    ("stopwords_id", "en-v1", "bundled stop-word list: en-v1 or none"),
    (
        "tf_mode",
        "doc-max",
        "term-frequency denominator: doc-max or corpus-max",
    ),
    ("svm_c", "1", "SVM hinge-loss weight C (> 0)"),
    ("svm_tol", "0.0001", "SVM projected-gradient tolerance (> 0)"),
    ("svm_max_iter", "1000", "SVM maximum passes (>= 1)"),
    ("k_pairs", "6000000", "selection budget in sentence pairs (>= 1)"),
    ("num_buckets", "4", "number of equal-size rank buckets (>= 1)"),
    (
        "grouping",
        "consecutive",
        "how parallel pairs form documents: consecutive or random",
    ),
    ("seed", "1", "master seed"),
    ("sweep_n_values", "1,2,5,10,20,50", "batch sizes evaluated by the sweep"),
    ("sweep_seeds", "1,2,3,4,5", "seeds per sweep point"),
    ("workers", "4", "scoring threads (>= 1)"),
];

/// Text printed by `--help-config`.
pub fn help_text() -> String {
    let mut s = String::from("Configuration file: UTF-8 `key = value` lines; `#` starts a comment.\n");
    s.push_str("Relative paths are resolved against the config file's directory.\n\n");
    for (key, default, desc) in KEYS {
        let d = if default.is_empty() { "(unset)" } else { default };
        let _ = writeln!(s, "  {key:<22} default {d:<16} {desc}");
    }
    s
}

fn range_err(key: &str, message: impl Into<String>) -> Error {
    Error::Config {
        key: key.into(),
        message: message.into(),
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| range_err(key, format!("cannot parse `{value}`")))
}

fn parse_list<T: std::str::FromStr>(key: &str, value: &str) -> Result<Vec<T>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|v| !v.is_empty())
        .map(|v| parse_num(key, v))
        .collect()
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn opt_path(p: &Option<PathBuf>) -> String {
    p.as_ref().map(|p| p.display().to_string()).unwrap_or_default()
}

impl PipelineConfig {
    /// Sets one key from its textual value. Relative paths are joined onto
    /// `base`.
    pub fn set(&mut self, key: &str, value: &str, base: &Path) -> Result<()> {
        let path = || -> Option<PathBuf> {
            if value.is_empty() {
                None
            } else {
                Some(base.join(value))
            }
        };
        match key {
            "target_path" => self.target_path = path(),
            "parallel_path" => self.parallel_path = path(),
            "parallel_source_path" => self.parallel_source_path = path(),
            "parallel_target_path" => self.parallel_target_path = path(),
            "background_path" => self.background_path = path(),
            "out_dir" => self.out_dir = path().ok_or_else(|| range_err(key, "must not be empty"))?,
            "parallel_format" => {
                self.parallel_format = match CorpusFormat::parse(value) {
                    Some(f @ (CorpusFormat::Tsv | CorpusFormat::PairedFiles)) => f,
                    _ => return Err(range_err(key, format!("expected tsv or paired-files, got `{value}`"))),
                }
            }
            "scoring_side" => {
                self.scoring_side = LanguageSide::parse(value)
                    .ok_or_else(|| range_err(key, format!("expected source or target, got `{value}`")))?
            }
            "n" => self.n = parse_num(key, value)?,
            "neg_pos_ratio" => self.neg_pos_ratio = parse_num(key, value)?,
            "train_fraction" => self.train_fraction = parse_num(key, value)?,
            "calibration_fraction" => self.calibration_fraction = parse_num(key, value)?,
            "vocab_max_size" => self.vocab_max_size = parse_num(key, value)?,
            "stopwords_id" => self.stopwords_id = value.to_string(),
            "tf_mode" => {
                self.tf_mode = TfKind::parse(value)
                    .ok_or_else(|| range_err(key, format!("expected doc-max or corpus-max, got `{value}`")))?
            }
            "svm_c" => self.svm_c = parse_num(key, value)?,
            "svm_tol" => self.svm_tol = parse_num(key, value)?,
            "svm_max_iter" => self.svm_max_iter = parse_num(key, value)?,
            "k_pairs" => self.k_pairs = parse_num(key, value)?,
            "num_buckets" => self.num_buckets = parse_num(key, value)?,
            "grouping" => {
                self.grouping = match value {
                    "consecutive" => Grouping::Consecutive,
                    "random" => Grouping::Random,
                    _ => return Err(range_err(key, format!("expected consecutive or random, got `{value}`"))),
                }
            }
            "seed" => self.seed = parse_num(key, value)?,
            "sweep_n_values" => self.sweep_n_values = parse_list(key, value)?,
            "sweep_seeds" => self.sweep_seeds = parse_list(key, value)?,
            "workers" => self.workers = parse_num(key, value)?,
            _ => return Err(range_err(key, "unknown key")),
        }
        Ok(())
    }

    /// Parses config text; keys not mentioned keep their defaults.
    pub fn parse(text: &str, base: &Path) -> Result<Self> {
        let mut c = PipelineConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(range_err(line, format!("line {}: expected `key = value`", i + 1)));
            };
            c.set(k.trim(), v.trim(), base)?;
        }
        c.check_ranges()?;
        Ok(c)
    }

    /// Range checks on every numeric field; errors name the key.
    pub fn check_ranges(&self) -> Result<()> {
        let fail = |key: &str, msg: &str| Err(range_err(key, msg));
        if self.n < 1 {
            return fail("n", "must be >= 1");
        }
        if !(self.neg_pos_ratio > 0.0 && self.neg_pos_ratio.is_finite()) {
            return fail("neg_pos_ratio", "must be > 0");
        }
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return fail("train_fraction", "must be in (0, 1)");
        }
        if !(0.0..1.0).contains(&self.calibration_fraction) {
            return fail("calibration_fraction", "must be in [0, 1)");
        }
        if self.vocab_max_size < 1 {
            return fail("vocab_max_size", "must be >= 1");
        }
        if StopWords::by_id(&self.stopwords_id).is_none() {
            return fail("stopwords_id", "unknown list (expected en-v1 or none)");
        }
        if !(self.svm_c > 0.0 && self.svm_c.is_finite()) {
            return fail("svm_c", "must be > 0");
        }
        if !(self.svm_tol > 0.0 && self.svm_tol.is_finite()) {
            return fail("svm_tol", "must be > 0");
        }
        if self.svm_max_iter < 1 {
            return fail("svm_max_iter", "must be >= 1");
        }
        if self.k_pairs < 1 {
            return fail("k_pairs", "must be >= 1");
        }
        if self.num_buckets < 1 {
            return fail("num_buckets", "must be >= 1");
        }
        if self.sweep_n_values.is_empty() || self.sweep_n_values.contains(&0) {
            return fail("sweep_n_values", "must be a non-empty list of values >= 1");
        }
        if self.sweep_seeds.is_empty() {
            return fail("sweep_seeds", "must not be empty");
        }
        if self.workers < 1 {
            return fail("workers", "must be >= 1");
        }
        Ok(())
    }

    /// Every key with its resolved value, one `key = value` line each, in
    /// [`KEYS`] order.
    pub fn render(&self) -> String {
        let mut s = String::new();
        for (key, _, _) in KEYS {
            let _ = writeln!(s, "{key} = {}", self.value_of(key));
        }
        s
    }

    fn value_of(&self, key: &str) -> String {
        match key {
            "target_path" => opt_path(&self.target_path),
            "parallel_format" => self.parallel_format.as_str().into(),
            "parallel_path" => opt_path(&self.parallel_path),
            "parallel_source_path" => opt_path(&self.parallel_source_path),
            "parallel_target_path" => opt_path(&self.parallel_target_path),
            "scoring_side" => self.scoring_side.as_str().into(),
            "background_path" => opt_path(&self.background_path),
            "out_dir" => self.out_dir.display().to_string(),
            "n" => self.n.to_string(),
            "neg_pos_ratio" => self.neg_pos_ratio.to_string(),
            "train_fraction" => self.train_fraction.to_string(),
            "calibration_fraction" => self.calibration_fraction.to_string(),
            "vocab_max_size" => self.vocab_max_size.to_string(),
            "stopwords_id" => self.stopwords_id.clone(),
            "tf_mode" => self.tf_mode.as_str().into(),
            "svm_c" => self.svm_c.to_string(),
            "svm_tol" => self.svm_tol.to_string(),
            "svm_max_iter" => self.svm_max_iter.to_string(),
            "k_pairs" => self.k_pairs.to_string(),
            "num_buckets" => self.num_buckets.to_string(),
            "grouping" => self.grouping.as_str().into(),
            "seed" => self.seed.to_string(),
            "sweep_n_values" => join(&self.sweep_n_values),
            "sweep_seeds" => join(&self.sweep_seeds),
            "workers" => self.workers.to_string(),
            _ => unreachable!("value_of called with unlisted key {key}"),
        }
    }

    /// SHA-256 over the rendered config minus `out_dir` and `workers`, which
    /// do not affect any output byte.
    pub fn hash(&self) -> String {
        let mut h = Sha256::new();
        for line in self.render().lines() {
            if line.starts_with("out_dir ") || line.starts_with("workers ") {
                continue;
            }
            h.update(line.as_bytes());
            h.update(b"\n");
        }
        hex_digest(&h.finalize())
    }

    /// The `config=<hash>` stamp embedded in output artifacts.
    pub fn provenance(&self) -> String {
        format!("config={}", self.hash())
    }

    pub fn stopwords(&self) -> StopWords {
        StopWords::by_id(&self.stopwords_id).unwrap_or_else(StopWords::none)
    }

    pub fn hyperparams(&self) -> Hyperparams {
        Hyperparams {
            c: self.svm_c,
            tol: self.svm_tol,
            max_iter: self.svm_max_iter,
            seed: self.seed,
        }
    }

    pub fn dataset_params(&self) -> DatasetParams {
        DatasetParams {
            n: self.n,
            neg_pos_ratio: self.neg_pos_ratio,
            seed: self.seed,
        }
    }

    pub fn train_params(&self) -> TrainParams {
        TrainParams {
            hyperparams: self.hyperparams(),
            tf: self.tf_mode,
            calibration_fraction: self.calibration_fraction,
        }
    }

    pub fn experiment(&self) -> ExperimentConfig {
        ExperimentConfig {
            neg_pos_ratio: self.neg_pos_ratio,
            train_fraction: self.train_fraction,
            vocab_max_size: self.vocab_max_size,
            stopwords: self.stopwords(),
            train: self.train_params(),
        }
    }

    fn required<'a>(&self, key: &str, p: &'a Option<PathBuf>) -> Result<&'a PathBuf> {
        let p = p.as_ref().ok_or_else(|| range_err(key, "not set"))?;
        if !p.is_file() {
            return Err(range_err(key, format!("{} is not a readable file", p.display())));
        }
        Ok(p)
    }

    pub fn target_handle(&self) -> Result<CorpusHandle> {
        Ok(CorpusHandle::plain(self.required("target_path", &self.target_path)?))
    }

    /// The parallel corpus, projected onto `scoring_side` when read as
    /// monolingual text.
    pub fn parallel_handle(&self) -> Result<CorpusHandle> {
        match self.parallel_format {
            CorpusFormat::PairedFiles => Ok(CorpusHandle::paired(
                self.required("parallel_source_path", &self.parallel_source_path)?,
                self.required("parallel_target_path", &self.parallel_target_path)?,
                self.scoring_side,
            )),
            _ => Ok(CorpusHandle::tsv(
                self.required("parallel_path", &self.parallel_path)?,
                self.scoring_side,
            )),
        }
    }

    pub fn background_handle(&self) -> Result<CorpusHandle> {
        match &self.background_path {
            Some(_) => Ok(CorpusHandle::plain(
                self.required("background_path", &self.background_path)?,
            )),
            None => self.parallel_handle(),
        }
    }

    /// Non-fatal advisories given corpus sizes, when known.
    pub fn validate(&self, stats: &CorpusStats) -> Vec<String> {
        let mut w = Vec::new();
        if let Some(t) = stats.target_sentences {
            if t < 10 * self.n as u64 {
                w.push(format!(
                    "target sample has {t} sentences, fewer than 10 x n = {}",
                    10 * self.n
                ));
            }
        }
        if let Some(p) = stats.parallel_pairs {
            if self.k_pairs > p {
                w.push(format!(
                    "selection budget k_pairs = {} exceeds the parallel corpus size of {p} pairs",
                    self.k_pairs
                ));
            }
        }
        w
    }
}

/// Corpus sizes used by [`PipelineConfig::validate`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CorpusStats {
    pub target_sentences: Option<u64>,
    pub parallel_pairs: Option<u64>,
}

/// Reads a config file. Relative paths in it resolve against its directory.
pub fn load_config(path: &Path) -> Result<PipelineConfig> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let base = path.parent().unwrap_or(Path::new(""));
    PipelineConfig::parse(&text, base)
}
