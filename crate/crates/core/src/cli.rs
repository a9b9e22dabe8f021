//! Command-line front end. Each subcommand runs one pipeline stage and writes
//! fixed-name outputs plus a JSON run manifest under the run directory.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::batcher::{
    group_unlabeled, random_groups, Batch, DatasetManifest, Label, LabeledDataset, SentencePool, UnlabeledDocument,
};
use crate::classifier::{load_model_for, save_model};
use crate::config::{help_text, load_config, CorpusStats, Grouping, PipelineConfig};
use crate::corpus_io::{open_monolingual, open_parallel, write_selection, GroupIndex, SelectedDocument, SentencePair};
use crate::error::{Error, Result};
use crate::evaluation::{compare_methods_on, emit_report, sweep_batch_size, SweepCurve};
use crate::fixtures::{write_fixtures, FixtureParams};
use crate::pipeline::{build_dataset, build_dataset_vocabulary, derive_seed, split_dataset, train_classifier};
use crate::ranker::{
    partition_buckets, rank, read_scores, score_corpus, select_top_k, write_bucket_report, write_scores,
};
use crate::textproc::{hex_digest, load_vocabulary, save_vocabulary};

pub const DATASET_FILE: &str = "dataset.tsv";
pub const VOCAB_FILE: &str = "vocab.tsv";
pub const MODEL_FILE: &str = "model.txt";
pub const SCORES_FILE: &str = "scores.tsv";
pub const SELECTION_FILE: &str = "selection.tsv";
pub const SELECTION_MANIFEST_FILE: &str = "selection.manifest.tsv";
pub const BUCKETS_FILE: &str = "buckets.tsv";
pub const EVAL_DIR: &str = "eval";
pub const SWEEP_DIR: &str = "sweep";

#[derive(Debug, Parser)]
#[command(
    name = "domain-sieve",
    version,
    about = "Rank and select in-domain documents of a parallel corpus"
)]
pub struct Cli {
    /// Configuration file (`key = value` lines).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Run directory; overrides `out_dir`.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Overrides `seed`.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Overrides `workers`.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Write progress as JSON lines on stderr.
    #[arg(long, global = true)]
    pub log_jsonl: bool,
    /// List configuration keys and defaults, then exit.
    #[arg(long)]
    pub help_config: bool,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand, Clone)]
pub enum Command {
    /// Sample positive and negative batches and write dataset.tsv.
    MakeDataset,
    /// Build the vocabulary from the training split; writes vocab.tsv.
    BuildVocab,
    /// Train the classifier and calibrate it; writes model.txt.
    Train,
    /// Score every document of the parallel corpus; writes scores.tsv.
    Score,
    /// Select the top documents within the budget and report buckets.
    RankSelect,
    /// Compare sentence, majority and batch methods on the test split.
    Evaluate,
    /// Accuracy against batch size over several seeds.
    Sweep,
    /// make-dataset, build-vocab, train, score, rank-select and evaluate.
    RunAll,
    /// Write generated news/web fixture corpora and a matching config.
    GenFixtures {
        /// Destination directory.
        #[arg(long)]
        dir: PathBuf,
        /// Smaller corpora for quick trials.
        #[arg(long)]
        small: bool,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::MakeDataset => "make-dataset",
            Command::BuildVocab => "build-vocab",
            Command::Train => "train",
            Command::Score => "score",
            Command::RankSelect => "rank-select",
            Command::Evaluate => "evaluate",
            Command::Sweep => "sweep",
            Command::RunAll => "run-all",
            Command::GenFixtures { .. } => "gen-fixtures",
        }
    }

    fn module(&self) -> &'static str {
        match self {
            Command::MakeDataset => "batcher",
            Command::BuildVocab => "textproc",
            Command::Train => "classifier",
            Command::Score | Command::RankSelect => "ranker",
            Command::Evaluate | Command::Sweep => "evaluation",
            Command::RunAll | Command::GenFixtures { .. } => "cli",
        }
    }
}

/// An error tagged with the stage that raised it.
#[derive(Debug)]
pub struct StageError {
    pub stage: &'static str,
    pub module: &'static str,
    pub error: Error,
}

impl StageError {
    pub fn exit_code(&self) -> i32 {
        if self.error.is_validation() {
            2
        } else {
            1
        }
    }
}

impl std::fmt::Display for StageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "stage '{}' ({}): {}", self.stage, self.module, self.error)
    }
}

/// Progress output on stderr, plain or JSON lines.
#[derive(Debug, Clone, Copy)]
pub struct Logger {
    jsonl: bool,
}

impl Logger {
    pub fn info(&self, stage: &str, message: &str) {
        if self.jsonl {
            let v = serde_json::json!({"stage": stage, "event": "info", "message": message});
            eprintln!("{v}");
        } else {
            eprintln!("[{stage}] {message}");
        }
    }

    pub fn progress(&self, stage: &str, documents: usize) {
        if self.jsonl {
            let v = serde_json::json!({"stage": stage, "event": "progress", "documents": documents});
            eprintln!("{v}");
        } else {
            eprintln!("[{stage}] {documents} documents");
        }
    }

    pub fn warn(&self, stage: &str, message: &str) {
        if self.jsonl {
            let v = serde_json::json!({"stage": stage, "event": "warning", "message": message});
            eprintln!("{v}");
        } else {
            eprintln!("[{stage}] warning: {message}");
        }
    }
}

#[derive(Debug, Serialize)]
struct FileDigest {
    path: String,
    sha256: String,
}

#[derive(Debug, Serialize)]
struct RunManifest {
    subcommand: String,
    config_hash: String,
    config: BTreeMap<String, String>,
    inputs: Vec<FileDigest>,
    outputs: Vec<FileDigest>,
    warnings: Vec<String>,
    wall_time_secs: f64,
    version: String,
}

fn sha256_file(path: &Path) -> Result<String> {
    let mut f = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut h = Sha256::new();
    let mut buf = vec![0u8; 1 << 16];
    loop {
        let k = f.read(&mut buf).map_err(|e| Error::io(path, e))?;
        if k == 0 {
            break;
        }
        h.update(&buf[..k]);
    }
    Ok(hex_digest(&h.finalize()))
}

fn digests(paths: &[PathBuf]) -> Result<Vec<FileDigest>> {
    paths
        .iter()
        .map(|p| {
            Ok(FileDigest {
                path: p.display().to_string(),
                sha256: sha256_file(p)?,
            })
        })
        .collect()
}

pub fn manifest_path(out_dir: &Path, stage: &str) -> PathBuf {
    out_dir.join(format!("manifest.{stage}.json"))
}

/// What a stage read and wrote.
#[derive(Debug, Default)]
struct StageRecord {
    inputs: Vec<PathBuf>,
    outputs: Vec<PathBuf>,
    warnings: Vec<String>,
}

struct Ctx {
    cfg: PipelineConfig,
    log: Logger,
}

impl Ctx {
    fn out(&self, name: &str) -> PathBuf {
        self.cfg.out_dir.join(name)
    }

    /// A stage artifact that must already exist.
    fn artifact(&self, name: &str) -> Result<PathBuf> {
        let p = self.out(name);
        if p.is_file() {
            Ok(p)
        } else {
            Err(Error::Config {
                key: "out_dir".into(),
                message: format!("{} not found; run the stage that produces it first", p.display()),
            })
        }
    }

    fn warn_all(&self, stage: &str, rec: &StageRecord) {
        for w in &rec.warnings {
            self.log.warn(stage, w);
        }
    }

    fn load_dataset(&self, rec: &mut StageRecord) -> Result<LabeledDataset> {
        let path = self.artifact(DATASET_FILE)?;
        let manifest = DatasetManifest::load(&path)?;
        rec.inputs.push(path);
        let target = self.cfg.target_handle()?;
        let background = self.cfg.background_handle()?;
        let pos = SentencePool::collect_ids(open_monolingual(&target)?, &manifest.ids_for(Label::Positive))?;
        let neg = SentencePool::collect_ids(open_monolingual(&background)?, &manifest.ids_for(Label::Negative))?;
        rec.inputs.extend(target.paths.iter().cloned());
        rec.inputs.extend(background.paths.iter().cloned());
        Ok(manifest.into_dataset(pos, neg))
    }
}

fn make_dataset(ctx: &Ctx) -> Result<StageRecord> {
    let cfg = &ctx.cfg;
    let mut rec = StageRecord::default();
    let target = cfg.target_handle()?;
    let background = cfg.background_handle()?;
    let ds = build_dataset(
        open_monolingual(&target)?,
        open_monolingual(&background)?,
        &cfg.dataset_params(),
    )?;
    let stats = CorpusStats {
        target_sentences: Some(ds.positive_pool.len() as u64),
        parallel_pairs: None,
    };
    rec.warnings.extend(cfg.validate(&stats));
    ctx.log.info(
        "make-dataset",
        &format!(
            "{} positive and {} negative batches of {}",
            ds.count(Label::Positive),
            ds.count(Label::Negative),
            ds.n
        ),
    );
    let mut meta = BTreeMap::new();
    meta.insert("provenance".into(), cfg.provenance());
    meta.insert("target".into(), target.paths[0].display().to_string());
    meta.insert(
        "background".into(),
        background
            .paths
            .iter()
            .map(|p| p.display().to_string())
            .collect::<Vec<_>>()
            .join(","),
    );
    let out = ctx.out(DATASET_FILE);
    DatasetManifest::from_dataset(&ds, meta).save(&out)?;
    rec.inputs.extend(target.paths.iter().cloned());
    rec.inputs.extend(background.paths.iter().cloned());
    rec.outputs.push(out);
    Ok(rec)
}

fn build_vocab(ctx: &Ctx) -> Result<StageRecord> {
    let cfg = &ctx.cfg;
    let mut rec = StageRecord::default();
    let ds = ctx.load_dataset(&mut rec)?;
    let (train, _) = split_dataset(&ds, cfg.train_fraction)?;
    let vocab = build_dataset_vocabulary(&train, cfg.vocab_max_size, &cfg.stopwords())?;
    if vocab.is_empty() {
        return Err(Error::Insufficient("vocabulary is empty".into()));
    }
    ctx.log.info("build-vocab", &format!("{} entries", vocab.len()));
    let out = ctx.out(VOCAB_FILE);
    save_vocabulary(&vocab, &out, Some(&cfg.provenance()))?;
    rec.outputs.push(out);
    Ok(rec)
}

fn train(ctx: &Ctx) -> Result<StageRecord> {
    let cfg = &ctx.cfg;
    let mut rec = StageRecord::default();
    let vocab_path = ctx.artifact(VOCAB_FILE)?;
    let vocab = load_vocabulary(&vocab_path)?;
    rec.inputs.push(vocab_path);
    let ds = ctx.load_dataset(&mut rec)?;
    let (train, _) = split_dataset(&ds, cfg.train_fraction)?;
    let outcome = train_classifier(&train, &vocab, &cfg.train_params())?;
    ctx.log.info(
        "train",
        &format!(
            "{} training and {} calibration batches, {} after {} passes",
            outcome.svm_examples,
            outcome.calibration_examples,
            outcome.model.stop.as_str(),
            outcome.model.epochs
        ),
    );
    rec.warnings.extend(outcome.warnings);
    let out = ctx.out(MODEL_FILE);
    save_model(&outcome.model, &out, Some(&cfg.provenance()))?;
    rec.outputs.push(out);
    Ok(rec)
}

/// Every pair of the parallel corpus in memory, for random grouping.
fn read_all_pairs(cfg: &PipelineConfig) -> Result<Vec<SentencePair>> {
    open_parallel(&cfg.parallel_handle()?)?.collect()
}

fn score(ctx: &Ctx) -> Result<StageRecord> {
    let cfg = &ctx.cfg;
    let mut rec = StageRecord::default();
    let vocab_path = ctx.artifact(VOCAB_FILE)?;
    let model_path = ctx.artifact(MODEL_FILE)?;
    let vocab = load_vocabulary(&vocab_path)?;
    let model = load_model_for(&model_path, &vocab)?;
    let parallel = cfg.parallel_handle()?;
    rec.inputs.extend([vocab_path, model_path]);
    rec.inputs.extend(parallel.paths.iter().cloned());

    let log = ctx.log;
    let mut next_report = 0usize;
    let progress = |done: usize| {
        if done >= next_report {
            log.progress("score", done);
            next_report = done + 10_000;
        }
    };
    let scored = match cfg.grouping {
        Grouping::Consecutive => score_corpus(
            &model,
            &vocab,
            group_unlabeled(open_parallel(&parallel)?, cfg.n, cfg.scoring_side),
            cfg.workers,
            progress,
        )?,
        Grouping::Random => {
            let pairs = read_all_pairs(cfg)?;
            let groups = random_groups(pairs.len() as u64, cfg.n, derive_seed(cfg.seed, "grouping"));
            let side = cfg.scoring_side;
            let docs = groups.into_iter().enumerate().map(|(i, ids)| {
                let texts = ids
                    .iter()
                    .map(|&id| pairs[id as usize].side(side).to_string())
                    .collect();
                Ok(UnlabeledDocument {
                    batch: Batch {
                        batch_id: i as u64,
                        sentence_ids: ids,
                        label: Label::Unlabeled,
                    },
                    texts,
                })
            });
            score_corpus(&model, &vocab, docs, cfg.workers, progress)?
        }
    };
    ctx.log.info("score", &format!("scored {} documents", scored.len()));
    let out = ctx.out(SCORES_FILE);
    write_scores(&scored, &out, Some(&cfg.provenance()))?;
    rec.outputs.push(out);
    Ok(rec)
}

fn rank_select(ctx: &Ctx) -> Result<StageRecord> {
    let cfg = &ctx.cfg;
    let mut rec = StageRecord::default();
    let scores_path = ctx.artifact(SCORES_FILE)?;
    let ranked = rank(read_scores(&scores_path)?)?;
    rec.inputs.push(scores_path);
    let parallel = cfg.parallel_handle()?;
    rec.inputs.extend(parallel.paths.iter().cloned());

    let total: u64 = ranked.docs().iter().map(|d| d.size as u64).sum();
    rec.warnings.extend(cfg.validate(&CorpusStats {
        target_sentences: None,
        parallel_pairs: Some(total),
    }));
    let chosen = select_top_k(&ranked, cfg.k_pairs)?;
    let buckets = partition_buckets(&ranked, cfg.num_buckets)?;
    let prov = cfg.provenance();
    let bucket_path = ctx.out(BUCKETS_FILE);
    write_bucket_report(&buckets, &bucket_path, Some(&prov))?;

    let score_of: BTreeMap<u64, f64> = ranked.docs().iter().map(|d| (d.batch_id, d.score)).collect();
    let out = ctx.out(SELECTION_FILE);
    let manifest = ctx.out(SELECTION_MANIFEST_FILE);
    let summary = match cfg.grouping {
        Grouping::Consecutive => {
            let index = GroupIndex::build(&parallel, cfg.n)?;
            let docs = chosen.iter().map(|&id| {
                Ok(SelectedDocument {
                    doc_id: id,
                    score: score_of[&id],
                    pairs: index.read_group(id as usize)?,
                })
            });
            write_selection(docs, &out, &manifest, Some(&prov))?
        }
        Grouping::Random => {
            let pairs = read_all_pairs(cfg)?;
            let groups = random_groups(pairs.len() as u64, cfg.n, derive_seed(cfg.seed, "grouping"));
            let docs = chosen.iter().map(|&id| {
                let ids = groups
                    .get(id as usize)
                    .ok_or_else(|| Error::InvalidArgument(format!("document {id} not in the corpus grouping")))?;
                Ok(SelectedDocument {
                    doc_id: id,
                    score: score_of[&id],
                    pairs: ids.iter().map(|&i| pairs[i as usize].clone()).collect(),
                })
            });
            write_selection(docs, &out, &manifest, Some(&prov))?
        }
    };
    ctx.log.info(
        "rank-select",
        &format!(
            "selected {} documents, {} pairs (budget {})",
            summary.documents_written, summary.pairs_written, cfg.k_pairs
        ),
    );
    rec.outputs.extend([out, manifest, bucket_path]);
    Ok(rec)
}

fn evaluate(ctx: &Ctx) -> Result<StageRecord> {
    let cfg = &ctx.cfg;
    let mut rec = StageRecord::default();
    let vocab_path = ctx.artifact(VOCAB_FILE)?;
    let model_path = ctx.artifact(MODEL_FILE)?;
    let vocab = load_vocabulary(&vocab_path)?;
    let model = load_model_for(&model_path, &vocab)?;
    rec.inputs.extend([vocab_path, model_path]);
    let ds = ctx.load_dataset(&mut rec)?;
    let (train, test) = split_dataset(&ds, cfg.train_fraction)?;
    let cmp = compare_methods_on(&cfg.experiment(), &train, &test, &vocab, &model)?;
    for r in cmp.reports() {
        ctx.log.info(
            "evaluate",
            &format!(
                "{}: accuracy {:.4} over {} {}",
                r.method,
                r.accuracy(),
                r.confusion.total(),
                if r.mode.unit() == "batch" {
                    "batches"
                } else {
                    "sentences"
                }
            ),
        );
        rec.warnings.extend(r.warnings.iter().cloned());
    }
    let reports: Vec<_> = cmp.reports().into_iter().cloned().collect();
    rec.outputs.extend(emit_report(
        &reports,
        &SweepCurve::default(),
        &ctx.out(EVAL_DIR),
        &cfg.hash(),
    )?);
    Ok(rec)
}

fn sweep(ctx: &Ctx) -> Result<StageRecord> {
    let cfg = &ctx.cfg;
    let mut rec = StageRecord::default();
    let target = cfg.target_handle()?;
    let background = cfg.background_handle()?;
    let curve = sweep_batch_size(
        &cfg.experiment(),
        &target,
        &background,
        &cfg.sweep_n_values,
        &cfg.sweep_seeds,
    )?;
    for p in &curve.points {
        ctx.log.info(
            "sweep",
            &format!("n={}: accuracy {:.4} (sd {:.4})", p.n, p.mean_accuracy, p.stddev),
        );
    }
    rec.inputs.extend(target.paths.iter().cloned());
    rec.inputs.extend(background.paths.iter().cloned());
    rec.outputs
        .extend(emit_report(&[], &curve, &ctx.out(SWEEP_DIR), &cfg.hash())?);
    Ok(rec)
}

fn gen_fixtures(dir: &Path, small: bool, cfg: &PipelineConfig) -> Result<StageRecord> {
    let params = if small {
        FixtureParams {
            news_sentences: 5_000,
            web_pairs: 12_000,
            seed: cfg.seed,
            ..FixtureParams::default()
        }
    } else {
        FixtureParams {
            seed: cfg.seed,
            ..FixtureParams::default()
        }
    };
    let (news, web) = write_fixtures(dir, &params)?;
    let conf = dir.join("pipeline.conf");
    let budget = params.web_pairs / 4;
    let text =
        format!("# generated fixture corpora\ntarget_path = news.txt\nparallel_path = web.tsv\nk_pairs = {budget}\n");
    fs::write(&conf, text).map_err(|e| Error::io(&conf, e))?;
    Ok(StageRecord {
        inputs: Vec::new(),
        outputs: vec![news, web, conf],
        warnings: Vec::new(),
    })
}

fn write_manifest(ctx: &Ctx, stage: &str, rec: &StageRecord, started: Instant) -> Result<()> {
    let config = ctx
        .cfg
        .render()
        .lines()
        .filter_map(|l| l.split_once(" = "))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect();
    let mut inputs = rec.inputs.clone();
    inputs.sort();
    inputs.dedup();
    let m = RunManifest {
        subcommand: stage.into(),
        config_hash: ctx.cfg.hash(),
        config,
        inputs: digests(&inputs)?,
        outputs: digests(&rec.outputs)?,
        warnings: rec.warnings.clone(),
        wall_time_secs: started.elapsed().as_secs_f64(),
        version: env!("CARGO_PKG_VERSION").into(),
    };
    let path = manifest_path(&ctx.cfg.out_dir, stage);
    let tmp = path.with_extension("json.tmp");
    let body = serde_json::to_string_pretty(&m).expect("manifest serializes");
    let mut f = File::create(&tmp).map_err(|e| Error::io(&tmp, e))?;
    f.write_all(body.as_bytes())
        .and_then(|_| f.write_all(b"\n"))
        .and_then(|_| f.sync_all())
        .map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, &path).map_err(|e| Error::io(&path, e))
}

fn remove_stale(path: &Path) -> Result<()> {
    match fs::remove_file(path) {
        Err(e) if e.kind() != io::ErrorKind::NotFound => Err(Error::io(path, e)),
        _ => Ok(()),
    }
}

/// Runs one non-composite stage with manifest bookkeeping.
fn run_stage(ctx: &Ctx, cmd: &Command) -> std::result::Result<(), StageError> {
    let tag = |error: Error| StageError {
        stage: cmd.name(),
        module: cmd.module(),
        error,
    };
    let started = Instant::now();
    let manifest = manifest_path(&ctx.cfg.out_dir, cmd.name());
    remove_stale(&manifest).map_err(tag)?;
    fs::create_dir_all(&ctx.cfg.out_dir).map_err(|e| tag(Error::io(&ctx.cfg.out_dir, e)))?;
    let rec = match cmd {
        Command::MakeDataset => make_dataset(ctx),
        Command::BuildVocab => build_vocab(ctx),
        Command::Train => train(ctx),
        Command::Score => score(ctx),
        Command::RankSelect => rank_select(ctx),
        Command::Evaluate => evaluate(ctx),
        Command::Sweep => sweep(ctx),
        Command::GenFixtures { .. } | Command::RunAll => unreachable!("not a single stage"),
    }
    .map_err(tag)?;
    ctx.warn_all(cmd.name(), &rec);
    write_manifest(ctx, cmd.name(), &rec, started).map_err(tag)?;
    ctx.log
        .info(cmd.name(), &format!("done in {:.2}s", started.elapsed().as_secs_f64()));
    Ok(())
}

const RUN_ALL: [Command; 6] = [
    Command::MakeDataset,
    Command::BuildVocab,
    Command::Train,
    Command::Score,
    Command::RankSelect,
    Command::Evaluate,
];

fn resolve_config(cli: &Cli) -> Result<PipelineConfig> {
    let mut cfg = match &cli.config {
        Some(p) => {
            if !p.is_file() {
                return Err(Error::Config {
                    key: "--config".into(),
                    message: format!("{} is not a readable file", p.display()),
                });
            }
            load_config(p)?
        }
        None => PipelineConfig::default(),
    };
    if let Some(out) = &cli.out {
        cfg.out_dir = out.clone();
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(w) = cli.workers {
        cfg.workers = w;
    }
    cfg.check_ranges()?;
    Ok(cfg)
}

/// Runs the parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    if cli.help_config {
        print!("{}", help_text());
        return 0;
    }
    let Some(cmd) = cli.command.clone() else {
        eprintln!("error: no subcommand given (see --help)");
        return 2;
    };
    let log = Logger { jsonl: cli.log_jsonl };
    let cfg = match resolve_config(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: configuration: {e}");
            return 2;
        }
    };
    let ctx = Ctx { cfg, log };
    let result = match &cmd {
        Command::RunAll => {
            let started = Instant::now();
            let _ = remove_stale(&manifest_path(&ctx.cfg.out_dir, "run-all"));
            let r = RUN_ALL.iter().try_for_each(|c| run_stage(&ctx, c));
            r.and_then(|_| {
                let mut rec = StageRecord::default();
                for c in &RUN_ALL {
                    rec.outputs.push(manifest_path(&ctx.cfg.out_dir, c.name()));
                }
                write_manifest(&ctx, "run-all", &rec, started).map_err(|error| StageError {
                    stage: "run-all",
                    module: "cli",
                    error,
                })
            })
        }
        Command::GenFixtures { dir, small } => gen_fixtures(dir, *small, &ctx.cfg)
            .map(|rec| {
                for p in &rec.outputs {
                    log.info("gen-fixtures", &format!("wrote {}", p.display()));
                }
            })
            .map_err(|error| StageError {
                stage: "gen-fixtures",
                module: "fixtures",
                error,
            }),
        single => run_stage(&ctx, single),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn main() -> i32 {
    run(Cli::parse())
}
