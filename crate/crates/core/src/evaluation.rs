//! Classifier metrics, the sentence/majority/batch method comparison, the
//! accuracy-versus-batch-size sweep, and report files (CSV and SVG).

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::batcher::{Label, LabeledDataset};
use crate::classifier::{decision_score, label_for, majority, LinearModel};
use crate::corpus_io::{open_monolingual, CorpusHandle, Sentence};
use crate::error::{Error, Result};
use crate::pipeline::{
    build_dataset, build_dataset_vocabulary, explode_to_sentences, split_dataset, train_classifier, DatasetParams,
    TrainParams,
};
use crate::textproc::{StopWords, Vocabulary};
use crate::vectorizer::vectorize_texts;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalMode {
    /// Whole-batch vectors, one prediction per batch.
    Batch,
    /// Every sentence on its own, one prediction per sentence.
    Sentence,
    /// Sentence predictions combined by strict majority, one per batch.
    Majority,
}

impl EvalMode {
    pub fn unit(self) -> &'static str {
        match self {
            EvalMode::Sentence => "sentence",
            EvalMode::Batch | EvalMode::Majority => "batch",
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            EvalMode::Batch => "batch",
            EvalMode::Sentence => "sentence",
            EvalMode::Majority => "majority",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Confusion {
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    pub fn_: u64,
}

impl Confusion {
    pub fn add(&mut self, truth: Label, predicted: Label) {
        match (truth == Label::Positive, predicted == Label::Positive) {
            (true, true) => self.tp += 1,
            (false, true) => self.fp += 1,
            (false, false) => self.tn += 1,
            (true, false) => self.fn_ += 1,
        }
    }

    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.tn + self.fn_
    }

    pub fn accuracy(&self) -> f64 {
        ratio(self.tp + self.tn, self.total())
    }

    pub fn precision(&self) -> f64 {
        ratio(self.tp, self.tp + self.fp)
    }

    pub fn recall(&self) -> f64 {
        ratio(self.tp, self.tp + self.fn_)
    }

    /// Harmonic mean of precision and recall; 0 when both are 0.
    pub fn f1(&self) -> f64 {
        let (p, r) = (self.precision(), self.recall());
        if p + r == 0.0 {
            0.0
        } else {
            2.0 * p * r / (p + r)
        }
    }
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub method: String,
    pub mode: EvalMode,
    pub n: usize,
    pub seed: u64,
    pub train_size: usize,
    pub confusion: Confusion,
    pub warnings: Vec<String>,
}

impl EvalReport {
    pub fn accuracy(&self) -> f64 {
        self.confusion.accuracy()
    }
}

/// Scores `test` with `m` in the given mode.
pub fn evaluate(m: &LinearModel, vocab: &Vocabulary, test: &LabeledDataset, mode: EvalMode) -> Result<EvalReport> {
    if test.batches.is_empty() {
        return Err(Error::InvalidArgument("empty test set".into()));
    }
    if test.count(Label::Positive) == 0 || test.count(Label::Negative) == 0 {
        return Err(Error::Insufficient("test set must contain both labels".into()));
    }
    let mut warnings = Vec::new();
    if mode == EvalMode::Majority && test.n == 1 {
        warnings.push("majority vote over single-sentence batches equals batch mode".into());
    }
    let per_batch: Vec<Confusion> = test
        .batches
        .par_iter()
        .map(|b| -> Result<Confusion> {
            let texts = test.texts(b)?;
            let mut c = Confusion::default();
            match mode {
                EvalMode::Batch => {
                    let x = vectorize_texts(&texts, vocab, m.tf_mode)?;
                    c.add(b.label, label_for(decision_score(m, &x)?, 0.0));
                }
                EvalMode::Sentence | EvalMode::Majority => {
                    let mut pos = 0;
                    for t in &texts {
                        let x = vectorize_texts(&[t], vocab, m.tf_mode)?;
                        let pred = label_for(decision_score(m, &x)?, 0.0);
                        if mode == EvalMode::Sentence {
                            c.add(b.label, pred);
                        }
                        pos += usize::from(pred == Label::Positive);
                    }
                    if mode == EvalMode::Majority {
                        c.add(b.label, majority(pos, texts.len()));
                    }
                }
            }
            Ok(c)
        })
        .collect::<Result<_>>()?;
    let mut confusion = Confusion::default();
    for c in per_batch {
        confusion.tp += c.tp;
        confusion.fp += c.fp;
        confusion.tn += c.tn;
        confusion.fn_ += c.fn_;
    }
    Ok(EvalReport {
        method: mode.as_str().into(),
        mode,
        n: test.n,
        seed: test.seed,
        train_size: 0,
        confusion,
        warnings,
    })
}

/// Settings shared by every cell of an experiment.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub neg_pos_ratio: f64,
    pub train_fraction: f64,
    pub vocab_max_size: usize,
    pub stopwords: StopWords,
    pub train: TrainParams,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            neg_pos_ratio: 2.0,
            train_fraction: 0.3,
            vocab_max_size: 70_000,
            stopwords: StopWords::english(),
            train: TrainParams::default(),
        }
    }
}

/// Something that can be streamed as sentences more than once.
pub trait SentenceSource: Sync {
    fn sentences(&self) -> Result<Box<dyn Iterator<Item = Result<Sentence>> + '_>>;
}

impl SentenceSource for [Sentence] {
    fn sentences(&self) -> Result<Box<dyn Iterator<Item = Result<Sentence>> + '_>> {
        Ok(Box::new(self.iter().cloned().map(Ok)))
    }
}

impl SentenceSource for Vec<Sentence> {
    fn sentences(&self) -> Result<Box<dyn Iterator<Item = Result<Sentence>> + '_>> {
        self.as_slice().sentences()
    }
}

impl SentenceSource for CorpusHandle {
    fn sentences(&self) -> Result<Box<dyn Iterator<Item = Result<Sentence>> + '_>> {
        Ok(Box::new(open_monolingual(self)?))
    }
}

fn dataset_for(
    cfg: &ExperimentConfig,
    target: &(impl SentenceSource + ?Sized),
    background: &(impl SentenceSource + ?Sized),
    n: usize,
    seed: u64,
) -> Result<(LabeledDataset, LabeledDataset, Vocabulary)> {
    let params = DatasetParams {
        n,
        neg_pos_ratio: cfg.neg_pos_ratio,
        seed,
    };
    let ds = build_dataset(target.sentences()?, background.sentences()?, &params)?;
    let (train, test) = split_dataset(&ds, cfg.train_fraction)?;
    let vocab = build_dataset_vocabulary(&train, cfg.vocab_max_size, &cfg.stopwords)?;
    Ok((train, test, vocab))
}

/// Trains and evaluates one batch-mode classifier at batch size `n`.
pub fn run_batch_cell(
    cfg: &ExperimentConfig,
    target: &(impl SentenceSource + ?Sized),
    background: &(impl SentenceSource + ?Sized),
    n: usize,
    seed: u64,
) -> Result<EvalReport> {
    let (train, test, vocab) = dataset_for(cfg, target, background, n, seed)?;
    let out = train_classifier(&train, &vocab, &cfg.train)?;
    let mut r = evaluate(&out.model, &vocab, &test, EvalMode::Batch)?;
    r.train_size = train.batches.len();
    r.warnings.extend(out.warnings);
    Ok(r)
}

/// The three methods on one split: a sentence-level classifier (trained on
/// the training batches' individual sentences) evaluated per sentence and by
/// majority vote per batch, and the batch classifier evaluated per batch.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodComparison {
    pub sentence: EvalReport,
    pub majority: EvalReport,
    pub batch: EvalReport,
}

impl MethodComparison {
    pub fn reports(&self) -> [&EvalReport; 3] {
        [&self.sentence, &self.majority, &self.batch]
    }
}

pub fn compare_methods_on(
    cfg: &ExperimentConfig,
    train: &LabeledDataset,
    test: &LabeledDataset,
    vocab: &Vocabulary,
    batch_model: &LinearModel,
) -> Result<MethodComparison> {
    let mut batch = evaluate(batch_model, vocab, test, EvalMode::Batch)?;
    batch.method = "batch-classifier".into();
    batch.train_size = train.batches.len();

    let sentences = explode_to_sentences(train);
    let sent_model = train_classifier(&sentences, vocab, &cfg.train)?;
    let mut sentence = evaluate(&sent_model.model, vocab, test, EvalMode::Sentence)?;
    sentence.method = "sentence-classifier".into();
    sentence.n = 1;
    sentence.train_size = sentences.batches.len();
    let mut majority = evaluate(&sent_model.model, vocab, test, EvalMode::Majority)?;
    majority.method = "batch-sentence-majority".into();
    majority.train_size = sentences.batches.len();
    Ok(MethodComparison {
        sentence,
        majority,
        batch,
    })
}

pub fn compare_methods(
    cfg: &ExperimentConfig,
    target: &(impl SentenceSource + ?Sized),
    background: &(impl SentenceSource + ?Sized),
    n: usize,
    seed: u64,
) -> Result<MethodComparison> {
    let (train, test, vocab) = dataset_for(cfg, target, background, n, seed)?;
    let out = train_classifier(&train, &vocab, &cfg.train)?;
    compare_methods_on(cfg, &train, &test, &vocab, &out.model)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub n: usize,
    pub mean_accuracy: f64,
    pub stddev: f64,
    pub num_seeds: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepCurve {
    pub points: Vec<SweepPoint>,
}

/// Population mean and standard deviation.
fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Batch-mode accuracy for every `(n, seed)` cell, aggregated per `n`.
/// Cells run in parallel; aggregation order is fixed.
pub fn sweep_batch_size(
    cfg: &ExperimentConfig,
    target: &(impl SentenceSource + ?Sized),
    background: &(impl SentenceSource + ?Sized),
    n_values: &[usize],
    seeds: &[u64],
) -> Result<SweepCurve> {
    if seeds.is_empty() {
        return Err(Error::InvalidArgument("sweep needs at least one seed".into()));
    }
    let mut ns = n_values.to_vec();
    ns.sort_unstable();
    ns.dedup();
    let cells: Vec<(usize, u64)> = ns.iter().flat_map(|&n| seeds.iter().map(move |&s| (n, s))).collect();
    let accs: Vec<f64> = cells
        .par_iter()
        .map(|&(n, s)| run_batch_cell(cfg, target, background, n, s).map(|r| r.accuracy()))
        .collect::<Result<_>>()?;
    let points = ns
        .iter()
        .zip(accs.chunks(seeds.len()))
        .map(|(&n, a)| {
            let (mean_accuracy, stddev) = mean_std(a);
            SweepPoint {
                n,
                mean_accuracy,
                stddev,
                num_seeds: a.len(),
            }
        })
        .collect();
    Ok(SweepCurve { points })
}

pub const METHODS_CSV: &str = "methods.csv";
pub const SWEEP_CSV: &str = "sweep.csv";
pub const SWEEP_SVG: &str = "sweep.svg";
pub const REPORT_MANIFEST: &str = "manifest.tsv";

fn methods_csv(reports: &[EvalReport], config_hash: &str) -> String {
    let mut s =
        String::from("method,unit,n,seed,train_size,test_size,accuracy,precision,recall,f1,tp,fp,tn,fn,config\n");
    for r in reports {
        let c = &r.confusion;
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{:.4},{:.4},{:.4},{:.4},{},{},{},{},{}",
            r.method,
            r.mode.unit(),
            r.n,
            r.seed,
            r.train_size,
            c.total(),
            c.accuracy(),
            c.precision(),
            c.recall(),
            c.f1(),
            c.tp,
            c.fp,
            c.tn,
            c.fn_,
            config_hash
        );
    }
    s
}

fn sweep_csv(curve: &SweepCurve, config_hash: &str) -> String {
    let mut s = String::from("n,mean_accuracy,stddev,num_seeds,config\n");
    for p in &curve.points {
        let _ = writeln!(
            s,
            "{},{:.4},{:.4},{},{}",
            p.n, p.mean_accuracy, p.stddev, p.num_seeds, config_hash
        );
    }
    s
}

/// Static SVG line plot of accuracy against log-scaled batch size, with
/// one-standard-deviation error bars.
pub fn sweep_svg(curve: &SweepCurve, config_hash: &str) -> String {
    const W: f64 = 640.0;
    const H: f64 = 400.0;
    const L: f64 = 70.0;
    const R: f64 = 20.0;
    const T: f64 = 30.0;
    const B: f64 = 50.0;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    );
    let _ = writeln!(s, "<desc>accuracy vs batch size; config {config_hash}</desc>");
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>"#);

    let pts = &curve.points;
    let (xmin, xmax) = match (pts.first(), pts.last()) {
        (Some(a), Some(b)) if b.n > a.n => ((a.n as f64).log10(), (b.n as f64).log10()),
        (Some(a), _) => ((a.n as f64).log10() - 0.5, (a.n as f64).log10() + 0.5),
        _ => (0.0, 1.0),
    };
    let lowest = pts.iter().map(|p| p.mean_accuracy - p.stddev).fold(1.0f64, f64::min);
    let ymin = ((lowest * 10.0).floor() / 10.0).clamp(0.0, 0.9);
    let ymax = 1.0;
    let px = |n: usize| L + ((n as f64).log10() - xmin) / (xmax - xmin) * (W - L - R);
    let py = |a: f64| T + (ymax - a.clamp(0.0, 1.0)) / (ymax - ymin) * (H - T - B);

    let _ = writeln!(
        s,
        r#"<path d="M{L:.2} {T:.2} V{:.2} H{:.2}" fill="none" stroke="black"/>"#,
        H - B,
        W - R
    );
    let mut tick = ymin;
    while tick <= ymax + 1e-9 {
        let y = py(tick);
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-size="11" text-anchor="end">{tick:.1}</text>"#,
            L - 6.0,
            y + 4.0
        );
        tick += 0.1;
    }
    for p in pts {
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-size="11" text-anchor="middle">{}</text>"#,
            px(p.n),
            H - B + 16.0,
            p.n
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="middle">sentences per batch (n)</text>"#,
        L + (W - L - R) / 2.0,
        H - 10.0
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.2}" font-size="12" text-anchor="middle" transform="rotate(-90 16 {:.2})">accuracy</text>"#,
        T + (H - T - B) / 2.0,
        T + (H - T - B) / 2.0
    );
    if !pts.is_empty() {
        let line: Vec<String> = pts
            .iter()
            .map(|p| format!("{:.2},{:.2}", px(p.n), py(p.mean_accuracy)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="steelblue" stroke-width="2"/>"#,
            line.join(" ")
        );
    }
    for p in pts {
        let x = px(p.n);
        let _ = writeln!(
            s,
            r#"<line class="errorbar" x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="gray"/>"#,
            py(p.mean_accuracy - p.stddev),
            py(p.mean_accuracy + p.stddev)
        );
        let _ = writeln!(
            s,
            r#"<circle class="marker" cx="{x:.2}" cy="{:.2}" r="4" fill="steelblue"/>"#,
            py(p.mean_accuracy)
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Writes the methods table, the sweep table and plot, and a manifest listing
/// them. Output is a pure function of the inputs.
pub fn emit_report(
    reports: &[EvalReport],
    curve: &SweepCurve,
    out_dir: &Path,
    config_hash: &str,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let files = [
        (METHODS_CSV, methods_csv(reports, config_hash)),
        (SWEEP_CSV, sweep_csv(curve, config_hash)),
        (SWEEP_SVG, sweep_svg(curve, config_hash)),
    ];
    let mut written = Vec::new();
    let mut manifest = String::from("file\tbytes\n");
    for (name, body) in &files {
        let p = out_dir.join(name);
        fs::write(&p, body).map_err(|e| Error::io(&p, e))?;
        let _ = writeln!(manifest, "{name}\t{}", body.len());
        written.push(p);
    }
    let p = out_dir.join(REPORT_MANIFEST);
    fs::write(&p, manifest).map_err(|e| Error::io(&p, e))?;
    written.push(p);
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::batcher::{Batch, SentencePool};
    use crate::classifier::{Hyperparams, StopReason};
    use crate::textproc::build_vocabulary;
    use crate::vectorizer::TfMode;
    use std::sync::Arc;

    /// Test set whose batches each hold one sentence: "good" or "bad".
    fn fixture(labels_and_words: &[(Label, &str)]) -> (LabeledDataset, Vocabulary) {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        let mut batches = Vec::new();
        for (i, (label, word)) in labels_and_words.iter().enumerate() {
            let s = Sentence {
                id: i as u64,
                text: word.to_string(),
            };
            if *label == Label::Positive {
                pos.push(s);
            } else {
                neg.push(s);
            }
            batches.push(Batch {
                batch_id: i as u64,
                sentence_ids: vec![i as u64],
                label: *label,
            });
        }
        let vocab = build_vocabulary(["good good bad"], 10, &StopWords::none()).unwrap();
        let ds = LabeledDataset {
            batches,
            n: 1,
            neg_pos_ratio: 1.0,
            seed: 0,
            positive_pool: Arc::new(SentencePool::new(pos)),
            negative_pool: Arc::new(SentencePool::new(neg)),
        };
        (ds, vocab)
    }

    /// +1 for "good", -1 for "bad".
    fn good_model(vocab: &Vocabulary, sign: f64) -> LinearModel {
        LinearModel {
            weights: vec![sign, -sign],
            bias: 0.0,
            vocab_fingerprint: vocab.fingerprint(),
            hyperparams: Hyperparams::default(),
            tf_mode: TfMode::DocMax,
            stop: StopReason::Converged,
            epochs: 1,
            platt: None,
        }
    }

    #[test]
    fn perfect_and_flipped_predictors() {
        let (ds, vocab) = fixture(&[
            (Label::Positive, "good"),
            (Label::Negative, "bad"),
            (Label::Positive, "good"),
            (Label::Negative, "bad"),
        ]);
        let r = evaluate(&good_model(&vocab, 1.0), &vocab, &ds, EvalMode::Batch).unwrap();
        assert_eq!(r.accuracy(), 1.0);
        assert_eq!((r.confusion.fp, r.confusion.fn_), (0, 0));
        let r = evaluate(&good_model(&vocab, -1.0), &vocab, &ds, EvalMode::Batch).unwrap();
        assert_eq!(r.accuracy(), 0.0);
    }

    #[test]
    fn hand_counted_confusion() {
        // Predictions: good -> +, bad -> -, "zzz" (OOV, score 0) -> -.
        let (ds, vocab) = fixture(&[
            (Label::Positive, "good"),
            (Label::Positive, "bad"),
            (Label::Positive, "zzz"),
            (Label::Negative, "bad"),
            (Label::Negative, "good"),
            (Label::Negative, "bad"),
        ]);
        let r = evaluate(&good_model(&vocab, 1.0), &vocab, &ds, EvalMode::Batch).unwrap();
        assert_eq!(
            r.confusion,
            Confusion {
                tp: 1,
                fp: 1,
                tn: 2,
                fn_: 2
            }
        );
        assert!((r.accuracy() - 0.5).abs() < 1e-15);
        assert!((r.confusion.precision() - 0.5).abs() < 1e-15);
        assert!((r.confusion.recall() - 1.0 / 3.0).abs() < 1e-15);
        let (p, rc) = (r.confusion.precision(), r.confusion.recall());
        assert_eq!(r.confusion.f1(), 2.0 * p * rc / (p + rc));
    }

    #[test]
    fn majority_with_n1_warns() {
        let (ds, vocab) = fixture(&[(Label::Positive, "good"), (Label::Negative, "bad")]);
        let r = evaluate(&good_model(&vocab, 1.0), &vocab, &ds, EvalMode::Majority).unwrap();
        assert_eq!(r.accuracy(), 1.0);
        assert_eq!(r.warnings.len(), 1);
    }

    #[test]
    fn evaluate_needs_both_labels() {
        let (ds, vocab) = fixture(&[(Label::Positive, "good")]);
        assert!(evaluate(&good_model(&vocab, 1.0), &vocab, &ds, EvalMode::Batch).is_err());
    }

    #[test]
    fn reports_are_deterministic_and_count_markers() {
        let dir = tempfile::tempdir().unwrap();
        let curve = SweepCurve {
            points: vec![
                SweepPoint {
                    n: 1,
                    mean_accuracy: 0.8,
                    stddev: 0.01,
                    num_seeds: 5,
                },
                SweepPoint {
                    n: 10,
                    mean_accuracy: 0.97,
                    stddev: 0.005,
                    num_seeds: 5,
                },
                SweepPoint {
                    n: 20,
                    mean_accuracy: 1.0,
                    stddev: 0.0,
                    num_seeds: 5,
                },
            ],
        };
        let files = emit_report(&[], &curve, dir.path(), "h").unwrap();
        let svg = fs::read_to_string(dir.path().join(SWEEP_SVG)).unwrap();
        assert_eq!(svg.matches("<circle").count(), 3);
        assert!(!svg.contains("href"));
        let first: Vec<Vec<u8>> = files.iter().map(|f| fs::read(f).unwrap()).collect();
        emit_report(&[], &curve, dir.path(), "h").unwrap();
        let second: Vec<Vec<u8>> = files.iter().map(|f| fs::read(f).unwrap()).collect();
        assert_eq!(first, second);
    }

    #[test]
    fn empty_curve_csv_is_header_only() {
        let dir = tempfile::tempdir().unwrap();
        emit_report(&[], &SweepCurve::default(), dir.path(), "h").unwrap();
        let csv = fs::read_to_string(dir.path().join(SWEEP_CSV)).unwrap();
        assert_eq!(csv.lines().count(), 1);
    }

    #[test]
    fn single_point_sweep_has_zero_stddev() {
        let target: Vec<Sentence> = (0..300)
            .map(|i| Sentence {
                id: i,
                text: format!("market minister economy w{}", i % 7),
            })
            .collect();
        let background: Vec<Sentence> = (0..900)
            .map(|i| Sentence {
                id: i,
                text: format!("cart checkout shipping w{}", i % 7),
            })
            .collect();
        let curve = sweep_batch_size(&ExperimentConfig::default(), &target, &background, &[10], &[1]).unwrap();
        assert_eq!(curve.points.len(), 1);
        assert_eq!(curve.points[0].stddev, 0.0);
        assert_eq!(curve.points[0].num_seeds, 1);
        assert_eq!(curve.points[0].mean_accuracy, 1.0);
    }
}
