//! Stage logic shared by the command line and the evaluation experiments:
//! dataset construction, vocabulary building and classifier training.

use std::sync::Arc;

use crate::batcher::{
    assemble_dataset, make_negative_batches, make_positive_batches, split_train_test, Batch, Label, LabeledDataset,
};
use crate::classifier::{decision_score, fit_platt, train_svm, Hyperparams, LinearModel};
use crate::corpus_io::Sentence;
use crate::error::{Error, Result};
use crate::textproc::{StopWords, TokenCounts, Vocabulary};
use crate::vectorizer::{max_term_count_texts, vectorize_texts, SparseVector, TfMode};

/// Derives an independent sub-seed for one named stage (splitmix64 over the
/// seed mixed with an FNV-1a hash of the name).
pub fn derive_seed(seed: u64, stage: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in stage.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    let mut z = seed ^ h;
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DatasetParams {
    pub n: usize,
    pub neg_pos_ratio: f64,
    pub seed: u64,
}

/// Positive batches from the whole target sample, then exactly
/// `floor(ratio * |pos|)` negative batches sampled from the background.
pub fn build_dataset<T, B>(target: T, background: B, p: &DatasetParams) -> Result<LabeledDataset>
where
    T: IntoIterator<Item = Result<Sentence>>,
    B: IntoIterator<Item = Result<Sentence>>,
{
    if !(p.neg_pos_ratio > 0.0 && p.neg_pos_ratio.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "negative/positive ratio must be > 0, got {}",
            p.neg_pos_ratio
        )));
    }
    let pos = make_positive_batches(target, p.n, derive_seed(p.seed, "positives"))?;
    let count = (p.neg_pos_ratio * pos.batches.len() as f64).floor() as usize;
    let neg = make_negative_batches(background, p.n, count, derive_seed(p.seed, "negatives"))?;
    let mut ds = assemble_dataset(pos, neg, p.neg_pos_ratio, derive_seed(p.seed, "assemble"))?;
    ds.seed = p.seed;
    Ok(ds)
}

/// Stratified train/test split with the stage seed derived from the dataset.
pub fn split_dataset(ds: &LabeledDataset, train_fraction: f64) -> Result<(LabeledDataset, LabeledDataset)> {
    split_train_test(ds, train_fraction, derive_seed(ds.seed, "split"))
}

/// Every sentence of `ds` becomes its own batch with the parent's label.
pub fn explode_to_sentences(ds: &LabeledDataset) -> LabeledDataset {
    let mut batches = Vec::new();
    for b in &ds.batches {
        for &id in &b.sentence_ids {
            batches.push(Batch {
                batch_id: batches.len() as u64,
                sentence_ids: vec![id],
                label: b.label,
            });
        }
    }
    LabeledDataset {
        batches,
        n: 1,
        neg_pos_ratio: ds.neg_pos_ratio,
        seed: ds.seed,
        positive_pool: Arc::clone(&ds.positive_pool),
        negative_pool: Arc::clone(&ds.negative_pool),
    }
}

/// Vocabulary over all sentences of the dataset's batches.
pub fn build_dataset_vocabulary(ds: &LabeledDataset, max_size: usize, stopwords: &StopWords) -> Result<Vocabulary> {
    let mut texts: Vec<&str> = Vec::new();
    for b in &ds.batches {
        texts.extend(ds.texts(b)?);
    }
    Vocabulary::from_counts(TokenCounts::from_texts_par(&texts, stopwords), max_size, stopwords)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TfKind {
    DocMax,
    /// Denominator taken from the training collection at fit time.
    CorpusMax,
}

impl TfKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TfKind::DocMax => "doc-max",
            TfKind::CorpusMax => "corpus-max",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "doc-max" => Some(TfKind::DocMax),
            "corpus-max" => Some(TfKind::CorpusMax),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainParams {
    pub hyperparams: Hyperparams,
    pub tf: TfKind,
    /// Share of the training split held out for Platt calibration; 0 disables
    /// calibration.
    pub calibration_fraction: f64,
}

impl Default for TrainParams {
    fn default() -> Self {
        TrainParams {
            hyperparams: Hyperparams::default(),
            tf: TfKind::DocMax,
            calibration_fraction: 0.2,
        }
    }
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub model: LinearModel,
    pub svm_examples: usize,
    pub calibration_examples: usize,
    pub warnings: Vec<String>,
}

/// Vectorizes each batch as one document.
pub fn vectorize_batches(ds: &LabeledDataset, vocab: &Vocabulary, mode: TfMode) -> Result<Vec<(SparseVector, Label)>> {
    ds.batches
        .iter()
        .map(|b| Ok((vectorize_texts(&ds.texts(b)?, vocab, mode)?, b.label)))
        .collect()
}

/// Trains the SVM on the training split minus a held-out calibration slice,
/// then fits Platt scaling on that slice.
pub fn train_classifier(train: &LabeledDataset, vocab: &Vocabulary, p: &TrainParams) -> Result<TrainOutcome> {
    let mut warnings = Vec::new();
    let calibrate = p.calibration_fraction > 0.0;
    if !(0.0..1.0).contains(&p.calibration_fraction) {
        return Err(Error::InvalidArgument(format!(
            "calibration fraction must be in [0, 1), got {}",
            p.calibration_fraction
        )));
    }
    let (fit_part, calib_part) = if calibrate {
        let smallest = train.count(Label::Positive).min(train.count(Label::Negative));
        let held = smallest - ((1.0 - p.calibration_fraction) * smallest as f64).floor() as usize;
        if held == 0 || held == smallest {
            warnings.push(format!(
                "training split too small for a {:.0}% calibration slice; Platt scaling skipped",
                p.calibration_fraction * 100.0
            ));
            (train.clone(), None)
        } else {
            let (a, b) = split_train_test(
                train,
                1.0 - p.calibration_fraction,
                derive_seed(train.seed, "calibration"),
            )?;
            (a, Some(b))
        }
    } else {
        (train.clone(), None)
    };

    let tf_mode = match p.tf {
        TfKind::DocMax => TfMode::DocMax,
        TfKind::CorpusMax => {
            let mut m = 0;
            for b in &fit_part.batches {
                m = m.max(max_term_count_texts(&fit_part.texts(b)?, vocab));
            }
            if m == 0 {
                return Err(Error::Insufficient(
                    "no in-vocabulary token in the training collection".into(),
                ));
            }
            TfMode::CorpusMax(m)
        }
    };

    let examples = vectorize_batches(&fit_part, vocab, tf_mode)?;
    let hp = Hyperparams {
        seed: derive_seed(train.seed, "svm"),
        ..p.hyperparams
    };
    let sol = train_svm(&examples, vocab.len(), &hp)?;
    let mut model = LinearModel::from_solution(sol, vocab.fingerprint(), hp, tf_mode);

    let mut calibration_examples = 0;
    if let Some(calib) = calib_part {
        let cal = vectorize_batches(&calib, vocab, tf_mode)?;
        let scores: Vec<f64> = cal
            .iter()
            .map(|(x, _)| decision_score(&model, x))
            .collect::<Result<_>>()?;
        let labels: Vec<Label> = cal.iter().map(|(_, l)| *l).collect();
        match fit_platt(&scores, &labels, 100) {
            Ok(fit) => {
                if !fit.converged {
                    warnings.push("Platt scaling stopped before convergence".into());
                }
                model.platt = Some(fit.params);
            }
            Err(e) => warnings.push(format!("Platt scaling skipped: {e}")),
        }
        calibration_examples = cal.len();
    }
    Ok(TrainOutcome {
        model,
        svm_examples: examples.len(),
        calibration_examples,
        warnings,
    })
}
