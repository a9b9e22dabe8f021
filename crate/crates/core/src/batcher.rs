//! Sentence batches acting as pseudo-documents.
//!
//! Training batches are drawn at random (positives by shuffling the target
//! sample, negatives by reservoir sampling the background). Scoring documents
//! are consecutive runs of the heterogeneous corpus.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus_io::{LanguageSide, Sentence, SentencePair};
use crate::error::{Error, Result};
use crate::textproc::{tokenize, TokenList};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Positive,
    Negative,
    Unlabeled,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::Positive => "positive",
            Label::Negative => "negative",
            Label::Unlabeled => "unlabeled",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "positive" => Some(Label::Positive),
            "negative" => Some(Label::Negative),
            "unlabeled" => Some(Label::Unlabeled),
            _ => None,
        }
    }

    /// +1 for positive, -1 otherwise.
    pub fn sign(self) -> f64 {
        if self == Label::Positive {
            1.0
        } else {
            -1.0
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Batch {
    pub batch_id: u64,
    pub sentence_ids: Vec<u64>,
    pub label: Label,
}

/// Sentences kept in memory for batch materialization, sorted by id.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SentencePool {
    sentences: Vec<Sentence>,
}

impl SentencePool {
    pub fn new(mut sentences: Vec<Sentence>) -> Self {
        sentences.sort_unstable_by_key(|s| s.id);
        SentencePool { sentences }
    }

    /// Keeps only the sentences whose ids are in `wanted`.
    pub fn collect_ids<I>(stream: I, wanted: &HashSet<u64>) -> Result<Self>
    where
        I: IntoIterator<Item = Result<Sentence>>,
    {
        let mut kept = Vec::with_capacity(wanted.len());
        for s in stream {
            let s = s?;
            if wanted.contains(&s.id) {
                kept.push(s);
            }
        }
        if kept.len() != wanted.len() {
            return Err(Error::Insufficient(format!(
                "corpus supplies {} of {} referenced sentences",
                kept.len(),
                wanted.len()
            )));
        }
        Ok(SentencePool::new(kept))
    }

    pub fn get(&self, id: u64) -> Option<&str> {
        self.sentences
            .binary_search_by_key(&id, |s| s.id)
            .ok()
            .map(|i| self.sentences[i].text.as_str())
    }

    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    fn retain_ids(&mut self, used: &HashSet<u64>) {
        self.sentences.retain(|s| used.contains(&s.id));
    }
}

/// Batches together with the sentences they reference.
#[derive(Debug, Clone)]
pub struct SampledBatches {
    pub batches: Vec<Batch>,
    pub pool: SentencePool,
}

fn usable<I>(stream: I) -> impl Iterator<Item = Result<Sentence>>
where
    I: IntoIterator<Item = Result<Sentence>>,
{
    stream
        .into_iter()
        .filter(|s| s.as_ref().map_or(true, |s| !s.text.trim().is_empty()))
}

fn partition(ids: Vec<u64>, n: usize, label: Label) -> Vec<Batch> {
    ids.chunks_exact(n)
        .enumerate()
        .map(|(i, chunk)| Batch {
            batch_id: i as u64,
            sentence_ids: chunk.to_vec(),
            label,
        })
        .collect()
}

fn finish(batches: Vec<Batch>, mut pool: SentencePool) -> SampledBatches {
    let used: HashSet<u64> = batches.iter().flat_map(|b| b.sentence_ids.iter().copied()).collect();
    pool.retain_ids(&used);
    SampledBatches { batches, pool }
}

/// Shuffles all non-empty target sentences and cuts them into groups of `n`.
/// A trailing group shorter than `n` is dropped.
pub fn make_positive_batches<I>(target: I, n: usize, seed: u64) -> Result<SampledBatches>
where
    I: IntoIterator<Item = Result<Sentence>>,
{
    if n == 0 {
        return Err(Error::InvalidArgument("batch size n must be >= 1".into()));
    }
    let sentences: Vec<Sentence> = usable(target).collect::<Result<_>>()?;
    if sentences.len() < n {
        return Err(Error::Insufficient(format!(
            "target sample has {} usable sentences, batch size needs at least {n}",
            sentences.len()
        )));
    }
    let mut ids: Vec<u64> = sentences.iter().map(|s| s.id).collect();
    ids.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    Ok(finish(partition(ids, n, Label::Positive), SentencePool::new(sentences)))
}

/// Uniform sample of `n * count` background sentences without replacement
/// (single-pass reservoir), shuffled and cut into `count` batches.
pub fn make_negative_batches<I>(background: I, n: usize, count: usize, seed: u64) -> Result<SampledBatches>
where
    I: IntoIterator<Item = Result<Sentence>>,
{
    if n == 0 {
        return Err(Error::InvalidArgument("batch size n must be >= 1".into()));
    }
    if count == 0 {
        return Ok(SampledBatches {
            batches: Vec::new(),
            pool: SentencePool::default(),
        });
    }
    let want = n
        .checked_mul(count)
        .ok_or_else(|| Error::InvalidArgument("n * count overflows".into()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reservoir: Vec<Sentence> = Vec::with_capacity(want);
    for (seen, s) in usable(background).enumerate() {
        let s = s?;
        if reservoir.len() < want {
            reservoir.push(s);
        } else {
            let j = rng.random_range(0..=seen as u64);
            if j < want as u64 {
                reservoir[j as usize] = s;
            }
        }
    }
    if reservoir.len() < want {
        return Err(Error::Insufficient(format!(
            "background has {} usable sentences, {count} negative batches of {n} need {want}",
            reservoir.len()
        )));
    }
    let mut ids: Vec<u64> = reservoir.iter().map(|s| s.id).collect();
    ids.sort_unstable();
    ids.shuffle(&mut rng);
    Ok(finish(partition(ids, n, Label::Negative), SentencePool::new(reservoir)))
}

/// Labeled training batches plus the pools their sentence ids refer to.
/// Positive ids index the target sample, negative ids the background.
#[derive(Debug, Clone)]
pub struct LabeledDataset {
    pub batches: Vec<Batch>,
    pub n: usize,
    pub neg_pos_ratio: f64,
    pub seed: u64,
    pub positive_pool: Arc<SentencePool>,
    pub negative_pool: Arc<SentencePool>,
}

impl LabeledDataset {
    pub fn count(&self, label: Label) -> usize {
        self.batches.iter().filter(|b| b.label == label).count()
    }

    fn pool(&self, label: Label) -> &SentencePool {
        match label {
            Label::Positive => &self.positive_pool,
            _ => &self.negative_pool,
        }
    }

    /// Texts of a batch's sentences, in batch order.
    pub fn texts(&self, batch: &Batch) -> Result<Vec<&str>> {
        let pool = self.pool(batch.label);
        batch
            .sentence_ids
            .iter()
            .map(|&id| {
                pool.get(id)
                    .ok_or_else(|| Error::Insufficient(format!("{} sentence {id} missing from pool", batch.label)))
            })
            .collect()
    }

    fn with_batches(&self, batches: Vec<Batch>) -> LabeledDataset {
        LabeledDataset {
            batches,
            n: self.n,
            neg_pos_ratio: self.neg_pos_ratio,
            seed: self.seed,
            positive_pool: Arc::clone(&self.positive_pool),
            negative_pool: Arc::clone(&self.negative_pool),
        }
    }
}

/// Keeps every positive and the first `floor(ratio * |pos|)` negatives, then
/// shuffles. Batches are renumbered: positives first, then negatives.
pub fn assemble_dataset(pos: SampledBatches, neg: SampledBatches, ratio: f64, seed: u64) -> Result<LabeledDataset> {
    if !(ratio > 0.0 && ratio.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "negative/positive ratio must be > 0, got {ratio}"
        )));
    }
    let want_neg = (ratio * pos.batches.len() as f64).floor() as usize;
    if neg.batches.len() < want_neg {
        return Err(Error::Insufficient(format!(
            "{} negative batches available, ratio {ratio} needs {want_neg}",
            neg.batches.len()
        )));
    }
    let n = pos
        .batches
        .first()
        .or(neg.batches.first())
        .map_or(0, |b| b.sentence_ids.len());
    let mut batches: Vec<Batch> = pos
        .batches
        .into_iter()
        .chain(neg.batches.into_iter().take(want_neg))
        .enumerate()
        .map(|(i, b)| Batch {
            batch_id: i as u64,
            ..b
        })
        .collect();
    batches.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    Ok(LabeledDataset {
        batches,
        n,
        neg_pos_ratio: ratio,
        seed,
        positive_pool: Arc::new(pos.pool),
        negative_pool: Arc::new(neg.pool),
    })
}

/// Stratified split: `floor(fraction * count)` of each label go to the first
/// part. Both parts keep the dataset's order.
pub fn split_train_test(
    ds: &LabeledDataset,
    train_fraction: f64,
    seed: u64,
) -> Result<(LabeledDataset, LabeledDataset)> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "train fraction must be in (0, 1), got {train_fraction}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut in_train = vec![false; ds.batches.len()];
    for label in [Label::Positive, Label::Negative] {
        let mut members: Vec<usize> = ds
            .batches
            .iter()
            .enumerate()
            .filter(|(_, b)| b.label == label)
            .map(|(i, _)| i)
            .collect();
        if members.is_empty() {
            return Err(Error::Insufficient(format!("no {label} batches to split")));
        }
        members.shuffle(&mut rng);
        let k = (train_fraction * members.len() as f64).floor() as usize;
        for &i in &members[..k] {
            in_train[i] = true;
        }
    }
    let (mut train, mut test) = (Vec::new(), Vec::new());
    for (b, t) in ds.batches.iter().zip(in_train) {
        if t {
            train.push(b.clone());
        } else {
            test.push(b.clone());
        }
    }
    Ok((ds.with_batches(train), ds.with_batches(test)))
}

/// One scoring document of the heterogeneous corpus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnlabeledDocument {
    pub batch: Batch,
    /// Text of the declared language side, one entry per pair.
    pub texts: Vec<String>,
}

impl UnlabeledDocument {
    pub fn size(&self) -> usize {
        self.batch.sentence_ids.len()
    }

    /// Concatenated tokens of all sentences.
    pub fn tokens(&self) -> TokenList {
        let mut all = TokenList::new();
        for t in &self.texts {
            all.append(tokenize(t));
        }
        all
    }
}

/// Groups consecutive runs of `n` pairs into unlabeled documents; the last
/// document may be shorter.
pub fn group_unlabeled<I>(corpus: I, n: usize, side: LanguageSide) -> GroupUnlabeled<I::IntoIter>
where
    I: IntoIterator<Item = Result<SentencePair>>,
{
    assert!(n >= 1, "group size must be >= 1");
    GroupUnlabeled {
        inner: corpus.into_iter(),
        n,
        side,
        next_id: 0,
        done: false,
    }
}

pub struct GroupUnlabeled<I> {
    inner: I,
    n: usize,
    side: LanguageSide,
    next_id: u64,
    done: bool,
}

impl<I> Iterator for GroupUnlabeled<I>
where
    I: Iterator<Item = Result<SentencePair>>,
{
    type Item = Result<UnlabeledDocument>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let mut ids = Vec::with_capacity(self.n);
        let mut texts = Vec::with_capacity(self.n);
        while ids.len() < self.n {
            match self.inner.next() {
                None => {
                    self.done = true;
                    break;
                }
                Some(Err(e)) => {
                    self.done = true;
                    return Some(Err(e));
                }
                Some(Ok(pair)) => {
                    ids.push(pair.id);
                    texts.push(match self.side {
                        LanguageSide::Source => pair.source,
                        LanguageSide::Target => pair.target,
                    });
                }
            }
        }
        if ids.is_empty() {
            return None;
        }
        let batch = Batch {
            batch_id: self.next_id,
            sentence_ids: ids,
            label: Label::Unlabeled,
        };
        self.next_id += 1;
        Some(Ok(UnlabeledDocument { batch, texts }))
    }
}

/// Random grouping for ablations: pair ids `0..num_pairs` are shuffled and cut
/// into groups of `n` (the last may be shorter). Each group's ids are sorted.
pub fn random_groups(num_pairs: u64, n: usize, seed: u64) -> Vec<Vec<u64>> {
    assert!(n >= 1, "group size must be >= 1");
    let mut ids: Vec<u64> = (0..num_pairs).collect();
    ids.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    ids.chunks(n)
        .map(|c| {
            let mut g = c.to_vec();
            g.sort_unstable();
            g
        })
        .collect()
}

const DATASET_MAGIC: &str = "#domain-sieve-dataset v1";
const DATASET_COLUMNS: &str = "batch_id\tlabel\tsentence_ids";

/// Contents of a dataset manifest file.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetManifest {
    pub n: usize,
    pub neg_pos_ratio: f64,
    pub seed: u64,
    /// Additional `#key=value` header lines (corpus paths, provenance).
    pub meta: BTreeMap<String, String>,
    pub batches: Vec<Batch>,
}

impl DatasetManifest {
    pub fn from_dataset(ds: &LabeledDataset, meta: BTreeMap<String, String>) -> Self {
        DatasetManifest {
            n: ds.n,
            neg_pos_ratio: ds.neg_pos_ratio,
            seed: ds.seed,
            meta,
            batches: ds.batches.clone(),
        }
    }

    /// Sentence ids referenced by batches with the given label.
    pub fn ids_for(&self, label: Label) -> HashSet<u64> {
        self.batches
            .iter()
            .filter(|b| b.label == label)
            .flat_map(|b| b.sentence_ids.iter().copied())
            .collect()
    }

    pub fn into_dataset(self, positive_pool: SentencePool, negative_pool: SentencePool) -> LabeledDataset {
        LabeledDataset {
            batches: self.batches,
            n: self.n,
            neg_pos_ratio: self.neg_pos_ratio,
            seed: self.seed,
            positive_pool: Arc::new(positive_pool),
            negative_pool: Arc::new(negative_pool),
        }
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = BufWriter::new(file);
        let mut write = || -> std::io::Result<()> {
            writeln!(w, "{DATASET_MAGIC}")?;
            writeln!(w, "#n={}", self.n)?;
            writeln!(w, "#neg_pos_ratio={}", self.neg_pos_ratio)?;
            writeln!(w, "#seed={}", self.seed)?;
            for (k, v) in &self.meta {
                writeln!(w, "#{k}={v}")?;
            }
            writeln!(w, "{DATASET_COLUMNS}")?;
            for b in &self.batches {
                let ids: Vec<String> = b.sentence_ids.iter().map(u64::to_string).collect();
                writeln!(w, "{}\t{}\t{}", b.batch_id, b.label, ids.join(","))?;
            }
            w.flush()
        };
        write().map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let mut header: BTreeMap<String, String> = BTreeMap::new();
        let mut batches = Vec::new();
        let mut columns_seen = false;
        for (i, line) in BufReader::new(file).lines().enumerate() {
            let line_no = i as u64 + 1;
            let line = line.map_err(|e| Error::io(path, e))?;
            if i == 0 {
                if line != DATASET_MAGIC {
                    return Err(Error::format(path, line_no, "missing dataset header"));
                }
                continue;
            }
            if !columns_seen {
                if line == DATASET_COLUMNS {
                    columns_seen = true;
                    continue;
                }
                let (k, v) = line
                    .strip_prefix('#')
                    .and_then(|l| l.split_once('='))
                    .ok_or_else(|| Error::format(path, line_no, "expected #key=value"))?;
                header.insert(k.to_string(), v.to_string());
                continue;
            }
            let mut f = line.split('\t');
            let (Some(id), Some(label), Some(ids), None) = (f.next(), f.next(), f.next(), f.next()) else {
                return Err(Error::format(path, line_no, "expected 3 tab-separated fields"));
            };
            let batch_id = id.parse().map_err(|_| Error::format(path, line_no, "bad batch id"))?;
            let label =
                Label::parse(label).ok_or_else(|| Error::format(path, line_no, format!("unknown label {label:?}")))?;
            let sentence_ids = ids
                .split(',')
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<u64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::format(path, line_no, "bad sentence id"))?;
            batches.push(Batch {
                batch_id,
                sentence_ids,
                label,
            });
        }
        let mut take = |k: &str| {
            header
                .remove(k)
                .ok_or_else(|| Error::format(path, 1, format!("missing #{k}")))
        };
        let n = take("n")?.parse().map_err(|_| Error::format(path, 2, "bad n"))?;
        let neg_pos_ratio = take("neg_pos_ratio")?
            .parse()
            .map_err(|_| Error::format(path, 3, "bad neg_pos_ratio"))?;
        let seed = take("seed")?.parse().map_err(|_| Error::format(path, 4, "bad seed"))?;
        Ok(DatasetManifest {
            n,
            neg_pos_ratio,
            seed,
            meta: header,
            batches,
        })
    }
}
