//! Term-frequency bag-of-words vectors for batches of sentences.

use crate::error::{Error, Result};
use crate::textproc::{visit_tokens, Vocabulary};

/// Sorted sparse vector; indices strictly increase.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SparseVector {
    entries: Vec<(u32, f64)>,
}

impl SparseVector {
    pub fn empty() -> Self {
        SparseVector::default()
    }

    /// Builds a vector from `(index, weight)` pairs, which must have strictly
    /// increasing indices and finite weights.
    pub fn from_pairs(entries: Vec<(u32, f64)>) -> Result<Self> {
        for w in entries.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(Error::InvalidArgument(format!(
                    "sparse indices not strictly increasing at {}",
                    w[1].0
                )));
            }
        }
        if let Some(&(i, v)) = entries.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite(format!("feature {i} has value {v}")));
        }
        Ok(SparseVector { entries })
    }

    pub fn entries(&self) -> &[(u32, f64)] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn max_index(&self) -> Option<u32> {
        self.entries.last().map(|&(i, _)| i)
    }

    pub fn norm_sq(&self) -> f64 {
        self.entries.iter().map(|&(_, v)| v * v).sum()
    }

    /// Dot product against a dense vector; indices past its end count as zero.
    pub fn dot(&self, dense: &[f64]) -> f64 {
        self.entries
            .iter()
            .map(|&(i, v)| dense.get(i as usize).map_or(0.0, |w| w * v))
            .sum()
    }

    pub fn scaled(&self, factor: f64) -> SparseVector {
        SparseVector {
            entries: self.entries.iter().map(|&(i, v)| (i, v * factor)).collect(),
        }
    }
}

/// Denominator used to normalize raw term counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TfMode {
    /// Largest term count within the document itself.
    DocMax,
    /// Largest single-term count observed anywhere in the training
    /// collection. Counts above it are clamped to 1.0.
    CorpusMax(u32),
}

impl TfMode {
    fn check(self) -> Result<()> {
        match self {
            TfMode::CorpusMax(0) => Err(Error::InvalidArgument(
                "corpus-max tf mode needs a positive maximum count".into(),
            )),
            _ => Ok(()),
        }
    }
}

/// In-vocabulary term counts, sorted by index.
fn counts_from_indices(mut idx: Vec<u32>) -> Vec<(u32, u32)> {
    idx.sort_unstable();
    let mut out: Vec<(u32, u32)> = Vec::new();
    for i in idx {
        match out.last_mut() {
            Some((last, c)) if *last == i => *c += 1,
            _ => out.push((i, 1)),
        }
    }
    out
}

pub fn term_counts<S: AsRef<str>>(tokens: &[S], vocab: &Vocabulary) -> Vec<(u32, u32)> {
    counts_from_indices(tokens.iter().filter_map(|t| vocab.get(t.as_ref())).collect())
}

fn normalize(counts: Vec<(u32, u32)>, mode: TfMode) -> SparseVector {
    let denom = match mode {
        TfMode::DocMax => counts.iter().map(|&(_, c)| c).max().unwrap_or(1),
        TfMode::CorpusMax(m) => m,
    } as f64;
    SparseVector {
        entries: counts
            .into_iter()
            .map(|(i, c)| (i, (c as f64 / denom).min(1.0)))
            .collect(),
    }
}

/// Tf-weighted vector of a token list. Out-of-vocabulary tokens are ignored.
pub fn vectorize<S: AsRef<str>>(tokens: &[S], vocab: &Vocabulary, mode: TfMode) -> Result<SparseVector> {
    mode.check()?;
    Ok(normalize(term_counts(tokens, vocab), mode))
}

/// Tokenizes and vectorizes a group of raw sentences as one document, without
/// materializing the token list.
pub fn vectorize_texts<S: AsRef<str>>(texts: &[S], vocab: &Vocabulary, mode: TfMode) -> Result<SparseVector> {
    mode.check()?;
    let mut idx = Vec::new();
    for t in texts {
        visit_tokens(t.as_ref(), |tok| {
            if let Some(i) = vocab.get(tok) {
                idx.push(i);
            }
        });
    }
    Ok(normalize(counts_from_indices(idx), mode))
}

/// Largest in-vocabulary term count of a group of raw sentences, 0 if none.
pub fn max_term_count_texts<S: AsRef<str>>(texts: &[S], vocab: &Vocabulary) -> u32 {
    let mut idx = Vec::new();
    for t in texts {
        visit_tokens(t.as_ref(), |tok| {
            if let Some(i) = vocab.get(tok) {
                idx.push(i);
            }
        });
    }
    counts_from_indices(idx).into_iter().map(|(_, c)| c).max().unwrap_or(0)
}

/// Largest in-document term count across a collection.
pub fn corpus_max_count<I, T, S>(batches: I, vocab: &Vocabulary) -> Result<u32>
where
    I: IntoIterator<Item = T>,
    T: AsRef<[S]>,
    S: AsRef<str>,
{
    batches
        .into_iter()
        .filter_map(|doc| term_counts(doc.as_ref(), vocab).into_iter().map(|(_, c)| c).max())
        .max()
        .ok_or_else(|| Error::Insufficient("no in-vocabulary token in the collection".into()))
}
