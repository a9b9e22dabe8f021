//! Tokenization, stop words and the capped most-frequent-words vocabulary.

use std::collections::{HashMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::ops::Deref;
use std::path::Path;

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Placeholder for tokens made only of digits.
pub const NUM_TOKEN: &str = "<num>";

const VOCAB_MAGIC: &str = "#domain-sieve-vocab v1";

/// Lowercase word tokens of one text.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TokenList(Vec<String>);

impl TokenList {
    pub fn new() -> Self {
        TokenList(Vec::new())
    }

    pub fn into_inner(self) -> Vec<String> {
        self.0
    }

    pub fn append(&mut self, other: TokenList) {
        self.0.extend(other.0);
    }
}

impl Deref for TokenList {
    type Target = [String];

    fn deref(&self) -> &[String] {
        &self.0
    }
}

impl FromIterator<String> for TokenList {
    fn from_iter<I: IntoIterator<Item = String>>(iter: I) -> Self {
        TokenList(iter.into_iter().collect())
    }
}

/// Calls `f` with every token of `text` without allocating per token.
///
/// Rules: lowercase, split on Unicode whitespace, trim leading and trailing
/// non-alphanumeric characters, drop empties, fold all-digit tokens to
/// [`NUM_TOKEN`].
pub fn visit_tokens<F: FnMut(&str)>(text: &str, mut f: F) {
    let mut lower = String::new();
    for raw in text.split_whitespace() {
        let trimmed = raw.trim_matches(|c: char| !c.is_alphanumeric());
        if trimmed.is_empty() {
            continue;
        }
        if trimmed.chars().all(char::is_numeric) {
            f(NUM_TOKEN);
            continue;
        }
        if trimmed.chars().any(char::is_uppercase) {
            lower.clear();
            lower.extend(trimmed.chars().flat_map(char::to_lowercase));
            // Lowercasing can expose new trailing punctuation in rare scripts.
            let t = lower.trim_matches(|c: char| !c.is_alphanumeric());
            if !t.is_empty() {
                f(t);
            }
        } else {
            f(trimmed);
        }
    }
}

pub fn tokenize(text: &str) -> TokenList {
    let mut out = Vec::new();
    visit_tokens(text, |t| out.push(t.to_string()));
    TokenList(out)
}

/// A named stop-word list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StopWords {
    id: String,
    words: HashSet<String>,
}

const EN_V1: &str = include_str!("../data/stopwords-en-v1.txt");

impl StopWords {
    /// The bundled English list.
    pub fn english() -> Self {
        Self::parse("en-v1", EN_V1)
    }

    pub fn none() -> Self {
        StopWords {
            id: "none".into(),
            words: HashSet::new(),
        }
    }

    /// Looks up a bundled list by id.
    pub fn by_id(id: &str) -> Option<Self> {
        match id {
            "en-v1" => Some(Self::english()),
            "none" => Some(Self::none()),
            _ => None,
        }
    }

    /// One word per line; `#` starts a comment line.
    pub fn parse(id: &str, body: &str) -> Self {
        let words = body
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(str::to_lowercase)
            .collect();
        StopWords {
            id: id.to_string(),
            words,
        }
    }

    pub fn from_words<I, S>(id: &str, words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        StopWords {
            id: id.to_string(),
            words: words.into_iter().map(Into::into).collect(),
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn contains(&self, token: &str) -> bool {
        self.words.contains(token)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// Token frequencies, mergeable across shards.
#[derive(Debug, Clone, Default)]
pub struct TokenCounts(HashMap<String, u64>);

impl TokenCounts {
    pub fn add_text(&mut self, text: &str, stopwords: &StopWords) {
        visit_tokens(text, |t| {
            if stopwords.contains(t) {
                return;
            }
            if let Some(c) = self.0.get_mut(t) {
                *c += 1;
            } else {
                self.0.insert(t.to_string(), 1);
            }
        });
    }

    pub fn merge(mut self, other: TokenCounts) -> TokenCounts {
        let (mut big, small) = if self.0.len() >= other.0.len() {
            (std::mem::take(&mut self.0), other.0)
        } else {
            (other.0, std::mem::take(&mut self.0))
        };
        for (k, v) in small {
            *big.entry(k).or_insert(0) += v;
        }
        TokenCounts(big)
    }

    /// Counts a slice of texts across the rayon pool.
    pub fn from_texts_par<S: AsRef<str> + Sync>(texts: &[S], stopwords: &StopWords) -> Self {
        texts
            .par_chunks(4096)
            .map(|chunk| {
                let mut c = TokenCounts::default();
                for t in chunk {
                    c.add_text(t.as_ref(), stopwords);
                }
                c
            })
            .reduce(TokenCounts::default, TokenCounts::merge)
    }

    pub fn get(&self, token: &str) -> u64 {
        self.0.get(token).copied().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VocabEntry {
    pub token: String,
    pub count: u64,
}

/// Capped token-to-index map. Indices follow descending count with
/// lexicographic tie-break.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    entries: Vec<VocabEntry>,
    index: HashMap<String, u32>,
    max_size: usize,
    stopwords_id: String,
}

impl Vocabulary {
    pub fn from_counts(counts: TokenCounts, max_size: usize, stopwords: &StopWords) -> Result<Self> {
        if max_size == 0 {
            return Err(Error::InvalidArgument("vocabulary max_size must be >= 1".into()));
        }
        let mut all: Vec<VocabEntry> = counts
            .0
            .into_iter()
            .filter(|(t, _)| !stopwords.contains(t))
            .map(|(token, count)| VocabEntry { token, count })
            .collect();
        all.sort_unstable_by(|a, b| b.count.cmp(&a.count).then_with(|| a.token.cmp(&b.token)));
        all.truncate(max_size);
        Ok(Self::from_entries(all, max_size, stopwords.id().to_string()))
    }

    fn from_entries(entries: Vec<VocabEntry>, max_size: usize, stopwords_id: String) -> Self {
        let index = entries
            .iter()
            .enumerate()
            .map(|(i, e)| (e.token.clone(), i as u32))
            .collect();
        Vocabulary {
            entries,
            index,
            max_size,
            stopwords_id,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max_size(&self) -> usize {
        self.max_size
    }

    pub fn stopwords_id(&self) -> &str {
        &self.stopwords_id
    }

    pub fn get(&self, token: &str) -> Option<u32> {
        self.index.get(token).copied()
    }

    pub fn entries(&self) -> &[VocabEntry] {
        &self.entries
    }

    fn header(&self) -> String {
        format!(
            "{VOCAB_MAGIC} stopwords={}\n#max_size={}\n",
            self.stopwords_id, self.max_size
        )
    }

    fn body(&self) -> String {
        let mut s = String::with_capacity(self.entries.len() * 16);
        for (i, e) in self.entries.iter().enumerate() {
            s.push_str(&format!("{}\t{}\t{}\n", e.token, i, e.count));
        }
        s
    }

    /// SHA-256 of the vocabulary content (header and entries), ignoring any
    /// provenance line.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.header().as_bytes());
        h.update(self.body().as_bytes());
        hex_digest(&h.finalize())
    }
}

pub(crate) fn hex_digest(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Counts tokens over the whole stream and keeps the `max_size` most frequent
/// non-stop-words.
pub fn build_vocabulary<I, S>(sentences: I, max_size: usize, stopwords: &StopWords) -> Result<Vocabulary>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut counts = TokenCounts::default();
    for s in sentences {
        counts.add_text(s.as_ref(), stopwords);
    }
    Vocabulary::from_counts(counts, max_size, stopwords)
}

pub fn save_vocabulary(v: &Vocabulary, path: &Path, provenance: Option<&str>) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    let mut write = || -> std::io::Result<()> {
        w.write_all(v.header().as_bytes())?;
        if let Some(p) = provenance {
            writeln!(w, "#provenance={p}")?;
        }
        w.write_all(v.body().as_bytes())?;
        w.flush()
    };
    write().map_err(|e| Error::io(path, e))
}

pub fn load_vocabulary(path: &Path) -> Result<Vocabulary> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let reader = BufReader::new(file);
    let mut stopwords_id = None;
    let mut max_size = None;
    let mut entries: Vec<VocabEntry> = Vec::new();
    let mut seen = HashSet::new();

    for (i, line) in reader.lines().enumerate() {
        let line_no = i as u64 + 1;
        let line = line.map_err(|e| Error::io(path, e))?;
        if i == 0 {
            let id = line
                .strip_prefix(VOCAB_MAGIC)
                .and_then(|rest| rest.strip_prefix(" stopwords="))
                .ok_or_else(|| Error::format(path, line_no, "missing vocabulary header"))?;
            stopwords_id = Some(id.to_string());
            continue;
        }
        if let Some(meta) = line.strip_prefix('#') {
            if let Some(v) = meta.strip_prefix("max_size=") {
                let n = v
                    .parse::<usize>()
                    .map_err(|_| Error::format(path, line_no, "bad max_size"))?;
                max_size = Some(n);
            }
            continue;
        }
        let mut fields = line.split('\t');
        let (Some(token), Some(idx), Some(count), None) = (fields.next(), fields.next(), fields.next(), fields.next())
        else {
            return Err(Error::format(path, line_no, "expected token<TAB>index<TAB>count"));
        };
        let idx: usize = idx.parse().map_err(|_| Error::format(path, line_no, "bad index"))?;
        let count: u64 = count.parse().map_err(|_| Error::format(path, line_no, "bad count"))?;
        if idx != entries.len() {
            return Err(Error::format(
                path,
                line_no,
                format!("index {idx} is not contiguous (expected {})", entries.len()),
            ));
        }
        if count == 0 {
            return Err(Error::format(path, line_no, "count must be positive"));
        }
        if token.is_empty() || !seen.insert(token.to_string()) {
            return Err(Error::format(
                path,
                line_no,
                format!("duplicate or empty token {token:?}"),
            ));
        }
        entries.push(VocabEntry {
            token: token.to_string(),
            count,
        });
    }
    let stopwords_id = stopwords_id.ok_or_else(|| Error::format(path, 1, "missing vocabulary header"))?;
    let max_size = max_size.unwrap_or(entries.len().max(1));
    if entries.len() > max_size {
        return Err(Error::format(path, 2, "more entries than max_size"));
    }
    Ok(Vocabulary::from_entries(entries, max_size, stopwords_id))
}
