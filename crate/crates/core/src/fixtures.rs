//! Deterministic text generators: a news-like monolingual sample and a
//! web-like parallel corpus, plus a two-unigram synthetic generator with a
//! configurable vocabulary overlap for planted-domain experiments.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus_io::{Sentence, SentencePair};
use crate::error::{Error, Result};
use crate::pipeline::derive_seed;

const SYLLABLES: &[&str] = &[
    "ba", "ce", "di", "fo", "gu", "ha", "ke", "li", "mo", "nu", "pa", "re", "si", "to", "vu", "wa", "ze", "ri", "lo",
    "ma", "ne", "ti", "so", "ku",
];

const FUNCTION_WORDS: &[&str] = &[
    "the", "of", "and", "to", "in", "a", "is", "for", "on", "with", "that", "it", "as", "was", "by",
];

/// Distinct pseudo-words built from two or three syllables, in a seeded order.
fn pseudo_words(seed: u64) -> Vec<String> {
    let mut words = Vec::new();
    for a in SYLLABLES {
        for b in SYLLABLES {
            words.push(format!("{a}{b}"));
            for c in SYLLABLES {
                words.push(format!("{a}{b}{c}"));
            }
        }
    }
    words.sort();
    words.dedup();
    words.retain(|w| !FUNCTION_WORDS.contains(&w.as_str()));
    words.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    words
}

/// A word list sampled with Zipf weights `1 / rank^s`.
#[derive(Debug, Clone)]
struct ZipfPool {
    words: Vec<String>,
    dist: WeightedIndex<f64>,
}

impl ZipfPool {
    fn new(words: Vec<String>, s: f64) -> Self {
        let weights: Vec<f64> = (1..=words.len()).map(|r| (r as f64).powf(-s)).collect();
        let dist = WeightedIndex::new(weights).expect("non-empty pool");
        ZipfPool { words, dist }
    }

    fn sample<'a>(&'a self, rng: &mut ChaCha8Rng) -> &'a str {
        &self.words[self.dist.sample(rng)]
    }
}

/// Knobs of the news/web fixture generator.
#[derive(Debug, Clone, PartialEq)]
pub struct FixtureParams {
    pub news_sentences: usize,
    pub web_pairs: usize,
    /// Size of each domain-specific word pool.
    pub domain_vocab: usize,
    /// Size of the pool both domains draw from.
    pub shared_vocab: usize,
    pub zipf: f64,
    /// Share of sentences that carry no domain-specific word at all.
    pub generic_fraction: f64,
    /// Per content token, the chance of drawing from the domain pool in a
    /// non-generic sentence.
    pub domain_rate: f64,
    /// Share of 100-line blocks of the web corpus written in the news style.
    pub web_news_blocks: f64,
    pub seed: u64,
}

impl Default for FixtureParams {
    fn default() -> Self {
        FixtureParams {
            news_sentences: 50_000,
            web_pairs: 120_000,
            domain_vocab: 1500,
            shared_vocab: 3000,
            zipf: 1.0,
            generic_fraction: 0.25,
            domain_rate: 0.3,
            web_news_blocks: 0.2,
            seed: 2018,
        }
    }
}

struct StyleGen {
    news: ZipfPool,
    web: ZipfPool,
    shared: ZipfPool,
    p: FixtureParams,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Style {
    News,
    Web,
}

impl StyleGen {
    fn new(p: &FixtureParams) -> Self {
        let words = pseudo_words(p.seed);
        let need = 2 * p.domain_vocab + p.shared_vocab;
        assert!(
            need <= words.len(),
            "fixture vocabulary too large: {need} > {}",
            words.len()
        );
        let d = p.domain_vocab;
        StyleGen {
            news: ZipfPool::new(words[..d].to_vec(), p.zipf),
            web: ZipfPool::new(words[d..2 * d].to_vec(), p.zipf),
            shared: ZipfPool::new(words[2 * d..need].to_vec(), p.zipf),
            p: p.clone(),
        }
    }

    fn sentence(&self, style: Style, rng: &mut ChaCha8Rng) -> String {
        let generic = rng.random_bool(self.p.generic_fraction);
        let len = rng.random_range(8..=20);
        let pool = match style {
            Style::News => &self.news,
            Style::Web => &self.web,
        };
        let mut out = String::new();
        for i in 0..len {
            if i > 0 {
                out.push(' ');
            }
            let roll: f64 = rng.random();
            if roll < 0.3 {
                out.push_str(FUNCTION_WORDS[rng.random_range(0..FUNCTION_WORDS.len())]);
            } else if roll < 0.33 {
                out.push_str(&rng.random_range(1..2030).to_string());
            } else if !generic && rng.random_bool(self.p.domain_rate) {
                out.push_str(pool.sample(rng));
            } else {
                out.push_str(self.shared.sample(rng));
            }
        }
        out.push('.');
        capitalize(out)
    }
}

fn capitalize(mut s: String) -> String {
    if let Some(c) = s.get(..1) {
        let up = c.to_uppercase();
        s.replace_range(..1, &up);
    }
    s
}

/// A stand-in source side: every word of the target mirrored.
fn mirror(text: &str) -> String {
    text.split(' ')
        .map(|w| w.chars().rev().collect::<String>())
        .collect::<Vec<_>>()
        .join(" ")
}

/// News-like in-domain sample.
pub fn news_sentences(p: &FixtureParams) -> Vec<String> {
    let g = StyleGen::new(p);
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(p.seed, "news"));
    (0..p.news_sentences)
        .map(|_| g.sentence(Style::News, &mut rng))
        .collect()
}

/// Web-like parallel corpus in blocks of 100 lines; a share of blocks follow
/// the news style.
pub fn web_pairs(p: &FixtureParams) -> Vec<SentencePair> {
    let g = StyleGen::new(p);
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(p.seed, "web"));
    let mut style = Style::Web;
    (0..p.web_pairs)
        .map(|i| {
            if i % 100 == 0 {
                style = if rng.random_bool(p.web_news_blocks) {
                    Style::News
                } else {
                    Style::Web
                };
            }
            let target = g.sentence(style, &mut rng);
            SentencePair {
                id: i as u64,
                source: mirror(&target),
                target,
            }
        })
        .collect()
}

pub fn to_sentences(texts: Vec<String>) -> Vec<Sentence> {
    texts
        .into_iter()
        .enumerate()
        .map(|(i, text)| Sentence { id: i as u64, text })
        .collect()
}

/// Target side of a parallel corpus as a sentence stream.
pub fn target_side(pairs: &[SentencePair]) -> Vec<Sentence> {
    pairs
        .iter()
        .map(|p| Sentence {
            id: p.id,
            text: p.target.clone(),
        })
        .collect()
}

pub fn write_lines<S: AsRef<str>>(path: &Path, lines: &[S]) -> Result<()> {
    let f = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(f);
    let mut write = || -> std::io::Result<()> {
        for l in lines {
            writeln!(w, "{}", l.as_ref())?;
        }
        w.flush()
    };
    write().map_err(|e| Error::io(path, e))
}

pub fn write_pairs_tsv(path: &Path, pairs: &[SentencePair]) -> Result<()> {
    let lines: Vec<String> = pairs.iter().map(|p| format!("{}\t{}", p.source, p.target)).collect();
    write_lines(path, &lines)
}

/// Writes `news.txt` and `web.tsv` into `dir` and returns their paths.
pub fn write_fixtures(dir: &Path, p: &FixtureParams) -> Result<(PathBuf, PathBuf)> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let news = dir.join("news.txt");
    let web = dir.join("web.tsv");
    write_lines(&news, &news_sentences(p))?;
    write_pairs_tsv(&web, &web_pairs(p))?;
    Ok((news, web))
}

/// Two unigram distributions over pseudo-words. Domain A uses the first
/// `vocab_per_domain` words; domain B starts `overlap * vocab_per_domain`
/// words earlier than the end of A, so the two share that many words.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticDomains {
    pub vocab_per_domain: usize,
    pub overlap: f64,
    pub zipf: f64,
    pub sentence_len: usize,
}

impl Default for SyntheticDomains {
    fn default() -> Self {
        SyntheticDomains {
            vocab_per_domain: 2000,
            overlap: 0.5,
            zipf: 1.0,
            sentence_len: 12,
        }
    }
}

/// Ready-to-sample form of [`SyntheticDomains`].
pub struct DomainSampler {
    a: ZipfPool,
    b: ZipfPool,
    len: usize,
}

impl SyntheticDomains {
    pub fn sampler(&self, seed: u64) -> DomainSampler {
        let words = pseudo_words(seed);
        let v = self.vocab_per_domain;
        let shared = ((self.overlap.clamp(0.0, 1.0)) * v as f64).round() as usize;
        let b_start = v - shared;
        assert!(b_start + v <= words.len(), "synthetic vocabulary too large");
        // B ranks its words in reverse, so a shared word that is frequent in
        // one domain is rare in the other.
        let mut b_words = words[b_start..b_start + v].to_vec();
        b_words.reverse();
        DomainSampler {
            a: ZipfPool::new(words[..v].to_vec(), self.zipf),
            b: ZipfPool::new(b_words, self.zipf),
            len: self.sentence_len,
        }
    }
}

impl DomainSampler {
    /// One sentence from domain A (`in_domain`) or B.
    pub fn sentence(&self, in_domain: bool, rng: &mut ChaCha8Rng) -> String {
        let pool = if in_domain { &self.a } else { &self.b };
        (0..self.len).map(|_| pool.sample(rng)).collect::<Vec<_>>().join(" ")
    }
}

/// A heterogeneous parallel corpus in which a known share of the documents
/// comes from the in-domain distribution.
#[derive(Debug, Clone)]
pub struct PlantedCorpus {
    pub pairs: Vec<SentencePair>,
    /// One flag per document of `doc_size` consecutive pairs.
    pub planted: Vec<bool>,
    /// An independent in-domain sample for training.
    pub target: Vec<Sentence>,
}

pub fn planted_corpus(
    domains: &SyntheticDomains,
    num_docs: usize,
    doc_size: usize,
    planted_fraction: f64,
    target_sentences: usize,
    seed: u64,
) -> PlantedCorpus {
    let sampler = domains.sampler(seed);
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, "planted"));
    let num_planted = (planted_fraction * num_docs as f64).round() as usize;
    let mut planted: Vec<bool> = (0..num_docs).map(|i| i < num_planted).collect();
    planted.shuffle(&mut rng);
    let mut pairs = Vec::with_capacity(num_docs * doc_size);
    for &p in &planted {
        for _ in 0..doc_size {
            let target = sampler.sentence(p, &mut rng);
            pairs.push(SentencePair {
                id: pairs.len() as u64,
                source: mirror(&target),
                target,
            });
        }
    }
    let target = (0..target_sentences)
        .map(|i| Sentence {
            id: i as u64,
            text: sampler.sentence(true, &mut rng),
        })
        .collect();
    PlantedCorpus { pairs, planted, target }
}
