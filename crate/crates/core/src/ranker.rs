//! Scoring of heterogeneous-corpus documents, ranking, budgeted top-k
//! selection and equal-size bucketing of the ranking.

use std::cmp::Ordering;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;

use crate::batcher::UnlabeledDocument;
use crate::classifier::{decision_score, LinearModel};
use crate::error::{Error, Result};
use crate::textproc::Vocabulary;
use crate::vectorizer::vectorize_texts;

/// Documents handed to the worker pool at a time.
const CHUNK: usize = 1024;

#[derive(Debug, Clone, PartialEq)]
pub struct ScoredDocument {
    pub batch_id: u64,
    pub score: f64,
    pub proba: Option<f64>,
    pub size: usize,
}

fn score_one(m: &LinearModel, vocab: &Vocabulary, doc: &UnlabeledDocument) -> Result<ScoredDocument> {
    let x = vectorize_texts(&doc.texts, vocab, m.tf_mode)?;
    let score = decision_score(m, &x)?;
    if !score.is_finite() {
        return Err(Error::NonFinite(format!("score of document {}", doc.batch.batch_id)));
    }
    Ok(ScoredDocument {
        batch_id: doc.batch.batch_id,
        score,
        proba: m.platt.map(|p| p.probability(score)),
        size: doc.size(),
    })
}

/// Scores every document on a pool of `workers` threads. The result is
/// ordered by batch id whatever the scheduling. `progress` is called with the
/// running document count after each chunk.
pub fn score_corpus<I>(
    m: &LinearModel,
    vocab: &Vocabulary,
    docs: I,
    workers: usize,
    mut progress: impl FnMut(usize),
) -> Result<Vec<ScoredDocument>>
where
    I: IntoIterator<Item = Result<UnlabeledDocument>>,
{
    m.check_vocabulary(vocab)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(format!("cannot start worker pool: {e}")))?;

    let mut out: Vec<ScoredDocument> = Vec::new();
    let mut chunk: Vec<UnlabeledDocument> = Vec::with_capacity(CHUNK);
    let mut docs = docs.into_iter();
    loop {
        chunk.clear();
        for doc in docs.by_ref().take(CHUNK) {
            chunk.push(doc?);
        }
        if chunk.is_empty() {
            break;
        }
        let scored: Vec<ScoredDocument> =
            pool.install(|| chunk.par_iter().map(|d| score_one(m, vocab, d)).collect::<Result<_>>())?;
        out.extend(scored);
        progress(out.len());
    }
    out.sort_by_key(|d| d.batch_id);
    Ok(out)
}

/// Documents in non-increasing score order; equal scores by ascending id.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedSelection {
    docs: Vec<ScoredDocument>,
}

impl RankedSelection {
    pub fn docs(&self) -> &[ScoredDocument] {
        &self.docs
    }

    pub fn len(&self) -> usize {
        self.docs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.docs.is_empty()
    }

    pub fn ids(&self) -> Vec<u64> {
        self.docs.iter().map(|d| d.batch_id).collect()
    }
}

fn rank_order(a: &ScoredDocument, b: &ScoredDocument) -> Ordering {
    b.score.total_cmp(&a.score).then_with(|| a.batch_id.cmp(&b.batch_id))
}

pub fn rank(mut scored: Vec<ScoredDocument>) -> Result<RankedSelection> {
    if let Some(d) = scored.iter().find(|d| d.score.is_nan()) {
        return Err(Error::NonFinite(format!("score of document {}", d.batch_id)));
    }
    scored.sort_by(rank_order);
    Ok(RankedSelection { docs: scored })
}

/// Takes whole documents in rank order until their pair count reaches
/// `k_pairs`. The document that crosses the budget is included.
pub fn select_top_k(r: &RankedSelection, k_pairs: u64) -> Result<Vec<u64>> {
    if k_pairs == 0 {
        return Err(Error::InvalidArgument("selection budget must be >= 1 pair".into()));
    }
    let mut total = 0u64;
    let mut ids = Vec::new();
    for d in &r.docs {
        if total >= k_pairs {
            break;
        }
        ids.push(d.batch_id);
        total += d.size as u64;
    }
    Ok(ids)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bucket {
    pub label: String,
    pub doc_ids: Vec<u64>,
    pub pair_count: u64,
}

fn percent(i: usize, k: usize) -> String {
    let v = (i * 100) as f64 / k as f64;
    let s = format!("{v:.2}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    format!("{s}%")
}

/// Cuts the ranking into `num_buckets` contiguous slices whose sizes differ by
/// at most one document; the first `len % num_buckets` slices get the extra.
pub fn partition_buckets(r: &RankedSelection, num_buckets: usize) -> Result<Vec<Bucket>> {
    if num_buckets == 0 || num_buckets > r.len() {
        return Err(Error::InvalidArgument(format!(
            "cannot split {} documents into {num_buckets} buckets",
            r.len()
        )));
    }
    let base = r.len() / num_buckets;
    let extra = r.len() % num_buckets;
    let mut start = 0;
    let mut out = Vec::with_capacity(num_buckets);
    for i in 0..num_buckets {
        let len = base + usize::from(i < extra);
        let slice = &r.docs[start..start + len];
        out.push(Bucket {
            label: format!("{}-{}", percent(i, num_buckets), percent(i + 1, num_buckets)),
            doc_ids: slice.iter().map(|d| d.batch_id).collect(),
            pair_count: slice.iter().map(|d| d.size as u64).sum(),
        });
        start += len;
    }
    Ok(out)
}

pub const SCORES_HEADER: &str = "batch_id\tscore\tproba\tsize";

pub fn write_scores(docs: &[ScoredDocument], path: &Path, provenance: Option<&str>) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    let mut write = || -> std::io::Result<()> {
        if let Some(p) = provenance {
            writeln!(w, "# {p}")?;
        }
        writeln!(w, "{SCORES_HEADER}")?;
        for d in docs {
            match d.proba {
                Some(p) => writeln!(w, "{}\t{:.6}\t{:.6}\t{}", d.batch_id, d.score, p, d.size)?,
                None => writeln!(w, "{}\t{:.6}\tNA\t{}", d.batch_id, d.score, d.size)?,
            }
        }
        w.flush()
    };
    write().map_err(|e| Error::io(path, e))
}

pub fn read_scores(path: &Path) -> Result<Vec<ScoredDocument>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    let mut header_seen = false;
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let ln = i as u64 + 1;
        let line = line.map_err(|e| Error::io(path, e))?;
        if !header_seen {
            if line.starts_with('#') {
                continue;
            }
            if line != SCORES_HEADER {
                return Err(Error::format(path, ln, "missing scores header"));
            }
            header_seen = true;
            continue;
        }
        let bad = |what: &str| Error::format(path, ln, what.to_string());
        let f: Vec<&str> = line.split('\t').collect();
        let [id, score, proba, size] = f.as_slice() else {
            return Err(bad("expected 4 tab-separated fields"));
        };
        let score: f64 = score.parse().map_err(|_| bad("bad score"))?;
        if !score.is_finite() {
            return Err(bad("non-finite score"));
        }
        out.push(ScoredDocument {
            batch_id: id.parse().map_err(|_| bad("bad batch id"))?,
            score,
            proba: match *proba {
                "NA" => None,
                p => Some(p.parse().map_err(|_| bad("bad proba"))?),
            },
            size: size.parse().map_err(|_| bad("bad size"))?,
        });
    }
    if !header_seen {
        return Err(Error::format(path, 1, "missing scores header"));
    }
    Ok(out)
}

pub fn write_bucket_report(buckets: &[Bucket], path: &Path, provenance: Option<&str>) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    let mut write = || -> std::io::Result<()> {
        if let Some(p) = provenance {
            writeln!(w, "# {p}")?;
        }
        writeln!(w, "label\tdoc_count\tpair_count")?;
        for b in buckets {
            writeln!(w, "{}\t{}\t{}", b.label, b.doc_ids.len(), b.pair_count)?;
        }
        w.flush()
    };
    write().map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn doc(id: u64, score: f64, size: usize) -> ScoredDocument {
        ScoredDocument {
            batch_id: id,
            score,
            proba: None,
            size,
        }
    }

    #[test]
    fn rank_ties_by_id() {
        let r = rank(vec![doc(7, 0.1, 1), doc(2, 0.9, 1), doc(5, 0.9, 1)]).unwrap();
        assert_eq!(r.ids(), vec![2, 5, 7]);
        assert_eq!(rank(vec![doc(1, 0.0, 1)]).unwrap().ids(), vec![1]);
        let sorted = vec![doc(1, 3.0, 1), doc(2, 2.0, 1), doc(3, 1.0, 1)];
        assert_eq!(rank(sorted.clone()).unwrap().docs(), sorted.as_slice());
    }

    #[test]
    fn rank_rejects_nan() {
        assert!(rank(vec![doc(1, f64::NAN, 1)]).is_err());
    }

    #[test]
    fn budget_examples() {
        let r = rank(vec![doc(0, 3.0, 100), doc(1, 2.0, 100), doc(2, 1.0, 100)]).unwrap();
        assert_eq!(select_top_k(&r, 150).unwrap(), vec![0, 1]);
        assert_eq!(select_top_k(&r, 1_000).unwrap(), vec![0, 1, 2]);
        assert_eq!(select_top_k(&r, 1).unwrap(), vec![0]);
        assert_eq!(select_top_k(&r, 200).unwrap(), vec![0, 1]);
        assert!(select_top_k(&r, 0).is_err());
    }

    fn ranked(n: usize) -> RankedSelection {
        rank((0..n as u64).map(|i| doc(i, -(i as f64), 10)).collect()).unwrap()
    }

    #[test]
    fn bucket_examples() {
        let sizes = |b: Vec<Bucket>| b.iter().map(|b| b.doc_ids.len()).collect::<Vec<_>>();
        assert_eq!(sizes(partition_buckets(&ranked(8), 4).unwrap()), vec![2, 2, 2, 2]);
        let b = partition_buckets(&ranked(10), 4).unwrap();
        assert_eq!(
            b.iter().map(|b| b.label.as_str()).collect::<Vec<_>>(),
            ["0%-25%", "25%-50%", "50%-75%", "75%-100%"]
        );
        assert_eq!(sizes(b), vec![3, 3, 2, 2]);
        let one = partition_buckets(&ranked(4), 1).unwrap();
        assert_eq!(one[0].label, "0%-100%");
        assert_eq!(one[0].pair_count, 40);
        assert!(partition_buckets(&ranked(3), 4).is_err());
        assert_eq!(partition_buckets(&ranked(3), 3).unwrap()[0].label, "0%-33.33%");
    }

    #[test]
    fn scores_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("scores.tsv");
        let docs = vec![
            ScoredDocument {
                batch_id: 0,
                score: 1.25,
                proba: Some(0.75),
                size: 100,
            },
            doc(1, -0.5, 50),
        ];
        write_scores(&docs, &p, Some("config=abc")).unwrap();
        let text = std::fs::read_to_string(&p).unwrap();
        assert!(text.contains("0\t1.250000\t0.750000\t100\n"));
        assert_eq!(read_scores(&p).unwrap(), docs);
    }

    proptest! {
        #[test]
        fn rank_is_permutation_invariant(
            scores in prop::collection::vec(-3i32..3, 1..60),
            seed in any::<u64>(),
        ) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let docs: Vec<_> = scores.iter().enumerate().map(|(i, &s)| doc(i as u64, s as f64 / 2.0, 1)).collect();
            let mut shuffled = docs.clone();
            shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            let r = rank(docs).unwrap();
            prop_assert_eq!(&r, &rank(shuffled).unwrap());
            prop_assert!(r.docs().windows(2).all(|w| w[0].score >= w[1].score));
        }

        #[test]
        fn buckets_partition_ranking(n in 1usize..80, k in 1usize..10) {
            prop_assume!(k <= n);
            let r = ranked(n);
            let b = partition_buckets(&r, k).unwrap();
            let concat: Vec<u64> = b.iter().flat_map(|b| b.doc_ids.clone()).collect();
            prop_assert_eq!(concat, r.ids());
            let lens: Vec<usize> = b.iter().map(|b| b.doc_ids.len()).collect();
            prop_assert!(lens.iter().max().unwrap() - lens.iter().min().unwrap() <= 1);
        }

        #[test]
        fn budget_is_tight(sizes in prop::collection::vec(1usize..50, 1..100), k in 1u64..3000) {
            let r = rank(sizes.iter().enumerate().map(|(i, &s)| doc(i as u64, 0.0, s)).collect()).unwrap();
            let ids = select_top_k(&r, k).unwrap();
            let total: u64 = sizes.iter().map(|&s| s as u64).sum();
            let picked: u64 = ids.iter().map(|&i| sizes[i as usize] as u64).sum();
            if total >= k {
                prop_assert!(picked >= k && picked < k + 49);
            } else {
                prop_assert_eq!(picked, total);
            }
        }
    }
}
