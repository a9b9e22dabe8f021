//! Kept in its own test binary so the peak-memory reading is not shared with
//! other tests.

use std::fs::File;
use std::io::{BufWriter, Write};

use domain_sieve::batcher::group_unlabeled;
use domain_sieve::corpus_io::{open_monolingual, open_parallel, CorpusHandle, LanguageSide};

/// Peak resident set size in KiB, if the platform exposes it.
fn peak_rss_kib() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    status
        .lines()
        .find(|l| l.starts_with("VmHWM:"))?
        .split_whitespace()
        .nth(1)?
        .parse()
        .ok()
}

#[test]
fn million_line_file_streams_in_bounded_memory() {
    const LINES: usize = 1_000_000;
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("big.tsv");
    {
        let mut w = BufWriter::new(File::create(&path).unwrap());
        for i in 0..LINES {
            writeln!(
                w,
                "quelle nummer {i} mit etwas mehr text darin\ttarget number {i} with some more text in it"
            )
            .unwrap();
        }
    }
    let file_kib = std::fs::metadata(&path).unwrap().len() / 1024;
    let before = peak_rss_kib();

    let mut count = 0usize;
    let mut bytes = 0usize;
    for s in open_monolingual(&CorpusHandle::tsv(&path, LanguageSide::Target)).unwrap() {
        let s = s.unwrap();
        bytes += s.text.len();
        count += 1;
    }
    assert_eq!(count, LINES);
    assert!(bytes > 0);

    let mut docs = 0;
    for d in group_unlabeled(
        open_parallel(&CorpusHandle::tsv(&path, LanguageSide::Source)).unwrap(),
        100,
        LanguageSide::Source,
    ) {
        assert_eq!(d.unwrap().size(), 100);
        docs += 1;
    }
    assert_eq!(docs, LINES / 100);

    if let (Some(b), Some(a)) = (before, peak_rss_kib()) {
        let growth = a.saturating_sub(b);
        assert!(
            growth < 16 * 1024 && growth < file_kib / 4,
            "peak RSS grew by {growth} KiB while streaming a {file_kib} KiB file"
        );
    }
}
