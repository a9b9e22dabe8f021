//! Streaming readers and writers for monolingual and parallel corpora.
//!
//! Every sentence gets a positional id (its 0-based line number), and text is
//! normalized to NFC on the way in so vocabulary keys compare consistently.
//! This is the only module that knows about on-disk corpus formats.

use std::borrow::Cow;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

use unicode_normalization::{is_nfc_quick, IsNormalized, UnicodeNormalization};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    pub id: u64,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SentencePair {
    pub id: u64,
    pub source: String,
    pub target: String,
}

impl SentencePair {
    pub fn side(&self, side: LanguageSide) -> &str {
        match side {
            LanguageSide::Source => &self.source,
            LanguageSide::Target => &self.target,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusFormat {
    /// Two line-aligned files, source first.
    PairedFiles,
    /// One pair per line, source and target separated by a single tab.
    Tsv,
    /// Monolingual text, one sentence per line.
    Plain,
}

impl CorpusFormat {
    pub fn as_str(self) -> &'static str {
        match self {
            CorpusFormat::PairedFiles => "paired-files",
            CorpusFormat::Tsv => "tsv",
            CorpusFormat::Plain => "plain",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "paired-files" => Some(CorpusFormat::PairedFiles),
            "tsv" => Some(CorpusFormat::Tsv),
            "plain" => Some(CorpusFormat::Plain),
            _ => None,
        }
    }
}

/// Which side of a bitext carries the language the classifier reads.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LanguageSide {
    Source,
    Target,
}

impl LanguageSide {
    pub fn as_str(self) -> &'static str {
        match self {
            LanguageSide::Source => "source",
            LanguageSide::Target => "target",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "source" => Some(LanguageSide::Source),
            "target" => Some(LanguageSide::Target),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusHandle {
    pub paths: Vec<PathBuf>,
    pub format: CorpusFormat,
    pub side: LanguageSide,
}

impl CorpusHandle {
    pub fn plain(path: impl Into<PathBuf>) -> Self {
        CorpusHandle {
            paths: vec![path.into()],
            format: CorpusFormat::Plain,
            side: LanguageSide::Target,
        }
    }

    pub fn tsv(path: impl Into<PathBuf>, side: LanguageSide) -> Self {
        CorpusHandle {
            paths: vec![path.into()],
            format: CorpusFormat::Tsv,
            side,
        }
    }

    pub fn paired(source: impl Into<PathBuf>, target: impl Into<PathBuf>, side: LanguageSide) -> Self {
        CorpusHandle {
            paths: vec![source.into(), target.into()],
            format: CorpusFormat::PairedFiles,
            side,
        }
    }

    fn check_arity(&self) -> Result<()> {
        let expected = match self.format {
            CorpusFormat::PairedFiles => 2,
            CorpusFormat::Tsv | CorpusFormat::Plain => 1,
        };
        if self.paths.len() != expected {
            return Err(Error::InvalidArgument(format!(
                "{} corpus needs {} path(s), got {}",
                self.format.as_str(),
                expected,
                self.paths.len()
            )));
        }
        Ok(())
    }
}

/// Reads raw lines, tracking byte offsets and line numbers, decoding UTF-8
/// and applying NFC.
struct LineReader {
    path: PathBuf,
    inner: BufReader<File>,
    buf: Vec<u8>,
    offset: u64,
    line: u64,
}

impl LineReader {
    fn open(path: &Path) -> Result<Self> {
        Self::open_at(path, 0, 0)
    }

    fn open_at(path: &Path, offset: u64, line: u64) -> Result<Self> {
        let mut file = File::open(path).map_err(|e| Error::io(path, e))?;
        if offset > 0 {
            file.seek(SeekFrom::Start(offset)).map_err(|e| Error::io(path, e))?;
        }
        Ok(LineReader {
            path: path.to_path_buf(),
            inner: BufReader::with_capacity(1 << 16, file),
            buf: Vec::with_capacity(256),
            offset,
            line,
        })
    }

    /// Byte offset of the next unread line.
    fn offset(&self) -> u64 {
        self.offset
    }

    /// Returns the 0-based line number and decoded text of the next line.
    fn next_line(&mut self) -> Option<Result<(u64, String)>> {
        self.buf.clear();
        let read = match self.inner.read_until(b'\n', &mut self.buf) {
            Ok(0) => return None,
            Ok(n) => n,
            Err(e) => return Some(Err(Error::io(&self.path, e))),
        };
        let start = self.offset;
        self.offset += read as u64;
        let line_no = self.line;
        self.line += 1;

        let mut bytes = &self.buf[..];
        if let Some(rest) = bytes.strip_suffix(b"\n") {
            bytes = rest;
        }
        if let Some(rest) = bytes.strip_suffix(b"\r") {
            bytes = rest;
        }
        let text = match std::str::from_utf8(bytes) {
            Ok(s) => s,
            Err(e) => {
                return Some(Err(Error::Encoding {
                    path: self.path.clone(),
                    offset: start + e.valid_up_to() as u64,
                }))
            }
        };
        Some(Ok((line_no, normalize(text).into_owned())))
    }
}

fn normalize(text: &str) -> Cow<'_, str> {
    let text: Cow<'_, str> = match is_nfc_quick(text.chars()) {
        IsNormalized::Yes => Cow::Borrowed(text),
        _ => Cow::Owned(text.nfc().collect()),
    };
    if text.contains(is_line_break) {
        Cow::Owned(text.replace(is_line_break, " "))
    } else {
        text
    }
}

fn is_line_break(c: char) -> bool {
    matches!(
        c,
        '\n' | '\r' | '\u{0B}' | '\u{0C}' | '\u{85}' | '\u{2028}' | '\u{2029}'
    )
}

/// Sequential stream of [`Sentence`]s.
pub struct MonolingualReader {
    inner: MonoSource,
}

enum MonoSource {
    Plain(LineReader),
    Side(ParallelReader, LanguageSide),
}

impl Iterator for MonolingualReader {
    type Item = Result<Sentence>;

    fn next(&mut self) -> Option<Self::Item> {
        match &mut self.inner {
            MonoSource::Plain(reader) => Some(reader.next_line()?.map(|(id, text)| Sentence { id, text })),
            MonoSource::Side(reader, side) => {
                let side = *side;
                Some(reader.next()?.map(|pair| {
                    let text = match side {
                        LanguageSide::Source => pair.source,
                        LanguageSide::Target => pair.target,
                    };
                    Sentence { id: pair.id, text }
                }))
            }
        }
    }
}

/// Opens a monolingual stream. Parallel handles are projected onto their
/// declared language side.
pub fn open_monolingual(handle: &CorpusHandle) -> Result<MonolingualReader> {
    handle.check_arity()?;
    let inner = match handle.format {
        CorpusFormat::Plain => MonoSource::Plain(LineReader::open(&handle.paths[0])?),
        CorpusFormat::Tsv | CorpusFormat::PairedFiles => MonoSource::Side(open_parallel(handle)?, handle.side),
    };
    Ok(MonolingualReader { inner })
}

/// Sequential stream of [`SentencePair`]s.
pub struct ParallelReader {
    inner: ParallelSource,
    failed: bool,
}

enum ParallelSource {
    Tsv(LineReader),
    Paired(LineReader, LineReader),
}

impl ParallelReader {
    fn offsets(&self) -> [u64; 2] {
        match &self.inner {
            ParallelSource::Tsv(r) => [r.offset(), 0],
            ParallelSource::Paired(s, t) => [s.offset(), t.offset()],
        }
    }

    fn read_pair(&mut self) -> Option<Result<SentencePair>> {
        match &mut self.inner {
            ParallelSource::Tsv(reader) => {
                let (id, line) = match reader.next_line()? {
                    Ok(v) => v,
                    Err(e) => return Some(Err(e)),
                };
                let tabs = line.matches('\t').count();
                if tabs != 1 {
                    return Some(Err(Error::format(
                        &reader.path,
                        id + 1,
                        format!("expected exactly one tab, found {tabs}"),
                    )));
                }
                let (source, target) = line.split_once('\t').expect("one tab");
                Some(Ok(SentencePair {
                    id,
                    source: source.to_string(),
                    target: target.to_string(),
                }))
            }
            ParallelSource::Paired(src, tgt) => {
                let (a, b) = (src.next_line(), tgt.next_line());
                match (a, b) {
                    (None, None) => None,
                    (Some(Err(e)), _) | (_, Some(Err(e))) => Some(Err(e)),
                    (Some(Ok(_)), None) => Some(Err(Error::LengthMismatch {
                        shorter: tgt.path.clone(),
                        longer: src.path.clone(),
                        lines: tgt.line,
                    })),
                    (None, Some(Ok(_))) => Some(Err(Error::LengthMismatch {
                        shorter: src.path.clone(),
                        longer: tgt.path.clone(),
                        lines: src.line,
                    })),
                    (Some(Ok((id, s))), Some(Ok((_, t)))) => Some(Ok(SentencePair {
                        id,
                        source: untab(s),
                        target: untab(t),
                    })),
                }
            }
        }
    }
}

fn untab(s: String) -> String {
    if s.contains('\t') {
        s.replace('\t', " ")
    } else {
        s
    }
}

impl Iterator for ParallelReader {
    type Item = Result<SentencePair>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        let item = self.read_pair();
        if matches!(item, Some(Err(_))) {
            self.failed = true;
        }
        item
    }
}

pub fn open_parallel(handle: &CorpusHandle) -> Result<ParallelReader> {
    handle.check_arity()?;
    let inner = match handle.format {
        CorpusFormat::Tsv => ParallelSource::Tsv(LineReader::open(&handle.paths[0])?),
        CorpusFormat::PairedFiles => {
            ParallelSource::Paired(LineReader::open(&handle.paths[0])?, LineReader::open(&handle.paths[1])?)
        }
        CorpusFormat::Plain => {
            return Err(Error::InvalidArgument(
                "plain corpus cannot be opened as parallel data".into(),
            ))
        }
    };
    Ok(ParallelReader { inner, failed: false })
}

/// Byte offsets of every group of `n` consecutive pairs, so that documents
/// can be re-read in rank order without holding the corpus in memory.
#[derive(Debug, Clone)]
pub struct GroupIndex {
    handle: CorpusHandle,
    group_size: usize,
    starts: Vec<[u64; 2]>,
    total_pairs: u64,
}

impl GroupIndex {
    /// Scans the corpus once, validating every line.
    pub fn build(handle: &CorpusHandle, group_size: usize) -> Result<Self> {
        if group_size == 0 {
            return Err(Error::InvalidArgument("group size must be >= 1".into()));
        }
        let mut reader = open_parallel(handle)?;
        let mut starts = Vec::new();
        let mut total = 0u64;
        loop {
            let at = reader.offsets();
            match reader.next() {
                None => break,
                Some(Err(e)) => return Err(e),
                Some(Ok(_)) => {
                    if total.is_multiple_of(group_size as u64) {
                        starts.push(at);
                    }
                    total += 1;
                }
            }
        }
        Ok(GroupIndex {
            handle: handle.clone(),
            group_size,
            starts,
            total_pairs: total,
        })
    }

    pub fn num_groups(&self) -> usize {
        self.starts.len()
    }

    pub fn total_pairs(&self) -> u64 {
        self.total_pairs
    }

    pub fn group_len(&self, group: usize) -> usize {
        let first = (group * self.group_size) as u64;
        (self.total_pairs.saturating_sub(first)).min(self.group_size as u64) as usize
    }

    pub fn read_group(&self, group: usize) -> Result<Vec<SentencePair>> {
        let at = *self.starts.get(group).ok_or_else(|| {
            Error::InvalidArgument(format!(
                "document {group} out of range ({} documents)",
                self.starts.len()
            ))
        })?;
        let first_line = (group * self.group_size) as u64;
        let inner = match self.handle.format {
            CorpusFormat::Tsv => ParallelSource::Tsv(LineReader::open_at(&self.handle.paths[0], at[0], first_line)?),
            CorpusFormat::PairedFiles => ParallelSource::Paired(
                LineReader::open_at(&self.handle.paths[0], at[0], first_line)?,
                LineReader::open_at(&self.handle.paths[1], at[1], first_line)?,
            ),
            CorpusFormat::Plain => unreachable!("index is only built over parallel corpora"),
        };
        let reader = ParallelReader { inner, failed: false };
        reader.take(self.group_len(group)).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelectedDocument {
    pub doc_id: u64,
    pub score: f64,
    pub pairs: Vec<SentencePair>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SelectionSummary {
    pub pairs_written: u64,
    pub documents_written: u64,
}

pub const SELECTION_MANIFEST_HEADER: &str = "doc_id\tscore\tfirst_line\tnum_pairs";

/// Writes selected documents as `source<TAB>target` lines in the order given,
/// plus a manifest locating each document in the output. A `provenance` string
/// becomes a leading `# ` comment line of the manifest.
pub fn write_selection<I>(
    docs: I,
    out_path: &Path,
    manifest_path: &Path,
    provenance: Option<&str>,
) -> Result<SelectionSummary>
where
    I: IntoIterator<Item = Result<SelectedDocument>>,
{
    let create = |p: &Path| File::create(p).map(BufWriter::new).map_err(|e| Error::io(p, e));
    let mut out = create(out_path)?;
    let mut manifest = create(manifest_path)?;

    if let Some(p) = provenance {
        writeln!(manifest, "# {p}").map_err(|e| Error::io(manifest_path, e))?;
    }
    writeln!(manifest, "{SELECTION_MANIFEST_HEADER}").map_err(|e| Error::io(manifest_path, e))?;

    let mut summary = SelectionSummary::default();
    for doc in docs {
        let doc = doc?;
        writeln!(
            manifest,
            "{}\t{:.6}\t{}\t{}",
            doc.doc_id,
            doc.score,
            summary.pairs_written,
            doc.pairs.len()
        )
        .map_err(|e| Error::io(manifest_path, e))?;
        for pair in &doc.pairs {
            writeln!(out, "{}\t{}", pair.source, pair.target).map_err(|e| Error::io(out_path, e))?;
        }
        summary.pairs_written += doc.pairs.len() as u64;
        summary.documents_written += 1;
    }
    out.flush().map_err(|e| Error::io(out_path, e))?;
    manifest.flush().map_err(|e| Error::io(manifest_path, e))?;
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::fs;

    fn write(dir: &Path, name: &str, bytes: &[u8]) -> PathBuf {
        let p = dir.join(name);
        fs::write(&p, bytes).unwrap();
        p
    }

    #[test]
    fn monolingual_positional_ids_keep_blank_lines() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(dir.path(), "m.txt", b"a\n\nb\n");
        let got: Vec<_> = open_monolingual(&CorpusHandle::plain(&p))
            .unwrap()
            .collect::<Result<_>>()
            .unwrap();
        let texts: Vec<_> = got.iter().map(|s| (s.id, s.text.as_str())).collect();
        assert_eq!(texts, vec![(0, "a"), (1, ""), (2, "b")]);
    }

    #[test]
    fn empty_file_is_empty_stream() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(dir.path(), "e.txt", b"");
        assert_eq!(open_monolingual(&CorpusHandle::plain(&p)).unwrap().count(), 0);
    }

    #[test]
    fn invalid_utf8_reports_byte_offset() {
        // "hello world\n" is 12 bytes, "abcde" 5 more: the bad byte sits at 17.
        let dir = tempfile::tempdir().unwrap();
        let p = write(dir.path(), "bad.txt", b"hello world\nabcde\xFFxyz\n");
        let mut it = open_monolingual(&CorpusHandle::plain(&p)).unwrap();
        assert!(it.next().unwrap().is_ok());
        match it.next().unwrap() {
            Err(Error::Encoding { offset, .. }) => assert_eq!(offset, 17),
            other => panic!("expected encoding error, got {other:?}"),
        }
    }

    #[test]
    fn crlf_and_nfc_are_normalized() {
        let dir = tempfile::tempdir().unwrap();
        // "e" + combining acute composes to U+00E9.
        let p = write(dir.path(), "n.txt", "cafe\u{301}\r\n".as_bytes());
        let s = open_monolingual(&CorpusHandle::plain(&p))
            .unwrap()
            .next()
            .unwrap()
            .unwrap();
        assert_eq!(s.text, "caf\u{e9}");
    }

    #[test]
    fn tsv_pair() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(dir.path(), "p.tsv", b"hallo\thello\n");
        let pairs: Vec<_> = open_parallel(&CorpusHandle::tsv(&p, LanguageSide::Target))
            .unwrap()
            .collect::<Result<_>>()
            .unwrap();
        assert_eq!(
            pairs,
            vec![SentencePair {
                id: 0,
                source: "hallo".into(),
                target: "hello".into()
            }]
        );
    }

    #[test]
    fn tsv_two_tabs_cites_line_number() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(dir.path(), "p.tsv", b"a\tb\nc\td\te\n");
        let res: Result<Vec<_>> = open_parallel(&CorpusHandle::tsv(&p, LanguageSide::Target))
            .unwrap()
            .collect();
        match res {
            Err(Error::Format { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected format error, got {other:?}"),
        }
    }

    #[test]
    fn paired_length_mismatch_names_shorter_file() {
        let dir = tempfile::tempdir().unwrap();
        let s = write(dir.path(), "src.txt", b"1\n2\n");
        let t = write(dir.path(), "tgt.txt", b"1\n2\n3\n");
        let res: Result<Vec<_>> = open_parallel(&CorpusHandle::paired(&s, &t, LanguageSide::Target))
            .unwrap()
            .collect();
        match res {
            Err(Error::LengthMismatch { shorter, lines, .. }) => {
                assert_eq!(shorter, s);
                assert_eq!(lines, 2);
            }
            other => panic!("expected mismatch, got {other:?}"),
        }
    }

    #[test]
    fn paired_files_strip_tabs() {
        let dir = tempfile::tempdir().unwrap();
        let s = write(dir.path(), "src.txt", b"a\tb\n");
        let t = write(dir.path(), "tgt.txt", b"c\n");
        let pair = open_parallel(&CorpusHandle::paired(&s, &t, LanguageSide::Source))
            .unwrap()
            .next()
            .unwrap()
            .unwrap();
        assert_eq!(pair.source, "a b");
    }

    #[test]
    fn monolingual_projection_of_parallel_side() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(dir.path(), "p.tsv", b"x\ty\nu\tv\n");
        let texts: Vec<String> = open_monolingual(&CorpusHandle::tsv(&p, LanguageSide::Source))
            .unwrap()
            .map(|s| s.unwrap().text)
            .collect();
        assert_eq!(texts, vec!["x", "u"]);
    }

    #[test]
    fn empty_selection_writes_header_only() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("sel.tsv");
        let man = dir.path().join("sel.manifest.tsv");
        let summary = write_selection(Vec::new(), &out, &man, None).unwrap();
        assert_eq!(summary, SelectionSummary::default());
        assert_eq!(fs::read_to_string(&out).unwrap(), "");
        assert_eq!(
            fs::read_to_string(&man).unwrap(),
            format!("{SELECTION_MANIFEST_HEADER}\n")
        );
    }

    #[test]
    fn group_index_reads_trailing_partial_group() {
        let dir = tempfile::tempdir().unwrap();
        let body: String = (0..7).map(|i| format!("s{i}\tt{i}\n")).collect();
        let p = write(dir.path(), "c.tsv", body.as_bytes());
        let idx = GroupIndex::build(&CorpusHandle::tsv(&p, LanguageSide::Target), 3).unwrap();
        assert_eq!(idx.num_groups(), 3);
        let last = idx.read_group(2).unwrap();
        assert_eq!(last.len(), 1);
        assert_eq!(last[0].id, 6);
        assert_eq!(last[0].target, "t6");
        let mid = idx.read_group(1).unwrap();
        assert_eq!(mid.iter().map(|p| p.id).collect::<Vec<_>>(), vec![3, 4, 5]);
    }
}
