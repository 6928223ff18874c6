//! Inverted index and query ranking.
//!
//! A document's score for a query is the sum, over the distinct query
//! terms, of `local_weight(scheme, f) * idf(term)`. The global weight is a
//! smoothed IDF, `log2((N + 1) / (n_t + 0.5))`, which stays positive for
//! every term. Once built, an [`Index`] is never mutated.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::catalog::{local_weight, DocStats, SchemeId};
use crate::error::{Error, Result};
use crate::transforms::log;

pub const INDEX_FORMAT: &str = "powerweight-index";
pub const INDEX_VERSION: u32 = 1;

/// Lower-case and split on every run of non-alphanumeric characters.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub doc_id: u64,
    pub text: String,
    pub tokens: Vec<String>,
    pub stats: DocStats,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Posting {
    pub doc_id: u64,
    pub term_freq: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Index {
    documents: BTreeMap<u64, Document>,
    /// Postings per term, sorted by `doc_id`.
    postings: BTreeMap<String, Vec<Posting>>,
    avedl: f64,
}

#[derive(Serialize, Deserialize)]
struct IndexFile {
    format: String,
    version: u32,
    index: Index,
}

#[derive(Deserialize)]
struct Record {
    id: u64,
    text: String,
}

/// Build an index from JSON lines carrying `id` and `text`. Blank lines are
/// skipped, as are documents with no tokens.
pub fn ingest_corpus<R: BufRead>(source: R) -> Result<Index> {
    let mut docs = Vec::new();
    for (i, line) in source.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: Record = serde_json::from_str(&line)
            .map_err(|e| Error::Format { line: i + 1, message: e.to_string() })?;
        docs.push((record.id, record.text));
    }
    Index::from_documents(docs)
}

impl Index {
    pub fn from_documents<I, S>(docs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u64, S)>,
        S: Into<String>,
    {
        let mut seen = HashSet::new();
        let mut accepted = Vec::new();
        for (doc_id, text) in docs {
            if !seen.insert(doc_id) {
                return Err(Error::DuplicateId(doc_id));
            }
            let text = text.into();
            let tokens = tokenize(&text);
            if tokens.is_empty() {
                log::warn!("skipping document {doc_id}: no tokens");
                continue;
            }
            accepted.push((doc_id, text, tokens));
        }
        if accepted.is_empty() {
            return Err(Error::EmptyCorpus);
        }

        let total: usize = accepted.iter().map(|(_, _, t)| t.len()).sum();
        let avedl = total as f64 / accepted.len() as f64;

        let mut documents = BTreeMap::new();
        let mut postings: BTreeMap<String, Vec<Posting>> = BTreeMap::new();
        for (doc_id, text, tokens) in accepted {
            let mut counts: BTreeMap<&str, u64> = BTreeMap::new();
            for t in &tokens {
                *counts.entry(t.as_str()).or_default() += 1;
            }
            let ave_term_freq = tokens.len() as f64 / counts.len() as f64;
            let stats = DocStats::new(tokens.len() as u64, avedl, ave_term_freq)?;
            for (term, term_freq) in counts {
                postings.entry(term.to_string()).or_default().push(Posting { doc_id, term_freq });
            }
            documents.insert(doc_id, Document { doc_id, text, tokens, stats });
        }
        for list in postings.values_mut() {
            list.sort_by_key(|p| p.doc_id);
        }
        log::info!("indexed {} documents, {} terms, avedl {avedl}", documents.len(), postings.len());
        Ok(Index { documents, postings, avedl })
    }

    pub fn num_docs(&self) -> usize {
        self.documents.len()
    }

    pub fn avedl(&self) -> f64 {
        self.avedl
    }

    pub fn document(&self, doc_id: u64) -> Option<&Document> {
        self.documents.get(&doc_id)
    }

    pub fn documents(&self) -> impl Iterator<Item = &Document> {
        self.documents.values()
    }

    pub fn postings(&self, term: &str) -> &[Posting] {
        self.postings.get(term).map_or(&[], Vec::as_slice)
    }

    /// Number of documents containing `term`.
    pub fn doc_freq(&self, term: &str) -> usize {
        self.postings(term).len()
    }

    /// Occurrences of `term` in document `doc_id`.
    pub fn term_freq(&self, term: &str, doc_id: u64) -> u64 {
        let list = self.postings(term);
        list.binary_search_by_key(&doc_id, |p| p.doc_id).map_or(0, |i| list[i].term_freq)
    }

    pub fn to_writer<W: Write>(&self, writer: W) -> Result<()> {
        let file = IndexFile { format: INDEX_FORMAT.into(), version: INDEX_VERSION, index: self.clone() };
        serde_json::to_writer(writer, &file)?;
        Ok(())
    }

    pub fn from_reader<R: Read>(reader: R) -> Result<Self> {
        let file: IndexFile = serde_json::from_reader(reader)?;
        if file.format != INDEX_FORMAT {
            return Err(Error::IndexFormat(format!("unexpected format tag {:?}", file.format)));
        }
        if file.version != INDEX_VERSION {
            return Err(Error::IndexFormat(format!("unsupported version {}", file.version)));
        }
        file.index.check()?;
        Ok(file.index)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        self.to_writer(&mut w)?;
        w.flush()?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_reader(BufReader::new(File::open(path)?))
    }

    fn check(&self) -> Result<()> {
        if self.documents.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        for (term, list) in &self.postings {
            for p in list {
                if p.term_freq == 0 || !self.documents.contains_key(&p.doc_id) {
                    return Err(Error::IndexFormat(format!("bad posting for {term:?}: {p:?}")));
                }
            }
        }
        Ok(())
    }
}

/// `log2((N + 1) / (n_t + 0.5))`; unseen terms have `n_t = 0`.
pub fn idf(term: &str, index: &Index) -> f64 {
    let n = index.num_docs() as f64;
    let n_t = index.doc_freq(term) as f64;
    log((n + 1.0) / (n_t + 0.5))
}

fn distinct<S: AsRef<str>>(terms: &[S]) -> Vec<&str> {
    let mut seen = HashSet::new();
    terms.iter().map(AsRef::as_ref).filter(|t| seen.insert(*t)).collect()
}

/// Score `doc` against the distinct `query_terms`.
pub fn score_document<S: AsRef<str>>(
    query_terms: &[S],
    doc: &Document,
    index: &Index,
    scheme: &SchemeId,
) -> Result<f64> {
    let mut score = 0.0;
    for term in distinct(query_terms) {
        let f = index.term_freq(term, doc.doc_id);
        if f == 0 {
            continue;
        }
        score += local_weight(scheme, f, &doc.stats)? * idf(term, index);
    }
    Ok(score)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Hit {
    pub doc_id: u64,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QueryResult {
    /// Sorted by score descending, then `doc_id` ascending.
    pub hits: Vec<Hit>,
    pub terms: Vec<String>,
    pub scheme: String,
}

impl QueryResult {
    pub fn doc_ids(&self) -> Vec<u64> {
        self.hits.iter().map(|h| h.doc_id).collect()
    }

    /// One `{"rank":..,"doc_id":..,"score":..}` object per line, scores at
    /// six decimals.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for (i, h) in self.hits.iter().enumerate() {
            let _ = writeln!(out, r#"{{"rank":{},"doc_id":{},"score":{:.6}}}"#, i + 1, h.doc_id, h.score);
        }
        out
    }
}

pub fn rank_query(query: &str, index: &Index, scheme: &SchemeId, top_k: usize) -> Result<QueryResult> {
    rank_query_by(query, index, top_k, &scheme.to_string(), |_| *scheme)
}

/// Rank with a scheme chosen per document, e.g. to pin `K` to a target
/// value by adjusting `k1` for each document's length.
pub fn rank_query_by<F>(
    query: &str,
    index: &Index,
    top_k: usize,
    label: &str,
    scheme_for: F,
) -> Result<QueryResult>
where
    F: Fn(&Document) -> SchemeId,
{
    if top_k == 0 {
        return Err(Error::domain("top_k must be at least 1"));
    }
    let terms: Vec<String> = distinct(&tokenize(query)).into_iter().map(String::from).collect();
    let candidates: BTreeSet<u64> =
        terms.iter().flat_map(|t| index.postings(t).iter().map(|p| p.doc_id)).collect();
    let mut hits = Vec::with_capacity(candidates.len());
    for doc_id in candidates {
        let doc = &index.documents[&doc_id];
        let score = score_document(&terms, doc, index, &scheme_for(doc))?;
        hits.push(Hit { doc_id, score });
    }
    hits.sort_by(|a, b| b.score.total_cmp(&a.score).then(a.doc_id.cmp(&b.doc_id)));
    hits.truncate(top_k);
    Ok(QueryResult { hits, terms, scheme: label.to_string() })
}

/// Kendall rank correlation between two orderings of the same ids.
pub fn kendall_tau(a: &[u64], b: &[u64]) -> Result<f64> {
    let n = a.len();
    if n < 2 || b.len() != n {
        return Err(Error::domain("rankings must have equal length of at least 2"));
    }
    let pos: HashMap<u64, usize> = b.iter().enumerate().map(|(i, &d)| (d, i)).collect();
    if pos.len() != n {
        return Err(Error::domain("ranking contains duplicate ids"));
    }
    let ranks = a
        .iter()
        .map(|d| pos.get(d).copied().ok_or_else(|| Error::domain(format!("id {d} missing from second ranking"))))
        .collect::<Result<Vec<_>>>()?;
    if ranks.iter().collect::<HashSet<_>>().len() != n {
        return Err(Error::domain("ranking contains duplicate ids"));
    }
    let mut balance: i64 = 0;
    for i in 0..n {
        for j in i + 1..n {
            balance += if ranks[i] < ranks[j] { 1 } else { -1 };
        }
    }
    Ok(balance as f64 / (n * (n - 1) / 2) as f64)
}
