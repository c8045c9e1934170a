//! Document corpus loading and tokenization.
//!
//! A corpus is an ordered list of [`Document`] records, usually loaded from a
//! JSONL file (one JSON object per line). Tokenization concatenates the
//! configured fields in order, splits text fields on whitespace, joins
//! multi-word phrases from a user dictionary (longest match first), drops
//! stopwords, and numbers the surviving tokens from zero. Keyword-field
//! entries are kept as single tokens and never split.

mod synth;

pub use synth::generate_synthetic_corpus;

use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::io::BufRead;
use std::path::{Path, PathBuf};
use thiserror::Error;

/// One corpus record. Only `doc_id` is mandatory; all other fields default to
/// empty when absent from the input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub doc_id: String,
    #[serde(default)]
    pub title: String,
    #[serde(rename = "abstract", default)]
    pub abstract_text: String,
    #[serde(default)]
    pub keywords: Vec<String>,
    #[serde(default)]
    pub discipline: String,
    #[serde(default)]
    pub category: String,
}

impl Document {
    /// Convenience constructor for hand-built corpora in tests and examples.
    pub fn new(doc_id: &str, title: &str) -> Self {
        Document {
            doc_id: doc_id.to_string(),
            title: title.to_string(),
            abstract_text: String::new(),
            keywords: Vec::new(),
            discipline: String::new(),
            category: String::new(),
        }
    }
}

/// An ordered list of documents.
pub type Corpus = Vec<Document>;

/// Corpus file formats accepted by [`load_corpus`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CorpusFormat {
    /// One JSON object per line.
    Jsonl,
}

/// Document fields that can feed the tokenizer, in the order they should be
/// concatenated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Field {
    Title,
    Abstract,
    Keywords,
}

impl Field {
    pub fn as_str(self) -> &'static str {
        match self {
            Field::Title => "title",
            Field::Abstract => "abstract",
            Field::Keywords => "keywords",
        }
    }
}

impl std::str::FromStr for Field {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "title" => Ok(Field::Title),
            "abstract" => Ok(Field::Abstract),
            "keywords" => Ok(Field::Keywords),
            other => Err(format!(
                "unknown field {other:?} (expected title, abstract or keywords)"
            )),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Tokenizer settings. The same config must be used when building an index
/// and when re-tokenizing documents against it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenizerConfig {
    pub stopwords: BTreeSet<String>,
    /// Multi-word phrases joined into single tokens, e.g. "data mining".
    pub user_dictionary: BTreeSet<String>,
    /// Ordered subset of fields to tokenize.
    pub fields_used: Vec<Field>,
    pub lowercase: bool,
}

impl Default for TokenizerConfig {
    fn default() -> Self {
        TokenizerConfig {
            stopwords: BTreeSet::new(),
            user_dictionary: BTreeSet::new(),
            fields_used: vec![Field::Title, Field::Abstract, Field::Keywords],
            lowercase: true,
        }
    }
}

/// A token together with its position in the stream.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub term: String,
    pub position: u32,
}

/// Ordered tokens of one document. Positions always run 0..k-1.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TokenStream {
    pub tokens: Vec<Token>,
}

impl TokenStream {
    pub fn terms(&self) -> impl Iterator<Item = &str> {
        self.tokens.iter().map(|t| t.term.as_str())
    }
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("malformed record on line {line}: {message}")]
    MalformedLine { line: usize, message: String },
    #[error("duplicate doc_id {0:?}")]
    DuplicateDocId(String),
}

/// A compiled tokenizer. Building one normalizes the stopword set and groups
/// dictionary phrases by their first word so per-document tokenization stays
/// cheap.
pub struct Tokenizer {
    stopwords: HashSet<String>,
    // first word -> full phrase token sequences, longest first
    phrases: HashMap<String, Vec<Vec<String>>>,
    fields: Vec<Field>,
    lowercase: bool,
}

impl Tokenizer {
    pub fn new(cfg: &TokenizerConfig) -> Self {
        let norm = |s: &str| {
            if cfg.lowercase {
                s.to_lowercase()
            } else {
                s.to_string()
            }
        };
        let stopwords = cfg.stopwords.iter().map(|s| norm(s)).collect();
        let mut phrases: HashMap<String, Vec<Vec<String>>> = HashMap::new();
        for phrase in &cfg.user_dictionary {
            let words: Vec<String> = norm(phrase).split_whitespace().map(String::from).collect();
            if words.len() < 2 {
                continue; // single-word entries change nothing
            }
            phrases.entry(words[0].clone()).or_default().push(words);
        }
        for seqs in phrases.values_mut() {
            seqs.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
            seqs.dedup();
        }
        Tokenizer {
            stopwords,
            phrases,
            fields: cfg.fields_used.clone(),
            lowercase: cfg.lowercase,
        }
    }

    pub fn tokenize(&self, doc: &Document) -> TokenStream {
        let mut terms: Vec<String> = Vec::new();
        for field in &self.fields {
            match field {
                Field::Title => self.push_text(&doc.title, &mut terms),
                Field::Abstract => self.push_text(&doc.abstract_text, &mut terms),
                Field::Keywords => {
                    for kw in &doc.keywords {
                        self.push_keyword(kw, &mut terms);
                    }
                }
            }
        }
        TokenStream {
            tokens: terms
                .into_iter()
                .enumerate()
                .map(|(i, term)| Token {
                    term,
                    position: i as u32,
                })
                .collect(),
        }
    }

    fn norm(&self, s: &str) -> String {
        if self.lowercase {
            s.to_lowercase()
        } else {
            s.to_string()
        }
    }

    fn push_text(&self, text: &str, out: &mut Vec<String>) {
        let words: Vec<String> = if self.lowercase {
            text.split_whitespace().map(|w| w.to_lowercase()).collect()
        } else {
            text.split_whitespace().map(String::from).collect()
        };
        let mut i = 0;
        while i < words.len() {
            let mut joined = None;
            if let Some(seqs) = self.phrases.get(&words[i]) {
                // seqs are longest first, so the first hit is the longest match
                for seq in seqs {
                    if i + seq.len() <= words.len() && words[i..i + seq.len()] == seq[..] {
                        joined = Some(seq.join(" "));
                        i += seq.len();
                        break;
                    }
                }
            }
            let term = match joined {
                Some(t) => t,
                None => {
                    let t = words[i].clone();
                    i += 1;
                    t
                }
            };
            if !self.stopwords.contains(&term) {
                out.push(term);
            }
        }
    }

    fn push_keyword(&self, kw: &str, out: &mut Vec<String>) {
        let term = self.norm(kw);
        if term.is_empty() || self.stopwords.contains(&term) {
            return;
        }
        out.push(term);
    }
}

/// Tokenize a single document. When tokenizing many documents with the same
/// config, build a [`Tokenizer`] once instead.
pub fn tokenize(doc: &Document, cfg: &TokenizerConfig) -> TokenStream {
    Tokenizer::new(cfg).tokenize(doc)
}

/// Load a corpus file. Fails on unreadable files, on malformed lines (with
/// the line number) and on duplicate doc ids (with the id).
pub fn load_corpus(path: &Path, format: CorpusFormat) -> Result<Corpus, CorpusError> {
    match format {
        CorpusFormat::Jsonl => load_jsonl(path),
    }
}

fn load_jsonl(path: &Path) -> Result<Corpus, CorpusError> {
    let file = std::fs::File::open(path).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let reader = std::io::BufReader::new(file);
    let mut docs = Vec::new();
    let mut seen: HashSet<String> = HashSet::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|source| CorpusError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let lineno = idx + 1;
        let doc: Document =
            serde_json::from_str(&line).map_err(|e| CorpusError::MalformedLine {
                line: lineno,
                message: e.to_string(),
            })?;
        if doc.doc_id.is_empty() {
            return Err(CorpusError::MalformedLine {
                line: lineno,
                message: "doc_id must be non-empty".to_string(),
            });
        }
        if !seen.insert(doc.doc_id.clone()) {
            return Err(CorpusError::DuplicateDocId(doc.doc_id));
        }
        docs.push(doc);
    }
    Ok(docs)
}

/// Read a stopword file: one word per line, blank lines and `#` comments
/// ignored.
pub fn load_stopwords(path: &Path) -> Result<BTreeSet<String>, CorpusError> {
    let text = std::fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(String::from)
        .collect())
}

/// Read a phrase dictionary: one phrase per line, blank lines ignored.
pub fn load_dictionary(path: &Path) -> Result<BTreeSet<String>, CorpusError> {
    let text = std::fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(String::from)
        .collect())
}
