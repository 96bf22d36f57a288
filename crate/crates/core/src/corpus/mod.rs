//! Document/query/summary data model and readers/writers for the on-disk
//! formats: topic directories, per-document JSON-lines sentence files,
//! whitespace-tokenized abstracts, and the token-mask compression corpus.
//!
//! Everything is immutable after load and safe to share across threads.

pub mod ptb;
pub mod stopwords;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tree::{default_head_rules, ParseTree};

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub surface: String,
    /// Lowercased surface when the input carries no lemma.
    pub lemma: String,
    /// PTB part-of-speech tag.
    pub pos: String,
    /// Index of the dependency head within the sentence, or -1 for the root.
    pub dep_head: i32,
    pub dep_rel: String,
    pub is_stopword: bool,
}

impl Token {
    /// True when the token carries any alphanumeric content; standalone
    /// punctuation fails this test and is excluded from word counts and
    /// content statistics.
    pub fn is_word(&self) -> bool {
        self.surface.chars().any(|c| c.is_alphanumeric())
    }

    /// Content tokens carry lexical content: words that are not stopwords.
    pub fn is_content(&self) -> bool {
        self.is_word() && !self.is_stopword
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnnotatedSentence {
    pub tokens: Vec<Token>,
    pub tree: ParseTree,
    pub doc_id: String,
    /// 0-based index of the sentence within its document.
    pub position: usize,
    /// ISO-8601 date, when known.
    pub timestamp: Option<String>,
}

impl AnnotatedSentence {
    pub fn validate(&self) -> Result<()> {
        let where_ = format!("sentence {}:{}", self.doc_id, self.position);
        if self.tokens.is_empty() {
            return Err(Error::validation(format!("{where_}: no tokens")));
        }
        if self.tree.leaf_count() != self.tokens.len() {
            return Err(Error::validation(format!(
                "{where_}: tree has {} leaves but sentence has {} tokens",
                self.tree.leaf_count(),
                self.tokens.len()
            )));
        }
        for (i, (word, token)) in self
            .tree
            .yield_words()
            .iter()
            .zip(self.tokens.iter())
            .enumerate()
        {
            if *word != token.surface {
                return Err(Error::validation(format!(
                    "{where_}: tree yield {:?} != token {:?} at index {i}",
                    word, token.surface
                )));
            }
        }
        let n = self.tokens.len() as i32;
        for (i, token) in self.tokens.iter().enumerate() {
            if token.pos.is_empty() {
                return Err(Error::validation(format!(
                    "{where_}: token {i} has empty pos"
                )));
            }
            if token.dep_head < -1 || token.dep_head >= n {
                return Err(Error::validation(format!(
                    "{where_}: token {i} dep_head {} out of range",
                    token.dep_head
                )));
            }
            if token.dep_head == i as i32 {
                return Err(Error::validation(format!(
                    "{where_}: token {i} is its own dependency head"
                )));
            }
        }
        if let Some(ts) = &self.timestamp {
            validate_date(ts)?;
        }
        Ok(())
    }

    pub fn surfaces(&self) -> Vec<&str> {
        self.tokens.iter().map(|t| t.surface.as_str()).collect()
    }

    /// Number of word tokens (standalone punctuation excluded).
    pub fn word_count(&self) -> usize {
        self.tokens.iter().filter(|t| t.is_word()).count()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub doc_id: String,
    pub timestamp: Option<String>,
    pub sentences: Vec<AnnotatedSentence>,
    pub headline: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QueryTopic {
    pub topic_id: String,
    pub title: String,
    pub narrative: String,
    pub documents: Vec<Document>,
    /// Reference summaries as token lists; may be empty at inference time.
    pub abstracts: Vec<Vec<String>>,
}

impl QueryTopic {
    pub fn sentences(&self) -> impl Iterator<Item = &AnnotatedSentence> {
        self.documents.iter().flat_map(|d| d.sentences.iter())
    }

    pub fn sentence_count(&self) -> usize {
        self.documents.iter().map(|d| d.sentences.len()).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompressionExample {
    pub sentence: AnnotatedSentence,
    /// One flag per token; true keeps the token.
    pub keep_mask: Vec<bool>,
}

impl CompressionExample {
    pub fn kept_indices(&self) -> Vec<usize> {
        self.keep_mask
            .iter()
            .enumerate()
            .filter_map(|(i, &k)| k.then_some(i))
            .collect()
    }
}

fn validate_date(s: &str) -> Result<()> {
    let bytes = s.as_bytes();
    let ok = bytes.len() == 10
        && bytes[4] == b'-'
        && bytes[7] == b'-'
        && s.chars().enumerate().all(|(i, c)| {
            if i == 4 || i == 7 {
                c == '-'
            } else {
                c.is_ascii_digit()
            }
        })
        && matches!(s[5..7].parse::<u32>(), Ok(1..=12))
        && matches!(s[8..10].parse::<u32>(), Ok(1..=31));
    if ok {
        Ok(())
    } else {
        Err(Error::validation(format!(
            "timestamp {s:?} is not an ISO-8601 date (YYYY-MM-DD)"
        )))
    }
}

// ---------------------------------------------------------------------------
// Wire formats
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
struct TopicHeader {
    topic_id: String,
    title: String,
    narrative: String,
    doc_ids: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
struct TokenLine {
    surface: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lemma: Option<String>,
    pos: String,
    dep_head: i32,
    dep_rel: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct SentenceLine {
    doc_id: String,
    position: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    timestamp: Option<String>,
    tokens: Vec<TokenLine>,
    tree: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct CompressionLine {
    tokens: Vec<TokenLine>,
    tree: String,
    keep_mask: Vec<u8>,
}

/// Loose sentence line for standalone compression input: document fields are
/// optional, and a `keep_mask` is accepted and ignored.
#[derive(Debug, Deserialize)]
struct LooseSentenceLine {
    #[serde(default)]
    doc_id: Option<String>,
    #[serde(default)]
    position: Option<usize>,
    #[serde(default)]
    timestamp: Option<String>,
    tokens: Vec<TokenLine>,
    tree: String,
    #[serde(default)]
    #[allow(dead_code)]
    keep_mask: Option<Vec<u8>>,
}

fn token_from_line(line: TokenLine) -> Token {
    let lemma = line.lemma.unwrap_or_else(|| line.surface.to_lowercase());
    let is_stopword =
        stopwords::is_stopword(&line.surface) || stopwords::stopwords().contains(&lemma);
    Token {
        surface: line.surface,
        lemma,
        pos: line.pos,
        dep_head: line.dep_head,
        dep_rel: line.dep_rel,
        is_stopword,
    }
}

fn token_to_line(token: &Token) -> TokenLine {
    let default_lemma = token.surface.to_lowercase();
    TokenLine {
        surface: token.surface.clone(),
        lemma: (token.lemma != default_lemma).then(|| token.lemma.clone()),
        pos: token.pos.clone(),
        dep_head: token.dep_head,
        dep_rel: token.dep_rel.clone(),
    }
}

fn build_sentence(
    doc_id: String,
    position: usize,
    timestamp: Option<String>,
    tokens: Vec<TokenLine>,
    tree_text: &str,
) -> Result<AnnotatedSentence> {
    let mut tree = ptb::parse_ptb(tree_text)?;
    tree.resolve_heads(default_head_rules());
    let sentence = AnnotatedSentence {
        tokens: tokens.into_iter().map(token_from_line).collect(),
        tree,
        doc_id,
        position,
        timestamp,
    };
    sentence.validate()?;
    Ok(sentence)
}

fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn json_line_error(path: &Path, lineno: usize, err: serde_json::Error) -> Error {
    Error::format(path, lineno, err.to_string())
}

/// Attach file/line context to tree-syntax errors from line-oriented input;
/// other errors already carry their own context.
fn at_line(path: &Path, lineno: usize, err: Error) -> Error {
    match err {
        Error::TreeSyntax { .. } => Error::format(path, lineno, err.to_string()),
        other => other,
    }
}

/// Load a fully validated topic from a directory containing `topic.json`,
/// one `<doc_id>.jsonl` per document, and optionally `abstracts/*.txt`.
pub fn load_topic(dir: impl AsRef<Path>) -> Result<QueryTopic> {
    let dir = dir.as_ref();
    let header_path = dir.join("topic.json");
    let header: TopicHeader = serde_json::from_str(&read_to_string(&header_path)?)
        .map_err(|e| Error::format(&header_path, e.line(), e.to_string()))?;

    let mut documents = Vec::new();
    for doc_id in &header.doc_ids {
        let path = dir.join(format!("{doc_id}.jsonl"));
        documents.push(load_document(&path, doc_id)?);
    }
    if documents.is_empty() {
        return Err(Error::validation(format!(
            "topic {} has no documents",
            header.topic_id
        )));
    }

    let abstracts = load_abstracts(&dir.join("abstracts"))?;

    Ok(QueryTopic {
        topic_id: header.topic_id,
        title: header.title,
        narrative: header.narrative,
        documents,
        abstracts,
    })
}

fn load_document(path: &Path, doc_id: &str) -> Result<Document> {
    let text = read_to_string(path)?;
    let mut sentences = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let parsed: SentenceLine =
            serde_json::from_str(line).map_err(|e| json_line_error(path, i + 1, e))?;
        if parsed.doc_id != doc_id {
            return Err(Error::format(
                path,
                i + 1,
                format!("doc_id {:?} does not match file {doc_id:?}", parsed.doc_id),
            ));
        }
        sentences.push(
            build_sentence(
                parsed.doc_id,
                parsed.position,
                parsed.timestamp,
                parsed.tokens,
                &parsed.tree,
            )
            .map_err(|e| at_line(path, i + 1, e))?,
        );
    }
    sentences.sort_by_key(|s| s.position);
    for (i, s) in sentences.iter().enumerate() {
        if s.position != i {
            return Err(Error::validation(format!(
                "document {doc_id}: sentence positions are not consecutive (saw {} at rank {i})",
                s.position
            )));
        }
    }
    let timestamp = sentences.iter().find_map(|s| s.timestamp.clone());
    Ok(Document {
        doc_id: doc_id.to_string(),
        timestamp,
        sentences,
        headline: None,
    })
}

fn load_abstracts(dir: &Path) -> Result<Vec<Vec<String>>> {
    if !dir.is_dir() {
        return Ok(Vec::new());
    }
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "txt"))
        .collect();
    files.sort();
    let mut abstracts = Vec::new();
    for file in files {
        let text = read_to_string(&file)?;
        abstracts.push(text.split_whitespace().map(str::to_string).collect());
    }
    Ok(abstracts)
}

/// Write a topic back out in the directory layout `load_topic` reads.
pub fn save_topic(topic: &QueryTopic, dir: impl AsRef<Path>) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let header = TopicHeader {
        topic_id: topic.topic_id.clone(),
        title: topic.title.clone(),
        narrative: topic.narrative.clone(),
        doc_ids: topic.documents.iter().map(|d| d.doc_id.clone()).collect(),
    };
    let header_path = dir.join("topic.json");
    fs::write(
        &header_path,
        serde_json::to_string_pretty(&header).expect("topic header serializes") + "\n",
    )
    .map_err(|e| Error::io(&header_path, e))?;

    for doc in &topic.documents {
        let path = dir.join(format!("{}.jsonl", doc.doc_id));
        let mut out = String::new();
        for sentence in &doc.sentences {
            let line = SentenceLine {
                doc_id: sentence.doc_id.clone(),
                position: sentence.position,
                timestamp: sentence.timestamp.clone(),
                tokens: sentence.tokens.iter().map(token_to_line).collect(),
                tree: sentence.tree.to_bracketing(),
            };
            out.push_str(&serde_json::to_string(&line).expect("sentence line serializes"));
            out.push('\n');
        }
        fs::write(&path, out).map_err(|e| Error::io(&path, e))?;
    }

    if !topic.abstracts.is_empty() {
        let abs_dir = dir.join("abstracts");
        fs::create_dir_all(&abs_dir).map_err(|e| Error::io(&abs_dir, e))?;
        for (i, tokens) in topic.abstracts.iter().enumerate() {
            let path = abs_dir.join(format!("ref{i:02}.txt"));
            fs::write(&path, tokens.join(" ") + "\n").map_err(|e| Error::io(&path, e))?;
        }
    }
    Ok(())
}

/// Load the token-mask compression corpus: JSON lines of
/// `{tokens, tree, keep_mask}`. An empty file yields an empty list.
pub fn load_compression_corpus(path: impl AsRef<Path>) -> Result<Vec<CompressionExample>> {
    let path = path.as_ref();
    let text = read_to_string(path)?;
    let mut examples = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let parsed: CompressionLine =
            serde_json::from_str(line).map_err(|e| json_line_error(path, i + 1, e))?;
        let sentence = build_sentence(
            String::new(),
            examples.len(),
            None,
            parsed.tokens,
            &parsed.tree,
        )
        .map_err(|e| at_line(path, i + 1, e))?;
        if parsed.keep_mask.len() != sentence.tokens.len() {
            return Err(Error::validation(format!(
                "{}:{}: keep_mask has {} entries for {} tokens",
                path.display(),
                i + 1,
                parsed.keep_mask.len(),
                sentence.tokens.len()
            )));
        }
        let keep_mask = parsed.keep_mask.iter().map(|&b| b != 0).collect();
        examples.push(CompressionExample {
            sentence,
            keep_mask,
        });
    }
    Ok(examples)
}

/// Write a compression corpus in the format `load_compression_corpus` reads.
pub fn save_compression_corpus(
    examples: &[CompressionExample],
    path: impl AsRef<Path>,
) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::new();
    for example in examples {
        let line = CompressionLine {
            tokens: example.sentence.tokens.iter().map(token_to_line).collect(),
            tree: example.sentence.tree.to_bracketing(),
            keep_mask: example.keep_mask.iter().map(|&b| u8::from(b)).collect(),
        };
        out.push_str(&serde_json::to_string(&line).expect("corpus line serializes"));
        out.push('\n');
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

/// Load standalone sentences for the `compress` command, one JSON object per
/// line; `doc_id`/`position` default to empty/line-index when absent.
pub fn load_sentence_file(path: impl AsRef<Path>) -> Result<Vec<AnnotatedSentence>> {
    let path = path.as_ref();
    let text = read_to_string(path)?;
    let mut sentences = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let parsed: LooseSentenceLine =
            serde_json::from_str(line).map_err(|e| json_line_error(path, i + 1, e))?;
        sentences.push(
            build_sentence(
                parsed.doc_id.unwrap_or_default(),
                parsed.position.unwrap_or(sentences.len()),
                parsed.timestamp,
                parsed.tokens,
                &parsed.tree,
            )
            .map_err(|e| at_line(path, i + 1, e))?,
        );
    }
    Ok(sentences)
}

/// Sentence-id key used for stable orderings and provenance.
pub fn sentence_key(sentence: &AnnotatedSentence) -> (String, usize) {
    (sentence.doc_id.clone(), sentence.position)
}

/// Map from doc_id to document index for a topic.
pub fn document_index(topic: &QueryTopic) -> BTreeMap<&str, usize> {
    topic
        .documents
        .iter()
        .enumerate()
        .map(|(i, d)| (d.doc_id.as_str(), i))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_token(surface: &str, pos: &str, dep_head: i32, dep_rel: &str) -> TokenLine {
        TokenLine {
            surface: surface.to_string(),
            lemma: None,
            pos: pos.to_string(),
            dep_head,
            dep_rel: dep_rel.to_string(),
        }
    }

    #[test]
    fn sentence_validation_catches_leaf_mismatch() {
        let err = build_sentence(
            "d1".into(),
            0,
            None,
            vec![
                tiny_token("a", "DT", 1, "det"),
                tiny_token("cat", "NN", -1, "root"),
                tiny_token("sat", "VBD", 1, "dep"),
            ],
            "(NP (DT a) (NN cat))",
        )
        .unwrap_err();
        assert!(matches!(err, Error::Validation(_)), "{err}");
    }

    #[test]
    fn lemma_defaults_to_lowercased_surface() {
        let sentence = build_sentence(
            "d1".into(),
            0,
            None,
            vec![
                tiny_token("The", "DT", 1, "det"),
                tiny_token("Cat", "NN", -1, "root"),
            ],
            "(NP (DT The) (NN Cat))",
        )
        .unwrap();
        assert_eq!(sentence.tokens[0].lemma, "the");
        assert!(sentence.tokens[0].is_stopword);
        assert_eq!(sentence.tokens[1].lemma, "cat");
        assert!(!sentence.tokens[1].is_stopword);
    }

    #[test]
    fn date_validation() {
        assert!(validate_date("1998-08-13").is_ok());
        assert!(validate_date("1998-13-01").is_err());
        assert!(validate_date("98-08-13").is_err());
        assert!(validate_date("1998-08-1x").is_err());
    }
}
