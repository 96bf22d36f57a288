//! Query-focused sentence ranking: query expansion, sentence-level feature
//! extraction, and a pointwise ridge regressor trained against per-sentence
//! ROUGE-2.
//!
//! Queries arrive as plain text, so a light plural normalizer stands in for
//! lemmatization on the query side; sentence tokens carry real lemmas from
//! the input annotations.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::path::Path;
use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::corpus::stopwords::{query_instruction_words, stopwords};
use crate::corpus::{AnnotatedSentence, QueryTopic};
use crate::error::{Error, Result};
use crate::eval::rouge_n;
use crate::learners::FeatureVector;
use crate::scorers::{build_sumbasic, SumBasicTable};

/// Ridge term used by the normal-equation solve.
pub const RIDGE_LAMBDA: f64 = 1e-3;

/// Log-likelihood-ratio threshold for topic-signature words (chi-square,
/// p = 0.001).
pub const SIGNATURE_LLR_THRESHOLD: f64 = 10.83;

fn background_counts() -> &'static (HashMap<String, u64>, u64) {
    static TABLE: OnceLock<(HashMap<String, u64>, u64)> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut counts = HashMap::new();
        let mut total = 0u64;
        for line in include_str!("../data/background_counts.txt").lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some((word, count)) = line.split_once('\t') {
                if let Ok(c) = count.parse::<u64>() {
                    counts.insert(word.to_string(), c);
                    total += c;
                }
            }
        }
        (counts, total)
    })
}

/// Strip a regular plural suffix; a cheap stand-in for lemmatizing raw query
/// text ("thefts" -> "theft", "stories" -> "story").
fn strip_plural(word: &str) -> String {
    let n = word.len();
    if n > 4 && word.ends_with("ies") {
        return format!("{}y", &word[..n - 3]);
    }
    for suffix in ["ses", "xes", "zes", "ches", "shes"] {
        if n > suffix.len() + 1 && word.ends_with(suffix) {
            return word[..n - 2].to_string();
        }
    }
    if n > 3
        && word.ends_with('s')
        && !word.ends_with("ss")
        && !word.ends_with("us")
        && !word.ends_with("is")
    {
        return word[..n - 1].to_string();
    }
    word.to_string()
}

/// Normalized content terms of a raw query string, in order: lowercased,
/// non-alphanumerics split away, stopwords and instruction words removed,
/// plurals stripped.
pub fn query_terms(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric() && c != '\'')
        .filter_map(|raw| {
            let word = raw.trim_matches('\'').to_lowercase();
            if word.is_empty()
                || stopwords().contains(&word)
                || query_instruction_words().contains(&word)
            {
                None
            } else {
                Some(strip_plural(&word))
            }
        })
        .collect()
}

/// Expanded query term set: narrative terms plus title terms.
pub fn expand_query(topic: &QueryTopic) -> BTreeSet<String> {
    let mut terms: BTreeSet<String> = query_terms(&topic.narrative).into_iter().collect();
    terms.extend(query_terms(&topic.title));
    terms
}

/// Original (unexpanded) query term set: the narrative only.
pub fn original_query(topic: &QueryTopic) -> BTreeSet<String> {
    query_terms(&topic.narrative).into_iter().collect()
}

fn content_lemmas(sentence: &AnnotatedSentence) -> Vec<&str> {
    sentence
        .tokens
        .iter()
        .filter(|t| t.is_content())
        .map(|t| t.lemma.as_str())
        .collect()
}

fn bigrams(seq: &[&str]) -> Vec<String> {
    seq.windows(2)
        .map(|w| format!("{} {}", w[0], w[1]))
        .collect()
}

fn skip_pairs(seq: &[&str]) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for i in 0..seq.len() {
        for j in (i + 1)..seq.len().min(i + 1 + 4) {
            out.insert(format!("{} {}", seq[i], seq[j]));
        }
    }
    out
}

fn tf_map<'a>(items: impl Iterator<Item = &'a str>) -> BTreeMap<String, f64> {
    let mut out = BTreeMap::new();
    for item in items {
        *out.entry(item.to_string()).or_insert(0.0) += 1.0;
    }
    out
}

fn cosine(a: &BTreeMap<String, f64>, b: &BTreeMap<String, f64>) -> f64 {
    let dot: f64 = a
        .iter()
        .filter_map(|(k, va)| b.get(k).map(|vb| va * vb))
        .sum();
    let na: f64 = a.values().map(|v| v * v).sum::<f64>().sqrt();
    let nb: f64 = b.values().map(|v| v * v).sum::<f64>().sqrt();
    if na > 0.0 && nb > 0.0 {
        dot / (na * nb)
    } else {
        0.0
    }
}

fn weighted(tf: &BTreeMap<String, f64>, idf: &BTreeMap<String, f64>) -> BTreeMap<String, f64> {
    tf.iter()
        .map(|(k, v)| (k.clone(), v * idf.get(k).copied().unwrap_or(DEFAULT_IDF)))
        .collect()
}

/// Smoothed IDF; also the weight of terms never seen in the topic.
const DEFAULT_IDF: f64 = 1.0;

fn smoothed_idf(n_docs: usize, df: usize) -> f64 {
    ((1.0 + n_docs as f64) / (1.0 + df as f64)).ln() + 1.0
}

/// Per-topic tables shared by feature extraction: query term sets and
/// sequences, IDF tables, cluster centroids, the SumBasic table, and the
/// topic-signature vocabulary.
#[derive(Debug, Clone)]
pub struct RankingContext {
    pub original_terms: BTreeSet<String>,
    pub expanded_terms: BTreeSet<String>,
    original_seq: Vec<String>,
    expanded_seq: Vec<String>,
    idf: BTreeMap<String, f64>,
    bigram_idf: BTreeMap<String, f64>,
    centroid_uni_tf: BTreeMap<String, f64>,
    centroid_bi_tf: BTreeMap<String, f64>,
    pub sumbasic: SumBasicTable,
    pub signature_words: BTreeSet<String>,
    doc_sentence_counts: BTreeMap<String, usize>,
}

fn log_likelihood(k: f64, n: f64, p: f64) -> f64 {
    let mut ll = 0.0;
    if k > 0.0 && p > 0.0 {
        ll += k * p.ln();
    }
    if n - k > 0.0 && p < 1.0 {
        ll += (n - k) * (1.0 - p).ln();
    }
    ll
}

/// Log-likelihood ratio of a word being overrepresented in the topic
/// relative to the background table.
fn signature_llr(k1: f64, n1: f64, k2: f64, n2: f64) -> f64 {
    if n1 == 0.0 || n2 == 0.0 {
        return 0.0;
    }
    let p1 = k1 / n1;
    let p2 = k2 / n2;
    let p = (k1 + k2) / (n1 + n2);
    2.0 * (log_likelihood(k1, n1, p1) + log_likelihood(k2, n2, p2)
        - log_likelihood(k1, n1, p)
        - log_likelihood(k2, n2, p))
}

impl RankingContext {
    pub fn build(topic: &QueryTopic) -> RankingContext {
        let n_docs = topic.documents.len();
        let mut df: BTreeMap<String, usize> = BTreeMap::new();
        let mut bigram_df: BTreeMap<String, usize> = BTreeMap::new();
        let mut centroid_uni_tf: BTreeMap<String, f64> = BTreeMap::new();
        let mut centroid_bi_tf: BTreeMap<String, f64> = BTreeMap::new();
        let mut topic_counts: BTreeMap<String, f64> = BTreeMap::new();
        let mut topic_total = 0.0f64;
        let mut doc_sentence_counts = BTreeMap::new();

        for doc in &topic.documents {
            doc_sentence_counts.insert(doc.doc_id.clone(), doc.sentences.len());
            let mut doc_unis: HashSet<String> = HashSet::new();
            let mut doc_bis: HashSet<String> = HashSet::new();
            for sentence in &doc.sentences {
                let lemmas = content_lemmas(sentence);
                for lemma in &lemmas {
                    doc_unis.insert(lemma.to_string());
                    *centroid_uni_tf.entry(lemma.to_string()).or_insert(0.0) += 1.0;
                    *topic_counts.entry(lemma.to_string()).or_insert(0.0) += 1.0;
                    topic_total += 1.0;
                }
                for bigram in bigrams(&lemmas) {
                    doc_bis.insert(bigram.clone());
                    *centroid_bi_tf.entry(bigram).or_insert(0.0) += 1.0;
                }
            }
            for uni in doc_unis {
                *df.entry(uni).or_insert(0) += 1;
            }
            for bi in doc_bis {
                *bigram_df.entry(bi).or_insert(0) += 1;
            }
        }

        let idf: BTreeMap<String, f64> = df
            .into_iter()
            .map(|(w, d)| (w, smoothed_idf(n_docs, d)))
            .collect();
        let bigram_idf: BTreeMap<String, f64> = bigram_df
            .into_iter()
            .map(|(w, d)| (w, smoothed_idf(n_docs, d)))
            .collect();

        let (bg_counts, bg_total) = background_counts();
        let signature_words = topic_counts
            .iter()
            .filter(|(word, &k1)| {
                let k2 = bg_counts.get(*word).copied().unwrap_or(0) as f64;
                let n1 = topic_total;
                let n2 = *bg_total as f64;
                let overrepresented = n2 > 0.0 && (k1 / n1) > (k2 / n2);
                overrepresented && signature_llr(k1, n1, k2, n2) > SIGNATURE_LLR_THRESHOLD
            })
            .map(|(word, _)| word.clone())
            .collect();

        RankingContext {
            original_terms: original_query(topic),
            expanded_terms: expand_query(topic),
            original_seq: query_terms(&topic.narrative),
            expanded_seq: {
                let mut seq = query_terms(&topic.narrative);
                seq.extend(query_terms(&topic.title));
                seq
            },
            idf,
            bigram_idf,
            centroid_uni_tf,
            centroid_bi_tf,
            sumbasic: build_sumbasic(topic),
            signature_words,
            doc_sentence_counts,
        }
    }

    fn idf_of(&self, lemma: &str) -> f64 {
        self.idf.get(lemma).copied().unwrap_or(DEFAULT_IDF)
    }
}

fn looks_like_url(token: &str) -> bool {
    let lower = token.to_lowercase();
    lower.starts_with("http") || lower.starts_with("www.") || {
        [".com", ".org", ".net", ".gov", ".edu"]
            .iter()
            .any(|d| lower.contains(d))
    }
}

fn looks_like_phone(token: &str) -> bool {
    let digits = token.chars().filter(|c| c.is_ascii_digit()).count();
    digits >= 7
        && token
            .chars()
            .all(|c| c.is_ascii_digit() || matches!(c, '-' | '.' | '(' | ')' | '+'))
}

/// Deterministic Table-1-style feature map for one sentence.
pub fn extract_ranking_features(
    sentence: &AnnotatedSentence,
    ctx: &RankingContext,
) -> FeatureVector {
    let mut fv = FeatureVector::new();

    // Basic position/length features.
    let doc_len = ctx
        .doc_sentence_counts
        .get(&sentence.doc_id)
        .copied()
        .unwrap_or(1)
        .max(1);
    fv.set("pos_abs", sentence.position as f64);
    fv.set("pos_rel", sentence.position as f64 / doc_len as f64);
    for k in [1usize, 3, 5] {
        if sentence.position < k {
            fv.flag(format!("first{k}"));
        }
    }
    let n_words = sentence.word_count();
    let n_content = sentence.tokens.iter().filter(|t| t.is_content()).count();
    fv.set("len_words", n_words as f64);
    fv.set("len_content", n_content as f64);
    for k in [5usize, 10] {
        if n_words > k {
            fv.flag(format!("len_gt{k}"));
        }
        if n_content > k {
            fv.flag(format!("len_content_gt{k}"));
        }
    }

    // Query-relevant features, computed against both query versions.
    let lemmas = content_lemmas(sentence);
    let lemma_types: BTreeSet<&str> = lemmas.iter().copied().collect();
    let sent_bigrams = bigrams(&lemmas);
    let sent_bigram_types: BTreeSet<&str> = sent_bigrams.iter().map(String::as_str).collect();
    let sent_skips = skip_pairs(&lemmas);
    let sent_uni_tf = tf_map(lemmas.iter().copied());
    let sent_bi_tf = tf_map(sent_bigrams.iter().map(String::as_str));
    let sent_uni_tfidf = weighted(&sent_uni_tf, &ctx.idf);
    let sent_bi_tfidf = weighted(&sent_bi_tf, &ctx.bigram_idf);

    for (prefix, terms, seq) in [
        ("orig", &ctx.original_terms, &ctx.original_seq),
        ("exp", &ctx.expanded_terms, &ctx.expanded_seq),
    ] {
        let uni_overlap = lemma_types.iter().filter(|l| terms.contains(**l)).count();
        fv.set(format!("{prefix}_uni_overlap"), uni_overlap as f64);
        let q_seq: Vec<&str> = seq.iter().map(String::as_str).collect();
        let q_bigrams = bigrams(&q_seq);
        let bi_overlap = q_bigrams
            .iter()
            .collect::<BTreeSet<_>>()
            .iter()
            .filter(|b| sent_bigram_types.contains(b.as_str()))
            .count();
        fv.set(format!("{prefix}_bi_overlap"), bi_overlap as f64);
        let q_skips = skip_pairs(&q_seq);
        let skip_overlap = q_skips.intersection(&sent_skips).count();
        fv.set(format!("{prefix}_skip_overlap"), skip_overlap as f64);

        let q_uni_tf = tf_map(seq.iter().map(String::as_str));
        let q_bi_tf = tf_map(q_bigrams.iter().map(String::as_str));
        fv.set(
            format!("{prefix}_uni_tf_cos"),
            cosine(&sent_uni_tf, &q_uni_tf),
        );
        fv.set(format!("{prefix}_bi_tf_cos"), cosine(&sent_bi_tf, &q_bi_tf));
        fv.set(
            format!("{prefix}_uni_tfidf_cos"),
            cosine(&sent_uni_tfidf, &weighted(&q_uni_tf, &ctx.idf)),
        );
        fv.set(
            format!("{prefix}_bi_tfidf_cos"),
            cosine(&sent_bi_tfidf, &weighted(&q_bi_tf, &ctx.bigram_idf)),
        );
    }

    // Query-independent features.
    let idf_total: f64 = lemmas.iter().map(|l| ctx.idf_of(l)).sum();
    let tfidf_total: f64 = sent_uni_tfidf.values().sum();
    let bi_idf_total: f64 = sent_bigrams
        .iter()
        .map(|b| ctx.bigram_idf.get(b).copied().unwrap_or(DEFAULT_IDF))
        .sum();
    let bi_tfidf_total: f64 = sent_bi_tfidf.values().sum();
    fv.set("idf_total", idf_total);
    fv.set("tfidf_total", tfidf_total);
    fv.set("bi_idf_total", bi_idf_total);
    fv.set("bi_tfidf_total", bi_tfidf_total);
    if !lemmas.is_empty() {
        fv.set("idf_avg", idf_total / lemmas.len() as f64);
        fv.set("tfidf_avg", tfidf_total / lemmas.len() as f64);
    }
    if !sent_bigrams.is_empty() {
        fv.set("bi_idf_avg", bi_idf_total / sent_bigrams.len() as f64);
        fv.set("bi_tfidf_avg", bi_tfidf_total / sent_bigrams.len() as f64);
    }
    fv.set(
        "centroid_uni_tf_cos",
        cosine(&sent_uni_tf, &ctx.centroid_uni_tf),
    );
    fv.set(
        "centroid_bi_tf_cos",
        cosine(&sent_bi_tf, &ctx.centroid_bi_tf),
    );
    fv.set(
        "centroid_uni_tfidf_cos",
        cosine(&sent_uni_tfidf, &weighted(&ctx.centroid_uni_tf, &ctx.idf)),
    );
    fv.set(
        "centroid_bi_tfidf_cos",
        cosine(
            &sent_bi_tfidf,
            &weighted(&ctx.centroid_bi_tf, &ctx.bigram_idf),
        ),
    );

    let sb_total: f64 = lemmas.iter().map(|l| ctx.sumbasic.get(l)).sum();
    fv.set("sumbasic_total", sb_total);
    if !lemmas.is_empty() {
        fv.set("sumbasic_avg", sb_total / lemmas.len() as f64);
    }

    let sig_count = lemmas
        .iter()
        .filter(|l| ctx.signature_words.contains(**l))
        .count();
    fv.set("signature_count", sig_count as f64);
    if n_words > 0 {
        fv.set("signature_avg", sig_count as f64 / n_words as f64);
    }

    // Content features.
    if sentence.tokens.iter().any(|t| t.pos.starts_with("VB")) {
        fv.flag("has_verb");
    }
    if sentence.tokens.iter().any(|t| looks_like_url(&t.surface)) {
        fv.flag("has_weblink");
    }
    if sentence.tokens.iter().any(|t| looks_like_phone(&t.surface)) {
        fv.flag("has_phone");
    }
    let mut paren_words = 0usize;
    let mut depth = 0usize;
    for t in &sentence.tokens {
        match t.surface.as_str() {
            "(" | "-LRB-" => depth += 1,
            ")" | "-RRB-" => depth = depth.saturating_sub(1),
            _ => {
                if depth > 0 && t.is_word() {
                    paren_words += 1;
                }
            }
        }
    }
    if paren_words > 0 {
        fv.flag("has_paren_words");
    }
    if n_words > 0 {
        fv.set("paren_portion", paren_words as f64 / n_words as f64);
    }
    fv
}

/// Linear ranker over standardized ranking features.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RankerModel {
    version: u32,
    features: Vec<String>,
    weights: Vec<f64>,
    bias: f64,
    means: Vec<f64>,
    stds: Vec<f64>,
}

impl RankerModel {
    pub fn predict(&self, fv: &FeatureVector) -> f64 {
        let mut score = self.bias;
        for ((name, weight), (mean, std)) in self
            .features
            .iter()
            .zip(self.weights.iter())
            .zip(self.means.iter().zip(self.stds.iter()))
        {
            let raw = fv.get(name).unwrap_or(0.0);
            score += weight * (raw - mean) / std;
        }
        score
    }

    pub fn features(&self) -> &[String] {
        &self.features
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let json = serde_json::to_string_pretty(self).expect("ranker serializes");
        std::fs::write(path, json + "\n").map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<RankerModel> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let model: RankerModel = serde_json::from_str(&text)
            .map_err(|e| Error::format(path, e.line(), e.to_string()))?;
        if model.version != 1 {
            return Err(Error::format(path, 1, "unsupported ranker version"));
        }
        Ok(model)
    }
}

/// Solve `(X'X + lambda I) w = X'y` over standardized features with an
/// appended intercept column.
fn ridge_fit(rows: &[Vec<f64>], targets: &[f64], lambda: f64) -> (Vec<f64>, f64) {
    let n = rows.len();
    let d = rows.first().map(|r| r.len()).unwrap_or(0) + 1;
    let mut x = DMatrix::zeros(n, d);
    for (i, row) in rows.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            x[(i, j)] = v;
        }
        x[(i, d - 1)] = 1.0;
    }
    let y = DVector::from_column_slice(targets);
    let xtx = x.transpose() * &x + DMatrix::identity(d, d) * lambda;
    let xty = x.transpose() * y;
    let solution = match xtx.clone().cholesky() {
        Some(c) => c.solve(&xty),
        None => xtx.lu().solve(&xty).expect("ridge system is nonsingular"),
    };
    let weights: Vec<f64> = solution.iter().take(d - 1).copied().collect();
    (weights, solution[d - 1])
}

/// Train the ranker on every topic that carries abstracts, predicting each
/// sentence's ROUGE-2 recall against them. Constant features are dropped.
pub fn train_ranker(topics: &[QueryTopic]) -> Result<RankerModel> {
    let usable: Vec<&QueryTopic> = topics.iter().filter(|t| !t.abstracts.is_empty()).collect();
    if usable.is_empty() {
        return Err(Error::validation(
            "ranker training needs at least one topic with abstracts",
        ));
    }
    let mut vectors: Vec<FeatureVector> = Vec::new();
    let mut targets: Vec<f64> = Vec::new();
    for topic in &usable {
        let ctx = RankingContext::build(topic);
        let refs: Vec<Vec<String>> = topic
            .abstracts
            .iter()
            .map(|a| a.iter().map(|w| w.to_lowercase()).collect())
            .collect();
        for sentence in topic.sentences() {
            let candidate: Vec<String> = sentence
                .tokens
                .iter()
                .map(|t| t.surface.to_lowercase())
                .collect();
            targets.push(rouge_n(&candidate, &refs, 2)?.recall);
            vectors.push(extract_ranking_features(sentence, &ctx));
        }
    }

    let mut names: BTreeSet<String> = BTreeSet::new();
    for fv in &vectors {
        for name in fv.names() {
            names.insert(name.to_string());
        }
    }
    let names: Vec<String> = names.into_iter().collect();
    let n = vectors.len();
    let raw: Vec<Vec<f64>> = vectors
        .iter()
        .map(|fv| {
            names
                .iter()
                .map(|name| fv.get(name).unwrap_or(0.0))
                .collect()
        })
        .collect();

    // Standardize and drop constant columns.
    let mut kept_names = Vec::new();
    let mut means = Vec::new();
    let mut stds = Vec::new();
    let mut kept_cols = Vec::new();
    for (j, name) in names.iter().enumerate() {
        let mean: f64 = raw.iter().map(|r| r[j]).sum::<f64>() / n as f64;
        let var: f64 = raw.iter().map(|r| (r[j] - mean).powi(2)).sum::<f64>() / n as f64;
        let std = var.sqrt();
        if std > 1e-12 {
            kept_names.push(name.clone());
            means.push(mean);
            stds.push(std);
            kept_cols.push(j);
        }
    }
    let rows: Vec<Vec<f64>> = raw
        .iter()
        .map(|r| {
            kept_cols
                .iter()
                .enumerate()
                .map(|(k, &j)| (r[j] - means[k]) / stds[k])
                .collect()
        })
        .collect();

    let (weights, bias) = ridge_fit(&rows, &targets, RIDGE_LAMBDA);
    Ok(RankerModel {
        version: 1,
        features: kept_names,
        weights,
        bias,
        means,
        stds,
    })
}

/// A sentence's place in the ranked list.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedSentence {
    pub doc_index: usize,
    pub sentence_index: usize,
    pub score: f64,
}

/// All topic sentences sorted by descending predicted score; ties preserve
/// (doc_id, position) order.
pub fn rank_sentences(topic: &QueryTopic, model: &RankerModel) -> Vec<RankedSentence> {
    let ctx = RankingContext::build(topic);
    let mut ranked: Vec<(RankedSentence, &str)> = Vec::new();
    for (doc_index, doc) in topic.documents.iter().enumerate() {
        for (sentence_index, sentence) in doc.sentences.iter().enumerate() {
            let fv = extract_ranking_features(sentence, &ctx);
            ranked.push((
                RankedSentence {
                    doc_index,
                    sentence_index,
                    score: model.predict(&fv),
                },
                doc.doc_id.as_str(),
            ));
        }
    }
    ranked.sort_by(|(a, a_doc), (b, b_doc)| {
        b.score
            .partial_cmp(&a.score)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| a_doc.cmp(b_doc))
            .then_with(|| a.sentence_index.cmp(&b.sentence_index))
    });
    ranked.into_iter().map(|(r, _)| r).collect()
}
