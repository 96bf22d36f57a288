//! End-to-end summarization: rank sentences, compress each in rank order,
//! add under a word budget with redundancy control, then order the selected
//! sentences chronologically.
//!
//! Selection is strictly sequential in rank order because the summary-so-far
//! lemma set feeds the redundancy scorer and the near-duplicate filter; runs
//! are byte-deterministic for fixed inputs.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::corpus::{AnnotatedSentence, QueryTopic};
use crate::decoder::{
    compress_nbest_labeled, decode_candidates, rerank_index, DecodeContext, DecoderConfig,
    HypothesisScorer, ScorerFactory,
};
use crate::error::{Error, Result};
use crate::learners::{
    crf_decode, token_features, BioLabel, ContextVariant, CrfModel, MaxEntModel,
};
use crate::lm::NGramModel;
use crate::ranking::{expand_query, rank_sentences, RankerModel};
use crate::rules::{match_rules, rule_compress, RuleMatch};
use crate::scorers::{build_sumbasic, ComponentRanges, ObservingScorer, ScorerKind, ScorerWeights};
use crate::tree::Labeling;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CompressorVariant {
    Extractive,
    Rule,
    Sequence,
    TreeBasic,
    TreeContext,
    TreeHead,
}

impl CompressorVariant {
    pub fn search_variant(self) -> Option<ContextVariant> {
        match self {
            CompressorVariant::TreeBasic => Some(ContextVariant::Basic),
            CompressorVariant::TreeContext => Some(ContextVariant::Context),
            CompressorVariant::TreeHead => Some(ContextVariant::Head),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CompressorVariant::Extractive => "extractive",
            CompressorVariant::Rule => "rule",
            CompressorVariant::Sequence => "sequence",
            CompressorVariant::TreeBasic => "tree-basic",
            CompressorVariant::TreeContext => "tree-context",
            CompressorVariant::TreeHead => "tree-head",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScorerVariant {
    Basic,
    Multi,
}

fn default_budget() -> usize {
    250
}

fn default_beam() -> usize {
    2000
}

fn default_dup_threshold() -> f64 {
    0.8
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub variant: CompressorVariant,
    pub scorer: ScorerVariant,
    #[serde(default = "default_beam")]
    pub beam: usize,
    /// Summary budget in words; standalone punctuation does not count.
    #[serde(default = "default_budget")]
    pub budget: usize,
    /// Skip a candidate whose content-lemma overlap with the summary so far
    /// exceeds this fraction.
    #[serde(default = "default_dup_threshold")]
    pub dup_threshold: f64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            variant: CompressorVariant::Extractive,
            scorer: ScorerVariant::Basic,
            beam: default_beam(),
            budget: default_budget(),
            dup_threshold: default_dup_threshold(),
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        if self.budget == 0 {
            return Err(Error::config("budget must be positive"));
        }
        if self.beam == 0 {
            return Err(Error::config("beam must be positive"));
        }
        if !(0.0..=1.0).contains(&self.dup_threshold) {
            return Err(Error::config("dup_threshold must lie in [0, 1]"));
        }
        Ok(())
    }
}

/// The models a pipeline run may need, all optional; validation checks the
/// ones the chosen variant requires.
#[derive(Debug, Default)]
pub struct ModelSet {
    pub ranker: Option<RankerModel>,
    pub maxent: Option<MaxEntModel>,
    pub crf: Option<CrfModel>,
    pub lm: Option<NGramModel>,
    pub weights: Option<ScorerWeights>,
}

/// Where the tree decoder's hypothesis scorer comes from. Tuning swaps in
/// candidate weight vectors and the bounds-observation pass without touching
/// the rest of the pipeline.
pub(crate) enum ScorerSource<'a> {
    FromConfig,
    MultiWeights(&'a ScorerWeights),
    ObserveBasic(&'a RefCell<ComponentRanges>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SummarySentence {
    pub doc_id: String,
    pub position: usize,
    pub timestamp: Option<String>,
    /// Indices of the kept tokens within the source sentence.
    pub kept: Vec<usize>,
    pub source_tokens: usize,
    pub text: String,
    pub rank_score: f64,
    /// Node-id -> label map for tree-compressed sentences.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub node_labels: Option<BTreeMap<usize, String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Summary {
    pub topic_id: String,
    pub word_count: usize,
    pub sentences: Vec<SummarySentence>,
}

impl Summary {
    /// Plain-text rendering, one sentence per line.
    pub fn text(&self) -> String {
        let mut out = String::new();
        for s in &self.sentences {
            out.push_str(&s.text);
            out.push('\n');
        }
        out
    }
}

fn require<'m, T>(slot: &'m Option<T>, what: &str) -> Result<&'m T> {
    slot.as_ref()
        .ok_or_else(|| Error::config(format!("{what} model is required but not loaded")))
}

fn validate_models(cfg: &PipelineConfig, models: &ModelSet, source: &ScorerSource) -> Result<()> {
    require(&models.ranker, "ranker")?;
    match cfg.variant {
        CompressorVariant::Sequence => {
            require(&models.crf, "crf")?;
        }
        CompressorVariant::TreeBasic
        | CompressorVariant::TreeContext
        | CompressorVariant::TreeHead => {
            require(&models.maxent, "maxent")?;
            require(&models.lm, "language")?;
            if matches!(source, ScorerSource::FromConfig) && cfg.scorer == ScorerVariant::Multi {
                let weights = require(&models.weights, "scorer weights")?;
                weights.validate()?;
            }
        }
        _ => {}
    }
    Ok(())
}

/// Variant-appropriate compression of one sentence. Tree variants run the
/// beam decoder and LM re-ranking and report the winning labeling.
pub fn compress_with(
    sentence: &AnnotatedSentence,
    cfg: &PipelineConfig,
    models: &ModelSet,
    ctx: &DecodeContext,
) -> Result<(Vec<usize>, Option<Labeling>)> {
    compress_with_source(sentence, cfg, models, ctx, &ScorerSource::FromConfig)
}

struct ObservingFactory<'r> {
    variant: ContextVariant,
    ranges: &'r RefCell<ComponentRanges>,
}

impl ScorerFactory for ObservingFactory<'_> {
    fn make<'a>(
        &'a self,
        sentence: &'a AnnotatedSentence,
        matches: &'a [RuleMatch],
    ) -> Box<dyn HypothesisScorer + 'a> {
        Box::new(ObservingScorer::new(
            sentence,
            matches,
            self.variant,
            self.ranges,
        ))
    }
}

pub(crate) fn compress_with_source(
    sentence: &AnnotatedSentence,
    cfg: &PipelineConfig,
    models: &ModelSet,
    ctx: &DecodeContext,
    source: &ScorerSource,
) -> Result<(Vec<usize>, Option<Labeling>)> {
    let is_lead = sentence.position == 0;
    match cfg.variant {
        CompressorVariant::Extractive => Ok(((0..sentence.tokens.len()).collect(), None)),
        CompressorVariant::Rule => Ok((rule_compress(sentence, is_lead), None)),
        CompressorVariant::Sequence => {
            let crf = require(&models.crf, "crf")?;
            let matches = match_rules(sentence, is_lead);
            let features: Vec<_> = (0..sentence.tokens.len())
                .map(|i| token_features(sentence, &matches, i))
                .collect();
            // Rule hits force the deleted label.
            let mut forced: BTreeMap<usize, BioLabel> = BTreeMap::new();
            for m in &matches {
                for i in m.span.0..m.span.1 {
                    forced.insert(i, BioLabel::Outside);
                }
            }
            let labels = crf_decode(crf, &features, &forced);
            let kept: Vec<usize> = labels
                .iter()
                .enumerate()
                .filter_map(|(i, l)| l.keeps_token().then_some(i))
                .collect();
            if kept.is_empty() {
                // Same protection as the tree decoder: never emit an empty
                // compression.
                Ok(((0..sentence.tokens.len()).collect(), None))
            } else {
                Ok((kept, None))
            }
        }
        CompressorVariant::TreeBasic
        | CompressorVariant::TreeContext
        | CompressorVariant::TreeHead => {
            let search = cfg.variant.search_variant().expect("tree variant");
            let candidates = match source {
                ScorerSource::FromConfig => {
                    let kind = match cfg.scorer {
                        ScorerVariant::Basic => ScorerKind::Basic,
                        ScorerVariant::Multi => {
                            ScorerKind::Multi(require(&models.weights, "scorer weights")?.clone())
                        }
                    };
                    let dcfg = DecoderConfig {
                        beam: cfg.beam,
                        search,
                        scorer: kind,
                    };
                    compress_nbest_labeled(sentence, &dcfg, ctx)?
                }
                ScorerSource::MultiWeights(weights) => {
                    let dcfg = DecoderConfig {
                        beam: cfg.beam,
                        search,
                        scorer: ScorerKind::Multi((*weights).clone()),
                    };
                    compress_nbest_labeled(sentence, &dcfg, ctx)?
                }
                ScorerSource::ObserveBasic(ranges) => {
                    let factory = ObservingFactory {
                        variant: search,
                        ranges,
                    };
                    decode_candidates(sentence, cfg.beam, search, &factory, ctx)?
                }
            };
            let surfaces: Vec<Vec<String>> = candidates
                .iter()
                .map(|(kept, _)| {
                    kept.iter()
                        .map(|&i| sentence.tokens[i].surface.clone())
                        .collect()
                })
                .collect();
            let lm = require(&models.lm, "language")?;
            let winner = rerank_index(&surfaces, lm);
            let (kept, labeling) = &candidates[winner];
            Ok((kept.clone(), Some(labeling.clone())))
        }
    }
}

/// Stable chronological order: document timestamp, then doc id, then
/// position; undated sentences come last.
pub fn chronological_order(sentences: &mut [SummarySentence]) {
    sentences.sort_by(|a, b| {
        let key = |s: &SummarySentence| {
            (
                s.timestamp.is_none(),
                s.timestamp.clone().unwrap_or_default(),
                s.doc_id.clone(),
                s.position,
            )
        };
        key(a).cmp(&key(b))
    });
}

/// Summarize a topic under the given configuration and models.
pub fn summarize(topic: &QueryTopic, cfg: &PipelineConfig, models: &ModelSet) -> Result<Summary> {
    summarize_with(topic, cfg, models, ScorerSource::FromConfig)
}

pub(crate) fn summarize_with(
    topic: &QueryTopic,
    cfg: &PipelineConfig,
    models: &ModelSet,
    source: ScorerSource,
) -> Result<Summary> {
    cfg.validate()?;
    validate_models(cfg, models, &source)?;
    let mut summary = Summary {
        topic_id: topic.topic_id.clone(),
        word_count: 0,
        sentences: Vec::new(),
    };
    if topic.sentence_count() == 0 {
        return Ok(summary);
    }
    let ranker = require(&models.ranker, "ranker")?;
    let ranked = rank_sentences(topic, ranker);
    let query_terms = expand_query(topic);
    let sumbasic = build_sumbasic(topic);
    let mut selected_lemmas: BTreeSet<String> = BTreeSet::new();

    for entry in ranked {
        let doc = &topic.documents[entry.doc_index];
        let sentence = &doc.sentences[entry.sentence_index];
        let ctx = DecodeContext {
            query_terms: Some(&query_terms),
            sumbasic: Some(&sumbasic),
            summary_so_far: Some(&selected_lemmas),
            lm: models.lm.as_ref(),
            maxent: models.maxent.as_ref(),
        };
        let (kept, labeling) = compress_with_source(sentence, cfg, models, &ctx, &source)?;
        let words = kept
            .iter()
            .filter(|&&i| sentence.tokens[i].is_word())
            .count();
        if words == 0 {
            continue;
        }
        // Budget rule: skip and keep scanning lower-ranked sentences.
        if summary.word_count + words > cfg.budget {
            continue;
        }
        let content: BTreeSet<&str> = kept
            .iter()
            .map(|&i| &sentence.tokens[i])
            .filter(|t| t.is_content())
            .map(|t| t.lemma.as_str())
            .collect();
        let dup_overlap = if content.is_empty() {
            1.0
        } else {
            content
                .iter()
                .filter(|l| selected_lemmas.contains(**l))
                .count() as f64
                / content.len() as f64
        };
        if dup_overlap > cfg.dup_threshold {
            continue;
        }
        for &i in &kept {
            selected_lemmas.insert(sentence.tokens[i].lemma.clone());
        }
        summary.word_count += words;
        let text = kept
            .iter()
            .map(|&i| sentence.tokens[i].surface.as_str())
            .collect::<Vec<_>>()
            .join(" ");
        summary.sentences.push(SummarySentence {
            doc_id: sentence.doc_id.clone(),
            position: sentence.position,
            timestamp: doc.timestamp.clone(),
            kept: kept.clone(),
            source_tokens: sentence.tokens.len(),
            text,
            rank_score: entry.score,
            node_labels: labeling.map(|l| {
                l.assigned()
                    .map(|(id, label)| (id.index(), label.name().to_string()))
                    .collect()
            }),
        });
    }
    chronological_order(&mut summary.sentences);
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ss(doc_id: &str, position: usize, timestamp: Option<&str>) -> SummarySentence {
        SummarySentence {
            doc_id: doc_id.into(),
            position,
            timestamp: timestamp.map(str::to_string),
            kept: Vec::new(),
            source_tokens: 0,
            text: String::new(),
            rank_score: 0.0,
            node_labels: None,
        }
    }

    #[test]
    fn chronological_order_sorts_by_date_then_doc_then_position() {
        let mut sentences = vec![
            ss("b", 0, Some("1998-08-14")),
            ss("a", 2, Some("1998-08-13")),
            ss("a", 0, Some("1998-08-13")),
            ss("c", 1, None),
            ss("c", 0, None),
        ];
        chronological_order(&mut sentences);
        let keys: Vec<(&str, usize)> = sentences
            .iter()
            .map(|s| (s.doc_id.as_str(), s.position))
            .collect();
        assert_eq!(keys, vec![("a", 0), ("a", 2), ("b", 0), ("c", 0), ("c", 1)]);
    }

    #[test]
    fn config_validation() {
        let mut cfg = PipelineConfig::default();
        assert!(cfg.validate().is_ok());
        cfg.budget = 0;
        assert!(cfg.validate().is_err());
        cfg.budget = 250;
        cfg.dup_threshold = 1.5;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn variant_names_round_trip_serde() {
        for v in [
            CompressorVariant::Extractive,
            CompressorVariant::Rule,
            CompressorVariant::Sequence,
            CompressorVariant::TreeBasic,
            CompressorVariant::TreeContext,
            CompressorVariant::TreeHead,
        ] {
            let json = serde_json::to_string(&v).unwrap();
            assert_eq!(json, format!("\"{}\"", v.name()));
            let back: CompressorVariant = serde_json::from_str(&json).unwrap();
            assert_eq!(back, v);
        }
    }

    #[test]
    fn missing_models_are_config_errors() {
        let topic = QueryTopic {
            topic_id: "t".into(),
            title: "t".into(),
            narrative: "n".into(),
            documents: Vec::new(),
            abstracts: Vec::new(),
        };
        let cfg = PipelineConfig::default();
        let models = ModelSet::default();
        let err = summarize(&topic, &cfg, &models).unwrap_err();
        assert!(matches!(err, Error::Config(_)), "{err}");
    }
}
