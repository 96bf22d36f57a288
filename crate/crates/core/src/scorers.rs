//! Hypothesis scoring: the per-node log-probability scorer, the four
//! task-specific component scorers (query relevance, importance, language
//! model, redundancy), their weighted combination with linear normalization,
//! and grid search over the combination weights.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{AnnotatedSentence, QueryTopic, Token};
use crate::decoder::{DecodeContext, Hypothesis, HypothesisScorer};
use crate::error::{Error, Result};
use crate::eval::rouge_n;
use crate::learners::{constituent_features, ContextVariant, MaxEntModel};
use crate::pipeline::{summarize_with, ModelSet, PipelineConfig, ScorerSource};
use crate::rules::RuleMatch;
use crate::tree::{Labeling, ParseTree, TraversalOrder};

/// Component order in the weight vector: (basic, query, importance, lm,
/// redundancy).
pub const N_COMPONENTS: usize = 5;

/// Weight vector for the multi-scorer plus the per-component normalization
/// bounds estimated on tuning data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScorerWeights {
    pub alpha: [f64; N_COMPONENTS],
    /// `(min, max)` per component; scores are linearly mapped onto [0, 1]
    /// and clamped there.
    pub bounds: [(f64, f64); N_COMPONENTS],
}

impl Default for ScorerWeights {
    fn default() -> Self {
        ScorerWeights {
            alpha: [0.2; N_COMPONENTS],
            bounds: default_bounds(),
        }
    }
}

fn default_bounds() -> [(f64, f64); N_COMPONENTS] {
    [
        (-50.0, 0.0), // basic: log-probability sum
        (0.0, 1.0),   // query overlap
        (0.0, 1.0),   // importance
        (-15.0, 0.0), // per-word LM score
        (0.0, 1.0),   // redundancy
    ]
}

impl ScorerWeights {
    pub fn validate(&self) -> Result<()> {
        for (i, a) in self.alpha.iter().enumerate() {
            if !(0.0..=1.0).contains(a) {
                return Err(Error::validation(format!(
                    "alpha[{i}] = {a} outside [0, 1]"
                )));
            }
        }
        for (i, (lo, hi)) in self.bounds.iter().enumerate() {
            if lo >= hi || !lo.is_finite() || !hi.is_finite() {
                return Err(Error::validation(format!(
                    "bounds[{i}] = ({lo}, {hi}) need min < max"
                )));
            }
        }
        Ok(())
    }

    fn normalize(&self, component: usize, value: f64) -> f64 {
        let (lo, hi) = self.bounds[component];
        ((value - lo) / (hi - lo)).clamp(0.0, 1.0)
    }

    /// The weighted combination: dot product of alpha with the normalized
    /// component scores.
    pub fn combine(&self, components: &[f64; N_COMPONENTS]) -> f64 {
        self.alpha
            .iter()
            .enumerate()
            .map(|(i, a)| a * self.normalize(i, components[i]))
            .sum()
    }
}

/// Unigram importance table: lemma probability over a topic's documents,
/// stopwords and punctuation excluded.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SumBasicTable {
    probs: BTreeMap<String, f64>,
}

impl SumBasicTable {
    pub fn from_probs(probs: BTreeMap<String, f64>) -> SumBasicTable {
        SumBasicTable { probs }
    }

    pub fn get(&self, lemma: &str) -> f64 {
        self.probs.get(lemma).copied().unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.probs.iter().map(|(k, &v)| (k.as_str(), v))
    }
}

/// Build the SumBasic table from content-token counts over the whole topic.
pub fn build_sumbasic(topic: &QueryTopic) -> SumBasicTable {
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    let mut total = 0u64;
    for sentence in topic.sentences() {
        for token in &sentence.tokens {
            if token.is_content() {
                *counts.entry(token.lemma.clone()).or_insert(0) += 1;
                total += 1;
            }
        }
    }
    if total == 0 {
        return SumBasicTable::default();
    }
    SumBasicTable {
        probs: counts
            .into_iter()
            .map(|(lemma, c)| (lemma, c as f64 / total as f64))
            .collect(),
    }
}

fn unique_content_lemmas<'a>(words: &[&'a Token]) -> BTreeSet<&'a str> {
    words
        .iter()
        .filter(|t| t.is_content())
        .map(|t| t.lemma.as_str())
        .collect()
}

/// Query relevance: unique overlapping content lemmas over token count.
pub fn score_query(words: &[&Token], query: &BTreeSet<String>) -> f64 {
    if words.is_empty() {
        return 0.0;
    }
    let overlap = unique_content_lemmas(words)
        .iter()
        .filter(|l| query.contains(**l))
        .count();
    overlap as f64 / words.len() as f64
}

/// Importance: mean SumBasic value over the tokens (stopwords and unseen
/// lemmas contribute zero).
pub fn score_importance(words: &[&Token], table: &SumBasicTable) -> f64 {
    if words.is_empty() {
        return 0.0;
    }
    let total: f64 = words
        .iter()
        .filter(|t| t.is_content())
        .map(|t| table.get(&t.lemma))
        .sum();
    total / words.len() as f64
}

/// Redundancy: one minus the fraction of tokens whose lemma already appears
/// in the summary. Empty summaries (and empty word lists) score 1.
pub fn score_redundancy(words: &[&Token], summary: &BTreeSet<String>) -> f64 {
    if words.is_empty() || summary.is_empty() {
        return 1.0;
    }
    let overlap = unique_content_lemmas(words)
        .iter()
        .filter(|l| summary.contains(**l))
        .count();
    1.0 - overlap as f64 / words.len() as f64
}

/// Raw component scores of a hypothesis: (basic, query, importance, lm,
/// redundancy). Missing context pieces contribute their neutral value.
pub fn component_scores(
    hyp: &Hypothesis,
    sentence: &AnnotatedSentence,
    ctx: &DecodeContext,
) -> [f64; N_COMPONENTS] {
    let words: Vec<&Token> = hyp
        .kept_tokens()
        .iter()
        .map(|&i| &sentence.tokens[i])
        .collect();
    let query = ctx
        .query_terms
        .map(|q| score_query(&words, q))
        .unwrap_or(0.0);
    let importance = ctx
        .sumbasic
        .map(|t| score_importance(&words, t))
        .unwrap_or(0.0);
    let lm = ctx
        .lm
        .map(|m| {
            let surfaces: Vec<String> = words.iter().map(|t| t.surface.clone()).collect();
            m.per_word(&surfaces)
        })
        .unwrap_or(0.0);
    let redundancy = ctx
        .summary_so_far
        .map(|c| score_redundancy(&words, c))
        .unwrap_or(1.0);
    [hyp.basic_sum, query, importance, lm, redundancy]
}

/// The multi-scorer value of a hypothesis under the given weights.
pub fn multi_score(
    hyp: &Hypothesis,
    sentence: &AnnotatedSentence,
    ctx: &DecodeContext,
    weights: &ScorerWeights,
) -> f64 {
    weights.combine(&component_scores(hyp, sentence, ctx))
}

/// Which standard scorer a decode should use.
#[derive(Debug, Clone)]
pub enum ScorerKind {
    Basic,
    Multi(ScorerWeights),
}

/// Per-node log-probability scorer. Scores a hypothesis as the running sum
/// of log P(label | node features); the context/head variants add
/// label-history features from the hypothesis.
pub struct BasicScorer<'a> {
    sentence: &'a AnnotatedSentence,
    matches: &'a [RuleMatch],
    variant: ContextVariant,
}

impl<'a> BasicScorer<'a> {
    pub fn new(
        sentence: &'a AnnotatedSentence,
        matches: &'a [RuleMatch],
        variant: ContextVariant,
    ) -> Self {
        BasicScorer {
            sentence,
            matches,
            variant,
        }
    }

    fn add_node_logprob(
        &self,
        hyp: &mut Hypothesis,
        order: &TraversalOrder,
        ctx: &DecodeContext,
    ) -> f64 {
        let node = order.at(hyp.covered() - 1);
        let label = hyp.labels().get(node).expect("newest node is labeled");
        let fv = constituent_features(
            self.sentence,
            self.matches,
            node,
            self.variant,
            Some((hyp.labels(), order)),
        );
        let maxent = ctx.maxent.expect("basic scorer needs a MaxEnt model");
        hyp.basic_sum += maxent.log_prob_of(&fv, label.name());
        hyp.basic_sum
    }
}

impl HypothesisScorer for BasicScorer<'_> {
    fn score(
        &self,
        hyp: &mut Hypothesis,
        _tree: &ParseTree,
        order: &TraversalOrder,
        ctx: &DecodeContext,
    ) -> f64 {
        self.add_node_logprob(hyp, order, ctx)
    }
}

/// The combination scorer: ranks hypotheses by the weighted sum of the
/// five normalized component scores.
pub struct MultiScorer<'a> {
    base: BasicScorer<'a>,
    weights: ScorerWeights,
}

impl<'a> MultiScorer<'a> {
    pub fn new(
        sentence: &'a AnnotatedSentence,
        matches: &'a [RuleMatch],
        variant: ContextVariant,
        weights: ScorerWeights,
    ) -> Self {
        MultiScorer {
            base: BasicScorer::new(sentence, matches, variant),
            weights,
        }
    }
}

impl HypothesisScorer for MultiScorer<'_> {
    fn score(
        &self,
        hyp: &mut Hypothesis,
        _tree: &ParseTree,
        order: &TraversalOrder,
        ctx: &DecodeContext,
    ) -> f64 {
        self.base.add_node_logprob(hyp, order, ctx);
        multi_score(hyp, self.base.sentence, ctx, &self.weights)
    }
}

/// Observed min/max of each raw component over a run; used to fit the
/// normalization bounds before tuning.
#[derive(Debug, Clone, Copy)]
pub struct ComponentRanges {
    pub min: [f64; N_COMPONENTS],
    pub max: [f64; N_COMPONENTS],
    pub count: usize,
}

impl Default for ComponentRanges {
    fn default() -> Self {
        ComponentRanges {
            min: [f64::INFINITY; N_COMPONENTS],
            max: [f64::NEG_INFINITY; N_COMPONENTS],
            count: 0,
        }
    }
}

impl ComponentRanges {
    pub fn update(&mut self, components: &[f64; N_COMPONENTS]) {
        for (i, &value) in components.iter().enumerate() {
            self.min[i] = self.min[i].min(value);
            self.max[i] = self.max[i].max(value);
        }
        self.count += 1;
    }

    /// Turn observations into valid bounds, widening degenerate or missing
    /// ranges so min < max always holds.
    pub fn bounds(&self) -> [(f64, f64); N_COMPONENTS] {
        let fallback = default_bounds();
        let mut out = [(0.0, 1.0); N_COMPONENTS];
        for i in 0..N_COMPONENTS {
            out[i] = if self.count == 0 || !self.min[i].is_finite() || !self.max[i].is_finite() {
                fallback[i]
            } else if self.min[i] < self.max[i] {
                (self.min[i], self.max[i])
            } else {
                (self.min[i] - 0.5, self.max[i] + 0.5)
            };
        }
        out
    }
}

/// Ranks by the basic score while recording raw component values of every
/// hypothesis it sees.
pub struct ObservingScorer<'a> {
    base: BasicScorer<'a>,
    ranges: &'a RefCell<ComponentRanges>,
}

impl<'a> ObservingScorer<'a> {
    pub fn new(
        sentence: &'a AnnotatedSentence,
        matches: &'a [RuleMatch],
        variant: ContextVariant,
        ranges: &'a RefCell<ComponentRanges>,
    ) -> Self {
        ObservingScorer {
            base: BasicScorer::new(sentence, matches, variant),
            ranges,
        }
    }
}

impl HypothesisScorer for ObservingScorer<'_> {
    fn score(
        &self,
        hyp: &mut Hypothesis,
        _tree: &ParseTree,
        order: &TraversalOrder,
        ctx: &DecodeContext,
    ) -> f64 {
        let basic = self.base.add_node_logprob(hyp, order, ctx);
        let components = component_scores(hyp, self.base.sentence, ctx);
        self.ranges.borrow_mut().update(&components);
        basic
    }
}

pub(crate) fn build_scorer<'a>(
    sentence: &'a AnnotatedSentence,
    matches: &'a [RuleMatch],
    variant: ContextVariant,
    kind: &ScorerKind,
) -> Box<dyn HypothesisScorer + 'a> {
    match kind {
        ScorerKind::Basic => Box::new(BasicScorer::new(sentence, matches, variant)),
        ScorerKind::Multi(weights) => Box::new(MultiScorer::new(
            sentence,
            matches,
            variant,
            weights.clone(),
        )),
    }
}

/// Recompute a hypothesis's basic score from scratch by replaying the
/// traversal prefix. Matches the incremental sum exactly.
pub fn score_basic(
    hyp: &Hypothesis,
    sentence: &AnnotatedSentence,
    matches: &[RuleMatch],
    variant: ContextVariant,
    order: &TraversalOrder,
    maxent: &MaxEntModel,
) -> f64 {
    let mut partial = Labeling::empty(&sentence.tree);
    let mut sum = 0.0;
    for j in 0..hyp.covered() {
        let node = order.at(j);
        let label = hyp.labels().get(node).expect("prefix is labeled");
        partial.set(node, label);
        let fv = constituent_features(sentence, matches, node, variant, Some((&partial, order)));
        sum += maxent.log_prob_of(&fv, label.name());
    }
    sum
}

/// Result of a grid search over the combination weights.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TuneOutcome {
    pub weights: ScorerWeights,
    /// Every grid point with its mean ROUGE-2 recall, in evaluation order.
    pub evaluations: Vec<([f64; N_COMPONENTS], f64)>,
}

/// Grid-search the weight vector on held-out topics, maximizing mean ROUGE-2
/// of the full pipeline against the topics' abstracts. Normalization bounds
/// come from the observed component ranges on a preliminary basic-scorer
/// pass. Ties resolve to the first grid point in lexicographic order.
pub fn tune_alpha(
    topics: &[QueryTopic],
    grid_step: f64,
    models: &ModelSet,
    base: &PipelineConfig,
) -> Result<TuneOutcome> {
    if !(grid_step > 0.0 && grid_step <= 0.5) {
        return Err(Error::validation(format!(
            "grid step must lie in (0, 0.5], got {grid_step}"
        )));
    }
    if topics.is_empty() {
        return Err(Error::validation("no tuning topics"));
    }
    for topic in topics {
        if topic.abstracts.is_empty() {
            return Err(Error::validation(format!(
                "tuning topic {} has no reference abstracts",
                topic.topic_id
            )));
        }
    }

    // Pass 1: observe raw component ranges under the basic scorer.
    let ranges = RefCell::new(ComponentRanges::default());
    for topic in topics {
        summarize_with(topic, base, models, ScorerSource::ObserveBasic(&ranges))?;
    }
    let bounds = ranges.borrow().bounds();

    // Pass 2: evaluate every grid point.
    let mut values = Vec::new();
    let mut i = 0usize;
    loop {
        let v = i as f64 * grid_step;
        if v > 1.0 + 1e-9 {
            break;
        }
        values.push(v.min(1.0));
        i += 1;
    }
    let mut grid: Vec<[f64; N_COMPONENTS]> = Vec::new();
    for &a0 in &values {
        for &a1 in &values {
            for &a2 in &values {
                for &a3 in &values {
                    for &a4 in &values {
                        grid.push([a0, a1, a2, a3, a4]);
                    }
                }
            }
        }
    }

    let evaluations: Vec<([f64; N_COMPONENTS], f64)> = grid
        .par_iter()
        .map(|alpha| {
            let weights = ScorerWeights {
                alpha: *alpha,
                bounds,
            };
            let mut total = 0.0;
            for topic in topics {
                let summary =
                    summarize_with(topic, base, models, ScorerSource::MultiWeights(&weights))?;
                let candidate: Vec<String> = summary
                    .sentences
                    .iter()
                    .flat_map(|s| s.text.split_whitespace().map(|w| w.to_lowercase()))
                    .collect();
                let refs: Vec<Vec<String>> = topic
                    .abstracts
                    .iter()
                    .map(|a| a.iter().map(|w| w.to_lowercase()).collect())
                    .collect();
                total += rouge_n(&candidate, &refs, 2)?.recall;
            }
            Ok((*alpha, total / topics.len() as f64))
        })
        .collect::<Result<_>>()?;

    let mut best = 0usize;
    for (i, (_, score)) in evaluations.iter().enumerate() {
        if *score > evaluations[best].1 {
            best = i;
        }
    }
    Ok(TuneOutcome {
        weights: ScorerWeights {
            alpha: evaluations[best].0,
            bounds,
        },
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn token(surface: &str, lemma: &str, stop: bool) -> Token {
        Token {
            surface: surface.into(),
            lemma: lemma.into(),
            pos: "NN".into(),
            dep_head: -1,
            dep_rel: "root".into(),
            is_stopword: stop,
        }
    }

    fn malaria_words() -> Vec<Token> {
        vec![
            token("malaria", "malaria", false),
            token("causes", "cause", false),
            token("millions", "million", false),
            token("of", "of", true),
            token("deaths", "death", false),
        ]
    }

    fn refs(words: &[Token]) -> Vec<&Token> {
        words.iter().collect()
    }

    fn set(items: &[&str]) -> BTreeSet<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn query_overlap_counts_unique_types_over_token_count() {
        let words = malaria_words();
        let q = set(&["malaria", "death"]);
        assert_eq!(score_query(&refs(&words), &q), 2.0 / 5.0);
        assert_eq!(score_query(&refs(&words), &set(&["unrelated"])), 0.0);
        assert_eq!(score_query(&[], &q), 0.0);
    }

    #[test]
    fn query_overlap_upper_bound() {
        let words = vec![token("art", "art", false), token("theft", "theft", false)];
        let q = set(&["art", "theft"]);
        assert_eq!(score_query(&refs(&words), &q), 1.0);
    }

    #[test]
    fn importance_is_mean_table_value() {
        let mut probs = BTreeMap::new();
        probs.insert("malaria".to_string(), 0.4);
        probs.insert("death".to_string(), 0.2);
        let table = SumBasicTable { probs };
        let words = malaria_words();
        // (0.4 + 0 + 0 + 0 + 0.2) / 5
        let expected = (0.4 + 0.2) / 5.0;
        assert!((score_importance(&refs(&words), &table) - expected).abs() < 1e-15);
        assert_eq!(
            score_importance(&refs(&words), &SumBasicTable::default()),
            0.0
        );
        assert_eq!(score_importance(&[], &table), 0.0);
    }

    #[test]
    fn importance_of_uniform_table_is_that_value() {
        let words = vec![
            token("a1", "a1", false),
            token("a2", "a2", false),
            token("a3", "a3", false),
        ];
        let probs: BTreeMap<String, f64> = words.iter().map(|t| (t.lemma.clone(), 0.125)).collect();
        let table = SumBasicTable { probs };
        assert!((score_importance(&refs(&words), &table) - 0.125).abs() < 1e-15);
    }

    #[test]
    fn redundancy_discounts_seen_content() {
        let words = malaria_words();
        assert_eq!(score_redundancy(&refs(&words), &BTreeSet::new()), 1.0);
        // Two of five tokens already selected.
        let c = set(&["malaria", "death"]);
        assert!((score_redundancy(&refs(&words), &c) - 0.6).abs() < 1e-15);
        // Full containment with distinct content tokens drops to zero.
        let all = vec![token("art", "art", false), token("theft", "theft", false)];
        let c = set(&["art", "theft"]);
        assert_eq!(score_redundancy(&refs(&all), &c), 0.0);
        assert_eq!(score_redundancy(&[], &c), 1.0);
    }

    #[test]
    fn redundancy_non_increasing_as_summary_grows() {
        let words = malaria_words();
        let mut c = BTreeSet::new();
        let mut last = score_redundancy(&refs(&words), &c);
        for lemma in ["cause", "million", "death", "malaria"] {
            c.insert(lemma.to_string());
            let next = score_redundancy(&refs(&words), &c);
            assert!(next <= last + 1e-15);
            last = next;
        }
    }

    #[test]
    fn sumbasic_counts_content_tokens_only() {
        // "a cat . a dog ." with "a" a stopword and "." punctuation.
        let tokens = vec![
            token("a", "a", true),
            token("cat", "cat", false),
            token(".", ".", false),
            token("a", "a", true),
            token("dog", "dog", false),
            token(".", ".", false),
        ];
        // Build a minimal one-document topic around these tokens.
        let mut tree_src = String::from("(S");
        for t in &tokens {
            tree_src.push_str(&format!(" (X {})", t.surface));
        }
        tree_src.push(')');
        let mut tree = crate::corpus::ptb::parse_ptb(&tree_src).unwrap();
        tree.resolve_heads(crate::tree::default_head_rules());
        let mut toks = tokens.clone();
        for (i, t) in toks.iter_mut().enumerate() {
            t.pos = "X".into();
            t.dep_head = if i == 0 { -1 } else { 0 };
            t.dep_rel = if i == 0 { "root".into() } else { "dep".into() };
        }
        let topic = QueryTopic {
            topic_id: "t".into(),
            title: String::new(),
            narrative: String::new(),
            documents: vec![crate::corpus::Document {
                doc_id: "d".into(),
                timestamp: None,
                sentences: vec![AnnotatedSentence {
                    tokens: toks,
                    tree,
                    doc_id: "d".into(),
                    position: 0,
                    timestamp: None,
                }],
                headline: None,
            }],
            abstracts: Vec::new(),
        };
        let table = build_sumbasic(&topic);
        assert_eq!(table.len(), 2);
        assert!((table.get("cat") - 0.5).abs() < 1e-15);
        assert!((table.get("dog") - 0.5).abs() < 1e-15);
        assert_eq!(table.get("a"), 0.0);

        // Duplicating the document leaves the table unchanged.
        let mut doubled = topic.clone();
        let mut copy = doubled.documents[0].clone();
        copy.doc_id = "d2".into();
        for s in &mut copy.sentences {
            s.doc_id = "d2".into();
        }
        doubled.documents.push(copy);
        assert_eq!(build_sumbasic(&doubled), table);
    }

    #[test]
    fn combine_is_a_normalized_dot_product() {
        let weights = ScorerWeights {
            alpha: [0.5, 1.0, 0.0, 0.25, 1.0],
            bounds: [
                (-10.0, 0.0),
                (0.0, 1.0),
                (0.0, 1.0),
                (-5.0, 0.0),
                (0.0, 1.0),
            ],
        };
        let comps = [-5.0, 0.4, 0.9, -1.0, 0.6];
        // Independent computation.
        let normalized = [
            (-5.0f64 + 10.0) / 10.0,
            0.4,
            0.9,
            (-1.0f64 + 5.0) / 5.0,
            0.6,
        ];
        let expected: f64 = weights
            .alpha
            .iter()
            .zip(normalized.iter())
            .map(|(a, n)| a * n)
            .sum();
        assert!((weights.combine(&comps) - expected).abs() < 1e-12);
    }

    #[test]
    fn combine_clamps_out_of_range_components() {
        let weights = ScorerWeights {
            alpha: [1.0; 5],
            bounds: [(0.0, 1.0); 5],
        };
        let comps = [2.0, -1.0, 0.5, 1.5, 0.0];
        let expected = 1.0 + 0.0 + 0.5 + 1.0 + 0.0;
        assert!((weights.combine(&comps) - expected).abs() < 1e-12);
    }

    #[test]
    fn zero_alpha_scores_zero() {
        let weights = ScorerWeights {
            alpha: [0.0; 5],
            ..Default::default()
        };
        assert_eq!(weights.combine(&[-3.0, 0.5, 0.1, -2.0, 1.0]), 0.0);
    }

    #[test]
    fn weights_validation() {
        let mut w = ScorerWeights::default();
        assert!(w.validate().is_ok());
        w.alpha[2] = 1.5;
        assert!(w.validate().is_err());
        w.alpha[2] = 0.5;
        w.bounds[0] = (1.0, 1.0);
        assert!(w.validate().is_err());
    }

    #[test]
    fn ranges_widen_degenerate_observations() {
        let mut r = ComponentRanges::default();
        assert_eq!(r.bounds(), default_bounds());
        r.update(&[-3.0, 0.5, 0.5, -2.0, 1.0]);
        r.update(&[-1.0, 0.7, 0.5, -2.5, 1.0]);
        let b = r.bounds();
        assert_eq!(b[0], (-3.0, -1.0));
        assert_eq!(b[1], (0.5, 0.7));
        // Constant component widened around the value.
        assert_eq!(b[2], (0.0, 1.0));
        assert_eq!(b[4], (0.5, 1.5));
    }
}
