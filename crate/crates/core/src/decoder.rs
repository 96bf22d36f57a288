//! Beam search over constituent labelings with a pluggable traversal order
//! and hypothesis scorer, plus language-model re-ranking of the N-best list.
//!
//! One decode iteration expands every stack hypothesis with every compatible
//! label of the next node in the traversal, re-scores, and keeps the top N.
//! Nodes covered by a deletion rule are restricted to Remove; leaves never
//! take Partial. Label expansion order is fixed (Retain, Remove, Partial) and
//! the sort is stable, so tie-breaking is deterministic.

use std::collections::{BTreeSet, HashSet};

use crate::corpus::AnnotatedSentence;
use crate::error::{Error, Result};
use crate::learners::{ContextVariant, MaxEntModel};
use crate::lm::NGramModel;
use crate::rules::{match_rules, RuleMatch};
use crate::scorers::{ScorerKind, SumBasicTable};
use crate::tree::{
    compatible, head_driven_order, nodes_within_spans, postorder, realize, Labeling, NodeId,
    NodeLabel, ParseTree, TraversalOrder,
};

/// Read-only inputs shared by every hypothesis scored during one decode.
#[derive(Clone, Copy, Default)]
pub struct DecodeContext<'a> {
    /// Expanded query lemma set.
    pub query_terms: Option<&'a BTreeSet<String>>,
    pub sumbasic: Option<&'a SumBasicTable>,
    /// Lemma types already in the summary.
    pub summary_so_far: Option<&'a BTreeSet<String>>,
    pub lm: Option<&'a NGramModel>,
    pub maxent: Option<&'a MaxEntModel>,
}

/// A partial labeling of the traversal prefix with its score and cached
/// aggregates: the running log-probability sum and the tokens realized by
/// retained leaves.
#[derive(Debug, Clone)]
pub struct Hypothesis {
    labels: Labeling,
    covered: usize,
    pub score: f64,
    /// Running sum of per-node label log-probabilities.
    pub basic_sum: f64,
    kept: Vec<usize>,
}

impl Hypothesis {
    pub fn empty(tree: &ParseTree) -> Hypothesis {
        Hypothesis {
            labels: Labeling::empty(tree),
            covered: 0,
            score: 0.0,
            basic_sum: 0.0,
            kept: Vec::new(),
        }
    }

    /// Build a hypothesis covering the first `prefix.len()` traversal
    /// positions with the given labels. Aggregates other than `basic_sum`
    /// are reconstructed; scores are left at zero.
    pub fn from_prefix(
        tree: &ParseTree,
        order: &TraversalOrder,
        prefix: &[NodeLabel],
    ) -> Hypothesis {
        let mut hyp = Hypothesis::empty(tree);
        for (&label, &node) in prefix.iter().zip(order.nodes()) {
            hyp = hyp.extend(tree, node, label);
        }
        hyp
    }

    pub fn labels(&self) -> &Labeling {
        &self.labels
    }

    /// Number of traversal positions labeled so far.
    pub fn covered(&self) -> usize {
        self.covered
    }

    /// Token indices retained so far (unsorted).
    pub fn kept_tokens(&self) -> &[usize] {
        &self.kept
    }

    fn extend(&self, tree: &ParseTree, node: NodeId, label: NodeLabel) -> Hypothesis {
        let mut next = self.clone();
        next.labels.set(node, label);
        next.covered += 1;
        if label == NodeLabel::Retain && tree.node(node).is_leaf() {
            next.kept.push(tree.node(node).span.0);
        }
        next
    }
}

/// Scores a hypothesis right after its newest node assignment. Higher is
/// better; implementations must be deterministic. The hypothesis is mutable
/// so scorers can maintain `basic_sum` incrementally.
pub trait HypothesisScorer {
    fn score(
        &self,
        hyp: &mut Hypothesis,
        tree: &ParseTree,
        order: &TraversalOrder,
        ctx: &DecodeContext,
    ) -> f64;
}

/// A constant scorer; with beam 1 this makes the decoder take the first
/// compatible label everywhere.
pub struct ConstantScorer(pub f64);

impl HypothesisScorer for ConstantScorer {
    fn score(
        &self,
        _: &mut Hypothesis,
        _: &ParseTree,
        _: &TraversalOrder,
        _: &DecodeContext,
    ) -> f64 {
        self.0
    }
}

/// The beam search decoder. Returns up to `beam` complete labelings sorted by
/// descending score (stable under ties). `forced_remove` nodes only ever take
/// the Remove label. An empty result is possible only when `forced_remove`
/// makes every expansion incompatible.
pub fn beam_search(
    tree: &ParseTree,
    order: &TraversalOrder,
    scorer: &dyn HypothesisScorer,
    beam: usize,
    forced_remove: &BTreeSet<NodeId>,
    ctx: &DecodeContext,
) -> Result<Vec<(Labeling, f64)>> {
    if beam < 1 {
        return Err(Error::validation("beam size must be at least 1"));
    }
    if order.len() != tree.len() {
        return Err(Error::validation("traversal order does not cover the tree"));
    }
    let mut stack = vec![Hypothesis::empty(tree)];
    for &node in order.nodes() {
        let mut expanded: Vec<Hypothesis> = Vec::with_capacity(stack.len() * 3);
        let is_leaf = tree.node(node).is_leaf();
        let forced = forced_remove.contains(&node);
        for hyp in &stack {
            for label in NodeLabel::ALL {
                if is_leaf && label == NodeLabel::Partial {
                    continue;
                }
                if forced && label != NodeLabel::Remove {
                    continue;
                }
                if !compatible(label, node, tree, &hyp.labels) {
                    continue;
                }
                let mut next = hyp.extend(tree, node, label);
                next.score = scorer.score(&mut next, tree, order, ctx);
                expanded.push(next);
            }
        }
        expanded.sort_by(|a, b| {
            b.score
                .partial_cmp(&a.score)
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        expanded.truncate(beam);
        stack = expanded;
        if stack.is_empty() {
            return Ok(Vec::new());
        }
    }
    Ok(stack.into_iter().map(|h| (h.labels, h.score)).collect())
}

/// Decoder settings for one compression run.
#[derive(Debug, Clone)]
pub struct DecoderConfig {
    pub beam: usize,
    pub search: ContextVariant,
    pub scorer: ScorerKind,
}

pub(crate) trait ScorerFactory {
    fn make<'a>(
        &'a self,
        sentence: &'a AnnotatedSentence,
        matches: &'a [RuleMatch],
    ) -> Box<dyn HypothesisScorer + 'a>;
}

pub(crate) fn traversal_for(tree: &ParseTree, search: ContextVariant) -> Result<TraversalOrder> {
    match search {
        ContextVariant::Basic | ContextVariant::Context => Ok(postorder(tree)),
        ContextVariant::Head => head_driven_order(tree),
    }
}

/// Shared decode body: rule marking, traversal, beam search, realization,
/// dedup by token set, and the never-empty fallback.
pub(crate) fn decode_candidates(
    sentence: &AnnotatedSentence,
    beam: usize,
    search: ContextVariant,
    factory: &dyn ScorerFactory,
    ctx: &DecodeContext,
) -> Result<Vec<(Vec<usize>, Labeling)>> {
    let is_lead = sentence.position == 0;
    let matches = match_rules(sentence, is_lead);
    let spans: Vec<(usize, usize)> = matches.iter().map(|m| m.span).collect();
    let forced = nodes_within_spans(&sentence.tree, &spans);
    let order = traversal_for(&sentence.tree, search)?;
    let scorer = factory.make(sentence, &matches);
    let hyps = beam_search(&sentence.tree, &order, scorer.as_ref(), beam, &forced, ctx)?;

    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut out = Vec::new();
    for (labels, _) in hyps {
        let kept = realize(&sentence.tree, &labels)?;
        if kept.is_empty() {
            continue;
        }
        if seen.insert(kept.clone()) {
            out.push((kept, labels));
        }
    }
    if out.is_empty() {
        // Nothing realizable survived (e.g. the root was rule-forced to
        // Remove): fall back to the uncompressed sentence.
        let all: Vec<usize> = (0..sentence.tokens.len()).collect();
        let mut labels = Labeling::empty(&sentence.tree);
        for id in sentence.tree.node_ids() {
            labels.set(id, NodeLabel::Retain);
        }
        out.push((all, labels));
    }
    Ok(out)
}

struct StandardFactory<'w> {
    search: ContextVariant,
    kind: &'w ScorerKind,
}

impl ScorerFactory for StandardFactory<'_> {
    fn make<'a>(
        &'a self,
        sentence: &'a AnnotatedSentence,
        matches: &'a [RuleMatch],
    ) -> Box<dyn HypothesisScorer + 'a> {
        crate::scorers::build_scorer(sentence, matches, self.search, self.kind)
    }
}

/// N-best compressions of a sentence as token-index lists, deduplicated by
/// token set, empty realizations dropped. Never returns an empty list.
pub fn compress_nbest(
    sentence: &AnnotatedSentence,
    cfg: &DecoderConfig,
    ctx: &DecodeContext,
) -> Result<Vec<Vec<usize>>> {
    Ok(compress_nbest_labeled(sentence, cfg, ctx)?
        .into_iter()
        .map(|(kept, _)| kept)
        .collect())
}

/// As [`compress_nbest`], but keeps the labeling behind each candidate for
/// provenance reporting.
pub fn compress_nbest_labeled(
    sentence: &AnnotatedSentence,
    cfg: &DecoderConfig,
    ctx: &DecodeContext,
) -> Result<Vec<(Vec<usize>, Labeling)>> {
    let factory = StandardFactory {
        search: cfg.search,
        kind: &cfg.scorer,
    };
    decode_candidates(sentence, cfg.beam, cfg.search, &factory, ctx)
}

/// Index of the candidate with the highest per-word LM score; ties go to the
/// earlier candidate.
pub fn rerank_index(candidates: &[Vec<String>], lm: &NGramModel) -> usize {
    assert!(!candidates.is_empty(), "rerank over empty candidate list");
    let mut best = 0;
    let mut best_score = lm.per_word(&candidates[0]);
    for (i, cand) in candidates.iter().enumerate().skip(1) {
        let score = lm.per_word(cand);
        if score > best_score {
            best_score = score;
            best = i;
        }
    }
    best
}

/// The candidate with the highest per-word LM score.
pub fn rerank_lm(candidates: &[Vec<String>], lm: &NGramModel) -> Vec<String> {
    candidates[rerank_index(candidates, lm)].clone()
}
