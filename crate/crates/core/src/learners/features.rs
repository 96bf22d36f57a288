//! Feature templates for the learned compressors.
//!
//! [`token_features`] builds the token-level vectors for the sequence
//! compressor (with syntactic/dependency/rule features copied for the two
//! tokens on either side). [`constituent_features`] builds the node-level
//! vectors for the tree compressor, including the starred/daggered basic and
//! dependency features that are concatenated with every syntactic feature,
//! and the label-history features used by the context-aware and head-driven
//! search variants.

use super::FeatureVector;
use crate::corpus::AnnotatedSentence;
use crate::rules::{RuleId, RuleMatch};
use crate::tree::{Labeling, NodeId, NodeLabel, ParseTree, TraversalOrder};

/// Which label-history features the tree scorer appends.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContextVariant {
    Basic,
    Context,
    Head,
}

const NEGATION_WORDS: [&str; 10] = [
    "not", "n't", "no", "never", "none", "nobody", "nothing", "neither", "nor", "nowhere",
];

fn is_negation(surface: &str) -> bool {
    NEGATION_WORDS.contains(&surface.to_lowercase().as_str())
}

fn first_char_capitalized(surface: &str) -> bool {
    surface.chars().next().is_some_and(|c| c.is_uppercase())
}

fn all_caps(surface: &str) -> bool {
    let mut saw_alpha = false;
    for c in surface.chars() {
        if c.is_alphabetic() {
            saw_alpha = true;
            if !c.is_uppercase() {
                return false;
            }
        }
    }
    saw_alpha
}

/// Depth of a token in the dependency tree (root word is depth 0). Cycles,
/// which validation rules out, would cap at sentence length.
fn dep_depth(sentence: &AnnotatedSentence, index: usize) -> usize {
    let mut depth = 0;
    let mut cur = index;
    for _ in 0..sentence.tokens.len() {
        let head = sentence.tokens[cur].dep_head;
        if head < 0 {
            break;
        }
        depth += 1;
        cur = head as usize;
    }
    depth
}

fn rules_covering(matches: &[RuleMatch], start: usize, end: usize) -> Vec<RuleId> {
    let mut out: Vec<RuleId> = matches
        .iter()
        .filter(|m| m.span.0 <= start && end <= m.span.1)
        .map(|m| m.rule)
        .collect();
    out.sort();
    out.dedup();
    out
}

// ---------------------------------------------------------------------------
// Token-level features (sequence compressor)
// ---------------------------------------------------------------------------

/// Syntactic-tree, dependency-tree, and rule features for one token; these
/// are the ones copied into the context window.
fn token_window_features(
    sentence: &AnnotatedSentence,
    matches: &[RuleMatch],
    idx: usize,
) -> FeatureVector {
    let mut fv = FeatureVector::new();
    let token = &sentence.tokens[idx];
    let tree = &sentence.tree;
    let leaf = tree.leaf_for_token(idx);

    // Syntactic tree.
    fv.flag(format!("pos={}", token.pos));
    if let Some((parent, pos_in_parent)) = tree.child_position(leaf) {
        fv.flag(format!("parent={}", tree.node(parent).label));
        if let Some(gp) = tree.node(parent).parent {
            fv.flag(format!("grandparent={}", tree.node(gp).label));
        }
        if pos_in_parent == 0 {
            fv.flag("leftmost_child");
        }
        if pos_in_parent == 1 {
            fv.flag("second_leftmost_child");
        }
        if tree.node(parent).head_child == Some(pos_in_parent) {
            fv.flag("is_headword");
        }
    }
    for chunk in ["NP", "VP", "ADVP", "ADJP"] {
        if tree
            .ancestors(leaf)
            .iter()
            .any(|&a| tree.node(a).label == chunk)
        {
            fv.flag(format!("in_{chunk}"));
        }
    }

    // Dependency tree.
    fv.flag(format!("dep={}", token.dep_rel));
    if token.dep_head >= 0 {
        let head = &sentence.tokens[token.dep_head as usize];
        fv.flag(format!("head_dep={}", head.dep_rel));
        if head.dep_head >= 0 {
            fv.flag(format!(
                "grandhead_dep={}",
                sentence.tokens[head.dep_head as usize].dep_rel
            ));
        }
    } else {
        fv.flag("dep_root");
    }
    let depth = dep_depth(sentence, idx);
    if depth > 3 {
        fv.flag("dep_depth_gt3");
    }
    if depth > 5 {
        fv.flag("dep_depth_gt5");
    }

    // Rule indicators.
    for rule in rules_covering(matches, idx, idx + 1) {
        fv.flag(format!("rule_{}", rule.name()));
    }
    fv
}

/// Token-level feature vector for position `idx`, with the window copies for
/// the two preceding and two following tokens.
pub fn token_features(
    sentence: &AnnotatedSentence,
    matches: &[RuleMatch],
    idx: usize,
) -> FeatureVector {
    let n = sentence.tokens.len();
    let token = &sentence.tokens[idx];
    let mut fv = token_window_features(sentence, matches, idx);

    // Basic features (center token only).
    for k in [1usize, 3, 5] {
        if idx < k {
            fv.flag(format!("first{k}"));
        }
        if n - idx <= k {
            fv.flag(format!("last{k}"));
        }
    }
    if first_char_capitalized(&token.surface) {
        fv.flag("cap_first");
    }
    if all_caps(&token.surface) {
        fv.flag("cap_all");
    }
    if is_negation(&token.surface) {
        fv.flag("negation");
    }
    if token.is_stopword {
        fv.flag("stopword");
    }

    // Window copies.
    for (offset, prefix) in [(-2i64, "p2:"), (-1, "p1:"), (1, "n1:"), (2, "n2:")] {
        let pos = idx as i64 + offset;
        if pos >= 0 && (pos as usize) < n {
            let other = token_window_features(sentence, matches, pos as usize);
            fv.extend_prefixed(prefix, &other);
        }
    }
    fv
}

// ---------------------------------------------------------------------------
// Constituent-level features (tree compressor)
// ---------------------------------------------------------------------------

/// Basic indicators that get concatenated with every syntactic feature.
fn starred_features(tree: &ParseTree, node: NodeId) -> Vec<String> {
    let t = tree.node(node);
    let n = tree.leaf_count();
    let (start, end) = t.span;
    let mut out = Vec::new();
    for k in [1usize, 3, 5] {
        if end <= k {
            out.push(format!("proj_first{k}"));
        }
        if start >= n.saturating_sub(k) {
            out.push(format!("proj_last{k}"));
        }
        if start == 0 && end >= k {
            out.push(format!("covers_first{k}"));
        }
        if end == n && start + k <= n {
            out.push(format!("covers_last{k}"));
        }
    }
    if t.span_len() > 5 {
        out.push("nwords_gt5".into());
    }
    if t.span_len() > 10 {
        out.push("nwords_gt10".into());
    }
    if t.is_leaf() {
        out.push("leaf".into());
    }
    if node == tree.root() {
        out.push("root".into());
    }
    out
}

/// Dependency features of a node, via its lexical head token.
fn daggered_features(sentence: &AnnotatedSentence, node: NodeId) -> Vec<String> {
    let tree = &sentence.tree;
    let mut out = Vec::new();
    let head_token = tree.head_leaf(node).map(|leaf| tree.node(leaf).span.0);
    if let Some(h) = head_token {
        out.push(format!("head_dep={}", sentence.tokens[h].dep_rel));
        let depth = dep_depth(sentence, h);
        if depth > 3 {
            out.push("head_dep_depth_gt3".into());
        }
        if depth > 5 {
            out.push("head_dep_depth_gt5".into());
        }
    }
    if let Some(parent) = tree.node(node).parent {
        if let Some(leaf) = tree.head_leaf(parent) {
            let h = tree.node(leaf).span.0;
            out.push(format!("parent_head_dep={}", sentence.tokens[h].dep_rel));
        }
        if let Some(gp) = tree.node(parent).parent {
            if let Some(leaf) = tree.head_leaf(gp) {
                let h = tree.node(leaf).span.0;
                out.push(format!(
                    "grandparent_head_dep={}",
                    sentence.tokens[h].dep_rel
                ));
            }
        }
    }
    let (start, end) = tree.node(node).span;
    if (start..end).any(|i| sentence.tokens[i].dep_head < 0) {
        out.push("contains_dep_root".into());
    }
    out
}

fn syntactic_features(tree: &ParseTree, node: NodeId) -> Vec<String> {
    let t = tree.node(node);
    let mut out = vec![format!("label={}", t.label)];
    if let Some((parent, pos)) = tree.child_position(node) {
        let pnode = tree.node(parent);
        out.push(format!("parent_label={}", pnode.label));
        if let Some(gp) = pnode.parent {
            out.push(format!("grandparent_label={}", tree.node(gp).label));
        }
        if pos > 0 {
            out.push(format!(
                "left_sibling_label={}",
                tree.node(pnode.children[pos - 1]).label
            ));
        }
        if pos + 1 < pnode.children.len() {
            out.push(format!(
                "right_sibling_label={}",
                tree.node(pnode.children[pos + 1]).label
            ));
        }
        if pos == 0 {
            out.push("leftmost_child".into());
        }
        if pos == 1 {
            out.push("second_leftmost_child".into());
        }
        if pnode.head_child == Some(pos) {
            out.push("head_of_parent".into());
        }
    }
    if let Some(head) = tree.head_child_id(node) {
        out.push(format!("head_child_label={}", tree.node(head).label));
    }
    let depth = tree.depth(node);
    for k in [3usize, 5, 10] {
        if depth > k {
            out.push(format!("depth_gt{k}"));
        }
    }
    out
}

/// Label-history features for the context-aware and head-driven variants.
/// Only labels of nodes that precede `node` in `order` are consulted, so
/// training on gold labelings matches what decoding can see.
fn history_features(
    tree: &ParseTree,
    node: NodeId,
    variant: ContextVariant,
    labels: &Labeling,
    order: &TraversalOrder,
    fv: &mut FeatureVector,
) {
    if variant == ContextVariant::Basic {
        return;
    }
    let pos = order.position(node);
    let visible = |id: NodeId| -> Option<NodeLabel> {
        (order.position(id) < pos).then(|| labels.get(id)).flatten()
    };
    let t = tree.node(node);
    if !t.is_leaf() {
        let child_labels: Vec<Option<NodeLabel>> = t.children.iter().map(|&c| visible(c)).collect();
        if child_labels.iter().all(|l| *l == Some(NodeLabel::Remove)) {
            fv.flag("all_children_removed");
        }
        if child_labels.iter().all(|l| *l == Some(NodeLabel::Retain)) {
            fv.flag("all_children_retained");
        }
    }
    let parent_head = t
        .parent
        .and_then(|p| tree.head_child_id(p))
        .filter(|&h| h != node);
    match variant {
        ContextVariant::Basic => {}
        ContextVariant::Context => {
            if let Some((parent, pos_in_parent)) = tree.child_position(node) {
                let siblings = &tree.node(parent).children[..pos_in_parent];
                let mut any = [false; 3];
                for &sib in siblings {
                    if let Some(l) = visible(sib) {
                        any[l as usize] = true;
                    }
                }
                if any[NodeLabel::Retain as usize] {
                    fv.flag("any_left_sibling_retained");
                }
                if any[NodeLabel::Remove as usize] {
                    fv.flag("any_left_sibling_removed");
                }
                if any[NodeLabel::Partial as usize] {
                    fv.flag("any_left_sibling_partial");
                }
                if pos_in_parent > 0 {
                    if let Some(l) = visible(tree.node(parent).children[pos_in_parent - 1]) {
                        fv.flag(format!("left_sibling={}", l.name()));
                    }
                }
            }
            if let Some(l) = parent_head.and_then(visible) {
                fv.flag(format!("head_node={}", l.name()));
            }
        }
        ContextVariant::Head => {
            // Under head-driven traversal the governing head is always
            // labeled before its modifiers.
            if let Some(l) = parent_head.and_then(visible) {
                fv.flag(format!("modified_head={}", l.name()));
            }
        }
    }
}

/// Constituent-level feature vector for `node`, optionally with history
/// features computed from a (partial) labeling under a traversal order.
pub fn constituent_features(
    sentence: &AnnotatedSentence,
    matches: &[RuleMatch],
    node: NodeId,
    variant: ContextVariant,
    history: Option<(&Labeling, &TraversalOrder)>,
) -> FeatureVector {
    let tree = &sentence.tree;
    let t = tree.node(node);
    let (start, end) = t.span;
    let mut fv = FeatureVector::new();

    let starred = starred_features(tree, node);
    let daggered = daggered_features(sentence, node);
    let syntactic = syntactic_features(tree, node);
    for name in starred.iter().chain(daggered.iter()) {
        fv.flag(name.clone());
    }
    for name in &syntactic {
        fv.flag(name.clone());
    }
    // Concatenation scheme: every starred/daggered feature crossed with
    // every syntactic feature.
    for base in starred.iter().chain(daggered.iter()) {
        for syn in &syntactic {
            fv.flag(format!("{base}&{syn}"));
        }
    }

    // Unstarred basic features.
    let span_tokens = &sentence.tokens[start..end];
    if span_tokens
        .iter()
        .any(|t| first_char_capitalized(&t.surface))
    {
        fv.flag("has_cap_first");
    }
    if span_tokens.iter().any(|t| all_caps(&t.surface)) {
        fv.flag("has_cap_all");
    }
    if span_tokens.iter().any(|t| is_negation(&t.surface)) {
        fv.flag("has_negation");
    }
    if span_tokens.iter().any(|t| t.is_stopword) {
        fv.flag("has_stopword");
    }

    for rule in rules_covering(matches, start, end) {
        fv.flag(format!("rule_{}", rule.name()));
    }

    if let Some((labels, order)) = history {
        history_features(tree, node, variant, labels, order, &mut fv);
    }
    fv
}
