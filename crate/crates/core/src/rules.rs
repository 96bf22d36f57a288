//! Linguistically-motivated deletion rules: a standalone rule-based
//! compressor plus span/node marking for the learned compressors.
//!
//! Each rule is a precision-oriented operationalization of a removable
//! pattern (datelines, relative dates, attribution clauses, lead adverbials,
//! appositives, nonrestrictive relatives, lead adverbial clauses, and
//! parentheticals). No single match may delete more than [`MAX_RULE_SPAN`]
//! tokens.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use crate::corpus::AnnotatedSentence;
use crate::tree::{nodes_within_spans, NodeId};

/// Hard cap on tokens removed by one rule application.
pub const MAX_RULE_SPAN: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RuleId {
    Header,
    RelativeDate,
    Attribution,
    LeadAdverbial,
    NounAppositive,
    NonrestrictiveRelcl,
    AdverbialClauseLead,
    Parenthetical,
}

impl RuleId {
    pub const ALL: [RuleId; 8] = [
        RuleId::Header,
        RuleId::RelativeDate,
        RuleId::Attribution,
        RuleId::LeadAdverbial,
        RuleId::NounAppositive,
        RuleId::NonrestrictiveRelcl,
        RuleId::AdverbialClauseLead,
        RuleId::Parenthetical,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleId::Header => "header",
            RuleId::RelativeDate => "relative_date",
            RuleId::Attribution => "attribution",
            RuleId::LeadAdverbial => "lead_adverbial",
            RuleId::NounAppositive => "noun_appositive",
            RuleId::NonrestrictiveRelcl => "nonrestrictive_relcl",
            RuleId::AdverbialClauseLead => "adverbial_clause_lead",
            RuleId::Parenthetical => "parenthetical",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleMatch {
    pub rule: RuleId,
    /// Token range `[start, end)` removed by the rule.
    pub span: (usize, usize),
    /// Tree node exactly covering the span, when one exists.
    pub node: Option<NodeId>,
}

fn word_list(text: &'static str) -> BTreeSet<&'static str> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect()
}

fn attribution_verbs() -> &'static BTreeSet<&'static str> {
    static LIST: OnceLock<BTreeSet<&'static str>> = OnceLock::new();
    LIST.get_or_init(|| word_list(include_str!("../data/attribution_verbs.txt")))
}

fn temporal_words() -> &'static BTreeSet<&'static str> {
    static LIST: OnceLock<BTreeSet<&'static str>> = OnceLock::new();
    LIST.get_or_init(|| word_list(include_str!("../data/temporal_words.txt")))
}

const MONTHS: [&str; 12] = [
    "january",
    "february",
    "march",
    "april",
    "may",
    "june",
    "july",
    "august",
    "september",
    "october",
    "november",
    "december",
];

const TEMPORAL_DEP_RELS: [&str; 3] = ["tmod", "npadvmod", "nmod:tmod"];

fn is_open_paren(surface: &str) -> bool {
    surface == "(" || surface == "-LRB-"
}

fn is_close_paren(surface: &str) -> bool {
    surface == ")" || surface == "-RRB-"
}

fn is_dash(surface: &str) -> bool {
    surface == "--" || surface == "\u{2014}" || surface == "\u{2013}"
}

fn lower(s: &AnnotatedSentence, i: usize) -> String {
    s.tokens[i].surface.to_lowercase()
}

/// All rule matches on a sentence. `is_lead` enables the rules restricted to
/// a document's first sentence. Matches may overlap.
pub fn match_rules(sentence: &AnnotatedSentence, is_lead: bool) -> Vec<RuleMatch> {
    let mut matches = Vec::new();
    if is_lead {
        header(sentence, &mut matches);
        adverbial_clause_lead(sentence, &mut matches);
    }
    relative_date(sentence, &mut matches);
    attribution(sentence, &mut matches);
    lead_adverbial(sentence, &mut matches);
    noun_appositive(sentence, &mut matches);
    nonrestrictive_relcl(sentence, &mut matches);
    parenthetical(sentence, &mut matches);

    matches.retain(|m| {
        let len = m.span.1 - m.span.0;
        len > 0 && len <= MAX_RULE_SPAN
    });
    matches.sort_by_key(|m| (m.span, m.rule));
    matches.dedup_by_key(|m| (m.rule, m.span));

    // Attach the covering node where the span is exactly one constituent.
    for m in &mut matches {
        m.node = sentence
            .tree
            .node_ids()
            .find(|&id| sentence.tree.node(id).span == m.span);
    }
    matches
}

/// Dateline prefix: everything up to the first dash, when the prefix carries
/// a month name or a parenthesized source, in lead sentences only.
fn header(s: &AnnotatedSentence, out: &mut Vec<RuleMatch>) {
    let Some(dash) = (0..s.tokens.len()).find(|&i| is_dash(&s.tokens[i].surface)) else {
        return;
    };
    if dash == 0 {
        return;
    }
    let has_month = (0..dash).any(|i| MONTHS.contains(&lower(s, i).as_str()));
    let has_source = (0..dash.saturating_sub(2))
        .any(|i| is_open_paren(&s.tokens[i].surface) && is_close_paren(&s.tokens[i + 2].surface));
    if has_month || has_source {
        out.push(RuleMatch {
            rule: RuleId::Header,
            span: (0, dash + 1),
            node: None,
        });
    }
}

/// Relative dates attached as temporal modifiers: weekday-style single tokens
/// and `last|next week|month|year` pairs.
fn relative_date(s: &AnnotatedSentence, out: &mut Vec<RuleMatch>) {
    for i in 0..s.tokens.len() {
        if !TEMPORAL_DEP_RELS.contains(&s.tokens[i].dep_rel.as_str()) {
            continue;
        }
        let word = lower(s, i);
        if temporal_words().contains(word.as_str()) {
            out.push(RuleMatch {
                rule: RuleId::RelativeDate,
                span: (i, i + 1),
                node: None,
            });
        } else if matches!(word.as_str(), "week" | "month" | "year")
            && i > 0
            && matches!(lower(s, i - 1).as_str(), "last" | "next")
        {
            out.push(RuleMatch {
                rule: RuleId::RelativeDate,
                span: (i - 1, i + 1),
                node: None,
            });
        }
    }
}

fn dep_children(s: &AnnotatedSentence) -> Vec<Vec<usize>> {
    let mut children = vec![Vec::new(); s.tokens.len()];
    for (i, t) in s.tokens.iter().enumerate() {
        if t.dep_head >= 0 {
            children[t.dep_head as usize].push(i);
        }
    }
    children
}

/// Contiguous token range of a dependency subtree, or None when the subtree
/// is discontiguous.
fn dep_subtree_range(children: &[Vec<usize>], head: usize) -> Option<(usize, usize)> {
    let mut members = Vec::new();
    let mut stack = vec![head];
    while let Some(i) = stack.pop() {
        members.push(i);
        stack.extend(children[i].iter().copied());
    }
    members.sort_unstable();
    let start = members[0];
    let end = members[members.len() - 1] + 1;
    if end - start == members.len() {
        Some((start, end))
    } else {
        None
    }
}

/// Attribution clauses: a subject plus a reporting verb that governs the main
/// clause, clause-final (possibly with trailing modifiers of the verb) or
/// clause-initial with a bare complement, extended over flanking commas.
fn attribution(s: &AnnotatedSentence, out: &mut Vec<RuleMatch>) {
    let children = dep_children(s);
    let last_word = match (0..s.tokens.len()).rev().find(|&i| s.tokens[i].is_word()) {
        Some(i) => i,
        None => return,
    };
    for v in 0..s.tokens.len() {
        let token = &s.tokens[v];
        if !token.pos.starts_with("VB") {
            continue;
        }
        if !attribution_verbs().contains(token.lemma.as_str())
            && !attribution_verbs().contains(lower(s, v).as_str())
        {
            continue;
        }
        let is_root = token.dep_head == -1;
        let is_parataxis = token.dep_rel == "parataxis";
        let ccomp: Vec<usize> = children[v]
            .iter()
            .copied()
            .filter(|&c| s.tokens[c].dep_rel == "ccomp")
            .collect();
        if !(is_parataxis || (is_root && !ccomp.is_empty())) {
            continue;
        }
        let Some(subj) = children[v]
            .iter()
            .copied()
            .find(|&c| matches!(s.tokens[c].dep_rel.as_str(), "nsubj" | "nsubjpass" | "subj"))
        else {
            continue;
        };
        let Some((subj_start, subj_end)) = dep_subtree_range(&children, subj) else {
            continue;
        };
        if subj_end != v {
            // Only the canonical "NP verb" shape.
            continue;
        }
        let mut start = subj_start;
        let mut end = v + 1;
        // Chain the verb's post-verbal modifiers ("said in a statement"),
        // skipping the content clause and bare punctuation.
        loop {
            let mut grew = false;
            for &d in &children[v] {
                if ccomp.contains(&d) || d == subj {
                    continue;
                }
                if let Some((ds, de)) = dep_subtree_range(&children, d) {
                    let has_word = (ds..de).any(|i| s.tokens[i].is_word());
                    if ds == end && has_word {
                        end = de;
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
        let clause_final = end > last_word;
        let clause_initial = start == 0;
        if !clause_final && !clause_initial {
            continue;
        }
        if clause_initial && !clause_final {
            // Skip "X said that ..." — only bare complements are trimmed.
            let that_complement = ccomp.iter().any(|&c| {
                dep_subtree_range(&children, c).is_some_and(|(cs, _)| lower(s, cs) == "that")
            });
            if that_complement {
                continue;
            }
        }
        if start > 0 && s.tokens[start - 1].surface == "," {
            start -= 1;
        } else if end < s.tokens.len() && s.tokens[end].surface == "," {
            end += 1;
        }
        out.push(RuleMatch {
            rule: RuleId::Attribution,
            span: (start, end),
            node: None,
        });
    }
}

/// Sentence-initial adverb or ADVP followed by a comma; the comma stays.
fn lead_adverbial(s: &AnnotatedSentence, out: &mut Vec<RuleMatch>) {
    let mut end = 0usize;
    if matches!(s.tokens[0].pos.as_str(), "RB" | "RBR" | "RBS") {
        end = 1;
    }
    for id in s.tree.node_ids() {
        let node = s.tree.node(id);
        if node.label == "ADVP" && node.span.0 == 0 {
            end = end.max(node.span.1);
        }
    }
    if end > 0 && end < s.tokens.len() && s.tokens[end].surface == "," {
        out.push(RuleMatch {
            rule: RuleId::LeadAdverbial,
            span: (0, end),
            node: None,
        });
    }
}

/// Appositive NPs: the dependency subtree of an `appos` head, either flanked
/// by punctuation or directly following the noun it renames.
fn noun_appositive(s: &AnnotatedSentence, out: &mut Vec<RuleMatch>) {
    let children = dep_children(s);
    for i in 0..s.tokens.len() {
        if s.tokens[i].dep_rel != "appos" || s.tokens[i].dep_head < 0 {
            continue;
        }
        let Some((start, end)) = dep_subtree_range(&children, i) else {
            continue;
        };
        let before_punct = start > 0 && !s.tokens[start - 1].is_word();
        let after_punct = end >= s.tokens.len() || !s.tokens[end].is_word();
        let governor = s.tokens[i].dep_head as usize;
        let follows_title = s.tokens[governor].pos.starts_with("NN") && governor + 1 == start;
        if (before_punct && after_punct) || follows_title {
            out.push(RuleMatch {
                rule: RuleId::NounAppositive,
                span: (start, end),
                node: None,
            });
        }
    }
}

/// SBAR relative clauses opened by a wh-word and preceded by a comma.
fn nonrestrictive_relcl(s: &AnnotatedSentence, out: &mut Vec<RuleMatch>) {
    for id in s.tree.node_ids() {
        let node = s.tree.node(id);
        if !node.label.starts_with("SBAR") || node.is_leaf() {
            continue;
        }
        let (start, end) = node.span;
        if start == 0 || s.tokens[start - 1].surface != "," {
            continue;
        }
        let first = &s.tokens[start];
        let wh_pos = matches!(first.pos.as_str(), "WP" | "WDT" | "WP$" | "WRB");
        let wh_word = matches!(lower(s, start).as_str(), "who" | "which" | "whom" | "whose");
        if wh_pos || wh_word {
            out.push(RuleMatch {
                rule: RuleId::NonrestrictiveRelcl,
                span: (start, end),
                node: None,
            });
        }
    }
}

/// Sentence-initial participial clause up to the first comma; lead sentences
/// only. The comma stays.
fn adverbial_clause_lead(s: &AnnotatedSentence, out: &mut Vec<RuleMatch>) {
    if !matches!(s.tokens[0].pos.as_str(), "VBG" | "VBN") {
        return;
    }
    let Some(comma) = (1..s.tokens.len()).find(|&i| s.tokens[i].surface == ",") else {
        return;
    };
    out.push(RuleMatch {
        rule: RuleId::AdverbialClauseLead,
        span: (0, comma),
        node: None,
    });
}

/// Maximal spans between matching parentheses, brackets included.
fn parenthetical(s: &AnnotatedSentence, out: &mut Vec<RuleMatch>) {
    let mut depth = 0usize;
    let mut open = 0usize;
    for (i, t) in s.tokens.iter().enumerate() {
        if is_open_paren(&t.surface) {
            if depth == 0 {
                open = i;
            }
            depth += 1;
        } else if is_close_paren(&t.surface) && depth > 0 {
            depth -= 1;
            if depth == 0 {
                out.push(RuleMatch {
                    rule: RuleId::Parenthetical,
                    span: (open, i + 1),
                    node: None,
                });
            }
        }
    }
}

/// Remove the union of all matched spans. Never returns an empty compression:
/// when the matches would delete everything, the original token indices come
/// back unchanged.
pub fn rule_compress(sentence: &AnnotatedSentence, is_lead: bool) -> Vec<usize> {
    let matches = match_rules(sentence, is_lead);
    let mut removed = vec![false; sentence.tokens.len()];
    for m in &matches {
        for slot in &mut removed[m.span.0..m.span.1] {
            *slot = true;
        }
    }
    let kept: Vec<usize> = removed
        .iter()
        .enumerate()
        .filter_map(|(i, &r)| (!r).then_some(i))
        .collect();
    if kept.is_empty() {
        (0..sentence.tokens.len()).collect()
    } else {
        kept
    }
}

/// Token-level re-check of the purely pattern-based rules (header and
/// parenthetical) on a bare token sequence, with the same span cap. Running
/// this over `rule_compress` output should find nothing: the pattern rules
/// are idempotent.
pub fn pattern_spans(surfaces: &[&str], is_lead: bool) -> Vec<(usize, usize)> {
    let mut spans = Vec::new();
    if is_lead {
        if let Some(dash) = surfaces.iter().position(|s| is_dash(s)) {
            if dash > 0 {
                let prefix = &surfaces[..dash];
                let has_month = prefix
                    .iter()
                    .any(|s| MONTHS.contains(&s.to_lowercase().as_str()));
                let has_source = (0..dash.saturating_sub(2))
                    .any(|i| is_open_paren(prefix[i]) && is_close_paren(surfaces[i + 2]));
                if has_month || has_source {
                    spans.push((0, dash + 1));
                }
            }
        }
    }
    let mut depth = 0usize;
    let mut open = 0usize;
    for (i, s) in surfaces.iter().enumerate() {
        if is_open_paren(s) {
            if depth == 0 {
                open = i;
            }
            depth += 1;
        } else if is_close_paren(s) && depth > 0 {
            depth -= 1;
            if depth == 0 {
                spans.push((open, i + 1));
            }
        }
    }
    spans.retain(|&(s, e)| e - s <= MAX_RULE_SPAN);
    spans
}

/// Tree nodes whose span lies entirely inside some rule match; the decoder
/// restricts these to the Remove label.
pub fn mark_nodes(sentence: &AnnotatedSentence, is_lead: bool) -> BTreeSet<NodeId> {
    let spans: Vec<(usize, usize)> = match_rules(sentence, is_lead)
        .iter()
        .map(|m| m.span)
        .collect();
    nodes_within_spans(&sentence.tree, &spans)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Self-contained sentence builder for rule tests: leaves carry POS and
    // surface, deps given as (head, rel) pairs.
    fn sent(tree: &str, deps: &[(i32, &str)]) -> AnnotatedSentence {
        let mut tree = crate::corpus::ptb::parse_ptb(tree).unwrap();
        tree.resolve_heads(crate::tree::default_head_rules());
        let tokens: Vec<crate::corpus::Token> = tree
            .leaves()
            .iter()
            .zip(deps.iter())
            .map(|(&leaf, &(head, rel))| {
                let node = tree.node(leaf);
                let surface = node.word.clone().unwrap();
                let lemma = surface.to_lowercase();
                let is_stopword = crate::corpus::stopwords::is_stopword(&surface);
                crate::corpus::Token {
                    surface,
                    lemma,
                    pos: node.label.clone(),
                    dep_head: head,
                    dep_rel: rel.to_string(),
                    is_stopword,
                }
            })
            .collect();
        assert_eq!(tokens.len(), deps.len(), "dep count mismatch");
        let s = AnnotatedSentence {
            tokens,
            tree,
            doc_id: "d".into(),
            position: 0,
            timestamp: None,
        };
        s.validate().unwrap();
        s
    }

    fn spans_of(matches: &[RuleMatch], rule: RuleId) -> Vec<(usize, usize)> {
        matches
            .iter()
            .filter(|m| m.rule == rule)
            .map(|m| m.span)
            .collect()
    }

    // "MOSCOW , October 19 ( Xinhua ) -- Russian federal troops Tuesday continued ."
    fn header_sentence() -> AnnotatedSentence {
        sent(
            "(S (FRAG (NP (NNP MOSCOW)) (, ,) (NP (NNP October) (CD 19)) \
              (PRN (-LRB- -LRB-) (NP (NNP Xinhua)) (-RRB- -RRB-)) (: --)) \
              (NP (JJ Russian) (JJ federal) (NNS troops)) \
              (NP (NNP Tuesday)) (VP (VBD continued)) (. .))",
            &[
                (12, "dep"),
                (0, "punct"),
                (0, "dep"),
                (2, "num"),
                (5, "punct"),
                (0, "dep"),
                (5, "punct"),
                (12, "punct"),
                (10, "amod"),
                (10, "amod"),
                (12, "nsubj"),
                (12, "nmod"),
                (-1, "root"),
                (12, "punct"),
            ],
        )
    }

    #[test]
    fn header_matches_dateline_prefix() {
        let s = header_sentence();
        let matches = match_rules(&s, true);
        assert_eq!(spans_of(&matches, RuleId::Header), vec![(0, 8)]);
        // Not a lead sentence: no header.
        let matches = match_rules(&s, false);
        assert!(spans_of(&matches, RuleId::Header).is_empty());
    }

    #[test]
    fn header_compress_keeps_body() {
        let s = header_sentence();
        let kept = rule_compress(&s, true);
        let words: Vec<&str> = kept.iter().map(|&i| s.tokens[i].surface.as_str()).collect();
        assert_eq!(
            words,
            vec!["Russian", "federal", "troops", "Tuesday", "continued", "."]
        );
    }

    #[test]
    fn relative_date_needs_temporal_relation() {
        // "The agency confirmed Tuesday that a case existed ."
        let s = sent(
            "(S (NP (DT The) (NN agency)) (VP (VBD confirmed) (NP (NNP Tuesday)) \
             (SBAR (IN that) (S (NP (DT a) (NN case)) (VP (VBD existed))))) (. .))",
            &[
                (1, "det"),
                (2, "nsubj"),
                (-1, "root"),
                (2, "npadvmod"),
                (7, "mark"),
                (6, "det"),
                (7, "nsubj"),
                (2, "ccomp"),
                (2, "punct"),
            ],
        );
        let matches = match_rules(&s, false);
        assert_eq!(spans_of(&matches, RuleId::RelativeDate), vec![(3, 4)]);
        // The "that" complement blocks the clause-initial attribution reading.
        assert!(spans_of(&matches, RuleId::Attribution).is_empty());

        let kept = rule_compress(&s, false);
        let words: Vec<&str> = kept.iter().map(|&i| s.tokens[i].surface.as_str()).collect();
        assert_eq!(
            words,
            vec![
                "The",
                "agency",
                "confirmed",
                "that",
                "a",
                "case",
                "existed",
                "."
            ]
        );
    }

    #[test]
    fn attribution_trailing_clause() {
        // "Warm water is fueling the phenomenon , the agency said ."
        let s = sent(
            "(S (S (NP (JJ Warm) (NN water)) (VP (VBZ is) (VP (VBG fueling) \
             (NP (DT the) (NN phenomenon))))) (, ,) (NP (DT the) (NN agency)) \
             (VP (VBD said)) (. .))",
            &[
                (1, "amod"),
                (3, "nsubj"),
                (3, "aux"),
                (9, "ccomp"),
                (5, "det"),
                (3, "dobj"),
                (9, "punct"),
                (8, "det"),
                (9, "nsubj"),
                (-1, "root"),
                (9, "punct"),
            ],
        );
        let matches = match_rules(&s, false);
        assert_eq!(spans_of(&matches, RuleId::Attribution), vec![(6, 10)]);
        let kept = rule_compress(&s, false);
        let words: Vec<&str> = kept.iter().map(|&i| s.tokens[i].surface.as_str()).collect();
        assert_eq!(
            words,
            vec!["Warm", "water", "is", "fueling", "the", "phenomenon", "."]
        );
    }

    #[test]
    fn lead_adverbial_keeps_comma() {
        // "Interestingly , the plan failed ."
        let s = sent(
            "(S (ADVP (RB Interestingly)) (, ,) (NP (DT the) (NN plan)) (VP (VBD failed)) (. .))",
            &[
                (4, "advmod"),
                (4, "punct"),
                (3, "det"),
                (4, "nsubj"),
                (-1, "root"),
                (4, "punct"),
            ],
        );
        let matches = match_rules(&s, false);
        assert_eq!(spans_of(&matches, RuleId::LeadAdverbial), vec![(0, 1)]);
        let kept = rule_compress(&s, false);
        let words: Vec<&str> = kept.iter().map(|&i| s.tokens[i].surface.as_str()).collect();
        assert_eq!(words, vec![",", "the", "plan", "failed", "."]);
    }

    #[test]
    fn appositive_after_title() {
        // "Prosecutor John OHara wanted a message ."
        let s = sent(
            "(S (NP (NP (NNP Prosecutor)) (NP (NNP John) (NNP OHara))) \
             (VP (VBD wanted) (NP (DT a) (NN message))) (. .))",
            &[
                (3, "nsubj"),
                (2, "compound"),
                (0, "appos"),
                (-1, "root"),
                (5, "det"),
                (3, "dobj"),
                (3, "punct"),
            ],
        );
        let matches = match_rules(&s, false);
        assert_eq!(spans_of(&matches, RuleId::NounAppositive), vec![(1, 3)]);
    }

    #[test]
    fn appositive_partial_overlap_not_marked() {
        let s = sent(
            "(S (NP (NP (NNP Prosecutor)) (NP (NNP John) (NNP OHara))) \
             (VP (VBD wanted) (NP (DT a) (NN message))) (. .))",
            &[
                (3, "nsubj"),
                (2, "compound"),
                (0, "appos"),
                (-1, "root"),
                (5, "det"),
                (3, "dobj"),
                (3, "punct"),
            ],
        );
        let marked = mark_nodes(&s, false);
        // The NP exactly covering "John OHara" is marked; the outer subject NP
        // (which only overlaps the match) is not.
        for id in s.tree.node_ids() {
            let span = s.tree.node(id).span;
            let inside = span.0 >= 1 && span.1 <= 3;
            assert_eq!(marked.contains(&id), inside, "span {span:?}");
        }
    }

    #[test]
    fn nonrestrictive_relative_clause() {
        // "Putin , who was born in Leningrad , was elected ."
        let s = sent(
            "(S (NP (NP (NNP Putin)) (, ,) (SBAR (WHNP (WP who)) \
             (S (VP (VBD was) (VP (VBN born) (PP (IN in) (NP (NNP Leningrad))))))) (, ,)) \
             (VP (VBD was) (VP (VBN elected))) (. .))",
            &[
                (9, "nsubjpass"),
                (0, "punct"),
                (3, "nsubjpass"),
                (0, "acl:relcl"),
                (3, "auxpass"),
                (3, "case"),
                (3, "nmod"),
                (0, "punct"),
                (9, "auxpass"),
                (-1, "root"),
                (9, "punct"),
            ],
        );
        let matches = match_rules(&s, false);
        assert_eq!(
            spans_of(&matches, RuleId::NonrestrictiveRelcl),
            vec![(2, 7)]
        );
    }

    #[test]
    fn relcl_over_cap_not_matched() {
        // 11-token relative clause exceeds the cap.
        let s = sent(
            "(S (NP (NP (NNP Putin)) (, ,) (SBAR (WHNP (WP who)) (S (VP (VBD was) \
             (VP (VBN born) (PP (IN on) (NP (NP (NNP October) (CD 7)) (, ,) (NP (CD 1952)))) \
             (PP (IN in) (NP (NNP Leningrad) (NNP Russia)))))))) (VP (VBD was) (VP (VBN elected))) (. .))",
            &[
                (14, "nsubjpass"),
                (0, "punct"),
                (4, "nsubjpass"),
                (4, "auxpass"),
                (0, "acl:relcl"),
                (6, "case"),
                (4, "nmod"),
                (6, "num"),
                (6, "punct"),
                (6, "appos"),
                (11, "case"),
                (4, "nmod"),
                (11, "flat"),
                (14, "auxpass"),
                (-1, "root"),
                (14, "punct"),
            ],
        );
        let clause_len = 11;
        assert!(clause_len > MAX_RULE_SPAN);
        let matches = match_rules(&s, false);
        assert!(spans_of(&matches, RuleId::NonrestrictiveRelcl).is_empty());
    }

    #[test]
    fn adverbial_clause_lead_only() {
        // "Starting in 1998 , California will require quotas ."
        let s = sent(
            "(S (S (VP (VBG Starting) (PP (IN in) (NP (CD 1998))))) (, ,) \
             (NP (NNP California)) (VP (MD will) (VP (VB require) (NP (NNS quotas)))) (. .))",
            &[
                (6, "advcl"),
                (2, "case"),
                (0, "nmod"),
                (6, "punct"),
                (6, "nsubj"),
                (6, "aux"),
                (-1, "root"),
                (6, "dobj"),
                (6, "punct"),
            ],
        );
        let lead = match_rules(&s, true);
        assert_eq!(spans_of(&lead, RuleId::AdverbialClauseLead), vec![(0, 3)]);
        let not_lead = match_rules(&s, false);
        assert!(spans_of(&not_lead, RuleId::AdverbialClauseLead).is_empty());
    }

    #[test]
    fn parenthetical_with_lrb_tokens() {
        // "He sold computers ( www.example.com ) ."
        let s = sent(
            "(S (NP (PRP He)) (VP (VBD sold) (NP (NNS computers)) \
             (PRN (-LRB- -LRB-) (NP (NN www.example.com)) (-RRB- -RRB-))) (. .))",
            &[
                (1, "nsubj"),
                (-1, "root"),
                (1, "dobj"),
                (4, "punct"),
                (1, "dep"),
                (4, "punct"),
                (1, "punct"),
            ],
        );
        let matches = match_rules(&s, false);
        assert_eq!(spans_of(&matches, RuleId::Parenthetical), vec![(3, 6)]);
        // The PRN node exactly covers the span and is attached to the match.
        let m = matches
            .iter()
            .find(|m| m.rule == RuleId::Parenthetical)
            .unwrap();
        assert!(m.node.is_some());
        assert_eq!(s.tree.node(m.node.unwrap()).label, "PRN");
    }

    #[test]
    fn zero_matches_is_identity() {
        let s = sent(
            "(S (NP (NN Malaria)) (VP (VBZ causes) (NP (NNS deaths))) (. .))",
            &[(1, "nsubj"), (-1, "root"), (1, "dobj"), (1, "punct")],
        );
        assert!(match_rules(&s, true).is_empty());
        assert_eq!(rule_compress(&s, true), vec![0, 1, 2, 3]);
    }

    #[test]
    fn compress_never_empties_sentence() {
        // The whole sentence is one parenthetical.
        let s = sent(
            "(PRN (-LRB- -LRB-) (NP (NN aside)) (-RRB- -RRB-))",
            &[(1, "punct"), (-1, "root"), (1, "punct")],
        );
        assert_eq!(rule_compress(&s, false), vec![0, 1, 2]);
    }

    #[test]
    fn multiple_rules_combine_as_set_difference() {
        let s = header_sentence();
        // Oracle: apply matches independently, intersect survivors.
        let matches = match_rules(&s, true);
        let mut survivors: BTreeSet<usize> = (0..s.tokens.len()).collect();
        for m in &matches {
            for i in m.span.0..m.span.1 {
                survivors.remove(&i);
            }
        }
        let kept = rule_compress(&s, true);
        assert_eq!(kept, survivors.into_iter().collect::<Vec<_>>());
    }

    #[test]
    fn all_spans_within_cap() {
        for s in [header_sentence()] {
            for m in match_rules(&s, true) {
                assert!(m.span.1 - m.span.0 <= MAX_RULE_SPAN);
            }
        }
    }
}
