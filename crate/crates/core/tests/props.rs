//! Property tests over random trees, labelings, texts, and corpora.

use std::collections::BTreeSet;

use proptest::prelude::*;
use sumtrim::corpus::Token;
use sumtrim::eval::{rouge_n, rouge_su4};
use sumtrim::lm::lm_train;
use sumtrim::rules::{match_rules, pattern_spans, rule_compress, MAX_RULE_SPAN};
use sumtrim::scorers::{score_importance, score_query, score_redundancy, SumBasicTable};
use sumtrim::tree::{head_driven_order, postorder, realize, NodeLabel};
use sumtrim_testsupport::{enumerate_labelings, random_sentence, rule_fixtures, DetRng};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn traversals_visit_children_before_parents(seed in any::<u64>(), nodes in 1usize..14) {
        let mut rng = DetRng::new(seed);
        let sentence = random_sentence(&mut rng, nodes);
        let tree = &sentence.tree;
        let post = postorder(tree);
        let head = head_driven_order(tree).unwrap();
        for order in [&post, &head] {
            for id in tree.node_ids() {
                for &c in &tree.node(id).children {
                    prop_assert!(order.position(c) < order.position(id));
                }
            }
        }
        // Same node sets: both are permutations of all nodes.
        let mut a: Vec<usize> = post.nodes().iter().map(|n| n.index()).collect();
        let mut b: Vec<usize> = head.nodes().iter().map(|n| n.index()).collect();
        a.sort_unstable();
        b.sort_unstable();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a, (0..tree.len()).collect::<Vec<_>>());
    }

    #[test]
    fn realize_matches_domination_oracle(seed in any::<u64>(), nodes in 1usize..10) {
        let mut rng = DetRng::new(seed);
        let sentence = random_sentence(&mut rng, nodes);
        let tree = &sentence.tree;
        let order = postorder(tree);
        for labels in enumerate_labelings(tree, &order, &BTreeSet::new()) {
            let realized = realize(tree, &labels).unwrap();
            // Oracle: a token survives iff no Remove node dominates it.
            let mut removed_tokens = BTreeSet::new();
            for id in tree.node_ids() {
                if labels.get(id) == Some(NodeLabel::Remove) {
                    let (s, e) = tree.node(id).span;
                    removed_tokens.extend(s..e);
                }
            }
            let expected: Vec<usize> = (0..tree.leaf_count())
                .filter(|t| !removed_tokens.contains(t))
                .collect();
            prop_assert_eq!(&realized, &expected);
        }
    }

    #[test]
    fn rouge_matches_greedy_matching_oracle(
        cand in proptest::collection::vec(0u8..5, 0..10),
        refs in proptest::collection::vec(proptest::collection::vec(0u8..5, 1..10), 1..3),
        n in 1usize..3,
    ) {
        let cand: Vec<String> = cand.iter().map(|c| format!("w{c}")).collect();
        let refs: Vec<Vec<String>> = refs
            .iter()
            .map(|r| r.iter().map(|c| format!("w{c}")).collect())
            .collect();
        let got = rouge_n(&cand, &refs, n).unwrap();
        // Oracle: greedy bipartite matching of n-gram occurrences.
        let mut precision = 0.0;
        let mut recall = 0.0;
        for reference in &refs {
            let mut pool: Vec<&[String]> = reference.windows(n).collect();
            let mut matched = 0usize;
            for gram in cand.windows(n) {
                if let Some(pos) = pool.iter().position(|g| *g == gram) {
                    pool.remove(pos);
                    matched += 1;
                }
            }
            let cand_total = cand.len().saturating_sub(n - 1);
            let ref_total = reference.len().saturating_sub(n - 1);
            precision += if cand_total > 0 { matched as f64 / cand_total as f64 } else { 0.0 };
            recall += if ref_total > 0 { matched as f64 / ref_total as f64 } else { 0.0 };
        }
        precision /= refs.len() as f64;
        recall /= refs.len() as f64;
        prop_assert!((got.precision - precision).abs() < 1e-12);
        prop_assert!((got.recall - recall).abs() < 1e-12);
    }

    #[test]
    fn su4_matches_enumeration_oracle(
        cand in proptest::collection::vec(0u8..4, 0..8),
        reference in proptest::collection::vec(0u8..4, 1..8),
    ) {
        let cand: Vec<String> = cand.iter().map(|c| format!("w{c}")).collect();
        let reference: Vec<String> = reference.iter().map(|c| format!("w{c}")).collect();
        let got = rouge_su4(&cand, std::slice::from_ref(&reference)).unwrap();

        // Oracle: enumerate unit lists and greedily match.
        fn units(tokens: &[String]) -> Vec<String> {
            let mut out = Vec::new();
            for (i, t) in tokens.iter().enumerate() {
                out.push(format!("u:{t}"));
                for j in (i + 1)..tokens.len().min(i + 5) {
                    out.push(format!("s:{t}:{}", tokens[j]));
                }
            }
            out
        }
        let cand_units = units(&cand);
        let mut pool = units(&reference);
        let ref_total = pool.len();
        let mut matched = 0usize;
        for u in &cand_units {
            if let Some(pos) = pool.iter().position(|p| p == u) {
                pool.remove(pos);
                matched += 1;
            }
        }
        let p = if cand_units.is_empty() { 0.0 } else { matched as f64 / cand_units.len() as f64 };
        let r = if ref_total == 0 { 0.0 } else { matched as f64 / ref_total as f64 };
        prop_assert!((got.precision - p).abs() < 1e-12, "p {} vs {}", got.precision, p);
        prop_assert!((got.recall - r).abs() < 1e-12, "r {} vs {}", got.recall, r);
    }

    #[test]
    fn component_scores_stay_in_range(
        lemmas in proptest::collection::vec(0u8..6, 0..10),
        query in proptest::collection::vec(0u8..6, 0..6),
        summary in proptest::collection::vec(0u8..6, 0..6),
        stops in proptest::collection::vec(any::<bool>(), 0..10),
    ) {
        let tokens: Vec<Token> = lemmas
            .iter()
            .enumerate()
            .map(|(i, &l)| Token {
                surface: format!("w{l}"),
                lemma: format!("w{l}"),
                pos: "NN".into(),
                dep_head: -1,
                dep_rel: "root".into(),
                is_stopword: stops.get(i).copied().unwrap_or(false),
            })
            .collect();
        let words: Vec<&Token> = tokens.iter().collect();
        let q: BTreeSet<String> = query.iter().map(|l| format!("w{l}")).collect();
        let c: BTreeSet<String> = summary.iter().map(|l| format!("w{l}")).collect();
        let table = SumBasicTable::default();
        let sq = score_query(&words, &q);
        let si = score_importance(&words, &table);
        let sr = score_redundancy(&words, &c);
        prop_assert!((0.0..=1.0).contains(&sq));
        prop_assert!((0.0..=1.0).contains(&si));
        prop_assert!((0.0..=1.0).contains(&sr));
    }

    #[test]
    fn lm_interior_tokens_score_identically_after_concatenation(
        a in proptest::collection::vec(0u8..4, 1..6),
        b in proptest::collection::vec(0u8..4, 3..8),
    ) {
        let order = 3usize;
        let corpus: Vec<Vec<String>> = vec![
            "w0 w1 w2 w3".split_whitespace().map(str::to_string).collect(),
            "w1 w2 w0".split_whitespace().map(str::to_string).collect(),
        ];
        let model = lm_train(&corpus, order, 0.4).unwrap();
        let a: Vec<String> = a.iter().map(|c| format!("w{c}")).collect();
        let b: Vec<String> = b.iter().map(|c| format!("w{c}")).collect();
        let mut joined = a.clone();
        joined.extend(b.iter().cloned());
        // Interior tokens of `b` (full context inside `b`) score the same
        // whether or not `a` precedes it.
        for t in (order - 1)..b.len() {
            let ctx_alone: Vec<&str> = b[..t].iter().map(String::as_str).collect();
            let pos = a.len() + t;
            let ctx_joined: Vec<&str> = joined[..pos].iter().map(String::as_str).collect();
            let alone = model.score(&ctx_alone, &b[t]);
            let after = model.score(&ctx_joined, &b[t]);
            prop_assert!((alone - after).abs() < 1e-15);
        }
    }
}

#[test]
fn rule_invariants_on_fixture_corpus() {
    for fixture in rule_fixtures() {
        let matches = match_rules(&fixture.sentence, fixture.is_lead);
        let n = fixture.sentence.tokens.len();
        for m in &matches {
            assert!(m.span.1 - m.span.0 <= MAX_RULE_SPAN, "{}", fixture.name);
            assert!(m.span.0 < m.span.1 && m.span.1 <= n);
        }
        // Compression output is a strictly increasing subsequence of 0..n.
        let kept = rule_compress(&fixture.sentence, fixture.is_lead);
        assert!(kept.windows(2).all(|w| w[0] < w[1]));
        assert!(kept.iter().all(|&i| i < n));
        // Marked node spans are inside the union of match spans.
        let marked = sumtrim::rules::mark_nodes(&fixture.sentence, fixture.is_lead);
        for id in marked {
            let span = fixture.sentence.tree.node(id).span;
            assert!(
                matches
                    .iter()
                    .any(|m| m.span.0 <= span.0 && span.1 <= m.span.1),
                "{}: node span {span:?} outside all matches",
                fixture.name
            );
        }
    }
}

#[test]
fn pattern_rules_are_idempotent_at_token_level() {
    // Re-checking the pattern-based rules (header, parenthetical) on the
    // compressed token sequence finds nothing new to remove.
    for fixture in rule_fixtures() {
        let kept = rule_compress(&fixture.sentence, fixture.is_lead);
        let surfaces: Vec<&str> = kept
            .iter()
            .map(|&i| fixture.sentence.tokens[i].surface.as_str())
            .collect();
        let spans = pattern_spans(&surfaces, fixture.is_lead);
        assert!(
            spans.is_empty(),
            "{}: token-level re-check found {spans:?} in {surfaces:?}",
            fixture.name
        );
    }
}
