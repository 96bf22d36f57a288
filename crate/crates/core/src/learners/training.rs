//! Training-set construction for the learned compressors: turn token-mask
//! compression examples into constituent-level MaxEnt examples (with gold
//! label history for the context-aware and head-driven variants) and
//! token-level CRF sequences.

use crate::corpus::CompressionExample;
use crate::decoder::traversal_for;
use crate::error::Result;
use crate::learners::crf::mask_to_labels;
use crate::learners::{
    constituent_features, token_features, BioLabel, ContextVariant, FeatureVector,
};
use crate::rules::match_rules;
use crate::tree::{Labeling, NodeId, NodeLabel};

/// Gold constituent labels induced by a keep mask: fully kept subtrees are
/// Retained, fully dropped ones Removed, mixed ones Partial. The result is
/// always a complete compatible labeling.
pub fn gold_node_labels(example: &CompressionExample) -> Vec<(NodeId, NodeLabel)> {
    let tree = &example.sentence.tree;
    tree.node_ids()
        .map(|id| {
            let (start, end) = tree.node(id).span;
            let kept = example.keep_mask[start..end].iter().filter(|&&k| k).count();
            let label = if kept == end - start {
                NodeLabel::Retain
            } else if kept == 0 {
                NodeLabel::Remove
            } else {
                NodeLabel::Partial
            };
            (id, label)
        })
        .collect()
}

/// Constituent-level training examples for the tree compressor. Labels are
/// revealed in the search variant's traversal order, so the history features
/// seen at training time match what decoding can observe.
pub fn tree_examples(
    corpus: &[CompressionExample],
    search: ContextVariant,
) -> Result<Vec<(FeatureVector, String)>> {
    let mut out = Vec::new();
    for example in corpus {
        let sentence = &example.sentence;
        let order = traversal_for(&sentence.tree, search)?;
        let matches = match_rules(sentence, sentence.position == 0);
        let gold: std::collections::BTreeMap<NodeId, NodeLabel> =
            gold_node_labels(example).into_iter().collect();
        let mut labeling = Labeling::empty(&sentence.tree);
        for &node in order.nodes() {
            let label = gold[&node];
            labeling.set(node, label);
            let fv =
                constituent_features(sentence, &matches, node, search, Some((&labeling, &order)));
            out.push((fv, label.name().to_string()));
        }
    }
    Ok(out)
}

/// Token-level BIO sequences for the CRF compressor.
pub fn sequence_examples(
    corpus: &[CompressionExample],
) -> Vec<(Vec<FeatureVector>, Vec<BioLabel>)> {
    corpus
        .iter()
        .map(|example| {
            let sentence = &example.sentence;
            let matches = match_rules(sentence, sentence.position == 0);
            let fvs: Vec<FeatureVector> = (0..sentence.tokens.len())
                .map(|i| token_features(sentence, &matches, i))
                .collect();
            (fvs, mask_to_labels(&example.keep_mask))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::ptb::parse_ptb;
    use crate::corpus::{AnnotatedSentence, Token};
    use crate::tree::compatible;

    fn example(mask: &[bool]) -> CompressionExample {
        let mut tree = parse_ptb("(S (NP (DT a) (NN b)) (VP (VBZ c) (NP (NN d))))").unwrap();
        tree.resolve_heads(crate::tree::default_head_rules());
        let tokens: Vec<Token> = tree
            .leaves()
            .iter()
            .enumerate()
            .map(|(i, &leaf)| Token {
                surface: tree.node(leaf).word.clone().unwrap(),
                lemma: tree.node(leaf).word.clone().unwrap(),
                pos: tree.node(leaf).label.clone(),
                dep_head: if i == 0 { -1 } else { 0 },
                dep_rel: "dep".into(),
                is_stopword: false,
            })
            .collect();
        CompressionExample {
            sentence: AnnotatedSentence {
                tokens,
                tree,
                doc_id: "d".into(),
                position: 1,
                timestamp: None,
            },
            keep_mask: mask.to_vec(),
        }
    }

    #[test]
    fn gold_labels_form_a_compatible_labeling() {
        for mask in [
            vec![true, true, true, true],
            vec![false, false, false, false],
            vec![true, true, false, false],
            vec![true, false, true, false],
        ] {
            let ex = example(&mask);
            let order = crate::tree::postorder(&ex.sentence.tree);
            let gold: std::collections::BTreeMap<NodeId, NodeLabel> =
                gold_node_labels(&ex).into_iter().collect();
            let mut partial = Labeling::empty(&ex.sentence.tree);
            for &node in order.nodes() {
                assert!(
                    compatible(gold[&node], node, &ex.sentence.tree, &partial),
                    "mask {mask:?}: {node:?} -> {:?}",
                    gold[&node]
                );
                partial.set(node, gold[&node]);
            }
            // Realization reproduces the mask.
            let kept = crate::tree::realize(&ex.sentence.tree, &partial).unwrap();
            let expected: Vec<usize> = mask
                .iter()
                .enumerate()
                .filter_map(|(i, &k)| k.then_some(i))
                .collect();
            assert_eq!(kept, expected);
        }
    }

    #[test]
    fn example_counts_match_nodes_and_tokens() {
        let ex = example(&[true, true, false, false]);
        let tree_ex = tree_examples(std::slice::from_ref(&ex), ContextVariant::Head).unwrap();
        assert_eq!(tree_ex.len(), ex.sentence.tree.len());
        let seqs = sequence_examples(std::slice::from_ref(&ex));
        assert_eq!(seqs.len(), 1);
        assert_eq!(seqs[0].0.len(), ex.sentence.tokens.len());
    }
}
