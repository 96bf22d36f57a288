//! Automatic evaluation: ROUGE-N, ROUGE-SU4, compression rate, unigram
//! precision/recall/F1, and a paired t-test.
//!
//! This is a from-scratch reimplementation, not byte-compatible with the
//! reference ROUGE toolkit: no stemming, no bootstrap resampling, and
//! multiple references are averaged per reference. Skip-bigrams pair tokens
//! at positional distance at most four. Numbers are comparable within this
//! artifact, not across toolkits. Tokens are compared as given; callers that
//! want case-insensitive scores lowercase first.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};

/// Maximum positional distance between the two tokens of a skip-bigram.
pub const SKIP_DISTANCE: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrfScores {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl PrfScores {
    fn from_counts(overlap: f64, candidate_units: f64, reference_units: f64) -> PrfScores {
        let precision = if candidate_units > 0.0 {
            overlap / candidate_units
        } else {
            0.0
        };
        let recall = if reference_units > 0.0 {
            overlap / reference_units
        } else {
            0.0
        };
        PrfScores {
            precision,
            recall,
            f1: harmonic(precision, recall),
        }
    }

    fn mean(scores: &[PrfScores]) -> PrfScores {
        let n = scores.len() as f64;
        PrfScores {
            precision: scores.iter().map(|s| s.precision).sum::<f64>() / n,
            recall: scores.iter().map(|s| s.recall).sum::<f64>() / n,
            f1: scores.iter().map(|s| s.f1).sum::<f64>() / n,
        }
    }
}

fn harmonic(p: f64, r: f64) -> f64 {
    if p + r > 0.0 {
        2.0 * p * r / (p + r)
    } else {
        0.0
    }
}

fn ngram_counts(tokens: &[String], n: usize) -> HashMap<&[String], u64> {
    let mut counts: HashMap<&[String], u64> = HashMap::new();
    if tokens.len() >= n {
        for gram in tokens.windows(n) {
            *counts.entry(gram).or_insert(0) += 1;
        }
    }
    counts
}

fn clipped_overlap<K: std::hash::Hash + Eq>(
    candidate: &HashMap<K, u64>,
    reference: &HashMap<K, u64>,
) -> u64 {
    candidate
        .iter()
        .map(|(gram, &c)| reference.get(gram).copied().unwrap_or(0).min(c))
        .sum()
}

/// Clipped n-gram precision/recall/F1 against one or more references,
/// averaged per reference. A candidate shorter than `n` has zero overlap and
/// well-defined zero scores.
pub fn rouge_n(candidate: &[String], references: &[Vec<String>], n: usize) -> Result<PrfScores> {
    if n < 1 {
        return Err(Error::validation("rouge_n needs n >= 1"));
    }
    if references.is_empty() {
        return Err(Error::validation("rouge_n needs at least one reference"));
    }
    let cand_counts = ngram_counts(candidate, n);
    let cand_total: u64 = cand_counts.values().sum();
    let per_ref: Vec<PrfScores> = references
        .iter()
        .map(|reference| {
            let ref_counts = ngram_counts(reference, n);
            let ref_total: u64 = ref_counts.values().sum();
            let overlap = clipped_overlap(&cand_counts, &ref_counts);
            PrfScores::from_counts(overlap as f64, cand_total as f64, ref_total as f64)
        })
        .collect();
    Ok(PrfScores::mean(&per_ref))
}

/// Skip-bigram units (distance <= 4) pooled with unigrams.
fn su4_units(tokens: &[String]) -> HashMap<(String, Option<String>), u64> {
    let mut counts: HashMap<(String, Option<String>), u64> = HashMap::new();
    for (i, tok) in tokens.iter().enumerate() {
        *counts.entry((tok.clone(), None)).or_insert(0) += 1;
        for second in tokens.iter().skip(i + 1).take(SKIP_DISTANCE) {
            *counts
                .entry((tok.clone(), Some(second.clone())))
                .or_insert(0) += 1;
        }
    }
    counts
}

/// ROUGE-SU4: pooled unigram and skip-bigram overlap, clipped, averaged over
/// references.
pub fn rouge_su4(candidate: &[String], references: &[Vec<String>]) -> Result<PrfScores> {
    if references.is_empty() {
        return Err(Error::validation("rouge_su4 needs at least one reference"));
    }
    let cand_counts = su4_units(candidate);
    let cand_total: u64 = cand_counts.values().sum();
    let per_ref: Vec<PrfScores> = references
        .iter()
        .map(|reference| {
            let ref_counts = su4_units(reference);
            let ref_total: u64 = ref_counts.values().sum();
            let overlap = clipped_overlap(&cand_counts, &ref_counts);
            PrfScores::from_counts(overlap as f64, cand_total as f64, ref_total as f64)
        })
        .collect();
    Ok(PrfScores::mean(&per_ref))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompressionScore {
    /// Proportion of source words preserved.
    pub c_rate: f64,
    pub uni_precision: f64,
    pub uni_recall: f64,
    pub uni_f1: f64,
    /// Set when the gold keep set was empty and recall is reported as zero.
    pub flagged: bool,
}

/// Token-index precision/recall of a predicted compression against a gold
/// keep mask, plus the compression rate.
pub fn compression_metrics(predicted: &[usize], gold_mask: &[bool]) -> Result<CompressionScore> {
    let n = gold_mask.len();
    if let Some(&bad) = predicted.iter().find(|&&i| i >= n) {
        return Err(Error::validation(format!(
            "predicted index {bad} out of range for {n} tokens"
        )));
    }
    let gold: Vec<usize> = gold_mask
        .iter()
        .enumerate()
        .filter_map(|(i, &k)| k.then_some(i))
        .collect();
    let predicted_set: std::collections::BTreeSet<usize> = predicted.iter().copied().collect();
    let overlap = gold.iter().filter(|i| predicted_set.contains(i)).count() as f64;
    let c_rate = if n > 0 {
        predicted_set.len() as f64 / n as f64
    } else {
        0.0
    };
    let precision = if !predicted_set.is_empty() {
        overlap / predicted_set.len() as f64
    } else {
        0.0
    };
    let flagged = gold.is_empty();
    let recall = if !gold.is_empty() {
        overlap / gold.len() as f64
    } else {
        0.0
    };
    Ok(CompressionScore {
        c_rate,
        uni_precision: precision,
        uni_recall: recall,
        uni_f1: harmonic(precision, recall),
        flagged,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TTestResult {
    pub t: f64,
    pub p: f64,
    /// Set for degenerate inputs: all-zero differences (p forced to 1) or
    /// zero variance with nonzero mean (p forced to 0).
    pub flagged: bool,
}

/// Two-tailed paired t-test on per-topic score pairs.
pub fn paired_t_test(scores_a: &[f64], scores_b: &[f64]) -> Result<TTestResult> {
    if scores_a.len() != scores_b.len() {
        return Err(Error::validation("paired t-test needs equal-length lists"));
    }
    let n = scores_a.len();
    if n < 2 {
        return Err(Error::validation("paired t-test needs at least 2 pairs"));
    }
    let diffs: Vec<f64> = scores_a
        .iter()
        .zip(scores_b.iter())
        .map(|(a, b)| a - b)
        .collect();
    let mean = diffs.iter().sum::<f64>() / n as f64;
    let var = diffs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (n as f64 - 1.0);
    if var == 0.0 {
        return Ok(if mean == 0.0 {
            TTestResult {
                t: 0.0,
                p: 1.0,
                flagged: true,
            }
        } else {
            TTestResult {
                t: if mean > 0.0 {
                    f64::INFINITY
                } else {
                    f64::NEG_INFINITY
                },
                p: 0.0,
                flagged: true,
            }
        });
    }
    let t = mean / (var / n as f64).sqrt();
    let dist = StudentsT::new(0.0, 1.0, (n - 1) as f64)
        .map_err(|e| Error::validation(format!("t distribution: {e}")))?;
    let p = (2.0 * (1.0 - dist.cdf(t.abs()))).clamp(0.0, 1.0);
    Ok(TTestResult {
        t,
        p,
        flagged: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<String> {
        s.split_whitespace().map(str::to_string).collect()
    }

    #[test]
    fn identical_candidate_scores_one() {
        let r = rouge_n(&toks("a b c d"), &[toks("a b c d")], 2).unwrap();
        assert_eq!(r.recall, 1.0);
        assert_eq!(r.precision, 1.0);
        assert_eq!(r.f1, 1.0);
        let r1 = rouge_n(&toks("x y z w q"), &[toks("x y z w q")], 1).unwrap();
        assert_eq!(r1.recall, 1.0);
    }

    #[test]
    fn disjoint_bigrams_score_zero() {
        let r = rouge_n(&toks("a b c"), &[toks("c d e")], 2).unwrap();
        assert_eq!(r.recall, 0.0);
        assert_eq!(r.precision, 0.0);
        assert_eq!(r.f1, 0.0);
    }

    #[test]
    fn hand_counted_bigram_recall() {
        // Overlapping bigrams: "the cat", "on the", "the mat" = 3 of 5.
        let r = rouge_n(
            &toks("the cat sat on the mat"),
            &[toks("the cat lay on the mat")],
            2,
        )
        .unwrap();
        assert!((r.recall - 0.6).abs() < 1e-12);
        assert!((r.precision - 0.6).abs() < 1e-12);
    }

    #[test]
    fn short_candidate_is_zero_not_nan() {
        let r = rouge_n(&toks("a"), &[toks("a b c")], 2).unwrap();
        assert_eq!(r.precision, 0.0);
        assert_eq!(r.recall, 0.0);
        assert_eq!(r.f1, 0.0);
    }

    #[test]
    fn multiple_references_average() {
        let r = rouge_n(&toks("a b"), &[toks("a b"), toks("x y")], 2).unwrap();
        assert!((r.recall - 0.5).abs() < 1e-12);
    }

    #[test]
    fn su4_identity_and_unit_enumeration() {
        let r = rouge_su4(&toks("a b c d e f"), &[toks("a b c d e f")]).unwrap();
        assert_eq!(r.recall, 1.0);
        // "a b c": unigrams {a,b,c} + pairs {ab,ac,bc} = 6 units.
        let units = su4_units(&toks("a b c"));
        assert_eq!(units.values().sum::<u64>(), 6);
        assert_eq!(units.len(), 6);
    }

    #[test]
    fn su4_respects_skip_distance() {
        // In "a b c d e f", pair (a, f) is 5 apart: not a unit.
        let units = su4_units(&toks("a b c d e f"));
        assert!(units.contains_key(&("a".to_string(), Some("e".to_string()))));
        assert!(!units.contains_key(&("a".to_string(), Some("f".to_string()))));
    }

    #[test]
    fn compression_metrics_identity_and_mixed() {
        let gold = [true, true, false, false];
        let perfect = compression_metrics(&[0, 1], &gold).unwrap();
        assert_eq!(perfect.uni_precision, 1.0);
        assert_eq!(perfect.uni_recall, 1.0);
        assert_eq!(perfect.uni_f1, 1.0);
        assert_eq!(perfect.c_rate, 0.5);

        // Keep everything: recall 1, precision 0.5.
        let all = compression_metrics(&[0, 1, 2, 3], &gold).unwrap();
        assert_eq!(all.uni_recall, 1.0);
        assert_eq!(all.uni_precision, 0.5);

        // 10 tokens, predicted 7, gold 6, intersection 5.
        let gold10 = [
            true, true, true, true, true, true, false, false, false, false,
        ];
        let pred: Vec<usize> = vec![0, 1, 2, 3, 4, 7, 8];
        let m = compression_metrics(&pred, &gold10).unwrap();
        assert!((m.uni_precision - 5.0 / 7.0).abs() < 1e-12);
        assert!((m.uni_recall - 5.0 / 6.0).abs() < 1e-12);
        assert!((m.c_rate - 0.7).abs() < 1e-12);
    }

    #[test]
    fn empty_gold_flags_recall() {
        let m = compression_metrics(&[0], &[false, false]).unwrap();
        assert!(m.flagged);
        assert_eq!(m.uni_recall, 0.0);
    }

    #[test]
    fn t_test_degenerate_cases() {
        let same = [0.4, 0.5, 0.6];
        let r = paired_t_test(&same, &same).unwrap();
        assert!(r.flagged);
        assert_eq!(r.t, 0.0);
        assert_eq!(r.p, 1.0);

        let a: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let b: Vec<f64> = (0..10).map(|i| i as f64 + 0.5).collect();
        let r = paired_t_test(&b, &a).unwrap();
        assert!(r.flagged);
        assert!(r.t.is_infinite() && r.t > 0.0);
        assert_eq!(r.p, 0.0);
    }

    #[test]
    fn t_test_matches_reference_values() {
        // Reference t and p computed independently with scipy.stats.ttest_rel.
        let a = [0.52, 0.61, 0.43, 0.58, 0.49, 0.55, 0.62, 0.47];
        let b = [0.48, 0.55, 0.44, 0.51, 0.50, 0.52, 0.57, 0.44];
        let r = paired_t_test(&a, &b).unwrap();
        assert!((r.t - 3.101271703489037).abs() < 1e-4, "t={}", r.t);
        assert!((r.p - 0.01729143138533089).abs() < 1e-4, "p={}", r.p);
        assert!(!r.flagged);
    }

    #[test]
    fn swapped_identical_pair_is_symmetric() {
        let cand = toks("x y z");
        let scores = rouge_n(&cand, std::slice::from_ref(&cand), 1).unwrap();
        assert_eq!(scores.precision, scores.recall);
        assert_eq!(scores.f1, 1.0);
    }
}
