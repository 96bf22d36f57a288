//! Linear-chain CRF over BIO keep/delete labels, with rule-constrained
//! Viterbi decoding.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{ascend, logsumexp, FeatureIndex, FeatureVector, TrainLog, TrainOptions};
use crate::error::{Error, Result};

/// BIO tag set. The declaration order doubles as the decode tie-break order:
/// B-RETAIN < I-RETAIN < O.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BioLabel {
    BeginRetain,
    InsideRetain,
    Outside,
}

pub const N_LABELS: usize = 3;

impl BioLabel {
    pub const ALL: [BioLabel; N_LABELS] = [
        BioLabel::BeginRetain,
        BioLabel::InsideRetain,
        BioLabel::Outside,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BioLabel::BeginRetain => "B-RETAIN",
            BioLabel::InsideRetain => "I-RETAIN",
            BioLabel::Outside => "O",
        }
    }

    pub fn parse(s: &str) -> Result<BioLabel> {
        match s {
            "B-RETAIN" => Ok(BioLabel::BeginRetain),
            "I-RETAIN" => Ok(BioLabel::InsideRetain),
            "O" => Ok(BioLabel::Outside),
            other => Err(Error::validation(format!(
                "label {other:?} outside the BIO set"
            ))),
        }
    }

    fn idx(self) -> usize {
        self as usize
    }

    /// A token is kept when tagged B-RETAIN or I-RETAIN.
    pub fn keeps_token(self) -> bool {
        self != BioLabel::Outside
    }
}

/// Tag a keep mask with BIO labels: the first token of each kept run is
/// B-RETAIN, continuations are I-RETAIN, dropped tokens are O.
pub fn mask_to_labels(mask: &[bool]) -> Vec<BioLabel> {
    let mut prev_kept = false;
    mask.iter()
        .map(|&keep| {
            let label = match (keep, prev_kept) {
                (true, false) => BioLabel::BeginRetain,
                (true, true) => BioLabel::InsideRetain,
                (false, _) => BioLabel::Outside,
            };
            prev_kept = keep;
            label
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct CrfModel {
    features: FeatureIndex,
    bias: [f64; N_LABELS],
    /// Label-major state weights, `state[label * n_features + feature]`.
    state: Vec<f64>,
    /// `trans[prev][next]`.
    trans: [[f64; N_LABELS]; N_LABELS],
    l2: f64,
}

/// One vectorized position: projected features and the gold label index.
type VectorizedPosition = (Vec<(usize, f64)>, usize);

/// Vectorized training problem; exposes the objective and gradient at a
/// parameter point for training and finite-difference checks.
///
/// Parameter layout: `[bias(3) | state(3 x features) | trans(3 x 3)]`.
#[derive(Debug)]
pub struct CrfProblem {
    features: FeatureIndex,
    sequences: Vec<Vec<VectorizedPosition>>,
}

impl CrfProblem {
    pub fn new(sequences: &[(Vec<FeatureVector>, Vec<BioLabel>)]) -> Result<CrfProblem> {
        if sequences.is_empty() {
            return Err(Error::validation("no training sequences"));
        }
        let mut names = BTreeSet::new();
        for (fvs, labels) in sequences {
            if fvs.is_empty() {
                return Err(Error::validation("empty training sequence"));
            }
            if fvs.len() != labels.len() {
                return Err(Error::validation(format!(
                    "sequence has {} positions but {} labels",
                    fvs.len(),
                    labels.len()
                )));
            }
            for fv in fvs {
                fv.ensure_finite()?;
                for name in fv.names() {
                    names.insert(name.to_string());
                }
            }
        }
        let features = FeatureIndex::from_names(names);
        let vectorized = sequences
            .iter()
            .map(|(fvs, labels)| {
                fvs.iter()
                    .zip(labels.iter())
                    .map(|(fv, l)| (features.project(fv), l.idx()))
                    .collect()
            })
            .collect();
        Ok(CrfProblem {
            features,
            sequences: vectorized,
        })
    }

    pub fn param_len(&self) -> usize {
        N_LABELS + N_LABELS * self.features.len() + N_LABELS * N_LABELS
    }

    fn split<'a>(&self, params: &'a [f64]) -> (&'a [f64], &'a [f64], &'a [f64]) {
        let f = self.features.len();
        let (bias, rest) = params.split_at(N_LABELS);
        let (state, trans) = rest.split_at(N_LABELS * f);
        (bias, state, trans)
    }

    fn emissions(
        &self,
        bias: &[f64],
        state: &[f64],
        seq: &[(Vec<(usize, f64)>, usize)],
    ) -> Vec<[f64; N_LABELS]> {
        let f = self.features.len();
        seq.iter()
            .map(|(fv, _)| {
                let mut row = [0.0; N_LABELS];
                for (y, slot) in row.iter_mut().enumerate() {
                    let mut s = bias[y];
                    for &(i, v) in fv {
                        s += state[y * f + i] * v;
                    }
                    *slot = s;
                }
                row
            })
            .collect()
    }

    /// Regularized sequence log-likelihood and gradient. L2 applies to state
    /// and transition weights, not the intercepts.
    pub fn objective_grad(&self, params: &[f64], l2: f64) -> (f64, Vec<f64>) {
        let f = self.features.len();
        assert_eq!(params.len(), self.param_len());
        let (bias, state, trans) = self.split(params);
        let trans_at = |a: usize, b: usize| trans[a * N_LABELS + b];
        let mut obj = 0.0;
        let mut grad = vec![0.0; params.len()];
        let state_off = N_LABELS;
        let trans_off = N_LABELS + N_LABELS * f;

        for seq in &self.sequences {
            let n = seq.len();
            let emit = self.emissions(bias, state, seq);

            // Gold path score.
            let mut gold = emit[0][seq[0].1];
            for t in 1..n {
                gold += trans_at(seq[t - 1].1, seq[t].1) + emit[t][seq[t].1];
            }

            // Forward/backward in log space.
            let mut alpha = vec![[0.0f64; N_LABELS]; n];
            alpha[0] = emit[0];
            for t in 1..n {
                for y in 0..N_LABELS {
                    let parts: Vec<f64> = (0..N_LABELS)
                        .map(|p| alpha[t - 1][p] + trans_at(p, y))
                        .collect();
                    alpha[t][y] = emit[t][y] + logsumexp(&parts);
                }
            }
            let logz = logsumexp(&alpha[n - 1]);
            obj += gold - logz;

            let mut beta = vec![[0.0f64; N_LABELS]; n];
            for t in (0..n.saturating_sub(1)).rev() {
                for y in 0..N_LABELS {
                    let parts: Vec<f64> = (0..N_LABELS)
                        .map(|s| trans_at(y, s) + emit[t + 1][s] + beta[t + 1][s])
                        .collect();
                    beta[t][y] = logsumexp(&parts);
                }
            }

            // Empirical minus expected counts.
            for (t, (fv, gold_y)) in seq.iter().enumerate() {
                for y in 0..N_LABELS {
                    let p = (alpha[t][y] + beta[t][y] - logz).exp();
                    let delta = if y == *gold_y { 1.0 } else { 0.0 } - p;
                    grad[y] += delta;
                    for &(i, v) in fv {
                        grad[state_off + y * f + i] += delta * v;
                    }
                }
            }
            for t in 1..n {
                for a in 0..N_LABELS {
                    for b in 0..N_LABELS {
                        let p = (alpha[t - 1][a] + trans_at(a, b) + emit[t][b] + beta[t][b] - logz)
                            .exp();
                        let empirical = if seq[t - 1].1 == a && seq[t].1 == b {
                            1.0
                        } else {
                            0.0
                        };
                        grad[trans_off + a * N_LABELS + b] += empirical - p;
                    }
                }
            }
        }

        if l2 > 0.0 {
            for i in state_off..params.len() {
                obj -= 0.5 * l2 * params[i] * params[i];
                grad[i] -= l2 * params[i];
            }
        }
        (obj, grad)
    }

    /// Per-position marginals under the given parameters (used by tests).
    pub fn marginals(&self, params: &[f64], seq_index: usize) -> Vec<[f64; N_LABELS]> {
        let (bias, state, trans) = self.split(params);
        let trans_at = |a: usize, b: usize| trans[a * N_LABELS + b];
        let seq = &self.sequences[seq_index];
        let n = seq.len();
        let emit = self.emissions(bias, state, seq);
        let mut alpha = vec![[0.0f64; N_LABELS]; n];
        alpha[0] = emit[0];
        for t in 1..n {
            for y in 0..N_LABELS {
                let parts: Vec<f64> = (0..N_LABELS)
                    .map(|p| alpha[t - 1][p] + trans_at(p, y))
                    .collect();
                alpha[t][y] = emit[t][y] + logsumexp(&parts);
            }
        }
        let logz = logsumexp(&alpha[n - 1]);
        let mut beta = vec![[0.0f64; N_LABELS]; n];
        for t in (0..n.saturating_sub(1)).rev() {
            for y in 0..N_LABELS {
                let parts: Vec<f64> = (0..N_LABELS)
                    .map(|s| trans_at(y, s) + emit[t + 1][s] + beta[t + 1][s])
                    .collect();
                beta[t][y] = logsumexp(&parts);
            }
        }
        (0..n)
            .map(|t| {
                let mut row = [0.0; N_LABELS];
                for y in 0..N_LABELS {
                    row[y] = (alpha[t][y] + beta[t][y] - logz).exp();
                }
                row
            })
            .collect()
    }
}

/// Train a linear-chain CRF with forward-backward gradients. Deterministic.
pub fn crf_train(
    sequences: &[(Vec<FeatureVector>, Vec<BioLabel>)],
    opts: &TrainOptions,
) -> Result<(CrfModel, TrainLog)> {
    opts.validate()?;
    let problem = CrfProblem::new(sequences)?;
    let (params, log) = ascend(problem.param_len(), opts, |p| {
        problem.objective_grad(p, opts.l2)
    });
    let f = problem.features.len();
    let (bias, rest) = params.split_at(N_LABELS);
    let (state, trans_flat) = rest.split_at(N_LABELS * f);
    let mut trans = [[0.0; N_LABELS]; N_LABELS];
    for a in 0..N_LABELS {
        for b in 0..N_LABELS {
            trans[a][b] = trans_flat[a * N_LABELS + b];
        }
    }
    Ok((
        CrfModel {
            features: problem.features.clone(),
            bias: [bias[0], bias[1], bias[2]],
            state: state.to_vec(),
            trans,
            l2: opts.l2,
        },
        log,
    ))
}

/// BIO well-formedness: I-RETAIN may only follow B-RETAIN or I-RETAIN.
fn transition_allowed(prev: usize, next: usize) -> bool {
    next != BioLabel::InsideRetain.idx() || prev != BioLabel::Outside.idx()
}

impl CrfModel {
    /// Assemble a model from explicit parameters, e.g. for randomized decode
    /// tests. `state` is label-major over the (sorted) feature list.
    pub fn from_parts(
        features: Vec<String>,
        bias: [f64; N_LABELS],
        state: Vec<Vec<f64>>,
        trans: [[f64; N_LABELS]; N_LABELS],
        l2: f64,
    ) -> Result<CrfModel> {
        if state.len() != N_LABELS || state.iter().any(|row| row.len() != features.len()) {
            return Err(Error::validation("inconsistent model dimensions"));
        }
        let mut feature_order: Vec<usize> = (0..features.len()).collect();
        feature_order.sort_by(|&a, &b| features[a].cmp(&features[b]));
        let sorted: Vec<String> = feature_order.iter().map(|&i| features[i].clone()).collect();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::validation("duplicate features"));
        }
        let mut flat = Vec::with_capacity(N_LABELS * features.len());
        for row in &state {
            for &f in &feature_order {
                flat.push(row[f]);
            }
        }
        Ok(CrfModel {
            features: FeatureIndex::from_sorted(sorted),
            bias,
            state: flat,
            trans,
            l2,
        })
    }

    pub fn l2(&self) -> f64 {
        self.l2
    }

    /// L2 norm of state and transition weights (intercepts excluded).
    pub fn weight_norm(&self) -> f64 {
        let s: f64 = self.state.iter().map(|w| w * w).sum();
        let t: f64 = self
            .trans
            .iter()
            .flat_map(|row| row.iter())
            .map(|w| w * w)
            .sum();
        (s + t).sqrt()
    }

    fn emission(&self, fv: &FeatureVector) -> [f64; N_LABELS] {
        let f = self.features.len();
        let projected = self.features.project(fv);
        let mut row = [0.0; N_LABELS];
        for (y, slot) in row.iter_mut().enumerate() {
            let mut s = self.bias[y];
            for &(i, v) in &projected {
                s += self.state[y * f + i] * v;
            }
            *slot = s;
        }
        row
    }

    /// Label distribution for a single position in isolation (degenerate
    /// chain of length one).
    pub fn single_position_prob(&self, fv: &FeatureVector) -> [f64; N_LABELS] {
        let scores = self.emission(fv);
        let logz = logsumexp(&scores);
        let mut out = [0.0; N_LABELS];
        for y in 0..N_LABELS {
            out[y] = (scores[y] - logz).exp();
        }
        out
    }
}

/// Viterbi-optimal label sequence among those that match every forced
/// position and satisfy BIO well-formedness. Ties break toward the
/// lexicographically smaller sequence under B-RETAIN < I-RETAIN < O.
#[allow(clippy::needless_range_loop)]
pub fn crf_decode(
    model: &CrfModel,
    sequence: &[FeatureVector],
    forced: &BTreeMap<usize, BioLabel>,
) -> Vec<BioLabel> {
    let n = sequence.len();
    if n == 0 {
        return Vec::new();
    }
    let emit: Vec<[f64; N_LABELS]> = sequence.iter().map(|fv| model.emission(fv)).collect();
    let allowed_at = |t: usize, y: usize| -> bool {
        if let Some(&f) = forced.get(&t) {
            if f.idx() != y {
                return false;
            }
        }
        // I-RETAIN cannot open a sequence.
        !(t == 0 && y == BioLabel::InsideRetain.idx())
    };

    // Suffix maxima: best[t][y] is the top score of any feasible suffix
    // starting at t with label y. Filling backward lets the reconstruction
    // walk forward and take the smallest label at every tie, which yields the
    // lexicographically smallest argmax sequence.
    let mut best = vec![[f64::NEG_INFINITY; N_LABELS]; n];
    for y in 0..N_LABELS {
        if allowed_at(n - 1, y) {
            best[n - 1][y] = emit[n - 1][y];
        }
    }
    for t in (0..n - 1).rev() {
        for y in 0..N_LABELS {
            if !allowed_at(t, y) {
                continue;
            }
            let mut top = f64::NEG_INFINITY;
            for next in 0..N_LABELS {
                if transition_allowed(y, next) && best[t + 1][next] > f64::NEG_INFINITY {
                    top = top.max(model.trans[y][next] + best[t + 1][next]);
                }
            }
            if top > f64::NEG_INFINITY {
                best[t][y] = emit[t][y] + top;
            }
        }
    }

    let mut out = Vec::with_capacity(n);
    let mut current = usize::MAX;
    let mut top = f64::NEG_INFINITY;
    for y in 0..N_LABELS {
        if best[0][y] > top {
            top = best[0][y];
            current = y;
        }
    }
    assert!(
        current != usize::MAX,
        "constrained decode found no feasible sequence"
    );
    out.push(BioLabel::ALL[current]);
    for t in 1..n {
        let mut next = usize::MAX;
        let mut top = f64::NEG_INFINITY;
        for y in 0..N_LABELS {
            if transition_allowed(current, y) && best[t][y] > f64::NEG_INFINITY {
                let score = model.trans[current][y] + best[t][y];
                if score > top {
                    top = score;
                    next = y;
                }
            }
        }
        assert!(next != usize::MAX, "decode dead-ended at position {t}");
        out.push(BioLabel::ALL[next]);
        current = next;
    }
    out
}

#[derive(Serialize, Deserialize)]
struct CrfDto {
    version: u32,
    kind: String,
    l2: f64,
    labels: Vec<String>,
    features: Vec<String>,
    bias: Vec<f64>,
    state: Vec<Vec<f64>>,
    transitions: Vec<Vec<f64>>,
}

impl CrfModel {
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let f = self.features.len();
        let dto = CrfDto {
            version: 1,
            kind: "crf".into(),
            l2: self.l2,
            labels: BioLabel::ALL.iter().map(|l| l.name().to_string()).collect(),
            features: self.features.names().to_vec(),
            bias: self.bias.to_vec(),
            state: (0..N_LABELS)
                .map(|y| self.state[y * f..(y + 1) * f].to_vec())
                .collect(),
            transitions: self.trans.iter().map(|row| row.to_vec()).collect(),
        };
        let json = serde_json::to_string_pretty(&dto).expect("model serializes");
        std::fs::write(path, json + "\n").map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<CrfModel> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let dto: CrfDto = serde_json::from_str(&text)
            .map_err(|e| Error::format(path, e.line(), e.to_string()))?;
        if dto.kind != "crf" || dto.version != 1 {
            return Err(Error::format(
                path,
                1,
                format!("expected crf v1 model, got {} v{}", dto.kind, dto.version),
            ));
        }
        let f = dto.features.len();
        if dto.bias.len() != N_LABELS
            || dto.state.len() != N_LABELS
            || dto.state.iter().any(|row| row.len() != f)
            || dto.transitions.len() != N_LABELS
            || dto.transitions.iter().any(|row| row.len() != N_LABELS)
        {
            return Err(Error::format(path, 1, "inconsistent model dimensions"));
        }
        let mut trans = [[0.0; N_LABELS]; N_LABELS];
        for (a, row) in dto.transitions.iter().enumerate() {
            for (b, &w) in row.iter().enumerate() {
                trans[a][b] = w;
            }
        }
        Ok(CrfModel {
            features: FeatureIndex::from_sorted(dto.features),
            bias: [dto.bias[0], dto.bias[1], dto.bias[2]],
            state: dto.state.into_iter().flatten().collect(),
            trans,
            l2: dto.l2,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fv(pairs: &[(&str, f64)]) -> FeatureVector {
        let mut out = FeatureVector::new();
        for (name, value) in pairs {
            out.set(*name, *value);
        }
        out
    }

    fn toy_sequences() -> Vec<(Vec<FeatureVector>, Vec<BioLabel>)> {
        vec![
            (
                vec![
                    fv(&[("cap", 1.0)]),
                    fv(&[("low", 1.0)]),
                    fv(&[("low", 1.0)]),
                ],
                vec![
                    BioLabel::BeginRetain,
                    BioLabel::InsideRetain,
                    BioLabel::Outside,
                ],
            ),
            (
                vec![fv(&[("low", 1.0)]), fv(&[("cap", 1.0)])],
                vec![BioLabel::Outside, BioLabel::BeginRetain],
            ),
        ]
    }

    #[test]
    fn mask_to_labels_marks_runs() {
        let labels = mask_to_labels(&[true, true, false, true, false]);
        assert_eq!(
            labels,
            vec![
                BioLabel::BeginRetain,
                BioLabel::InsideRetain,
                BioLabel::Outside,
                BioLabel::BeginRetain,
                BioLabel::Outside
            ]
        );
    }

    #[test]
    fn unknown_label_rejected() {
        assert!(BioLabel::parse("B-KEEP").is_err());
        assert_eq!(BioLabel::parse("O").unwrap(), BioLabel::Outside);
    }

    #[test]
    fn training_objective_non_decreasing() {
        let opts = TrainOptions {
            l2: 0.05,
            max_iter: 200,
            tol: 1e-7,
        };
        let (_, log) = crf_train(&toy_sequences(), &opts).unwrap();
        for pair in log.objective.windows(2) {
            assert!(pair[1] >= pair[0]);
        }
    }

    #[test]
    fn length_one_chain_matches_maxent() {
        // On single-position sequences the chain reduces to a MaxEnt
        // classifier over the same features.
        let singles: Vec<(Vec<FeatureVector>, Vec<BioLabel>)> = vec![
            (vec![fv(&[("cap", 1.0)])], vec![BioLabel::BeginRetain]),
            (vec![fv(&[("low", 1.0)])], vec![BioLabel::Outside]),
            (vec![fv(&[("cap", 1.0)])], vec![BioLabel::BeginRetain]),
            (vec![fv(&[("mid", 1.0)])], vec![BioLabel::InsideRetain]),
        ];
        let opts = TrainOptions {
            l2: 0.1,
            max_iter: 4000,
            tol: 1e-11,
        };
        let (crf, _) = crf_train(&singles, &opts).unwrap();
        let maxent_examples: Vec<(FeatureVector, String)> = singles
            .iter()
            .map(|(fvs, ls)| (fvs[0].clone(), ls[0].name().to_string()))
            .collect();
        let (me, _) = super::super::maxent::maxent_train(&maxent_examples, &opts).unwrap();
        for probe in [
            fv(&[("cap", 1.0)]),
            fv(&[("low", 1.0)]),
            fv(&[("mid", 1.0)]),
        ] {
            let crf_probs = crf.single_position_prob(&probe);
            let me_probs = me.prob(&probe);
            for label in BioLabel::ALL {
                let diff = (crf_probs[label.idx()] - me_probs[label.name()]).abs();
                assert!(diff < 1e-9, "{label:?}: {diff}");
            }
        }
    }

    #[test]
    fn all_positions_forced_outside() {
        let (model, _) = crf_train(&toy_sequences(), &TrainOptions::default()).unwrap();
        let seq = vec![fv(&[("cap", 1.0)]); 4];
        let forced: BTreeMap<usize, BioLabel> = (0..4).map(|i| (i, BioLabel::Outside)).collect();
        let out = crf_decode(&model, &seq, &forced);
        assert_eq!(out, vec![BioLabel::Outside; 4]);
    }

    #[test]
    fn zero_weight_model_ties_break_lexicographically() {
        let problem = CrfProblem::new(&toy_sequences()).unwrap();
        let zeros = vec![0.0; problem.param_len()];
        let model = CrfModel {
            features: problem.features.clone(),
            bias: [0.0; N_LABELS],
            state: vec![0.0; N_LABELS * problem.features.len()],
            trans: [[0.0; N_LABELS]; N_LABELS],
            l2: 0.0,
        };
        let _ = zeros;
        let seq = vec![fv(&[("cap", 1.0)]); 3];
        let out = crf_decode(&model, &seq, &BTreeMap::new());
        // Every well-formed sequence scores 0; the smallest is B,B,B.
        assert_eq!(out, vec![BioLabel::BeginRetain; 3]);
    }

    #[test]
    fn decode_respects_well_formedness() {
        // Force position 2 to O; I-RETAIN may then not appear at position 3
        // unless re-opened by B-RETAIN.
        let (model, _) = crf_train(&toy_sequences(), &TrainOptions::default()).unwrap();
        let seq = vec![fv(&[("cap", 1.0)]); 5];
        let forced: BTreeMap<usize, BioLabel> = [(2, BioLabel::Outside)].into();
        let out = crf_decode(&model, &seq, &forced);
        assert_eq!(out[2], BioLabel::Outside);
        for t in 1..out.len() {
            if out[t] == BioLabel::InsideRetain {
                assert_ne!(out[t - 1], BioLabel::Outside);
            }
        }
        assert_ne!(out[0], BioLabel::InsideRetain);
    }

    #[test]
    fn save_load_round_trip() {
        let (model, _) = crf_train(&toy_sequences(), &TrainOptions::default()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("crf.json");
        model.save(&path).unwrap();
        let loaded = CrfModel::load(&path).unwrap();
        let seq = vec![fv(&[("cap", 1.0)]), fv(&[("low", 1.0)])];
        assert_eq!(
            crf_decode(&model, &seq, &BTreeMap::new()),
            crf_decode(&loaded, &seq, &BTreeMap::new())
        );
        let again = dir.path().join("crf2.json");
        loaded.save(&again).unwrap();
        assert_eq!(
            std::fs::read(&path).unwrap(),
            std::fs::read(&again).unwrap()
        );
    }

    #[test]
    fn larger_l2_shrinks_weights() {
        let data = toy_sequences();
        let norms: Vec<f64> = [0.01, 0.1, 1.0]
            .iter()
            .map(|&l2| {
                let opts = TrainOptions {
                    l2,
                    max_iter: 400,
                    tol: 1e-9,
                };
                crf_train(&data, &opts).unwrap().0.weight_norm()
            })
            .collect();
        for pair in norms.windows(2) {
            assert!(pair[1] < pair[0] + 1e-9, "{norms:?}");
        }
    }
}
