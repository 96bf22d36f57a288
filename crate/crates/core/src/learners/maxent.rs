//! Maximum Entropy (multinomial logistic) classifier.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{ascend, logsumexp, FeatureIndex, FeatureVector, TrainLog, TrainOptions};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct MaxEntModel {
    labels: Vec<String>,
    features: FeatureIndex,
    /// Per-label intercept; unregularized.
    bias: Vec<f64>,
    /// Label-major weight matrix, `weights[label * n_features + feature]`.
    weights: Vec<f64>,
    l2: f64,
}

/// Vectorized training problem exposing the objective and gradient at an
/// arbitrary parameter point (used by training and by gradient checks).
///
/// Parameter layout: `[bias(labels) | weights(labels x features)]`.
#[derive(Debug)]
pub struct MaxEntProblem {
    labels: Vec<String>,
    features: FeatureIndex,
    examples: Vec<(Vec<(usize, f64)>, usize)>,
}

impl MaxEntProblem {
    pub fn new(examples: &[(FeatureVector, String)]) -> Result<MaxEntProblem> {
        if examples.is_empty() {
            return Err(Error::validation("no training examples"));
        }
        let mut label_set = BTreeSet::new();
        let mut name_set = BTreeSet::new();
        for (fv, label) in examples {
            fv.ensure_finite()?;
            label_set.insert(label.clone());
            for name in fv.names() {
                name_set.insert(name.to_string());
            }
        }
        if label_set.len() < 2 {
            return Err(Error::validation(format!(
                "need at least 2 distinct labels, got {:?}",
                label_set
            )));
        }
        let labels: Vec<String> = label_set.into_iter().collect();
        let features = FeatureIndex::from_names(name_set);
        let vectorized = examples
            .iter()
            .map(|(fv, label)| {
                let y = labels.binary_search(label).expect("label registered");
                (features.project(fv), y)
            })
            .collect();
        Ok(MaxEntProblem {
            labels,
            features,
            examples: vectorized,
        })
    }

    pub fn param_len(&self) -> usize {
        self.labels.len() * (1 + self.features.len())
    }

    pub fn n_labels(&self) -> usize {
        self.labels.len()
    }

    pub fn n_features(&self) -> usize {
        self.features.len()
    }

    /// Regularized conditional log-likelihood and its gradient. The L2 term
    /// applies to feature weights only, never the intercepts.
    pub fn objective_grad(&self, params: &[f64], l2: f64) -> (f64, Vec<f64>) {
        let k = self.labels.len();
        let f = self.features.len();
        assert_eq!(params.len(), k * (1 + f));
        let (bias, weights) = params.split_at(k);
        let mut obj = 0.0;
        let mut grad = vec![0.0; params.len()];
        let mut scores = vec![0.0; k];
        for (fv, gold) in &self.examples {
            for (y, score) in scores.iter_mut().enumerate() {
                let mut s = bias[y];
                for &(i, v) in fv {
                    s += weights[y * f + i] * v;
                }
                *score = s;
            }
            let logz = logsumexp(&scores);
            obj += scores[*gold] - logz;
            for y in 0..k {
                let p = (scores[y] - logz).exp();
                let indicator = if y == *gold { 1.0 } else { 0.0 };
                let delta = indicator - p;
                grad[y] += delta;
                for &(i, v) in fv {
                    grad[k + y * f + i] += delta * v;
                }
            }
        }
        if l2 > 0.0 {
            for i in 0..(k * f) {
                obj -= 0.5 * l2 * weights[i] * weights[i];
                grad[k + i] -= l2 * weights[i];
            }
        }
        (obj, grad)
    }
}

/// Train a MaxEnt classifier by gradient ascent on the regularized
/// conditional log-likelihood. Deterministic: zero initialization, fixed
/// iteration order.
pub fn maxent_train(
    examples: &[(FeatureVector, String)],
    opts: &TrainOptions,
) -> Result<(MaxEntModel, TrainLog)> {
    opts.validate()?;
    let problem = MaxEntProblem::new(examples)?;
    let (params, log) = ascend(problem.param_len(), opts, |p| {
        problem.objective_grad(p, opts.l2)
    });
    let k = problem.labels.len();
    let (bias, weights) = params.split_at(k);
    Ok((
        MaxEntModel {
            labels: problem.labels.clone(),
            features: problem.features.clone(),
            bias: bias.to_vec(),
            weights: weights.to_vec(),
            l2: opts.l2,
        },
        log,
    ))
}

impl MaxEntModel {
    /// Assemble a model from explicit parameters, e.g. for randomized
    /// decoder tests. Labels and features are sorted internally; `weights`
    /// is label-major and must match the given order.
    pub fn from_parts(
        labels: Vec<String>,
        features: Vec<String>,
        bias: Vec<f64>,
        weights: Vec<Vec<f64>>,
        l2: f64,
    ) -> Result<MaxEntModel> {
        if labels.len() < 2 {
            return Err(Error::validation("need at least 2 labels"));
        }
        if bias.len() != labels.len()
            || weights.len() != labels.len()
            || weights.iter().any(|row| row.len() != features.len())
        {
            return Err(Error::validation("inconsistent model dimensions"));
        }
        let mut label_order: Vec<usize> = (0..labels.len()).collect();
        label_order.sort_by(|&a, &b| labels[a].cmp(&labels[b]));
        let mut feature_order: Vec<usize> = (0..features.len()).collect();
        feature_order.sort_by(|&a, &b| features[a].cmp(&features[b]));
        let sorted_labels: Vec<String> = label_order.iter().map(|&i| labels[i].clone()).collect();
        let sorted_features: Vec<String> =
            feature_order.iter().map(|&i| features[i].clone()).collect();
        if sorted_labels.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::validation("duplicate labels"));
        }
        if sorted_features.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::validation("duplicate features"));
        }
        let mut flat = Vec::with_capacity(labels.len() * features.len());
        for &y in &label_order {
            for &f in &feature_order {
                flat.push(weights[y][f]);
            }
        }
        Ok(MaxEntModel {
            labels: sorted_labels,
            features: FeatureIndex::from_sorted(sorted_features),
            bias: label_order.iter().map(|&i| bias[i]).collect(),
            weights: flat,
            l2,
        })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn l2(&self) -> f64 {
        self.l2
    }

    /// L2 norm of the feature weights (intercepts excluded).
    pub fn weight_norm(&self) -> f64 {
        self.weights.iter().map(|w| w * w).sum::<f64>().sqrt()
    }

    fn scores(&self, fv: &FeatureVector) -> Vec<f64> {
        let f = self.features.len();
        let projected = self.features.project(fv);
        self.labels
            .iter()
            .enumerate()
            .map(|(y, _)| {
                let mut s = self.bias[y];
                for &(i, v) in &projected {
                    s += self.weights[y * f + i] * v;
                }
                s
            })
            .collect()
    }

    /// Softmax label distribution; unseen features contribute nothing.
    pub fn prob(&self, fv: &FeatureVector) -> BTreeMap<String, f64> {
        let scores = self.scores(fv);
        let logz = logsumexp(&scores);
        self.labels
            .iter()
            .zip(scores.iter())
            .map(|(label, s)| (label.clone(), (s - logz).exp()))
            .collect()
    }

    /// Log-probability of one label.
    pub fn log_prob_of(&self, fv: &FeatureVector, label: &str) -> f64 {
        let scores = self.scores(fv);
        let logz = logsumexp(&scores);
        match self.labels.binary_search_by(|l| l.as_str().cmp(label)) {
            Ok(y) => scores[y] - logz,
            Err(_) => f64::NEG_INFINITY,
        }
    }

    /// Highest-probability label; ties go to the lexicographically smaller.
    pub fn predict(&self, fv: &FeatureVector) -> &str {
        let scores = self.scores(fv);
        let mut best = 0;
        for y in 1..scores.len() {
            if scores[y] > scores[best] {
                best = y;
            }
        }
        &self.labels[best]
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let dto = MaxEntDto {
            version: 1,
            kind: "maxent".into(),
            l2: self.l2,
            labels: self.labels.clone(),
            features: self.features.names().to_vec(),
            bias: self.bias.clone(),
            weights: self
                .labels
                .iter()
                .enumerate()
                .map(|(y, _)| {
                    let f = self.features.len();
                    self.weights[y * f..(y + 1) * f].to_vec()
                })
                .collect(),
        };
        let json = serde_json::to_string_pretty(&dto).expect("model serializes");
        std::fs::write(path, json + "\n").map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<MaxEntModel> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let dto: MaxEntDto = serde_json::from_str(&text)
            .map_err(|e| Error::format(path, e.line(), e.to_string()))?;
        if dto.kind != "maxent" || dto.version != 1 {
            return Err(Error::format(
                path,
                1,
                format!(
                    "expected maxent v1 model, got {} v{}",
                    dto.kind, dto.version
                ),
            ));
        }
        let n_feats = dto.features.len();
        if dto.weights.len() != dto.labels.len()
            || dto.bias.len() != dto.labels.len()
            || dto.weights.iter().any(|row| row.len() != n_feats)
        {
            return Err(Error::format(path, 1, "inconsistent model dimensions"));
        }
        Ok(MaxEntModel {
            labels: dto.labels,
            features: FeatureIndex::from_sorted(dto.features),
            bias: dto.bias,
            weights: dto.weights.into_iter().flatten().collect(),
            l2: dto.l2,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct MaxEntDto {
    version: u32,
    kind: String,
    l2: f64,
    labels: Vec<String>,
    features: Vec<String>,
    bias: Vec<f64>,
    weights: Vec<Vec<f64>>,
}
