//! Statistical engines behind the learned compressors: a Maximum Entropy
//! classifier and a linear-chain CRF with constrained decoding, plus the
//! token- and constituent-level feature templates they consume.
//!
//! Both learners maximize an L2-regularized log-likelihood with batch
//! gradient ascent and a backtracking line search from zero initialization,
//! so training is deterministic for a fixed input order.

pub mod crf;
pub mod features;
pub mod maxent;
pub mod training;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use crf::{crf_decode, crf_train, mask_to_labels, BioLabel, CrfModel, CrfProblem};
pub use features::{constituent_features, token_features, ContextVariant};
pub use maxent::{maxent_train, MaxEntModel, MaxEntProblem};

/// Sparse real-valued feature map; indicator features carry value 1.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    values: BTreeMap<String, f64>,
}

impl FeatureVector {
    pub fn new() -> Self {
        Self::default()
    }

    /// Set a binary indicator feature.
    pub fn flag(&mut self, name: impl Into<String>) {
        self.values.insert(name.into(), 1.0);
    }

    pub fn set(&mut self, name: impl Into<String>, value: f64) {
        self.values.insert(name.into(), value);
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.values.get(name).copied()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.values.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.values.keys().map(String::as_str)
    }

    /// Copy every feature of `other` under `prefix` (used for window copies).
    pub fn extend_prefixed(&mut self, prefix: &str, other: &FeatureVector) {
        for (name, value) in other.iter() {
            self.values.insert(format!("{prefix}{name}"), value);
        }
    }

    pub fn ensure_finite(&self) -> Result<()> {
        for (name, value) in self.iter() {
            if !value.is_finite() {
                return Err(Error::validation(format!(
                    "feature {name} has non-finite value {value}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct TrainOptions {
    pub l2: f64,
    pub max_iter: usize,
    pub tol: f64,
}

impl Default for TrainOptions {
    fn default() -> Self {
        TrainOptions {
            l2: 0.1,
            max_iter: 500,
            tol: 1e-6,
        }
    }
}

impl TrainOptions {
    fn validate(&self) -> Result<()> {
        if self.l2 < 0.0 || !self.l2.is_finite() {
            return Err(Error::validation(format!(
                "l2 must be >= 0, got {}",
                self.l2
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::validation("max_iter must be positive"));
        }
        Ok(())
    }
}

/// Objective trace from one training run; serialized next to the model so
/// runs can be audited.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrainLog {
    /// Objective after each accepted iteration (index 0 is the initial value).
    pub objective: Vec<f64>,
    pub final_grad_norm: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn l2_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Batch gradient ascent with Armijo backtracking. `eval` returns the
/// objective to maximize and its gradient. The objective trace is
/// non-decreasing by construction.
pub(crate) fn gradient_ascent<F>(
    dim: usize,
    opts: &TrainOptions,
    mut eval: F,
) -> (Vec<f64>, TrainLog)
where
    F: FnMut(&[f64]) -> (f64, Vec<f64>),
{
    let mut params = vec![0.0; dim];
    let (mut obj, mut grad) = eval(&params);
    let mut log = TrainLog {
        objective: vec![obj],
        final_grad_norm: l2_norm(&grad),
        iterations: 0,
        converged: false,
    };
    let mut step = 1.0f64;
    for iter in 0..opts.max_iter {
        let gnorm = l2_norm(&grad);
        log.final_grad_norm = gnorm;
        log.iterations = iter;
        if gnorm < opts.tol {
            log.converged = true;
            return (params, log);
        }
        let g2 = gnorm * gnorm;
        let mut t = step;
        let mut accepted = false;
        for _ in 0..60 {
            let candidate: Vec<f64> = params
                .iter()
                .zip(grad.iter())
                .map(|(p, g)| p + t * g)
                .collect();
            let (cobj, cgrad) = eval(&candidate);
            if cobj.is_finite() && cobj >= obj + 1e-4 * t * g2 {
                params = candidate;
                obj = cobj;
                grad = cgrad;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            // No ascent step found; the gradient is numerically exhausted.
            break;
        }
        assert!(
            obj >= *log.objective.last().unwrap(),
            "objective decreased: {} -> {}",
            log.objective.last().unwrap(),
            obj
        );
        log.objective.push(obj);
        step = (t * 2.0).min(1e6);
    }
    log.final_grad_norm = l2_norm(&grad);
    log.converged = log.final_grad_norm < opts.tol;
    (params, log)
}

pub(crate) use gradient_ascent as ascend;

/// Feature-name index shared by the learners: names sorted for reproducible
/// serialization.
#[derive(Debug, Clone)]
pub(crate) struct FeatureIndex {
    names: Vec<String>,
    index: std::collections::HashMap<String, usize>,
}

impl FeatureIndex {
    pub(crate) fn from_names(set: std::collections::BTreeSet<String>) -> Self {
        let names: Vec<String> = set.into_iter().collect();
        let index = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect();
        FeatureIndex { names, index }
    }

    pub(crate) fn from_sorted(names: Vec<String>) -> Self {
        let index = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect();
        FeatureIndex { names, index }
    }

    pub(crate) fn get(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub(crate) fn len(&self) -> usize {
        self.names.len()
    }

    pub(crate) fn names(&self) -> &[String] {
        &self.names
    }

    /// Project a feature vector onto known indices, dropping unseen names.
    pub(crate) fn project(&self, fv: &FeatureVector) -> Vec<(usize, f64)> {
        fv.iter()
            .filter_map(|(name, value)| self.get(name).map(|i| (i, value)))
            .collect()
    }
}

pub(crate) fn logsumexp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    max + values.iter().map(|v| (v - max).exp()).sum::<f64>().ln()
}
