//! Finite chains and grading functions on them.
//!
//! A [`Chain`] is a finite, totally ordered list of labelled elements; the
//! order of the list is the order of the chain. A [`GradingFunction`] attaches
//! a real value to every element such that values strictly increase along the
//! chain. Its [`IncrementSequence`] holds the differences between adjacent
//! values and is what the divergence functional consumes.

use std::collections::HashSet;
use std::ops::Deref;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A finite chain. Element `k` precedes element `k + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    labels: Arc<[String]>,
}

impl Chain {
    /// Builds a chain from labels listed in chain order.
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let mut seen = HashSet::with_capacity(labels.len());
        for (index, label) in labels.iter().enumerate() {
            if !seen.insert(label.as_str()) {
                return Err(Error::DuplicateLabel {
                    label: label.clone(),
                    index,
                });
            }
        }
        if labels.len() < 2 {
            return Err(Error::ChainTooShort(labels.len()));
        }
        Ok(Self {
            labels: labels.into(),
        })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    /// Always false; a chain has at least two elements.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// The indexing grading function `k ↦ k`, the null grading function used
    /// when nothing else is known about the chain.
    pub fn indexing_function(&self) -> GradingFunction {
        GradingFunction {
            chain: self.clone(),
            values: (0..self.len()).map(|k| k as f64).collect(),
        }
    }
}

/// Convenience wrapper around [`Chain::new`].
pub fn make_chain<S: AsRef<str>>(labels: &[S]) -> Result<Chain> {
    Chain::new(labels.iter().map(|s| s.as_ref().to_owned()))
}

/// A strictly increasing real function on a chain.
#[derive(Debug, Clone, PartialEq)]
pub struct GradingFunction {
    chain: Chain,
    values: Vec<f64>,
}

impl GradingFunction {
    /// Validates `values` against `chain`. Adjacent values must satisfy
    /// `values[k] - values[k - 1] > 0` exactly.
    pub fn new(chain: Chain, values: Vec<f64>) -> Result<Self> {
        if values.len() != chain.len() {
            return Err(Error::LengthMismatch {
                expected: chain.len(),
                found: values.len(),
            });
        }
        if let Some((index, value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite {
                index,
                value: *value,
            });
        }
        for (k, pair) in values.windows(2).enumerate() {
            if pair[1] - pair[0] <= 0.0 {
                return Err(Error::NotIncreasing {
                    index: k + 1,
                    previous: pair[0],
                    value: pair[1],
                });
            }
        }
        Ok(Self { chain, values })
    }

    pub fn chain(&self) -> &Chain {
        &self.chain
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn increments(&self) -> IncrementSequence {
        IncrementSequence {
            deltas: self.values.windows(2).map(|w| w[1] - w[0]).collect(),
        }
    }
}

/// Convenience wrapper around [`GradingFunction::new`].
pub fn make_grading(chain: &Chain, values: &[f64]) -> Result<GradingFunction> {
    GradingFunction::new(chain.clone(), values.to_vec())
}

pub fn indexing_function(chain: &Chain) -> GradingFunction {
    chain.indexing_function()
}

pub fn increments(gf: &GradingFunction) -> IncrementSequence {
    gf.increments()
}

/// Differences between adjacent values of a grading function. Entry `k - 1`
/// is `F(w_k) - F(w_{k-1})`.
#[derive(Debug, Clone, PartialEq)]
pub struct IncrementSequence {
    deltas: Vec<f64>,
}

impl IncrementSequence {
    pub fn deltas(&self) -> &[f64] {
        &self.deltas
    }

    pub fn total(&self) -> f64 {
        self.deltas.iter().sum()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.deltas
    }
}

impl Deref for IncrementSequence {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.deltas
    }
}

impl AsRef<[f64]> for IncrementSequence {
    fn as_ref(&self) -> &[f64] {
        &self.deltas
    }
}
