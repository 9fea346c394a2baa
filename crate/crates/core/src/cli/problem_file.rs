//! TOML problem files for `mrdp solve`.
//!
//! ```toml
//! # one [lo, hi] pair per parameter
//! bounds = [[0.1, 0.5]]
//!
//! [[chain]]
//! labels = ["∅", "A∩B", "A", "A∪B", "U"]
//! null = [0, 1, 2, 3, 4]
//! nodes = [
//!   { constant = 0.0, coefficients = [0.0] },
//!   { constant = 0.0, coefficients = [1.0] },
//!   { constant = 0.6, coefficients = [0.0] },
//!   { constant = 1.1, coefficients = [-1.0] },
//!   { constant = 1.0, coefficients = [0.0] },
//! ]
//! ```
//!
//! Every `[[chain]]` table needs `labels`, `null` (the null grading values,
//! strictly increasing) and one `nodes` entry per label; every node needs
//! one coefficient per parameter. Unknown keys are rejected.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::chain::{Chain, GradingFunction};
use crate::error::Error;
use crate::solver::{AffineMap, GradingTemplate, Interval, MrdpProblem};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub bounds: Vec<[f64; 2]>,
    #[serde(rename = "chain")]
    pub chains: Vec<ChainEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainEntry {
    pub labels: Vec<String>,
    pub null: Vec<f64>,
    pub nodes: Vec<NodeEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeEntry {
    pub constant: f64,
    pub coefficients: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProblemFileError {
    /// The text is not valid TOML or does not match the schema.
    Syntax(String),
    /// The document parsed but describes an invalid problem.
    Invalid { location: String, source: Error },
}

impl ProblemFileError {
    /// True when the bounds leave no feasible parameter value.
    pub fn is_infeasible(&self) -> bool {
        matches!(
            self,
            ProblemFileError::Invalid {
                source: Error::EmptyRegion { .. },
                ..
            }
        )
    }
}

impl fmt::Display for ProblemFileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProblemFileError::Syntax(msg) => write!(f, "{}", msg.trim_end()),
            ProblemFileError::Invalid { location, source } => write!(f, "{location}: {source}"),
        }
    }
}

impl std::error::Error for ProblemFileError {}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self, ProblemFileError> {
        toml::from_str(text).map_err(|e| ProblemFileError::Syntax(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("problem files always serialize")
    }

    pub fn from_problem(problem: &MrdpProblem) -> Self {
        Self {
            bounds: problem.bounds().iter().map(|b| [b.lo, b.hi]).collect(),
            chains: problem
                .templates()
                .map(|(template, null)| ChainEntry {
                    labels: template.chain().labels().to_vec(),
                    null: null.values().to_vec(),
                    nodes: template
                        .nodes()
                        .iter()
                        .map(|n| NodeEntry {
                            constant: n.constant,
                            coefficients: n.coefficients.clone(),
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn to_problem(&self) -> Result<MrdpProblem, ProblemFileError> {
        let at = |location: String| move |source| ProblemFileError::Invalid { location, source };
        let mut templates = Vec::with_capacity(self.chains.len());
        for (i, entry) in self.chains.iter().enumerate() {
            let chain = Chain::new(entry.labels.iter().cloned())
                .map_err(at(format!("chain[{i}].labels")))?;
            let null = GradingFunction::new(chain.clone(), entry.null.clone())
                .map_err(at(format!("chain[{i}].null")))?;
            for (k, node) in entry.nodes.iter().enumerate() {
                if node.coefficients.len() != self.bounds.len() {
                    return Err(ProblemFileError::Invalid {
                        location: format!("chain[{i}].nodes[{k}].coefficients"),
                        source: Error::LengthMismatch {
                            expected: self.bounds.len(),
                            found: node.coefficients.len(),
                        },
                    });
                }
            }
            let nodes = entry
                .nodes
                .iter()
                .map(|n| AffineMap::new(n.constant, n.coefficients.clone()))
                .collect();
            let template =
                GradingTemplate::new(chain, nodes).map_err(at(format!("chain[{i}].nodes")))?;
            templates.push((template, null));
        }
        let bounds = self
            .bounds
            .iter()
            .map(|&[lo, hi]| Interval::new(lo, hi))
            .collect();
        MrdpProblem::new(templates, bounds).map_err(|source| {
            let location = match source {
                Error::EmptyRegion { param, .. } => format!("bounds[{param}]"),
                _ => "problem".to_owned(),
            };
            ProblemFileError::Invalid { location, source }
        })
    }
}
