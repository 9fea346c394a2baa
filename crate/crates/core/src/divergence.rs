//! The relative divergence functional and its Shannon-entropy special case.
//!
//! For increments `f` of a grading function `F` and `g` of a reference
//! grading function `G` on the same chain,
//!
//! ```text
//! D(F ‖ G) = −Σ_k f_k · ln(f_k / g_k)
//! ```
//!
//! in nats. When `g` is a probability vector and `f` sums to one, `−D` is the
//! Kullback-Leibler divergence of `f` from `g`, so `D ≤ 0` with equality iff
//! `f = g`. Against unit increments (the indexing function) `D` is the
//! Shannon entropy of `f`.
//!
//! Zero entries of `f` are accepted with `0 · ln 0 = 0`, which extends `D`
//! continuously to the boundary of the set of grading functions.

use crate::error::{Error, Result};

/// Tolerance on `|Σ p − 1|` for [`shannon_entropy`].
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

/// `t · ln t`, with `0 · ln 0 = 0`.
pub fn xlnx(t: f64) -> Result<f64> {
    if t.is_nan() {
        return Err(Error::NonFinite { index: 0, value: t });
    }
    if t < 0.0 {
        return Err(Error::Negative { index: 0, value: t });
    }
    Ok(term(t))
}

// Caller guarantees t >= 0.
#[inline]
pub(crate) fn term(t: f64) -> f64 {
    if t == 0.0 {
        0.0
    } else {
        t * t.ln()
    }
}

/// Relative divergence of increments `f` from reference increments `g`.
///
/// `f` may be an [`IncrementSequence`](crate::chain::IncrementSequence) or a
/// raw list with zero entries. Every `g_k` must be positive.
pub fn relative_divergence(f: &[f64], g: &[f64]) -> Result<f64> {
    if f.len() != g.len() {
        return Err(Error::LengthMismatch {
            expected: g.len(),
            found: f.len(),
        });
    }
    for (index, &value) in g.iter().enumerate() {
        if value.is_nan() || value <= 0.0 || value.is_infinite() {
            return Err(Error::NonPositiveReference { index, value });
        }
    }
    check_nonnegative(f)?;
    Ok(f.iter()
        .zip(g)
        .map(|(&fk, &gk)| if fk == 0.0 { 0.0 } else { -fk * (fk / gk).ln() })
        .sum())
}

/// Shannon entropy `−Σ p_k ln p_k` of a probability vector, in nats.
pub fn shannon_entropy(p: &[f64]) -> Result<f64> {
    check_nonnegative(p)?;
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(Error::NotNormalized { sum });
    }
    Ok(-p.iter().map(|&pk| term(pk)).sum::<f64>())
}

fn check_nonnegative(values: &[f64]) -> Result<()> {
    for (index, &value) in values.iter().enumerate() {
        if !value.is_finite() {
            return Err(Error::NonFinite { index, value });
        }
        if value < 0.0 {
            return Err(Error::Negative { index, value });
        }
    }
    Ok(())
}
