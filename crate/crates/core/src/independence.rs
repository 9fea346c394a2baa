//! Intersection probability of two events with known marginals.
//!
//! With `P(A) = p1`, `P(B) = p2` and unknown `x = P(A∩B)`, the two maximal
//! event chains
//!
//! ```text
//! C1 = ∅ ⊂ A∩B ⊂ A ⊂ A∪B ⊂ U
//! C2 = ∅ ⊂ A∩B ⊂ B ⊂ A∪B ⊂ U
//! ```
//!
//! carry grading functions `[0, x, p1, p1 + p2 − x, 1]` and
//! `[0, x, p2, p1 + p2 − x, 1]`, and the indexing function as null. Both give
//! the same divergence
//!
//! ```text
//! d(x) = −x ln x − (p1 − x) ln(p1 − x) − (p2 − x) ln(p2 − x)
//!        − (1 − p1 − p2 + x) ln(1 − p1 − p2 + x)
//! ```
//!
//! on `[max(0, p1 + p2 − 1), min(p1, p2)]`, which is strictly concave with
//! its only stationary point at `x = p1 · p2`.

use crate::chain::Chain;
use crate::divergence::term;
use crate::error::{Error, Result};
use crate::solver::{AffineMap, GradingTemplate, Interval, MrdpProblem};

pub const C1_LABELS: [&str; 5] = ["∅", "A∩B", "A", "A∪B", "U"];
pub const C2_LABELS: [&str; 5] = ["∅", "A∩B", "B", "A∪B", "U"];

/// Two events with given marginal probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct IndependenceInstance {
    p1: f64,
    p2: f64,
    chain_c1: Chain,
    chain_c2: Chain,
    interval: Interval,
}

impl IndependenceInstance {
    pub fn new(p1: f64, p2: f64) -> Result<Self> {
        Ok(Self {
            p1,
            p2,
            chain_c1: Chain::new(C1_LABELS).expect("distinct labels"),
            chain_c2: Chain::new(C2_LABELS).expect("distinct labels"),
            interval: feasible_interval(p1, p2)?,
        })
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    pub fn p2(&self) -> f64 {
        self.p2
    }

    pub fn chain_c1(&self) -> &Chain {
        &self.chain_c1
    }

    pub fn chain_c2(&self) -> &Chain {
        &self.chain_c2
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    /// Grading-function templates on C1 and C2 in the single parameter `x`.
    pub fn templates(&self) -> (GradingTemplate, GradingTemplate) {
        let template = |chain: &Chain, middle: f64| {
            GradingTemplate::new(
                chain.clone(),
                vec![
                    AffineMap::constant(0.0, 1),
                    AffineMap::new(0.0, vec![1.0]),
                    AffineMap::constant(middle, 1),
                    AffineMap::new(self.p1 + self.p2, vec![-1.0]),
                    AffineMap::constant(1.0, 1),
                ],
            )
            .expect("five nodes, one parameter")
        };
        (
            template(&self.chain_c1, self.p1),
            template(&self.chain_c2, self.p2),
        )
    }

    /// The problem over both chains, with unit null increments and the
    /// feasible interval as bounds.
    pub fn problem(&self) -> MrdpProblem {
        let (t1, t2) = self.templates();
        MrdpProblem::new(
            vec![
                (t1, self.chain_c1.indexing_function()),
                (t2, self.chain_c2.indexing_function()),
            ],
            vec![self.interval],
        )
        .expect("feasible interval is never empty")
    }

    /// Maximizer of the summed divergence. A single-point interval is
    /// returned as is.
    pub fn solve(&self, tol: f64) -> Result<f64> {
        if self.interval.is_point() {
            return Ok(self.interval.lo);
        }
        Ok(self.problem().maximize(tol)?.argmax[0])
    }

    fn increments(&self, x: f64) -> [f64; 4] {
        let a_only = self.p1 - x;
        let b_only = self.p2 - x;
        [x, a_only, b_only, (1.0 - self.p1) - b_only]
    }

    fn check_closed(&self, x: f64) -> Result<()> {
        if self.interval.contains(x) {
            Ok(())
        } else {
            Err(Error::OutsideInterval {
                x,
                lo: self.interval.lo,
                hi: self.interval.hi,
            })
        }
    }

    fn interior_increments(&self, x: f64) -> Result<[f64; 4]> {
        let f = self.increments(x);
        if self.interval.contains_strictly(x) && f.iter().all(|&t| t > 0.0) {
            Ok(f)
        } else {
            Err(Error::NotInterior {
                x,
                lo: self.interval.lo,
                hi: self.interval.hi,
            })
        }
    }

    /// `d(x)` on the closed interval, with `0 · ln 0 = 0` at the ends.
    pub fn d(&self, x: f64) -> Result<f64> {
        self.check_closed(x)?;
        Ok(-self
            .increments(x)
            .iter()
            .map(|&t| term(t.max(0.0)))
            .sum::<f64>())
    }

    pub fn d_prime(&self, x: f64) -> Result<f64> {
        let [x, a, b, q] = self.interior_increments(x)?;
        Ok(-x.ln() + a.ln() + b.ln() - q.ln())
    }

    pub fn d_double_prime(&self, x: f64) -> Result<f64> {
        let [x, a, b, q] = self.interior_increments(x)?;
        Ok(-1.0 / x - 1.0 / a - 1.0 / b - 1.0 / q)
    }

    /// Samples `d`, `d'` and `d''` on `steps` evenly spaced points of the
    /// closed interval. Derivatives are left out at the two endpoints, and a
    /// single-point interval gives one row without derivatives.
    pub fn sweep(&self, steps: usize) -> Result<ObjectiveCurve> {
        if steps < 2 {
            return Err(Error::InvalidArgument(format!(
                "sweep needs at least 2 steps, got {steps}"
            )));
        }
        let Interval { lo, hi } = self.interval;
        if self.interval.is_point() {
            return Ok(ObjectiveCurve {
                points: vec![CurvePoint {
                    x: lo,
                    d: self.d(lo)?,
                    d_prime: None,
                    d_double_prime: None,
                }],
            });
        }
        let last = steps - 1;
        let points = (0..steps)
            .map(|i| {
                let x = if i == last {
                    hi
                } else {
                    lo + (hi - lo) * (i as f64 / last as f64)
                };
                let interior = i != 0 && i != last;
                Ok(CurvePoint {
                    x,
                    d: self.d(x)?,
                    d_prime: interior.then(|| self.d_prime(x)).transpose()?,
                    d_double_prime: interior.then(|| self.d_double_prime(x)).transpose()?,
                })
            })
            .collect::<Result<_>>()?;
        Ok(ObjectiveCurve { points })
    }
}

/// One sample of the objective curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub x: f64,
    pub d: f64,
    pub d_prime: Option<f64>,
    pub d_double_prime: Option<f64>,
}

/// Samples of `d`, `d'` and `d''` in increasing `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveCurve {
    pub points: Vec<CurvePoint>,
}

impl ObjectiveCurve {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Sample with the largest `d`.
    pub fn argmax(&self) -> Option<&CurvePoint> {
        self.points.iter().max_by(|a, b| a.d.total_cmp(&b.d))
    }
}

fn check_probability(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::ProbabilityOutOfRange { name, value })
    }
}

/// `[max(0, p1 + p2 − 1), min(p1, p2)]`.
///
/// Marginals of 0 or 1 pin the interval to the single point `p1 · p2`
/// without going through a rounded sum.
pub fn feasible_interval(p1: f64, p2: f64) -> Result<Interval> {
    check_probability("p1", p1)?;
    check_probability("p2", p2)?;
    if p1 == 0.0 || p2 == 0.0 {
        return Ok(Interval::point(0.0));
    }
    if p1 == 1.0 {
        return Ok(Interval::point(p2));
    }
    if p2 == 1.0 {
        return Ok(Interval::point(p1));
    }
    let (small, big) = if p1 <= p2 { (p1, p2) } else { (p2, p1) };
    // 1 − big is exact whenever the lower end is positive (big ≥ 1/2), which
    // keeps the rounded lower end at or below the rounded product.
    let hi = small;
    let lo = (small - (1.0 - big)).max(0.0).min(hi);
    Ok(Interval::new(lo, hi))
}

pub fn independence_problem(p1: f64, p2: f64) -> Result<MrdpProblem> {
    Ok(IndependenceInstance::new(p1, p2)?.problem())
}

pub fn objective_d(p1: f64, p2: f64, x: f64) -> Result<f64> {
    IndependenceInstance::new(p1, p2)?.d(x)
}

pub fn d_prime(p1: f64, p2: f64, x: f64) -> Result<f64> {
    IndependenceInstance::new(p1, p2)?.d_prime(x)
}

pub fn d_double_prime(p1: f64, p2: f64, x: f64) -> Result<f64> {
    IndependenceInstance::new(p1, p2)?.d_double_prime(x)
}

pub fn solve_independence(p1: f64, p2: f64, tol: f64) -> Result<f64> {
    IndependenceInstance::new(p1, p2)?.solve(tol)
}

/// `p1 · p2`.
pub fn closed_form(p1: f64, p2: f64) -> Result<f64> {
    check_probability("p1", p1)?;
    check_probability("p2", p2)?;
    Ok(p1 * p2)
}

pub fn sweep_curve(p1: f64, p2: f64, steps: usize) -> Result<ObjectiveCurve> {
    IndependenceInstance::new(p1, p2)?.sweep(steps)
}
