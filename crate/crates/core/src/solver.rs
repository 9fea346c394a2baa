//! Maximum relative divergence problems.
//!
//! An [`MrdpProblem`] holds one or more [`GradingTemplate`]s, each paired with
//! a fixed null grading function on the same chain. Every template node value
//! is an affine function of a shared parameter vector `x`, so every increment
//! `f_k(x) = c_k + a_k · x` is affine as well and the objective
//!
//! ```text
//! Φ(x) = Σ_templates −Σ_k f_k(x) · ln(f_k(x) / g_k)
//! ```
//!
//! is concave wherever all increments are non-negative. Its gradient is
//! `∂Φ/∂x_j = Σ a_kj · (−ln(f_k / g_k) − 1)`.
//!
//! One-parameter problems are solved by bracketing the root of `Φ'` with
//! bisection safeguards around Newton steps; more parameters use cyclic
//! coordinate ascent over the same one-dimensional solver.

// negated comparisons below are deliberate: NaN must fail them
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use crate::chain::{Chain, GradingFunction};
use crate::error::{Error, Result};

/// Default stopping tolerance on the parameter.
pub const DEFAULT_TOLERANCE: f64 = 1e-12;

/// Cap on bracketing iterations per one-dimensional solve.
pub const MAX_LINE_ITERATIONS: usize = 200;

/// Cap on coordinate-ascent sweeps.
pub const MAX_SWEEPS: usize = 10_000;

/// Offset from the bounds used by [`MrdpProblem::grid_oracle`].
pub const GRID_INSET: f64 = 1e-12;

/// Closed interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Self { lo: x, hi: x }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_strictly(&self, x: f64) -> bool {
        self.lo < x && x < self.hi
    }

    pub fn midpoint(&self) -> f64 {
        self.lo + 0.5 * (self.hi - self.lo)
    }
}

/// `x ↦ constant + Σ_j coefficients[j] · x_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineMap {
    pub constant: f64,
    pub coefficients: Vec<f64>,
}

impl AffineMap {
    pub fn new(constant: f64, coefficients: Vec<f64>) -> Self {
        Self {
            constant,
            coefficients,
        }
    }

    /// A map that ignores all `dimension` parameters.
    pub fn constant(value: f64, dimension: usize) -> Self {
        Self::new(value, vec![0.0; dimension])
    }

    pub fn dimension(&self) -> usize {
        self.coefficients.len()
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.constant
            + self
                .coefficients
                .iter()
                .zip(x)
                .map(|(a, xj)| a * xj)
                .sum::<f64>()
    }

    fn minus(&self, other: &AffineMap) -> AffineMap {
        AffineMap {
            constant: self.constant - other.constant,
            coefficients: self
                .coefficients
                .iter()
                .zip(&other.coefficients)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

/// A grading function whose node values depend affinely on the parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct GradingTemplate {
    chain: Chain,
    nodes: Vec<AffineMap>,
    increments: Vec<AffineMap>,
}

impl GradingTemplate {
    pub fn new(chain: Chain, nodes: Vec<AffineMap>) -> Result<Self> {
        if nodes.len() != chain.len() {
            return Err(Error::LengthMismatch {
                expected: chain.len(),
                found: nodes.len(),
            });
        }
        let dimension = nodes[0].dimension();
        if let Some(bad) = nodes.iter().find(|n| n.dimension() != dimension) {
            return Err(Error::LengthMismatch {
                expected: dimension,
                found: bad.dimension(),
            });
        }
        let finite = nodes
            .iter()
            .all(|n| n.constant.is_finite() && n.coefficients.iter().all(|a| a.is_finite()));
        if !finite {
            return Err(Error::InvalidProblem(
                "node maps must have finite constants and coefficients".into(),
            ));
        }
        let increments = nodes.windows(2).map(|w| w[1].minus(&w[0])).collect();
        Ok(Self {
            chain,
            nodes,
            increments,
        })
    }

    pub fn chain(&self) -> &Chain {
        &self.chain
    }

    pub fn nodes(&self) -> &[AffineMap] {
        &self.nodes
    }

    pub fn dimension(&self) -> usize {
        self.nodes[0].dimension()
    }

    pub fn values_at(&self, x: &[f64]) -> Vec<f64> {
        self.nodes.iter().map(|n| n.eval(x)).collect()
    }

    /// Increments of the template at `x`, computed from the differenced maps.
    pub fn increments_at(&self, x: &[f64]) -> Vec<f64> {
        self.increments.iter().map(|m| m.eval(x)).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
struct Term {
    template: GradingTemplate,
    null: GradingFunction,
    null_increments: Vec<f64>,
}

impl Term {
    fn divergence_at(&self, template: usize, x: &[f64]) -> Result<f64> {
        let nodes = &self.template.nodes;
        let mut total = 0.0;
        let mut below = nodes[0].eval(x);
        for (k, (map, &g)) in self
            .template
            .increments
            .iter()
            .zip(&self.null_increments)
            .enumerate()
        {
            let above = nodes[k + 1].eval(x);
            let mut f = map.eval(x);
            // rounding of the node maps can leave a vanishing increment slightly negative
            let slack = 4.0 * f64::EPSILON * (1.0 + below.abs() + above.abs());
            if f < 0.0 && f >= -slack {
                f = 0.0;
            }
            if !(f >= 0.0) {
                return Err(Error::InfeasiblePoint {
                    template,
                    node: k + 1,
                    value: f,
                });
            }
            if f > 0.0 {
                total -= f * (f / g).ln();
            }
            below = above;
        }
        Ok(total)
    }
}

/// A maximum relative divergence problem over a box of parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct MrdpProblem {
    terms: Vec<Term>,
    bounds: Vec<Interval>,
}

/// Outcome of [`MrdpProblem::maximize`].
#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub argmax: Vec<f64>,
    pub objective_at_argmax: f64,
    /// Bracketing iterations summed over every one-dimensional solve.
    pub iterations: usize,
    /// Coordinate-ascent sweeps; 1 for one-parameter problems, 0 when the
    /// feasible box is a single point.
    pub sweeps: usize,
    /// Norm of the gradient projected onto the box at `argmax`; infinite when
    /// some increment vanishes there.
    pub gradient_norm_at_exit: f64,
    pub converged: bool,
}

impl MrdpProblem {
    /// Pairs each template with its null grading function and fixes the
    /// parameter box. Bounds with `lo > hi` yield [`Error::EmptyRegion`].
    pub fn new(
        templates: Vec<(GradingTemplate, GradingFunction)>,
        bounds: Vec<Interval>,
    ) -> Result<Self> {
        if templates.is_empty() {
            return Err(Error::InvalidProblem(
                "at least one template is required".into(),
            ));
        }
        if bounds.is_empty() {
            return Err(Error::InvalidProblem(
                "at least one parameter is required".into(),
            ));
        }
        for (param, b) in bounds.iter().enumerate() {
            if !b.lo.is_finite() || !b.hi.is_finite() {
                return Err(Error::InvalidProblem(format!(
                    "bounds of parameter {param} must be finite"
                )));
            }
            if b.lo > b.hi {
                return Err(Error::EmptyRegion {
                    param,
                    lo: b.lo,
                    hi: b.hi,
                });
            }
        }
        let mut terms = Vec::with_capacity(templates.len());
        for (index, (template, null)) in templates.into_iter().enumerate() {
            if template.chain() != null.chain() {
                return Err(Error::InvalidProblem(format!(
                    "template {index}: null grading function lives on a different chain"
                )));
            }
            if template.dimension() != bounds.len() {
                return Err(Error::InvalidProblem(format!(
                    "template {index} has {} coefficients per node but there are {} parameters",
                    template.dimension(),
                    bounds.len()
                )));
            }
            let null_increments = null.increments().into_vec();
            terms.push(Term {
                template,
                null,
                null_increments,
            });
        }
        Ok(Self { terms, bounds })
    }

    pub fn dimension(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[Interval] {
        &self.bounds
    }

    pub fn templates(&self) -> impl Iterator<Item = (&GradingTemplate, &GradingFunction)> {
        self.terms.iter().map(|t| (&t.template, &t.null))
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dimension() {
            return Err(Error::LengthMismatch {
                expected: self.dimension(),
                found: x.len(),
            });
        }
        for (&xj, b) in x.iter().zip(&self.bounds) {
            if !b.contains(xj) {
                return Err(Error::OutsideInterval {
                    x: xj,
                    lo: b.lo,
                    hi: b.hi,
                });
            }
        }
        Ok(())
    }

    /// Relative divergence of every template at `x` from its null grading
    /// function, in template order.
    pub fn divergences(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_point(x)?;
        self.terms
            .iter()
            .enumerate()
            .map(|(template, term)| term.divergence_at(template, x))
            .collect()
    }

    /// Sum of the per-template relative divergences at `x`.
    pub fn objective(&self, x: &[f64]) -> Result<f64> {
        self.check_point(x)?;
        let mut total = 0.0;
        for (template, term) in self.terms.iter().enumerate() {
            total += term.divergence_at(template, x)?;
        }
        Ok(total)
    }

    /// Exact gradient of [`objective`](Self::objective). Every increment must
    /// be strictly positive at `x`.
    pub fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_point(x)?;
        let mut grad = vec![0.0; self.dimension()];
        for (template, term) in self.terms.iter().enumerate() {
            for (k, (map, &g)) in term
                .template
                .increments
                .iter()
                .zip(&term.null_increments)
                .enumerate()
            {
                let f = map.eval(x);
                if !(f > 0.0) {
                    return Err(Error::Boundary {
                        template,
                        node: k + 1,
                        value: f,
                    });
                }
                let slope = -(f / g).ln() - 1.0;
                for (gj, a) in grad.iter_mut().zip(&map.coefficients) {
                    *gj += a * slope;
                }
            }
        }
        Ok(grad)
    }

    /// Maximizes the objective over the box. `tol` bounds the final bracket
    /// width for one parameter and the per-sweep parameter change otherwise.
    pub fn maximize(&self, tol: f64) -> Result<SolveReport> {
        if !(tol > 0.0) || !tol.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "tolerance must be positive, got {tol}"
            )));
        }
        let mut x: Vec<f64> = self.bounds.iter().map(Interval::midpoint).collect();

        if self.bounds.iter().all(Interval::is_point) {
            let objective_at_argmax = self.objective(&x)?;
            let gradient_norm_at_exit = self.projected_gradient_norm(&x);
            return Ok(SolveReport {
                argmax: x,
                objective_at_argmax,
                iterations: 0,
                sweeps: 0,
                gradient_norm_at_exit,
                converged: true,
            });
        }

        let mut iterations = 0;
        let mut sweeps = 0;
        let converged = if self.dimension() == 1 {
            let line = self.line_maximize(0, &x, tol)?;
            iterations += line.iterations;
            sweeps = 1;
            x[0] = line.t;
            line.converged
        } else {
            let inner_tol = 0.25 * tol;
            let mut converged = false;
            while sweeps < MAX_SWEEPS {
                sweeps += 1;
                let mut largest_change: f64 = 0.0;
                let mut lines_converged = true;
                for j in 0..self.dimension() {
                    let line = self.line_maximize(j, &x, inner_tol)?;
                    iterations += line.iterations;
                    lines_converged &= line.converged;
                    largest_change = largest_change.max((line.t - x[j]).abs());
                    x[j] = line.t;
                }
                if lines_converged && largest_change < tol {
                    converged = true;
                    break;
                }
            }
            converged
        };

        let objective_at_argmax = self.objective(&x)?;
        let gradient_norm_at_exit = self.projected_gradient_norm(&x);
        Ok(SolveReport {
            argmax: x,
            objective_at_argmax,
            iterations,
            sweeps,
            gradient_norm_at_exit,
            converged,
        })
    }

    /// Brute-force maximizer over a uniform grid with `points_per_axis`
    /// points per parameter, inset by [`GRID_INSET`] from the bounds.
    /// Infeasible grid points are skipped. At most two parameters.
    pub fn grid_oracle(&self, points_per_axis: usize) -> Result<Vec<f64>> {
        if points_per_axis < 3 {
            return Err(Error::InvalidArgument(format!(
                "grid oracle needs at least 3 points per axis, got {points_per_axis}"
            )));
        }
        if self.dimension() > 2 {
            return Err(Error::InvalidArgument(format!(
                "grid oracle supports at most 2 parameters, problem has {}",
                self.dimension()
            )));
        }
        let axes: Vec<Vec<f64>> = self
            .bounds
            .iter()
            .map(|b| grid_axis(*b, points_per_axis))
            .collect();

        let mut best: Option<(f64, Vec<f64>)> = None;
        let mut first_error = None;
        let mut point = vec![0.0; self.dimension()];
        let mut visit = |point: &[f64]| match self.objective(point) {
            Ok(value) => {
                if best.as_ref().is_none_or(|(b, _)| value > *b) {
                    best = Some((value, point.to_vec()));
                }
            }
            Err(e) => {
                first_error.get_or_insert(e);
            }
        };
        match axes.as_slice() {
            [a] => {
                for &t in a {
                    point[0] = t;
                    visit(&point);
                }
            }
            [a, b] => {
                for &s in a {
                    for &t in b {
                        point[0] = s;
                        point[1] = t;
                        visit(&point);
                    }
                }
            }
            _ => unreachable!("dimension checked above"),
        }
        match (best, first_error) {
            (Some((_, x)), _) => Ok(x),
            (None, Some(e)) => Err(e),
            (None, None) => unreachable!("grid is never empty"),
        }
    }

    fn projected_gradient_norm(&self, x: &[f64]) -> f64 {
        match self.gradient(x) {
            Ok(grad) => grad
                .iter()
                .zip(x)
                .zip(&self.bounds)
                .map(|((&g, &xj), b)| {
                    let blocked = (xj <= b.lo && g < 0.0) || (xj >= b.hi && g > 0.0);
                    if blocked {
                        0.0
                    } else {
                        g * g
                    }
                })
                .sum::<f64>()
                .sqrt(),
            Err(_) => f64::INFINITY,
        }
    }

    /// The restriction of the objective to parameter `param` through `x`.
    fn line(&self, param: usize, x: &[f64]) -> Line {
        let mut pieces = Vec::new();
        for term in &self.terms {
            for (map, &g) in term.template.increments.iter().zip(&term.null_increments) {
                let slope = map.coefficients[param];
                let offset = map.eval(x) - slope * x[param];
                pieces.push(LinePiece {
                    offset,
                    slope,
                    reference: g,
                });
            }
        }
        Line { pieces }
    }

    fn line_maximize(&self, param: usize, x: &[f64], tol: f64) -> Result<LineResult> {
        let line = self.line(param, x);
        let domain = line
            .feasible(self.bounds[param])
            .ok_or(Error::EmptyLine { param })?;
        let fixed = |t| LineResult {
            t,
            iterations: 0,
            converged: true,
        };
        if domain.is_point() {
            return Ok(fixed(domain.lo));
        }
        if line.is_flat() {
            let t = x[param].clamp(domain.lo, domain.hi);
            return Ok(fixed(t));
        }
        check_concave(param, |t| line.value(t), domain)?;

        // Concave on the domain: a non-positive slope at the left end or a
        // non-negative slope at the right end pins the maximizer there.
        if let Some((d1, _)) = line.derivatives(domain.lo) {
            if d1 <= 0.0 {
                return Ok(fixed(domain.lo));
            }
        }
        if let Some((d1, _)) = line.derivatives(domain.hi) {
            if d1 >= 0.0 {
                return Ok(fixed(domain.hi));
            }
        }
        Ok(bracket_root(
            |t| line.derivatives(t).expect("interior point"),
            domain,
            tol,
            None,
        ))
    }
}

fn grid_axis(b: Interval, n: usize) -> Vec<f64> {
    if b.is_point() {
        return vec![b.lo];
    }
    let (lo, hi) = if b.width() > 4.0 * GRID_INSET {
        (b.lo + GRID_INSET, b.hi - GRID_INSET)
    } else {
        (b.lo, b.hi)
    };
    let step = (hi - lo) / (n - 1) as f64;
    (0..n)
        .map(|i| if i == n - 1 { hi } else { lo + step * i as f64 })
        .collect()
}

#[derive(Debug, Clone, Copy)]
struct LinePiece {
    offset: f64,
    slope: f64,
    reference: f64,
}

impl LinePiece {
    fn at(&self, t: f64) -> f64 {
        self.offset + self.slope * t
    }
}

/// Increments `offset + slope · t` along one coordinate.
#[derive(Debug, Clone)]
struct Line {
    pieces: Vec<LinePiece>,
}

impl Line {
    fn is_flat(&self) -> bool {
        self.pieces.iter().all(|p| p.slope == 0.0)
    }

    /// Values of `t` in `bounds` where every increment is non-negative.
    fn feasible(&self, bounds: Interval) -> Option<Interval> {
        let mut lo = bounds.lo;
        let mut hi = bounds.hi;
        for p in &self.pieces {
            if p.slope > 0.0 {
                lo = lo.max(-p.offset / p.slope);
            } else if p.slope < 0.0 {
                hi = hi.min(-p.offset / p.slope);
            } else if p.offset < 0.0 {
                return None;
            }
        }
        (lo <= hi).then_some(Interval::new(lo, hi))
    }

    fn value(&self, t: f64) -> f64 {
        self.pieces
            .iter()
            .map(|p| {
                let f = p.at(t).max(0.0);
                if f == 0.0 {
                    0.0
                } else {
                    -f * (f / p.reference).ln()
                }
            })
            .sum()
    }

    /// First and second derivative at `t`, or `None` when an increment that
    /// moves with `t` is not strictly positive there.
    fn derivatives(&self, t: f64) -> Option<(f64, f64)> {
        let mut d1 = 0.0;
        let mut d2 = 0.0;
        for p in self.pieces.iter().filter(|p| p.slope != 0.0) {
            let f = p.at(t);
            if !(f > 0.0) {
                return None;
            }
            d1 += p.slope * (-(f / p.reference).ln() - 1.0);
            d2 -= p.slope * p.slope / f;
        }
        Some((d1, d2))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct LineResult {
    t: f64,
    iterations: usize,
    converged: bool,
}

/// Rejects a line whose second difference over the quarter points of
/// `domain` is positive beyond rounding.
fn check_concave(param: usize, value: impl Fn(f64) -> f64, domain: Interval) -> Result<()> {
    let q = 0.25 * domain.width();
    let (l, m, r) = (domain.lo + q, domain.midpoint(), domain.hi - q);
    let (vl, vm, vr) = (value(l), value(m), value(r));
    let second_difference = vl - 2.0 * vm + vr;
    let scale = vl.abs() + 2.0 * vm.abs() + vr.abs();
    if second_difference > 1e-9 * (1.0 + scale) {
        return Err(Error::NonConcave {
            param,
            second_difference,
        });
    }
    Ok(())
}

/// Finds the root of a strictly decreasing derivative inside `domain`,
/// assuming it is positive near `domain.lo` and negative near `domain.hi`.
///
/// `derivatives(t)` returns the first and second derivative at an interior
/// point. Each iteration evaluates a Newton point (or the midpoint when Newton
/// leaves the bracket), probes both sides of a settled Newton estimate, and
/// bisects when the bracket has not at least halved.
fn bracket_root(
    derivatives: impl Fn(f64) -> (f64, f64),
    domain: Interval,
    tol: f64,
    mut widths: Option<&mut Vec<f64>>,
) -> LineResult {
    let mut lo = domain.lo;
    let mut hi = domain.hi;
    let mut x = domain.midpoint();
    let mut iterations = 0;

    // Returns true when the root is hit exactly.
    let shrink = |t: f64, d1: f64, lo: &mut f64, hi: &mut f64| -> bool {
        if d1 > 0.0 {
            *lo = t;
        } else if d1 < 0.0 {
            *hi = t;
        } else {
            *lo = t;
            *hi = t;
            return true;
        }
        false
    };

    while hi - lo > tol {
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            // bracket is two adjacent floats
            break;
        }
        if iterations == MAX_LINE_ITERATIONS {
            return LineResult {
                t: lo + 0.5 * (hi - lo),
                iterations,
                converged: false,
            };
        }
        iterations += 1;
        let start_width = hi - lo;

        let (d1, d2) = derivatives(x);
        if shrink(x, d1, &mut lo, &mut hi) {
            break;
        }
        let step = -d1 / d2;
        let newton = x + step;
        let mut exact = false;
        if step.abs() <= 0.25 * tol && lo < newton && newton < hi {
            for probe in [newton - 0.5 * tol, newton + 0.5 * tol] {
                if lo < probe && probe < hi && !exact {
                    exact = shrink(probe, derivatives(probe).0, &mut lo, &mut hi);
                }
            }
        }
        if !exact && hi - lo > 0.5 * start_width {
            let m = lo + 0.5 * (hi - lo);
            exact = shrink(m, derivatives(m).0, &mut lo, &mut hi);
        }
        if let Some(w) = widths.as_deref_mut() {
            w.push(hi - lo);
        }
        if exact {
            break;
        }
        x = if lo < newton && newton < hi {
            newton
        } else {
            lo + 0.5 * (hi - lo)
        };
    }
    LineResult {
        t: lo + 0.5 * (hi - lo),
        iterations,
        converged: true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::make_chain;

    fn event_problem(p1: f64, p2: f64) -> MrdpProblem {
        crate::independence::independence_problem(p1, p2).unwrap()
    }

    // 2·(−Σ f ln f) over [0.3, 0.3, 0.2, 0.2], mpmath.
    const TWICE_ORACLE: f64 = 2.732_317_695_138_403_5;

    #[test]
    fn objective_values() {
        let sym = event_problem(0.5, 0.5);
        assert!((sym.objective(&[0.25]).unwrap() - 2.0 * 4f64.ln()).abs() < 1e-14);
        let p = event_problem(0.6, 0.5);
        assert!((p.objective(&[0.3]).unwrap() - TWICE_ORACLE).abs() < 1e-12);
        // increments [0, .5, .5, 0] on both chains
        assert!((sym.objective(&[0.0]).unwrap() - 2.0 * std::f64::consts::LN_2).abs() < 1e-14);
    }

    #[test]
    fn objective_rejects_infeasible_points() {
        let chain = make_chain(&["a", "b", "c"]).unwrap();
        let template = GradingTemplate::new(
            chain.clone(),
            vec![
                AffineMap::constant(0.0, 1),
                AffineMap::new(0.0, vec![1.0]),
                AffineMap::constant(0.5, 1),
            ],
        )
        .unwrap();
        let problem = MrdpProblem::new(
            vec![(template, chain.indexing_function())],
            vec![Interval::new(0.0, 1.0)],
        )
        .unwrap();
        let err = problem.objective(&[0.8]).unwrap_err();
        assert!(
            matches!(
                err,
                Error::InfeasiblePoint {
                    template: 0,
                    node: 2,
                    ..
                }
            ),
            "{err}"
        );
        assert!(matches!(
            problem.objective(&[1.5]),
            Err(Error::OutsideInterval { .. })
        ));
        // the box is larger than the feasible set, the solver still finds 0.25
        let report = problem.maximize(1e-12).unwrap();
        assert!((report.argmax[0] - 0.25).abs() < 1e-12);
    }

    #[test]
    fn gradient_vanishes_at_product() {
        let p = event_problem(0.6, 0.5);
        assert!(p.gradient(&[0.3]).unwrap()[0].abs() < 1e-12);
        let sym = event_problem(0.5, 0.5);
        assert!(sym.gradient(&[0.2]).unwrap()[0] > 0.0);
        // 2 · ln 2.25
        assert!((sym.gradient(&[0.2]).unwrap()[0] - 2.0 * 2.25f64.ln()).abs() < 1e-12);
        assert!(matches!(sym.gradient(&[0.0]), Err(Error::Boundary { .. })));
    }

    #[test]
    fn maximize_worked_instances() {
        let r = event_problem(0.6, 0.5).maximize(1e-12).unwrap();
        assert!(r.converged);
        assert!((r.argmax[0] - 0.3).abs() < 1e-10);
        assert!(r.iterations <= MAX_LINE_ITERATIONS);
        let r = event_problem(0.5, 0.5).maximize(1e-12).unwrap();
        assert!((r.argmax[0] - 0.25).abs() < 1e-10);
    }

    #[test]
    fn single_point_region() {
        let chain = make_chain(&["∅", "A∩B", "A", "A∪B", "U"]).unwrap();
        let base = event_problem(0.6, 0.5);
        let (template, null) = base.templates().next().unwrap();
        let problem = MrdpProblem::new(
            vec![(template.clone(), null.clone())],
            vec![Interval::point(0.3)],
        )
        .unwrap();
        assert_eq!(template.chain(), &chain);
        let r = problem.maximize(1e-12).unwrap();
        assert_eq!(r.argmax, vec![0.3]);
        assert!(r.converged);
        assert_eq!(r.iterations, 0);
        assert_eq!(problem.grid_oracle(5).unwrap(), vec![0.3]);
    }

    #[test]
    fn empty_region_rejected() {
        let base = event_problem(0.6, 0.5);
        let (template, null) = base.templates().next().unwrap();
        let err = MrdpProblem::new(
            vec![(template.clone(), null.clone())],
            vec![Interval::new(0.5, 0.1)],
        )
        .unwrap_err();
        assert!(matches!(err, Error::EmptyRegion { param: 0, .. }));
    }

    #[test]
    fn invalid_tolerance_rejected() {
        let p = event_problem(0.6, 0.5);
        assert!(p.maximize(0.0).is_err());
        assert!(p.maximize(f64::NAN).is_err());
    }

    #[test]
    fn grid_oracle_matches_closed_form() {
        let p = event_problem(0.6, 0.5);
        let x = p.grid_oracle(10_001).unwrap();
        assert!((x[0] - 0.3).abs() <= 0.4 / 10_000.0);
        let sym = event_problem(0.5, 0.5);
        let x = sym.grid_oracle(10_001).unwrap();
        assert!((x[0] - 0.25).abs() <= 0.5 / 10_000.0);
        assert!(p.grid_oracle(2).is_err());
    }

    #[test]
    fn non_concave_line_is_reported() {
        let err = check_concave(0, |t| t * t, Interval::new(-1.0, 1.0)).unwrap_err();
        assert!(matches!(err, Error::NonConcave { param: 0, .. }));
        assert!(check_concave(0, |t| -t * t, Interval::new(-1.0, 1.0)).is_ok());
        assert!(check_concave(0, |t| 3.0 * t, Interval::new(-1.0, 1.0)).is_ok());
    }

    #[test]
    fn bracket_width_at_least_halves() {
        // derivative of d at p1 = 0.7, p2 = 0.2
        let (p1, p2) = (0.7, 0.2);
        let deriv = |x: f64| {
            let q = 1.0 - p1 - p2 + x;
            let d1 = -x.ln() + (p1 - x).ln() + (p2 - x).ln() - q.ln();
            let d2 = -1.0 / x - 1.0 / (p1 - x) - 1.0 / (p2 - x) - 1.0 / q;
            (d1, d2)
        };
        let mut widths = vec![0.2];
        let r = bracket_root(deriv, Interval::new(0.0, 0.2), 1e-12, Some(&mut widths));
        assert!(r.converged);
        assert!((r.t - 0.14).abs() < 1e-12);
        assert!(r.iterations <= MAX_LINE_ITERATIONS);
        for w in widths.windows(2) {
            assert!(w[1] <= 0.5 * w[0], "{} -> {}", w[0], w[1]);
        }
    }

    #[test]
    fn bracket_terminates_below_float_spacing() {
        // tolerance far below float spacing near 1e6 forces the float-adjacency exit
        let r = bracket_root(
            |t| (1e6 + 0.1 - t, -1.0),
            Interval::new(1e6, 1e6 + 1.0),
            1e-300,
            None,
        );
        assert!(r.converged);
        assert!((r.t - (1e6 + 0.1)).abs() < 1e-9);
        // a root-free derivative still terminates within the cap
        let r = bracket_root(|_| (1.0, -1.0), Interval::new(0.0, 1.0), 1e-300, None);
        assert!(r.iterations <= MAX_LINE_ITERATIONS);
        assert!(r.t > 1.0 - 1e-12);
    }

    #[test]
    fn boundary_maximizer_inside_box() {
        // F on a 3-chain: [0, x, 1] against G = [0, 1, 10]; increments x and 1 - x with
        // g = (1, 9); maximizer x = 1/10 unless the box cuts it off.
        let chain = make_chain(&["a", "b", "c"]).unwrap();
        let template = GradingTemplate::new(
            chain.clone(),
            vec![
                AffineMap::constant(0.0, 1),
                AffineMap::new(0.0, vec![1.0]),
                AffineMap::constant(1.0, 1),
            ],
        )
        .unwrap();
        let null = crate::chain::make_grading(&chain, &[0.0, 1.0, 10.0]).unwrap();
        let free = MrdpProblem::new(
            vec![(template.clone(), null.clone())],
            vec![Interval::new(0.0, 1.0)],
        )
        .unwrap();
        let r = free.maximize(1e-12).unwrap();
        assert!((r.argmax[0] - 0.1).abs() < 1e-12);
        let boxed =
            MrdpProblem::new(vec![(template, null)], vec![Interval::new(0.4, 0.9)]).unwrap();
        let r = boxed.maximize(1e-12).unwrap();
        assert_eq!(r.argmax, vec![0.4]);
        assert!(r.converged);
        assert_eq!(r.gradient_norm_at_exit, 0.0);
    }
}
