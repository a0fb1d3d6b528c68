//! The PSLQ(τ) driver: detection, the height check, the running lower bound
//! on the norm of any relation, and the iteration cap.

use std::fmt;

use rug::{Float, Integer};
use thiserror::Error;

use crate::arith::{ceil_snapped, cmp_finite, BigReal, PrecisionContext};
use crate::pslq::{sum_of_squares, unitize, HMatrix, PslqError, PslqState, Unitized};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RelationError {
    #[error("integer relation search needs at least two coordinates, got {0}")]
    DimensionTooSmall(usize),
    #[error("the input vector is zero")]
    ZeroVector,
    #[error("detection threshold epsilon must be positive")]
    NonPositiveEpsilon,
    #[error("height bound must be positive")]
    NonPositiveHeight,
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    /// H degenerated without any column of B passing the residual budget:
    /// the working precision is too low for this input.
    #[error("working precision exhausted at iteration {iteration}")]
    PrecisionExhausted { iteration: u64 },
}

/// A nonzero integer vector `m` with `m · x ≈ 0`, sign-normalised so that its
/// last nonzero coefficient is positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntegerRelation {
    coefficients: Vec<Integer>,
}

impl IntegerRelation {
    /// `None` when every coefficient is zero.
    pub fn new(mut coefficients: Vec<Integer>) -> Option<Self> {
        let last = coefficients.iter().rposition(|c| !c.is_zero())?;
        if coefficients[last] < 0 {
            for c in &mut coefficients {
                *c = -c.clone();
            }
        }
        Some(IntegerRelation { coefficients })
    }

    pub fn from_i64s(coefficients: &[i64]) -> Option<Self> {
        Self::new(coefficients.iter().map(|&c| Integer::from(c)).collect())
    }

    pub fn coefficients(&self) -> &[Integer] {
        &self.coefficients
    }

    pub fn into_coefficients(self) -> Vec<Integer> {
        self.coefficients
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// L∞ norm.
    pub fn height(&self) -> Integer {
        self.coefficients
            .iter()
            .map(|c| c.clone().abs())
            .max()
            .unwrap_or_default()
    }

    pub fn norm_squared(&self) -> Integer {
        self.coefficients.iter().map(|c| c.clone().square()).sum()
    }

    pub fn euclidean_norm(&self, prec: u32) -> Float {
        Float::with_val(prec, self.norm_squared()).sqrt()
    }

    /// `|m · x|` at the precision of `ctx`.
    pub fn residual(&self, x: &[BigReal], ctx: &PrecisionContext) -> BigReal {
        dot(&self.coefficients, x, ctx).abs()
    }
}

impl fmt::Display for IntegerRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coefficients.iter().map(Integer::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

fn dot(m: &[Integer], x: &[BigReal], ctx: &PrecisionContext) -> BigReal {
    let mut acc = ctx.zero();
    for (c, v) in m.iter().zip(x) {
        if !c.is_zero() {
            acc += Float::with_val(ctx.precision_bits(), v * c);
        }
    }
    acc
}

/// Which test fired when a relation was accepted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Detection {
    /// A coordinate of the input was exactly zero.
    ZeroCoordinate,
    /// Some entry of `x̄` collapsed to within the input-error budget.
    Collapse,
    /// A diagonal entry of `H` dropped below epsilon.
    SmallDiagonal,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RelationOutcome {
    Found {
        relation: IntegerRelation,
        residual: BigReal,
    },
    NoRelationWithinHeight {
        lower_bound: BigReal,
    },
    IterationCapReached {
        lower_bound: BigReal,
    },
}

impl RelationOutcome {
    pub fn relation(&self) -> Option<&IntegerRelation> {
        match self {
            RelationOutcome::Found { relation, .. } => Some(relation),
            _ => None,
        }
    }
}

/// Full record of one run of [`find_relation`].
#[derive(Debug, Clone)]
pub struct RelationSearch {
    pub outcome: RelationOutcome,
    pub detection: Option<Detection>,
    /// Swap/rotate iterations performed.
    pub iterations: u64,
    pub iteration_cap: u64,
    /// `1 / max_j |h_jj|` after the initial reduction and after every iteration.
    pub lower_bound_trace: Vec<BigReal>,
}

/// Inputs to [`find_relation`] besides the vector itself.
#[derive(Debug, Clone)]
pub struct RelationParams {
    /// Largest admissible `|m|∞`.
    pub height_bound: Integer,
    /// Bound on the absolute error of each coordinate of `x`. A relation is
    /// accepted when `|m · x| < n · N · epsilon`; a diagonal entry of `H` below
    /// `epsilon` also triggers detection.
    pub epsilon: BigReal,
    pub gamma: BigReal,
    pub tau: BigReal,
}

impl RelationParams {
    /// `γ = 2`, `τ = √2`.
    pub fn new(height_bound: impl Into<Integer>, epsilon: BigReal, ctx: &PrecisionContext) -> Self {
        RelationParams {
            height_bound: height_bound.into(),
            epsilon,
            gamma: default_gamma(ctx),
            tau: default_tau(ctx),
        }
    }

    pub fn with_gamma_tau(mut self, gamma: BigReal, tau: BigReal) -> Self {
        self.gamma = gamma;
        self.tau = tau;
        self
    }

    pub fn validate(&self) -> Result<(), RelationError> {
        if self.epsilon.is_nan() || self.epsilon <= 0 {
            return Err(RelationError::NonPositiveEpsilon);
        }
        if self.height_bound <= 0 {
            return Err(RelationError::NonPositiveHeight);
        }
        validate_gamma_tau(&self.gamma, &self.tau)
    }
}

pub fn default_gamma(ctx: &PrecisionContext) -> BigReal {
    ctx.real(2)
}

pub fn default_tau(ctx: &PrecisionContext) -> BigReal {
    ctx.sqrt(&ctx.real(2))
}

/// Largest `τ` consistent with `γ`: `1/τ² = 1/γ² + 1/4`.
pub fn max_tau_for_gamma(gamma: &Float) -> Float {
    let prec = gamma.prec();
    let inv = Float::with_val(prec, gamma.square_ref()).recip() + 0.25f64;
    inv.sqrt().recip()
}

/// Requires `γ > √(4/3)` and `1 < τ ≤ τ_max(γ)` (up to rounding).
pub fn validate_gamma_tau(gamma: &Float, tau: &Float) -> Result<(), RelationError> {
    let prec = gamma.prec().max(tau.prec());
    let gamma_sq = Float::with_val(prec, gamma.square_ref());
    if !gamma.is_finite() || *gamma <= 0 || gamma_sq * 3u32 <= 4u32 {
        return Err(RelationError::InvalidParameters(format!(
            "gamma must exceed sqrt(4/3), got {}",
            gamma.to_f64()
        )));
    }
    if !tau.is_finite() || *tau <= 1 {
        return Err(RelationError::InvalidParameters(format!(
            "tau must exceed 1, got {}",
            tau.to_f64()
        )));
    }
    let max_tau = max_tau_for_gamma(&Float::with_val(prec, gamma));
    let slack = Float::with_val(prec, &max_tau >> (prec as i32 / 2));
    if *tau > max_tau + slack {
        return Err(RelationError::InvalidParameters(format!(
            "tau {} is inconsistent with gamma {} (need 1/tau^2 >= 1/gamma^2 + 1/4)",
            tau.to_f64(),
            gamma.to_f64()
        )));
    }
    Ok(())
}

/// `1 / max_j |h_jj|`, a lower bound on the norm of every relation.
pub fn lower_bound_norm(h: &HMatrix) -> BigReal {
    let max = h
        .diagonal()
        .map(|d| d.clone().abs())
        .max_by(cmp_finite)
        .expect("H has at least one column");
    max.recip()
}

/// `⌈C(n,2) · log(γ^(n-1) · bound) / log τ⌉`, at least 1.
pub fn iteration_cap(n: usize, gamma: &Float, tau: &Float, relation_norm_bound: &Float) -> u64 {
    let prec = gamma.prec().max(tau.prec()).max(relation_norm_bound.prec()).max(128);
    let pairs = (n * n.saturating_sub(1) / 2) as u64;
    let log_gamma = Float::with_val(prec, gamma.ln_ref());
    let numerator = log_gamma * (n.saturating_sub(1) as u64)
        + Float::with_val(prec, relation_norm_bound.ln_ref());
    let log_tau = Float::with_val(prec, tau.ln_ref());
    let value = numerator * pairs / log_tau;
    if value <= 0 {
        return 1;
    }
    let cap = ceil_snapped(&value, (prec / 5) as i32);
    cap.to_u64().unwrap_or(u64::MAX).max(1)
}

/// Runs PSLQ(τ) on `x`.
///
/// Stops with [`RelationOutcome::Found`] when some column `m` of `B` has
/// `|m · x| < n · N · ε` and `|m|∞ ≤ N`; with
/// [`RelationOutcome::NoRelationWithinHeight`] when only taller relations
/// are detected or the norm lower bound exceeds `√n · N`; and with
/// [`RelationOutcome::IterationCapReached`] after [`iteration_cap`]
/// iterations computed with the norm surrogate `√(n+1) · N`.
pub fn find_relation(
    x: &[BigReal],
    params: &RelationParams,
    ctx: &PrecisionContext,
) -> Result<RelationSearch, RelationError> {
    find_relation_observed(x, params, ctx, &mut |_| {})
}

/// [`find_relation`], calling `observer` after every Hermite reduction.
pub fn find_relation_observed(
    x: &[BigReal],
    params: &RelationParams,
    ctx: &PrecisionContext,
    observer: &mut dyn FnMut(&PslqState),
) -> Result<RelationSearch, RelationError> {
    params.validate()?;
    let n = x.len();
    let prec = ctx.precision_bits();
    let unit = match unitize(x, ctx) {
        Ok(Unitized::Unit(u)) => u,
        Ok(Unitized::ZeroCoordinate(index)) => {
            let mut coeffs = vec![Integer::new(); n];
            coeffs[index] = Integer::from(1);
            let relation = IntegerRelation::new(coeffs).expect("unit vector");
            return Ok(RelationSearch {
                outcome: RelationOutcome::Found {
                    relation,
                    residual: ctx.zero(),
                },
                detection: Some(Detection::ZeroCoordinate),
                iterations: 0,
                iteration_cap: 0,
                lower_bound_trace: Vec::new(),
            });
        }
        Err(PslqError::DimensionTooSmall(d)) => return Err(RelationError::DimensionTooSmall(d)),
        Err(PslqError::ZeroVector) => return Err(RelationError::ZeroVector),
        Err(e) => unreachable!("unitize: {e}"),
    };

    let height = &params.height_bound;
    let x_norm = unit_scale(x, ctx);
    let budget = Float::with_val(prec, &params.epsilon * height) * (n as u64);
    // |y_j| · |x| is the residual of column j of B.
    let collapse_threshold = Float::with_val(prec, &budget / &x_norm) * 2u32;
    let height_f = ctx.from_integer(height);
    let norm_bound = ctx.sqrt(&ctx.real(n as u64)) * &height_f;
    let cap_surrogate = ctx.sqrt(&ctx.real(n as u64 + 1)) * &height_f;
    let cap = iteration_cap(n, &params.gamma, &params.tau, &cap_surrogate);

    let mut state = PslqState::new(&unit, params.gamma.clone(), params.tau.clone(), ctx);
    let mut trace = Vec::new();
    let driver = Driver {
        x,
        ctx,
        height,
        budget: &budget,
        collapse_threshold: &collapse_threshold,
        epsilon: &params.epsilon,
    };

    let finish = |outcome, detection, state: &PslqState, trace| RelationSearch {
        outcome,
        detection,
        iterations: state.iteration(),
        iteration_cap: cap,
        lower_bound_trace: trace,
    };

    let mut pending_reduction = Some(state.hermite_reduce(ctx));
    loop {
        match pending_reduction.take().expect("reduction result") {
            Ok(()) => observer(&state),
            Err(PslqError::DegenerateDiagonal { .. }) => {
                return match driver.accept(&state, true) {
                    Some((outcome, detection)) => Ok(finish(outcome, Some(detection), &state, trace)),
                    None => Err(RelationError::PrecisionExhausted {
                        iteration: state.iteration(),
                    }),
                };
            }
            Err(e) => unreachable!("hermite_reduce: {e}"),
        }
        let bound = lower_bound_norm(state.h());
        trace.push(bound.clone());

        if let Some((outcome, detection)) = driver.detect(&state) {
            return Ok(finish(outcome, Some(detection), &state, trace));
        }
        if bound > norm_bound {
            let outcome = RelationOutcome::NoRelationWithinHeight { lower_bound: bound };
            return Ok(finish(outcome, None, &state, trace));
        }
        if state.iteration() >= cap {
            let outcome = RelationOutcome::IterationCapReached { lower_bound: bound };
            return Ok(finish(outcome, None, &state, trace));
        }

        state.advance_iteration();
        let r = state.select_pivot();
        match state.swap_and_rotate(r, ctx) {
            Ok(()) => pending_reduction = Some(state.hermite_reduce(ctx)),
            Err(PslqError::DegenerateRotation { .. }) => {
                return match driver.accept(&state, true) {
                    Some((outcome, detection)) => Ok(finish(outcome, Some(detection), &state, trace)),
                    None => Err(RelationError::PrecisionExhausted {
                        iteration: state.iteration(),
                    }),
                };
            }
            Err(e) => unreachable!("swap_and_rotate: {e}"),
        }
    }
}

fn unit_scale(x: &[BigReal], ctx: &PrecisionContext) -> BigReal {
    ctx.sqrt(&sum_of_squares(x, ctx))
}

struct Driver<'a> {
    x: &'a [BigReal],
    ctx: &'a PrecisionContext,
    height: &'a Integer,
    budget: &'a BigReal,
    collapse_threshold: &'a BigReal,
    epsilon: &'a BigReal,
}

impl Driver<'_> {
    /// Runs both detection tests; `None` means keep iterating.
    fn detect(&self, state: &PslqState) -> Option<(RelationOutcome, Detection)> {
        let collapsed = state
            .xbar()
            .iter()
            .any(|y| y.clone().abs() < *self.collapse_threshold);
        let small_diagonal = state.h().diagonal().any(|d| d.clone().abs() < *self.epsilon);
        if !collapsed && !small_diagonal {
            return None;
        }
        let (outcome, _) = self.accept(state, collapsed)?;
        let detection = if collapsed {
            Detection::Collapse
        } else {
            Detection::SmallDiagonal
        };
        Some((outcome, detection))
    }

    /// Among columns of B whose residual is within budget, prefers the
    /// shortest. Accepts it when `|m|∞ ≤ N`; reports no relation when only
    /// taller candidates pass.
    fn accept(&self, state: &PslqState, collapsed: bool) -> Option<(RelationOutcome, Detection)> {
        let b = state.b();
        let mut best: Option<(IntegerRelation, BigReal)> = None;
        for j in 0..b.size() {
            let Some(relation) = IntegerRelation::new(b.column(j)) else {
                continue;
            };
            let residual = relation.residual(self.x, self.ctx);
            if residual >= *self.budget {
                continue;
            }
            let better = best
                .as_ref()
                .is_none_or(|(r, _)| relation.norm_squared() < r.norm_squared());
            if better {
                best = Some((relation, residual));
            }
        }
        let detection = if collapsed {
            Detection::Collapse
        } else {
            Detection::SmallDiagonal
        };
        let (relation, residual) = best?;
        if relation.height() > *self.height {
            let lower_bound = lower_bound_norm(state.h());
            return Some((RelationOutcome::NoRelationWithinHeight { lower_bound }, detection));
        }
        Some((RelationOutcome::Found { relation, residual }, detection))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::make_context;
    use crate::pslq::HMatrix;
    use rug::Rational;

    fn ctx() -> PrecisionContext {
        make_context(50, 10).unwrap()
    }

    fn found(search: &RelationSearch) -> &IntegerRelation {
        search.outcome.relation().expect("relation found")
    }

    #[test]
    fn sqrt2_power_vector() {
        let ctx = ctx();
        let a = ctx.sqrt(&ctx.real(2));
        let x = vec![ctx.real(1), a.clone(), Float::with_val(ctx.precision_bits(), a.square_ref())];
        let params = RelationParams::new(5, ctx.pow10(-20), &ctx);
        let search = find_relation(&x, &params, &ctx).unwrap();
        assert_eq!(found(&search), &IntegerRelation::from_i64s(&[-2, 0, 1]).unwrap());
    }

    #[test]
    fn exact_pair() {
        let ctx = ctx();
        let x = vec![ctx.real(1), ctx.real(2)];
        let params = RelationParams::new(3, ctx.zero_threshold(), &ctx);
        let search = find_relation(&x, &params, &ctx).unwrap();
        assert_eq!(found(&search).to_string(), "(-2, 1)");
    }

    #[test]
    fn golden_ratio_has_no_height_one_relation() {
        let ctx = ctx();
        let phi = (ctx.sqrt(&ctx.real(5)) + 1u32) / 2u32;
        let x = vec![ctx.real(1), phi];
        let params = RelationParams::new(1, ctx.pow10(-30), &ctx);
        let search = find_relation(&x, &params, &ctx).unwrap();
        assert!(matches!(search.outcome, RelationOutcome::NoRelationWithinHeight { .. }));
    }

    #[test]
    fn zero_coordinate_gives_unit_relation() {
        let ctx = ctx();
        let x = vec![ctx.real(0), ctx.real(7)];
        let params = RelationParams::new(3, ctx.zero_threshold(), &ctx);
        let search = find_relation(&x, &params, &ctx).unwrap();
        assert_eq!(found(&search).to_string(), "(1, 0)");
        assert_eq!(search.detection, Some(Detection::ZeroCoordinate));
    }

    #[test]
    fn rejects_bad_inputs() {
        let ctx = ctx();
        let params = RelationParams::new(3, ctx.zero_threshold(), &ctx);
        assert_eq!(
            find_relation(&[ctx.real(1)], &params, &ctx).unwrap_err(),
            RelationError::DimensionTooSmall(1)
        );
        let mut bad = params.clone();
        bad.epsilon = ctx.zero();
        assert_eq!(
            find_relation(&[ctx.real(1), ctx.real(2)], &bad, &ctx).unwrap_err(),
            RelationError::NonPositiveEpsilon
        );
        let bad = params.clone().with_gamma_tau(ctx.real(1.1), ctx.real(1.05));
        assert!(matches!(bad.validate(), Err(RelationError::InvalidParameters(_))));
        let bad = params.clone().with_gamma_tau(ctx.real(2), ctx.real(1.5));
        assert!(matches!(bad.validate(), Err(RelationError::InvalidParameters(_))));
        let ok = params.with_gamma_tau(ctx.real(2), ctx.real(1.3));
        assert!(ok.validate().is_ok());
    }

    #[test]
    fn default_parameters_are_consistent() {
        let ctx = ctx();
        let max_tau = max_tau_for_gamma(&default_gamma(&ctx));
        let diff = Float::with_val(ctx.precision_bits(), &max_tau - default_tau(&ctx));
        assert!(ctx.is_negligible(&diff));
        assert!(validate_gamma_tau(&default_gamma(&ctx), &default_tau(&ctx)).is_ok());
    }

    #[test]
    fn lower_bound_of_single_column() {
        let ctx = ctx();
        let q = |a, b| ctx.from_rational(&Rational::from((a, b)));
        let h = HMatrix::from_rows(vec![vec![q(4, 5)], vec![q(-3, 5)]]);
        let lb = lower_bound_norm(&h);
        let diff = Float::with_val(ctx.precision_bits(), &lb - q(5, 4));
        assert!(ctx.is_negligible(&diff));
    }

    #[test]
    fn iteration_cap_examples() {
        let ctx = ctx();
        let cap = iteration_cap(2, &ctx.real(2), &default_tau(&ctx), &ctx.real(2));
        assert_eq!(cap, 4);
        // n = 2, bound 1: log(γ)/log(τ) = 2 for the defaults
        let cap = iteration_cap(2, &ctx.real(2), &default_tau(&ctx), &ctx.real(1));
        assert_eq!(cap, 2);
        // n = 5, N = 20, bound √6·20: 10·log(2^4·√6·20)/log(√2), evaluated in f64
        let bound = ctx.sqrt(&ctx.real(6)) * 20u32;
        let expected = (10.0 * (16.0 * 6f64.sqrt() * 20.0).ln() / 2f64.sqrt().ln()).ceil() as u64;
        assert_eq!(iteration_cap(5, &ctx.real(2), &default_tau(&ctx), &bound), expected);
    }

    #[test]
    fn relation_sign_normalisation() {
        let r = IntegerRelation::from_i64s(&[2, -1, 0]).unwrap();
        assert_eq!(r.to_string(), "(-2, 1, 0)");
        assert_eq!(r.height(), 2);
        assert_eq!(r.norm_squared(), 5);
        assert!(IntegerRelation::from_i64s(&[0, 0]).is_none());
    }
}
