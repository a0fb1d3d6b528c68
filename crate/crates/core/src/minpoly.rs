//! Minimal polynomials from a decimal approximation `α̃` and bounds `⟨n, N⟩`.
//!
//! The accuracy contract is `|α - α̃| < 1/(n²(n+1)^(n-1/2) N^(2n))`; within it
//! the primitive part of the relation found for `(1, α̃, …, α̃^d)` is the
//! minimal polynomial of `α`. Degrees are tried in ascending order so that an
//! upper bound `n` larger than the true degree still gives an irreducible
//! answer.

use std::fmt;

use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde_json::{json, Value};
use thiserror::Error;

use crate::arith::{ceil_snapped, format_decimal, format_scientific, make_context, parse_decimal};
use crate::arith::{ArithError, BigReal, PrecisionContext};
use crate::polynomial::IntPolynomial;
use crate::pslq::PslqState;
use crate::relation::{
    default_gamma, default_tau, find_relation_observed, RelationError, RelationOutcome,
    RelationParams,
};

/// Bits used for bound evaluations that happen before a context exists.
const BOUND_BITS: u32 = 256;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MinpolyError {
    #[error("degree bound must be at least 1")]
    ZeroDegree,
    #[error("height bound must be at least 1")]
    NonPositiveHeight,
    #[error("minimum degree {min} exceeds degree bound {max}")]
    MinDegreeTooLarge { min: u32, max: u32 },
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Relation(#[from] RelationError),
    /// The relation found does not meet the residual budget; rerun with more
    /// digits.
    #[error("certification failed for {polynomial}: |g(a)| = {residual} exceeds budget {budget}")]
    CertificationFailed {
        polynomial: String,
        residual: String,
        budget: String,
    },
}

impl MinpolyError {
    /// True for the failures that more precision could cure.
    pub fn is_precision_failure(&self) -> bool {
        matches!(
            self,
            MinpolyError::CertificationFailed { .. }
                | MinpolyError::Relation(RelationError::PrecisionExhausted { .. })
        )
    }
}

/// `n² (n+1)^n N^(2n)`, the exact part of the denominator of the bound.
fn bound_denominator(n: u32, height: &Integer) -> Integer {
    Integer::from(n).square() * Integer::from(n + 1).pow(n) * height.clone().pow(2 * n)
}

/// `ε(n, N) = 1/(n² (n+1)^(n-1/2) N^(2n)) = √(n+1) / (n² (n+1)^n N^(2n))`.
pub fn epsilon_bound(n: u32, height: &Integer, ctx: &PrecisionContext) -> BigReal {
    epsilon_at(n, height, ctx.precision_bits())
}

pub(crate) fn epsilon_at(n: u32, height: &Integer, prec: u32) -> Float {
    assert!(n >= 1 && *height >= 1, "epsilon_bound needs n >= 1 and N >= 1");
    let root = Float::with_val(prec, n + 1).sqrt();
    root / bound_denominator(n, height)
}

/// `⌈-log₁₀ ε(n, N)⌉`.
pub fn digits_required(n: u32, height: &Integer) -> u32 {
    assert!(n >= 1 && *height >= 1, "digits_required needs n >= 1 and N >= 1");
    let den = Float::with_val(BOUND_BITS, bound_denominator(n, height));
    let half_log = Float::with_val(BOUND_BITS, n + 1).log10() / 2u32;
    let value = den.log10() - half_log;
    ceil_snapped(&value, 40).to_u32().expect("digit count fits in u32")
}

/// Extra significant digits carried beyond the bound.
pub fn guard_digits(n: u32) -> u32 {
    10.max(2 * n)
}

/// `(1, α̃, …, α̃ⁿ)`: each power is exact, then rounded once.
pub fn power_vector(approx: &Rational, n: u32, ctx: &PrecisionContext) -> Vec<BigReal> {
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut power = Rational::from(1);
    for _ in 0..=n {
        out.push(ctx.from_rational(&power));
        power *= approx;
    }
    out
}

/// Error bound on the power vector: `max_{1≤i≤d} i (|α̃|+ε)^(i-1) ε` when
/// `|α - α̃| ≤ ε`.
pub fn power_error_bound(approx: &Rational, d: u32, epsilon: &BigReal) -> BigReal {
    let prec = epsilon.prec();
    let base = Float::with_val(prec, approx.clone().abs()) + epsilon;
    let mut best = Float::new(prec);
    let mut power = Float::with_val(prec, 1);
    for i in 1..=d {
        let term = Float::with_val(prec, &power * epsilon) * i;
        if term > best {
            best = term;
        }
        power *= &base;
    }
    best
}

/// The triple `⟨α̃, n, N⟩` standing in for an algebraic number, plus its
/// minimal polynomial once known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraicHandle {
    pub approx: Rational,
    pub degree_bound: u32,
    pub height_bound: Integer,
    pub minimal_poly: Option<IntPolynomial>,
}

impl AlgebraicHandle {
    pub fn new(approx: Rational, degree_bound: u32, height_bound: impl Into<Integer>) -> Self {
        AlgebraicHandle {
            approx,
            degree_bound,
            height_bound: height_bound.into(),
            minimal_poly: None,
        }
    }

    /// `α̃` as a terminating decimal when it has one, else `p/q`.
    pub fn approx_text(&self) -> String {
        format_decimal(&self.approx).unwrap_or_else(|| self.approx.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Found,
    NotFound { reason: String },
}

/// One `find_relation` run at a fixed degree.
#[derive(Debug, Clone)]
pub struct DegreeAttempt {
    pub degree: u32,
    pub iterations: u64,
    pub iteration_cap: u64,
    pub result: String,
}

#[derive(Debug, Clone)]
pub struct ReconstructionReport {
    pub handle: AlgebraicHandle,
    /// `ε(n, N)` for the handle's bounds.
    pub epsilon: BigReal,
    pub digits_used: u32,
    /// Total over all degrees tried.
    pub iterations: u64,
    /// Lower bounds from the last degree tried.
    pub lower_bound_trace: Vec<BigReal>,
    pub attempts: Vec<DegreeAttempt>,
    pub outcome: Outcome,
}

impl ReconstructionReport {
    pub fn polynomial(&self) -> Option<&IntPolynomial> {
        self.handle.minimal_poly.as_ref()
    }

    pub fn is_found(&self) -> bool {
        self.outcome == Outcome::Found
    }

    fn outcome_text(&self) -> (&'static str, Option<&str>) {
        match &self.outcome {
            Outcome::Found => ("found", None),
            Outcome::NotFound { reason } => ("not_found", Some(reason)),
        }
    }

    fn trace_strings(&self) -> Vec<String> {
        self.lower_bound_trace
            .iter()
            .map(|b| format_scientific(b, 6))
            .collect()
    }

    /// `key=value` lines.
    pub fn to_kv(&self) -> String {
        let (outcome, reason) = self.outcome_text();
        let poly = self.polynomial().map(|p| p.to_string()).unwrap_or_default();
        let mut lines = vec![
            format!("polynomial={poly}"),
            format!("approx={}", self.handle.approx_text()),
            format!("degree_bound={}", self.handle.degree_bound),
            format!("height_bound={}", self.handle.height_bound),
            format!("epsilon={}", format_scientific(&self.epsilon, 6)),
            format!("digits={}", self.digits_used),
            format!("iterations={}", self.iterations),
            format!("lower_bound_trace={}", self.trace_strings().join(",")),
            format!("outcome={outcome}"),
        ];
        if let Some(reason) = reason {
            lines.push(format!("reason={reason}"));
        }
        lines.join("\n") + "\n"
    }

    pub fn to_json(&self) -> Value {
        let (outcome, reason) = self.outcome_text();
        json!({
            "polynomial": self.polynomial().map(|p| p.to_string()),
            "approx": self.handle.approx_text(),
            "degree_bound": self.handle.degree_bound,
            "height_bound": self.handle.height_bound.to_string(),
            "epsilon": format_scientific(&self.epsilon, 6),
            "digits": self.digits_used,
            "iterations": self.iterations,
            "lower_bound_trace": self.trace_strings(),
            "attempts": self.attempts.iter().map(|a| json!({
                "degree": a.degree,
                "iterations": a.iterations,
                "iteration_cap": a.iteration_cap,
                "result": a.result,
            })).collect::<Vec<_>>(),
            "outcome": outcome,
            "reason": reason,
        })
    }
}

impl fmt::Display for ReconstructionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.outcome, self.polynomial()) {
            (Outcome::Found, Some(p)) => writeln!(f, "{p}")?,
            (Outcome::NotFound { reason }, _) => writeln!(f, "not found: {reason}")?,
            _ => {}
        }
        writeln!(f, "epsilon: {}", format_scientific(&self.epsilon, 3))?;
        writeln!(f, "digits: {}", self.digits_used)?;
        write!(f, "iterations: {}", self.iterations)
    }
}

/// Knobs for [`reconstruct_with`]. `None` means the default.
#[derive(Debug, Clone, Default)]
pub struct ReconstructOptions {
    pub gamma: Option<Rational>,
    pub tau: Option<Rational>,
    /// Significant digits; defaults to the bound's digits plus guard.
    pub digits: Option<u32>,
    /// First degree tried (default 1).
    pub min_degree: Option<u32>,
}

/// Working digits for `⟨α̃, n, N⟩`: the bound's digits, room for `|α̃|ⁿ`, guard.
pub fn working_digits(approx: &Rational, n: u32, height: &Integer) -> u32 {
    let magnitude = Float::with_val(64, approx.clone().abs());
    let extra = if magnitude > 1 {
        (magnitude.log10().to_f64() * f64::from(n)).ceil() as u32
    } else {
        0
    };
    digits_required(n, height) + extra + guard_digits(n)
}

/// Recovers the minimal polynomial of `α` from `α̃` with default settings.
pub fn reconstruct(
    approx: &Rational,
    n: u32,
    height: impl Into<Integer>,
) -> Result<ReconstructionReport, MinpolyError> {
    reconstruct_with(approx, n, height, &ReconstructOptions::default())
}

pub fn reconstruct_with(
    approx: &Rational,
    n: u32,
    height: impl Into<Integer>,
    options: &ReconstructOptions,
) -> Result<ReconstructionReport, MinpolyError> {
    reconstruct_observed(approx, n, height, options, &mut |_| {})
}

/// Convenience wrapper taking `α̃` as decimal text.
pub fn reconstruct_decimal(
    approx: &str,
    n: u32,
    height: impl Into<Integer>,
) -> Result<ReconstructionReport, MinpolyError> {
    reconstruct(&parse_decimal(approx)?, n, height)
}

/// [`reconstruct_with`], handing every post-reduction PSLQ state to `observer`.
pub fn reconstruct_observed(
    approx: &Rational,
    n: u32,
    height: impl Into<Integer>,
    options: &ReconstructOptions,
    observer: &mut dyn FnMut(&PslqState),
) -> Result<ReconstructionReport, MinpolyError> {
    let height = height.into();
    if n == 0 {
        return Err(MinpolyError::ZeroDegree);
    }
    if height < 1 {
        return Err(MinpolyError::NonPositiveHeight);
    }
    let min_degree = options.min_degree.unwrap_or(1).max(1);
    if min_degree > n {
        return Err(MinpolyError::MinDegreeTooLarge { min: min_degree, max: n });
    }
    let guard = guard_digits(n);
    let digits = options
        .digits
        .unwrap_or_else(|| working_digits(approx, n, &height))
        .max(guard + crate::arith::MIN_DECIMAL_DIGITS);
    let ctx = make_context(digits, guard)?;
    let gamma = options
        .gamma
        .as_ref()
        .map_or_else(|| default_gamma(&ctx), |g| ctx.from_rational(g));
    let tau = options
        .tau
        .as_ref()
        .map_or_else(|| default_tau(&ctx), |t| ctx.from_rational(t));

    // The accuracy of α̃ is fixed by the caller's ⟨n, N⟩; lower degrees are
    // tested against the same ε, not their own looser one.
    let epsilon = epsilon_bound(n, &height, &ctx);
    let mut handle = AlgebraicHandle::new(approx.clone(), n, height.clone());
    let mut attempts = Vec::new();
    let mut iterations = 0;
    let mut trace = Vec::new();

    for d in min_degree..=n {
        let x = power_vector(approx, d, &ctx);
        let eps_pow = power_error_bound(approx, d, &epsilon);
        // find_relation accepts |m·x| < (d+1)·N·ε; the residual lemma allows d·N·ε_pow.
        let detection_eps = Float::with_val(ctx.precision_bits(), &eps_pow * d) / (d + 1);
        let params = RelationParams::new(height.clone(), detection_eps, &ctx)
            .with_gamma_tau(gamma.clone(), tau.clone());
        let search = find_relation_observed(&x, &params, &ctx, observer)?;
        iterations += search.iterations;
        trace = search.lower_bound_trace.clone();
        let result = match &search.outcome {
            RelationOutcome::Found { relation, .. } => format!("relation {relation}"),
            RelationOutcome::NoRelationWithinHeight { .. } => "no relation within height".into(),
            RelationOutcome::IterationCapReached { .. } => "iteration cap reached".into(),
        };
        attempts.push(DegreeAttempt {
            degree: d,
            iterations: search.iterations,
            iteration_cap: search.iteration_cap,
            result,
        });
        let RelationOutcome::Found { relation, .. } = search.outcome else {
            continue;
        };
        let g = IntPolynomial::new(relation.into_coefficients())
            .primitive_part()
            .expect("relation is nonzero")
            .with_positive_leading();
        certify(&g, approx, &eps_pow, &ctx)?;
        handle.minimal_poly = Some(g);
        return Ok(ReconstructionReport {
            handle,
            epsilon,
            digits_used: digits,
            iterations,
            lower_bound_trace: trace,
            attempts,
            outcome: Outcome::Found,
        });
    }

    let reason = match trace.last() {
        Some(bound) => format!(
            "no relation of degree <= {n} and height <= {height}; last norm lower bound {}",
            format_scientific(bound, 6)
        ),
        None => format!("no relation of degree <= {n} and height <= {height}"),
    };
    Ok(ReconstructionReport {
        handle,
        epsilon,
        digits_used: digits,
        iterations,
        lower_bound_trace: trace,
        attempts,
        outcome: Outcome::NotFound { reason },
    })
}

/// `|g(α̃)| ≤ deg(g) · ε_pow · |g|∞`, with `g(α̃)` evaluated exactly.
fn certify(
    g: &IntPolynomial,
    approx: &Rational,
    eps_pow: &BigReal,
    ctx: &PrecisionContext,
) -> Result<(), MinpolyError> {
    let degree = g.degree().unwrap_or(0).max(1) as u32;
    let value = g.evaluate_rational(approx).abs();
    let residual = ctx.from_rational(&value);
    let budget = Float::with_val(ctx.precision_bits(), eps_pow * degree) * g.height();
    if residual <= budget {
        Ok(())
    } else {
        Err(MinpolyError::CertificationFailed {
            polynomial: g.to_string(),
            residual: format_scientific(&residual, 6),
            budget: format_scientific(&budget, 6),
        })
    }
}
