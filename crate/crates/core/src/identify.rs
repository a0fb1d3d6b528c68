//! Algebraic numbers hidden behind `sin⁻¹`, `cos⁻¹` or `log`.
//!
//! Given `β̃ ≈ f⁻¹(α)`, evaluate `α̃ = f(β̃)` with guard digits, then hand `α̃`
//! to [`reconstruct`](crate::minpoly::reconstruct_with).

use std::fmt;
use std::str::FromStr;

use rug::{Float, Integer, Rational};
use thiserror::Error;

use crate::arith::{bits_for_digits, format_decimal};
use crate::minpoly::{
    digits_required, epsilon_at, guard_digits, reconstruct_with, MinpolyError, ReconstructOptions,
    ReconstructionReport,
};

const EXTRA_GUARD: u32 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FormKind {
    Arcsin,
    Arccos,
    Log,
}

impl fmt::Display for FormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FormKind::Arcsin => "asin",
            FormKind::Arccos => "acos",
            FormKind::Log => "log",
        })
    }
}

impl FromStr for FormKind {
    type Err = IdentifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "asin" | "arcsin" => Ok(FormKind::Arcsin),
            "acos" | "arccos" => Ok(FormKind::Arccos),
            "log" | "ln" => Ok(FormKind::Log),
            _ => Err(IdentifyError::UnknownForm(s.to_string())),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IdentifyError {
    #[error("unknown form {0:?}; expected asin, acos or log")]
    UnknownForm(String),
    #[error("{value} is outside the range of {kind}")]
    Domain { kind: FormKind, value: String },
    #[error(transparent)]
    Minpoly(#[from] MinpolyError),
}

/// `β̃` together with the form and the bounds `⟨n, N⟩` on `α = f(β)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranscendentalForm {
    pub kind: FormKind,
    pub beta_approx: Rational,
    pub degree_bound: u32,
    pub height_bound: Integer,
}

impl TranscendentalForm {
    pub fn new(
        kind: FormKind,
        beta_approx: Rational,
        degree_bound: u32,
        height_bound: impl Into<Integer>,
    ) -> Self {
        TranscendentalForm {
            kind,
            beta_approx,
            degree_bound,
            height_bound: height_bound.into(),
        }
    }

    /// Precision, in bits, at which `f(β̃)` is evaluated.
    fn evaluation_bits(&self) -> u32 {
        let n = self.degree_bound.max(1);
        let mut digits = digits_required(n, &self.height_bound.clone().max(Integer::from(1)))
            + guard_digits(n)
            + EXTRA_GUARD;
        if self.kind == FormKind::Log {
            let beta = self.beta_approx.to_f64().max(0.0);
            digits += (beta * std::f64::consts::LOG10_E * f64::from(n)).ceil() as u32;
        }
        bits_for_digits(digits)
    }

    /// Checks that `β̃` lies in the principal range of `f⁻¹`, up to `slack`.
    fn check_domain(&self, prec: u32) -> Result<(), IdentifyError> {
        let slack = Float::with_val(prec, 1) >> (prec as i32 / 2);
        let beta = Float::with_val(prec, &self.beta_approx);
        let half_pi = Float::with_val(prec, rug::float::Constant::Pi) / 2u32;
        let ok = match self.kind {
            FormKind::Arcsin => Float::with_val(prec, beta.abs_ref()) <= half_pi + &slack,
            FormKind::Arccos => beta >= -slack.clone() && beta <= half_pi * 2u32 + &slack,
            FormKind::Log => true,
        };
        if ok {
            Ok(())
        } else {
            Err(IdentifyError::Domain {
                kind: self.kind,
                value: format_decimal(&self.beta_approx)
                    .unwrap_or_else(|| self.beta_approx.to_string()),
            })
        }
    }

    /// `α̃ = f(β̃)` as an exact rational (the rounded binary value).
    pub fn alpha_approx(&self) -> Result<Rational, IdentifyError> {
        let prec = self.evaluation_bits();
        self.check_domain(prec)?;
        let beta = Float::with_val(prec, &self.beta_approx);
        let alpha = match self.kind {
            FormKind::Arcsin => beta.sin(),
            FormKind::Arccos => beta.cos(),
            FormKind::Log => beta.exp(),
        };
        Ok(alpha.to_rational().expect("finite value"))
    }
}

/// Accuracy needed on `β̃` for the log form: `ε(n, N) / exp(⌈β̃⌉ + 1)`.
/// For sine and cosine the Lipschitz constant is 1 and `ε(n, N)` itself
/// suffices.
pub fn required_beta_accuracy(form: &TranscendentalForm, prec: u32) -> Float {
    let n = form.degree_bound.max(1);
    let height = form.height_bound.clone().max(Integer::from(1));
    let eps = epsilon_at(n, &height, prec);
    match form.kind {
        FormKind::Log => {
            let ceil = form.beta_approx.clone().ceil();
            let scale = Float::with_val(prec, ceil + 1u32).exp();
            eps / scale
        }
        _ => eps,
    }
}

pub fn identify_form(form: &TranscendentalForm) -> Result<ReconstructionReport, IdentifyError> {
    identify_form_with(form, &ReconstructOptions::default())
}

pub fn identify_form_with(
    form: &TranscendentalForm,
    options: &ReconstructOptions,
) -> Result<ReconstructionReport, IdentifyError> {
    let alpha = form.alpha_approx()?;
    Ok(reconstruct_with(
        &alpha,
        form.degree_bound,
        form.height_bound.clone(),
        options,
    )?)
}
