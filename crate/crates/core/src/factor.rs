//! Factoring integer polynomials through their real roots.
//!
//! Each real root is approximated to high precision, its minimal polynomial
//! is reconstructed with the Landau–Mignotte bound as height bound, and the
//! result is divided out exactly. Whatever has no real roots, or resists
//! reconstruction, is handed back as the residual.

use std::fmt;

use rug::{Float, Integer, Rational};

use crate::arith::{cmp_finite, make_context, BigReal, PrecisionContext};
use crate::minpoly::{digits_required, reconstruct_with, ReconstructOptions};
use crate::polynomial::{IntPolynomial, PolyError, RatPoly};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorizationResult {
    /// Positive gcd of the input coefficients.
    pub content: Integer,
    /// Primitive factors with positive leading coefficient, with multiplicity.
    pub factors: Vec<(IntPolynomial, u32)>,
    /// The part not reached through real roots; carries the sign of the input
    /// when its leading coefficient is negative.
    pub residual: Option<IntPolynomial>,
}

impl FactorizationResult {
    /// `content · Π fᵢ^mᵢ · residual`.
    pub fn product(&self) -> IntPolynomial {
        let mut acc = IntPolynomial::constant(self.content.clone());
        for (f, m) in &self.factors {
            acc = acc.mul(&f.pow(*m));
        }
        if let Some(r) = &self.residual {
            acc = acc.mul(r);
        }
        acc
    }
}

impl fmt::Display for FactorizationResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "content: {}", self.content)?;
        for (p, m) in &self.factors {
            if *m == 1 {
                writeln!(f, "factor: {p}")?;
            } else {
                writeln!(f, "factor: {p} (multiplicity {m})")?;
            }
        }
        match &self.residual {
            Some(r) => write!(f, "residual: {r}"),
            None => write!(f, "residual: none"),
        }
    }
}

/// A real root with an isolating interval `(lo, hi)` whose endpoints are not
/// roots.
#[derive(Debug, Clone)]
struct IsolatedRoot {
    lo: Rational,
    hi: Rational,
    value: BigReal,
}

fn sign(q: &Rational) -> i32 {
    q.cmp0() as i32
}

/// Sturm chain of a squarefree `p`.
fn sturm_chain(p: &IntPolynomial) -> Vec<IntPolynomial> {
    let mut chain = vec![p.clone(), p.derivative()];
    loop {
        let n = chain.len();
        if chain[n - 1].degree().unwrap_or(0) == 0 {
            break;
        }
        let (_, r) = RatPoly::from_int(&chain[n - 2]).div_rem(&RatPoly::from_int(&chain[n - 1]));
        if r.is_zero() {
            break;
        }
        chain.push(-r.primitive_int());
    }
    chain
}

fn sign_variations(chain: &[IntPolynomial], t: &Rational) -> usize {
    let signs: Vec<i32> = chain
        .iter()
        .map(|q| sign(&q.evaluate_rational(t)))
        .filter(|&s| s != 0)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Cauchy bound `1 + max |aᵢ / aₙ|`, rounded up.
fn root_bound(p: &IntPolynomial) -> Rational {
    let lead = p.leading_coefficient().expect("nonzero").clone().abs();
    let max = p.coefficients().iter().map(|c| c.clone().abs()).max().unwrap();
    let (q, _) = max.div_rem_ceil(lead);
    Rational::from(q + 2)
}

/// A point strictly inside `(lo, hi)` where `p` does not vanish, near the middle.
fn split_point(p: &IntPolynomial, lo: &Rational, hi: &Rational) -> Rational {
    let width = Rational::from(hi - lo);
    // p has finitely many roots, so some fraction k/den of the width works
    (2u32..)
        .flat_map(|den| (1..den).map(move |k| (k, den)))
        .map(|(k, den)| lo + (&width * Rational::from((k, den))))
        .find(|t| p.evaluate_rational(t) != 0)
        .expect("unbounded search")
}

fn isolate(p: &IntPolynomial) -> Vec<(Rational, Rational)> {
    let chain = sturm_chain(p);
    let bound = root_bound(p);
    let mut pending = vec![(Rational::from(-&bound), bound)];
    let mut out = Vec::new();
    while let Some((lo, hi)) = pending.pop() {
        let count = sign_variations(&chain, &lo) - sign_variations(&chain, &hi);
        match count {
            0 => {}
            1 => out.push((lo, hi)),
            _ => {
                let mid = split_point(p, &lo, &hi);
                pending.push((lo, mid.clone()));
                pending.push((mid, hi));
            }
        }
    }
    out
}

/// Bisection-guarded Newton on `(lo, hi)` where `p` changes sign.
fn refine(p: &IntPolynomial, lo: &Rational, hi: &Rational, ctx: &PrecisionContext) -> BigReal {
    let prec = ctx.precision_bits();
    let dp = p.derivative();
    let lo_negative = p.evaluate_rational(lo) < 0;
    let mut a = ctx.from_rational(lo);
    let mut b = ctx.from_rational(hi);
    let tol = ctx.zero_threshold() * (ctx.from_rational(hi).abs().max(&ctx.real(1))) / 16u32;
    let mut x = Float::with_val(prec, &a + &b) / 2u32;
    for _ in 0..(4 * prec) {
        let fx = p.evaluate(&x);
        if fx.is_zero() {
            return x;
        }
        if (fx < 0) == lo_negative {
            a = x.clone();
        } else {
            b = x.clone();
        }
        let width = Float::with_val(prec, &b - &a);
        if width <= tol {
            break;
        }
        let dfx = dp.evaluate(&x);
        let newton = if dfx.is_zero() {
            None
        } else {
            Some(Float::with_val(prec, &x - Float::with_val(prec, &fx / &dfx)))
        };
        x = match newton {
            Some(n) if n > a && n < b => {
                let step = Float::with_val(prec, &n - &x).abs();
                if step <= tol {
                    return n;
                }
                n
            }
            _ => Float::with_val(prec, &a + &b) / 2u32,
        };
    }
    Float::with_val(prec, &a + &b) / 2u32
}

fn isolated_roots(p: &IntPolynomial, ctx: &PrecisionContext) -> Vec<IsolatedRoot> {
    if p.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let sf = p.squarefree_part().expect("nonzero");
    let mut roots: Vec<IsolatedRoot> = isolate(&sf)
        .into_iter()
        .map(|(lo, hi)| {
            let value = refine(&sf, &lo, &hi, ctx);
            IsolatedRoot { lo, hi, value }
        })
        .collect();
    roots.sort_by(|x, y| cmp_finite(&x.value, &y.value));
    roots
}

/// All distinct real roots of `p` in ascending order, each within the
/// context's zero threshold (relative to `max(1, |root|)`).
pub fn real_roots(p: &IntPolynomial, ctx: &PrecisionContext) -> Vec<BigReal> {
    if p.is_zero() {
        return Vec::new();
    }
    isolated_roots(p, ctx).into_iter().map(|r| r.value).collect()
}

/// True when `g` has a root in the isolating interval of `root`.
fn owns_root(g: &IntPolynomial, root: &IsolatedRoot) -> bool {
    let a = g.evaluate_rational(&root.lo);
    let b = g.evaluate_rational(&root.hi);
    a.cmp0() != b.cmp0()
}

pub fn factor_primitive(p: &IntPolynomial) -> Result<FactorizationResult, PolyError> {
    factor_primitive_with(p, &ReconstructOptions::default())
}

/// [`factor_primitive`] with explicit PSLQ parameters; `digits` and
/// `min_degree` in `options` are ignored.
pub fn factor_primitive_with(
    p: &IntPolynomial,
    options: &ReconstructOptions,
) -> Result<FactorizationResult, PolyError> {
    let content = p.content()?;
    let primitive = p.primitive_part()?;
    let negative = *primitive.leading_coefficient().expect("nonzero") < 0;
    let mut current = primitive.with_positive_leading();
    let mut factors: Vec<(IntPolynomial, u32)> = Vec::new();

    let degree = current.degree().unwrap_or(0) as u32;
    if degree > 0 {
        let ctx = root_context(&current, degree);
        let mut roots = isolated_roots(&current, &ctx);
        roots.sort_by(|x, y| cmp_finite(&y.value.clone().abs(), &x.value.clone().abs()));

        for root in &roots {
            if current.degree().unwrap_or(0) == 0 {
                break;
            }
            if factors.iter().any(|(g, _)| owns_root(g, root)) {
                continue;
            }
            if let Some(g) = factor_from_root(&current, root, options) {
                let mut multiplicity = 0;
                while let Ok(q) = current.divide_exact(&g) {
                    current = q;
                    multiplicity += 1;
                }
                factors.push((g, multiplicity));
            }
        }
    }

    let residual = match (current.degree().unwrap_or(0), negative) {
        (0, false) => None,
        (0, true) => Some(IntPolynomial::constant(-1)),
        (_, false) => Some(current),
        (_, true) => Some(-current),
    };
    Ok(FactorizationResult {
        content,
        factors,
        residual,
    })
}

/// Precision good enough for every degree up to `degree` with its
/// Landau–Mignotte height.
fn root_context(p: &IntPolynomial, degree: u32) -> PrecisionContext {
    let height = p.landau_mignotte_height_bound(degree);
    let bound = root_bound(p).to_f64();
    let extra = (bound.log10().max(0.0) * f64::from(degree)).ceil() as u32;
    let guard = 10;
    make_context(digits_required(degree, &height) + extra + 2 * guard, guard)
        .expect("valid precision")
}

/// Ascending degrees `d`, height bound from Landau–Mignotte; the first
/// reconstruction that divides `current` wins.
fn factor_from_root(
    current: &IntPolynomial,
    root: &IsolatedRoot,
    options: &ReconstructOptions,
) -> Option<IntPolynomial> {
    let approx = root.value.to_rational()?;
    let degree = current.degree()? as u32;
    for d in 1..=degree {
        let height = current.landau_mignotte_height_bound(d);
        let opts = ReconstructOptions {
            gamma: options.gamma.clone(),
            tau: options.tau.clone(),
            digits: None,
            min_degree: Some(d),
        };
        let Ok(report) = reconstruct_with(&approx, d, height, &opts) else {
            continue;
        };
        if let Some(g) = report.polynomial() {
            if current.divide_exact(g).is_ok() {
                return Some(g.clone());
            }
        }
    }
    None
}
