//! Dense univariate polynomials with integer coefficients.
//!
//! Coefficients are stored in ascending order of power with no trailing
//! zeros; the zero polynomial has no coefficients at all.

use std::fmt;
use std::str::FromStr;

use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("{divisor} does not divide {dividend} exactly")]
    NotAFactor { dividend: String, divisor: String },
    #[error("cannot parse polynomial {text:?}: {reason}")]
    Parse { text: String, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<Integer>,
}

impl IntPolynomial {
    /// From ascending coefficients; trailing zeros are dropped.
    pub fn new(mut coeffs: Vec<Integer>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Integer::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: impl Into<Integer>) -> Self {
        Self::new(vec![c.into()])
    }

    /// `x`
    pub fn identity() -> Self {
        Self::from_i64s(&[0, 1])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Ascending coefficients, without trailing zeros.
    pub fn coefficients(&self) -> &[Integer] {
        &self.coeffs
    }

    pub fn coefficient(&self, power: usize) -> Integer {
        self.coeffs.get(power).cloned().unwrap_or_default()
    }

    pub fn leading_coefficient(&self) -> Option<&Integer> {
        self.coeffs.last()
    }

    /// Max absolute coefficient (zero for the zero polynomial).
    pub fn height(&self) -> Integer {
        self.coeffs
            .iter()
            .map(|c| c.clone().abs())
            .max()
            .unwrap_or_default()
    }

    /// Squared Euclidean length of the coefficient vector, exact.
    pub fn length_squared(&self) -> Integer {
        self.coeffs.iter().map(|c| c.clone().square()).sum()
    }

    /// Euclidean length of the coefficient vector at `prec` bits.
    pub fn length(&self, prec: u32) -> Float {
        Float::with_val(prec, self.length_squared()).sqrt()
    }

    /// Gcd of the coefficients, positive.
    pub fn content(&self) -> Result<Integer, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        Ok(self
            .coeffs
            .iter()
            .fold(Integer::new(), |g, c| g.gcd(c)))
    }

    /// `self / content(self)`; the sign of the leading coefficient is kept.
    pub fn primitive_part(&self) -> Result<IntPolynomial, PolyError> {
        let content = self.content()?;
        Ok(IntPolynomial {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| Integer::from(c.div_exact_ref(&content)))
                .collect(),
        })
    }

    /// Multiplies by -1 if the leading coefficient is negative.
    pub fn with_positive_leading(self) -> IntPolynomial {
        match self.leading_coefficient() {
            Some(lc) if *lc < 0 => -self,
            _ => self,
        }
    }

    /// Horner evaluation at the precision of `t`.
    pub fn evaluate(&self, t: &Float) -> Float {
        let mut acc = Float::new(t.prec());
        for c in self.coeffs.iter().rev() {
            acc *= t;
            acc += c;
        }
        acc
    }

    /// Exact evaluation at a rational point.
    pub fn evaluate_rational(&self, t: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= t;
            acc += c;
        }
        acc
    }

    pub fn derivative(&self) -> IntPolynomial {
        IntPolynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| Integer::from(c * i as u64))
                .collect(),
        )
    }

    pub fn mul(&self, other: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || other.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![Integer::new(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }

    pub fn pow(&self, exponent: u32) -> IntPolynomial {
        let mut acc = IntPolynomial::constant(1);
        for _ in 0..exponent {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn scale(&self, factor: &Integer) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.iter().map(|c| Integer::from(c * factor)).collect())
    }

    /// Quotient `q` with `q · divisor = self`, or [`PolyError::NotAFactor`].
    ///
    /// Division runs over the rationals; the quotient must come out integral
    /// with zero remainder.
    pub fn divide_exact(&self, divisor: &IntPolynomial) -> Result<IntPolynomial, PolyError> {
        if divisor.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let not_a_factor = || PolyError::NotAFactor {
            dividend: self.to_string(),
            divisor: divisor.to_string(),
        };
        let (quotient, remainder) = RatPoly::from_int(self).div_rem(&RatPoly::from_int(divisor));
        if !remainder.is_zero() {
            return Err(not_a_factor());
        }
        quotient.to_int().ok_or_else(not_a_factor)
    }

    /// `⌈2^m · |p|⌉`, a height bound for every integer factor of degree at
    /// most `m` (Landau–Mignotte). Computed exactly as an integer square root.
    pub fn landau_mignotte_height_bound(&self, factor_degree_bound: u32) -> Integer {
        let scaled = self.length_squared() * Integer::from(4).pow(factor_degree_bound);
        let (root, rem) = scaled.sqrt_rem(Integer::new());
        if rem.is_zero() {
            root
        } else {
            root + 1
        }
    }

    /// Squarefree part `p / gcd(p, p')`, primitive with positive leading
    /// coefficient.
    pub fn squarefree_part(&self) -> Result<IntPolynomial, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        if self.degree() == Some(0) {
            return Ok(IntPolynomial::constant(1));
        }
        let g = RatPoly::from_int(self).gcd(&RatPoly::from_int(&self.derivative()));
        let (q, _) = RatPoly::from_int(self).div_rem(&g);
        Ok(q.primitive_int().with_positive_leading())
    }
}

/// Landau–Mignotte height bound of a primitive `p` for factors of degree ≤ `m`.
pub fn landau_mignotte_height_bound(p: &IntPolynomial, factor_degree_bound: u32) -> Integer {
    p.landau_mignotte_height_bound(factor_degree_bound)
}

impl std::ops::Neg for IntPolynomial {
    type Output = IntPolynomial;

    fn neg(self) -> IntPolynomial {
        IntPolynomial {
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

/// Rational-coefficient polynomial used for exact division and gcds.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct RatPoly {
    coeffs: Vec<Rational>,
}

impl RatPoly {
    pub(crate) fn from_int(p: &IntPolynomial) -> Self {
        RatPoly {
            coeffs: p.coeffs.iter().map(Rational::from).collect(),
        }
    }

    fn trimmed(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| *c == 0) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub(crate) fn div_rem(&self, divisor: &RatPoly) -> (RatPoly, RatPoly) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let mut rem = self.coeffs.clone();
        let dl = divisor.coeffs.len();
        if rem.len() < dl {
            return (RatPoly { coeffs: Vec::new() }, self.clone());
        }
        let lead = divisor.coeffs.last().unwrap();
        let mut quot = vec![Rational::new(); rem.len() - dl + 1];
        for k in (0..quot.len()).rev() {
            let c = Rational::from(&rem[k + dl - 1] / lead);
            if c != 0 {
                for (i, d) in divisor.coeffs.iter().enumerate() {
                    rem[k + i] -= Rational::from(&c * d);
                }
            }
            quot[k] = c;
        }
        rem.truncate(dl - 1);
        (RatPoly::trimmed(quot), RatPoly::trimmed(rem))
    }

    /// Monic gcd by the Euclidean algorithm.
    pub(crate) fn gcd(&self, other: &RatPoly) -> RatPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        if let Some(lead) = a.coeffs.last().cloned() {
            for c in &mut a.coeffs {
                *c /= &lead;
            }
        }
        a
    }

    pub(crate) fn to_int(&self) -> Option<IntPolynomial> {
        self.coeffs
            .iter()
            .map(|c| (*c.denom() == 1).then(|| c.numer().clone()))
            .collect::<Option<Vec<_>>>()
            .map(IntPolynomial::new)
    }

    /// Clears denominators and content.
    pub(crate) fn primitive_int(&self) -> IntPolynomial {
        let lcm = self
            .coeffs
            .iter()
            .fold(Integer::from(1), |l, c| l.lcm(c.denom()));
        let ints = self
            .coeffs
            .iter()
            .map(|c| Integer::from(c.numer() * &lcm) / c.denom())
            .collect();
        let p = IntPolynomial::new(ints);
        if p.is_zero() {
            p
        } else {
            p.primitive_part().expect("nonzero")
        }
    }
}

impl fmt::Display for IntPolynomial {
    /// Descending order, `x^4 - 10*x^2 + 1` style.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (power, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = *c < 0;
            let magnitude = c.clone().abs();
            if first {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            first = false;
            match power {
                0 => write!(f, "{magnitude}")?,
                _ => {
                    if magnitude != 1 {
                        write!(f, "{magnitude}*")?;
                    }
                    if power == 1 {
                        f.write_str("x")?;
                    } else {
                        write!(f, "x^{power}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl FromStr for IntPolynomial {
    type Err = PolyError;

    /// Accepts sums of terms like `3*x^2`, `3x^2`, `-x`, `7`, in any order;
    /// repeated powers are added. The variable is any single ASCII letter,
    /// used consistently.
    fn from_str(text: &str) -> Result<Self, PolyError> {
        parse_polynomial(text)
    }
}

fn parse_polynomial(text: &str) -> Result<IntPolynomial, PolyError> {
    let fail = |reason: &str| PolyError::Parse {
        text: text.to_string(),
        reason: reason.to_string(),
    };
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(fail("empty input"));
    }
    let mut variable: Option<char> = None;
    let mut coeffs: Vec<Integer> = Vec::new();
    let chars: Vec<char> = compact.chars().collect();
    let mut pos = 0;
    while pos < chars.len() {
        let mut sign = 1;
        if chars[pos] == '+' || chars[pos] == '-' {
            if chars[pos] == '-' {
                sign = -1;
            }
            pos += 1;
        } else if pos != 0 {
            return Err(fail("expected '+' or '-' between terms"));
        }
        let start = pos;
        while pos < chars.len() && chars[pos] != '+' && chars[pos] != '-' {
            // a '-' directly after '^' belongs to the term (and is rejected below)
            pos += 1;
            if pos < chars.len() && chars[pos - 1] == '^' && chars[pos] == '-' {
                return Err(fail("negative exponent"));
            }
        }
        let term: String = chars[start..pos].iter().collect();
        if term.is_empty() {
            return Err(fail("empty term"));
        }
        let (coefficient, power) = parse_term(&term, &mut variable).map_err(|r| fail(&r))?;
        if coeffs.len() <= power {
            coeffs.resize(power + 1, Integer::new());
        }
        coeffs[power] += coefficient * sign;
    }
    Ok(IntPolynomial::new(coeffs))
}

fn parse_term(term: &str, variable: &mut Option<char>) -> Result<(Integer, usize), String> {
    let var_pos = term.find(|c: char| c.is_ascii_alphabetic());
    let Some(vp) = var_pos else {
        let c = Integer::from_str_radix(term, 10).map_err(|_| format!("bad constant {term:?}"))?;
        return Ok((c, 0));
    };
    let var = term[vp..].chars().next().unwrap();
    match variable {
        Some(v) if *v != var => return Err(format!("mixed variables {v} and {var}")),
        _ => *variable = Some(var),
    }
    let coeff_text = term[..vp].strip_suffix('*').unwrap_or(&term[..vp]);
    let coefficient = if coeff_text.is_empty() {
        Integer::from(1)
    } else {
        Integer::from_str_radix(coeff_text, 10).map_err(|_| format!("bad coefficient {coeff_text:?}"))?
    };
    let rest = &term[vp + var.len_utf8()..];
    let power = if rest.is_empty() {
        1
    } else {
        let exp = rest
            .strip_prefix('^')
            .or_else(|| rest.strip_prefix("**"))
            .ok_or_else(|| format!("unexpected {rest:?} after variable"))?;
        exp.parse::<usize>().map_err(|_| format!("bad exponent {exp:?}"))?
    };
    Ok((coefficient, power))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(s: &str) -> IntPolynomial {
        s.parse().unwrap()
    }

    fn example3() -> IntPolynomial {
        poly("3*x^9 - 9*x^8 + 3*x^7 + 6*x^5 - 27*x^4 + 21*x^3 + 30*x^2 - 21*x + 3")
    }

    #[test]
    fn content_examples() {
        assert_eq!(example3().content().unwrap(), 3);
        assert_eq!(poly("x^2 - 2").content().unwrap(), 1);
        assert_eq!(poly("4*x + 6").content().unwrap(), 2);
        assert_eq!(IntPolynomial::zero().content(), Err(PolyError::ZeroPolynomial));
    }

    #[test]
    fn primitive_part_examples() {
        assert_eq!(
            example3().primitive_part().unwrap(),
            poly("x^9 - 3*x^8 + x^7 + 2*x^5 - 9*x^4 + 7*x^3 + 10*x^2 - 7*x + 1")
        );
        assert_eq!(poly("x^2-2").primitive_part().unwrap(), poly("x^2-2"));
        assert_eq!(poly("-2*x - 4").primitive_part().unwrap(), poly("-x - 2"));
        assert!(IntPolynomial::zero().primitive_part().is_err());
    }

    #[test]
    fn evaluate_at_zero_is_constant_term() {
        let p = poly("5x^3 - 2x + 9");
        assert_eq!(p.evaluate(&Float::with_val(64, 0)), 9);
    }

    #[test]
    fn divide_exact_examples() {
        let p = example3().primitive_part().unwrap();
        assert_eq!(
            p.divide_exact(&poly("x^2 - 3*x + 1")).unwrap(),
            poly("x^7 + 2*x^3 - 3*x^2 - 4*x + 1")
        );
        assert_eq!(p.divide_exact(&p).unwrap(), IntPolynomial::constant(1));
        assert!(matches!(
            poly("x^2 - 2").divide_exact(&poly("x - 1")),
            Err(PolyError::NotAFactor { .. })
        ));
        // divisible over Q but not with an integral quotient
        assert!(poly("x + 1").divide_exact(&poly("2x + 2")).is_err());
    }

    #[test]
    fn landau_mignotte_examples() {
        let p = poly("x^2 - 2");
        assert_eq!(p.landau_mignotte_height_bound(0), 3); // ⌈√5⌉
        assert_eq!(p.landau_mignotte_height_bound(1), 5); // ⌈2√5⌉
        let q = poly("3x + 4");
        assert_eq!(q.landau_mignotte_height_bound(0), 5); // exact square
        let ex3 = example3().primitive_part().unwrap();
        // |p|² = 295; ⌈4·√295⌉ = ⌈68.70⌉
        assert_eq!(ex3.length_squared(), 295);
        assert_eq!(landau_mignotte_height_bound(&ex3, 2), 69);
    }

    #[test]
    fn display_descending() {
        assert_eq!(poly("1 - 10x^2 + x^4").to_string(), "x^4 - 10*x^2 + 1");
        assert_eq!(poly("-x^2 + 8x + 47").to_string(), "-x^2 + 8*x + 47");
        assert_eq!(poly("2x - 1").to_string(), "2*x - 1");
        assert_eq!(IntPolynomial::zero().to_string(), "0");
        assert_eq!(poly("-7").to_string(), "-7");
        assert_eq!(poly("x").to_string(), "x");
    }

    #[test]
    fn parse_variants() {
        assert_eq!(poly("x^2 - 8*x - 47"), IntPolynomial::from_i64s(&[-47, -8, 1]));
        assert_eq!(poly("-47 - 8x + x^2"), IntPolynomial::from_i64s(&[-47, -8, 1]));
        assert_eq!(poly("x**3 + x + x"), IntPolynomial::from_i64s(&[0, 2, 0, 1]));
        assert_eq!(poly("t^2 - 2"), IntPolynomial::from_i64s(&[-2, 0, 1]));
        assert_eq!(poly("x - x"), IntPolynomial::zero());
        for bad in ["", "x^", "x^-1", "2*", "x + y", "3x2", "++x", "x^2 x"] {
            assert!(bad.parse::<IntPolynomial>().is_err(), "{bad:?} accepted");
        }
    }

    #[test]
    fn squarefree_part_removes_repeats() {
        let p = poly("x - 1").pow(3).mul(&poly("x + 2"));
        assert_eq!(p.squarefree_part().unwrap(), poly("x^2 + x - 2"));
        assert_eq!(poly("x^2 - 2").squarefree_part().unwrap(), poly("x^2 - 2"));
    }

    #[test]
    fn height_and_length() {
        let p = poly("x^4 - 10x^2 + 1");
        assert_eq!(p.height(), 10);
        assert_eq!(p.length_squared(), 102);
        assert_eq!(p.degree(), Some(4));
        assert_eq!(IntPolynomial::zero().degree(), None);
    }
}
