//! Brute-force references for the test suite.
//!
//! Exhaustive search over small boxes of integer vectors: slow, obviously
//! correct, and independent of the PSLQ machinery.

use rug::ops::Pow;
use rug::{Float, Integer};
use thiserror::Error;

use crate::arith::BigReal;
use crate::polynomial::IntPolynomial;
use crate::relation::IntegerRelation;

/// Largest search space either oracle will walk.
pub const MAX_SEARCH_SPACE: f64 = 1e8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("search space of {size:e} vectors exceeds the limit of {MAX_SEARCH_SPACE:e}")]
    SearchTooLarge { size: f64 },
    #[error("dimension {dimension} exceeds the cap of {cap}")]
    DimensionTooLarge { dimension: usize, cap: usize },
    #[error("need at least one coordinate")]
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    pub height_cap: u32,
    pub dimension_cap: usize,
}

impl OracleConfig {
    pub fn new(height_cap: u32, dimension_cap: usize) -> Self {
        OracleConfig {
            height_cap,
            dimension_cap,
        }
    }

    pub fn check(&self, dimension: usize) -> Result<(), OracleError> {
        if dimension > self.dimension_cap {
            return Err(OracleError::DimensionTooLarge {
                dimension,
                cap: self.dimension_cap,
            });
        }
        let size = search_space(self.height_cap, dimension);
        if size > MAX_SEARCH_SPACE {
            return Err(OracleError::SearchTooLarge { size });
        }
        Ok(())
    }
}

fn search_space(cap: u32, dimension: usize) -> f64 {
    (2.0 * f64::from(cap) + 1.0).powi(dimension as i32)
}

/// Odometer over `[-cap, cap]^n`, in lexicographic order.
struct BoxWalk {
    current: Vec<i64>,
    cap: i64,
    done: bool,
}

impl BoxWalk {
    fn new(n: usize, cap: u32) -> Self {
        let cap = i64::from(cap);
        BoxWalk {
            current: vec![-cap; n],
            cap,
            done: n == 0,
        }
    }
}

impl Iterator for BoxWalk {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        let mut i = self.current.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.current[i] < self.cap {
                self.current[i] += 1;
                break;
            }
            self.current[i] = -self.cap;
        }
        Some(out)
    }
}

/// `k · xᵢ` for every `k` in `[-cap, cap]`, at `prec` bits.
fn multiples(x: &[BigReal], cap: u32, prec: u32) -> Vec<Vec<Float>> {
    let cap = i64::from(cap);
    x.iter()
        .map(|v| {
            (-cap..=cap)
                .map(|k| Float::with_val(prec, v * k))
                .collect()
        })
        .collect()
}

fn combination(table: &[Vec<Float>], m: &[i64], cap: u32, prec: u32) -> Float {
    let mut acc = Float::new(prec);
    for (row, &k) in table.iter().zip(m) {
        acc += &row[(k + i64::from(cap)) as usize];
    }
    acc
}

/// Last nonzero entry positive.
fn canonical(m: &[i64]) -> bool {
    m.iter().rev().find(|&&c| c != 0).is_some_and(|&c| c > 0)
}

/// Shortest nonzero `m ∈ [-cap, cap]^n` with `|m · x| < tolerance`, ties
/// broken lexicographically. Sums are formed at twice the precision of `x`.
pub fn brute_force_min_relation(
    x: &[BigReal],
    height_cap: u32,
    tolerance: &BigReal,
) -> Result<Option<IntegerRelation>, OracleError> {
    if x.is_empty() {
        return Err(OracleError::Empty);
    }
    OracleConfig::new(height_cap, x.len()).check(x.len())?;
    let prec = 2 * x.iter().map(Float::prec).max().unwrap();
    let table = multiples(x, height_cap, prec);
    let mut best: Option<(i64, Vec<i64>)> = None;
    for m in BoxWalk::new(x.len(), height_cap) {
        if !canonical(&m) {
            continue;
        }
        let norm: i64 = m.iter().map(|c| c * c).sum();
        if best.as_ref().is_some_and(|(b, _)| norm >= *b) {
            continue;
        }
        if combination(&table, &m, height_cap, prec).abs() < *tolerance {
            best = Some((norm, m));
        }
    }
    Ok(best.and_then(|(_, m)| IntegerRelation::from_i64s(&m)))
}

/// Minimal polynomial by exhaustion: smallest degree, then smallest height,
/// then smallest `|p(α̃)|`, among primitive polynomials with positive leading
/// coefficient and `|p(α̃)| < tolerance`.
pub fn brute_force_minpoly(
    alpha: &BigReal,
    degree_cap: u32,
    height_cap: u32,
    tolerance: &BigReal,
) -> Result<Option<IntPolynomial>, OracleError> {
    let dimension = degree_cap as usize + 1;
    OracleConfig::new(height_cap, dimension).check(dimension)?;
    let prec = 2 * alpha.prec();
    for d in 1..=degree_cap as usize {
        let powers: Vec<Float> = (0..=d)
            .map(|i| Float::with_val(prec, alpha).pow(i as u32))
            .collect();
        for h in 1..=height_cap {
            let table = multiples(&powers, h, prec);
            let mut best: Option<(Float, Vec<i64>)> = None;
            for m in BoxWalk::new(d + 1, h) {
                let lead = m[d];
                if lead <= 0 || m.iter().map(|c| c.abs()).max() != Some(i64::from(h)) {
                    continue;
                }
                if m.iter().fold(0i64, |g, &c| gcd(g, c)) != 1 {
                    continue;
                }
                let value = combination(&table, &m, h, prec).abs();
                if value >= *tolerance {
                    continue;
                }
                if best.as_ref().is_none_or(|(v, _)| value < *v) {
                    best = Some((value, m));
                }
            }
            if let Some((_, m)) = best {
                return Ok(Some(IntPolynomial::new(
                    m.into_iter().map(Integer::from).collect(),
                )));
            }
        }
    }
    Ok(None)
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{make_context, parse_decimal};

    #[test]
    fn sqrt2_powers() {
        let ctx = make_context(30, 5).unwrap();
        let s = ctx.sqrt(&ctx.real(2));
        let x = vec![ctx.real(1), s, ctx.real(2)];
        let r = brute_force_min_relation(&x, 3, &ctx.pow10(-20)).unwrap().unwrap();
        assert_eq!(r.to_string(), "(-2, 0, 1)");
        assert_eq!(r.norm_squared(), 5);
    }

    #[test]
    fn exact_pair() {
        let ctx = make_context(30, 5).unwrap();
        let x = vec![ctx.real(1), ctx.real(2)];
        let r = brute_force_min_relation(&x, 2, &ctx.pow10(-20)).unwrap().unwrap();
        assert_eq!(r.to_string(), "(-2, 1)");
    }

    #[test]
    fn golden_ratio_height_one() {
        let ctx = make_context(30, 5).unwrap();
        let phi = (ctx.sqrt(&ctx.real(5)) + 1u32) / 2u32;
        let x = vec![ctx.real(1), phi];
        assert_eq!(brute_force_min_relation(&x, 1, &ctx.pow10(-20)).unwrap(), None);
    }

    #[test]
    fn minpoly_examples() {
        let ctx = make_context(30, 5).unwrap();
        let a = ctx.from_rational(&parse_decimal("1.41421356237").unwrap());
        let p = brute_force_minpoly(&a, 2, 2, &ctx.pow10(-9)).unwrap().unwrap();
        assert_eq!(p.to_string(), "x^2 - 2");
        let half = ctx.real(0.5);
        let p = brute_force_minpoly(&half, 1, 2, &ctx.pow10(-20)).unwrap().unwrap();
        assert_eq!(p.to_string(), "2*x - 1");
        let pi = ctx.from_rational(&parse_decimal("3.14159265359").unwrap());
        assert_eq!(brute_force_minpoly(&pi, 2, 3, &ctx.pow10(-10)).unwrap(), None);
    }

    #[test]
    fn refuses_large_searches() {
        let ctx = make_context(30, 5).unwrap();
        let x = vec![ctx.real(1); 8];
        assert!(matches!(
            brute_force_min_relation(&x, 10, &ctx.pow10(-20)),
            Err(OracleError::SearchTooLarge { .. })
        ));
    }

    #[test]
    fn walk_covers_box() {
        let all: Vec<_> = BoxWalk::new(2, 1).collect();
        assert_eq!(all.len(), 9);
        assert_eq!(all[0], vec![-1, -1]);
        assert_eq!(all[8], vec![1, 1]);
        assert_eq!(all.iter().filter(|m| canonical(m)).count(), 4);
    }
}
