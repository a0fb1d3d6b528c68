//! Generators shared by the integration tests.
#![allow(dead_code)]

use pslq_minpoly::minpoly::epsilon_bound;
use pslq_minpoly::{make_context, IntPolynomial};
use rand::Rng;
use rug::{Float, Integer, Rational};

pub const PRIMES: [u64; 24] = [
    3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

// ---- arithmetic in F_p[x], ascending coefficients -------------------------

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut result = 1;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

fn rem_mod(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    let inv = inv_mod(m[dm], p);
    while r.len() > dm {
        let lead = r.pop().unwrap();
        if lead == 0 {
            continue;
        }
        let c = lead * inv % p;
        let shift = r.len() - dm;
        for i in 0..dm {
            r[shift + i] = (r[shift + i] + p - c * m[i] % p) % p;
        }
    }
    trim(r)
}

fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    rem_mod(&trim(out), m, p)
}

fn powmod(base: &[u64], mut e: u128, m: &[u64], p: u64) -> Vec<u64> {
    let mut result = vec![1];
    let mut b = base.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            result = mulmod(&result, &b, m, p);
        }
        b = mulmod(&b, &b, m, p);
        e >>= 1;
    }
    result
}

fn gcd_mod(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = rem_mod(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn sub_x(a: &[u64], p: u64) -> Vec<u64> {
    let mut out = a.to_vec();
    if out.len() < 2 {
        out.resize(2, 0);
    }
    out[1] = (out[1] + p - 1) % p;
    trim(out)
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n.is_multiple_of(q) {
            out.push(q);
            while n.is_multiple_of(q) {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's test: `f` of degree `n` is irreducible over F_p iff
/// `x^(p^n) ≡ x (mod f)` and `gcd(x^(p^(n/q)) - x, f) = 1` for all primes `q | n`.
pub fn irreducible_mod_p(f: &IntPolynomial, p: u64) -> bool {
    let n = f.degree().unwrap();
    let coeffs: Vec<u64> = f
        .coefficients()
        .iter()
        .map(|c| {
            let r = Integer::from(c % p);
            ((r.to_i64().unwrap() % p as i64 + p as i64) % p as i64) as u64
        })
        .collect();
    let coeffs = trim(coeffs);
    if coeffs.len() != n + 1 {
        return false;
    }
    let x = vec![0, 1];
    let frob = |k: usize| powmod(&x, (p as u128).pow(k as u32), &coeffs, p);
    if !sub_x(&frob(n), p).is_empty() {
        return false;
    }
    prime_factors(n).into_iter().all(|q| {
        let g = gcd_mod(&sub_x(&frob(n / q), p), &coeffs, p);
        g.len() == 1
    })
}

/// Irreducible over Q when it stays irreducible modulo a prime not dividing
/// the leading coefficient (sufficient, not necessary).
pub fn provably_irreducible(f: &IntPolynomial) -> bool {
    PRIMES.iter().any(|&p| irreducible_mod_p(f, p))
}

// ---- real roots by sign scan + bisection -----------------------------------

/// Some real root of `f`, bisected to `bits` bits, if a sign change shows up
/// on a grid of step 1/16 over the Cauchy interval.
pub fn some_real_root(f: &IntPolynomial, bits: u32) -> Option<Float> {
    let lead = f.leading_coefficient()?.clone().abs();
    let max = f.coefficients().iter().map(|c| c.clone().abs()).max()?;
    let bound = ((max / lead) + 2u32).to_i64()?;
    let mut prev: Option<(Rational, i32)> = None;
    for k in (-16 * bound)..=(16 * bound) {
        let t = Rational::from((k, 16));
        let s = f.evaluate_rational(&t).cmp0() as i32;
        if s == 0 {
            return Some(Float::with_val(bits, &t));
        }
        if let Some((lo, ps)) = &prev {
            if *ps != s {
                return Some(bisect(f, lo.clone(), t, bits));
            }
        }
        prev = Some((t, s));
    }
    None
}

fn bisect(f: &IntPolynomial, lo: Rational, hi: Rational, bits: u32) -> Float {
    let mut a = Float::with_val(bits, &lo);
    let mut b = Float::with_val(bits, &hi);
    let lo_sign = f.evaluate_rational(&lo).cmp0();
    for _ in 0..bits {
        let mid = Float::with_val(bits, &a + &b) / 2u32;
        let q = mid.to_rational().unwrap();
        let s = f.evaluate_rational(&q).cmp0();
        if s == std::cmp::Ordering::Equal {
            return mid;
        }
        if s == lo_sign {
            a = mid;
        } else {
            b = mid;
        }
    }
    a
}

// ---- round-trip instances ---------------------------------------------------

pub struct RoundTrip {
    pub poly: IntPolynomial,
    pub degree: u32,
    pub height: Integer,
    /// Root at twice the required precision.
    pub root: Float,
    /// `root + u·ε(deg, N)` with `u ∈ (-1, 1)`, exact.
    pub approx: Rational,
}

fn random_poly<R: Rng>(rng: &mut R, degree: usize) -> IntPolynomial {
    loop {
        let mut c: Vec<i64> = (0..=degree).map(|_| rng.gen_range(-20..=20)).collect();
        if c[degree] == 0 || c[0] == 0 {
            continue;
        }
        if c[degree] < 0 {
            for v in &mut c {
                *v = -*v;
            }
        }
        let p = IntPolynomial::from_i64s(&c);
        if p.content().unwrap() == 1 {
            return p;
        }
    }
}

/// Random primitive irreducible `g` of degree 2..=8 with coefficients in
/// [-20, 20] and a real root, plus a perturbed approximation of that root.
pub fn round_trip_instance<R: Rng>(rng: &mut R) -> RoundTrip {
    loop {
        let degree = rng.gen_range(2..=8usize);
        let poly = random_poly(rng, degree);
        if !provably_irreducible(&poly) {
            continue;
        }
        let height = poly.height();
        let d = degree as u32;
        let digits = pslq_minpoly::digits_required(d, &height);
        let bits = pslq_minpoly::arith::bits_for_digits(2 * digits + 20);
        let Some(root) = some_real_root(&poly, bits) else {
            continue;
        };
        let ctx = make_context(2 * digits + 20, 10).unwrap();
        let eps = epsilon_bound(d, &height, &ctx);
        let u: f64 = rng.gen_range(-0.999..0.999);
        let offset = Float::with_val(bits, &eps * u);
        let approx = Float::with_val(bits, &root + &offset).to_rational().unwrap();
        return RoundTrip {
            poly,
            degree: d,
            height,
            root,
            approx,
        };
    }
}

/// `k` instances from a fixed seed.
pub fn round_trip_suite(seed: u64, k: usize) -> Vec<RoundTrip> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..k).map(|_| round_trip_instance(&mut rng)).collect()
}

// ---- planted relations ------------------------------------------------------

pub struct Planted {
    pub x: Vec<Float>,
    pub relations: Vec<Vec<i64>>,
}

/// `x` of dimension `n` with random leading coordinates in (1, 2) and the
/// last coordinate solved from `m · x = 0`.
pub fn planted_one<R: Rng>(rng: &mut R, n: usize, entry: i64, prec: u32) -> Planted {
    let mut m: Vec<i64> = (0..n).map(|_| rng.gen_range(-entry..=entry)).collect();
    while m[n - 1] == 0 {
        m[n - 1] = rng.gen_range(-entry..=entry);
    }
    let mut x: Vec<Float> = (0..n - 1)
        .map(|_| random_unit(rng, prec) + 1u32)
        .collect();
    let mut acc = Float::new(prec);
    for (c, v) in m.iter().zip(&x) {
        acc += Float::with_val(prec, v * *c);
    }
    x.push(-acc / m[n - 1]);
    Planted {
        x,
        relations: vec![m],
    }
}

/// Dimension 4 with two independent planted relations.
pub fn planted_two<R: Rng>(rng: &mut R, entry: i64, prec: u32) -> Planted {
    let first = planted_one(rng, 3, entry, prec);
    let mut x = first.x;
    let mut m2: Vec<i64> = (0..4).map(|_| rng.gen_range(-entry..=entry)).collect();
    while m2[3] == 0 {
        m2[3] = rng.gen_range(-entry..=entry);
    }
    let mut acc = Float::new(prec);
    for (c, v) in m2.iter().zip(&x) {
        acc += Float::with_val(prec, v * *c);
    }
    x.push(-acc / m2[3]);
    let mut m1 = first.relations.into_iter().next().unwrap();
    m1.push(0);
    Planted {
        x,
        relations: vec![m1, m2],
    }
}

/// Uniform in [0, 1) with `prec` random bits.
pub fn random_unit<R: Rng>(rng: &mut R, prec: u32) -> Float {
    let mut acc = Float::new(prec);
    let mut scale = Float::with_val(prec, 1);
    let mut bits = 0;
    while bits < prec {
        scale >>= 32;
        acc += Float::with_val(prec, &scale * rng.gen::<u32>());
        bits += 32;
    }
    acc
}

pub fn norm(m: &[i64]) -> f64 {
    (m.iter().map(|c| (c * c) as f64).sum::<f64>()).sqrt()
}
