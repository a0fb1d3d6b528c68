//! Linear-algebra core of the PSLQ(τ) iteration.
//!
//! The state is the quadruple `(x̄, H, A, B)`: the working unit vector, the
//! lower-trapezoidal `n × (n-1)` matrix `H`, and the mutually inverse integer
//! matrices `A` and `B`. Every step keeps `x̄ · H = 0`, `A · B = I` and the
//! trapezoidal shape of `H`. Only `x̄` and `H` are floating; `A` and `B` are
//! exact and are updated incrementally by the same row/column operations.
//!
//! Indices are zero-based throughout.

use std::fmt;
use std::ops::{Index, IndexMut};

use rug::{Float, Integer};
use thiserror::Error;

use crate::arith::{BigReal, PrecisionContext};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PslqError {
    #[error("integer relation search needs at least two coordinates, got {0}")]
    DimensionTooSmall(usize),
    #[error("cannot unitize the zero vector")]
    ZeroVector,
    #[error("diagonal entry h[{index}][{index}] fell below the zero threshold")]
    DegenerateDiagonal { index: usize },
    #[error("corner rotation at row {row} is degenerate")]
    DegenerateRotation { row: usize },
    #[error("pivot row {row} out of range for a {rows}-row state")]
    PivotOutOfRange { row: usize, rows: usize },
}

/// A vector of norm one with no zero coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitVector {
    entries: Vec<BigReal>,
}

impl UnitVector {
    pub fn entries(&self) -> &[BigReal] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Result of [`unitize`].
#[derive(Debug, Clone, PartialEq)]
pub enum Unitized {
    Unit(UnitVector),
    /// Coordinate `index` is exactly zero, so the unit vector `e_index` is
    /// already an integer relation.
    ZeroCoordinate(usize),
}

/// Scales `x` to norm one.
pub fn unitize(x: &[BigReal], ctx: &PrecisionContext) -> Result<Unitized, PslqError> {
    if x.len() < 2 {
        return Err(PslqError::DimensionTooSmall(x.len()));
    }
    if x.iter().all(|v| v.is_zero()) {
        return Err(PslqError::ZeroVector);
    }
    if let Some(index) = x.iter().position(|v| v.is_zero()) {
        return Ok(Unitized::ZeroCoordinate(index));
    }
    let norm = ctx.sqrt(&sum_of_squares(x, ctx));
    let entries = x
        .iter()
        .map(|v| Float::with_val(ctx.precision_bits(), v / &norm))
        .collect();
    Ok(Unitized::Unit(UnitVector { entries }))
}

pub(crate) fn sum_of_squares(x: &[BigReal], ctx: &PrecisionContext) -> BigReal {
    let mut acc = ctx.zero();
    for v in x {
        acc += Float::with_val(ctx.precision_bits(), v.square_ref());
    }
    acc
}

/// Dense `rows × cols` matrix of reals, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct HMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigReal>,
}

impl HMatrix {
    pub fn zeros(rows: usize, cols: usize, ctx: &PrecisionContext) -> Self {
        HMatrix {
            rows,
            cols,
            data: vec![ctx.zero(); rows * cols],
        }
    }

    /// Builds a matrix from rows; every row must have the same length.
    pub fn from_rows(rows: Vec<Vec<BigReal>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        HMatrix {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn diagonal(&self) -> impl Iterator<Item = &BigReal> + '_ {
        (0..self.cols.min(self.rows)).map(move |j| &self[(j, j)])
    }

    /// True when every entry strictly above the diagonal is exactly zero.
    pub fn is_lower_trapezoidal(&self) -> bool {
        (0..self.rows).all(|i| ((i + 1)..self.cols).all(|j| self[(i, j)].is_zero()))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for k in 0..self.cols {
            self.data.swap(a * self.cols + k, b * self.cols + k);
        }
    }
}

impl Index<(usize, usize)> for HMatrix {
    type Output = BigReal;

    fn index(&self, (i, j): (usize, usize)) -> &BigReal {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for HMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigReal {
        &mut self.data[i * self.cols + j]
    }
}

/// The partial-sum matrix of a unit vector.
///
/// With `s_j² = Σ_{k≥j} x_k²`: `h_{j,j} = s_{j+1}/s_j`,
/// `h_{i,j} = -x_i x_j / (s_j s_{j+1})` below the diagonal, zero above.
/// Its columns are an orthonormal basis of the complement of `x`.
pub fn build_h_matrix(x: &UnitVector, ctx: &PrecisionContext) -> HMatrix {
    let n = x.len();
    let prec = ctx.precision_bits();
    let xs = x.entries();
    // s[j] = sqrt(sum_{k >= j} x_k^2), computed from the tail.
    let mut s = vec![ctx.zero(); n];
    let mut tail = ctx.zero();
    for j in (0..n).rev() {
        tail += Float::with_val(ctx.precision_bits(), xs[j].square_ref());
        s[j] = ctx.sqrt(&tail);
    }
    let mut h = HMatrix::zeros(n, n - 1, ctx);
    for j in 0..n - 1 {
        h[(j, j)] = Float::with_val(prec, &s[j + 1] / &s[j]);
        let denom = Float::with_val(prec, &s[j] * &s[j + 1]);
        for i in (j + 1)..n {
            let num = Float::with_val(prec, &xs[i] * &xs[j]);
            h[(i, j)] = -(num / &denom);
        }
    }
    h
}

/// Nearest integer as `⌊t + 1/2⌋` (halves round up).
pub fn nint(t: &Float) -> Integer {
    let floor = t.clone().floor();
    // t - floor(t) is exact: both share t's binary scale.
    let frac = Float::with_val(t.prec(), t - &floor);
    let mut q = floor.to_integer().expect("finite argument to nint");
    if frac >= 0.5 {
        q += 1;
    }
    q
}

/// Square integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    n: usize,
    data: Vec<Integer>,
}

impl IntMatrix {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![Integer::new(); n * n];
        for i in 0..n {
            data[i * n + i] = Integer::from(1);
        }
        IntMatrix { n, data }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn column(&self, j: usize) -> Vec<Integer> {
        (0..self.n).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row(&self, i: usize) -> &[Integer] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = vec![Integer::new(); n * n];
        for i in 0..n {
            for k in 0..n {
                let aik = &self.data[i * n + k];
                if aik.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += aik * &other.data[k * n + j];
                }
            }
        }
        IntMatrix { n, data: out }
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self[(i, j)] == i32::from(i == j)))
    }

    /// row_target -= q · row_source
    fn sub_row_multiple(&mut self, target: usize, source: usize, q: &Integer) {
        for k in 0..self.n {
            let delta = Integer::from(q * &self.data[source * self.n + k]);
            self.data[target * self.n + k] -= delta;
        }
    }

    /// col_target += q · col_source
    fn add_col_multiple(&mut self, target: usize, source: usize, q: &Integer) {
        for k in 0..self.n {
            let delta = Integer::from(q * &self.data[k * self.n + source]);
            self.data[k * self.n + target] += delta;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for k in 0..self.n {
            self.data.swap(a * self.n + k, b * self.n + k);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for k in 0..self.n {
            self.data.swap(k * self.n + a, k * self.n + b);
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = Integer;

    fn index(&self, (i, j): (usize, usize)) -> &Integer {
        &self.data[i * self.n + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: Vec<String> = self.row(i).iter().map(Integer::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// The evolving `(x̄, H, A, B)` quadruple plus the PSLQ(τ) parameters.
#[derive(Debug, Clone)]
pub struct PslqState {
    xbar: Vec<BigReal>,
    h: HMatrix,
    a: IntMatrix,
    b: IntMatrix,
    gamma: BigReal,
    tau: BigReal,
    iteration: u64,
}

impl PslqState {
    /// Fresh state: `H = H_x`, `A = B = I`, iteration zero.
    pub fn new(x: &UnitVector, gamma: BigReal, tau: BigReal, ctx: &PrecisionContext) -> Self {
        let n = x.len();
        PslqState {
            xbar: x.entries().to_vec(),
            h: build_h_matrix(x, ctx),
            a: IntMatrix::identity(n),
            b: IntMatrix::identity(n),
            gamma,
            tau,
            iteration: 0,
        }
    }

    /// State with an arbitrary starting `H` (used to exercise the reduction
    /// and rotation steps on synthetic matrices).
    pub fn from_parts(xbar: Vec<BigReal>, h: HMatrix, gamma: BigReal, tau: BigReal) -> Self {
        let n = xbar.len();
        assert_eq!(h.rows(), n);
        PslqState {
            xbar,
            h,
            a: IntMatrix::identity(n),
            b: IntMatrix::identity(n),
            gamma,
            tau,
            iteration: 0,
        }
    }

    pub fn dimension(&self) -> usize {
        self.xbar.len()
    }

    pub fn xbar(&self) -> &[BigReal] {
        &self.xbar
    }

    pub fn h(&self) -> &HMatrix {
        &self.h
    }

    pub fn a(&self) -> &IntMatrix {
        &self.a
    }

    pub fn b(&self) -> &IntMatrix {
        &self.b
    }

    pub fn gamma(&self) -> &BigReal {
        &self.gamma
    }

    pub fn tau(&self) -> &BigReal {
        &self.tau
    }

    pub fn iteration(&self) -> u64 {
        self.iteration
    }

    pub(crate) fn advance_iteration(&mut self) {
        self.iteration += 1;
    }

    /// Modified Hermite reduction, applied in place.
    ///
    /// For `i = 1..n`, `j = i-1` down to `0`: `q = nint(h_ij / h_jj)`, then
    /// `row_i(H) -= q·row_j(H)` on columns `0..=j`. The same elementary matrix
    /// `D` updates `x̄ := x̄·D⁻¹`, `A := D·A`, `B := B·D⁻¹`. Afterwards
    /// `|h_ij| ≤ |h_jj|/2` below the diagonal.
    ///
    /// A diagonal entry under the zero threshold means a relation has surfaced;
    /// it is reported as [`PslqError::DegenerateDiagonal`] for the caller.
    pub fn hermite_reduce(&mut self, ctx: &PrecisionContext) -> Result<(), PslqError> {
        let n = self.dimension();
        let cols = self.h.cols();
        let prec = ctx.precision_bits();
        for i in 1..n {
            for j in (0..i.min(cols)).rev() {
                let hjj = &self.h[(j, j)];
                if ctx.is_negligible(hjj) {
                    return Err(PslqError::DegenerateDiagonal { index: j });
                }
                let ratio = Float::with_val(prec, &self.h[(i, j)] / hjj);
                let q = nint(&ratio);
                if q.is_zero() {
                    continue;
                }
                for k in 0..=j {
                    let delta = Float::with_val(prec, &self.h[(j, k)] * &q);
                    self.h[(i, k)] -= delta;
                }
                self.a.sub_row_multiple(i, j, &q);
                self.b.add_col_multiple(j, i, &q);
                let delta = Float::with_val(prec, &self.xbar[i] * &q);
                self.xbar[j] += delta;
            }
        }
        Ok(())
    }

    /// Smallest `r` maximising `τ^(r+1) · |h_rr|`.
    pub fn select_pivot(&self) -> usize {
        let prec = self.tau.prec();
        let mut best = 0;
        let mut best_weight: Option<Float> = None;
        let mut power = self.tau.clone();
        for (r, hrr) in self.h.diagonal().enumerate() {
            let weight = Float::with_val(prec, hrr.abs_ref()) * &power;
            if best_weight.as_ref().is_none_or(|w| weight > *w) {
                best = r;
                best_weight = Some(weight);
            }
            power *= &self.tau;
        }
        best
    }

    /// Exchanges rows `r` and `r+1` (entries of `x̄`, rows of `H` and `A`,
    /// columns of `B`), then, unless `r` is the last column of `H`, restores
    /// the trapezoidal shape with the plane rotation on columns `r, r+1`:
    /// with `β = h_{r+1,r}`, `λ = h_{r+1,r+1}` (pre-swap) and `σ = √(β²+λ²)`,
    /// `Q = [[β/σ, -λ/σ], [λ/σ, β/σ]]`.
    pub fn swap_and_rotate(&mut self, r: usize, ctx: &PrecisionContext) -> Result<(), PslqError> {
        let n = self.dimension();
        let cols = self.h.cols();
        if r >= cols {
            return Err(PslqError::PivotOutOfRange { row: r, rows: n });
        }
        self.xbar.swap(r, r + 1);
        self.h.swap_rows(r, r + 1);
        self.a.swap_rows(r, r + 1);
        self.b.swap_cols(r, r + 1);
        if r + 1 == cols {
            return Ok(());
        }
        let prec = ctx.precision_bits();
        // After the swap, row r holds the old row r+1: (β, λ) in columns r, r+1.
        let beta = self.h[(r, r)].clone();
        let lambda = self.h[(r, r + 1)].clone();
        let sigma = ctx.sqrt(&(Float::with_val(prec, beta.square_ref()) + Float::with_val(prec, lambda.square_ref())));
        if ctx.is_negligible(&sigma) {
            return Err(PslqError::DegenerateRotation { row: r });
        }
        let c = Float::with_val(prec, &beta / &sigma);
        let s = Float::with_val(prec, &lambda / &sigma);
        for i in r..n {
            let t1 = self.h[(i, r)].clone();
            let t2 = self.h[(i, r + 1)].clone();
            self.h[(i, r)] = Float::with_val(prec, &c * &t1) + Float::with_val(prec, &s * &t2);
            self.h[(i, r + 1)] = Float::with_val(prec, &c * &t2) - Float::with_val(prec, &s * &t1);
        }
        // Exactly zero by construction; rounding would otherwise leave dust.
        self.h[(r, r + 1)] = ctx.zero();
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::make_context;

    fn ctx() -> PrecisionContext {
        make_context(40, 10).unwrap()
    }

    fn reals(ctx: &PrecisionContext, xs: &[f64]) -> Vec<BigReal> {
        xs.iter().map(|&v| ctx.real(v)).collect()
    }

    fn close(a: &Float, b: &Float, ctx: &PrecisionContext) -> bool {
        ctx.is_negligible(&Float::with_val(ctx.precision_bits(), a - b))
    }

    fn unit(ctx: &PrecisionContext, xs: &[f64]) -> UnitVector {
        match unitize(&reals(ctx, xs), ctx).unwrap() {
            Unitized::Unit(u) => u,
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unitize_three_four_five() {
        let ctx = ctx();
        let u = unit(&ctx, &[3.0, 4.0]);
        let three_fifths = ctx.from_rational(&rug::Rational::from((3, 5)));
        assert!(close(&u.entries()[0], &three_fifths, &ctx));
        let four_fifths = ctx.from_rational(&rug::Rational::from((4, 5)));
        assert!(close(&u.entries()[1], &four_fifths, &ctx));
    }

    #[test]
    fn unitize_zero_coordinate_is_trivial_relation() {
        let ctx = ctx();
        assert_eq!(
            unitize(&reals(&ctx, &[0.0, 7.0]), &ctx).unwrap(),
            Unitized::ZeroCoordinate(0)
        );
        assert_eq!(unitize(&reals(&ctx, &[0.0, 0.0]), &ctx), Err(PslqError::ZeroVector));
        assert_eq!(unitize(&reals(&ctx, &[1.0]), &ctx), Err(PslqError::DimensionTooSmall(1)));
    }

    #[test]
    fn unitize_symmetric() {
        let ctx = ctx();
        let u = unit(&ctx, &[1.0, 1.0, 1.0]);
        let expected = Float::with_val(ctx.precision_bits(), 3).sqrt().recip();
        for e in u.entries() {
            assert!(close(e, &expected, &ctx));
        }
    }

    #[test]
    fn h_matrix_for_three_four_five() {
        let ctx = ctx();
        let h = build_h_matrix(&unit(&ctx, &[3.0, 4.0]), &ctx);
        assert_eq!((h.rows(), h.cols()), (2, 1));
        let q = |a, b| ctx.from_rational(&rug::Rational::from((a, b)));
        assert!(close(&h[(0, 0)], &q(4, 5), &ctx));
        assert!(close(&h[(1, 0)], &q(-3, 5), &ctx));
    }

    #[test]
    fn h_matrix_for_equal_pair() {
        let ctx = ctx();
        let h = build_h_matrix(&unit(&ctx, &[1.0, 1.0]), &ctx);
        let r = Float::with_val(ctx.precision_bits(), 2).sqrt().recip();
        assert!(close(&h[(0, 0)], &r, &ctx));
        assert!(close(&h[(1, 0)], &(-r.clone()), &ctx));
    }

    #[test]
    fn nint_rounds_halves_up() {
        let ctx = ctx();
        assert_eq!(nint(&ctx.real(1.5)), 2);
        assert_eq!(nint(&ctx.real(-0.5)), 0);
        assert_eq!(nint(&ctx.real(0.0)), 0);
        assert_eq!(nint(&ctx.real(0.4)), 0);
        assert_eq!(nint(&ctx.real(-1.5)), -1);
        assert_eq!(nint(&ctx.real(-1.6)), -2);
        assert_eq!(nint(&ctx.real(2.49)), 2);
    }

    fn state_from_rows(ctx: &PrecisionContext, rows: &[&[f64]]) -> PslqState {
        let h = HMatrix::from_rows(rows.iter().map(|r| reals(ctx, r)).collect());
        let n = h.rows();
        let xbar = vec![ctx.real(1); n];
        let tau = ctx.sqrt(&ctx.real(2));
        PslqState::from_parts(xbar, h, ctx.real(2), tau)
    }

    #[test]
    fn hermite_leaves_small_ratio_alone() {
        let ctx = ctx();
        let mut st = state_from_rows(&ctx, &[&[1.0], &[0.4]]);
        st.hermite_reduce(&ctx).unwrap();
        assert!(close(&st.h()[(1, 0)], &ctx.real(0.4), &ctx));
        assert!(st.a().is_identity());
    }

    #[test]
    fn hermite_rounds_half_ratio_up() {
        let ctx = ctx();
        let mut st = state_from_rows(&ctx, &[&[1.0], &[1.5]]);
        st.hermite_reduce(&ctx).unwrap();
        // q = nint(1.5) = 2, so 1.5 - 2 = -0.5
        assert!(close(&st.h()[(1, 0)], &ctx.real(-0.5), &ctx));
        assert_eq!(st.a()[(1, 0)], -2);
        assert_eq!(st.b()[(1, 0)], 2);
        assert!(st.a().mul(st.b()).is_identity());
    }

    #[test]
    fn hermite_reports_vanished_diagonal() {
        let ctx = ctx();
        let mut st = state_from_rows(&ctx, &[&[0.0], &[1.0]]);
        assert_eq!(st.hermite_reduce(&ctx), Err(PslqError::DegenerateDiagonal { index: 0 }));
    }

    #[test]
    fn pivot_selection() {
        let ctx = ctx();
        let st = state_from_rows(&ctx, &[&[0.9, 0.0], &[0.1, 0.9], &[0.2, 0.3]]);
        assert_eq!(st.select_pivot(), 1);
        let st = state_from_rows(&ctx, &[&[1.0, 0.0], &[0.1, 0.1], &[0.2, 0.3]]);
        assert_eq!(st.select_pivot(), 0);
        let st = state_from_rows(&ctx, &[&[0.3], &[0.2]]);
        assert_eq!(st.select_pivot(), 0);
    }

    #[test]
    fn swap_without_rotation_on_last_column() {
        let ctx = ctx();
        let mut st = state_from_rows(&ctx, &[&[0.8], &[-0.6]]);
        st.swap_and_rotate(0, &ctx).unwrap();
        assert!(close(&st.h()[(0, 0)], &ctx.real(-0.6), &ctx));
        assert!(close(&st.h()[(1, 0)], &ctx.real(0.8), &ctx));
        assert_eq!(st.b()[(1, 0)], 1);
        assert!(st.a().mul(st.b()).is_identity());
    }

    #[test]
    fn rotation_restores_trapezoidal_shape() {
        let ctx = ctx();
        let mut st = state_from_rows(&ctx, &[&[0.7, 0.0], &[0.3, 0.5], &[-0.2, 0.4]]);
        st.swap_and_rotate(0, &ctx).unwrap();
        assert!(st.h().is_lower_trapezoidal());
        let sum = ctx.real(0.3).square() + ctx.real(0.5).square();
        let sigma = ctx.sqrt(&sum);
        assert!(close(&st.h()[(0, 0)], &sigma, &ctx));
    }
}
