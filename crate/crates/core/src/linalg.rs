//! Dense linear algebra over complex doubles and exact rationals.
//!
//! Complex matrices are plain [`nalgebra::DMatrix`] values; this module adds
//! the handful of operations the rest of the crate needs on top of them
//! (Kronecker products, SVD-based kernels and pseudo-inverse solves,
//! max-norm residuals, commutants). Exact work on the symmetric group goes
//! through [`RationalMatrix`].

use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub type C64 = Complex64;

/// Complex double-precision dense matrix.
pub type Matrix = DMatrix<C64>;

/// Relative singular-value threshold used for rank decisions unless a caller
/// supplies its own.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn zeros(rows: usize, cols: usize) -> Matrix {
    Matrix::zeros(rows, cols)
}

pub fn identity(n: usize) -> Matrix {
    Matrix::identity(n, n)
}

/// Builds a matrix from row-major real entries.
pub fn from_real_rows(rows: usize, cols: usize, entries: &[f64]) -> Matrix {
    assert_eq!(entries.len(), rows * cols, "entry count must be rows * cols");
    Matrix::from_fn(rows, cols, |i, j| c64(entries[i * cols + j], 0.0))
}

/// Builds a matrix from a list of complex rows.
pub fn from_rows(rows: &[Vec<C64>]) -> Matrix {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
    Matrix::from_fn(r, c, |i, j| rows[i][j])
}

/// Row-major list of complex rows; the inverse of [`from_rows`].
pub fn to_rows(a: &Matrix) -> Vec<Vec<C64>> {
    (0..a.nrows())
        .map(|i| (0..a.ncols()).map(|j| a[(i, j)]).collect())
        .collect()
}

/// Kronecker product: `kron(a, b)[(i*p + k, j*q + l)] = a[(i, j)] * b[(k, l)]`
/// where `b` is `p x q`.
pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    a.kronecker(b)
}

/// Largest absolute entry; zero for an empty matrix.
pub fn max_norm(a: &Matrix) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_norm_slice(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn frobenius(a: &Matrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn is_finite(a: &Matrix) -> bool {
    a.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub fn commutator(a: &Matrix, b: &Matrix) -> Matrix {
    a * b - b * a
}

pub fn column(entries: &[C64]) -> Matrix {
    Matrix::from_column_slice(entries.len(), 1, entries)
}

/// Thin singular value decomposition `a = u diag(s) v^H` with `s` in
/// decreasing order. Columns of `u` paired with zero singular values may be
/// zero.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: Matrix,
    pub s: Vec<f64>,
    pub v: Matrix,
}

impl Svd {
    fn cut(&self, tol: f64) -> f64 {
        tol * self.s.first().copied().unwrap_or(0.0)
    }
}

/// nalgebra's complex SVD occasionally returns factors that do not
/// reproduce rank-deficient inputs, so every result is checked and, on
/// failure, recomputed from the real SVD of the realification
/// `[[Re a, -Im a], [Im a, Re a]]`.
pub fn svd(a: &Matrix) -> Svd {
    let (m, n) = a.shape();
    let k = m.min(n);
    if k == 0 {
        return Svd {
            u: zeros(m, 0),
            s: Vec::new(),
            v: zeros(n, 0),
        };
    }
    let dec = a.clone().svd(true, true);
    let u = dec.u.expect("left singular vectors requested");
    let v_t = dec.v_t.expect("right singular vectors requested");
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&i, &j| dec.singular_values[j].total_cmp(&dec.singular_values[i]));
    let candidate = Svd {
        u: Matrix::from_fn(m, k, |r, c| u[(r, order[c])]),
        s: order.iter().map(|&i| dec.singular_values[i]).collect(),
        v: Matrix::from_fn(n, k, |r, c| v_t[(order[c], r)].conj()),
    };
    if svd_is_valid(a, &candidate) {
        candidate
    } else {
        svd_via_realification(a)
    }
}

fn svd_is_valid(a: &Matrix, d: &Svd) -> bool {
    let k = d.s.len();
    let scale = frobenius(a).max(f64::MIN_POSITIVE);
    let sigma = Matrix::from_fn(k, k, |i, j| c64(if i == j { d.s[i] } else { 0.0 }, 0.0));
    let rebuilt = &d.u * sigma * d.v.adjoint();
    let id = identity(k);
    frobenius(&(rebuilt - a)) <= 1e-11 * scale
        && max_norm(&(d.u.adjoint() * &d.u - &id)) <= 1e-10
        && max_norm(&(d.v.adjoint() * &d.v - &id)) <= 1e-10
}

fn svd_via_realification(a: &Matrix) -> Svd {
    let (m, n) = a.shape();
    let k = m.min(n);
    let real = DMatrix::<f64>::from_fn(2 * m, 2 * n, |i, j| {
        let z = a[(i % m, j % n)];
        match (i < m, j < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    });
    let dec = real.svd(false, true);
    let v_t = dec.v_t.expect("right singular vectors requested");
    let mut order: Vec<usize> = (0..dec.singular_values.len()).collect();
    order.sort_by(|&i, &j| dec.singular_values[j].total_cmp(&dec.singular_values[i]));
    // each complex singular vector appears twice, as z and i z
    let mut vs: Vec<Matrix> = Vec::with_capacity(k);
    let mut s = Vec::with_capacity(k);
    for &idx in &order {
        if vs.len() == k {
            break;
        }
        let z = Matrix::from_fn(n, 1, |r, _| c64(v_t[(idx, r)], v_t[(idx, n + r)]));
        if let Some(q) = orthogonalize(&z, &vs) {
            vs.push(q);
            s.push(dec.singular_values[idx]);
        }
    }
    for e in 0..n {
        if vs.len() == k {
            break;
        }
        let mut z = zeros(n, 1);
        z[(e, 0)] = c64(1.0, 0.0);
        if let Some(q) = orthogonalize(&z, &vs) {
            vs.push(q);
            s.push(0.0);
        }
    }
    let mut v = zeros(n, k);
    let mut u = zeros(m, k);
    for (j, q) in vs.iter().enumerate() {
        v.set_column(j, &q.column(0));
        if s[j] > 0.0 {
            u.set_column(j, &(a * q / c64(s[j], 0.0)).column(0));
        }
    }
    Svd { u, s, v }
}

/// Twice-iterated Gram-Schmidt of a unit vector against an orthonormal
/// set; `None` when it lies in their span.
fn orthogonalize(z: &Matrix, basis: &[Matrix]) -> Option<Matrix> {
    let mut w = z.clone();
    for _ in 0..2 {
        for q in basis {
            let proj = q.dotc(&w);
            w -= q * proj;
        }
    }
    let norm = w.norm();
    (norm > 0.5).then(|| w / c64(norm, 0.0))
}

/// Orthonormal basis of the right null space of `a`: right singular vectors
/// whose singular value is at most `tol` times the largest one.
pub fn nullspace_basis(a: &Matrix, tol: f64) -> Vec<Matrix> {
    assert!(tol >= 0.0, "tolerance must be nonnegative");
    let (m, n) = a.shape();
    if n == 0 {
        return Vec::new();
    }
    // short matrices are padded with zero rows so the right factor is full
    let padded;
    let target = if m < n {
        let mut p = zeros(n, n);
        p.view_mut((0, 0), (m, n)).copy_from(a);
        padded = p;
        &padded
    } else {
        a
    };
    let d = svd(target);
    let cut = d.cut(tol);
    d.s.iter()
        .enumerate()
        .filter(|(_, &s)| s <= cut)
        .map(|(i, _)| d.v.columns(i, 1).into_owned())
        .collect()
}

/// Orthonormal basis of the column space of `a`, with the same threshold.
pub fn range_basis(a: &Matrix, tol: f64) -> Vec<Matrix> {
    let d = svd(a);
    let cut = d.cut(tol);
    d.s.iter()
        .enumerate()
        .filter(|(_, &s)| s > cut)
        .map(|(i, _)| d.u.columns(i, 1).into_owned())
        .collect()
}

/// Numerical rank with a relative singular-value threshold.
pub fn rank(a: &Matrix, tol: f64) -> usize {
    let d = svd(a);
    let cut = d.cut(tol);
    d.s.iter().filter(|&&s| s > 0.0 && s > cut).count()
}

/// Minimum-norm least-squares solution of `a x = b` via the pseudo-inverse,
/// discarding singular values below `tol` times the largest.
pub fn least_squares_min_norm(a: &Matrix, b: &Matrix, tol: f64) -> Matrix {
    assert_eq!(a.nrows(), b.nrows(), "row counts of a and b differ");
    let d = svd(a);
    let cut = d.cut(tol);
    let mut x = zeros(a.ncols(), b.ncols());
    for (j, &s) in d.s.iter().enumerate() {
        if s > 0.0 && s > cut {
            let coeffs = d.u.column(j).adjoint() * b / c64(s, 0.0);
            x += d.v.column(j) * coeffs;
        }
    }
    x
}

/// Column-stacked vectorisation, matching nalgebra's storage order.
pub fn vectorize(a: &Matrix) -> Vec<C64> {
    a.as_slice().to_vec()
}

pub fn unvectorize(v: &[C64], rows: usize, cols: usize) -> Matrix {
    Matrix::from_column_slice(rows, cols, v)
}

/// Basis of the matrices commuting with every matrix in `mats`.
pub fn commutant_basis(mats: &[Matrix], tol: f64) -> Vec<Matrix> {
    let d = match mats.first() {
        Some(m) => m.nrows(),
        None => return Vec::new(),
    };
    let id = identity(d);
    let block = d * d;
    let mut stacked = zeros(block * mats.len(), block);
    for (k, a) in mats.iter().enumerate() {
        // vec(A T - T A) = (I (x) A - A^T (x) I) vec(T)
        let op = kron(&id, a) - kron(&a.transpose(), &id);
        stacked.view_mut((k * block, 0), (block, block)).copy_from(&op);
    }
    nullspace_basis(&stacked, tol)
        .into_iter()
        .map(|v| unvectorize(v.as_slice(), d, d))
        .collect()
}

/// Dimension of the commutant of the algebra generated by `mats`.
pub fn commutant_dim(mats: &[Matrix], tol: f64) -> usize {
    commutant_basis(mats, tol).len()
}

/// Exact rational matrix, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

/// Outcome of an exact scalarity test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Scalarity {
    Scalar(BigRational),
    /// First entry (row-major) contradicting scalarity.
    NotScalar {
        row: usize,
        col: usize,
        value: BigRational,
    },
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigRational::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigRational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_integers(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows * cols");
        Self::from_fn(rows, cols, |i, j| {
            BigRational::from_integer(BigInt::from(entries[i * cols + j]))
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn trace(&self) -> BigRational {
        assert!(self.is_square(), "trace of a non-square matrix");
        (0..self.rows).fold(BigRational::zero(), |acc, i| acc + self.get(i, i))
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn kron(&self, other: &Self) -> Self {
        let (p, q) = (other.rows, other.cols);
        Self::from_fn(self.rows * p, self.cols * q, |r, c| {
            self.get(r / p, c / q) * other.get(r % p, c % q)
        })
    }

    /// Tests whether the matrix is `s * I` for some rational `s`.
    pub fn scalarity(&self) -> Scalarity {
        assert!(self.is_square(), "scalarity of a non-square matrix");
        let s = if self.rows == 0 {
            BigRational::zero()
        } else {
            self.get(0, 0).clone()
        };
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = self.get(i, j);
                let ok = if i == j { *v == s } else { v.is_zero() };
                if !ok {
                    return Scalarity::NotScalar {
                        row: i,
                        col: j,
                        value: v.clone(),
                    };
                }
            }
        }
        Scalarity::Scalar(s)
    }

    pub fn to_complex(&self) -> Matrix {
        Matrix::from_fn(self.rows, self.cols, |i, j| {
            c64(self.get(i, j).to_f64().expect("rational fits in f64"), 0.0)
        })
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RationalMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  {}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<'a> Mul<&'a RationalMatrix> for &'a RationalMatrix {
    type Output = RationalMatrix;

    fn mul(self, rhs: &'a RationalMatrix) -> RationalMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = RationalMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                // seminormal generators are very sparse
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl<'a> Add<&'a RationalMatrix> for &'a RationalMatrix {
    type Output = RationalMatrix;

    fn add(self, rhs: &'a RationalMatrix) -> RationalMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in sum");
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a RationalMatrix> for &'a RationalMatrix {
    type Output = RationalMatrix;

    fn sub(self, rhs: &'a RationalMatrix) -> RationalMatrix {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "shape mismatch in difference"
        );
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut impl Rng, r: usize, c: usize) -> Matrix {
        Matrix::from_fn(r, c, |_, _| c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
    }

    #[test]
    fn kron_of_identities_is_identity() {
        assert_eq!(kron(&identity(2), &identity(3)), identity(6));
    }

    #[test]
    fn kron_shift_matrix() {
        let shift = from_real_rows(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let k = kron(&shift, &identity(2));
        assert_eq!(k.shape(), (4, 4));
        for i in 0..4 {
            for j in 0..4 {
                let expected = if (i, j) == (0, 2) || (i, j) == (1, 3) { 1.0 } else { 0.0 };
                assert_eq!(k[(i, j)], c64(expected, 0.0));
            }
        }
    }

    #[test]
    fn kron_trace_is_product_of_traces() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = random_matrix(&mut rng, 3, 3);
        let b = random_matrix(&mut rng, 3, 3);
        // oracle: explicit double loop over the block structure
        let mut expected = C64::zero();
        for i in 0..3 {
            for k in 0..3 {
                expected += a[(i, i)] * b[(k, k)];
            }
        }
        assert!((kron(&a, &b).trace() - expected).norm() < 1e-12);
        assert!((expected - a.trace() * b.trace()).norm() < 1e-12);
    }

    #[test]
    fn nullspace_of_identity_is_empty() {
        assert!(nullspace_basis(&identity(3), 1e-12).is_empty());
    }

    #[test]
    fn nullspace_of_zero_is_everything() {
        assert_eq!(nullspace_basis(&zeros(2, 2), 1e-12).len(), 2);
    }

    #[test]
    fn nullspace_of_row_of_ones() {
        let a = from_real_rows(1, 2, &[1.0, 1.0]);
        let basis = nullspace_basis(&a, 1e-12);
        assert_eq!(basis.len(), 1);
        let v = &basis[0];
        // proportional to (1, -1)/sqrt(2): unit norm, entries opposite
        assert!((frobenius(v) - 1.0).abs() < 1e-12);
        assert!((v[(0, 0)] + v[(1, 0)]).norm() < 1e-12);
        assert!((v[(0, 0)].norm() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn nullspace_handles_zero_rows() {
        assert_eq!(nullspace_basis(&zeros(0, 3), 1e-10).len(), 3);
    }

    #[test]
    fn least_squares_identity() {
        let b = from_real_rows(3, 1, &[1.0, -2.0, 0.5]);
        let x = least_squares_min_norm(&identity(3), &b, DEFAULT_RANK_TOL);
        assert!(max_norm(&(x - b)) < 1e-14);
    }

    #[test]
    fn least_squares_overdetermined() {
        let a = from_real_rows(2, 1, &[1.0, 1.0]);
        let b = from_real_rows(2, 1, &[0.0, 2.0]);
        let x = least_squares_min_norm(&a, &b, DEFAULT_RANK_TOL);
        assert!((x[(0, 0)] - c64(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn least_squares_minimum_norm() {
        let a = from_real_rows(1, 2, &[1.0, 1.0]);
        let b = from_real_rows(1, 1, &[2.0]);
        let x = least_squares_min_norm(&a, &b, DEFAULT_RANK_TOL);
        assert!((x[(0, 0)] - c64(1.0, 0.0)).norm() < 1e-14);
        assert!((x[(1, 0)] - c64(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn commutant_of_generic_diagonal() {
        let d = Matrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            c64(1.0, 0.0),
            c64(2.0, 0.0),
            c64(3.0, 0.0),
        ]));
        assert_eq!(commutant_dim(&[d], 1e-10), 3);
        let shift = from_real_rows(3, 3, &[0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0]);
        let shift_t = shift.transpose();
        assert_eq!(commutant_dim(&[shift, shift_t], 1e-10), 1);
    }

    #[test]
    fn rational_scalarity() {
        let m = RationalMatrix::identity(3).scale(&BigRational::new(BigInt::from(-2), BigInt::from(1)));
        assert_eq!(
            m.scalarity(),
            Scalarity::Scalar(BigRational::from_integer(BigInt::from(-2)))
        );
        let mut n = m.clone();
        n.set(1, 2, BigRational::one());
        assert!(matches!(n.scalarity(), Scalarity::NotScalar { row: 1, col: 2, .. }));
    }

    #[test]
    fn svd_reproduces_rank_deficient_complex_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..300 {
            let (m, n, r) = (rng.gen_range(1..30), rng.gen_range(1..10), rng.gen_range(0..5));
            let mut entry = || c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let a = Matrix::from_fn(m, r, |_, _| entry()) * Matrix::from_fn(r, n, |_, _| entry());
            let d = svd(&a);
            let sigma = Matrix::from_fn(d.s.len(), d.s.len(), |i, j| c64(if i == j { d.s[i] } else { 0.0 }, 0.0));
            assert!(max_norm(&(&d.u * sigma * d.v.adjoint() - &a)) < 1e-10);
            assert!(d.s.windows(2).all(|w| w[0] >= w[1]));
            assert_eq!(rank(&a, 1e-10), r.min(m).min(n));
            let x = least_squares_min_norm(&a, &(&a * Matrix::from_fn(n, 1, |_, _| entry())), 1e-10);
            assert_eq!(nullspace_basis(&a, 1e-10).len(), n - r.min(m).min(n));
            assert!(x.iter().all(|z| z.is_finite()));
        }
    }

    proptest! {
        #[test]
        fn rational_kron_is_associative(
            a in proptest::collection::vec(-5i64..5, 4),
            b in proptest::collection::vec(-5i64..5, 2),
            c in proptest::collection::vec(-5i64..5, 6),
        ) {
            let a = RationalMatrix::from_integers(2, 2, &a);
            let b = RationalMatrix::from_integers(1, 2, &b);
            let c = RationalMatrix::from_integers(3, 2, &c);
            prop_assert_eq!(a.kron(&b).kron(&c), a.kron(&b.kron(&c)));
        }

        #[test]
        fn least_squares_reproduces_range(seed in 0u64..1000, r in 1usize..6, c in 1usize..6) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_matrix(&mut rng, r, c);
            let x0 = random_matrix(&mut rng, c, 1);
            let b = &a * &x0;
            let x = least_squares_min_norm(&a, &b, DEFAULT_RANK_TOL);
            let err = frobenius(&(&a * &x - &b)) / frobenius(&b).max(1e-300);
            prop_assert!(err <= 1e-10);
        }

        #[test]
        fn nullspace_vectors_are_annihilated(seed in 0u64..1000, r in 1usize..5, c in 1usize..7) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_matrix(&mut rng, r, c);
            let tol = 1e-10;
            let basis = nullspace_basis(&a, tol);
            prop_assert!(basis.len() >= c.saturating_sub(r));
            for v in &basis {
                prop_assert!(frobenius(&(&a * v)) <= 10.0 * tol * frobenius(&a));
            }
        }
    }
}
