//! Dense complex linear algebra for two-level systems.
//!
//! Everything downstream is expressed with [`Vec2`] (a ket in the flavour
//! basis) and [`Mat2`] (a row-major 2×2 representation matrix). Values are
//! immutable; all operations return new values.

use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Complex scalar used throughout the crate.
pub type Complex = Complex64;

/// Imaginary unit.
pub const I: Complex = Complex::new(0.0, 1.0);

/// Relative singularity threshold for [`inverse`]: `|det| <= SINGULAR_RTOL * max|m_ij|^2`.
pub const SINGULAR_RTOL: f64 = 1e-12;

/// Taylor order used by [`mat_exp`] after scaling.
const EXP_TAYLOR_ORDER: usize = 18;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum LinalgError {
    #[error("matrix is singular (|det| = {det_abs:e}, threshold {threshold:e})")]
    Singular { det_abs: f64, threshold: f64 },
    #[error("non-finite component at index {index}")]
    NonFinite { index: usize },
}

/// Shorthand for a real-valued complex number.
#[inline]
pub fn re(x: f64) -> Complex {
    Complex::new(x, 0.0)
}

#[inline]
pub fn is_finite(c: Complex) -> bool {
    c.re.is_finite() && c.im.is_finite()
}

/// Two-component complex column vector `(c0, c1)^T`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Vec2 {
    c: [Complex; 2],
}

impl Vec2 {
    /// Builds a vector, rejecting NaN and infinite components.
    pub fn try_new(c0: Complex, c1: Complex) -> Result<Self, LinalgError> {
        for (index, c) in [c0, c1].into_iter().enumerate() {
            if !is_finite(c) {
                return Err(LinalgError::NonFinite { index });
            }
        }
        Ok(Self { c: [c0, c1] })
    }

    pub(crate) const fn new(c0: Complex, c1: Complex) -> Self {
        Self { c: [c0, c1] }
    }

    pub const fn zero() -> Self {
        Self::new(Complex::new(0.0, 0.0), Complex::new(0.0, 0.0))
    }

    /// Flavour basis vector: `basis(0) = (1, 0)^T`, `basis(1) = (0, 1)^T`.
    ///
    /// Panics if `k > 1`.
    pub fn basis(k: usize) -> Self {
        match k {
            0 => Self::new(re(1.0), re(0.0)),
            1 => Self::new(re(0.0), re(1.0)),
            _ => panic!("two-level basis index {k} out of range"),
        }
    }

    pub fn c0(&self) -> Complex {
        self.c[0]
    }

    pub fn c1(&self) -> Complex {
        self.c[1]
    }

    pub fn components(&self) -> [Complex; 2] {
        self.c
    }

    /// Component-wise complex conjugation (the action of T).
    pub fn conj(&self) -> Self {
        Self::new(self.c[0].conj(), self.c[1].conj())
    }

    pub fn scale(&self, s: Complex) -> Self {
        Self::new(self.c[0] * s, self.c[1] * s)
    }

    /// Plain bilinear contraction `self^T · other` with no conjugation.
    pub fn dot(&self, other: &Vec2) -> Complex {
        self.c[0] * other.c[0] + self.c[1] * other.c[1]
    }

    /// Euclidean inner product `self^† · other`.
    pub fn dot_conj(&self, other: &Vec2) -> Complex {
        self.c[0].conj() * other.c[0] + self.c[1].conj() * other.c[1]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.c[0].norm_sqr() + self.c[1].norm_sqr()
    }

    pub fn max_abs_diff(&self, other: &Vec2) -> f64 {
        (self.c[0] - other.c[0])
            .norm()
            .max((self.c[1] - other.c[1]).norm())
    }

    pub fn is_finite(&self) -> bool {
        self.c.iter().all(|&c| is_finite(c))
    }
}

impl Index<usize> for Vec2 {
    type Output = Complex;

    fn index(&self, i: usize) -> &Complex {
        &self.c[i]
    }
}

impl Add for Vec2 {
    type Output = Vec2;

    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.c[0] + rhs.c[0], self.c[1] + rhs.c[1])
    }
}

impl Sub for Vec2 {
    type Output = Vec2;

    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.c[0] - rhs.c[0], self.c[1] - rhs.c[1])
    }
}

impl Neg for Vec2 {
    type Output = Vec2;

    fn neg(self) -> Vec2 {
        Vec2::new(-self.c[0], -self.c[1])
    }
}

impl fmt::Display for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.c[0], self.c[1])
    }
}

/// Row-major 2×2 complex matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mat2 {
    m: [[Complex; 2]; 2],
}

impl Mat2 {
    /// Builds a matrix from rows, rejecting NaN and infinite entries.
    pub fn try_from_rows(rows: [[Complex; 2]; 2]) -> Result<Self, LinalgError> {
        for (index, c) in rows.iter().flatten().enumerate() {
            if !is_finite(*c) {
                return Err(LinalgError::NonFinite { index });
            }
        }
        Ok(Self { m: rows })
    }

    pub(crate) const fn new(a: Complex, b: Complex, c: Complex, d: Complex) -> Self {
        Self {
            m: [[a, b], [c, d]],
        }
    }

    /// Real matrix `[[a, b], [c, d]]`.
    pub(crate) fn real(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self::new(re(a), re(b), re(c), re(d))
    }

    pub fn zero() -> Self {
        Self::real(0.0, 0.0, 0.0, 0.0)
    }

    pub fn identity() -> Self {
        Self::real(1.0, 0.0, 0.0, 1.0)
    }

    pub fn diag(a: Complex, d: Complex) -> Self {
        Self::new(a, re(0.0), re(0.0), d)
    }

    /// The parity matrix `[[0, 1], [1, 0]]`.
    pub fn parity() -> Self {
        Self::real(0.0, 1.0, 1.0, 0.0)
    }

    /// Matrix whose columns are `c0` and `c1`.
    pub fn from_columns(c0: &Vec2, c1: &Vec2) -> Self {
        Self::new(c0[0], c1[0], c0[1], c1[1])
    }

    /// Outer product `|u⟩⟨v|`.
    pub fn outer(u: &Vec2, v: &Vec2) -> Self {
        Self::new(
            u[0] * v[0].conj(),
            u[0] * v[1].conj(),
            u[1] * v[0].conj(),
            u[1] * v[1].conj(),
        )
    }

    pub fn rows(&self) -> [[Complex; 2]; 2] {
        self.m
    }

    pub fn column(&self, j: usize) -> Vec2 {
        Vec2::new(self.m[0][j], self.m[1][j])
    }

    pub fn transpose(&self) -> Self {
        Self::new(self.m[0][0], self.m[1][0], self.m[0][1], self.m[1][1])
    }

    /// Entry-wise conjugate, no transpose.
    pub fn conj(&self) -> Self {
        self.map(|c| c.conj())
    }

    pub fn adjoint(&self) -> Self {
        self.transpose().conj()
    }

    pub fn det(&self) -> Complex {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn trace(&self) -> Complex {
        self.m[0][0] + self.m[1][1]
    }

    pub fn scale(&self, s: Complex) -> Self {
        self.map(|c| c * s)
    }

    pub fn apply(&self, v: &Vec2) -> Vec2 {
        Vec2::new(
            self.m[0][0] * v[0] + self.m[0][1] * v[1],
            self.m[1][0] * v[0] + self.m[1][1] * v[1],
        )
    }

    /// `self·other − other·self`.
    pub fn commutator(&self, other: &Mat2) -> Self {
        *self * *other - *other * *self
    }

    pub fn max_abs(&self) -> f64 {
        self.m
            .iter()
            .flatten()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    /// Max-entry absolute difference, the comparison metric used by tests.
    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        (*self - *other).max_abs()
    }

    /// Maximum absolute column sum.
    pub fn norm1(&self) -> f64 {
        (0..2)
            .map(|j| self.m[0][j].norm() + self.m[1][j].norm())
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }

    pub fn is_finite(&self) -> bool {
        self.m.iter().flatten().all(|&c| is_finite(c))
    }

    fn map(&self, f: impl Fn(Complex) -> Complex) -> Self {
        Self::new(
            f(self.m[0][0]),
            f(self.m[0][1]),
            f(self.m[1][0]),
            f(self.m[1][1]),
        )
    }
}

impl Index<(usize, usize)> for Mat2 {
    type Output = Complex;

    fn index(&self, (i, j): (usize, usize)) -> &Complex {
        &self.m[i][j]
    }
}

impl Mul for Mat2 {
    type Output = Mat2;

    fn mul(self, rhs: Mat2) -> Mat2 {
        mat_mul(&self, &rhs)
    }
}

impl Mul<Vec2> for Mat2 {
    type Output = Vec2;

    fn mul(self, rhs: Vec2) -> Vec2 {
        self.apply(&rhs)
    }
}

impl Add for Mat2 {
    type Output = Mat2;

    fn add(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (self.m, rhs.m);
        Mat2::new(
            a[0][0] + b[0][0],
            a[0][1] + b[0][1],
            a[1][0] + b[1][0],
            a[1][1] + b[1][1],
        )
    }
}

impl Sub for Mat2 {
    type Output = Mat2;

    fn sub(self, rhs: Mat2) -> Mat2 {
        self + (-rhs)
    }
}

impl Neg for Mat2 {
    type Output = Mat2;

    fn neg(self) -> Mat2 {
        self.map(|c| -c)
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.m[0][0], self.m[0][1], self.m[1][0], self.m[1][1]
        )
    }
}

pub fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let (a, b) = (a.m, b.m);
    Mat2::new(
        a[0][0] * b[0][0] + a[0][1] * b[1][0],
        a[0][0] * b[0][1] + a[0][1] * b[1][1],
        a[1][0] * b[0][0] + a[1][1] * b[1][0],
        a[1][0] * b[0][1] + a[1][1] * b[1][1],
    )
}

pub fn adjoint(m: &Mat2) -> Mat2 {
    m.adjoint()
}

pub fn det(m: &Mat2) -> Complex {
    m.det()
}

/// Inverse via the adjugate. Singular when `|det| <= 1e-12 · (max |m_ij|)^2`.
pub fn inverse(m: &Mat2) -> Result<Mat2, LinalgError> {
    let d = m.det();
    let scale = m.max_abs();
    let threshold = SINGULAR_RTOL * scale * scale;
    if d.norm() <= threshold || scale == 0.0 {
        return Err(LinalgError::Singular {
            det_abs: d.norm(),
            threshold,
        });
    }
    let r = m.m;
    let inv_d = d.inv();
    Ok(Mat2::new(r[1][1], -r[0][1], -r[1][0], r[0][0]).scale(inv_d))
}

/// `exp(scale · m)` by scaling and squaring a truncated Taylor series.
///
/// No eigendecomposition is involved, so this doubles as an oracle for
/// spectral time evolution.
pub fn mat_exp(m: &Mat2, scale: Complex) -> Mat2 {
    let a = m.scale(scale);
    let norm = a.norm1();
    let mut squarings = 0u32;
    if norm > 0.5 {
        squarings = (norm / 0.5).log2().ceil() as u32;
    }
    let a = a.scale(re(0.5f64.powi(squarings as i32)));

    let mut term = Mat2::identity();
    let mut sum = Mat2::identity();
    for k in 1..=EXP_TAYLOR_ORDER {
        term = (term * a).scale(re(1.0 / k as f64));
        sum = sum + term;
    }
    for _ in 0..squarings {
        sum = sum * sum;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn random_mat(rng: &mut ChaCha8Rng) -> Mat2 {
        let mut e = || c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        Mat2::new(e(), e(), e(), e())
    }

    #[test]
    fn identity_is_neutral() {
        let m = Mat2::new(c(1.0, 2.0), c(-3.0, 0.5), c(0.0, 1.0), c(4.0, -1.0));
        assert_eq!(mat_mul(&Mat2::identity(), &m), m);
        assert_eq!(mat_mul(&m, &Mat2::identity()), m);
    }

    #[test]
    fn parity_squares_to_identity() {
        let p = Mat2::parity();
        assert_eq!(p * p, Mat2::identity());
        assert_eq!(det(&p), re(-1.0));
    }

    #[test]
    fn product_matches_entrywise_expansion() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let a = random_mat(&mut rng);
            let b = random_mat(&mut rng);
            let p = mat_mul(&a, &b);
            for i in 0..2 {
                for j in 0..2 {
                    let mut s = c(0.0, 0.0);
                    for k in 0..2 {
                        s += a[(i, k)] * b[(k, j)];
                    }
                    assert!((p[(i, j)] - s).norm() <= 1e-14);
                }
            }
        }
    }

    #[test]
    fn adjoint_basics() {
        assert_eq!(adjoint(&Mat2::identity()), Mat2::identity());
        let m = Mat2::new(c(1.0, 2.0), c(-3.0, 0.5), c(0.0, 1.0), c(4.0, -1.0));
        assert_eq!(adjoint(&adjoint(&m)), m);
        assert_eq!(m.adjoint()[(0, 1)], c(0.0, -1.0));
        let h = Mat2::real(0.5, 1.5, 1.5, 0.5);
        assert_eq!(h.adjoint(), h);
    }

    #[test]
    fn inverse_of_identity_and_random() {
        assert_eq!(inverse(&Mat2::identity()).unwrap(), Mat2::identity());
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut checked = 0;
        while checked < 100 {
            let m = random_mat(&mut rng);
            if m.det().norm() < 0.1 {
                continue;
            }
            let inv = inverse(&m).unwrap();
            assert!((m * inv).max_abs_diff(&Mat2::identity()) <= 1e-12);
            assert!((inv * m).max_abs_diff(&Mat2::identity()) <= 1e-12);
            checked += 1;
        }
    }

    #[test]
    fn singular_matrices_are_rejected() {
        let m = Mat2::real(1.0, 2.0, 2.0, 4.0);
        assert!(matches!(inverse(&m), Err(LinalgError::Singular { .. })));
        assert!(matches!(
            inverse(&Mat2::zero()),
            Err(LinalgError::Singular { .. })
        ));
        // scale-relative threshold: tiny but well-conditioned is fine
        let tiny = Mat2::real(1e-9, 0.0, 0.0, 1e-9);
        assert!(inverse(&tiny).is_ok());
    }

    #[test]
    fn constructors_reject_non_finite() {
        let bad = [[c(f64::NAN, 0.0), re(0.0)], [re(0.0), re(1.0)]];
        assert_eq!(
            Mat2::try_from_rows(bad),
            Err(LinalgError::NonFinite { index: 0 })
        );
        assert_eq!(
            Vec2::try_new(re(0.0), c(0.0, f64::INFINITY)),
            Err(LinalgError::NonFinite { index: 1 })
        );
    }

    #[test]
    fn exp_of_zero_and_diagonal() {
        assert!(mat_exp(&Mat2::zero(), re(1.0)).max_abs_diff(&Mat2::identity()) <= 1e-15);
        let d = Mat2::diag(c(0.3, -1.2), c(-2.0, 0.7));
        let e = mat_exp(&d, re(1.0));
        let expected = Mat2::diag(c(0.3, -1.2).exp(), c(-2.0, 0.7).exp());
        assert!(e.max_abs_diff(&expected) <= 1e-13);
    }

    #[test]
    fn exp_handles_large_norm() {
        // exp(-i θ σ_x) = cos θ · 1 − i sin θ · σ_x
        let theta = 37.3;
        let e = mat_exp(&Mat2::parity(), c(0.0, -theta));
        let expected = Mat2::new(
            re(theta.cos()),
            c(0.0, -theta.sin()),
            c(0.0, -theta.sin()),
            re(theta.cos()),
        );
        assert!(e.max_abs_diff(&expected) <= 1e-11);
    }

    #[test]
    fn outer_and_columns() {
        let u = Vec2::new(c(1.0, 1.0), c(0.0, 2.0));
        let v = Vec2::new(c(2.0, 0.0), c(1.0, -1.0));
        let o = Mat2::outer(&u, &v);
        assert_eq!(o[(0, 1)], u[0] * v[1].conj());
        let m = Mat2::from_columns(&u, &v);
        assert_eq!(m.column(0), u);
        assert_eq!(m.column(1), v);
        assert_eq!(m.apply(&Vec2::basis(1)), v);
    }
}
