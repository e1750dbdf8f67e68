//! Dense complex linear algebra on 2- and 4-dimensional spaces.
//!
//! Composite (4-dimensional) objects use the index convention `k = 2·i + j`,
//! where `i` indexes the first tensor factor and `j` the second. [`kron`],
//! [`kron_vec`] and [`partial_trace`] all follow it.

use core::ops::{Add, Index, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::math;

pub type Complex = num_complex::Complex64;

const ZERO: Complex = Complex::new(0.0, 0.0);
const ONE: Complex = Complex::new(1.0, 0.0);

/// Relative tolerance used by [`eig2`] to flag coincident eigenvalues.
pub const DEGENERACY_TOL: f64 = 1e-10;

/// Selects one factor of a two-party tensor product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subsystem {
    First,
    Second,
}

impl Subsystem {
    pub fn other(self) -> Self {
        match self {
            Subsystem::First => Subsystem::Second,
            Subsystem::Second => Subsystem::First,
        }
    }
}

/// Square complex matrix with `N` rows, stored row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix<const N: usize> {
    rows: [[Complex; N]; N],
}

pub type Mat2 = Matrix<2>;
pub type Mat4 = Matrix<4>;

impl<const N: usize> Matrix<N> {
    /// Builds a matrix without checking the entries.
    pub const fn from_rows(rows: [[Complex; N]; N]) -> Self {
        Self { rows }
    }

    pub fn try_from_rows(rows: [[Complex; N]; N]) -> Result<Self> {
        let m = Self { rows };
        if m.is_finite() {
            Ok(m)
        } else {
            Err(Error::NonFinite("matrix"))
        }
    }

    pub const fn zeros() -> Self {
        Self {
            rows: [[ZERO; N]; N],
        }
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m.rows[i][i] = ONE;
        }
        m
    }

    pub fn rows(&self) -> &[[Complex; N]; N] {
        &self.rows
    }

    pub fn is_finite(&self) -> bool {
        self.rows.iter().flatten().all(|z| z.is_finite())
    }

    pub fn map(&self, f: impl Fn(Complex) -> Complex) -> Self {
        let mut out = *self;
        for z in out.rows.iter_mut().flatten() {
            *z = f(*z);
        }
        out
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                out.rows[j][i] = self.rows[i][j];
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        self.transpose().conj()
    }

    pub fn trace(&self) -> Complex {
        (0..N).map(|i| self.rows[i][i]).sum()
    }

    /// Induced ∞-norm (maximum absolute row sum).
    pub fn norm_inf(&self) -> f64 {
        self.rows
            .iter()
            .map(|row| row.iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.rows
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (*self - *other).max_abs()
    }

    pub fn scale(&self, c: Complex) -> Self {
        self.map(|z| z * c)
    }

    pub fn mul_vec(&self, v: &StateVector<N>) -> StateVector<N> {
        let mut out = [ZERO; N];
        for (i, row) in self.rows.iter().enumerate() {
            out[i] = row.iter().zip(v.entries.iter()).map(|(a, b)| a * b).sum();
        }
        StateVector::new(out)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }
}

impl Mat2 {
    pub fn new(a: Complex, b: Complex, c: Complex, d: Complex) -> Self {
        Self::from_rows([[a, b], [c, d]])
    }

    pub fn from_real(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn pauli_x() -> Self {
        Self::from_real(0.0, 1.0, 1.0, 0.0)
    }

    pub fn det(&self) -> Complex {
        let [[a, b], [c, d]] = self.rows;
        a * d - b * c
    }

    /// Adjugate-based inverse; `None` when the determinant vanishes.
    pub fn inverse(&self) -> Option<Self> {
        let det = self.det();
        if det.norm() == 0.0 {
            return None;
        }
        let [[a, b], [c, d]] = self.rows;
        let inv = Self::new(d / det, -b / det, -c / det, a / det);
        inv.is_finite().then_some(inv)
    }
}

impl<const N: usize> Index<(usize, usize)> for Matrix<N> {
    type Output = Complex;

    fn index(&self, (i, j): (usize, usize)) -> &Complex {
        &self.rows[i][j]
    }
}

impl<const N: usize> Add for Matrix<N> {
    type Output = Self;

    fn add(mut self, rhs: Self) -> Self {
        for (a, b) in self
            .rows
            .iter_mut()
            .flatten()
            .zip(rhs.rows.iter().flatten())
        {
            *a += b;
        }
        self
    }
}

impl<const N: usize> Sub for Matrix<N> {
    type Output = Self;

    fn sub(mut self, rhs: Self) -> Self {
        for (a, b) in self
            .rows
            .iter_mut()
            .flatten()
            .zip(rhs.rows.iter().flatten())
        {
            *a -= b;
        }
        self
    }
}

impl<const N: usize> Neg for Matrix<N> {
    type Output = Self;

    fn neg(self) -> Self {
        self.map(|z| -z)
    }
}

impl<const N: usize> Mul for Matrix<N> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                out.rows[i][j] = (0..N).map(|k| self.rows[i][k] * rhs.rows[k][j]).sum();
            }
        }
        out
    }
}

impl<const N: usize> Mul<Complex> for Matrix<N> {
    type Output = Self;

    fn mul(self, rhs: Complex) -> Self {
        self.scale(rhs)
    }
}

impl<const N: usize> Mul<f64> for Matrix<N> {
    type Output = Self;

    fn mul(self, rhs: f64) -> Self {
        self.map(|z| z * rhs)
    }
}

impl<const N: usize> Mul<StateVector<N>> for Matrix<N> {
    type Output = StateVector<N>;

    fn mul(self, rhs: StateVector<N>) -> StateVector<N> {
        self.mul_vec(&rhs)
    }
}

/// Column vector (ket) of dimension `N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVector<const N: usize> {
    entries: [Complex; N],
}

impl<const N: usize> StateVector<N> {
    /// Builds a vector without checking the entries.
    pub const fn new(entries: [Complex; N]) -> Self {
        Self { entries }
    }

    /// Rejects non-finite entries and the zero vector.
    pub fn try_new(entries: [Complex; N]) -> Result<Self> {
        if !entries.iter().all(|z| z.is_finite()) {
            return Err(Error::NonFinite("state vector"));
        }
        if entries.iter().all(|z| z.norm_sqr() == 0.0) {
            return Err(Error::ZeroState);
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[Complex; N] {
        &self.entries
    }

    pub fn conj(&self) -> Self {
        Self::new(self.entries.map(|z| z.conj()))
    }

    pub fn scale(&self, c: Complex) -> Self {
        Self::new(self.entries.map(|z| z * c))
    }

    /// Squared Dirac norm.
    pub fn norm_sqr(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (*self - *other).max_abs()
    }

    /// Dirac bra (conjugate transpose).
    pub fn dagger(&self) -> Bra<N> {
        Bra::new(self.entries.map(|z| z.conj()))
    }

    /// Outer product `|self⟩⟨bra|`.
    pub fn outer(&self, bra: &Bra<N>) -> Matrix<N> {
        let mut rows = [[ZERO; N]; N];
        for (i, row) in rows.iter_mut().enumerate() {
            for (j, z) in row.iter_mut().enumerate() {
                *z = self.entries[i] * bra.entries[j];
            }
        }
        Matrix::from_rows(rows)
    }
}

impl<const N: usize> Index<usize> for StateVector<N> {
    type Output = Complex;

    fn index(&self, i: usize) -> &Complex {
        &self.entries[i]
    }
}

impl<const N: usize> Add for StateVector<N> {
    type Output = Self;

    fn add(mut self, rhs: Self) -> Self {
        for (a, b) in self.entries.iter_mut().zip(rhs.entries.iter()) {
            *a += b;
        }
        self
    }
}

impl<const N: usize> Sub for StateVector<N> {
    type Output = Self;

    fn sub(mut self, rhs: Self) -> Self {
        for (a, b) in self.entries.iter_mut().zip(rhs.entries.iter()) {
            *a -= b;
        }
        self
    }
}

/// Row covector produced by an inner-product convention.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bra<const N: usize> {
    entries: [Complex; N],
}

impl<const N: usize> Bra<N> {
    pub const fn new(entries: [Complex; N]) -> Self {
        Self { entries }
    }

    pub fn entries(&self) -> &[Complex; N] {
        &self.entries
    }

    /// Contracts the bra with a ket: `⟨self|ket⟩`.
    pub fn apply(&self, ket: &StateVector<N>) -> Complex {
        self.entries
            .iter()
            .zip(ket.entries.iter())
            .map(|(a, b)| a * b)
            .sum()
    }

    /// Row vector times matrix.
    pub fn mul_mat(&self, m: &Matrix<N>) -> Self {
        let mut out = [ZERO; N];
        for (j, z) in out.iter_mut().enumerate() {
            *z = (0..N).map(|k| self.entries[k] * m.rows()[k][j]).sum();
        }
        Self::new(out)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries
            .iter()
            .zip(other.entries.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Spectrum and eigenvectors of a 2×2 complex matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenDecomposition2 {
    /// Ordered by descending real part, then descending imaginary part.
    pub eigenvalues: [Complex; 2],
    /// Unit Dirac norm. Repeated when the matrix is defective.
    pub eigenvectors: [StateVector<2>; 2],
    pub degenerate: bool,
}

/// Closed-form eigendecomposition of a 2×2 matrix.
///
/// The roots of `λ² − tr·λ + det` are taken from the discriminant
/// `(m₀₀ − m₁₁)² + 4·m₀₁·m₁₀`; the larger-magnitude root is formed first and
/// the other one is recovered as `det / λ` to avoid cancellation close to an
/// exceptional point.
pub fn eig2(m: &Mat2) -> EigenDecomposition2 {
    let [[a, b], [c, d]] = *m.rows();
    let tr = a + d;
    let det = m.det();
    let mut s = ((a - d) * (a - d) + b * c * 4.0).sqrt();
    if (tr.conj() * s).re < 0.0 {
        s = -s;
    }
    let big = (tr + s) * 0.5;
    let small = if big.norm() == 0.0 { ZERO } else { det / big };

    let tol = DEGENERACY_TOL * m.norm_inf().max(1.0);
    let (mut l0, mut l1) = (big, small);
    let swap = if math::abs(l0.re - l1.re) <= tol {
        l1.im > l0.im
    } else {
        l1.re > l0.re
    };
    if swap {
        core::mem::swap(&mut l0, &mut l1);
    }

    if (l0 - l1).norm() <= tol {
        let mean = (l0 + l1) * 0.5;
        let eigenvectors = match null_vector(m, mean, tol) {
            Some(v) => [v, v],
            None => [StateVector::new([ONE, ZERO]), StateVector::new([ZERO, ONE])],
        };
        return EigenDecomposition2 {
            eigenvalues: [mean, mean],
            eigenvectors,
            degenerate: true,
        };
    }

    let unit = |l: Complex| null_vector(m, l, 0.0).unwrap_or(StateVector::new([ONE, ZERO]));
    EigenDecomposition2 {
        eigenvalues: [l0, l1],
        eigenvectors: [unit(l0), unit(l1)],
        degenerate: false,
    }
}

// Unit vector annihilated by the rank-one matrix `m − λI`, read off from the
// better-conditioned of its two rows. `None` when both rows vanish.
fn null_vector(m: &Mat2, lambda: Complex, tol: f64) -> Option<StateVector<2>> {
    let [[a, b], [c, d]] = *m.rows();
    let from_first = [b, lambda - a];
    let from_second = [lambda - d, c];
    let n1 = from_first[0].norm_sqr() + from_first[1].norm_sqr();
    let n2 = from_second[0].norm_sqr() + from_second[1].norm_sqr();
    let (v, n) = if n1 >= n2 {
        (from_first, n1)
    } else {
        (from_second, n2)
    };
    let n = math::sqrt(n);
    if n <= tol || n == 0.0 {
        return None;
    }
    Some(StateVector::new([v[0] / n, v[1] / n]))
}

/// `exp(scale · m)` for a 2×2 matrix.
///
/// Diagonalizable matrices use the spectral form
/// `e^{sμ}·[cosh(sΔ)·I + sinh(sΔ)/Δ·(m − μI)]` with `μ = tr/2` and
/// `Δ = (λ₁ − λ₂)/2`, which equals `Σ e^{sλᵢ}Pᵢ` over the spectral
/// projectors. Degenerate matrices fall back to a scaled and squared Taylor
/// series.
pub fn mat_exp_spectral(m: &Mat2, scale: Complex) -> Mat2 {
    let eig = eig2(m);
    if eig.degenerate {
        return exp_taylor(&m.scale(scale));
    }
    let mu = m.trace() * 0.5;
    let half_gap = (eig.eigenvalues[0] - eig.eigenvalues[1]) * 0.5;
    let z = scale * half_gap;
    let shifted = *m - Mat2::identity().scale(mu);
    let body = Mat2::identity().scale(z.cosh()) + shifted.scale(scale * sinhc(z));
    body.scale((scale * mu).exp())
}

// sinh(z)/z, with the removable singularity at 0 filled in.
fn sinhc(z: Complex) -> Complex {
    if z.norm() < 1e-3 {
        let z2 = z * z;
        ONE + z2 / 6.0 * (ONE + z2 / 20.0 * (ONE + z2 / 42.0 * (ONE + z2 / 72.0)))
    } else {
        z.sinh() / z
    }
}

const TAYLOR_ORDER: usize = 18;

fn exp_taylor(a: &Mat2) -> Mat2 {
    let mut squarings = 0u32;
    let mut norm = a.norm_inf();
    while norm > 0.5 {
        norm *= 0.5;
        squarings += 1;
    }
    let b = *a * libm::ldexp(1.0, -(squarings as i32));
    let mut term = Mat2::identity();
    let mut sum = Mat2::identity();
    for k in 1..=TAYLOR_ORDER {
        term = (term * b) * (1.0 / k as f64);
        sum = sum + term;
    }
    for _ in 0..squarings {
        sum = sum * sum;
    }
    sum
}

/// Kronecker product of two 2×2 matrices.
pub fn kron(a: &Mat2, b: &Mat2) -> Mat4 {
    let mut rows = [[ZERO; 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    rows[2 * i + j][2 * k + l] = a[(i, k)] * b[(j, l)];
                }
            }
        }
    }
    Mat4::from_rows(rows)
}

pub fn kron_vec(a: &StateVector<2>, b: &StateVector<2>) -> StateVector<4> {
    let mut out = [ZERO; 4];
    for i in 0..2 {
        for j in 0..2 {
            out[2 * i + j] = a[i] * b[j];
        }
    }
    StateVector::new(out)
}

pub fn kron_bra(a: &Bra<2>, b: &Bra<2>) -> Bra<4> {
    let mut out = [ZERO; 4];
    for i in 0..2 {
        for j in 0..2 {
            out[2 * i + j] = a.entries()[i] * b.entries()[j];
        }
    }
    Bra::new(out)
}

/// Traces out `traced` from a two-party operator.
pub fn partial_trace(rho: &Mat4, traced: Subsystem) -> Mat2 {
    let mut rows = [[ZERO; 2]; 2];
    for (x, row) in rows.iter_mut().enumerate() {
        for (y, z) in row.iter_mut().enumerate() {
            *z = (0..2)
                .map(|k| match traced {
                    Subsystem::Second => rho[(2 * x + k, 2 * y + k)],
                    Subsystem::First => rho[(2 * k + x, 2 * k + y)],
                })
                .sum();
        }
    }
    Mat2::from_rows(rows)
}
