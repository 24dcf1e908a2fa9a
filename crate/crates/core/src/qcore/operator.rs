use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex;
use num_traits::{One, Zero};

use crate::scalar::Scalar;

/// Dense `N x N` complex matrix over a generic scalar.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Operator<T, const N: usize> {
    entries: [[Complex<T>; N]; N],
}

pub type Operator2<T = f64> = Operator<T, 2>;
pub type Operator4<T = f64> = Operator<T, 4>;

impl<T: Scalar, const N: usize> Operator<T, N> {
    pub fn from_rows(entries: [[Complex<T>; N]; N]) -> Self {
        Self { entries }
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut entries = [[Complex::zero(); N]; N];
        for (i, row) in entries.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = f(i, j);
            }
        }
        Self { entries }
    }

    pub fn zero() -> Self {
        Self::from_fn(|_, _| Complex::zero())
    }

    pub fn identity() -> Self {
        Self::from_fn(|i, j| if i == j { Complex::one() } else { Complex::zero() })
    }

    pub fn diagonal(diag: [T; N]) -> Self {
        Self::from_fn(|i, j| {
            if i == j {
                Complex::new(diag[i], T::zero())
            } else {
                Complex::zero()
            }
        })
    }

    pub fn get(&self, row: usize, col: usize) -> Complex<T> {
        self.entries[row][col]
    }

    pub fn rows(&self) -> &[[Complex<T>; N]; N] {
        &self.entries
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(|i, j| self.entries[j][i].conj())
    }

    pub fn trace(&self) -> Complex<T> {
        (0..N).fold(Complex::zero(), |acc, i| acc + self.entries[i][i])
    }

    pub fn scale(&self, factor: Complex<T>) -> Self {
        Self::from_fn(|i, j| self.entries[i][j] * factor)
    }

    pub fn scale_real(&self, factor: T) -> Self {
        Self::from_fn(|i, j| self.entries[i][j].scale(factor))
    }

    pub fn apply(&self, v: &[Complex<T>; N]) -> [Complex<T>; N] {
        let mut out = [Complex::zero(); N];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..N).fold(Complex::zero(), |acc, j| acc + self.entries[i][j] * v[j]);
        }
        out
    }

    /// `self * other - other * self`.
    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }

    /// Largest absolute deviation of any real or imaginary part.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..N {
            for j in 0..N {
                let d = self.entries[i][j] - other.entries[i][j];
                worst = worst.max(d.re.abs().to_f64_lossy()).max(d.im.abs().to_f64_lossy());
            }
        }
        worst
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.approx_eq(&self.adjoint(), tol)
    }

    /// Returns `c` when `self = c * I` within `tol`.
    pub fn identity_multiple(&self, tol: f64) -> Option<Complex<T>> {
        let c = self.entries[0][0];
        self.approx_eq(&Self::identity().scale(c), tol).then_some(c)
    }

    pub fn to_f64(&self) -> Operator<f64, N> {
        Operator::from_fn(|i, j| {
            let e = self.entries[i][j];
            Complex::new(e.re.to_f64_lossy(), e.im.to_f64_lossy())
        })
    }

    pub fn to_dmatrix(&self) -> DMatrix<Complex<f64>> {
        let m = self.to_f64();
        DMatrix::from_fn(N, N, |i, j| m.entries[i][j])
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self.to_dmatrix().symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Spectral norm (largest singular value).
    pub fn operator_norm(&self) -> f64 {
        let m = self.to_dmatrix();
        let gram = m.adjoint() * &m;
        gram.symmetric_eigenvalues().iter().fold(0.0_f64, |a, &b| a.max(b)).max(0.0).sqrt()
    }
}

impl<T: Scalar> Operator<T, 2> {
    /// Kronecker product `self ⊗ right`; `self` is the more significant
    /// (spatial) factor of the four-level basis.
    pub fn kron(&self, right: &Operator<T, 2>) -> Operator<T, 4> {
        Operator::from_fn(|r, c| self.entries[r / 2][c / 2] * right.entries[r % 2][c % 2])
    }
}

impl<T: Scalar, const N: usize> Add for Operator<T, N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.entries[i][j] + rhs.entries[i][j])
    }
}

impl<T: Scalar, const N: usize> Sub for Operator<T, N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.entries[i][j] - rhs.entries[i][j])
    }
}

impl<T: Scalar, const N: usize> Neg for Operator<T, N> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::from_fn(|i, j| -self.entries[i][j])
    }
}

impl<T: Scalar, const N: usize> Mul for Operator<T, N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| {
            (0..N).fold(Complex::zero(), |acc, k| acc + self.entries[i][k] * rhs.entries[k][j])
        })
    }
}
