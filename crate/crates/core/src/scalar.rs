//! Scalar abstraction shared by the linear algebra and probability code.
//!
//! Everything that only needs ring arithmetic (Pauli algebra, Kronecker
//! products, projector products, Born probabilities of rational states) is
//! generic over [`Scalar`], so identities can be checked exactly over
//! [`Rational`]. Anything involving square roots or logarithms asks for
//! [`Real`] instead (`f32` or `f64`).

use std::fmt::Debug;

use num_rational::Ratio;
use num_traits::{Float, Num, Signed, ToPrimitive};

/// Exact rational scalar used for exact identity checks.
pub type Rational = Ratio<i64>;

/// A real number type the algebra can be carried out over.
pub trait Scalar:
    Num + Signed + Copy + PartialOrd + ToPrimitive + Debug + Send + Sync + 'static
{
    fn from_i64(n: i64) -> Self;

    /// `num / den`, exact for rationals and correctly rounded for floats.
    fn ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// `|self| <= tol`; for exact scalars any nonzero value with magnitude
    /// above `tol` fails, so a `tol` of zero demands exact zero.
    fn is_negligible(self, tol: f64) -> bool {
        self.abs().to_f64_lossy() <= tol
    }
}

impl Scalar for f32 {
    fn from_i64(n: i64) -> Self {
        n as f32
    }
}

impl Scalar for f64 {
    fn from_i64(n: i64) -> Self {
        n as f64
    }
}

impl Scalar for Rational {
    fn from_i64(n: i64) -> Self {
        Ratio::from_integer(n)
    }
}

/// Floating-point scalar: f32 or f64.
pub trait Real: Scalar + Float {
    fn from_f64(x: f64) -> Self;
}

impl Real for f32 {
    fn from_f64(x: f64) -> Self {
        x as f32
    }
}

impl Real for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
}
