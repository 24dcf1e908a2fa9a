use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::operator::{Operator, Operator2, Operator4};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Single-qubit Pauli label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn matrix<T: Scalar>(self) -> Operator2<T> {
        let o = Complex::<T>::zero();
        let l = Complex::<T>::one();
        let i = Complex::<T>::i();
        match self {
            Pauli::I => Operator::from_rows([[l, o], [o, l]]),
            Pauli::X => Operator::from_rows([[o, l], [l, o]]),
            Pauli::Y => Operator::from_rows([[o, -i], [i, o]]),
            Pauli::Z => Operator::from_rows([[l, o], [o, -l]]),
        }
    }
}

impl FromStr for Pauli {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "I" | "i" => Ok(Pauli::I),
            "X" | "x" => Ok(Pauli::X),
            "Y" | "y" => Ok(Pauli::Y),
            "Z" | "z" => Ok(Pauli::Z),
            other => Err(Error::UnknownLabel(other.to_string())),
        }
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Pauli::I => "I",
            Pauli::X => "X",
            Pauli::Y => "Y",
            Pauli::Z => "Z",
        };
        f.write_str(s)
    }
}

/// Pauli matrix for a textual label (`I`, `X`, `Y`, `Z`).
pub fn pauli<T: Scalar>(label: &str) -> Result<Operator2<T>> {
    Ok(label.parse::<Pauli>()?.matrix())
}

/// `left ⊗ right` with `left` acting on the spatial qubit.
pub fn tensor<T: Scalar>(left: &Operator2<T>, right: &Operator2<T>) -> Operator4<T> {
    left.kron(right)
}

/// Outcome of a two-valued measurement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+1")]
    Plus,
    #[serde(rename = "-1")]
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn value(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_value(v: i32) -> Result<Self> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(Error::InvalidInput(format!("outcome must be +1 or -1, got {other}"))),
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn is_minus(self) -> bool {
        self == Sign::Minus
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

/// Eigenprojector `(I ± O) / 2` of a ±1-valued observable.
pub fn projector_pm<T: Scalar, const N: usize>(
    obs: &Operator<T, N>,
    sign: Sign,
) -> Result<Operator<T, N>> {
    if !obs.is_hermitian(1e-10) {
        return Err(Error::ContractViolation("observable is not Hermitian".into()));
    }
    let id = Operator::<T, N>::identity();
    if !(*obs * *obs).approx_eq(&id, 1e-10) {
        return Err(Error::ContractViolation("observable does not square to identity".into()));
    }
    let half = T::ratio(1, 2);
    let signed = match sign {
        Sign::Plus => *obs,
        Sign::Minus => -*obs,
    };
    Ok((id + signed).scale_real(half))
}
