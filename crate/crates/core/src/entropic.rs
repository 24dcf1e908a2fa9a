//! Binary Shannon entropy of outcome products and the entropic
//! noncontextuality inequality
//!
//! ```text
//! H(α·β·γ) <= H(A·a·α) + H(B·b·β) + H(A·B·C) + H(a·b·c) + H(C·c·γ)
//! ```

use serde::Serialize;

use crate::error::{Error, Result};
use crate::pmsquare::ProductDistribution;
use crate::scalar::Real;

/// Probabilities below this contribute exactly zero (`0 log 0 = 0`).
pub const ZERO_CLAMP: f64 = 1e-300;

fn plogp<T: Real>(p: T) -> T {
    if p.to_f64_lossy() < ZERO_CLAMP {
        T::zero()
    } else {
        -p * p.log2()
    }
}

/// Entropy in bits of a two-outcome distribution.
pub fn h_binary<T: Real>(dist: &ProductDistribution<T>) -> Result<T> {
    let total = dist.p_plus + dist.p_minus;
    if !(total - T::one()).is_negligible(1e-8) {
        return Err(Error::ContractViolation(format!(
            "distribution sums to {}",
            total.to_f64_lossy()
        )));
    }
    Ok(plogp(dist.p_plus) + plogp(dist.p_minus))
}

/// The six entropy terms, ordered `H(A·a·α), H(B·b·β), H(C·c·γ), H(A·B·C),
/// H(a·b·c), H(α·β·γ)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EntropySextet<T = f64> {
    pub terms: [T; 6],
}

impl<T: Real> EntropySextet<T> {
    pub fn new(terms: [T; 6]) -> Result<Self> {
        for &h in &terms {
            let f = h.to_f64_lossy();
            if !(-1e-12..=1.0 + 1e-12).contains(&f) {
                return Err(Error::InvalidInput(format!("entropy term {f} outside [0, 1]")));
            }
        }
        Ok(Self { terms })
    }

    /// Bounded side, `H(α·β·γ)`.
    pub fn lhs(&self) -> T {
        self.terms[5]
    }

    /// Sum of the five remaining terms.
    pub fn rhs(&self) -> T {
        self.terms[..5].iter().fold(T::zero(), |a, &b| a + b)
    }
}

/// Column labels of the sextet.
pub const TERM_LABELS: [&str; 6] = ["H(A.a.alpha)", "H(B.b.beta)", "H(C.c.gamma)", "H(A.B.C)", "H(a.b.c)", "H(alpha.beta.gamma)"];

/// Entropies of the six product distributions given in canonical context
/// order. The canonical order coincides with the report column order, so
/// no permutation is applied.
pub fn inequality_terms<T: Real>(products: &[ProductDistribution<T>]) -> Result<EntropySextet<T>> {
    if products.len() != 6 {
        return Err(Error::InvalidInput(format!("expected 6 product distributions, got {}", products.len())));
    }
    let mut terms = [T::zero(); 6];
    for (t, d) in terms.iter_mut().zip(products) {
        *t = h_binary(d)?;
    }
    EntropySextet::new(terms)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InequalityVerdict<T = f64> {
    pub lhs: T,
    pub rhs: T,
    /// `lhs - rhs`; positive means the inequality is violated.
    pub margin: T,
    pub violated: bool,
}

pub fn evaluate<T: Real>(sextet: &EntropySextet<T>) -> InequalityVerdict<T> {
    let lhs = sextet.lhs();
    let rhs = sextet.rhs();
    let margin = lhs - rhs;
    InequalityVerdict { lhs, rhs, margin, violated: margin > T::zero() }
}
