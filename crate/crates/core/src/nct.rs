//! Noncontextual realistic model: every observable carries a predetermined
//! ±1 value. Values of `A, a, B, b` are free; the remaining five are fixed
//! by `α = A·a, β = B·b, C = A·B, c = a·b, γ = A·B·a·b`, which makes every
//! context product equal to +1.

use std::fmt;

use crate::error::{Error, Result};
use crate::pmsquare::{
    check_probabilities, contexts, observable, BinaryDistribution, ObservableId, ProductDistribution,
};
use crate::qcore::{projector_pm, DensityMatrix, Sign};
use crate::scalar::Scalar;

/// Value assignment for all nine observables.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Assignment {
    values: [Sign; 9],
}

impl Assignment {
    pub fn value(&self, id: ObservableId) -> Sign {
        self.values[ObservableId::ALL.iter().position(|&x| x == id).expect("all ids listed")]
    }

    /// Outcome products of the six contexts in canonical order.
    pub fn products(&self) -> [Sign; 6] {
        contexts().map(|c| {
            let [x, y, z] = c.members();
            self.value(x) * self.value(y) * self.value(z)
        })
    }
}

/// Fills in `α, β, C, c, γ` from the base values of `A, a, B, b`.
pub fn derive_assignment(big_a: Sign, small_a: Sign, big_b: Sign, small_b: Sign) -> Assignment {
    use ObservableId::*;
    let mut values = [Sign::Plus; 9];
    let mut set = |id: ObservableId, v: Sign| {
        values[ObservableId::ALL.iter().position(|&x| x == id).expect("all ids listed")] = v;
    };
    set(A, big_a);
    set(LowerA, small_a);
    set(B, big_b);
    set(LowerB, small_b);
    set(Alpha, big_a * small_a);
    set(Beta, big_b * small_b);
    set(C, big_a * big_b);
    set(LowerC, small_a * small_b);
    set(Gamma, big_a * big_b * small_a * small_b);
    Assignment { values }
}

/// All 16 assignments, base values enumerated in the order `(A, a, B, b)`
/// with `+1` first.
pub fn all_assignments() -> impl Iterator<Item = ([Sign; 4], Assignment)> {
    (0..16usize).map(|k| {
        let bit = |b: usize| if k >> b & 1 == 1 { Sign::Minus } else { Sign::Plus };
        let base = [bit(3), bit(2), bit(1), bit(0)];
        (base, derive_assignment(base[0], base[1], base[2], base[3]))
    })
}

/// The four compatible pairs measured for the classical model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClassicalPair {
    /// `{A, a}`
    Aa,
    /// `{B, b}`
    Bb,
    /// `{A, B}`
    AB,
    /// `{a, b}`
    Ab,
}

impl ClassicalPair {
    pub const ALL: [ClassicalPair; 4] = [ClassicalPair::Aa, ClassicalPair::Bb, ClassicalPair::AB, ClassicalPair::Ab];

    pub fn members(self) -> [ObservableId; 2] {
        use ObservableId::*;
        match self {
            ClassicalPair::Aa => [A, LowerA],
            ClassicalPair::Bb => [B, LowerB],
            ClassicalPair::AB => [A, B],
            ClassicalPair::Ab => [LowerA, LowerB],
        }
    }

    /// Pair lookup; anything but the four listed pairs is rejected.
    pub fn from_ids(first: ObservableId, second: ObservableId) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.members() == [first, second])
            .ok_or_else(|| Error::InvalidInput(format!("{{{first},{second}}} is not a classical pair measurement")))
    }
}

impl fmt::Display for ClassicalPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [x, y] = self.members();
        write!(f, "{{{x},{y}}}")
    }
}

/// Distribution over `(s1, s2)`, index `2*[s1 = -1] + [s2 = -1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairDistribution<T = f64> {
    probs: [T; 4],
}

impl<T: Scalar> PairDistribution<T> {
    pub fn new(probs: [T; 4]) -> Result<Self> {
        check_probabilities(&probs)?;
        Ok(Self { probs })
    }

    pub fn probabilities(&self) -> &[T; 4] {
        &self.probs
    }

    pub fn probability(&self, first: Sign, second: Sign) -> T {
        self.probs[pair_index(first, second)]
    }

    pub fn first_marginal(&self) -> BinaryDistribution<T> {
        BinaryDistribution { p_plus: self.probs[0] + self.probs[1], p_minus: self.probs[2] + self.probs[3] }
    }

    pub fn second_marginal(&self) -> BinaryDistribution<T> {
        BinaryDistribution { p_plus: self.probs[0] + self.probs[2], p_minus: self.probs[1] + self.probs[3] }
    }
}

pub fn pair_index(first: Sign, second: Sign) -> usize {
    2 * usize::from(first.is_minus()) + usize::from(second.is_minus())
}

/// Joint Born probabilities of a classical pair measurement.
pub fn pair_distribution<T: Scalar>(rho: &DensityMatrix<T>, pair: ClassicalPair) -> PairDistribution<T> {
    let [x, y] = pair.members().map(observable::<T>);
    let mut probs = [T::zero(); 4];
    for s1 in Sign::BOTH {
        for s2 in Sign::BOTH {
            let effect = projector_pm(&x, s1).expect("square observable") * projector_pm(&y, s2).expect("square observable");
            probs[pair_index(s1, s2)] = (*rho.matrix() * effect).trace().re;
        }
    }
    PairDistribution::new(probs).expect("valid state gives normalized pair statistics")
}

/// Product distributions `q'_1..q'_6` of the classical model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassicalDistributionSet<T = f64> {
    pub products: [ProductDistribution<T>; 6],
}

/// Classical products with base distribution
/// `P(A,a,B,b) = P_{Aa}(A,a) * P_{Bb}(B,b)` built from the two measured pairs.
pub fn classical_products_from_pairs<T: Scalar>(
    aa: &PairDistribution<T>,
    bb: &PairDistribution<T>,
) -> ClassicalDistributionSet<T> {
    let mut products = [BinaryDistribution { p_plus: T::zero(), p_minus: T::zero() }; 6];
    for (base, assignment) in all_assignments() {
        let w = aa.probability(base[0], base[1]) * bb.probability(base[2], base[3]);
        for (acc, sign) in products.iter_mut().zip(assignment.products()) {
            match sign {
                Sign::Plus => acc.p_plus = acc.p_plus + w,
                Sign::Minus => acc.p_minus = acc.p_minus + w,
            }
        }
    }
    ClassicalDistributionSet { products }
}

pub fn classical_products<T: Scalar>(rho: &DensityMatrix<T>) -> ClassicalDistributionSet<T> {
    classical_products_from_pairs(&pair_distribution(rho, ClassicalPair::Aa), &pair_distribution(rho, ClassicalPair::Bb))
}

/// Equal-weight mixture `(q + q') / 2`.
pub fn mix<T: Scalar>(q: &ProductDistribution<T>, q_prime: &ProductDistribution<T>) -> ProductDistribution<T> {
    let half = T::ratio(1, 2);
    BinaryDistribution {
        p_plus: (q.p_plus + q_prime.p_plus) * half,
        p_minus: (q.p_minus + q_prime.p_minus) * half,
    }
}

/// Element-wise [`mix`] of six product distributions.
pub fn mix_all<T: Scalar>(
    quantum: &[ProductDistribution<T>; 6],
    classical: &ClassicalDistributionSet<T>,
) -> [ProductDistribution<T>; 6] {
    std::array::from_fn(|i| mix(&quantum[i], &classical.products[i]))
}
