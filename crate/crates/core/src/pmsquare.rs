//! The Peres–Mermin square: nine two-qubit observables arranged in six
//! contexts of mutually commuting triples.
//!
//! ```text
//!   A = X⊗I   a = I⊗X   α = X⊗X
//!   B = I⊗Y   b = Y⊗I   β = Y⊗Y
//!   C = X⊗Y   c = Y⊗X   γ = Z⊗Z
//! ```
//!
//! Rows and columns are the contexts. The product of the three operators
//! in every context is `+I`, except for `{α, β, γ}` where it is `-I`.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{projector_pm, tensor, DensityMatrix, Operator4, Pauli, Sign};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ObservableId {
    A,
    LowerA,
    Alpha,
    B,
    LowerB,
    Beta,
    C,
    LowerC,
    Gamma,
}

impl ObservableId {
    pub const ALL: [ObservableId; 9] = [
        ObservableId::A,
        ObservableId::LowerA,
        ObservableId::Alpha,
        ObservableId::B,
        ObservableId::LowerB,
        ObservableId::Beta,
        ObservableId::C,
        ObservableId::LowerC,
        ObservableId::Gamma,
    ];

    /// (spatial, polarization) Pauli factors.
    pub fn factors(self) -> (Pauli, Pauli) {
        use ObservableId::*;
        match self {
            A => (Pauli::X, Pauli::I),
            LowerA => (Pauli::I, Pauli::X),
            Alpha => (Pauli::X, Pauli::X),
            B => (Pauli::I, Pauli::Y),
            LowerB => (Pauli::Y, Pauli::I),
            Beta => (Pauli::Y, Pauli::Y),
            C => (Pauli::X, Pauli::Y),
            LowerC => (Pauli::Y, Pauli::X),
            Gamma => (Pauli::Z, Pauli::Z),
        }
    }

    pub fn name(self) -> &'static str {
        use ObservableId::*;
        match self {
            A => "A",
            LowerA => "a",
            Alpha => "alpha",
            B => "B",
            LowerB => "b",
            Beta => "beta",
            C => "C",
            LowerC => "c",
            Gamma => "gamma",
        }
    }
}

impl fmt::Display for ObservableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ObservableId {
    type Err = Error;

    /// Latin names are case-sensitive (`A` and `a` differ); Greek names
    /// accept any case and the Unicode letters.
    fn from_str(s: &str) -> Result<Self> {
        use ObservableId::*;
        let s = s.trim();
        Ok(match s {
            "A" => A,
            "a" => LowerA,
            "B" => B,
            "b" => LowerB,
            "C" => C,
            "c" => LowerC,
            "α" => Alpha,
            "β" => Beta,
            "γ" => Gamma,
            _ => match s.to_ascii_lowercase().as_str() {
                "alpha" => Alpha,
                "beta" => Beta,
                "gamma" => Gamma,
                _ => return Err(Error::UnknownLabel(s.to_string())),
            },
        })
    }
}

impl Serialize for ObservableId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for ObservableId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The operator of a square observable.
pub fn observable<T: Scalar>(id: ObservableId) -> Operator4<T> {
    let (spatial, polarization) = id.factors();
    tensor(&spatial.matrix(), &polarization.matrix())
}

/// An ordered triple of compatible observables forming one of the six
/// contexts. Members may come in any order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Context {
    members: [ObservableId; 3],
}

const CANONICAL: [[ObservableId; 3]; 6] = {
    use ObservableId::*;
    [
        [A, LowerA, Alpha],
        [B, LowerB, Beta],
        [C, LowerC, Gamma],
        [A, B, C],
        [LowerA, LowerB, LowerC],
        [Alpha, Beta, Gamma],
    ]
};

impl Context {
    pub fn new(members: [ObservableId; 3]) -> Result<Self> {
        let mut sorted = members;
        sorted.sort();
        let known = CANONICAL.iter().any(|c| {
            let mut s = *c;
            s.sort();
            s == sorted
        });
        if known {
            Ok(Self { members })
        } else {
            Err(Error::InvalidInput(format!(
                "{{{}, {}, {}}} is not a context of the square",
                members[0], members[1], members[2]
            )))
        }
    }

    pub fn canonical(index: usize) -> Option<Self> {
        CANONICAL.get(index).map(|&members| Self { members })
    }

    pub fn members(&self) -> [ObservableId; 3] {
        self.members
    }

    /// Position of this context (as a set) in the canonical list.
    pub fn canonical_index(&self) -> usize {
        let mut me = self.members;
        me.sort();
        CANONICAL
            .iter()
            .position(|c| {
                let mut s = *c;
                s.sort();
                s == me
            })
            .expect("validated at construction")
    }

    pub fn contains(&self, id: ObservableId) -> bool {
        self.members.contains(&id)
    }

    /// Same context with its members reordered by `order` (a permutation of 0..3).
    pub fn permuted(&self, order: [usize; 3]) -> Self {
        Self { members: order.map(|i| self.members[i]) }
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [x, y, z] = self.members;
        write!(f, "{{{x},{y},{z}}}")
    }
}

/// The six contexts in canonical order
/// `{A,a,α} {B,b,β} {C,c,γ} {A,B,C} {a,b,c} {α,β,γ}`.
pub fn contexts() -> [Context; 6] {
    CANONICAL.map(|members| Context { members })
}

/// Whether all pairs of the given (distinct) observables commute.
pub fn check_compatibility(ids: &[ObservableId]) -> Result<bool> {
    if !(2..=3).contains(&ids.len()) {
        return Err(Error::InvalidInput(format!("expected 2 or 3 observables, got {}", ids.len())));
    }
    for (i, x) in ids.iter().enumerate() {
        if ids[i + 1..].contains(x) {
            return Err(Error::InvalidInput(format!("duplicate observable {x}")));
        }
    }
    for (i, &x) in ids.iter().enumerate() {
        for &y in &ids[i + 1..] {
            let ox = observable::<f64>(x);
            let oy = observable::<f64>(y);
            if !ox.commutator(&oy).approx_eq(&Operator4::zero(), 1e-12) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The sign `s` with `O1 O2 O3 = s I`.
pub fn context_product_sign<T: Scalar>(ctx: &Context) -> Result<Sign> {
    let [x, y, z] = ctx.members.map(observable::<T>);
    let product = x * y * z;
    let c = product
        .identity_multiple(1e-12)
        .ok_or_else(|| Error::Consistency(format!("product over {ctx} is not proportional to I")))?;
    let one = T::one();
    if !c.im.is_negligible(1e-12) {
        return Err(Error::Consistency(format!("product over {ctx} has complex phase")));
    }
    if (c.re - one).is_negligible(1e-12) {
        Ok(Sign::Plus)
    } else if (c.re + one).is_negligible(1e-12) {
        Ok(Sign::Minus)
    } else {
        Err(Error::Consistency(format!("product over {ctx} is {:?} I", c)))
    }
}

/// Index of an outcome triple: `-1` is bit 1, the first position is the
/// most significant bit, so `(+,+,+)` is 0 and `(-,-,-)` is 7.
pub fn outcome_index(triple: [Sign; 3]) -> usize {
    triple.iter().fold(0, |acc, s| (acc << 1) | usize::from(s.is_minus()))
}

pub fn outcome_triple(index: usize) -> [Sign; 3] {
    let bit = |b: usize| if index >> b & 1 == 1 { Sign::Minus } else { Sign::Plus };
    [bit(2), bit(1), bit(0)]
}

/// Product `s1 s2 s3` of an outcome triple.
pub fn triple_product(triple: [Sign; 3]) -> Sign {
    triple[0] * triple[1] * triple[2]
}

const PROB_TOL: f64 = 1e-10;

/// Probabilities over the eight sign triples of a context, indexed by
/// [`outcome_index`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JointDistribution8<T = f64> {
    probs: [T; 8],
}

impl<T: Scalar> JointDistribution8<T> {
    pub fn new(probs: [T; 8]) -> Result<Self> {
        check_probabilities(&probs)?;
        Ok(Self { probs })
    }

    pub fn probabilities(&self) -> &[T; 8] {
        &self.probs
    }

    pub fn probability(&self, triple: [Sign; 3]) -> T {
        self.probs[outcome_index(triple)]
    }

    pub fn to_f64(&self) -> JointDistribution8<f64> {
        JointDistribution8 { probs: self.probs.map(Scalar::to_f64_lossy) }
    }
}

pub(crate) fn check_probabilities<T: Scalar>(probs: &[T]) -> Result<()> {
    let mut total = T::zero();
    for &p in probs {
        let pf = p.to_f64_lossy();
        if !(-PROB_TOL..=1.0 + PROB_TOL).contains(&pf) {
            return Err(Error::ContractViolation(format!("probability {pf} outside [0, 1]")));
        }
        total = total + p;
    }
    if !(total - T::one()).is_negligible(PROB_TOL) {
        return Err(Error::ContractViolation(format!(
            "probabilities sum to {}",
            total.to_f64_lossy()
        )));
    }
    Ok(())
}

/// Two-outcome distribution; used for outcome products and single
/// observable marginals.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BinaryDistribution<T = f64> {
    pub p_plus: T,
    pub p_minus: T,
}

pub type ProductDistribution<T = f64> = BinaryDistribution<T>;

impl<T: Scalar> BinaryDistribution<T> {
    pub fn new(p_plus: T, p_minus: T) -> Result<Self> {
        check_probabilities(&[p_plus, p_minus])?;
        Ok(Self { p_plus, p_minus })
    }

    pub fn deterministic(sign: Sign) -> Self {
        match sign {
            Sign::Plus => Self { p_plus: T::one(), p_minus: T::zero() },
            Sign::Minus => Self { p_plus: T::zero(), p_minus: T::one() },
        }
    }

    pub fn uniform() -> Self {
        let half = T::ratio(1, 2);
        Self { p_plus: half, p_minus: half }
    }

    pub fn probability(&self, sign: Sign) -> T {
        match sign {
            Sign::Plus => self.p_plus,
            Sign::Minus => self.p_minus,
        }
    }
}

/// Born probabilities of the eight outcome triples for three commuting ±1
/// observables: `P(s1,s2,s3) = Tr(rho P1^s1 P2^s2 P3^s3)`.
pub fn joint_distribution_of<T: Scalar>(
    rho: &DensityMatrix<T>,
    observables: [&Operator4<T>; 3],
) -> Result<JointDistribution8<T>> {
    let mut projectors = Vec::with_capacity(3);
    for o in observables {
        projectors.push([projector_pm(o, Sign::Plus)?, projector_pm(o, Sign::Minus)?]);
    }
    let mut probs = [T::zero(); 8];
    for (k, p) in probs.iter_mut().enumerate() {
        let t = outcome_triple(k);
        let pick = |i: usize| projectors[i][usize::from(t[i].is_minus())];
        let effect = pick(0) * pick(1) * pick(2);
        *p = (*rho.matrix() * effect).trace().re;
    }
    JointDistribution8::new(probs)
}

pub fn joint_distribution<T: Scalar>(
    rho: &DensityMatrix<T>,
    ctx: &Context,
) -> JointDistribution8<T> {
    let ops = ctx.members.map(observable::<T>);
    joint_distribution_of(rho, [&ops[0], &ops[1], &ops[2]])
        .expect("square observables are valid and the state is normalized")
}

/// Measures the context's observables one after another with Born-rule
/// sampling and the Lüders update `rho -> P rho P / Tr(P rho)` in between.
pub fn sequential_sample<R: Rng + ?Sized>(
    rho: &DensityMatrix<f64>,
    ctx: &Context,
    rng: &mut R,
) -> [Sign; 3] {
    let mut state = *rho.matrix();
    let mut outcome = [Sign::Plus; 3];
    for (slot, id) in outcome.iter_mut().zip(ctx.members) {
        let o = observable::<f64>(id);
        let p_plus_proj = projector_pm(&o, Sign::Plus).expect("square observable");
        let p_plus = (state * p_plus_proj).trace().re.clamp(0.0, 1.0);
        let sign = if rng.random::<f64>() < p_plus { Sign::Plus } else { Sign::Minus };
        let proj = projector_pm(&o, sign).expect("square observable");
        let post = proj * state * proj;
        let norm = post.trace().re;
        state = post.scale_real(1.0 / norm);
        *slot = sign;
    }
    outcome
}

/// Distribution of the outcome product `s1 s2 s3`.
pub fn product_distribution<T: Scalar>(
    joint: &JointDistribution8<T>,
) -> Result<ProductDistribution<T>> {
    let mut p_plus = T::zero();
    let mut p_minus = T::zero();
    for (k, &p) in joint.probs.iter().enumerate() {
        match triple_product(outcome_triple(k)) {
            Sign::Plus => p_plus = p_plus + p,
            Sign::Minus => p_minus = p_minus + p,
        }
    }
    if !(p_plus + p_minus - T::one()).is_negligible(1e-8) {
        return Err(Error::ContractViolation("joint distribution is not normalized".into()));
    }
    Ok(BinaryDistribution { p_plus, p_minus })
}

/// Marginal of the observable at `position` (0, 1 or 2) of the context.
pub fn marginal<T: Scalar>(joint: &JointDistribution8<T>, position: usize) -> Result<BinaryDistribution<T>> {
    if position > 2 {
        return Err(Error::InvalidInput(format!("position {position} outside 0..3")));
    }
    let mut p_plus = T::zero();
    let mut p_minus = T::zero();
    for (k, &p) in joint.probs.iter().enumerate() {
        match outcome_triple(k)[position] {
            Sign::Plus => p_plus = p_plus + p,
            Sign::Minus => p_minus = p_minus + p,
        }
    }
    Ok(BinaryDistribution { p_plus, p_minus })
}
