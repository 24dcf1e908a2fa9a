use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::operator::{Operator, Operator4};
use crate::error::{Error, Result};
use crate::scalar::{Real, Scalar};

/// Pure state of the four-level system, basis `|0>=|UH>, |1>=|UV>,
/// |2>=|DH>, |3>=|DV>`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StateVector<T = f64> {
    amplitudes: [Complex<T>; 4],
}

impl<T: Real> StateVector<T> {
    /// Normalizes the given amplitudes; the zero vector is rejected.
    pub fn new(amplitudes: [Complex<T>; 4]) -> Result<Self> {
        let norm = amplitudes.iter().fold(T::zero(), |acc, a| acc + a.norm_sqr()).sqrt();
        if !(norm > T::zero()) || !norm.is_finite() {
            return Err(Error::InvalidInput("state vector has zero or non-finite norm".into()));
        }
        Ok(Self { amplitudes: amplitudes.map(|a| a.unscale(norm)) })
    }

    pub fn basis(index: usize) -> Self {
        let mut amplitudes = [Complex::zero(); 4];
        amplitudes[index] = Complex::one();
        Self { amplitudes }
    }

    /// Equal-weight superposition of the listed basis states.
    pub fn uniform_superposition(indices: &[usize]) -> Result<Self> {
        let mut amplitudes = [Complex::zero(); 4];
        for &i in indices {
            *amplitudes.get_mut(i).ok_or_else(|| Error::InvalidInput(format!("basis index {i}")))? =
                Complex::one();
        }
        Self::new(amplitudes)
    }

    pub fn amplitudes(&self) -> &[Complex<T>; 4] {
        &self.amplitudes
    }

    pub fn norm(&self) -> T {
        self.amplitudes.iter().fold(T::zero(), |acc, a| acc + a.norm_sqr()).sqrt()
    }

    pub fn to_density(&self) -> DensityMatrix<T> {
        let a = &self.amplitudes;
        DensityMatrix { matrix: Operator::from_fn(|i, j| a[i] * a[j].conj()) }
    }
}

/// Density operator on the four-level system.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix<T = f64> {
    matrix: Operator4<T>,
}

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
const PSD_TOL: f64 = 1e-10;

impl<T: Scalar> DensityMatrix<T> {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(matrix: Operator4<T>) -> Result<Self> {
        if !matrix.is_hermitian(HERMITIAN_TOL) {
            return Err(Error::ContractViolation("density matrix is not Hermitian".into()));
        }
        let tr = matrix.trace();
        if !(tr.re - T::one()).is_negligible(TRACE_TOL) || !tr.im.is_negligible(TRACE_TOL) {
            return Err(Error::ContractViolation(format!(
                "density matrix trace is {:?}, expected 1",
                tr
            )));
        }
        if let Some(&min) = matrix.hermitian_eigenvalues().first() {
            if min < -PSD_TOL {
                return Err(Error::ContractViolation(format!("negative eigenvalue {min:e}")));
            }
        }
        Ok(Self { matrix })
    }

    pub(crate) fn from_operator_unchecked(matrix: Operator4<T>) -> Self {
        Self { matrix }
    }

    pub fn maximally_mixed() -> Self {
        Self { matrix: Operator::identity().scale_real(T::ratio(1, 4)) }
    }

    /// Diagonal state with equal weight on the listed basis states.
    pub fn uniform_mixture(indices: &[usize]) -> Result<Self> {
        if indices.is_empty() || indices.iter().any(|&i| i >= 4) {
            return Err(Error::InvalidInput(format!("basis indices {indices:?}")));
        }
        let w = T::ratio(1, indices.len() as i64);
        let mut diag = [T::zero(); 4];
        for &i in indices {
            diag[i] = w;
        }
        Ok(Self { matrix: Operator::diagonal(diag) })
    }

    /// Projector onto `(sum_{i in S} |i>) / sqrt(|S|)`; its entries are
    /// `1/|S|` so no square root is needed.
    pub fn uniform_superposition(indices: &[usize]) -> Result<Self> {
        if indices.is_empty() || indices.iter().any(|&i| i >= 4) {
            return Err(Error::InvalidInput(format!("basis indices {indices:?}")));
        }
        let w = Complex::new(T::ratio(1, indices.len() as i64), T::zero());
        Ok(Self {
            matrix: Operator::from_fn(|i, j| {
                if indices.contains(&i) && indices.contains(&j) {
                    w
                } else {
                    Complex::zero()
                }
            }),
        })
    }

    pub fn matrix(&self) -> &Operator4<T> {
        &self.matrix
    }

    pub fn purity(&self) -> T {
        (self.matrix * self.matrix).trace().re
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.matrix.hermitian_eigenvalues()
    }

    pub fn to_f64(&self) -> DensityMatrix<f64> {
        DensityMatrix { matrix: self.matrix.to_f64() }
    }

    /// `weight * self + (1 - weight) * other`.
    pub fn convex_mix(&self, other: &Self, weight: T) -> Self {
        Self {
            matrix: self.matrix.scale_real(weight) + other.matrix.scale_real(T::one() - weight),
        }
    }

    /// Conjugation `U rho U†` (for unitary `U`).
    pub fn conjugate_by(&self, unitary: &Operator4<T>) -> Self {
        Self { matrix: *unitary * self.matrix * unitary.adjoint() }
    }
}

/// `Tr(rho * obs)` for a Hermitian observable.
pub fn expectation<T: Scalar>(rho: &DensityMatrix<T>, obs: &Operator4<T>) -> Result<T> {
    if !obs.is_hermitian(1e-10) {
        return Err(Error::ContractViolation("observable is not Hermitian".into()));
    }
    let tr = (*rho.matrix() * *obs).trace();
    if !tr.im.is_negligible(1e-10) {
        return Err(Error::ContractViolation(format!("imaginary expectation {:?}", tr.im)));
    }
    Ok(tr.re)
}

/// One of the 26 tested states: `Psi1..Psi15` pure, `rho16..rho26` mixed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CatalogState(u8);

const CATALOG_COMPONENTS: [&[usize]; 26] = [
    &[0],
    &[1],
    &[2],
    &[3],
    &[0, 1],
    &[0, 2],
    &[0, 3],
    &[1, 2],
    &[1, 3],
    &[2, 3],
    &[0, 1, 2],
    &[0, 1, 3],
    &[0, 2, 3],
    &[1, 2, 3],
    &[0, 1, 2, 3],
    &[0, 1],
    &[0, 2],
    &[0, 3],
    &[1, 2],
    &[1, 3],
    &[2, 3],
    &[0, 1, 2],
    &[0, 1, 3],
    &[0, 2, 3],
    &[1, 2, 3],
    &[0, 1, 2, 3],
];

impl CatalogState {
    pub const COUNT: usize = 26;

    pub fn from_index(index: u8) -> Result<Self> {
        if (1..=26).contains(&index) {
            Ok(Self(index))
        } else {
            Err(Error::UnknownLabel(format!("state #{index}")))
        }
    }

    pub fn all() -> impl Iterator<Item = CatalogState> {
        (1..=26).map(CatalogState)
    }

    pub fn index(self) -> u8 {
        self.0
    }

    pub fn is_pure(self) -> bool {
        self.0 <= 15
    }

    /// Basis states entering the superposition or mixture.
    pub fn components(self) -> &'static [usize] {
        CATALOG_COMPONENTS[usize::from(self.0) - 1]
    }

    pub fn label(self) -> String {
        self.to_string()
    }

    /// Human-readable Dirac form, e.g. `(|0>+|1>)/sqrt(2)`.
    pub fn describe(self) -> String {
        let comps = self.components();
        let k = comps.len();
        if self.is_pure() {
            let kets: Vec<String> = comps.iter().map(|i| format!("|{i}>")).collect();
            match k {
                1 => kets[0].clone(),
                4 => format!("({})/2", kets.join("+")),
                _ => format!("({})/sqrt({k})", kets.join("+")),
            }
        } else {
            let proj: Vec<String> = comps.iter().map(|i| format!("|{i}><{i}|")).collect();
            format!("({})/{k}", proj.join("+"))
        }
    }

    pub fn density<T: Scalar>(self) -> DensityMatrix<T> {
        let comps = self.components();
        if self.is_pure() {
            DensityMatrix::uniform_superposition(comps)
        } else {
            DensityMatrix::uniform_mixture(comps)
        }
        .expect("catalog components are valid basis indices")
    }

    /// State vector of a pure catalog entry.
    pub fn state_vector<T: Real>(self) -> Option<StateVector<T>> {
        self.is_pure().then(|| {
            StateVector::uniform_superposition(self.components())
                .expect("catalog components are valid basis indices")
        })
    }
}

impl FromStr for CatalogState {
    type Err = Error;

    /// Case-insensitive `PsiN` for N in 1..=15 and `rhoN` for N in 16..=26.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let unknown = || Error::UnknownLabel(s.to_string());
        let (range, digits) = if let Some(d) = lower.strip_prefix("psi") {
            (1..=15, d)
        } else if let Some(d) = lower.strip_prefix("rho") {
            (16..=26, d)
        } else {
            return Err(unknown());
        };
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) || digits.starts_with('0') {
            return Err(unknown());
        }
        let n: u8 = digits.parse().map_err(|_| unknown())?;
        if range.contains(&n) {
            Ok(Self(n))
        } else {
            Err(unknown())
        }
    }
}

impl fmt::Display for CatalogState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_pure() {
            write!(f, "Psi{}", self.0)
        } else {
            write!(f, "rho{}", self.0)
        }
    }
}

/// Density matrix of a catalog state by label.
pub fn state_factory<T: Scalar>(label: &str) -> Result<DensityMatrix<T>> {
    Ok(label.parse::<CatalogState>()?.density())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RandomStateKind {
    Pure,
    Mixed,
}

/// Seeded random state: Haar pure state from normalized complex Gaussian
/// amplitudes, or a full-rank mixed state `G G† / Tr(G G†)` from a complex
/// Gaussian `G` (Hilbert-Schmidt measure).
pub fn random_state(seed: u64, kind: RandomStateKind) -> DensityMatrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gauss = || -> Complex<f64> {
        Complex::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng))
    };
    match kind {
        RandomStateKind::Pure => {
            let amps = [gauss(), gauss(), gauss(), gauss()];
            StateVector::new(amps).expect("gaussian vector is nonzero").to_density()
        }
        RandomStateKind::Mixed => {
            let g = Operator4::<f64>::from_fn(|_, _| gauss());
            let w = g * g.adjoint();
            let tr = w.trace().re;
            let m = w.scale_real(1.0 / tr);
            // Symmetrize away round-off so the Hermiticity check is exact.
            let m = (m + m.adjoint()).scale_real(0.5);
            DensityMatrix::from_operator_unchecked(m)
        }
    }
}
