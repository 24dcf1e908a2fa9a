//! Jones matrices for ideal wave plates, angles in degrees.
//!
//! Conventions: `HWP(θ) = [[cos2θ, sin2θ], [sin2θ, -cos2θ]]` so that
//! `HWP(45°) = X` and `HWP(22.5°)` is the Hadamard matrix, and
//! `QWP(θ) = R(θ) diag(1, i) R(-θ)` with `R` the rotation by `θ`.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::qcore::{projector_pm, Operator, Operator2, Sign};
use crate::scalar::Real;

pub fn jones_hwp<T: Real>(theta_deg: T) -> Operator2<T> {
    let two_theta = (theta_deg + theta_deg).to_radians();
    let (s, c) = two_theta.sin_cos();
    let re = |x: T| Complex::new(x, T::zero());
    Operator::from_rows([[re(c), re(s)], [re(s), re(-c)]])
}

pub fn jones_qwp<T: Real>(theta_deg: T) -> Operator2<T> {
    let (s, c) = theta_deg.to_radians().sin_cos();
    let off = Complex::new(c * s, -(c * s));
    Operator::from_rows([
        [Complex::new(c * c, s * s), off],
        [off, Complex::new(s * s, c * c)],
    ])
}

/// `U_M = |H><m_+| + |V><m_-|` for a ±1-valued 2x2 observable `M`.
pub fn basis_rotation<T: Real>(obs: &Operator2<T>) -> Result<Operator2<T>> {
    let plus = eigenvector(&projector_pm(obs, Sign::Plus)?)?;
    let minus = eigenvector(&projector_pm(obs, Sign::Minus)?)?;
    Ok(Operator::from_rows([
        [plus[0].conj(), plus[1].conj()],
        [minus[0].conj(), minus[1].conj()],
    ]))
}

/// Normalized column of largest norm of a rank-one projector.
fn eigenvector<T: Real>(proj: &Operator2<T>) -> Result<[Complex<T>; 2]> {
    let col = |j: usize| [proj.get(0, j), proj.get(1, j)];
    let norm = |v: &[Complex<T>; 2]| (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    let (c0, c1) = (col(0), col(1));
    let best = if norm(&c0) >= norm(&c1) { c0 } else { c1 };
    let n = norm(&best);
    if n.to_f64_lossy() < 1e-6 {
        return Err(Error::InvalidInput("observable has a degenerate spectrum".into()));
    }
    Ok(best.map(|z| z.unscale(n)))
}

/// Distance `min_φ ‖a − e^{iφ} b‖` in the spectral norm, with the phase
/// chosen from `Tr(b† a)`.
pub fn phase_insensitive_distance<const N: usize>(a: &Operator<f64, N>, b: &Operator<f64, N>) -> f64 {
    let overlap = (b.adjoint() * *a).trace();
    let phase = if overlap.norm() > 1e-300 { overlap / overlap.norm() } else { Complex::one() };
    (*a - b.scale(phase)).operator_norm()
}

/// True if `a = b D` for a diagonal unitary `D` (columns match up to phase).
pub fn equal_up_to_column_phases(a: &Operator2<f64>, b: &Operator2<f64>, tol: f64) -> bool {
    (0..2).all(|j| {
        let ca = [a.get(0, j), a.get(1, j)];
        let cb = [b.get(0, j), b.get(1, j)];
        let ov: Complex<f64> = cb[0].conj() * ca[0] + cb[1].conj() * ca[1];
        let phase = if ov.norm() > 0.0 { ov / ov.norm() } else { Complex::zero() };
        (0..2).all(|i| (ca[i] - cb[i] * phase).norm() <= tol)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::Pauli;
    use proptest::prelude::*;

    fn close(a: &Operator2<f64>, b: &Operator2<f64>) -> bool {
        a.approx_eq(b, 1e-12)
    }

    fn hadamard() -> Operator2<f64> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Operator::from_rows([
            [Complex::new(h, 0.0), Complex::new(h, 0.0)],
            [Complex::new(h, 0.0), Complex::new(-h, 0.0)],
        ])
    }

    #[test]
    fn hwp_anchors() {
        assert!(close(&jones_hwp(0.0), &Pauli::Z.matrix()));
        assert!(close(&jones_hwp(45.0), &Pauli::X.matrix()));
        assert!(close(&jones_hwp(22.5), &hadamard()));
    }

    #[test]
    fn qwp_anchors() {
        let (o, l, i) = (Complex::zero(), Complex::one(), Complex::i());
        let q0 = jones_qwp(0.0_f64);
        assert!(close(&q0, &Operator::from_rows([[l, o], [o, i]])));
        let q4 = q0 * q0 * q0 * q0;
        assert!(phase_insensitive_distance(&q4, &Operator::identity()) < 1e-12);
        assert!(close(&jones_qwp(90.0_f64), &Operator::from_rows([[i, o], [o, l]])));
    }

    #[test]
    fn basis_rotation_examples() {
        assert!(close(&basis_rotation(&Pauli::Z.matrix()).unwrap(), &Operator::identity()));
        assert!(equal_up_to_column_phases(&basis_rotation(&Pauli::X.matrix()).unwrap(), &hadamard(), 1e-12));
        for p in [Pauli::X, Pauli::Y] {
            let m: Operator2<f64> = p.matrix();
            let u = basis_rotation(&m).unwrap();
            assert!(close(&(u * m * u.adjoint()), &Pauli::Z.matrix()), "{p}");
            assert!(close(&(u * u.adjoint()), &Operator::identity()));
        }
        assert!(basis_rotation(&Operator2::<f64>::identity()).is_err());
    }

    #[test]
    fn plates_realize_y_rotation() {
        // QWP(0) then HWP(-22.5) maps the +1 eigenvector of Y to H, like U_B
        // does; both agree up to a phase per output port.
        let y = Pauli::Y.matrix::<f64>();
        let z = Pauli::Z.matrix::<f64>();
        let u_b = basis_rotation(&y).unwrap();
        let plates = jones_hwp(-22.5) * jones_qwp(0.0);
        assert!((plates * y * plates.adjoint()).approx_eq(&z, 1e-12));
        assert!((u_b * y * u_b.adjoint()).approx_eq(&z, 1e-12));
        let overlap = plates * u_b.adjoint();
        assert!(overlap.get(0, 1).norm() < 1e-12 && overlap.get(1, 0).norm() < 1e-12);
        // With the positive angle the Y eigenvectors land on the swapped ports.
        let swapped = jones_hwp(22.5) * jones_qwp(0.0);
        assert!((swapped * y * swapped.adjoint()).approx_eq(&(-z), 1e-12));
    }

    proptest! {
        #[test]
        fn plates_unitary(theta in -180.0f64..180.0) {
            for m in [jones_hwp(theta), jones_qwp(theta)] {
                prop_assert!((m * m.adjoint()).approx_eq(&Operator::identity(), 1e-12));
            }
            let h = jones_hwp(theta);
            prop_assert!(h.is_hermitian(1e-12));
            prop_assert!((h * h).approx_eq(&Operator::identity(), 1e-12));
        }
    }
}
