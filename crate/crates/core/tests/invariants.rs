use entrocon::entropic::{evaluate, inequality_terms};
use entrocon::nct::{all_assignments, classical_products, mix, mix_all};
use entrocon::optics::{jones_hwp, jones_qwp, Circuit, Element, Polarization, Stage};
use entrocon::pmsquare::{
    contexts, joint_distribution, joint_distribution_of, marginal, observable, product_distribution, BinaryDistribution,
    Context, ObservableId,
};
use entrocon::qcore::{
    projector_pm, random_state, tensor, CatalogState, DensityMatrix, Operator, Pauli, RandomStateKind, Sign,
};
use entrocon::{Operator4, Rational};
use nalgebra::DMatrix;
use num_complex::Complex;
use proptest::prelude::*;

fn any_state() -> impl Strategy<Value = DensityMatrix> {
    (any::<u64>(), any::<bool>())
        .prop_map(|(seed, pure)| random_state(seed, if pure { RandomStateKind::Pure } else { RandomStateKind::Mixed }))
}

fn swap() -> Operator4 {
    Operator::from_fn(|i, j| {
        let swapped = [0, 2, 1, 3][j];
        if i == swapped { Complex::new(1.0, 0.0) } else { Complex::new(0.0, 0.0) }
    })
}

/// Observable with its two tensor factors exchanged.
fn swapped_id(id: ObservableId) -> ObservableId {
    let (l, r) = id.factors();
    ObservableId::ALL.into_iter().find(|o| o.factors() == (r, l)).expect("square closed under swap")
}

#[test]
fn square_observables_and_projectors() {
    for id in ObservableId::ALL {
        let o = observable::<f64>(id);
        assert!(o.is_hermitian(1e-12));
        assert!(o.trace().norm() < 1e-12);
        assert!((o * o).approx_eq(&Operator::identity(), 1e-12));
        let p = projector_pm(&o, Sign::Plus).unwrap();
        let m = projector_pm(&o, Sign::Minus).unwrap();
        assert!((p * p).approx_eq(&p, 1e-12));
        assert!((p + m).approx_eq(&Operator::identity(), 1e-12));
        assert!((p * m).approx_eq(&Operator::zero(), 1e-12));
    }
}

#[test]
fn catalog_purities() {
    for s in CatalogState::all() {
        let rho = s.density::<f64>();
        assert!((rho.matrix().trace().re - 1.0).abs() < 1e-12);
        assert!(rho.eigenvalues().iter().all(|&e| e > -1e-12));
        let expected = if s.is_pure() { 1.0 } else { 1.0 / s.components().len() as f64 };
        assert!((rho.purity() - expected).abs() < 1e-12, "{s}");
    }
}

#[test]
fn tensor_bilinear_over_rationals() {
    let (p, q, r) = (Pauli::X.matrix::<Rational>(), Pauli::Y.matrix::<Rational>(), Pauli::Z.matrix::<Rational>());
    let (a, b) = (Rational::new(3, 7), Rational::new(-2, 5));
    let left = tensor(&(p.scale_real(a) + q.scale_real(b)), &r);
    let right = tensor(&p, &r).scale_real(a) + tensor(&q, &r).scale_real(b);
    assert_eq!(left, right);
}

#[test]
fn exhaustive_classical_products() {
    let assignments: Vec<_> = all_assignments().collect();
    assert_eq!(assignments.len(), 16);
    for (_, a) in assignments {
        assert_eq!(a.products(), [Sign::Plus; 6]);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn parity_is_state_independent(rho in any_state()) {
        for (i, ctx) in contexts().iter().enumerate() {
            let q = product_distribution(&joint_distribution(&rho, ctx)).unwrap();
            let expected = if i == 5 { q.p_minus } else { q.p_plus };
            prop_assert!((expected - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn sextets_of_random_states(rho in any_state()) {
        let quantum: [BinaryDistribution; 6] = contexts().map(|c| product_distribution(&joint_distribution(&rho, &c)).unwrap());
        let classical = classical_products(&rho);
        let q_only = evaluate(&inequality_terms(&quantum).unwrap());
        prop_assert!(q_only.margin <= 1e-10);
        let c_only = evaluate(&inequality_terms(&classical.products).unwrap());
        prop_assert!(c_only.margin.abs() < 1e-12);
        let mixed = evaluate(&inequality_terms(&mix_all(&quantum, &classical)).unwrap());
        prop_assert!((mixed.margin - 1.0).abs() < 1e-10);
    }

    #[test]
    fn marginals_agree_across_contexts(rho in any_state()) {
        for id in ObservableId::ALL {
            let found: Vec<BinaryDistribution> = contexts()
                .iter()
                .filter(|c| c.contains(id))
                .map(|c| {
                    let pos = c.members().iter().position(|&m| m == id).unwrap();
                    marginal(&joint_distribution(&rho, c), pos).unwrap()
                })
                .collect();
            prop_assert_eq!(found.len(), 2);
            prop_assert!((found[0].p_plus - found[1].p_plus).abs() < 1e-10);
        }
    }

    #[test]
    fn joint_invariant_under_member_order(rho in any_state(), c in 0usize..6, perm in 0usize..6) {
        let orders = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let ctx = Context::canonical(c).unwrap();
        let order = orders[perm];
        let base = joint_distribution(&rho, &ctx);
        let permuted = joint_distribution(&rho, &ctx.permuted(order));
        for k in 0..8 {
            let t = entrocon::pmsquare::outcome_triple(k);
            let moved = [t[order[0]], t[order[1]], t[order[2]]];
            prop_assert!((base.probability(t) - permuted.probability(moved)).abs() < 1e-12);
        }
    }

    #[test]
    fn tensor_factor_swap(rho in any_state(), c in 0usize..6) {
        // Exchanging the two qubits maps the square onto itself; statistics of
        // the swapped state under swapped observables are unchanged.
        let s = swap();
        let swapped_rho = rho.conjugate_by(&s);
        let ctx = Context::canonical(c).unwrap();
        let ids = ctx.members();
        let obs = ids.map(|id| observable::<f64>(swapped_id(id)));
        let a = joint_distribution(&rho, &ctx);
        let b = joint_distribution_of(&swapped_rho, [&obs[0], &obs[1], &obs[2]]).unwrap();
        for (x, y) in a.probabilities().iter().zip(b.probabilities()) {
            prop_assert!((x - y).abs() < 1e-12);
        }
        for id in ids {
            prop_assert!((s * observable::<f64>(id) * s).approx_eq(&observable::<f64>(swapped_id(id)), 1e-15));
        }
    }

    #[test]
    fn mix_is_affine(a in 0.0f64..=1.0, b in 0.0f64..=1.0) {
        let q = BinaryDistribution { p_plus: 1.0 - a, p_minus: a };
        let q2 = BinaryDistribution { p_plus: 1.0 - b, p_minus: b };
        prop_assert_eq!(mix(&q, &q2).p_minus, (a + b) / 2.0);
    }

    #[test]
    fn plates_unitary(theta in -360.0f64..360.0) {
        for m in [jones_hwp(theta), jones_qwp(theta)] {
            prop_assert!((m * m.adjoint()).approx_eq(&Operator::identity(), 1e-12));
        }
    }

    #[test]
    fn routing_is_isometric(shift in -2i32..=2, displaced_h in any::<bool>(), keep_h in any::<bool>(), seed in any::<u64>()) {
        let displaced = if displaced_h { Polarization::H } else { Polarization::V };
        let keep = if keep_h { Polarization::H } else { Polarization::V };
        let circuit = Circuit {
            rails: 7,
            input_rails: [2, 4],
            output_rails: [2, 4],
            stages: vec![
                Stage::new(Element::BeamDisplacer { displaced, shift }, [2, 4]),
                Stage::new(Element::Pbs { keep }, (0..7).collect::<Vec<_>>()),
            ],
        };
        let t = match circuit.compile() {
            Ok(c) => c.transfer().unwrap(),
            Err(_) => return Ok(()),
        };
        prop_assert!(((t.adjoint() * &t) - DMatrix::identity(4, 4)).norm() < 1e-12);
        let psi = random_state(seed, RandomStateKind::Pure);
        let out = &t * psi.matrix().to_dmatrix() * t.adjoint();
        prop_assert!((out.trace().re - 1.0).abs() < 1e-12);
        // Each column has a single unit entry: routing never mixes polarizations.
        for j in 0..4 {
            let nonzero = t.column(j).iter().filter(|z| z.norm() > 1e-12).count();
            prop_assert_eq!(nonzero, 1);
        }
    }
}
