use encouple::ising::{coupling, suppressed_distribution, CouplingQuery, SuppressedIsingModel};
use encouple::ncoupled::{
    bipartition_entropy, ncoupled_basis, ncoupled_state, preparation_circuit, schmidt_decompose, Parity,
};
use encouple::stabiliser::{code, stabiliser_generators, syndrome, CodeFamily};
use encouple::statevec::{
    apply_circuit, gram_deviation, partial_trace, reduced_density_matrix, von_neumann_entropy,
};
use encouple::{DensityMatrix, GateOp, PauliString, Phase, StateVector};
use num_complex::Complex64;
use proptest::prelude::*;

fn random_state(max_qubits: usize) -> impl Strategy<Value = StateVector> {
    (2..=max_qubits).prop_flat_map(|n| {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1 << n).prop_filter_map("zero vector", move |v| {
            let amps = v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect();
            StateVector::normalized(n, amps).ok()
        })
    })
}

fn parity() -> impl Strategy<Value = Parity> {
    prop_oneof![Just(Parity::Even), Just(Parity::Odd)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn preparation_circuit_matches_definition(n in 2usize..=9, p in parity()) {
        let out = apply_circuit(&StateVector::zero(n).unwrap(), &preparation_circuit(n, p).unwrap()).unwrap();
        prop_assert!(out.approx_eq(&ncoupled_state(n, p).unwrap(), 1e-12));
    }

    #[test]
    fn single_x_flips_parity(n in 2usize..=9, q in 0usize..9) {
        let q = q % n;
        let plus = ncoupled_state(n, Parity::Even).unwrap();
        let minus = ncoupled_state(n, Parity::Odd).unwrap();
        let flipped = PauliString::single(n, q, encouple::Letter::X).unwrap().apply(&plus).unwrap();
        prop_assert!(flipped.approx_eq(&minus, 1e-12));
    }

    #[test]
    fn every_cut_has_two_equal_schmidt_terms(n in 2usize..=9, m in 1usize..9, p in parity()) {
        let m = 1 + m % (n - 1);
        let psi = ncoupled_state(n, p).unwrap();
        let d = schmidt_decompose(&psi, m).unwrap();
        prop_assert_eq!(d.rank(), 2);
        prop_assert!(d.reconstruct().approx_eq(&psi, 1e-10));
        prop_assert!((bipartition_entropy(&psi, m).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn schmidt_reconstructs_arbitrary_states(s in random_state(5), m in 1usize..5) {
        let m = 1 + m % (s.num_qubits() - 1);
        let d = schmidt_decompose(&s, m).unwrap();
        prop_assert!(d.reconstruct().approx_eq(&s, 1e-9));
        let total: f64 = d.coefficients.iter().map(|c| c * c).sum();
        prop_assert!((total - 1.0).abs() < 1e-9);
    }

    #[test]
    fn complementary_entropies_agree(s in random_state(5), m in 1usize..5) {
        let n = s.num_qubits();
        let m = 1 + m % (n - 1);
        let a: Vec<usize> = (0..m).collect();
        let b: Vec<usize> = (m..n).collect();
        let sa = von_neumann_entropy(&reduced_density_matrix(&s, &a).unwrap());
        let sb = von_neumann_entropy(&reduced_density_matrix(&s, &b).unwrap());
        prop_assert!((sa - sb).abs() < 1e-8);
        prop_assert!((sa - bipartition_entropy(&s, m).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn partial_traces_compose(s in random_state(5), drop_first in 0usize..5, drop_second in 0usize..4) {
        let n = s.num_qubits();
        prop_assume!(n >= 3);
        let rho = DensityMatrix::from_pure(&s);
        let d1 = drop_first % n;
        let keep1: Vec<usize> = (0..n).filter(|&q| q != d1).collect();
        let d2 = drop_second % (n - 1);
        let keep2: Vec<usize> = (0..n - 1).filter(|&q| q != d2).collect();
        let staged = partial_trace(&partial_trace(&rho, &keep1).unwrap(), &keep2).unwrap();
        let direct_keep: Vec<usize> = keep2.iter().map(|&i| keep1[i]).collect();
        let direct = partial_trace(&rho, &direct_keep).unwrap();
        prop_assert!(staged.max_deviation(&direct) < 1e-12);
        prop_assert!((staged.trace().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn basis_is_orthonormal_under_gate_conjugation(n in 2usize..=5, q in 0usize..5) {
        // a local unitary maps the basis to another orthonormal basis
        let g = GateOp::h(q % n);
        let b: Vec<StateVector> = ncoupled_basis(n).unwrap().iter()
            .map(|s| apply_circuit(s, std::slice::from_ref(&g)).unwrap()).collect();
        prop_assert!(gram_deviation(&b).unwrap().1 < 1e-10);
    }

    #[test]
    fn syndromes_are_linear(x1 in 0u64..32, z1 in 0u64..32, x2 in 0u64..32, z2 in 0u64..32) {
        let c = code(CodeFamily::ThreePhase, 5).unwrap();
        let g = stabiliser_generators(&c).unwrap();
        let a = PauliString::from_masks(5, x1, z1, Phase::ONE).unwrap();
        let b = PauliString::from_masks(5, x2, z2, Phase::ONE).unwrap();
        let sa = syndrome(&a, &g).unwrap();
        let sb = syndrome(&b, &g).unwrap();
        let sab = syndrome(&a.mul(&b).unwrap(), &g).unwrap();
        let xor: Vec<u8> = sa.bits.iter().zip(&sb.bits).map(|(p, q)| p ^ q).collect();
        prop_assert_eq!(sab.bits, xor);
    }

    #[test]
    fn model_couplings_round_trip(n in 2usize..=6, top in -20.0f64..20.0) {
        let model = SuppressedIsingModel::new(n, top).unwrap();
        let dist = suppressed_distribution(&model);
        let total: f64 = dist.probabilities().iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        let j = coupling(&dist, &CouplingQuery::new((0..n).collect()).unwrap()).unwrap();
        prop_assert!((j - top).abs() < 1e-8);
    }

    #[test]
    fn coupling_ignores_variable_order(n in 2usize..=5, top in -10.0f64..10.0) {
        let dist = suppressed_distribution(&SuppressedIsingModel::new(n, top).unwrap());
        let fwd: Vec<usize> = (0..n).collect();
        let rev: Vec<usize> = (0..n).rev().collect();
        let a = coupling(&dist, &CouplingQuery::new(fwd).unwrap()).unwrap();
        let b = coupling(&dist, &CouplingQuery::new(rev).unwrap()).unwrap();
        prop_assert_eq!(a, b);
    }
}
