use nalgebra::Matrix2;
use num_complex::Complex64;
use proptest::prelude::*;
use zkamp::amplify::{
    evolve_two_dim, iterative_schedule, phase_schedule, solve_phases, subspace_matrix, toy_lambda_circuit, trajectory,
    AmplitudeCircuit, PhasePair,
};
use zkamp::protocol::VerifierDims;
use zkamp::registers::haar_random_state;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn step_matrix_is_unitary(lambda in 1e-6f64..1.0 - 1e-6, a in 0.0f64..6.3, b in 0.0f64..6.3) {
        let m = subspace_matrix(lambda, PhasePair::from_angles(a, b)).unwrap();
        let dev = (m.adjoint() * m - Matrix2::<Complex64>::identity()).norm();
        prop_assert!(dev < 1e-12, "{dev}");
    }

    #[test]
    fn schedule_never_drops_below_lambda(lambda in 0.01f64..0.75, steps in 1usize..8) {
        let s = iterative_schedule(lambda, steps).unwrap();
        prop_assert_eq!(s.len(), steps);
        prop_assert!((s[0] - lambda).abs() < 1e-14);
        prop_assert!(s.iter().all(|&p| p >= lambda - 1e-14));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn full_space_tracks_the_plane(m in 2usize..6, seed in any::<u64>(), a in 0.0f64..6.3, b in 0.0f64..6.3) {
        let toy = toy_lambda_circuit(m, VerifierDims::default(), seed).unwrap();
        let aux = haar_random_state(&toy.aux_layout(), seed ^ 1).unwrap();
        let steps = [PhasePair::from_angles(a, b); 10];
        for p in trajectory(&toy, &aux, &steps).unwrap() {
            prop_assert!(p.leakage < 1e-10 && p.disagreement() < 1e-10);
        }
    }
}

#[test]
fn solver_output_is_exact_in_full_space() {
    for (m, k) in [(2, 1), (3, 1), (4, 1), (8, 2), (10, 3)] {
        let lambda = 1.0 / m as f64;
        let sol = solve_phases(lambda, k).unwrap();
        let toy = toy_lambda_circuit(m, VerifierDims::default(), m as u64).unwrap();
        let aux = haar_random_state(&toy.aux_layout(), 3).unwrap();
        let last = *trajectory(&toy, &aux, &phase_schedule(k, sol.phases))
            .unwrap()
            .last()
            .unwrap();
        assert!(last.full[1].norm() < 1e-10, "m={m} k={k}: {}", last.full[1].norm());
        let plane = evolve_two_dim(lambda, &phase_schedule(k, sol.phases)).unwrap();
        assert!((plane - last.full).norm() < 1e-10);
    }
}
