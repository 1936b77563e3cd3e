//! Property-based invariants over randomly generated axes, states, and
//! mixtures.

use beamsim::ensembles::{chopping_weight, density_matrix, EnsembleSpec, MixtureTerm, Preparation};
use beamsim::qubit::{bloch_basis, projector, Operator2, PureQubit};
use beamsim::statistics::trace_distance;
use beamsim::tensor::{kron_states, Configuration, NOperator};
use beamsim::TOL;
use proptest::prelude::*;

fn angle_pair() -> impl Strategy<Value = (f64, f64)> {
    (0.0..std::f64::consts::PI, 0.0..std::f64::consts::TAU)
}

fn arbitrary_qubit() -> impl Strategy<Value = PureQubit> {
    angle_pair().prop_map(|(polar, azimuth)| bloch_basis(polar, azimuth).plus)
}

proptest! {
    #[test]
    fn bloch_bases_are_orthonormal_and_complete((polar, azimuth) in angle_pair()) {
        let basis = bloch_basis(polar, azimuth);
        prop_assert!(basis.plus.overlap(&basis.minus).norm() <= TOL);
        let completeness = projector(&basis.plus).add(&projector(&basis.minus));
        prop_assert!(completeness.max_abs_diff(&Operator2::identity()) <= TOL);
    }

    #[test]
    fn kron_states_preserves_norm(factors in prop::collection::vec(arbitrary_qubit(), 1..=6)) {
        let state = kron_states(&factors).unwrap();
        let norm_sq: f64 = (0..state.vector().len())
            .map(|i| state.amplitude(i).norm_sqr())
            .sum();
        prop_assert!((norm_sq - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn configuration_index_roundtrip(n in 1usize..=12, raw in any::<usize>()) {
        let index = raw & ((1 << n) - 1);
        let config = Configuration::from_index(n, index);
        prop_assert_eq!(config.index(), index);
        prop_assert_eq!(
            config.label_sum(),
            n as i32 - 2 * index.count_ones() as i32
        );
    }

    #[test]
    fn chopping_weights_form_a_distribution(n in 1usize..=30) {
        let weights: Vec<f64> = (0..=n).map(|m| chopping_weight(n, m).unwrap()).collect();
        prop_assert!(weights.iter().all(|w| *w > 0.0));
        let total: f64 = weights.iter().sum();
        prop_assert!((total - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn random_mixtures_are_basis_blind((pa, aa) in angle_pair(), (pb, ab) in angle_pair(), n in 1usize..=5) {
        let rho_a = density_matrix(&EnsembleSpec::new(
            Preparation::RandomMixture { basis: bloch_basis(pa, aa) },
            n,
        ))
        .unwrap();
        let rho_b = density_matrix(&EnsembleSpec::new(
            Preparation::RandomMixture { basis: bloch_basis(pb, ab) },
            n,
        ))
        .unwrap();
        prop_assert!(rho_a.max_abs_diff(&rho_b).unwrap() <= 1e-12);
    }

    #[test]
    fn trace_distance_bounds_and_symmetry(
        a in prop::collection::vec(arbitrary_qubit(), 2),
        b in prop::collection::vec(arbitrary_qubit(), 2),
    ) {
        let mixture = |states: &[PureQubit]| {
            let terms = vec![
                MixtureTerm { weight: 0.5, states: vec![states[0]; 2] },
                MixtureTerm { weight: 0.5, states: vec![states[1]; 2] },
            ];
            density_matrix(&EnsembleSpec::new(
                Preparation::explicit_mixture(terms).unwrap(),
                2,
            ))
            .unwrap()
        };
        let rho_a: NOperator = mixture(&a);
        let rho_b: NOperator = mixture(&b);
        let forward = trace_distance(&rho_a, &rho_b).unwrap();
        let backward = trace_distance(&rho_b, &rho_a).unwrap();
        prop_assert!((forward - backward).abs() <= 1e-12);
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&forward));
        prop_assert!(trace_distance(&rho_a, &rho_a).unwrap() <= 1e-12);
    }
}
