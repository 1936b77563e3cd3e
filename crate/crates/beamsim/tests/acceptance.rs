//! Acceptance suite: one test per headline guarantee, each printing a
//! PASS line with its runtime. Run with `cargo test --test acceptance`
//! (add `-- --nocapture` to see the PASS lines of successful criteria).

use std::time::Instant;

use beamsim::ensembles::{density_matrix, mix_fixed_magnetization, EnsembleSpec, Preparation};
use beamsim::qubit::{basis_x, basis_z, bloch_basis, pauli_z, BasisPair};
use beamsim::sampling::empirical_moments;
use beamsim::statistics::{moments, no_signaling_check};
use beamsim::tensor::{collective_observable, NOperator};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn finish(criterion: &str, started: Instant, budget_seconds: f64) {
    let elapsed = started.elapsed().as_secs_f64();
    assert!(
        elapsed < budget_seconds,
        "{criterion}: runtime {elapsed:.2} s exceeded budget {budget_seconds} s"
    );
    println!("acceptance {criterion}: PASS ({elapsed:.2} s)");
}

fn maximally_mixed(n: usize) -> NOperator {
    NOperator::identity(n)
        .unwrap()
        .scale(1.0 / (1u64 << n) as f64)
        .into_density()
        .unwrap()
}

fn sigma_z(n: usize) -> NOperator {
    collective_observable(&pauli_z(), n).unwrap()
}

fn test_bases() -> Vec<BasisPair> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce97);
    let mut bases = vec![basis_z(), basis_x()];
    for _ in 0..5 {
        bases.push(bloch_basis(
            rng.gen::<f64>() * std::f64::consts::PI,
            rng.gen::<f64>() * std::f64::consts::TAU,
        ));
    }
    bases
}

#[test]
fn criterion_1_random_mixture_identity() {
    let started = Instant::now();
    for n in 1..=10 {
        let reference = maximally_mixed(n);
        for basis in test_bases() {
            let rho = density_matrix(&EnsembleSpec::new(Preparation::RandomMixture { basis }, n))
                .unwrap();
            let deviation = rho.max_abs_diff(&reference).unwrap();
            assert!(
                deviation <= 1e-12,
                "random mixture at n={n} deviates from the maximally mixed operator by {deviation:e}"
            );
        }
    }
    finish("1 (random-mixture identity)", started, 5.0);
}

#[test]
fn criterion_2_random_mixture_dispersion() {
    let started = Instant::now();
    // dense regime
    for n in 1..=10 {
        for basis in [basis_z(), basis_x()] {
            let rho = density_matrix(&EnsembleSpec::new(Preparation::RandomMixture { basis }, n))
                .unwrap()
                .to_dense()
                .unwrap();
            let report = moments(&rho, &sigma_z(n)).unwrap();
            assert!(
                (report.dispersion - (n as f64).sqrt()).abs() < 1e-10,
                "dense dispersion at n={n}"
            );
        }
    }
    // diagonal regime beyond the dense cap
    for n in 13..=20 {
        let rho = density_matrix(&EnsembleSpec::new(
            Preparation::RandomMixture { basis: basis_z() },
            n,
        ))
        .unwrap();
        assert!(rho.is_diagonal());
        let report = moments(&rho, &sigma_z(n)).unwrap();
        assert!(
            (report.dispersion - (n as f64).sqrt()).abs() < 1e-10,
            "diagonal dispersion at n={n}"
        );
    }
    finish("2 (random-mixture dispersion)", started, 5.0);
}

#[test]
fn criterion_3_decomposition_consistency() {
    let started = Instant::now();
    for n in 1..=8 {
        for basis in [basis_z(), basis_x()] {
            let mixed = mix_fixed_magnetization(&basis, n).unwrap();
            let direct =
                density_matrix(&EnsembleSpec::new(Preparation::RandomMixture { basis }, n))
                    .unwrap();
            let deviation = mixed.max_abs_diff(&direct).unwrap();
            assert!(deviation <= 1e-12, "decomposition at n={n}: {deviation:e}");
        }
    }
    finish("3 (decomposition consistency)", started, 5.0);
}

#[test]
fn criterion_4_correlated_preparation_table() {
    let started = Instant::now();
    for n in 1..=10usize {
        let z = moments(
            &density_matrix(&EnsembleSpec::new(
                Preparation::AlternatingCorrelated { basis: basis_z() },
                n,
            ))
            .unwrap(),
            &sigma_z(n),
        )
        .unwrap();
        let x = moments(
            &density_matrix(&EnsembleSpec::new(
                Preparation::AlternatingCorrelated { basis: basis_x() },
                n,
            ))
            .unwrap(),
            &sigma_z(n),
        )
        .unwrap();
        let expected_z = if n % 2 == 0 { 0.0 } else { 1.0 };
        assert!(
            (z.dispersion - expected_z).abs() < 1e-10,
            "method I at n={n}"
        );
        assert!(
            (x.dispersion - (n as f64).sqrt()).abs() < 1e-10,
            "method II at n={n}"
        );
    }

    // three-particle spectra, exact
    let rho = density_matrix(&EnsembleSpec::new(
        Preparation::AlternatingCorrelated { basis: basis_z() },
        3,
    ))
    .unwrap();
    let rho_diag = [0.0, 0.0, 0.5, 0.0, 0.0, 0.5, 0.0, 0.0];
    for (k, want) in rho_diag.iter().enumerate() {
        assert_eq!(rho.entry(k, k).re, *want);
        assert_eq!(rho.entry(k, k).im, 0.0);
    }
    let sigma = sigma_z(3);
    let sigma_diag = [3.0, 1.0, 1.0, -1.0, 1.0, -1.0, -1.0, -3.0];
    for (k, want) in sigma_diag.iter().enumerate() {
        assert_eq!(sigma.entry(k, k).re, *want);
    }
    let squared = sigma.matrix_power2();
    let squared_diag = [9.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 9.0];
    for (k, want) in squared_diag.iter().enumerate() {
        assert_eq!(squared.entry(k, k).re, *want);
    }
    finish("4 (correlated-preparation table)", started, 2.0);
}

#[test]
fn criterion_5_zero_total_spin_beams() {
    let started = Instant::now();
    for n in [2usize, 4, 6, 8, 10] {
        let z = moments(
            &density_matrix(&EnsembleSpec::new(
                Preparation::FixedMagnetization {
                    basis: basis_z(),
                    up_count: n / 2,
                },
                n,
            ))
            .unwrap(),
            &sigma_z(n),
        )
        .unwrap();
        assert!(z.dispersion.abs() < 1e-10, "method I at n={n}");

        let x = moments(
            &density_matrix(&EnsembleSpec::new(
                Preparation::FixedMagnetization {
                    basis: basis_x(),
                    up_count: n / 2,
                },
                n,
            ))
            .unwrap(),
            &sigma_z(n),
        )
        .unwrap();
        assert!(
            (x.dispersion - (n as f64).sqrt()).abs() < 1e-10,
            "method II at n={n}"
        );
    }
    finish("5 (zero-total-spin beams)", started, 5.0);
}

#[test]
fn criterion_6_no_signaling() {
    let started = Instant::now();
    for n in 1..=8 {
        let rho_z = density_matrix(&EnsembleSpec::new(
            Preparation::RandomMixture { basis: basis_z() },
            n,
        ))
        .unwrap();
        let rho_x = density_matrix(&EnsembleSpec::new(
            Preparation::RandomMixture { basis: basis_x() },
            n,
        ))
        .unwrap();
        let report = no_signaling_check(&rho_z, &rho_x, 100, 0x6e0516).unwrap();
        assert!(report.pass, "random mixtures separated at n={n}");
        assert!(
            report.max_deviation < 1e-10,
            "deviation {:e} at n={n}",
            report.max_deviation
        );
    }

    let a = density_matrix(&EnsembleSpec::new(
        Preparation::AlternatingCorrelated { basis: basis_z() },
        2,
    ))
    .unwrap();
    let b = density_matrix(&EnsembleSpec::new(
        Preparation::AlternatingCorrelated { basis: basis_x() },
        2,
    ))
    .unwrap();
    let report = no_signaling_check(&a, &b, 100, 0x6e0516).unwrap();
    assert!(!report.pass, "correlated pair must be distinguishable");
    assert!(report.max_deviation > 0.1);
    finish("6 (no-signaling)", started, 10.0);
}

#[test]
fn criterion_7_monte_carlo_oracle() {
    let started = Instant::now();
    let beams = 100_000;
    let seed = 0x0b5e7;

    let mut cases: Vec<(Preparation, usize)> = Vec::new();
    for n in 1..=10usize {
        cases.push((Preparation::RandomMixture { basis: basis_z() }, n));
        cases.push((Preparation::RandomMixture { basis: basis_x() }, n));
        cases.push((Preparation::AlternatingCorrelated { basis: basis_z() }, n));
        cases.push((Preparation::AlternatingCorrelated { basis: basis_x() }, n));
        if n % 2 == 0 {
            cases.push((
                Preparation::FixedMagnetization {
                    basis: basis_z(),
                    up_count: n / 2,
                },
                n,
            ));
            cases.push((
                Preparation::FixedMagnetization {
                    basis: basis_x(),
                    up_count: n / 2,
                },
                n,
            ));
        }
    }
    for (prep, n) in cases {
        let exact = moments(
            &density_matrix(&EnsembleSpec::new(prep.clone(), n)).unwrap(),
            &sigma_z(n),
        )
        .unwrap();
        let empirical = empirical_moments(&prep, n, beams, seed).unwrap();
        let band = 4.0 * empirical.standard_error_dispersion;
        if exact.dispersion == 0.0 {
            assert_eq!(empirical.dispersion, 0.0, "degenerate case at n={n}");
        } else {
            assert!(
                (empirical.dispersion - exact.dispersion).abs() <= band,
                "{prep:?} at n={n}: empirical {} exact {} band {band}",
                empirical.dispersion,
                exact.dispersion
            );
        }
    }

    // sqrt(N) scaling where dense operators are deliberately never built
    for n in [16usize, 20, 24] {
        let prep = Preparation::RandomMixture { basis: basis_z() };
        let empirical = empirical_moments(&prep, n, beams, seed).unwrap();
        let band = 4.0 * empirical.standard_error_dispersion;
        assert!(
            (empirical.dispersion - (n as f64).sqrt()).abs() <= band,
            "scaling regime at n={n}"
        );
    }

    // determinism under a fixed seed
    let prep = Preparation::RandomMixture { basis: basis_x() };
    let first = empirical_moments(&prep, 6, 10_000, seed).unwrap();
    let second = empirical_moments(&prep, 6, 10_000, seed).unwrap();
    assert_eq!(first, second);

    finish("7 (Monte Carlo oracle)", started, 60.0);
}

#[test]
fn criterion_8_fermion_map() {
    use beamsim::fermion::{antisymmetrize, ordered_inner, slater_inner, SingleParticleState};

    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xfe51);
    for _ in 0..200 {
        let n = rng.gen_range(1..=5);
        let random_states = |rng: &mut ChaCha8Rng| -> Vec<SingleParticleState> {
            (0..n)
                .map(|slot| {
                    let basis = bloch_basis(
                        rng.gen::<f64>() * std::f64::consts::PI,
                        rng.gen::<f64>() * std::f64::consts::TAU,
                    );
                    SingleParticleState::new(basis.plus, slot)
                })
                .collect()
        };
        let a = random_states(&mut rng);
        let b = random_states(&mut rng);
        let plain = ordered_inner(&a, &b).unwrap();
        let mapped =
            slater_inner(&antisymmetrize(&a).unwrap(), &antisymmetrize(&b).unwrap()).unwrap();
        assert!(
            (plain - mapped).norm() <= 1e-12,
            "inner product not preserved at n={n}"
        );
    }

    // the two-particle example expands to (1/sqrt(2)) [ |up@0, up@1> - |up@1, up@0> ]
    let up = basis_z().plus;
    let state = antisymmetrize(&[
        SingleParticleState::new(up, 0),
        SingleParticleState::new(up, 1),
    ])
    .unwrap();
    let amplitudes = state.expand(2).unwrap();
    let c = std::f64::consts::FRAC_1_SQRT_2;
    for (index, amp) in amplitudes.iter().enumerate() {
        let want = match index {
            1 => c,
            4 => -c,
            _ => 0.0,
        };
        assert!(
            (amp.re - want).abs() <= 1e-12 && amp.im == 0.0,
            "index {index}"
        );
    }
    finish("8 (fermion map)", started, 2.0);
}
