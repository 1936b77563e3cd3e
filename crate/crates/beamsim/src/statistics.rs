//! Moments and dispersions of collective observables, trace-distance
//! distinguishability, and the no-signaling checker.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Result, SimError};
use crate::tensor::{expectation, trace_product, NOperator, OperatorStorage};

/// Deviations per unit observable norm above this threshold count as a
/// detectable signal between two preparations.
pub const NO_SIGNALING_TOL: f64 = 1e-10;

/// First and second moments of an observable in a state, with the derived
/// dispersion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentReport {
    pub mean: f64,
    pub second_moment: f64,
    pub dispersion: f64,
}

/// Exact moments of a Hermitian observable: mean `Tr(rho A)`, second moment
/// `Tr(rho A^2)`, and the dispersion `sqrt(<A^2> - <A>^2)`.
///
/// A variance within -1e-10 of zero is clamped to zero; anything more
/// negative signals corrupted operators and is a hard error.
pub fn moments(rho: &NOperator, obs: &NOperator) -> Result<MomentReport> {
    let mean = expectation(rho, obs)?;
    let second_moment = expectation(rho, &obs.matrix_power2())?;
    let variance = second_moment - mean * mean;
    if variance < -1e-10 {
        return Err(SimError::NegativeVariance { value: variance });
    }
    Ok(MomentReport {
        mean,
        second_moment,
        dispersion: variance.max(0.0).sqrt(),
    })
}

/// Trace distance between two density operators: half the sum of the
/// absolute eigenvalues of their difference. Zero exactly when the states
/// are operationally indistinguishable; at most one.
pub fn trace_distance(a: &NOperator, b: &NOperator) -> Result<f64> {
    if a.qubits() != b.qubits() {
        return Err(SimError::DimensionMismatch {
            left: a.qubits(),
            right: b.qubits(),
        });
    }
    if !a.flags().density || !b.flags().density {
        return Err(SimError::FlagViolation {
            expected: "density",
        });
    }
    let difference = a.sub(b)?;
    let eigenvalues = difference.hermitian_eigenvalues()?;
    Ok(eigenvalues.iter().map(|v| v.abs()).sum::<f64>() / 2.0)
}

/// Outcome of probing two states with random Hermitian observables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoSignalingReport {
    pub trials: usize,
    /// Largest raw deviation |Tr(a A) - Tr(b A)| over the trial set.
    pub max_deviation: f64,
    /// Largest deviation normalized by the Frobenius norm of its observable.
    pub max_relative_deviation: f64,
    /// True when every trial stayed below `NO_SIGNALING_TOL` per unit norm.
    pub pass: bool,
}

/// Probes whether any of `trials` random Hermitian observables can tell the
/// two states apart. Passes exactly when the operators are equal: equal
/// density operators make every observable's statistics identical, so no
/// measurement on the beams transmits information about the preparation.
///
/// Observables are drawn as `H = (G + G^dag)/2` with independent standard
/// complex Gaussian entries in `G`, seeded deterministically per trial.
pub fn no_signaling_check(
    a: &NOperator,
    b: &NOperator,
    trials: usize,
    seed: u64,
) -> Result<NoSignalingReport> {
    if a.qubits() != b.qubits() {
        return Err(SimError::DimensionMismatch {
            left: a.qubits(),
            right: b.qubits(),
        });
    }
    let dim = a.dim();
    let mut max_deviation = 0.0f64;
    let mut max_relative = 0.0f64;
    let mut pass = true;
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial as u64);
        let observable = random_hermitian(dim, &mut rng);
        let norm = frobenius_norm(&observable);
        let deviation = (trace_product(a, &observable) - trace_product(b, &observable)).norm();
        max_deviation = max_deviation.max(deviation);
        max_relative = max_relative.max(deviation / norm);
        if deviation > NO_SIGNALING_TOL * norm {
            pass = false;
        }
    }
    Ok(NoSignalingReport {
        trials,
        max_deviation,
        max_relative_deviation: max_relative,
        pass,
    })
}

fn random_hermitian(dim: usize, rng: &mut ChaCha8Rng) -> NOperator {
    let mut g = nalgebra::DMatrix::<Complex64>::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            g[(i, j)] = Complex64::new(re, im);
        }
    }
    let h = (&g + g.adjoint()) * Complex64::new(0.5, 0.0);
    let n = dim.trailing_zeros() as usize;
    NOperator::from_dense(n, h).expect("Hermitian construction within caps")
}

fn frobenius_norm(op: &NOperator) -> f64 {
    match op.storage() {
        OperatorStorage::Dense(m) => m.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt(),
        OperatorStorage::Diagonal(d) => d.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt(),
    }
}
