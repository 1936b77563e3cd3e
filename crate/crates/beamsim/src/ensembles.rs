//! Declarative preparation procedures and their exact density operators:
//! completely random mixtures, fixed-magnetization mixtures, alternating
//! time-correlated preparations, and arbitrary explicit mixtures.
//!
//! A preparation describes how single particles are emitted; viewing the
//! emission stream as a source of N-particle beams turns the same procedure
//! into an N-beam state for every N. Particle order inside the tensor
//! product encodes decreasing preparation time.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Result, SimError};
use crate::qubit::{basis_change, projector, BasisPair, PureQubit};
use crate::tensor::{
    kron_ops, kron_states, Configuration, NOperator, NState, SpinLabel, DIAGONAL_QUBIT_CAP,
};
use crate::TOL;

/// One weighted product-state term of an explicit mixture.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureTerm {
    pub weight: f64,
    pub states: Vec<PureQubit>,
}

/// A declarative ensemble-generation procedure.
#[derive(Debug, Clone, PartialEq)]
pub enum Preparation {
    /// Equal-weight mixture of all 2^N product configurations in a basis.
    RandomMixture { basis: BasisPair },
    /// Equal-weight mixture over all configurations with exactly `up_count`
    /// plus labels.
    FixedMagnetization { basis: BasisPair, up_count: usize },
    /// Strictly alternating labels: the k-th particle of a beam carries spin
    /// label (-1)^k along the basis axis. Even beam lengths give a single
    /// pure state, odd lengths an equal mixture of the two phase offsets.
    AlternatingCorrelated { basis: BasisPair },
    /// An arbitrary convex mixture of product states.
    ExplicitMixture { terms: Vec<MixtureTerm> },
}

impl Preparation {
    /// Validates and builds an explicit mixture: positive weights summing to
    /// one within tolerance, all state sequences of equal length.
    pub fn explicit_mixture(terms: Vec<MixtureTerm>) -> Result<Self> {
        if terms.is_empty() {
            return Err(SimError::InvalidWeights {
                reason: "mixture has no terms".into(),
            });
        }
        let expected = terms[0].states.len();
        if expected == 0 {
            return Err(SimError::EmptyProduct);
        }
        let mut total = 0.0;
        for (index, term) in terms.iter().enumerate() {
            if !term.weight.is_finite() || term.weight <= 0.0 {
                return Err(SimError::InvalidWeights {
                    reason: format!("weight {} of term {index} is not positive", term.weight),
                });
            }
            if term.states.len() != expected {
                return Err(SimError::TermLengthMismatch {
                    index,
                    got: term.states.len(),
                    expected,
                });
            }
            total += term.weight;
        }
        if (total - 1.0).abs() > TOL {
            return Err(SimError::InvalidWeights {
                reason: format!("weights sum to {total}, expected 1"),
            });
        }
        Ok(Preparation::ExplicitMixture { terms })
    }

    /// Number of particles fixed by the preparation itself, when any.
    pub fn fixed_length(&self) -> Option<usize> {
        match self {
            Preparation::ExplicitMixture { terms } => Some(terms[0].states.len()),
            _ => None,
        }
    }
}

/// A preparation applied as an N-beam source.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleSpec {
    pub preparation: Preparation,
    pub n: usize,
}

impl EnsembleSpec {
    pub fn new(preparation: Preparation, n: usize) -> Self {
        Self { preparation, n }
    }
}

/// Exact density operator of the preparation viewed as an N-beam state.
///
/// z-axis preparations are built directly on the diagonal and may exceed the
/// dense cap; all other bases go through dense storage.
pub fn density_matrix(spec: &EnsembleSpec) -> Result<NOperator> {
    let n = spec.n;
    if n == 0 {
        return Err(SimError::EmptyProduct);
    }
    if let Some(len) = spec.preparation.fixed_length() {
        if len != n {
            return Err(SimError::TermLengthMismatch {
                index: 0,
                got: len,
                expected: n,
            });
        }
    }
    let rho = match &spec.preparation {
        Preparation::RandomMixture { basis } => {
            // distributed form of the 2^N-term projector mixture:
            // (1/2^N) sum over configurations of P_{i_1} (x) ... (x) P_{i_N}
            //   = ((P_+ + P_-)/2) (x) ... (x) ((P_+ + P_-)/2)
            let site_average = projector(&basis.plus)
                .add(&projector(&basis.minus))
                .scale(0.5);
            kron_ops(&vec![site_average; n])?
        }
        Preparation::FixedMagnetization { basis, up_count } => {
            let diag = fixed_magnetization_diagonal(n, *up_count)?;
            if basis.is_z_axis() {
                diag
            } else {
                diag.to_dense()?.conjugate_sites(&basis_change(basis))?
            }
        }
        Preparation::AlternatingCorrelated { basis } => {
            if basis.is_z_axis() {
                let mut diag = NOperator::zeros_diagonal(n)?;
                for (weight, config) in alternating_configurations(n) {
                    let term = basis_projector_diagonal(n, config.index())?;
                    diag.scaled_add(weight, &term)?;
                }
                diag
            } else {
                let mut rho = NOperator::zeros_dense(n)?;
                for (weight, state) in correlated_pure_states(basis, n)? {
                    rho.scaled_add(weight, &state.projector())?;
                }
                rho
            }
        }
        Preparation::ExplicitMixture { terms } => {
            let mut rho = NOperator::zeros_dense(n)?;
            for term in terms {
                rho.scaled_add(term.weight, &kron_states(&term.states)?.projector())?;
            }
            rho
        }
    };
    rho.into_density()
}

/// Relative weight of the up-count-m sector in a completely random N-beam
/// chop: C(n, m) / 2^n.
///
/// Computed with the multiplicative binomial recurrence in floating point,
/// pairing each numerator factor with a denominator factor so no factorial
/// is ever formed; exact against the integer reference for n <= 20.
pub fn chopping_weight(n: usize, m: usize) -> Result<f64> {
    if m > n {
        return Err(SimError::MagnetizationOutOfRange { m, n });
    }
    let mut coefficient = 1.0f64;
    for i in 0..m.min(n - m) {
        coefficient = coefficient * (n - i) as f64 / (i + 1) as f64;
    }
    Ok(coefficient * 0.5f64.powi(n as i32))
}

/// Mixes the fixed-magnetization operators over all up-counts with their
/// chopping weights. Equals the random-mixture operator entrywise; the two
/// construction routes are kept independent so tests can compare them.
pub fn mix_fixed_magnetization(basis: &BasisPair, n: usize) -> Result<NOperator> {
    if n == 0 {
        return Err(SimError::EmptyProduct);
    }
    let z_axis = basis.is_z_axis();
    let mut rho = if z_axis {
        NOperator::zeros_diagonal(n)?
    } else {
        NOperator::zeros_dense(n)?
    };
    for m in 0..=n {
        let spec = EnsembleSpec::new(
            Preparation::FixedMagnetization {
                basis: *basis,
                up_count: m,
            },
            n,
        );
        rho.scaled_add(chopping_weight(n, m)?, &density_matrix(&spec)?)?;
    }
    rho.into_density()
}

/// The weighted pure states of the alternating-correlated preparation: one
/// state of weight 1 for even n, the two phase offsets with weight 1/2 each
/// for odd n.
pub fn correlated_pure_states(basis: &BasisPair, n: usize) -> Result<Vec<(f64, NState)>> {
    if n == 0 {
        return Err(SimError::EmptyProduct);
    }
    alternating_configurations(n)
        .into_iter()
        .map(|(weight, config)| {
            let factors: Vec<PureQubit> = config
                .labels()
                .iter()
                .map(|label| *basis.state(*label))
                .collect();
            Ok((weight, kron_states(&factors)?))
        })
        .collect()
}

/// Alternating label patterns with their mixture weights.
fn alternating_configurations(n: usize) -> Vec<(f64, Configuration)> {
    let pattern = |offset: usize| {
        Configuration::new((0..n).map(|k| SpinLabel::from_bit(k + offset)).collect())
            .expect("n >= 1")
    };
    if n.is_multiple_of(2) {
        vec![(1.0, pattern(0))]
    } else {
        vec![(0.5, pattern(0)), (0.5, pattern(1))]
    }
}

/// Diagonal projector onto one computational basis state.
fn basis_projector_diagonal(n: usize, index: usize) -> Result<NOperator> {
    let dim = 1usize << n;
    let mut diag = DVector::from_element(dim, Complex64::new(0.0, 0.0));
    diag[index] = Complex64::new(1.0, 0.0);
    NOperator::from_diagonal(n, diag)
}

/// Equal-weight diagonal mixture over all configurations with exactly
/// `up_count` plus labels.
fn fixed_magnetization_diagonal(n: usize, up_count: usize) -> Result<NOperator> {
    if up_count > n {
        return Err(SimError::MagnetizationOutOfRange { m: up_count, n });
    }
    if n > DIAGONAL_QUBIT_CAP {
        return Err(SimError::DimensionCap {
            kind: "diagonal operator",
            requested: n,
            cap: DIAGONAL_QUBIT_CAP,
        });
    }
    let minus_count = (n - up_count) as u32;
    let weight = 1.0 / binomial_exact(n, up_count) as f64;
    let dim = 1usize << n;
    let mut diag = DVector::from_element(dim, Complex64::new(0.0, 0.0));
    for (index, cell) in diag.iter_mut().enumerate() {
        if index.count_ones() == minus_count {
            *cell = Complex64::new(weight, 0.0);
        }
    }
    NOperator::from_diagonal(n, diag)
}

/// Exact integer binomial coefficient; every intermediate product stays an
/// integer, so the u128 arithmetic never truncates for n within the caps.
pub(crate) fn binomial_exact(n: usize, m: usize) -> u128 {
    let m = m.min(n - m);
    let mut value: u128 = 1;
    for i in 0..m {
        value = value * (n - i) as u128 / (i + 1) as u128;
    }
    value
}
