//! Independent Monte Carlo oracle: physically simulates preparing beams and
//! measuring the collective z spin on each, so empirical statistics can be
//! checked against the exact operator results.
//!
//! Reproducibility contract: the generator is ChaCha8, and beam i of a run
//! with seed s draws from the stream `ChaCha8Rng::seed_from_u64(s)` with
//! `set_stream(i)`. Sub-streams are fixed per beam index, so a report is
//! independent of how beams are distributed over workers.

use rand::distributions::WeightedIndex;
use rand::prelude::{Distribution, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ensembles::Preparation;
use crate::error::{Result, SimError};
use crate::qubit::PureQubit;
use crate::tensor::{Configuration, SpinLabel};

/// Largest particle count the sampler accepts.
pub const SAMPLER_QUBIT_CAP: usize = 24;

/// One sampled beam: the prepared configuration and the measured collective
/// spin value.
///
/// For basis-driven preparations the configuration holds the prepared labels
/// in the preparation's own basis; for explicit mixtures it holds the
/// measured z outcomes, the only label sequence such a term defines.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamSample {
    pub configuration: Configuration,
    pub sigma_z_value: f64,
}

/// Sample statistics over many beams.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmpiricalReport {
    pub beams: usize,
    pub mean: f64,
    pub dispersion: f64,
    pub standard_error_mean: f64,
    pub standard_error_dispersion: f64,
}

/// Draws one beam from the preparation and measures the collective z spin.
///
/// z-basis beams are collective-spin eigenstates, so their label sum is
/// returned directly; any other product state is measured qubit by qubit
/// with Born probabilities, which factorize because every prepared beam is
/// a product state.
pub fn sample_beam(prep: &Preparation, n: usize, rng: &mut impl Rng) -> Result<BeamSample> {
    if n == 0 {
        return Err(SimError::EmptyProduct);
    }
    if n > SAMPLER_QUBIT_CAP {
        return Err(SimError::DimensionCap {
            kind: "sampler",
            requested: n,
            cap: SAMPLER_QUBIT_CAP,
        });
    }
    match prep {
        Preparation::RandomMixture { basis } => {
            let labels: Vec<SpinLabel> = (0..n)
                .map(|_| {
                    if rng.gen_bool(0.5) {
                        SpinLabel::Plus
                    } else {
                        SpinLabel::Minus
                    }
                })
                .collect();
            measure_basis_beam(basis, labels, rng)
        }
        Preparation::FixedMagnetization { basis, up_count } => {
            let m = *up_count;
            if m > n {
                return Err(SimError::MagnetizationOutOfRange { m, n });
            }
            let mut labels = vec![SpinLabel::Plus; m];
            labels.extend(std::iter::repeat_n(SpinLabel::Minus, n - m));
            labels.shuffle(rng);
            measure_basis_beam(basis, labels, rng)
        }
        Preparation::AlternatingCorrelated { basis } => {
            let offset = if n.is_multiple_of(2) || rng.gen_bool(0.5) { 0 } else { 1 };
            let labels: Vec<SpinLabel> = (0..n).map(|k| SpinLabel::from_bit(k + offset)).collect();
            measure_basis_beam(basis, labels, rng)
        }
        Preparation::ExplicitMixture { terms } => {
            if terms[0].states.len() != n {
                return Err(SimError::TermLengthMismatch {
                    index: 0,
                    got: terms[0].states.len(),
                    expected: n,
                });
            }
            let weights = WeightedIndex::new(terms.iter().map(|t| t.weight)).map_err(|e| {
                SimError::InvalidWeights {
                    reason: e.to_string(),
                }
            })?;
            let term = &terms[weights.sample(rng)];
            let outcomes: Vec<SpinLabel> = term.states.iter().map(|s| measure_z(s, rng)).collect();
            let value = outcomes.iter().map(|l| f64::from(l.value())).sum();
            Ok(BeamSample {
                configuration: Configuration::new(outcomes)?,
                sigma_z_value: value,
            })
        }
    }
}

fn measure_basis_beam(
    basis: &crate::qubit::BasisPair,
    labels: Vec<SpinLabel>,
    rng: &mut impl Rng,
) -> Result<BeamSample> {
    let value = if basis.is_z_axis() {
        f64::from(labels.iter().map(|l| l.value()).sum::<i32>())
    } else {
        labels
            .iter()
            .map(|label| f64::from(measure_z(basis.state(*label), rng).value()))
            .sum()
    };
    Ok(BeamSample {
        configuration: Configuration::new(labels)?,
        sigma_z_value: value,
    })
}

/// Born-rule z measurement of one product factor.
fn measure_z(state: &PureQubit, rng: &mut impl Rng) -> SpinLabel {
    if rng.gen_bool(state.prob_up().clamp(0.0, 1.0)) {
        SpinLabel::Plus
    } else {
        SpinLabel::Minus
    }
}

/// Samples `beams` independent beams and reports the sample mean and sample
/// standard deviation of the measured collective spin. Deterministic for a
/// fixed seed.
pub fn empirical_moments(
    prep: &Preparation,
    n: usize,
    beams: usize,
    seed: u64,
) -> Result<EmpiricalReport> {
    if beams < 2 {
        return Err(SimError::NotEnoughBeams { beams });
    }
    let mut values = Vec::with_capacity(beams);
    for beam_index in 0..beams {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(beam_index as u64);
        values.push(sample_beam(prep, n, &mut rng)?.sigma_z_value);
    }
    let m = beams as f64;
    let mean = values.iter().sum::<f64>() / m;
    let variance = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (m - 1.0);
    let dispersion = variance.sqrt();
    Ok(EmpiricalReport {
        beams,
        mean,
        dispersion,
        standard_error_mean: dispersion / m.sqrt(),
        // normal-theory approximation, adequate for acceptance bands
        standard_error_dispersion: dispersion / (2.0 * (m - 1.0)).sqrt(),
    })
}
