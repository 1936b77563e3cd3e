//! Antisymmetrization of time-ordered product states.
//!
//! Beams of spin-1/2 particles are fermion systems, so their product states
//! over spin and time-slot degrees of freedom must be antisymmetrized in the
//! particle names. The map from ordered products to Slater states preserves
//! inner products, which is why counting arguments over ordered product
//! bases survive antisymmetrization untouched.
//!
//! Time slots are an orthonormal discrete family (label 0 is the latest);
//! no spatial wave-packet profile is represented beyond the Kronecker-delta
//! overlap of distinct slots.

use itertools::Itertools;
use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Result, SimError};
use crate::qubit::PureQubit;
use crate::TOL;

/// Largest particle count for explicit amplitude expansion; inner products
/// go through Gram determinants at every size.
pub const EXPANSION_PARTICLE_CAP: usize = 6;

/// One particle's state: a spin and an orthonormal time-slot label.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleParticleState {
    pub spin: PureQubit,
    pub slot: usize,
}

impl SingleParticleState {
    pub fn new(spin: PureQubit, slot: usize) -> Self {
        Self { spin, slot }
    }

    /// Overlap of spin (x) slot states: the spin overlap gated by a
    /// Kronecker delta in the slot labels.
    fn overlap(&self, other: &SingleParticleState) -> Complex64 {
        if self.slot == other.slot {
            self.spin.overlap(&other.spin)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }
}

/// An antisymmetrized n-particle state, stored implicitly as the ordered
/// single-particle sequence with the identity permutation carrying sign +1
/// and the normalization factor 1/sqrt(n!).
#[derive(Debug, Clone, PartialEq)]
pub struct SlaterState {
    particles: Vec<SingleParticleState>,
    normalization: f64,
}

impl SlaterState {
    pub fn particles(&self) -> &[SingleParticleState] {
        &self.particles
    }

    pub fn len(&self) -> usize {
        self.particles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.particles.is_empty()
    }

    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    /// Expands the state into the full amplitude vector over the
    /// (2 * slot_count)^n product space. Single-particle basis index is
    /// `spin_bit * slot_count + slot`; particle 1 is the most significant
    /// position.
    pub fn expand(&self, slot_count: usize) -> Result<Vec<Complex64>> {
        let n = self.particles.len();
        if n > EXPANSION_PARTICLE_CAP {
            return Err(SimError::DimensionCap {
                kind: "fermion expansion",
                requested: n,
                cap: EXPANSION_PARTICLE_CAP,
            });
        }
        for p in &self.particles {
            if p.slot >= slot_count {
                return Err(SimError::SlotOutOfRange {
                    slot: p.slot,
                    slot_count,
                });
            }
        }
        let local_dim = 2 * slot_count;
        let dim = local_dim.pow(n as u32);
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        for perm in (0..n).permutations(n) {
            let sign = permutation_sign(&perm);
            let factor = Complex64::new(sign * self.normalization, 0.0);
            // each permuted product touches 2^n basis states, one per
            // choice of spin component
            for spin_bits in 0..1usize << n {
                let mut index = 0usize;
                let mut amplitude = factor;
                for (position, source) in perm.iter().enumerate() {
                    let particle = &self.particles[*source];
                    let bit = (spin_bits >> (n - 1 - position)) & 1;
                    amplitude *= particle.spin.amplitude(bit);
                    index = index * local_dim + (bit * slot_count + particle.slot);
                }
                amplitudes[index] += amplitude;
            }
        }
        Ok(amplitudes)
    }
}

/// Antisymmetrizes an ordered sequence of single-particle states into a
/// Slater state with 1/sqrt(n!) normalization.
///
/// A sequence whose states are linearly dependent (for example a repeated
/// spin in a repeated slot) antisymmetrizes to the zero vector and is
/// rejected as a null state, mirroring Pauli exclusion.
pub fn antisymmetrize(ordered: &[SingleParticleState]) -> Result<SlaterState> {
    if ordered.is_empty() {
        return Err(SimError::EmptyProduct);
    }
    let n = ordered.len();
    let gram = DMatrix::from_fn(n, n, |i, j| ordered[i].overlap(&ordered[j]));
    if gram.determinant().norm() < TOL {
        return Err(SimError::NullState);
    }
    let normalization = 1.0 / factorial(n).sqrt();
    Ok(SlaterState {
        particles: ordered.to_vec(),
        normalization,
    })
}

/// Inner product of two Slater states: the determinant of the mutual
/// overlap matrix of their single-particle constituents.
pub fn slater_inner(a: &SlaterState, b: &SlaterState) -> Result<Complex64> {
    let n = a.particles.len();
    if n != b.particles.len() {
        return Err(SimError::DimensionMismatch {
            left: n,
            right: b.particles.len(),
        });
    }
    let overlaps = DMatrix::from_fn(n, n, |i, j| a.particles[i].overlap(&b.particles[j]));
    Ok(overlaps.determinant())
}

/// Inner product of two ordered (not antisymmetrized) product states: the
/// plain factorwise product of overlaps.
pub fn ordered_inner(a: &[SingleParticleState], b: &[SingleParticleState]) -> Result<Complex64> {
    if a.len() != b.len() {
        return Err(SimError::DimensionMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(a.iter().zip(b.iter()).map(|(x, y)| x.overlap(y)).product())
}

fn permutation_sign(perm: &[usize]) -> f64 {
    let mut inversions = 0usize;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inversions += 1;
            }
        }
    }
    if inversions.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}
