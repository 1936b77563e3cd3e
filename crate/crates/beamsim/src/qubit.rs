//! Single-particle spin-1/2 primitives: pure states, 2x2 operators,
//! projectors, and measurement bases for arbitrary axes.

use num_complex::Complex64;

use crate::error::{Result, SimError};
use crate::TOL;

/// A normalized single-qubit state vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureQubit {
    amplitudes: [Complex64; 2],
}

impl PureQubit {
    /// Builds a state from its two amplitudes, rejecting non-finite or
    /// non-normalized input.
    pub fn new(a0: Complex64, a1: Complex64) -> Result<Self> {
        for a in [a0, a1] {
            if !a.re.is_finite() || !a.im.is_finite() {
                return Err(SimError::NonFinite {
                    context: "qubit amplitudes",
                });
            }
        }
        let norm_sq = a0.norm_sqr() + a1.norm_sqr();
        let deviation = (norm_sq - 1.0).abs();
        if deviation > TOL {
            return Err(SimError::NotNormalized { deviation });
        }
        Ok(Self {
            amplitudes: [a0, a1],
        })
    }

    /// Spin-up eigenstate of the z axis, (1, 0).
    pub fn up() -> Self {
        Self {
            amplitudes: [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        }
    }

    /// Spin-down eigenstate of the z axis, (0, 1).
    pub fn down() -> Self {
        Self {
            amplitudes: [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        }
    }

    pub fn amplitude(&self, i: usize) -> Complex64 {
        self.amplitudes[i]
    }

    pub fn amplitudes(&self) -> [Complex64; 2] {
        self.amplitudes
    }

    /// Inner product `<self|other>` (antilinear in `self`).
    pub fn overlap(&self, other: &PureQubit) -> Complex64 {
        self.amplitudes[0].conj() * other.amplitudes[0]
            + self.amplitudes[1].conj() * other.amplitudes[1]
    }

    /// Probability of the spin-up outcome in a z-axis measurement.
    pub fn prob_up(&self) -> f64 {
        self.amplitudes[0].norm_sqr()
    }

    /// True when the state is a z eigenstate up to global phase.
    pub fn is_z_aligned(&self) -> bool {
        let p = self.prob_up();
        p < TOL || (1.0 - p).abs() < TOL
    }

    /// Rescales the global phase so the first amplitude of modulus above
    /// tolerance becomes real and non-negative.
    fn canonical_phase(mut self) -> Self {
        let pivot = self
            .amplitudes
            .iter()
            .find(|a| a.norm() > TOL)
            .copied()
            .unwrap_or_else(|| Complex64::new(1.0, 0.0));
        let phase = pivot.conj() / pivot.norm();
        for a in &mut self.amplitudes {
            *a *= phase;
        }
        self
    }
}

/// A 2x2 complex operator on the single-qubit space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Operator2 {
    entries: [[Complex64; 2]; 2],
}

impl Operator2 {
    pub fn new(entries: [[Complex64; 2]; 2]) -> Self {
        Self { entries }
    }

    pub fn from_real(entries: [[f64; 2]; 2]) -> Self {
        Self {
            entries: entries.map(|row| row.map(|x| Complex64::new(x, 0.0))),
        }
    }

    pub fn identity() -> Self {
        Self::from_real([[1.0, 0.0], [0.0, 1.0]])
    }

    pub fn zero() -> Self {
        Self::from_real([[0.0, 0.0], [0.0, 0.0]])
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i][j]
    }

    pub fn trace(&self) -> Complex64 {
        self.entries[0][0] + self.entries[1][1]
    }

    pub fn adjoint(&self) -> Self {
        let e = &self.entries;
        Self::new([
            [e[0][0].conj(), e[1][0].conj()],
            [e[0][1].conj(), e[1][1].conj()],
        ])
    }

    pub fn mul(&self, rhs: &Operator2) -> Self {
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell =
                    self.entries[i][0] * rhs.entries[0][j] + self.entries[i][1] * rhs.entries[1][j];
            }
        }
        Self::new(out)
    }

    pub fn add(&self, rhs: &Operator2) -> Self {
        let mut out = self.entries;
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell += rhs.entries[i][j];
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, factor: f64) -> Self {
        let f = Complex64::new(factor, 0.0);
        Self::new(self.entries.map(|row| row.map(|x| x * f)))
    }

    pub fn apply(&self, state: &PureQubit) -> [Complex64; 2] {
        let a = state.amplitudes();
        [
            self.entries[0][0] * a[0] + self.entries[0][1] * a[1],
            self.entries[1][0] * a[0] + self.entries[1][1] * a[1],
        ]
    }

    /// Structural diagonality: both off-diagonal entries exactly zero.
    pub fn is_diagonal(&self) -> bool {
        let z = Complex64::new(0.0, 0.0);
        self.entries[0][1] == z && self.entries[1][0] == z
    }

    pub fn is_finite(&self) -> bool {
        self.entries
            .iter()
            .flatten()
            .all(|x| x.re.is_finite() && x.im.is_finite())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let e = &self.entries;
        (e[0][0] - e[0][0].conj()).norm() <= tol
            && (e[1][1] - e[1][1].conj()).norm() <= tol
            && (e[0][1] - e[1][0].conj()).norm() <= tol
    }

    pub fn max_abs_diff(&self, rhs: &Operator2) -> f64 {
        let mut max = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                max = max.max((self.entries[i][j] - rhs.entries[i][j]).norm());
            }
        }
        max
    }
}

/// An orthonormal single-qubit measurement basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisPair {
    pub plus: PureQubit,
    pub minus: PureQubit,
}

impl BasisPair {
    /// Validates orthonormality of the two states.
    pub fn new(plus: PureQubit, minus: PureQubit) -> Result<Self> {
        let overlap = plus.overlap(&minus).norm();
        if overlap > TOL {
            return Err(SimError::NotOrthogonal { overlap });
        }
        Ok(Self { plus, minus })
    }

    pub fn state(&self, label: crate::tensor::SpinLabel) -> &PureQubit {
        match label {
            crate::tensor::SpinLabel::Plus => &self.plus,
            crate::tensor::SpinLabel::Minus => &self.minus,
        }
    }

    /// True when both states are z eigenstates (up to phase) in the right
    /// order, so that density operators over this basis are diagonal.
    pub fn is_z_axis(&self) -> bool {
        projector(&self.plus).max_abs_diff(&projector(&PureQubit::up())) <= TOL
            && projector(&self.minus).max_abs_diff(&projector(&PureQubit::down())) <= TOL
    }
}

/// Pauli z operator.
pub fn pauli_z() -> Operator2 {
    Operator2::from_real([[1.0, 0.0], [0.0, -1.0]])
}

/// Pauli x operator.
pub fn pauli_x() -> Operator2 {
    Operator2::from_real([[0.0, 1.0], [1.0, 0.0]])
}

/// Pauli y operator; used internally for axis construction, not exposed as
/// a named observable.
pub(crate) fn pauli_y() -> Operator2 {
    Operator2::new([
        [Complex64::new(0.0, 0.0), Complex64::new(0.0, -1.0)],
        [Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)],
    ])
}

/// The z-axis eigenbasis: plus = (1, 0), minus = (0, 1).
pub fn basis_z() -> BasisPair {
    BasisPair {
        plus: PureQubit::up(),
        minus: PureQubit::down(),
    }
}

/// The x-axis eigenbasis: plus = (1, 1)/sqrt(2), minus = (1, -1)/sqrt(2).
pub fn basis_x() -> BasisPair {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    BasisPair {
        plus: PureQubit {
            amplitudes: [Complex64::new(s, 0.0), Complex64::new(s, 0.0)],
        },
        minus: PureQubit {
            amplitudes: [Complex64::new(s, 0.0), Complex64::new(-s, 0.0)],
        },
    }
}

/// Eigenbasis of the spin component along the axis with the given polar and
/// azimuthal angles. `bloch_basis(0, 0)` is the z basis and
/// `bloch_basis(pi/2, 0)` the x basis, both up to global phase.
///
/// States are returned with the first amplitude of modulus above tolerance
/// real and non-negative; compare projectors, not amplitudes, when testing
/// basis equality.
pub fn bloch_basis(polar: f64, azimuth: f64) -> BasisPair {
    let (c, s) = ((polar / 2.0).cos(), (polar / 2.0).sin());
    let phase = Complex64::new(azimuth.cos(), azimuth.sin());
    let plus = PureQubit {
        amplitudes: [Complex64::new(c, 0.0), phase * s],
    }
    .canonical_phase();
    let minus = PureQubit {
        amplitudes: [Complex64::new(s, 0.0), -phase * c],
    }
    .canonical_phase();
    BasisPair { plus, minus }
}

/// Rank-1 projector `|state><state|`: Hermitian, idempotent, trace one.
pub fn projector(state: &PureQubit) -> Operator2 {
    let a = state.amplitudes();
    let mut entries = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (i, row) in entries.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = a[i] * a[j].conj();
        }
    }
    Operator2::new(entries)
}

/// Single-qubit basis-change matrix with the basis states as columns: it
/// maps the z eigenstates onto the given basis.
pub fn basis_change(basis: &BasisPair) -> Operator2 {
    Operator2::new([
        [basis.plus.amplitude(0), basis.minus.amplitude(0)],
        [basis.plus.amplitude(1), basis.minus.amplitude(1)],
    ])
}

/// Spin operator along the given axis, `cos(polar) sigma_z + sin(polar)
/// (cos(azimuth) sigma_x + sin(azimuth) sigma_y)`.
pub fn axis_operator(polar: f64, azimuth: f64) -> Operator2 {
    let z = pauli_z().scale(polar.cos());
    let x = pauli_x().scale(polar.sin() * azimuth.cos());
    let y = pauli_y().scale(polar.sin() * azimuth.sin());
    z.add(&x).add(&y)
}
