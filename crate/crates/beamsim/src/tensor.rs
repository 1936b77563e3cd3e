//! N-qubit tensor-product states and operators, collective observables,
//! traces, and expectation values.
//!
//! Basis indices follow the binary labeling convention: index
//! `alpha = (alpha_1 alpha_2 ... alpha_n)_2` with `alpha_1` the most
//! significant digit (particle 1 is the leftmost tensor factor), and
//! particle k carrying the spin label `i_k = (-1)^(alpha_k)`.
//!
//! Operators carry a structural storage tag. Diagonal-tagged operators keep
//! exact zeros off the diagonal and support system sizes beyond the dense
//! cap; all operations preserve the tag whenever the result is structurally
//! diagonal.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Result, SimError};
use crate::qubit::{Operator2, PureQubit};
use crate::TOL;

/// Largest particle count for dense 2^n x 2^n operators.
pub const DENSE_QUBIT_CAP: usize = 12;
/// Largest particle count for diagonal-tagged operators.
pub const DIAGONAL_QUBIT_CAP: usize = 24;

/// Spin label of one particle, +1 or -1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpinLabel {
    Plus,
    Minus,
}

impl SpinLabel {
    /// The signed value, +1 or -1.
    pub fn value(self) -> i32 {
        match self {
            SpinLabel::Plus => 1,
            SpinLabel::Minus => -1,
        }
    }

    /// Binary digit of the label: 0 for +1, 1 for -1.
    pub fn bit(self) -> usize {
        match self {
            SpinLabel::Plus => 0,
            SpinLabel::Minus => 1,
        }
    }

    pub fn from_bit(bit: usize) -> Self {
        if bit & 1 == 0 {
            SpinLabel::Plus
        } else {
            SpinLabel::Minus
        }
    }
}

/// One N-beam configuration: a sequence of spin labels, particle 1 first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    labels: Vec<SpinLabel>,
}

impl Configuration {
    pub fn new(labels: Vec<SpinLabel>) -> Result<Self> {
        if labels.is_empty() {
            return Err(SimError::EmptyProduct);
        }
        Ok(Self { labels })
    }

    /// Reconstructs the configuration at the given basis index.
    pub fn from_index(n: usize, index: usize) -> Self {
        let labels = (0..n)
            .map(|k| SpinLabel::from_bit(index >> (n - 1 - k)))
            .collect();
        Self { labels }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[SpinLabel] {
        &self.labels
    }

    /// Basis index of the configuration: particle k contributes its binary
    /// digit at bit position n-k (most significant digit first).
    pub fn index(&self) -> usize {
        self.labels
            .iter()
            .fold(0usize, |acc, label| (acc << 1) | label.bit())
    }

    /// Signed label sum `i_1 + ... + i_n`, the collective spin eigenvalue of
    /// the configuration.
    pub fn label_sum(&self) -> i32 {
        self.labels.iter().map(|l| l.value()).sum()
    }
}

/// A normalized N-particle state vector over 2^n amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct NState {
    n: usize,
    amplitudes: DVector<Complex64>,
}

impl NState {
    pub fn new(n: usize, amplitudes: DVector<Complex64>) -> Result<Self> {
        if amplitudes.len() != 1 << n {
            return Err(SimError::DimensionMismatch {
                left: n,
                right: amplitudes.len().trailing_zeros() as usize,
            });
        }
        if amplitudes
            .iter()
            .any(|a| !a.re.is_finite() || !a.im.is_finite())
        {
            return Err(SimError::NonFinite {
                context: "state amplitudes",
            });
        }
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        let deviation = (norm_sq - 1.0).abs();
        if deviation > TOL {
            return Err(SimError::NotNormalized { deviation });
        }
        Ok(Self { n, amplitudes })
    }

    /// The computational basis state at the given index.
    pub fn basis_state(n: usize, index: usize) -> Self {
        let mut amplitudes = DVector::from_element(1 << n, Complex64::new(0.0, 0.0));
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Self { n, amplitudes }
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    pub fn vector(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    /// Inner product `<self|other>`.
    pub fn inner(&self, other: &NState) -> Result<Complex64> {
        check_same_n(self.n, other.n)?;
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// Rank-1 density operator `|self><self|`.
    pub fn projector(&self) -> NOperator {
        let dim = self.amplitudes.len();
        let mut entries = DMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                entries[(i, j)] = self.amplitudes[i] * self.amplitudes[j].conj();
            }
        }
        NOperator {
            n: self.n,
            storage: OperatorStorage::Dense(entries),
            flags: OperatorFlags {
                hermitian: true,
                projector: true,
                density: true,
            },
        }
    }
}

/// Kronecker product of single-particle states, leftmost factor first.
pub fn kron_states(factors: &[PureQubit]) -> Result<NState> {
    if factors.is_empty() {
        return Err(SimError::EmptyProduct);
    }
    check_cap("dense state", factors.len(), DENSE_QUBIT_CAP)?;
    let mut amplitudes = DVector::from_element(1, Complex64::new(1.0, 0.0));
    for factor in factors {
        let dim = amplitudes.len();
        let mut next = DVector::from_element(dim * 2, Complex64::new(0.0, 0.0));
        for i in 0..dim {
            next[2 * i] = amplitudes[i] * factor.amplitude(0);
            next[2 * i + 1] = amplitudes[i] * factor.amplitude(1);
        }
        amplitudes = next;
    }
    NState::new(factors.len(), amplitudes)
}

/// Structural storage of an N-qubit operator.
#[derive(Debug, Clone, PartialEq)]
pub enum OperatorStorage {
    Dense(DMatrix<Complex64>),
    Diagonal(DVector<Complex64>),
}

/// Structural property flags, set by construction and propagated through
/// operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct OperatorFlags {
    pub hermitian: bool,
    pub projector: bool,
    pub density: bool,
}

/// A 2^n x 2^n complex operator with a structural storage tag.
#[derive(Debug, Clone, PartialEq)]
pub struct NOperator {
    n: usize,
    storage: OperatorStorage,
    flags: OperatorFlags,
}

impl NOperator {
    /// Identity operator, stored diagonally.
    pub fn identity(n: usize) -> Result<Self> {
        check_min_one(n)?;
        check_cap("diagonal operator", n, DIAGONAL_QUBIT_CAP)?;
        Ok(Self {
            n,
            storage: OperatorStorage::Diagonal(DVector::from_element(
                1 << n,
                Complex64::new(1.0, 0.0),
            )),
            flags: OperatorFlags {
                hermitian: true,
                projector: true,
                density: false,
            },
        })
    }

    /// Builds a diagonal operator from its diagonal entries.
    pub fn from_diagonal(n: usize, diag: DVector<Complex64>) -> Result<Self> {
        check_min_one(n)?;
        check_cap("diagonal operator", n, DIAGONAL_QUBIT_CAP)?;
        if diag.len() != 1 << n {
            return Err(SimError::DimensionMismatch {
                left: n,
                right: diag.len().trailing_zeros() as usize,
            });
        }
        if diag.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(SimError::NonFinite {
                context: "diagonal entries",
            });
        }
        let hermitian = diag.iter().all(|a| a.im.abs() <= TOL);
        Ok(Self {
            n,
            storage: OperatorStorage::Diagonal(diag),
            flags: OperatorFlags {
                hermitian,
                projector: false,
                density: false,
            },
        })
    }

    /// Builds a dense operator from a full matrix.
    pub fn from_dense(n: usize, entries: DMatrix<Complex64>) -> Result<Self> {
        check_min_one(n)?;
        check_cap("dense operator", n, DENSE_QUBIT_CAP)?;
        let dim = 1 << n;
        if entries.nrows() != dim || entries.ncols() != dim {
            return Err(SimError::DimensionMismatch {
                left: n,
                right: entries.nrows().trailing_zeros() as usize,
            });
        }
        if entries
            .iter()
            .any(|a| !a.re.is_finite() || !a.im.is_finite())
        {
            return Err(SimError::NonFinite {
                context: "operator entries",
            });
        }
        let hermitian = hermiticity_deviation(&entries) <= TOL;
        Ok(Self {
            n,
            storage: OperatorStorage::Dense(entries),
            flags: OperatorFlags {
                hermitian,
                projector: false,
                density: false,
            },
        })
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn flags(&self) -> OperatorFlags {
        self.flags
    }

    pub fn is_diagonal(&self) -> bool {
        matches!(self.storage, OperatorStorage::Diagonal(_))
    }

    pub fn storage(&self) -> &OperatorStorage {
        &self.storage
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        match &self.storage {
            OperatorStorage::Dense(m) => m[(i, j)],
            OperatorStorage::Diagonal(d) => {
                if i == j {
                    d[i]
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
        }
    }

    pub fn trace(&self) -> Complex64 {
        match &self.storage {
            OperatorStorage::Dense(m) => (0..m.nrows()).map(|i| m[(i, i)]).sum(),
            OperatorStorage::Diagonal(d) => d.iter().sum(),
        }
    }

    /// Re-materializes the operator with dense storage; flags carry over.
    pub fn to_dense(&self) -> Result<Self> {
        check_cap("dense operator", self.n, DENSE_QUBIT_CAP)?;
        match &self.storage {
            OperatorStorage::Dense(_) => Ok(self.clone()),
            OperatorStorage::Diagonal(d) => {
                let dim = d.len();
                let mut m = DMatrix::zeros(dim, dim);
                for i in 0..dim {
                    m[(i, i)] = d[i];
                }
                Ok(Self {
                    n: self.n,
                    storage: OperatorStorage::Dense(m),
                    flags: self.flags,
                })
            }
        }
    }

    pub fn scale(&self, factor: f64) -> Self {
        let f = Complex64::new(factor, 0.0);
        let storage = match &self.storage {
            OperatorStorage::Dense(m) => OperatorStorage::Dense(m * f),
            OperatorStorage::Diagonal(d) => OperatorStorage::Diagonal(d * f),
        };
        Self {
            n: self.n,
            storage,
            flags: OperatorFlags {
                hermitian: self.flags.hermitian,
                projector: false,
                density: false,
            },
        }
    }

    /// Entrywise difference `self - other`; result is dense unless both
    /// operands are diagonal.
    pub fn sub(&self, other: &NOperator) -> Result<Self> {
        check_same_n(self.n, other.n)?;
        let hermitian = self.flags.hermitian && other.flags.hermitian;
        let storage = match (&self.storage, &other.storage) {
            (OperatorStorage::Diagonal(a), OperatorStorage::Diagonal(b)) => {
                OperatorStorage::Diagonal(a - b)
            }
            _ => {
                let a = self.to_dense()?;
                let b = other.to_dense()?;
                match (a.storage, b.storage) {
                    (OperatorStorage::Dense(ma), OperatorStorage::Dense(mb)) => {
                        OperatorStorage::Dense(ma - mb)
                    }
                    _ => unreachable!("to_dense returns dense storage"),
                }
            }
        };
        Ok(Self {
            n: self.n,
            storage,
            flags: OperatorFlags {
                hermitian,
                projector: false,
                density: false,
            },
        })
    }

    /// Accumulates `weight * other` into `self`, preserving storage when both
    /// operands are diagonal. Hermiticity survives real weights.
    pub fn scaled_add(&mut self, weight: f64, other: &NOperator) -> Result<()> {
        check_same_n(self.n, other.n)?;
        let w = Complex64::new(weight, 0.0);
        match (&mut self.storage, &other.storage) {
            (OperatorStorage::Diagonal(a), OperatorStorage::Diagonal(b)) => {
                *a += b * w;
            }
            (OperatorStorage::Dense(a), OperatorStorage::Dense(b)) => {
                *a += b * w;
            }
            (OperatorStorage::Dense(a), OperatorStorage::Diagonal(b)) => {
                for i in 0..b.len() {
                    a[(i, i)] += b[i] * w;
                }
            }
            (OperatorStorage::Diagonal(_), OperatorStorage::Dense(_)) => {
                let mut dense = self.to_dense()?;
                dense.scaled_add(weight, other)?;
                *self = dense;
                return Ok(());
            }
        }
        self.flags = OperatorFlags {
            hermitian: self.flags.hermitian && other.flags.hermitian,
            projector: false,
            density: false,
        };
        Ok(())
    }

    /// Zero operator with dense storage, for mixture accumulation.
    pub fn zeros_dense(n: usize) -> Result<Self> {
        check_min_one(n)?;
        check_cap("dense operator", n, DENSE_QUBIT_CAP)?;
        Ok(Self {
            n,
            storage: OperatorStorage::Dense(DMatrix::zeros(1 << n, 1 << n)),
            flags: OperatorFlags {
                hermitian: true,
                projector: false,
                density: false,
            },
        })
    }

    /// Zero operator with diagonal storage.
    pub fn zeros_diagonal(n: usize) -> Result<Self> {
        check_min_one(n)?;
        check_cap("diagonal operator", n, DIAGONAL_QUBIT_CAP)?;
        Ok(Self {
            n,
            storage: OperatorStorage::Diagonal(DVector::zeros(1 << n)),
            flags: OperatorFlags {
                hermitian: true,
                projector: false,
                density: false,
            },
        })
    }

    /// Largest entrywise absolute difference between two operators.
    pub fn max_abs_diff(&self, other: &NOperator) -> Result<f64> {
        check_same_n(self.n, other.n)?;
        let dim = self.dim();
        let mut max = 0.0f64;
        match (&self.storage, &other.storage) {
            (OperatorStorage::Diagonal(a), OperatorStorage::Diagonal(b)) => {
                for i in 0..dim {
                    max = max.max((a[i] - b[i]).norm());
                }
            }
            _ => {
                for i in 0..dim {
                    for j in 0..dim {
                        max = max.max((self.entry(i, j) - other.entry(i, j)).norm());
                    }
                }
            }
        }
        Ok(max)
    }

    /// The operator squared; diagonal structure and Hermiticity survive.
    pub fn matrix_power2(&self) -> Self {
        let storage = match &self.storage {
            OperatorStorage::Diagonal(d) => OperatorStorage::Diagonal(d.map(|x| x * x)),
            OperatorStorage::Dense(m) => OperatorStorage::Dense(m * m),
        };
        Self {
            n: self.n,
            storage,
            flags: OperatorFlags {
                hermitian: self.flags.hermitian,
                projector: self.flags.projector,
                density: false,
            },
        }
    }

    /// Applies the operator to a raw amplitude vector.
    pub fn apply_vector(&self, v: &DVector<Complex64>) -> Result<DVector<Complex64>> {
        if v.len() != self.dim() {
            return Err(SimError::DimensionMismatch {
                left: self.n,
                right: v.len().trailing_zeros() as usize,
            });
        }
        Ok(match &self.storage {
            OperatorStorage::Dense(m) => m * v,
            OperatorStorage::Diagonal(d) => {
                DVector::from_iterator(v.len(), v.iter().zip(d.iter()).map(|(x, s)| x * s))
            }
        })
    }

    /// Conjugates by the n-fold Kronecker power of a single-qubit matrix:
    /// `U rho U^dag` with `U = u (x) ... (x) u`, computed one tensor leg at a
    /// time. The result is dense.
    pub fn conjugate_sites(&self, u: &Operator2) -> Result<Self> {
        check_cap("dense operator", self.n, DENSE_QUBIT_CAP)?;
        let dense = self.to_dense()?;
        let mut m = match dense.storage {
            OperatorStorage::Dense(m) => m,
            _ => unreachable!("to_dense returns dense storage"),
        };
        let dim = 1 << self.n;
        let u00 = u.entry(0, 0);
        let u01 = u.entry(0, 1);
        let u10 = u.entry(1, 0);
        let u11 = u.entry(1, 1);
        for site in 0..self.n {
            let mask = 1usize << (self.n - 1 - site);
            // rows: m <- (u at site) m
            for i in 0..dim {
                if i & mask != 0 {
                    continue;
                }
                let ip = i | mask;
                for j in 0..dim {
                    let a = m[(i, j)];
                    let b = m[(ip, j)];
                    m[(i, j)] = u00 * a + u01 * b;
                    m[(ip, j)] = u10 * a + u11 * b;
                }
            }
            // columns: m <- m (u at site)^dag
            for j in 0..dim {
                if j & mask != 0 {
                    continue;
                }
                let jp = j | mask;
                for i in 0..dim {
                    let a = m[(i, j)];
                    let b = m[(i, jp)];
                    m[(i, j)] = a * u00.conj() + b * u01.conj();
                    m[(i, jp)] = a * u10.conj() + b * u11.conj();
                }
            }
        }
        Ok(Self {
            n: self.n,
            storage: OperatorStorage::Dense(m),
            flags: OperatorFlags {
                hermitian: self.flags.hermitian,
                projector: self.flags.projector,
                density: self.flags.density,
            },
        })
    }

    /// Validates the density-operator invariants that are cheap at any size
    /// (Hermiticity flag, unit trace, non-negative diagonal) and marks the
    /// operator as a density operator. Full positive-semidefiniteness is
    /// checked by eigenvalues in tests at small n; above that, validity rests
    /// on construction by convex combination of projectors.
    pub fn into_density(mut self) -> Result<Self> {
        if !self.flags.hermitian {
            return Err(SimError::FlagViolation {
                expected: "hermitian",
            });
        }
        let trace = self.trace();
        if (trace.re - 1.0).abs() > 1e-10 || trace.im.abs() > 1e-10 {
            return Err(SimError::InvalidWeights {
                reason: format!("density trace {} differs from 1", trace.re),
            });
        }
        let dim = self.dim();
        for i in 0..dim {
            if self.entry(i, i).re < -1e-10 {
                return Err(SimError::FlagViolation {
                    expected: "positive semidefinite",
                });
            }
        }
        self.flags.density = true;
        Ok(self)
    }

    /// Eigenvalues of a Hermitian operator, ascending. Rejects operands whose
    /// Hermiticity deviation exceeds tolerance, which signals a construction
    /// bug rather than a numerical edge case.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>> {
        match &self.storage {
            OperatorStorage::Diagonal(d) => {
                let deviation = d.iter().map(|x| x.im.abs()).fold(0.0f64, f64::max);
                if deviation > TOL {
                    return Err(SimError::NotHermitian { deviation });
                }
                let mut eigs: Vec<f64> = d.iter().map(|x| x.re).collect();
                eigs.sort_by(|a, b| a.total_cmp(b));
                Ok(eigs)
            }
            OperatorStorage::Dense(m) => {
                let deviation = hermiticity_deviation(m);
                if deviation > TOL {
                    return Err(SimError::NotHermitian { deviation });
                }
                let dim = m.nrows();
                let fm =
                    faer::Mat::from_fn(dim, dim, |i, j| faer::c64::new(m[(i, j)].re, m[(i, j)].im));
                let mut eigs: Vec<f64> = fm
                    .self_adjoint_eigenvalues(faer::Side::Lower)
                    .map_err(|_| SimError::EigenFailure { dim })?;
                eigs.sort_by(|a, b| a.total_cmp(b));
                Ok(eigs)
            }
        }
    }

    /// Smallest eigenvalue of a Hermitian operator.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self.hermitian_eigenvalues()?[0])
    }

    /// Purity `Tr(rho^2)`; equals one exactly for pure states.
    pub fn purity(&self) -> f64 {
        trace_product(self, self).re
    }
}

/// Kronecker product of 2x2 operators, leftmost factor first. The diagonal
/// tag is set when every factor is structurally diagonal; the Hermitian flag
/// propagates from the factors.
pub fn kron_ops(factors: &[Operator2]) -> Result<NOperator> {
    if factors.is_empty() {
        return Err(SimError::EmptyProduct);
    }
    if factors.iter().any(|f| !f.is_finite()) {
        return Err(SimError::NonFinite {
            context: "tensor factors",
        });
    }
    let n = factors.len();
    let all_diagonal = factors.iter().all(|f| f.is_diagonal());
    let hermitian = factors.iter().all(|f| f.is_hermitian(TOL));
    if all_diagonal {
        check_cap("diagonal operator", n, DIAGONAL_QUBIT_CAP)?;
        let mut diag = DVector::from_element(1, Complex64::new(1.0, 0.0));
        for factor in factors {
            let dim = diag.len();
            let mut next = DVector::from_element(dim * 2, Complex64::new(0.0, 0.0));
            for i in 0..dim {
                next[2 * i] = diag[i] * factor.entry(0, 0);
                next[2 * i + 1] = diag[i] * factor.entry(1, 1);
            }
            diag = next;
        }
        Ok(NOperator {
            n,
            storage: OperatorStorage::Diagonal(diag),
            flags: OperatorFlags {
                hermitian,
                projector: false,
                density: false,
            },
        })
    } else {
        check_cap("dense operator", n, DENSE_QUBIT_CAP)?;
        let mut m = DMatrix::from_element(1, 1, Complex64::new(1.0, 0.0));
        for factor in factors {
            let dim = m.nrows();
            let mut next = DMatrix::zeros(dim * 2, dim * 2);
            for i in 0..dim {
                for j in 0..dim {
                    let base = m[(i, j)];
                    for bi in 0..2 {
                        for bj in 0..2 {
                            next[(2 * i + bi, 2 * j + bj)] = base * factor.entry(bi, bj);
                        }
                    }
                }
            }
            m = next;
        }
        Ok(NOperator {
            n,
            storage: OperatorStorage::Dense(m),
            flags: OperatorFlags {
                hermitian,
                projector: false,
                density: false,
            },
        })
    }
}

/// Sum over particles of the single-site operator acting at one site and the
/// identity elsewhere. Diagonal and Hermitian structure propagate from the
/// single-site input.
pub fn collective_observable(single: &Operator2, n: usize) -> Result<NOperator> {
    check_min_one(n)?;
    if !single.is_finite() {
        return Err(SimError::NonFinite {
            context: "single-site operator",
        });
    }
    let hermitian = single.is_hermitian(TOL);
    if single.is_diagonal() {
        check_cap("diagonal operator", n, DIAGONAL_QUBIT_CAP)?;
        let s0 = single.entry(0, 0);
        let s1 = single.entry(1, 1);
        let dim = 1usize << n;
        let mut diag = DVector::from_element(dim, Complex64::new(0.0, 0.0));
        for (index, cell) in diag.iter_mut().enumerate() {
            let ones = index.count_ones() as usize;
            *cell = s0 * (n - ones) as f64 + s1 * ones as f64;
        }
        Ok(NOperator {
            n,
            storage: OperatorStorage::Diagonal(diag),
            flags: OperatorFlags {
                hermitian,
                projector: false,
                density: false,
            },
        })
    } else {
        check_cap("dense operator", n, DENSE_QUBIT_CAP)?;
        let dim = 1usize << n;
        let mut m = DMatrix::zeros(dim, dim);
        for site in 0..n {
            let mask = 1usize << (n - 1 - site);
            for i in 0..dim {
                let bi = usize::from(i & mask != 0);
                for bj in 0..2 {
                    let j = if bj == 0 { i & !mask } else { i | mask };
                    m[(i, j)] += single.entry(bi, bj);
                }
            }
        }
        Ok(NOperator {
            n,
            storage: OperatorStorage::Dense(m),
            flags: OperatorFlags {
                hermitian,
                projector: false,
                density: false,
            },
        })
    }
}

/// Trace of the product `Tr(a b)`, exploiting diagonal structure.
pub fn trace_product(a: &NOperator, b: &NOperator) -> Complex64 {
    let dim = a.dim();
    match (&a.storage, &b.storage) {
        (OperatorStorage::Diagonal(da), OperatorStorage::Diagonal(db)) => {
            (0..dim).map(|i| da[i] * db[i]).sum()
        }
        (OperatorStorage::Diagonal(da), OperatorStorage::Dense(mb)) => {
            (0..dim).map(|i| da[i] * mb[(i, i)]).sum()
        }
        (OperatorStorage::Dense(ma), OperatorStorage::Diagonal(db)) => {
            (0..dim).map(|i| ma[(i, i)] * db[i]).sum()
        }
        (OperatorStorage::Dense(ma), OperatorStorage::Dense(mb)) => {
            let mut sum = Complex64::new(0.0, 0.0);
            for i in 0..dim {
                for j in 0..dim {
                    sum += ma[(i, j)] * mb[(j, i)];
                }
            }
            sum
        }
    }
}

/// Expectation value `Tr(rho A)` of a Hermitian observable in a state.
///
/// The imaginary part of the trace is asserted to vanish within 1e-10; a
/// violation indicates corrupted operands, not a recoverable condition.
pub fn expectation(rho: &NOperator, obs: &NOperator) -> Result<f64> {
    check_same_n(rho.n, obs.n)?;
    if !rho.flags.density {
        return Err(SimError::FlagViolation {
            expected: "density",
        });
    }
    if !obs.flags.hermitian {
        return Err(SimError::FlagViolation {
            expected: "hermitian",
        });
    }
    let value = trace_product(rho, obs);
    assert!(
        value.im.abs() < 1e-10,
        "expectation of a Hermitian observable came out complex: {value}"
    );
    Ok(value.re)
}

fn check_same_n(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(SimError::DimensionMismatch { left, right });
    }
    Ok(())
}

fn check_cap(kind: &'static str, requested: usize, cap: usize) -> Result<()> {
    if requested > cap {
        return Err(SimError::DimensionCap {
            kind,
            requested,
            cap,
        });
    }
    Ok(())
}

fn check_min_one(n: usize) -> Result<()> {
    if n == 0 {
        return Err(SimError::EmptyProduct);
    }
    Ok(())
}

fn hermiticity_deviation(m: &DMatrix<Complex64>) -> f64 {
    let mut max = 0.0f64;
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            max = max.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    max
}
