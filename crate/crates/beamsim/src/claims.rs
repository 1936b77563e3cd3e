//! One-call reproduction of every headline quantitative result as a table of
//! comparison rows: the regression backbone behind the `reproduce` command.
//!
//! Reference values are evaluated from their closed forms (0, 1, sqrt(N)) at
//! run time rather than stored as decimal literals, so transcription
//! rounding can never masquerade as a numerical discrepancy.

use crate::ensembles::{density_matrix, EnsembleSpec, Preparation};
use crate::error::Result;
use crate::qubit::{basis_x, basis_z, pauli_z};
use crate::statistics::{moments, trace_distance};
use crate::tensor::{collective_observable, NOperator, DENSE_QUBIT_CAP};

/// Every computed row must sit within this distance of its reference value.
pub const CLAIM_TOLERANCE: f64 = 1e-10;

/// One quantitative claim: the reference value against the value this
/// library computes.
#[derive(Debug, Clone, PartialEq)]
pub struct ClaimRow {
    pub claim_id: String,
    pub n: usize,
    pub method: String,
    pub quantity: String,
    pub paper_value: f64,
    /// Closed form of the reference value, e.g. "sqrt(6)".
    pub paper_form: String,
    pub computed_value: f64,
    pub abs_error: f64,
    pub source: String,
}

/// A reference value together with its closed form.
struct Reference {
    value: f64,
    form: String,
}

impl Reference {
    fn sqrt_of(n: usize) -> Self {
        Self {
            value: (n as f64).sqrt(),
            form: sqrt_form(n),
        }
    }

    fn constant(value: f64, form: &str) -> Self {
        Self {
            value,
            form: form.to_string(),
        }
    }
}

impl ClaimRow {
    fn new(
        claim_id: &str,
        n: usize,
        method: &str,
        quantity: &str,
        reference: Reference,
        computed_value: f64,
        source: &str,
    ) -> Self {
        Self {
            claim_id: claim_id.to_string(),
            n,
            method: method.to_string(),
            quantity: quantity.to_string(),
            paper_value: reference.value,
            paper_form: reference.form,
            computed_value,
            abs_error: (reference.value - computed_value).abs(),
            source: source.to_string(),
        }
    }
}

/// Reproduces all quantitative claims for beam lengths up to `max_n` and
/// returns the comparison rows, ordered by (claim id, n, quantity, method).
pub fn reproduce_all(max_n: usize) -> Result<Vec<ClaimRow>> {
    if max_n > DENSE_QUBIT_CAP {
        return Err(crate::error::SimError::DimensionCap {
            kind: "dense operator",
            requested: max_n,
            cap: DENSE_QUBIT_CAP,
        });
    }
    let mut rows = Vec::with_capacity(expected_row_count(max_n));
    let bases = [("I", basis_z()), ("II", basis_x())];

    for n in 1..=max_n {
        let sigma = collective_observable(&pauli_z(), n)?;

        // completely random mixtures disperse as sqrt(N) in both methods
        for (method, basis) in bases {
            let rho = density_matrix(&EnsembleSpec::new(Preparation::RandomMixture { basis }, n))?;
            rows.push(ClaimRow::new(
                "random-dispersion",
                n,
                method,
                "sigma",
                Reference::sqrt_of(n),
                moments(&rho, &sigma)?.dispersion,
                "collective-spin dispersion of the completely random mixture",
            ));
        }

        // alternating correlated beams: method I pins the collective spin
        // to 0 (even length) or +-1 (odd length); method II keeps sqrt(N)
        for (method, basis) in bases {
            let rho = density_matrix(&EnsembleSpec::new(
                Preparation::AlternatingCorrelated { basis },
                n,
            ))?;
            let reference = match (method, n.is_multiple_of(2)) {
                ("I", true) => Reference::constant(0.0, "0"),
                ("I", false) => Reference::constant(1.0, "1"),
                _ => Reference::sqrt_of(n),
            };
            rows.push(ClaimRow::new(
                "correlated-dispersion",
                n,
                method,
                "sigma",
                reference,
                moments(&rho, &sigma)?.dispersion,
                "collective-spin dispersion of the alternating correlated beam",
            ));
        }

        // zero-total-spin beams: fixed magnetization at half filling
        if n.is_multiple_of(2) {
            for (method, basis) in bases {
                let rho = density_matrix(&EnsembleSpec::new(
                    Preparation::FixedMagnetization {
                        basis,
                        up_count: n / 2,
                    },
                    n,
                ))?;
                let reference = if method == "I" {
                    Reference::constant(0.0, "0")
                } else {
                    Reference::sqrt_of(n)
                };
                rows.push(ClaimRow::new(
                    "fixedm-dispersion",
                    n,
                    method,
                    "sigma",
                    reference,
                    moments(&rho, &sigma)?.dispersion,
                    "collective-spin dispersion of the zero-total-spin beam ensemble",
                ));
            }
        }

        // the two random-mixture operators coincide, so no observable can
        // separate them
        let rho_z = density_matrix(&EnsembleSpec::new(
            Preparation::RandomMixture { basis: basis_z() },
            n,
        ))?;
        let rho_x = density_matrix(&EnsembleSpec::new(
            Preparation::RandomMixture { basis: basis_x() },
            n,
        ))?;
        rows.push(ClaimRow::new(
            "random-equality",
            n,
            "I-II",
            "trace_distance",
            Reference::constant(0.0, "0"),
            trace_distance(&rho_z, &rho_x)?,
            "operator equality of the two random-mixture preparations",
        ));
    }

    if max_n >= 3 {
        rows.extend(three_particle_spectra()?);
    }

    rows.sort_by(|a, b| {
        (&a.claim_id, a.n, &a.quantity, &a.method).cmp(&(&b.claim_id, b.n, &b.quantity, &b.method))
    });
    Ok(rows)
}

/// Diagonal of the three-particle correlated density and the collective
/// spin spectra, entry by entry.
fn three_particle_spectra() -> Result<Vec<ClaimRow>> {
    let mut rows = Vec::with_capacity(24);
    let rho = density_matrix(&EnsembleSpec::new(
        Preparation::AlternatingCorrelated { basis: basis_z() },
        3,
    ))?;
    let rho_reference = [0.0, 0.0, 0.5, 0.0, 0.0, 0.5, 0.0, 0.0];
    push_diagonal_rows(
        &mut rows,
        "correlated-rho3-diagonal",
        "I",
        "rho",
        &rho,
        &rho_reference,
        "diagonal of the three-particle alternating beam density",
    );

    let sigma = collective_observable(&pauli_z(), 3)?;
    let sigma_reference = [3.0, 1.0, 1.0, -1.0, 1.0, -1.0, -1.0, -3.0];
    push_diagonal_rows(
        &mut rows,
        "sigma-z3-spectrum",
        "-",
        "Sigma_z",
        &sigma,
        &sigma_reference,
        "collective spin spectrum at three particles",
    );

    let squared = sigma.matrix_power2();
    let squared_reference = [9.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 9.0];
    push_diagonal_rows(
        &mut rows,
        "sigma-z3-squared-spectrum",
        "-",
        "Sigma_z^2",
        &squared,
        &squared_reference,
        "squared collective spin spectrum at three particles",
    );
    Ok(rows)
}

fn push_diagonal_rows(
    rows: &mut Vec<ClaimRow>,
    claim_id: &str,
    method: &str,
    quantity: &str,
    operator: &NOperator,
    reference: &[f64],
    source: &str,
) {
    for (k, want) in reference.iter().enumerate() {
        rows.push(ClaimRow::new(
            claim_id,
            3,
            method,
            &format!("{quantity}[{k}]"),
            Reference {
                value: *want,
                form: decimal_form(*want),
            },
            operator.entry(k, k).re,
            source,
        ));
    }
}

/// Number of rows `reproduce_all` emits for a given `max_n`; a regression
/// guard against silently losing claim coverage.
pub fn expected_row_count(max_n: usize) -> usize {
    let per_n = 2 + 2 + 1; // random (I, II) + correlated (I, II) + equality
    let even = max_n / 2; // fixed magnetization, both methods
    let spectra = if max_n >= 3 { 24 } else { 0 };
    per_n * max_n + 2 * even + spectra
}

fn sqrt_form(n: usize) -> String {
    let root = (n as f64).sqrt();
    if root.fract() == 0.0 {
        format!("{root:.0}")
    } else {
        format!("sqrt({n})")
    }
}

fn decimal_form(value: f64) -> String {
    if value == 0.5 {
        "1/2".to_string()
    } else {
        format!("{value:.0}")
    }
}
