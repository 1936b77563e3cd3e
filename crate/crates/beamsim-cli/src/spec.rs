//! Textual preparation grammar:
//!
//! ```text
//! random:<axis> | fixedm:<axis>:<m> | alternating:<axis> | explicit:@<file>
//! <axis> = z | x | bloch(<polar>,<azimuth>)
//! ```
//!
//! Parsed specs retain their surface form, so every spec the CLI can print
//! re-parses to an equal value.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use beamsim::ensembles::{MixtureTerm, Preparation};
use beamsim::qubit::{basis_x, basis_z, bloch_basis, BasisPair, PureQubit};
use beamsim::Complex64;
use serde::{Deserialize, Serialize};

/// A measurement axis in surface form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AxisSpec {
    Z,
    X,
    Bloch { polar: f64, azimuth: f64 },
}

impl AxisSpec {
    pub fn basis(&self) -> BasisPair {
        match self {
            AxisSpec::Z => basis_z(),
            AxisSpec::X => basis_x(),
            AxisSpec::Bloch { polar, azimuth } => bloch_basis(*polar, *azimuth),
        }
    }
}

impl fmt::Display for AxisSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxisSpec::Z => write!(f, "z"),
            AxisSpec::X => write!(f, "x"),
            // {:?} prints the shortest digits that round-trip the float
            AxisSpec::Bloch { polar, azimuth } => write!(f, "bloch({polar:?},{azimuth:?})"),
        }
    }
}

/// A preparation description in surface form.
#[derive(Debug, Clone, PartialEq)]
pub enum PreparationSpec {
    Random { axis: AxisSpec },
    FixedMagnetization { axis: AxisSpec, up_count: usize },
    Alternating { axis: AxisSpec },
    Explicit { path: PathBuf },
}

impl fmt::Display for PreparationSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PreparationSpec::Random { axis } => write!(f, "random:{axis}"),
            PreparationSpec::FixedMagnetization { axis, up_count } => {
                write!(f, "fixedm:{axis}:{up_count}")
            }
            PreparationSpec::Alternating { axis } => write!(f, "alternating:{axis}"),
            PreparationSpec::Explicit { path } => write!(f, "explicit:@{}", path.display()),
        }
    }
}

/// Parse failure with the byte offset where the problem starts.
#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "syntax error at position {}: {}",
            self.position, self.message
        )
    }
}

impl std::error::Error for ParseError {}

impl FromStr for PreparationSpec {
    type Err = ParseError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        parse_preparation(text)
    }
}

/// Parses the preparation grammar, reporting the position of the first
/// offending character on failure.
pub fn parse_preparation(text: &str) -> Result<PreparationSpec, ParseError> {
    let (head, rest) = match text.find(':') {
        Some(colon) => (&text[..colon], &text[colon + 1..]),
        None => {
            return Err(ParseError {
                position: text.len(),
                message: "expected ':' after the preparation kind".into(),
            })
        }
    };
    let body_start = head.len() + 1;
    match head {
        "random" => Ok(PreparationSpec::Random { axis: parse_axis(rest, body_start)? }),
        "alternating" => Ok(PreparationSpec::Alternating { axis: parse_axis(rest, body_start)? }),
        "fixedm" => {
            let split = rest.rfind(':').ok_or(ParseError {
                position: text.len(),
                message: "expected ':<m>' after the axis".into(),
            })?;
            let axis = parse_axis(&rest[..split], body_start)?;
            let m_text = &rest[split + 1..];
            let up_count = m_text.parse::<usize>().map_err(|_| ParseError {
                position: body_start + split + 1,
                message: format!("expected a non-negative up-count, got '{m_text}'"),
            })?;
            Ok(PreparationSpec::FixedMagnetization { axis, up_count })
        }
        "explicit" => match rest.strip_prefix('@') {
            Some(path) if !path.is_empty() => {
                Ok(PreparationSpec::Explicit { path: PathBuf::from(path) })
            }
            _ => Err(ParseError {
                position: body_start,
                message: "expected '@<file>' after 'explicit:'".into(),
            }),
        },
        other => Err(ParseError {
            position: 0,
            message: format!(
                "unknown preparation kind '{other}', expected random, fixedm, alternating, or explicit"
            ),
        }),
    }
}

fn parse_axis(text: &str, offset: usize) -> Result<AxisSpec, ParseError> {
    match text {
        "z" => Ok(AxisSpec::Z),
        "x" => Ok(AxisSpec::X),
        _ => {
            let inner = text
                .strip_prefix("bloch(")
                .and_then(|t| t.strip_suffix(')'))
                .ok_or(ParseError {
                    position: offset,
                    message: format!("expected z, x, or bloch(<polar>,<azimuth>), got '{text}'"),
                })?;
            let comma = inner.find(',').ok_or(ParseError {
                position: offset + "bloch(".len(),
                message: "expected two comma-separated angles".into(),
            })?;
            let polar = inner[..comma]
                .trim()
                .parse::<f64>()
                .map_err(|_| ParseError {
                    position: offset + "bloch(".len(),
                    message: format!("invalid polar angle '{}'", &inner[..comma]),
                })?;
            let azimuth = inner[comma + 1..]
                .trim()
                .parse::<f64>()
                .map_err(|_| ParseError {
                    position: offset + "bloch(".len() + comma + 1,
                    message: format!("invalid azimuthal angle '{}'", &inner[comma + 1..]),
                })?;
            Ok(AxisSpec::Bloch { polar, azimuth })
        }
    }
}

/// On-disk schema of an explicit mixture: each qubit is the flat quadruple
/// `[re0, im0, re1, im1]`.
#[derive(Debug, Serialize, Deserialize)]
pub struct ExplicitFile {
    pub terms: Vec<ExplicitFileTerm>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ExplicitFileTerm {
    pub weight: f64,
    pub states: Vec<[f64; 4]>,
}

impl PreparationSpec {
    /// Builds the validated in-memory preparation, loading and checking the
    /// mixture file for explicit specs.
    pub fn realize(&self) -> Result<Preparation, String> {
        match self {
            PreparationSpec::Random { axis } => Ok(Preparation::RandomMixture {
                basis: axis.basis(),
            }),
            PreparationSpec::FixedMagnetization { axis, up_count } => {
                Ok(Preparation::FixedMagnetization {
                    basis: axis.basis(),
                    up_count: *up_count,
                })
            }
            PreparationSpec::Alternating { axis } => Ok(Preparation::AlternatingCorrelated {
                basis: axis.basis(),
            }),
            PreparationSpec::Explicit { path } => load_explicit(path),
        }
    }
}

fn load_explicit(path: &Path) -> Result<Preparation, String> {
    let raw = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read mixture file {}: {e}", path.display()))?;
    let file: ExplicitFile = serde_json::from_str(&raw)
        .map_err(|e| format!("malformed mixture file {}: {e}", path.display()))?;
    let terms = file
        .terms
        .iter()
        .enumerate()
        .map(|(index, term)| {
            let states = term
                .states
                .iter()
                .map(|q| {
                    PureQubit::new(Complex64::new(q[0], q[1]), Complex64::new(q[2], q[3]))
                        .map_err(|e| format!("term {index} of {}: {e}", path.display()))
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(MixtureTerm {
                weight: term.weight,
                states,
            })
        })
        .collect::<Result<Vec<_>, String>>()?;
    Preparation::explicit_mixture(terms).map_err(|e| e.to_string())
}
