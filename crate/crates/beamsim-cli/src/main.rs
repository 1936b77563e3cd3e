//! Command-line surface: construct preparations, compute exact and sampled
//! collective-spin statistics, compare preparations, and reproduce the
//! quantitative claim table.
//!
//! Exit codes: 0 success, 1 validation or I/O error, 2 acceptance failure
//! (claim rows above tolerance, or a no-signaling verdict that contradicts
//! the operator-level comparison).

mod output;
mod spec;

use std::path::PathBuf;
use std::process::ExitCode;

use beamsim::claims::{expected_row_count, reproduce_all, CLAIM_TOLERANCE};
use beamsim::ensembles::{density_matrix, EnsembleSpec};
use beamsim::qubit::pauli_z;
use beamsim::sampling::empirical_moments;
use beamsim::statistics::{moments, no_signaling_check, trace_distance, NO_SIGNALING_TOL};
use beamsim::tensor::{collective_observable, NOperator, OperatorStorage};
use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};

use output::{claim_rows_pretty, float_17, OutputFormat, Rendering};
use spec::{parse_preparation, PreparationSpec};

#[derive(Parser)]
#[command(
    name = "beamsim",
    version,
    about = "Exact and Monte Carlo statistics of spin-1/2 beam preparations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format: json, csv, or pretty. Defaults to json; the
    /// BEAMSIM_FORMAT environment variable overrides the default only.
    #[arg(long, global = true)]
    format: Option<String>,

    /// Write output to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the exact density operator of a preparation.
    Density {
        /// Preparation, e.g. random:z, fixedm:x:3, alternating:bloch(0.5,1.2),
        /// explicit:@mixture.json
        #[arg(long)]
        prep: String,
        /// Beam length (number of particles).
        #[arg(long)]
        n: usize,
    },
    /// Exact mean, second moment, and dispersion of the collective z spin.
    Moments {
        #[arg(long)]
        prep: String,
        #[arg(long)]
        n: usize,
    },
    /// Trace distance between two preparations of the same beam length.
    Compare {
        #[arg(long)]
        prep_a: String,
        #[arg(long)]
        prep_b: String,
        #[arg(long)]
        n: usize,
    },
    /// Monte Carlo measurement statistics over many sampled beams.
    Sample {
        #[arg(long)]
        prep: String,
        #[arg(long)]
        n: usize,
        /// Number of beams to sample.
        #[arg(long)]
        beams: usize,
        /// RNG seed; required so runs are reproducible.
        #[arg(long)]
        seed: u64,
    },
    /// Probe two preparations with random Hermitian observables.
    Nosignal {
        #[arg(long)]
        prep_a: String,
        #[arg(long)]
        prep_b: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// RNG seed; required so runs are reproducible.
        #[arg(long)]
        seed: u64,
    },
    /// Recompute the quantitative claim table and check every row.
    Reproduce {
        #[arg(long, default_value_t = 10)]
        max_n: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let is_usage_error = err.use_stderr();
            let _ = err.print();
            return if is_usage_error {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };

    let format = match resolve_format(cli.format.as_deref()) {
        Ok(format) => format,
        Err(message) => {
            eprintln!("error: {message}");
            return ExitCode::from(1);
        }
    };

    match execute(&cli.command) {
        Ok((rendering, code)) => {
            let bytes = match rendering.render(format) {
                Ok(bytes) => bytes,
                Err(err) => {
                    eprintln!("error: cannot render output: {err}");
                    return ExitCode::from(1);
                }
            };
            if let Some(path) = &cli.output {
                if let Err(err) = std::fs::write(path, &bytes) {
                    eprintln!("error: cannot write {}: {err}", path.display());
                    return ExitCode::from(1);
                }
            } else if let Err(err) = {
                use std::io::Write;
                std::io::stdout().write_all(&bytes)
            } {
                eprintln!("error: cannot write to standard output: {err}");
                return ExitCode::from(1);
            }
            ExitCode::from(code)
        }
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

fn resolve_format(flag: Option<&str>) -> Result<OutputFormat, String> {
    if let Some(text) = flag {
        return OutputFormat::parse(text)
            .ok_or_else(|| format!("unknown format '{text}', expected json, csv, or pretty"));
    }
    match std::env::var("BEAMSIM_FORMAT") {
        Ok(text) => OutputFormat::parse(&text).ok_or_else(|| {
            format!("BEAMSIM_FORMAT holds unknown format '{text}', expected json, csv, or pretty")
        }),
        Err(_) => Ok(OutputFormat::Json),
    }
}

fn execute(command: &Command) -> Result<(Rendering, u8), String> {
    match command {
        Command::Density { prep, n } => density_command(prep, *n),
        Command::Moments { prep, n } => moments_command(prep, *n),
        Command::Compare { prep_a, prep_b, n } => compare_command(prep_a, prep_b, *n),
        Command::Sample {
            prep,
            n,
            beams,
            seed,
        } => sample_command(prep, *n, *beams, *seed),
        Command::Nosignal {
            prep_a,
            prep_b,
            n,
            trials,
            seed,
        } => nosignal_command(prep_a, prep_b, *n, *trials, *seed),
        Command::Reproduce { max_n } => reproduce_command(*max_n),
    }
}

fn parse_spec(text: &str) -> Result<PreparationSpec, String> {
    parse_preparation(text).map_err(|e| format!("in preparation '{text}': {e}"))
}

fn realize(text: &str, n: usize) -> Result<NOperator, String> {
    let spec = parse_spec(text)?;
    let prep = spec.realize()?;
    density_matrix(&EnsembleSpec::new(prep, n)).map_err(|e| e.to_string())
}

fn density_command(prep: &str, n: usize) -> Result<(Rendering, u8), String> {
    let rho = realize(prep, n)?;
    let structure = if rho.is_diagonal() {
        "diagonal"
    } else {
        "dense"
    };

    let mut results = Map::new();
    results.insert("n".into(), json!(n));
    results.insert("structure".into(), json!(structure));
    results.insert("trace".into(), json!(rho.trace().re));
    results.insert("purity".into(), json!(rho.purity()));
    let mut csv_rows = vec![
        ("n".to_string(), n.to_string()),
        ("structure".to_string(), structure.to_string()),
        ("trace".to_string(), float_17(rho.trace().re)),
        ("purity".to_string(), float_17(rho.purity())),
    ];
    match rho.storage() {
        OperatorStorage::Diagonal(d) => {
            let diag: Vec<Value> = d.iter().map(|x| json!([x.re, x.im])).collect();
            results.insert("diagonal".into(), Value::Array(diag));
            for (i, x) in d.iter().enumerate() {
                csv_rows.push((format!("rho[{i}][{i}]"), complex_text(x.re, x.im)));
            }
        }
        OperatorStorage::Dense(m) => {
            let matrix: Vec<Value> = (0..m.nrows())
                .map(|i| {
                    Value::Array(
                        (0..m.ncols())
                            .map(|j| json!([m[(i, j)].re, m[(i, j)].im]))
                            .collect(),
                    )
                })
                .collect();
            results.insert("matrix".into(), Value::Array(matrix));
            for i in 0..m.nrows() {
                for j in 0..m.ncols() {
                    csv_rows.push((
                        format!("rho[{i}][{j}]"),
                        complex_text(m[(i, j)].re, m[(i, j)].im),
                    ));
                }
            }
        }
    }

    let pretty = pretty_density(&rho, structure);
    Ok((
        Rendering {
            command: "density",
            inputs: inputs(&[("prep", json!(prep)), ("n", json!(n))]),
            results,
            csv_rows,
            pretty,
            claim_rows: None,
        },
        0,
    ))
}

fn pretty_density(rho: &NOperator, structure: &str) -> String {
    let dim = rho.dim();
    let mut out = format!(
        "density operator: {} qubits, {structure} storage, trace {:.6}, purity {:.6}\n",
        rho.qubits(),
        rho.trace().re,
        rho.purity()
    );
    if dim <= 16 {
        for i in 0..dim {
            let row: Vec<String> = (0..dim)
                .map(|j| {
                    let e = rho.entry(i, j);
                    format!("{:+.4}{:+.4}i", e.re, e.im)
                })
                .collect();
            out.push_str(&row.join("  "));
            out.push('\n');
        }
    } else {
        out.push_str("nonzero diagonal (matrix too large for pretty output; use --format json):\n");
        for i in 0..dim {
            let e = rho.entry(i, i);
            if e.norm() > 0.0 {
                out.push_str(&format!("  [{i}] {:+.6}{:+.6}i\n", e.re, e.im));
            }
        }
    }
    out
}

fn moments_command(prep: &str, n: usize) -> Result<(Rendering, u8), String> {
    let rho = realize(prep, n)?;
    let observable = collective_observable(&pauli_z(), n).map_err(|e| e.to_string())?;
    let report = moments(&rho, &observable).map_err(|e| e.to_string())?;

    let mut results = Map::new();
    results.insert("mean".into(), json!(report.mean));
    results.insert("second_moment".into(), json!(report.second_moment));
    results.insert("dispersion".into(), json!(report.dispersion));
    let csv_rows = vec![
        ("mean".to_string(), float_17(report.mean)),
        ("second_moment".to_string(), float_17(report.second_moment)),
        ("dispersion".to_string(), float_17(report.dispersion)),
    ];
    let pretty = format!(
        "collective z spin of {prep} at n = {n}\n\
         mean            {:+.12}\n\
         second moment   {:+.12}\n\
         dispersion      {:+.12}\n",
        report.mean, report.second_moment, report.dispersion
    );
    Ok((
        Rendering {
            command: "moments",
            inputs: inputs(&[("prep", json!(prep)), ("n", json!(n))]),
            results,
            csv_rows,
            pretty,
            claim_rows: None,
        },
        0,
    ))
}

fn compare_command(prep_a: &str, prep_b: &str, n: usize) -> Result<(Rendering, u8), String> {
    let a = realize(prep_a, n)?;
    let b = realize(prep_b, n)?;
    let distance = trace_distance(&a, &b).map_err(|e| e.to_string())?;
    let distinguishable = distance >= NO_SIGNALING_TOL;

    let mut results = Map::new();
    results.insert("trace_distance".into(), json!(distance));
    results.insert("distinguishable".into(), json!(distinguishable));
    results.insert("threshold".into(), json!(NO_SIGNALING_TOL));
    let csv_rows = vec![
        ("trace_distance".to_string(), float_17(distance)),
        ("distinguishable".to_string(), distinguishable.to_string()),
        ("threshold".to_string(), float_17(NO_SIGNALING_TOL)),
    ];
    let pretty = format!(
        "trace distance between {prep_a} and {prep_b} at n = {n}: {distance:.12}\n\
         distinguishable: {distinguishable}\n"
    );
    Ok((
        Rendering {
            command: "compare",
            inputs: inputs(&[
                ("prep_a", json!(prep_a)),
                ("prep_b", json!(prep_b)),
                ("n", json!(n)),
            ]),
            results,
            csv_rows,
            pretty,
            claim_rows: None,
        },
        0,
    ))
}

fn sample_command(
    prep: &str,
    n: usize,
    beams: usize,
    seed: u64,
) -> Result<(Rendering, u8), String> {
    let preparation = parse_spec(prep)?.realize()?;
    let report = empirical_moments(&preparation, n, beams, seed).map_err(|e| e.to_string())?;

    let mut results = Map::new();
    results.insert("beams".into(), json!(report.beams));
    results.insert("mean".into(), json!(report.mean));
    results.insert("dispersion".into(), json!(report.dispersion));
    results.insert(
        "standard_error_mean".into(),
        json!(report.standard_error_mean),
    );
    results.insert(
        "standard_error_dispersion".into(),
        json!(report.standard_error_dispersion),
    );
    let csv_rows = vec![
        ("beams".to_string(), report.beams.to_string()),
        ("mean".to_string(), float_17(report.mean)),
        ("dispersion".to_string(), float_17(report.dispersion)),
        (
            "standard_error_mean".to_string(),
            float_17(report.standard_error_mean),
        ),
        (
            "standard_error_dispersion".to_string(),
            float_17(report.standard_error_dispersion),
        ),
    ];
    let pretty = format!(
        "sampled {} beams of {prep} at n = {n} (seed {seed})\n\
         mean        {:+.6} (standard error {:.6})\n\
         dispersion  {:+.6} (standard error {:.6})\n",
        report.beams,
        report.mean,
        report.standard_error_mean,
        report.dispersion,
        report.standard_error_dispersion
    );
    Ok((
        Rendering {
            command: "sample",
            inputs: inputs(&[
                ("prep", json!(prep)),
                ("n", json!(n)),
                ("beams", json!(beams)),
                ("seed", json!(seed)),
            ]),
            results,
            csv_rows,
            pretty,
            claim_rows: None,
        },
        0,
    ))
}

fn nosignal_command(
    prep_a: &str,
    prep_b: &str,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<(Rendering, u8), String> {
    let a = realize(prep_a, n)?;
    let b = realize(prep_b, n)?;
    let report = no_signaling_check(&a, &b, trials, seed).map_err(|e| e.to_string())?;
    let distance = trace_distance(&a, &b).map_err(|e| e.to_string())?;
    // the random probe must agree with the operator-level comparison
    let consistent = report.pass == (distance < NO_SIGNALING_TOL);

    let mut results = Map::new();
    results.insert("trials".into(), json!(report.trials));
    results.insert("max_deviation".into(), json!(report.max_deviation));
    results.insert(
        "max_relative_deviation".into(),
        json!(report.max_relative_deviation),
    );
    results.insert("pass".into(), json!(report.pass));
    results.insert("trace_distance".into(), json!(distance));
    results.insert("consistent".into(), json!(consistent));
    let csv_rows = vec![
        ("trials".to_string(), report.trials.to_string()),
        ("max_deviation".to_string(), float_17(report.max_deviation)),
        (
            "max_relative_deviation".to_string(),
            float_17(report.max_relative_deviation),
        ),
        ("pass".to_string(), report.pass.to_string()),
        ("trace_distance".to_string(), float_17(distance)),
        ("consistent".to_string(), consistent.to_string()),
    ];
    let verdict = if report.pass {
        "no observable separates the preparations"
    } else {
        "the preparations are distinguishable"
    };
    let pretty = format!(
        "probed {prep_a} against {prep_b} at n = {n} with {trials} random observables (seed {seed})\n\
         max deviation {:.3e} (relative {:.3e})\n\
         {verdict}; trace distance {distance:.6}\n",
        report.max_deviation, report.max_relative_deviation
    );
    Ok((
        Rendering {
            command: "nosignal",
            inputs: inputs(&[
                ("prep_a", json!(prep_a)),
                ("prep_b", json!(prep_b)),
                ("n", json!(n)),
                ("trials", json!(trials)),
                ("seed", json!(seed)),
            ]),
            results,
            csv_rows,
            pretty,
            claim_rows: None,
        },
        if consistent { 0 } else { 2 },
    ))
}

fn reproduce_command(max_n: usize) -> Result<(Rendering, u8), String> {
    let rows = reproduce_all(max_n).map_err(|e| e.to_string())?;
    let max_abs_error = rows.iter().map(|r| r.abs_error).fold(0.0f64, f64::max);
    let within_tolerance = max_abs_error <= CLAIM_TOLERANCE;
    debug_assert_eq!(rows.len(), expected_row_count(max_n));

    let json_rows: Vec<Value> = rows
        .iter()
        .map(|row| {
            json!({
                "claim_id": row.claim_id,
                "n": row.n,
                "method": row.method,
                "quantity": row.quantity,
                "paper_value": row.paper_value,
                "paper_form": row.paper_form,
                "computed_value": row.computed_value,
                "abs_error": row.abs_error,
                "source": row.source,
            })
        })
        .collect();
    let mut results = Map::new();
    results.insert("max_n".into(), json!(max_n));
    results.insert("row_count".into(), json!(rows.len()));
    results.insert("max_abs_error".into(), json!(max_abs_error));
    results.insert("tolerance".into(), json!(CLAIM_TOLERANCE));
    results.insert("within_tolerance".into(), json!(within_tolerance));
    results.insert("rows".into(), Value::Array(json_rows));

    let pretty = claim_rows_pretty(&rows, max_abs_error);
    Ok((
        Rendering {
            command: "reproduce",
            inputs: inputs(&[("max_n", json!(max_n))]),
            results,
            csv_rows: Vec::new(),
            pretty,
            claim_rows: Some(rows),
        },
        if within_tolerance { 0 } else { 2 },
    ))
}

fn inputs(pairs: &[(&str, Value)]) -> Map<String, Value> {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}

fn complex_text(re: f64, im: f64) -> String {
    format!(
        "{}{}{}i",
        float_17(re),
        if im < 0.0 { "" } else { "+" },
        float_17(im)
    )
}
