//! Command-line driver: build canonical models, verify model files, collapse
//! and sample, and compare the probability forms.
//!
//! Exit codes: 0 every check passed, 1 a check failed, 2 the input was
//! unreadable or invalid.

pub mod format;
pub mod report;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use premeasure_core::collapse::SAMPLER_ID;
use premeasure_core::{
    build_canonical_model, butcher, check_calibration, check_dynamical, check_prc, decompose_final, max_coherence,
    probability_triple, sample, spectral_decompose, weights, CheckReport64, Ket64, Tolerance64,
};

use format::{load_json, load_ket, load_model, load_operator, matrix_to_operator, save_model, InputError, ObservableFile};
use report::{CheckEntry, CollapseReport, FormsReport, OutcomeLine, SuiteReport};

pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_INPUT: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "premeasure", version, about = "Build and verify unitary measurement models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build the canonical model for an observable
    Build {
        /// Hermitian matrix or spectral form (JSON)
        #[arg(value_name = "OBSERVABLE")]
        observable: PathBuf,
        /// Write the model here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Run the calibration, dynamical, reproducibility and branch checks
    Verify {
        #[arg(value_name = "MODEL")]
        model: PathBuf,
        /// Object state; defaults to the uniform superposition
        #[arg(value_name = "PHI")]
        phi: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
    /// Decohere the final state and sample outcomes
    Collapse {
        #[arg(value_name = "MODEL")]
        model: PathBuf,
        #[arg(value_name = "PHI")]
        phi: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        n: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate a projector probability three ways
    Forms {
        #[arg(value_name = "PSI")]
        psi: PathBuf,
        #[arg(value_name = "PROJECTOR")]
        projector: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
}

fn tolerance(eps: f64) -> Result<Tolerance64, InputError> {
    Tolerance64::new(eps).map_err(|e| InputError(format!("--tol: {e}")))
}

/// Runs one command, writing the report to `out` and diagnostics to `err`.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let result = match cli.command {
        Command::Build { observable, out: path, tol } => cmd_build(&observable, path.as_deref(), tol, out, err),
        Command::Verify { model, phi, tol, json } => cmd_verify(&model, phi.as_deref(), tol, json, out),
        Command::Collapse { model, phi, n, seed, tol, json } => cmd_collapse(&model, &phi, n, seed, tol, json, out),
        Command::Forms { psi, projector, tol, json } => cmd_forms(&psi, &projector, tol, json, out),
    };
    match result {
        Ok(true) => EXIT_PASS,
        Ok(false) => EXIT_FAIL,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), InputError> {
    out.write_all(text.as_bytes()).map_err(|e| InputError(format!("writing output: {e}")))
}

pub fn cmd_build(
    observable: &Path,
    out_path: Option<&Path>,
    eps: f64,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<bool, InputError> {
    let tol = tolerance(eps)?;
    let input: ObservableFile = load_json(observable)?;
    let field = observable.display().to_string();
    let form = match input {
        ObservableFile::Spectral(sf) => sf.to_form(&field, tol)?,
        ObservableFile::Wrapped { matrix } | ObservableFile::Matrix(matrix) => {
            let h = matrix_to_operator(&field, &matrix)?;
            spectral_decompose(&h, tol).map_err(|e| InputError(format!("{field}: {e}")))?
        }
    };
    let model = build_canonical_model(&form, tol).map_err(|e| InputError(e.to_string()))?;
    let text = save_model(&model);
    match out_path {
        Some(p) => {
            std::fs::write(p, &text).map_err(|e| InputError(format!("{}: {e}", p.display())))?;
            let _ = writeln!(
                err,
                "wrote {} (dim_a {}, dim_b {}, {} outcomes)",
                p.display(),
                model.dim_a(),
                model.dim_b(),
                model.outcome_count()
            );
        }
        None => emit(out, &text)?,
    }
    Ok(true)
}

fn entry(name: &str, report: CheckReport64, start: Instant, tol: Tolerance64) -> CheckEntry {
    let failing_outcomes = report
        .per_outcome_residuals
        .iter()
        .enumerate()
        .filter(|(_, &r)| !tol.accepts(r))
        .map(|(k, _)| k)
        .collect();
    CheckEntry {
        name: name.to_string(),
        passed: report.passed,
        max_residual: report.max_residual,
        elapsed_seconds: start.elapsed().as_secs_f64(),
        failing_outcomes,
        witness: report.witness,
    }
}

pub fn verify_model_file(model: &Path, phi: Option<&Path>, eps: f64) -> Result<SuiteReport, InputError> {
    let tol = tolerance(eps)?;
    let model = load_model(model, tol)?;
    let phi = match phi {
        Some(p) => load_ket(p, tol)?,
        None => Ket64::uniform(model.dim_a()),
    };
    if phi.dim() != model.dim_a() {
        return Err(InputError(format!("phi has dimension {} but the object has {}", phi.dim(), model.dim_a())));
    }
    let mut checks = Vec::with_capacity(4);

    let t = Instant::now();
    checks.push(entry("calibration", check_calibration(&model, tol), t, tol));
    let t = Instant::now();
    checks.push(entry("dynamical", check_dynamical(&model, tol), t, tol));
    let t = Instant::now();
    let prc = check_prc(&model, &phi, tol).map_err(|e| InputError(e.to_string()))?;
    checks.push(entry("probability_reproducibility", prc, t, tol));

    let t = Instant::now();
    let fin = premeasure_core::premeasure(&model, &phi).map_err(|e| InputError(e.to_string()))?;
    let dec = decompose_final(&model, &phi, tol).map_err(|e| InputError(e.to_string()))?;
    let residual = dec.reconstruction_residual(&fin);
    let passed = tol.accepts(residual);
    checks.push(CheckEntry {
        name: "branch_reconstruction".into(),
        passed,
        max_residual: residual,
        elapsed_seconds: t.elapsed().as_secs_f64(),
        failing_outcomes: vec![],
        witness: (!passed).then(|| format!("Σ_k a_k β_k differs from the final state by {residual:e}")),
    });

    Ok(SuiteReport::new(tol.eps(), checks))
}

pub fn cmd_verify(model: &Path, phi: Option<&Path>, eps: f64, json: bool, out: &mut dyn Write) -> Result<bool, InputError> {
    let report = verify_model_file(model, phi, eps)?;
    emit(out, &if json { report.to_json() } else { report.to_text() })?;
    Ok(report.passed)
}

pub fn collapse_report(model: &Path, phi: &Path, n: u64, seed: u64, eps: f64) -> Result<CollapseReport, InputError> {
    let tol = tolerance(eps)?;
    let model = load_model(model, tol)?;
    let phi = load_ket(phi, tol)?;
    if phi.dim() != model.dim_a() {
        return Err(InputError(format!("phi has dimension {} but the object has {}", phi.dim(), model.dim_a())));
    }
    let w = weights(&phi, model.observable()).map_err(|e| InputError(e.to_string()))?;
    let mixture = butcher(&model, &phi, tol).map_err(|e| InputError(e.to_string()))?;
    let coherence = max_coherence(&model, mixture.operator()).map_err(|e| InputError(e.to_string()))?;
    let samples = sample(&w, n, seed).map_err(|e| InputError(format!("--n: {e}")))?;
    let outcomes = w
        .weights
        .iter()
        .zip(model.observable().eigenvalues())
        .zip(&samples.counts)
        .enumerate()
        .map(|(k, ((&weight, &eigenvalue), &count))| OutcomeLine { outcome: k, eigenvalue, weight, count })
        .collect();
    let trace_residual = (mixture.trace() - 1.0).abs();
    Ok(CollapseReport {
        outcomes,
        trace_residual,
        max_coherence: coherence,
        passed: tol.accepts(trace_residual) && tol.accepts(coherence),
        samples: n,
        seed,
        generator: SAMPLER_ID.to_string(),
    })
}

pub fn cmd_collapse(
    model: &Path,
    phi: &Path,
    n: u64,
    seed: u64,
    eps: f64,
    json: bool,
    out: &mut dyn Write,
) -> Result<bool, InputError> {
    let report = collapse_report(model, phi, n, seed, eps)?;
    emit(out, &if json { report.to_json() } else { report.to_text() })?;
    Ok(report.passed)
}

pub fn forms_report(psi: &Path, projector: &Path, eps: f64) -> Result<FormsReport, InputError> {
    let tol = tolerance(eps)?;
    let psi = load_ket(psi, tol)?;
    let p = load_operator(projector)?;
    let t = probability_triple(&psi, &p, tol).map_err(|e| InputError(format!("{}: {e}", projector.display())))?;
    let diff = t.max_pairwise_difference();
    Ok(FormsReport {
        expectation_form: t.expectation_form,
        born_form: t.born_form,
        trace_form: t.trace_form,
        max_pairwise_difference: diff,
        passed: tol.accepts(diff),
    })
}

pub fn cmd_forms(psi: &Path, projector: &Path, eps: f64, json: bool, out: &mut dyn Write) -> Result<bool, InputError> {
    let report = forms_report(psi, projector, eps)?;
    emit(out, &if json { report.to_json() } else { report.to_text() })?;
    Ok(report.passed)
}
