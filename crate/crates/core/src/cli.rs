//! Batch command-line front end. Every command prints a human-readable
//! report, or JSON with `--format json`. Exit codes: 0 success, 1 a check
//! or verification failed, 2 usage error.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::closure::{
    default_pool_name, pool_preset, saturate, scripted_closure, verify_certificate, ClosureCertificate,
    SaturationStatus,
};
use crate::element::Element;
use crate::expr::{format_element, parse_element};
use crate::filtration::{gr_dimension_check, graded_dimensions, WeightFiltration};
use crate::growth::{growth_sequence, standard_generating_set};
use crate::par::Execution;
use crate::signature::{Atom, Signature};

#[derive(Debug, Parser)]
#[command(name = "stablespan", version, about = "Exact algebra on polynomial, Laurent and Weyl algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Args)]
struct AlgebraArgs {
    /// poly:<m>, laurent:<m>, weyl:<n>, or a product like "poly:1 x weyl:1".
    #[arg(long)]
    algebra: String,
    /// q, or f<p> for a prime p.
    #[arg(long, default_value = "q")]
    field: String,
}

impl AlgebraArgs {
    fn signature(&self) -> Result<Signature, CliError> {
        let field = Signature::parse_field(&self.field).map_err(usage)?;
        Signature::parse(&self.algebra, field).map_err(usage)
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Normalize an expression.
    Parse {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[arg(long)]
        expr: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Scripted closure certificate for a seed.
    Closure {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[arg(long)]
        seed: String,
        #[arg(long, default_value_t = 3)]
        cap: u32,
        /// Certificate path; printed to standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Replay a certificate.
    Verify {
        #[arg(long)]
        cert: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        sequential: bool,
    },
    /// Saturate seeds under a pool of automorphisms.
    Saturate {
        #[command(flatten)]
        algebra: AlgebraArgs,
        /// May be repeated.
        #[arg(long, required = true)]
        seed: Vec<String>,
        /// affine, triangular or weyl-standard.
        #[arg(long)]
        pool: Option<String>,
        #[arg(long, default_value_t = 4)]
        cap: u32,
        #[arg(long, default_value_t = 32)]
        max_rounds: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        sequential: bool,
    },
    /// Validate a weight filtration; with --expr, the weight degree and
    /// leading form of an element, otherwise graded dimensions up to --cap.
    Gr {
        #[command(flatten)]
        algebra: AlgebraArgs,
        /// Comma-separated generator weights, "standard" or "bernstein".
        #[arg(long, default_value = "standard")]
        weights: String,
        #[arg(long)]
        expr: Option<String>,
        #[arg(long, default_value_t = 6)]
        cap: u32,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Compare graded dimensions of a tensor product with the convolution
    /// of its factors' graded dimensions.
    TensorGrCheck {
        #[command(flatten)]
        algebra: AlgebraArgs,
        /// Number of atoms in the left factor.
        #[arg(long, default_value_t = 1)]
        split: usize,
        /// Weights for the whole product, as for `gr`.
        #[arg(long, default_value = "standard")]
        weights: String,
        #[arg(long, default_value_t = 8)]
        cap: u32,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// dim V^n for the standard generating subspace, and the GK estimate.
    Growth {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[arg(long, default_value_t = 12)]
        n: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        sequential: bool,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Failed(String),
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn execution(sequential: bool) -> Execution {
    if sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

fn parse_in(text: &str, sig: &Signature) -> Result<Element, CliError> {
    parse_element(text, sig).map_err(|e| CliError::Usage(format!("cannot parse '{text}': {e}")))
}

fn parse_weights(text: &str, sig: &Signature) -> Result<WeightFiltration, CliError> {
    match text {
        "standard" | "bernstein" => Ok(WeightFiltration::standard(sig)),
        _ => {
            let weights = text
                .split(',')
                .map(|w| w.trim().parse::<i64>().map_err(|_| CliError::Usage(format!("bad weight '{w}'"))))
                .collect::<Result<Vec<_>, _>>()?;
            WeightFiltration::new(sig, weights).map_err(usage)
        }
    }
}

fn emit_json<T: Serialize>(out: &mut dyn Write, value: &T) -> std::io::Result<()> {
    let text = serde_json::to_string_pretty(value).expect("serializable report");
    writeln!(out, "{text}")
}

/// Runs one invocation; `argv[0]` is the program name.
pub fn run_command<S: AsRef<str>>(argv: &[S], stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let args = argv.iter().map(|a| a.as_ref().to_string());
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { write!(stderr, "{rendered}") } else { write!(stdout, "{rendered}") };
            return code;
        }
    };
    match dispatch(cli.command, stdout) {
        Ok(()) => 0,
        Err(CliError::Usage(m)) => {
            let _ = writeln!(stderr, "error: {m}");
            2
        }
        Err(CliError::Failed(m)) => {
            let _ = writeln!(stderr, "{m}");
            1
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Usage(format!("write failed: {e}"));
    match command {
        Command::Parse { algebra, expr, format } => {
            let sig = algebra.signature()?;
            let e = parse_in(&expr, &sig)?;
            match format {
                Format::Text => writeln!(out, "{e}").map_err(io),
                Format::Json => {
                    #[derive(Serialize)]
                    struct Report {
                        signature: String,
                        input: String,
                        canonical: String,
                        terms: usize,
                    }
                    let r = Report { signature: sig.to_string(), input: expr, canonical: format_element(&e), terms: e.len() };
                    emit_json(out, &r).map_err(io)
                }
            }
        }
        Command::Closure { algebra, seed, cap, out: path, format } => {
            let sig = algebra.signature()?;
            let seed = parse_in(&seed, &sig)?;
            let cert = scripted_closure(&seed, cap).map_err(usage)?;
            let json = cert.to_json();
            match path {
                Some(p) => {
                    std::fs::write(&p, &json).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?;
                    match format {
                        Format::Text => writeln!(
                            out,
                            "certificate: {} steps, {} monomials of degree <= {} covered, written to {}",
                            cert.steps.len(),
                            cert.coverage.len(),
                            cap,
                            p.display()
                        )
                        .map_err(io),
                        Format::Json => out.write_all(json.as_bytes()).map_err(io),
                    }
                }
                None => out.write_all(json.as_bytes()).map_err(io),
            }
        }
        Command::Verify { cert, format, sequential } => {
            let text = std::fs::read_to_string(&cert)
                .map_err(|e| CliError::Usage(format!("{}: {e}", cert.display())))?;
            let cert = ClosureCertificate::from_json(&text).map_err(|e| CliError::Failed(format!("invalid: {e}")))?;
            let verdict = verify_certificate(&cert, execution(sequential));
            match format {
                Format::Text => writeln!(out, "{verdict}").map_err(io)?,
                Format::Json => emit_json(out, &verdict).map_err(io)?,
            }
            if verdict.is_ok() {
                Ok(())
            } else {
                Err(CliError::Failed(format!("verification failed: {verdict}")))
            }
        }
        Command::Saturate { algebra, seed, pool, cap, max_rounds, format, sequential } => {
            let sig = algebra.signature()?;
            let seeds = seed.iter().map(|s| parse_in(s, &sig)).collect::<Result<Vec<_>, _>>()?;
            let pool_name = pool.unwrap_or_else(|| default_pool_name(&sig).to_string());
            let maps = pool_preset(&sig, &pool_name, cap).map_err(usage)?;
            let sat = saturate(&seeds, &maps, cap, max_rounds, execution(sequential));
            #[derive(Serialize)]
            struct Report {
                signature: String,
                pool: String,
                pool_size: usize,
                cap: u32,
                status: SaturationStatus,
                dim: usize,
                rounds: usize,
                blocked: usize,
                basis: Vec<String>,
            }
            let r = Report {
                signature: sig.to_string(),
                pool: pool_name,
                pool_size: maps.len(),
                cap,
                status: sat.status,
                dim: sat.dim(),
                rounds: sat.rounds,
                blocked: sat.blocked,
                basis: sat.basis.rows().map(format_element).collect(),
            };
            match format {
                Format::Text => {
                    writeln!(out, "{}, dim {}", r.status, r.dim).map_err(io)?;
                    writeln!(
                        out,
                        "{} pool ({} maps), cap {}, {} rounds, {} cap-blocked images",
                        r.pool, r.pool_size, r.cap, r.rounds, r.blocked
                    )
                    .map_err(io)?;
                    for b in &r.basis {
                        writeln!(out, "  {b}").map_err(io)?;
                    }
                    Ok(())
                }
                Format::Json => emit_json(out, &r).map_err(io),
            }
        }
        Command::Gr { algebra, weights, expr, cap, format } => {
            let sig = algebra.signature()?;
            let w = parse_weights(&weights, &sig)?;
            match expr {
                Some(text) => {
                    let f = parse_in(&text, &sig)?;
                    let lead = w.leading_form(&f).map_err(usage)?;
                    let degree = w.weight_degree(&f);
                    #[derive(Serialize)]
                    struct Report {
                        signature: String,
                        graded: String,
                        weights: Vec<i64>,
                        element: String,
                        weight_degree: String,
                        leading_form: String,
                    }
                    let r = Report {
                        signature: sig.to_string(),
                        graded: w.graded_signature().to_string(),
                        weights: w.weights().to_vec(),
                        element: format_element(&f),
                        weight_degree: degree.to_string(),
                        leading_form: format_element(&lead),
                    };
                    match format {
                        Format::Text => {
                            writeln!(out, "weight degree: {}", r.weight_degree).map_err(io)?;
                            writeln!(out, "leading form in {}: {}", r.graded, r.leading_form).map_err(io)
                        }
                        Format::Json => emit_json(out, &r).map_err(io),
                    }
                }
                None => {
                    let dims = graded_dimensions(&w, cap);
                    match format {
                        Format::Text => {
                            writeln!(out, "valid filtration on {} with weights {:?}", sig, w.weights()).map_err(io)?;
                            writeln!(out, "degree  dim").map_err(io)?;
                            for (i, d) in dims.iter().enumerate() {
                                writeln!(out, "{i:>6}  {d}").map_err(io)?;
                            }
                            Ok(())
                        }
                        Format::Json => {
                            #[derive(Serialize)]
                            struct Report {
                                signature: String,
                                weights: Vec<i64>,
                                dims: Vec<crate::filtration::GradedDim>,
                            }
                            emit_json(out, &Report { signature: sig.to_string(), weights: w.weights().to_vec(), dims })
                                .map_err(io)
                        }
                    }
                }
            }
        }
        Command::TensorGrCheck { algebra, split, weights, cap, format } => {
            let sig = algebra.signature()?;
            let atoms = sig.atoms();
            if split == 0 || split >= atoms.len() {
                return Err(CliError::Usage(format!(
                    "--split must be between 1 and {} for {} atoms",
                    atoms.len().saturating_sub(1),
                    atoms.len()
                )));
            }
            let w = parse_weights(&weights, &sig)?;
            let left_len: usize = atoms[..split].iter().map(|a: &Atom| a.generator_count()).sum();
            let left_sig = Signature::new(atoms[..split].to_vec(), sig.field()).map_err(usage)?;
            let right_sig = Signature::new(atoms[split..].to_vec(), sig.field()).map_err(usage)?;
            let left = WeightFiltration::new(&left_sig, w.weights()[..left_len].to_vec()).map_err(usage)?;
            let right = WeightFiltration::new(&right_sig, w.weights()[left_len..].to_vec()).map_err(usage)?;
            let report = gr_dimension_check(&left, &right, cap).map_err(usage)?;
            match format {
                Format::Text => {
                    writeln!(out, "left {left_sig}, right {right_sig}, weights {:?}", report.weights)
                        .map_err(io)?;
                    writeln!(out, "degree  left  right  tensor  convolution  result").map_err(io)?;
                    for r in &report.rows {
                        let i = r.degree as usize;
                        writeln!(
                            out,
                            "{:>6}  {:>4}  {:>5}  {:>6}  {:>11}  {}",
                            r.degree,
                            report.left[i],
                            report.right[i],
                            r.tensor,
                            r.convolution,
                            if r.pass { "pass" } else { "FAIL" }
                        )
                        .map_err(io)?;
                    }
                }
                Format::Json => emit_json(out, &report).map_err(io)?,
            }
            if report.passed() {
                Ok(())
            } else {
                Err(CliError::Failed("convolution identity fails".into()))
            }
        }
        Command::Growth { algebra, n, format, sequential } => {
            let sig = algebra.signature()?;
            let gens = standard_generating_set(&sig);
            let r = growth_sequence(&sig, &gens, n, execution(sequential)).map_err(usage)?;
            match format {
                Format::Text => {
                    let dims: Vec<String> = r.dims.iter().map(|d| d.to_string()).collect();
                    writeln!(out, "dims: {}", dims.join(" ")).map_err(io)?;
                    match r.degree {
                        Some(d) => writeln!(out, "GK degree: {d}").map_err(io),
                        None => writeln!(out, "GK degree: undetermined").map_err(io),
                    }
                }
                Format::Json => emit_json(out, &r).map_err(io),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String, String) {
        let mut argv = vec!["stablespan"];
        argv.extend_from_slice(args);
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let code = run_command(&argv, &mut o, &mut e);
        (code, String::from_utf8(o).unwrap(), String::from_utf8(e).unwrap())
    }

    #[test]
    fn parse_normalizes() {
        let (code, out, _) = run(&["parse", "--algebra", "weyl:1", "--expr", "y1*x1"]);
        assert_eq!(code, 0);
        assert_eq!(out, "x1*y1 - 1\n");
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run(&["parse", "--algebra", "poly:2", "--expr", "z1^-1"]).0, 2);
        assert_eq!(run(&["parse", "--algebra", "bogus:2", "--expr", "1"]).0, 2);
        assert_eq!(run(&["frobnicate"]).0, 2);
        assert_eq!(run(&["closure", "--algebra", "poly:1", "--seed", "z1^2"]).0, 2);
    }

    #[test]
    fn saturate_report() {
        let (code, out, _) = run(&["saturate", "--algebra", "poly:1", "--seed", "z1^2", "--pool", "affine", "--cap", "5"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("fixpoint, dim 3\n"), "{out}");
    }

    #[test]
    fn growth_report() {
        let (code, out, _) = run(&["growth", "--algebra", "poly:1 x weyl:1", "--n", "12"]);
        assert_eq!(code, 0);
        assert!(out.contains("GK degree: 3"), "{out}");
    }

    #[test]
    fn tensor_gr_table() {
        let (code, out, _) = run(&["tensor-gr-check", "--algebra", "poly:1 x weyl:1", "--weights", "1,1,1"]);
        assert_eq!(code, 0, "{out}");
        assert_eq!(out.lines().count(), 11);
    }

    #[test]
    fn help_is_not_an_error() {
        assert_eq!(run(&["--help"]).0, 0);
    }
}
