//! The `multispinal` command line.
//!
//! Exit codes: `0` when the command ran (whatever the verdict), `1` for bad
//! input (usage, I/O, parse or validation errors), `2` for internal defects,
//! i.e. results that contradict the underlying theorems.

use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use multispinal::action::WitnessBounds;
use multispinal::document::{load_instance, LoadError};
use multispinal::random::RandomInstances;
use multispinal::report::{render_text, to_json};
use multispinal::simplicity::{analyze, AnalysisError, AnalysisOptions, InstanceSummary};
use serde::Serialize;
use serde_json::json;

pub mod reference;
pub mod sweep;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_DEFECT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "multispinal", version, about = "Decide simplicity of O_G for multispinal self-similar groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the full analysis on an instance file.
    Analyze {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Depth of the fixed-word truncation check for every agent.
        #[arg(long, default_value_t = 12)]
        truncation_depth: usize,
        /// Witness search bounds as PERIOD,PREPERIOD.
        #[arg(long, default_value = "3,4", value_parser = parse_bounds)]
        witness_bound: WitnessBounds,
        /// Print the scaled Gram matrix in text output.
        #[arg(long)]
        emit_matrix: bool,
        /// Include wall-clock timing (makes output nondeterministic).
        #[arg(long)]
        timings: bool,
    },
    /// Validate an instance file without analyzing it.
    Check {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Check the bundled fixtures against their known values.
    Selftest {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Compare the matrix and kernel criteria on seeded random instances.
    Properties {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

fn parse_bounds(s: &str) -> Result<WitnessBounds, String> {
    let (p, q) = s.split_once(',').ok_or_else(|| format!("expected PERIOD,PREPERIOD, got {s:?}"))?;
    let num = |t: &str| usize::from_str(t.trim()).map_err(|e| format!("{t:?}: {e}"));
    let max_period = num(p)?;
    if max_period == 0 {
        return Err("the period bound must be positive".into());
    }
    Ok(WitnessBounds { max_period, max_preperiod: num(q)? })
}

/// A failure with its exit code and a stable machine-readable kind.
#[derive(Debug)]
struct Failure {
    code: i32,
    kind: &'static str,
    message: String,
}

impl From<LoadError> for Failure {
    fn from(e: LoadError) -> Self {
        let kind = match e {
            LoadError::Io { .. } => "IoError",
            LoadError::Parse(_) => "ParseError",
            LoadError::Validation(_) => "ValidationError",
        };
        Failure { code: EXIT_INPUT, kind, message: e.to_string() }
    }
}

impl From<sweep::SweepError> for Failure {
    fn from(e: sweep::SweepError) -> Self {
        match e {
            sweep::SweepError::Analysis { source, instance } => {
                let f = Failure::from(source);
                Failure { message: format!("{instance}: {}", f.message), ..f }
            }
            gram @ sweep::SweepError::Gram { .. } => {
                Failure { code: EXIT_DEFECT, kind: "GramPropertyViolation", message: gram.to_string() }
            }
        }
    }
}

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Self {
        use multispinal::measure::MeasureError;
        let kind = match &e {
            AnalysisError::CriteriaDisagreement { .. } => "CriteriaDisagreement",
            AnalysisError::Measure(MeasureError::InternalSingular) => "InternalSingular",
            AnalysisError::Measure(MeasureError::TruncationViolation { .. }) => "TruncationViolation",
            AnalysisError::Measure(MeasureError::UnknownAgent(_)) | AnalysisError::Linalg(_) => "InternalError",
        };
        Failure { code: EXIT_DEFECT, kind, message: e.to_string() }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let format = match &cli.command {
        Command::Analyze { format, .. }
        | Command::Check { format, .. }
        | Command::Selftest { format }
        | Command::Properties { format, .. } => *format,
    };
    match dispatch(cli.command, stdout) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            if format == Format::Json {
                let payload = json!({ "error": { "kind": f.kind, "exit_code": f.code, "message": f.message } });
                let _ = writeln!(stdout, "{}", serde_json::to_string_pretty(&payload).expect("payload serializes"));
            }
            f.code
        }
    }
}

fn emit_json(stdout: &mut dyn Write, value: &impl Serialize) {
    let _ = writeln!(stdout, "{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn dispatch(command: Command, stdout: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Analyze { file, format, truncation_depth, witness_bound, emit_matrix, timings } => {
            let inst = load_instance(&file)?;
            let options = AnalysisOptions {
                truncation_depth: Some(truncation_depth),
                witness_bounds: Some(witness_bound),
                record_timing: timings,
            };
            let report = analyze(&inst, &options)?;
            let out = match format {
                Format::Json => to_json(&report),
                Format::Text => render_text(&report, emit_matrix),
            };
            let _ = stdout.write_all(out.as_bytes());
            Ok(EXIT_OK)
        }
        Command::Check { file, format } => {
            let inst = load_instance(&file)?;
            let summary = InstanceSummary::of(&inst);
            match format {
                Format::Json => emit_json(stdout, &json!({ "valid": true, "instance": summary })),
                Format::Text => {
                    let _ = writeln!(
                        stdout,
                        "valid: {} (|A| = {}, |B| = {}, |X| = {}, Y = {{{}}}, |ℬ·𝒜| = {}, {} nucleus agents)",
                        if summary.name.is_empty() { "(unnamed)" } else { &summary.name },
                        summary.order_a,
                        summary.order_b,
                        summary.alphabet.len(),
                        summary.hom_letters.join(", "),
                        summary.ba_size,
                        summary.nucleus.len()
                    );
                }
            }
            Ok(EXIT_OK)
        }
        Command::Selftest { format } => {
            let checks = reference::selftest();
            let failed = checks.iter().filter(|c| !c.passed).count();
            match format {
                Format::Json => {
                    let rows: Vec<_> = checks
                        .iter()
                        .map(|c| json!({ "check": c.name, "passed": c.passed, "detail": c.detail }))
                        .collect();
                    emit_json(stdout, &json!({ "checks": rows, "failed": failed }));
                }
                Format::Text => {
                    for c in &checks {
                        let _ = writeln!(stdout, "[{}] {}: {}", if c.passed { "ok" } else { "FAIL" }, c.name, c.detail);
                    }
                    let _ = writeln!(stdout, "{} checks, {} failed", checks.len(), failed);
                }
            }
            if failed == 0 {
                Ok(EXIT_OK)
            } else {
                Err(Failure {
                    code: EXIT_DEFECT,
                    kind: "SelftestFailure",
                    message: format!("{failed} reference checks failed"),
                })
            }
        }
        Command::Properties { seed, count, format } => {
            let summary = sweep::sweep(RandomInstances::new(seed).take(count))?;
            match format {
                Format::Json => emit_json(stdout, &summary),
                Format::Text => {
                    let _ = writeln!(
                        stdout,
                        "seed {seed}: {} instances (largest |A| = {}), matrix and kernel criteria agree on all",
                        summary.instances, summary.largest_a
                    );
                    for (verdict, n) in &summary.verdicts {
                        let _ = writeln!(stdout, "  {verdict:<36} {n}");
                    }
                    let _ = writeln!(stdout, "Gram matrices symmetric, unit diagonal, entries in [0, 1], PSD");
                }
            }
            Ok(EXIT_OK)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use multispinal::measure::MeasureError;
    use multispinal::Agent;

    #[test]
    fn defects_map_to_exit_2() {
        let cases = [
            (AnalysisError::CriteriaDisagreement { matrix: true, kernel: false }, "CriteriaDisagreement"),
            (AnalysisError::Measure(MeasureError::InternalSingular), "InternalSingular"),
            (
                AnalysisError::Measure(MeasureError::TruncationViolation { agent: Agent::Identity, depth: 3 }),
                "TruncationViolation",
            ),
        ];
        for (err, kind) in cases {
            let f = Failure::from(err);
            assert_eq!((f.code, f.kind), (EXIT_DEFECT, kind));
        }
    }

    #[test]
    fn witness_bounds_parse() {
        assert_eq!(parse_bounds("3,4"), Ok(WitnessBounds { max_period: 3, max_preperiod: 4 }));
        assert_eq!(parse_bounds(" 1, 0"), Ok(WitnessBounds { max_period: 1, max_preperiod: 0 }));
        assert!(parse_bounds("3").is_err());
        assert!(parse_bounds("0,1").is_err());
        assert!(parse_bounds("a,b").is_err());
    }

    #[test]
    fn run_writes_to_the_given_streams() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run(["multispinal", "selftest"], &mut out, &mut err), EXIT_OK);
        assert!(String::from_utf8(out).unwrap().ends_with("0 failed\n"));
        assert!(err.is_empty());
    }
}
