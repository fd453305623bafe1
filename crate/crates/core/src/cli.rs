//! Command-line front end.
//!
//! Exit codes: 0 on success (or a verification with no counterexample),
//! 1 when a verification finds a counterexample, 2 on usage errors.

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::digits::{reverse, runs};
use crate::error::Error;
use crate::hyperbinary::{enumerate_expansions, HCountTable};
use crate::stern::{stern_poly, stern_value, SternTable};
use crate::verify::{ReversalMode, Verifier, VerifyReport, DEFAULT_FAIL_LIMIT};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSIFIED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Listings longer than this are refused rather than streamed.
pub const MAX_LISTED_EXPANSIONS: u64 = 1_000_000;
pub const MAX_TABLE_ROWS: u64 = 1 << 22;

#[derive(Debug, Parser)]
#[command(
    name = "sternpoly",
    version,
    about = "Bivariate Stern polynomials and hyperbinary expansions"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the polynomial s_n(x, y).
    Poly { n: u64 },
    /// Print the Stern number s_n = s_n(1, 1).
    Value { n: u64 },
    /// List the hyperbinary expansions of m.
    Expansions { m: u64 },
    /// Print n with its binary digits reversed.
    Reverse { n: u64 },
    /// Print the run-length profile of an odd n.
    Runs { n: u64 },
    /// Tabulate n, n^R, s_n(1,1), s_n(x,y) and the expansion count.
    Table {
        #[arg(long)]
        max: u64,
    },
    /// Check one of the identities over a range.
    Verify {
        #[arg(value_enum)]
        which: Check,
        /// Upper end of the range (word length for `reflection`).
        #[arg(long)]
        max: Option<u64>,
        /// Lower end of the range.
        #[arg(long, default_value_t = 1)]
        min: u64,
        /// Reversal comparison mode.
        #[arg(long, value_enum, default_value_t = Mode::Polynomial)]
        mode: Mode,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Maximum number of counterexamples listed.
        #[arg(long, default_value_t = DEFAULT_FAIL_LIMIT)]
        fail_limit: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Check {
    Reversal,
    Lemma,
    Oracle,
    Continuant,
    Powers,
    Reflection,
    Matrix,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Polynomial,
    Integer,
}

impl Check {
    fn default_max(self, mode: Mode) -> u64 {
        match (self, mode) {
            (Check::Reversal, Mode::Polynomial) => 1 << 16,
            (Check::Reversal, Mode::Integer) => 10_000_000,
            (Check::Oracle, _) => 4096,
            (Check::Continuant, _) => 100_000,
            (Check::Powers, _) => 1 << 16,
            (Check::Reflection, _) => 12,
            (Check::Matrix, _) => 1 << 15,
            (Check::Lemma, _) => 0,
        }
    }
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

type CmdResult = std::result::Result<i32, Failure>;

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(rendered.as_bytes())
            } else {
                out.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli, out, err) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => EXIT_OK,
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn reject_format(
    format: Format,
    allowed: &[Format],
    command: &str,
) -> std::result::Result<(), Failure> {
    if allowed.contains(&format) {
        Ok(())
    } else {
        Err(Failure::Usage(format!(
            "--format {} is not supported by `{command}`",
            format
                .to_possible_value()
                .expect("no skipped variants")
                .get_name()
        )))
    }
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    use Format::*;
    let format = cli.format;
    match &cli.command {
        Command::Poly { n } => {
            reject_format(format, &[Text, Json], "poly")?;
            let p = stern_poly(*n)?;
            match format {
                Json => writeln!(out, "{}", serde_json::to_string(&p).expect("serializable"))?,
                _ => writeln!(out, "{p}")?,
            }
        }
        Command::Value { n } => {
            reject_format(format, &[Text, Json], "value")?;
            writeln!(out, "{}", stern_value(*n)?)?;
        }
        Command::Reverse { n } => {
            reject_format(format, &[Text, Json], "reverse")?;
            writeln!(out, "{}", reverse(*n)?)?;
        }
        Command::Runs { n } => {
            reject_format(format, &[Text, Json], "runs")?;
            let profile = runs(*n)?;
            match format {
                Json => writeln!(
                    out,
                    "{}",
                    serde_json::to_string(profile.as_slice()).expect("serializable")
                )?,
                _ => {
                    let parts: Vec<String> =
                        profile.as_slice().iter().map(u64::to_string).collect();
                    writeln!(out, "{}", parts.join(" "))?
                }
            }
        }
        Command::Expansions { m } => {
            reject_format(format, &[Text, Json], "expansions")?;
            // m = 2^64 - 1 only has the all-ones expansion
            let count = match m.checked_add(1) {
                Some(k) => stern_value(k)?,
                None => 1,
            };
            if count > MAX_LISTED_EXPANSIONS {
                return Err(Failure::Usage(format!(
                    "{m} has {count} hyperbinary expansions; listing is limited to {MAX_LISTED_EXPANSIONS}"
                )));
            }
            let all = enumerate_expansions(*m);
            match format {
                Json => {
                    let strings: Vec<String> = all.iter().map(ToString::to_string).collect();
                    writeln!(
                        out,
                        "{}",
                        serde_json::to_string(&strings).expect("serializable")
                    )?;
                }
                _ => {
                    for e in &all {
                        writeln!(out, "{e}")?;
                    }
                    writeln!(out, "count: {}", all.len())?;
                }
            }
        }
        Command::Table { max } => table(*max, format, out)?,
        Command::Verify {
            which,
            max,
            min,
            mode,
            workers,
            fail_limit,
        } => {
            reject_format(format, &[Text, Json], "verify")?;
            let max = max.unwrap_or_else(|| which.default_max(*mode));
            let verifier = Verifier::new()
                .with_workers(*workers)
                .with_fail_limit(*fail_limit);
            let report = run_check(&verifier, *which, *min, max, *mode)?;
            match format {
                Json => writeln!(out, "{}", report.to_json())?,
                _ => {
                    write!(out, "{}", report.render_text())?;
                    writeln!(err, "elapsed: {} ms", report.elapsed.as_millis())?;
                }
            }
            return Ok(if report.passed() {
                EXIT_OK
            } else {
                EXIT_FALSIFIED
            });
        }
    }
    Ok(EXIT_OK)
}

fn run_check(
    v: &Verifier,
    which: Check,
    min: u64,
    max: u64,
    mode: Mode,
) -> crate::error::Result<VerifyReport> {
    match which {
        Check::Reversal => {
            let mode = match mode {
                Mode::Polynomial => ReversalMode::Polynomial,
                Mode::Integer => ReversalMode::Integer,
            };
            v.check_reversal_range(min, max, mode)
        }
        Check::Lemma => Ok(v.check_lemma_identities()),
        Check::Oracle => v.check_oracle_equivalence(min, max),
        Check::Continuant => v.check_continuant_range(min, max),
        Check::Powers => v.check_power_of_two_clause(max),
        Check::Reflection => {
            let len = u32::try_from(max).map_err(|_| Error::InvalidRange { lo: 0, hi: max })?;
            v.check_reflection_words(len)
        }
        Check::Matrix => v.check_matrix_range(min, max),
    }
}

#[derive(Serialize)]
struct TableRow {
    n: u64,
    n_reversed: u64,
    stern_value: u64,
    polynomial: String,
    num_expansions: u64,
}

fn table(max: u64, format: Format, out: &mut dyn Write) -> std::result::Result<(), Failure> {
    if max == 0 {
        return Err(Error::ZeroIndex.into());
    }
    if max > MAX_TABLE_ROWS {
        return Err(Failure::Usage(format!(
            "--max is limited to {MAX_TABLE_ROWS}"
        )));
    }
    let polys = SternTable::build(max)?;
    let counts = HCountTable::build(max)?;
    let rows = (1..=max).map(|n| -> crate::error::Result<TableRow> {
        Ok(TableRow {
            n,
            n_reversed: reverse(n)?,
            stern_value: stern_value(n)?,
            polynomial: polys.get(n).expect("n within table").to_string(),
            num_expansions: counts.get(n).expect("n within table").total()?,
        })
    });
    match format {
        Format::Json => {
            let rows = rows.collect::<crate::error::Result<Vec<_>>>()?;
            writeln!(
                out,
                "{}",
                serde_json::to_string(&rows).expect("serializable")
            )?;
        }
        Format::Csv => {
            writeln!(out, "n,n_reversed,stern_value,polynomial,num_expansions")?;
            for row in rows {
                let r = row?;
                writeln!(
                    out,
                    "{},{},{},\"{}\",{}",
                    r.n, r.n_reversed, r.stern_value, r.polynomial, r.num_expansions
                )?;
            }
        }
        Format::Text => {
            writeln!(
                out,
                "n\tn_reversed\tstern_value\tpolynomial\tnum_expansions"
            )?;
            for row in rows {
                let r = row?;
                writeln!(
                    out,
                    "{}\t{}\t{}\t{}\t{}",
                    r.n, r.n_reversed, r.stern_value, r.polynomial, r.num_expansions
                )?;
            }
        }
    }
    Ok(())
}
