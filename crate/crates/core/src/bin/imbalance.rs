//! Command-line front end for the imbalance sieve.
//!
//! Exit status: 0 on success, 1 when a verification check fails, 2 on a
//! usage, parse or domain error.

use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use imbalance_sieve::output::{write_bfile, write_table, DensityRow, OutputFormat, RankedFirst};
use imbalance_sieve::verify::{CheckReport, Verifier};
use imbalance_sieve::{
    count_new_denominators, fraction_at_rank, fraction_rank, q_rank, q_unrank, sieve_stream,
    FirstAppearances, Fraction,
};

#[derive(Parser)]
#[command(
    name = "imbalance",
    version,
    about = "Enumerate reduced imbalances (p-q)/(p+q) and rank the rationals"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sieve rows: index, pair, reduced value, new-denominator flag.
    Sieve {
        #[arg(long, default_value_t = 15)]
        limit: u64,
        #[arg(long, default_value_t = 0)]
        start: u64,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Denominators in order of first appearance.
    Firsts {
        #[arg(long, default_value_t = 17)]
        count: u64,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Position of a rational (`a/b` or an integer).
    Rank {
        #[arg(allow_hyphen_values = true)]
        value: String,
        #[arg(long, value_enum, default_value_t = Space::Q)]
        space: Space,
    },
    /// Rational at a position.
    Unrank {
        position: u64,
        #[arg(long, value_enum, default_value_t = Space::Q)]
        space: Space,
    },
    /// Brute-force checks; exits 1 if any check fails.
    Verify {
        /// Largest denominator for the first-appearance check.
        #[arg(long, default_value_t = 2000)]
        max_d: i64,
        /// Largest index sampled by the density check.
        #[arg(long, default_value_t = 1_000_000)]
        max_index: u64,
        /// Largest p for the gcd check.
        #[arg(long, default_value_t = 500)]
        max_p: i64,
        /// Prefix length for the bijection, dedup and q checks.
        #[arg(long, default_value_t = 100_000)]
        count: u64,
        /// Comma-separated subset of gcd,first,bijection,dedup,q,density, or all.
        #[arg(long, default_value = "all")]
        checks: String,
    },
    /// New-denominator counts at powers of ten up to --max-index
    /// (bfile: every index from 0).
    Density {
        #[arg(long, default_value_t = 1_000_000)]
        max_index: u64,
        #[command(flatten)]
        format: FormatArg,
    },
}

#[derive(Args)]
struct FormatArg {
    #[arg(long = "format", value_enum, default_value_t = Format::Tsv)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Tsv,
    Csv,
    Jsonl,
    Bfile,
}

impl From<&FormatArg> for OutputFormat {
    fn from(f: &FormatArg) -> Self {
        match f.format {
            Format::Tsv => OutputFormat::Tsv,
            Format::Csv => OutputFormat::Csv,
            Format::Jsonl => OutputFormat::Jsonl,
            Format::Bfile => OutputFormat::Bfile,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Space {
    Q,
    #[value(alias = "unit-interval")]
    Unit,
}

const ALL_CHECKS: [&str; 6] = ["gcd", "first", "bijection", "dedup", "q", "density"];

enum Failure {
    Usage(String),
    ChecksFailed,
}

impl From<imbalance_sieve::Error> for Failure {
    fn from(e: imbalance_sieve::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = run(cli.command, &mut out);
    let flushed = out.flush();
    match result {
        Ok(()) if flushed.is_ok() => ExitCode::SUCCESS,
        Ok(()) => ExitCode::from(2),
        Err(Failure::ChecksFailed) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("imbalance: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command, out: &mut impl Write) -> Result<(), Failure> {
    match command {
        Command::Sieve {
            limit,
            start,
            format,
        } => {
            let format = OutputFormat::from(&format);
            if format == OutputFormat::Bfile {
                return Err(Failure::Usage(
                    "bfile output applies to integer sequences (firsts, density)".into(),
                ));
            }
            write_table(out, format, sieve_stream(start, limit)?)?;
        }
        Command::Firsts { count, format } => {
            let firsts = FirstAppearances::new().take(count as usize);
            match OutputFormat::from(&format) {
                OutputFormat::Bfile => write_bfile(out, firsts.map(|fa| fa.d as i128))?,
                format => {
                    let ranked = firsts
                        .zip(1..)
                        .map(|(first, rank)| RankedFirst { rank, first });
                    write_table(out, format, ranked)?
                }
            }
        }
        Command::Rank { value, space } => {
            let r: Fraction = value.parse()?;
            let rank = match space {
                Space::Q => q_rank(r)?,
                Space::Unit => fraction_rank(r)?,
            };
            writeln!(out, "{rank}")?;
        }
        Command::Unrank { position, space } => {
            let r = match space {
                Space::Q => q_unrank(position)?,
                Space::Unit => fraction_at_rank(position)?.value,
            };
            writeln!(out, "{r}")?;
        }
        Command::Verify {
            max_d,
            max_index,
            max_p,
            count,
            checks,
        } => {
            let selected = parse_checks(&checks)?;
            if max_d < 2 {
                return Err(Failure::Usage(format!(
                    "--max-d must be at least 2, got {max_d}"
                )));
            }
            if max_p < 2 {
                return Err(Failure::Usage(format!(
                    "--max-p must be at least 2, got {max_p}"
                )));
            }
            if max_index == 0 {
                return Err(Failure::Usage("--max-index must be positive".into()));
            }
            if count < 3 {
                return Err(Failure::Usage(format!(
                    "--count must be at least 3, got {count}"
                )));
            }
            let verifier = Verifier::new();
            let mut all_passed = true;
            for name in selected {
                let report: CheckReport = match name {
                    "gcd" => verifier.check_gcd_lemma(max_p)?,
                    "first" => verifier.check_first_appearance(max_d)?,
                    "bijection" => verifier.check_bijection(count)?,
                    "dedup" => verifier.check_dedup_coprime(count)?,
                    "q" => verifier.check_q_enumeration(count)?,
                    "density" => verifier.check_density(&density_indices(max_index))?,
                    _ => unreachable!("validated by parse_checks"),
                };
                all_passed &= report.passed;
                write!(out, "{report}")?;
            }
            if !all_passed {
                return Err(Failure::ChecksFailed);
            }
        }
        Command::Density { max_index, format } => match OutputFormat::from(&format) {
            OutputFormat::Bfile => write_bfile(
                out,
                (0..=max_index).map(|i| count_new_denominators(i) as i128),
            )?,
            format => {
                let mut samples: Vec<u64> =
                    std::iter::successors(Some(1u64), |i| i.checked_mul(10))
                        .take_while(|&i| i <= max_index)
                        .collect();
                if samples.last() != Some(&max_index) {
                    samples.push(max_index);
                }
                let rows = samples.into_iter().map(|index| DensityRow {
                    index,
                    new_denominators: count_new_denominators(index),
                });
                write_table(out, format, rows)?
            }
        },
    }
    Ok(())
}

fn parse_checks(list: &str) -> Result<Vec<&'static str>, Failure> {
    if list == "all" {
        return Ok(ALL_CHECKS.to_vec());
    }
    let mut selected = Vec::new();
    for item in list.split(',') {
        let name = ALL_CHECKS
            .iter()
            .find(|&&c| c == item.trim())
            .ok_or_else(|| {
                Failure::Usage(format!(
                    "unknown check {item:?}; expected one of {}",
                    ALL_CHECKS.join(",")
                ))
            })?;
        if !selected.contains(name) {
            selected.push(*name);
        }
    }
    Ok(selected)
}

/// 14, the powers of ten from 10^3 up to `max_index`, and `max_index`.
fn density_indices(max_index: u64) -> Vec<u64> {
    let mut indices: Vec<u64> = std::iter::once(14)
        .chain(std::iter::successors(Some(1000u64), |i| i.checked_mul(10)))
        .take_while(|&i| i <= max_index)
        .collect();
    if indices.last() != Some(&max_index) {
        indices.push(max_index);
    }
    indices
}
