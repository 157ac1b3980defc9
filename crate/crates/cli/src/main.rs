//! `covercount` command-line front end.

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use covercount::analysis::{conjecture_check, kp_report, ConjectureReport, KpReportEntry};
use covercount::genseries::{bms_number, build_s, GenEntry, GenFunctionJson};
use covercount::oracle::{enumerate_counts, CountEntry};
use covercount::partitions::partitions_up_to;
use covercount::{Error, Partition, Rat, RatPolyM};

const EXIT_USAGE: u8 = 2;
const EXIT_RESOURCE: u8 = 3;
const EXIT_INTERNAL: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "covercount", version, about = "Exact counts of ramified coverings of the sphere")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Output::Table, global = true)]
    output: Output,
    /// Largest covering degree any command may assemble.
    #[arg(long, default_value_t = 6, global = true)]
    weight_bound: usize,
    /// Largest genus any command may assemble.
    #[arg(long, default_value_t = 2, global = true)]
    genus_bound: usize,
    /// Cap on enumerated permutation tuples.
    #[arg(long, default_value_t = 1_000_000_000, global = true)]
    budget: u128,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, env = "COVERCOUNT_THREADS", global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Output {
    Table,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// One number b_{g,nu,m}.
    Count {
        #[arg(long)]
        genus: usize,
        #[arg(long, value_parser = parse_partition)]
        nu: Partition,
        #[arg(long, allow_negative_numbers = true)]
        m: Option<i64>,
    },
    /// The genus-g layer of the generating series through a given degree.
    Series {
        #[arg(long)]
        genus: usize,
        #[arg(long)]
        max_weight: usize,
        #[arg(long, allow_negative_numbers = true)]
        m: Option<i64>,
    },
    /// Genus-zero closed form, weighted by |Aut(nu)| and the parts of nu.
    Bms {
        #[arg(long, value_parser = parse_partition)]
        nu: Partition,
        #[arg(long, allow_negative_numbers = true)]
        m: Option<i64>,
    },
    /// Brute-force enumeration of transitive permutation tuples.
    Oracle {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
    },
    /// Residuals of the candidate KP-type forms.
    Kp {
        #[arg(long)]
        max_weight: usize,
        #[arg(long)]
        genus_cap: usize,
    },
    /// Genus-one divisibility check for every nu up to a given degree.
    Conjecture {
        #[arg(long)]
        max_n: usize,
    },
}

fn parse_partition(s: &str) -> Result<Partition, String> {
    s.parse::<Partition>().map_err(|e| e.to_string())
}

/// `count` with a concrete `m`.
#[derive(Serialize, Deserialize, Debug, PartialEq, Eq)]
struct CountValue {
    genus: usize,
    nu: Partition,
    m: i64,
    value: Rat,
}

/// `bms`, symbolic or at a concrete `m`.
#[derive(Serialize, Deserialize, Debug, PartialEq, Eq)]
struct BmsValue {
    nu: Partition,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    m: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    m_poly: Option<RatPolyM>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    value: Option<Rat>,
}

enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Lib(e)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } => EXIT_USAGE,
        Error::BoundExceeded { .. }
        | Error::BudgetExceeded { .. }
        | Error::OutOfBounds(_)
        | Error::WindowUnderflow { .. } => EXIT_RESOURCE,
        _ => EXIT_INTERNAL,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.budget == 0 {
        eprintln!("error: --budget must be at least 1");
        return ExitCode::from(EXIT_USAGE);
    }
    let threads = cli
        .threads
        .filter(|&t| t > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("error: cannot start worker pool: {e}");
            return ExitCode::from(EXIT_INTERNAL);
        }
    };
    match pool.install(|| run(&cli)) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn check_bounds(cli: &Cli, weight: usize, genus: usize) -> Result<(), Failure> {
    if weight > cli.weight_bound {
        return Err(Error::BoundExceeded { size: weight, bound: cli.weight_bound }.into());
    }
    if genus > cli.genus_bound {
        return Err(Error::BoundExceeded { size: genus, bound: cli.genus_bound }.into());
    }
    Ok(())
}

fn json<T: Serialize>(value: &T) -> Result<String, Failure> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| Failure::Lib(Error::InvariantViolation(e.to_string())))?;
    text.push('\n');
    Ok(text)
}

fn run(cli: &Cli) -> Result<String, Failure> {
    match &cli.command {
        Command::Count { genus, nu, m } => cmd_count(cli, *genus, nu, *m),
        Command::Series { genus, max_weight, m } => cmd_series(cli, *genus, *max_weight, *m),
        Command::Bms { nu, m } => cmd_bms(cli, nu, *m),
        Command::Oracle { n, m } => cmd_oracle(cli, *n, *m),
        Command::Kp { max_weight, genus_cap } => cmd_kp(cli, *max_weight, *genus_cap),
        Command::Conjecture { max_n } => cmd_conjecture(cli, *max_n),
    }
}

fn cmd_count(cli: &Cli, genus: usize, nu: &Partition, m: Option<i64>) -> Result<String, Failure> {
    if nu.is_empty() {
        return Err(Failure::Usage("--nu must be a nonempty partition".into()));
    }
    check_bounds(cli, nu.weight(), genus)?;
    let gf = build_s(nu.weight(), genus)?;
    let poly = gf.b_number(genus, nu)?;
    match (m, cli.output) {
        (None, Output::Table) => Ok(format!("{poly}\n")),
        (None, Output::Json) => json(&GenEntry { genus, mu: nu.clone(), m_poly: poly }),
        (Some(k), Output::Table) => Ok(format!("{}\n", poly.eval(&Rat::from(k)))),
        (Some(k), Output::Json) => {
            json(&CountValue { genus, nu: nu.clone(), m: k, value: poly.eval(&Rat::from(k)) })
        }
    }
}

fn cmd_series(cli: &Cli, genus: usize, max_weight: usize, m: Option<i64>) -> Result<String, Failure> {
    check_bounds(cli, max_weight, genus)?;
    let gf = build_s(max_weight, genus)?;
    let at = m.map(Rat::from);
    let entries: Vec<GenEntry> = gf
        .entries()
        .into_iter()
        .filter(|e| e.genus == genus)
        .map(|e| match &at {
            Some(v) => GenEntry { m_poly: RatPolyM::constant(e.m_poly.eval(v)), ..e },
            None => e,
        })
        .filter(|e| !e.m_poly.is_zero())
        .collect();
    match cli.output {
        Output::Json => json(&GenFunctionJson { weight_bound: max_weight, genus_bound: genus, terms: entries }),
        Output::Table => {
            let header = match m {
                Some(k) => format!("b(g={genus}, m={k})"),
                None => format!("b(g={genus}, m)"),
            };
            let rows = entries
                .iter()
                .map(|e| {
                    let value = match &at {
                        Some(_) => e.m_poly.coeff(0).to_string(),
                        None => e.m_poly.factored(),
                    };
                    vec![e.mu.to_string(), value]
                })
                .collect();
            Ok(table(&["nu", &header], rows))
        }
    }
}

fn cmd_bms(cli: &Cli, nu: &Partition, m: Option<i64>) -> Result<String, Failure> {
    if nu.is_empty() {
        return Err(Failure::Usage("--nu must be a nonempty partition".into()));
    }
    check_bounds(cli, nu.weight(), 0)?;
    let poly = bms_number(nu)?;
    let value = m.map(|k| poly.eval(&Rat::from(k)));
    match cli.output {
        Output::Table => Ok(match &value {
            Some(v) => format!("{v}\n"),
            None => format!("{}\n", poly.factored()),
        }),
        Output::Json => {
            let m_poly = if value.is_none() { Some(poly) } else { None };
            json(&BmsValue { nu: nu.clone(), m, m_poly, value })
        }
    }
}

fn cmd_oracle(cli: &Cli, n: usize, m: usize) -> Result<String, Failure> {
    let counts = enumerate_counts(n, m, cli.budget)?;
    let entries: Vec<CountEntry> = counts.to_entries();
    match cli.output {
        Output::Json => json(&entries),
        Output::Table => {
            let rows = entries
                .iter()
                .map(|e| vec![e.nu.to_string(), e.genus.to_string(), e.count.to_string()])
                .collect();
            Ok(table(&["nu", "genus", "count"], rows))
        }
    }
}

fn cmd_kp(cli: &Cli, max_weight: usize, genus_cap: usize) -> Result<String, Failure> {
    check_bounds(cli, max_weight, genus_cap)?;
    let gf = build_s(max_weight, genus_cap)?;
    let report: Vec<KpReportEntry> = kp_report(&gf)?;
    match cli.output {
        Output::Json => json(&report),
        Output::Table => {
            let rows = report
                .iter()
                .map(|r| {
                    let first = match &r.first_nonzero_term {
                        Some(t) => format!("p[{}] hbar^{}: {}", t.mu, t.hbar, t.m_poly.factored()),
                        None => "-".to_string(),
                    };
                    vec![r.form.clone(), r.vanishes_through_weight.to_string(), first]
                })
                .collect();
            Ok(table(&["form", "vanishes through weight", "first nonzero residual"], rows))
        }
    }
}

fn cmd_conjecture(cli: &Cli, max_n: usize) -> Result<String, Failure> {
    check_bounds(cli, max_n, 1)?;
    let gf = build_s(max_n, 1)?;
    let reports = partitions_up_to(max_n)
        .iter()
        .map(|nu| conjecture_check(&gf, nu))
        .collect::<Result<Vec<ConjectureReport>, Error>>()?;
    match cli.output {
        Output::Json => json(&reports),
        Output::Table => {
            let rows = reports
                .iter()
                .map(|r| {
                    let quotient = r.quotient.as_ref().map_or("not divisible".to_string(), |q| q.factored());
                    let degree = if r.degree_bound_ok { "ok" } else { "fail" };
                    vec![r.nu.to_string(), r.divisor.factored(), quotient, degree.to_string()]
                })
                .collect();
            Ok(table(&["nu", "divisor", "quotient", "degree"], rows))
        }
    }
}

/// Left-aligned columns separated by two spaces, no trailing whitespace.
fn table(headers: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let header_row: Vec<String> = headers.iter().map(|h| h.to_string()).collect();
    for row in std::iter::once(&header_row).chain(&rows) {
        let mut line = String::new();
        for (i, cell) in row.iter().enumerate() {
            if i > 0 {
                line.push_str("  ");
            }
            line.push_str(cell);
            if i + 1 < row.len() {
                line.extend(std::iter::repeat_n(' ', widths[i] - cell.chars().count()));
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}
