use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use hopfcalc::fplinalg::is_prime;
use hopfcalc::hopf::{compute, HopfError, HopfResult};
use hopfcalc::oracle::{check_table, CheckRow, MultTable, OracleError, Verdict, DEFAULT_CAP};
use hopfcalc::presentation::{corpus, Presentation, SubstitutionMap, TABLE_ROWS};
use hopfcalc::rewrite::Budget;

mod format;

use format::{render_check, render_compute, render_table, Cell};

const USAGE: u8 = 1;
const INPUT: u8 = 2;
const UNAVAILABLE: u8 = 3;

/// Mod-p homology of finitely presented groups.
#[derive(Parser)]
#[command(name = "hopfcalc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute h1 and h2 for one presentation.
    Compute(ComputeArgs),
    /// Regenerate the h1 and h2 tables for the built-in groups.
    Table(TableArgs),
    /// Apply a substitution map and simplify.
    Simplify(SimplifyArgs),
    /// Compare the pipeline with the bar-complex oracle.
    OracleCheck(OracleArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
    Markdown,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Presentation file.
    #[arg(long, value_name = "FILE")]
    pres: Option<PathBuf>,
    /// Built-in presentation.
    #[arg(long, value_name = "NAME")]
    corpus: Option<String>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Primes {
    #[arg(long, value_name = "P")]
    prime: Option<u64>,
    #[arg(long, value_name = "P1,P2,...", value_delimiter = ',', num_args = 0..)]
    primes: Option<Vec<u64>>,
}

#[derive(Args)]
struct BudgetArgs {
    #[arg(long, value_name = "N")]
    budget_rules: Option<usize>,
    #[arg(long, value_name = "N")]
    budget_len: Option<usize>,
    #[arg(long, value_name = "N")]
    budget_steps: Option<u64>,
}

impl BudgetArgs {
    fn budget(&self) -> Budget {
        let d = Budget::default();
        Budget {
            max_rules: self.budget_rules.unwrap_or(d.max_rules),
            max_rule_length: self.budget_len.unwrap_or(d.max_rule_length),
            max_steps: self.budget_steps.unwrap_or(d.max_steps),
        }
    }
}

#[derive(Args)]
struct ComputeArgs {
    #[command(flatten)]
    source: Source,
    #[command(flatten)]
    primes: Primes,
    /// List candidate generators of H2.
    #[arg(long)]
    generators: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[command(flatten)]
    budget: BudgetArgs,
    /// Write the image matrix as CSV.
    #[arg(long, value_name = "FILE")]
    dump_matrix: Option<PathBuf>,
    /// Write the p-cover rewriting rules.
    #[arg(long, value_name = "FILE")]
    dump_rules: Option<PathBuf>,
}

#[derive(Args)]
struct TableArgs {
    #[arg(long, value_name = "P1,P2,...", value_delimiter = ',', num_args = 0.., default_value = "2,3,5,7")]
    primes: Vec<u64>,
    #[arg(long, value_enum, default_value = "markdown")]
    format: Format,
    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Args)]
struct SimplifyArgs {
    #[command(flatten)]
    source: Source,
    /// Substitution map file.
    #[arg(long, value_name = "FILE")]
    map: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    source: Source,
    #[command(flatten)]
    primes: Primes,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[command(flatten)]
    budget: BudgetArgs,
    /// Largest group order the oracle accepts.
    #[arg(long, value_name = "N", default_value_t = DEFAULT_CAP)]
    max_order: usize,
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

fn load(source: &Source) -> Result<(String, Presentation), Failure> {
    if let Some(name) = &source.corpus {
        let p = corpus(name).map_err(|e| fail(INPUT, e.to_string()))?;
        return Ok((name.clone(), p));
    }
    let path = source.pres.as_ref().expect("clap enforces one source");
    let text = std::fs::read_to_string(path)
        .map_err(|e| fail(INPUT, format!("{}: {e}", path.display())))?;
    let p = Presentation::parse(&text).map_err(|e| fail(INPUT, format!("{}:{e}", path.display())))?;
    let name = path
        .file_stem()
        .map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned());
    Ok((name, p))
}

fn check_primes(primes: &[u64]) -> Result<(), Failure> {
    if primes.is_empty() {
        return Err(fail(USAGE, "at least one prime is required"));
    }
    match primes.iter().find(|&&p| !is_prime(p)) {
        Some(p) => Err(fail(USAGE, format!("{p} is not prime"))),
        None => Ok(()),
    }
}

fn prime_list(p: &Primes) -> Result<Vec<u64>, Failure> {
    let list = match (&p.prime, &p.primes) {
        (Some(x), _) => vec![*x],
        (None, Some(v)) => v.clone(),
        (None, None) => vec![],
    };
    check_primes(&list)?;
    Ok(list)
}

fn hopf_failure(e: HopfError) -> Failure {
    match e {
        HopfError::NotPrime(_) => fail(USAGE, e.to_string()),
        _ => fail(INPUT, e.to_string()),
    }
}

fn write_file(path: &PathBuf, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| fail(INPUT, format!("{}: {e}", path.display())))
}

fn run_compute(a: &ComputeArgs) -> Result<String, Failure> {
    let (name, pres) = load(&a.source)?;
    let primes = prime_list(&a.primes)?;
    let budget = a.budget.budget();
    let results: Vec<HopfResult> = primes
        .par_iter()
        .map(|&p| compute(&pres, p, &budget))
        .collect::<Result<_, _>>()
        .map_err(hopf_failure)?;
    let sections = primes.len() > 1;
    if let Some(path) = &a.dump_matrix {
        let mut out = String::new();
        for r in &results {
            if sections {
                let _ = writeln!(out, "# p = {}", r.prime);
            }
            out.push_str(&r.image.to_csv());
        }
        write_file(path, &out)?;
    }
    if let Some(path) = &a.dump_rules {
        let mut out = String::new();
        for r in &results {
            if sections {
                let _ = writeln!(out, "# p = {}", r.prime);
            }
            out.push_str(&r.basis.cover_system().dump(r.basis.cover_names()));
        }
        write_file(path, &out)?;
    }
    Ok(render_compute(&name, &pres, &results, a.generators, a.format))
}

fn run_table(a: &TableArgs) -> Result<String, Failure> {
    check_primes(&a.primes)?;
    let budget = a.budget.budget();
    let jobs: Vec<(usize, u64)> = (0..TABLE_ROWS.len())
        .flat_map(|r| a.primes.iter().map(move |&p| (r, p)))
        .collect();
    let cells: Vec<Cell> = jobs
        .par_iter()
        .map(|&(r, p)| {
            let row = &TABLE_ROWS[r];
            let pres = corpus(row.name).map_err(|e| fail(INPUT, e.to_string()))?;
            let result = compute(&pres, p, &budget).map_err(hopf_failure)?;
            Ok(Cell {
                row: r,
                prime: p,
                names: pres.generator_names().to_vec(),
                result,
            })
        })
        .collect::<Result<_, Failure>>()?;
    Ok(render_table(&a.primes, &cells, a.format))
}

fn run_simplify(a: &SimplifyArgs) -> Result<String, Failure> {
    let (_, pres) = load(&a.source)?;
    let out = match &a.map {
        None => pres.simplify(),
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| fail(INPUT, format!("{}: {e}", path.display())))?;
            let map = SubstitutionMap::parse(&text)
                .map_err(|e| fail(INPUT, format!("{}: {e}", path.display())))?;
            pres.apply_substitution(&map)
                .map_err(|e| fail(INPUT, e.to_string()))?
                .simplify()
        }
    };
    let mut text = out.render();
    text.push('\n');
    Ok(text)
}

fn run_oracle(a: &OracleArgs) -> Result<(String, bool), Failure> {
    let (name, pres) = load(&a.source)?;
    let primes = prime_list(&a.primes)?;
    let budget = a.budget.budget();
    let unavailable = |e: OracleError| fail(UNAVAILABLE, format!("oracle unavailable: {e}"));
    let table = MultTable::from_presentation(&pres, &budget, a.max_order).map_err(unavailable)?;
    let rows: Vec<CheckRow> = primes
        .par_iter()
        .map(|&p| check_table(&pres, &table, p, &budget))
        .collect::<Result<_, _>>()
        .map_err(|e| match e {
            OracleError::Pipeline(h) => hopf_failure(h),
            other => unavailable(other),
        })?;
    let ok = rows.iter().all(|r| r.verdict == Verdict::Pass);
    Ok((render_check(&name, &rows, a.format), ok))
}

fn threads() -> Option<usize> {
    std::env::var("HOPFCALC_THREADS")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&n| n > 0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    if let Some(n) = threads() {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let result = match &cli.command {
        Command::Compute(a) => run_compute(a).map(|s| (s, true)),
        Command::Table(a) => run_table(a).map(|s| (s, true)),
        Command::Simplify(a) => run_simplify(a).map(|s| (s, true)),
        Command::OracleCheck(a) => run_oracle(a),
    };
    match result {
        Ok((out, ok)) => {
            print!("{out}");
            if ok {
                ExitCode::SUCCESS
            } else {
                eprintln!("error: pipeline disagrees with the oracle");
                ExitCode::from(USAGE)
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
