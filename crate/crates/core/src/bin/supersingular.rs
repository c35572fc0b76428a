//! Command-line harness: verify catalog curves prime by prime, inspect a
//! single curve, or tabulate Frobenius data.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use supersingular::count::DEFAULT_BUDGET;
use supersingular::curves::builtin_catalog;
use supersingular::verify::{
    discriminant_summary, format_integer_poly, galois_table, inspect, load_catalog,
    parse_curve_spec, render_csv, render_jsonl, render_table, verify_entry, Verdict, VerifyOptions,
    DEFAULT_CROSSCHECK_LIMIT,
};
use supersingular::CatalogEntry;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser, Debug)]
#[command(
    version,
    about = "Check explicit supersingular superelliptic curves by exact point counting"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Jsonl,
    Csv,
}

#[derive(Args, Debug)]
struct RunOpts {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,

    /// Largest q = p^k enumerated for one (curve, k)
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,

    /// Worker threads (0 = one per core)
    #[arg(long, default_value_t = 0)]
    threads: usize,

    /// Cross-check predicted N_{g+1} by a fresh count when p^{g+1} is at most this
    #[arg(long, default_value_t = DEFAULT_CROSSCHECK_LIMIT)]
    crosscheck_limit: u64,

    /// Leave timings out so output is byte-for-byte reproducible
    #[arg(long)]
    no_timings: bool,
}

impl RunOpts {
    fn verify_options(&self) -> VerifyOptions {
        let mut opts = VerifyOptions::default();
        opts.count.budget = self.budget;
        opts.crosscheck_limit = self.crosscheck_limit;
        opts.timings = !self.no_timings;
        opts
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Verify a catalog family (M6, M8, M16, or a catalog entry name) over a prime range
    Verify {
        family: String,
        #[arg(long, default_value_t = 2)]
        pmin: u64,
        #[arg(long)]
        pmax: u64,
        /// Extra catalog entries (JSON array, same shape as `catalog --format jsonl`)
        #[arg(long)]
        catalog: Option<PathBuf>,
        #[command(flatten)]
        run: RunOpts,
    },
    /// Full report for y^m = f(x) over F_p
    Inspect {
        /// "m:c0,c1,..." with signed coefficients, low degree first
        #[arg(long, allow_hyphen_values = true)]
        curve: String,
        #[arg(long)]
        p: u64,
        #[command(flatten)]
        run: RunOpts,
    },
    /// Frobenius orders and splitting in the three cyclic fields
    Galois {
        #[arg(long, default_value_t = 2)]
        pmin: u64,
        #[arg(long)]
        pmax: u64,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Print the curve catalog with polynomial discriminants
    Catalog {
        #[arg(long)]
        catalog: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
}

fn configure_threads(threads: usize) {
    if threads > 0 {
        // Only fails if a global pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
}

fn catalog_with(extra: Option<&PathBuf>) -> Result<Vec<CatalogEntry>, String> {
    let mut entries = builtin_catalog();
    if let Some(path) = extra {
        entries.extend(load_catalog(path).map_err(|e| e.to_string())?);
    }
    Ok(entries)
}

fn find_entry<'a>(entries: &'a [CatalogEntry], family: &str) -> Option<&'a CatalogEntry> {
    entries.iter().find(|e| e.name == family).or_else(|| {
        let label = family.parse().ok()?;
        entries.iter().find(|e| e.label == label)
    })
}

fn run(cli: Cli) -> Result<u8, String> {
    match cli.command {
        Command::Verify {
            family,
            pmin,
            pmax,
            catalog,
            run,
        } => {
            if pmax < 2 {
                return Err("--pmax must be at least 2".into());
            }
            configure_threads(run.threads);
            let entries = catalog_with(catalog.as_ref())?;
            let entry = find_entry(&entries, &family)
                .ok_or_else(|| format!("no catalog entry named {family:?}"))?;
            let reports = verify_entry(entry, pmin, pmax, &run.verify_options());
            let out = match run.format {
                Format::Table => render_table(&reports),
                Format::Jsonl => render_jsonl(&reports),
                Format::Csv => render_csv(&reports),
            };
            print!("{out}");
            let fails = reports
                .iter()
                .filter(|r| r.verdict == Some(Verdict::Fail))
                .count();
            let skipped = reports
                .iter()
                .filter(|r| r.verdict == Some(Verdict::Skipped))
                .count();
            if run.format == Format::Table {
                println!(
                    "{}: {} primes, {} failed, {} skipped",
                    entry.name,
                    reports.len(),
                    fails,
                    skipped
                );
            }
            Ok(if fails == 0 { 0 } else { EXIT_FAIL })
        }
        Command::Inspect { curve, p, run } => {
            configure_threads(run.threads);
            let (m, f) = parse_curve_spec(&curve)?;
            let report = inspect(m, &f, p, &run.verify_options()).map_err(|e| e.to_string())?;
            let reports = [report];
            let out = match run.format {
                Format::Table => render_table(&reports),
                Format::Jsonl => render_jsonl(&reports),
                Format::Csv => render_csv(&reports),
            };
            print!("{out}");
            Ok(0)
        }
        Command::Galois { pmin, pmax, format } => {
            let rows = galois_table(pmin, pmax);
            match format {
                Format::Jsonl => {
                    for r in &rows {
                        println!("{}", serde_json::to_string(r).expect("rows serialize"));
                    }
                }
                Format::Csv => {
                    println!("p,field,n,frobenius_order,even_order,splitting_count,violations");
                    for r in &rows {
                        println!(
                            "{},{},{},{},{},{},{}",
                            r.p,
                            r.field,
                            r.n,
                            r.frobenius_order,
                            r.even_order,
                            r.splitting_count,
                            r.violations.join(";")
                        );
                    }
                }
                Format::Table => {
                    println!(
                        "{:>6}  {:<18} {:>3}  {:>5}  {:<4}  {:>5}  p mod 3,4,5",
                        "p", "field", "n", "order", "even", "split"
                    );
                    for r in &rows {
                        println!(
                            "{:>6}  {:<18} {:>3}  {:>5}  {:<4}  {:>5}  {:?}{}",
                            r.p,
                            r.field,
                            r.n,
                            r.frobenius_order,
                            if r.even_order { "yes" } else { "no" },
                            r.splitting_count,
                            r.residues,
                            if r.violations.is_empty() {
                                String::new()
                            } else {
                                format!("  VIOLATION: {}", r.violations.join("; "))
                            }
                        );
                    }
                }
            }
            let bad = rows.iter().any(|r| !r.violations.is_empty());
            Ok(if bad { EXIT_FAIL } else { 0 })
        }
        Command::Catalog { catalog, format } => {
            let entries = catalog_with(catalog.as_ref())?;
            match format {
                Format::Jsonl | Format::Csv => {
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&entries).expect("catalog serializes")
                    );
                }
                Format::Table => {
                    for e in &entries {
                        println!(
                            "{} {}: m={} f={} ({:?}), {}",
                            e.label,
                            e.name,
                            e.m,
                            format_integer_poly(&e.f_integer),
                            e.model,
                            e.prime_condition
                        );
                        for x in &e.exceptional_primes {
                            println!("    p={}: f={}", x.p, format_integer_poly(&x.f_integer));
                        }
                        print!("{}", discriminant_summary(e));
                    }
                }
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
