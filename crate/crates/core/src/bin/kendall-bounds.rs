use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use kendall_bounds::bounds::{compute_bounds, parse_methods, BoundOptions, Method};
use kendall_bounds::cache::Cache;
use kendall_bounds::lp_bound::{certify, BoundReport, DualCheck};
use kendall_bounds::search::{needs_larger_budget, SearchOptions};
use kendall_bounds::{Error, Limits};

#[derive(Parser)]
#[command(
    name = "kendall-bounds",
    version,
    about = "Upper bounds on permutation codes under the Kendall tau metric"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format (bound, ccstats and verify default to json, table to csv)
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Cache directory [default: $KENDALL_BOUNDS_CACHE or ./.kb-cache]
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,

    /// Allow n = 11 for the LP and the class computations
    #[arg(long, global = true)]
    unsafe_allow_large: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Bounds for a single (n, dmin)
    Bound {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        dmin: usize,
        /// Comma-separated subset of lp,sb,hb,sdp,search
        #[arg(long, default_value = "lp,sb,hb")]
        methods: String,
        /// Branch nodes allowed for the exact search
        #[arg(long)]
        search_budget: Option<u64>,
    },
    /// Bounds for every dmin from 1 to n(n-1)/2
    Table {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "lp,sb,hb")]
        methods: String,
        #[arg(long)]
        search_budget: Option<u64>,
    },
    /// Numbers of conjugacy classes, symmetrized length classes and
    /// symmetrized Theta classes
    Ccstats {
        #[arg(long)]
        n: usize,
    },
    /// Solve the LP, rebuild the dual matrix explicitly and check it
    Verify {
        #[arg(long)]
        n: usize,
        /// Every dmin when omitted
        #[arg(long)]
        dmin: Option<usize>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(err) => {
            let code = exit_code(&err);
            let body = serde_json::json!({
                "error": err.kind(),
                "message": err.to_string(),
                "exit_code": code,
            });
            eprintln!("{body}");
            ExitCode::from(code)
        }
    }
}

fn exit_code(err: &Error) -> u8 {
    if err.is_precondition() {
        2
    } else if err.is_solver() {
        3
    } else {
        1
    }
}

fn run(cli: &Cli) -> Result<ExitCode, Error> {
    let limits = Limits::new(cli.unsafe_allow_large);
    let cache = Cache::new(Cache::resolve_dir(cli.cache_dir.as_deref()));
    let options = |budget: Option<u64>| BoundOptions {
        limits,
        search: SearchOptions {
            node_budget: budget.unwrap_or(SearchOptions::default().node_budget),
            ..SearchOptions::default()
        },
        dump_dir: Some(cache.dir().join("failures")),
    };
    let mut out = String::new();
    let mut status = ExitCode::SUCCESS;
    match &cli.command {
        Command::Bound { n, dmin, methods, search_budget } => {
            let methods = parse_methods(methods)?;
            let report = compute_bounds(*n, *dmin, &methods, Some(&cache), &options(*search_budget))?;
            match cli.format.unwrap_or(Format::Json) {
                Format::Json => out = json(&report)?,
                Format::Csv => {
                    out.push_str(&csv_header(&["n", "dmin"], &methods));
                    out.push_str(&csv_row(&[n.to_string()], &report, &methods));
                }
            }
        }
        Command::Table { n, methods, search_budget } => {
            let methods = parse_methods(methods)?;
            let opts = options(*search_budget);
            let max = n * n.saturating_sub(1) / 2;
            for m in &methods {
                m.check_cap(*n, &limits)?;
            }
            if max == 0 {
                return Err(Error::DistanceOutOfRange { n: *n, dmin: 1, max });
            }
            let rows: Vec<BoundReport> = (1..=max)
                .into_par_iter()
                .map(|dmin| table_row(*n, dmin, &methods, &cache, &opts))
                .collect::<Result<_, Error>>()?;
            match cli.format.unwrap_or(Format::Csv) {
                Format::Json => out = json(&rows)?,
                Format::Csv => {
                    out.push_str(&csv_header(&["dmin"], &methods));
                    for r in &rows {
                        out.push_str(&csv_row(&[], r, &methods));
                    }
                }
            }
        }
        Command::Ccstats { n } => {
            let counts = cache.class_counts(*n, &limits)?;
            match cli.format.unwrap_or(Format::Json) {
                Format::Json => out = json(&counts)?,
                Format::Csv => {
                    out = format!(
                        "n,conj,len,theta_sym\n{n},{},{},{}\n",
                        counts.conj, counts.len, counts.theta_sym
                    )
                }
            }
        }
        Command::Verify { n, dmin } => {
            let dmins: Vec<usize> = match dmin {
                Some(d) => vec![*d],
                None => (1..=n * n.saturating_sub(1) / 2).collect(),
            };
            let checks: Vec<VerifyRecord> = dmins
                .iter()
                .map(|&d| certify(*n, d, &limits).map(VerifyRecord::from))
                .collect::<Result<_, Error>>()?;
            if checks.iter().any(|c| !c.check.feasible) {
                status = ExitCode::from(3);
            }
            match cli.format.unwrap_or(Format::Json) {
                Format::Json if dmin.is_some() => out = json(&checks[0])?,
                Format::Json => out = json(&checks)?,
                Format::Csv => {
                    out.push_str("n,dmin,b1,min_eigenvalue,max_sign_residual,status\n");
                    for c in &checks {
                        let k = &c.check;
                        out.push_str(&format!(
                            "{},{},{},{},{},{}\n",
                            k.n, k.dmin, k.b1, k.min_eigenvalue, k.max_sign_residual, c.status
                        ));
                    }
                }
            }
        }
    }
    let mut stdout = std::io::stdout().lock();
    stdout.write_all(out.as_bytes())?;
    stdout.flush()?;
    Ok(status)
}

/// A row of `table`. A search the caller did not budget for (n = 5 with a
/// small dmin) leaves its cell empty instead of failing the whole table.
fn table_row(
    n: usize,
    dmin: usize,
    methods: &[Method],
    cache: &Cache,
    opts: &BoundOptions,
) -> Result<BoundReport, Error> {
    if methods.contains(&Method::Search) && needs_larger_budget(n, dmin, &opts.search) {
        eprintln!("note: search skipped for n = {n}, dmin = {dmin}; raise --search-budget to include it");
        let rest: Vec<Method> = methods.iter().copied().filter(|m| *m != Method::Search).collect();
        return compute_bounds(n, dmin, &rest, Some(cache), opts);
    }
    compute_bounds(n, dmin, methods, Some(cache), opts)
}

#[derive(Serialize)]
struct VerifyRecord {
    #[serde(flatten)]
    check: DualCheck,
    status: &'static str,
}

impl From<DualCheck> for VerifyRecord {
    fn from(check: DualCheck) -> Self {
        let status = if check.feasible { "feasible" } else { "infeasible" };
        VerifyRecord { check, status }
    }
}

fn json<T: Serialize>(value: &T) -> Result<String, Error> {
    Ok(serde_json::to_string(value)? + "\n")
}

fn csv_header(lead: &[&'static str], methods: &[Method]) -> String {
    let mut cols: Vec<&str> = lead.to_vec();
    cols.extend(methods.iter().map(Method::name));
    cols.join(",") + "\n"
}

fn csv_row(lead: &[String], report: &BoundReport, methods: &[Method]) -> String {
    let mut cols: Vec<String> = lead.to_vec();
    cols.push(report.dmin.to_string());
    cols.extend(methods.iter().map(|m| m.cell(report).unwrap_or_default()));
    cols.join(",") + "\n"
}
