mod input;
mod report;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use insep_core::coverings::{connected_by_inseparable, inseparable_graph_dot, plan_chain, verify_chain, Mode, PlanOutcome};
use insep_core::derivation::{check_derivation, check_p_closed, fix_case, WITNESS_DEGREE};
use insep_core::quotient::{default_search_degree, quotient_presentation, GeneratorChoice};
use insep_core::selftest::{run_criteria, SelftestOptions};
use insep_core::tables::{bindings, row_by_id, table, verify_row, verify_table, SweepOptions, VerificationReport};
use insep_core::{classify, Derivation, Error, LocalHypersurface, RdpType};
use serde_json::json;

use input::{InputError, RingDocument};
use report::{Outcome, RunReport};

#[derive(Parser)]
#[command(name = "insep", version, about = "Purely inseparable degree-p morphisms between rational double points")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads for sweeps.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Truncation order, overriding documents and table defaults.
    #[arg(long, global = true)]
    trunc: Option<i32>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    UnramifiedFirst,
    EtaleLast,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the singularity of a ring document.
    Classify {
        ring: PathBuf,
        /// Fail unless the type equals this one, e.g. `D7^1/2`.
        #[arg(long)]
        expect: Option<String>,
    },
    /// Check that images define a p-closed derivation and locate its fixed locus.
    VerifyDerivation {
        ring: PathBuf,
        /// Images of the variables, comma separated, e.g. `x,-y,0`.
        #[arg(long, allow_hyphen_values = true)]
        derivation: String,
        /// Claimed witness `h` of `D^p = hD`; solved for when absent.
        #[arg(long, allow_hyphen_values = true)]
        h: Option<String>,
    },
    /// Present the ring of invariants of a derivation.
    Quotient {
        ring: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        derivation: String,
        /// Named invariant generator `NAME=EXPR`; repeat for each. Searched when absent.
        #[arg(long = "generator", allow_hyphen_values = true)]
        generators: Vec<String>,
        /// Degree bound for the invariant search.
        #[arg(long)]
        search_degree: Option<u32>,
        #[arg(long)]
        expect: Option<String>,
    },
    /// Verify table rows over a parameter sweep.
    VerifyTable {
        /// Table number: 1, 2, 3, 5 or 6.
        #[arg(long, required_unless_present = "row")]
        table: Option<u8>,
        /// A single row, e.g. `3.5`.
        #[arg(long)]
        row: Option<String>,
        #[arg(long)]
        max_param: Option<i64>,
        /// Characteristics for rows valid in every characteristic.
        #[arg(long, value_delimiter = ',')]
        primes: Option<Vec<u64>>,
        /// Values of `l` for rows with a free `l`.
        #[arg(long, value_delimiter = ',')]
        ls: Option<Vec<i64>>,
    },
    /// Plan and verify a chain from an RDP to a smooth germ.
    Chain {
        #[arg(long = "type")]
        ty: String,
        #[arg(long)]
        p: u64,
        #[arg(long, value_enum, default_value_t = ModeArg::UnramifiedFirst)]
        mode: ModeArg,
    },
    /// Inseparable connectivity graph as DOT, or a path between two types.
    Graph {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 3)]
        max_param: i64,
        #[arg(long, requires = "to")]
        from: Option<String>,
        #[arg(long, requires = "from")]
        to: Option<String>,
    },
    /// Run the acceptance suite.
    Selftest {
        /// Criteria to run, e.g. `AC1,AC4`; all when absent.
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Classify { .. } => "classify",
            Command::VerifyDerivation { .. } => "verify-derivation",
            Command::Quotient { .. } => "quotient",
            Command::VerifyTable { .. } => "verify-table",
            Command::Chain { .. } => "chain",
            Command::Graph { .. } => "graph",
            Command::Selftest { .. } => "selftest",
        }
    }
}

enum Failure {
    Input(String),
    Compute(String),
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::Input(e.0)
    }
}

/// Errors caused by the request itself are input errors; the rest are
/// negative results of a computation.
impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. }
            | Error::UnknownType(_)
            | Error::OutOfRange(_)
            | Error::CharMismatch(_)
            | Error::InvalidField(_)
            | Error::VariableMismatch(_) => Failure::Input(e.to_string()),
            _ => Failure::Compute(e.to_string()),
        }
    }
}

/// Outcome, certification order, machine-readable result and text summary.
struct Done {
    outcome: Outcome,
    order: Option<i32>,
    result: serde_json::Value,
    text: String,
}

fn parse_type(s: &str) -> Result<RdpType, Failure> {
    s.parse::<RdpType>().map_err(|e| Failure::Input(format!("type `{s}`: {e}")))
}

fn parse_derivation(b: &LocalHypersurface, list: &str) -> Result<Derivation, Failure> {
    let images: Vec<&str> = list.split(',').map(str::trim).collect();
    Derivation::parse(b, &images).map_err(|e| Failure::Input(format!("derivation: {e}")))
}

fn expectation(got: RdpType, expect: Option<&str>, p: u64) -> Result<(Outcome, String), Failure> {
    Ok(match expect {
        None => (if got == RdpType::NotRdp { Outcome::Fail } else { Outcome::Pass }, String::new()),
        Some(e) => {
            let want = parse_type(e)?.normalized(p);
            if got == want {
                (Outcome::Pass, " (as expected)".to_string())
            } else {
                (Outcome::Fail, format!(" (expected {want})"))
            }
        }
    })
}

fn run_classify(cli: &Cli, ring: &Path, expect: Option<&str>) -> Result<Done, Failure> {
    let b = RingDocument::load(ring)?.hypersurface(cli.trunc)?;
    let c = classify(&b)?;
    let (outcome, note) = expectation(c.ty, expect, b.p())?;
    Ok(Done {
        outcome,
        order: Some(b.n()),
        result: json!({ "type": c.ty, "description": c.ty.describe(), "tau": c.tau, "graph": c.graph }),
        text: format!("{}{note}", c.ty.describe()),
    })
}

fn run_verify_derivation(cli: &Cli, ring: &Path, derivation: &str, h: Option<&str>) -> Result<Done, Failure> {
    let b = RingDocument::load(ring)?.hypersurface(cli.trunc)?;
    let d = parse_derivation(&b, derivation)?;
    let claimed = h.map(|s| b.parse_element(s)).transpose().map_err(|e| Failure::Input(format!("h: {e}")))?;
    let check = check_derivation(&b, &d)?;
    let witness = check_p_closed(&b, &d, claimed.as_ref(), WITNESS_DEGREE);
    let fix = fix_case(&b, &d);
    let pass = check.pass && witness.is_ok();
    let witness_text = match &witness {
        Ok(h) => format!("h = {}", h.display()),
        Err(e) => e.to_string(),
    };
    let fix_text = match &fix {
        Ok(f) => f.tag().to_string(),
        Err(e) => e.to_string(),
    };
    Ok(Done {
        outcome: if pass { Outcome::Pass } else { Outcome::Fail },
        order: Some(b.n()),
        result: json!({
            "derivation": check.pass,
            "residual": check.residual.display(),
            "p_closed": witness.is_ok(),
            "witness": witness_text,
            "fix_case": fix.as_ref().ok(),
            "fix_error": fix.as_ref().err().map(|e| e.to_string()),
        }),
        text: format!(
            "derivation: {}\np-closed: {witness_text}\nfixed locus: {fix_text}",
            if check.pass { "yes" } else { "no" }
        ),
    })
}

fn run_quotient(
    cli: &Cli,
    ring: &Path,
    derivation: &str,
    generators: &[String],
    search_degree: Option<u32>,
    expect: Option<&str>,
) -> Result<Done, Failure> {
    let b = RingDocument::load(ring)?.hypersurface(cli.trunc)?;
    let d = parse_derivation(&b, derivation)?;
    let choice = if generators.is_empty() {
        GeneratorChoice::Search { d_bound: search_degree.unwrap_or_else(|| default_search_degree(b.p())) }
    } else {
        let named = generators
            .iter()
            .map(|g| {
                let (name, expr) = g.split_once('=').ok_or_else(|| Failure::Input(format!("generator `{g}`: expected NAME=EXPR")))?;
                let s = b.parse_element(expr).map_err(|e| Failure::Input(format!("generator {name}: {e}")))?;
                Ok((name.trim().to_string(), s))
            })
            .collect::<Result<Vec<_>, Failure>>()?;
        GeneratorChoice::Given(named)
    };
    let q = quotient_presentation(&b, &d, &choice)?;
    let (outcome, note) = expectation(q.ty, expect, b.p())?;
    let report = q.report();
    let gens: Vec<String> = report.generators.iter().map(|(n, g)| format!("{n} = {g}")).collect();
    Ok(Done {
        outcome,
        order: Some(q.order),
        text: format!(
            "generators: {}\nrelation: {}\ntype: {}{note}",
            gens.join(", "),
            report.relation.as_deref().unwrap_or("none (regular)"),
            q.ty.describe()
        ),
        result: serde_json::to_value(&report).expect("report serializes"),
    })
}

fn sweep_options(cli: &Cli, max_param: Option<i64>, primes: &Option<Vec<u64>>, ls: &Option<Vec<i64>>) -> SweepOptions {
    let mut opts = SweepOptions { max_param, trunc: cli.trunc, jobs: cli.jobs, ..Default::default() };
    if let Some(p) = primes {
        opts.primes = p.clone();
    }
    if let Some(l) = ls {
        opts.ls = l.clone();
    }
    opts
}

fn run_verify_table(tab: Option<u8>, row: Option<&str>, opts: &SweepOptions) -> Result<Done, Failure> {
    let reports: Vec<VerificationReport> = match row {
        Some(id) => {
            let row = row_by_id(id)?;
            bindings(&row, opts).iter().map(|b| verify_row(&row, b, opts.trunc)).collect::<Result<_, _>>()?
        }
        None => {
            let id = tab.expect("clap requires --table or --row");
            if table(id).is_empty() {
                return Err(Failure::Input(format!("table {id}: no such table (use 1, 2, 3, 5 or 6)")));
            }
            verify_table(id, opts)?
        }
    };
    let failing = reports.iter().filter(|r| !r.pass).count();
    let mut text: Vec<String> = reports
        .iter()
        .map(|r| {
            let bad: Vec<&str> = r.checks.iter().filter(|c| !c.pass && !c.informational).map(|c| c.name.as_str()).collect();
            let status = if r.pass { "PASS".to_string() } else { format!("FAIL {bad:?} {}", r.error.as_deref().unwrap_or("")) };
            format!("{:<5} {:<24} {status}", r.row, r.binding.to_string())
        })
        .collect();
    text.push(format!("{} reports, {failing} failing", reports.len()));
    Ok(Done {
        outcome: if failing == 0 && !reports.is_empty() { Outcome::Pass } else { Outcome::Fail },
        order: reports.iter().map(|r| r.order).min(),
        result: serde_json::to_value(&reports).expect("reports serialize"),
        text: text.join("\n"),
    })
}

fn run_chain(cli: &Cli, ty: &str, p: u64, mode: ModeArg) -> Result<Done, Failure> {
    let ty = parse_type(ty)?;
    let mode = match mode {
        ModeArg::UnramifiedFirst => Mode::UnramifiedFirst,
        ModeArg::EtaleLast => Mode::EtaleLast,
    };
    match plan_chain(p, ty, mode)? {
        PlanOutcome::Impossible { reason } => Ok(Done {
            outcome: Outcome::Impossible,
            order: None,
            text: format!("Impossible per exclusion set: {reason}"),
            result: json!({ "outcome": "impossible", "reason": reason }),
        }),
        PlanOutcome::Plan(plan) => {
            let report = verify_chain(&plan, cli.trunc);
            let mut text = vec![format!("{} in characteristic {p}", plan.start)];
            for s in &report.steps {
                text.push(format!("  {} <- {}: {} [{}]", s.step.from, s.step.to, s.detail, if s.pass { "ok" } else { "FAIL" }));
            }
            text.push(format!("chain {}", if report.pass { "verified" } else { "FAILED" }));
            Ok(Done {
                outcome: if report.pass { Outcome::Pass } else { Outcome::Fail },
                order: report.steps.iter().filter_map(|s| s.row_report.as_ref().map(|r| r.order)).min(),
                result: json!({ "plan": plan, "verification": report }),
                text: text.join("\n"),
            })
        }
    }
}

fn run_graph(p: u64, max_param: i64, from: Option<&str>, to: Option<&str>) -> Result<Done, Failure> {
    if !insep_core::field::is_prime(p) {
        return Err(Failure::Input(format!("p: {p} is not prime")));
    }
    match (from, to) {
        (Some(a), Some(b)) => {
            let (a, b) = (parse_type(a)?, parse_type(b)?);
            let path = connected_by_inseparable(a, b, p, max_param);
            let text = match &path {
                None => format!("{a} and {b} are not connected with parameters up to {max_param}"),
                Some(path) if path.is_empty() => format!("{a} = {b}"),
                Some(path) => path
                    .iter()
                    .map(|e| format!("{} -- {} via {} ({}){}", e.from, e.to, e.row, e.binding, if e.ramified { " ramified" } else { "" }))
                    .collect::<Vec<_>>()
                    .join("\n"),
            };
            Ok(Done {
                outcome: if path.is_some() { Outcome::Pass } else { Outcome::Fail },
                order: None,
                result: json!({ "path": path }),
                text,
            })
        }
        _ => {
            let dot = inseparable_graph_dot(p, max_param);
            Ok(Done { outcome: Outcome::Pass, order: None, result: json!({ "dot": dot }), text: dot.trim_end().to_string() })
        }
    }
}

fn run_selftest(cli: &Cli, only: &[String], seed: Option<u64>) -> Result<Done, Failure> {
    let mut opts = SelftestOptions { jobs: cli.jobs, ..Default::default() };
    if let Some(s) = seed {
        opts.seed = s;
    }
    let only: Vec<&str> = only.iter().map(String::as_str).collect();
    let results = run_criteria(&only, &opts);
    if results.is_empty() {
        return Err(Failure::Input(format!("only: no criterion among {only:?}")));
    }
    let pass = results.iter().all(|r| r.pass);
    Ok(Done {
        outcome: if pass { Outcome::Pass } else { Outcome::Fail },
        order: None,
        text: results.iter().map(|r| r.line()).collect::<Vec<_>>().join("\n"),
        result: serde_json::to_value(&results).expect("results serialize"),
    })
}

fn dispatch(cli: &Cli) -> Result<Done, Failure> {
    match &cli.command {
        Command::Classify { ring, expect } => run_classify(cli, ring, expect.as_deref()),
        Command::VerifyDerivation { ring, derivation, h } => run_verify_derivation(cli, ring, derivation, h.as_deref()),
        Command::Quotient { ring, derivation, generators, search_degree, expect } => {
            run_quotient(cli, ring, derivation, generators, *search_degree, expect.as_deref())
        }
        Command::VerifyTable { table, row, max_param, primes, ls } => {
            run_verify_table(*table, row.as_deref(), &sweep_options(cli, *max_param, primes, ls))
        }
        Command::Chain { ty, p, mode } => run_chain(cli, ty, *p, *mode),
        Command::Graph { p, max_param, from, to } => run_graph(*p, *max_param, from.as_deref(), to.as_deref()),
        Command::Selftest { only, seed } => run_selftest(cli, only, *seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = std::time::Instant::now();
    let args: Vec<String> = std::env::args().skip(1).collect();
    let name = cli.command.name().to_string();
    let digest = report::inputs_digest(&args);
    let done = dispatch(&cli);
    let (report, text) = match done {
        Ok(d) => (RunReport::new(name, digest, d.outcome, d.order, d.result, started), d.text),
        Err(Failure::Input(msg)) => {
            (RunReport::new(name, digest, Outcome::InputError, None, json!({ "error": msg }), started), format!("input error: {msg}"))
        }
        Err(Failure::Compute(msg)) => {
            (RunReport::new(name, digest, Outcome::Fail, None, json!({ "error": msg }), started), format!("failed: {msg}"))
        }
    };
    match cli.format {
        // A closed pipe downstream is not worth a panic.
        Format::Json => {
            let _ = writeln!(std::io::stdout(), "{}", serde_json::to_string_pretty(&report).expect("report serializes"));
        }
        Format::Text if report.outcome == Outcome::InputError => eprintln!("{text}"),
        Format::Text => {
            let mut out = std::io::stdout();
            let _ = writeln!(out, "{text}");
            if let Some(c) = &report.certification {
                let _ = writeln!(out, "({c})");
            }
        }
    }
    ExitCode::from(report.outcome.exit_code())
}
