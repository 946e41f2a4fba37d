use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use ballotmat::counting;
use ballotmat::verify::{self, Check};
use ballotmat::{poset, BallotMatrix, Error, IntSet};

mod map;

#[derive(Parser)]
#[command(
    name = "ballotmat",
    version,
    about = "Ballot matrices and labeled interval orders"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count labeled interval orders or evaluate a set statistic
    #[command(subcommand)]
    Count(CountCommand),
    /// Stream objects on [n], one per line
    Enumerate {
        kind: EnumerateKind,
        #[arg(long)]
        n: usize,
        /// Write newline-delimited JSON instead of text
        #[arg(long)]
        json: bool,
    },
    /// Read one JSON object from stdin and write its image to stdout
    Map {
        kind: map::MapKind,
        /// For cc-to-invtab: use the missing-entry construction
        #[arg(long)]
        missing: bool,
    },
    /// Run a property suite and print one line per property
    Verify {
        suite: Suite,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

#[derive(Subcommand)]
enum CountCommand {
    /// Labeled interval orders on [n]; several methods are cross-checked
    Lio {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "formula")]
        method: Vec<Method>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        json: bool,
    },
    /// Permutations with descent set inside S
    Alpha(SetArgs),
    /// Permutations with descent set exactly S
    Beta(SetArgs),
    /// Permutations with ascent-bottom set inside S
    Kappa(SetArgs),
    /// Permutations with ascent-bottom set exactly S
    Lambda(SetArgs),
}

#[derive(Args)]
struct SetArgs {
    #[arg(long)]
    n: usize,
    /// Comma-separated elements of [n-1]
    #[arg(long, default_value = "", value_parser = parse_set)]
    set: IntSet,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    /// Sum of beta * kappa over subsets
    Formula,
    /// Sum of alpha * lambda over subsets
    FormulaAlt,
    /// Pairs of permutations with A(tau) inside D(pi)
    Pairs,
    /// Pairs of permutations with D(pi) inside A(tau)
    PairsAlt,
    /// Brute-force search over labeled posets
    Oracle,
    /// Enumerate fixed points of the involution
    FixedPoints,
}

#[derive(Clone, Copy, ValueEnum)]
enum EnumerateKind {
    FixedPoints,
    IntervalOrders,
    BallotMatrices,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Involution,
    Preservation,
    Bijections,
    Counts,
}

/// A failed command: exit status plus message for stderr.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::SizeGuard { .. }) {
            3
        } else {
            2
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure {
            code: 2,
            message: format!("invalid JSON input: {e}"),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure {
            code: 2,
            message: format!("i/o error: {e}"),
        }
    }
}

fn parse_set(s: &str) -> Result<IntSet, String> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<u32>()
                .map_err(|e| format!("bad element {t:?}: {e}"))
        })
        .collect()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let result = run(cli.command, &mut out).and_then(|code| {
        out.flush()?;
        Ok(code)
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            let _ = out.flush();
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command, out: &mut impl Write) -> Result<u8, Failure> {
    match command {
        Command::Count(c) => count(c, out),
        Command::Enumerate { kind, n, json } => enumerate(kind, n, json, out).map(|()| 0),
        Command::Map { kind, missing } => {
            let mut input = String::new();
            io::stdin().read_to_string(&mut input)?;
            writeln!(out, "{}", map::apply(kind, missing, &input)?)?;
            Ok(0)
        }
        Command::Verify { suite, n, jobs } => {
            let checks = match suite {
                Suite::Involution => verify::involution_suite(n)?,
                Suite::Preservation => verify::preservation_suite(n)?,
                Suite::Bijections => verify::bijection_suite(n)?,
                Suite::Counts => verify::counts_suite(n, jobs)?,
            };
            for c in &checks {
                writeln!(out, "{c}")?;
            }
            Ok(if checks.iter().any(Check::failed) {
                1
            } else {
                0
            })
        }
    }
}

fn print_count(value: &counting::BigCount, json: bool, out: &mut impl Write) -> io::Result<()> {
    if json {
        writeln!(out, "{}", json!({ "value": value.to_string() }))
    } else {
        writeln!(out, "{value}")
    }
}

fn lio_by(method: Method, n: usize, jobs: usize) -> ballotmat::Result<counting::BigCount> {
    match method {
        Method::Formula => counting::count_lio_with_jobs(n, jobs),
        Method::FormulaAlt => counting::count_lio_alpha_lambda(n),
        Method::Pairs => counting::count_pairs_ab_in_d(n),
        Method::PairsAlt => counting::count_pairs_d_in_ab(n),
        Method::Oracle => Ok(poset::enumerate_labeled_interval_orders(n)?.len().into()),
        Method::FixedPoints => Ok(ballotmat::fixedpoint::fixed_points_for(&IntSet::range(
            n as u32,
        ))?
        .len()
        .into()),
    }
}

type SetStatistic = fn(usize, &IntSet) -> ballotmat::Result<counting::BigCount>;

fn count(command: CountCommand, out: &mut impl Write) -> Result<u8, Failure> {
    let (args, f): (SetArgs, SetStatistic) = match command {
        CountCommand::Lio {
            n,
            mut method,
            jobs,
            json,
        } => {
            method.dedup();
            let values = method
                .iter()
                .map(|&m| lio_by(m, n, jobs).map(|v| (m, v)))
                .collect::<ballotmat::Result<Vec<_>>>()?;
            if let [(_, v)] = values.as_slice() {
                print_count(v, json, out)?;
                return Ok(0);
            }
            let agree = values.windows(2).all(|w| w[0].1 == w[1].1);
            if json {
                let map: serde_json::Map<String, serde_json::Value> = values
                    .iter()
                    .map(|(m, v)| (method_name(*m), json!(v.to_string())))
                    .collect();
                writeln!(out, "{}", json!({ "values": map, "agree": agree }))?;
            } else {
                for (m, v) in &values {
                    writeln!(out, "{}: {v}", method_name(*m))?;
                }
                writeln!(out, "{}", if agree { "agree" } else { "DISAGREE" })?;
            }
            return Ok(if agree { 0 } else { 1 });
        }
        CountCommand::Alpha(a) => (a, counting::alpha),
        CountCommand::Beta(a) => (a, counting::beta),
        CountCommand::Kappa(a) => (a, counting::kappa),
        CountCommand::Lambda(a) => (a, counting::lambda),
    };
    print_count(&f(args.n, &args.set)?, args.json, out)?;
    Ok(0)
}

fn method_name(m: Method) -> String {
    m.to_possible_value()
        .expect("no skipped variants")
        .get_name()
        .to_string()
}

fn enumerate(
    kind: EnumerateKind,
    n: usize,
    json: bool,
    out: &mut impl Write,
) -> Result<(), Failure> {
    let u = IntSet::range(n as u32);
    match kind {
        EnumerateKind::FixedPoints => {
            let items: Vec<BallotMatrix> = ballotmat::fixedpoint::fixed_points_for(&u)?
                .into_iter()
                .map(|f| f.into_matrix())
                .collect();
            write_matrices(&items, json, out)
        }
        EnumerateKind::BallotMatrices => write_matrices(&BallotMatrix::enumerate(&u)?, json, out),
        EnumerateKind::IntervalOrders => {
            for p in poset::enumerate_labeled_interval_orders(n)? {
                if json {
                    writeln!(out, "{}", serde_json::to_string(&p)?)?;
                } else {
                    writeln!(out, "{p}")?;
                }
            }
            Ok(())
        }
    }
}

fn write_matrices(items: &[BallotMatrix], json: bool, out: &mut impl Write) -> Result<(), Failure> {
    for (k, a) in items.iter().enumerate() {
        if json {
            writeln!(out, "{}", serde_json::to_string(a)?)?;
        } else {
            if k > 0 {
                writeln!(out)?;
            }
            writeln!(out, "{a}")?;
        }
    }
    Ok(())
}
