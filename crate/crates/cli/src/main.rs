//! `sumfree` — exact (k,l)-sum-free densities from the command line.
//!
//! Every invocation is fully determined by its flags: identical argv yields
//! byte-identical output, including witness choice and node counts, for any
//! `--parallel` setting.
//!
//! Exit codes: 0 success, 1 usage or contract error, 2 formula/oracle
//! verification mismatch.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use sumfree_core::{
    interval_witness, lambda_cyclic, lambda_sumfree_abelian, max_shifted_sum_free, max_sum_free,
    shifted_argmin, survey_shifted, verify_range, Error, FiniteAbelianGroup, FormulaResult,
    GroupSubset, SearchConfig, SearchOutcome, SurveyRecord, CSV_HEADER,
};

/// Environment variable consulted when `--cache-dir` is not given.
const CACHE_DIR_ENV: &str = "SUMFREE_CACHE_DIR";

#[derive(Parser)]
#[command(
    name = "sumfree",
    version,
    about = "Exact maximum (k,l)-sum-free set densities in finite abelian groups",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Args)]
struct PairArgs {
    /// Fold count k of the smaller iterated sumset (1 <= k < l).
    #[arg(long)]
    k: u32,
    /// Fold count l of the larger iterated sumset.
    #[arg(long)]
    l: u32,
}

#[derive(Args)]
struct TargetArgs {
    /// Order of a cyclic group Z_n.
    #[arg(long, conflicts_with = "group")]
    n: Option<u64>,
    /// Group literal, e.g. "Z_2 x Z_4".
    #[arg(long)]
    group: Option<String>,
}

impl TargetArgs {
    fn resolve(&self) -> Result<FiniteAbelianGroup, Error> {
        match (&self.n, &self.group) {
            (Some(n), None) => FiniteAbelianGroup::cyclic(*n),
            (None, Some(lit)) => lit.parse(),
            _ => Err(Error::Parse(
                "exactly one of --n or --group is required".into(),
            )),
        }
    }
}

#[derive(Args)]
struct EngineArgs {
    /// Worker threads for the search; 0 runs serially.
    #[arg(long, default_value_t = 0)]
    parallel: usize,
    /// Node cap for the search; exhaustion reports an incomplete outcome.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    node_budget: Option<u64>,
}

impl EngineArgs {
    fn config(&self) -> SearchConfig {
        SearchConfig {
            parallel_branches: self.parallel,
            node_budget: self.node_budget,
            ..SearchConfig::default()
        }
    }
}

#[derive(Args)]
struct RangeArgs {
    /// First n of the sweep (inclusive).
    #[arg(long)]
    from: u64,
    /// Last n of the sweep (inclusive).
    #[arg(long)]
    to: u64,
    /// Directory for resumable per-(k,l,C) result caches.
    #[arg(long)]
    cache_dir: Option<PathBuf>,
}

impl RangeArgs {
    fn cache_dir(&self) -> Option<PathBuf> {
        self.cache_dir
            .clone()
            .or_else(|| std::env::var_os(CACHE_DIR_ENV).map(PathBuf::from))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the closed-form density formula.
    Formula {
        #[command(flatten)]
        pair: PairArgs,
        #[command(flatten)]
        target: TargetArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Exact maximum (k,l)-sum-free set by certified search.
    Search {
        #[command(flatten)]
        pair: PairArgs,
        #[command(flatten)]
        target: TargetArgs,
        #[command(flatten)]
        engine: EngineArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Exact maximum under the shifted operation A *_C B = C + A + B.
    Shifted {
        #[command(flatten)]
        pair: PairArgs,
        #[command(flatten)]
        target: TargetArgs,
        /// Shift set literal; reduced mod n on cyclic groups.
        #[arg(long = "C", default_value = "{0}", value_name = "SET")]
        shift: String,
        #[command(flatten)]
        engine: EngineArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Sweep a range of n, checking the formula against the search oracle.
    Verify {
        #[command(flatten)]
        pair: PairArgs,
        #[command(flatten)]
        range: RangeArgs,
        #[command(flatten)]
        engine: EngineArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Survey the shifted invariant over a range of n.
    Survey {
        #[command(flatten)]
        pair: PairArgs,
        #[command(flatten)]
        range: RangeArgs,
        /// Shift set literal; the survey is defined for {0,1}.
        #[arg(long = "C", default_value = "{0,1}", value_name = "SET")]
        shift: String,
        #[command(flatten)]
        engine: EngineArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Construct the interval-derived shifted-sum-free witness in Z_n.
    Witness {
        #[command(flatten)]
        pair: PairArgs,
        /// Order of the cyclic group; l^2 - k^2 must divide it.
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            if matches!(err, Error::VerifyMismatch { .. }) {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn run(command: Command) -> Result<(), Error> {
    match command {
        Command::Formula {
            pair,
            target,
            format,
        } => {
            let group = target.resolve()?;
            let result = if target.n.is_some() {
                lambda_cyclic(pair.k, pair.l, group.order())?
            } else {
                if (pair.k, pair.l) != (1, 2) {
                    return Err(Error::Parse(
                        "--group formulas exist only for (k,l) = (1,2); \
                         use search for other pairs"
                            .into(),
                    ));
                }
                lambda_sumfree_abelian(&group)
            };
            print_formula(&pair, &target, &group, &result, format);
            Ok(())
        }
        Command::Search {
            pair,
            target,
            engine,
            format,
        } => {
            let group = target.resolve()?;
            let out = max_sum_free(&group, pair.k, pair.l, &engine.config())?;
            let shift = GroupSubset::singleton(group.clone(), 0)?;
            print_outcome(&pair, &group, &shift, &out, format, "lambda");
            Ok(())
        }
        Command::Shifted {
            pair,
            target,
            shift,
            engine,
            format,
        } => {
            let group = target.resolve()?;
            let shift = parse_shift_set(&group, &shift)?;
            let out = max_shifted_sum_free(&group, pair.k, pair.l, &shift, &engine.config())?;
            print_outcome(&pair, &group, &shift, &out, format, "lambda^C");
            Ok(())
        }
        Command::Verify {
            pair,
            range,
            engine,
            format,
        } => {
            let records = verify_range(
                pair.k,
                pair.l,
                range.from,
                range.to,
                &engine.config(),
                range.cache_dir().as_deref(),
            )?;
            print_records(&records, format, false);
            Ok(())
        }
        Command::Survey {
            pair,
            range,
            shift,
            engine,
            format,
        } => {
            let shift_indices = parse_index_list(&shift)?;
            if shift_indices != vec![0, 1] {
                return Err(Error::Parse(
                    "survey is defined for the shift set {0,1}; \
                     use shifted for other shift sets"
                        .into(),
                ));
            }
            let records = survey_shifted(
                pair.k,
                pair.l,
                range.from,
                range.to,
                &engine.config(),
                range.cache_dir().as_deref(),
            )?;
            print_records(&records, format, true);
            Ok(())
        }
        Command::Witness { pair, n, format } => {
            let witness = interval_witness(pair.k, pair.l, n)?;
            print_witness(&pair, n, &witness, format);
            Ok(())
        }
    }
}

/// Parses `{i1,i2,...}` into a raw index list without range checking.
fn parse_index_list(literal: &str) -> Result<Vec<u64>, Error> {
    let inner = literal
        .trim()
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| Error::Parse(format!("invalid subset literal {literal:?}")))?;
    let mut out = Vec::new();
    for part in inner.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        out.push(
            part.parse()
                .map_err(|_| Error::Parse(format!("invalid subset literal {literal:?}")))?,
        );
    }
    Ok(out)
}

/// Shift sets on cyclic groups reduce indices mod n (so `{0,1}` collapses to
/// `{0}` on Z_1); other groups take the literal as-is.
fn parse_shift_set(group: &FiniteAbelianGroup, literal: &str) -> Result<GroupSubset, Error> {
    let indices = parse_index_list(literal)?;
    if group.is_cyclic() {
        let n = group.order();
        GroupSubset::from_indices(group.clone(), indices.into_iter().map(|i| i % n))
    } else {
        GroupSubset::from_indices(group.clone(), indices)
    }
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct TermJson {
    d: u64,
    delta: u64,
    r: u64,
    value: String,
}

#[derive(Serialize)]
struct FormulaJson {
    k: u32,
    l: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    group: Option<String>,
    value: String,
    argmax_d: u64,
    terms: Vec<TermJson>,
}

fn print_formula(
    pair: &PairArgs,
    target: &TargetArgs,
    group: &FiniteAbelianGroup,
    result: &FormulaResult,
    format: Format,
) {
    match format {
        Format::Text => {
            println!(
                "lambda = {} (argmax d = {})",
                result.value, result.argmax_divisor
            );
        }
        Format::Json => {
            let json = FormulaJson {
                k: pair.k,
                l: pair.l,
                n: target.n,
                group: target.group.is_some().then(|| group.to_string()),
                value: result.value.to_string(),
                argmax_d: result.argmax_divisor,
                terms: result
                    .terms
                    .iter()
                    .map(|t| TermJson {
                        d: t.divisor,
                        delta: t.delta,
                        r: t.remainder,
                        value: t.value.to_string(),
                    })
                    .collect(),
            };
            println!("{}", serde_json::to_string(&json).expect("serializable"));
        }
        Format::Csv => {
            let terms: Vec<String> = result
                .terms
                .iter()
                .map(|t| format!("{}:{}", t.divisor, t.value))
                .collect();
            println!("k,l,target,value,argmax_d,terms");
            println!(
                "{},{},{},{},{},{}",
                pair.k,
                pair.l,
                target
                    .n
                    .map(|n| n.to_string())
                    .unwrap_or_else(|| group.to_string()),
                result.value,
                result.argmax_divisor,
                terms.join(";")
            );
        }
    }
}

#[derive(Serialize)]
struct OutcomeJson {
    group: String,
    k: u32,
    l: u32,
    #[serde(rename = "C")]
    shift: String,
    max_cardinality: u64,
    density: String,
    witness: String,
    nodes: u64,
    complete: bool,
}

fn csv_quote(field: &str) -> String {
    if field.contains(',') {
        format!("\"{field}\"")
    } else {
        field.to_string()
    }
}

fn print_outcome(
    pair: &PairArgs,
    group: &FiniteAbelianGroup,
    shift: &GroupSubset,
    out: &SearchOutcome,
    format: Format,
    label: &str,
) {
    match format {
        Format::Text => {
            println!("{label} = {}, witness {}", out.density, out.witness);
            if !out.complete {
                println!(
                    "incomplete: node budget exhausted after {} nodes",
                    out.nodes_visited
                );
            }
        }
        Format::Json => {
            let json = OutcomeJson {
                group: group.to_string(),
                k: pair.k,
                l: pair.l,
                shift: shift.to_string(),
                max_cardinality: out.max_cardinality,
                density: out.density.to_string(),
                witness: out.witness.to_string(),
                nodes: out.nodes_visited,
                complete: out.complete,
            };
            println!("{}", serde_json::to_string(&json).expect("serializable"));
        }
        Format::Csv => {
            println!("group,k,l,C,max_cardinality,density,witness,nodes,complete");
            println!(
                "{},{},{},{},{},{},{},{},{}",
                group,
                pair.k,
                pair.l,
                csv_quote(&shift.to_string()),
                out.max_cardinality,
                out.density,
                csv_quote(&out.witness.to_string()),
                out.nodes_visited,
                out.complete
            );
        }
    }
}

fn print_records(records: &[SurveyRecord], format: Format, shifted: bool) {
    match format {
        Format::Text => {
            if shifted {
                println!(
                    "{:>6} {:>10} {:>10} {:>9}  witness",
                    "n", "formula", "shifted", "bound_eq"
                );
            } else {
                println!("{:>6} {:>10} {:>10}  witness", "n", "formula", "oracle");
            }
            let opt = |v: &Option<sumfree_core::Rational>| {
                v.map(|r| r.to_string()).unwrap_or_else(|| "-".into())
            };
            for rec in records {
                let witness = rec
                    .witness
                    .as_ref()
                    .map(|w| w.to_string())
                    .unwrap_or_else(|| "-".into());
                if shifted {
                    let eq = rec
                        .shifted_equals_bound
                        .map(|b| b.to_string())
                        .unwrap_or_else(|| "-".into());
                    println!(
                        "{:>6} {:>10} {:>10} {:>9}  {}",
                        rec.n,
                        rec.formula_value.to_string(),
                        opt(&rec.shifted_value),
                        eq,
                        witness
                    );
                } else {
                    println!(
                        "{:>6} {:>10} {:>10}  {}",
                        rec.n,
                        rec.formula_value.to_string(),
                        opt(&rec.oracle_value),
                        witness
                    );
                }
            }
            if shifted {
                match shifted_argmin(records) {
                    Some((n, v)) => println!("min shifted = {v} first attained at n = {n}"),
                    None => println!("min shifted = none (no completed rows)"),
                }
            }
        }
        Format::Csv => {
            println!("{CSV_HEADER}");
            for rec in records {
                println!("{}", rec.to_csv_row());
            }
        }
        Format::Json => {
            for rec in records {
                println!("{}", rec.to_json_line());
            }
        }
    }
}

#[derive(Serialize)]
struct WitnessJson {
    k: u32,
    l: u32,
    n: u64,
    witness: String,
    density: String,
}

fn print_witness(pair: &PairArgs, n: u64, witness: &GroupSubset, format: Format) {
    match format {
        Format::Text => {
            println!("witness = {} (density {})", witness, witness.density());
        }
        Format::Json => {
            let json = WitnessJson {
                k: pair.k,
                l: pair.l,
                n,
                witness: witness.to_string(),
                density: witness.density().to_string(),
            };
            println!("{}", serde_json::to_string(&json).expect("serializable"));
        }
        Format::Csv => {
            println!("k,l,n,witness,density");
            println!(
                "{},{},{},{},{}",
                pair.k,
                pair.l,
                n,
                csv_quote(&witness.to_string()),
                witness.density()
            );
        }
    }
}
