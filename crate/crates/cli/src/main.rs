//! `trsbound`: lower bounds on the number of rules of complete term
//! rewriting systems, and the tools around them.

use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;

use trsbound::conversion::SearchOptions;
use trsbound::critical::critical_pairs;
use trsbound::equiv::equiv_check;
use trsbound::homology::analyze;
use trsbound::linalg::{snf, snf_with_transforms, IntMatrix, SnfResult};
use trsbound::report::{self, ReportFormat};
use trsbound::syntax::{parse_matrix, parse_trs_file};
use trsbound::tietze::{run_script, Presentation};
use trsbound::trs::{Strategy, DEFAULT_MAX_STEPS};
use trsbound::{Error, Result};

#[derive(Parser, Debug)]
#[command(name = "trsbound", version, about = "Homological lower bounds for complete term rewriting systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Rewriting strategy used for normalization.
    #[arg(long, value_enum, default_value_t = StrategyArg::Li, global = true)]
    strategy: StrategyArg,

    /// Use only prime critical pairs.
    #[arg(long, global = true)]
    prime: bool,

    #[arg(long, value_enum, default_value_t = FormatArg::Text, global = true)]
    format: FormatArg,

    /// Step budget for one normalization.
    #[arg(long, default_value_t = DEFAULT_MAX_STEPS, global = true)]
    max_steps: usize,

    /// Node budget for one conversion search.
    #[arg(long, default_value_t = trsbound::conversion::DEFAULT_SEARCH_NODES, global = true)]
    search_depth: usize,

    /// Recompute the Smith normal form with transforms and check them.
    #[arg(long, global = true)]
    verify_snf: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute degree, critical pairs, e(R), the rule-count bound and s(H2).
    Analyze { path: PathBuf },
    /// List critical pairs.
    Cps { path: PathBuf },
    /// Smith normal form of an integer matrix (a file, `-` for stdin, or --matrix).
    Snf {
        path: Option<PathBuf>,
        /// Inline matrix; rows separated by `/`.
        #[arg(long, conflicts_with = "path")]
        matrix: Option<String>,
    },
    /// Decide whether CANDIDATE presents the same theory as the complete BASE.
    Equiv { base: PathBuf, candidate: PathBuf },
    /// Run a Tietze transformation script.
    Tietze {
        script: PathBuf,
        /// Starting system; a `load` line in the script replaces it.
        #[arg(long)]
        input: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StrategyArg {
    Li,
    Lo,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

impl Cli {
    fn strategy(&self) -> Strategy {
        match self.strategy {
            StrategyArg::Li => Strategy::LeftmostInnermost,
            StrategyArg::Lo => Strategy::LeftmostOutermost,
        }
    }

    fn format(&self) -> ReportFormat {
        match self.format {
            FormatArg::Text => ReportFormat::Text,
            FormatArg::Json => ReportFormat::Json,
        }
    }

    fn search(&self) -> SearchOptions {
        SearchOptions {
            strategy: self.strategy(),
            max_steps: self.max_steps,
            search_nodes: self.search_depth,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn emit(fmt: ReportFormat, text: String, json: Value) -> String {
    match fmt {
        ReportFormat::Text => text,
        ReportFormat::Json => report::render_json(&json),
    }
}

/// Recomputes the normal form with transforms and checks `U A V = D`
/// with `U`, `V` of determinant ±1.
fn verify_snf(m: &IntMatrix, expected: &SnfResult) -> Result<()> {
    let full = snf_with_transforms(m);
    let t = full
        .transforms
        .as_ref()
        .ok_or_else(|| Error::Internal("transforms missing".into()))?;
    let d = full.normal_form(m.rows(), m.cols());
    let unimodular = |x: &IntMatrix| {
        let det = x.determinant();
        det == 1.into() || det == (-1).into()
    };
    if t.u.mul(m).mul(&t.v) != d || !unimodular(&t.u) || !unimodular(&t.v) || full.divisors != expected.divisors {
        return Err(Error::Internal("Smith normal form verification failed".into()));
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<String> {
    let fmt = cli.format();
    match &cli.command {
        Command::Analyze { path } => {
            let file = parse_trs_file(path)?;
            let r = analyze(&file.trs, cli.strategy(), cli.prime, cli.max_steps)?;
            let mut text = report::bound_text(&r);
            let mut json = report::bound_json(&r);
            if cli.verify_snf {
                verify_snf(&r.d, &r.snf)?;
                text.push_str("snf verified: U*D(R)*V = SNF with unimodular U, V\n");
                json["snf_verified"] = Value::Bool(true);
            }
            Ok(emit(fmt, text, json))
        }
        Command::Cps { path } => {
            let file = parse_trs_file(path)?;
            let mut cps = critical_pairs(&file.trs);
            if cli.prime {
                cps.retain(|c| c.prime);
            }
            Ok(emit(fmt, report::cps_text(&cps), report::cps_json(&cps)))
        }
        Command::Snf { path, matrix } => {
            let text = match (path, matrix) {
                (_, Some(inline)) => inline.clone(),
                (Some(p), None) if p == Path::new("-") => {
                    let mut s = String::new();
                    std::io::stdin().read_to_string(&mut s)?;
                    s
                }
                (Some(p), None) => std::fs::read_to_string(p)?,
                (None, None) => {
                    return Err(Error::MalformedMatrix("give a matrix file, `-`, or --matrix".into()));
                }
            };
            let m = parse_matrix(&text)?;
            let s = snf(&m);
            let mut out_text = report::snf_text(&s);
            let mut json = report::snf_json(&s);
            if cli.verify_snf {
                verify_snf(&m, &s)?;
                out_text.push_str("verified: U*A*V = D with unimodular U, V\n");
                json["verified"] = Value::Bool(true);
            }
            Ok(emit(fmt, out_text, json))
        }
        Command::Equiv { base, candidate } => {
            let b = parse_trs_file(base)?;
            let c = parse_trs_file(candidate)?;
            let r = equiv_check(&b.trs, &c.trs, &cli.search())?;
            Ok(emit(
                fmt,
                report::equiv_text(&r, &b.var_names, &c.var_names),
                report::equiv_json(&r, &b.var_names, &c.var_names),
            ))
        }
        Command::Tietze { script, input } => {
            let start: Presentation = match input {
                Some(p) => parse_trs_file(p)?.into(),
                None => Presentation::default(),
            };
            let run = run_script(script, start, &cli.search())?;
            Ok(emit(fmt, report::tietze_text(&run), report::tietze_json(&run)))
        }
    }
}
