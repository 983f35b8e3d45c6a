use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

mod commands;
mod manifest;

use manifest::{Inputs, RunManifest};

/// Budgeted computability experiments. Every result states the budget it was
/// computed under; with --json the output is wrapped in a run manifest.
#[derive(Debug, Parser)]
#[command(name = "workbench", version)]
struct Cli {
    /// Emit {"manifest": …, "result": …} instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Exit with status 3 when a result is unknown or out of budget.
    #[arg(long, global = true)]
    strict: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Run program PROG (decimal index or program file) on the inputs.
    Eval(RunArgs),
    /// Like eval, printing every configuration of the run.
    Trace {
        #[command(flatten)]
        #[serde(flatten)]
        run: RunArgs,
        /// Also print the trace code.
        #[arg(long)]
        code: bool,
    },
    /// Fixed point of the transformer in FILE.
    Fixpoint {
        #[arg(long)]
        psi: String,
        #[arg(long, default_value_t = 100_000)]
        budget: u64,
    },
    /// Recursion along the relation in --rel with the step program --step.
    Etr {
        #[arg(long)]
        rel: String,
        #[arg(long)]
        step: String,
        #[arg(long, default_value_t = 100_000)]
        budget: u64,
    },
    /// The sets {e : φ_e(e) = 0} and {e : φ_e(e) = 1} below --range.
    Diag {
        #[arg(long, default_value_t = 100)]
        range: u64,
        #[arg(long, default_value_t = 10_000)]
        budget: u64,
    },
    /// The tree of strings consistent with the diagonal.
    Tree {
        #[command(subcommand)]
        query: TreeQuery,
    },
    /// Ordinal arithmetic on Cantor normal forms, e.g. "w^2*3 + w + 4".
    Ord {
        #[command(subcommand)]
        op: OrdOp,
    },
    /// Canonical notation of an ordinal below w^w, as JSON.
    Notate { ordinal: String },
    /// Ordinal denoted by a notation given as JSON or a JSON file.
    Denote { notation: String },
    /// Well-foundedness of an edge-list relation or of a program's relation.
    Wf(WfArgs),
    /// F_a(x) in the fast-growing hierarchy.
    Fgh {
        ordinal: String,
        x: u64,
        /// Maximum number of unfoldings.
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
    },
    /// Stage approximation to the n-th jump of the empty set.
    Jump {
        n: u64,
        #[arg(long, default_value_t = 1000)]
        stage: u64,
        #[arg(long, default_value_t = 100)]
        range: u64,
    },
}

#[derive(Debug, Args, Serialize)]
pub struct RunArgs {
    pub program: String,
    #[serde(serialize_with = "decimal_list")]
    pub inputs: Vec<num_bigint::BigUint>,
    #[arg(long, default_value_t = 10_000)]
    pub budget: u64,
}

fn decimal_list<S: serde::Serializer>(v: &[num_bigint::BigUint], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|n| n.to_string()))
}

#[derive(Debug, Args, Serialize)]
pub struct TreeArgs {
    /// String length; lookahead for `dead`.
    #[arg(long)]
    pub depth: u64,
    #[arg(long, default_value_t = 1000)]
    pub budget: u64,
    /// Alphabet size.
    #[arg(long, default_value_t = 2)]
    pub k: u64,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TreeQuery {
    /// Every member of length --depth, as an indented tree.
    Levels(TreeArgs),
    /// The leftmost member of length --depth.
    Leftmost(TreeArgs),
    /// Whether STRING has no member extension --depth symbols longer.
    Dead {
        /// Symbols, e.g. 0110 (or comma separated when k > 10).
        string: String,
        #[command(flatten)]
        #[serde(flatten)]
        tree: TreeArgs,
    },
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OrdOp {
    Cmp {
        a: String,
        b: String,
    },
    Add {
        a: String,
        b: String,
    },
    Mul {
        a: String,
        b: String,
    },
    /// The n-th term of the fundamental sequence of a limit.
    Fseq {
        a: String,
        n: u64,
    },
}

#[derive(Debug, Args, Serialize)]
pub struct WfArgs {
    /// Edge-list file: a `domain:` header, then `y x` per line.
    #[arg(long, conflicts_with = "prog", required_unless_present = "prog")]
    pub rel: Option<String>,
    /// Program whose output 1 on (x, y) puts the edge (y, x) in the relation.
    #[arg(long, requires = "max")]
    pub prog: Option<String>,
    /// Largest domain element for --prog.
    #[arg(long)]
    pub max: Option<u64>,
    #[arg(long, default_value_t = 10_000)]
    pub budget: u64,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(String),
}

/// A command's answer. `unknown` carries the exhausted budget.
pub struct Report {
    pub text: String,
    pub result: serde_json::Value,
    pub unknown: Option<u64>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let mut inputs = Inputs::default();
    let report = match commands::run(&cli.command, &mut inputs) {
        Ok(r) => r,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
        Err(CliError::Domain(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    if cli.json {
        let parameters = serde_json::to_value(&cli.command).expect("arguments serialise");
        let (command, parameters) = match parameters {
            serde_json::Value::Object(m) if m.len() == 1 => m.into_iter().next().unwrap(),
            other => (String::new(), other),
        };
        let manifest = RunManifest {
            command,
            parameters,
            tool_version: env!("CARGO_PKG_VERSION"),
            input_digests: inputs.digests,
        };
        let out = json!({ "manifest": manifest, "result": report.result });
        println!("{}", serde_json::to_string_pretty(&out).expect("JSON"));
    } else {
        print!("{}", report.text);
        if !report.text.ends_with('\n') {
            println!();
        }
    }
    if cli.strict && report.unknown.is_some() {
        ExitCode::from(3)
    } else {
        ExitCode::SUCCESS
    }
}
