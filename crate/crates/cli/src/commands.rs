use std::cmp::Ordering;
use std::fmt::Write;

use num_bigint::BigUint;
use serde_json::{json, Value};
use workbench_core::hierarchy::HierarchyError;
use workbench_core::machine::{
    etr_oracle, evaluate_index, fixpoint::transform, min_trace_code, run_bounded, EvalOutcome,
    Evaluation, MachineError,
};
use workbench_core::ordinal::{
    canonical_notation, wf::wf_check_program, Notation, ProgramWfReport,
};
use workbench_core::tree::{dnr_predicate, TreeError};
use workbench_core::*;

use crate::manifest::Inputs;
use crate::{CliError, Command, OrdOp, Report, RunArgs, TreeArgs, TreeQuery, WfArgs};

fn dec(n: &BigUint) -> Value {
    Value::String(n.to_string())
}

fn ordinal(lit: &str) -> Result<CnfOrdinal, CliError> {
    lit.parse()
        .map_err(|e| CliError::Usage(format!("ordinal {lit:?}: {e}")))
}

fn domain(e: impl std::fmt::Display) -> CliError {
    CliError::Domain(e.to_string())
}

fn answer(text: String, result: Value) -> Result<Report, CliError> {
    Ok(Report {
        text,
        result,
        unknown: None,
    })
}

fn unknown(text: String, result: Value, budget: u64) -> Result<Report, CliError> {
    Ok(Report {
        text,
        result,
        unknown: Some(budget),
    })
}

pub fn run(command: &Command, inputs: &mut Inputs) -> Result<Report, CliError> {
    match command {
        Command::Eval(args) => eval(args, inputs),
        Command::Trace { run, code } => trace(run, *code, inputs),
        Command::Fixpoint { psi, budget } => fixpoint(psi, *budget, inputs),
        Command::Etr { rel, step, budget } => etr(rel, step, *budget, inputs),
        Command::Diag { range, budget } => diag(*range, *budget),
        Command::Tree { query } => tree(query),
        Command::Ord { op } => ord(op),
        Command::Notate { ordinal: lit } => notate(lit),
        Command::Denote { notation } => denote(notation, inputs),
        Command::Wf(args) => wf(args, inputs),
        Command::Fgh {
            ordinal: lit,
            x,
            budget,
        } => fgh(lit, *x, *budget),
        Command::Jump { n, stage, range } => jump(*n, *stage, *range),
    }
}

fn eval(args: &RunArgs, inputs: &mut Inputs) -> Result<Report, CliError> {
    let e = inputs.program(&args.program)?;
    let budget = args.budget;
    match evaluate_index(&e, &args.inputs, budget) {
        Evaluation::Halted { output, steps } => answer(
            output.to_string(),
            json!({"outcome": "halted", "index": e.to_string(), "output": dec(&output), "steps": steps, "budget": budget}),
        ),
        Evaluation::OutOfBudget { .. } => unknown(
            format!("out of budget after {budget} steps"),
            json!({"outcome": "out_of_budget", "index": e.to_string(), "budget": budget}),
            budget,
        ),
    }
}

fn trace(args: &RunArgs, with_code: bool, inputs: &mut Inputs) -> Result<Report, CliError> {
    let e = inputs.program(&args.program)?;
    let budget = args.budget;
    let (output, trace) = match run_bounded(&e, &args.inputs, budget) {
        EvalOutcome::Halted { output, trace } => (output, trace),
        EvalOutcome::OutOfBudget { .. } => {
            return unknown(
                format!("out of budget after {budget} steps"),
                json!({"outcome": "out_of_budget", "index": e.to_string(), "budget": budget}),
                budget,
            )
        }
    };
    let mut text = String::new();
    let mut configs = Vec::new();
    for (i, c) in trace.configs.iter().enumerate() {
        let regs: Vec<String> = c
            .registers
            .iter()
            .map(|(r, v)| format!("r{r}={v}"))
            .collect();
        writeln!(
            text,
            "{i:>4}  ip={} clock={}  {}",
            c.ip,
            c.clock,
            regs.join(" ")
        )
        .unwrap();
        let regs: serde_json::Map<String, Value> = c
            .registers
            .iter()
            .map(|(r, v)| (r.to_string(), dec(v)))
            .collect();
        configs.push(json!({"ip": c.ip, "clock": c.clock, "registers": regs}));
    }
    writeln!(text, "output {output}").unwrap();
    let mut result = json!({
        "outcome": "halted",
        "index": e.to_string(),
        "output": dec(&output),
        "configurations": configs,
        "budget": budget,
    });
    if with_code {
        match min_trace_code(&e, &args.inputs, budget) {
            Ok(Some(code)) => {
                writeln!(text, "code {}", code.0).unwrap();
                result["code"] = dec(&code.0);
            }
            Ok(None) => unreachable!("the run halted within budget"),
            Err(MachineError::TraceTooLarge) => {
                writeln!(text, "code exceeds the size guard").unwrap();
                result["code"] = Value::Null;
            }
            Err(err) => return Err(domain(err)),
        }
    }
    answer(text, result)
}

fn fixpoint(psi: &str, budget: u64, inputs: &mut Inputs) -> Result<Report, CliError> {
    let psi = inputs.program(psi)?;
    match fixed_point(&psi, budget) {
        Ok(e) => {
            let image = transform(&psi, &e, budget).map_err(domain)?;
            answer(
                format!("fixed point {e}\nimage {image}"),
                json!({"fixed_point": e.to_string(), "image": image.to_string(), "budget": budget}),
            )
        }
        Err(MachineError::PsiDiverged { budget }) => unknown(
            format!("transformer out of budget after {budget} steps"),
            json!({"outcome": "out_of_budget", "budget": budget}),
            budget,
        ),
        Err(err) => Err(domain(err)),
    }
}

fn etr(rel: &str, step: &str, budget: u64, inputs: &mut Inputs) -> Result<Report, CliError> {
    let rel = inputs.relation(rel)?;
    let step = inputs.program(step)?;
    let values = match etr_oracle(&rel, &step, budget) {
        Ok(values) => values,
        Err(machine::EtrError::StepDiverged(x)) => {
            return unknown(
                format!("step program out of budget at {x} after {budget} steps"),
                json!({"outcome": "out_of_budget", "at": x, "budget": budget}),
                budget,
            )
        }
        Err(err) => return Err(domain(err)),
    };
    let e = etr_define(&rel, &step, budget).map_err(domain)?;
    let mut text = format!("index {e}\n");
    for (x, v) in &values {
        writeln!(text, "f({x}) = {v}").unwrap();
    }
    let table: serde_json::Map<String, Value> = values
        .iter()
        .map(|(x, v)| (x.to_string(), dec(v)))
        .collect();
    answer(
        text,
        json!({"index": e.to_string(), "values": table, "budget": budget}),
    )
}

fn diag(range: u64, budget: u64) -> Result<Report, CliError> {
    let report = inseparable_membership(range, budget);
    let show = |s: &std::collections::BTreeSet<u64>| {
        s.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
    };
    answer(
        format!(
            "A (phi_e(e) = 0): {}\nB (phi_e(e) = 1): {}\nundecided at budget {budget}: {}",
            show(&report.in_a),
            show(&report.in_b),
            show(&report.undecided)
        ),
        json!({"range": range, "report": report}),
    )
}

fn parse_kstring(s: &str, k: u64) -> Result<KString, CliError> {
    let values: Option<Vec<u64>> = if s.contains(',') {
        s.split(',').map(|p| p.trim().parse().ok()).collect()
    } else {
        s.chars().map(|c| c.to_digit(10).map(u64::from)).collect()
    };
    let values = values.ok_or_else(|| CliError::Usage(format!("bad string {s:?}")))?;
    KString::new(values, k).map_err(|e| CliError::Usage(e.to_string()))
}

fn tree_error(e: TreeError) -> CliError {
    CliError::Domain(e.to_string())
}

fn tree(query: &TreeQuery) -> Result<Report, CliError> {
    let args: &TreeArgs = match query {
        TreeQuery::Levels(a) | TreeQuery::Leftmost(a) => a,
        TreeQuery::Dead { tree, .. } => tree,
    };
    let v = dnr_predicate(args.k, args.budget);
    let meta = json!({"depth": args.depth, "budget": args.budget, "k": args.k});
    match query {
        TreeQuery::Levels(_) => {
            let level = level_set(&v, args.depth).map_err(tree_error)?;
            let text = format!(
                "{}{} strings of length {}",
                level.render_tree(),
                level.len(),
                args.depth
            );
            answer(text, json!({"query": meta, "members": level.members}))
        }
        TreeQuery::Leftmost(_) => match leftmost_member(&v, args.depth) {
            Some(s) => answer(s.to_string(), json!({"query": meta, "leftmost": s})),
            None => answer(
                format!("no string of length {}", args.depth),
                json!({"query": meta, "leftmost": null}),
            ),
        },
        TreeQuery::Dead { string, .. } => {
            let s = parse_kstring(string, args.k)?;
            let dead = is_dead(&s, &v, args.depth).map_err(tree_error)?;
            answer(
                if dead { "dead" } else { "alive" }.to_string(),
                json!({"query": meta, "string": s, "dead": dead}),
            )
        }
    }
}

fn ord(op: &OrdOp) -> Result<Report, CliError> {
    let (text, result) = match op {
        OrdOp::Cmp { a, b } => {
            let ord = ordinal(a)?.cmp(&ordinal(b)?);
            let sym = match ord {
                Ordering::Less => "<",
                Ordering::Equal => "=",
                Ordering::Greater => ">",
            };
            (sym.to_string(), json!(sym))
        }
        OrdOp::Add { a, b } => {
            let r = ordinal(a)?.add(&ordinal(b)?);
            (r.to_string(), json!(r))
        }
        OrdOp::Mul { a, b } => {
            let r = ordinal(a)?.mul(&ordinal(b)?);
            (r.to_string(), json!(r))
        }
        OrdOp::Fseq { a, n } => {
            let r = ordinal(a)?.fundamental_sequence(*n).map_err(domain)?;
            (r.to_string(), json!(r))
        }
    };
    answer(text, result)
}

fn notate(lit: &str) -> Result<Report, CliError> {
    let n = canonical_notation(&ordinal(lit)?).map_err(domain)?;
    let value = serde_json::to_value(&n).expect("notations serialise");
    answer(serde_json::to_string_pretty(&value).expect("JSON"), value)
}

fn denote(arg: &str, inputs: &mut Inputs) -> Result<Report, CliError> {
    let value = inputs.json(arg)?;
    let n: Notation = serde_json::from_value(value)
        .map_err(|e| CliError::Usage(format!("not a notation: {e}")))?;
    let a = notation_to_ordinal(&n);
    answer(a.to_string(), json!(a))
}

fn wf_text(report: &WfReport) -> String {
    match report {
        WfReport::WellFounded {
            order_type: Some(t),
        } => format!("well-founded, order type {t}"),
        WfReport::WellFounded { order_type: None } => "well-founded (not a linear order)".into(),
        WfReport::Descent { cycle } => {
            let walk: Vec<String> = cycle.iter().map(u64::to_string).collect();
            format!("not well-founded, descent {}", walk.join(" -> "))
        }
    }
}

fn wf(args: &WfArgs, inputs: &mut Inputs) -> Result<Report, CliError> {
    if let Some(path) = &args.rel {
        let rel = inputs.relation(path)?;
        let report = wf_check(&rel);
        return answer(wf_text(&report), json!({"report": report}));
    }
    let e = inputs.program(args.prog.as_deref().expect("clap requires --rel or --prog"))?;
    let n_max = args.max.expect("clap requires --max with --prog");
    let budget = args.budget;
    match wf_check_program(&e, n_max, budget) {
        ProgramWfReport::Known(report) => answer(
            wf_text(&report),
            json!({"report": report, "max": n_max, "budget": budget}),
        ),
        ProgramWfReport::Unknown { x, y } => unknown(
            format!("unknown: R({x}, {y}) out of budget after {budget} steps"),
            json!({"outcome": "unknown", "x": x, "y": y, "max": n_max, "budget": budget}),
            budget,
        ),
    }
}

fn fgh(lit: &str, x: u64, budget: u64) -> Result<Report, CliError> {
    let a = ordinal(lit)?;
    match fgh_eval(&a, &BigUint::from(x), budget) {
        Ok(v) => answer(
            v.to_string(),
            json!({"ordinal": a, "x": x, "value": dec(&v), "budget": budget}),
        ),
        Err(HierarchyError::OutOfBudget { budget }) => unknown(
            format!("out of budget after {budget} unfoldings"),
            json!({"outcome": "out_of_budget", "ordinal": a, "x": x, "budget": budget}),
            budget,
        ),
        Err(err) => Err(domain(err)),
    }
}

fn jump(n: u64, stage: u64, range: u64) -> Result<Report, CliError> {
    let approx = iterate_jump(n, stage, range).map_err(domain)?;
    let members: Vec<String> = approx.members.iter().map(u64::to_string).collect();
    answer(
        format!(
            "level {n}, stage {stage}, range {range}: {} members\n{}",
            members.len(),
            members.join(" ")
        ),
        json!({"approximation": approx}),
    )
}
