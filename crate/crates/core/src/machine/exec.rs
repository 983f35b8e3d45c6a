//! Step semantics and budgeted evaluation.
//!
//! Every instruction costs one step except `Specialize`, which costs one step
//! plus one per 64 bits of the index it produces, and `Apply`, which costs one
//! step plus every step of the subcomputation. The clock in a configuration is
//! the total cost so far; a run halts within budget `b` when the clock at the
//! halting configuration is at most `b`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::index::{decode_program, ProgramIndex};
use super::program::{Instruction, Program, Reg};
use super::smn::smn;
use super::trace::Trace;

/// Membership oracle consulted by `Query`.
pub trait Oracle {
    fn contains(&self, n: &BigUint) -> bool;
}

/// The empty oracle.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoOracle;

impl Oracle for NoOracle {
    fn contains(&self, _: &BigUint) -> bool {
        false
    }
}

impl<F: Fn(&BigUint) -> bool> Oracle for F {
    fn contains(&self, n: &BigUint) -> bool {
        self(n)
    }
}

/// Sparse register file; absent registers hold zero.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Registers(BTreeMap<Reg, BigUint>);

impl Registers {
    pub fn from_inputs(inputs: &[BigUint]) -> Self {
        let mut regs = Registers::default();
        for (i, v) in inputs.iter().enumerate() {
            regs.set(i as Reg, v.clone());
        }
        regs
    }

    pub fn get(&self, r: Reg) -> BigUint {
        self.0.get(&r).cloned().unwrap_or_default()
    }

    fn get_ref(&self, r: Reg) -> Option<&BigUint> {
        self.0.get(&r)
    }

    pub fn set(&mut self, r: Reg, v: BigUint) {
        if v.is_zero() {
            self.0.remove(&r);
        } else {
            self.0.insert(r, v);
        }
    }

    /// Nonzero registers in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = (Reg, &BigUint)> {
        self.0.iter().map(|(&r, v)| (r, v))
    }

    /// The inputs `r_first … r_{first+count−1}` for a subcomputation.
    fn window(&self, first: Reg, count: u64) -> Registers {
        let end = first.saturating_add(count);
        Registers(
            self.0
                .range(first..end)
                .map(|(&r, v)| (r - first, v.clone()))
                .collect(),
        )
    }
}

/// Instruction pointer, clock and registers of the outermost program.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Configuration {
    pub ip: u64,
    pub clock: u64,
    pub registers: Registers,
}

impl Configuration {
    pub fn initial(inputs: &[BigUint]) -> Self {
        Configuration {
            ip: 0,
            clock: 0,
            registers: Registers::from_inputs(inputs),
        }
    }

    pub fn output(&self) -> BigUint {
        self.registers.get(0)
    }

    pub fn is_halted_in(&self, program: &Program) -> bool {
        self.ip >= program.len() as u64
    }
}

/// Result of a budgeted run without trace recording.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Evaluation {
    Halted { output: BigUint, steps: u64 },
    OutOfBudget { steps: u64 },
}

impl Evaluation {
    pub fn output(&self) -> Option<&BigUint> {
        match self {
            Evaluation::Halted { output, .. } => Some(output),
            Evaluation::OutOfBudget { .. } => None,
        }
    }
}

/// Result of [`run_bounded`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EvalOutcome {
    Halted { output: BigUint, trace: Trace },
    OutOfBudget { steps_used: u64 },
}

impl EvalOutcome {
    pub fn output(&self) -> Option<&BigUint> {
        match self {
            EvalOutcome::Halted { output, .. } => Some(output),
            EvalOutcome::OutOfBudget { .. } => None,
        }
    }
}

pub(crate) fn specialize_cost(result: &BigUint) -> u64 {
    1 + result.bits() / 64
}

/// Effect of one instruction other than `Apply`: the next instruction pointer
/// and the cost.
fn simple_step(
    instr: &Instruction,
    ip: u64,
    regs: &mut Registers,
    oracle: &dyn Oracle,
) -> (u64, u64) {
    let next = ip + 1;
    match instr {
        Instruction::Zero(r) => regs.set(*r, BigUint::zero()),
        Instruction::Succ(r) => {
            let v = regs.get(*r) + 1u32;
            regs.set(*r, v);
        }
        Instruction::Copy { src, dst } => {
            let v = regs.get(*src);
            regs.set(*dst, v);
        }
        Instruction::JumpIfEq { a, b, target } => {
            if regs.get_ref(*a) == regs.get_ref(*b) {
                return (*target, 1);
            }
        }
        Instruction::Query(r) => {
            let hit = oracle.contains(&regs.get(*r));
            regs.set(*r, if hit { BigUint::one() } else { BigUint::zero() });
        }
        Instruction::Load { reg, value } => regs.set(*reg, value.clone()),
        Instruction::Double(r) => {
            let v = regs.get(*r) << 1u32;
            regs.set(*r, v);
        }
        Instruction::Halve { reg, parity } => {
            let (q, rem) = regs.get(*reg).div_rem(&BigUint::from(2u32));
            regs.set(*reg, q);
            regs.set(*parity, rem);
        }
        Instruction::Specialize {
            dst,
            program,
            value,
        } => {
            let e = ProgramIndex(regs.get(*program));
            let out = smn(&e, &[regs.get(*value)]).0;
            let cost = specialize_cost(&out);
            regs.set(*dst, out);
            return (next, cost);
        }
        Instruction::Apply { .. } => unreachable!("Apply is handled by the caller"),
    }
    (next, 1)
}

/// Cost `Specialize` would incur from these registers, computed without mutating them.
fn peek_cost(instr: &Instruction, regs: &Registers) -> (u64, Option<BigUint>) {
    if let Instruction::Specialize { program, value, .. } = instr {
        let out = smn(&ProgramIndex(regs.get(*program)), &[regs.get(*value)]).0;
        (specialize_cost(&out), Some(out))
    } else {
        (1, None)
    }
}

struct Frame {
    program: Arc<Program>,
    ip: u64,
    regs: Registers,
    dst: Reg,
}

#[derive(Default)]
struct ProgramCache(HashMap<BigUint, Arc<Program>>);

impl ProgramCache {
    fn get(&mut self, index: &BigUint) -> Arc<Program> {
        if let Some(p) = self.0.get(index) {
            return Arc::clone(p);
        }
        let p = Arc::new(decode_program(&ProgramIndex(index.clone())));
        if self.0.len() < 4096 {
            self.0.insert(index.clone(), Arc::clone(&p));
        }
        p
    }
}

/// Core interpreter. `observe` sees every configuration of the outermost
/// program, starting with the initial one.
fn execute(
    program: &Program,
    inputs: &[BigUint],
    budget: u64,
    oracle: &dyn Oracle,
    mut observe: Option<&mut dyn FnMut(Configuration)>,
) -> Evaluation {
    let mut cache = ProgramCache::default();
    let mut clock: u64 = 0;
    let mut stack = vec![Frame {
        program: Arc::new(program.clone()),
        ip: 0,
        regs: Registers::from_inputs(inputs),
        dst: 0,
    }];
    if let Some(obs) = observe.as_mut() {
        obs(Configuration::initial(inputs));
    }
    loop {
        let depth = stack.len();
        let frame = stack.last_mut().expect("nonempty call stack");
        let Some(instr) = frame.program.instructions.get(frame.ip as usize) else {
            // halted
            let done = stack.pop().expect("frame");
            let out = done.regs.get(0);
            match stack.last_mut() {
                None => {
                    return Evaluation::Halted {
                        output: out,
                        steps: clock,
                    }
                }
                Some(parent) => {
                    parent.regs.set(done.dst, out);
                    parent.ip += 1;
                    if stack.len() == 1 {
                        if let Some(obs) = observe.as_mut() {
                            let top = &stack[0];
                            obs(Configuration {
                                ip: top.ip,
                                clock,
                                registers: top.regs.clone(),
                            });
                        }
                    }
                    continue;
                }
            }
        };
        if let Instruction::Apply {
            dst,
            program: preg,
            first,
            count,
        } = instr
        {
            if clock + 1 > budget {
                return Evaluation::OutOfBudget { steps: clock };
            }
            clock += 1;
            let callee = cache.get(&frame.regs.get(*preg));
            let regs = frame.regs.window(*first, *count);
            let dst = *dst;
            stack.push(Frame {
                program: callee,
                ip: 0,
                regs,
                dst,
            });
            continue;
        }
        let (cost, precomputed) = peek_cost(instr, &frame.regs);
        if clock + cost > budget {
            return Evaluation::OutOfBudget { steps: clock };
        }
        let next_ip = match (instr, precomputed) {
            (Instruction::Specialize { dst, .. }, Some(out)) => {
                frame.regs.set(*dst, out);
                frame.ip + 1
            }
            _ => simple_step(instr, frame.ip, &mut frame.regs, oracle).0,
        };
        frame.ip = next_ip;
        clock += cost;
        if depth == 1 {
            if let Some(obs) = observe.as_mut() {
                obs(Configuration {
                    ip: frame.ip,
                    clock,
                    registers: frame.regs.clone(),
                });
            }
        }
    }
}

/// Runs a program against an oracle without recording a trace.
pub fn evaluate_with_oracle(
    program: &Program,
    inputs: &[BigUint],
    budget: u64,
    oracle: &dyn Oracle,
) -> Evaluation {
    execute(program, inputs, budget, oracle, None)
}

pub fn evaluate(program: &Program, inputs: &[BigUint], budget: u64) -> Evaluation {
    execute(program, inputs, budget, &NoOracle, None)
}

pub fn evaluate_index(e: &ProgramIndex, inputs: &[BigUint], budget: u64) -> Evaluation {
    evaluate(&decode_program(e), inputs, budget)
}

/// Runs a program and records the configurations of the outermost program.
pub fn run_program(program: &Program, inputs: &[BigUint], budget: u64) -> EvalOutcome {
    // Only halting runs pay for the trace.
    match evaluate(program, inputs, budget) {
        Evaluation::OutOfBudget { steps } => EvalOutcome::OutOfBudget { steps_used: steps },
        Evaluation::Halted { .. } => {
            let mut configs = Vec::new();
            let mut push = |c: Configuration| configs.push(c);
            let result = execute(program, inputs, budget, &NoOracle, Some(&mut push));
            let Evaluation::Halted { output, .. } = result else {
                unreachable!("deterministic rerun")
            };
            EvalOutcome::Halted {
                output,
                trace: Trace::new(configs),
            }
        }
    }
}

/// `φ_e(inputs)` within `budget` steps, with the halting trace.
pub fn run_bounded(e: &ProgramIndex, inputs: &[BigUint], budget: u64) -> EvalOutcome {
    run_program(&decode_program(e), inputs, budget)
}

/// The configuration one outer step after `config`, or `None` when `config`
/// is halted or the step cannot reach `next_clock`.
///
/// `next_clock` only matters for `Apply`, whose subcomputation is rerun with
/// exactly the budget the clock difference allows and must use all of it.
pub(crate) fn replay_step(
    program: &Program,
    config: &Configuration,
    next_clock: u64,
) -> Option<Configuration> {
    let instr = program.instructions.get(config.ip as usize)?;
    let mut regs = config.registers.clone();
    if let Instruction::Apply {
        dst,
        program: preg,
        first,
        count,
    } = instr
    {
        let inner_budget = next_clock.checked_sub(config.clock)?.checked_sub(1)?;
        let callee = decode_program(&ProgramIndex(regs.get(*preg)));
        let args = regs.window(*first, *count);
        let inputs = dense_inputs(&args);
        match evaluate(&callee, &inputs, inner_budget) {
            Evaluation::Halted { output, steps } if steps == inner_budget => {
                regs.set(*dst, output);
                return Some(Configuration {
                    ip: config.ip + 1,
                    clock: next_clock,
                    registers: regs,
                });
            }
            _ => return None,
        }
    }
    let (ip, cost) = simple_step(instr, config.ip, &mut regs, &NoOracle);
    Some(Configuration {
        ip,
        clock: config.clock.checked_add(cost)?,
        registers: regs,
    })
}

fn dense_inputs(regs: &Registers) -> Vec<BigUint> {
    let len = regs.iter().last().map(|(r, _)| r + 1).unwrap_or(0);
    let mut v = vec![BigUint::zero(); len as usize];
    for (r, x) in regs.iter() {
        v[r as usize] = x.clone();
    }
    v
}
