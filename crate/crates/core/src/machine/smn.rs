//! Program specialisation: `φ_{smn(e, c)}(x) = φ_e(c ++ x)`.

use std::collections::BTreeSet;

use num_bigint::BigUint;

use super::index::{decode_program, encode_program, ProgramIndex};
use super::program::{Instruction, Program, Reg};

/// Widest `Apply` argument range expanded when collecting observed registers.
/// Ranges past this length are only shifted on their first `APPLY_RANGE_LIMIT`
/// registers.
const APPLY_RANGE_LIMIT: u64 = 1 << 12;

/// Registers whose initial contents the program can observe. Always contains `r0`.
fn observed_registers(program: &Program) -> BTreeSet<Reg> {
    let mut regs = BTreeSet::from([0]);
    for instr in &program.instructions {
        match *instr {
            Instruction::Zero(r)
            | Instruction::Succ(r)
            | Instruction::Query(r)
            | Instruction::Double(r) => {
                regs.insert(r);
            }
            Instruction::Load { reg, .. } => {
                regs.insert(reg);
            }
            Instruction::Copy { src, dst } => {
                regs.extend([src, dst]);
            }
            Instruction::JumpIfEq { a, b, .. } => {
                regs.extend([a, b]);
            }
            Instruction::Halve { reg, parity } => {
                regs.extend([reg, parity]);
            }
            Instruction::Specialize {
                dst,
                program,
                value,
            } => {
                regs.extend([dst, program, value]);
            }
            Instruction::Apply {
                dst,
                program,
                first,
                count,
            } => {
                regs.extend([dst, program]);
                let end = first.saturating_add(count.min(APPLY_RANGE_LIMIT));
                regs.extend(first..end);
            }
        }
    }
    regs
}

/// Specialises a program on its leading inputs.
///
/// The prologue moves each observed register `j ≥ m` to receive input `j − m`
/// (copying downward so sources are read before they are overwritten), then
/// loads the fixed values into `r0 … r_{m−1}`. The original body follows with
/// its jump targets shifted past the prologue.
pub fn smn_program(program: &Program, fixed: &[BigUint]) -> Program {
    let m = fixed.len() as u64;
    if m == 0 {
        return program.clone();
    }
    let observed = observed_registers(program);
    let mut prologue = Vec::new();
    for &j in observed.iter().rev().filter(|&&j| j >= m) {
        prologue.push(Instruction::Copy { src: j - m, dst: j });
    }
    for (j, v) in fixed.iter().enumerate() {
        prologue.push(Instruction::Load {
            reg: j as u64,
            value: v.clone(),
        });
    }
    let offset = prologue.len() as u64;
    let mut instructions = prologue;
    instructions.extend(program.instructions.iter().map(|i| i.relocated(offset)));
    Program::new(program.arity.saturating_sub(m), instructions)
}

pub fn smn(e: &ProgramIndex, fixed: &[BigUint]) -> ProgramIndex {
    if fixed.is_empty() {
        return e.clone();
    }
    encode_program(&smn_program(&decode_program(e), fixed))
}
