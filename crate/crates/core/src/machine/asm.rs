//! A small label-resolving assembler for hand-written machine programs.

use std::collections::HashMap;

use num_bigint::BigUint;

use super::program::{Instruction, Program, Reg};

enum Item {
    Ready(Instruction),
    Jump { a: Reg, b: Reg, label: String },
}

/// Builds a [`Program`]; jumps name labels that are resolved by [`Asm::finish`].
/// The label `"halt"` always resolves to one past the last instruction.
#[derive(Default)]
pub struct Asm {
    items: Vec<Item>,
    labels: HashMap<String, u64>,
}

impl Asm {
    pub fn new() -> Self {
        Self::default()
    }

    fn push(&mut self, i: Instruction) -> &mut Self {
        self.items.push(Item::Ready(i));
        self
    }

    pub fn label(&mut self, name: &str) -> &mut Self {
        let at = self.items.len() as u64;
        assert!(
            self.labels.insert(name.to_string(), at).is_none(),
            "duplicate label {name}"
        );
        self
    }

    pub fn zero(&mut self, r: Reg) -> &mut Self {
        self.push(Instruction::Zero(r))
    }

    pub fn succ(&mut self, r: Reg) -> &mut Self {
        self.push(Instruction::Succ(r))
    }

    pub fn copy(&mut self, src: Reg, dst: Reg) -> &mut Self {
        self.push(Instruction::Copy { src, dst })
    }

    pub fn query(&mut self, r: Reg) -> &mut Self {
        self.push(Instruction::Query(r))
    }

    pub fn load(&mut self, reg: Reg, value: impl Into<BigUint>) -> &mut Self {
        self.push(Instruction::Load {
            reg,
            value: value.into(),
        })
    }

    pub fn double(&mut self, r: Reg) -> &mut Self {
        self.push(Instruction::Double(r))
    }

    pub fn halve(&mut self, reg: Reg, parity: Reg) -> &mut Self {
        self.push(Instruction::Halve { reg, parity })
    }

    pub fn specialize(&mut self, dst: Reg, program: Reg, value: Reg) -> &mut Self {
        self.push(Instruction::Specialize {
            dst,
            program,
            value,
        })
    }

    pub fn apply(&mut self, dst: Reg, program: Reg, first: Reg, count: u64) -> &mut Self {
        self.push(Instruction::Apply {
            dst,
            program,
            first,
            count,
        })
    }

    pub fn jump_if_eq(&mut self, a: Reg, b: Reg, label: &str) -> &mut Self {
        self.items.push(Item::Jump {
            a,
            b,
            label: label.to_string(),
        });
        self
    }

    /// Unconditional jump (`r0 == r0`).
    pub fn jump(&mut self, label: &str) -> &mut Self {
        self.jump_if_eq(0, 0, label)
    }

    pub fn halt(&mut self) -> &mut Self {
        self.jump("halt")
    }

    pub fn finish(&self, arity: u64) -> Program {
        let end = self.items.len() as u64;
        let resolve = |label: &str| -> u64 {
            if label == "halt" {
                return end;
            }
            *self
                .labels
                .get(label)
                .unwrap_or_else(|| panic!("undefined label {label}"))
        };
        let instructions = self
            .items
            .iter()
            .map(|item| match item {
                Item::Ready(i) => i.clone(),
                Item::Jump { a, b, label } => Instruction::JumpIfEq {
                    a: *a,
                    b: *b,
                    target: resolve(label),
                },
            })
            .collect();
        Program::new(arity, instructions)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::exec::evaluate;

    #[test]
    fn labels_resolve() {
        // r0 := r0 + r1
        let p = Asm::new()
            .zero(2)
            .label("loop")
            .jump_if_eq(2, 1, "halt")
            .succ(0)
            .succ(2)
            .jump("loop")
            .finish(2);
        let out = evaluate(&p, &[BigUint::from(3u32), BigUint::from(4u32)], 100);
        assert_eq!(out.output(), Some(&BigUint::from(7u32)));
    }
}
