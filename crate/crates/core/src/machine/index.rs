//! Gödel numbering of programs.
//!
//! An index is a sentinel bit followed by Elias-gamma codes: the arity, then for
//! each instruction its opcode and operands. `L` constants use Elias-delta
//! codes instead, so an index embedding another costs little more than it.
//! Decoding pads a truncated final code
//! with `1` bits, so short indices still describe programs; anything that fails
//! to parse (oversized operands, unknown opcodes) decodes to the empty program.
//! Decoding is therefore total and surjective, and `decode(encode(p)) == p`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::bits::{BitReader, BitWriter, Padding};
use super::program::{Instruction, Program};

/// A program index `e`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ProgramIndex(#[serde(with = "decimal")] pub BigUint);

impl ProgramIndex {
    pub fn new(value: impl Into<BigUint>) -> Self {
        ProgramIndex(value.into())
    }

    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn program(&self) -> Program {
        decode_program(self)
    }
}

impl From<u64> for ProgramIndex {
    fn from(v: u64) -> Self {
        ProgramIndex(BigUint::from(v))
    }
}

impl From<BigUint> for ProgramIndex {
    fn from(v: BigUint) -> Self {
        ProgramIndex(v)
    }
}

impl FromStr for ProgramIndex {
    type Err = num_bigint::ParseBigIntError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BigUint::from_str(s.trim()).map(ProgramIndex)
    }
}

impl fmt::Display for ProgramIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn encode_program(program: &Program) -> ProgramIndex {
    let mut w = BitWriter::new();
    w.gamma_u64(program.arity);
    for instr in &program.instructions {
        w.gamma_u64(instr.opcode());
        match instr {
            Instruction::Zero(r)
            | Instruction::Succ(r)
            | Instruction::Query(r)
            | Instruction::Double(r) => w.gamma_u64(*r),
            Instruction::Copy { src, dst } => {
                w.gamma_u64(*src);
                w.gamma_u64(*dst);
            }
            Instruction::JumpIfEq { a, b, target } => {
                w.gamma_u64(*a);
                w.gamma_u64(*b);
                w.gamma_u64(*target);
            }
            Instruction::Load { reg, value } => {
                w.gamma_u64(*reg);
                w.delta(value);
            }
            Instruction::Halve { reg, parity } => {
                w.gamma_u64(*reg);
                w.gamma_u64(*parity);
            }
            Instruction::Specialize {
                dst,
                program,
                value,
            } => {
                w.gamma_u64(*dst);
                w.gamma_u64(*program);
                w.gamma_u64(*value);
            }
            Instruction::Apply {
                dst,
                program,
                first,
                count,
            } => {
                w.gamma_u64(*dst);
                w.gamma_u64(*program);
                w.gamma_u64(*first);
                w.gamma_u64(*count);
            }
        }
    }
    ProgramIndex(w.finish())
}

pub fn decode_program(index: &ProgramIndex) -> Program {
    if index.0.is_zero() {
        return Program::default();
    }
    try_decode(&index.0).unwrap_or_default()
}

fn try_decode(word: &BigUint) -> Option<Program> {
    let mut r = BitReader::new(word, Padding::Ones)?;
    let arity = r.gamma_u64()?;
    let mut instructions = Vec::new();
    while !r.is_exhausted() {
        let op = r.gamma_u64()?;
        let instr = match op {
            0 => Instruction::Zero(r.gamma_u64()?),
            1 => Instruction::Succ(r.gamma_u64()?),
            2 => Instruction::Copy {
                src: r.gamma_u64()?,
                dst: r.gamma_u64()?,
            },
            3 => Instruction::JumpIfEq {
                a: r.gamma_u64()?,
                b: r.gamma_u64()?,
                target: r.gamma_u64()?,
            },
            4 => Instruction::Query(r.gamma_u64()?),
            5 => Instruction::Load {
                reg: r.gamma_u64()?,
                value: r.delta()?,
            },
            6 => Instruction::Double(r.gamma_u64()?),
            7 => Instruction::Halve {
                reg: r.gamma_u64()?,
                parity: r.gamma_u64()?,
            },
            8 => Instruction::Specialize {
                dst: r.gamma_u64()?,
                program: r.gamma_u64()?,
                value: r.gamma_u64()?,
            },
            9 => Instruction::Apply {
                dst: r.gamma_u64()?,
                program: r.gamma_u64()?,
                first: r.gamma_u64()?,
                count: r.gamma_u64()?,
            },
            _ => return None,
        };
        debug_assert!(op < Instruction::OPCODES);
        instructions.push(instr);
    }
    Some(Program::new(arity, instructions))
}

mod decimal {
    use std::str::FromStr;

    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        BigUint::from_str(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_is_the_empty_program() {
        assert_eq!(decode_program(&ProgramIndex::from(0)), Program::default());
        assert_eq!(decode_program(&ProgramIndex::from(1)), Program::default());
    }

    #[test]
    fn empty_program_round_trips() {
        let e0 = encode_program(&Program::default());
        assert_eq!(decode_program(&e0), Program::default());
    }

    #[test]
    fn identity_round_trips() {
        let id = Program::new(1, vec![Instruction::Copy { src: 0, dst: 0 }]);
        let e = encode_program(&id);
        assert_eq!(decode_program(&e), id);
    }

    #[test]
    fn small_indices_are_small_programs() {
        for e in 0u64..10_000 {
            let p = decode_program(&ProgramIndex::from(e));
            assert!(
                p.len() <= 14,
                "index {e} decoded to {} instructions",
                p.len()
            );
        }
    }

    #[test]
    fn serde_uses_decimal_strings() {
        let e = ProgramIndex::from(12345);
        assert_eq!(serde_json::to_string(&e).unwrap(), "\"12345\"");
        let back: ProgramIndex = serde_json::from_str("\"12345\"").unwrap();
        assert_eq!(back, e);
    }
}
