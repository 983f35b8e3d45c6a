//! Register-machine instructions and programs, with the text and JSON formats.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::MachineError;

/// Register index.
pub type Reg = u64;

/// One machine instruction.
///
/// The first four are the classical unlimited-register-machine instructions.
/// The rest are primitive operations on large naturals that a unary machine
/// cannot perform within any useful step budget (loading constants, binary
/// shifts, program specialisation and calls); see [`crate::machine::exec`] for
/// their costs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Instruction {
    /// `r := 0`
    Zero(Reg),
    /// `r := r + 1`
    Succ(Reg),
    /// `dst := src`
    Copy { src: Reg, dst: Reg },
    /// Jump to `target` when `a == b`. A target at or past the end halts.
    JumpIfEq { a: Reg, b: Reg, target: u64 },
    /// `r := 1` if the current oracle contains `r`, else `0`. Without an
    /// oracle every query answers `0`.
    Query(Reg),
    /// `r := value`
    Load { reg: Reg, value: BigUint },
    /// `r := 2r`
    Double(Reg),
    /// `parity := r mod 2; r := r div 2` (the parity write wins when the registers coincide).
    Halve { reg: Reg, parity: Reg },
    /// `dst := smn(program, [value])` on program indices.
    Specialize { dst: Reg, program: Reg, value: Reg },
    /// `dst := φ_program(r_first, …, r_{first+count-1})`, run as a subcomputation.
    Apply {
        dst: Reg,
        program: Reg,
        first: Reg,
        count: u64,
    },
}

impl Instruction {
    pub(crate) const OPCODES: u64 = 10;

    pub(crate) fn opcode(&self) -> u64 {
        match self {
            Instruction::Zero(_) => 0,
            Instruction::Succ(_) => 1,
            Instruction::Copy { .. } => 2,
            Instruction::JumpIfEq { .. } => 3,
            Instruction::Query(_) => 4,
            Instruction::Load { .. } => 5,
            Instruction::Double(_) => 6,
            Instruction::Halve { .. } => 7,
            Instruction::Specialize { .. } => 8,
            Instruction::Apply { .. } => 9,
        }
    }

    fn mnemonic(&self) -> &'static str {
        match self {
            Instruction::Zero(_) => "Z",
            Instruction::Succ(_) => "S",
            Instruction::Copy { .. } => "C",
            Instruction::JumpIfEq { .. } => "J",
            Instruction::Query(_) => "Q",
            Instruction::Load { .. } => "L",
            Instruction::Double(_) => "D",
            Instruction::Halve { .. } => "H",
            Instruction::Specialize { .. } => "M",
            Instruction::Apply { .. } => "A",
        }
    }

    /// Registers the instruction reads or writes. `Apply` touches a whole range,
    /// reported by its last register.
    pub(crate) fn max_register(&self) -> Reg {
        match *self {
            Instruction::Zero(r)
            | Instruction::Succ(r)
            | Instruction::Query(r)
            | Instruction::Double(r) => r,
            Instruction::Load { reg, .. } => reg,
            Instruction::Copy { src, dst } => src.max(dst),
            Instruction::JumpIfEq { a, b, .. } => a.max(b),
            Instruction::Halve { reg, parity } => reg.max(parity),
            Instruction::Specialize {
                dst,
                program,
                value,
            } => dst.max(program).max(value),
            Instruction::Apply {
                dst,
                program,
                first,
                count,
            } => {
                let last = first.saturating_add(count.saturating_sub(1));
                dst.max(program).max(last)
            }
        }
    }

    fn operands(&self) -> Vec<Operand> {
        use Operand::Nat;
        match self {
            Instruction::Zero(r)
            | Instruction::Succ(r)
            | Instruction::Query(r)
            | Instruction::Double(r) => vec![Nat(*r)],
            Instruction::Copy { src, dst } => vec![Nat(*src), Nat(*dst)],
            Instruction::JumpIfEq { a, b, target } => vec![Nat(*a), Nat(*b), Nat(*target)],
            Instruction::Load { reg, value } => vec![Nat(*reg), Operand::Big(value.clone())],
            Instruction::Halve { reg, parity } => vec![Nat(*reg), Nat(*parity)],
            Instruction::Specialize {
                dst,
                program,
                value,
            } => vec![Nat(*dst), Nat(*program), Nat(*value)],
            Instruction::Apply {
                dst,
                program,
                first,
                count,
            } => vec![Nat(*dst), Nat(*program), Nat(*first), Nat(*count)],
        }
    }

    fn from_parts(mnemonic: &str, ops: &[BigUint]) -> Result<Self, String> {
        let want = match mnemonic {
            "Z" | "S" | "Q" | "D" => 1,
            "C" | "L" | "H" => 2,
            "J" | "M" => 3,
            "A" => 4,
            other => return Err(format!("unknown instruction `{other}`")),
        };
        if ops.len() != want {
            return Err(format!(
                "`{mnemonic}` takes {want} operand(s), got {}",
                ops.len()
            ));
        }
        let small = |i: usize| -> Result<u64, String> {
            u64::try_from(&ops[i])
                .map_err(|_| format!("operand {} of `{mnemonic}` too large", i + 1))
        };
        Ok(match mnemonic {
            "Z" => Instruction::Zero(small(0)?),
            "S" => Instruction::Succ(small(0)?),
            "Q" => Instruction::Query(small(0)?),
            "D" => Instruction::Double(small(0)?),
            "C" => Instruction::Copy {
                src: small(0)?,
                dst: small(1)?,
            },
            "L" => Instruction::Load {
                reg: small(0)?,
                value: ops[1].clone(),
            },
            "H" => Instruction::Halve {
                reg: small(0)?,
                parity: small(1)?,
            },
            "J" => Instruction::JumpIfEq {
                a: small(0)?,
                b: small(1)?,
                target: small(2)?,
            },
            "M" => Instruction::Specialize {
                dst: small(0)?,
                program: small(1)?,
                value: small(2)?,
            },
            "A" => Instruction::Apply {
                dst: small(0)?,
                program: small(1)?,
                first: small(2)?,
                count: small(3)?,
            },
            _ => unreachable!(),
        })
    }

    /// Shifts jump targets by `offset`. Used when the program is placed after a prologue.
    pub fn relocated(&self, offset: u64) -> Instruction {
        match self {
            Instruction::JumpIfEq { a, b, target } => Instruction::JumpIfEq {
                a: *a,
                b: *b,
                target: target.saturating_add(offset),
            },
            other => other.clone(),
        }
    }
}

enum Operand {
    Nat(u64),
    Big(BigUint),
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.mnemonic())?;
        for op in self.operands() {
            match op {
                Operand::Nat(n) => write!(f, " {n}")?,
                Operand::Big(n) => write!(f, " {n}")?,
            }
        }
        Ok(())
    }
}

/// A register-machine program. Inputs go to `r0, r1, …`; the output is `r0`
/// when the instruction pointer leaves the program.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Program {
    pub arity: u64,
    pub instructions: Vec<Instruction>,
}

impl Program {
    pub fn new(arity: u64, instructions: Vec<Instruction>) -> Self {
        Self {
            arity,
            instructions,
        }
    }

    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    /// One past the highest register the program can observe (at least 1, for the output).
    pub fn register_window(&self) -> u64 {
        self.instructions
            .iter()
            .map(|i| i.max_register().saturating_add(1))
            .max()
            .unwrap_or(0)
            .max(1)
    }

    /// Parses the line format: one instruction per line, `#` starts a comment.
    /// An optional `arity n` line sets the arity.
    pub fn parse_text(text: &str) -> Result<Program, MachineError> {
        let mut program = Program::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut words = line.split_whitespace();
            let head = words.next().unwrap_or_default();
            let ops: Result<Vec<BigUint>, _> = words.map(BigUint::from_str).collect();
            let ops = ops.map_err(|e| MachineError::Parse {
                line: lineno + 1,
                message: e.to_string(),
            })?;
            if head.eq_ignore_ascii_case("arity") {
                let [n] = ops.as_slice() else {
                    return Err(MachineError::Parse {
                        line: lineno + 1,
                        message: "`arity` takes one operand".into(),
                    });
                };
                program.arity = u64::try_from(n).map_err(|_| MachineError::Parse {
                    line: lineno + 1,
                    message: "arity too large".into(),
                })?;
                continue;
            }
            let instr =
                Instruction::from_parts(&head.to_ascii_uppercase(), &ops).map_err(|message| {
                    MachineError::Parse {
                        line: lineno + 1,
                        message,
                    }
                })?;
            program.instructions.push(instr);
        }
        Ok(program)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("arity {}\n", self.arity);
        for instr in &self.instructions {
            out.push_str(&instr.to_string());
            out.push('\n');
        }
        out
    }

    /// Parses `{"arity": n, "instructions": [["Z",0], …]}`. Operands may be JSON
    /// numbers or decimal strings.
    pub fn from_json(value: &Value) -> Result<Program, MachineError> {
        let repr: ProgramRepr =
            serde_json::from_value(value.clone()).map_err(|e| MachineError::Json(e.to_string()))?;
        let mut instructions = Vec::with_capacity(repr.instructions.len());
        for (i, row) in repr.instructions.iter().enumerate() {
            let bad = |message: String| MachineError::Parse {
                line: i + 1,
                message,
            };
            let (head, rest) = row
                .split_first()
                .ok_or_else(|| bad("empty instruction".into()))?;
            let head = head
                .as_str()
                .ok_or_else(|| bad("mnemonic must be a string".into()))?;
            let ops = rest
                .iter()
                .map(|v| match v {
                    Value::Number(n) => n
                        .as_u64()
                        .map(BigUint::from)
                        .ok_or_else(|| bad(format!("bad operand {n}"))),
                    Value::String(s) => BigUint::from_str(s).map_err(|e| bad(e.to_string())),
                    other => Err(bad(format!("bad operand {other}"))),
                })
                .collect::<Result<Vec<_>, _>>()?;
            instructions
                .push(Instruction::from_parts(&head.to_ascii_uppercase(), &ops).map_err(bad)?);
        }
        Ok(Program::new(repr.arity, instructions))
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .instructions
            .iter()
            .map(|instr| {
                let mut row = vec![Value::from(instr.mnemonic())];
                for op in instr.operands() {
                    row.push(match op {
                        Operand::Nat(n) => Value::from(n),
                        Operand::Big(n) => match u64::try_from(&n) {
                            Ok(small) => Value::from(small),
                            Err(_) => Value::from(n.to_string()),
                        },
                    });
                }
                Value::Array(row)
            })
            .collect();
        serde_json::json!({ "arity": self.arity, "instructions": rows })
    }
}

#[derive(Serialize, Deserialize)]
struct ProgramRepr {
    #[serde(default)]
    arity: u64,
    instructions: Vec<Vec<Value>>,
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_format_round_trip() {
        let src = "# successor\narity 1\nS 0\nJ 0 0 5   # halt\nL 3 123456789012345678901234567890\nA 0 3 1 2\n";
        let p = Program::parse_text(src).unwrap();
        assert_eq!(p.arity, 1);
        assert_eq!(p.len(), 4);
        assert_eq!(Program::parse_text(&p.to_text()).unwrap(), p);
    }

    #[test]
    fn json_format_round_trip() {
        let p = Program::parse_text("Z 0\nS 0\nC 0 1\nL 2 99999999999999999999999\n").unwrap();
        let json = p.to_json();
        assert_eq!(json["instructions"][0], serde_json::json!(["Z", 0]));
        assert_eq!(Program::from_json(&json).unwrap(), p);
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(matches!(
            Program::parse_text("S 0\nX 1\n"),
            Err(MachineError::Parse { line: 2, .. })
        ));
        assert!(Program::parse_text("J 0 1").is_err());
    }

    #[test]
    fn register_window_covers_apply_range() {
        let p = Program::new(
            0,
            vec![Instruction::Apply {
                dst: 0,
                program: 1,
                first: 4,
                count: 3,
            }],
        );
        assert_eq!(p.register_window(), 7);
        assert_eq!(Program::default().register_window(), 1);
    }
}
