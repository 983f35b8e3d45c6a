//! Gödel-numbered register machines: encoding, budgeted evaluation, trace codes,
//! the T-predicate, specialisation, fixed points and effective transfinite recursion.

mod bits;

pub mod asm;
pub mod etr;
pub mod exec;
pub mod fixpoint;
pub mod index;
pub mod program;
pub mod smn;
pub mod trace;

use thiserror::Error;

pub use asm::Asm;
pub use etr::{etr_define, etr_oracle, etr_template, EtrError};
pub use exec::{
    evaluate, evaluate_index, evaluate_with_oracle, run_bounded, run_program, Configuration,
    EvalOutcome, Evaluation, NoOracle, Oracle, Registers,
};
pub use fixpoint::{fixed_point, FIXPOINT_ARITY};
pub use index::{decode_program, encode_program, ProgramIndex};
pub use program::{Instruction, Program, Reg};
pub use smn::smn;
pub use trace::{
    decode_trace, encode_trace, min_trace_code, t_predicate, u_extract, Trace, TraceCode,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MachineError {
    #[error("not a trace code")]
    NotATrace,
    #[error("trace code would exceed {} bits", trace::TRACE_CODE_MAX_BITS)]
    TraceTooLarge,
    #[error("transformer did not halt on the fixed-point index within {budget} steps")]
    PsiDiverged { budget: u64 },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid program JSON: {0}")]
    Json(String),
}
