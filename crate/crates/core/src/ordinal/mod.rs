//! Ordinals below `ε_0` in Cantor normal form, notations for ordinals below
//! `ω^ω`, and well-foundedness checks on finite relations.

pub mod cnf;
pub mod notation;
mod programs;
pub mod wf;

pub use cnf::{cnf_add, cnf_compare, cnf_mul, fundamental_sequence, CnfOrdinal};
pub use notation::{
    canonical_notation, canonical_notation_below, compare_notation, fseq_code, notation_add,
    notation_exp, notation_to_ordinal, path_properties, CodeMap, Notation, NotationCode,
    PathReport, NOTATION_CODE_MAX_BITS,
};
pub use programs::{library, NotationLibrary};
pub use wf::{order_type, wf_check, wf_check_program, FiniteRelation, ProgramWfReport, WfReport};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OrdinalError {
    #[error("{0} is not a limit ordinal")]
    NotALimit(String),
    #[error("cannot parse ordinal: {0}")]
    Parse(String),
    #[error("ordinal {ordinal} is not below {bound}")]
    OrdinalTooLarge { ordinal: String, bound: String },
    #[error("notation code exceeds {0} bits")]
    CodeTooLarge(u64),
    #[error("{0} is not a notation numeral")]
    BadNumeral(String),
    #[error("relation is not linear")]
    NotLinear,
    #[error("relation is not well-founded")]
    NotWellFounded,
    #[error("malformed relation: {0}")]
    Relation(String),
}
