//! Budgeted computability workbench.
//!
//! Every question that is undecidable in general (halting, well-foundedness of
//! a program-defined relation, membership in a jump) is asked with an explicit
//! step budget and answered with a three-valued result.

pub mod diagonal;
pub mod hierarchy;
pub mod machine;
pub mod ordinal;
pub mod tree;

pub use diagonal::{
    diag_majorizes, diagonal_value, dnr_consistent, inseparable_membership, majorizes,
    BudgetedAnswer, FnSource, KString, Majorization, SeparationReport,
};
pub use hierarchy::{
    class_containment, fgh_eval, hierarchy_distinct, iterate_jump, jump_approx, HierarchyFn,
    OracleApprox,
};
pub use machine::{
    etr_define, fixed_point, run_bounded, smn, t_predicate, u_extract, EvalOutcome, Program,
    ProgramIndex, Trace, TraceCode,
};
pub use ordinal::{
    canonical_notation, cnf_compare, compare_notation, notation_to_ordinal, wf_check, CnfOrdinal,
    FiniteRelation, Notation, WfReport,
};
pub use tree::{dnr2_predicate, is_dead, leftmost_member, level_set, LevelSet, TreePredicate};
