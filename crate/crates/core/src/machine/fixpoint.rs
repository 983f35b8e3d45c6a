//! Recursion-theorem fixed points by self-application.
//!
//! For a transformer `ψ` let `d` be the program that on `(y, x…)` computes
//! `smn(y, [y])`, feeds it to `ψ`, and runs the result on `x…`. Then
//! `e = smn(d, [d])` satisfies `φ_e(x) = φ_d(d, x) = φ_{ψ(e)}(x)`.

use super::asm::Asm;
use super::exec::{evaluate_index, Evaluation};
use super::index::{encode_program, ProgramIndex};
use super::smn::smn;
use super::MachineError;

/// Inputs forwarded by a fixed point to `φ_{ψ(e)}`. Fixed points behave as
/// stated for argument lists of at most this length.
pub const FIXPOINT_ARITY: u64 = 8;

const SELF_APPLIED: u64 = 20;
const PSI: u64 = 21;
const IMAGE: u64 = 22;

/// The self-application program `d` for `ψ`.
pub fn diagonal_program(psi: &ProgramIndex) -> ProgramIndex {
    let d = Asm::new()
        .specialize(SELF_APPLIED, 0, 0)
        .load(PSI, psi.0.clone())
        .apply(IMAGE, PSI, SELF_APPLIED, 1)
        .apply(0, IMAGE, 1, FIXPOINT_ARITY)
        .finish(FIXPOINT_ARITY + 1);
    encode_program(&d)
}

/// The fixed point `smn(d, [d])`, without checking that `ψ` halts on it.
pub fn fixed_point_index(psi: &ProgramIndex) -> ProgramIndex {
    let d = diagonal_program(psi);
    let d_value = d.0.clone();
    smn(&d, &[d_value])
}

/// `ψ(e)`, the transformed index.
pub fn transform(
    psi: &ProgramIndex,
    e: &ProgramIndex,
    budget: u64,
) -> Result<ProgramIndex, MachineError> {
    match evaluate_index(psi, std::slice::from_ref(&e.0), budget) {
        Evaluation::Halted { output, .. } => Ok(ProgramIndex(output)),
        Evaluation::OutOfBudget { .. } => Err(MachineError::PsiDiverged { budget }),
    }
}

/// An index `e` with `φ_e = φ_{ψ(e)}` on argument lists up to [`FIXPOINT_ARITY`].
///
/// Fails with `PsiDiverged` when `ψ` does not halt on `e` within `budget`.
pub fn fixed_point(psi: &ProgramIndex, budget: u64) -> Result<ProgramIndex, MachineError> {
    let e = fixed_point_index(psi);
    transform(psi, &e, budget)?;
    Ok(e)
}

/// Transformer `g ↦ smn(template, [g])`: its fixed point runs `template` with
/// its own index as first argument.
pub fn self_specializer(template: &ProgramIndex) -> ProgramIndex {
    let p = Asm::new()
        .load(1, template.0.clone())
        .specialize(0, 1, 0)
        .finish(1);
    encode_program(&p)
}

/// `fixed_point(self_specializer(template))`: an index `e` with
/// `φ_e(x…) = φ_template(e, x…)`.
pub fn self_referential(template: &ProgramIndex) -> ProgramIndex {
    fixed_point_index(&self_specializer(template))
}

/// Transformer that ignores its input and outputs `target`.
pub fn constant_transformer(target: &ProgramIndex) -> ProgramIndex {
    encode_program(&Asm::new().load(0, target.0.clone()).finish(1))
}

#[cfg(test)]
mod tests {
    use num_bigint::BigUint;

    use super::*;
    use crate::machine::exec::evaluate_index;
    use crate::machine::program::Program;

    fn n(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn constant_transformer_fixed_point_computes_successor() {
        let succ = encode_program(&Program::parse_text("S 0").unwrap());
        let e = fixed_point(&constant_transformer(&succ), 100).unwrap();
        for x in 0..=10 {
            assert_eq!(
                evaluate_index(&e, &[n(x)], 10_000).output(),
                Some(&n(x + 1))
            );
        }
    }

    #[test]
    fn quine() {
        // ψ(g) = smn(projection, [g]): a program that outputs g
        let projection = encode_program(&Program::default());
        let psi = self_specializer(&projection);
        let e = fixed_point(&psi, 1000).unwrap();
        assert_eq!(evaluate_index(&e, &[], 10_000).output(), Some(&e.0));
    }

    #[test]
    fn identity_transformer_diverges_on_its_fixed_point() {
        let id = encode_program(&Program::default());
        let e = fixed_point(&id, 100).unwrap();
        assert!(evaluate_index(&e, &[n(3)], 5_000).output().is_none());
    }

    #[test]
    fn diverging_transformer_is_reported() {
        let lp = encode_program(&Program::parse_text("J 0 0 0").unwrap());
        assert_eq!(
            fixed_point(&lp, 50),
            Err(MachineError::PsiDiverged { budget: 50 })
        );
    }
}
