//! Effective transfinite recursion along a well-founded finite relation.
//!
//! Given a relation on a finite domain `d_0 < d_1 < … < d_{D−1}` and a step
//! program, [`etr_define`] builds a program `e` with
//! `φ_e(n) = φ_step(n, v_0, …, v_{D−1})`, where `v_j = φ_e(d_j)` when
//! `(d_j, n)` is an edge and `v_j = 0` otherwise. The program calls itself
//! through its own index, obtained from the recursion theorem; inputs outside
//! the domain loop forever.

use std::collections::BTreeMap;

use num_bigint::BigUint;

use super::asm::Asm;
use super::exec::{evaluate_index, Evaluation};
use super::fixpoint::self_referential;
use super::index::{encode_program, ProgramIndex};
use crate::ordinal::wf::{wf_check, FiniteRelation, WfReport};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EtrError {
    #[error("relation is not well-founded: descent {witness:?}")]
    NotWellFounded { witness: Vec<u64> },
    #[error("step program did not halt at {0} within budget")]
    StepDiverged(u64),
}

const N_REG: u64 = 1;
const SCRATCH: u64 = 10;
const ARG: u64 = 11;
const STEP: u64 = 12;
/// `[n, v_0, …]` is assembled from here on.
const TABLE: u64 = 100;

fn require_well_founded(rel: &FiniteRelation) -> Result<(), EtrError> {
    match wf_check(rel) {
        WfReport::Descent { cycle } => Err(EtrError::NotWellFounded { witness: cycle }),
        WfReport::WellFounded { .. } => Ok(()),
    }
}

/// Template `T(self, n)` whose self-referential form is the recursive program.
pub fn etr_template(rel: &FiniteRelation, step: &ProgramIndex) -> ProgramIndex {
    let domain: Vec<u64> = rel.domain.iter().copied().collect();
    let width = domain.len() as u64;
    let mut asm = Asm::new();
    for (k, &d) in domain.iter().enumerate() {
        asm.load(SCRATCH, d)
            .jump_if_eq(N_REG, SCRATCH, &format!("case{k}"));
    }
    asm.label("outside").jump("outside");
    for (k, &d) in domain.iter().enumerate() {
        asm.label(&format!("case{k}"));
        for (j, &m) in domain.iter().enumerate() {
            if rel.is_edge(m, d) {
                asm.load(ARG, m).apply(TABLE + 1 + j as u64, 0, ARG, 1);
            }
        }
        asm.copy(N_REG, TABLE)
            .load(STEP, step.0.clone())
            .apply(0, STEP, TABLE, width + 1)
            .halt();
    }
    encode_program(&asm.finish(2))
}

/// Index of the function defined by recursion along `rel` with `step`.
///
/// Checks well-foundedness and that the step program halts on every needed
/// call within `budget`, by computing the recursion directly first.
pub fn etr_define(
    rel: &FiniteRelation,
    step: &ProgramIndex,
    budget: u64,
) -> Result<ProgramIndex, EtrError> {
    etr_oracle(rel, step, budget)?;
    Ok(self_referential(&etr_template(rel, step)))
}

/// The recursion computed directly, predecessors first, with memoisation.
pub fn etr_oracle(
    rel: &FiniteRelation,
    step: &ProgramIndex,
    budget: u64,
) -> Result<BTreeMap<u64, BigUint>, EtrError> {
    require_well_founded(rel)?;
    let domain: Vec<u64> = rel.domain.iter().copied().collect();
    let mut memo: BTreeMap<u64, BigUint> = BTreeMap::new();
    for &root in &domain {
        // post-order walk; acyclic, so every stack entry eventually resolves
        let mut stack = vec![root];
        while let Some(&n) = stack.last() {
            if memo.contains_key(&n) {
                stack.pop();
                continue;
            }
            let pending: Vec<u64> = domain
                .iter()
                .copied()
                .filter(|&m| rel.is_edge(m, n) && !memo.contains_key(&m))
                .collect();
            if !pending.is_empty() {
                stack.extend(pending);
                continue;
            }
            let mut inputs = vec![BigUint::from(n)];
            inputs.extend(domain.iter().map(|&m| {
                if rel.is_edge(m, n) {
                    memo[&m].clone()
                } else {
                    BigUint::default()
                }
            }));
            match evaluate_index(step, &inputs, budget) {
                Evaluation::Halted { output, .. } => {
                    memo.insert(n, output);
                }
                Evaluation::OutOfBudget { .. } => return Err(EtrError::StepDiverged(n)),
            }
            stack.pop();
        }
    }
    Ok(memo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::Program;

    /// `(n, v_0, …, v_{w−1}) ↦ 1 + Σ v_j`.
    fn sum_plus_one(width: u64) -> ProgramIndex {
        let mut asm = Asm::new();
        asm.load(0, 1u32).load(40, 1u32);
        for j in 1..=width {
            let l = format!("add{j}");
            let done = format!("done{j}");
            asm.zero(41)
                .label(&l)
                .jump_if_eq(41, j, &done)
                .succ(0)
                .succ(41)
                .jump(&l)
                .label(&done);
        }
        encode_program(&asm.finish(width + 1))
    }

    fn values(e: &ProgramIndex, domain: impl Iterator<Item = u64>) -> Vec<BigUint> {
        domain
            .map(
                |n| match evaluate_index(e, &[BigUint::from(n)], 1_000_000) {
                    Evaluation::Halted { output, .. } => output,
                    Evaluation::OutOfBudget { .. } => panic!("diverged at {n}"),
                },
            )
            .collect()
    }

    #[test]
    fn powers_of_two_along_the_usual_order() {
        let edges = (0..6u64).flat_map(|x| (0..x).map(move |y| (y, x)));
        let rel = FiniteRelation::new(0..6, edges).unwrap();
        let step = sum_plus_one(6);
        let e = etr_define(&rel, &step, 100_000).unwrap();
        let expected: Vec<BigUint> = [1u32, 2, 4, 8, 16, 32].map(BigUint::from).into();
        assert_eq!(values(&e, 0..6), expected);
        let oracle = etr_oracle(&rel, &step, 100_000).unwrap();
        assert_eq!(oracle.values().cloned().collect::<Vec<_>>(), expected);
    }

    #[test]
    fn empty_relation_is_constant() {
        let rel = FiniteRelation::new(0..6, []).unwrap();
        let step = encode_program(&Program::parse_text("L 0 9").unwrap());
        let e = etr_define(&rel, &step, 1000).unwrap();
        assert_eq!(values(&e, 0..6), vec![BigUint::from(9u32); 6]);
        assert!(matches!(
            evaluate_index(&e, &[BigUint::from(17u32)], 10_000),
            Evaluation::OutOfBudget { .. }
        ));
    }

    #[test]
    fn errors() {
        let rel = FiniteRelation::from_edges([(0, 1), (1, 0)]);
        let step = encode_program(&Program::parse_text("L 0 9").unwrap());
        assert_eq!(
            etr_define(&rel, &step, 1000),
            Err(EtrError::NotWellFounded {
                witness: vec![0, 1, 0]
            })
        );
        let rel = FiniteRelation::new(0..3, [(0, 2)]).unwrap();
        let looping = encode_program(&Program::parse_text("J 0 0 0").unwrap());
        assert_eq!(
            etr_define(&rel, &looping, 1000),
            Err(EtrError::StepDiverged(0))
        );
    }
}
