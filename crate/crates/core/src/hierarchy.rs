//! The fast-growing hierarchy over canonical notations, and finite
//! approximations to iterated Turing jumps.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::diagonal::{majorizes, DiagonalError, FnSource, Majorization};
use crate::machine::{decode_program, evaluate_with_oracle, Evaluation, ProgramIndex};
use crate::ordinal::{canonical_notation, notation_to_ordinal, CnfOrdinal, Notation, OrdinalError};

/// Deepest jump iterated by [`iterate_jump`].
pub const MAX_JUMP_LEVEL: u64 = 4;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HierarchyError {
    #[error("out of budget after {budget} unfoldings")]
    OutOfBudget { budget: u64 },
    #[error("value unresolved at {x} within budget {budget}")]
    UnresolvedAt { x: u64, budget: u64 },
    #[error("ordinals must differ, both are {0}")]
    EqualOrdinals(String),
    #[error("jump level {0} exceeds the guard {MAX_JUMP_LEVEL}")]
    LevelTooLarge(u64),
    #[error(transparent)]
    Ordinal(#[from] OrdinalError),
}

struct Unfolder {
    budget: u64,
    used: u64,
}

impl Unfolder {
    fn spend(&mut self) -> Result<(), HierarchyError> {
        if self.used >= self.budget {
            return Err(self.exhausted());
        }
        self.used += 1;
        Ok(())
    }

    /// Iterative, since descending chains can be as long as the budget.
    fn eval(&mut self, a: &CnfOrdinal, x: &BigUint) -> Result<BigUint, HierarchyError> {
        // frames: apply F_pred `remaining` more times to the current value
        let mut frames: Vec<(CnfOrdinal, u64)> = Vec::new();
        let mut ord = a.clone();
        let mut v = x.clone();
        loop {
            self.spend()?;
            if ord.is_zero() {
                v += 1u32;
            } else if ord == CnfOrdinal::one() {
                v = (v << 1u32) + 1u32;
            } else if let Some(pred) = ord.predecessor() {
                let reps = v.to_u64().and_then(|r| r.checked_add(1));
                match reps.filter(|&r| r <= self.budget - self.used) {
                    Some(r) => frames.push((pred, r)),
                    // every iteration costs an unfolding
                    None => return Err(self.exhausted()),
                }
            } else {
                let n = v.to_u64().ok_or_else(|| self.exhausted())?;
                ord = ord.fundamental_sequence(n)?;
                continue;
            }
            loop {
                match frames.last_mut() {
                    None => return Ok(v),
                    Some((_, 0)) => {
                        frames.pop();
                    }
                    Some((pred, remaining)) => {
                        *remaining -= 1;
                        ord = pred.clone();
                        break;
                    }
                }
            }
        }
    }

    fn exhausted(&self) -> HierarchyError {
        HierarchyError::OutOfBudget {
            budget: self.budget,
        }
    }
}

/// `F_a(x)`: `F_0(x) = x+1`, `F_{α+1}(x) = F_α^{x+1}(x)`,
/// `F_λ(x) = F_{λ[x]}(x)`. `budget` bounds the number of unfoldings;
/// `F_1(x) = 2x+1` is taken in one.
pub fn fgh_eval(a: &CnfOrdinal, x: &BigUint, budget: u64) -> Result<BigUint, HierarchyError> {
    Unfolder { budget, used: 0 }.eval(a, x)
}

/// A member of the hierarchy, indexed by a notation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HierarchyFn {
    pub index: Notation,
    pub semantic: CnfOrdinal,
}

impl HierarchyFn {
    pub fn new(index: Notation) -> Self {
        let semantic = notation_to_ordinal(&index);
        HierarchyFn { index, semantic }
    }

    pub fn for_ordinal(a: &CnfOrdinal) -> Result<Self, HierarchyError> {
        Ok(HierarchyFn::new(canonical_notation(a)?))
    }

    pub fn eval(&self, x: u64, budget: u64) -> Result<BigUint, HierarchyError> {
        fgh_eval(&self.semantic, &BigUint::from(x), budget)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Distinctness {
    Witness(u64),
    NoWitnessUpTo(u64),
}

fn value_at(a: &CnfOrdinal, x: u64, budget: u64) -> Result<BigUint, HierarchyError> {
    match fgh_eval(a, &BigUint::from(x), budget) {
        Err(HierarchyError::OutOfBudget { .. }) => Err(HierarchyError::UnresolvedAt { x, budget }),
        other => other,
    }
}

/// Least `x ≤ horizon` with `F_a(x) ≠ F_b(x)`.
pub fn hierarchy_distinct(
    a: &CnfOrdinal,
    b: &CnfOrdinal,
    horizon: u64,
    budget: u64,
) -> Result<Distinctness, HierarchyError> {
    if a == b {
        return Err(HierarchyError::EqualOrdinals(a.to_string()));
    }
    for x in 0..=horizon {
        if value_at(a, x, budget)? != value_at(b, x, budget)? {
            return Ok(Distinctness::Witness(x));
        }
    }
    Ok(Distinctness::NoWitnessUpTo(horizon))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ContainmentVerdict {
    /// `a < b`: `F_b` should eventually dominate `F_a`.
    Contained,
    Equal,
    /// `a > b`: the check runs the other way.
    Reversed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContainmentReport {
    pub verdict: ContainmentVerdict,
    /// Windowed domination of the smaller index by the larger; `None` for
    /// equal ordinals.
    pub majorization: Option<Majorization>,
    pub horizon: u64,
    pub budget: u64,
}

fn table(a: &CnfOrdinal, horizon: u64, budget: u64) -> Result<FnSource, HierarchyError> {
    (0..=horizon)
        .map(|x| value_at(a, x, budget))
        .collect::<Result<Vec<_>, _>>()
        .map(FnSource::Table)
}

/// Class containment proxied by majorization of the indexing functions.
pub fn class_containment(
    a: &CnfOrdinal,
    b: &CnfOrdinal,
    horizon: u64,
    budget: u64,
) -> Result<ContainmentReport, HierarchyError> {
    let (verdict, small, large) = match a.cmp(b) {
        Ordering::Equal => {
            return Ok(ContainmentReport {
                verdict: ContainmentVerdict::Equal,
                majorization: None,
                horizon,
                budget,
            })
        }
        Ordering::Less => (ContainmentVerdict::Contained, a, b),
        Ordering::Greater => (ContainmentVerdict::Reversed, b, a),
    };
    let f = table(large, horizon, budget)?;
    let g = table(small, horizon, budget)?;
    let m = majorizes(&f, &g, horizon, 0).map_err(|e| match e {
        DiagonalError::UnresolvedAt(x) => HierarchyError::UnresolvedAt { x, budget },
        other => unreachable!("tables cover the window: {other}"),
    })?;
    Ok(ContainmentReport {
        verdict,
        majorization: Some(m),
        horizon,
        budget,
    })
}

/// Finite approximation to `∅^(level)`: indices below `range` found to halt
/// within `stage` steps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleApprox {
    pub level: u64,
    pub stage: u64,
    pub members: BTreeSet<u64>,
    pub range: u64,
}

impl OracleApprox {
    pub fn empty(range: u64) -> Self {
        OracleApprox {
            level: 0,
            stage: 0,
            members: BTreeSet::new(),
            range,
        }
    }

    /// Membership as an oracle; queries at or beyond `range` answer no.
    pub fn contains(&self, n: &BigUint) -> bool {
        n.to_u64()
            .is_some_and(|v| v < self.range && self.members.contains(&v))
    }
}

/// `{e < range : φ_e^{base}(e) halts within stage steps}`.
pub fn jump_approx(base: &OracleApprox, stage: u64, range: u64) -> OracleApprox {
    let oracle = |n: &BigUint| base.contains(n);
    let members = (0..range)
        .filter(|&e| {
            let program = decode_program(&ProgramIndex::from(e));
            matches!(
                evaluate_with_oracle(&program, &[BigUint::from(e)], stage, &oracle),
                Evaluation::Halted { .. }
            )
        })
        .collect();
    OracleApprox {
        level: base.level + 1,
        stage,
        members,
        range,
    }
}

/// `n` jumps of the empty set, each approximated at the same stage and range.
pub fn iterate_jump(n: u64, stage: u64, range: u64) -> Result<OracleApprox, HierarchyError> {
    if n > MAX_JUMP_LEVEL {
        return Err(HierarchyError::LevelTooLarge(n));
    }
    let mut approx = OracleApprox::empty(range);
    approx.stage = stage;
    for _ in 0..n {
        approx = jump_approx(&approx, stage, range);
    }
    Ok(approx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> CnfOrdinal {
        s.parse().unwrap()
    }

    fn f(a: &str, x: u64) -> BigUint {
        fgh_eval(&o(a), &BigUint::from(x), 1_000_000).unwrap()
    }

    #[test]
    fn small_values() {
        assert_eq!(f("0", 7), BigUint::from(8u32));
        for x in 0..=10 {
            assert_eq!(f("1", x), BigUint::from(2 * x + 1));
        }
        assert_eq!(f("2", 3), BigUint::from(63u32));
        assert_eq!(f("w", 2), f("2", 2));
    }

    #[test]
    fn budget_is_enforced() {
        assert_eq!(
            fgh_eval(&o("3"), &BigUint::from(3u32), 100_000),
            Err(HierarchyError::OutOfBudget { budget: 100_000 })
        );
        assert!(fgh_eval(&o("2"), &BigUint::from(3u32), 3).is_err());
    }

    #[test]
    fn distinct_pairs() {
        assert_eq!(
            hierarchy_distinct(&o("0"), &o("1"), 10, 10_000),
            Ok(Distinctness::Witness(1))
        );
        assert_eq!(
            hierarchy_distinct(&o("1"), &o("2"), 10, 10_000),
            Ok(Distinctness::Witness(1))
        );
        assert!(matches!(
            hierarchy_distinct(&o("w"), &o("w"), 10, 10_000),
            Err(HierarchyError::EqualOrdinals(_))
        ));
    }

    #[test]
    fn containment() {
        let r = class_containment(&o("1"), &o("2"), 10, 10_000).unwrap();
        assert_eq!(r.verdict, ContainmentVerdict::Contained);
        assert_eq!(r.majorization, Some(Majorization::Witness(0)));
        let r = class_containment(&o("2"), &o("1"), 10, 10_000).unwrap();
        assert_eq!(r.verdict, ContainmentVerdict::Reversed);
        assert_eq!(r.majorization, Some(Majorization::Witness(0)));
        let r = class_containment(&o("2"), &o("2"), 10, 10_000).unwrap();
        assert_eq!(r.verdict, ContainmentVerdict::Equal);
    }

    #[test]
    fn jumps() {
        assert!(iterate_jump(0, 100, 50).unwrap().members.is_empty());
        assert_eq!(
            iterate_jump(1, 100, 50).unwrap(),
            jump_approx(&OracleApprox::empty(50), 100, 50)
        );
        assert_eq!(
            iterate_jump(5, 10, 10),
            Err(HierarchyError::LevelTooLarge(5))
        );
    }
}
