//! Unique notations for ordinals below `ω^ω`.
//!
//! A notation is `Zero`, the successor of a notation, or a limit given by the
//! index of a program enumerating the notations of its fundamental sequence.
//! Codes: `code(Zero) = 1`, `code(Succ n) = 2^{code n}`, `code(Lim e) = 3^e`.
//!
//! Canonical notations are built from two notation-level operations that the
//! machine programs in [`super::programs`] compute as well:
//!
//! * `add(a, Zero) = a`, `add(a, Succ x) = Succ(add(a, x))`,
//!   `add(a, Lim e) = Lim(smn(smn(ADD_GEN, [#a]), [e]))`;
//! * `exp(Zero) = Succ Zero`, `exp(Succ y) = Lim(smn(MUL_GEN, [#exp(y)]))`,
//!   `exp(Lim e) = Lim(smn(EXP_LIM, [e]))`;
//!
//! and `|ω^{β_1} + … + ω^{β_m}| = add(exp|β_1|, add(…, exp|β_m|))`, folded from
//! the right. Because each limit's program computes the same operations, its
//! output at `n` is exactly the numeral of `|α[n]|`.

use std::cmp::Ordering;
use std::collections::HashSet;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::cnf::CnfOrdinal;
use super::programs::library;
use super::OrdinalError;
use crate::machine::{evaluate_index, smn, Evaluation, ProgramIndex};

/// Largest numeric code evaluated, in bits.
pub const NOTATION_CODE_MAX_BITS: u64 = 1 << 20;

/// Symbolic code, kept as a prime-power expression because numeric codes are
/// towers of exponentials.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum NotationCode {
    One,
    Pow2(Box<NotationCode>),
    Pow3(BigUint),
}

/// How limit codes are formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CodeMap {
    /// `3^e`.
    #[default]
    PathSystem,
    /// Kleene's `3·5^e`.
    Kleene,
}

impl NotationCode {
    /// Compact natural standing for the code: `One ↦ 0`, `2^t ↦ 4·#t + 1`,
    /// `3^e ↦ 4e + 2`. Fundamental-sequence programs output numerals.
    pub fn numeral(&self) -> BigUint {
        match self {
            NotationCode::One => BigUint::zero(),
            NotationCode::Pow2(t) => (t.numeral() << 2u32) + 1u32,
            NotationCode::Pow3(e) => (e << 2u32) + 2u32,
        }
    }

    pub fn from_numeral(n: &BigUint) -> Result<NotationCode, OrdinalError> {
        // peel successor layers iteratively; the tower can be deep
        let mut layers = 0usize;
        let mut cur = n.clone();
        let base = loop {
            if cur.is_zero() {
                break NotationCode::One;
            }
            let (q, r) = cur.div_rem(&BigUint::from(4u32));
            match r.to_u32() {
                Some(1) => {
                    layers += 1;
                    cur = q;
                }
                Some(2) => break NotationCode::Pow3(q),
                _ => return Err(OrdinalError::BadNumeral(n.to_string())),
            }
        };
        Ok((0..layers).fold(base, |c, _| NotationCode::Pow2(Box::new(c))))
    }

    /// The numeric code, if it has at most [`NOTATION_CODE_MAX_BITS`] bits.
    pub fn value(&self, map: CodeMap) -> Result<BigUint, OrdinalError> {
        let too_large = || OrdinalError::CodeTooLarge(NOTATION_CODE_MAX_BITS);
        match self {
            NotationCode::One => Ok(BigUint::one()),
            NotationCode::Pow2(t) => {
                let exp = t.value(map)?;
                match exp.to_u64() {
                    Some(k) if k <= NOTATION_CODE_MAX_BITS => Ok(BigUint::one() << k),
                    _ => Err(too_large()),
                }
            }
            NotationCode::Pow3(e) => {
                let k = e
                    .to_u32()
                    .filter(|&k| f64::from(k) * 5f64.log2() < NOTATION_CODE_MAX_BITS as f64)
                    .ok_or_else(too_large)?;
                Ok(match map {
                    CodeMap::PathSystem => BigUint::from(3u32).pow(k),
                    CodeMap::Kleene => BigUint::from(5u32).pow(k) * 3u32,
                })
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Notation {
    Zero,
    Succ(Box<Notation>),
    Lim {
        fseq: ProgramIndex,
        #[serde(rename = "ordinal")]
        semantic: CnfOrdinal,
    },
}

impl Notation {
    pub fn succ(self) -> Notation {
        Notation::Succ(Box::new(self))
    }

    pub fn code(&self) -> NotationCode {
        // successor chains can be long; build iteratively
        let mut layers = 0usize;
        let mut cur = self;
        let base = loop {
            match cur {
                Notation::Zero => break NotationCode::One,
                Notation::Succ(p) => {
                    layers += 1;
                    cur = p;
                }
                Notation::Lim { fseq, .. } => break NotationCode::Pow3(fseq.0.clone()),
            }
        };
        (0..layers).fold(base, |c, _| NotationCode::Pow2(Box::new(c)))
    }

    pub fn numeral(&self) -> BigUint {
        self.code().numeral()
    }

    /// Number of `Succ` layers above the base `Zero` or `Lim`, and that base.
    fn split(&self) -> (u64, &Notation) {
        let mut k = 0;
        let mut cur = self;
        while let Notation::Succ(p) = cur {
            k += 1;
            cur = p;
        }
        (k, cur)
    }
}

pub fn notation_to_ordinal(n: &Notation) -> CnfOrdinal {
    let (k, base) = n.split();
    let base = match base {
        Notation::Zero => CnfOrdinal::zero(),
        Notation::Lim { semantic, .. } => semantic.clone(),
        Notation::Succ(_) => unreachable!("split stops at a non-successor"),
    };
    base.add(&CnfOrdinal::nat(k))
}

pub fn compare_notation(a: &Notation, b: &Notation) -> Ordering {
    notation_to_ordinal(a).cmp(&notation_to_ordinal(b))
}

/// Notation-level sum; see the module documentation.
pub fn notation_add(a: &Notation, b: &Notation) -> Notation {
    let (k, base) = b.split();
    let sum = match base {
        Notation::Zero => a.clone(),
        Notation::Lim { fseq, semantic } => {
            let lib = library();
            let partial = smn(&lib.add_gen, &[a.numeral()]);
            Notation::Lim {
                fseq: smn(&partial, std::slice::from_ref(&fseq.0)),
                semantic: notation_to_ordinal(a).add(semantic),
            }
        }
        Notation::Succ(_) => unreachable!(),
    };
    (0..k).fold(sum, |n, _| n.succ())
}

/// Notation for `ω^x`; see the module documentation.
pub fn notation_exp(x: &Notation) -> Notation {
    let lib = library();
    let (k, base) = x.split();
    let (mut acc, mut exponent) = match base {
        Notation::Zero => (Notation::Zero.succ(), CnfOrdinal::zero()),
        Notation::Lim { fseq, semantic } => (
            Notation::Lim {
                fseq: smn(&lib.exp_lim, std::slice::from_ref(&fseq.0)),
                semantic: CnfOrdinal::omega_pow(semantic.clone()),
            },
            semantic.clone(),
        ),
        Notation::Succ(_) => unreachable!(),
    };
    for _ in 0..k {
        exponent = exponent.successor();
        acc = Notation::Lim {
            fseq: smn(&lib.mul_gen, &[acc.numeral()]),
            semantic: CnfOrdinal::omega_pow(exponent.clone()),
        };
    }
    acc
}

/// Canonical notation of `a`, which must lie below `ω^ω`.
pub fn canonical_notation(a: &CnfOrdinal) -> Result<Notation, OrdinalError> {
    canonical_notation_below(a, &CnfOrdinal::omega_pow(CnfOrdinal::omega()))
}

/// Canonical notation of `a < bound`. Bounds above `ω^ω` are allowed; they
/// cost more because exponents then carry limit notations of their own.
pub fn canonical_notation_below(
    a: &CnfOrdinal,
    bound: &CnfOrdinal,
) -> Result<Notation, OrdinalError> {
    if a >= bound {
        return Err(OrdinalError::OrdinalTooLarge {
            ordinal: a.to_string(),
            bound: bound.to_string(),
        });
    }
    Ok(canonical(a))
}

fn canonical(a: &CnfOrdinal) -> Notation {
    let parts: Vec<Notation> = a.summands().map(|e| notation_exp(&canonical(e))).collect();
    let mut iter = parts.into_iter().rev();
    let Some(last) = iter.next() else {
        return Notation::Zero;
    };
    iter.fold(last, |acc, w| notation_add(&w, &acc))
}

/// Runs a limit notation's program at `n` and decodes the numeral it prints.
pub fn fseq_code(
    fseq: &ProgramIndex,
    n: u64,
    budget: u64,
) -> Result<Option<NotationCode>, OrdinalError> {
    match evaluate_index(fseq, &[BigUint::from(n)], budget) {
        Evaluation::Halted { output, .. } => NotationCode::from_numeral(&output).map(Some),
        Evaluation::OutOfBudget { .. } => Ok(None),
    }
}

/// Findings of [`path_properties`] on a finite set of notations.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct PathReport {
    /// Pairs `(i, j)` whose comparison is not antisymmetric.
    pub linearity_violations: Vec<(usize, usize)>,
    /// `(i, n)`: member `i`'s predecessor (`n = None`) or its fundamental
    /// sequence entry at `n` is not a member.
    pub closure_violations: Vec<(usize, Option<u64>)>,
    /// `(i, n)`: member `i`'s program did not answer at `n` within budget.
    pub unresolved: Vec<(usize, u64)>,
    /// `(i, j)`: distinct codes for the same ordinal.
    pub uniqueness_violations: Vec<(usize, usize)>,
}

impl PathReport {
    pub fn holds(&self) -> bool {
        self.linearity_violations.is_empty()
            && self.closure_violations.is_empty()
            && self.uniqueness_violations.is_empty()
    }
}

/// Checks linearity, closure under predecessors (fundamental sequences sampled
/// at `0..=sample_bound`) and uniqueness of notations on a finite sample.
pub fn path_properties(notations: &[Notation], sample_bound: u64, budget: u64) -> PathReport {
    let mut report = PathReport::default();
    let ordinals: Vec<CnfOrdinal> = notations.iter().map(notation_to_ordinal).collect();
    let numerals: Vec<BigUint> = notations.iter().map(Notation::numeral).collect();
    let members: HashSet<&BigUint> = numerals.iter().collect();

    for i in 0..notations.len() {
        for j in i + 1..notations.len() {
            let ab = ordinals[i].cmp(&ordinals[j]);
            let ba = ordinals[j].cmp(&ordinals[i]);
            if ab != ba.reverse() {
                report.linearity_violations.push((i, j));
            }
            if ab == Ordering::Equal && numerals[i] != numerals[j] {
                report.uniqueness_violations.push((i, j));
            }
        }
    }

    for (i, n) in notations.iter().enumerate() {
        match n {
            Notation::Zero => {}
            Notation::Succ(p) => {
                if !members.contains(&p.numeral()) {
                    report.closure_violations.push((i, None));
                }
            }
            Notation::Lim { fseq, .. } => {
                for k in 0..=sample_bound {
                    match fseq_code(fseq, k, budget) {
                        Ok(Some(code)) if members.contains(&code.numeral()) => {}
                        Ok(None) => report.unresolved.push((i, k)),
                        _ => report.closure_violations.push((i, Some(k))),
                    }
                }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> CnfOrdinal {
        s.parse().unwrap()
    }

    #[test]
    fn finite_codes() {
        assert_eq!(canonical_notation(&o("0")).unwrap(), Notation::Zero);
        let two = canonical_notation(&o("2")).unwrap();
        assert_eq!(two, Notation::Zero.succ().succ());
        assert_eq!(
            two.code().value(CodeMap::PathSystem).unwrap(),
            BigUint::from(4u32)
        );
        let one = canonical_notation(&o("1")).unwrap();
        assert_eq!(
            one.code().value(CodeMap::PathSystem).unwrap(),
            BigUint::from(2u32)
        );
    }

    #[test]
    fn numerals_round_trip() {
        let w = canonical_notation(&o("w*2 + 3")).unwrap();
        let code = w.code();
        assert_eq!(NotationCode::from_numeral(&code.numeral()).unwrap(), code);
        assert!(NotationCode::from_numeral(&BigUint::from(3u32)).is_err());
    }

    #[test]
    fn omega_program_enumerates_finite_notations() {
        let w = canonical_notation(&o("w")).unwrap();
        let Notation::Lim { fseq, semantic } = &w else {
            panic!("omega is a limit")
        };
        assert_eq!(*semantic, o("w"));
        for n in 0..5u64 {
            let code = fseq_code(fseq, n, 100_000).unwrap().unwrap();
            let expected = canonical_notation(&CnfOrdinal::nat(n)).unwrap().code();
            assert_eq!(code, expected);
            assert_eq!(
                code.value(CodeMap::PathSystem).unwrap(),
                expected.value(CodeMap::PathSystem).unwrap()
            );
        }
    }

    #[test]
    fn too_large() {
        assert!(matches!(
            canonical_notation(&o("w^w")),
            Err(OrdinalError::OrdinalTooLarge { .. })
        ));
        let six = canonical_notation(&o("6")).unwrap();
        assert!(six.code().value(CodeMap::PathSystem).is_err());
    }
}
