//! The diagonal function `e ↦ φ_e(e)`, the inseparable pair it induces,
//! majorization on finite windows, and consistency of finite strings with
//! diagonal non-computability.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Mutex;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::machine::{evaluate_index, Evaluation, ProgramIndex};

/// Three-valued answer to a question asked with a step budget.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BudgetedAnswer<T = ()> {
    Yes(T),
    No,
    Unknown { budget: u64 },
}

impl<T> BudgetedAnswer<T> {
    pub fn is_resolved(&self) -> bool {
        !matches!(self, BudgetedAnswer::Unknown { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DiagonalError {
    #[error("entry {value} at position {position} is not below k = {k}")]
    EntryOutOfRange { position: usize, value: u64, k: u64 },
    #[error("alphabet size must be at least 2, got {0}")]
    AlphabetTooSmall(u64),
    #[error("function unresolved at {0}")]
    UnresolvedAt(u64),
}

/// A finite string over `{0, …, k−1}`. Serialises as a JSON array of its values.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KString {
    values: Vec<u64>,
    k: u64,
}

impl KString {
    pub fn new(values: Vec<u64>, k: u64) -> Result<Self, DiagonalError> {
        if k < 2 {
            return Err(DiagonalError::AlphabetTooSmall(k));
        }
        if let Some((position, &value)) = values.iter().enumerate().find(|(_, &v)| v >= k) {
            return Err(DiagonalError::EntryOutOfRange { position, value, k });
        }
        Ok(KString { values, k })
    }

    pub fn empty(k: u64) -> Self {
        KString {
            values: Vec::new(),
            k: k.max(2),
        }
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn prefix(&self, len: usize) -> KString {
        KString {
            values: self.values[..len.min(self.values.len())].to_vec(),
            k: self.k,
        }
    }

    /// `self` followed by `symbol`; panics if `symbol >= k`.
    pub fn extended(&self, symbol: u64) -> KString {
        assert!(
            symbol < self.k,
            "symbol {symbol} outside alphabet {}",
            self.k
        );
        let mut values = self.values.clone();
        values.push(symbol);
        KString { values, k: self.k }
    }

    pub fn get(&self, i: usize) -> Option<u64> {
        self.values.get(i).copied()
    }
}

impl std::fmt::Display for KString {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.k <= 10 {
            for v in &self.values {
                write!(f, "{v}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.values.iter().map(u64::to_string).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

impl Serialize for KString {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.values.serialize(s)
    }
}

/// `φ_e(e)` within `budget`, or `None`.
pub fn diagonal_run(e: &ProgramIndex, budget: u64) -> Option<BigUint> {
    match evaluate_index(e, std::slice::from_ref(&e.0), budget) {
        Evaluation::Halted { output, .. } => Some(output),
        Evaluation::OutOfBudget { .. } => None,
    }
}

/// A value different from `φ_e(e)` when that converges within `budget`:
/// `1` if it is `0`, else `0`.
pub fn diagonal_value(e: &ProgramIndex, budget: u64) -> BudgetedAnswer<u64> {
    match diagonal_run(e, budget) {
        Some(v) if v.is_zero() => BudgetedAnswer::Yes(1),
        Some(_) => BudgetedAnswer::Yes(0),
        None => BudgetedAnswer::Unknown { budget },
    }
}

/// Memoised `φ_e(e)` for small `e` at one fixed budget.
#[derive(Debug)]
pub struct DiagonalTable {
    budget: u64,
    values: Mutex<BTreeMap<u64, Option<BigUint>>>,
}

impl DiagonalTable {
    pub fn new(budget: u64) -> Self {
        DiagonalTable {
            budget,
            values: Mutex::new(BTreeMap::new()),
        }
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn get(&self, e: u64) -> Option<BigUint> {
        if let Some(v) = self.values.lock().expect("diagonal cache").get(&e) {
            return v.clone();
        }
        let v = diagonal_run(&ProgramIndex::from(e), self.budget);
        self.values
            .lock()
            .expect("diagonal cache")
            .insert(e, v.clone());
        v
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SeparationReport {
    pub in_a: BTreeSet<u64>,
    pub in_b: BTreeSet<u64>,
    pub undecided: BTreeSet<u64>,
    pub budget: u64,
}

/// Sorts `e < range_max` into `A = {e : φ_e(e) = 0}`, `B = {e : φ_e(e) = 1}`
/// and the rest (divergent within budget, or another value).
pub fn inseparable_membership(range_max: u64, budget: u64) -> SeparationReport {
    let mut report = SeparationReport {
        budget,
        ..SeparationReport::default()
    };
    for e in 0..range_max {
        match diagonal_run(&ProgramIndex::from(e), budget).and_then(|v| v.to_u64()) {
            Some(0) => report.in_a.insert(e),
            Some(1) => report.in_b.insert(e),
            _ => report.undecided.insert(e),
        };
    }
    report
}

/// A total function on an initial segment, given by a program or a table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FnSource {
    Program(ProgramIndex),
    Table(Vec<BigUint>),
}

impl FnSource {
    pub fn value(&self, x: u64, budget: u64) -> Option<BigUint> {
        match self {
            FnSource::Program(e) => match evaluate_index(e, &[BigUint::from(x)], budget) {
                Evaluation::Halted { output, .. } => Some(output),
                Evaluation::OutOfBudget { .. } => None,
            },
            FnSource::Table(t) => usize::try_from(x).ok().and_then(|i| t.get(i).cloned()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Majorization {
    /// `g(x) < f(x)` for every `y < x ≤ horizon`, and `y` is least.
    Witness(u64),
    NoWitnessUpTo(u64),
}

/// Windowed form of "`f` majorizes `g`": the least `y < horizon` with
/// `g(x) < f(x)` for all `y < x ≤ horizon`. The window `(y, horizon]` must be
/// nonempty, otherwise every pair would have the vacuous witness `horizon`.
pub fn majorizes(
    f: &FnSource,
    g: &FnSource,
    horizon: u64,
    budget: u64,
) -> Result<Majorization, DiagonalError> {
    let mut dominated = Vec::with_capacity(horizon as usize + 1);
    for x in 0..=horizon {
        let fx = f.value(x, budget).ok_or(DiagonalError::UnresolvedAt(x))?;
        let gx = g.value(x, budget).ok_or(DiagonalError::UnresolvedAt(x))?;
        dominated.push(gx < fx);
    }
    // scan down from the top for the longest dominated suffix of 1..=horizon
    let mut y = horizon;
    while y > 0 && dominated[y as usize] {
        y -= 1;
    }
    Ok(if y < horizon {
        Majorization::Witness(y)
    } else {
        Majorization::NoWitnessUpTo(horizon)
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DnrCertificate {
    pub consistent: bool,
    /// `(e, φ_e(e))` for every resolved constraint with value below `k`.
    pub constraints: Vec<(u64, u64)>,
    /// Positions where the string equals the diagonal value.
    pub violations: Vec<u64>,
    pub budget: u64,
}

fn certify(s: &KString, budget: u64, value: impl Fn(u64) -> Option<BigUint>) -> DnrCertificate {
    let mut constraints = Vec::new();
    let mut violations = Vec::new();
    for (e, &se) in s.values().iter().enumerate() {
        let e = e as u64;
        if let Some(v) = value(e).and_then(|v| v.to_u64()).filter(|&v| v < s.k()) {
            constraints.push((e, v));
            if se == v {
                violations.push(e);
            }
        }
    }
    DnrCertificate {
        consistent: violations.is_empty(),
        constraints,
        violations,
        budget,
    }
}

/// Whether `s(e) ≠ φ_e(e)` at every position where the diagonal converges
/// within `budget` to a value below `k`.
pub fn dnr_consistent(s: &KString, budget: u64) -> DnrCertificate {
    certify(s, budget, |e| diagonal_run(&ProgramIndex::from(e), budget))
}

/// [`dnr_consistent`] reading diagonal values from a shared table.
pub fn dnr_consistent_cached(s: &KString, table: &DiagonalTable) -> DnrCertificate {
    certify(s, table.budget(), |e| table.get(e))
}

/// String of length `len` taking [`diagonal_value`] where resolved and `0`
/// elsewhere.
pub fn diagonal_string(len: u64, k: u64, budget: u64) -> KString {
    let values = (0..len)
        .map(|e| match diagonal_value(&ProgramIndex::from(e), budget) {
            BudgetedAnswer::Yes(v) => v,
            _ => 0,
        })
        .collect();
    KString::new(values, k.max(2)).expect("0 and 1 are below k")
}

/// Number of prime factors of `n` with multiplicity, when trial division up
/// to `limit` settles it.
pub fn prime_factor_count(n: &BigUint, limit: u64) -> Option<u64> {
    if n.is_zero() {
        return None;
    }
    let mut rest = n.clone();
    let mut count = 0;
    let mut p = 2u64;
    while p <= limit {
        let bp = BigUint::from(p);
        if &bp * &bp > rest {
            break;
        }
        while (&rest % &bp).is_zero() {
            rest /= &bp;
            count += 1;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest == BigUint::from(1u32) {
        Some(count)
    } else if BigUint::from(p) * BigUint::from(p) > rest {
        Some(count + 1)
    } else {
        None
    }
}

const FACTOR_LIMIT: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiagMajorizeReport {
    /// Family positions `i` where `F(i) = φ_{e_i}(e_i)`.
    pub disagreement_violations: Vec<u64>,
    /// Positions `i ≤ k − 1` where `F(i) ≥ Ω(e_i)`.
    pub bound_violations: Vec<u64>,
    /// Positions whose `Ω(e_i)` could not be settled by trial division.
    pub bound_unchecked: Vec<u64>,
    /// Family positions outside `F`'s domain.
    pub beyond_domain: Vec<u64>,
    pub separation: SeparationReport,
    /// Positions in `A` mapped to 0 or in `B` mapped to 1.
    pub separation_violations: Vec<u64>,
    pub verdict: bool,
}

/// Checks `F` against the family `φ_{e_0}, φ_{e_1}, …` at position `i`:
/// (1) `F(i) ≠ φ_{e_i}(e_i)` whenever that converges, and `F(i) < Ω(e_i)`
/// for `i + 1 ≤ k`, where `Ω` counts prime factors with multiplicity;
/// (2) `F` separates `A` from `B` restricted to the family.
pub fn diag_majorizes(f: &KString, indices: &[ProgramIndex], budget: u64) -> DiagMajorizeReport {
    let mut report = DiagMajorizeReport {
        disagreement_violations: Vec::new(),
        bound_violations: Vec::new(),
        bound_unchecked: Vec::new(),
        beyond_domain: Vec::new(),
        separation: SeparationReport {
            budget,
            ..SeparationReport::default()
        },
        separation_violations: Vec::new(),
        verdict: true,
    };
    for (i, e) in indices.iter().enumerate() {
        let pos = i as u64;
        let Some(fi) = f.get(i) else {
            report.beyond_domain.push(pos);
            continue;
        };
        let diag = diagonal_run(e, budget);
        if let Some(v) = &diag {
            if *v == BigUint::from(fi) {
                report.disagreement_violations.push(pos);
            }
        }
        if pos < f.k() {
            match prime_factor_count(&e.0, FACTOR_LIMIT) {
                Some(omega) if fi < omega => {}
                Some(_) => report.bound_violations.push(pos),
                None => report.bound_unchecked.push(pos),
            }
        }
        match diag.and_then(|v| v.to_u64()) {
            Some(0) => {
                report.separation.in_a.insert(pos);
                if fi == 0 {
                    report.separation_violations.push(pos);
                }
            }
            Some(1) => {
                report.separation.in_b.insert(pos);
                if fi == 1 {
                    report.separation_violations.push(pos);
                }
            }
            _ => {
                report.separation.undecided.insert(pos);
            }
        }
    }
    report.verdict = report.disagreement_violations.is_empty()
        && report.bound_violations.is_empty()
        && report.separation_violations.is_empty();
    report
}
