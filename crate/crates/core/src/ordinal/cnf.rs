//! Ordinals below ε₀ in Cantor normal form.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::OrdinalError;

/// `ω^{e_1}·c_1 + … + ω^{e_k}·c_k` with `e_1 > … > e_k` and every `c_i ≥ 1`.
/// The empty sum is `0`. Term lists are shared, so clones are cheap; long
/// descending chains through fundamental sequences clone constantly.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct CnfOrdinal {
    terms: Arc<Vec<(CnfOrdinal, u64)>>,
}

impl CnfOrdinal {
    fn from_vec(terms: Vec<(CnfOrdinal, u64)>) -> Self {
        CnfOrdinal {
            terms: Arc::new(terms),
        }
    }
}

impl CnfOrdinal {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::nat(1)
    }

    pub fn nat(n: u64) -> Self {
        if n == 0 {
            Self::zero()
        } else {
            Self::from_vec(vec![(Self::zero(), n)])
        }
    }

    pub fn omega() -> Self {
        Self::omega_pow(Self::one())
    }

    /// `ω^e`.
    pub fn omega_pow(e: CnfOrdinal) -> Self {
        Self::from_vec(vec![(e, 1)])
    }

    /// `ω^e · c`.
    pub fn term(e: CnfOrdinal, c: u64) -> Self {
        if c == 0 {
            Self::zero()
        } else {
            Self::from_vec(vec![(e, c)])
        }
    }

    /// Builds from terms, normalising with ordinal addition.
    pub fn from_terms(terms: impl IntoIterator<Item = (CnfOrdinal, u64)>) -> Self {
        terms
            .into_iter()
            .fold(Self::zero(), |acc, (e, c)| acc.add(&Self::term(e, c)))
    }

    pub fn terms(&self) -> &[(CnfOrdinal, u64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_successor(&self) -> bool {
        self.terms.last().is_some_and(|(e, _)| e.is_zero())
    }

    pub fn is_limit(&self) -> bool {
        !self.is_zero() && !self.is_successor()
    }

    pub fn as_nat(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(e, c)] if e.is_zero() => Some(*c),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.as_nat().is_some()
    }

    /// Leading exponent; `None` for zero.
    pub fn leading_exponent(&self) -> Option<&CnfOrdinal> {
        self.terms.first().map(|(e, _)| e)
    }

    /// `α` for `α + 1`.
    pub fn predecessor(&self) -> Option<CnfOrdinal> {
        if !self.is_successor() {
            return None;
        }
        let mut terms = (*self.terms).clone();
        let last = terms.last_mut().expect("successor has terms");
        last.1 -= 1;
        if last.1 == 0 {
            terms.pop();
        }
        Some(Self::from_vec(terms))
    }

    pub fn successor(&self) -> CnfOrdinal {
        self.add(&Self::one())
    }

    /// Whether every exponent is finite, i.e. `self < ω^ω`.
    pub fn below_omega_omega(&self) -> bool {
        self.terms.iter().all(|(e, _)| e.is_finite())
    }

    /// Strictly below `bound`.
    pub fn below(&self, bound: &CnfOrdinal) -> bool {
        self < bound
    }

    pub fn add(&self, other: &CnfOrdinal) -> CnfOrdinal {
        let Some(lead) = other.leading_exponent() else {
            return self.clone();
        };
        let mut terms: Vec<(CnfOrdinal, u64)> = Vec::new();
        let mut carry = 0u64;
        for (e, c) in self.terms.iter() {
            match e.cmp(lead) {
                Ordering::Greater => terms.push((e.clone(), *c)),
                Ordering::Equal => carry = *c,
                Ordering::Less => break,
            }
        }
        let mut rest = (*other.terms).clone();
        rest[0].1 = rest[0].1.checked_add(carry).expect("coefficient overflow");
        terms.extend(rest);
        Self::from_vec(terms)
    }

    pub fn mul(&self, other: &CnfOrdinal) -> CnfOrdinal {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let lead = self.leading_exponent().expect("nonzero").clone();
        let mut acc = Self::zero();
        for (e, c) in other.terms.iter() {
            let piece = if e.is_zero() {
                // self · c: multiply the leading coefficient, keep the tail
                let mut terms = (*self.terms).clone();
                terms[0].1 = terms[0].1.checked_mul(*c).expect("coefficient overflow");
                Self::from_vec(terms)
            } else {
                Self::term(lead.add(e), *c)
            };
            acc = acc.add(&piece);
        }
        acc
    }

    /// `self[n]` under the standard assignment:
    /// `(λ + ω^{β+1})[n] = λ + ω^β·n` and `(λ + ω^γ)[n] = λ + ω^{γ[n]}` for limit `γ`.
    pub fn fundamental_sequence(&self, n: u64) -> Result<CnfOrdinal, OrdinalError> {
        if !self.is_limit() {
            return Err(OrdinalError::NotALimit(self.to_string()));
        }
        let mut prefix = (*self.terms).clone();
        let (gamma, c) = prefix.pop().expect("limit has terms");
        if c > 1 {
            prefix.push((gamma.clone(), c - 1));
        }
        let base = Self::from_vec(prefix);
        let tail = match gamma.predecessor() {
            Some(delta) => Self::term(delta, n),
            None => Self::omega_pow(gamma.fundamental_sequence(n)?),
        };
        Ok(base.add(&tail))
    }

    /// The `(exponent, coefficient)` terms expanded into single `ω^e` summands.
    pub fn summands(&self) -> impl Iterator<Item = &CnfOrdinal> {
        self.terms
            .iter()
            .flat_map(|(e, c)| std::iter::repeat_n(e, *c as usize))
    }
}

impl Ord for CnfOrdinal {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.terms, &other.terms) {
            return Ordering::Equal;
        }
        for ((ea, ca), (eb, cb)) in self.terms.iter().zip(other.terms.iter()) {
            match ea.cmp(eb).then(ca.cmp(cb)) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for CnfOrdinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub fn cnf_compare(a: &CnfOrdinal, b: &CnfOrdinal) -> Ordering {
    a.cmp(b)
}

pub fn cnf_add(a: &CnfOrdinal, b: &CnfOrdinal) -> CnfOrdinal {
    a.add(b)
}

pub fn cnf_mul(a: &CnfOrdinal, b: &CnfOrdinal) -> CnfOrdinal {
    a.mul(b)
}

pub fn fundamental_sequence(l: &CnfOrdinal, n: u64) -> Result<CnfOrdinal, OrdinalError> {
    l.fundamental_sequence(n)
}

impl fmt::Display for CnfOrdinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if e.is_zero() {
                write!(f, "{c}")?;
                continue;
            }
            f.write_str("w")?;
            if *e != CnfOrdinal::one() {
                if e.as_nat().is_some() || *e == CnfOrdinal::omega() {
                    write!(f, "^{e}")?;
                } else {
                    write!(f, "^({e})")?;
                }
            }
            if *c > 1 {
                write!(f, "*{c}")?;
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> OrdinalError {
        OrdinalError::Parse(format!("{msg} at offset {} in `{}`", self.pos, self.src))
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.src[self.pos..]
                .chars()
                .next()
                .map_or(1, char::len_utf8);
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn nat(&mut self) -> Result<u64, OrdinalError> {
        self.skip_ws();
        let digits: String = self.src[self.pos..]
            .chars()
            .take_while(char::is_ascii_digit)
            .collect();
        if digits.is_empty() {
            return Err(self.err("expected a number"));
        }
        self.pos += digits.len();
        digits.parse().map_err(|_| self.err("number too large"))
    }

    fn expr(&mut self) -> Result<CnfOrdinal, OrdinalError> {
        let mut acc = self.product()?;
        while self.eat('+') {
            acc = acc.add(&self.product()?);
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<CnfOrdinal, OrdinalError> {
        let mut acc = self.power()?;
        while self.eat('*') {
            acc = acc.mul(&self.power()?);
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<CnfOrdinal, OrdinalError> {
        match self.peek() {
            Some('w') | Some('ω') => {
                self.pos += self.peek().map_or(1, char::len_utf8);
                if self.eat('^') {
                    Ok(CnfOrdinal::omega_pow(self.atom()?))
                } else {
                    Ok(CnfOrdinal::omega())
                }
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<CnfOrdinal, OrdinalError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(inner)
            }
            Some('w') | Some('ω') => {
                self.pos += self.peek().map_or(1, char::len_utf8);
                Ok(CnfOrdinal::omega())
            }
            Some(c) if c.is_ascii_digit() => Ok(CnfOrdinal::nat(self.nat()?)),
            _ => Err(self.err("expected an ordinal")),
        }
    }
}

impl FromStr for CnfOrdinal {
    type Err = OrdinalError;

    /// Parses literals such as `w^2*3 + w*1 + 4` or `w^(w+1)`. `w` and `ω`
    /// both denote omega; sums and products need not be in normal form.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser { src: s, pos: 0 };
        let value = p.expr()?;
        if p.peek().is_some() {
            return Err(p.err("trailing input"));
        }
        Ok(value)
    }
}

impl Serialize for CnfOrdinal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for CnfOrdinal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
