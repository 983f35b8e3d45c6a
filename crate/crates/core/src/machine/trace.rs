//! Halting traces, their prime-power codes, the T-predicate and output extraction.
//!
//! A trace `⟨σ_0, …, σ_{n−1}⟩` is coded as `t = 2^n · ∏_{i<n} p_{i+1}^{c_i}`
//! where `p_1 = 3, p_2 = 5, …` are the odd primes and `c_i` is the code of
//! configuration `σ_i`: a sentinel bit followed by the gamma codes of the
//! instruction pointer, the clock, and registers `r0 … r_top` up to the last
//! nonzero one.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::bits::{BitReader, BitWriter, Padding};
use super::exec::{replay_step, run_program, Configuration, EvalOutcome, Registers};
use super::index::{decode_program, ProgramIndex};
use super::program::Program;
use super::MachineError;

/// Largest trace code produced or accepted, in bits.
pub const TRACE_CODE_MAX_BITS: u64 = 1 << 20;

/// Configurations of the outermost program, in order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct Trace {
    pub configs: Vec<Configuration>,
}

impl Trace {
    pub fn new(configs: Vec<Configuration>) -> Self {
        Trace { configs }
    }

    pub fn len(&self) -> usize {
        self.configs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.configs.is_empty()
    }

    pub fn last(&self) -> Option<&Configuration> {
        self.configs.last()
    }

    /// Whether this is the halting computation of `program` on `inputs`:
    /// it starts at the initial configuration, each configuration follows from
    /// the previous by one step, and only the last one is halted.
    pub fn is_halting_run_of(&self, program: &Program, inputs: &[BigUint]) -> bool {
        let Some(first) = self.configs.first() else {
            return false;
        };
        if *first != Configuration::initial(inputs) {
            return false;
        }
        for pair in self.configs.windows(2) {
            match replay_step(program, &pair[0], pair[1].clock) {
                Some(next) if next == pair[1] => {}
                _ => return false,
            }
        }
        self.configs.last().is_some_and(|c| c.is_halted_in(program))
    }
}

/// A trace code `t`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TraceCode(pub BigUint);

impl std::fmt::Display for TraceCode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn encode_configuration(config: &Configuration) -> BigUint {
    let mut w = BitWriter::new();
    w.gamma_u64(config.ip);
    w.gamma_u64(config.clock);
    let mut next = 0;
    for (r, v) in config.registers.iter() {
        for _ in next..r {
            w.gamma(&BigUint::zero());
        }
        w.gamma(v);
        next = r + 1;
    }
    w.finish()
}

/// Strict inverse of [`encode_configuration`]; rejects non-canonical codes.
pub fn decode_configuration(code: &BigUint) -> Option<Configuration> {
    let mut r = BitReader::new(code, Padding::Strict)?;
    let ip = r.gamma_u64()?;
    let clock = r.gamma_u64()?;
    let mut registers = Registers::default();
    let mut reg = 0u64;
    let mut last_zero = false;
    while !r.is_exhausted() {
        let v = r.gamma()?;
        last_zero = v.is_zero();
        registers.set(reg, v);
        reg += 1;
    }
    if last_zero {
        return None;
    }
    Some(Configuration {
        ip,
        clock,
        registers,
    })
}

/// The first `n` odd primes.
fn odd_primes(n: usize) -> Vec<u32> {
    let mut primes: Vec<u32> = Vec::with_capacity(n);
    let mut candidate = 3u32;
    while primes.len() < n {
        if primes
            .iter()
            .take_while(|&&p| p * p <= candidate)
            .all(|&p| !candidate.is_multiple_of(p))
        {
            primes.push(candidate);
        }
        candidate += 2;
    }
    primes
}

pub fn encode_trace(trace: &Trace) -> Result<TraceCode, MachineError> {
    let n = trace.len();
    if n == 0 {
        return Err(MachineError::NotATrace);
    }
    let codes: Vec<BigUint> = trace.configs.iter().map(encode_configuration).collect();
    let primes = odd_primes(n);
    let mut estimate = n as f64;
    for (c, &p) in codes.iter().zip(&primes) {
        if c.bits() > 40 {
            return Err(MachineError::TraceTooLarge);
        }
        estimate += u64::try_from(c).expect("40-bit code") as f64 * f64::from(p).log2();
        if estimate > TRACE_CODE_MAX_BITS as f64 {
            return Err(MachineError::TraceTooLarge);
        }
    }
    let mut t = BigUint::one() << n;
    for (c, &p) in codes.iter().zip(&primes) {
        let exp = u32::try_from(c).map_err(|_| MachineError::TraceTooLarge)?;
        t *= BigUint::from(p).pow(exp);
    }
    if t.bits() > TRACE_CODE_MAX_BITS {
        return Err(MachineError::TraceTooLarge);
    }
    Ok(TraceCode(t))
}

/// Divides out every factor `p` of `rest` and returns the multiplicity.
fn strip_prime(rest: &mut BigUint, p: u32) -> u64 {
    let p = BigUint::from(p);
    if !(&*rest % &p).is_zero() {
        return 0;
    }
    // p^(2^k) for increasing k while it still divides
    let mut powers = vec![p];
    loop {
        let next = powers.last().expect("nonempty").pow(2);
        if next.bits() > rest.bits() || !(&*rest % &next).is_zero() {
            break;
        }
        powers.push(next);
    }
    let mut count = 0u64;
    for (k, pw) in powers.iter().enumerate().rev() {
        if (&*rest % pw).is_zero() {
            *rest /= pw;
            count += 1u64 << k;
        }
    }
    count
}

pub fn decode_trace(t: &TraceCode) -> Result<Trace, MachineError> {
    let t = &t.0;
    if t.is_zero() || t.bits() > TRACE_CODE_MAX_BITS {
        return Err(MachineError::NotATrace);
    }
    let n = t.trailing_zeros().unwrap_or(0);
    if n == 0 {
        return Err(MachineError::NotATrace);
    }
    let mut rest = t >> n;
    let mut configs = Vec::with_capacity(n as usize);
    for p in odd_primes(n as usize) {
        let c = strip_prime(&mut rest, p);
        if c == 0 {
            return Err(MachineError::NotATrace);
        }
        let config = decode_configuration(&BigUint::from(c)).ok_or(MachineError::NotATrace)?;
        configs.push(config);
    }
    if !rest.is_one() {
        return Err(MachineError::NotATrace);
    }
    Ok(Trace::new(configs))
}

/// Kleene's T-predicate: `t` codes the halting computation of `φ_e` on `inputs`.
///
/// Total: decoding and replay are bounded by `t` itself.
pub fn t_predicate(e: &ProgramIndex, inputs: &[BigUint], t: &TraceCode) -> bool {
    match decode_trace(t) {
        Ok(trace) => trace.is_halting_run_of(&decode_program(e), inputs),
        Err(_) => false,
    }
}

/// Output register of the final configuration coded by `t`.
pub fn u_extract(t: &TraceCode) -> Result<BigUint, MachineError> {
    let trace = decode_trace(t)?;
    Ok(trace.last().expect("nonempty trace").output())
}

/// The trace code witnessing `φ_e(inputs)↓`, found by running within `budget`.
///
/// Runs are deterministic, so at most one code satisfies the T-predicate for a
/// given `(e, inputs)`; this is the minimal one.
pub fn min_trace_code(
    e: &ProgramIndex,
    inputs: &[BigUint],
    budget: u64,
) -> Result<Option<TraceCode>, MachineError> {
    match run_program(&decode_program(e), inputs, budget) {
        EvalOutcome::Halted { trace, .. } => encode_trace(&trace).map(Some),
        EvalOutcome::OutOfBudget { .. } => Ok(None),
    }
}
