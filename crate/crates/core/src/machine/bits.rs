//! Self-delimiting bit codes used by the program and configuration numberings.
//!
//! A code word is a natural number whose binary expansion is a leading `1`
//! sentinel followed by a payload of Elias-gamma codes. The sentinel keeps
//! leading zeros of the payload significant.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

#[derive(Debug, Default, Clone)]
pub(crate) struct BitWriter {
    bits: Vec<bool>,
}

impl BitWriter {
    pub fn new() -> Self {
        Self::default()
    }

    /// Elias-gamma code of `n + 1`.
    pub fn gamma(&mut self, n: &BigUint) {
        let m = n + 1u32;
        let len = m.bits();
        self.bits
            .extend(std::iter::repeat_n(false, (len - 1) as usize));
        for i in (0..len).rev() {
            self.bits.push(m.bit(i));
        }
    }

    pub fn gamma_u64(&mut self, n: u64) {
        self.gamma(&BigUint::from(n));
    }

    /// Elias-delta code of `n + 1`: the gamma code of its length, then its
    /// bits below the leading one. Used for operands that may be large.
    pub fn delta(&mut self, n: &BigUint) {
        let m = n + 1u32;
        let len = m.bits();
        self.gamma_u64(len - 1);
        for i in (0..len - 1).rev() {
            self.bits.push(m.bit(i));
        }
    }

    /// Sentinel bit followed by the payload.
    pub fn finish(self) -> BigUint {
        let mut digits = Vec::with_capacity(self.bits.len() + 1);
        digits.push(1u8);
        digits.extend(self.bits.iter().map(|&b| b as u8));
        BigUint::from_radix_be(&digits, 2).expect("binary digits")
    }
}

/// What to do when a gamma code runs past the end of the payload.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Padding {
    /// Missing bits read as `1`, so every payload parses.
    Ones,
    /// Running out of bits is a parse failure.
    Strict,
}

pub(crate) struct BitReader {
    bits: Vec<bool>,
    pos: usize,
    padding: Padding,
}

impl BitReader {
    /// Reads the payload of `word`. Returns `None` for zero, which has no sentinel.
    pub fn new(word: &BigUint, padding: Padding) -> Option<Self> {
        if word.is_zero() {
            return None;
        }
        let len = word.bits();
        let bits = (0..len - 1).rev().map(|i| word.bit(i)).collect();
        Some(Self {
            bits,
            pos: 0,
            padding,
        })
    }

    pub fn is_exhausted(&self) -> bool {
        self.pos >= self.bits.len()
    }

    fn next_bit(&mut self) -> Option<bool> {
        let bit = match self.bits.get(self.pos) {
            Some(&b) => b,
            None if self.padding == Padding::Ones => true,
            None => return None,
        };
        self.pos += 1;
        Some(bit)
    }

    pub fn gamma(&mut self) -> Option<BigUint> {
        let mut zeros = 0usize;
        while !self.next_bit()? {
            zeros += 1;
        }
        let mut m = BigUint::one();
        for _ in 0..zeros {
            m <<= 1u32;
            if self.next_bit()? {
                m += 1u32;
            }
        }
        Some(m - 1u32)
    }

    pub fn gamma_u64(&mut self) -> Option<u64> {
        self.gamma()?.to_u64()
    }

    /// Inverse of [`BitWriter::delta`]. A length running past the payload
    /// is rejected even under [`Padding::Ones`], so decoding stays cheap.
    pub fn delta(&mut self) -> Option<BigUint> {
        let len = self.gamma_u64()?;
        let remaining = self.bits.len().saturating_sub(self.pos) as u64;
        if len > remaining {
            return None;
        }
        let mut m = BigUint::one() << len;
        for i in (0..len).rev() {
            if self.next_bit()? {
                m.set_bit(i, true);
            }
        }
        Some(m - 1u32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_round_trip_small_values() {
        let values = [0u64, 1, 2, 3, 7, 8, 41, 1000, u64::MAX - 1];
        let mut w = BitWriter::new();
        for v in values {
            w.gamma_u64(v);
        }
        let word = w.finish();
        let mut r = BitReader::new(&word, Padding::Strict).unwrap();
        for v in values {
            assert_eq!(r.gamma_u64(), Some(v));
        }
        assert!(r.is_exhausted());
        assert_eq!(r.gamma(), None);
    }

    #[test]
    fn delta_round_trip() {
        let big = BigUint::from(3u32).pow(500);
        let mut w = BitWriter::new();
        w.delta(&BigUint::zero());
        w.delta(&big);
        w.gamma_u64(5);
        let word = w.finish();
        assert!(word.bits() < big.bits() + 40);
        let mut r = BitReader::new(&word, Padding::Strict).unwrap();
        assert_eq!(r.delta(), Some(BigUint::zero()));
        assert_eq!(r.delta(), Some(big));
        assert_eq!(r.gamma_u64(), Some(5));
    }

    #[test]
    fn zero_has_no_payload() {
        assert!(BitReader::new(&BigUint::zero(), Padding::Ones).is_none());
    }

    #[test]
    fn ones_padding_terminates() {
        // payload "00": two zeros then padding supplies the terminating one and data bits
        let word = BigUint::from(0b100u32);
        let mut r = BitReader::new(&word, Padding::Ones).unwrap();
        assert_eq!(r.gamma_u64(), Some(6)); // 111 -> 7 -> 6
    }
}
