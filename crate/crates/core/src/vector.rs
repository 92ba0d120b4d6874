//! Binary logic vectors and the primitive LAMP operations.
//!
//! Coordinates are numbered from 1 at the left of the printed form. Internally
//! coordinate `i` (0-based) lives in word `i / 64`, bit `i % 64`. Bits past
//! `len` in the last word are kept at zero by every constructor and operation,
//! so they never leak into counts, comparisons or `orf`.

use std::fmt;
use std::str::FromStr;

use crate::error::{check_len, Error, Result};

const WORD_BITS: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

impl BitVector {
    /// All-zero vector with `len` coordinates.
    pub fn zeros(len: usize) -> Self {
        BitVector {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = BitVector {
            len,
            words: vec![!0; words_for(len)],
        };
        v.mask_tail();
        v
    }

    /// Builds a vector from coordinates in printed order.
    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut words = Vec::new();
        let mut len = 0;
        for bit in bits {
            if len % WORD_BITS == 0 {
                words.push(0);
            }
            if bit {
                words[len / WORD_BITS] |= 1 << (len % WORD_BITS);
            }
            len += 1;
        }
        BitVector { len, words }
    }

    /// Vector with ones exactly at the given 1-based coordinates.
    pub fn from_ones(len: usize, coords: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &c in coords {
            assert!(c >= 1 && c <= len, "coordinate {c} outside 1..={len}");
            v.set(c - 1, true);
        }
        v
    }

    /// The prefix vector `1^k 0^(len-k)`.
    pub fn prefix(len: usize, k: usize) -> Self {
        assert!(
            k <= len,
            "prefix of {k} ones does not fit {len} coordinates"
        );
        let mut v = Self::zeros(len);
        let full = k / WORD_BITS;
        for w in &mut v.words[..full] {
            *w = !0;
        }
        let rest = k % WORD_BITS;
        if rest > 0 {
            v.words[full] = (1u64 << rest) - 1;
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Coordinate at 0-based index `i`.
    pub fn get(&self, i: usize) -> bool {
        assert!(
            i < self.len,
            "index {i} out of range for length {}",
            self.len
        );
        self.words[i / WORD_BITS] >> (i % WORD_BITS) & 1 == 1
    }

    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(
            i < self.len,
            "index {i} out of range for length {}",
            self.len
        );
        let mask = 1u64 << (i % WORD_BITS);
        if bit {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// 1-based coordinates holding a 1, ascending.
    pub fn ones_positions(&self) -> Vec<usize> {
        self.iter()
            .enumerate()
            .filter_map(|(i, b)| b.then_some(i + 1))
            .collect()
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Backing words: 0-based coordinate `i` is bit `i % 64` of word
    /// `i / 64`; bits past the end are zero.
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub(crate) fn from_words(len: usize, words: Vec<u64>) -> Self {
        debug_assert_eq!(words.len(), words_for(len));
        let mut v = BitVector { len, words };
        v.mask_tail();
        v
    }

    fn mask_tail(&mut self) {
        let rest = self.len % WORD_BITS;
        if rest > 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rest) - 1;
            }
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(u64, u64) -> u64) -> Result<Self> {
        check_len(self.len, other.len)?;
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(Self::from_words(self.len, words))
    }

    pub fn and(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn or(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn xor(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a ^ b)
    }

    pub fn not(&self) -> Self {
        Self::from_words(self.len, self.words.iter().map(|w| !w).collect())
    }

    /// Shift-left crowding: all ones compacted to the left, `1^k 0^(n-k)`.
    pub fn sls(&self) -> Self {
        Self::prefix(self.len, self.count_ones())
    }

    /// OR-fold of all coordinates (devectorization to one bit).
    pub fn orf(&self) -> bool {
        self.words.iter().any(|&w| w != 0)
    }

    /// True if no 0 precedes a 1, i.e. the vector is already compacted.
    pub fn is_compacted(&self) -> bool {
        self.sls() == *self
    }

    /// Printed form with `.` for zero coordinates.
    pub fn to_dotted(&self) -> String {
        self.iter().map(|b| if b { '1' } else { '.' }).collect()
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl FromStr for BitVector {
    type Err = Error;

    /// Parses a string over `{0,1}`; underscores are ignored.
    fn from_str(s: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(s.len());
        for ch in s.chars().filter(|&c| c != '_') {
            match ch {
                '0' => bits.push(false),
                '1' => bits.push(true),
                other => {
                    return Err(Error::InvalidSymbol {
                        symbol: other,
                        position: bits.len() + 1,
                    })
                }
            }
        }
        if bits.is_empty() {
            return Err(Error::ZeroLength);
        }
        Ok(Self::from_bits(bits))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bv(s: &str) -> BitVector {
        s.parse().unwrap()
    }

    #[test]
    fn and_matches_worked_example() {
        let m = bv("110011001100");
        let a = bv("000011110101");
        let r = m.and(&a).unwrap();
        assert_eq!(r, bv("000011000100"));
        assert_eq!(r.count_ones(), 3);
        assert_eq!(bv("101").and(&bv("011")).unwrap(), bv("001"));
        assert_eq!(m.and(&BitVector::ones(12)).unwrap(), m);
    }

    #[test]
    fn xor_and_not() {
        let d = bv("110011001100").xor(&bv("000011110101")).unwrap();
        assert_eq!(d.count_ones(), 6);
        let v = bv("1011001");
        assert_eq!(v.xor(&v).unwrap(), BitVector::zeros(7));
        assert_eq!(v.not().not(), v);
        assert_eq!(v.not(), bv("0100110"));
    }

    #[test]
    fn length_mismatch() {
        assert_eq!(
            bv("10").and(&bv("101")),
            Err(Error::LengthMismatch { left: 2, right: 3 })
        );
        assert!(bv("10").or(&bv("1")).is_err());
        assert!(bv("10").xor(&bv("1")).is_err());
    }

    #[test]
    fn sls_examples() {
        let q = bv("111110000001");
        assert_eq!(q.sls(), bv("111111000000"));
        assert_eq!(bv("000000").sls(), bv("000000"));
        assert_eq!(bv("010101").sls(), bv("111000"));
    }

    #[test]
    fn orf_examples() {
        assert!(!bv("000000").orf());
        assert!(bv("000100").orf());
        let v = bv("0110");
        assert!(!v.xor(&v).unwrap().orf());
    }

    #[test]
    fn parse_ignores_underscores_and_rejects_junk() {
        assert_eq!(bv("1100_1100"), bv("11001100"));
        assert_eq!(
            "10x".parse::<BitVector>(),
            Err(Error::InvalidSymbol {
                symbol: 'x',
                position: 3
            })
        );
        assert_eq!("".parse::<BitVector>(), Err(Error::ZeroLength));
        assert_eq!(bv("0101").to_string(), "0101");
        assert_eq!(bv("0101").to_dotted(), ".1.1");
    }

    #[test]
    fn padding_never_leaks() {
        for len in [1, 63, 64, 65, 127, 130] {
            let z = BitVector::zeros(len);
            let n = z.not();
            assert_eq!(n.count_ones(), len);
            assert_eq!(n, BitVector::ones(len));
            assert_eq!(n.not(), z);
            assert!(!z.orf());
            assert_eq!(n.sls(), n);
        }
    }

    #[test]
    fn de_morgan_exhaustive_small() {
        for n in 1..=4usize {
            for x in 0..1u32 << n {
                for y in 0..1u32 << n {
                    let a = BitVector::from_bits((0..n).map(|i| x >> i & 1 == 1));
                    let b = BitVector::from_bits((0..n).map(|i| y >> i & 1 == 1));
                    assert_eq!(a.and(&b).unwrap().not(), a.not().or(&b.not()).unwrap());
                }
            }
        }
    }

    fn arb_pair() -> impl Strategy<Value = (BitVector, BitVector)> {
        (1usize..600).prop_flat_map(|n| {
            (
                proptest::collection::vec(any::<bool>(), n),
                proptest::collection::vec(any::<bool>(), n),
            )
                .prop_map(|(a, b)| (BitVector::from_bits(a), BitVector::from_bits(b)))
        })
    }

    proptest! {
        #[test]
        fn sls_idempotent_and_conserving(bits in proptest::collection::vec(any::<bool>(), 1..300)) {
            let v = BitVector::from_bits(bits);
            let s = v.sls();
            prop_assert_eq!(s.sls(), s.clone());
            prop_assert_eq!(s.count_ones(), v.count_ones());
            prop_assert!(s.is_compacted());
            let first_zero = s.iter().position(|b| !b).unwrap_or(s.len());
            prop_assert!(s.iter().skip(first_zero).all(|b| !b));
        }

        #[test]
        fn de_morgan_random((a, b) in arb_pair()) {
            prop_assert_eq!(a.and(&b).unwrap().not(), a.not().or(&b.not()).unwrap());
        }

        #[test]
        fn orf_zero_iff_all_zero(bits in proptest::collection::vec(any::<bool>(), 1..300)) {
            let v = BitVector::from_bits(bits.clone());
            prop_assert_eq!(v.orf(), bits.iter().any(|&b| b));
        }

        #[test]
        fn text_round_trip(bits in proptest::collection::vec(any::<bool>(), 1..200)) {
            let v = BitVector::from_bits(bits);
            prop_assert_eq!(v.to_string().parse::<BitVector>().unwrap(), v);
        }
    }
}
