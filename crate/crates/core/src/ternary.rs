//! Ternary vectors over `{0, 1, x}` viewed as cubes of binary points.
//!
//! Each symbol is stored as two adjacent bits of a [`BitVector`] twice as long:
//! the first bit says "0 is covered", the second "1 is covered". So `0 → 10`,
//! `1 → 01`, `x → 11` and the empty symbol `∅ → 00`. Cube intersection is then
//! a plain AND of the doubled vectors, and a result is empty when some pair is
//! `00`.

use std::fmt;
use std::str::FromStr;

use crate::error::{check_len, Error, Result};
use crate::vector::BitVector;

const LOW_BITS: u64 = 0x5555_5555_5555_5555;

/// Moves bit `i` of a 32-bit value to bit `2i`.
fn spread_even(x: u64) -> u64 {
    let mut x = x & 0xFFFF_FFFF;
    x = (x | x << 16) & 0x0000_FFFF_0000_FFFF;
    x = (x | x << 8) & 0x00FF_00FF_00FF_00FF;
    x = (x | x << 4) & 0x0F0F_0F0F_0F0F_0F0F;
    x = (x | x << 2) & 0x3333_3333_3333_3333;
    (x | x << 1) & LOW_BITS
}

/// Inverse of [`spread_even`]: bit `2i` of `x` goes to bit `i`.
fn gather_even(x: u64) -> u64 {
    let mut x = x & LOW_BITS;
    x = (x | x >> 1) & 0x3333_3333_3333_3333;
    x = (x | x >> 2) & 0x0F0F_0F0F_0F0F_0F0F;
    x = (x | x >> 4) & 0x00FF_00FF_00FF_00FF;
    x = (x | x >> 8) & 0x0000_FFFF_0000_FFFF;
    (x | x >> 16) & 0xFFFF_FFFF
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symbol {
    Zero,
    One,
    X,
    /// Only produced by intersection.
    Empty,
}

impl Symbol {
    fn from_pair(zero: bool, one: bool) -> Self {
        match (zero, one) {
            (true, false) => Symbol::Zero,
            (false, true) => Symbol::One,
            (true, true) => Symbol::X,
            (false, false) => Symbol::Empty,
        }
    }

    fn pair(self) -> (bool, bool) {
        match self {
            Symbol::Zero => (true, false),
            Symbol::One => (false, true),
            Symbol::X => (true, true),
            Symbol::Empty => (false, false),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Symbol::Zero => '0',
            Symbol::One => '1',
            Symbol::X => 'x',
            Symbol::Empty => '∅',
        }
    }
}

fn symbols_of(enc: &BitVector) -> impl Iterator<Item = Symbol> + '_ {
    (0..enc.len() / 2).map(move |i| Symbol::from_pair(enc.get(2 * i), enc.get(2 * i + 1)))
}

/// Number of `x` pairs (`11`) in an encoded vector.
fn count_x(enc: &BitVector) -> usize {
    enc.words()
        .iter()
        .map(|&w| (w & (w >> 1) & LOW_BITS).count_ones() as usize)
        .sum()
}

/// Number of `∅` pairs (`00`) in an encoded vector.
fn count_empty(enc: &BitVector) -> usize {
    let occupied: usize = enc
        .words()
        .iter()
        .map(|&w| ((w | (w >> 1)) & LOW_BITS).count_ones() as usize)
        .sum();
    enc.len() / 2 - occupied
}

/// A cube over `{0, 1, x}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TernaryVector {
    enc: BitVector,
}

impl TernaryVector {
    pub fn from_symbols<I: IntoIterator<Item = Symbol>>(symbols: I) -> Result<Self> {
        let mut bits = Vec::new();
        for (i, s) in symbols.into_iter().enumerate() {
            if s == Symbol::Empty {
                return Err(Error::InvalidSymbol {
                    symbol: '∅',
                    position: i + 1,
                });
            }
            let (z, o) = s.pair();
            bits.push(z);
            bits.push(o);
        }
        Ok(TernaryVector {
            enc: BitVector::from_bits(bits),
        })
    }

    /// Embeds a binary vector (no `x` symbols).
    pub fn from_binary(v: &BitVector) -> Self {
        let len = 2 * v.len();
        let mut words: Vec<u64> = v
            .words()
            .iter()
            .flat_map(|&w| [w & 0xFFFF_FFFF, w >> 32])
            .map(|half| {
                let ones = spread_even(half);
                (ones << 1) | (ones ^ LOW_BITS)
            })
            .collect();
        words.truncate(len.div_ceil(64));
        TernaryVector {
            enc: BitVector::from_words(len, words),
        }
    }

    pub fn len(&self) -> usize {
        self.enc.len() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, i: usize) -> Symbol {
        Symbol::from_pair(self.enc.get(2 * i), self.enc.get(2 * i + 1))
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        symbols_of(&self.enc)
    }

    /// Number of `x` symbols.
    pub fn card_x(&self) -> usize {
        count_x(&self.enc)
    }

    pub fn is_binary(&self) -> bool {
        self.card_x() == 0
    }

    /// The binary vector this cube denotes, if it has no `x`.
    pub fn to_binary(&self) -> Option<BitVector> {
        if !self.is_binary() {
            return None;
        }
        let enc = self.enc.words();
        let words = enc
            .chunks(2)
            .map(|pair| {
                let lo = gather_even(pair[0] >> 1);
                let hi = pair.get(1).map_or(0, |&w| gather_even(w >> 1));
                lo | hi << 32
            })
            .collect();
        Some(BitVector::from_words(self.len(), words))
    }

    /// Coordinatewise cube intersection.
    pub fn intersect(&self, other: &Self) -> Result<IntersectionResult> {
        check_len(self.len(), other.len())?;
        Ok(IntersectionResult {
            enc: self.enc.and(&other.enc)?,
        })
    }

    /// Number of coordinates whose intersection is `∅`.
    pub fn empty_coord_count(&self, other: &Self) -> Result<usize> {
        Ok(self.intersect(other)?.empty_count())
    }

    /// Which of the five set-theoretic relations holds between `self` (the
    /// query) and `other` (the associator).
    pub fn classify_interaction(&self, other: &Self) -> Result<InteractionClass> {
        let meet = self.intersect(other)?;
        if meet.is_empty() {
            return Ok(InteractionClass::Disjoint);
        }
        let in_query = meet.enc == self.enc;
        let in_assoc = meet.enc == other.enc;
        Ok(match (in_query, in_assoc) {
            (true, true) => InteractionClass::Equal,
            (true, false) => InteractionClass::QueryInsideAssociator,
            (false, true) => InteractionClass::AssociatorInsideQuery,
            (false, false) => InteractionClass::Overlap,
        })
    }
}

impl fmt::Display for TernaryVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.symbols()
            .try_for_each(|s| write!(f, "{}", s.as_char()))
    }
}

impl fmt::Debug for TernaryVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TernaryVector({self})")
    }
}

impl FromStr for TernaryVector {
    type Err = Error;

    /// Parses `{0,1,x}` text (`X` accepted, underscores ignored).
    fn from_str(s: &str) -> Result<Self> {
        let mut symbols = Vec::with_capacity(s.len());
        for ch in s.chars().filter(|&c| c != '_') {
            symbols.push(match ch {
                '0' => Symbol::Zero,
                '1' => Symbol::One,
                'x' | 'X' => Symbol::X,
                other => {
                    return Err(Error::InvalidSymbol {
                        symbol: other,
                        position: symbols.len() + 1,
                    })
                }
            });
        }
        if symbols.is_empty() {
            return Err(Error::ZeroLength);
        }
        Self::from_symbols(symbols)
    }
}

impl From<&BitVector> for TernaryVector {
    fn from(v: &BitVector) -> Self {
        Self::from_binary(v)
    }
}

/// Outcome of a cube intersection; may contain `∅` coordinates.
#[derive(Clone, PartialEq, Eq)]
pub struct IntersectionResult {
    enc: BitVector,
}

impl IntersectionResult {
    pub fn len(&self) -> usize {
        self.enc.len() / 2
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        symbols_of(&self.enc)
    }

    /// True iff some coordinate is `∅`.
    pub fn is_empty(&self) -> bool {
        self.empty_count() > 0
    }

    pub fn empty_count(&self) -> usize {
        count_empty(&self.enc)
    }

    /// `x` count of the intersection (meaningful when nonempty).
    pub fn card_x(&self) -> usize {
        count_x(&self.enc)
    }

    pub fn to_ternary(&self) -> Option<TernaryVector> {
        (!self.is_empty()).then(|| TernaryVector {
            enc: self.enc.clone(),
        })
    }
}

impl fmt::Display for IntersectionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.symbols()
            .try_for_each(|s| write!(f, "{}", s.as_char()))
    }
}

impl fmt::Debug for IntersectionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntersectionResult({self})")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InteractionClass {
    Equal,
    /// m ⊂ A
    QueryInsideAssociator,
    /// A ⊂ m
    AssociatorInsideQuery,
    /// Nonempty intersection without containment.
    Overlap,
    Disjoint,
}

impl InteractionClass {
    /// The class obtained by swapping query and associator.
    pub fn mirror(self) -> Self {
        match self {
            InteractionClass::QueryInsideAssociator => InteractionClass::AssociatorInsideQuery,
            InteractionClass::AssociatorInsideQuery => InteractionClass::QueryInsideAssociator,
            other => other,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn tv(s: &str) -> TernaryVector {
        s.parse().unwrap()
    }

    /// Binary points covered by a cube, as bit strings.
    fn pts(v: &TernaryVector) -> BTreeSet<String> {
        let mut out = BTreeSet::from([String::new()]);
        for s in v.symbols() {
            let choices: &[char] = match s {
                Symbol::Zero => &['0'],
                Symbol::One => &['1'],
                Symbol::X => &['0', '1'],
                Symbol::Empty => &[],
            };
            out = out
                .iter()
                .flat_map(|p| choices.iter().map(move |c| format!("{p}{c}")))
                .collect();
        }
        out
    }

    #[test]
    fn intersect_examples() {
        let r = tv("x0").intersect(&tv("xx")).unwrap();
        assert!(!r.is_empty());
        assert_eq!(r.to_ternary().unwrap(), tv("x0"));
        let expected: BTreeSet<_> = pts(&tv("x0"))
            .intersection(&pts(&tv("xx")))
            .cloned()
            .collect();
        assert_eq!(pts(&r.to_ternary().unwrap()), expected);

        let v = tv("1x0x");
        assert_eq!(v.intersect(&v).unwrap().to_ternary().unwrap(), v);

        let r = tv("0x").intersect(&tv("1x")).unwrap();
        assert!(r.is_empty());
        assert_eq!(r.to_string(), "∅x");
        assert_eq!(r.to_ternary(), None);
    }

    #[test]
    fn card_x_examples() {
        assert_eq!(tv("xx").card_x(), 2);
        assert_eq!(tv("0110").card_x(), 0);
        assert_eq!(tv("x0x1").card_x(), 2);
    }

    #[test]
    fn empty_coord_count_examples() {
        assert_eq!(tv("0101").empty_coord_count(&tv("1010")).unwrap(), 4);
        assert_eq!(tv("x10").empty_coord_count(&tv("x10")).unwrap(), 0);
        assert_eq!(tv("x10").empty_coord_count(&tv("100")).unwrap(), 1);
        assert!(pts(&tv("x10")).is_disjoint(&pts(&tv("100"))));
    }

    #[test]
    fn classify_examples() {
        use InteractionClass::*;
        assert_eq!(tv("x1").classify_interaction(&tv("x1")).unwrap(), Equal);
        assert_eq!(
            tv("x0").classify_interaction(&tv("xx")).unwrap(),
            QueryInsideAssociator
        );
        assert!(pts(&tv("x0")).is_subset(&pts(&tv("xx"))));
        assert_eq!(
            tv("xx").classify_interaction(&tv("x0")).unwrap(),
            AssociatorInsideQuery
        );
        assert_eq!(tv("x1").classify_interaction(&tv("1x")).unwrap(), Overlap);
        assert_eq!(tv("0x").classify_interaction(&tv("1x")).unwrap(), Disjoint);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            "10-".parse::<TernaryVector>(),
            Err(Error::InvalidSymbol {
                symbol: '-',
                position: 3
            })
        ));
        assert_eq!("".parse::<TernaryVector>(), Err(Error::ZeroLength));
        assert!(TernaryVector::from_symbols([Symbol::One, Symbol::Empty]).is_err());
        assert_eq!(
            tv("1x").intersect(&tv("1")),
            Err(Error::LengthMismatch { left: 2, right: 1 })
        );
        assert_eq!(tv("1X0"), tv("1x0"));
    }

    #[test]
    fn wide_vectors_cross_word_boundaries() {
        let s: String = (0..101).map(|i| ['0', '1', 'x'][i % 3]).collect();
        let v = tv(&s);
        assert_eq!(v.len(), 101);
        assert_eq!(v.card_x(), 33);
        assert_eq!(v.to_string(), s);
        let flipped: String = s
            .chars()
            .map(|c| match c {
                '0' => '1',
                '1' => '0',
                c => c,
            })
            .collect();
        assert_eq!(v.empty_coord_count(&tv(&flipped)).unwrap(), 68);
    }

    #[test]
    fn binary_embedding() {
        let b: BitVector = "1001".parse().unwrap();
        let t = TernaryVector::from_binary(&b);
        assert_eq!(t, tv("1001"));
        assert_eq!(t.to_binary().unwrap(), b);
        assert_eq!(tv("10x").to_binary(), None);
    }

    proptest::proptest! {
        #[test]
        fn from_binary_matches_symbols(bits in proptest::collection::vec(proptest::bool::ANY, 1..300)) {
            let v = BitVector::from_bits(bits.iter().copied());
            let syms: Vec<Symbol> = bits.iter().map(|&b| if b { Symbol::One } else { Symbol::Zero }).collect();
            let t = TernaryVector::from_binary(&v);
            proptest::prop_assert_eq!(&t, &TernaryVector::from_symbols(syms).unwrap());
            proptest::prop_assert_eq!(t.to_binary(), Some(v));
        }
    }
}
