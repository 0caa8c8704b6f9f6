//! Compact 0/1 sequences describing the even/odd pattern of a trajectory prefix.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use smallvec::SmallVec;

use crate::error::Error;

const WORD: usize = 64;

/// A fixed-length sequence over {0, 1}; bit `s` is the parity of `T^s(x)`.
///
/// Bits are packed into 64-bit words; unused high bits of the last word are
/// always zero so that the derived equality and hashing are element-wise.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct ParityVector {
    words: SmallVec<[u64; 2]>,
    len: usize,
}

impl ParityVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_len(len: usize) -> Self {
        let mut words = SmallVec::new();
        words.resize(len.div_ceil(WORD), 0);
        Self { words, len }
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        bits.iter().map(|&b| b != 0).collect()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD);
        if bit {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn push(&mut self, bit: bool) {
        if self.len.is_multiple_of(WORD) {
            self.words.push(0);
        }
        self.len += 1;
        self.set(self.len - 1, bit);
    }

    pub fn last(&self) -> Option<bool> {
        self.len.checked_sub(1).map(|i| self.get(i))
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = bool> + ExactSizeIterator + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn count_zeros(&self) -> usize {
        self.len - self.count_ones()
    }

    /// Number of leading consecutive ones.
    pub fn leading_ones(&self) -> usize {
        self.iter().take_while(|&b| b).count()
    }

    /// Number of trailing consecutive zeros.
    pub fn trailing_zeros(&self) -> usize {
        self.iter().rev().take_while(|&b| !b).count()
    }

    /// Indices of the set bits, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    /// The bits as a digit string, e.g. `11011`.
    pub fn to_digits(&self) -> String {
        self.iter().map(|b| if b { '1' } else { '0' }).collect()
    }
}

impl FromIterator<bool> for ParityVector {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        let mut v = ParityVector::new();
        for b in iter {
            v.push(b);
        }
        v
    }
}

impl Ord for ParityVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for ParityVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Renders as `(1, 1, 0, 1)`.
impl fmt::Display for ParityVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, b) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str(if b { "1" } else { "0" })?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for ParityVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ParityVector({})", self.to_digits())
    }
}

/// Accepts `1,1,0,1`, `(1, 1, 0, 1)` or `1101`.
impl FromStr for ParityVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut v = ParityVector::new();
        for c in s.chars() {
            match c {
                '0' => v.push(false),
                '1' => v.push(true),
                ',' | ' ' | '(' | ')' => {}
                _ => {
                    return Err(Error::MalformedVector {
                        vector: s.to_string(),
                        reason: "only 0, 1, commas, spaces and parentheses are allowed",
                    })
                }
            }
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_and_render() {
        let v: ParityVector = "1,1,0,1,1".parse().unwrap();
        assert_eq!(v.to_string(), "(1, 1, 0, 1, 1)");
        assert_eq!(v, "(1, 1, 0, 1, 1)".parse().unwrap());
        assert_eq!(v, "11011".parse().unwrap());
        assert!("1,2".parse::<ParityVector>().is_err());
    }

    #[test]
    fn run_lengths() {
        let v = ParityVector::from_bits(&[1, 1, 1, 0, 1, 0, 0]);
        assert_eq!(v.leading_ones(), 3);
        assert_eq!(v.trailing_zeros(), 2);
        assert_eq!(v.count_ones(), 4);
        assert_eq!(v.ones().collect::<Vec<_>>(), vec![0, 1, 2, 4]);
        assert_eq!(ParityVector::from_bits(&[1, 1]).trailing_zeros(), 0);
    }

    #[test]
    fn crosses_word_boundary() {
        let mut v = ParityVector::with_len(130);
        v.set(64, true);
        v.set(129, true);
        assert!(v.get(64) && v.get(129) && !v.get(63));
        assert_eq!(v.count_ones(), 2);
        v.set(129, false);
        assert_eq!(v.trailing_zeros(), 65);
    }

    proptest! {
        #[test]
        fn order_and_equality_are_elementwise(a in proptest::collection::vec(0u8..2, 0..150),
                                              b in proptest::collection::vec(0u8..2, 0..150)) {
            let (va, vb) = (ParityVector::from_bits(&a), ParityVector::from_bits(&b));
            prop_assert_eq!(va.cmp(&vb), a.cmp(&b));
            prop_assert_eq!(va == vb, a == b);
            prop_assert_eq!(va.to_digits().parse::<ParityVector>().unwrap(), va);
        }
    }
}
