//! Cyclic words in a free group of finite rank.
//!
//! Generators are written `a`, `b`, `c`, ... and their inverses `A`, `B`,
//! `C`, ... A [`CyclicWord`] is always freely and cyclically reduced and is
//! stored as its least rotation under the letter order `a < A < b < B < ...`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest rank expressible with the one-letter alphabet.
pub const MAX_RANK: usize = 26;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub const fn new(generator: usize, inverse: bool) -> Self {
        Self { generator, inverse }
    }

    pub const fn gen(generator: usize) -> Self {
        Self::new(generator, false)
    }

    pub const fn inv(generator: usize) -> Self {
        Self::new(generator, true)
    }

    pub fn inverted(self) -> Self {
        Self::new(self.generator, !self.inverse)
    }

    /// Position in the order a < A < b < B < ...
    pub fn key(self) -> usize {
        2 * self.generator + usize::from(self.inverse)
    }

    pub fn to_char(self) -> char {
        let base = if self.inverse { b'A' } else { b'a' };
        char::from(base + self.generator as u8)
    }

    fn from_char(ch: char, pos: usize, rank: usize) -> Result<Self> {
        let bad = Error::InvalidCharacter { ch, pos, rank };
        if !ch.is_ascii_alphabetic() {
            return Err(bad);
        }
        let inverse = ch.is_ascii_uppercase();
        let generator = (ch.to_ascii_lowercase() as u8 - b'a') as usize;
        if generator >= rank {
            return Err(bad);
        }
        Ok(Self::new(generator, inverse))
    }
}

/// Free reduction of a letter sequence.
pub fn freely_reduce(letters: &[Letter]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::with_capacity(letters.len());
    for &x in letters {
        if out.last().is_some_and(|&y| y == x.inverted()) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

/// Strips inverse pairs from the two ends of a freely reduced sequence.
fn cyclically_reduce(mut letters: Vec<Letter>) -> Vec<Letter> {
    let mut lo = 0;
    let mut hi = letters.len();
    while hi - lo >= 2 && letters[lo] == letters[hi - 1].inverted() {
        lo += 1;
        hi -= 1;
    }
    letters.truncate(hi);
    letters.drain(..lo);
    letters
}

/// Index of the lexicographically least rotation (Booth's algorithm).
fn least_rotation<T: Ord>(s: &[T]) -> usize {
    let n = s.len();
    if n == 0 {
        return 0;
    }
    let at = |i: usize| &s[i % n];
    let mut failure = vec![usize::MAX; 2 * n];
    let mut k = 0usize;
    for j in 1..2 * n {
        let mut i = failure[j - k - 1];
        while i != usize::MAX && at(j) != at(k + i + 1) {
            if at(j) < at(k + i + 1) {
                k = j - i - 1;
            }
            i = failure[i];
        }
        if i == usize::MAX && at(j) != at(k) {
            if at(j) < at(k) {
                k = j;
            }
            failure[j - k] = usize::MAX;
        } else {
            failure[j - k] = i.wrapping_add(1);
        }
    }
    k
}

/// A nontrivial conjugacy class in the free group, i.e. a closed curve.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CyclicWord {
    rank: usize,
    letters: Vec<Letter>,
}

impl CyclicWord {
    /// Reduces and canonicalizes an arbitrary letter sequence.
    pub fn from_letters(rank: usize, letters: &[Letter]) -> Result<Self> {
        if rank == 0 || rank > MAX_RANK {
            return Err(Error::InvalidRank(rank));
        }
        if let Some(bad) = letters.iter().find(|l| l.generator >= rank) {
            return Err(Error::InvalidCharacter { ch: bad.to_char(), pos: 0, rank });
        }
        let reduced = cyclically_reduce(freely_reduce(letters));
        if reduced.is_empty() {
            return Err(Error::TrivialWord);
        }
        let keys: Vec<usize> = reduced.iter().map(|l| l.key()).collect();
        let start = least_rotation(&keys);
        let mut letters = reduced;
        letters.rotate_left(start);
        Ok(Self { rank, letters })
    }

    pub fn parse(text: &str, rank: usize) -> Result<Self> {
        if rank == 0 || rank > MAX_RANK {
            return Err(Error::InvalidRank(rank));
        }
        let text = text.trim();
        if text.is_empty() {
            return Err(Error::EmptyWord);
        }
        let letters = text
            .chars()
            .enumerate()
            .map(|(pos, ch)| Letter::from_char(ch, pos, rank))
            .collect::<Result<Vec<_>>>()?;
        Self::from_letters(rank, &letters)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn invert(&self) -> Self {
        let inv: Vec<Letter> = self.letters.iter().rev().map(|l| l.inverted()).collect();
        Self::from_letters(self.rank, &inv).expect("inverse of a nontrivial word is nontrivial")
    }

    /// Writes the word as `root^exponent` with `root` not a proper power.
    pub fn power_root(&self) -> (CyclicWord, usize) {
        let n = self.letters.len();
        for period in (1..=n).filter(|p| n.is_multiple_of(*p)) {
            if (period..n).all(|i| self.letters[i] == self.letters[i - period]) {
                let root = Self::from_letters(self.rank, &self.letters[..period])
                    .expect("root of a nontrivial word is nontrivial");
                return (root, n / period);
            }
        }
        unreachable!("period n always matches")
    }

    pub fn is_primitive_power(&self) -> bool {
        self.power_root().1 == 1
    }

    /// Fails with `NonPrimitive` when the word is a proper power.
    pub fn require_root(&self) -> Result<()> {
        match self.power_root().1 {
            1 => Ok(()),
            exponent => Err(Error::NonPrimitive { exponent }),
        }
    }

    /// Exponent sum of each generator.
    pub fn exponent_sums(&self) -> Vec<i64> {
        let mut sums = vec![0i64; self.rank];
        for l in &self.letters {
            sums[l.generator] += if l.inverse { -1 } else { 1 };
        }
        sums
    }

    /// Applies a substitution of generators by words and re-canonicalizes.
    pub fn substitute(&self, images: &[Vec<Letter>], rank: usize) -> Result<Self> {
        if images.len() != self.rank {
            return Err(Error::RankMismatch { expected: self.rank, found: images.len() });
        }
        let mut out = Vec::new();
        for l in &self.letters {
            let img = &images[l.generator];
            if l.inverse {
                out.extend(img.iter().rev().map(|x| x.inverted()));
            } else {
                out.extend_from_slice(img);
            }
        }
        Self::from_letters(rank, &out)
    }
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

impl Serialize for CyclicWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// The curve a·bⁿ on the rank-2 free group.
pub fn gamma_n(n: usize) -> CyclicWord {
    let mut letters = Vec::with_capacity(n + 1);
    letters.push(Letter::gen(0));
    letters.extend(std::iter::repeat_n(Letter::gen(1), n));
    CyclicWord::from_letters(2, &letters).expect("a·b^n is cyclically reduced")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> CyclicWord {
        CyclicWord::parse(s, 2).unwrap()
    }

    #[test]
    fn parse_examples() {
        assert_eq!(w("ab").to_string(), "ab");
        assert_eq!(w("Bab").to_string(), "a");
        assert_eq!(CyclicWord::parse("aA", 2), Err(Error::TrivialWord));
        assert!(matches!(
            CyclicWord::parse("abc", 2),
            Err(Error::InvalidCharacter { ch: 'c', pos: 2, .. })
        ));
        assert!(matches!(CyclicWord::parse("a1", 2), Err(Error::InvalidCharacter { .. })));
        assert_eq!(CyclicWord::parse("  ", 2), Err(Error::EmptyWord));
    }

    #[test]
    fn canonical_rotation_uses_letter_order() {
        // a < A < b < B
        assert_eq!(w("ba").to_string(), "ab");
        assert_eq!(w("BA").to_string(), "AB");
        assert_eq!(w("bAbA").to_string(), "AbAb");
        assert_eq!(w("bbabb").to_string(), "abbbb");
    }

    #[test]
    fn power_root_examples() {
        assert_eq!(w("abab").power_root(), (w("ab"), 2));
        assert_eq!(w("a").power_root(), (w("a"), 1));
        assert_eq!(w("aabaab").power_root(), (w("aab"), 2));
        assert_eq!(w("aabab").power_root().1, 1);
    }

    #[test]
    fn invert_examples() {
        assert_eq!(w("ab").invert(), w("BA"));
        assert_eq!(w("a").invert().to_string(), "A");
        let x = w("abbAb");
        assert_eq!(x.invert().invert(), x);
    }

    #[test]
    fn gamma_n_examples() {
        assert_eq!(gamma_n(0).to_string(), "a");
        assert_eq!(gamma_n(1).to_string(), "ab");
        assert_eq!(gamma_n(4).to_string(), "abbbb");
    }

    #[test]
    fn rank_is_enforced() {
        assert_eq!(CyclicWord::parse("a", 0), Err(Error::InvalidRank(0)));
        assert!(CyclicWord::parse("abcC", 3).is_ok());
    }

    #[test]
    fn least_rotation_matches_brute_force() {
        let cases: [&[u8]; 5] = [b"baab", b"aaaa", b"cabab", b"bbbba", b"abcabd"];
        for s in cases {
            let brute = (0..s.len())
                .min_by_key(|&k| {
                    let mut r = s.to_vec();
                    r.rotate_left(k);
                    r
                })
                .unwrap();
            let mut a = s.to_vec();
            a.rotate_left(brute);
            let mut b = s.to_vec();
            b.rotate_left(least_rotation(s));
            assert_eq!(a, b);
        }
    }
}
