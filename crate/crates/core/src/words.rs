//! Freely reduced words over a fixed free-group alphabet.
//!
//! A [`Word`] is a sequence of signed generator letters with no adjacent
//! cancelling pair. Words double as group elements and as vertices of the
//! Cayley tree: the empty word is both the identity and the basepoint.
//! Generators print as lowercase letters `a`..`z`, inverses as the matching
//! uppercase letter (the input syntax `a⁻¹` is also accepted).

use crate::error::Error;
use std::fmt;

/// Signed generator: `index` in `0..rank`, `inverse` flags the formal inverse.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Letter {
    pub index: u8,
    pub inverse: bool,
}

impl Letter {
    pub fn gen(index: u8) -> Self {
        Letter { index, inverse: false }
    }

    pub fn inv(self) -> Self {
        Letter { index: self.index, inverse: !self.inverse }
    }

    fn cancels(self, other: Letter) -> bool {
        self.index == other.index && self.inverse != other.inverse
    }

    /// Shortlex rank of a letter: `a < A < b < B < ...`.
    fn order_key(self) -> u16 {
        (self.index as u16) * 2 + self.inverse as u16
    }

    pub fn to_char(self) -> char {
        let base = if self.inverse { b'A' } else { b'a' };
        (base + self.index) as char
    }
}

/// The declared alphabet: generators `a`, `b`, ... up to `rank`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Alphabet {
    pub rank: u8,
}

impl Alphabet {
    pub fn new(rank: u8) -> Result<Self, Error> {
        if rank == 0 || rank > 26 {
            return Err(Error::Precondition(format!("alphabet rank {rank} out of range 1..=26")));
        }
        Ok(Alphabet { rank })
    }

    pub fn letter_from_char(&self, c: char) -> Result<Letter, Error> {
        let l = match c {
            'a'..='z' => Letter { index: c as u8 - b'a', inverse: false },
            'A'..='Z' => Letter { index: c as u8 - b'A', inverse: true },
            _ => return Err(Error::UnknownGenerator(c)),
        };
        if l.index >= self.rank {
            return Err(Error::UnknownGenerator(c));
        }
        Ok(l)
    }

    /// All signed letters in shortlex order.
    pub fn letters(&self) -> Vec<Letter> {
        let mut out = Vec::with_capacity(self.rank as usize * 2);
        for i in 0..self.rank {
            out.push(Letter::gen(i));
            out.push(Letter::gen(i).inv());
        }
        out
    }
}

/// A freely reduced word. The constructor reduces, so the invariant holds
/// for every value of this type.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity() -> Self {
        Word { letters: Vec::new() }
    }

    /// Free reduction of an arbitrary letter sequence.
    pub fn reduce(raw: impl IntoIterator<Item = Letter>) -> Self {
        let mut stack: Vec<Letter> = Vec::new();
        for l in raw {
            match stack.last() {
                Some(&top) if top.cancels(l) => {
                    stack.pop();
                }
                _ => stack.push(l),
            }
        }
        Word { letters: stack }
    }

    pub fn from_letter(l: Letter) -> Self {
        Word { letters: vec![l] }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn mul(&self, other: &Word) -> Word {
        Word::reduce(self.letters.iter().copied().chain(other.letters.iter().copied()))
    }

    pub fn inverse(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(|l| l.inv()).collect() }
    }

    /// Prefix of the first `n` letters (a vertex on the geodesic from the
    /// basepoint to this word).
    pub fn prefix(&self, n: usize) -> Word {
        Word { letters: self.letters[..n].to_vec() }
    }

    /// Letters all positive (no inverses): member of the positive monoid.
    pub fn is_positive(&self) -> bool {
        self.letters.iter().all(|l| !l.inverse)
    }

    /// Cyclically reduced core; its length is the translation length of the
    /// conjugacy class on the Cayley tree.
    pub fn cyclic_reduction(&self) -> Word {
        let mut w = self.letters.clone();
        while w.len() >= 2 && w.first().unwrap().cancels(*w.last().unwrap()) {
            w.pop();
            w.remove(0);
        }
        Word { letters: w }
    }

    /// Shortlex comparison key, usable where a total order on words is needed.
    fn shortlex_key(&self) -> (usize, Vec<u16>) {
        (self.letters.len(), self.letters.iter().map(|l| l.order_key()).collect())
    }

    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Word, Error> {
        if text == "1" {
            return Ok(Word::identity());
        }
        let mut letters = Vec::new();
        let mut chars = text.chars().peekable();
        while let Some(c) = chars.next() {
            let mut l = alphabet.letter_from_char(c)?;
            // accept the `a⁻¹` spelling for inverses
            if chars.peek() == Some(&'⁻') {
                chars.next();
                if chars.next() != Some('¹') {
                    return Err(Error::Parse { pos: 0, msg: "expected ⁻¹".into() });
                }
                l = l.inv();
            }
            letters.push(l);
        }
        Ok(Word::reduce(letters))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.shortlex_key().cmp(&other.shortlex_key())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for l in &self.letters {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

/// Enumerate all reduced words of length at most `radius` in shortlex order.
pub fn ball(alphabet: &Alphabet, radius: usize) -> Vec<Word> {
    let mut out = vec![Word::identity()];
    let mut frontier = vec![Word::identity()];
    for _ in 0..radius {
        let mut next = Vec::new();
        for w in &frontier {
            for l in alphabet.letters() {
                if w.letters.last().map(|t| t.cancels(l)) != Some(true) {
                    let mut v = w.letters.clone();
                    v.push(l);
                    next.push(Word { letters: v });
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s, &Alphabet::new(2).unwrap()).unwrap()
    }

    #[test]
    fn reduction_cancels() {
        assert_eq!(w("aA"), Word::identity());
        assert_eq!(w("abBa"), w("aa"));
        assert_eq!(w("bAab"), w("bb"));
    }

    #[test]
    fn parse_superscript_inverse() {
        let a = Alphabet::new(2).unwrap();
        assert_eq!(Word::parse("a⁻¹", &a).unwrap(), w("A"));
        assert_eq!(Word::parse("ba⁻¹ab", &a).unwrap(), w("bb"));
    }

    #[test]
    fn multiplication_examples() {
        let a3 = Alphabet::new(3).unwrap();
        let u = Word::parse("ab", &a3).unwrap();
        let v = Word::parse("b⁻¹c", &a3).unwrap();
        assert_eq!(u.mul(&v), Word::parse("ac", &a3).unwrap());
        assert_eq!(Word::identity().mul(&w("ba")), w("ba"));
        assert_eq!(w("a").mul(&w("a")), w("aa"));
    }

    #[test]
    fn inverse_law() {
        for s in ["a", "ab", "aBab", "Abba"] {
            let u = w(s);
            assert_eq!(u.mul(&u.inverse()), Word::identity());
            assert_eq!(u.inverse().mul(&u), Word::identity());
        }
    }

    #[test]
    fn shortlex_order() {
        let mut v = vec![w("b"), w("aa"), w("A"), Word::identity(), w("a")];
        v.sort();
        assert_eq!(v, vec![Word::identity(), w("a"), w("A"), w("b"), w("aa")]);
    }

    #[test]
    fn ball_sizes_rank_two() {
        let a = Alphabet::new(2).unwrap();
        assert_eq!(ball(&a, 0).len(), 1);
        assert_eq!(ball(&a, 1).len(), 5);
        assert_eq!(ball(&a, 2).len(), 17);
    }

    #[test]
    fn cyclic_reduction_conjugate() {
        assert_eq!(w("Aba").cyclic_reduction(), w("b"));
        assert_eq!(w("ab").cyclic_reduction(), w("ab"));
    }

    #[test]
    fn unknown_generator_rejected() {
        let a = Alphabet::new(2).unwrap();
        assert!(matches!(Word::parse("ac", &a), Err(Error::UnknownGenerator('c'))));
    }
}
