//! Exact arithmetic in the group algebra of a free group.
//!
//! A [`RingElement`] is a finite association from reduced words to nonzero
//! scalars in a fixed coefficient domain. Vectors of elements
//! ([`RingVector`]) carry the componentwise structure used for submodules of
//! free modules; a ring element is the width-one case.
//!
//! The text grammar, used verbatim by the CLI and the test fixtures:
//!
//! ```text
//! element := ['-'] term (('+'|'-') term)*
//! term    := [scalar '*'] word | scalar
//! scalar  := integer | integer '/' integer
//! word    := '1' | letter+          (uppercase = inverse)
//! vector  := '(' element (';' element)* ')'
//! ```
//!
//! Examples: `1+a`, `2/3*ab - A`, `1+a+b+ba`, `(2; a-1)`.

use crate::error::{Error, Result};
use crate::scalar::{Domain, Scalar};
use crate::words::{Alphabet, Word};
use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct RingElement {
    domain: Domain,
    terms: BTreeMap<Word, Scalar>,
}

impl RingElement {
    pub fn zero(domain: Domain) -> Self {
        RingElement { domain, terms: BTreeMap::new() }
    }

    pub fn term(domain: Domain, coeff: Scalar, word: Word) -> Self {
        let mut e = RingElement::zero(domain);
        if !coeff.is_zero() {
            e.terms.insert(word, coeff);
        }
        e
    }

    pub fn one(domain: Domain) -> Self {
        RingElement::term(domain, domain.one(), Word::identity())
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Word> {
        self.terms.keys()
    }

    pub fn support_size(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, w: &Word) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_else(|| self.domain.zero())
    }

    /// Longest support word; a cheap upper bound for search-radius bookkeeping.
    pub fn max_word_len(&self) -> usize {
        self.terms.keys().map(|w| w.len()).max().unwrap_or(0)
    }

    fn check_domain(&self, other: &RingElement) -> Result<()> {
        if self.domain != other.domain {
            return Err(Error::DomainMismatch(format!("{:?} vs {:?}", self.domain, other.domain)));
        }
        Ok(())
    }

    pub fn add(&self, other: &RingElement) -> Result<RingElement> {
        self.check_domain(other)?;
        let mut terms = self.terms.clone();
        for (w, c) in &other.terms {
            let merged = match terms.get(w) {
                Some(prev) => self.domain.add(prev, c),
                None => c.clone(),
            };
            if merged.is_zero() {
                terms.remove(w);
            } else {
                terms.insert(w.clone(), merged);
            }
        }
        Ok(RingElement { domain: self.domain, terms })
    }

    pub fn neg(&self) -> RingElement {
        let terms = self.terms.iter().map(|(w, c)| (w.clone(), self.domain.neg(c))).collect();
        RingElement { domain: self.domain, terms }
    }

    pub fn sub(&self, other: &RingElement) -> Result<RingElement> {
        self.add(&other.neg())
    }

    /// Convolution product: `(xy)(g) = sum over uv=g of x(u) y(v)`.
    pub fn mul(&self, other: &RingElement) -> Result<RingElement> {
        self.check_domain(other)?;
        let mut terms: BTreeMap<Word, Scalar> = BTreeMap::new();
        for (u, c) in &self.terms {
            for (v, d) in &other.terms {
                let w = u.mul(v);
                let cd = self.domain.mul(c, d);
                let merged = match terms.get(&w) {
                    Some(prev) => self.domain.add(prev, &cd),
                    None => cd,
                };
                if merged.is_zero() {
                    terms.remove(&w);
                } else {
                    terms.insert(w, merged);
                }
            }
        }
        Ok(RingElement { domain: self.domain, terms })
    }

    pub fn scale(&self, c: &Scalar) -> RingElement {
        if c.is_zero() {
            return RingElement::zero(self.domain);
        }
        let terms = self.terms.iter().map(|(w, x)| (w.clone(), self.domain.mul(c, x))).collect();
        RingElement { domain: self.domain, terms }
    }

    /// Left translation by a group element.
    pub fn translate(&self, g: &Word) -> RingElement {
        let terms = self.terms.iter().map(|(w, c)| (g.mul(w), c.clone())).collect();
        RingElement { domain: self.domain, terms }
    }

    /// `ξ = λg` for a nonzero scalar and group element, or `None`.
    /// Relies on the trivial-units theorem for the converse direction: under
    /// the displacement hypothesis, elements with larger support are never
    /// invertible. Integer coefficients are rejected; `±g` units are handled
    /// by bass descent directly.
    pub fn is_unit(&self) -> Result<Option<(Scalar, Word)>> {
        if !self.domain.is_field() {
            return Err(Error::DomainMismatch("unit detection needs field coefficients".into()));
        }
        if self.terms.len() != 1 {
            return Ok(None);
        }
        let (w, c) = self.terms.iter().next().unwrap();
        Ok(Some((c.clone(), w.clone())))
    }

    /// Sum of coefficients (the augmentation map to the coefficient domain).
    pub fn augmentation(&self) -> Scalar {
        let mut acc = self.domain.zero();
        for c in self.terms.values() {
            acc = self.domain.add(&acc, c);
        }
        acc
    }

    pub fn color_key(&self) -> Result<ColorKey> {
        ColorKey::of_vector(&RingVector::from_element(self.clone()))
    }

    /// Coefficientwise reduction of an integer element modulo `p`.
    pub fn mod_p(&self, p: u32) -> Result<RingElement> {
        if self.domain != Domain::Integer {
            return Err(Error::DomainMismatch("mod-p reduction applies to integer coefficients".into()));
        }
        let fp = Domain::fp(p)?;
        let p_big = BigInt::from(p);
        let mut out = RingElement::zero(fp);
        for (w, c) in &self.terms {
            let r = ((c.z() % &p_big) + &p_big) % &p_big;
            let r: u64 = r.try_into().unwrap();
            if r != 0 {
                out.terms.insert(w.clone(), Scalar::Fp(r));
            }
        }
        Ok(out)
    }

    /// View an integer element inside the rationals.
    pub fn to_rational(&self) -> Result<RingElement> {
        if self.domain != Domain::Integer {
            return Err(Error::DomainMismatch("rationalization applies to integer coefficients".into()));
        }
        let terms = self
            .terms
            .iter()
            .map(|(w, c)| (w.clone(), Scalar::Q(BigRational::from(c.z().clone()))))
            .collect();
        Ok(RingElement { domain: Domain::Rational, terms })
    }

    /// Exact integer part of a rational element, if all coefficients are integral.
    pub fn to_integer(&self) -> Option<RingElement> {
        if self.domain == Domain::Integer {
            return Some(self.clone());
        }
        let mut out = RingElement::zero(Domain::Integer);
        for (w, c) in &self.terms {
            let q = c.q();
            if !q.denom().is_one() {
                return None;
            }
            out.terms.insert(w.clone(), Scalar::Z(q.numer().clone()));
        }
        Some(out)
    }

    /// Least common multiple of coefficient denominators (rational domain).
    pub fn denominator_lcm(&self) -> BigInt {
        let mut l = BigInt::one();
        for c in self.terms.values() {
            if let Scalar::Q(q) = c {
                l = l.lcm(q.denom());
            }
        }
        l
    }

    /// Divide every coefficient by an integer, if exactly divisible.
    pub fn div_exact(&self, d: &BigInt) -> Option<RingElement> {
        let mut out = RingElement::zero(self.domain);
        for (w, c) in &self.terms {
            match c {
                Scalar::Z(z) => {
                    let (q, r) = z.div_rem(d);
                    if !r.is_zero() {
                        return None;
                    }
                    out.terms.insert(w.clone(), Scalar::Z(q));
                }
                Scalar::Q(q) => {
                    out.terms.insert(w.clone(), Scalar::Q(q / BigRational::from(d.clone())));
                }
                Scalar::Fp(_) => return None,
            }
        }
        Some(out)
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let (sign, mag) = if c.is_negative() {
                ("-", self.domain.neg(c))
            } else {
                ("+", c.clone())
            };
            if i == 0 {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else if sign == "-" {
                write!(f, "-")?;
            } else {
                write!(f, "+")?;
            }
            if w.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{w}")?;
            } else {
                write!(f, "{mag}*{w}")?;
            }
        }
        Ok(())
    }
}

/// Canonical form of an element up to left multiplication by trivial units:
/// `element = scale · translator · representative`. The representative is
/// the least (by term-list order) among the normalized translates `h⁻¹·ξ`
/// over support words `h` — translating by a fixed support word alone is not
/// unit-invariant, but this candidate set is, so equal representatives
/// characterize trivial-unit multiples exactly.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ColorKey {
    pub representative: RingVector,
    pub translator: Word,
    pub scale: Scalar,
}

impl ColorKey {
    pub fn of_vector(v: &RingVector) -> Result<ColorKey> {
        if !v.domain().is_field() {
            return Err(Error::DomainMismatch("color keys need field coefficients".into()));
        }
        let support = v.union_support();
        if support.is_empty() {
            return Err(Error::Empty("color key of the zero element".into()));
        }
        let mut best: Option<(RingVector, Word, Scalar)> = None;
        for h in support {
            let shifted = v.translate(&h.inverse());
            let scale = shifted
                .coords()
                .iter()
                .flat_map(|e| e.terms.values())
                .next()
                .cloned()
                .expect("nonzero element has a first coefficient");
            let candidate = shifted.scale(&v.domain().inv(&scale)?);
            if best.as_ref().map_or(true, |(b, _, _)| candidate < *b) {
                best = Some((candidate, h, scale));
            }
        }
        let (representative, translator, scale) = best.unwrap();
        Ok(ColorKey { representative, translator, scale })
    }

    /// The trivial unit `λg` carrying `other` onto `self`'s element, when the
    /// colors agree: `self_elem = λ g · other_elem`.
    pub fn unit_from(&self, other: &ColorKey, domain: &Domain) -> Result<Option<(Scalar, Word)>> {
        if self.representative != other.representative {
            return Ok(None);
        }
        let lambda = domain.div(&self.scale, &other.scale)?;
        let g = self.translator.mul(&other.translator.inverse());
        Ok(Some((lambda, g)))
    }
}

/// A vector of ring elements in a common domain: an element of the free
/// module of the given width. Width one recovers the ring itself.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct RingVector {
    coords: Vec<RingElement>,
}

impl RingVector {
    pub fn new(coords: Vec<RingElement>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Empty("vector of width zero".into()));
        }
        for c in &coords[1..] {
            coords[0].check_domain(c)?;
        }
        Ok(RingVector { coords })
    }

    pub fn zero(domain: Domain, width: usize) -> Self {
        RingVector { coords: vec![RingElement::zero(domain); width] }
    }

    pub fn from_element(e: RingElement) -> Self {
        RingVector { coords: vec![e] }
    }

    pub fn as_element(&self) -> &RingElement {
        debug_assert_eq!(self.coords.len(), 1);
        &self.coords[0]
    }

    pub fn domain(&self) -> Domain {
        self.coords[0].domain
    }

    pub fn width(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[RingElement] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &RingElement {
        &self.coords[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &RingVector) -> Result<RingVector> {
        if self.width() != other.width() {
            return Err(Error::DomainMismatch("vector widths differ".into()));
        }
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a.add(b))
            .collect::<Result<_>>()?;
        Ok(RingVector { coords })
    }

    pub fn neg(&self) -> RingVector {
        RingVector { coords: self.coords.iter().map(|c| c.neg()).collect() }
    }

    pub fn sub(&self, other: &RingVector) -> Result<RingVector> {
        self.add(&other.neg())
    }

    /// Left multiplication by a ring coefficient, componentwise.
    pub fn left_mul(&self, beta: &RingElement) -> Result<RingVector> {
        let coords = self.coords.iter().map(|c| beta.mul(c)).collect::<Result<_>>()?;
        Ok(RingVector { coords })
    }

    pub fn scale(&self, c: &Scalar) -> RingVector {
        RingVector { coords: self.coords.iter().map(|x| x.scale(c)).collect() }
    }

    pub fn translate(&self, g: &Word) -> RingVector {
        RingVector { coords: self.coords.iter().map(|x| x.translate(g)).collect() }
    }

    /// Union of the coordinate supports: the geometric support of the vector.
    pub fn union_support(&self) -> Vec<Word> {
        let mut all: Vec<Word> = self.coords.iter().flat_map(|c| c.support().cloned()).collect();
        all.sort();
        all.dedup();
        all
    }

    pub fn max_word_len(&self) -> usize {
        self.coords.iter().map(|c| c.max_word_len()).max().unwrap_or(0)
    }

    pub fn color_key(&self) -> Result<ColorKey> {
        ColorKey::of_vector(self)
    }

    pub fn mod_p(&self, p: u32) -> Result<RingVector> {
        let coords = self.coords.iter().map(|c| c.mod_p(p)).collect::<Result<_>>()?;
        Ok(RingVector { coords })
    }

    pub fn to_rational(&self) -> Result<RingVector> {
        let coords = self.coords.iter().map(|c| c.to_rational()).collect::<Result<_>>()?;
        Ok(RingVector { coords })
    }

    pub fn to_integer(&self) -> Option<RingVector> {
        let coords = self.coords.iter().map(|c| c.to_integer()).collect::<Option<_>>()?;
        Some(RingVector { coords })
    }

    pub fn denominator_lcm(&self) -> BigInt {
        let mut l = BigInt::one();
        for c in &self.coords {
            l = l.lcm(&c.denominator_lcm());
        }
        l
    }

    pub fn div_exact(&self, d: &BigInt) -> Option<RingVector> {
        let coords = self.coords.iter().map(|c| c.div_exact(d)).collect::<Option<_>>()?;
        Some(RingVector { coords })
    }
}

impl fmt::Display for RingVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.len() == 1 {
            return write!(f, "{}", self.coords[0]);
        }
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

// ---------------------------------------------------------------------------
// Grammar
// ---------------------------------------------------------------------------

struct Parser<'a> {
    input: &'a [u8],
    pos: usize,
    alphabet: Alphabet,
    domain: Domain,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.input.len() && self.input[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.input.get(self.pos).copied()
    }

    fn integer(&mut self) -> Result<String> {
        let start = self.pos;
        if self.peek() == Some(b'-') {
            self.pos += 1;
        }
        while self.peek().map_or(false, |c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start || (self.pos == start + 1 && self.input[start] == b'-') {
            return Err(self.err("expected integer"));
        }
        Ok(std::str::from_utf8(&self.input[start..self.pos]).unwrap().to_string())
    }

    fn scalar(&mut self) -> Result<Scalar> {
        let mut text = self.integer()?;
        if self.peek() == Some(b'/') {
            self.pos += 1;
            text.push('/');
            text.push_str(&self.integer()?);
        }
        self.domain.parse_scalar(&text)
    }

    fn word(&mut self) -> Result<Word> {
        let start = self.pos;
        if self.peek() == Some(b'1') {
            self.pos += 1;
            return Ok(Word::identity());
        }
        let mut letters = Vec::new();
        while let Some(c) = self.peek() {
            if !c.is_ascii_alphabetic() {
                break;
            }
            let mut l = self.alphabet.letter_from_char(c as char)?;
            self.pos += 1;
            // optional UTF-8 `⁻¹` suffix
            let rest = &self.input[self.pos..];
            if rest.starts_with("⁻¹".as_bytes()) {
                self.pos += "⁻¹".len();
                l = l.inv();
            }
            letters.push(l);
        }
        if self.pos == start {
            return Err(self.err("expected word"));
        }
        Ok(Word::reduce(letters))
    }

    /// `[scalar '*'] word | scalar`
    fn parse_term(&mut self) -> Result<(Scalar, Word)> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let save = self.pos;
                // "1" alone is the identity word unless followed by '*' or '/'
                let s = self.scalar()?;
                self.skip_ws();
                if self.peek() == Some(b'*') {
                    self.pos += 1;
                    self.skip_ws();
                    let w = self.word()?;
                    Ok((s, w))
                } else if self.peek().map_or(false, |c| c.is_ascii_alphabetic()) {
                    Err(Error::Parse { pos: self.pos, msg: "expected '*' between scalar and word".into() })
                } else {
                    let _ = save;
                    Ok((s, Word::identity()))
                }
            }
            Some(c) if c.is_ascii_alphabetic() => Ok((self.domain.one(), self.word()?)),
            _ => Err(self.err("expected term")),
        }
    }

    fn parse_element(&mut self) -> Result<RingElement> {
        self.skip_ws();
        let mut acc = RingElement::zero(self.domain);
        let mut negate = false;
        if self.peek() == Some(b'-') {
            negate = true;
            self.pos += 1;
        }
        loop {
            let (mut c, w) = self.parse_term()?;
            if negate {
                c = self.domain.neg(&c);
            }
            acc = acc.add(&RingElement::term(self.domain, c, w))?;
            self.skip_ws();
            match self.peek() {
                Some(b'+') => {
                    negate = false;
                    self.pos += 1;
                }
                Some(b'-') => {
                    negate = true;
                    self.pos += 1;
                }
                _ => break,
            }
        }
        Ok(acc)
    }
}

/// Parse a single element; trailing garbage is an error.
pub fn parse_element(text: &str, alphabet: &Alphabet, domain: Domain) -> Result<RingElement> {
    let mut p = Parser { input: text.as_bytes(), pos: 0, alphabet: *alphabet, domain };
    let e = p.parse_element()?;
    p.skip_ws();
    if p.pos != text.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

/// Parse `(elem; elem; ...)`; a bare element is a width-one vector.
pub fn parse_vector(text: &str, alphabet: &Alphabet, domain: Domain) -> Result<RingVector> {
    let trimmed = text.trim();
    if !trimmed.starts_with('(') {
        return Ok(RingVector::from_element(parse_element(trimmed, alphabet, domain)?));
    }
    let inner = trimmed
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or(Error::Parse { pos: trimmed.len(), msg: "expected closing ')'".into() })?;
    let coords = inner
        .split(';')
        .map(|part| parse_element(part, alphabet, domain))
        .collect::<Result<Vec<_>>>()?;
    RingVector::new(coords)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::new(2).unwrap()
    }

    fn q(text: &str) -> RingElement {
        parse_element(text, &ab(), Domain::Rational).unwrap()
    }

    #[test]
    fn parse_examples() {
        assert_eq!(q("1+a+b+ba").support_size(), 4);
        let e = q("2/3*ab - A");
        assert_eq!(e.coeff(&Word::parse("ab", &ab()).unwrap()).to_string(), "2/3");
        assert_eq!(e.coeff(&Word::parse("A", &ab()).unwrap()).to_string(), "-1");
    }

    #[test]
    fn parse_error_position() {
        let err = parse_element("1+", &ab(), Domain::Rational).unwrap_err();
        assert_eq!(err, Error::Parse { pos: 2, msg: "expected term".into() });
    }

    #[test]
    fn addition_cancels() {
        let zero = q("1+a").add(&q("-1-a")).unwrap();
        assert!(zero.is_zero());
        assert_eq!(q("1+a").add(&q("b")).unwrap().to_string(), "1+a+b");
    }

    #[test]
    fn characteristic_two() {
        let d = Domain::fp(2).unwrap();
        let e = parse_element("1+a", &ab(), d).unwrap();
        assert!(e.add(&e).unwrap().is_zero());
    }

    #[test]
    fn convolution_is_noncommutative() {
        assert_eq!(q("1+a").mul(&q("1+b")).unwrap(), q("1+a+b+ab"));
        assert_eq!(q("1+b").mul(&q("1+a")).unwrap(), q("1+a+b+ba"));
        assert!(q("1+a").mul(&RingElement::zero(Domain::Rational)).unwrap().is_zero());
    }

    #[test]
    fn filtration_degree_on_product() {
        let x = q("1+ab");
        let y = q("a+ba");
        let p = x.mul(&y).unwrap();
        assert!(p.max_word_len() <= x.max_word_len() + y.max_word_len());
    }

    #[test]
    fn unit_detection() {
        let u = q("3*ab");
        let (l, g) = u.is_unit().unwrap().unwrap();
        assert_eq!(l.to_string(), "3");
        assert_eq!(g.to_string(), "ab");
        assert!(q("1+a").is_unit().unwrap().is_none());
        assert!(RingElement::zero(Domain::Rational).is_unit().unwrap().is_none());
        let z = parse_element("2", &ab(), Domain::Integer).unwrap();
        assert!(z.is_unit().is_err());
    }

    #[test]
    fn color_keys() {
        // b+ba = b(1+a): representative 1+a, translator b, scale 1
        let k = q("b+ba").color_key().unwrap();
        assert_eq!(k.representative.as_element(), &q("1+a"));
        assert_eq!(k.translator.to_string(), "b");
        assert!(k.scale.is_one());

        let k5 = q("5+5*a").color_key().unwrap();
        assert_eq!(k5.representative.as_element(), &q("1+a"));
        assert_eq!(k5.scale.to_string(), "5");

        let ka = q("a").color_key().unwrap();
        assert_eq!(ka.representative.as_element(), &q("1"));

        // equal keys exactly for trivial-unit multiples
        let x = q("1+a+ab");
        let y = x.translate(&Word::parse("ba", &ab()).unwrap()).scale(&Domain::Rational.parse_scalar("-7/3").unwrap());
        assert_eq!(x.color_key().unwrap().representative, y.color_key().unwrap().representative);
        let (l, g) = y
            .color_key()
            .unwrap()
            .unit_from(&x.color_key().unwrap(), &Domain::Rational)
            .unwrap()
            .unwrap();
        assert_eq!(x.translate(&g).scale(&l), y);
    }

    #[test]
    fn canonical_rendering_round_trips() {
        for s in ["0", "1", "-1-a", "2/3*ab", "1+a+b+ba", "-3+2*aB", "2"] {
            let e = q(s);
            assert_eq!(q(&e.to_string()), e, "round trip of {s}");
        }
    }

    #[test]
    fn vector_grammar() {
        let v = parse_vector("(2; a-1)", &ab(), Domain::Integer).unwrap();
        assert_eq!(v.width(), 2);
        assert_eq!(v.coord(0).to_string(), "2");
        assert_eq!(v.coord(1).to_string(), "-1+a");
        let rt = parse_vector(&v.to_string(), &ab(), Domain::Integer).unwrap();
        assert_eq!(rt, v);
    }

    #[test]
    fn mod_p_reduction_examples() {
        let z = |s: &str| parse_element(s, &ab(), Domain::Integer).unwrap();
        assert!(z("2+2*a").mod_p(2).unwrap().is_zero());
        assert_eq!(z("3+a").mod_p(2).unwrap().to_string(), "1+a");
        let x = z("5+7*ab");
        let y = z("1+b");
        let lhs = x.scale(&Scalar::Z(BigInt::from(3))).add(&y).unwrap().mod_p(3).unwrap();
        assert_eq!(lhs, y.mod_p(3).unwrap());
    }
}
