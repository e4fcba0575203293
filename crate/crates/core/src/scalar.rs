//! Exact coefficient arithmetic: prime fields `F_p` (p < 2^31), arbitrary
//! precision rationals, and arbitrary precision integers.
//!
//! The domain is fixed per computation and never mixed; every operation takes
//! the [`Domain`] explicitly so values stay plain data.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Domain {
    /// Prime field with modulus `p`.
    Fp(u32),
    /// Field of rationals.
    Rational,
    /// Ring of integers (not a field; unit handling lives in bass descent).
    Integer,
}

impl Domain {
    pub fn fp(p: u32) -> Result<Domain> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        Ok(Domain::Fp(p))
    }

    pub fn is_field(&self) -> bool {
        !matches!(self, Domain::Integer)
    }

    pub fn zero(&self) -> Scalar {
        match self {
            Domain::Fp(_) => Scalar::Fp(0),
            Domain::Rational => Scalar::Q(BigRational::zero()),
            Domain::Integer => Scalar::Z(BigInt::zero()),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            Domain::Fp(_) => Scalar::Fp(1),
            Domain::Rational => Scalar::Q(BigRational::one()),
            Domain::Integer => Scalar::Z(BigInt::one()),
        }
    }

    pub fn from_integer(&self, n: i64) -> Scalar {
        match self {
            Domain::Fp(p) => {
                let p = *p as i64;
                Scalar::Fp(n.rem_euclid(p) as u64)
            }
            Domain::Rational => Scalar::Q(BigRational::from(BigInt::from(n))),
            Domain::Integer => Scalar::Z(BigInt::from(n)),
        }
    }

    /// Parse `int` or `int/int` in this domain.
    pub fn parse_scalar(&self, text: &str) -> Result<Scalar> {
        let bad = |m: &str| Error::Parse { pos: 0, msg: m.to_string() };
        let (num, den) = match text.split_once('/') {
            Some((n, d)) => (n, Some(d)),
            None => (text, None),
        };
        let num: BigInt = num.parse().map_err(|_| bad("expected integer"))?;
        let den: BigInt = match den {
            Some(d) => d.parse().map_err(|_| bad("expected integer denominator"))?,
            None => BigInt::one(),
        };
        if den.is_zero() {
            return Err(bad("zero denominator"));
        }
        match self {
            Domain::Fp(p) => {
                let p_big = BigInt::from(*p);
                let n = ((&num % &p_big) + &p_big) % &p_big;
                let d = ((&den % &p_big) + &p_big) % &p_big;
                let n: u64 = n.try_into().unwrap();
                let d: u64 = d.try_into().unwrap();
                if d == 0 {
                    return Err(Error::NotInvertible(format!("{den} (divisible by {p})")));
                }
                Ok(self.mul(&Scalar::Fp(n), &self.inv(&Scalar::Fp(d))?))
            }
            Domain::Rational => Ok(Scalar::Q(BigRational::new(num, den))),
            Domain::Integer => {
                if !den.is_one() {
                    return Err(bad("integer domain does not admit fractions"));
                }
                Ok(Scalar::Z(num))
            }
        }
    }

    fn check_pair(&self, a: &Scalar, b: &Scalar) -> (u64, u64) {
        match (self, a, b) {
            (Domain::Fp(_), Scalar::Fp(x), Scalar::Fp(y)) => (*x, *y),
            _ => unreachable!("scalar/domain mismatch"),
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match self {
            Domain::Fp(p) => {
                let (x, y) = self.check_pair(a, b);
                Scalar::Fp((x + y) % *p as u64)
            }
            Domain::Rational => Scalar::Q(a.q() + b.q()),
            Domain::Integer => Scalar::Z(a.z() + b.z()),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match self {
            Domain::Fp(p) => {
                let x = a.fp();
                Scalar::Fp(if x == 0 { 0 } else { *p as u64 - x })
            }
            Domain::Rational => Scalar::Q(-a.q()),
            Domain::Integer => Scalar::Z(-a.z()),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match self {
            Domain::Fp(p) => {
                let (x, y) = self.check_pair(a, b);
                // p < 2^31, so the product fits in u64
                Scalar::Fp((x * y) % *p as u64)
            }
            Domain::Rational => Scalar::Q(a.q() * b.q()),
            Domain::Integer => Scalar::Z(a.z() * b.z()),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Result<Scalar> {
        if a.is_zero() {
            return Err(Error::NotInvertible("0".into()));
        }
        match self {
            Domain::Fp(p) => Ok(Scalar::Fp(mod_inverse(a.fp(), *p as u64))),
            Domain::Rational => Ok(Scalar::Q(a.q().recip())),
            Domain::Integer => {
                let z = a.z();
                if z.is_one() || (-z).is_one() {
                    Ok(Scalar::Z(z.clone()))
                } else {
                    Err(Error::NotInvertible(a.to_string()))
                }
            }
        }
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar> {
        Ok(self.mul(a, &self.inv(b)?))
    }
}

/// A coefficient value. Paired with a [`Domain`] for arithmetic; `Fp` values
/// are canonical representatives in `0..p`.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub enum Scalar {
    Fp(u64),
    Q(BigRational),
    Z(BigInt),
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Total order for canonicalization; meaningful within one domain.
impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        match (self, other) {
            (Scalar::Fp(a), Scalar::Fp(b)) => a.cmp(b),
            (Scalar::Q(a), Scalar::Q(b)) => a.cmp(b),
            (Scalar::Z(a), Scalar::Z(b)) => a.cmp(b),
            (Scalar::Fp(_), _) => Ordering::Less,
            (_, Scalar::Fp(_)) => Ordering::Greater,
            (Scalar::Q(_), Scalar::Z(_)) => Ordering::Less,
            (Scalar::Z(_), Scalar::Q(_)) => Ordering::Greater,
        }
    }
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Fp(x) => *x == 0,
            Scalar::Q(x) => x.is_zero(),
            Scalar::Z(x) => x.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Fp(x) => *x == 1,
            Scalar::Q(x) => x.is_one(),
            Scalar::Z(x) => x.is_one(),
        }
    }

    fn fp(&self) -> u64 {
        match self {
            Scalar::Fp(x) => *x,
            _ => unreachable!("scalar/domain mismatch"),
        }
    }

    pub fn q(&self) -> &BigRational {
        match self {
            Scalar::Q(x) => x,
            _ => unreachable!("scalar/domain mismatch"),
        }
    }

    pub fn z(&self) -> &BigInt {
        match self {
            Scalar::Z(x) => x,
            _ => unreachable!("scalar/domain mismatch"),
        }
    }

    /// True when rendering needs an explicit leading sign.
    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Fp(_) => false,
            Scalar::Q(x) => x.is_negative(),
            Scalar::Z(x) => x.is_negative(),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Fp(x) => write!(f, "{x}"),
            Scalar::Q(x) => {
                if x.denom().is_one() {
                    write!(f, "{}", x.numer())
                } else {
                    write!(f, "{}/{}", x.numer(), x.denom())
                }
            }
            Scalar::Z(x) => write!(f, "{x}"),
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // extended Euclid on (a, p), p prime and a != 0
    let (mut r0, mut r1) = (a as i128, p as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1);
    (s0.rem_euclid(p as i128)) as u64
}
