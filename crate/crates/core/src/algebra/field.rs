//! Coefficient fields: the rationals and prime fields 𝔽_p.
//!
//! Elements of different fields never mix; every binary operation checks
//! the tags and fails with [`Error::FieldMismatch`] instead of coercing.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest admissible modulus (exclusive). Keeps `a + b` inside `u64`.
pub const MAX_MODULUS: u64 = 1 << 62;

/// Mersenne prime 2^61 - 1, used to hash rational data into a large prime field.
pub const LARGE_PRIME: u64 = (1 << 61) - 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Rationals,
    Prime(u64),
}

impl Field {
    /// Validated constructor for 𝔽_p.
    pub fn prime(p: u64) -> Result<Self> {
        if p >= MAX_MODULUS || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Field::Prime(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rationals => 0,
            Field::Prime(p) => *p,
        }
    }

    /// Number of elements, `None` for ℚ.
    pub fn size(&self) -> Option<u64> {
        match self {
            Field::Rationals => None,
            Field::Prime(p) => Some(*p),
        }
    }

    pub fn zero(&self) -> FieldElement {
        self.from_i64(0)
    }

    pub fn one(&self) -> FieldElement {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> FieldElement {
        match *self {
            Field::Rationals => FieldElement::Rational(BigRational::from_integer(v.into())),
            Field::Prime(p) => FieldElement::Modular {
                value: v.rem_euclid(p as i64) as u64,
                modulus: p,
            },
        }
    }

    pub fn from_bigint(&self, v: &BigInt) -> FieldElement {
        match *self {
            Field::Rationals => FieldElement::Rational(BigRational::from_integer(v.clone())),
            Field::Prime(p) => {
                let r = v.mod_floor(&BigInt::from(p));
                FieldElement::Modular {
                    value: r.to_u64().expect("residue fits"),
                    modulus: p,
                }
            }
        }
    }

    /// `num / den` in this field. Fails when `den` vanishes in the field.
    pub fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<FieldElement> {
        match self {
            Field::Rationals => {
                if den.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                Ok(FieldElement::Rational(BigRational::new(num.clone(), den.clone())))
            }
            Field::Prime(_) => {
                let d = self.from_bigint(den);
                self.from_bigint(num).try_div(&d)
            }
        }
    }

    pub fn from_u64(&self, v: u64) -> FieldElement {
        match *self {
            Field::Rationals => FieldElement::Rational(BigRational::from_integer(v.into())),
            Field::Prime(p) => FieldElement::Modular {
                value: v % p,
                modulus: p,
            },
        }
    }

    pub fn label(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Prime(p) => write!(f, "Fp:{p}"),
        }
    }
}

impl FromStr for Field {
    type Err = Error;

    /// Accepts `Q`, `QQ`, `Fp:p`, `F_p`, `GF(p)`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("q") || t.eq_ignore_ascii_case("qq") {
            return Ok(Field::Rationals);
        }
        let digits = t
            .strip_prefix("Fp:")
            .or_else(|| t.strip_prefix("fp:"))
            .or_else(|| t.strip_prefix("F_"))
            .or_else(|| t.strip_prefix("GF(").and_then(|r| r.strip_suffix(')')))
            .ok_or_else(|| Error::Invalid(format!("unrecognised field {s:?}")))?;
        let p: u64 = digits
            .parse()
            .map_err(|_| Error::Invalid(format!("bad modulus in {s:?}")))?;
        Field::prime(p)
    }
}

/// An element of ℚ or of 𝔽_p.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldElement {
    Rational(BigRational),
    Modular { value: u64, modulus: u64 },
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub(crate) fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub(crate) fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse via Fermat; `a` must be non-zero mod `p`.
#[inline]
pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % small == 0 {
            return n == small;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

impl FieldElement {
    pub fn field(&self) -> Field {
        match self {
            FieldElement::Rational(_) => Field::Rationals,
            FieldElement::Modular { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElement::Rational(r) => r.is_zero(),
            FieldElement::Modular { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElement::Rational(r) => r.is_one(),
            FieldElement::Modular { value, .. } => *value == 1,
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.field() != other.field() {
            return Err(Error::FieldMismatch(
                self.field().to_string(),
                other.field().to_string(),
            ));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.add_same(other))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.sub_same(other))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul_same(other))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let inv = other.inv()?;
        Ok(self.mul_same(&inv))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            FieldElement::Rational(r) => FieldElement::Rational(r.recip()),
            FieldElement::Modular { value, modulus } => FieldElement::Modular {
                value: inv_mod(*value, *modulus),
                modulus: *modulus,
            },
        })
    }

    pub fn neg(&self) -> Self {
        match self {
            FieldElement::Rational(r) => FieldElement::Rational(-r),
            FieldElement::Modular { value, modulus } => FieldElement::Modular {
                value: sub_mod(0, *value, *modulus),
                modulus: *modulus,
            },
        }
    }

    pub fn pow(&self, exp: u64) -> Self {
        match self {
            FieldElement::Rational(r) => {
                let mut acc = BigRational::one();
                for _ in 0..exp {
                    acc *= r;
                }
                FieldElement::Rational(acc)
            }
            FieldElement::Modular { value, modulus } => FieldElement::Modular {
                value: pow_mod(*value, exp, *modulus),
                modulus: *modulus,
            },
        }
    }

    // The `_same` family assumes both operands live in the same field; the
    // polynomial layer checks this once per operation.

    pub(crate) fn add_same(&self, other: &Self) -> Self {
        match (self, other) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => FieldElement::Rational(a + b),
            (FieldElement::Modular { value: a, modulus }, FieldElement::Modular { value: b, .. }) => {
                FieldElement::Modular {
                    value: add_mod(*a, *b, *modulus),
                    modulus: *modulus,
                }
            }
            _ => unreachable!("field tags checked by caller"),
        }
    }

    pub(crate) fn sub_same(&self, other: &Self) -> Self {
        match (self, other) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => FieldElement::Rational(a - b),
            (FieldElement::Modular { value: a, modulus }, FieldElement::Modular { value: b, .. }) => {
                FieldElement::Modular {
                    value: sub_mod(*a, *b, *modulus),
                    modulus: *modulus,
                }
            }
            _ => unreachable!("field tags checked by caller"),
        }
    }

    pub(crate) fn mul_same(&self, other: &Self) -> Self {
        match (self, other) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => FieldElement::Rational(a * b),
            (FieldElement::Modular { value: a, modulus }, FieldElement::Modular { value: b, .. }) => {
                FieldElement::Modular {
                    value: mul_mod(*a, *b, *modulus),
                    modulus: *modulus,
                }
            }
            _ => unreachable!("field tags checked by caller"),
        }
    }

    /// Reduce a rational into 𝔽_p. Fails if the denominator vanishes mod p.
    pub fn reduce_mod(&self, target: Field) -> Result<Self> {
        match (self, target) {
            (_, Field::Rationals) if matches!(self, FieldElement::Rational(_)) => Ok(self.clone()),
            (FieldElement::Rational(r), Field::Prime(_)) => target.from_ratio(r.numer(), r.denom()),
            (FieldElement::Modular { modulus, .. }, Field::Prime(p)) if *modulus == p => Ok(self.clone()),
            _ => Err(Error::FieldMismatch(self.field().to_string(), target.to_string())),
        }
    }

    /// Canonical residue, only for modular elements.
    pub fn residue(&self) -> Option<u64> {
        match self {
            FieldElement::Modular { value, .. } => Some(*value),
            _ => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            FieldElement::Rational(r) => Some(r),
            _ => None,
        }
    }

    /// True when the printed form starts with a minus sign.
    pub(crate) fn is_negative(&self) -> bool {
        match self {
            FieldElement::Rational(r) => r.is_negative(),
            _ => false,
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElement::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            FieldElement::Modular { value, .. } => write!(f, "{value}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(
            primes,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
        assert!(is_prime(32003));
        assert!(is_prime(LARGE_PRIME));
        assert!(!is_prime(32001));
        assert!(!is_prime(3215031751)); // strong pseudoprime to bases 2,3,5,7
    }

    #[test]
    fn canonical_residues() {
        let f = Field::prime(7).unwrap();
        assert_eq!(f.from_i64(-1).residue(), Some(6));
        assert_eq!(f.from_i64(15).residue(), Some(1));
        let half = f.from_ratio(&1.into(), &2.into()).unwrap();
        assert_eq!(half.residue(), Some(4));
        assert!(f.from_ratio(&1.into(), &7.into()).is_err());
    }

    #[test]
    fn rationals_lowest_terms() {
        let q = Field::Rationals;
        let x = q.from_ratio(&(-4).into(), &(-6).into()).unwrap();
        let r = x.as_rational().unwrap();
        assert_eq!(r.numer(), &BigInt::from(2));
        assert_eq!(r.denom(), &BigInt::from(3));
        assert_eq!(x.to_string(), "2/3");
    }

    #[test]
    fn mixing_fields_is_an_error() {
        let a = Field::Rationals.one();
        let b = Field::Prime(5).one();
        assert!(matches!(a.try_add(&b), Err(Error::FieldMismatch(..))));
        let c = Field::Prime(7).one();
        assert!(b.try_mul(&c).is_err());
    }

    #[test]
    fn parse_field_labels() {
        assert_eq!("Q".parse::<Field>().unwrap(), Field::Rationals);
        assert_eq!("Fp:32003".parse::<Field>().unwrap(), Field::Prime(32003));
        assert_eq!("GF(7)".parse::<Field>().unwrap(), Field::Prime(7));
        assert!("Fp:9".parse::<Field>().is_err());
    }
}
