//! Exact scalars over the rationals and over prime fields.
//!
//! A [`Scalar`] always carries enough information to identify its field, so
//! mixing elements of different fields is detected instead of silently
//! producing garbage. Rationals are kept in lowest terms with a positive
//! denominator; residues are kept in `0..p`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The ground field of every structure in this crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    /// The prime field of order `p`. Moduli must be prime and below 2^32.
    pub fn prime(p: u64) -> Result<Self> {
        if p >= 1 << 32 || !is_prime(p) {
            return Err(Error::BadModulus(p));
        }
        Ok(FieldSpec::Prime(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::Prime(p) => *p,
        }
    }

    /// Short human-readable name: `Q` or `F7`.
    pub fn name(&self) -> String {
        match self {
            FieldSpec::Rationals => "Q".to_string(),
            FieldSpec::Prime(p) => format!("F{p}"),
        }
    }

    /// Parses `Q`, `F7`, `GF7` or a bare prime `7`.
    pub fn parse_name(text: &str) -> Result<Self> {
        let t = text.trim();
        if t.eq_ignore_ascii_case("q") || t.eq_ignore_ascii_case("rationals") {
            return Ok(FieldSpec::Rationals);
        }
        let digits = t
            .strip_prefix("GF")
            .or_else(|| t.strip_prefix("gf"))
            .or_else(|| t.strip_prefix('F'))
            .or_else(|| t.strip_prefix('f'))
            .unwrap_or(t);
        let p: u64 = digits.parse().map_err(|_| Error::Parse {
            text: text.to_string(),
            reason: "expected Q, F<p> or a prime".to_string(),
        })?;
        FieldSpec::prime(p)
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            FieldSpec::Prime(p) => Scalar::Residue {
                value: (v as i128).rem_euclid(*p as i128) as u64,
                modulus: *p,
            },
        }
    }

    pub fn from_bigint(&self, v: &BigInt) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::from_integer(v.clone())),
            FieldSpec::Prime(p) => {
                let r = v.mod_floor(&BigInt::from(*p));
                Scalar::Residue {
                    value: r.to_u64().expect("residue fits"),
                    modulus: *p,
                }
            }
        }
    }

    /// `num/den` as an element of this field.
    pub fn ratio(&self, num: i64, den: i64) -> Result<Scalar> {
        let d = self.from_i64(den).inv()?;
        Ok(&self.from_i64(num) * &d)
    }

    /// Accepts `"p/q"` or integer text. Over a prime field the fraction is
    /// interpreted as `p * q^-1`.
    pub fn parse(&self, text: &str) -> Result<Scalar> {
        let bad = |reason: &str| Error::Parse {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        let t = text.trim();
        let (num, den) = match t.split_once('/') {
            Some((a, b)) => (a.trim(), Some(b.trim())),
            None => (t, None),
        };
        let parse_int = |s: &str| -> Result<BigInt> {
            if s.is_empty() || s.starts_with('+') && s.len() == 1 {
                return Err(bad("empty integer"));
            }
            s.parse::<BigInt>().map_err(|_| bad("not an integer"))
        };
        let n = parse_int(num)?;
        match den {
            None => Ok(self.from_bigint(&n)),
            Some(d) => {
                let d = parse_int(d)?;
                if d.is_zero() {
                    return Err(bad("zero denominator"));
                }
                match self {
                    FieldSpec::Rationals => Ok(Scalar::Rational(BigRational::new(n, d))),
                    FieldSpec::Prime(_) => {
                        let dd = self.from_bigint(&d);
                        let inv = dd.inv().map_err(|_| bad("denominator vanishes mod p"))?;
                        Ok(&self.from_bigint(&n) * &inv)
                    }
                }
            }
        }
    }

    pub fn contains(&self, s: &Scalar) -> bool {
        s.field() == *self
    }

    pub(crate) fn check(&self, s: &Scalar) -> Result<()> {
        if self.contains(s) {
            Ok(())
        } else {
            Err(Error::ModulusMismatch(self.name(), s.field().name()))
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// An exact field element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Residue { value: u64, modulus: u64 },
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    acc
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rational(_) => FieldSpec::Rationals,
            Scalar::Residue { modulus, .. } => FieldSpec::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Residue { value, .. } => *value == 1,
        }
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar> {
        self.field().check(other)?;
        Ok(self + other)
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar> {
        self.field().check(other)?;
        Ok(self * other)
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rational(r) => Scalar::Rational(r.recip()),
            Scalar::Residue { value, modulus } => Scalar::Residue {
                value: pow_mod(*value, modulus - 2, *modulus),
                modulus: *modulus,
            },
        })
    }

    pub fn pow(&self, e: u64) -> Scalar {
        let mut acc = self.field().one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    fn mismatch(a: &Scalar, b: &Scalar) -> ! {
        panic!(
            "scalar field mismatch: {} vs {}",
            a.field().name(),
            b.field().name()
        )
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Residue { value: a, modulus: p }, Scalar::Residue { value: b, modulus: q })
                if p == q =>
            {
                let s = a + b;
                Scalar::Residue {
                    value: if s >= *p { s - p } else { s },
                    modulus: *p,
                }
            }
            _ => Scalar::mismatch(self, rhs),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Residue { value: a, modulus: p }, Scalar::Residue { value: b, modulus: q })
                if p == q =>
            {
                Scalar::Residue {
                    value: mul_mod(*a, *b, *p),
                    modulus: *p,
                }
            }
            _ => Scalar::mismatch(self, rhs),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Residue { value, modulus } => Scalar::Residue {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        match (&mut *self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => *a += b,
            _ => *self = &*self + rhs,
        }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        match (&mut *self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => *a -= b,
            _ => *self = &*self - rhs,
        }
    }
}

impl Scalar {
    /// Numerator and denominator of a rational scalar; `None` over F_p.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            Scalar::Residue { .. } => None,
        }
    }

    pub fn is_negative(&self) -> bool {
        matches!(self, Scalar::Rational(r) if r.is_negative())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_sum_is_reduced() {
        let q = FieldSpec::Rationals;
        let s = q.parse("1/2").unwrap().checked_add(&q.parse("1/3").unwrap()).unwrap();
        assert_eq!(s.to_string(), "5/6");
        assert_eq!(q.parse("4/-6").unwrap().to_string(), "-2/3");
    }

    #[test]
    fn residues_reduce() {
        let f7 = FieldSpec::prime(7).unwrap();
        let p = f7.from_i64(3).checked_mul(&f7.from_i64(5)).unwrap();
        assert_eq!(p.to_string(), "1");
        assert_eq!(f7.from_i64(-1).to_string(), "6");
        assert_eq!(f7.parse("1/2").unwrap().to_string(), "4");
    }

    #[test]
    fn inverse_of_zero_fails() {
        assert_eq!(FieldSpec::Rationals.zero().inv(), Err(Error::DivisionByZero));
        assert!(FieldSpec::prime(5).unwrap().zero().inv().is_err());
    }

    #[test]
    fn mixed_fields_are_rejected() {
        let a = FieldSpec::Rationals.one();
        let b = FieldSpec::prime(5).unwrap().one();
        assert!(matches!(a.checked_add(&b), Err(Error::ModulusMismatch(_, _))));
        let c = FieldSpec::prime(7).unwrap().one();
        assert!(matches!(b.checked_mul(&c), Err(Error::ModulusMismatch(_, _))));
    }

    #[test]
    fn malformed_text() {
        let q = FieldSpec::Rationals;
        for bad in ["", "1/0", "x", "1/2/3", "1.5"] {
            assert!(q.parse(bad).is_err(), "{bad} should not parse");
        }
        assert!(FieldSpec::prime(7).unwrap().parse("1/7").is_err());
    }

    #[test]
    fn moduli_must_be_prime() {
        assert!(FieldSpec::prime(1).is_err());
        assert!(FieldSpec::prime(9).is_err());
        assert!(FieldSpec::prime(2).is_ok());
        assert_eq!(FieldSpec::parse_name("F7").unwrap(), FieldSpec::Prime(7));
        assert_eq!(FieldSpec::parse_name("Q").unwrap(), FieldSpec::Rationals);
    }
}
