//! Exact field scalars: arbitrary-precision rationals and prime fields.
//!
//! A [`Scalar`] is plain data; the field it lives in is carried by the
//! enclosing context (matrix, algebra, ...) as a [`Field`] descriptor and
//! passed into every arithmetic call. Residues never store their modulus,
//! so a computation can never silently mix moduli: the context decides.

use crate::{Error, Result};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Field descriptor, fixed per computation session.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum Field {
    /// The rational numbers.
    Q,
    /// The prime field `F_p`, `p < 2^31`.
    Fp { p: u32 },
}

/// An element of `Q` (canonical fraction) or of `F_p` (residue in `[0, p)`).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Scalar {
    Rat(BigRational),
    Mod(u64),
}

impl Field {
    /// Prime field constructor with a primality check.
    pub fn prime(p: u32) -> Result<Field> {
        if p < 2 {
            return Err(Error::Parse(format!("{p} is not prime")));
        }
        let mut d = 2u64;
        while d * d <= p as u64 {
            if p as u64 % d == 0 {
                return Err(Error::Parse(format!("{p} is not prime")));
            }
            d += 1;
        }
        Ok(Field::Fp { p })
    }

    pub fn zero(&self) -> Scalar {
        match self {
            Field::Q => Scalar::Rat(BigRational::zero()),
            Field::Fp { .. } => Scalar::Mod(0),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            Field::Q => Scalar::Rat(BigRational::one()),
            Field::Fp { .. } => Scalar::Mod(1),
        }
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            Field::Q => Scalar::Rat(BigRational::from_integer(BigInt::from(n))),
            Field::Fp { p } => {
                let p = *p as i64;
                Scalar::Mod(n.rem_euclid(p) as u64)
            }
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (Field::Q, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            (Field::Fp { p }, Scalar::Mod(x), Scalar::Mod(y)) => {
                Scalar::Mod((x + y) % *p as u64)
            }
            _ => panic!("scalar does not belong to field {self:?}"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (Field::Q, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x - y),
            (Field::Fp { p }, Scalar::Mod(x), Scalar::Mod(y)) => {
                let p = *p as u64;
                Scalar::Mod((x + p - y) % p)
            }
            _ => panic!("scalar does not belong to field {self:?}"),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (Field::Q, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            (Field::Fp { p }, Scalar::Mod(x), Scalar::Mod(y)) => {
                Scalar::Mod(x * y % *p as u64)
            }
            _ => panic!("scalar does not belong to field {self:?}"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (Field::Q, Scalar::Rat(x)) => Scalar::Rat(-x),
            (Field::Fp { p }, Scalar::Mod(x)) => {
                let p = *p as u64;
                Scalar::Mod((p - x) % p)
            }
            _ => panic!("scalar does not belong to field {self:?}"),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Result<Scalar> {
        match (self, a) {
            (Field::Q, Scalar::Rat(x)) => {
                if x.is_zero() {
                    Err(Error::NotInvertible("0".into()))
                } else {
                    Ok(Scalar::Rat(x.recip()))
                }
            }
            (Field::Fp { p }, Scalar::Mod(x)) => {
                if *x == 0 {
                    return Err(Error::NotInvertible("0".into()));
                }
                // extended Euclid on (x, p)
                let p = *p as i64;
                let (mut r0, mut r1) = (*x as i64, p);
                let (mut s0, mut s1) = (1i64, 0i64);
                while r1 != 0 {
                    let q = r0 / r1;
                    (r0, r1) = (r1, r0 - q * r1);
                    (s0, s1) = (s1, s0 - q * s1);
                }
                debug_assert_eq!(r0, 1);
                Ok(Scalar::Mod(s0.rem_euclid(p) as u64))
            }
            _ => panic!("scalar does not belong to field {self:?}"),
        }
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// `acc += c * x`, the inner-loop primitive of all the elimination code.
    pub fn add_mul(&self, acc: &mut Scalar, c: &Scalar, x: &Scalar) {
        *acc = self.add(acc, &self.mul(c, x));
    }

    /// Parses a decimal integer or an `a/b` fraction string.
    pub fn parse(&self, s: &str) -> Result<Scalar> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid scalar {s:?}"));
        match self {
            Field::Q => {
                let (num, den) = match s.split_once('/') {
                    Some((n, d)) => (n, d),
                    None => (s, "1"),
                };
                let n: BigInt = num.parse().map_err(|_| bad())?;
                let d: BigInt = den.parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                Ok(Scalar::Rat(BigRational::new(n, d)))
            }
            Field::Fp { p } => {
                let (num, den) = match s.split_once('/') {
                    Some((n, d)) => (n, d),
                    None => (s, "1"),
                };
                let n: i64 = num.parse().map_err(|_| bad())?;
                let d: i64 = den.parse().map_err(|_| bad())?;
                if d.rem_euclid(*p as i64) == 0 {
                    return Err(Error::Parse(format!(
                        "denominator of {s:?} vanishes mod {p}"
                    )));
                }
                self.div(&self.from_i64(n), &self.from_i64(d))
            }
        }
    }

    /// Renders a scalar as the string form accepted by [`Field::parse`].
    pub fn render(&self, a: &Scalar) -> String {
        match a {
            Scalar::Rat(x) => {
                if x.denom().is_one() {
                    x.numer().to_string()
                } else {
                    format!("{}/{}", x.numer(), x.denom())
                }
            }
            Scalar::Mod(x) => x.to_string(),
        }
    }
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(x) => x.is_zero(),
            Scalar::Mod(x) => *x == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(x) => x.is_one(),
            Scalar::Mod(x) => *x == 1,
        }
    }

    /// Sign-aware rendering used by the pretty-printers; residues are never
    /// negative.
    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Rat(x) => x.is_negative(),
            Scalar::Mod(_) => false,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(x) => {
                if x.denom().is_one() {
                    write!(f, "{}", x.numer())
                } else {
                    write!(f, "{}/{}", x.numer(), x.denom())
                }
            }
            Scalar::Mod(x) => write!(f, "{x}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_arithmetic_is_canonical() {
        let q = Field::Q;
        let half = q.parse("1/2").unwrap();
        let third = q.parse("2/6").unwrap();
        assert_eq!(q.render(&third), "1/3");
        let sum = q.add(&half, &third);
        assert_eq!(q.render(&sum), "5/6");
        let prod = q.mul(&half, &q.from_i64(-4));
        assert_eq!(q.render(&prod), "-2");
        assert_eq!(q.render(&q.inv(&prod).unwrap()), "-1/2");
    }

    #[test]
    fn prime_field_arithmetic() {
        let f5 = Field::prime(5).unwrap();
        let a = f5.from_i64(-1);
        assert_eq!(a, Scalar::Mod(4));
        assert_eq!(f5.mul(&a, &a), Scalar::Mod(1));
        assert_eq!(f5.inv(&Scalar::Mod(2)).unwrap(), Scalar::Mod(3));
        assert_eq!(f5.parse("7/3").unwrap(), f5.mul(&f5.from_i64(7), &Scalar::Mod(2)));
    }

    #[test]
    fn rejects_composite_modulus() {
        assert!(Field::prime(6).is_err());
        assert!(Field::prime(1).is_err());
        assert!(Field::prime(2147483647).is_ok()); // 2^31 - 1 is prime
    }

    #[test]
    fn parse_rejects_zero_denominator() {
        assert!(Field::Q.parse("1/0").is_err());
        assert!(Field::prime(5).unwrap().parse("1/5").is_err());
    }
}
