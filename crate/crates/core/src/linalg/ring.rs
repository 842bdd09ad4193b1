use std::fmt;
use std::str::FromStr;

use super::scalar::{mod_inverse, Scalar};
use crate::error::{Error, Result};

/// Coefficient ring: the integers, the rationals or a prime field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ring {
    Integers,
    Rationals,
    PrimeField(u64),
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut i = 2u64;
    while i * i <= p {
        if p % i == 0 {
            return false;
        }
        i += 1;
    }
    true
}

impl Ring {
    pub fn prime_field(p: u64) -> Result<Ring> {
        if p > u32::MAX as u64 || !is_prime(p) {
            return Err(Error::Invalid(format!("{p} is not a supported prime")));
        }
        Ok(Ring::PrimeField(p))
    }

    pub fn is_field(&self) -> bool {
        !matches!(self, Ring::Integers)
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Ring::PrimeField(p) => *p,
            _ => 0,
        }
    }

    /// Bring a value into canonical form for this ring, rejecting values outside it.
    pub fn try_element(&self, s: &Scalar) -> Result<Scalar> {
        match self {
            Ring::Rationals => Ok(s.clone()),
            Ring::Integers if s.is_integer() => Ok(s.clone()),
            Ring::Integers => Err(Error::Invalid(format!("{s} is not an integer"))),
            Ring::PrimeField(p) => {
                s.rem_prime(*p).ok_or_else(|| Error::Invalid(format!("{s} has a denominator divisible by {p}")))
            }
        }
    }

    /// Canonical form of a value already known to lie in the ring.
    #[inline]
    pub fn norm(&self, s: Scalar) -> Scalar {
        match self {
            Ring::PrimeField(p) => match &s {
                Scalar::Small(n, 1) if *n >= 0 && (*n as u64) < *p => s,
                _ => s.rem_prime(*p).expect("denominator invertible modulo p"),
            },
            _ => s,
        }
    }

    pub fn from_int(&self, n: i64) -> Scalar {
        self.norm(Scalar::from_int(n))
    }

    pub fn zero(&self) -> Scalar {
        Scalar::zero()
    }

    pub fn one(&self) -> Scalar {
        Scalar::one()
    }

    #[inline]
    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.norm(a.add(b))
    }

    #[inline]
    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.norm(a.sub(b))
    }

    #[inline]
    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.norm(a.mul(b))
    }

    #[inline]
    pub fn neg(&self, a: &Scalar) -> Scalar {
        self.norm(a.neg())
    }

    /// Inverse in the ring (only ±1 over the integers).
    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        match self {
            Ring::Integers => {
                if a.abs().is_one() {
                    Some(a.clone())
                } else {
                    None
                }
            }
            Ring::Rationals => a.recip(),
            Ring::PrimeField(p) => {
                let n = a.to_i64()? as u64;
                mod_inverse(n, *p).map(|v| Scalar::from_int(v as i64))
            }
        }
    }

    pub fn is_unit(&self, a: &Scalar) -> bool {
        self.inv(a).is_some()
    }

    /// `(-1)^k` as a ring element.
    pub fn sign(&self, k: i64) -> Scalar {
        if k.rem_euclid(2) == 0 {
            Scalar::one()
        } else {
            self.norm(Scalar::from_int(-1))
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Integers => write!(f, "Z"),
            Ring::Rationals => write!(f, "Q"),
            Ring::PrimeField(p) => write!(f, "F{p}"),
        }
    }
}

impl FromStr for Ring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Ring> {
        match s.trim() {
            "Z" | "ZZ" | "Integers" => Ok(Ring::Integers),
            "Q" | "QQ" | "Rationals" => Ok(Ring::Rationals),
            t => {
                let digits = t
                    .strip_prefix("F")
                    .or_else(|| t.strip_prefix("GF"))
                    .or_else(|| t.strip_prefix("Fp"))
                    .ok_or_else(|| Error::Invalid(format!("unknown ring {s:?}")))?;
                let p: u64 = digits
                    .trim_start_matches(['(', '_'])
                    .trim_end_matches(')')
                    .parse()
                    .map_err(|_| Error::Invalid(format!("unknown ring {s:?}")))?;
                Ring::prime_field(p)
            }
        }
    }
}

impl serde::Serialize for Ring {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Ring {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        for r in [Ring::Integers, Ring::Rationals, Ring::PrimeField(7)] {
            assert_eq!(r.to_string().parse::<Ring>().unwrap(), r);
        }
        assert!("F4".parse::<Ring>().is_err());
        assert!("R".parse::<Ring>().is_err());
    }

    #[test]
    fn field_arithmetic() {
        let f = Ring::PrimeField(5);
        assert_eq!(f.from_int(-1), Scalar::from_int(4));
        assert_eq!(f.mul(&Scalar::from_int(3), &Scalar::from_int(4)), Scalar::from_int(2));
        assert_eq!(f.inv(&Scalar::from_int(2)), Some(Scalar::from_int(3)));
        assert_eq!(Ring::Integers.inv(&Scalar::from_int(2)), None);
        assert_eq!(Ring::Integers.inv(&Scalar::from_int(-1)), Some(Scalar::from_int(-1)));
        assert!(Ring::Integers.try_element(&Scalar::from_frac(1, 2)).is_err());
    }
}
