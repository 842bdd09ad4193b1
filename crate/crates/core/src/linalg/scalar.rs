use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational number with an inline fast path for values whose numerator
/// and denominator fit in 63 bits.
///
/// The representation is canonical: a value is stored as `Small` whenever it
/// fits, so derived equality is value equality.
#[derive(Clone)]
pub enum Scalar {
    Small(i64, i64),
    Big(BigRational),
}

const LIMIT: i128 = i64::MAX as i128;

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Small(0, 1)
    }

    pub fn one() -> Self {
        Scalar::Small(1, 1)
    }

    pub fn from_int(n: i64) -> Self {
        if n == i64::MIN {
            Scalar::from_big(BigRational::from_integer(BigInt::from(n)))
        } else {
            Scalar::Small(n, 1)
        }
    }

    pub fn from_frac(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        Scalar::from_i128(n as i128, d as i128)
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Scalar::from_big(BigRational::from_integer(n))
    }

    fn from_i128(n: i128, d: i128) -> Self {
        let (mut n, mut d) = if d < 0 { (-n, -d) } else { (n, d) };
        if n == 0 {
            return Scalar::zero();
        }
        let g = gcd_u128(n.unsigned_abs(), d as u128) as i128;
        if g > 1 {
            n /= g;
            d /= g;
        }
        if n.abs() <= LIMIT && d <= LIMIT {
            Scalar::Small(n as i64, d as i64)
        } else {
            Scalar::Big(BigRational::new_raw(BigInt::from(n), BigInt::from(d)))
        }
    }

    pub fn from_big(r: BigRational) -> Self {
        let n = r.numer();
        let d = r.denom();
        if let (Some(n), Some(d)) = (n.to_i64(), d.to_i64()) {
            if n != i64::MIN && d != i64::MIN {
                return Scalar::from_i128(n as i128, d as i128);
            }
        }
        Scalar::Big(r)
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Scalar::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Scalar::Big(r) => r.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Scalar::Small(0, _))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Scalar::Small(1, 1))
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Scalar::Small(_, d) => *d == 1,
            Scalar::Big(r) => r.is_integer(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match self {
            Scalar::Small(n, _) => BigInt::from(*n),
            Scalar::Big(r) => r.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match self {
            Scalar::Small(_, d) => BigInt::from(*d),
            Scalar::Big(r) => r.denom().clone(),
        }
    }

    /// Integer value, if integral and representable.
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Scalar::Small(n, 1) => Some(*n),
            Scalar::Small(..) => None,
            Scalar::Big(r) if r.is_integer() => r.numer().to_i64(),
            Scalar::Big(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Small(n, d) => *n as f64 / *d as f64,
            Scalar::Big(r) => r.to_f64().unwrap_or(f64::NAN),
        }
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Small(n, d) => Scalar::Small(n.abs(), *d),
            Scalar::Big(r) => Scalar::Big(r.abs()),
        }
    }

    pub fn signum(&self) -> i32 {
        match self {
            Scalar::Small(n, _) => n.signum() as i32,
            Scalar::Big(r) => {
                if r.is_positive() {
                    1
                } else if r.is_negative() {
                    -1
                } else {
                    0
                }
            }
        }
    }

    pub fn add(&self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Small(a, 1), Scalar::Small(b, 1)) => match a.checked_add(*b) {
                Some(c) if c != i64::MIN => Scalar::Small(c, 1),
                _ => Scalar::from_i128(*a as i128 + *b as i128, 1),
            },
            (Scalar::Small(a, b), Scalar::Small(c, d)) => {
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                Scalar::from_i128(a * d + c * b, b * d)
            }
            _ => Scalar::from_big(self.to_big() + o.to_big()),
        }
    }

    pub fn sub(&self, o: &Scalar) -> Scalar {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Small(n, d) => Scalar::Small(-n, *d),
            Scalar::Big(r) => Scalar::from_big(-r.clone()),
        }
    }

    pub fn mul(&self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Small(0, _), _) | (_, Scalar::Small(0, _)) => Scalar::zero(),
            (Scalar::Small(a, 1), Scalar::Small(b, 1)) => match a.checked_mul(*b) {
                Some(c) if c != i64::MIN => Scalar::Small(c, 1),
                _ => Scalar::from_i128(*a as i128 * *b as i128, 1),
            },
            (Scalar::Small(a, b), Scalar::Small(c, d)) => {
                let num = (*a as i128).checked_mul(*c as i128);
                let den = (*b as i128).checked_mul(*d as i128);
                match (num, den) {
                    (Some(n), Some(d)) => Scalar::from_i128(n, d),
                    _ => Scalar::from_big(self.to_big() * o.to_big()),
                }
            }
            _ => Scalar::from_big(self.to_big() * o.to_big()),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<Scalar> {
        match self {
            Scalar::Small(0, _) => None,
            Scalar::Small(n, d) => Some(Scalar::from_i128(*d as i128, *n as i128)),
            Scalar::Big(r) => Some(Scalar::from_big(r.recip())),
        }
    }

    pub fn div(&self, o: &Scalar) -> Option<Scalar> {
        o.recip().map(|r| self.mul(&r))
    }

    /// Euclidean division of integers: `self = q*o + r` with `0 <= r < |o|`.
    pub fn div_rem_euclid(&self, o: &Scalar) -> (Scalar, Scalar) {
        match (self, o) {
            (Scalar::Small(a, 1), Scalar::Small(b, 1)) if *b != 0 => {
                (Scalar::from_int(a.div_euclid(*b)), Scalar::from_int(a.rem_euclid(*b)))
            }
            _ => {
                let a = self.numer();
                let b = o.numer();
                let (mut q, mut r) = a.div_mod_floor(&b);
                if r.is_negative() {
                    // only reachable for negative b
                    r += b.abs();
                    q += BigInt::one();
                }
                (Scalar::from_bigint(q), Scalar::from_bigint(r))
            }
        }
    }

    /// Reduce an integer modulo `p` into `[0, p)`; rationals via inverse of the denominator.
    pub fn rem_prime(&self, p: u64) -> Option<Scalar> {
        let p_i = p as i128;
        match self {
            Scalar::Small(n, d) => {
                let n = (*n as i128).rem_euclid(p_i);
                if *d == 1 {
                    return Some(Scalar::Small(n as i64, 1));
                }
                let d = (*d as i128).rem_euclid(p_i);
                let inv = mod_inverse(d as u64, p)?;
                Some(Scalar::Small(((n * inv as i128) % p_i) as i64, 1))
            }
            Scalar::Big(r) => {
                let pb = BigInt::from(p);
                let n = r.numer().mod_floor(&pb).to_u64().unwrap();
                let d = r.denom().mod_floor(&pb).to_u64().unwrap();
                let inv = mod_inverse(d, p)?;
                Some(Scalar::Small(((n as u128 * inv as u128) % p as u128) as i64, 1))
            }
        }
    }
}

/// Inverse of `a` modulo the prime `p`, `None` when `a ≡ 0`.
pub fn mod_inverse(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return None;
    }
    let (mut t, mut nt) = (0i128, 1i128);
    let (mut r, mut nr) = (p as i128, a as i128);
    while nr != 0 {
        let q = r / nr;
        (t, nt) = (nt, t - q * nt);
        (r, nr) = (nr, r - q * nr);
    }
    Some(t.rem_euclid(p as i128) as u64)
}

impl PartialEq for Scalar {
    fn eq(&self, o: &Self) -> bool {
        match (self, o) {
            (Scalar::Small(a, b), Scalar::Small(c, d)) => a == c && b == d,
            (Scalar::Big(a), Scalar::Big(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Scalar {}

impl Hash for Scalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            Scalar::Small(a, b) => {
                0u8.hash(state);
                a.hash(state);
                b.hash(state);
            }
            Scalar::Big(r) => {
                1u8.hash(state);
                r.hash(state);
            }
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Scalar {
    fn cmp(&self, o: &Self) -> Ordering {
        match (self, o) {
            (Scalar::Small(a, b), Scalar::Small(c, d)) => (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128)),
            _ => self.to_big().cmp(&o.to_big()),
        }
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::from_big(r)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Small(n, 1) => write!(f, "{n}"),
            Scalar::Small(n, d) => write!(f, "{n}/{d}"),
            Scalar::Big(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Scalar::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse scalar {0:?}")]
pub struct ParseScalarError(pub String);

impl FromStr for Scalar {
    type Err = ParseScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let err = || ParseScalarError(s.to_string());
        match t.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| err())?;
                let d: BigInt = d.trim().parse().map_err(|_| err())?;
                if d.is_zero() {
                    return Err(err());
                }
                Ok(Scalar::from_big(BigRational::new(n, d)))
            }
            None => {
                let n: BigInt = t.parse().map_err(|_| err())?;
                Ok(Scalar::from_bigint(n))
            }
        }
    }
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.to_i64() {
            Some(n) => s.serialize_i64(n),
            None => s.serialize_str(&self.to_string()),
        }
    }
}

impl<'de> serde::Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        match v {
            serde_json::Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Ok(Scalar::from_int(i))
                } else {
                    n.to_string().parse().map_err(serde::de::Error::custom)
                }
            }
            serde_json::Value::String(s) => s.parse().map_err(serde::de::Error::custom),
            other => Err(serde::de::Error::custom(format!("expected a number or \"a/b\", got {other}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn canonical_forms() {
        assert_eq!(Scalar::from_frac(2, 4), Scalar::from_frac(-1, -2));
        assert_eq!(Scalar::from_frac(6, 3), Scalar::from_int(2));
        assert!(Scalar::from_frac(0, 5).is_zero());
        assert_eq!("3/-6".parse::<Scalar>().unwrap(), Scalar::from_frac(-1, 2));
        assert_eq!(Scalar::from_frac(-1, 2).to_string(), "-1/2");
    }

    #[test]
    fn overflow_promotes_and_demotes() {
        let big = Scalar::from_int(i64::MAX);
        let sq = big.mul(&big);
        assert!(matches!(sq, Scalar::Big(_)));
        let back = sq.div(&big).unwrap();
        assert_eq!(back, big);
        assert!(matches!(back, Scalar::Small(..)));
    }

    #[test]
    fn euclid_and_mod() {
        let (q, r) = Scalar::from_int(-7).div_rem_euclid(&Scalar::from_int(3));
        assert_eq!((q, r), (Scalar::from_int(-3), Scalar::from_int(2)));
        assert_eq!(Scalar::from_frac(1, 2).rem_prime(5), Some(Scalar::from_int(3)));
        assert_eq!(Scalar::from_frac(1, 5).rem_prime(5), None);
        assert_eq!(mod_inverse(3, 7), Some(5));
    }

    fn big(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    proptest! {
        #[test]
        fn agrees_with_bigrational(a in -1_000_000_000_000i64..1_000_000_000_000, b in 1i64..1_000_000_000,
                                   c in -1_000_000_000_000i64..1_000_000_000_000, d in 1i64..1_000_000_000) {
            let x = Scalar::from_frac(a, b);
            let y = Scalar::from_frac(c, d);
            prop_assert_eq!(x.add(&y).to_big(), big(a, b) + big(c, d));
            prop_assert_eq!(x.mul(&y).to_big(), big(a, b) * big(c, d));
            prop_assert_eq!(x.sub(&y).to_big(), big(a, b) - big(c, d));
            prop_assert_eq!(x.cmp(&y), big(a, b).cmp(&big(c, d)));
            prop_assert_eq!(Scalar::from_big(x.to_big()), x);
        }
    }
}
