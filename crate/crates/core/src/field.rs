use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// Runtime description of a coefficient field, as written in ring headers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoefficientField {
    Prime(u32),
    Rationals,
}

impl CoefficientField {
    pub fn characteristic(&self) -> u32 {
        match self {
            CoefficientField::Prime(p) => *p,
            CoefficientField::Rationals => 0,
        }
    }
}

impl fmt::Display for CoefficientField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientField::Prime(p) => write!(f, "F{p}"),
            CoefficientField::Rationals => write!(f, "Q"),
        }
    }
}

pub trait Field: Clone + fmt::Debug + PartialEq + Eq + Hash + Send + Sync + 'static {
    type Elem: Clone + fmt::Debug + PartialEq + Eq + Hash + Send + Sync + 'static;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Panics on zero.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn from_bigint(&self, n: &BigInt) -> Self::Elem;
    fn descriptor(&self) -> CoefficientField;

    /// Sign and absolute value in the printed normal form.
    fn signed_parts(&self, a: &Self::Elem) -> (bool, String);

    /// Parses an unsigned literal such as `17` or `3/4`.
    fn parse_literal(&self, s: &str) -> Result<Self::Elem, Error>;

    fn characteristic(&self) -> u32 {
        self.descriptor().characteristic()
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.mul(a, &self.inv(b))
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self, Error> {
        if p >= 1 << 31 || !is_prime(p) {
            return Err(Error::NotPrime(p as u64));
        }
        Ok(PrimeField { p })
    }

    pub fn p(&self) -> u32 {
        self.p
    }
}

impl Field for PrimeField {
    type Elem = u32;

    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        let s = *a + *b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 * *b as u64) % self.p as u64) as u32
    }
    fn inv(&self, a: &u32) -> u32 {
        assert!(*a != 0, "inverse of zero in F{}", self.p);
        let (mut r0, mut r1) = (self.p as i64, *a as i64);
        let (mut s0, mut s1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        s0.rem_euclid(self.p as i64) as u32
    }
    fn from_i64(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }
    fn from_bigint(&self, n: &BigInt) -> u32 {
        let p = BigInt::from(self.p);
        let r = ((n % &p) + &p) % &p;
        u32::try_from(r).expect("residue fits")
    }
    fn descriptor(&self) -> CoefficientField {
        CoefficientField::Prime(self.p)
    }
    fn signed_parts(&self, a: &u32) -> (bool, String) {
        if self.p > 2 && *a > self.p / 2 {
            (true, (self.p - a).to_string())
        } else {
            (false, a.to_string())
        }
    }
    fn parse_literal(&self, s: &str) -> Result<u32, Error> {
        match s.split_once('/') {
            Some((n, d)) => {
                let n = self.parse_literal(n)?;
                let d = self.parse_literal(d)?;
                if d == 0 {
                    return Err(Error::Parse(format!("division by zero in literal {s}")));
                }
                Ok(self.div(&n, &d))
            }
            None => {
                let v: BigInt = s
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad integer literal {s}")))?;
                Ok(self.from_bigint(&v))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        assert!(!a.is_zero(), "inverse of zero in Q");
        a.recip()
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }
    fn from_bigint(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }
    fn descriptor(&self) -> CoefficientField {
        CoefficientField::Rationals
    }
    fn signed_parts(&self, a: &BigRational) -> (bool, String) {
        (a.is_negative(), a.abs().to_string())
    }
    fn parse_literal(&self, s: &str) -> Result<BigRational, Error> {
        let bad = || Error::Parse(format!("bad rational literal {s}"));
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.parse().map_err(|_| bad())?;
                let d: BigInt = d.parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                Ok(BigRational::new(n, d))
            }
            None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_check() {
        assert!(PrimeField::new(2).is_ok());
        assert!(PrimeField::new(5).is_ok());
        assert!(PrimeField::new(4).is_err());
        assert!(PrimeField::new(1).is_err());
    }

    #[test]
    fn inverses_mod_p() {
        let f = PrimeField::new(101).unwrap();
        for a in 1..101u32 {
            assert_eq!(f.mul(&a, &f.inv(&a)), 1);
        }
    }

    #[test]
    fn printed_sign_is_symmetric() {
        let f = PrimeField::new(5).unwrap();
        assert_eq!(f.signed_parts(&4), (true, "1".into()));
        assert_eq!(f.signed_parts(&2), (false, "2".into()));
        assert_eq!(f.parse_literal("1/2").unwrap(), 3);
        let two = PrimeField::new(2).unwrap();
        assert_eq!(two.signed_parts(&1), (false, "1".into()));
    }
}
