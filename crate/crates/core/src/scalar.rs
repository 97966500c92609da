//! Exact scalar fields. Everything generic in the crate is written against [`Scalar`];
//! `BigRational` is the default instantiation and [`Fp`] serves modular rank bounds.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Zero};

/// An exact field.
pub trait Scalar: Num + Neg<Output = Self> + Clone + fmt::Debug + Send + Sync + 'static {
    fn from_i64(v: i64) -> Self;
}

impl Scalar for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
}

/// Prime modulus for [`Fp`]: 2^31 - 1.
pub const MODULUS: u64 = 2_147_483_647;

/// Element of the prime field of order [`MODULUS`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fp(u64);

impl Fp {
    pub const fn new(v: u64) -> Self {
        Fp(v % MODULUS)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    pub fn from_bigint(v: &BigInt) -> Self {
        let m = BigInt::from(MODULUS);
        let r = ((v % &m) + &m) % &m;
        Fp(r.try_into().expect("residue fits in u64"))
    }

    /// Reduces a rational; panics if the denominator vanishes mod p.
    pub fn from_rational(v: &BigRational) -> Self {
        Self::from_bigint(v.numer()) / Self::from_bigint(v.denom())
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Fp(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    pub fn inv(self) -> Self {
        assert!(self.0 != 0, "inverse of zero in Fp");
        self.pow(MODULUS - 2)
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Add for Fp {
    type Output = Fp;
    #[inline]
    fn add(self, o: Fp) -> Fp {
        let s = self.0 + o.0;
        Fp(if s >= MODULUS { s - MODULUS } else { s })
    }
}

impl Sub for Fp {
    type Output = Fp;
    #[inline]
    fn sub(self, o: Fp) -> Fp {
        Fp(if self.0 >= o.0 {
            self.0 - o.0
        } else {
            self.0 + MODULUS - o.0
        })
    }
}

impl Mul for Fp {
    type Output = Fp;
    #[inline]
    fn mul(self, o: Fp) -> Fp {
        Fp(self.0 * o.0 % MODULUS)
    }
}

impl Div for Fp {
    type Output = Fp;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Fp) -> Fp {
        self * o.inv()
    }
}

impl Rem for Fp {
    type Output = Fp;
    fn rem(self, _o: Fp) -> Fp {
        Fp(0)
    }
}

impl Neg for Fp {
    type Output = Fp;
    #[inline]
    fn neg(self) -> Fp {
        Fp(if self.0 == 0 { 0 } else { MODULUS - self.0 })
    }
}

impl Zero for Fp {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl One for Fp {
    fn one() -> Self {
        Fp(1)
    }
}

impl Num for Fp {
    type FromStrRadixErr = std::num::ParseIntError;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        u64::from_str_radix(s, radix).map(Fp::new)
    }
}

impl Scalar for Fp {
    fn from_i64(v: i64) -> Self {
        let m = MODULUS as i64;
        Fp(((v % m + m) % m) as u64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_laws_spot() {
        let a = Fp::from_i64(-5);
        assert_eq!(a + Fp::from_i64(5), Fp::zero());
        assert_eq!(a * a.inv(), Fp::one());
        assert_eq!(Fp::from_i64(7) / Fp::from_i64(7), Fp::one());
        let q = BigRational::new(BigInt::from(3), BigInt::from(4));
        assert_eq!(Fp::from_rational(&q) * Fp::from_i64(4), Fp::from_i64(3));
    }
}
