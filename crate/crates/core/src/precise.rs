//! Binary fixed-point arithmetic on big integers.
//!
//! Used where an irrational quantity (a logarithm, Euler's constant) has to be
//! subtracted from an exact rational without losing the small difference to
//! `f64` rounding.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

const FRAC_BITS: u64 = 320;

// 90 decimal digits of Euler's constant.
const EULER_GAMMA_DIGITS: &str =
    "577215664901532860606512090082402431042159335939923598805767234884867726777664670936947063";

/// A real number stored as `raw / 2^320`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Fixed(BigInt);

impl Fixed {
    pub fn zero() -> Self {
        Fixed(BigInt::zero())
    }

    pub fn from_int(v: impl Into<BigInt>) -> Self {
        Fixed(v.into() << FRAC_BITS)
    }

    /// Rounds toward zero.
    pub fn from_ratio(r: &BigRational) -> Self {
        Fixed((r.numer() << FRAC_BITS) / r.denom())
    }

    pub fn div_int(&self, d: impl Into<BigInt>) -> Self {
        Fixed(&self.0 / d.into())
    }

    pub fn abs(&self) -> Self {
        Fixed(self.0.abs())
    }

    pub fn to_f64(&self) -> f64 {
        BigRational::new(self.0.clone(), BigInt::one() << FRAC_BITS)
            .to_f64()
            .unwrap_or(f64::NAN)
    }

    pub fn euler_gamma() -> Self {
        let digits: BigInt = EULER_GAMMA_DIGITS.parse().expect("constant digits");
        let scale = BigInt::from(10u32).pow(EULER_GAMMA_DIGITS.len() as u32);
        Fixed((digits << FRAC_BITS) / scale)
    }

    /// `ln 2 = 2 atanh(1/3)`.
    pub fn ln2() -> Self {
        atanh_ratio(1u32.into(), 3u32.into()).mul_int(2)
    }

    /// Natural logarithm of a positive integer.
    pub fn ln_u64(n: u64) -> Self {
        assert!(n > 0, "logarithm of zero");
        // n = 2^k * y with 1 <= y < 2, ln y = 2 atanh((y - 1)/(y + 1))
        let k = 63 - u64::from(n.leading_zeros());
        let pow = BigInt::one() << k;
        let n = BigInt::from(n);
        let ln_y = atanh_ratio(&n - &pow, &n + &pow).mul_int(2);
        Self::ln2().mul_int(k) + ln_y
    }

    fn mul_int(&self, m: impl Into<BigInt>) -> Self {
        Fixed(&self.0 * m.into())
    }
}

// atanh(p/q) for 0 <= p/q <= 1/3 by its Taylor series.
fn atanh_ratio(p: BigInt, q: BigInt) -> Fixed {
    let z = Fixed((&p << FRAC_BITS) / &q);
    let z2 = &z * &z;
    let mut power = z;
    let mut sum = Fixed::zero();
    let mut denom = 1u64;
    while !power.0.is_zero() {
        sum = sum + power.div_int(denom);
        power = &power * &z2;
        denom += 2;
    }
    sum
}

impl Add for Fixed {
    type Output = Fixed;
    fn add(self, rhs: Fixed) -> Fixed {
        Fixed(self.0 + rhs.0)
    }
}

impl Sub for Fixed {
    type Output = Fixed;
    fn sub(self, rhs: Fixed) -> Fixed {
        Fixed(self.0 - rhs.0)
    }
}

impl Neg for Fixed {
    type Output = Fixed;
    fn neg(self) -> Fixed {
        Fixed(-self.0)
    }
}

impl Mul for &Fixed {
    type Output = Fixed;
    fn mul(self, rhs: &Fixed) -> Fixed {
        Fixed((&self.0 * &rhs.0) >> FRAC_BITS)
    }
}
