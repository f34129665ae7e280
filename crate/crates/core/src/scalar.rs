//! Scalar abstraction shared by the exact and floating linear algebra.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// A field usable by the echelon and kernel code.
///
/// Exact fields report zero exactly; floating ones use an absolute cutoff.
pub trait Field:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    const EXACT: bool;

    fn from_i128(v: i128) -> Self;

    fn from_ratio(num: i128, den: i128) -> Self {
        Self::from_i128(num) / Self::from_i128(den)
    }

    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn as_f64(&self) -> f64;
}

impl Field for f64 {
    const EXACT: bool = false;

    fn from_i128(v: i128) -> Self {
        v as f64
    }

    fn is_negligible(&self) -> bool {
        self.abs() < 1e-10
    }

    fn as_f64(&self) -> f64 {
        *self
    }
}

impl Field for f32 {
    const EXACT: bool = false;

    fn from_i128(v: i128) -> Self {
        v as f32
    }

    fn is_negligible(&self) -> bool {
        self.abs() < 1e-5
    }

    fn as_f64(&self) -> f64 {
        *self as f64
    }
}

impl Field for BigRational {
    const EXACT: bool = true;

    fn from_i128(v: i128) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn as_f64(&self) -> f64 {
        let n = self.numer().to_f64().unwrap_or(f64::NAN);
        let d = self.denom().to_f64().unwrap_or(f64::NAN);
        if n.is_finite() && d.is_finite() {
            n / d
        } else {
            // very large parts: scale down by the common bit length
            let shift = self.denom().bits().max(self.numer().bits()).saturating_sub(900);
            let n = (self.numer() >> shift).to_f64().unwrap_or(0.0);
            let d = (self.denom() >> shift).to_f64().unwrap_or(1.0);
            n / d
        }
    }
}

/// Residues modulo the Mersenne prime 2^61 - 1.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp(u64);

impl Fp {
    pub const MODULUS: u64 = (1u64 << 61) - 1;

    pub fn new(v: u64) -> Self {
        Fp(v % Self::MODULUS)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    fn reduce(x: u128) -> u64 {
        let p = Self::MODULUS as u128;
        let folded = (x & p) + (x >> 61);
        let folded = (folded & p) + (folded >> 61);
        let r = folded as u64;
        if r >= Self::MODULUS {
            r - Self::MODULUS
        } else {
            r
        }
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

    pub fn inverse(self) -> Self {
        assert!(self.0 != 0, "inverse of zero in Fp");
        self.pow(Self::MODULUS - 2)
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, o: Fp) -> Fp {
        let s = self.0 + o.0;
        Fp(if s >= Self::MODULUS { s - Self::MODULUS } else { s })
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, o: Fp) -> Fp {
        Fp(if self.0 >= o.0 { self.0 - o.0 } else { self.0 + Self::MODULUS - o.0 })
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, o: Fp) -> Fp {
        Fp(Self::reduce(self.0 as u128 * o.0 as u128))
    }
}

impl Div for Fp {
    type Output = Fp;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Fp) -> Fp {
        self * o.inverse()
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        if self.0 == 0 {
            self
        } else {
            Fp(Self::MODULUS - self.0)
        }
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

impl Field for Fp {
    const EXACT: bool = true;

    fn from_i128(v: i128) -> Self {
        let m = Self::MODULUS as i128;
        Fp(v.rem_euclid(m) as u64)
    }

    fn as_f64(&self) -> f64 {
        self.0 as f64
    }
}
