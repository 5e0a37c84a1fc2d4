use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::fmt::{Debug, Display};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub};

/// Exact rational numbers, the default coefficient field.
pub type Q = BigRational;

/// Coefficient scalars for linear combinations and partial sums.
///
/// The algebraic core only ever needs ring operations, division by small
/// integers, and the powers n^{-s}; keeping the trait this small lets the
/// same partial-sum code run exactly over `Q` and approximately over `f64`.
pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + PartialOrd
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + MulAssign
{
    fn from_u64(n: u64) -> Self;
    fn from_bigint(n: &BigInt) -> Self;
    /// n^{-s} for n >= 1. Implementations must be deterministic: the float
    /// versions use a fixed multiply loop, never a platform pow.
    fn recip_pow(n: u64, s: u64) -> Self;
    fn to_f64_approx(&self) -> f64;
    fn is_negative(&self) -> bool;
    fn abs(&self) -> Self {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }
}

impl Scalar for Q {
    fn from_u64(n: u64) -> Self {
        Q::from_integer(BigInt::from(n))
    }

    fn from_bigint(n: &BigInt) -> Self {
        Q::from_integer(n.clone())
    }

    fn recip_pow(n: u64, s: u64) -> Self {
        let exp = u32::try_from(s).expect("exponent too large for exact power");
        Q::new(BigInt::one(), BigInt::from(n).pow(exp))
    }

    fn to_f64_approx(&self) -> f64 {
        self.to_f64().expect("rational out of f64 range")
    }

    fn is_negative(&self) -> bool {
        num_traits::Signed::is_negative(self)
    }
}

macro_rules! impl_scalar_float {
    ($t:ty) => {
        impl Scalar for $t {
            fn from_u64(n: u64) -> Self {
                n as $t
            }

            fn from_bigint(n: &BigInt) -> Self {
                n.to_f64().expect("integer out of float range") as $t
            }

            fn recip_pow(n: u64, s: u64) -> Self {
                let mut p: $t = 1.0;
                for _ in 0..s {
                    p *= n as $t;
                }
                1.0 / p
            }

            fn to_f64_approx(&self) -> f64 {
                *self as f64
            }

            fn is_negative(&self) -> bool {
                *self < 0.0
            }
        }
    };
}

impl_scalar_float!(f64);
impl_scalar_float!(f32);

/// Parses "p/q" or "p" (optionally signed) as an exact rational.
pub fn parse_rational(s: &str) -> crate::error::Result<Q> {
    s.trim()
        .parse::<Q>()
        .map_err(|e| crate::error::Error::Parse(format!("bad rational {s:?}: {e}")))
}
