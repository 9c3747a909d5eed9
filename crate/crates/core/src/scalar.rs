//! Scalar traits the exact algorithms are generic over.
//!
//! Everything in this crate is exact: [`Field`] is only implemented for
//! rational types, never for floats, because supports and signs of
//! intermediate vectors decide which normal surfaces are kept.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

/// An exact ordered field.
pub trait Field:
    Clone + Debug + Display + PartialEq + PartialOrd + Num + Signed + FromPrimitive + Send + Sync + 'static
{
    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("i64 embeds in every supported field")
    }

    fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_int(n) / Self::from_int(d)
    }

    /// Lossless conversion to the arbitrary-precision rationals.
    fn to_big(&self) -> BigRational;

    /// Conversion from the arbitrary-precision rationals, `None` on overflow.
    fn from_big(r: &BigRational) -> Option<Self>;
}

impl Field for BigRational {
    fn to_big(&self) -> BigRational {
        self.clone()
    }

    fn from_big(r: &BigRational) -> Option<Self> {
        Some(r.clone())
    }
}

macro_rules! machine_ratio_field {
    ($int:ty, $to:ident) => {
        impl Field for Ratio<$int> {
            fn to_big(&self) -> BigRational {
                BigRational::new(BigInt::from(*self.numer()), BigInt::from(*self.denom()))
            }

            fn from_big(r: &BigRational) -> Option<Self> {
                Some(Ratio::new(r.numer().$to()?, r.denom().$to()?))
            }
        }
    };
}

machine_ratio_field!(i64, to_i64);
machine_ratio_field!(i128, to_i128);

/// Integer type used for ray coordinates in the double description method.
///
/// Machine integers report overflow through the checked operations, at
/// which point callers retry with [`BigInt`].
pub trait RayInt:
    Clone
    + Debug
    + Eq
    + Ord
    + Hash
    + Integer
    + Signed
    + CheckedAdd
    + CheckedSub
    + CheckedMul
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
    fn to_bigint(&self) -> BigInt;
    fn from_big(x: &BigInt) -> Option<Self>;
}

impl RayInt for i64 {
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }

    fn from_big(x: &BigInt) -> Option<Self> {
        x.to_i64()
    }
}

impl RayInt for i128 {
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }

    fn from_big(x: &BigInt) -> Option<Self> {
        x.to_i128()
    }
}

impl RayInt for BigInt {
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }

    fn from_big(x: &BigInt) -> Option<Self> {
        Some(x.clone())
    }
}

/// Formats a rational as `"p/q"`, always with an explicit denominator.
pub fn format_rational<T: Field>(x: &T) -> String {
    let r = x.to_big();
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `"p/q"`, `"p"` or a decimal-free integer string.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new(num, den))
}

/// Least common multiple of the denominators of `xs`.
pub fn denominator_lcm(xs: &[BigRational]) -> BigInt {
    xs.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Scales a rational vector to the primitive integer vector on the same ray.
pub fn primitive_integer_vector(xs: &[BigRational]) -> Vec<BigInt> {
    let l = denominator_lcm(xs);
    let ints: Vec<BigInt> = xs.iter().map(|x| (x * BigRational::from(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}
