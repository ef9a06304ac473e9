//! Scalar abstraction shared by the geometry, operator and solver code.
//!
//! Everything in this crate is written once against [`Scalar`] and
//! instantiated for `f64` (the working type), `f32`, and [`BigRational`]
//! (exact arithmetic, used to check rounding-free identities).

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

/// Ordered field element usable by the solvers.
pub trait Scalar: Clone + Debug + PartialOrd + Num + Signed + Send + Sync + 'static {
    fn from_i64(v: i64) -> Self;

    /// Lossy for rationals only when `v` is not finite.
    fn from_f64(v: f64) -> Self;

    fn to_f64(&self) -> f64;

    /// `false` once a computation has overflowed to inf/NaN.
    fn is_finite_value(&self) -> bool {
        true
    }

    /// Smallest magnitude used to perturb zero pivots.
    fn tiny() -> Self;

    fn ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    fn from_usize(v: usize) -> Self {
        Self::from_i64(v as i64)
    }

    /// `base^exp` by repeated squaring, exact for integer bases in any
    /// representation that can hold the result.
    fn powu(base: i64, exp: u32) -> Self {
        let mut acc = Self::one();
        let mut sq = Self::from_i64(base);
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * sq.clone();
            }
            e >>= 1;
            if e > 0 {
                sq = sq.clone() * sq;
            }
        }
        acc
    }

    fn half() -> Self {
        Self::ratio(1, 2)
    }

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }

    fn min_of(a: Self, b: Self) -> Self {
        if b < a {
            b
        } else {
            a
        }
    }
}

macro_rules! impl_float_scalar {
    ($f:ty) => {
        impl Scalar for $f {
            fn from_i64(v: i64) -> Self {
                v as $f
            }
            fn from_f64(v: f64) -> Self {
                v as $f
            }
            fn to_f64(&self) -> f64 {
                *self as f64
            }
            fn is_finite_value(&self) -> bool {
                self.is_finite()
            }
            fn tiny() -> Self {
                <$f>::MIN_POSITIVE
            }
        }
    };
}

impl_float_scalar!(f32);
impl_float_scalar!(f64);

impl Scalar for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_f64(v: f64) -> Self {
        BigRational::from_float(v).unwrap_or_else(Self::zero)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn tiny() -> Self {
        BigRational::new(BigInt::one(), BigInt::one() << 200u32)
    }
}

/// Max-norm of a vector.
pub fn max_norm<T: Scalar>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |acc, x| T::max_of(acc, x.abs()))
}

/// Max-norm of `a - b`.
pub fn max_norm_diff<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (x, y)| {
        T::max_of(acc, (x.clone() - y.clone()).abs())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn powers_are_exact() {
        assert_eq!(<f64 as Scalar>::powu(64, 3), 262_144.0);
        assert_eq!(<f64 as Scalar>::powu(64, 8), 281_474_976_710_656.0);
        assert_eq!(<BigRational as Scalar>::powu(8, 0), BigRational::one());
        assert_eq!(
            <BigRational as Scalar>::powu(64, 12),
            <BigRational as Scalar>::from_i64(1 << 62) * <BigRational as Scalar>::from_i64(1 << 10)
        );
    }

    #[test]
    fn rational_round_trip() {
        let q = <BigRational as Scalar>::ratio(3, 64);
        assert_eq!(Scalar::to_f64(&q), 3.0 / 64.0);
        assert_eq!(<BigRational as Scalar>::from_f64(0.046875), q);
    }

    #[test]
    fn norms() {
        let a = [1.0, -3.0, 2.0];
        let b = [1.0, 1.0, 2.5];
        assert_eq!(max_norm(&a), 3.0);
        assert_eq!(max_norm_diff(&a, &b), 4.0);
        assert!(!f64::NAN.is_finite_value());
    }
}
