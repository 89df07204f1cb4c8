use std::fmt::Debug;

use num_traits::{Float, FromPrimitive, Num, ToPrimitive};

/// Coordinate type for feature vectors and learner sums.
///
/// Only field operations and ordering are needed, so `f32`, `f64` and
/// exact rationals all qualify.
pub trait Scalar:
    Num + Copy + PartialOrd + FromPrimitive + ToPrimitive + Debug + Send + Sync + 'static
{
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    fn is_finite_value(&self) -> bool {
        self.to_f64().is_some_and(f64::is_finite)
    }
}

impl<T> Scalar for T where
    T: Num + Copy + PartialOrd + FromPrimitive + ToPrimitive + Debug + Send + Sync + 'static
{
}

/// Real type for the analytical cost model and least-squares fits.
pub trait Real: Float + FromPrimitive + Debug + Send + Sync + 'static {
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable")
    }
}

impl<T> Real for T where T: Float + FromPrimitive + Debug + Send + Sync + 'static {}

#[inline]
pub(crate) fn squared_distance<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| {
        let diff = x - y;
        acc + diff * diff
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    #[test]
    fn rationals_are_scalars() {
        let a = [Rational::new(1, 2), Rational::new(3, 1)];
        let b = [Rational::new(0, 1), Rational::new(1, 1)];
        assert_eq!(squared_distance(&a, &b), Rational::new(17, 4));
        assert!(Rational::new(1, 3).is_finite_value());
        assert_eq!(Rational::from_count(7), Rational::new(7, 1));
    }

    #[test]
    fn nan_is_not_finite() {
        assert!(!f64::NAN.is_finite_value());
        assert!(!f32::INFINITY.is_finite_value());
        assert!(1.5f32.is_finite_value());
    }
}
