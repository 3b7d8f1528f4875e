//! Scalar abstraction shared by the generic numerical modules.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real floating-point scalar accepted by the generic modules (`f32`, `f64`).
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    /// Converts a count.
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + ToPrimitive
        + NumAssign
        + Debug
        + Display
        + Default
        + Send
        + Sync
        + 'static
{
}

/// `i * x`.
pub fn i_times<T: Real>(x: T) -> Complex<T> {
    Complex::new(T::zero(), x)
}

/// Numerically stable complex `tanh`, finite for arbitrarily large real parts.
pub fn tanh_stable<T: Real>(z: Complex<T>) -> Complex<T> {
    let one = Complex::new(T::one(), T::zero());
    if z.re >= T::zero() {
        let e = (-z - z).exp();
        (one - e) / (one + e)
    } else {
        let e = (z + z).exp();
        (e - one) / (e + one)
    }
}

/// `sinh(z) * exp(-shift)` without forming `sinh(z)` first.
pub fn sinh_scaled<T: Real>(z: Complex<T>, shift: T) -> Complex<T> {
    let s = Complex::new(shift, T::zero());
    ((z - s).exp() - (-z - s).exp()) / T::lit(2.0)
}

/// Complex number stored as `ln|z|` and a phase, for products that would
/// overflow when formed directly.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogComplex<T> {
    pub ln_abs: T,
    pub phase: T,
}

impl<T: Real> LogComplex<T> {
    pub fn one() -> Self {
        Self { ln_abs: T::zero(), phase: T::zero() }
    }

    pub fn zero() -> Self {
        Self { ln_abs: T::neg_infinity(), phase: T::zero() }
    }

    pub fn from_complex(z: Complex<T>) -> Self {
        let r = z.norm();
        if r == T::zero() {
            Self::zero()
        } else {
            Self { ln_abs: r.ln(), phase: z.arg() }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.ln_abs == T::neg_infinity()
    }

    pub fn mul(self, other: Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        Self { ln_abs: self.ln_abs + other.ln_abs, phase: self.phase + other.phase }
    }

    pub fn mul_complex(self, z: Complex<T>) -> Self {
        self.mul(Self::from_complex(z))
    }

    /// Multiplies by `exp(x)` for real `x`.
    pub fn mul_exp(self, x: T) -> Self {
        if self.is_zero() {
            return self;
        }
        Self { ln_abs: self.ln_abs + x, phase: self.phase }
    }

    pub fn to_complex(self) -> Complex<T> {
        if self.is_zero() {
            return Complex::new(T::zero(), T::zero());
        }
        Complex::from_polar(self.ln_abs.exp(), self.phase)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tanh_matches_library_in_moderate_range() {
        for &(a, b) in &[(0.3, 0.2), (-1.7, 2.9), (4.0, -0.5), (0.0, 1.0)] {
            let z = Complex::new(a, b);
            assert!((tanh_stable(z) - z.tanh()).norm() < 1e-14);
        }
    }

    #[test]
    fn tanh_is_finite_far_out() {
        let t = tanh_stable(Complex::new(900.0_f64, 0.4));
        assert!((t - Complex::new(1.0, 0.0)).norm() < 1e-15);
        let t = tanh_stable(Complex::new(-900.0_f64, 0.4));
        assert!((t + Complex::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn log_complex_round_trip() {
        let a = Complex::new(1.5_f64, -0.25);
        let b = Complex::new(-0.3, 2.0);
        let p = LogComplex::from_complex(a).mul_complex(b).to_complex();
        assert!((p - a * b).norm() < 1e-14);
        assert_eq!(LogComplex::<f64>::zero().mul_complex(a).to_complex(), Complex::new(0.0, 0.0));
    }

    #[test]
    fn works_in_single_precision() {
        let t = tanh_stable(Complex::new(0.5_f32, 0.1));
        assert!((t - Complex::new(0.5_f32, 0.1).tanh()).norm() < 1e-6);
    }
}
