use num_complex::Complex;

use crate::scalar::Real;

/// Two-particle scattering function.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ScatteringFunction {
    /// `S ≡ -1`.
    #[default]
    IsingMinusOne,
}

impl ScatteringFunction {
    pub fn eval<T: Real>(&self, _theta: Complex<T>) -> Complex<T> {
        match self {
            Self::IsingMinusOne => Complex::new(-T::one(), T::zero()),
        }
    }

    /// Value of `S` as a real sign.
    pub fn sign<T: Real>(&self) -> T {
        match self {
            Self::IsingMinusOne => -T::one(),
        }
    }
}
