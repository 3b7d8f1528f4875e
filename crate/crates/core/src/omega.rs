//! Indicatrices `ω` controlling the energy damping `e^{-ω(H)}`.

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OmegaIndicatrix<T> {
    /// `ℓ log(1 + p)`.
    LogPower { ell: T },
    /// `p^α` with `0 < α < 1`.
    StretchedPower { alpha: T },
}

impl<T: Real> OmegaIndicatrix<T> {
    pub fn log_power(ell: T) -> Result<Self> {
        if !(ell > T::zero()) {
            return Err(Error::InvalidParameter(format!("log-power exponent must be positive, got {ell}")));
        }
        Ok(Self::LogPower { ell })
    }

    pub fn stretched_power(alpha: T) -> Result<Self> {
        if !(alpha > T::zero() && alpha < T::one()) {
            return Err(Error::InvalidParameter(format!("stretched exponent must lie in (0,1), got {alpha}")));
        }
        Ok(Self::StretchedPower { alpha })
    }

    pub fn eval(&self, p: T) -> Result<T> {
        if p < T::zero() {
            return Err(Error::NegativeArgument(p.as_f64()));
        }
        Ok(match *self {
            Self::LogPower { ell } => ell * p.ln_1p(),
            Self::StretchedPower { alpha } => p.powf(alpha),
        })
    }

    /// `e^{-ω(p)}`.
    pub fn damping(&self, p: T) -> Result<T> {
        Ok((-self.eval(p)?).exp())
    }

    /// Short label used in reports.
    pub fn label(&self) -> String {
        match self {
            Self::LogPower { ell } => format!("log-power(ell={ell})"),
            Self::StretchedPower { alpha } => format!("stretched(alpha={alpha})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        let w = OmegaIndicatrix::log_power(1.0_f64).unwrap();
        assert!((w.eval(1.0).unwrap() - 2.0_f64.ln()).abs() < 1e-15);
        assert!((w.damping(1.0).unwrap() - 0.5).abs() < 1e-15);
        let s = OmegaIndicatrix::stretched_power(0.5_f64).unwrap();
        assert!((s.eval(4.0).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_input() {
        let w = OmegaIndicatrix::log_power(2.0_f64).unwrap();
        assert!(matches!(w.eval(-1.0), Err(Error::NegativeArgument(_))));
        assert!(OmegaIndicatrix::stretched_power(1.0_f64).is_err());
        assert!(OmegaIndicatrix::log_power(0.0_f64).is_err());
    }

    #[test]
    fn monotone_in_strength() {
        for k in 0..50 {
            let p = k as f64 * 0.7;
            let a = OmegaIndicatrix::log_power(2.0).unwrap().eval(p).unwrap();
            let b = OmegaIndicatrix::log_power(3.0).unwrap().eval(p).unwrap();
            assert!(b >= a);
        }
    }
}
