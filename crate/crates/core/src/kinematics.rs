//! On-shell momenta of complex rapidities.
//!
//! Momenta are stored by light-cone components `p± = μ e^{±θ}` so that the
//! mass-shell relation `p+ p- = μ²` holds to rounding for any real part.

use num_complex::Complex;

use crate::geometry::Point2D;
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
pub enum MetricSign {
    /// `p·x = p0 t - p1 x`.
    #[default]
    Standard,
    /// `p·x = p0 t + p1 x`.
    Flipped,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Momentum<T> {
    pub plus: Complex<T>,
    pub minus: Complex<T>,
}

impl<T: Real> Momentum<T> {
    pub fn zero() -> Self {
        let z = Complex::new(T::zero(), T::zero());
        Self { plus: z, minus: z }
    }

    pub fn energy(&self) -> Complex<T> {
        (self.plus + self.minus) / T::lit(2.0)
    }

    pub fn spatial(&self) -> Complex<T> {
        (self.plus - self.minus) / T::lit(2.0)
    }

    /// `p0² - p1²`.
    pub fn invariant_mass_sq(&self) -> Complex<T> {
        self.plus * self.minus
    }

    /// `p0² + p1²`.
    pub fn euclidean_sq(&self) -> Complex<T> {
        (self.plus * self.plus + self.minus * self.minus) / T::lit(2.0)
    }

    pub fn dot(&self, x: Point2D<T>, metric: MetricSign) -> Complex<T> {
        let s = match metric {
            MetricSign::Standard => -T::one(),
            MetricSign::Flipped => T::one(),
        };
        self.energy() * x.t + self.spatial() * (s * x.x)
    }

    pub fn neg(self) -> Self {
        Self { plus: -self.plus, minus: -self.minus }
    }

    pub fn add(self, o: Self) -> Self {
        Self { plus: self.plus + o.plus, minus: self.minus + o.minus }
    }
}

/// `p(θ) = μ (cosh θ, sinh θ)`.
pub fn momentum<T: Real>(theta: Complex<T>, mass: T) -> Momentum<T> {
    Momentum { plus: theta.exp() * mass, minus: (-theta).exp() * mass }
}

pub fn momentum_real<T: Real>(theta: T, mass: T) -> Momentum<T> {
    momentum(Complex::new(theta, T::zero()), mass)
}

pub fn total_momentum<T: Real>(zeta: &[Complex<T>], mass: T) -> Momentum<T> {
    zeta.iter().fold(Momentum::zero(), |acc, &z| acc.add(momentum(z, mass)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn mass_shell(re in -20.0..20.0_f64, im in -3.2..3.2_f64, mu in 0.1..5.0_f64) {
            let p = momentum(Complex::new(re, im), mu);
            let m2 = p.invariant_mass_sq();
            prop_assert!((m2 - Complex::new(mu * mu, 0.0)).norm() <= 1e-13 * mu * mu);
        }

        #[test]
        fn shift_by_i_pi_negates(re in -10.0..10.0_f64, im in -1.0..1.0_f64) {
            let z = Complex::new(re, im);
            let p = momentum(z, 1.0);
            let q = momentum(z + Complex::new(0.0, std::f64::consts::PI), 1.0);
            let scale = p.plus.norm() + p.minus.norm();
            prop_assert!((q.plus + p.plus).norm() <= 1e-12 * scale);
            prop_assert!((q.minus + p.minus).norm() <= 1e-12 * scale);
        }

        #[test]
        fn total_momentum_is_additive(a in -5.0..5.0_f64, b in -5.0..5.0_f64) {
            let za = Complex::new(a, 0.2);
            let zb = Complex::new(b, -0.7);
            let t = total_momentum(&[za, zb], 1.3);
            let s = momentum(za, 1.3).add(momentum(zb, 1.3));
            prop_assert!((t.energy() - s.energy()).norm() < 1e-12 * (1.0 + s.energy().norm()));
        }
    }

    #[test]
    fn real_rapidity_components() {
        let p = momentum_real(0.7_f64, 2.0);
        assert!((p.energy().re - 2.0 * 0.7_f64.cosh()).abs() < 1e-14);
        assert!((p.spatial().re - 2.0 * 0.7_f64.sinh()).abs() < 1e-14);
        let x = Point2D::new(0.5, 0.25);
        let d = p.dot(x, MetricSign::Standard);
        assert!((d.re - (p.energy().re * 0.5 - p.spatial().re * 0.25)).abs() < 1e-14);
    }

    #[test]
    fn single_precision_mass_shell() {
        let p = momentum(Complex::new(3.0_f32, 0.4), 1.0);
        assert!((p.invariant_mass_sq().re - 1.0).abs() < 1e-5);
    }
}
