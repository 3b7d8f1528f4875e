//! Bessel function `J0` of complex argument.

use num_complex::Complex;

use crate::scalar::Real;

/// Number of trapezoid nodes on `[0, π]` that resolves `J0(z)` for `|z| ≤ zmax`.
pub fn trapezoid_nodes(zmax: f64) -> usize {
    zmax.ceil() as usize + 24
}

/// `J0(z) = (1/π) ∫_0^π cos(z sin a) da` by the periodic trapezoid rule,
/// which converges geometrically once `nodes` exceeds `|z|`.
pub fn j0<T: Real>(z: Complex<T>) -> Complex<T> {
    let m = trapezoid_nodes(z.norm().as_f64());
    let table = SineTable::new(m);
    table.j0(z)
}

/// `sin(π l / m)` for `l = 0..=m/2`, shared between evaluations.
pub struct SineTable<T> {
    m: usize,
    sines: Vec<T>,
}

impl<T: Real> SineTable<T> {
    pub fn new(m: usize) -> Self {
        let m = m.max(2);
        let sines = (0..=m / 2)
            .map(|l| (T::PI() * T::from_count(l) / T::from_count(m)).sin())
            .collect();
        Self { m, sines }
    }

    pub fn nodes(&self) -> usize {
        self.m
    }

    pub fn j0(&self, z: Complex<T>) -> Complex<T> {
        let m = self.m;
        let two = T::lit(2.0);
        if z.im == T::zero() {
            let x = z.re;
            let mut s = T::one();
            for l in 1..m.div_ceil(2) {
                s += two * (x * self.sines[l]).cos();
            }
            if m.is_multiple_of(2) {
                s += x.cos();
            }
            return Complex::new(s / T::from_count(m), T::zero());
        }
        let mut s = Complex::new(T::one(), T::zero());
        for l in 1..m.div_ceil(2) {
            s += (z * self.sines[l]).cos() * two;
        }
        if m.is_multiple_of(2) {
            s += z.cos();
        }
        s / T::from_count(m)
    }
}
