//! Compactly supported test functions and their Fourier–Laplace transforms.
//!
//! For a radial bump `g(x) = A φ(|x - c|/ρ)` the transform reduces to
//! `g̃(p) = A e^{i s p·c} 2πρ² ∫_0^1 u φ(u) J0(ρ u κ) du` with `κ² = p0² + p1²`,
//! which is entire in `κ²` and so valid for complex momenta.

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::RwLock;

use num_complex::Complex;

use crate::bessel::{trapezoid_nodes, SineTable};
use crate::error::{Error, Result};
use crate::geometry::Point2D;
use crate::kinematics::{momentum, MetricSign, Momentum};
use crate::omega::OmegaIndicatrix;
use crate::quadrature::gauss_legendre;
use crate::scalar::Real;

/// Above `ρ|κ|` of this size the transform is returned as zero: on real
/// momenta it is already below `e^{-√(2ρ|κ|)} < 1e-24` of its peak, and far
/// off the real axis it exceeds the floating-point range anyway.
pub const MAX_RADIAL_FREQUENCY: f64 = 1500.0;

/// Below this `|Im κ|·ρ` the Bessel factor is expanded to first order around
/// the real axis; the neglected term is below `1e-16`.
const NEAR_REAL_IMAG: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
pub enum BumpProfile {
    /// `φ(u) = exp(-1/(1-u²))` on `u < 1`.
    #[default]
    Standard,
}

impl BumpProfile {
    pub fn eval<T: Real>(&self, u: T) -> T {
        if u >= T::one() {
            return T::zero();
        }
        (-T::one() / (T::one() - u * u)).exp()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
pub enum FourierSign {
    /// `g̃(p) = ∫ g(x) e^{+i p·x} d²x`.
    #[default]
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
pub struct FourierConvention {
    pub metric: MetricSign,
    pub sign: FourierSign,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Frequency {
    Positive,
    Negative,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BumpFunction<T> {
    pub center: Point2D<T>,
    pub radius: T,
    pub amplitude: T,
    pub profile: BumpProfile,
}

impl<T: Real> BumpFunction<T> {
    pub fn new(center: Point2D<T>, radius: T, amplitude: T) -> Result<Self> {
        if !(radius > T::zero()) {
            return Err(Error::InvalidParameter(format!("bump radius must be positive, got {radius}")));
        }
        Ok(Self { center, radius, amplitude, profile: BumpProfile::Standard })
    }

    pub fn eval(&self, x: Point2D<T>) -> T {
        let dt = x.t - self.center.t;
        let dx = x.x - self.center.x;
        let u = (dt * dt + dx * dx).sqrt() / self.radius;
        self.amplitude * self.profile.eval(u)
    }

    /// `x ↦ g(-x)`.
    pub fn reflected(&self) -> Self {
        Self { center: self.center.reflected(), ..*self }
    }

    pub fn translated(&self, by: Point2D<T>) -> Self {
        Self { center: self.center.translated(by), ..*self }
    }

    /// Radial Gauss–Legendre order that resolves `J0(ρ u κ)` on `[0, 1]`.
    pub fn radial_order(&self, kappa_abs: T) -> usize {
        let z = (self.radius * kappa_abs).as_f64();
        let n = 64 + 2 * z.ceil() as usize;
        n.div_ceil(16) * 16
    }

    pub fn fourier_transform(&self, p: &Momentum<T>, conv: FourierConvention) -> Complex<T> {
        let kappa = p.euclidean_sq().sqrt();
        let order = self.radial_order(kappa.norm());
        self.fourier_transform_with_order(p, conv, order)
    }

    /// Transform together with a flag telling whether doubling the radial
    /// order changes the value by less than `1e-10` relative.
    pub fn fourier_transform_checked(&self, p: &Momentum<T>, conv: FourierConvention) -> (Complex<T>, bool) {
        let kappa = p.euclidean_sq().sqrt();
        let order = self.radial_order(kappa.norm());
        let a = self.fourier_transform_with_order(p, conv, order);
        let b = self.fourier_transform_with_order(p, conv, 2 * order);
        let scale = a.norm().max(b.norm()).max(T::min_positive_value());
        let ok = (a - b).norm() <= T::lit(1e-10) * scale;
        if !ok {
            log::warn!("radial quadrature order {order} unconverged at |κ| = {}", kappa.norm());
        }
        (a, ok)
    }

    pub fn fourier_transform_with_order(&self, p: &Momentum<T>, conv: FourierConvention, order: usize) -> Complex<T> {
        let kappa = p.euclidean_sq().sqrt();
        let rho = self.radius;
        if (rho * kappa.norm()).as_f64() > MAX_RADIAL_FREQUENCY {
            return Complex::new(T::zero(), T::zero());
        }
        let rule = gauss_legendre::<T>(order);
        let near_real = (kappa.im * rho).abs().as_f64() <= NEAR_REAL_IMAG;
        let table = (!near_real).then(|| SineTable::<T>::new(trapezoid_nodes((rho * kappa.norm()).as_f64())));
        let half = T::lit(0.5);
        let mut acc = Complex::new(T::zero(), T::zero());
        for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
            let u = half * (x + T::one());
            let weight = w * half * u * self.profile.eval(u);
            if weight == T::zero() {
                continue;
            }
            acc += match &table {
                Some(t) => t.j0(kappa * (rho * u)) * weight,
                None => {
                    let x = (kappa.re * rho * u).as_f64();
                    let y = (kappa.im * rho * u).as_f64();
                    Complex::new(T::lit(libm::j0(x)), T::lit(-y * libm::j1(x))) * weight
                }
            };
        }
        let s = match conv.sign {
            FourierSign::Plus => T::one(),
            FourierSign::Minus => -T::one(),
        };
        let phase = (p.dot(self.center, conv.metric) * Complex::new(T::zero(), s)).exp();
        phase * acc * (T::TAU() * rho * rho * self.amplitude)
    }
}

/// Entries kept before the memo freezes itself.
pub const MEMO_CAPACITY: usize = 1 << 16;

/// Memoised transform of one bump under one convention.
///
/// Keys are the exact bit patterns of the momentum components, so repeated
/// evaluation at the same rapidities hits the memo.
pub struct FourierCache<T> {
    bump: BumpFunction<T>,
    convention: FourierConvention,
    memo: RwLock<HashMap<[u64; 4], Complex<T>>>,
    memoize: bool,
    frozen: AtomicBool,
}

impl<T: Real> Clone for FourierCache<T> {
    fn clone(&self) -> Self {
        Self {
            bump: self.bump,
            convention: self.convention,
            memo: RwLock::new(self.memo.read().expect("fourier memo poisoned").clone()),
            memoize: self.memoize,
            frozen: AtomicBool::new(self.frozen.load(Ordering::Relaxed)),
        }
    }
}

impl<T: Real> std::fmt::Debug for FourierCache<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FourierCache")
            .field("bump", &self.bump)
            .field("convention", &self.convention)
            .field("entries", &self.len())
            .finish()
    }
}

impl<T: Real> FourierCache<T> {
    pub fn new(bump: BumpFunction<T>, convention: FourierConvention) -> Self {
        Self { bump, convention, memo: RwLock::new(HashMap::new()), memoize: true, frozen: AtomicBool::new(false) }
    }

    pub fn without_memo(bump: BumpFunction<T>, convention: FourierConvention) -> Self {
        Self { memoize: false, ..Self::new(bump, convention) }
    }

    pub fn bump(&self) -> &BumpFunction<T> {
        &self.bump
    }

    pub fn convention(&self) -> FourierConvention {
        self.convention
    }

    /// Stops inserting new entries; lookups continue to hit.
    pub fn freeze(&self) {
        self.frozen.store(true, Ordering::Relaxed);
    }

    pub fn len(&self) -> usize {
        self.memo.read().expect("fourier memo poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, p: &Momentum<T>) -> Complex<T> {
        if !self.memoize {
            return self.bump.fourier_transform(p, self.convention);
        }
        let key = [p.plus.re, p.plus.im, p.minus.re, p.minus.im].map(|v| v.as_f64().to_bits());
        if let Some(v) = self.memo.read().expect("fourier memo poisoned").get(&key) {
            return *v;
        }
        let v = self.bump.fourier_transform(p, self.convention);
        if !self.frozen.load(Ordering::Relaxed) {
            let mut memo = self.memo.write().expect("fourier memo poisoned");
            if memo.len() < MEMO_CAPACITY {
                memo.insert(key, v);
            } else {
                self.frozen.store(true, Ordering::Relaxed);
            }
        }
        v
    }

    /// `f^±(θ) = g̃(±p(θ)) / 2π`.
    pub fn frequency_part(&self, theta: Complex<T>, which: Frequency, mass: T) -> Complex<T> {
        let p = momentum(theta, mass);
        let p = match which {
            Frequency::Positive => p,
            Frequency::Negative => p.neg(),
        };
        self.get(&p) / T::TAU()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct DomegaReport {
    pub sup: f64,
    pub l2: f64,
    pub boundary: f64,
    pub decaying_at_boundary: bool,
    pub verdict: Verdict,
}

/// Scans `θ ↦ e^{ω(cosh θ)} |f^±(θ)|` on `[-Θ, Θ]` with unit mass.
pub fn domega_membership<T: Real>(
    cache: &FourierCache<T>,
    omega: &OmegaIndicatrix<T>,
    theta_max: T,
    samples: usize,
) -> Result<DomegaReport> {
    if samples < 8 || !(theta_max > T::zero()) {
        return Err(Error::InvalidParameter("scan needs at least 8 samples and a positive range".into()));
    }
    let h = T::lit(2.0) * theta_max / T::from_count(samples - 1);
    let mut values = Vec::with_capacity(samples);
    for k in 0..samples {
        let theta = -theta_max + h * T::from_count(k);
        let th = Complex::new(theta, T::zero());
        let f = cache
            .frequency_part(th, Frequency::Positive, T::one())
            .norm()
            .max(cache.frequency_part(th, Frequency::Negative, T::one()).norm());
        let w = omega.eval(theta.cosh())?.exp() * f;
        values.push(w.as_f64());
    }
    let finite = values.iter().all(|v| v.is_finite());
    let sup = values.iter().cloned().fold(0.0, f64::max);
    let l2 = (values.iter().map(|v| v * v).sum::<f64>() * h.as_f64()).sqrt();
    let n = values.len();
    let boundary = values[0].max(values[n - 1]);
    // The transform oscillates, so decay is judged on the envelope: the
    // outermost sixth of each half-range must stay below the sixth before it.
    let win = (n / 12).max(2);
    let peak = |r: std::ops::Range<usize>| values[r].iter().cloned().fold(0.0, f64::max);
    let right_decays = peak(n - win..n) < peak(n - 2 * win..n - win);
    let left_decays = peak(0..win) < peak(win..2 * win);
    let decaying = right_decays && left_decays;
    let verdict = if !finite || !l2.is_finite() {
        Verdict::Fail
    } else if decaying {
        Verdict::Pass
    } else {
        Verdict::Inconclusive
    };
    Ok(DomegaReport { sup, l2, boundary, decaying_at_boundary: decaying, verdict })
}
