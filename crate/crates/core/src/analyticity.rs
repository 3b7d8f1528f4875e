//! Numerical checks of the analytic properties of form factors: residues and
//! the recursion relation, `S`-symmetry, `S`-periodicity and growth bounds.

use num_complex::Complex;
use rand::{Rng, RngExt};

use crate::error::{Error, Result};
use crate::formfactors::FormFactorFamily;
use crate::scalar::LogComplex;
use crate::scattering::ScatteringFunction;
use crate::testfunctions::FourierCache;
use crate::kinematics::Momentum;

type C = Complex<f64>;
type Family = FormFactorFamily<f64>;

const I_PI: C = C::new(0.0, std::f64::consts::PI);

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct ResidueEstimate {
    pub value: [f64; 2],
    /// `radius · max |F|` along the contour, cancellation-free.
    pub scale: f64,
}

impl ResidueEstimate {
    pub fn complex(&self) -> C {
        C::new(self.value[0], self.value[1])
    }
}

/// Full tuple with `anchor` at 1-based slot `m` and `zn` at slot `n`.
pub fn insert_pair(zeta_hat: &[C], m: usize, n: usize, anchor: C, zn: C) -> Vec<C> {
    let k = zeta_hat.len() + 2;
    let mut rest = zeta_hat.iter();
    (1..=k)
        .map(|slot| {
            if slot == m {
                anchor
            } else if slot == n {
                zn
            } else {
                *rest.next().expect("slot count")
            }
        })
        .collect()
}

/// `(1/2πi) ∮ F dζ_n` on a circle of `radius` around `ζ_m + iπ`,
/// by the trapezoid rule with `points` nodes.
pub fn numeric_residue(family: &Family, zeta_hat: &[C], m: usize, n: usize, anchor: C, radius: f64, points: usize) -> Result<ResidueEstimate> {
    if !(1 <= m && m < n && n <= zeta_hat.len() + 2) {
        return Err(Error::InvalidParameter(format!("slots m={m}, n={n} invalid for length {}", zeta_hat.len() + 2)));
    }
    let center = anchor + I_PI;
    let mut acc = C::new(0.0, 0.0);
    let mut scale = 0.0_f64;
    for j in 0..points {
        let phi = std::f64::consts::TAU * j as f64 / points as f64;
        let e = C::from_polar(1.0, phi);
        let z = insert_pair(zeta_hat, m, n, anchor, center + e * radius);
        let f = family.eval(&z)?;
        scale = scale.max(f.norm()).max(family.scale(&z));
        acc += f * e;
    }
    let v = acc * (radius / points as f64);
    Ok(ResidueEstimate { value: [v.re, v.im], scale: radius * scale })
}

/// Right-hand side of the recursion relation at `ζ_n = ζ_m + iπ`.
pub fn recursion_rhs(family: &Family, zeta_hat: &[C], m: usize, n: usize, anchor: C) -> Result<C> {
    let s = ScatteringFunction::IsingMinusOne;
    let full = insert_pair(zeta_hat, m, n, anchor, anchor + I_PI);
    let k = full.len();
    let mut front = C::new(1.0, 0.0);
    for j in m..=n {
        front *= s.eval(full[j - 1] - anchor);
    }
    let mut around = C::new(1.0, 0.0);
    for p in 1..=k {
        around *= s.eval(anchor - full[p - 1]);
    }
    let lower = family.eval(zeta_hat)?;
    Ok(-front * (C::new(1.0, 0.0) - around) * lower / C::new(0.0, std::f64::consts::TAU))
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct RecursionRecord {
    pub length: usize,
    pub m: usize,
    pub n: usize,
    pub radius: f64,
    pub lhs: [f64; 2],
    pub rhs: [f64; 2],
    /// `|lhs - rhs| / max(|rhs|, scale)`.
    pub residual: f64,
}

pub fn recursion_check(family: &Family, zeta_hat: &[C], m: usize, n: usize, anchor: C, radius: f64, points: usize) -> Result<RecursionRecord> {
    let lhs = numeric_residue(family, zeta_hat, m, n, anchor, radius, points)?;
    let rhs = recursion_rhs(family, zeta_hat, m, n, anchor)?;
    let denom = rhs.norm().max(lhs.scale).max(f64::MIN_POSITIVE);
    Ok(RecursionRecord {
        length: zeta_hat.len() + 2,
        m,
        n,
        radius,
        lhs: lhs.value,
        rhs: [rhs.re, rhs.im],
        residual: (lhs.complex() - rhs).norm() / denom,
    })
}

/// Relative defect of `F(…, ζ_{a+1}, ζ_a, …) = S(ζ_a - ζ_{a+1}) F(…, ζ_a, ζ_{a+1}, …)`
/// for the adjacent pair at 0-based position `a`.
pub fn symmetry_residual(family: &Family, zeta: &[C], a: usize) -> Result<f64> {
    let mut swapped = zeta.to_vec();
    swapped.swap(a, a + 1);
    let s = ScatteringFunction::IsingMinusOne.eval(zeta[a] - zeta[a + 1]);
    let f = family.eval(zeta)?;
    let g = family.eval(&swapped)?;
    Ok((g - s * f).norm() / normaliser(family, zeta, f))
}

/// Relative defect of `F(ζ + 2πi e_a) = (-1)^{len-1} F(ζ)`.
pub fn periodicity_residual(family: &Family, zeta: &[C], a: usize) -> Result<f64> {
    let mut shifted = zeta.to_vec();
    shifted[a] += C::new(0.0, std::f64::consts::TAU);
    let f = family.eval(zeta)?;
    let g = family.eval(&shifted)?;
    let factor = family.periodicity_factor(zeta.len());
    Ok((g - f * factor).norm() / normaliser(family, zeta, f))
}

fn normaliser(family: &Family, zeta: &[C], f: C) -> f64 {
    f.norm().max(family.scale(zeta)).max(f64::MIN_POSITIVE)
}

/// Random tuple with `|Re ζ| ≤ re_max`, `|Im ζ| ≤ 1` and all pair
/// differences at least `min_pole_distance` from the odd-tower pole set.
pub fn random_tuple<R: Rng + ?Sized>(rng: &mut R, len: usize, re_max: f64, min_pole_distance: f64) -> Vec<C> {
    loop {
        let z: Vec<C> = (0..len)
            .map(|_| C::new(rng.random_range(-re_max..re_max), rng.random_range(-1.0..1.0)))
            .collect();
        let ok = (0..len).all(|a| (a + 1..len).all(|b| pair_pole_distance(z[a] - z[b]) >= min_pole_distance));
        if ok {
            return z;
        }
    }
}

fn pair_pole_distance(w: C) -> f64 {
    let pi = std::f64::consts::PI;
    let n = ((w.im / pi - 1.0) / 2.0).round();
    C::new(w.re, w.im - pi * (2.0 * n + 1.0)).norm()
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct GrowthReport {
    /// Slope of the least-squares fit of `ln|F|` against the scan parameter.
    pub rate: f64,
    pub intercept: f64,
    /// Largest deviation of a sample from the fitted line.
    pub max_deviation: f64,
    pub samples: usize,
    /// False when the scan range is too short or the samples vanish.
    pub well_conditioned: bool,
}

/// Fits `ln|F(t)|` linearly over the parameters `ts`.
pub fn growth_scan(ts: &[f64], mut sample: impl FnMut(f64) -> Result<LogComplex<f64>>) -> Result<GrowthReport> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for &t in ts {
        let v = sample(t)?;
        if !v.is_zero() && v.ln_abs.is_finite() {
            xs.push(t);
            ys.push(v.ln_abs);
        }
    }
    let n = xs.len();
    if n < 2 {
        return Ok(GrowthReport { rate: 0.0, intercept: 0.0, max_deviation: 0.0, samples: n, well_conditioned: false });
    }
    let mx = xs.iter().sum::<f64>() / n as f64;
    let my = ys.iter().sum::<f64>() / n as f64;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let rate = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - rate * mx;
    let max_deviation = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - rate * x).abs()).fold(0.0, f64::max);
    let span = xs[n - 1] - xs[0];
    Ok(GrowthReport { rate, intercept, max_deviation, samples: n, well_conditioned: n >= 4 && span.abs() > 1e-6 })
}

/// Scan of `ζ_slot ↦ ζ_slot + t` with optional damping `e^{-ω(Σ cosh Re ζ)}`.
pub fn scan_real_direction(
    family: &Family,
    base: &[C],
    slot: usize,
    ts: &[f64],
    omega: Option<&crate::omega::OmegaIndicatrix<f64>>,
) -> Result<GrowthReport> {
    growth_scan(ts, |t| {
        let mut z = base.to_vec();
        z[slot] += t;
        let mut v = family.eval_log(&z)?;
        if let Some(w) = omega {
            let e: f64 = z.iter().map(|v| v.re.cosh()).sum();
            v = v.mul_exp(-w.eval(e)?);
        }
        Ok(v)
    })
}

/// Scan of `q ↦ g̃(p0 + iq, p1)` for the smearing function alone.
pub fn scan_smearing_imaginary(cache: &FourierCache<f64>, base: &Momentum<f64>, qs: &[f64]) -> Result<GrowthReport> {
    growth_scan(qs, |q| {
        let p0 = base.energy() + C::new(0.0, q);
        let p1 = base.spatial();
        let p = Momentum { plus: p0 + p1, minus: p0 - p1 };
        Ok(LogComplex::from_complex(cache.get(&p)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formfactors::PrefactorConvention;
    use crate::geometry::Point2D;
    use crate::laurent::{PowerSumTower, SymmetricLaurentPolynomial};
    use crate::omega::OmegaIndicatrix;
    use crate::testfunctions::{BumpFunction, FourierConvention};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn cache() -> Arc<FourierCache<f64>> {
        let b = BumpFunction::new(Point2D::new(0.0, 0.05), 0.25, 1.0).unwrap();
        Arc::new(FourierCache::new(b, FourierConvention::default()))
    }

    fn odd(pref: PrefactorConvention) -> Family {
        let w = OmegaIndicatrix::stretched_power(0.4).unwrap();
        FormFactorFamily::odd(PowerSumTower::odd(0), pref, cache(), 0.5, 1.0, w).unwrap()
    }

    fn even1() -> Family {
        let p = SymmetricLaurentPolynomial::new(2, &[(vec![1, -1], C::new(0.5, 0.2))]).unwrap();
        FormFactorFamily::even(1, p, cache(), 0.5, 1.0).unwrap()
    }

    #[test]
    fn residue_of_simple_pole() {
        let fam = odd(PrefactorConvention::PerLevel);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let hat = random_tuple(&mut rng, 1, 1.0, 0.5);
        let anchor = C::new(0.2, 0.1);
        let a = numeric_residue(&fam, &hat, 1, 3, anchor, 0.1, 64).unwrap();
        let b = numeric_residue(&fam, &hat, 1, 3, anchor, 0.05, 128).unwrap();
        assert!((a.complex() - b.complex()).norm() < 1e-10 * a.complex().norm());
    }

    #[test]
    fn odd_recursion_holds_for_per_level_prefactor() {
        let fam = odd(PrefactorConvention::PerLevel);
        let hat = [C::new(0.4, 0.3)];
        let r = recursion_check(&fam, &hat, 1, 3, C::new(-0.3, -0.2), 0.1, 64).unwrap();
        assert!(r.residual < 1e-10, "{r:?}");
        let wrong = odd(PrefactorConvention::Unnormalized);
        let r = recursion_check(&wrong, &hat, 1, 3, C::new(-0.3, -0.2), 0.1, 64).unwrap();
        assert!(r.residual > 0.1);
    }

    #[test]
    fn even_residue_vanishes() {
        let fam = even1();
        let r = recursion_check(&fam, &[], 1, 2, C::new(0.3, 0.2), 0.2, 64).unwrap();
        assert!(r.residual < 1e-12);
    }

    #[test]
    fn symmetry_and_periodicity() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let fam = odd(PrefactorConvention::PerLevel);
        for _ in 0..10 {
            let z = random_tuple(&mut rng, 3, 2.0, 0.05);
            for a in 0..2 {
                assert!(symmetry_residual(&fam, &z, a).unwrap() < 1e-12);
            }
            for a in 0..3 {
                assert!(periodicity_residual(&fam, &z, a).unwrap() < 1e-12);
            }
        }
        let fam = even1();
        let z = random_tuple(&mut rng, 2, 2.0, 0.0);
        assert!(symmetry_residual(&fam, &z, 0).unwrap() < 1e-12);
        assert!(periodicity_residual(&fam, &z, 1).unwrap() < 1e-12);
    }

    #[test]
    fn growth_fit_of_exponential() {
        let r = growth_scan(&[0.0, 1.0, 2.0, 3.0], |t| Ok(LogComplex::from_complex(C::new((2.0 * t + 1.0_f64).exp(), 0.0)))).unwrap();
        assert!((r.rate - 2.0).abs() < 1e-12);
        let c = growth_scan(&[0.0, 1.0, 2.0, 3.0], |_| Ok(LogComplex::from_complex(C::new(3.0, 0.0)))).unwrap();
        assert!(c.rate.abs() < 1e-12);
    }

    #[test]
    fn smearing_growth_bounded_by_support_radius() {
        let b = BumpFunction::new(Point2D::new(0.0, 0.0), 0.3, 1.0).unwrap();
        let c = FourierCache::new(b, FourierConvention::default());
        let qs: Vec<f64> = (0..16).map(|i| 10.0 + 4.0 * i as f64).collect();
        let r = scan_smearing_imaginary(&c, &Momentum::zero(), &qs).unwrap();
        assert!(r.rate <= 1.05 * 0.3, "{r:?}");
    }
}
