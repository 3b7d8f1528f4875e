//! The two form-factor families of the `S = -1` model, their boundary values
//! `f_{m,n}` on the real rapidity axes, and the weighted norms entering the
//! closability series.
//!
//! * even, terminating: `F_{2k} = g̃(p(ζ)) P(e^ζ) Σ_σ sign σ Π_j sinh((ζ_{σ(2j-1)} - ζ_{σ(2j)})/2)`,
//!   evaluated as `2^k k! Pf[sinh((ζ_a - ζ_b)/2)]`;
//! * odd tower: `F_{2j+1} = c_j g̃(p(ζ)) P_{2j+1}(e^ζ) Π_{l<r} tanh((ζ_l - ζ_r)/2)`.

use std::sync::Arc;

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{DoubleCone, Region};
use crate::kinematics::total_momentum;
use crate::laurent::{PowerSumTower, SymmetricLaurentPolynomial, SymmetricTower};
use crate::omega::OmegaIndicatrix;
use crate::pfaffian::{pfaffian, SquareMatrix};
use crate::quadrature::gauss_legendre;
use crate::scalar::{i_times, sinh_scaled, tanh_stable, LogComplex, Real};
use crate::testfunctions::FourierCache;

/// Normalisation `c_j` of the odd tower at length `2j + 1`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrefactorConvention {
    /// `(2πi)^{-j}`.
    #[default]
    PerLevel,
    /// `(2πi)^{-(2j+1)}`.
    PerParticle,
    /// `1`.
    Unnormalized,
    /// `(2πi)^{j}`.
    InversePerLevel,
}

impl PrefactorConvention {
    pub const ALL: [Self; 4] = [Self::PerLevel, Self::PerParticle, Self::Unnormalized, Self::InversePerLevel];

    pub fn coefficient<T: Real>(&self, j: usize) -> Complex<T> {
        let two_pi_i = i_times(T::TAU());
        let j = j as i32;
        match self {
            Self::PerLevel => two_pi_i.powi(-j),
            Self::PerParticle => two_pi_i.powi(-(2 * j + 1)),
            Self::Unnormalized => Complex::new(T::one(), T::zero()),
            Self::InversePerLevel => two_pi_i.powi(j),
        }
    }
}

#[derive(Clone, Debug)]
pub enum FamilyKind<T> {
    EvenTerminating { half_length: usize, poly: SymmetricLaurentPolynomial<T> },
    OddTower { tower: PowerSumTower, prefactor: PrefactorConvention },
}

#[derive(Clone, Debug)]
pub struct FormFactorFamily<T: Real> {
    kind: FamilyKind<T>,
    smearing: Arc<FourierCache<T>>,
    region_radius: T,
    mass: T,
    omega: Option<OmegaIndicatrix<T>>,
    pole_guard: T,
}

impl<T: Real> FormFactorFamily<T> {
    /// Even family of length `2k` localized in `O_r`.
    pub fn even(
        half_length: usize,
        poly: SymmetricLaurentPolynomial<T>,
        smearing: Arc<FourierCache<T>>,
        region_radius: T,
        mass: T,
    ) -> Result<Self> {
        if poly.nvars() != 2 * half_length {
            return Err(Error::InvalidParameter(format!(
                "polynomial in {} variables for length {}",
                poly.nvars(),
                2 * half_length
            )));
        }
        let kind = FamilyKind::EvenTerminating { half_length, poly };
        Self::build(kind, smearing, region_radius, mass, None)
    }

    /// Odd tower localized in `O_r`, designed for the indicatrix `omega`.
    pub fn odd(
        tower: PowerSumTower,
        prefactor: PrefactorConvention,
        smearing: Arc<FourierCache<T>>,
        region_radius: T,
        mass: T,
        omega: OmegaIndicatrix<T>,
    ) -> Result<Self> {
        if !tower.is_odd() {
            return Err(Error::InvalidParameter("odd tower requires an odd power sum".into()));
        }
        let kind = FamilyKind::OddTower { tower, prefactor };
        Self::build(kind, smearing, region_radius, mass, Some(omega))
    }

    fn build(
        kind: FamilyKind<T>,
        smearing: Arc<FourierCache<T>>,
        region_radius: T,
        mass: T,
        omega: Option<OmegaIndicatrix<T>>,
    ) -> Result<Self> {
        if !(mass > T::zero()) {
            return Err(Error::InvalidParameter(format!("mass must be positive, got {mass}")));
        }
        let cone = DoubleCone::standard(region_radius)?;
        let b = smearing.bump();
        if !Region::from(cone).contains_ball(b.center, b.radius, T::zero()) {
            return Err(Error::GeometryViolation(format!(
                "support of radius {} around ({}, {}) is not inside the double cone of radius {}",
                b.radius, b.center.t, b.center.x, region_radius
            )));
        }
        Ok(Self { kind, smearing, region_radius, mass, omega, pole_guard: T::lit(1e-8) })
    }

    pub fn with_prefactor(&self, prefactor: PrefactorConvention) -> Self {
        let mut out = self.clone();
        if let FamilyKind::OddTower { prefactor: p, .. } = &mut out.kind {
            *p = prefactor;
        }
        out
    }

    pub fn kind(&self) -> &FamilyKind<T> {
        &self.kind
    }

    pub fn smearing(&self) -> &Arc<FourierCache<T>> {
        &self.smearing
    }

    pub fn region_radius(&self) -> T {
        self.region_radius
    }

    pub fn mass(&self) -> T {
        self.mass
    }

    pub fn omega(&self) -> Option<&OmegaIndicatrix<T>> {
        self.omega.as_ref()
    }

    pub fn is_even(&self) -> bool {
        matches!(self.kind, FamilyKind::EvenTerminating { .. })
    }

    pub fn label(&self) -> String {
        match &self.kind {
            FamilyKind::EvenTerminating { half_length, .. } => format!("even(k={half_length})"),
            FamilyKind::OddTower { tower, .. } => format!("odd(e={})", tower.exponent()),
        }
    }

    /// Whether `F_len` is not identically zero by construction.
    pub fn supports_length(&self, len: usize) -> bool {
        match &self.kind {
            FamilyKind::EvenTerminating { half_length, .. } => len == 2 * half_length,
            FamilyKind::OddTower { .. } => len % 2 == 1,
        }
    }

    /// `F(ζ + 2πi e_a) = factor · F(ζ)` for tuples of this length.
    pub fn periodicity_factor(&self, len: usize) -> T {
        if len.is_multiple_of(2) {
            -T::one()
        } else {
            T::one()
        }
    }

    pub fn eval(&self, zeta: &[Complex<T>]) -> Result<Complex<T>> {
        Ok(self.eval_log(zeta)?.to_complex())
    }

    pub fn eval_log(&self, zeta: &[Complex<T>]) -> Result<LogComplex<T>> {
        if !self.supports_length(zeta.len()) {
            return Ok(LogComplex::zero());
        }
        match &self.kind {
            FamilyKind::EvenTerminating { half_length, poly } => self.eval_even(*half_length, poly, zeta),
            FamilyKind::OddTower { tower, prefactor } => self.eval_odd(tower, *prefactor, zeta),
        }
    }

    fn smearing_factor(&self, zeta: &[Complex<T>]) -> LogComplex<T> {
        LogComplex::from_complex(self.smearing.get(&total_momentum(zeta, self.mass)))
    }

    fn eval_even(&self, k: usize, poly: &SymmetricLaurentPolynomial<T>, zeta: &[Complex<T>]) -> Result<LogComplex<T>> {
        let mut acc = self.smearing_factor(zeta).mul(poly.eval_log(zeta));
        if k == 0 {
            return Ok(acc);
        }
        let n = 2 * k;
        let half = T::lit(0.5);
        let shift = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .map(|(a, b)| ((zeta[a] - zeta[b]) * half).re.abs())
            .fold(T::zero(), T::max);
        let m = SquareMatrix::from_fn(n, |a, b| sinh_scaled((zeta[a] - zeta[b]) * half, shift));
        let pf = pfaffian(&m)?;
        let combinatorial = T::from_count((1..=k).product::<usize>() << k);
        acc = acc.mul_complex(pf * combinatorial).mul_exp(shift * T::from_count(k));
        Ok(acc)
    }

    fn eval_odd(&self, tower: &PowerSumTower, prefactor: PrefactorConvention, zeta: &[Complex<T>]) -> Result<LogComplex<T>> {
        let n = zeta.len();
        let d = self.min_pole_distance(zeta);
        if d < self.pole_guard {
            return Err(Error::PoleProximity { distance: d.as_f64() });
        }
        let half = T::lit(0.5);
        let mut acc = self.smearing_factor(zeta).mul(tower.eval_log(zeta)).mul_complex(prefactor.coefficient((n - 1) / 2));
        for l in 0..n {
            for r in l + 1..n {
                acc = acc.mul_complex(tanh_stable((zeta[l] - zeta[r]) * half));
            }
        }
        Ok(acc)
    }

    /// Distance of the closest pair difference `ζ_a - ζ_b` to the pole set
    /// `iπ(2Z + 1)` of the odd tower; infinite for the even family.
    pub fn min_pole_distance(&self, zeta: &[Complex<T>]) -> T {
        if self.is_even() {
            return T::infinity();
        }
        let mut best = T::infinity();
        for a in 0..zeta.len() {
            for b in a + 1..zeta.len() {
                best = best.min(pole_distance(zeta[a] - zeta[b]));
            }
        }
        best
    }

    /// Cancellation-free magnitude scale of `F(ζ)`, used to normalise
    /// residuals when `F` itself vanishes.
    pub fn scale(&self, zeta: &[Complex<T>]) -> T {
        if !self.supports_length(zeta.len()) {
            return T::zero();
        }
        let g = self.smearing.get(&total_momentum(zeta, self.mass)).norm();
        let half = T::lit(0.5);
        match &self.kind {
            FamilyKind::EvenTerminating { half_length, poly } => {
                let k = *half_length;
                let mut mx = T::zero();
                for a in 0..zeta.len() {
                    for b in a + 1..zeta.len() {
                        mx = mx.max(((zeta[a] - zeta[b]) * half).sinh().norm());
                    }
                }
                let perms = T::from_count((1..=2 * k).product::<usize>());
                g * poly.abs_scale(zeta) * perms * mx.powi(k as i32)
            }
            FamilyKind::OddTower { tower, prefactor } => {
                let mut prod = T::one();
                for l in 0..zeta.len() {
                    for r in l + 1..zeta.len() {
                        prod *= tanh_stable((zeta[l] - zeta[r]) * half).norm();
                    }
                }
                g * tower.abs_scale(zeta) * prefactor.coefficient::<T>((zeta.len() - 1) / 2).norm() * prod
            }
        }
    }
}

fn pole_distance<T: Real>(w: Complex<T>) -> T {
    let pi = T::PI();
    let n = ((w.im / pi - T::one()) / T::lit(2.0)).round();
    let target = pi * (T::lit(2.0) * n + T::one());
    Complex::new(w.re, w.im - target).norm()
}

/// Order of the `η` arguments and side of the real axis from which the
/// boundary value is approached.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryConvention {
    /// `F(θ, η_n + i(π-ε), …, η_1 + i(π-ε))`.
    ReversedUpper,
    /// `F(θ, η_1 + i(π-ε), …, η_n + i(π-ε))`.
    #[default]
    NaturalUpper,
    /// `F(θ, η_n - i(π-ε), …, η_1 - i(π-ε))`.
    ReversedLower,
    /// `F(θ, η_1 - i(π-ε), …, η_n - i(π-ε))`.
    NaturalLower,
}

impl BoundaryConvention {
    pub const ALL: [Self; 4] = [Self::ReversedUpper, Self::NaturalUpper, Self::ReversedLower, Self::NaturalLower];

    pub fn reversed(&self) -> bool {
        matches!(self, Self::ReversedUpper | Self::ReversedLower)
    }

    pub fn upper(&self) -> bool {
        matches!(self, Self::ReversedUpper | Self::NaturalUpper)
    }

    pub fn label(&self) -> &'static str {
        match self {
            Self::ReversedUpper => "reversed_upper",
            Self::NaturalUpper => "natural_upper",
            Self::ReversedLower => "reversed_lower",
            Self::NaturalLower => "natural_lower",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitMode {
    /// Direct evaluation away from the pole locus, extrapolation near it.
    #[default]
    Auto,
    /// Always extrapolate `ε → 0`.
    Richardson,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryPrescription<T> {
    pub convention: BoundaryConvention,
    pub mode: LimitMode,
    pub eps0: T,
    pub levels: usize,
    pub tolerance: T,
    /// Below this distance of some `θ_a - η_b` to zero the limit is singular.
    pub singular_radius: T,
    /// Below this distance `Auto` switches from direct evaluation to extrapolation.
    pub near_radius: T,
}

impl<T: Real> Default for BoundaryPrescription<T> {
    fn default() -> Self {
        Self {
            convention: BoundaryConvention::default(),
            mode: LimitMode::Auto,
            eps0: T::lit(1e-2),
            levels: 6,
            tolerance: T::lit(1e-8),
            singular_radius: T::lit(1e-9),
            near_radius: T::lit(0.05),
        }
    }
}

impl<T: Real> BoundaryPrescription<T> {
    pub fn with_convention(convention: BoundaryConvention) -> Self {
        Self { convention, ..Self::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitMethod {
    Direct,
    Extrapolated,
    PrincipalValue,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryValue<T> {
    pub value: Complex<T>,
    pub method: LimitMethod,
    /// Last successive difference of the extrapolation, zero otherwise.
    pub last_difference: T,
}

impl<T: Real> BoundaryValue<T> {
    pub fn singular(&self) -> bool {
        self.method == LimitMethod::PrincipalValue
    }
}

impl<T: Real> FormFactorFamily<T> {
    /// `(θ, η ± i(π - ε))` arranged by the convention.
    pub fn boundary_tuple(&self, theta: &[T], eta: &[T], convention: BoundaryConvention, eps: T) -> Vec<Complex<T>> {
        let shift = if convention.upper() { T::PI() - eps } else { -(T::PI() - eps) };
        let mut z: Vec<Complex<T>> = theta.iter().map(|&t| Complex::new(t, T::zero())).collect();
        let shifted = eta.iter().map(|&e| Complex::new(e, shift));
        if convention.reversed() {
            z.extend(shifted.rev());
        } else {
            z.extend(shifted);
        }
        z
    }

    /// `f_{m,n}(θ, η)` as the boundary value of `F_{m+n}`.
    pub fn boundary_coefficient(&self, theta: &[T], eta: &[T], presc: &BoundaryPrescription<T>) -> Result<BoundaryValue<T>> {
        let at = |eps: T| self.eval(&self.boundary_tuple(theta, eta, presc.convention, eps));
        if !self.supports_length(theta.len() + eta.len()) {
            return Ok(BoundaryValue { value: Complex::new(T::zero(), T::zero()), method: LimitMethod::Direct, last_difference: T::zero() });
        }
        let dist = if self.is_even() {
            T::infinity()
        } else {
            let mut d = T::infinity();
            for &t in theta {
                for &e in eta {
                    d = d.min((t - e).abs());
                }
            }
            d
        };
        if dist < presc.singular_radius {
            let v = (at(presc.eps0)? + at(-presc.eps0)?) * T::lit(0.5);
            return Ok(BoundaryValue { value: v, method: LimitMethod::PrincipalValue, last_difference: T::zero() });
        }
        if presc.mode == LimitMode::Auto && dist >= presc.near_radius {
            return Ok(BoundaryValue { value: at(T::zero())?, method: LimitMethod::Direct, last_difference: T::zero() });
        }
        let mut eps = Vec::with_capacity(presc.levels);
        let mut vals = Vec::with_capacity(presc.levels);
        for l in 0..presc.levels.max(2) {
            let e = presc.eps0 / T::lit(2f64.powi(l as i32));
            eps.push(e);
            vals.push(at(e)?);
        }
        let (value, diff) = neville_at_zero(&eps, &vals);
        let scale = value.norm().max(T::min_positive_value());
        if diff > presc.tolerance * scale {
            return Err(Error::NonconvergentExtrapolation(diff.as_f64()));
        }
        Ok(BoundaryValue { value, method: LimitMethod::Extrapolated, last_difference: diff })
    }
}

/// Polynomial extrapolation to zero; returns the estimate from all points and
/// its difference to the estimate without the last point.
fn neville_at_zero<T: Real>(x: &[T], y: &[Complex<T>]) -> (Complex<T>, T) {
    let n = x.len();
    let mut p = y.to_vec();
    let mut diag = vec![p[0]];
    for level in 1..n {
        for i in (level..n).rev() {
            let xi = x[i];
            let xj = x[i - level];
            p[i] = (p[i] * (-xj) - p[i - 1] * (-xi)) / (xi - xj);
        }
        diag.push(p[level]);
    }
    let best = diag[n - 1];
    let diff = (best - diag[n - 2]).norm();
    let _ = &mut p;
    (best, diff)
}

/// Rapidity grid used for the weighted norms of `f_{m,n}`.
#[derive(Clone, Debug, PartialEq)]
pub struct NormGrid<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
    pub damping: NormDamping,
}

/// How `e^{-ω}` enters the weighted kernel norm.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormDamping {
    /// `e^{-ω(E_θ)} f e^{-ω(E_η)}` with `E` the total energy of each group.
    #[default]
    TotalEnergy,
    /// `Π_i e^{-ω(cosh θ_i)}` over every argument.
    PerVariable,
}

impl<T: Real> NormGrid<T> {
    pub fn gauss_legendre(n: usize, theta_max: T) -> Self {
        let (nodes, weights) = gauss_legendre::<T>(n).mapped(-theta_max, theta_max);
        Self { nodes, weights, damping: NormDamping::TotalEnergy }
    }

    pub fn with_damping(self, damping: NormDamping) -> Self {
        Self { damping, ..self }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct SeriesNorm {
    /// `‖ e^{-ω(E_θ)} f_{m,n} e^{-ω(E_η)} ‖` in `L²(R^{m+n})`.
    pub norm: f64,
    /// Largest integrand on tuples touching an outermost node, over the peak.
    pub boundary_ratio: f64,
}

/// Tail threshold above which a norm is reported as divergent.
pub const TAIL_RATIO_LIMIT: f64 = 1e-10;

impl<T: Real> FormFactorFamily<T> {
    /// Hilbert–Schmidt surrogate of `‖f_{m,n}‖^ω` on a product grid.
    ///
    /// The kernel is antisymmetric in each argument group, so only strictly
    /// increasing index tuples are visited and weighted by `m! n!`.
    pub fn series_norm_data(
        &self,
        m: usize,
        n: usize,
        omega: &OmegaIndicatrix<T>,
        grid: &NormGrid<T>,
        presc: &BoundaryPrescription<T>,
    ) -> Result<SeriesNorm> {
        if !self.supports_length(m + n) {
            return Ok(SeriesNorm { norm: 0.0, boundary_ratio: 0.0 });
        }
        let nn = grid.len();
        let damping = |idx: &[usize]| -> Result<T> {
            match grid.damping {
                NormDamping::TotalEnergy => omega.damping(idx.iter().fold(T::zero(), |a, &i| a + grid.nodes[i].cosh())),
                NormDamping::PerVariable => idx.iter().try_fold(T::one(), |a, &i| Ok(a * omega.damping(grid.nodes[i].cosh())?)),
            }
        };
        let eta_sets = combinations(nn, n);
        let firsts: Vec<Option<usize>> = if m == 0 { vec![None] } else { (0..nn).map(Some).collect() };
        let partial: Vec<Result<(f64, f64, f64)>> = firsts
            .par_iter()
            .map(|first| {
                let theta_sets: Vec<Vec<usize>> = match first {
                    None => vec![Vec::new()],
                    Some(f) => combinations(nn - f - 1, m - 1)
                        .into_iter()
                        .map(|c| std::iter::once(*f).chain(c.into_iter().map(|i| i + f + 1)).collect())
                        .collect(),
                };
                let (mut sum, mut peak, mut edge) = (0.0, 0.0_f64, 0.0_f64);
                for ti in &theta_sets {
                    let theta: Vec<T> = ti.iter().map(|&i| grid.nodes[i]).collect();
                    let dt = damping(ti)?;
                    let wt = ti.iter().fold(T::one(), |a, &i| a * grid.weights[i]);
                    for ei in &eta_sets {
                        let eta: Vec<T> = ei.iter().map(|&i| grid.nodes[i]).collect();
                        let f = self.boundary_coefficient(&theta, &eta, presc)?.value;
                        let w = ei.iter().fold(wt, |a, &i| a * grid.weights[i]);
                        let v = (f.norm() * dt * damping(ei)?).as_f64().powi(2);
                        sum += w.as_f64() * v;
                        peak = peak.max(v);
                        if ti.iter().chain(ei).any(|&i| i == 0 || i + 1 == nn) {
                            edge = edge.max(v);
                        }
                    }
                }
                Ok((sum, peak, edge))
            })
            .collect();
        let (mut sum, mut peak, mut edge) = (0.0, 0.0_f64, 0.0_f64);
        for p in partial {
            let (s, pk, e) = p?;
            sum += s;
            peak = peak.max(pk);
            edge = edge.max(e);
        }
        let fact = |k: usize| (1..=k).map(|v| v as f64).product::<f64>();
        let norm = (sum * fact(m) * fact(n)).sqrt();
        let boundary_ratio = if peak > 0.0 { edge / peak } else { 0.0 };
        if boundary_ratio > TAIL_RATIO_LIMIT {
            return Err(Error::DivergentTail { ratio: boundary_ratio });
        }
        Ok(SeriesNorm { norm, boundary_ratio })
    }
}

/// All strictly increasing `k`-tuples from `0..n`, lexicographically.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut c: Vec<usize> = (0..k).collect();
    loop {
        out.push(c.clone());
        let Some(i) = (0..k).rev().find(|&i| c[i] != i + n - k) else { break };
        c[i] += 1;
        for j in i + 1..k {
            c[j] = c[j - 1] + 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point2D;
    use crate::kinematics::momentum;
    use crate::testfunctions::{BumpFunction, FourierConvention};

    fn smearing() -> Arc<FourierCache<f64>> {
        let b = BumpFunction::new(Point2D::new(0.05, -0.1), 0.2, 1.0).unwrap();
        Arc::new(FourierCache::new(b, FourierConvention::default()))
    }

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn even(k: usize) -> FormFactorFamily<f64> {
        let p = SymmetricLaurentPolynomial::new(2 * k, &[(vec![0; 2 * k], c(1.0, 0.0))]).unwrap();
        FormFactorFamily::even(k, p, smearing(), 0.5, 1.0).unwrap()
    }

    fn odd() -> FormFactorFamily<f64> {
        let w = OmegaIndicatrix::stretched_power(0.4).unwrap();
        FormFactorFamily::odd(PowerSumTower::odd(0), PrefactorConvention::PerLevel, smearing(), 0.5, 1.0, w).unwrap()
    }

    #[test]
    fn combinations_enumerate_binomially() {
        assert_eq!(combinations(5, 2).len(), 10);
        assert_eq!(combinations(4, 0), vec![Vec::<usize>::new()]);
        assert_eq!(combinations(6, 3)[0], vec![0, 1, 2]);
        assert_eq!(combinations(6, 3).last().unwrap(), &vec![3, 4, 5]);
    }

    #[test]
    fn support_outside_region_rejected() {
        let b = BumpFunction::new(Point2D::new(0.0, 0.4), 0.3, 1.0).unwrap();
        let s = Arc::new(FourierCache::new(b, FourierConvention::default()));
        let p = SymmetricLaurentPolynomial::constant(2, c(1.0, 0.0));
        assert!(matches!(FormFactorFamily::even(1, p, s, 0.5, 1.0), Err(Error::GeometryViolation(_))));
    }

    #[test]
    fn even_two_point_closed_form() {
        let f = even(1);
        let z = [c(0.3, 0.1), c(-0.4, 0.7)];
        let g = f.smearing().get(&total_momentum(&z, 1.0));
        let want = g * 2.0 * ((z[0] - z[1]) / 2.0).sinh();
        assert!((f.eval(&z).unwrap() - want).norm() < 1e-14 * want.norm());
        assert_eq!(f.eval(&[c(0.1, 0.0)]).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn odd_three_point_closed_form() {
        let f = odd();
        let z = [c(0.3, 0.1), c(-0.4, 0.7), c(1.0, -0.2)];
        let g = f.smearing().get(&total_momentum(&z, 1.0));
        let p: Complex<f64> = z.iter().map(|v| v.exp()).sum();
        let t = ((z[0] - z[1]) / 2.0).tanh() * ((z[0] - z[2]) / 2.0).tanh() * ((z[1] - z[2]) / 2.0).tanh();
        let want = g * p * t / c(0.0, std::f64::consts::TAU);
        assert!((f.eval(&z).unwrap() - want).norm() < 1e-13 * want.norm());
    }

    #[test]
    fn pole_guard() {
        let f = odd();
        let z = [c(0.3, 0.0), c(0.3, std::f64::consts::PI), c(1.0, 0.0)];
        assert!(matches!(f.eval(&z), Err(Error::PoleProximity { .. })));
    }

    #[test]
    fn large_rapidities_stay_finite() {
        let f = odd();
        let z = [c(40.0, 0.1), c(-35.0, 0.2), c(3.0, 0.0)];
        let v = f.eval_log(&z).unwrap();
        assert!(v.ln_abs.is_finite() || v.is_zero());
    }

    #[test]
    fn pair_shift_flips_total_momentum() {
        let eta = c(0.8, 0.0);
        let p = momentum(eta, 1.0);
        let q = momentum(eta + c(0.0, std::f64::consts::PI), 1.0);
        assert!((p.energy() + q.energy()).norm() < 1e-14);
        assert!((p.spatial() + q.spatial()).norm() < 1e-14);
    }

    #[test]
    fn richardson_converges_off_locus() {
        let f = odd();
        let presc = BoundaryPrescription { mode: LimitMode::Richardson, ..BoundaryPrescription::default() };
        let v = f.boundary_coefficient(&[0.3, 1.1], &[0.8], &presc).unwrap();
        assert_eq!(v.method, LimitMethod::Extrapolated);
        assert!(v.last_difference < 1e-8 * v.value.norm());
        let d = f.boundary_coefficient(&[0.3, 1.1], &[0.8], &BoundaryPrescription::default()).unwrap();
        assert!((d.value - v.value).norm() < 1e-9 * v.value.norm());
    }

    #[test]
    fn coincident_points_are_flagged() {
        let f = odd();
        let v = f.boundary_coefficient(&[0.3, 1.1], &[0.3], &BoundaryPrescription::default()).unwrap();
        assert!(v.singular());
        assert!(v.value.norm().is_finite());
    }

    #[test]
    fn neville_recovers_polynomials() {
        let x = [0.1, 0.05, 0.025, 0.0125];
        let y: Vec<Complex<f64>> = x.iter().map(|&e| c(2.0 + 3.0 * e - e * e, e)).collect();
        let (v, d) = neville_at_zero(&x, &y);
        assert!((v - c(2.0, 0.0)).norm() < 1e-13);
        assert!(d < 1e-12);
    }

    #[test]
    fn prefactors_are_distinct() {
        let vals: Vec<Complex<f64>> = PrefactorConvention::ALL.iter().map(|p| p.coefficient(1)).collect();
        for i in 0..4 {
            for j in i + 1..4 {
                assert!((vals[i] - vals[j]).norm() > 1e-3);
            }
        }
    }

    #[test]
    fn per_variable_damping_is_stronger_for_log_power() {
        let f = odd();
        let w = OmegaIndicatrix::log_power(2.0).unwrap();
        let presc = BoundaryPrescription::default();
        let total = NormGrid::gauss_legendre(12, 6.0);
        let per = total.clone().with_damping(NormDamping::PerVariable);
        let one = |g: &NormGrid<f64>| f.series_norm_data(1, 0, &w, g, &presc).unwrap().norm;
        assert!((one(&total) - one(&per)).abs() <= 1e-14 * one(&total));
        let three = |g: &NormGrid<f64>| f.series_norm_data(3, 0, &w, g, &presc).unwrap().norm;
        assert!(three(&per) < three(&total));
    }
}
