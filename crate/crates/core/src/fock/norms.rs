//! Spectral norms by power iteration, the `Q^ω` norm and the closability series.

use std::sync::Arc;

use num_complex::Complex64 as C;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::basis::FockSpace;
use super::operator::TruncatedFockOperator;
use super::vector::FockVector;
use crate::error::{Error, Result};
use crate::formfactors::{BoundaryPrescription, FormFactorFamily, NormGrid, SeriesNorm};
use crate::omega::OmegaIndicatrix;

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PowerIteration {
    pub tolerance: f64,
    pub max_iterations: usize,
    pub seed: u64,
}

impl Default for PowerIteration {
    fn default() -> Self {
        Self { tolerance: 1e-8, max_iterations: 5000, seed: 0x15151 }
    }
}

/// Largest singular value of `X` restricted to sectors `≤ in_cap`: power
/// iteration on `X†X` accelerated by restarted Lanczos, stopped when the
/// Ritz residual of the top pair falls below `tolerance · λ`.
pub fn spectral_norm(
    space: &Arc<FockSpace>,
    in_cap: usize,
    apply: impl Fn(&FockVector) -> FockVector,
    apply_adjoint: impl Fn(&FockVector) -> FockVector,
    opts: &PowerIteration,
) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut v = FockVector::zeros(space);
    for k in 0..=in_cap.min(space.cap()) {
        for x in v.sector_mut(k) {
            *x = C::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        }
    }
    let n0 = v.norm();
    v.scale(C::new(1.0 / n0, 0.0));
    let gram = |x: &FockVector| {
        let mut u = apply_adjoint(&apply(x));
        u.project(in_cap);
        u
    };
    let mut used = 0;
    while used < opts.max_iterations {
        let mut basis = vec![v.clone()];
        let mut alpha: Vec<f64> = Vec::new();
        let mut beta: Vec<f64> = Vec::new();
        let mut ritz = (0.0, vec![1.0]);
        for j in 0..KRYLOV_DIM {
            let mut w = gram(&basis[j]);
            used += 1;
            alpha.push(basis[j].inner(&w).re);
            for _ in 0..2 {
                for q in &basis {
                    let c = q.inner(&w);
                    w.axpy(-c, q);
                }
            }
            ritz = top_ritz(&alpha, &beta);
            let b = w.norm();
            let theta = ritz.0;
            if theta <= 0.0 {
                return Ok(0.0);
            }
            if b * ritz.1[j].abs() <= opts.tolerance * theta || b <= 1e-14 * theta {
                return Ok(theta.sqrt());
            }
            if used >= opts.max_iterations {
                break;
            }
            beta.push(b);
            w.scale(C::new(1.0 / b, 0.0));
            basis.push(w);
        }
        let mut restart = FockVector::zeros(space);
        for (q, &y) in basis.iter().zip(&ritz.1) {
            restart.axpy(C::new(y, 0.0), q);
        }
        let nr = restart.norm();
        restart.scale(C::new(1.0 / nr, 0.0));
        v = restart;
    }
    Err(Error::PowerIterationNonconvergence(opts.max_iterations))
}

const KRYLOV_DIM: usize = 80;

/// Largest eigenvalue of the symmetric tridiagonal matrix and its eigenvector.
fn top_ritz(alpha: &[f64], beta: &[f64]) -> (f64, Vec<f64>) {
    let n = alpha.len();
    let t = nalgebra::DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            alpha[i]
        } else if i == j + 1 {
            beta[j]
        } else if j == i + 1 {
            beta[i]
        } else {
            0.0
        }
    });
    let eig = t.symmetric_eigen();
    let (idx, &val) = eig.eigenvalues.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).expect("nonempty");
    (val, eig.eigenvectors.column(idx).iter().copied().collect())
}

/// `‖Q_k A Q_k‖`.
pub fn restricted_norm(a: &TruncatedFockOperator, k: usize, opts: &PowerIteration) -> Result<f64> {
    let ad = a.adjoint();
    spectral_norm(
        a.space(),
        k,
        |v| a.apply_capped(v, k),
        |w| ad.apply_capped(w, k),
        opts,
    )
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct QOmegaNorm {
    /// `‖Q_k A e^{-ω(H)} Q_k‖`.
    pub right: f64,
    /// `‖Q_k e^{-ω(H)} A Q_k‖`.
    pub left: f64,
}

impl QOmegaNorm {
    pub fn total(&self) -> f64 {
        self.left + self.right
    }
}

pub fn qomega_norm(a: &TruncatedFockOperator, k: usize, omega: &OmegaIndicatrix<f64>, opts: &PowerIteration) -> Result<QOmegaNorm> {
    if a.space().cap() < k {
        return Err(Error::InsufficientCap { needed: k, have: a.space().cap() });
    }
    let d = TruncatedFockOperator::damping(a.space(), omega)?;
    let ad = a.adjoint();
    let right = spectral_norm(a.space(), k, |v| a.apply_capped(&d.apply(v), k), |w| d.apply(&ad.apply_capped(w, k)), opts)?;
    let left = spectral_norm(a.space(), k, |v| d.apply(&a.apply_capped(v, k)), |w| ad.apply_capped(&d.apply(w), k), opts)?;
    Ok(QOmegaNorm { right, left })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesVerdict {
    Converging,
    Diverging,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct ClosabilityTerm {
    pub m: usize,
    /// `2^{m/2}/√m! (‖f_{m,n}‖ + ‖f_{n,m}‖)`.
    pub term: f64,
    pub partial_sum: f64,
    /// Ratio to the previous nonzero term.
    pub ratio: Option<f64>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct ClosabilityReport {
    pub n: usize,
    pub omega: String,
    pub terms: Vec<ClosabilityTerm>,
    /// All terms beyond those shown vanish identically.
    pub terminating: bool,
    pub verdict: SeriesVerdict,
}

/// Ratio below which a tail is judged convergent, and above which divergent.
pub const CONVERGENT_RATIO: f64 = 0.9;
pub const DIVERGENT_RATIO: f64 = 1.1;

/// Partial sums of the closability series for fixed `n` up to `m_max`.
pub fn closability_sum(
    family: &FormFactorFamily<f64>,
    n: usize,
    omega: &OmegaIndicatrix<f64>,
    m_max: usize,
    grid: &NormGrid<f64>,
    presc: &BoundaryPrescription<f64>,
) -> ClosabilityReport {
    let mut terms = Vec::new();
    let mut partial = 0.0;
    let mut prev: Option<f64> = None;
    let mut failed = false;
    for m in 0..=m_max {
        let nonzero = family.supports_length(m + n);
        let pair = if nonzero {
            family
                .series_norm_data(m, n, omega, grid, presc)
                .and_then(|a| if m == n { Ok((a, a)) } else { family.series_norm_data(n, m, omega, grid, presc).map(|b| (a, b)) })
        } else {
            Ok((SeriesNorm { norm: 0.0, boundary_ratio: 0.0 }, SeriesNorm { norm: 0.0, boundary_ratio: 0.0 }))
        };
        match pair {
            Ok((a, b)) => {
                let fact: f64 = (1..=m).map(|v| v as f64).product();
                let term = 2f64.powf(m as f64 / 2.0) / fact.sqrt() * (a.norm + b.norm);
                partial += term;
                let ratio = if nonzero { prev.map(|p| term / p) } else { None };
                if nonzero && term > 0.0 {
                    prev = Some(term);
                }
                terms.push(ClosabilityTerm { m, term, partial_sum: partial, ratio, error: None });
            }
            Err(e) => {
                failed = true;
                terms.push(ClosabilityTerm { m, term: f64::NAN, partial_sum: f64::NAN, ratio: None, error: Some(e.to_string()) });
            }
        }
    }
    let terminating = family.is_even();
    let ratios: Vec<f64> = terms.iter().filter_map(|t| t.ratio).collect();
    let verdict = if failed {
        SeriesVerdict::Inconclusive
    } else if terminating {
        SeriesVerdict::Converging
    } else if ratios.len() < 3 {
        SeriesVerdict::Inconclusive
    } else {
        let tail = &ratios[ratios.len() - 3..];
        if tail.iter().all(|&r| r < CONVERGENT_RATIO) {
            SeriesVerdict::Converging
        } else if tail.iter().all(|&r| r > DIVERGENT_RATIO) {
            SeriesVerdict::Diverging
        } else {
            SeriesVerdict::Inconclusive
        }
    };
    ClosabilityReport { n, omega: omega.label(), terms, terminating, verdict }
}
