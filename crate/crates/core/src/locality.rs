//! Locality diagnostics: commutators with wedge-local fields, the selection
//! of sign conventions, and the Reeh–Schlieder rank.

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64 as C;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::{field, restricted_norm, spectral_norm, FieldKind, FockSpace, FockVector, PowerIteration, TruncatedFockOperator};
use crate::formfactors::BoundaryConvention;
use crate::geometry::{DoubleCone, Region};
use crate::omega::OmegaIndicatrix;
use crate::testfunctions::{domega_membership, BumpFunction, FourierCache, FourierConvention, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct CommutatorNorm {
    /// `‖Q_k [A, B] Q_k‖`.
    pub absolute: f64,
    /// `absolute / (‖Q_k A Q_k‖ ‖Q_k B Q_k‖)`.
    pub relative: f64,
    pub norm_a: f64,
    pub norm_b: f64,
}

/// Particle number the operands must reach for `Q_k [A, B] Q_k` to be exact.
pub fn required_cap(a: &TruncatedFockOperator, b: &TruncatedFockOperator, k_cap: usize) -> usize {
    let (da, ua) = a.shift_bounds();
    let (db, ub) = b.shift_bounds();
    k_cap + da.min(ub).max(db.min(ua))
}

pub fn commutator_norm(a: &TruncatedFockOperator, b: &TruncatedFockOperator, k_cap: usize, opts: &PowerIteration) -> Result<CommutatorNorm> {
    if !Arc::ptr_eq(a.space(), b.space()) {
        return Err(Error::SpaceMismatch);
    }
    let needed = required_cap(a, b, k_cap);
    if a.space().cap() < needed {
        return Err(Error::InsufficientCap { needed, have: a.space().cap() });
    }
    let (ad, bd) = (a.adjoint(), b.adjoint());
    let apply = |v: &FockVector| {
        let mut x = a.apply_capped(&b.apply(v), k_cap);
        x.axpy(C::new(-1.0, 0.0), &b.apply_capped(&a.apply(v), k_cap));
        x
    };
    let apply_adj = |w: &FockVector| {
        let mut x = bd.apply_capped(&ad.apply(w), k_cap);
        x.axpy(C::new(-1.0, 0.0), &ad.apply_capped(&bd.apply(w), k_cap));
        x
    };
    let absolute = spectral_norm(a.space(), k_cap, apply, apply_adj, opts)?;
    let norm_a = restricted_norm(a, k_cap, opts)?;
    let norm_b = restricted_norm(b, k_cap, opts)?;
    let denom = norm_a * norm_b;
    let relative = if denom > 0.0 { absolute / denom } else { 0.0 };
    Ok(CommutatorNorm { absolute, relative, norm_a, norm_b })
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct LocalityConfig {
    pub k_cap: usize,
    pub tolerance: f64,
    pub min_contrast: f64,
    pub mass: f64,
    /// Indicatrix for the test-function admissibility scan.
    pub omega: OmegaIndicatrix<f64>,
    pub scan_theta_max: f64,
    pub scan_samples: usize,
    /// Minimal distance between a battery support and its wedge boundary.
    pub margin: f64,
    pub power: PowerIteration,
}

impl Default for LocalityConfig {
    fn default() -> Self {
        Self {
            k_cap: 3,
            tolerance: 1e-3,
            min_contrast: 10.0,
            mass: 1.0,
            omega: OmegaIndicatrix::LogPower { ell: 3.0 },
            scan_theta_max: 6.0,
            scan_samples: 241,
            margin: 0.1,
            power: PowerIteration::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct CommutatorRecord {
    pub field: FieldKind,
    pub center: [f64; 2],
    pub radius: f64,
    /// Distance from the support to the boundary of the wedge the field is
    /// localized in; negative when the support reaches into the double cone.
    pub separation: f64,
    pub is_control: bool,
    pub norm: CommutatorNorm,
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct LocalityVerdict {
    pub status: Verdict,
    pub max_battery: f64,
    pub min_control: f64,
    pub contrast: f64,
    pub records: Vec<CommutatorRecord>,
}

impl LocalityVerdict {
    pub fn pass(&self) -> bool {
        self.status == Verdict::Pass
    }
}

/// Bumps for the locality test: the left battery pairs with `φ` and must lie
/// left of the double cone, the right battery pairs with `φ'` and must lie
/// to its right; controls overlap the cone and are tested with both fields.
#[derive(Clone, Debug, PartialEq)]
pub struct Battery {
    pub left: Vec<BumpFunction<f64>>,
    pub right: Vec<BumpFunction<f64>>,
    pub controls: Vec<BumpFunction<f64>>,
}

impl Battery {
    pub fn validate(&self, region: &DoubleCone<f64>, convention: FourierConvention, cfg: &LocalityConfig) -> Result<()> {
        if self.left.is_empty() && self.right.is_empty() {
            return Err(Error::EmptyBattery);
        }
        let sides = [(&self.left, Region::from(region.left_complement()), "left"), (&self.right, Region::from(region.right_complement()), "right")];
        for (bumps, wedge, name) in sides {
            for b in bumps.iter() {
                if !wedge.contains_ball(b.center, b.radius, cfg.margin) {
                    return Err(Error::GeometryViolation(format!(
                        "{name} battery bump at ({}, {}) radius {} is not inside its wedge with margin {}",
                        b.center.t, b.center.x, b.radius, cfg.margin
                    )));
                }
                let scan = domega_membership(&FourierCache::new(*b, convention), &cfg.omega, cfg.scan_theta_max, cfg.scan_samples)?;
                if scan.verdict != Verdict::Pass {
                    return Err(Error::InvalidParameter(format!(
                        "battery bump at ({}, {}) fails the admissibility scan for {}",
                        b.center.t,
                        b.center.x,
                        cfg.omega.label()
                    )));
                }
            }
        }
        Ok(())
    }
}

fn probe(
    a: &TruncatedFockOperator,
    space: &Arc<FockSpace>,
    bump: &BumpFunction<f64>,
    kind: FieldKind,
    wedge: Region<f64>,
    is_control: bool,
    convention: FourierConvention,
    cfg: &LocalityConfig,
) -> Result<CommutatorRecord> {
    let phi = field(space, &FourierCache::new(*bump, convention), kind, cfg.mass);
    let norm = commutator_norm(a, &phi, cfg.k_cap, &cfg.power)?;
    Ok(CommutatorRecord {
        field: kind,
        center: [bump.center.t, bump.center.x],
        radius: bump.radius,
        separation: wedge.depth(bump.center) - bump.radius,
        is_control,
        norm,
    })
}

/// Commutator battery for `A` against fields localized spacelike to `region`.
pub fn locality_verdict(
    a: &TruncatedFockOperator,
    region: &DoubleCone<f64>,
    battery: &Battery,
    convention: FourierConvention,
    cfg: &LocalityConfig,
) -> Result<LocalityVerdict> {
    battery.validate(region, convention, cfg)?;
    let space = a.space();
    let lw = Region::from(region.left_complement());
    let rw = Region::from(region.right_complement());
    let mut jobs: Vec<(BumpFunction<f64>, FieldKind, Region<f64>, bool)> = Vec::new();
    jobs.extend(battery.left.iter().map(|b| (*b, FieldKind::Left, lw, false)));
    jobs.extend(battery.right.iter().map(|b| (*b, FieldKind::Right, rw, false)));
    for b in &battery.controls {
        jobs.push((*b, FieldKind::Left, lw, true));
        jobs.push((*b, FieldKind::Right, rw, true));
    }
    let results: Vec<Result<CommutatorRecord>> =
        jobs.par_iter().map(|(b, kind, w, ctl)| probe(a, space, b, *kind, *w, *ctl, convention, cfg)).collect();
    let records = results.into_iter().collect::<Result<Vec<_>>>()?;
    let max_battery = records.iter().filter(|r| !r.is_control).map(|r| r.norm.relative).fold(0.0, f64::max);
    let min_control = battery
        .controls
        .iter()
        .map(|b| {
            records
                .iter()
                .filter(|r| r.is_control && r.center == [b.center.t, b.center.x] && r.radius == b.radius)
                .map(|r| r.norm.relative)
                .fold(0.0, f64::max)
        })
        .fold(f64::INFINITY, f64::min);
    let contrast = if battery.controls.is_empty() {
        f64::INFINITY
    } else if max_battery > 0.0 {
        min_control / max_battery
    } else if min_control > 0.0 {
        f64::INFINITY
    } else {
        0.0
    };
    let status = if !battery.controls.is_empty() && min_control < cfg.tolerance {
        Verdict::Inconclusive
    } else if max_battery < cfg.tolerance && contrast > cfg.min_contrast {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(LocalityVerdict { status, max_battery, min_control, contrast, records })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Conventions {
    pub fourier: FourierConvention,
    pub boundary: BoundaryConvention,
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct Candidate {
    pub label: String,
    pub conventions: Conventions,
}

impl Candidate {
    /// The four boundary conventions under a fixed Fourier convention.
    pub fn boundary_variants(fourier: FourierConvention) -> Vec<Self> {
        BoundaryConvention::ALL
            .iter()
            .map(|&b| Self { label: b.label().to_string(), conventions: Conventions { fourier, boundary: b } })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct ArbiterReport {
    pub outcomes: Vec<(String, LocalityVerdict)>,
    pub passing: Vec<usize>,
}

impl ArbiterReport {
    pub fn summary(&self) -> String {
        self.outcomes
            .iter()
            .map(|(l, v)| format!("{l}: {:?} max_battery={:.3e} contrast={:.3e}", v.status, v.max_battery, v.contrast))
            .collect::<Vec<_>>()
            .join("\n")
    }

    /// The unique passing candidate.
    pub fn selection(&self) -> Result<usize> {
        match self.passing.as_slice() {
            [i] => Ok(*i),
            [] => Err(Error::NoPassingConvention(self.summary())),
            _ => Err(Error::MultiplePassing(self.summary())),
        }
    }
}

/// Runs the locality battery for every candidate convention.
pub fn evaluate_conventions<F>(
    candidates: &[Candidate],
    build: F,
    region: &DoubleCone<f64>,
    battery: &Battery,
    cfg: &LocalityConfig,
) -> Result<ArbiterReport>
where
    F: Fn(&Conventions) -> Result<TruncatedFockOperator>,
{
    if candidates.len() < 2 {
        return Err(Error::InvalidParameter("the arbiter needs at least two candidates".into()));
    }
    let mut outcomes = Vec::new();
    for c in candidates {
        let a = build(&c.conventions)?;
        let v = locality_verdict(&a, region, battery, c.conventions.fourier, cfg)?;
        outcomes.push((c.label.clone(), v));
    }
    let passing = outcomes.iter().enumerate().filter(|(_, (_, v))| v.pass()).map(|(i, _)| i).collect();
    Ok(ArbiterReport { outcomes, passing })
}

/// Selects the unique candidate convention under which the battery passes.
pub fn convention_arbiter<F>(
    candidates: &[Candidate],
    build: F,
    region: &DoubleCone<f64>,
    battery: &Battery,
    cfg: &LocalityConfig,
) -> Result<(Candidate, ArbiterReport)>
where
    F: Fn(&Conventions) -> Result<TruncatedFockOperator>,
{
    let report = evaluate_conventions(candidates, build, region, battery, cfg)?;
    let i = report.selection()?;
    Ok((candidates[i].clone(), report))
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct RankReport {
    pub rank: usize,
    pub observables: usize,
    /// Total dimension of the sectors reached by some `A_i Ω`.
    pub reachable_dim: usize,
    pub reached_sectors: Vec<usize>,
    pub singular_values: Vec<f64>,
}

/// Numerical rank of `{A_i Ω}`: singular values above `threshold · σ_max`.
pub fn reeh_schlieder_rank(observables: &[TruncatedFockOperator], threshold: f64) -> Result<RankReport> {
    let Some(first) = observables.first() else {
        return Err(Error::InvalidParameter("no observables given".into()));
    };
    let space = first.space().clone();
    let omega = FockVector::vacuum(&space);
    let vectors: Vec<FockVector> = observables.iter().map(|a| a.apply(&omega)).collect();
    let dim = space.dim();
    let mat = DMatrix::<C>::from_fn(dim, vectors.len(), |r, c| vectors[c].flatten()[r]);
    let mut singular_values: Vec<f64> = mat.svd(false, false).singular_values.iter().copied().collect();
    singular_values.sort_by(|a, b| b.partial_cmp(a).expect("finite singular values"));
    let smax = singular_values.first().copied().unwrap_or(0.0);
    let rank = singular_values.iter().filter(|&&s| s > threshold * smax).count();
    let reached_sectors: Vec<usize> = (0..=space.cap()).filter(|&k| vectors.iter().any(|v| v.sector_norm(k) > 0.0)).collect();
    let reachable_dim = reached_sectors.iter().map(|&k| space.sector_dim(k)).sum();
    Ok(RankReport { rank, observables: observables.len(), reachable_dim, reached_sectors, singular_values })
}
