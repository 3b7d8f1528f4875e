//! The verification suites. Each returns records, a verdict and plot data.

use std::sync::Arc;

use anyhow::{anyhow, Result};
use ising_core::analyticity::{periodicity_residual, random_tuple, recursion_check, symmetry_residual};
use ising_core::fock::{
    assemble_observable, car_residuals, closability_sum, qomega_norm, Cutoffs, FockSpace, PowerIteration, RapidityGrid, SeriesVerdict,
    TruncatedFockOperator,
};
use ising_core::formfactors::{BoundaryConvention, BoundaryPrescription, FormFactorFamily, NormGrid, PrefactorConvention};
use ising_core::laurent::{PowerSumTower, SymmetricLaurentPolynomial};
use ising_core::locality::{evaluate_conventions, locality_verdict, reeh_schlieder_rank, Battery, Candidate, LocalityConfig};
use ising_core::oracle::{dense_observable, sinh_permutation_sum};
use ising_core::pfaffian::{pfaffian, SquareMatrix};
use ising_core::testfunctions::FourierConvention;
use ising_core::{BumpFunction, FourierCache, Point2D, C64};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::config::{BumpSpec, RunConfig, SUITES};
use crate::report::PlotTable;

pub struct SuiteResult {
    pub pass: bool,
    pub summary: String,
    pub records: serde_json::Value,
    pub plots: Vec<PlotTable>,
}

/// Independent generator per suite, so results do not depend on which
/// other suites run or in which order.
pub fn suite_rng(seed: u64, suite: &str) -> ChaCha8Rng {
    let idx = SUITES.iter().position(|s| *s == suite).unwrap_or(SUITES.len()) as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(idx + 1);
    rng
}

pub fn run_suite(name: &str, cfg: &RunConfig) -> Result<SuiteResult> {
    let mut rng = suite_rng(cfg.seed, name);
    match name {
        "car" => car(cfg),
        "pfaffian" => pfaffian_oracle(cfg, &mut rng),
        "symmetry" => identities(cfg, &mut rng, Identity::Symmetry),
        "periodicity" => identities(cfg, &mut rng, Identity::Periodicity),
        "recursion" => recursion(cfg, &mut rng),
        "closability" => closability(cfg),
        "qomega" => qomega(cfg),
        "locality" => locality(cfg),
        "reeh-schlieder" => reeh_schlieder(cfg, &mut rng),
        "assembly" => assembly(cfg),
        other => Err(anyhow!("unknown suite {other}")),
    }
}

fn cache(spec: &BumpSpec, conv: FourierConvention) -> Result<Arc<FourierCache>> {
    Ok(Arc::new(FourierCache::new(spec.bump()?, conv)))
}

fn space(nodes: usize, theta_max: f64, cap: usize) -> Arc<FockSpace> {
    Arc::new(FockSpace::new(RapidityGrid::gauss_legendre(nodes, theta_max), cap))
}

fn max_of(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().fold(0.0, f64::max)
}

fn car(cfg: &RunConfig) -> Result<SuiteResult> {
    let c = &cfg.car;
    let r = car_residuals(&space(c.nodes, c.theta_max, c.cap));
    let pass = r.mixed < c.tolerance && r.creators < c.tolerance && r.annihilators < c.tolerance;
    Ok(SuiteResult {
        pass,
        summary: format!("N={} K={}: mixed {:.2e}, creators {:.2e}, annihilators {:.2e}", c.nodes, c.cap, r.mixed, r.creators, r.annihilators),
        records: json!({ "nodes": c.nodes, "cap": c.cap, "tolerance": c.tolerance, "residuals": r }),
        plots: vec![],
    })
}

fn pfaffian_oracle(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Result<SuiteResult> {
    let c = &cfg.pfaffian;
    let mut records = Vec::new();
    let mut pass = true;
    for &n in &c.sizes {
        if n % 2 == 1 || n == 0 {
            return Err(anyhow!("pfaffian sizes must be positive and even, got {n}"));
        }
        let k = n / 2;
        let norm = (1u64 << k) as f64 * (1..=k).product::<usize>() as f64;
        let mut worst = 0.0_f64;
        for _ in 0..c.samples {
            let z = random_tuple(rng, n, c.re_max, 0.0);
            let (sum, abs) = sinh_permutation_sum(&z);
            let m = SquareMatrix::from_fn(n, |a, b| ((z[a] - z[b]) / 2.0).sinh());
            let pf = pfaffian(&m)? * norm;
            worst = worst.max((sum - pf).norm() / abs.max(f64::MIN_POSITIVE));
        }
        pass &= worst < c.tolerance;
        records.push(json!({ "size": n, "samples": c.samples, "max_relative_residual": worst }));
    }
    Ok(SuiteResult {
        pass,
        summary: format!("{} sizes, residuals relative to the sum of absolute permutation terms", c.sizes.len()),
        records: json!({ "tolerance": c.tolerance, "cases": records }),
        plots: vec![],
    })
}

#[derive(Clone, Copy, PartialEq)]
enum Identity {
    Symmetry,
    Periodicity,
}

fn even_member(k: usize, smearing: Arc<FourierCache>) -> Result<FormFactorFamily<f64>> {
    let mut e = vec![0; 2 * k];
    e[0] = 1;
    let p = SymmetricLaurentPolynomial::new(2 * k, &[(e, C64::new(0.6, -0.1)), (vec![0; 2 * k], C64::new(1.0, 0.0))])?;
    Ok(FormFactorFamily::even(k, p, smearing, 0.5, 1.0)?)
}

fn odd_member(s: i32, smearing: Arc<FourierCache>, pref: PrefactorConvention) -> Result<FormFactorFamily<f64>> {
    let w = ising_core::OmegaIndicatrix::stretched_power(0.4)?;
    Ok(FormFactorFamily::odd(PowerSumTower::odd(s), pref, smearing, 0.5, 1.0, w)?)
}

fn identities(cfg: &RunConfig, rng: &mut ChaCha8Rng, which: Identity) -> Result<SuiteResult> {
    let c = if which == Identity::Symmetry { &cfg.symmetry } else { &cfg.periodicity };
    let g = cache(&c.bump, cfg.conventions.fourier())?;
    let mut cases: Vec<(FormFactorFamily<f64>, usize)> = Vec::new();
    for &k in &c.even_half_lengths {
        cases.push((even_member(k, g.clone())?, 2 * k));
    }
    for &j in &c.odd_levels {
        cases.push((odd_member(c.odd_s, g.clone(), PrefactorConvention::PerLevel)?, 2 * j + 1));
    }
    let mut records = Vec::new();
    let mut pass = true;
    for (fam, len) in &cases {
        let mut worst = 0.0_f64;
        for _ in 0..c.samples {
            let z = random_tuple(rng, *len, c.re_max, 0.05);
            let r = match which {
                Identity::Symmetry => max_of((0..len - 1).map(|a| symmetry_residual(fam, &z, a)).collect::<ising_core::Result<Vec<_>>>()?),
                Identity::Periodicity => max_of((0..*len).map(|a| periodicity_residual(fam, &z, a)).collect::<ising_core::Result<Vec<_>>>()?),
            };
            worst = worst.max(r);
        }
        pass &= worst < c.tolerance;
        records.push(json!({ "family": fam.label(), "length": len, "samples": c.samples, "max_residual": worst }));
    }
    Ok(SuiteResult {
        pass,
        summary: format!("{} family members, {} tuples each", cases.len(), c.samples),
        records: json!({ "tolerance": c.tolerance, "cases": records }),
        plots: vec![],
    })
}

/// Tuple of `len` points, pairwise separated by at least `0.5` and away from
/// the pole locus, so a contour of radius `≤ 0.25` isolates one pole.
fn separated_tuple(rng: &mut ChaCha8Rng, len: usize) -> Vec<C64> {
    loop {
        let z = random_tuple(rng, len, 1.0, 0.5);
        if (0..len).all(|a| (a + 1..len).all(|b| (z[a] - z[b]).norm() > 0.5)) {
            return z;
        }
    }
}

#[derive(Serialize)]
struct RecursionSample {
    length: usize,
    m: usize,
    n: usize,
    residual: f64,
    residual_half_radius: f64,
    stability: f64,
}

fn recursion(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Result<SuiteResult> {
    let c = &cfg.recursion;
    let g = cache(&c.bump, cfg.conventions.fourier())?;
    let mut plot = PlotTable::new("recursion", &["length", "radius", "residual"]);
    let mut odd_cases = Vec::new();
    let mut pass = true;
    let mut draws: Vec<(usize, Vec<C64>, C64, usize, usize)> = Vec::new();
    for case in &c.odd {
        if case.length < 3 || case.length % 2 == 0 {
            return Err(anyhow!("odd recursion lengths must be odd and at least 3, got {}", case.length));
        }
        for trial in 0..c.samples {
            let mut z = separated_tuple(rng, case.length - 1);
            let anchor = z.pop().expect("nonempty");
            let m = 1 + trial % (case.length - 1);
            let n = m + 1 + (trial / 2) % (case.length - m);
            draws.push((case.length, z, anchor, m, n));
        }
    }
    let fam = odd_member(c.odd_s, g.clone(), PrefactorConvention::PerLevel)?;
    for case in &c.odd {
        let mut samples = Vec::new();
        for (len, z, anchor, m, n) in draws.iter().filter(|d| d.0 == case.length) {
            let a = recursion_check(&fam, z, *m, *n, *anchor, c.radius, c.points)?;
            let b = recursion_check(&fam, z, *m, *n, *anchor, c.radius / 2.0, 2 * c.points)?;
            let la = C64::new(a.lhs[0], a.lhs[1]);
            let lb = C64::new(b.lhs[0], b.lhs[1]);
            let stability = (la - lb).norm() / la.norm().max(f64::MIN_POSITIVE);
            pass &= a.residual < case.tolerance && b.residual < case.tolerance && stability < c.stability;
            plot.push(vec![Some(*len as f64), Some(c.radius), Some(a.residual)]);
            plot.push(vec![Some(*len as f64), Some(c.radius / 2.0), Some(b.residual)]);
            samples.push(RecursionSample { length: *len, m: *m, n: *n, residual: a.residual, residual_half_radius: b.residual, stability });
        }
        odd_cases.push(json!({
            "length": case.length,
            "tolerance": case.tolerance,
            "max_residual": max_of(samples.iter().map(|s| s.residual.max(s.residual_half_radius))),
            "max_instability": max_of(samples.iter().map(|s| s.stability)),
            "samples": samples,
        }));
    }
    let mut even_cases = Vec::new();
    for &k in &c.even_half_lengths {
        let fam = even_member(k, g.clone())?;
        let mut worst = 0.0_f64;
        let mut rhs_exact_zero = true;
        for _ in 0..c.samples {
            let mut z = separated_tuple(rng, 2 * k - 1);
            let anchor = z.pop().expect("nonempty");
            let r = recursion_check(&fam, &z, 1, 2 * k, anchor, c.radius, c.points)?;
            worst = worst.max(r.residual);
            rhs_exact_zero &= r.rhs == [0.0, 0.0];
        }
        pass &= worst < c.even_tolerance && rhs_exact_zero;
        even_cases.push(json!({ "length": 2 * k, "max_residual": worst, "rhs_exact_zero": rhs_exact_zero }));
    }
    let mut prefactors = Vec::new();
    let shortest = c.odd.iter().min_by_key(|o| o.length).ok_or_else(|| anyhow!("no odd recursion case configured"))?;
    for p in PrefactorConvention::ALL {
        let f = odd_member(c.odd_s, g.clone(), p)?;
        let mut worst = 0.0_f64;
        for (_, z, anchor, m, n) in draws.iter().filter(|d| d.0 == shortest.length) {
            worst = worst.max(recursion_check(&f, z, *m, *n, *anchor, c.radius, c.points)?.residual);
        }
        prefactors.push(json!({ "prefactor": format!("{p:?}"), "max_residual": worst, "satisfied": worst < shortest.tolerance }));
    }
    let satisfied: Vec<&str> = prefactors.iter().filter(|p| p["satisfied"] == true).map(|p| p["prefactor"].as_str().unwrap_or_default()).collect();
    let unique = satisfied == ["PerLevel"];
    pass &= unique;
    Ok(SuiteResult {
        pass,
        summary: format!("odd lengths {:?}, even lengths {:?}, prefactors satisfying the recursion: {satisfied:?}", c.odd.iter().map(|o| o.length).collect::<Vec<_>>(), c.even_half_lengths.iter().map(|k| 2 * k).collect::<Vec<_>>()),
        records: json!({ "odd": odd_cases, "even": even_cases, "prefactors": prefactors, "unique_prefactor": unique }),
        plots: vec![plot],
    })
}

fn series_table(name: &str, r: &ising_core::fock::ClosabilityReport) -> PlotTable {
    let mut t = PlotTable::new(name, &["m", "term", "partial_sum", "ratio"]);
    for x in &r.terms {
        t.push(vec![Some(x.m as f64), Some(x.term), Some(x.partial_sum), x.ratio]);
    }
    t
}

fn closability(cfg: &RunConfig) -> Result<SuiteResult> {
    let c = &cfg.closability;
    let presc = BoundaryPrescription::with_convention(cfg.conventions.boundary());
    let g = cache(&c.bump, cfg.conventions.fourier())?;
    let even = FormFactorFamily::even(1, SymmetricLaurentPolynomial::constant(2, C64::new(1.0, 0.0)), g.clone(), 0.5, 1.0)?;
    let even_omega = c.even_omega.omega()?;
    let mut even_runs = Vec::new();
    for &nodes in &c.even_nodes {
        let r = closability_sum(&even, 0, &even_omega, 3, &NormGrid::gauss_legendre(nodes, c.even_theta_max).with_damping(c.norm_damping), &presc);
        let nonzero = r.terms.iter().filter(|t| t.term != 0.0).count();
        even_runs.push((nodes, r, nonzero));
    }
    let sums: Vec<f64> = even_runs.iter().map(|(_, r, _)| r.terms.last().map(|t| t.partial_sum).unwrap_or(f64::NAN)).collect();
    let finest = *sums.last().ok_or_else(|| anyhow!("no even grids configured"))?;
    let refinement = max_of(sums.iter().map(|s| (s - finest).abs() / finest.abs()));
    let even_ok = even_runs.iter().all(|(_, r, nz)| r.verdict == SeriesVerdict::Converging && *nz == 1) && refinement < c.refinement_tolerance && finest.is_finite();

    let grid = NormGrid::gauss_legendre(c.odd_nodes, c.odd_theta_max).with_damping(c.norm_damping);
    let odd_omega = c.odd_omega.omega()?;
    let odd = odd_member(c.odd_s, g.clone(), PrefactorConvention::PerLevel)?;
    let tower = closability_sum(&odd, 0, &odd_omega, c.m_max, &grid, &presc);
    let ctl_omega = c.control_omega.omega()?;
    let control = closability_sum(&odd, 0, &ctl_omega, c.m_max, &grid, &presc);
    let odd_ok = tower.verdict == SeriesVerdict::Converging;
    let control_ok = control.verdict != SeriesVerdict::Converging;
    Ok(SuiteResult {
        pass: even_ok && odd_ok && control_ok,
        summary: format!(
            "even: refinement {:.2e}; odd {}: {:?}; control {}: {:?}",
            refinement,
            odd_omega.label(),
            tower.verdict,
            ctl_omega.label(),
            control.verdict
        ),
        records: json!({
            "even": {
                "omega": even_omega.label(),
                "runs": even_runs.iter().map(|(n, r, nz)| json!({ "nodes": n, "nonzero_terms": nz, "report": r })).collect::<Vec<_>>(),
                "refinement_variation": refinement,
                "pass": even_ok,
            },
            "odd": { "report": tower, "pass": odd_ok },
            "control": { "report": control, "pass": control_ok },
        }),
        plots: vec![series_table("closability", &tower), series_table("closability_control", &control)],
    })
}

fn qomega(cfg: &RunConfig) -> Result<SuiteResult> {
    let c = &cfg.qomega;
    let presc = BoundaryPrescription::with_convention(cfg.conventions.boundary());
    let g = cache(&c.bump, cfg.conventions.fourier())?;
    let fam = FormFactorFamily::even(1, SymmetricLaurentPolynomial::constant(2, C64::new(1.0, 0.0)), g, 0.5, 1.0)?;
    let omega = c.omega.omega()?;
    let mut runs = Vec::new();
    for &n in &c.nodes {
        let sp = space(n, c.theta_max, c.cap);
        let a = assemble_observable(&fam, &sp, Cutoffs::new(2, 2), &presc)?.operator;
        let q = qomega_norm(&a, c.k, &omega, &PowerIteration::default())?;
        runs.push((n, q));
    }
    let totals: Vec<f64> = runs.iter().map(|(_, q)| q.total()).collect();
    let hi = max_of(totals.iter().copied());
    let lo = totals.iter().copied().fold(f64::INFINITY, f64::min);
    let variation = if hi > 0.0 { (hi - lo) / hi } else { f64::NAN };
    let pass = totals.iter().all(|t| t.is_finite() && *t > 0.0) && variation < c.variation;
    Ok(SuiteResult {
        pass,
        summary: format!("{} at N = {:?}: variation {:.2e}", omega.label(), c.nodes, variation),
        records: json!({
            "omega": omega.label(),
            "k": c.k,
            "runs": runs.iter().map(|(n, q)| json!({ "nodes": n, "norm": q, "total": q.total() })).collect::<Vec<_>>(),
            "variation": variation,
            "tolerance": c.variation,
        }),
        plots: vec![],
    })
}

fn locality(cfg: &RunConfig) -> Result<SuiteResult> {
    let c = &cfg.locality;
    let fourier = cfg.conventions.fourier();
    let sp = space(c.nodes, c.theta_max, c.cap);
    let region = ising_core::DoubleCone::standard(c.region_radius)?;
    let to_bumps = |v: &[BumpSpec]| v.iter().map(|b| b.bump()).collect::<std::result::Result<Vec<BumpFunction>, _>>();
    let battery = Battery { left: to_bumps(&c.left)?, right: to_bumps(&c.right)?, controls: to_bumps(&c.controls)? };
    let lcfg = LocalityConfig {
        k_cap: c.k_cap,
        tolerance: c.tolerance,
        min_contrast: c.min_contrast,
        margin: c.margin,
        omega: c.scan_omega.omega()?,
        ..LocalityConfig::default()
    };
    let build = |conv: &ising_core::locality::Conventions| -> ising_core::Result<TruncatedFockOperator> {
        let fam = c.observable.family_with(conv.fourier).map_err(|e| ising_core::Error::InvalidParameter(e.to_string()))?;
        let cut = Cutoffs::new(c.cap, c.cap);
        Ok(assemble_observable(&fam, &sp, cut, &BoundaryPrescription::with_convention(conv.boundary))?.operator)
    };
    let configured = cfg.conventions.boundary();
    let (verdict, arbiter) = if c.arbitrate {
        let candidates = Candidate::boundary_variants(fourier);
        let report = evaluate_conventions(&candidates, build, &region, &battery, &lcfg)?;
        let idx = candidates.iter().position(|x| x.conventions.boundary == configured).expect("all variants present");
        let selected = report.selection().ok().map(|i| candidates[i].label.clone());
        (report.outcomes[idx].1.clone(), Some((report, selected)))
    } else {
        let a = build(&ising_core::locality::Conventions { fourier, boundary: configured })?;
        (locality_verdict(&a, &region, &battery, fourier, &lcfg)?, None)
    };
    let mut plot = PlotTable::new("locality", &["separation", "rel_comm_norm", "is_control"]);
    for r in &verdict.records {
        plot.push(vec![Some(r.separation), Some(r.norm.relative), Some(if r.is_control { 1.0 } else { 0.0 })]);
    }
    let unique = match &arbiter {
        Some((_, Some(label))) => label == configured.label(),
        Some((_, None)) => false,
        None => true,
    };
    let pass = verdict.pass() && unique;
    let summary = format!(
        "{}: {:?}, max battery {:.3e}, contrast {:.3e}{}",
        configured.label(),
        verdict.status,
        verdict.max_battery,
        verdict.contrast,
        match &arbiter {
            Some((r, sel)) => format!("; passing conventions {:?}, selected {:?}", r.passing.iter().map(|&i| r.outcomes[i].0.clone()).collect::<Vec<_>>(), sel),
            None => String::new(),
        }
    );
    Ok(SuiteResult {
        pass,
        summary,
        records: json!({
            "nodes": c.nodes,
            "cap": c.cap,
            "k_cap": c.k_cap,
            "configured": configured.label(),
            "verdict": verdict,
            "arbiter": arbiter.as_ref().map(|(r, sel)| json!({ "report": r, "selected": sel })),
            "unique": unique,
        }),
        plots: vec![plot],
    })
}

fn reeh_schlieder(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Result<SuiteResult> {
    let c = &cfg.reeh_schlieder;
    let fourier = cfg.conventions.fourier();
    let presc = BoundaryPrescription::with_convention(cfg.conventions.boundary());
    let sp = space(c.nodes, c.theta_max, c.cap);
    let cut = Cutoffs::new(c.cap, c.cap);
    let g0 = Arc::new(FourierCache::new(BumpFunction::new(Point2D::new(0.0, 0.0), 0.3, 1.0)?, fourier));
    let constant = FormFactorFamily::even(0, SymmetricLaurentPolynomial::constant(0, C64::new(1.0, 0.0)), g0, c.region_radius, 1.0)?;
    let mut even = vec![assemble_observable(&constant, &sp, cut, &presc)?.operator];
    let translate = |rng: &mut ChaCha8Rng| -> Result<Arc<FourierCache>> {
        let b = BumpFunction::new(Point2D::new(rng.random_range(-0.1..0.1), rng.random_range(-0.1..0.1)), 0.2, 1.0)?;
        Ok(Arc::new(FourierCache::new(b, fourier)))
    };
    for _ in 0..c.even_members {
        let g = translate(rng)?;
        let e = vec![rng.random_range(-2..=2), rng.random_range(-2..=2)];
        let coef = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let p = SymmetricLaurentPolynomial::new(2, &[(e, coef)])?;
        let fam = FormFactorFamily::even(1, p, g, c.region_radius, 1.0)?;
        even.push(assemble_observable(&fam, &sp, cut, &presc)?.operator);
    }
    let mut all = even.clone();
    for i in 0..c.odd_members {
        let g = translate(rng)?;
        let w = ising_core::OmegaIndicatrix::stretched_power(0.4)?;
        let fam = FormFactorFamily::odd(PowerSumTower::odd((i % 3) as i32), PrefactorConvention::PerLevel, g, c.region_radius, 1.0, w)?;
        all.push(assemble_observable(&fam, &sp, cut, &presc)?.operator);
    }
    let re = reeh_schlieder_rank(&even, c.threshold)?;
    let ra = reeh_schlieder_rank(&all, c.threshold)?;
    let prefix: Vec<usize> = [1, 2, 5, 10, 20, 40, even.len()]
        .iter()
        .filter(|&&n| n <= even.len())
        .map(|&n| reeh_schlieder_rank(&even[..n], c.threshold).map(|r| r.rank))
        .collect::<ising_core::Result<_>>()?;
    let even_dim: usize = (0..=c.cap).step_by(2).map(|k| sp.sector_dim(k)).sum();
    let monotone = prefix.windows(2).all(|w| w[0] <= w[1]);
    let pass = re.rank == even_dim && re.reachable_dim == even_dim && ra.rank > re.rank && monotone;
    Ok(SuiteResult {
        pass,
        summary: format!("even rank {} of {even_dim}; with odd members {} of {}", re.rank, ra.rank, sp.dim()),
        records: json!({
            "even_parity_dim": even_dim,
            "even": { "observables": re.observables, "rank": re.rank, "reachable_dim": re.reachable_dim, "sectors": re.reached_sectors },
            "with_odd": { "observables": ra.observables, "rank": ra.rank, "reachable_dim": ra.reachable_dim, "sectors": ra.reached_sectors },
            "prefix_ranks": prefix,
            "monotone": monotone,
        }),
        plots: vec![],
    })
}

struct BlockError {
    sectors: (usize, usize),
    scale: f64,
    relative: f64,
}

/// Deviation per `(k_out, k_in)` sector block, relative to the block's largest dense entry.
fn block_errors(sp: &FockSpace, fast: &[Vec<C64>], dense: &[Vec<C64>]) -> Vec<BlockError> {
    let offsets: Vec<usize> = (0..=sp.cap() + 1).map(|k| (0..k).map(|j| sp.sector_dim(j)).sum()).collect();
    let mut out = Vec::new();
    for a in 0..=sp.cap() {
        for b in 0..=sp.cap() {
            let (rows, cols) = (offsets[a]..offsets[a + 1], offsets[b]..offsets[b + 1]);
            let cells = || rows.clone().flat_map(|r| cols.clone().map(move |c| (r, c)));
            let scale = max_of(cells().map(|(r, c)| dense[r][c].norm()));
            let err = max_of(cells().map(|(r, c)| (fast[r][c] - dense[r][c]).norm()));
            out.push(BlockError { sectors: (a, b), scale, relative: if scale > 0.0 { err / scale } else { err } });
        }
    }
    out
}

fn assembly(cfg: &RunConfig) -> Result<SuiteResult> {
    let c = &cfg.assembly;
    let g = cache(&c.bump, cfg.conventions.fourier())?;
    let families = [(even_member(1, g.clone())?, Cutoffs::new(2, 2)), (odd_member(0, g.clone(), PrefactorConvention::PerLevel)?, Cutoffs::new(3, 3)), (odd_member(1, g, PrefactorConvention::PerLevel)?, Cutoffs::new(3, 3))];
    let mut records = Vec::new();
    let mut pass = true;
    for (fam, cut) in &families {
        for conv in BoundaryConvention::ALL {
            for &[nodes, cap] in &c.grids {
                let grid = RapidityGrid::gauss_legendre(nodes, c.theta_max);
                let presc = BoundaryPrescription::with_convention(conv);
                let dense = dense_observable(fam, grid.nodes(), grid.weights(), cap, cut.max_creators, cut.max_annihilators, &presc)?;
                let sp = Arc::new(FockSpace::new(grid, cap));
                let fast = assemble_observable(fam, &sp, *cut, &presc)?.operator.to_dense();
                let err = max_of(fast.iter().flatten().zip(dense.iter().flatten()).map(|(a, b)| (a - b).norm()));
                let blocks = block_errors(&sp, &fast, &dense);
                let rel = blocks.iter().map(|b| b.relative).fold(0.0, f64::max);
                let ok = fast.len() == dense.len() && rel < c.tolerance;
                pass &= ok;
                let nonzero = blocks.iter().filter(|b| b.scale > 0.0).map(|b| [b.sectors.0, b.sectors.1]).collect::<Vec<_>>();
                records.push(json!({ "family": fam.label(), "convention": conv.label(), "nodes": nodes, "cap": cap, "relative_error": rel, "absolute_error": err, "nonzero_blocks": nonzero }));
            }
        }
    }
    Ok(SuiteResult {
        pass,
        summary: format!("{} comparisons against dense loop assembly", records.len()),
        records: json!({ "tolerance": c.tolerance, "cases": records }),
        plots: vec![],
    })
}
