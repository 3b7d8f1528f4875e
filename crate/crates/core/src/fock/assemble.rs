//! Truncated operator of a form-factor family from its boundary values.

use std::sync::Arc;

use num_complex::Complex64 as C;
use rayon::prelude::*;

use super::basis::{annihilate, create, indices, FockSpace};
use super::operator::TruncatedFockOperator;
use crate::error::Result;
use crate::formfactors::{combinations, BoundaryPrescription, FormFactorFamily, LimitMethod};

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Cutoffs {
    pub max_creators: usize,
    pub max_annihilators: usize,
}

impl Cutoffs {
    pub fn new(max_creators: usize, max_annihilators: usize) -> Self {
        Self { max_creators, max_annihilators }
    }
}

#[derive(Clone, Debug)]
pub struct AssembledObservable {
    pub operator: TruncatedFockOperator,
    /// Kernel entries on the singular locus, replaced by principal values.
    pub singular_entries: usize,
    pub extrapolated_entries: usize,
}

/// Kernel `K(I, J) = Π√w_I Π√w_J f_{m,n}(θ_I, θ_J)` on sorted index tuples.
struct KernelTable {
    m: usize,
    n: usize,
    cols: usize,
    values: Vec<C>,
}

/// `A = Σ_{m,n} (1/m!n!) ∫ f_{m,n} z†⋯z† z⋯z`, which on the grid reduces by
/// antisymmetry to `Σ_{I<, J<} K(I, J) c†_{i_1}⋯c†_{i_m} c_{j_1}⋯c_{j_n}`.
pub fn assemble_observable(
    family: &FormFactorFamily<f64>,
    space: &Arc<FockSpace>,
    cutoffs: Cutoffs,
    presc: &BoundaryPrescription<f64>,
) -> Result<AssembledObservable> {
    let grid = space.grid();
    let nn = space.modes();
    let cap = space.cap();
    let mut tables = Vec::new();
    let mut singular = 0;
    let mut extrapolated = 0;
    for m in 0..=cutoffs.max_creators.min(cap) {
        for n in 0..=cutoffs.max_annihilators.min(cap) {
            if !family.supports_length(m + n) {
                continue;
            }
            let rows = combinations(nn, m);
            let cols = combinations(nn, n);
            let entries: Vec<Result<(C, LimitMethod)>> = rows
                .par_iter()
                .flat_map_iter(|i| {
                    let cols = &cols;
                    cols.iter().map(move |j| {
                        let theta: Vec<f64> = i.iter().map(|&a| grid.nodes()[a]).collect();
                        let eta: Vec<f64> = j.iter().map(|&b| grid.nodes()[b]).collect();
                        let w: f64 = i.iter().chain(j).map(|&a| grid.sqrt_weight(a)).product();
                        let bv = family.boundary_coefficient(&theta, &eta, presc)?;
                        Ok((bv.value * w, bv.method))
                    })
                })
                .collect();
            let mut values = Vec::with_capacity(entries.len());
            for e in entries {
                let (v, method) = e?;
                match method {
                    LimitMethod::PrincipalValue => singular += 1,
                    LimitMethod::Extrapolated => extrapolated += 1,
                    LimitMethod::Direct => {}
                }
                values.push(v);
            }
            tables.push(KernelTable { m, n, cols: cols.len(), values });
        }
    }
    let operator = TruncatedFockOperator::from_columns(space, |k, mask| {
        let mut out = Vec::new();
        for t in &tables {
            if k < t.n || k - t.n + t.m > cap {
                continue;
            }
            let occupied = indices(mask);
            for jset in combinations(occupied.len(), t.n) {
                let j: Vec<usize> = jset.iter().map(|&p| occupied[p]).collect();
                let mut s = mask;
                let mut sign = 1.0;
                for &jj in j.iter().rev() {
                    let (next, sg) = annihilate(s, jj).expect("occupied mode");
                    s = next;
                    sign *= sg;
                }
                let free: Vec<usize> = (0..space.modes()).filter(|&i| s & (1u64 << i) == 0).collect();
                let jrank = if t.n == 0 { 0 } else { space_rank_subset(space, &j) };
                for iset in combinations(free.len(), t.m) {
                    let i: Vec<usize> = iset.iter().map(|&p| free[p]).collect();
                    let mut u = s;
                    let mut sg_total = sign;
                    for &ii in i.iter().rev() {
                        let (next, sg) = create(u, ii).expect("empty mode");
                        u = next;
                        sg_total *= sg;
                    }
                    let irank = if t.m == 0 { 0 } else { space_rank_subset(space, &i) };
                    let v = t.values[irank * t.cols + jrank];
                    if v != C::new(0.0, 0.0) {
                        out.push((u, v * sg_total));
                    }
                }
            }
        }
        out
    });
    Ok(AssembledObservable { operator, singular_entries: singular, extrapolated_entries: extrapolated })
}

fn space_rank_subset(space: &FockSpace, idx: &[usize]) -> usize {
    space.rank(idx.iter().fold(0u64, |m, &i| m | (1u64 << i)))
}
