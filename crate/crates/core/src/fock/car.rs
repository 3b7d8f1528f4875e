//! Canonical anticommutation relations of the grid modes as matrix identities.

use std::sync::Arc;

use num_complex::Complex64 as C;
use rayon::prelude::*;

use super::basis::FockSpace;
use super::operator::TruncatedFockOperator;

/// Largest entry of each anticommutator defect over all mode pairs.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct CarResiduals {
    /// Defect of `{c_i, c†_j} = δ_ij` on sectors below the cap.
    pub mixed: f64,
    pub creators: f64,
    pub annihilators: f64,
    pub pairs: usize,
}

fn unit(space: &FockSpace, i: usize) -> Vec<C> {
    let mut h = vec![C::new(0.0, 0.0); space.modes()];
    h[i] = C::new(1.0 / space.grid().sqrt_weight(i), 0.0);
    h
}

/// Checks `{c_i, c†_j} = δ_ij`, `{c†_i, c†_j} = 0` and `{c_i, c_j} = 0` for
/// the orthonormal modes `c_i = √w_i z(θ_i)` on every sector below the cap.
pub fn car_residuals(space: &Arc<FockSpace>) -> CarResiduals {
    let n = space.modes();
    let below = space.cap().saturating_sub(1);
    let cr: Vec<TruncatedFockOperator> = (0..n).map(|i| TruncatedFockOperator::creation(space, &unit(space, i))).collect();
    let an: Vec<TruncatedFockOperator> = (0..n).map(|i| TruncatedFockOperator::annihilation(space, &unit(space, i))).collect();
    let id = TruncatedFockOperator::identity(space).restrict(below);
    let rows: Vec<(f64, f64, f64)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut out = (0.0f64, 0.0f64, 0.0f64);
            for j in 0..n {
                let mut mixed = an[i].anticommutator(&cr[j]).expect("same space").restrict(below);
                if i == j {
                    mixed = mixed.sub(&id).expect("same space");
                }
                out.0 = out.0.max(mixed.max_abs());
                out.1 = out.1.max(cr[i].anticommutator(&cr[j]).expect("same space").max_abs());
                out.2 = out.2.max(an[i].anticommutator(&an[j]).expect("same space").max_abs());
            }
            out
        })
        .collect();
    let fold = |f: fn(&(f64, f64, f64)) -> f64| rows.iter().map(f).fold(0.0, f64::max);
    CarResiduals { mixed: fold(|r| r.0), creators: fold(|r| r.1), annihilators: fold(|r| r.2), pairs: n * n }
}
