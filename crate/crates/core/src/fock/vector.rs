use std::sync::Arc;

use num_complex::Complex64 as C;

use super::basis::{indices, reversal_sign, FockSpace};

/// Vector in the truncated Fock space, stored sector by sector in the
/// orthonormal occupation basis.
#[derive(Clone, Debug)]
pub struct FockVector {
    space: Arc<FockSpace>,
    sectors: Vec<Vec<C>>,
}

impl FockVector {
    pub fn zeros(space: &Arc<FockSpace>) -> Self {
        let sectors = (0..=space.cap()).map(|k| vec![C::new(0.0, 0.0); space.sector_dim(k)]).collect();
        Self { space: space.clone(), sectors }
    }

    pub fn vacuum(space: &Arc<FockSpace>) -> Self {
        let mut v = Self::zeros(space);
        v.sectors[0][0] = C::new(1.0, 0.0);
        v
    }

    /// `(1/√k!) ∫ ψ z†(θ_1)⋯z†(θ_k) Ω` for an antisymmetric `ψ`; the
    /// amplitude of `|I⟩` is `√k! Π √w_I ψ(θ_I)`.
    pub fn from_wavefunction(space: &Arc<FockSpace>, k: usize, psi: impl Fn(&[f64]) -> C) -> Self {
        let mut v = Self::zeros(space);
        let grid = space.grid();
        let kfact = (1..=k).map(|x| x as f64).product::<f64>().sqrt();
        for (pos, &mask) in space.sector(k).iter().enumerate() {
            let idx = indices(mask);
            let theta: Vec<f64> = idx.iter().map(|&i| grid.nodes()[i]).collect();
            let w: f64 = idx.iter().map(|&i| grid.sqrt_weight(i)).product();
            v.sectors[k][pos] = psi(&theta) * (w * kfact);
        }
        v
    }

    pub fn from_sectors(space: &Arc<FockSpace>, sectors: Vec<Vec<C>>) -> Self {
        assert_eq!(sectors.len(), space.cap() + 1, "sector count");
        for (k, s) in sectors.iter().enumerate() {
            assert_eq!(s.len(), space.sector_dim(k), "sector {k} dimension");
        }
        Self { space: space.clone(), sectors }
    }

    pub fn space(&self) -> &Arc<FockSpace> {
        &self.space
    }

    pub fn sector(&self, k: usize) -> &[C] {
        &self.sectors[k]
    }

    pub fn sector_mut(&mut self, k: usize) -> &mut [C] {
        &mut self.sectors[k]
    }

    /// `⟨self, other⟩`, antilinear in `self`.
    pub fn inner(&self, other: &Self) -> C {
        self.sectors
            .iter()
            .zip(&other.sectors)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<C>())
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.sectors.iter().flat_map(|s| s.iter()).map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn sector_norm(&self, k: usize) -> f64 {
        self.sectors[k].iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&mut self, a: C) {
        self.sectors.iter_mut().flat_map(|s| s.iter_mut()).for_each(|v| *v *= a);
    }

    /// `self += a * other`.
    pub fn axpy(&mut self, a: C, other: &Self) {
        for (s, o) in self.sectors.iter_mut().zip(&other.sectors) {
            for (x, y) in s.iter_mut().zip(o) {
                *x += a * y;
            }
        }
    }

    /// Zeroes all sectors above `cap`.
    pub fn project(&mut self, cap: usize) {
        for s in self.sectors.iter_mut().skip(cap + 1) {
            s.iter_mut().for_each(|v| *v = C::new(0.0, 0.0));
        }
    }

    pub fn flatten(&self) -> Vec<C> {
        self.sectors.iter().flat_map(|s| s.iter().copied()).collect()
    }

    /// Modular conjugation: complex conjugation combined with reversal of the
    /// rapidity order.
    pub fn apply_j(&self) -> Self {
        let sectors = self
            .sectors
            .iter()
            .enumerate()
            .map(|(k, s)| s.iter().map(|v| v.conj() * reversal_sign(k)).collect())
            .collect();
        Self { space: self.space.clone(), sectors }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::grid::RapidityGrid;

    #[test]
    fn wavefunction_norm_matches_integral() {
        let space = Arc::new(FockSpace::new(RapidityGrid::gauss_legendre(40, 6.0), 2));
        let psi = |t: &[f64]| C::new((t[0] - t[1]) * (-(t[0] * t[0] + t[1] * t[1]) / 2.0).exp(), 0.0);
        let v = FockVector::from_wavefunction(&space, 2, psi);
        // ∫∫ (a-b)² e^{-(a²+b²)} = π
        assert!((v.norm().powi(2) - std::f64::consts::PI).abs() < 1e-10);
    }

    #[test]
    fn j_is_an_antiunitary_involution() {
        let space = Arc::new(FockSpace::new(RapidityGrid::gauss_legendre(5, 2.0), 3));
        let mut v = FockVector::zeros(&space);
        for k in 0..=3 {
            for (i, x) in v.sector_mut(k).iter_mut().enumerate() {
                *x = C::new(i as f64 + 0.5, k as f64 - 1.0);
            }
        }
        let back = v.apply_j().apply_j();
        assert!((back.inner(&v) - C::new(v.norm().powi(2), 0.0)).norm() < 1e-12);
    }
}
