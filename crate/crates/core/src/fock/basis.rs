//! Occupation-number basis of the truncated fermionic Fock space.
//!
//! Sector `k` holds the `k`-subsets of the grid, encoded as bitmasks and
//! ordered lexicographically by their sorted index lists. Basis vector `|I⟩`
//! is `c†_{i_1} ⋯ c†_{i_k} Ω` with `i_1 < ⋯ < i_k`, where `c_i = √w_i z(θ_i)`
//! are orthonormal modes.

use super::grid::RapidityGrid;
use crate::formfactors::combinations;

#[derive(Clone, Debug)]
pub struct FockSpace {
    grid: RapidityGrid,
    cap: usize,
    sectors: Vec<Vec<u64>>,
    binom: Vec<Vec<u64>>,
}

impl FockSpace {
    pub fn new(grid: RapidityGrid, cap: usize) -> Self {
        let n = grid.len();
        let cap = cap.min(n);
        let mut binom = vec![vec![0u64; n + 2]; n + 2];
        for a in 0..=n + 1 {
            binom[a][0] = 1;
            for b in 1..=a {
                binom[a][b] = binom[a - 1][b - 1] + if b < a { binom[a - 1][b] } else { 0 };
            }
        }
        let sectors = (0..=cap)
            .map(|k| combinations(n, k).into_iter().map(|c| c.iter().fold(0u64, |m, &i| m | (1u64 << i))).collect())
            .collect();
        Self { grid, cap, sectors, binom }
    }

    pub fn grid(&self) -> &RapidityGrid {
        &self.grid
    }

    pub fn modes(&self) -> usize {
        self.grid.len()
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn sector(&self, k: usize) -> &[u64] {
        &self.sectors[k]
    }

    pub fn sector_dim(&self, k: usize) -> usize {
        self.sectors.get(k).map_or(0, |s| s.len())
    }

    pub fn dim(&self) -> usize {
        self.sectors.iter().map(|s| s.len()).sum()
    }

    pub fn binomial(&self, n: usize, k: usize) -> u64 {
        if k > n {
            0
        } else {
            self.binom[n][k]
        }
    }

    /// Position of `mask` within its sector.
    pub fn rank(&self, mask: u64) -> usize {
        let n = self.modes();
        let k = mask.count_ones() as usize;
        let mut r = self.binomial(n, k) - 1;
        let mut t = 0;
        let mut m = mask;
        while m != 0 {
            let c = m.trailing_zeros() as usize;
            r -= self.binomial(n - 1 - c, k - t);
            t += 1;
            m &= m - 1;
        }
        r as usize
    }
}

/// Sorted mode indices of a mask.
pub fn indices(mask: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut m = mask;
    while m != 0 {
        out.push(m.trailing_zeros() as usize);
        m &= m - 1;
    }
    out
}

/// `(-1)^{#occupied modes below i}`.
pub fn jordan_wigner_sign(mask: u64, i: usize) -> f64 {
    if (mask & ((1u64 << i) - 1)).count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `c_i |S⟩ = sign |S \ i⟩`, or `None` if `i` is empty.
pub fn annihilate(mask: u64, i: usize) -> Option<(u64, f64)> {
    if mask & (1u64 << i) == 0 {
        return None;
    }
    Some((mask & !(1u64 << i), jordan_wigner_sign(mask, i)))
}

/// `c†_i |S⟩ = sign |S ∪ i⟩`, or `None` if `i` is occupied.
pub fn create(mask: u64, i: usize) -> Option<(u64, f64)> {
    if mask & (1u64 << i) != 0 {
        return None;
    }
    Some((mask | (1u64 << i), jordan_wigner_sign(mask, i)))
}

/// `(-1)^{k(k-1)/2}`, the sign of reversing `k` fermions.
pub fn reversal_sign(k: usize) -> f64 {
    if (k * k.saturating_sub(1) / 2).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexicographic_ranks() {
        let s = FockSpace::new(RapidityGrid::gauss_legendre(7, 1.0), 4);
        for k in 0..=4 {
            for (pos, &m) in s.sector(k).iter().enumerate() {
                assert_eq!(s.rank(m), pos);
            }
            assert_eq!(s.sector_dim(k) as u64, s.binomial(7, k));
        }
        assert_eq!(indices(s.sector(2)[0]), vec![0, 1]);
        assert_eq!(indices(s.sector(2)[1]), vec![0, 2]);
    }

    #[test]
    fn signs() {
        assert_eq!(create(0b101, 1), Some((0b111, -1.0)));
        assert_eq!(create(0b101, 0), None);
        assert_eq!(annihilate(0b111, 2), Some((0b011, 1.0)));
        assert_eq!(reversal_sign(2), -1.0);
        assert_eq!(reversal_sign(4), 1.0);
    }
}
