//! Particle-number-truncated operators as collections of sparse sector blocks.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64 as C;
use rayon::prelude::*;

use super::basis::{annihilate, create, reversal_sign, FockSpace};
use super::sparse::SparseBlock;
use super::vector::FockVector;
use crate::error::{Error, Result};
use crate::omega::OmegaIndicatrix;
use crate::testfunctions::{FourierCache, Frequency};

/// Operator on the Fock space truncated at particle number `cap`; block
/// `(k_out, k_in)` maps sector `k_in` to sector `k_out`.
#[derive(Clone, Debug)]
pub struct TruncatedFockOperator {
    space: Arc<FockSpace>,
    blocks: BTreeMap<(usize, usize), SparseBlock>,
}

const ONE: C = C::new(1.0, 0.0);
const ZERO: C = C::new(0.0, 0.0);

impl TruncatedFockOperator {
    pub fn zero(space: &Arc<FockSpace>) -> Self {
        Self { space: space.clone(), blocks: BTreeMap::new() }
    }

    pub fn from_blocks(space: &Arc<FockSpace>, blocks: BTreeMap<(usize, usize), SparseBlock>) -> Self {
        for (&(a, b), blk) in &blocks {
            assert_eq!((blk.rows(), blk.cols()), (space.sector_dim(a), space.sector_dim(b)), "block ({a},{b}) shape");
        }
        let blocks = blocks.into_iter().filter(|(_, b)| !b.is_zero()).collect();
        Self { space: space.clone(), blocks }
    }

    /// Builds an operator column by column: `column(k_in, mask)` lists
    /// `(output mask, value)` pairs.
    pub fn from_columns<F>(space: &Arc<FockSpace>, column: F) -> Self
    where
        F: Fn(usize, u64) -> Vec<(u64, C)> + Sync,
    {
        let mut triplets: BTreeMap<(usize, usize), Vec<(u32, u32, C)>> = BTreeMap::new();
        for k in 0..=space.cap() {
            let cols: Vec<Vec<(u64, C)>> = space.sector(k).par_iter().map(|&m| column(k, m)).collect();
            for (ci, entries) in cols.into_iter().enumerate() {
                for (out, v) in entries {
                    let ko = out.count_ones() as usize;
                    if ko > space.cap() {
                        continue;
                    }
                    triplets.entry((ko, k)).or_default().push((space.rank(out) as u32, ci as u32, v));
                }
            }
        }
        let blocks = triplets
            .into_iter()
            .map(|((a, b), t)| ((a, b), SparseBlock::from_triplets(space.sector_dim(a), space.sector_dim(b), t)))
            .collect();
        Self::from_blocks(space, blocks)
    }

    pub fn diagonal(space: &Arc<FockSpace>, f: impl Fn(u64) -> C + Sync) -> Self {
        let blocks = (0..=space.cap())
            .map(|k| {
                let d: Vec<C> = space.sector(k).iter().map(|&m| f(m)).collect();
                ((k, k), SparseBlock::diagonal(&d))
            })
            .collect();
        Self::from_blocks(space, blocks)
    }

    pub fn identity(space: &Arc<FockSpace>) -> Self {
        Self::diagonal(space, |_| ONE)
    }

    /// `Q_k`, the projection onto particle numbers `≤ k`.
    pub fn projector(space: &Arc<FockSpace>, k: usize) -> Self {
        Self::diagonal(space, |m| if (m.count_ones() as usize) <= k { ONE } else { ZERO })
    }

    /// `(-1)^N`.
    pub fn parity(space: &Arc<FockSpace>) -> Self {
        Self::diagonal(space, |m| if m.count_ones() % 2 == 0 { ONE } else { -ONE })
    }

    /// `H = Σ μ cosh θ_i n_i`.
    pub fn hamiltonian(space: &Arc<FockSpace>, mass: f64) -> Self {
        let nodes = space.grid().nodes().to_vec();
        Self::diagonal(space, |m| C::new(mass * energy(&nodes, m), 0.0))
    }

    /// `e^{-ω(H/μ)}`.
    pub fn damping(space: &Arc<FockSpace>, omega: &OmegaIndicatrix<f64>) -> Result<Self> {
        let nodes = space.grid().nodes().to_vec();
        for k in 0..=space.cap() {
            for &m in space.sector(k) {
                omega.eval(energy(&nodes, m))?;
            }
        }
        Ok(Self::diagonal(space, |m| C::new(omega.damping(energy(&nodes, m)).expect("checked above"), 0.0)))
    }

    /// `z†(h) = ∫ h(θ) z†(θ) dθ = Σ √w_i h(θ_i) c†_i`.
    pub fn creation(space: &Arc<FockSpace>, h: &[C]) -> Self {
        assert_eq!(h.len(), space.modes(), "grid function length");
        let c: Vec<C> = h.iter().enumerate().map(|(i, v)| v * space.grid().sqrt_weight(i)).collect();
        Self::from_columns(space, |_, m| {
            (0..c.len())
                .filter_map(|i| create(m, i).map(|(out, s)| (out, c[i] * s)))
                .filter(|(_, v)| *v != ZERO)
                .collect()
        })
    }

    /// `z(h) = ∫ h(θ) z(θ) dθ = Σ √w_i h(θ_i) c_i`, linear in `h`.
    pub fn annihilation(space: &Arc<FockSpace>, h: &[C]) -> Self {
        assert_eq!(h.len(), space.modes(), "grid function length");
        let c: Vec<C> = h.iter().enumerate().map(|(i, v)| v * space.grid().sqrt_weight(i)).collect();
        Self::from_columns(space, |_, m| {
            (0..c.len())
                .filter_map(|i| annihilate(m, i).map(|(out, s)| (out, c[i] * s)))
                .filter(|(_, v)| *v != ZERO)
                .collect()
        })
    }

    pub fn space(&self) -> &Arc<FockSpace> {
        &self.space
    }

    pub fn blocks(&self) -> &BTreeMap<(usize, usize), SparseBlock> {
        &self.blocks
    }

    pub fn block(&self, k_out: usize, k_in: usize) -> Option<&SparseBlock> {
        self.blocks.get(&(k_out, k_in))
    }

    pub fn nnz(&self) -> usize {
        self.blocks.values().map(|b| b.nnz()).sum()
    }

    /// Largest particle-number decrease and increase among the blocks.
    pub fn shift_bounds(&self) -> (usize, usize) {
        self.blocks.keys().fold((0, 0), |(down, up), &(a, b)| (down.max(b.saturating_sub(a)), up.max(a.saturating_sub(b))))
    }

    pub fn apply(&self, v: &FockVector) -> FockVector {
        self.apply_capped(v, self.space.cap())
    }

    /// `Q_{out_cap} A v`, skipping blocks whose output is discarded.
    pub fn apply_capped(&self, v: &FockVector, out_cap: usize) -> FockVector {
        let mut out = FockVector::zeros(&self.space);
        for (&(a, b), blk) in &self.blocks {
            if a > out_cap || v.sector(b).iter().all(|x| *x == ZERO) {
                continue;
            }
            blk.matvec_acc(v.sector(b), out.sector_mut(a), ONE);
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        let blocks = self.blocks.iter().map(|(&(a, b), blk)| ((b, a), blk.adjoint())).collect();
        Self { space: self.space.clone(), blocks }
    }

    fn same_space(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.space, &other.space) {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    /// `self · other` on the truncated space.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        let mut blocks: BTreeMap<(usize, usize), SparseBlock> = BTreeMap::new();
        for (&(a, b), x) in &self.blocks {
            for (&(b2, c), y) in other.blocks.range((b, 0)..=(b, usize::MAX)) {
                debug_assert_eq!(b, b2);
                let p = x.matmul(y);
                match blocks.get_mut(&(a, c)) {
                    Some(acc) => *acc = acc.combine(ONE, &p, ONE),
                    None => {
                        blocks.insert((a, c), p);
                    }
                }
            }
        }
        Ok(Self::from_blocks(&self.space, blocks))
    }

    /// `alpha · self + beta · other`.
    pub fn combine(&self, alpha: C, other: &Self, beta: C) -> Result<Self> {
        self.same_space(other)?;
        let mut blocks: BTreeMap<(usize, usize), SparseBlock> = self.blocks.iter().map(|(&k, b)| (k, b.scaled(alpha))).collect();
        for (&k, b) in &other.blocks {
            match blocks.get_mut(&k) {
                Some(acc) => *acc = acc.combine(ONE, b, beta),
                None => {
                    blocks.insert(k, b.scaled(beta));
                }
            }
        }
        Ok(Self::from_blocks(&self.space, blocks))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(ONE, other, ONE)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(ONE, other, -ONE)
    }

    pub fn scaled(&self, a: C) -> Self {
        let blocks = self.blocks.iter().map(|(&k, b)| (k, b.scaled(a))).collect();
        Self { space: self.space.clone(), blocks }
    }

    pub fn anticommutator(&self, other: &Self) -> Result<Self> {
        self.compose(other)?.add(&other.compose(self)?)
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.compose(other)?.sub(&other.compose(self)?)
    }

    /// `Q_k A Q_k`.
    pub fn restrict(&self, k: usize) -> Self {
        let blocks = self.blocks.iter().filter(|(&(a, b), _)| a <= k && b <= k).map(|(&key, b)| (key, b.clone())).collect();
        Self { space: self.space.clone(), blocks }
    }

    pub fn max_abs(&self) -> f64 {
        self.blocks.values().map(|b| b.max_abs()).fold(0.0, f64::max)
    }

    /// `J A J`, with `(JAJ)_{T,I} = σ_{|T|} σ_{|I|} conj(A_{T,I})` and
    /// `σ_k = (-1)^{k(k-1)/2}`.
    pub fn conjugate_by_j(&self) -> Self {
        let blocks = self
            .blocks
            .iter()
            .map(|(&(a, b), blk)| ((a, b), blk.conj().scaled(C::new(reversal_sign(a) * reversal_sign(b), 0.0))))
            .collect();
        Self { space: self.space.clone(), blocks }
    }

    /// Dense matrix over the whole truncated space, sectors in order.
    pub fn to_dense(&self) -> Vec<Vec<C>> {
        let offsets: Vec<usize> = (0..=self.space.cap())
            .scan(0, |acc, k| {
                let o = *acc;
                *acc += self.space.sector_dim(k);
                Some(o)
            })
            .collect();
        let n = self.space.dim();
        let mut d = vec![vec![ZERO; n]; n];
        for (&(a, b), blk) in &self.blocks {
            for (r, c, v) in blk.triplets() {
                d[offsets[a] + r][offsets[b] + c] += v;
            }
        }
        d
    }

    /// Writes the blocks as CSV: a header with the grid nodes and weights,
    /// then `k_out,k_in,row,col,re,im` with rows and columns indexing the
    /// lexicographically ordered index combinations of each sector.
    pub fn write_csv(&self, out: &mut impl std::io::Write) -> std::io::Result<()> {
        let g = self.space.grid();
        let join = |v: &[f64]| v.iter().map(|x| format!("{x:e}")).collect::<Vec<_>>().join(";");
        writeln!(out, "# cap={} modes={}", self.space.cap(), self.space.modes())?;
        writeln!(out, "# nodes={}", join(g.nodes()))?;
        writeln!(out, "# weights={}", join(g.weights()))?;
        writeln!(out, "k_out,k_in,row,col,re,im")?;
        for (&(a, b), blk) in &self.blocks {
            for (r, c, v) in blk.triplets() {
                writeln!(out, "{a},{b},{r},{c},{:e},{:e}", v.re, v.im)?;
            }
        }
        Ok(())
    }
}

fn energy(nodes: &[f64], mask: u64) -> f64 {
    super::basis::indices(mask).iter().map(|&i| nodes[i].cosh()).sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldKind {
    /// `φ(f) = z†(f⁺) + z(f⁻)`, localized in left wedges.
    Left,
    /// `φ'(f) = J φ(f∘(-id)) J`, localized in right wedges.
    Right,
}

/// Wedge-local field smeared with the bump of `smearing`.
pub fn field(space: &Arc<FockSpace>, smearing: &FourierCache<f64>, kind: FieldKind, mass: f64) -> TruncatedFockOperator {
    match kind {
        FieldKind::Left => left_field(space, smearing, mass),
        FieldKind::Right => {
            let reflected = FourierCache::new(smearing.bump().reflected(), smearing.convention());
            left_field(space, &reflected, mass).conjugate_by_j()
        }
    }
}

fn left_field(space: &Arc<FockSpace>, smearing: &FourierCache<f64>, mass: f64) -> TruncatedFockOperator {
    let th = space.grid().nodes();
    let plus: Vec<C> = th.iter().map(|&t| smearing.frequency_part(C::new(t, 0.0), Frequency::Positive, mass)).collect();
    let minus: Vec<C> = th.iter().map(|&t| smearing.frequency_part(C::new(t, 0.0), Frequency::Negative, mass)).collect();
    let a = TruncatedFockOperator::creation(space, &plus);
    let b = TruncatedFockOperator::annihilation(space, &minus);
    a.add(&b).expect("same space")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::grid::RapidityGrid;
    use crate::geometry::Point2D;
    use crate::testfunctions::{BumpFunction, FourierConvention};

    fn space(n: usize, cap: usize) -> Arc<FockSpace> {
        Arc::new(FockSpace::new(RapidityGrid::gauss_legendre(n, 3.0), cap))
    }

    fn grid_fn(n: usize, s: f64) -> Vec<C> {
        (0..n).map(|i| C::new((i as f64 * s).sin(), (i as f64 * 0.3 + s).cos())).collect()
    }

    #[test]
    fn canonical_anticommutation() {
        let sp = space(6, 3);
        let g = grid_fn(6, 0.7);
        let h = grid_fn(6, 1.9);
        let zg = TruncatedFockOperator::annihilation(&sp, &g.iter().map(|v| v.conj()).collect::<Vec<_>>());
        let zh = TruncatedFockOperator::creation(&sp, &h);
        let ip: C = (0..6).map(|i| g[i].conj() * h[i] * sp.grid().weights()[i]).sum();
        let anti = zg.anticommutator(&zh).unwrap().restrict(2);
        let want = TruncatedFockOperator::projector(&sp, 2).scaled(ip);
        assert!(anti.sub(&want).unwrap().max_abs() < 1e-13);
        let cc = zh.anticommutator(&TruncatedFockOperator::creation(&sp, &g)).unwrap();
        assert!(cc.max_abs() < 1e-13);
    }

    #[test]
    fn adjoint_of_creation_is_annihilation_of_conjugate() {
        let sp = space(5, 2);
        let h = grid_fn(5, 0.4);
        let a = TruncatedFockOperator::creation(&sp, &h).adjoint();
        let b = TruncatedFockOperator::annihilation(&sp, &h.iter().map(|v| v.conj()).collect::<Vec<_>>());
        assert!(a.sub(&b).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn field_square_is_scalar() {
        let sp = space(8, 3);
        let b = BumpFunction::new(Point2D::new(0.0, -1.0), 0.3, 1.0).unwrap();
        let c = FourierCache::new(b, FourierConvention::default());
        let phi = field(&sp, &c, FieldKind::Left, 1.0);
        let sq = phi.compose(&phi).unwrap().restrict(2);
        let norm: f64 = sp
            .grid()
            .nodes()
            .iter()
            .zip(sp.grid().weights())
            .map(|(&t, &w)| w * c.frequency_part(C::new(t, 0.0), Frequency::Positive, 1.0).norm_sqr())
            .sum();
        let want = TruncatedFockOperator::projector(&sp, 2).scaled(C::new(norm, 0.0));
        assert!(sq.sub(&want).unwrap().max_abs() < 1e-14);
    }

    #[test]
    fn right_field_closed_form() {
        let sp = space(6, 3);
        let b = BumpFunction::new(Point2D::new(0.1, 1.0), 0.3, 1.0).unwrap();
        let c = FourierCache::new(b, FourierConvention::default());
        let right = field(&sp, &c, FieldKind::Right, 1.0);
        let th = sp.grid().nodes();
        let plus: Vec<C> = th.iter().map(|&t| c.frequency_part(C::new(t, 0.0), Frequency::Positive, 1.0)).collect();
        let minus: Vec<C> = th.iter().map(|&t| c.frequency_part(C::new(t, 0.0), Frequency::Negative, 1.0)).collect();
        let p = TruncatedFockOperator::parity(&sp);
        let want = TruncatedFockOperator::creation(&sp, &plus)
            .compose(&p)
            .unwrap()
            .add(&p.compose(&TruncatedFockOperator::annihilation(&sp, &minus)).unwrap())
            .unwrap();
        assert!(right.sub(&want).unwrap().max_abs() < 1e-14);
    }

    #[test]
    fn damping_eigenvalue() {
        let grid = RapidityGrid::gauss_legendre(3, 1.0);
        assert_eq!(grid.nodes()[1], 0.0);
        let sp = Arc::new(FockSpace::new(grid, 1));
        let d = TruncatedFockOperator::damping(&sp, &OmegaIndicatrix::log_power(1.0).unwrap()).unwrap();
        let m = 1u64 << 1;
        let v = d.block(1, 1).unwrap().get(sp.rank(m), sp.rank(m));
        assert!((v.re - 0.5).abs() < 1e-15);
    }

    #[test]
    fn csv_dump_has_header() {
        let sp = space(3, 1);
        let mut buf = Vec::new();
        TruncatedFockOperator::identity(&sp).write_csv(&mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.contains("# nodes="));
        assert_eq!(s.lines().filter(|l| !l.starts_with('#')).count(), 1 + 4);
    }
}
