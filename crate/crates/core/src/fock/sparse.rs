//! Compressed sparse row blocks with complex entries.

use num_complex::Complex64 as C;
use rayon::prelude::*;

#[derive(Clone, Debug, PartialEq)]
pub struct SparseBlock {
    rows: usize,
    cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<u32>,
    values: Vec<C>,
}

const PAR_ROWS: usize = 2048;

impl SparseBlock {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, row_ptr: vec![0; rows + 1], col_idx: Vec::new(), values: Vec::new() }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![C::new(1.0, 0.0); n])
    }

    pub fn diagonal(d: &[C]) -> Self {
        let n = d.len();
        let mut t = Vec::with_capacity(n);
        for (i, &v) in d.iter().enumerate() {
            t.push((i as u32, i as u32, v));
        }
        Self::from_triplets(n, n, t)
    }

    /// Sums duplicate entries and drops exact zeros.
    pub fn from_triplets(rows: usize, cols: usize, mut t: Vec<(u32, u32, C)>) -> Self {
        t.sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; rows + 1];
        let mut col_idx = Vec::with_capacity(t.len());
        let mut values: Vec<C> = Vec::with_capacity(t.len());
        let mut last: Option<(u32, u32)> = None;
        let mut row_of = Vec::with_capacity(t.len());
        for (r, c, v) in t {
            if last == Some((r, c)) {
                *values.last_mut().expect("entry present") += v;
            } else {
                col_idx.push(c);
                values.push(v);
                row_of.push(r);
                last = Some((r, c));
            }
        }
        let keep: Vec<bool> = values.iter().map(|v| *v != C::new(0.0, 0.0)).collect();
        let mut ci = Vec::with_capacity(col_idx.len());
        let mut vs = Vec::with_capacity(values.len());
        for (k, &ok) in keep.iter().enumerate() {
            if ok {
                row_ptr[row_of[k] as usize + 1] += 1;
                ci.push(col_idx[k]);
                vs.push(values[k]);
            }
        }
        for r in 0..rows {
            row_ptr[r + 1] += row_ptr[r];
        }
        Self { rows, cols, row_ptr, col_idx: ci, values: vs }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, C)> + '_ {
        (self.row_ptr[r]..self.row_ptr[r + 1]).map(move |k| (self.col_idx[k] as usize, self.values[k]))
    }

    pub fn get(&self, r: usize, c: usize) -> C {
        self.row(r).find(|&(j, _)| j == c).map_or(C::new(0.0, 0.0), |(_, v)| v)
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, C)> + '_ {
        (0..self.rows).flat_map(move |r| self.row(r).map(move |(c, v)| (r, c, v)))
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `y += alpha * M x`.
    pub fn matvec_acc(&self, x: &[C], y: &mut [C], alpha: C) {
        debug_assert_eq!(x.len(), self.cols);
        debug_assert_eq!(y.len(), self.rows);
        let row = |r: usize| {
            let mut s = C::new(0.0, 0.0);
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                s += self.values[k] * x[self.col_idx[k] as usize];
            }
            s
        };
        if self.rows >= PAR_ROWS {
            y.par_iter_mut().enumerate().for_each(|(r, yr)| *yr += alpha * row(r));
        } else {
            for (r, yr) in y.iter_mut().enumerate() {
                *yr += alpha * row(r);
            }
        }
    }

    pub fn scaled(&self, alpha: C) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= alpha);
        out
    }

    pub fn conj(&self) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v = v.conj());
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut counts = vec![0usize; self.cols + 1];
        for &c in &self.col_idx {
            counts[c as usize + 1] += 1;
        }
        for c in 0..self.cols {
            counts[c + 1] += counts[c];
        }
        let mut next = counts.clone();
        let mut col_idx = vec![0u32; self.nnz()];
        let mut values = vec![C::new(0.0, 0.0); self.nnz()];
        for r in 0..self.rows {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                let c = self.col_idx[k] as usize;
                let dst = next[c];
                next[c] += 1;
                col_idx[dst] = r as u32;
                values[dst] = self.values[k].conj();
            }
        }
        Self { rows: self.cols, cols: self.rows, row_ptr: counts, col_idx, values }
    }

    /// `alpha * self + beta * other`.
    pub fn combine(&self, alpha: C, other: &Self, beta: C) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "block shapes differ");
        let mut t: Vec<(u32, u32, C)> = Vec::with_capacity(self.nnz() + other.nnz());
        t.extend(self.triplets().map(|(r, c, v)| (r as u32, c as u32, alpha * v)));
        t.extend(other.triplets().map(|(r, c, v)| (r as u32, c as u32, beta * v)));
        Self::from_triplets(self.rows, self.cols, t)
    }

    /// `self * other` by row-wise accumulation.
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let rows: Vec<Vec<(u32, C)>> = (0..self.rows)
            .into_par_iter()
            .map_init(
                || (vec![C::new(0.0, 0.0); other.cols], vec![false; other.cols], Vec::<u32>::new()),
                |(acc, seen, touched), r| {
                    for (k, a) in self.row(r) {
                        for (c, b) in other.row(k) {
                            if !seen[c] {
                                seen[c] = true;
                                touched.push(c as u32);
                            }
                            acc[c] += a * b;
                        }
                    }
                    touched.sort_unstable();
                    let out: Vec<(u32, C)> = touched.iter().map(|&c| (c, acc[c as usize])).filter(|(_, v)| *v != C::new(0.0, 0.0)).collect();
                    for &c in touched.iter() {
                        acc[c as usize] = C::new(0.0, 0.0);
                        seen[c as usize] = false;
                    }
                    touched.clear();
                    out
                },
            )
            .collect();
        let mut row_ptr = Vec::with_capacity(self.rows + 1);
        row_ptr.push(0);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        for r in rows {
            for (c, v) in r {
                col_idx.push(c);
                values.push(v);
            }
            row_ptr.push(col_idx.len());
        }
        Self { rows: self.rows, cols: other.cols, row_ptr, col_idx, values }
    }

    pub fn to_dense(&self) -> Vec<Vec<C>> {
        let mut d = vec![vec![C::new(0.0, 0.0); self.cols]; self.rows];
        for (r, c, v) in self.triplets() {
            d[r][c] = v;
        }
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(rows: usize, cols: usize, seed: u64) -> SparseBlock {
        let mut t = Vec::new();
        let mut s = seed;
        for r in 0..rows {
            for c in 0..cols {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                if (s >> 60) < 5 {
                    t.push((r as u32, c as u32, C::new((s >> 40) as f64 / 1e6, (s >> 48) as f64 / 1e5)));
                }
            }
        }
        SparseBlock::from_triplets(rows, cols, t)
    }

    #[test]
    fn products_match_dense() {
        let a = sample(7, 5, 1);
        let b = sample(5, 6, 2);
        let p = a.matmul(&b).to_dense();
        let (ad, bd) = (a.to_dense(), b.to_dense());
        for i in 0..7 {
            for j in 0..6 {
                let want: C = (0..5).map(|k| ad[i][k] * bd[k][j]).sum();
                assert!((p[i][j] - want).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn adjoint_and_matvec() {
        let a = sample(6, 4, 3);
        let h = a.adjoint();
        for (r, c, v) in a.triplets() {
            assert_eq!(h.get(c, r), v.conj());
        }
        let x: Vec<C> = (0..4).map(|i| C::new(i as f64, 1.0)).collect();
        let mut y = vec![C::new(0.0, 0.0); 6];
        a.matvec_acc(&x, &mut y, C::new(1.0, 0.0));
        let d = a.to_dense();
        for r in 0..6 {
            let want: C = (0..4).map(|k| d[r][k] * x[k]).sum();
            assert!((y[r] - want).norm() < 1e-12);
        }
    }

    #[test]
    fn duplicates_are_summed() {
        let b = SparseBlock::from_triplets(2, 2, vec![(0, 1, C::new(1.0, 0.0)), (0, 1, C::new(2.0, 0.0)), (1, 0, C::new(0.0, 0.0))]);
        assert_eq!(b.nnz(), 1);
        assert_eq!(b.get(0, 1), C::new(3.0, 0.0));
    }
}
