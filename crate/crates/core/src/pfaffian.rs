//! Pfaffians of antisymmetric complex matrices.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Dense row-major square matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SquareMatrix<T> {
    n: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> SquareMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![Complex::new(T::zero(), T::zero()); n * n] }
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> Complex<T>) -> Self {
        let data = (0..n * n).map(|k| f(k / n, k % n)).collect();
        Self { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex<T>) {
        self.data[i * self.n + j] = v;
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().map(|v| v.norm()).fold(T::zero(), T::max)
    }

    /// `max |M_ij + M_ji|`.
    pub fn antisymmetry_defect(&self) -> T {
        let mut d = T::zero();
        for i in 0..self.n {
            for j in i..self.n {
                d = d.max((self.get(i, j) + self.get(j, i)).norm());
            }
        }
        d
    }

    fn swap_rows_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let n = self.n;
        for j in 0..n {
            self.data.swap(a * n + j, b * n + j);
        }
        for i in 0..n {
            self.data.swap(i * n + a, i * n + b);
        }
    }
}

fn validate<T: Real>(m: &SquareMatrix<T>) -> Result<()> {
    if m.dim() % 2 == 1 {
        return Err(Error::OddDimension(m.dim()));
    }
    let defect = m.antisymmetry_defect();
    if defect > T::lit(1e-12) * m.max_abs().max(T::one()) {
        return Err(Error::NotAntisymmetric(defect.as_f64()));
    }
    Ok(())
}

/// Pfaffian by skew-symmetric `L T Lᵀ` elimination with partial pivoting.
pub fn pfaffian<T: Real>(m: &SquareMatrix<T>) -> Result<Complex<T>> {
    validate(m)?;
    let n = m.dim();
    let mut a = m.clone();
    let mut pf = Complex::new(T::one(), T::zero());
    let zero = Complex::new(T::zero(), T::zero());
    let mut k = 0;
    while k + 1 < n {
        let mut kp = k + 1;
        let mut best = a.get(k + 1, k).norm();
        for i in k + 2..n {
            let v = a.get(i, k).norm();
            if v > best {
                best = v;
                kp = i;
            }
        }
        if kp != k + 1 {
            a.swap_rows_cols(k + 1, kp);
            pf = -pf;
        }
        let pivot = a.get(k, k + 1);
        if pivot == zero {
            return Ok(zero);
        }
        pf *= pivot;
        if k + 2 < n {
            let tau: Vec<Complex<T>> = (k + 2..n).map(|j| a.get(k, j) / pivot).collect();
            let col: Vec<Complex<T>> = (k + 2..n).map(|i| a.get(i, k + 1)).collect();
            for (ii, i) in (k + 2..n).enumerate() {
                for (jj, j) in (k + 2..n).enumerate() {
                    let v = a.get(i, j) + tau[ii] * col[jj] - col[ii] * tau[jj];
                    a.set(i, j, v);
                }
            }
        }
        k += 2;
    }
    Ok(pf)
}

/// Pfaffian by expansion along the first row; exponential cost, for small
/// matrices and cross-checks.
pub fn pfaffian_expansion<T: Real>(m: &SquareMatrix<T>) -> Result<Complex<T>> {
    validate(m)?;
    let idx: Vec<usize> = (0..m.dim()).collect();
    Ok(expand(m, &idx))
}

fn expand<T: Real>(m: &SquareMatrix<T>, idx: &[usize]) -> Complex<T> {
    if idx.is_empty() {
        return Complex::new(T::one(), T::zero());
    }
    let mut s = Complex::new(T::zero(), T::zero());
    for j in 1..idx.len() {
        let rest: Vec<usize> = idx.iter().enumerate().filter(|&(k, _)| k != 0 && k != j).map(|(_, &v)| v).collect();
        let term = m.get(idx[0], idx[j]) * expand(m, &rest);
        if j % 2 == 1 {
            s += term;
        } else {
            s -= term;
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{RngExt, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_antisymmetric(n: usize, rng: &mut ChaCha8Rng) -> SquareMatrix<f64> {
        let mut m = SquareMatrix::zeros(n);
        for i in 0..n {
            for j in i + 1..n {
                let v = Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                m.set(i, j, v);
                m.set(j, i, -v);
            }
        }
        m
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    fn determinant(m: &SquareMatrix<f64>) -> Complex<f64> {
        let n = m.dim();
        let mut a: Vec<Vec<Complex<f64>>> = (0..n).map(|i| (0..n).map(|j| m.get(i, j)).collect()).collect();
        let mut det = Complex::new(1.0, 0.0);
        for k in 0..n {
            let p = (k..n).max_by(|&x, &y| a[x][k].norm().partial_cmp(&a[y][k].norm()).unwrap()).unwrap();
            if a[p][k].norm() == 0.0 {
                return Complex::new(0.0, 0.0);
            }
            if p != k {
                a.swap(p, k);
                det = -det;
            }
            det *= a[k][k];
            for i in k + 1..n {
                let f = a[i][k] / a[k][k];
                for j in k..n {
                    let v = a[k][j];
                    a[i][j] -= f * v;
                }
            }
        }
        det
    }

    #[test]
    fn two_by_two() {
        let m = SquareMatrix::from_fn(2, |i, j| match (i, j) {
            (0, 1) => Complex::new(2.5, -1.0),
            (1, 0) => Complex::new(-2.5, 1.0),
            _ => Complex::new(0.0, 0.0),
        });
        assert_eq!(pfaffian(&m).unwrap(), Complex::new(2.5, -1.0));
    }

    #[test]
    fn square_is_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [2, 4, 6, 8, 10] {
            for _ in 0..5 {
                let m = random_antisymmetric(n, &mut rng);
                let pf = pfaffian(&m).unwrap();
                let det = determinant(&m);
                assert!((pf * pf - det).norm() < 1e-12 * det.norm().max(1.0), "n={n}");
            }
        }
    }

    #[test]
    fn elimination_matches_expansion() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for n in [2, 4, 6, 8] {
            let m = random_antisymmetric(n, &mut rng);
            let a = pfaffian(&m).unwrap();
            let b = pfaffian_expansion(&m).unwrap();
            assert!((a - b).norm() < 1e-12 * b.norm().max(1.0));
        }
    }

    #[test]
    fn rejects_invalid_input() {
        let m = SquareMatrix::<f64>::zeros(3);
        assert_eq!(pfaffian(&m), Err(Error::OddDimension(3)));
        let mut m = SquareMatrix::<f64>::zeros(2);
        m.set(0, 1, Complex::new(1.0, 0.0));
        assert!(matches!(pfaffian(&m), Err(Error::NotAntisymmetric(_))));
    }

    #[test]
    fn single_precision() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let m = random_antisymmetric(6, &mut rng);
        let m32 = SquareMatrix::from_fn(6, |i, j| {
            let v = m.get(i, j);
            Complex::new(v.re as f32, v.im as f32)
        });
        let a = pfaffian(&m).unwrap();
        let b = pfaffian(&m32).unwrap();
        assert!(((b.re as f64) - a.re).abs() + ((b.im as f64) - a.im).abs() < 1e-4 * a.norm().max(1.0));
    }
}
