//! Symmetric Laurent polynomials and towers of them.

use std::collections::BTreeMap;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{LogComplex, Real};

/// `Σ c_e Σ_{distinct permutations σ} x^{σ(e)}`; stored fully expanded.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricLaurentPolynomial<T> {
    nvars: usize,
    monomials: Vec<(Vec<i32>, Complex<T>)>,
}

impl<T: Real> SymmetricLaurentPolynomial<T> {
    /// Symmetrises each `(exponents, coefficient)` pair over the distinct
    /// permutations of its exponent vector.
    pub fn new(nvars: usize, terms: &[(Vec<i32>, Complex<T>)]) -> Result<Self> {
        let mut acc: BTreeMap<Vec<i32>, Complex<T>> = BTreeMap::new();
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::InvalidParameter(format!(
                    "exponent vector of length {} for {nvars} variables",
                    e.len()
                )));
            }
            for perm in distinct_permutations(e) {
                *acc.entry(perm).or_insert_with(|| Complex::new(T::zero(), T::zero())) += *c;
            }
        }
        let monomials = acc.into_iter().filter(|(_, c)| c.norm() != T::zero()).collect();
        Ok(Self { nvars, monomials })
    }

    pub fn constant(nvars: usize, c: Complex<T>) -> Self {
        Self::new(nvars, &[(vec![0; nvars], c)]).expect("constant polynomial")
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn monomials(&self) -> &[(Vec<i32>, Complex<T>)] {
        &self.monomials
    }

    pub fn max_abs_exponent(&self) -> i32 {
        self.monomials.iter().flat_map(|(e, _)| e.iter().map(|v| v.abs())).max().unwrap_or(0)
    }

    pub fn eval(&self, x: &[Complex<T>]) -> Result<Complex<T>> {
        check_len(self.nvars, x.len())?;
        if x.iter().any(|v| v.norm() == T::zero()) {
            return Err(Error::ZeroArgument);
        }
        let logs: Vec<Complex<T>> = x.iter().map(|v| v.ln()).collect();
        Ok(self.eval_log(&logs).to_complex())
    }

    /// `P(e^ζ)`.
    pub fn eval_exp(&self, zeta: &[Complex<T>]) -> Complex<T> {
        self.eval_log(zeta).to_complex()
    }

    /// `P(e^ζ)` with the dominant exponential factored out.
    pub fn eval_log(&self, zeta: &[Complex<T>]) -> LogComplex<T> {
        assert_eq!(zeta.len(), self.nvars, "argument length");
        let exps: Vec<Complex<T>> = self.monomials.iter().map(|(e, _)| dot(e, zeta)).collect();
        let shift = exps.iter().map(|a| a.re).fold(T::neg_infinity(), T::max);
        if shift == T::neg_infinity() {
            return LogComplex::zero();
        }
        let mut s = Complex::new(T::zero(), T::zero());
        for ((_, c), a) in self.monomials.iter().zip(&exps) {
            s += *c * (*a - Complex::new(shift, T::zero())).exp();
        }
        LogComplex::from_complex(s).mul_exp(shift)
    }

    /// `Σ |c| |e^{e·ζ}|`, a cancellation-free magnitude scale.
    pub fn abs_scale(&self, zeta: &[Complex<T>]) -> T {
        self.monomials.iter().map(|(e, c)| c.norm() * dot(e, zeta).re.exp()).fold(T::zero(), |a, b| a + b)
    }
}

fn check_len(want: usize, got: usize) -> Result<()> {
    if want != got {
        return Err(Error::InvalidParameter(format!("expected {want} variables, got {got}")));
    }
    Ok(())
}

fn dot<T: Real>(e: &[i32], zeta: &[Complex<T>]) -> Complex<T> {
    e.iter().zip(zeta).fold(Complex::new(T::zero(), T::zero()), |acc, (&k, z)| acc + *z * T::lit(k as f64))
}

/// Distinct permutations in lexicographic order.
fn distinct_permutations(e: &[i32]) -> Vec<Vec<i32>> {
    let mut cur = e.to_vec();
    cur.sort_unstable();
    let mut out = vec![cur.clone()];
    loop {
        let n = cur.len();
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else { break };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).expect("successor exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
    out
}

/// A family `P_n` of symmetric Laurent polynomials indexed by the number of
/// variables.
pub trait SymmetricTower<T: Real>: Send + Sync {
    /// `P_n(e^ζ)` with `n = ζ.len()`, in log form.
    fn eval_log(&self, zeta: &[Complex<T>]) -> LogComplex<T>;

    fn eval_exp(&self, zeta: &[Complex<T>]) -> Complex<T> {
        self.eval_log(zeta).to_complex()
    }

    fn eval(&self, x: &[Complex<T>]) -> Result<Complex<T>> {
        if x.iter().any(|v| v.norm() == T::zero()) {
            return Err(Error::ZeroArgument);
        }
        let logs: Vec<Complex<T>> = x.iter().map(|v| v.ln()).collect();
        Ok(self.eval_log(&logs).to_complex())
    }

    /// Cancellation-free magnitude scale of `P_n(e^ζ)`.
    fn abs_scale(&self, zeta: &[Complex<T>]) -> T;
}

/// Power sums `P_n(x) = Σ_ℓ x_ℓ^e`. Odd `e` gives the descent property
/// `P_{n+2}(p, -p, x) = P_n(x)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct PowerSumTower {
    exponent: i32,
}

impl PowerSumTower {
    /// Odd power sums with exponent `2s + 1`.
    pub fn odd(s: i32) -> Self {
        Self { exponent: 2 * s + 1 }
    }

    pub fn with_exponent(exponent: i32) -> Self {
        Self { exponent }
    }

    pub fn exponent(&self) -> i32 {
        self.exponent
    }

    pub fn is_odd(&self) -> bool {
        self.exponent % 2 != 0
    }

    pub fn member<T: Real>(&self, nvars: usize) -> SymmetricLaurentPolynomial<T> {
        let mut e = vec![0; nvars];
        if nvars > 0 {
            e[0] = self.exponent;
        }
        SymmetricLaurentPolynomial::new(nvars, &[(e, Complex::new(T::one(), T::zero()))]).expect("power sum")
    }
}

impl<T: Real> SymmetricTower<T> for PowerSumTower {
    fn eval_log(&self, zeta: &[Complex<T>]) -> LogComplex<T> {
        let e = T::lit(self.exponent as f64);
        let shift = zeta.iter().map(|z| z.re * e).fold(T::neg_infinity(), T::max);
        if shift == T::neg_infinity() {
            return LogComplex::zero();
        }
        let s = zeta.iter().fold(Complex::new(T::zero(), T::zero()), |acc, z| {
            acc + (*z * e - Complex::new(shift, T::zero())).exp()
        });
        LogComplex::from_complex(s).mul_exp(shift)
    }

    fn abs_scale(&self, zeta: &[Complex<T>]) -> T {
        let e = T::lit(self.exponent as f64);
        zeta.iter().map(|z| (z.re * e).exp()).fold(T::zero(), |a, b| a + b)
    }
}

/// Tower given member by member.
#[derive(Clone, Debug, Default)]
pub struct ExplicitTower<T> {
    members: BTreeMap<usize, SymmetricLaurentPolynomial<T>>,
}

impl<T: Real> ExplicitTower<T> {
    pub fn new(members: impl IntoIterator<Item = SymmetricLaurentPolynomial<T>>) -> Self {
        Self { members: members.into_iter().map(|p| (p.nvars(), p)).collect() }
    }
}

impl<T: Real> SymmetricTower<T> for ExplicitTower<T> {
    fn eval_log(&self, zeta: &[Complex<T>]) -> LogComplex<T> {
        match self.members.get(&zeta.len()) {
            Some(p) => p.eval_log(zeta),
            None => LogComplex::zero(),
        }
    }

    fn abs_scale(&self, zeta: &[Complex<T>]) -> T {
        self.members.get(&zeta.len()).map_or(T::zero(), |p| p.abs_scale(zeta))
    }
}

/// `|P_{2j+1}(p, -p, x) - P_{2j-1}(x)|` for `x` of length `2j - 1`.
pub fn descent_check<T: Real>(tower: &dyn SymmetricTower<T>, p: Complex<T>, x: &[Complex<T>]) -> Result<T> {
    if x.len().is_multiple_of(2) {
        return Err(Error::InvalidParameter("descent base tuple must have odd length".into()));
    }
    let mut full = vec![p, -p];
    full.extend_from_slice(x);
    let top = tower.eval(&full)?;
    let base = tower.eval(x)?;
    Ok((top - base).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn orbit_enumeration() {
        assert_eq!(distinct_permutations(&[1, 0, 0]).len(), 3);
        assert_eq!(distinct_permutations(&[2, 1, 0]).len(), 6);
        assert_eq!(distinct_permutations(&[5, 5]).len(), 1);
    }

    #[test]
    fn symmetrisation_is_symmetric() {
        let p = SymmetricLaurentPolynomial::new(3, &[(vec![2, -1, 0], c(0.5, 1.0)), (vec![1, 1, 0], c(-2.0, 0.0))]).unwrap();
        let x = [c(0.3, 0.4), c(-1.2, 0.1), c(0.7, -0.9)];
        let v = p.eval(&x).unwrap();
        for perm in [[0, 2, 1], [1, 0, 2], [2, 1, 0], [1, 2, 0]] {
            let y: Vec<_> = perm.iter().map(|&i| x[i]).collect();
            assert!((p.eval(&y).unwrap() - v).norm() < 1e-13);
        }
    }

    #[test]
    fn zero_argument_rejected() {
        let p = SymmetricLaurentPolynomial::<f64>::constant(2, c(1.0, 0.0));
        assert_eq!(p.eval(&[c(0.0, 0.0), c(1.0, 0.0)]), Err(Error::ZeroArgument));
    }

    #[test]
    fn exp_and_direct_evaluation_agree() {
        let p = SymmetricLaurentPolynomial::new(2, &[(vec![3, -2], c(1.0, -1.0))]).unwrap();
        let z = [c(0.3, 0.2), c(-0.4, 1.1)];
        let x: Vec<_> = z.iter().map(|v| v.exp()).collect();
        assert!((p.eval(&x).unwrap() - p.eval_exp(&z)).norm() < 1e-13);
    }

    #[test]
    fn even_power_sums_do_not_descend() {
        let t = PowerSumTower::with_exponent(2);
        let p = c(0.7, 0.2);
        let r = descent_check::<f64>(&t, p, &[c(1.1, 0.0)]).unwrap();
        assert!((r - 2.0 * p.norm_sqr()).abs() < 1e-13);
    }

    #[test]
    fn explicit_tower_matches_power_sums() {
        let ps = PowerSumTower::odd(1);
        let tower = ExplicitTower::new((1..=5).map(|n| ps.member::<f64>(n)));
        let z = [c(0.1, 0.2), c(-0.3, 0.0), c(0.5, -1.0)];
        assert!((tower.eval_exp(&z) - ps.eval_exp(&z)).norm() < 1e-13);
    }

    proptest! {
        #[test]
        fn odd_power_sums_descend(s in -2i32..3, pr in -2.0..2.0_f64, pi in -2.0..2.0_f64,
                                   a in 0.2..2.0_f64, b in -3.0..3.0_f64, j in 1usize..4) {
            let t = PowerSumTower::odd(s);
            let x: Vec<_> = (0..2 * j - 1).map(|k| Complex::from_polar(a + 0.1 * k as f64, b + k as f64)).collect();
            let p = c(pr, pi);
            prop_assume!(p.norm() > 0.1);
            let scale = p.norm().powi(2 * s + 1).max(p.norm().powi(-(2 * s + 1))) + t.abs_scale(&x.iter().map(|v| v.ln()).collect::<Vec<_>>());
            let r = descent_check::<f64>(&t, p, &x).unwrap();
            prop_assert!(r <= 1e-12 * scale);
        }
    }
}
