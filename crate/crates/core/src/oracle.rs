//! Brute-force reference implementations, independent of the production
//! code paths they are compared against.

use num_complex::Complex;

use crate::kinematics::total_momentum;
use crate::laurent::SymmetricLaurentPolynomial;
use crate::scalar::Real;
use crate::testfunctions::FourierCache;

/// All permutations of `0..n` with their signs (Heap's algorithm).
pub fn signed_permutations(n: usize) -> Vec<(Vec<usize>, i8)> {
    let mut a: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    let mut sign = 1i8;
    let mut out = vec![(a.clone(), sign)];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            sign = -sign;
            out.push((a.clone(), sign));
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// `Σ_σ sign σ Π_j sinh((ζ_{σ(2j-1)} - ζ_{σ(2j)})/2)` summed term by term,
/// together with the sum of the absolute values of the terms.
pub fn sinh_permutation_sum<T: Real>(zeta: &[Complex<T>]) -> (Complex<T>, T) {
    let n = zeta.len();
    let half = T::lit(0.5);
    let mut s = Complex::new(T::zero(), T::zero());
    let mut abs = T::zero();
    for (p, sign) in signed_permutations(n) {
        let mut term = Complex::new(T::lit(sign as f64), T::zero());
        for j in 0..n / 2 {
            term *= ((zeta[p[2 * j]] - zeta[p[2 * j + 1]]) * half).sinh();
        }
        abs += term.norm();
        s += term;
    }
    (s, abs)
}

/// Even-family form factor by the permutation sum.
pub fn even_form_factor<T: Real>(
    smearing: &FourierCache<T>,
    poly: &SymmetricLaurentPolynomial<T>,
    zeta: &[Complex<T>],
    mass: T,
) -> (Complex<T>, T) {
    let g = smearing.bump().fourier_transform(&total_momentum(zeta, mass), smearing.convention());
    let p = poly.eval_exp(zeta);
    let (s, abs) = sinh_permutation_sum(zeta);
    (g * p * s, g.norm() * p.norm() * abs)
}

/// Dense matrix in the occupation basis of a truncated Fock space, sectors
/// concatenated in order.
pub type Dense = Vec<Vec<Complex<f64>>>;

fn dense_zero(n: usize) -> Dense {
    vec![vec![Complex::new(0.0, 0.0); n]; n]
}

fn dense_mul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    let mut c = dense_zero(n);
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == Complex::new(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                c[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    c
}

/// Orthonormal-mode annihilators `c_i` on all occupation masks with at most
/// `cap` particles, built from the definition `c_i |S⟩ = (-1)^{#s<i} |S\i⟩`.
pub fn dense_annihilators(modes: usize, cap: usize) -> (Vec<u64>, Vec<Dense>) {
    let mut states: Vec<u64> = (0u64..(1u64 << modes)).filter(|m| (m.count_ones() as usize) <= cap).collect();
    states.sort_by_key(|&m| {
        let mut idx: Vec<usize> = (0..modes).filter(|&i| m & (1 << i) != 0).collect();
        idx.insert(0, idx.len());
        idx
    });
    let pos = |m: u64| states.iter().position(|&s| s == m);
    let n = states.len();
    let ops = (0..modes)
        .map(|i| {
            let mut d = dense_zero(n);
            for (col, &s) in states.iter().enumerate() {
                if s & (1 << i) == 0 {
                    continue;
                }
                let below = (0..i).filter(|&b| s & (1 << b) != 0).count();
                let sign = if below % 2 == 0 { 1.0 } else { -1.0 };
                if let Some(row) = pos(s & !(1 << i)) {
                    d[row][col] = Complex::new(sign, 0.0);
                }
            }
            d
        })
        .collect();
    (states, ops)
}

fn dense_adjoint(a: &Dense) -> Dense {
    let n = a.len();
    let mut d = dense_zero(n);
    for i in 0..n {
        for j in 0..n {
            d[j][i] = a[i][j].conj();
        }
    }
    d
}

/// `Σ_{m,n} (1/m!n!) Σ_{all index tuples} Π w f_{m,n}(θ_I, θ_J) z†_{i_1}⋯z†_{i_m} z_{j_1}⋯z_{j_n}`
/// by explicit loops over unordered index tuples, with `z_i = c_i / √w_i`.
pub fn dense_observable(
    family: &crate::formfactors::FormFactorFamily<f64>,
    nodes: &[f64],
    weights: &[f64],
    cap: usize,
    max_creators: usize,
    max_annihilators: usize,
    presc: &crate::formfactors::BoundaryPrescription<f64>,
) -> crate::error::Result<Dense> {
    let modes = nodes.len();
    let (states, c) = dense_annihilators(modes, cap);
    let dim = states.len();
    let z: Vec<Dense> = c
        .iter()
        .enumerate()
        .map(|(i, m)| m.iter().map(|row| row.iter().map(|v| v / weights[i].sqrt()).collect()).collect())
        .collect();
    let zd: Vec<Dense> = z.iter().map(dense_adjoint).collect();
    let mut total = dense_zero(dim);
    for m in 0..=max_creators {
        for n in 0..=max_annihilators {
            if !family.supports_length(m + n) {
                continue;
            }
            let fact = (1..=m).product::<usize>() as f64 * (1..=n).product::<usize>() as f64;
            for flat in 0..modes.pow((m + n) as u32) {
                let mut digits = Vec::with_capacity(m + n);
                let mut r = flat;
                for _ in 0..m + n {
                    digits.push(r % modes);
                    r /= modes;
                }
                let (ii, jj) = digits.split_at(m);
                let theta: Vec<f64> = ii.iter().map(|&a| nodes[a]).collect();
                let eta: Vec<f64> = jj.iter().map(|&b| nodes[b]).collect();
                let w: f64 = digits.iter().map(|&a| weights[a]).product();
                let f = family.boundary_coefficient(&theta, &eta, presc)?.value * (w / fact);
                if f == Complex::new(0.0, 0.0) {
                    continue;
                }
                let mut prod: Dense = (0..dim).map(|a| (0..dim).map(|b| Complex::new(if a == b { 1.0 } else { 0.0 }, 0.0)).collect()).collect();
                for &a in ii {
                    prod = dense_mul(&prod, &zd[a]);
                }
                for &b in jj {
                    prod = dense_mul(&prod, &z[b]);
                }
                for a in 0..dim {
                    for b in 0..dim {
                        total[a][b] += prod[a][b] * f;
                    }
                }
            }
        }
    }
    Ok(total)
}
