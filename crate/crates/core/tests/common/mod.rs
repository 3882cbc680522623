//! Independent reference implementations shared by the integration tests.
#![allow(dead_code, clippy::needless_range_loop)]

use capa_link::linalg::ComplexMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn cgauss<R: Rng>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im) / 2f64.sqrt()
}

pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| cgauss(rng))
}

/// Haar-like unitary from modified Gram–Schmidt on a Gaussian matrix.
pub fn random_unitary<R: Rng>(rng: &mut R, n: usize) -> ComplexMatrix {
    let a = random_matrix(rng, n, n);
    let mut cols: Vec<Vec<Complex64>> = (0..n)
        .map(|c| (0..n).map(|r| a[(r, c)]).collect())
        .collect();
    for j in 0..n {
        for k in 0..j {
            let proj: Complex64 = (0..n).map(|r| cols[k][r].conj() * cols[j][r]).sum();
            for r in 0..n {
                let v = cols[k][r];
                cols[j][r] -= proj * v;
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols[j].iter_mut().for_each(|z| *z /= norm);
    }
    ComplexMatrix::from_fn(n, n, |r, c| cols[c][r])
}

pub fn random_qpsk<R: Rng>(rng: &mut R, n: usize, symbol_power: f64) -> (Vec<u8>, Vec<Complex64>) {
    let bits: Vec<u8> = (0..2 * n).map(|_| rng.random_range(0..=1u8)).collect();
    let q = (symbol_power / 2.0).sqrt();
    let syms = bits
        .chunks(2)
        .map(|b| {
            Complex64::new(
                if b[0] == 0 { q } else { -q },
                if b[1] == 0 { q } else { -q },
            )
        })
        .collect();
    (bits, syms)
}

pub fn add_noise<R: Rng>(rng: &mut R, y: &mut [Complex64], noise_variance: f64) {
    for v in y {
        *v += cgauss(rng) * noise_variance.sqrt();
    }
}

pub fn bit_errors(est: &[Complex64], bits: &[u8]) -> usize {
    est.iter()
        .zip(bits.chunks(2))
        .map(|(s, b)| ((s.re < 0.0) as u8 != b[0]) as usize + ((s.im < 0.0) as u8 != b[1]) as usize)
        .sum()
}

/// Textbook LMMSE: forms `E_C H Hᴴ + σ² I` in full, inverts it by
/// Gauss–Jordan elimination with partial pivoting, then applies
/// `E_C Hᴴ (·)⁻¹ y`. Cubic cost with no structure exploited.
pub fn naive_lmmse(
    y: &[Complex64],
    h: &ComplexMatrix,
    noise_variance: f64,
    symbol_power: f64,
) -> Vec<Complex64> {
    let n = h.rows();
    let m = h.cols();
    let mut a = vec![vec![Complex64::new(0.0, 0.0); 2 * n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut s = Complex64::new(0.0, 0.0);
            for k in 0..m {
                s += h[(i, k)] * h[(j, k)].conj();
            }
            a[i][j] = s * symbol_power;
        }
        a[i][i] += noise_variance;
        a[i][n + i] = Complex64::new(1.0, 0.0);
    }
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&p, &q| a[p][col].norm().partial_cmp(&a[q][col].norm()).unwrap())
            .unwrap();
        a.swap(col, pivot);
        let inv = 1.0 / a[col][col];
        for v in a[col].iter_mut() {
            *v *= inv;
        }
        for r in 0..n {
            if r != col {
                let f = a[r][col];
                if f != Complex64::new(0.0, 0.0) {
                    for c in 0..2 * n {
                        let t = a[col][c];
                        a[r][c] -= f * t;
                    }
                }
            }
        }
    }
    let z: Vec<Complex64> = (0..n)
        .map(|i| (0..n).map(|j| a[i][n + j] * y[j]).sum())
        .collect();
    (0..m)
        .map(|k| (0..n).map(|i| h[(i, k)].conj() * z[i]).sum::<Complex64>() * symbol_power)
        .collect()
}

/// Brute-force ML over all QPSK vectors, recomputing the residual from scratch.
pub fn brute_force_ml(y: &[Complex64], h: &ComplexMatrix, symbol_power: f64) -> Vec<Complex64> {
    let m = h.cols();
    let q = (symbol_power / 2.0).sqrt();
    let mut best = (f64::INFINITY, vec![]);
    for idx in 0..4usize.pow(m as u32) {
        let c: Vec<Complex64> = (0..m)
            .map(|k| {
                let d = (idx >> (2 * k)) & 3;
                Complex64::new(
                    if d & 1 == 0 { q } else { -q },
                    if d & 2 == 0 { q } else { -q },
                )
            })
            .collect();
        let cost: f64 = (0..h.rows())
            .map(|r| (y[r] - (0..m).map(|k| h[(r, k)] * c[k]).sum::<Complex64>()).norm_sqr())
            .sum();
        if cost < best.0 {
            best = (cost, c);
        }
    }
    best.1
}

/// Plain `(re, im)` arithmetic so the oracle shares no code with the library.
pub type Pair = (f64, f64);

fn mul(a: Pair, b: Pair) -> Pair {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}
fn conj(a: Pair) -> Pair {
    (a.0, -a.1)
}
fn abs2(a: Pair) -> f64 {
    a.0 * a.0 + a.1 * a.1
}

/// Messages of one iteration of the scalar oracle.
#[derive(Debug, Clone)]
pub struct ScalarIteration {
    pub sic: [[Pair; 2]; 2],
    pub sic_var: [[f64; 2]; 2],
    pub belief: [[Pair; 2]; 2],
    pub belief_var: [[f64; 2]; 2],
    pub replica: [[Pair; 2]; 2],
    pub replica_var: [[f64; 2]; 2],
}

/// 2×2 GaBP written out edge by edge with explicit exclusion sums.
pub fn scalar_gabp_2x2(
    y: [Pair; 2],
    h: [[Pair; 2]; 2],
    noise: f64,
    e_c: f64,
    beta: f64,
    iterations: usize,
) -> (Vec<ScalarIteration>, [Pair; 2]) {
    let q = (e_c / 2.0).sqrt();
    let mut c = [[(0.0, 0.0); 2]; 2];
    let mut v = [[e_c; 2]; 2];
    let mut out = Vec::new();
    let sic_of = |c: &[[Pair; 2]; 2], v: &[[f64; 2]; 2]| {
        let mut s = [[(0.0, 0.0); 2]; 2];
        let mut sv = [[0.0; 2]; 2];
        for n in 0..2 {
            for m in 0..2 {
                let e = 1 - m;
                let hc = mul(h[n][e], c[n][e]);
                s[n][m] = (y[n].0 - hc.0, y[n].1 - hc.1);
                sv[n][m] = abs2(h[n][e]) * v[n][e] + noise;
            }
        }
        (s, sv)
    };
    for _ in 0..iterations {
        let (s, sv) = sic_of(&c, &v);
        let mut b = [[(0.0, 0.0); 2]; 2];
        let mut bv = [[0.0; 2]; 2];
        let mut nc = c;
        let mut nv = v;
        for n in 0..2 {
            for m in 0..2 {
                let e = 1 - n;
                let prec = abs2(h[e][m]) / sv[e][m];
                let var = 1.0 / prec;
                let num = mul(conj(h[e][m]), s[e][m]);
                b[n][m] = (num.0 / sv[e][m] * var, num.1 / sv[e][m] * var);
                bv[n][m] = var;
                let fresh = (
                    q * (2.0 * q * b[n][m].0 / var).tanh(),
                    q * (2.0 * q * b[n][m].1 / var).tanh(),
                );
                let mse = e_c - abs2(fresh);
                nc[n][m] = (
                    beta * fresh.0 + (1.0 - beta) * c[n][m].0,
                    beta * fresh.1 + (1.0 - beta) * c[n][m].1,
                );
                nv[n][m] = beta * mse + (1.0 - beta) * v[n][m];
            }
        }
        c = nc;
        v = nv;
        out.push(ScalarIteration {
            sic: s,
            sic_var: sv,
            belief: b,
            belief_var: bv,
            replica: c,
            replica_var: v,
        });
    }
    let (s, sv) = sic_of(&c, &v);
    let mut est = [(0.0, 0.0); 2];
    for m in 0..2 {
        let mut prec = 0.0;
        let mut acc = (0.0, 0.0);
        for n in 0..2 {
            prec += abs2(h[n][m]) / sv[n][m];
            let t = mul(conj(h[n][m]), s[n][m]);
            acc = (acc.0 + t.0 / sv[n][m], acc.1 + t.1 / sv[n][m]);
        }
        est[m] = (acc.0 / prec, acc.1 / prec);
    }
    (out, est)
}
