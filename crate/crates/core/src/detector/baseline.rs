//! Reference detectors: LMMSE and exhaustive maximum likelihood.

use num_complex::Complex64;

use super::qpsk::qpsk_amplitude;
use crate::error::{Result, SimError};
use crate::linalg::{hermitian_solve, ComplexMatrix};

/// Largest system the exhaustive search accepts (4^12 ≈ 1.7e7 candidates).
pub const ML_MAX_SYMBOLS: usize = 12;

/// `ĉ = E_C H̄ᴴ (E_C H̄ H̄ᴴ + σ² I)⁻¹ y`, solved with a dense Cholesky factorization.
pub fn lmmse_detect(
    y: &[Complex64],
    h: &ComplexMatrix,
    noise_variance: f64,
    symbol_power: f64,
) -> Result<Vec<Complex64>> {
    let n = h.rows();
    if y.len() != n {
        return Err(SimError::InvalidDimension(format!(
            "channel has {n} rows but observation has {} entries",
            y.len()
        )));
    }
    // Gram matrix: only the lower triangle is computed, then mirrored.
    let mut gram = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        let hi = h.row(i);
        for j in 0..=i {
            let s: Complex64 = hi.iter().zip(h.row(j)).map(|(a, b)| a * b.conj()).sum();
            let mut v = s * symbol_power;
            if i == j {
                v = Complex64::new(v.re + noise_variance, 0.0);
            }
            gram[(i, j)] = v;
            gram[(j, i)] = v.conj();
        }
    }
    let z = hermitian_solve(&gram, y)?;
    let mut out = vec![Complex64::new(0.0, 0.0); h.cols()];
    for (i, zi) in z.iter().enumerate() {
        for (o, hij) in out.iter_mut().zip(h.row(i)) {
            *o += hij.conj() * zi;
        }
    }
    for o in &mut out {
        *o *= symbol_power;
    }
    Ok(out)
}

/// Exhaustive search for the QPSK vector minimizing `‖y − H̄ c‖²`.
pub fn ml_oracle(y: &[Complex64], h: &ComplexMatrix, symbol_power: f64) -> Result<Vec<Complex64>> {
    let (rows, cols) = (h.rows(), h.cols());
    if y.len() != rows {
        return Err(SimError::InvalidDimension(
            "observation length mismatch".into(),
        ));
    }
    if cols > ML_MAX_SYMBOLS {
        return Err(SimError::TooLarge(format!(
            "exhaustive ML limited to {ML_MAX_SYMBOLS} symbols, got {cols}"
        )));
    }
    let q = qpsk_amplitude(symbol_power);
    let points = [
        Complex64::new(q, q),
        Complex64::new(q, -q),
        Complex64::new(-q, q),
        Complex64::new(-q, -q),
    ];
    // Residual is updated incrementally: r = y − H̄c, changing one symbol at
    // a time in odometer order.
    let mut digits = vec![0usize; cols];
    let mut residual: Vec<Complex64> = (0..rows)
        .map(|r| y[r] - h.row(r).iter().map(|hv| hv * points[0]).sum::<Complex64>())
        .collect();
    let mut best = residual.iter().map(|z| z.norm_sqr()).sum::<f64>();
    let mut best_digits = digits.clone();
    let total = 4usize.pow(cols as u32);
    for _ in 1..total {
        let mut k = 0;
        loop {
            let old = points[digits[k]];
            digits[k] = (digits[k] + 1) % 4;
            let delta = points[digits[k]] - old;
            for (r, res) in residual.iter_mut().enumerate() {
                *res -= h[(r, k)] * delta;
            }
            if digits[k] != 0 {
                break;
            }
            k += 1;
        }
        let cost: f64 = residual.iter().map(|z| z.norm_sqr()).sum();
        if cost < best {
            best = cost;
            best_digits.copy_from_slice(&digits);
        }
    }
    Ok(best_digits.iter().map(|&d| points[d]).collect())
}
