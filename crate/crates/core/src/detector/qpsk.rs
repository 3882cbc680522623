//! Gray-mapped QPSK and the scalar pieces of the message-passing detector.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Result, SimError};

/// Per-component amplitude `q_x = √(E_C/2)`.
#[inline]
pub fn qpsk_amplitude(symbol_power: f64) -> f64 {
    (symbol_power / 2.0).sqrt()
}

/// Bit pair `(b0, b1)` maps to `q_x((1 - 2 b0) + j(1 - 2 b1))`.
pub fn qpsk_map(bits: &[u8], symbol_power: f64) -> Result<Vec<Complex64>> {
    if !bits.len().is_multiple_of(2) {
        return Err(SimError::InvalidInput(format!(
            "QPSK mapping needs an even bit count, got {}",
            bits.len()
        )));
    }
    if let Some(b) = bits.iter().find(|&&b| b > 1) {
        return Err(SimError::InvalidInput(format!(
            "bit value {b} is not 0 or 1"
        )));
    }
    let q = qpsk_amplitude(symbol_power);
    Ok(bits
        .chunks_exact(2)
        .map(|p| Complex64::new(q * (1.0 - 2.0 * p[0] as f64), q * (1.0 - 2.0 * p[1] as f64)))
        .collect())
}

/// Sign decisions back to bits. A component of exactly zero decodes as 0.
pub fn qpsk_demap(symbols: &[Complex64]) -> Vec<u8> {
    symbols
        .iter()
        .flat_map(|s| [(s.re < 0.0) as u8, (s.im < 0.0) as u8])
        .collect()
}

pub fn hard_decision(symbols: &[Complex64], symbol_power: f64) -> Vec<Complex64> {
    let q = qpsk_amplitude(symbol_power);
    symbols
        .iter()
        .map(|s| {
            Complex64::new(
                if s.re < 0.0 { -q } else { q },
                if s.im < 0.0 { -q } else { q },
            )
        })
        .collect()
}

/// Bayes-optimal QPSK denoiser for a Gaussian belief with mean `belief`
/// and variance `belief_var`.
#[inline]
pub fn qpsk_denoise(belief: Complex64, belief_var: f64, symbol_power: f64) -> Complex64 {
    let q = qpsk_amplitude(symbol_power);
    let scale = 2.0 * q / belief_var;
    Complex64::new(
        q * (scale * belief.re).tanh(),
        q * (scale * belief.im).tanh(),
    )
}

/// MSE of a soft replica: `E_C − |ĉ|²`.
#[inline]
pub fn mse_update(replica: Complex64, symbol_power: f64) -> f64 {
    (symbol_power - replica.norm_sqr()).max(0.0)
}

/// Convex blend `β·new + (1 − β)·old`, evaluated as `old + β(new − old)`
/// so that `new == old` returns `old` exactly.
#[inline]
pub fn damp<T>(new: T, old: T, beta: f64) -> T
where
    T: Mul<f64, Output = T> + Add<Output = T> + Sub<Output = T> + Copy,
{
    old + (new - old) * beta
}
